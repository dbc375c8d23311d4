//! Closed-form regret bound evaluators. Natural logarithms throughout.

use std::fmt;
use std::str::FromStr;

use crate::env::{analyze, GapProfile, PreferenceMatrix};
use crate::graph::CliqueAnalytics;
use crate::{Error, Result};

/// Bernoulli KL divergence `KL(p, q)` with `0 ln 0 = 0`.
///
/// Returns `+inf` when `q` is 0 or 1 and `p != q`.
pub fn kl_bernoulli(p: f64, q: f64) -> f64 {
    fn term(a: f64, b: f64) -> f64 {
        if a == 0.0 {
            0.0
        } else if b == 0.0 {
            f64::INFINITY
        } else {
            a * (a / b).ln()
        }
    }
    if p == q {
        return 0.0;
    }
    (term(p, q) + term(1.0 - p, 1.0 - q)).max(0.0)
}

/// Coefficient of `ln T` in the asymptotic group-regret lower bound:
/// `sum_{i != cw} min_{j in O_i} (Δ_i + Δ_j) / (2 KL(q_ij, 1/2))`.
pub fn lower_bound_coefficient(q: &PreferenceMatrix) -> Result<f64> {
    let analysis = analyze(q);
    let gaps = analysis.require_gaps()?;
    let mut total = 0.0;
    for (i, superiors) in analysis.condorcet.superiors.iter().enumerate() {
        if i == gaps.cw {
            continue;
        }
        total += superiors
            .iter()
            .map(|&j| (gaps.delta[i] + gaps.delta[j]) / (2.0 * kl_bernoulli(q.get(i, j), 0.5)))
            .fold(f64::INFINITY, f64::min);
    }
    Ok(total)
}

fn exponent(alpha: f64) -> Result<f64> {
    if !(alpha > 1.2) {
        return Err(Error::BadAlpha {
            alpha,
            requirement: "alpha > 1.2",
        });
    }
    Ok(1.0 / (1.7 * alpha - 1.4))
}

fn delay_base(m: usize, k: usize, d_max: usize) -> f64 {
    4.0 * m as f64 * (k * k) as f64 * (3.0 + 2.0 * (d_max as f64 + 1.0).ln())
}

/// High-probability burn-in `C(δ)` after which every player's UCB matrix is
/// optimistic for the Condorcet winner.
pub fn c_delta(m: usize, k: usize, d_max: usize, alpha: f64, delta: f64) -> Result<f64> {
    let e = exponent(alpha)?;
    if !(delta > 0.0) {
        return Err(Error::Config(format!("delta must be positive (got {delta})")));
    }
    Ok((delay_base(m, k, d_max) / delta).powf(e))
}

/// Expected burn-in `C̃`; requires `1.7α > 2.4` so the prefactor is positive.
pub fn c_tilde(m: usize, k: usize, d_max: usize, alpha: f64) -> Result<f64> {
    if !(1.7 * alpha > 2.4) {
        return Err(Error::BadAlpha {
            alpha,
            requirement: "alpha > 24/17",
        });
    }
    let e = exponent(alpha)?;
    Ok((1.7 * alpha - 2.4) / (1.7 * alpha - 1.4) * delay_base(m, k, d_max).powf(e))
}

/// `𝒟 = sum_{i<j} 4α / Δ̄_ij²` where `Δ̄_ij = min(Δ_i, Δ_j)` away from the
/// Condorcet winner and `Δ̄_{cw,i} = Δ_i`.
pub fn d_script(gaps: &GapProfile, alpha: f64) -> f64 {
    let k = gaps.delta.len();
    let mut total = 0.0;
    for i in 0..k {
        for j in i + 1..k {
            let bar = if i == gaps.cw {
                gaps.delta[j]
            } else if j == gaps.cw {
                gaps.delta[i]
            } else {
                gaps.delta[i].min(gaps.delta[j])
            };
            total += 4.0 * alpha / (bar * bar);
        }
    }
    total
}

fn inverse_gap_sum(gaps: &GapProfile) -> f64 {
    (0..gaps.delta.len())
        .filter(|&i| i != gaps.cw)
        .map(|i| 1.0 / gaps.delta[i])
        .sum()
}

/// Message-passing RUCB bound `thm3_coeff · ln T + hat_c`.
#[derive(Debug, Clone, PartialEq)]
pub struct Thm3Terms {
    pub thm3_coeff: f64,
    pub c_tilde: f64,
    pub d_script: f64,
    pub hat_c: f64,
    pub chi: usize,
    /// `false` when the clique analytics were greedy bounds.
    pub exact_graph: bool,
}

impl Thm3Terms {
    pub fn value(&self, t: f64) -> f64 {
        self.thm3_coeff * t.ln() + self.hat_c
    }
}

pub fn thm3_bound(q: &PreferenceMatrix, graph: &CliqueAnalytics, alpha: f64) -> Result<Thm3Terms> {
    let analysis = analyze(q);
    let gaps = analysis.require_gaps()?;
    let k = q.k();
    let m = graph.largest_clique.len();
    let c_tilde = c_tilde(m, k, graph.d_max_gamma, alpha)?;
    let d = d_script(gaps, alpha);
    let k2 = (k * k) as f64;
    let per_player: f64 = graph
        .largest_clique
        .iter()
        .map(|sizes| {
            sizes
                .iter()
                .enumerate()
                .map(|(g, &size)| k2 * (g as f64 + 2.0) + 2.0 * d / size as f64 * (2.0 * d).ln())
                .fold(f64::INFINITY, f64::min)
        })
        .sum();
    let gamma = graph.gamma as f64;
    let hat_c = gaps.delta_max * per_player + (2.0 * c_tilde + k as f64 * (3.0 * gamma + 2.0)) * m as f64 * gaps.delta_max;
    Ok(Thm3Terms {
        thm3_coeff: 2.0 * alpha * graph.chi as f64 * inverse_gap_sum(gaps),
        c_tilde,
        d_script: d,
        hat_c,
        chi: graph.chi,
        exact_graph: graph.exact,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseKind {
    Rucb,
    Rmed2fh,
}

impl BaseKind {
    pub fn name(self) -> &'static str {
        match self {
            BaseKind::Rucb => "rucb",
            BaseKind::Rmed2fh => "rmed2fh",
        }
    }
}

impl fmt::Display for BaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BaseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rucb" => Ok(BaseKind::Rucb),
            "rmed2fh" => Ok(BaseKind::Rmed2fh),
            other => Err(Error::Config(format!("unknown base policy '{other}'"))),
        }
    }
}

/// Follow-your-leader bound `g + M Δmax f + M (T_LE + 2D) Δmax`.
///
/// `g = g_log · ln T + g_const`. For RMED2FH only the leading coefficient is
/// known numerically; `f` and the constant part of `g` are `None` and are
/// left out of [`FylTerms::value`].
#[derive(Debug, Clone, PartialEq)]
pub struct FylTerms {
    pub base: BaseKind,
    pub g_log: f64,
    pub g_const: Option<f64>,
    pub f_const: Option<f64>,
    pub overhead: f64,
    pub players: usize,
    pub delta_max: f64,
}

impl FylTerms {
    pub fn g(&self, t: f64) -> f64 {
        self.g_log * t.ln() + self.g_const.unwrap_or(0.0)
    }

    pub fn value(&self, t: f64) -> f64 {
        self.g(t) + self.players as f64 * self.delta_max * self.f_const.unwrap_or(0.0) + self.overhead
    }

    /// Orders of the terms that have no closed form.
    pub fn symbolic(&self) -> Option<&'static str> {
        match self.base {
            BaseKind::Rucb => None,
            BaseKind::Rmed2fh => Some("f = O(K^(2+eps)), g constant = O(K^(2+eps))"),
        }
    }
}

pub fn fyl_bound_terms(
    q: &PreferenceMatrix,
    players: usize,
    diameter: usize,
    t_le: u64,
    alpha: f64,
    base: BaseKind,
) -> Result<FylTerms> {
    let analysis = analyze(q);
    let gaps = analysis.require_gaps()?;
    let overhead = players as f64 * (t_le as f64 + 2.0 * diameter as f64) * gaps.delta_max;
    let (g_log, g_const, f_const) = match base {
        BaseKind::Rucb => {
            if !(alpha > 1.0) {
                return Err(Error::BadAlpha {
                    alpha,
                    requirement: "alpha > 1",
                });
            }
            let d = d_script(gaps, alpha);
            let k2 = (q.k() * q.k()) as f64;
            let f = 2.0 * d * (2.0 * d).ln()
                + 2.0 * (k2 * (4.0 * alpha - 1.0) / (2.0 * alpha - 1.0)).powf(1.0 / (2.0 * alpha - 1.0)) * (2.0 * alpha - 1.0)
                    / (alpha - 1.0);
            (4.0 * alpha * inverse_gap_sum(gaps), Some(f * gaps.delta_max), Some(f))
        }
        BaseKind::Rmed2fh => (lower_bound_coefficient(q)?, None, None),
    };
    Ok(FylTerms {
        base,
        g_log,
        g_const,
        f_const,
        overhead,
        players,
        delta_max: gaps.delta_max,
    })
}

/// Everything the `bounds` command reports for one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub lower_coeff: f64,
    pub c_delta: f64,
    pub delta: f64,
    pub thm3: Thm3Terms,
    pub fyl: FylTerms,
}

pub struct BoundInputs<'a> {
    pub q: &'a PreferenceMatrix,
    pub graph: &'a CliqueAnalytics,
    pub diameter: usize,
    pub t_le: u64,
    pub alpha: f64,
    pub delta: f64,
    pub base: BaseKind,
}

impl BoundReport {
    pub fn compute(inp: &BoundInputs<'_>) -> Result<Self> {
        let m = inp.graph.largest_clique.len();
        Ok(Self {
            lower_coeff: lower_bound_coefficient(inp.q)?,
            c_delta: c_delta(m, inp.q.k(), inp.graph.d_max_gamma, inp.alpha, inp.delta)?,
            delta: inp.delta,
            thm3: thm3_bound(inp.q, inp.graph, inp.alpha)?,
            fyl: fyl_bound_terms(inp.q, m, inp.diameter, inp.t_le, inp.alpha, inp.base)?,
        })
    }

    /// `(lower, thm3, fyl)` evaluated at horizon `t`.
    pub fn curve_point(&self, t: f64) -> (f64, f64, f64) {
        (self.lower_coeff * t.ln(), self.thm3.value(t), self.fyl.value(t))
    }

    /// Labeled `key = value` lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: String| out.push_str(&format!("{k} = {v}\n"));
        line("lower_coeff", format!("{}", self.lower_coeff));
        line("thm3_coeff", format!("{}", self.thm3.thm3_coeff));
        line("chi", format!("{}", self.thm3.chi));
        line("graph_exact", format!("{}", self.thm3.exact_graph));
        line("delta", format!("{}", self.delta));
        line("c_delta", format!("{}", self.c_delta));
        line("c_tilde", format!("{}", self.thm3.c_tilde));
        line("d_script", format!("{}", self.thm3.d_script));
        line("hat_c", format!("{}", self.thm3.hat_c));
        line("fyl_base", self.fyl.base.to_string());
        line("fyl_g_log_coeff", format!("{}", self.fyl.g_log));
        let opt = |v: Option<f64>| v.map(|x| format!("{x}")).unwrap_or_else(|| "symbolic".into());
        line("fyl_g_const", opt(self.fyl.g_const));
        line("fyl_f_const", opt(self.fyl.f_const));
        line("fyl_overhead", format!("{}", self.fyl.overhead));
        if let Some(s) = self.fyl.symbolic() {
            line("fyl_symbolic", s.to_string());
        }
        line("lower_le_thm3", format!("{}", self.lower_coeff <= self.thm3.thm3_coeff));
        out
    }
}
