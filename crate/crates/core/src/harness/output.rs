use std::path::Path;

use super::RegretTrace;
use crate::{Error, Result};

pub const CSV_HEADER: &str = "t,mean_group_regret,std_group_regret,runs";

/// C-style `%.{sig}g` formatting, independent of platform and locale.
pub fn format_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sig = sig.max(1);
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if exp < -4 || exp >= sig as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn trace_csv(trace: &RegretTrace) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    let runs = trace.runs.len();
    for (g, t) in trace.grid.iter().enumerate() {
        out.push_str(&format!(
            "{t},{},{},{runs}\n",
            format_sig(trace.mean[g], 9),
            format_sig(trace.std[g], 9)
        ));
    }
    out
}

pub fn emit_csv(trace: &RegretTrace, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, trace_csv(trace)).map_err(|e| Error::io(path, e))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsvRow {
    pub t: u64,
    pub mean: f64,
    pub std: f64,
    pub runs: usize,
}

pub fn parse_trace_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.trim() == CSV_HEADER => {}
        Some((n, _)) => return Err(Error::parse(n + 1, format!("expected header '{CSV_HEADER}'"))),
        None => return Err(Error::parse(None, "empty regret CSV")),
    }
    let rows = lines
        .map(|(n, line)| {
            let f: Vec<&str> = line.trim().split(',').collect();
            let bad = || Error::parse(n + 1, format!("malformed row {line:?}"));
            if f.len() != 4 {
                return Err(bad());
            }
            Ok(CsvRow {
                t: f[0].parse().map_err(|_| bad())?,
                mean: f[1].parse().map_err(|_| bad())?,
                std: f[2].parse().map_err(|_| bad())?,
                runs: f[3].parse().map_err(|_| bad())?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
        return Err(Error::parse(None, "regret CSV has no data rows"));
    }
    Ok(rows)
}
