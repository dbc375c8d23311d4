//! Flat `key = value` experiment configuration.
//!
//! Recognised keys:
//!
//! | key | meaning | default |
//! |---|---|---|
//! | `matrix` | CSV path (relative to the config file) or `q3` | required |
//! | `algorithm` | `fyl-rucb`, `fyl-rmed2fh`, `mp-rucb`, `mp-rucb-norec`, `sp-rucb`, `sp-rmed2fh` | required |
//! | `graph` | `complete`, `cycle`, `path`, `star` | `complete` |
//! | `graph_file` | edge-list graph file, overrides `graph`/`players` | none |
//! | `players` | number of players `M` | `1` |
//! | `gamma` | integer or `diameter` | `diameter` |
//! | `alpha` | exploration parameter | `3` |
//! | `rmed_f_coeff`, `rmed_f_exp` | RMED2FH budget `c K^e` | `0.3`, `1.01` |
//! | `horizon` | rounds `T` | `10000` |
//! | `runs` | independent runs `R` | `200` |
//! | `seed` | base seed; run `r` uses `seed + r` | `0` |
//! | `grid_points` | log-spaced sample points | `200` |
//! | `out_dir` | output directory | `out` |
//! | `delta` | confidence level reported by `bounds` | `0.05` |
//! | `delivery_rule` | `standard` or `batch` | `standard` |
//! | `record_draws` | keep per-round draws in memory | `false` |

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::env::PreferenceMatrix;
use crate::graph::{all_pairs_distances, CommGraph, DistanceTable, Topology};
use crate::netsim::DeliveryRule;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    FylRucb,
    FylRmed2fh,
    MpRucb,
    MpRucbNoRec,
    SpRucb,
    SpRmed2fh,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::FylRucb,
        Algorithm::FylRmed2fh,
        Algorithm::MpRucb,
        Algorithm::MpRucbNoRec,
        Algorithm::SpRucb,
        Algorithm::SpRmed2fh,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::FylRucb => "fyl-rucb",
            Algorithm::FylRmed2fh => "fyl-rmed2fh",
            Algorithm::MpRucb => "mp-rucb",
            Algorithm::MpRucbNoRec => "mp-rucb-norec",
            Algorithm::SpRucb => "sp-rucb",
            Algorithm::SpRmed2fh => "sp-rmed2fh",
        }
    }

    pub fn single_player(self) -> bool {
        matches!(self, Algorithm::SpRucb | Algorithm::SpRmed2fh)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown algorithm {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MatrixSource {
    /// The built-in three-arm instance `q3`.
    Builtin(String),
    Csv(PathBuf),
    /// A matrix built in code.
    Inline(PreferenceMatrix),
}

impl MatrixSource {
    pub fn load(&self) -> Result<PreferenceMatrix> {
        match self {
            MatrixSource::Builtin(name) => builtin_matrix(name),
            MatrixSource::Csv(path) => PreferenceMatrix::load_csv(path),
            MatrixSource::Inline(q) => Ok(q.clone()),
        }
    }
}

/// Named instances usable as `matrix = <name>`.
pub fn builtin_matrix(name: &str) -> Result<PreferenceMatrix> {
    match name {
        "q3" => PreferenceMatrix::from_upper(3, vec![0.6, 0.7, 0.6]),
        other => Err(Error::Config(format!("unknown built-in matrix {other:?}"))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaSpec {
    Value(usize),
    Diameter,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub matrix: MatrixSource,
    pub algorithm: Algorithm,
    pub graph: Topology,
    pub graph_file: Option<PathBuf>,
    pub players: usize,
    pub gamma: GammaSpec,
    pub alpha: f64,
    pub rmed_f_coeff: f64,
    pub rmed_f_exp: f64,
    pub horizon: u64,
    pub runs: usize,
    pub seed: u64,
    pub grid_points: usize,
    pub out_dir: PathBuf,
    pub delta: f64,
    pub delivery_rule: DeliveryRule,
    pub record_draws: bool,
}

impl ExperimentConfig {
    pub fn new(matrix: MatrixSource, algorithm: Algorithm) -> Self {
        Self {
            matrix,
            algorithm,
            graph: Topology::Complete,
            graph_file: None,
            players: 1,
            gamma: GammaSpec::Diameter,
            alpha: 3.0,
            rmed_f_coeff: 0.3,
            rmed_f_exp: 1.01,
            horizon: 10_000,
            runs: 200,
            seed: 0,
            grid_points: 200,
            out_dir: PathBuf::from("out"),
            delta: 0.05,
            delivery_rule: DeliveryRule::Standard,
            record_draws: false,
        }
    }

    /// Parses config text; relative paths are resolved against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let mut matrix = None;
        let mut algorithm = None;
        let mut rest: Vec<(usize, String, String)> = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", n + 1)))?;
            let (key, value) = (key.trim().to_string(), value.trim().to_string());
            match key.as_str() {
                "matrix" => {
                    matrix = Some(if value == "q3" {
                        MatrixSource::Builtin(value)
                    } else {
                        MatrixSource::Csv(base.join(value))
                    })
                }
                "algorithm" => algorithm = Some(value.parse::<Algorithm>()?),
                _ => rest.push((n + 1, key, value)),
            }
        }
        let matrix = matrix.ok_or_else(|| Error::Config("missing key 'matrix'".into()))?;
        let algorithm = algorithm.ok_or_else(|| Error::Config("missing key 'algorithm'".into()))?;
        let mut cfg = Self::new(matrix, algorithm);
        for (line, key, value) in rest {
            cfg.set(&key, &value, base)
                .map_err(|e| Error::Config(format!("line {line}: {e}")))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config file. An unreadable file is a usage error.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    fn set(&mut self, key: &str, value: &str, base: &Path) -> std::result::Result<(), String> {
        fn num<T: FromStr>(key: &str, v: &str) -> std::result::Result<T, String> {
            v.parse().map_err(|_| format!("invalid value {v:?} for '{key}'"))
        }
        match key {
            "graph" => self.graph = value.parse().map_err(|e: Error| e.to_string())?,
            "graph_file" => self.graph_file = Some(base.join(value)),
            "players" => self.players = num(key, value)?,
            "gamma" => {
                self.gamma = if value == "diameter" {
                    GammaSpec::Diameter
                } else {
                    GammaSpec::Value(num(key, value)?)
                }
            }
            "alpha" => self.alpha = num(key, value)?,
            "rmed_f_coeff" => self.rmed_f_coeff = num(key, value)?,
            "rmed_f_exp" => self.rmed_f_exp = num(key, value)?,
            "horizon" => self.horizon = num(key, value)?,
            "runs" => self.runs = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            "grid_points" => self.grid_points = num(key, value)?,
            "out_dir" => self.out_dir = base.join(value),
            "delta" => self.delta = num(key, value)?,
            "delivery_rule" => {
                self.delivery_rule = match value {
                    "standard" => DeliveryRule::Standard,
                    "batch" => DeliveryRule::Batch,
                    _ => return Err(format!("unknown delivery rule {value:?}")),
                }
            }
            "record_draws" => self.record_draws = num(key, value)?,
            _ => return Err(format!("unknown key '{key}'")),
        }
        Ok(())
    }

    /// Checks scalar invariants and forces `M = 1` (hence `gamma = 0`) for
    /// single-player algorithms. Graph-dependent checks happen in [`Self::resolve`].
    pub fn validate(&mut self) -> Result<()> {
        if self.horizon < 1 {
            return Err(Error::Config("horizon must be at least 1".into()));
        }
        if self.runs < 1 {
            return Err(Error::Config("runs must be at least 1".into()));
        }
        if self.grid_points < 1 {
            return Err(Error::Config("grid_points must be at least 1".into()));
        }
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return Err(Error::Config(format!("alpha must be positive (got {})", self.alpha)));
        }
        if !(self.delta > 0.0) {
            return Err(Error::Config(format!("delta must be positive (got {})", self.delta)));
        }
        if self.algorithm.single_player() {
            self.players = 1;
            self.graph_file = None;
            self.graph = Topology::Complete;
            self.gamma = GammaSpec::Diameter;
        }
        if self.players < 1 {
            return Err(Error::Config("players must be at least 1".into()));
        }
        Ok(())
    }

    /// Loads the matrix and graph and resolves `gamma`.
    pub fn resolve(&self) -> Result<Setup> {
        let q = self.matrix.load()?;
        let graph = match &self.graph_file {
            Some(path) => CommGraph::load(path)?,
            None => CommGraph::canonical(self.graph, self.players)?,
        };
        let dist = all_pairs_distances(&graph)?;
        let gamma = match self.gamma {
            GammaSpec::Diameter => dist.diameter(),
            GammaSpec::Value(g) if g <= dist.diameter() => g,
            GammaSpec::Value(g) => {
                return Err(Error::Config(format!(
                    "gamma = {g} exceeds the graph diameter {}",
                    dist.diameter()
                )))
            }
        };
        Ok(Setup { q, graph, dist, gamma })
    }
}

/// Loaded inputs of an experiment.
#[derive(Debug, Clone)]
pub struct Setup {
    pub q: PreferenceMatrix,
    pub graph: CommGraph,
    pub dist: DistanceTable,
    pub gamma: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_and_comments() {
        let text = "# demo\nmatrix = q3\nalgorithm = mp-rucb\ngraph = star  # hub and leaves\nplayers = 5\ngamma = 1\nruns = 3\nhorizon = 100\ndelivery_rule = batch\n";
        let cfg = ExperimentConfig::parse(text, Path::new("/tmp")).unwrap();
        assert_eq!(cfg.algorithm, Algorithm::MpRucb);
        assert_eq!(cfg.graph, Topology::Star);
        assert_eq!(cfg.players, 5);
        assert_eq!(cfg.gamma, GammaSpec::Value(1));
        assert_eq!(cfg.runs, 3);
        assert_eq!(cfg.delivery_rule, DeliveryRule::Batch);
        assert_eq!(cfg.alpha, 3.0);
        assert_eq!(cfg.resolve().unwrap().gamma, 1);
    }

    #[test]
    fn relative_matrix_path_uses_config_dir() {
        let cfg = ExperimentConfig::parse("matrix = m.csv\nalgorithm = sp-rucb\n", Path::new("/data")).unwrap();
        assert_eq!(cfg.matrix, MatrixSource::Csv(PathBuf::from("/data/m.csv")));
    }

    #[test]
    fn single_player_forces_one_player() {
        let cfg = ExperimentConfig::parse("matrix = q3\nalgorithm = sp-rmed2fh\nplayers = 7\ngraph = path\n", Path::new(".")).unwrap();
        assert_eq!(cfg.players, 1);
        assert_eq!(cfg.resolve().unwrap().graph.m(), 1);
    }

    #[test]
    fn rejects_bad_input() {
        let p = Path::new(".");
        for text in [
            "algorithm = mp-rucb\n",
            "matrix = q3\n",
            "matrix = q3\nalgorithm = nope\n",
            "matrix = q3\nalgorithm = mp-rucb\nhorizon = 0\n",
            "matrix = q3\nalgorithm = mp-rucb\nruns = 0\n",
            "matrix = q3\nalgorithm = mp-rucb\ncolour = red\n",
            "matrix = q3\nalgorithm = mp-rucb\nplayers = many\n",
            "matrix = q3\nalgorithm = mp-rucb\njunk\n",
        ] {
            assert!(matches!(ExperimentConfig::parse(text, p), Err(Error::Config(_))), "{text}");
        }
    }

    #[test]
    fn gamma_above_diameter_is_rejected() {
        let cfg = ExperimentConfig::parse("matrix = q3\nalgorithm = mp-rucb\ngraph = path\nplayers = 3\ngamma = 3\n", Path::new(".")).unwrap();
        assert!(matches!(cfg.resolve(), Err(Error::Config(_))));
    }

    #[test]
    fn missing_file_is_a_config_error() {
        let err = ExperimentConfig::load("/nonexistent/exp.cfg").unwrap_err();
        assert_eq!(err.exit_code(), 1);
    }
}
