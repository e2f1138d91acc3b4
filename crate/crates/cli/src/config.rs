//! Flat `key = value` experiment configuration.
//!
//! ```text
//! mode = theorem2-random
//! params = 2,2,0 2,3,0 2,3,1
//! n = 8..12
//! densities = 9/10 19/20 1
//! trials = 200
//! seed = 20240607
//! complete = true
//! output = theorem2.csv
//! ```
//!
//! `#` starts a comment. Overrides given on the command line replace file
//! values key by key.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use fraccover::subsets::MAX_MASK_ORDER;
use fraccover::{EnumerationCap, Params};
use num_rational::Ratio;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("line {line}: expected key = value, got {text:?}")]
    Syntax { line: usize, text: String },
    #[error("unknown key {0:?}")]
    UnknownKey(String),
    #[error("bad value for {key}: {msg}")]
    Value { key: String, msg: String },
    #[error("missing required key {0:?}")]
    Missing(&'static str),
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Theorem2Random,
    OracleExhaustive,
    OracleRandom,
    SharpnessSweep,
    Corpus,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Theorem2Random => "theorem2-random",
            Mode::OracleExhaustive => "oracle-exhaustive",
            Mode::OracleRandom => "oracle-random",
            Mode::SharpnessSweep => "sharpness-sweep",
            Mode::Corpus => "corpus",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            Mode::Theorem2Random,
            Mode::OracleExhaustive,
            Mode::OracleRandom,
            Mode::SharpnessSweep,
            Mode::Corpus,
        ]
        .into_iter()
        .find(|m| m.name() == s)
        .ok_or_else(|| format!("unknown mode {s:?}"))
    }
}

/// Largest order for exhaustive labeled enumeration.
pub const EXHAUSTIVE_MAX_ORDER: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub params: Vec<Params>,
    pub n_min: usize,
    pub n_max: usize,
    pub densities: Vec<Ratio<u64>>,
    pub trials: usize,
    pub seed: u64,
    pub cap: EnumerationCap,
    /// Append `K_n` for each `n` in range (random modes).
    pub complete: bool,
    pub corpus: Option<PathBuf>,
    /// Largest `t` in a sharpness sweep.
    pub t_max: u64,
    /// Ledger file name, resolved against the result directory.
    pub output: PathBuf,
}

const KEYS: [&str; 11] = [
    "mode", "params", "n", "densities", "trials", "seed", "cap", "complete", "corpus", "t_max", "output",
];

impl ExperimentConfig {
    /// Parses file text, applies `overrides` in order, then validates.
    pub fn parse(text: &str, overrides: &[(String, String)]) -> Result<Self, ConfigError> {
        let mut pairs = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line: i + 1,
                text: raw.to_string(),
            })?;
            pairs.push((k.trim().to_string(), v.trim().to_string()));
        }
        pairs.extend(overrides.iter().cloned());
        Self::from_pairs(&pairs)
    }

    pub fn load(path: &Path, overrides: &[(String, String)]) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.display().to_string(),
            msg: e.to_string(),
        })?;
        let mut cfg = Self::parse(&text, overrides)?;
        if let Some(c) = &cfg.corpus {
            if c.is_relative() {
                cfg.corpus = Some(path.parent().unwrap_or(Path::new(".")).join(c));
            }
        }
        Ok(cfg)
    }

    fn from_pairs(pairs: &[(String, String)]) -> Result<Self, ConfigError> {
        let get = |key: &str| pairs.iter().rev().find(|(k, _)| k == key).map(|(_, v)| v.as_str());
        if let Some((k, _)) = pairs.iter().find(|(k, _)| !KEYS.contains(&k.as_str())) {
            return Err(ConfigError::UnknownKey(k.clone()));
        }
        let bad = |key: &str, msg: String| ConfigError::Value { key: key.to_string(), msg };
        let num = |key: &str, v: &str| v.parse::<u64>().map_err(|e| bad(key, e.to_string()));

        let mode: Mode = get("mode")
            .ok_or(ConfigError::Missing("mode"))?
            .parse()
            .map_err(|m| bad("mode", m))?;
        let params = match get("params") {
            Some(v) => parse_params(v).map_err(|m| bad("params", m))?,
            None => return Err(ConfigError::Missing("params")),
        };
        let (n_min, n_max) = match get("n") {
            Some(v) => parse_range(v).map_err(|m| bad("n", m))?,
            None => (1, 0),
        };
        let densities = match get("densities") {
            Some(v) => parse_densities(v).map_err(|m| bad("densities", m))?,
            None => vec![Ratio::new(9, 10), Ratio::new(19, 20), Ratio::from(1)],
        };
        let cfg = Self {
            mode,
            params,
            n_min,
            n_max,
            densities,
            trials: get("trials").map(|v| num("trials", v)).transpose()?.unwrap_or(0) as usize,
            seed: get("seed").map(|v| num("seed", v)).transpose()?.unwrap_or(0),
            cap: match get("cap") {
                Some(v) => {
                    let c = num("cap", v)? as usize;
                    if c > MAX_MASK_ORDER {
                        return Err(bad("cap", format!("at most {MAX_MASK_ORDER}")));
                    }
                    EnumerationCap::new(c)
                }
                None => EnumerationCap::DEFAULT,
            },
            complete: match get("complete") {
                None => false,
                Some(v) => v.parse().map_err(|_| bad("complete", format!("expected true/false, got {v:?}")))?,
            },
            corpus: get("corpus").map(PathBuf::from),
            t_max: get("t_max").map(|v| num("t_max", v)).transpose()?.unwrap_or(15),
            output: PathBuf::from(get("output").unwrap_or("ledger.csv")),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        let bad = |key: &str, msg: &str| {
            Err(ConfigError::Value {
                key: key.to_string(),
                msg: msg.to_string(),
            })
        };
        match self.mode {
            Mode::Theorem2Random | Mode::OracleRandom | Mode::OracleExhaustive if self.n_min > self.n_max => {
                bad("n", "empty or missing range")
            }
            Mode::OracleExhaustive if self.n_max > EXHAUSTIVE_MAX_ORDER => {
                bad("n", "exhaustive enumeration is limited to n <= 7")
            }
            Mode::Theorem2Random | Mode::SharpnessSweep
                if self.params.iter().any(|p| p.require_neighborhood_regime().is_err()) =>
            {
                bad("params", "this mode needs 2 <= a <= b")
            }
            Mode::Corpus if self.corpus.is_none() => Err(ConfigError::Missing("corpus")),
            _ => Ok(()),
        }
    }

    /// `RESULT_DIR` (if set) joined with `output`; absolute outputs win.
    pub fn ledger_path(&self, result_dir: Option<&Path>) -> PathBuf {
        match result_dir {
            Some(dir) if self.output.is_relative() => dir.join(&self.output),
            _ => self.output.clone(),
        }
    }
}

/// `"2,3,0 2,2,0"` or `"2,3,0; 2,2,0"`.
pub fn parse_params(v: &str) -> Result<Vec<Params>, String> {
    let out: Vec<Params> = v
        .split(|c: char| c == ';' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|triple| {
            let parts: Vec<u32> = triple
                .split(',')
                .map(|x| x.trim().parse::<u32>().map_err(|e| format!("{triple:?}: {e}")))
                .collect::<Result<_, _>>()?;
            match parts[..] {
                [a, b] => Params::new(a, b, 0).map_err(|e| e.to_string()),
                [a, b, k] => Params::new(a, b, k).map_err(|e| e.to_string()),
                _ => Err(format!("{triple:?}: expected a,b or a,b,k")),
            }
        })
        .collect::<Result<_, _>>()?;
    if out.is_empty() {
        return Err("no parameter triples".into());
    }
    Ok(out)
}

/// `"8..12"` (inclusive) or a single number.
pub fn parse_range(v: &str) -> Result<(usize, usize), String> {
    let p = |s: &str| s.trim().parse::<usize>().map_err(|e| format!("{s:?}: {e}"));
    match v.split_once("..") {
        Some((lo, hi)) => Ok((p(lo)?, p(hi.trim_start_matches('='))?)),
        None => p(v).map(|n| (n, n)),
    }
}

/// Space- or comma-separated fractions `p/q` or integers, each in `[0, 1]`.
pub fn parse_densities(v: &str) -> Result<Vec<Ratio<u64>>, String> {
    let out: Vec<Ratio<u64>> = v
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| {
            let r = match s.split_once('/') {
                Some((p, q)) => {
                    let (p, q) = (p.parse::<u64>(), q.parse::<u64>());
                    match (p, q) {
                        (Ok(p), Ok(q)) if q > 0 => Ratio::new(p, q),
                        _ => return Err(format!("{s:?} is not a fraction")),
                    }
                }
                None => Ratio::from(s.parse::<u64>().map_err(|e| format!("{s:?}: {e}"))?),
            };
            if r > Ratio::from(1) {
                return Err(format!("{s} exceeds 1"));
            }
            Ok(r)
        })
        .collect::<Result<_, _>>()?;
    if out.is_empty() {
        return Err("no densities".into());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const THEOREM2: &str = "
        mode = theorem2-random   # dense schedule
        params = 2,2,0 2,3,0 2,3,1
        n = 8..12
        densities = 9/10 19/20 1
        trials = 200
        seed = 7
        complete = true
    ";

    #[test]
    fn parses_full_config() {
        let c = ExperimentConfig::parse(THEOREM2, &[]).unwrap();
        assert_eq!(c.mode, Mode::Theorem2Random);
        assert_eq!(c.params.len(), 3);
        assert_eq!(c.params[2], Params { a: 2, b: 3, k: 1 });
        assert_eq!((c.n_min, c.n_max), (8, 12));
        assert_eq!(c.densities[1], Ratio::new(19, 20));
        assert_eq!((c.trials, c.seed, c.complete), (200, 7, true));
        assert_eq!(c.output, PathBuf::from("ledger.csv"));
    }

    #[test]
    fn overrides_take_precedence() {
        let o = vec![("seed".to_string(), "99".to_string()), ("trials".to_string(), "5".to_string())];
        let c = ExperimentConfig::parse(THEOREM2, &o).unwrap();
        assert_eq!((c.seed, c.trials), (99, 5));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            ExperimentConfig::parse("mode = nope\nparams = 2,3", &[]),
            Err(ConfigError::Value { .. })
        ));
        assert!(matches!(
            ExperimentConfig::parse("mode = corpus\nparams = 2,3\ncolor = red", &[]),
            Err(ConfigError::UnknownKey(_))
        ));
        assert!(matches!(ExperimentConfig::parse("params = 2,3", &[]), Err(ConfigError::Missing("mode"))));
        assert!(matches!(ExperimentConfig::parse("mode corpus", &[]), Err(ConfigError::Syntax { line: 1, .. })));
        let big = "mode = oracle-exhaustive\nparams = 1,1\nn = 1..8";
        assert!(ExperimentConfig::parse(big, &[]).is_err());
        let regime = "mode = theorem2-random\nparams = 1,2,0\nn = 8..9\ntrials = 1";
        assert!(ExperimentConfig::parse(regime, &[]).is_err());
        assert!(parse_densities("3/2").is_err());
        assert!(parse_params("3,2").is_err());
    }

    #[test]
    fn ledger_path_resolution() {
        let c = ExperimentConfig::parse(THEOREM2, &[]).unwrap();
        assert_eq!(c.ledger_path(Some(Path::new("/tmp/r"))), PathBuf::from("/tmp/r/ledger.csv"));
        assert_eq!(c.ledger_path(None), PathBuf::from("ledger.csv"));
    }
}
