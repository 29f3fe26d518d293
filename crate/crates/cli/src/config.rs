//! Flat `key=value` run configuration with flag overrides.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use frame::Mutation;
use lab::{FamilyKind, SolverConfig};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ConfigError {
    #[error("cannot read config {path}: {reason}")]
    Read { path: PathBuf, reason: String },
    #[error("line {line}: expected key=value, got {text:?}")]
    Syntax { line: usize, text: String },
    #[error("unknown config key {0:?}")]
    UnknownKey(String),
    #[error("key {0:?} given twice")]
    Duplicate(String),
    #[error("bad value for {key}: {value:?} ({reason})")]
    Value { key: String, value: String, reason: String },
}

pub const KEYS: &[&str] = &[
    "dim",
    "n",
    "family",
    "amplitude",
    "seed",
    "out",
    "mutate",
    "max_newton",
    "tolerance",
    "krylov_tolerance",
    "krylov_max",
    "krylov_restart",
    "backtrack",
    "margin",
];

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub dim: usize,
    pub n: usize,
    pub family: FamilyKind,
    pub amplitudes: Vec<f64>,
    pub seed: u64,
    pub out: PathBuf,
    pub mutations: BTreeSet<Mutation>,
    pub solver: SolverConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            dim: 2,
            n: 16,
            family: FamilyKind::SingleMode,
            amplitudes: vec![0.5],
            seed: 0,
            out: PathBuf::from("out"),
            mutations: BTreeSet::new(),
            solver: SolverConfig::default(),
        }
    }
}

fn bad(key: &str, value: &str, reason: impl ToString) -> ConfigError {
    ConfigError::Value {
        key: key.to_string(),
        value: value.to_string(),
        reason: reason.to_string(),
    }
}

fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: ToString,
{
    value.trim().parse().map_err(|e: T::Err| bad(key, value, e))
}

impl RunConfig {
    /// Apply one setting. Values are validated here so that the same rules
    /// hold for file entries and flags.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "dim" => {
                let d: usize = num(key, value)?;
                if d != 1 && d != 2 {
                    return Err(bad(key, value, "must be 1 or 2"));
                }
                self.dim = d;
            }
            "n" => self.n = num(key, value)?,
            "family" => self.family = value.trim().parse().map_err(|e| bad(key, value, e))?,
            "amplitude" => {
                let list = value
                    .split(',')
                    .map(|v| num::<f64>(key, v))
                    .collect::<Result<Vec<_>, _>>()?;
                if list.iter().any(|a| !a.is_finite() || *a < 0.0) {
                    return Err(bad(key, value, "amplitudes must be finite and non-negative"));
                }
                self.amplitudes = list;
            }
            "seed" => self.seed = num(key, value)?,
            "out" => self.out = PathBuf::from(value.trim()),
            "mutate" => {
                self.mutations.clear();
                for tag in value.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                    let m = Mutation::from_tag(tag).ok_or_else(|| bad(key, value, format!("unknown mutation {tag}")))?;
                    self.mutations.insert(m);
                }
            }
            "max_newton" => self.solver.max_newton = num(key, value)?,
            "tolerance" => self.solver.tolerance = num(key, value)?,
            "krylov_tolerance" => self.solver.krylov_tolerance = num(key, value)?,
            "krylov_max" => self.solver.krylov_max = num(key, value)?,
            "krylov_restart" => self.solver.krylov_restart = num(key, value)?,
            "backtrack" => self.solver.backtrack = num(key, value)?,
            "margin" => self.solver.margin = num(key, value)?,
            _ => return Err(ConfigError::UnknownKey(key.to_string())),
        }
        Ok(())
    }

    /// Parse file text: one `key=value` per line, `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        let mut seen = BTreeSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line: i + 1,
                text: raw.to_string(),
            })?;
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(ConfigError::UnknownKey(key.to_string()));
            }
            if !seen.insert(key.to_string()) {
                return Err(ConfigError::Duplicate(key.to_string()));
            }
            self.set(key, value)?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Read {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })?;
        let mut cfg = RunConfig::default();
        cfg.apply_text(&text)?;
        Ok(cfg)
    }

    /// The resolved configuration in the file format, keys in canonical order.
    pub fn to_text(&self) -> String {
        let s = &self.solver;
        let amps: Vec<String> = self.amplitudes.iter().map(|a| a.to_string()).collect();
        let muts: Vec<&str> = self.mutations.iter().map(|m| m.tag()).collect();
        let mut out = String::new();
        let mut line = |k: &str, v: String| writeln!(out, "{k}={v}").expect("string write");
        line("dim", self.dim.to_string());
        line("n", self.n.to_string());
        line("family", self.family.to_string());
        line("amplitude", amps.join(","));
        line("seed", self.seed.to_string());
        line("out", self.out.display().to_string());
        line("mutate", muts.join(","));
        line("max_newton", s.max_newton.to_string());
        line("tolerance", format!("{:e}", s.tolerance));
        line("krylov_tolerance", format!("{:e}", s.krylov_tolerance));
        line("krylov_max", s.krylov_max.to_string());
        line("krylov_restart", s.krylov_restart.to_string());
        line("backtrack", s.backtrack.to_string());
        line("margin", s.margin.to_string());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let mut c = RunConfig::default();
        c.apply_text("dim=1\n# comment\nn = 32\namplitude=0,0.25, 0.5\nmutate=AX-216-signflip\n")
            .unwrap();
        assert_eq!(c.dim, 1);
        assert_eq!(c.n, 32);
        assert_eq!(c.amplitudes, vec![0.0, 0.25, 0.5]);
        let mut d = RunConfig::default();
        d.apply_text(&c.to_text()).unwrap();
        assert_eq!(c, d);
    }

    #[test]
    fn rejects_unknown_and_malformed() {
        let mut c = RunConfig::default();
        assert_eq!(c.apply_text("foo=1"), Err(ConfigError::UnknownKey("foo".into())));
        assert!(matches!(c.apply_text("n"), Err(ConfigError::Syntax { line: 1, .. })));
        assert!(matches!(c.apply_text("dim=3"), Err(ConfigError::Value { .. })));
        assert!(matches!(c.apply_text("n=4\nn=8"), Err(ConfigError::Duplicate(_))));
        assert!(matches!(c.apply_text("mutate=nope"), Err(ConfigError::Value { .. })));
    }
}
