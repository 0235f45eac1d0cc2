//! Flat `key = value` experiment configuration.
//!
//! ```text
//! experiment = scaling-k1
//! n_list = [64, 128, 256]
//! seed = 7            # optional, default 42
//! constant.c_k = 1.0
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    LemmaChecks,
    ScalingK1,
    ScalingK2,
    ScalingKk,
    CompositionLogfree,
    RkhsBound,
    TailsDemo,
    ChainingDemo,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Self::LemmaChecks,
        Self::ScalingK1,
        Self::ScalingK2,
        Self::ScalingKk,
        Self::CompositionLogfree,
        Self::RkhsBound,
        Self::TailsDemo,
        Self::ChainingDemo,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::LemmaChecks => "lemma-checks",
            Self::ScalingK1 => "scaling-k1",
            Self::ScalingK2 => "scaling-k2",
            Self::ScalingKk => "scaling-kk",
            Self::CompositionLogfree => "composition-logfree",
            Self::RkhsBound => "rkhs-bound",
            Self::TailsDemo => "tails-demo",
            Self::ChainingDemo => "chaining-demo",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Experiment {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL.into_iter().find(|e| e.as_str() == s).ok_or_else(|| {
            let names: Vec<&str> = Self::ALL.iter().map(|e| e.as_str()).collect();
            format!("unknown experiment `{s}` (expected one of {})", names.join(", "))
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub n_list: Vec<usize>,
    pub k: usize,
    pub seed: u64,
    pub mc_samples: usize,
    pub replications: usize,
    /// Tail-series parameter for `tails-demo`.
    pub w: u32,
    /// `(start, stop, step)` grid for `tails-demo`.
    pub u_grid: (f64, f64, f64),
    pub constants: BTreeMap<String, f64>,
    pub out_dir: PathBuf,
}

impl ExperimentConfig {
    pub fn constant(&self, name: &str, default: f64) -> f64 {
        self.constants.get(name).copied().unwrap_or(default)
    }
}

/// A configuration error with a 1-based location (`line` 0: whole file).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: usize,
    pub column: usize,
    pub msg: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "config: {}", self.msg)
        } else {
            write!(f, "config:{}:{}: {}", self.line, self.column, self.msg)
        }
    }
}

impl std::error::Error for ConfigError {}

fn err(line: usize, column: usize, msg: impl Into<String>) -> ConfigError {
    ConfigError { line, column, msg: msg.into() }
}

/// Parses `a:b:step` with `step > 0` and `a ≤ b`.
pub fn parse_grid(s: &str) -> Result<(f64, f64, f64), String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("grid `{s}` must look like start:stop:step"));
    }
    let v = parts
        .iter()
        .map(|p| p.trim().parse::<f64>().map_err(|_| format!("`{p}` is not a number")))
        .collect::<Result<Vec<_>, _>>()?;
    if !(v[2] > 0.0) || !(v[0] <= v[1]) || v.iter().any(|x| !x.is_finite()) {
        return Err(format!("grid `{s}` needs finite start ≤ stop and step > 0"));
    }
    Ok((v[0], v[1], v[2]))
}

/// Points `a, a + h, …` up to `b` (inclusive, with a half-step guard).
pub fn grid_points((a, b, h): (f64, f64, f64)) -> Vec<f64> {
    let count = ((b - a) / h + 1e-9).floor() as usize + 1;
    (0..count).map(|i| a + i as f64 * h).collect()
}

struct Entry {
    line: usize,
    value_col: usize,
    value: String,
}

impl Entry {
    fn parse<T: FromStr>(&self, what: &str) -> Result<T, ConfigError> {
        self.value
            .parse()
            .map_err(|_| err(self.line, self.value_col, format!("expected {what}, found `{}`", self.value)))
    }
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    const KEYS: [&str; 9] =
        ["experiment", "n_list", "k", "seed", "mc_samples", "replications", "w", "u_grid", "out_dir"];
    let mut entries: BTreeMap<String, Entry> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap();
        if content.trim().is_empty() {
            continue;
        }
        let Some(eq) = content.find('=') else {
            let col = content.len() - content.trim_start().len() + 1;
            return Err(err(line, col, "expected `key = value`"));
        };
        let key = content[..eq].trim();
        let key_col = content.len() - content.trim_start().len() + 1;
        let after = &content[eq + 1..];
        let value_col = eq + 2 + (after.len() - after.trim_start().len());
        let value = after.trim();
        if key.is_empty() {
            return Err(err(line, key_col, "missing key before `=`"));
        }
        let known = KEYS.contains(&key) || key.strip_prefix("constant.").is_some_and(|n| !n.is_empty());
        if !known {
            return Err(err(line, key_col, format!("unknown key `{key}`")));
        }
        if value.is_empty() {
            return Err(err(line, value_col, format!("missing value for `{key}`")));
        }
        let entry = Entry { line, value_col, value: value.to_string() };
        if let Some(prev) = entries.insert(key.to_string(), entry) {
            return Err(err(line, key_col, format!("duplicate key `{key}` (first set on line {})", prev.line)));
        }
    }

    let experiment = match entries.get("experiment") {
        Some(e) => e.value.parse().map_err(|m: String| err(e.line, e.value_col, m))?,
        None => return Err(err(0, 0, "missing required key `experiment`")),
    };
    let n_list = match entries.get("n_list") {
        Some(e) => parse_n_list(e)?,
        None => return Err(err(0, 0, "missing required key `n_list`")),
    };
    let get = |key: &str| entries.get(key);
    let k = match get("k") {
        Some(e) => positive(e, e.parse::<usize>("a positive integer")?)?,
        None => match experiment {
            Experiment::ScalingK2 => 2,
            Experiment::ScalingKk => 4,
            _ => 1,
        },
    };
    let check_k = |want: bool, msg: &str| -> Result<(), ConfigError> {
        match (want, get("k")) {
            (false, Some(e)) => Err(err(e.line, e.value_col, msg.to_string())),
            _ => Ok(()),
        }
    };
    match experiment {
        Experiment::ScalingK1 => check_k(k == 1, "scaling-k1 requires k = 1")?,
        Experiment::ScalingK2 => check_k(k == 2, "scaling-k2 requires k = 2")?,
        Experiment::ScalingKk => check_k(k > 2, "scaling-kk requires k > 2")?,
        _ => {}
    }
    let seed = get("seed").map(|e| e.parse::<u64>("a 64-bit unsigned integer")).transpose()?.unwrap_or(42);
    let mc_samples = match get("mc_samples") {
        Some(e) => positive(e, e.parse::<usize>("a positive integer")?)?,
        None => 20_000,
    };
    let replications = match get("replications") {
        Some(e) => positive(e, e.parse::<usize>("a positive integer")?)?,
        None => 3,
    };
    let w = get("w").map(|e| e.parse::<u32>("a nonnegative integer")).transpose()?.unwrap_or(0);
    let u_grid = match get("u_grid") {
        Some(e) => parse_grid(e.value.trim_matches('"')).map_err(|m| err(e.line, e.value_col, m))?,
        None => (0.5, 6.0, 0.25),
    };
    let out_dir = get("out_dir").map(|e| PathBuf::from(e.value.trim_matches('"'))).unwrap_or_else(|| "out".into());
    let mut constants = BTreeMap::new();
    for (key, e) in &entries {
        if let Some(name) = key.strip_prefix("constant.") {
            let v: f64 = e.parse("a real number")?;
            if !v.is_finite() {
                return Err(err(e.line, e.value_col, "constants must be finite"));
            }
            constants.insert(name.to_string(), v);
        }
    }
    Ok(ExperimentConfig { experiment, n_list, k, seed, mc_samples, replications, w, u_grid, constants, out_dir })
}

fn positive(e: &Entry, v: usize) -> Result<usize, ConfigError> {
    if v == 0 {
        return Err(err(e.line, e.value_col, "must be positive"));
    }
    Ok(v)
}

fn parse_n_list(e: &Entry) -> Result<Vec<usize>, ConfigError> {
    let inner = e
        .value
        .strip_prefix('[')
        .and_then(|v| v.strip_suffix(']'))
        .ok_or_else(|| err(e.line, e.value_col, "n_list must be a list like [a, b, c]"))?;
    let items: Vec<&str> = inner.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if items.is_empty() {
        return Err(err(e.line, e.value_col, "n_list must be nonempty"));
    }
    let mut out = Vec::with_capacity(items.len());
    for item in items {
        let n: usize = item
            .parse()
            .map_err(|_| err(e.line, e.value_col, format!("n_list entry `{item}` is not a positive integer")))?;
        if n == 0 {
            return Err(err(e.line, e.value_col, "n_list entries must be positive"));
        }
        if out.last().is_some_and(|&p| n <= p) {
            return Err(err(e.line, e.value_col, "n_list must be strictly ascending"));
        }
        out.push(n);
    }
    Ok(out)
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| err(0, 0, format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file_gets_defaults() {
        let c = parse_config("experiment = lemma-checks\nn_list = [4, 8]\n").unwrap();
        assert_eq!(c.mc_samples, 20_000);
        assert_eq!(c.seed, 42);
        assert_eq!(c.k, 1);
        assert_eq!(c.n_list, vec![4, 8]);
        assert_eq!(c.out_dir, PathBuf::from("out"));
    }

    #[test]
    fn unknown_key_is_named_with_location() {
        let e = parse_config("experiment = lemma-checks\n  foo = 3\nn_list=[1]").unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        assert!(e.msg.contains("foo"));
    }

    #[test]
    fn n_list_must_ascend() {
        let e = parse_config("experiment = lemma-checks\nn_list = [8, 4]\n").unwrap_err();
        assert!(e.msg.contains("ascending"), "{e}");
        assert_eq!(e.line, 2);
        assert!(parse_config("experiment = lemma-checks\nn_list = []\n").is_err());
    }

    #[test]
    fn type_mismatch_and_missing() {
        let e = parse_config("experiment = lemma-checks\nn_list = [4]\nseed = abc\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 8));
        assert!(parse_config("n_list = [4]\n").unwrap_err().msg.contains("experiment"));
        assert!(parse_config("experiment = nope\nn_list = [4]\n").is_err());
        assert!(parse_config("experiment = scaling-k1\nn_list = [4]\nk = 2\n").is_err());
    }

    #[test]
    fn constants_comments_and_grid() {
        let c = parse_config(
            "# demo\nexperiment = tails-demo   # trailing\nn_list = [1]\nconstant.c_k = 2.5\nu_grid = 1:2:0.5\nw = 2\n",
        )
        .unwrap();
        assert_eq!(c.constant("c_k", 1.0), 2.5);
        assert_eq!(c.constant("other", 1.0), 1.0);
        assert_eq!(grid_points(c.u_grid), vec![1.0, 1.5, 2.0]);
        assert_eq!(c.w, 2);
        assert!(parse_grid("1:0:0.5").is_err());
    }
}
