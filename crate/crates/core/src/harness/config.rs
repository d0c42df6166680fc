//! Sweep configuration, read from a flat TOML document.
//!
//! ```toml
//! algos = ["cm", "count", "formal", "salsa"]
//! adapter = "exact"              # baselines only: exact | cm
//! memory = ["10KB", "2MB"]       # or plain byte counts
//! rows = [1]
//! seeds = 10                     # seeds first_seed .. first_seed + seeds
//! first_seed = 1
//!
//! # generated data (default)
//! alpha = [0.6]
//! n_items = 1000000
//! n_distinct = 200000
//! split_p = 0.5
//! data_seed = 7
//!
//! # or a file pair, which takes precedence
//! # stream_a = "a.txt"
//! # stream_b = "b.txt"
//! # stream_format = "text"
//!
//! output = "results.csv"
//! jsonl = false
//! summary = true
//! sequential = false
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::baselines::AdapterKind;
use crate::error::{Error, Result};
use crate::harness::ingest::StreamFormat;
use crate::params::Algo;

/// Parse `"10KB"`, `"2MB"`, `"512"`, `"1.5MiB"`. KB and MB are powers of 1024.
pub fn parse_size(s: &str) -> Result<usize> {
    let t = s.trim();
    let split = t
        .find(|c: char| !(c.is_ascii_digit() || c == '.'))
        .unwrap_or(t.len());
    let (num, unit) = t.split_at(split);
    let num: f64 = num
        .parse()
        .map_err(|_| Error::Config(format!("bad size `{s}`")))?;
    let mult = match unit.trim().to_ascii_uppercase().as_str() {
        "" | "B" => 1.0,
        "K" | "KB" | "KIB" => 1024.0,
        "M" | "MB" | "MIB" => 1024.0 * 1024.0,
        "G" | "GB" | "GIB" => 1024.0 * 1024.0 * 1024.0,
        other => {
            return Err(Error::Config(format!(
                "unknown size unit `{other}` in `{s}`"
            )))
        }
    };
    Ok((num * mult).round() as usize)
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum SizeValue {
    Bytes(usize),
    Text(String),
}

impl SizeValue {
    fn bytes(&self) -> Result<usize> {
        match self {
            SizeValue::Bytes(n) => Ok(*n),
            SizeValue::Text(s) => parse_size(s),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default = "default_algos")]
    algos: Vec<String>,
    #[serde(default)]
    adapter: Option<String>,
    memory: Vec<SizeValue>,
    #[serde(default = "default_rows")]
    rows: Vec<usize>,
    #[serde(default = "default_seeds")]
    seeds: u64,
    #[serde(default = "default_first_seed")]
    first_seed: u64,
    #[serde(default = "default_alpha")]
    alpha: Vec<f64>,
    #[serde(default = "default_n_items")]
    n_items: usize,
    #[serde(default = "default_n_distinct")]
    n_distinct: usize,
    #[serde(default = "default_split_p")]
    split_p: f64,
    #[serde(default = "default_data_seed")]
    data_seed: u64,
    stream_a: Option<PathBuf>,
    stream_b: Option<PathBuf>,
    stream_format: Option<String>,
    #[serde(default = "default_output")]
    output: PathBuf,
    #[serde(default)]
    jsonl: bool,
    #[serde(default = "default_true")]
    summary: bool,
    #[serde(default)]
    sequential: bool,
    #[serde(default = "default_dothash_dim")]
    dothash_dim: usize,
}

fn default_algos() -> Vec<String> {
    ["cm", "count", "formal", "salsa"]
        .map(String::from)
        .to_vec()
}
fn default_rows() -> Vec<usize> {
    vec![1]
}
fn default_seeds() -> u64 {
    10
}
fn default_first_seed() -> u64 {
    1
}
fn default_alpha() -> Vec<f64> {
    vec![0.6]
}
fn default_n_items() -> usize {
    1_000_000
}
fn default_n_distinct() -> usize {
    200_000
}
fn default_split_p() -> f64 {
    0.5
}
fn default_data_seed() -> u64 {
    7
}
fn default_output() -> PathBuf {
    PathBuf::from("results.csv")
}
fn default_true() -> bool {
    true
}
fn default_dothash_dim() -> usize {
    crate::baselines::DotHashAccumulator::DEFAULT_DIM
}

#[derive(Clone, Debug, PartialEq)]
pub enum DataSource {
    Zipf {
        alphas: Vec<f64>,
        n_items: usize,
        n_distinct: usize,
        split_p: f64,
        data_seed: u64,
    },
    Files {
        a: PathBuf,
        b: PathBuf,
        format: StreamFormat,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct OutputConfig {
    pub csv: PathBuf,
    pub jsonl: bool,
    pub summary: bool,
}

impl OutputConfig {
    pub fn jsonl_path(&self) -> PathBuf {
        self.csv.with_extension("jsonl")
    }

    pub fn summary_path(&self) -> PathBuf {
        let stem = self
            .csv
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "results".into());
        self.csv.with_file_name(format!("{stem}_summary.csv"))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub algos: Vec<Algo>,
    pub adapter: AdapterKind,
    pub memory_bytes: Vec<usize>,
    pub rows: Vec<usize>,
    pub seeds: Vec<u64>,
    pub data: DataSource,
    pub dothash_dim: usize,
    /// Run cells one at a time so timings are not skewed by contention.
    pub sequential: bool,
    pub output: OutputConfig,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Self::from_raw(raw)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut cfg = Self::from_toml_str(&text)?;
        // relative paths resolve against the config file's directory
        let base = path.parent().unwrap_or(Path::new(""));
        if let DataSource::Files { a, b, .. } = &mut cfg.data {
            *a = base.join(&*a);
            *b = base.join(&*b);
        }
        Ok(cfg)
    }

    fn from_raw(raw: RawConfig) -> Result<Self> {
        let algos = raw
            .algos
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<Algo>>>()?;
        let adapter = match &raw.adapter {
            Some(s) => s.parse()?,
            None => AdapterKind::Exact,
        };
        let memory_bytes = raw
            .memory
            .iter()
            .map(SizeValue::bytes)
            .collect::<Result<Vec<_>>>()?;
        let data = match (raw.stream_a, raw.stream_b) {
            (Some(a), Some(b)) => DataSource::Files {
                a,
                b,
                format: match &raw.stream_format {
                    Some(f) => f.parse()?,
                    None => StreamFormat::Text,
                },
            },
            (None, None) => DataSource::Zipf {
                alphas: raw.alpha,
                n_items: raw.n_items,
                n_distinct: raw.n_distinct,
                split_p: raw.split_p,
                data_seed: raw.data_seed,
            },
            _ => {
                return Err(Error::Config(
                    "stream_a and stream_b must be given together".into(),
                ))
            }
        };
        let cfg = ExperimentConfig {
            algos,
            adapter,
            memory_bytes,
            rows: raw.rows,
            seeds: (raw.first_seed..raw.first_seed + raw.seeds).collect(),
            data,
            dothash_dim: raw.dothash_dim,
            sequential: raw.sequential,
            output: OutputConfig {
                csv: raw.output,
                jsonl: raw.jsonl,
                summary: raw.summary,
            },
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let empty = |what: &str| Err(Error::Config(format!("`{what}` must not be empty")));
        if self.algos.is_empty() {
            return empty("algos");
        }
        if self.memory_bytes.is_empty() {
            return empty("memory");
        }
        if self.rows.is_empty() {
            return empty("rows");
        }
        if self.seeds.is_empty() {
            return empty("seeds");
        }
        if self.rows.contains(&0) {
            return Err(Error::Config("rows must be positive".into()));
        }
        if let DataSource::Zipf {
            alphas,
            split_p,
            n_distinct,
            ..
        } = &self.data
        {
            if alphas.is_empty() {
                return empty("alpha");
            }
            if !(0.0..=1.0).contains(split_p) {
                return Err(Error::Config(format!("split_p {split_p} outside [0, 1]")));
            }
            if *n_distinct == 0 {
                return Err(Error::Config("n_distinct must be positive".into()));
            }
        }
        Ok(())
    }
}
