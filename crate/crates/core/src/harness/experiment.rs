//! Sweep execution: one [`RunResult`] per (dataset, algorithm, memory, rows,
//! seed) cell.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{
    AdapterKind, DotHashAccumulator, Expander, HllRegisters, MaxLogHashState, MinHashSignature,
    SetAdapted, SetSketch,
};
use crate::datagen::{random_split, zipf_stream, ZipfSpec};
use crate::error::{Error, Result};
use crate::harness::config::{DataSource, ExperimentConfig, OutputConfig};
use crate::harness::ingest::read_stream;
use crate::harness::metrics::{compute_mips, compute_re, mean_std};
use crate::oracle::ExactMultiset;
use crate::params::{Algo, ItemId, JaccardEstimate, SimilaritySketch, SketchParams};
use crate::sketch::{CmSimiSketch, CountSimiSketch, FormalSimiSketch, SalsaSimiSketch};

const EXPANDER_SALT: u64 = 0x6578_7061_6e64_6572;

/// One pair of streams and its exact similarity.
#[derive(Clone, Debug)]
pub struct Dataset {
    pub alpha: Option<f64>,
    pub a: Vec<ItemId>,
    pub b: Vec<ItemId>,
    pub j_true: f64,
}

impl Dataset {
    pub fn new(alpha: Option<f64>, a: Vec<ItemId>, b: Vec<ItemId>) -> Result<Self> {
        let ma: ExactMultiset = a.iter().copied().collect();
        let mb: ExactMultiset = b.iter().copied().collect();
        let j_true = ma.jaccard(&mb)?;
        Ok(Dataset {
            alpha,
            a,
            b,
            j_true,
        })
    }

    pub fn items(&self) -> u64 {
        (self.a.len() + self.b.len()) as u64
    }
}

pub fn load_datasets(source: &DataSource) -> Result<Vec<Dataset>> {
    match source {
        DataSource::Files { a, b, format } => {
            let a = read_stream(a, *format)?;
            let b = read_stream(b, *format)?;
            Ok(vec![Dataset::new(None, a, b)?])
        }
        DataSource::Zipf {
            alphas,
            n_items,
            n_distinct,
            split_p,
            data_seed,
        } => alphas
            .iter()
            .map(|&alpha| {
                let spec = ZipfSpec {
                    n_items: *n_items,
                    n_distinct: *n_distinct,
                    alpha,
                    seed: *data_seed,
                };
                let stream = zipf_stream(&spec)?;
                let (a, b) = random_split(&stream, *split_p, data_seed.wrapping_add(1))?;
                Dataset::new(Some(alpha), a, b)
            })
            .collect(),
    }
}

/// Everything needed to build one pair of sketches.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cell {
    pub algo: Algo,
    pub adapter: Option<AdapterKind>,
    pub memory_bytes: usize,
    pub rows: usize,
    pub seed: u64,
    pub dothash_dim: usize,
}

/// Bytes held by a baseline at its default shape.
fn baseline_footprint(algo: Algo, dothash_dim: usize) -> (usize, usize) {
    match algo {
        Algo::MinHash => (MinHashSignature::DEFAULT_K * 8, MinHashSignature::DEFAULT_K),
        Algo::Hll => (1 << HllRegisters::DEFAULT_M, 1),
        Algo::MaxLogHash => (MaxLogHashState::DEFAULT_K * 5, MaxLogHashState::DEFAULT_K),
        Algo::DotHash => (dothash_dim * 8, 1),
        _ => unreachable!("not a baseline"),
    }
}

/// Sweep cells in output order. Baselines behind the exact adapter ignore
/// the memory and rows axes, so they get one cell per seed reporting their
/// own footprint.
pub fn cells(cfg: &ExperimentConfig) -> Vec<Cell> {
    let mut out = Vec::new();
    for &algo in &cfg.algos {
        if algo.is_baseline() && cfg.adapter == AdapterKind::Exact {
            let (memory_bytes, rows) = baseline_footprint(algo, cfg.dothash_dim);
            for &seed in &cfg.seeds {
                out.push(Cell {
                    algo,
                    adapter: Some(AdapterKind::Exact),
                    memory_bytes,
                    rows,
                    seed,
                    dothash_dim: cfg.dothash_dim,
                });
            }
            continue;
        }
        for &memory_bytes in &cfg.memory_bytes {
            for &rows in &cfg.rows {
                for &seed in &cfg.seeds {
                    out.push(Cell {
                        algo,
                        adapter: algo.is_baseline().then_some(cfg.adapter),
                        memory_bytes,
                        rows,
                        seed,
                        dothash_dim: cfg.dothash_dim,
                    });
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub algo: Algo,
    pub adapter: String,
    pub memory_bytes: usize,
    pub rows: usize,
    pub seed: u64,
    pub alpha: Option<f64>,
    pub j_true: f64,
    pub j_est_raw: f64,
    pub j_est: f64,
    pub re: Option<f64>,
    pub insert_mips: f64,
    pub estimate_ms: f64,
}

struct Timed {
    estimate: JaccardEstimate,
    insert_secs: f64,
    estimate_secs: f64,
}

fn run_pair<S, F>(make: F, a: &[ItemId], b: &[ItemId]) -> Result<Timed>
where
    S: SimilaritySketch,
    F: Fn() -> Result<S>,
{
    let mut sa = make()?;
    let mut sb = make()?;
    let t = Instant::now();
    sa.insert_all(a.iter().copied())?;
    sb.insert_all(b.iter().copied())?;
    let insert_secs = t.elapsed().as_secs_f64();
    let t = Instant::now();
    let estimate = sa.estimate(&sb)?;
    let estimate_secs = t.elapsed().as_secs_f64();
    Ok(Timed {
        estimate,
        insert_secs,
        estimate_secs,
    })
}

fn expander(cell: &Cell) -> Result<Expander> {
    match cell.adapter.unwrap_or(AdapterKind::Exact) {
        AdapterKind::Exact => Ok(Expander::exact()),
        AdapterKind::Cm => Ok(Expander::cm(SketchParams::from_budget(
            cell.memory_bytes,
            cell.rows,
            CmSimiSketch::SLOT_BYTES,
            cell.seed ^ EXPANDER_SALT,
        )?)),
    }
}

fn run_baseline<S, F>(cell: &Cell, make: F, a: &[ItemId], b: &[ItemId]) -> Result<Timed>
where
    S: SetSketch,
    F: Fn() -> Result<S>,
{
    run_pair(|| Ok(SetAdapted::new(expander(cell)?, make()?)), a, b)
}

fn run_timed(cell: &Cell, a: &[ItemId], b: &[ItemId]) -> Result<Timed> {
    let (mem, rows, seed) = (cell.memory_bytes, cell.rows, cell.seed);
    match cell.algo {
        Algo::Cm => run_pair(|| CmSimiSketch::with_budget(mem, rows, seed), a, b),
        Algo::Count => run_pair(|| CountSimiSketch::with_budget(mem, rows, seed), a, b),
        Algo::Formal => run_pair(|| FormalSimiSketch::with_budget(mem, rows, seed), a, b),
        Algo::Salsa => run_pair(|| SalsaSimiSketch::with_budget(mem, rows, seed), a, b),
        Algo::MinHash => run_baseline(
            cell,
            || Ok(MinHashSignature::new(MinHashSignature::DEFAULT_K, seed)),
            a,
            b,
        ),
        Algo::Hll => run_baseline(
            cell,
            || HllRegisters::new(HllRegisters::DEFAULT_M, HllRegisters::DEFAULT_N, seed),
            a,
            b,
        ),
        Algo::MaxLogHash => run_baseline(
            cell,
            || Ok(MaxLogHashState::new(MaxLogHashState::DEFAULT_K, seed)),
            a,
            b,
        ),
        Algo::DotHash => run_baseline(
            cell,
            || DotHashAccumulator::new(cell.dothash_dim, seed),
            a,
            b,
        ),
    }
}

/// Build, fill, and compare one pair of sketches on a dataset.
pub fn run_cell(cell: &Cell, data: &Dataset) -> Result<RunResult> {
    let timed = run_timed(cell, &data.a, &data.b)?;
    let re = match compute_re(timed.estimate.raw, data.j_true) {
        Ok(re) => Some(re),
        Err(Error::ZeroTruth) => None,
        Err(e) => return Err(e),
    };
    Ok(RunResult {
        algo: cell.algo,
        adapter: cell
            .adapter
            .map(|a| a.to_string())
            .unwrap_or_else(|| "none".into()),
        memory_bytes: cell.memory_bytes,
        rows: cell.rows,
        seed: cell.seed,
        alpha: data.alpha,
        j_true: data.j_true,
        j_est_raw: timed.estimate.raw,
        j_est: timed.estimate.value,
        re,
        insert_mips: compute_mips(data.items(), timed.insert_secs),
        estimate_ms: timed.estimate_secs * 1e3,
    })
}

/// A cell that could not produce a result.
#[derive(Debug)]
pub struct CellFailure {
    pub cell: Cell,
    pub alpha: Option<f64>,
    pub error: Error,
}

#[derive(Debug, Default)]
pub struct Report {
    pub results: Vec<RunResult>,
    pub failures: Vec<CellFailure>,
}

impl Report {
    pub fn is_complete(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Run every cell against every dataset. Failed cells are collected next to
/// the successful ones instead of discarding finished work.
pub fn run_on_datasets(cfg: &ExperimentConfig, datasets: &[Dataset]) -> Report {
    let grid = cells(cfg);
    let jobs: Vec<(&Dataset, Cell)> = datasets
        .iter()
        .flat_map(|d| grid.iter().map(move |c| (d, *c)))
        .collect();
    let run = |(d, c): &(&Dataset, Cell)| (d.alpha, *c, run_cell(c, d));
    let outcomes: Vec<_> = if cfg.sequential {
        jobs.iter().map(run).collect()
    } else {
        jobs.par_iter().map(run).collect()
    };
    let mut report = Report::default();
    for (alpha, cell, outcome) in outcomes {
        match outcome {
            Ok(r) => report.results.push(r),
            Err(error) => report.failures.push(CellFailure { cell, alpha, error }),
        }
    }
    report
}

/// Load the data, then run the sweep.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    let datasets = load_datasets(&cfg.data)?;
    Ok(run_on_datasets(cfg, &datasets))
}

/// Mean and standard deviation over seeds for one sweep point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub algo: Algo,
    pub adapter: String,
    pub memory_bytes: usize,
    pub rows: usize,
    pub alpha: Option<f64>,
    pub trials: usize,
    pub j_true: f64,
    pub mean_j_est: f64,
    pub std_j_est: f64,
    pub mean_re: Option<f64>,
    pub std_re: Option<f64>,
    pub mean_abs_re: Option<f64>,
    pub std_abs_re: Option<f64>,
    pub mean_insert_mips: f64,
}

pub fn summarize(results: &[RunResult]) -> Vec<SummaryRow> {
    type Key = (Algo, String, usize, usize, Option<u64>);
    let mut order: Vec<Key> = Vec::new();
    let mut groups: HashMap<Key, Vec<&RunResult>> = HashMap::new();
    for r in results {
        let key = (
            r.algo,
            r.adapter.clone(),
            r.memory_bytes,
            r.rows,
            r.alpha.map(f64::to_bits),
        );
        groups
            .entry(key.clone())
            .or_insert_with(|| {
                order.push(key);
                Vec::new()
            })
            .push(r);
    }
    order
        .into_iter()
        .map(|key| {
            let rs = &groups[&key];
            let est: Vec<f64> = rs.iter().map(|r| r.j_est_raw).collect();
            let re: Vec<f64> = rs.iter().filter_map(|r| r.re).collect();
            let abs_re: Vec<f64> = re.iter().map(|x| x.abs()).collect();
            let mips: Vec<f64> = rs.iter().map(|r| r.insert_mips).collect();
            let (mean_j_est, std_j_est) = mean_std(&est);
            let has_re = !re.is_empty();
            let (mean_re, std_re) = mean_std(&re);
            let (mean_abs_re, std_abs_re) = mean_std(&abs_re);
            SummaryRow {
                algo: key.0,
                adapter: key.1,
                memory_bytes: key.2,
                rows: key.3,
                alpha: key.4.map(f64::from_bits),
                trials: rs.len(),
                j_true: rs[0].j_true,
                mean_j_est,
                std_j_est,
                mean_re: has_re.then_some(mean_re),
                std_re: has_re.then_some(std_re),
                mean_abs_re: has_re.then_some(mean_abs_re),
                std_abs_re: has_re.then_some(std_abs_re),
                mean_insert_mips: mean_std(&mips).0,
            }
        })
        .collect()
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(io_err(path))
}

/// One JSON object per line.
pub fn write_jsonl_to<W: Write, T: Serialize>(mut w: W, rows: &[T]) -> Result<()> {
    for r in rows {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")
            .map_err(|e| Error::Json(serde_json::Error::io(e)))?;
    }
    Ok(())
}

pub fn write_jsonl<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path).map_err(io_err(path))?);
    write_jsonl_to(&mut w, rows)?;
    w.flush().map_err(io_err(path))
}

/// Write the per-cell CSV and whichever extras the config asks for.
pub fn write_outputs(out: &OutputConfig, results: &[RunResult]) -> Result<()> {
    write_csv(&out.csv, results)?;
    if out.jsonl {
        write_jsonl(&out.jsonl_path(), results)?;
    }
    if out.summary {
        write_csv(&out.summary_path(), &summarize(results))?;
    }
    Ok(())
}
