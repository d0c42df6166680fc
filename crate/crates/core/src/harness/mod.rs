//! Stream ingestion, error metrics, and experiment sweeps.

pub mod config;
pub mod experiment;
pub mod ingest;
pub mod metrics;
pub mod selftest;

pub use config::{parse_size, DataSource, ExperimentConfig, OutputConfig};
pub use experiment::{
    cells, load_datasets, run_cell, run_experiment, run_on_datasets, summarize, write_csv,
    write_jsonl, write_jsonl_to, write_outputs, Cell, CellFailure, Dataset, Report, RunResult,
    SummaryRow,
};
pub use ingest::{pair_id, read_stream, token_id, write_stream, StreamFormat};
pub use metrics::{compute_mips, compute_re, mean_std};
pub use selftest::{run_selftest, CheckOutcome};
