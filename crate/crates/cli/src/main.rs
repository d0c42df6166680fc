use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use simisketch::harness::{
    self, parse_size, run_cell, write_outputs, write_stream, Cell, Dataset, ExperimentConfig,
    StreamFormat,
};
use simisketch::{random_split, zipf_stream, AdapterKind, Algo, DotHashAccumulator, ZipfSpec};

#[derive(Parser)]
#[command(
    name = "simisketch",
    version,
    about = "Multiset Jaccard similarity sketches"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a Zipf stream, optionally split into a pair.
    GenZipf(GenZipf),
    /// Estimate the similarity of two stream files with one algorithm.
    Estimate(Estimate),
    /// Run a sweep described by a config file.
    Sweep(Sweep),
    /// Run the built-in invariant checks.
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Args)]
struct GenZipf {
    #[arg(long, default_value_t = 1_000_000)]
    n_items: usize,
    #[arg(long, default_value_t = 200_000)]
    n_distinct: usize,
    #[arg(long, default_value_t = 0.6)]
    alpha: f64,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Write the whole stream here.
    #[arg(long, conflicts_with_all = ["out_a", "out_b"], required_unless_present = "out_a")]
    out: Option<PathBuf>,
    /// Write the first half of a random split here.
    #[arg(long, requires = "out_b")]
    out_a: Option<PathBuf>,
    #[arg(long, requires = "out_a")]
    out_b: Option<PathBuf>,
    /// Probability of routing an element to the first output.
    #[arg(long, default_value_t = 0.5)]
    split_p: f64,
    #[arg(long, default_value = "binary")]
    format: StreamFormat,
}

#[derive(Args)]
struct Estimate {
    #[arg(long)]
    algo: Algo,
    a: PathBuf,
    b: PathBuf,
    #[arg(long, default_value = "text")]
    format: StreamFormat,
    /// Memory per sketch, e.g. 10KB or 2MB.
    #[arg(long, default_value = "100KB", value_parser = size_arg)]
    memory: usize,
    #[arg(long, default_value_t = 1)]
    rows: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Occurrence expander for the baselines.
    #[arg(long, default_value = "exact")]
    adapter: AdapterKind,
    #[arg(long, default_value_t = DotHashAccumulator::DEFAULT_DIM)]
    dothash_dim: usize,
    /// Print the result as a JSON object.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct Sweep {
    config: PathBuf,
    /// Override the config's output path.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Run cells one at a time.
    #[arg(long)]
    sequential: bool,
    #[arg(long)]
    jsonl: bool,
}

fn size_arg(s: &str) -> Result<usize, String> {
    parse_size(s).map_err(|e| e.to_string())
}

fn gen_zipf(args: GenZipf) -> Result<()> {
    let spec = ZipfSpec {
        n_items: args.n_items,
        n_distinct: args.n_distinct,
        alpha: args.alpha,
        seed: args.seed,
    };
    let stream = zipf_stream(&spec)?;
    match (args.out, args.out_a, args.out_b) {
        (Some(out), _, _) => {
            write_stream(&out, args.format, &stream)?;
            eprintln!("wrote {} items to {}", stream.len(), out.display());
        }
        (None, Some(a_path), Some(b_path)) => {
            let (a, b) = random_split(&stream, args.split_p, args.seed.wrapping_add(1))?;
            write_stream(&a_path, args.format, &a)?;
            write_stream(&b_path, args.format, &b)?;
            eprintln!(
                "wrote {} items to {} and {} to {}",
                a.len(),
                a_path.display(),
                b.len(),
                b_path.display()
            );
        }
        _ => bail!("give --out, or both --out-a and --out-b"),
    }
    Ok(())
}

fn estimate(args: Estimate) -> Result<()> {
    let a = harness::read_stream(&args.a, args.format)?;
    let b = harness::read_stream(&args.b, args.format)?;
    let data = Dataset::new(None, a, b)?;
    let cell = Cell {
        algo: args.algo,
        adapter: args.algo.is_baseline().then_some(args.adapter),
        memory_bytes: args.memory,
        rows: args.rows,
        seed: args.seed,
        dothash_dim: args.dothash_dim,
    };
    let r = run_cell(&cell, &data)?;
    if args.json {
        println!("{}", serde_json_line(&r)?);
    } else {
        println!("algo         {}", r.algo);
        println!("j_true       {:.6}", r.j_true);
        println!("j_est        {:.6} (raw {:.6})", r.j_est, r.j_est_raw);
        match r.re {
            Some(re) => println!("re           {:+.4}", re),
            None => println!("re           undefined (true similarity is 0)"),
        }
        println!("insert_mips  {:.2}", r.insert_mips);
        println!("estimate_ms  {:.3}", r.estimate_ms);
    }
    Ok(())
}

fn serde_json_line(r: &harness::RunResult) -> Result<String> {
    let mut buf = Vec::new();
    harness::write_jsonl_to(&mut buf, std::slice::from_ref(r))?;
    Ok(String::from_utf8(buf)?.trim_end().to_owned())
}

fn sweep(args: Sweep) -> Result<()> {
    let mut cfg = ExperimentConfig::from_path(&args.config)
        .with_context(|| format!("loading {}", args.config.display()))?;
    if let Some(out) = args.output {
        cfg.output.csv = out;
    }
    cfg.sequential |= args.sequential;
    cfg.output.jsonl |= args.jsonl;
    let report = harness::run_experiment(&cfg)?;
    write_outputs(&cfg.output, &report.results)?;
    eprintln!(
        "{} results written to {}",
        report.results.len(),
        cfg.output.csv.display()
    );
    if !report.failures.is_empty() {
        for f in &report.failures {
            eprintln!(
                "failed: {} memory={} rows={} seed={}: {}",
                f.cell.algo, f.cell.memory_bytes, f.cell.rows, f.cell.seed, f.error
            );
        }
        bail!("{} cells failed", report.failures.len());
    }
    Ok(())
}

fn selftest(seed: u64) -> Result<()> {
    let outcomes = harness::run_selftest(seed);
    let mut failed = 0;
    for o in &outcomes {
        println!(
            "{} {:<20} {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.name,
            o.detail
        );
        failed += !o.passed as usize;
    }
    if failed > 0 {
        bail!("{failed} of {} checks failed", outcomes.len());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::GenZipf(a) => gen_zipf(a),
        Command::Estimate(a) => estimate(a),
        Command::Sweep(a) => sweep(a),
        Command::Selftest { seed } => selftest(seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
