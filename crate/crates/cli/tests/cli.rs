use std::fs;
use std::process::{Command, Output};

fn simisketch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_simisketch"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn estimate_on_text_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    fs::write(&a, "a\nrose\nis\na\nrose\n").unwrap();
    fs::write(&b, "a\nrose\nrose\nrose\n").unwrap();
    let a = a.to_str().unwrap();
    let b = b.to_str().unwrap();

    // A = {a:2, rose:2, is:1}, B = {a:1, rose:3}: J = 3/6
    let out = simisketch(&["estimate", "--algo", "formal", "--memory", "64KB", a, b]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    assert!(text.contains("j_true       0.500000"), "{text}");

    let out = simisketch(&["estimate", "--algo", "minhash", "--json", a, b]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(
        text.starts_with('{') && text.contains("\"algo\":\"minhash\""),
        "{text}"
    );
}

#[test]
fn gen_zipf_then_estimate_binary() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.bin");
    let b = dir.path().join("b.bin");
    let out = simisketch(&[
        "gen-zipf",
        "--n-items",
        "20000",
        "--n-distinct",
        "1000",
        "--alpha",
        "0.8",
        "--out-a",
        a.to_str().unwrap(),
        "--out-b",
        b.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let total = fs::metadata(&a).unwrap().len() + fs::metadata(&b).unwrap().len();
    assert_eq!(total, 20000 * 8);

    for algo in [
        "cm",
        "count",
        "formal",
        "salsa",
        "hll",
        "maxloghash",
        "dothash",
    ] {
        let out = simisketch(&[
            "estimate",
            "--algo",
            algo,
            "--format",
            "binary",
            a.to_str().unwrap(),
            b.to_str().unwrap(),
        ]);
        assert!(
            out.status.success(),
            "{algo}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn malformed_input_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.bin");
    fs::write(&a, [0u8; 12]).unwrap();
    let out = simisketch(&[
        "estimate",
        "--algo",
        "cm",
        "--format",
        "binary",
        a.to_str().unwrap(),
        a.to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("offset 8"));
}

#[test]
fn sweep_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.toml");
    fs::write(
        &cfg,
        r#"
algos = ["cm", "formal"]
memory = ["4KB", "16KB"]
rows = [1, 2]
seeds = 3
alpha = [0.6]
n_items = 20000
n_distinct = 2000
output = "out.csv"
"#,
    )
    .unwrap();
    let out_csv = dir.path().join("out.csv");
    let out = simisketch(&[
        "sweep",
        cfg.to_str().unwrap(),
        "--output",
        out_csv.to_str().unwrap(),
        "--jsonl",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = fs::read_to_string(&out_csv).unwrap();
    assert_eq!(csv.lines().count(), 1 + 2 * 2 * 2 * 3);
    assert!(dir.path().join("out_summary.csv").exists());
    assert!(dir.path().join("out.jsonl").exists());
}

#[test]
fn sweep_with_failing_cells_still_writes_results() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.toml");
    let out_csv = dir.path().join("partial.csv");
    fs::write(
        &cfg,
        format!(
            "algos = [\"formal\"]\nmemory = [4, 4096]\nseeds = 2\nn_items = 5000\nn_distinct = 500\noutput = {:?}\n",
            out_csv.to_str().unwrap()
        ),
    )
    .unwrap();
    let out = simisketch(&["sweep", cfg.to_str().unwrap()]);
    assert!(!out.status.success());
    assert_eq!(fs::read_to_string(&out_csv).unwrap().lines().count(), 1 + 2);
}

#[test]
fn selftest_passes() {
    let out = simisketch(&["selftest"]);
    assert!(out.status.success(), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.lines().all(|l| l.starts_with("PASS")), "{text}");
}

#[test]
fn bad_arguments_fail() {
    assert!(!simisketch(&["estimate", "--algo", "nope", "x", "y"])
        .status
        .success());
    assert!(!simisketch(&["gen-zipf"]).status.success());
}

#[test]
fn shipped_configs_parse() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut n = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            simisketch::harness::ExperimentConfig::from_path(&path)
                .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            n += 1;
        }
    }
    assert!(n >= 4);
}
