//! End-to-end tests of the `harsanyi` binary: every command, the exit
//! code contract, manifest integrity, and output determinism.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::OnceLock;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_harsanyi")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary spawns")
}

fn run_ok(args: &[&str]) -> Output {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {:?} failed:\n{}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

/// One shared toy suite per test binary; tests treat it as read-only.
fn suite_dir() -> &'static Path {
    static DIR: OnceLock<PathBuf> = OnceLock::new();
    DIR.get_or_init(|| {
        let dir = std::env::temp_dir().join(format!("harsanyi-cli-test-{}", std::process::id()));
        run_ok(&[
            "gen-toy",
            "--variables",
            "8",
            "--out",
            dir.to_str().unwrap(),
            "--force",
        ]);
        dir
    })
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_toy_is_deterministic_and_structured() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        run_ok(&[
            "gen-toy",
            "--variables",
            "4",
            "--out",
            path(dir.path()),
            "--force",
        ]);
    }
    let ma = fs::read(a.path().join("manifest.json")).unwrap();
    let mb = fs::read(b.path().join("manifest.json")).unwrap();
    assert_eq!(ma, mb, "same seed must produce byte-identical manifests");

    // n=8 suite: 2 checkpoint series, 3 final models, probe, datasets.
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(suite_dir().join("manifest.json")).unwrap())
            .unwrap();
    let entries = manifest["entries"].as_array().unwrap();
    let kind_count = |kind: &str| {
        entries
            .iter()
            .filter(|e| e["kind"].as_str() == Some(kind))
            .count()
    };
    assert_eq!(kind_count("model"), 3);
    assert_eq!(kind_count("probe"), 1);
    assert_eq!(kind_count("dataset"), 3);
    let series: std::collections::BTreeSet<&str> = entries
        .iter()
        .filter(|e| e["kind"].as_str() == Some("checkpoint"))
        .map(|e| {
            let p = e["path"].as_str().unwrap();
            p.rsplit_once('/').map(|(dir, _)| dir).unwrap_or(p)
        })
        .collect();
    assert_eq!(series.len(), 2, "two checkpoint series: {series:?}");
}

#[test]
fn gen_toy_refuses_to_overwrite_without_force() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("precious.txt"), "data").unwrap();
    let out = run(&["gen-toy", "--variables", "4", "--out", path(dir.path())]);
    assert_eq!(exit_code(&out), 2);
    assert!(dir.path().join("precious.txt").exists());
}

#[test]
fn generated_finetune_beats_scratch_at_matched_epochs() {
    let acc = fs::read_to_string(suite_dir().join("accuracy.csv")).unwrap();
    let mut fine = Vec::new();
    let mut rand = Vec::new();
    for line in acc.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let value: f64 = cols[2].parse().unwrap();
        match cols[0] {
            "finetune" => fine.push(value),
            "random" => rand.push(value),
            other => panic!("unexpected variant {other}"),
        }
    }
    assert_eq!(fine.len(), rand.len());
    assert!(fine[0] > rand[0], "epoch 1: {} vs {}", fine[0], rand[0]);
    for (e, (f, r)) in fine.iter().zip(&rand).enumerate() {
        assert!(f >= r, "epoch {}: finetune {f} trails scratch {r}", e + 1);
    }
}

#[test]
fn table_writes_one_file_per_sample() {
    let suite = suite_dir();
    let out = tempfile::tempdir().unwrap();
    run_ok(&[
        "table",
        "--model",
        path(&suite.join("model_finetune.txt")),
        "--dataset",
        path(&suite.join("dataset_eval.txt")),
        "--max-samples",
        "5",
        "--out",
        path(out.path()),
        "--debug-csv",
    ]);
    let motb: Vec<_> = fs::read_dir(out.path())
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.path().extension().map(|x| x == "motb").unwrap_or(false))
        .collect();
    assert_eq!(motb.len(), 5);
    let csv = fs::read_to_string(out.path().join("sample_0000.csv")).unwrap();
    assert!(csv.starts_with("mask,value\n"));
    assert_eq!(csv.lines().count(), 1 + 256); // header + 2^8 masks
}

#[test]
fn probe_scorer_requires_probe_file() {
    let suite = suite_dir();
    let out = tempfile::tempdir().unwrap();
    let result = run(&[
        "table",
        "--model",
        path(&suite.join("model_backbone.txt")),
        "--dataset",
        path(&suite.join("dataset_eval.txt")),
        "--scorer",
        "probe",
        "--out",
        path(out.path()),
    ]);
    assert_eq!(exit_code(&result), 2);
    assert!(String::from_utf8_lossy(&result.stderr).contains("--probe"));
}

#[test]
fn interactions_are_deterministic_and_manifest_guarded() {
    let suite = suite_dir();
    let tables = tempfile::tempdir().unwrap();
    run_ok(&[
        "table",
        "--model",
        path(&suite.join("model_finetune.txt")),
        "--dataset",
        path(&suite.join("dataset_eval.txt")),
        "--max-samples",
        "3",
        "--out",
        path(tables.path()),
    ]);

    // Same inputs with different worker counts must be byte-identical.
    let v1 = tempfile::tempdir().unwrap();
    let v2 = tempfile::tempdir().unwrap();
    for (v, jobs) in [(&v1, "1"), (&v2, "4")] {
        run_ok(&[
            "interactions",
            "--jobs",
            jobs,
            "--tables",
            path(tables.path()),
            "--out",
            path(v.path()),
        ]);
    }
    assert_eq!(
        fs::read(v1.path().join("sample_0000.hivb")).unwrap(),
        fs::read(v2.path().join("sample_0000.hivb")).unwrap()
    );
    assert_eq!(
        fs::read(v1.path().join("sparsity.csv")).unwrap(),
        fs::read(v2.path().join("sparsity.csv")).unwrap()
    );

    // Corrupt one table: the manifest check must fail the command.
    let victim = tables.path().join("sample_0001.motb");
    let mut bytes = fs::read(&victim).unwrap();
    let last = bytes.len() - 1;
    bytes[last] ^= 0xff;
    fs::write(&victim, bytes).unwrap();
    let out3 = tempfile::tempdir().unwrap();
    let failed = run(&[
        "interactions",
        "--tables",
        path(tables.path()),
        "--out",
        path(out3.path()),
    ]);
    assert_eq!(exit_code(&failed), 1);
    assert!(String::from_utf8_lossy(&failed.stderr).contains("hash mismatch"));
}

#[test]
fn decompose_identical_directories_preserve_everything() {
    let suite = suite_dir();
    let tables = tempfile::tempdir().unwrap();
    run_ok(&[
        "table",
        "--model",
        path(&suite.join("model_finetune.txt")),
        "--dataset",
        path(&suite.join("dataset_eval.txt")),
        "--max-samples",
        "4",
        "--out",
        path(tables.path()),
    ]);
    let vectors = tempfile::tempdir().unwrap();
    run_ok(&[
        "interactions",
        "--tables",
        path(tables.path()),
        "--out",
        path(vectors.path()),
    ]);

    let out = tempfile::tempdir().unwrap();
    run_ok(&[
        "decompose",
        "--pre",
        path(vectors.path()),
        "--fine",
        path(vectors.path()),
        "--rand",
        path(vectors.path()),
        "--out",
        path(out.path()),
        "--dump-subsets",
    ]);

    let report = fs::read_to_string(out.path().join("decomposition.csv")).unwrap();
    for line in report.lines().skip(1) {
        let cols: Vec<f64> = line
            .split(',')
            .skip(1)
            .map(|c| c.parse().unwrap())
            .collect();
        let (pretrain, finetune, preserve, discard, new) =
            (cols[0], cols[1], cols[2], cols[3], cols[4]);
        assert_eq!(discard, 0.0);
        assert_eq!(new, 0.0);
        assert_eq!(preserve, pretrain);
        assert_eq!(preserve, finetune);
    }

    // rand = fine = pre: every defined ratio is exactly 1.
    let ratio = fs::read_to_string(out.path().join("ratio.csv")).unwrap();
    let all_row = ratio.lines().last().unwrap();
    let cols: Vec<&str> = all_row.split(',').collect();
    assert_eq!(cols[0], "all");
    assert_eq!(cols[1].parse::<f64>().unwrap(), 1.0);

    assert!(out.path().join("subsets.csv").exists());
}

#[test]
fn decompose_rejects_misaligned_directories() {
    let suite = suite_dir();
    let t2 = tempfile::tempdir().unwrap();
    let t3 = tempfile::tempdir().unwrap();
    for (dir, count) in [(&t2, "2"), (&t3, "3")] {
        run_ok(&[
            "table",
            "--model",
            path(&suite.join("model_finetune.txt")),
            "--dataset",
            path(&suite.join("dataset_eval.txt")),
            "--max-samples",
            count,
            "--out",
            path(dir.path()),
        ]);
    }
    let v2 = tempfile::tempdir().unwrap();
    let v3 = tempfile::tempdir().unwrap();
    run_ok(&[
        "interactions",
        "--tables",
        path(t2.path()),
        "--out",
        path(v2.path()),
    ]);
    run_ok(&[
        "interactions",
        "--tables",
        path(t3.path()),
        "--out",
        path(v3.path()),
    ]);

    let out = tempfile::tempdir().unwrap();
    let failed = run(&[
        "decompose",
        "--pre",
        path(v2.path()),
        "--fine",
        path(v3.path()),
        "--out",
        path(out.path()),
    ]);
    assert_eq!(exit_code(&failed), 2);
    assert!(String::from_utf8_lossy(&failed.stderr).contains("misalignment"));
}

#[test]
fn trajectory_needs_two_epochs_and_renders_a_chart() {
    let suite = suite_dir();
    let mut vector_dirs = Vec::new();
    for epoch in ["epoch_01", "epoch_16"] {
        let tables = tempfile::tempdir().unwrap();
        run_ok(&[
            "table",
            "--model",
            path(
                &suite
                    .join("checkpoints/finetune")
                    .join(format!("{epoch}.txt")),
            ),
            "--dataset",
            path(&suite.join("dataset_eval.txt")),
            "--max-samples",
            "3",
            "--out",
            path(tables.path()),
        ]);
        let vectors = tempfile::tempdir().unwrap();
        run_ok(&[
            "interactions",
            "--tables",
            path(tables.path()),
            "--out",
            path(vectors.path()),
        ]);
        vector_dirs.push((tables, vectors));
    }

    let out = tempfile::tempdir().unwrap();
    let single = run(&[
        "trajectory",
        "--finetune-epochs",
        path(vector_dirs[0].1.path()),
        "--out",
        path(out.path()),
    ]);
    assert_eq!(exit_code(&single), 2);

    run_ok(&[
        "trajectory",
        "--finetune-epochs",
        path(vector_dirs[0].1.path()),
        path(vector_dirs[1].1.path()),
        "--random-epochs",
        path(vector_dirs[0].1.path()),
        path(vector_dirs[1].1.path()),
        "--chart",
        "--out",
        path(out.path()),
    ]);
    let csv = fs::read_to_string(out.path().join("trajectory.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "variant,epoch,jaccard,samples_n");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 4);
    assert!(rows[1].starts_with("finetune,2,1,"));
    assert!(rows[3].starts_with("random,2,1,"));

    let svg = fs::read_to_string(out.path().join("trajectory.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("<polyline").count(), 2);
}

#[test]
fn trajectory_zero_then_final_is_zero_then_one() {
    // Hand-built vector files: epoch 1 all-zero, epoch 2 nonzero.
    let e1 = tempfile::tempdir().unwrap();
    let e2 = tempfile::tempdir().unwrap();
    let zero = lattice_core::InteractionVector::new(2, vec![0.0; 4]).unwrap();
    let fin = lattice_core::InteractionVector::new(2, vec![1.0, -2.0, 0.5, 3.0]).unwrap();
    lattice_core::io::write_vector_file(&e1.path().join("sample_0000.hivb"), &zero).unwrap();
    lattice_core::io::write_vector_file(&e2.path().join("sample_0000.hivb"), &fin).unwrap();

    let out = tempfile::tempdir().unwrap();
    run_ok(&[
        "trajectory",
        "--random-epochs",
        path(e1.path()),
        path(e2.path()),
        "--out",
        path(out.path()),
    ]);
    let csv = fs::read_to_string(out.path().join("trajectory.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows[0], "random,1,0,1");
    assert_eq!(rows[1], "random,2,1,1");
}

#[test]
fn jsonl_format_is_available() {
    let e1 = tempfile::tempdir().unwrap();
    let e2 = tempfile::tempdir().unwrap();
    let fin = lattice_core::InteractionVector::new(1, vec![1.0, -1.0]).unwrap();
    lattice_core::io::write_vector_file(&e1.path().join("s.hivb"), &fin).unwrap();
    lattice_core::io::write_vector_file(&e2.path().join("s.hivb"), &fin).unwrap();
    let out = tempfile::tempdir().unwrap();
    run_ok(&[
        "trajectory",
        "--format",
        "jsonl",
        "--finetune-epochs",
        path(e1.path()),
        path(e2.path()),
        "--out",
        path(out.path()),
    ]);
    let text = fs::read_to_string(out.path().join("trajectory.jsonl")).unwrap();
    let row: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(row["variant"], "finetune");
    assert_eq!(row["jaccard"], 1.0);
}

#[test]
fn verify_passes_and_fault_injection_fails() {
    let start = std::time::Instant::now();
    let ok = run_ok(&["verify", "--n-max", "4"]);
    assert!(
        start.elapsed().as_secs_f64() < 1.0,
        "verify --n-max 4 over budget"
    );
    let stdout = String::from_utf8_lossy(&ok.stdout);
    assert_eq!(stdout.matches("PASS").count(), 5);

    let bad = run(&["verify", "--n-max", "4", "--inject-fault"]);
    assert_eq!(exit_code(&bad), 1);
    assert!(String::from_utf8_lossy(&bad.stdout).contains("FAIL"));

    let usage = run(&["verify", "--n-max", "13"]);
    assert_eq!(exit_code(&usage), 2);
}

#[test]
fn additive_tables_and_full_mask_scores_check_out_end_to_end() {
    // A linear two-class model written through the text format.
    let dir = tempfile::tempdir().unwrap();
    let model = model_eval::PortableModel::new(vec![model_eval::Layer::new(
        2,
        4,
        vec![0.4, -0.3, 0.2, 0.1, -0.1, 0.2, -0.4, 0.3],
        vec![0.05, -0.05],
        model_eval::Activation::Identity,
    )
    .unwrap()])
    .unwrap();
    let model_path = dir.path().join("linear.txt");
    model_eval::format::write_model_file(&model_path, &model).unwrap();

    let samples = vec![
        model_eval::Sample::from_concat(&[1.0, -0.5, 0.25, 2.0], &[1; 4], 0).unwrap(),
        model_eval::Sample::from_concat(&[-1.0, 0.5, 1.5, -0.25], &[1; 4], 1).unwrap(),
    ];
    let dataset = model_eval::Dataset::new(vec![1; 4], samples.clone(), None).unwrap();
    let dataset_path = dir.path().join("data.txt");
    model_eval::format::write_dataset_file(&dataset_path, &dataset).unwrap();

    let tables = tempfile::tempdir().unwrap();
    run_ok(&[
        "table",
        "--model",
        path(&model_path),
        "--dataset",
        path(&dataset_path),
        "--out",
        path(tables.path()),
    ]);

    // Full-mask entry equals an independently computed forward score.
    let table =
        lattice_core::io::read_table_file(&tables.path().join("sample_0000.motb")).unwrap();
    let logits = model.forward(&samples[0].concat()).unwrap();
    let probs = model_eval::softmax(&logits);
    let expected = model_eval::confidence_logodds(probs[0]);
    assert_eq!(table.values()[15], expected);

    // A linear model is an additive game: at most n salient subsets.
    let vectors = tempfile::tempdir().unwrap();
    run_ok(&[
        "interactions",
        "--tables",
        path(tables.path()),
        "--out",
        path(vectors.path()),
    ]);
    let sparsity = fs::read_to_string(vectors.path().join("sparsity.csv")).unwrap();
    for line in sparsity.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        if cols[0] == "all" {
            continue;
        }
        let salient: usize = cols[3].parse().unwrap();
        let residual: f64 = cols[5].parse().unwrap();
        // Singletons plus at most the empty set (I(∅) is the baseline
        // score and gets no special-casing).
        assert!(salient <= 5, "additive game kept {salient} subsets");
        assert!(residual <= 1e-9);
    }
}
