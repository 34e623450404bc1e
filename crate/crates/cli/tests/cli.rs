//! End-to-end runs of the `bandlimit` binary.

use bandlimit_core::{gft_basis, io as core_io, synth_bandlimited, ShiftKind};
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bandlimit"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn gen_graph(dir: &Path, n: usize, p: f64, seed: u64) -> std::path::PathBuf {
    let path = dir.join("graph.edges");
    let out = run(&[
        "gen-graph",
        "--n",
        &n.to_string(),
        "--edge-prob",
        &p.to_string(),
        "--seed",
        &seed.to_string(),
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "gen-graph failed: {out:?}");
    path
}

#[test]
fn gen_graph_writes_a_deterministic_edge_list() {
    let dir = tempfile::tempdir().unwrap();
    let p1 = gen_graph(dir.path(), 20, 0.3, 7);
    let text1 = std::fs::read_to_string(&p1).unwrap();
    assert!(text1.starts_with("n=20\n"), "{text1}");

    let p2 = dir.path().join("again.edges");
    let out = run(&[
        "gen-graph", "--n", "20", "--edge-prob", "0.3", "--seed", "7", "--out",
        p2.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(text1, std::fs::read_to_string(&p2).unwrap());

    // Ingestable by the library.
    let g: bandlimit_core::Graph<f64> = core_io::read_edge_list(&p1, 0.01).unwrap();
    assert_eq!(g.n(), 20);
}

#[test]
fn recover_support_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let graph_path = gen_graph(dir.path(), 24, 0.4, 11);

    let g: bandlimit_core::Graph<f64> = core_io::read_edge_list(&graph_path, 0.01).unwrap();
    let basis = gft_basis(&g, ShiftKind::Adjacency).unwrap();
    let truth = vec![1usize, 4, 9, 15];
    let columns: Vec<Vec<f64>> = (0..3)
        .map(|j| {
            synth_bandlimited(&basis, &truth, 2.0, 100 + j)
                .unwrap()
                .values()
                .to_vec()
        })
        .collect();
    let y = bandlimit_core::ObservationBatch::from_columns(&columns).unwrap();
    let y_path = dir.path().join("y.csv");
    core_io::write_matrix_csv(&y_path, y.y()).unwrap();

    let out = run(&[
        "recover-support",
        "--signals",
        y_path.to_str().unwrap(),
        "--basis-from",
        graph_path.to_str().unwrap(),
        "--k",
        "4",
    ]);
    assert!(out.status.success(), "{out:?}");
    let value: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    let support: Vec<usize> = value["support"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap() as usize)
        .collect();
    assert_eq!(support, truth);
    assert!(value["zeta"].as_f64().unwrap() > 0.0);
    assert!(value.get("xbar_hat").is_none(), "coefficients are not serialized");
}

#[test]
fn sample_then_reconstruct_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let graph_path = gen_graph(dir.path(), 30, 0.35, 3);

    let set_path = dir.path().join("set.json");
    let out = run(&[
        "sample",
        "--basis-from",
        graph_path.to_str().unwrap(),
        "--k",
        "5",
        "--out",
        set_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    let set: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&set_path).unwrap()).unwrap();
    let indices: Vec<usize> = set["indices"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap() as usize)
        .collect();
    assert_eq!(indices.len(), 5);

    // Build the same basis the binary used and synthesize a 5-bandlimited
    // signal on the first five frequencies.
    let g: bandlimit_core::Graph<f64> = core_io::read_edge_list(&graph_path, 0.01).unwrap();
    let basis = gft_basis(&g, ShiftKind::Adjacency).unwrap();
    let support = basis.first_k(5).unwrap();
    let sig = synth_bandlimited(&basis, &support, 3.0, 55).unwrap();

    let samples: Vec<f64> = indices.iter().map(|&i| sig.values()[i]).collect();
    let samples_path = dir.path().join("samples.csv");
    core_io::write_vector_csv(&samples_path, &samples).unwrap();
    let truth_path = dir.path().join("truth.csv");
    core_io::write_vector_csv(&truth_path, sig.values()).unwrap();

    let out = run(&[
        "reconstruct",
        "--basis-from",
        graph_path.to_str().unwrap(),
        "--k",
        "5",
        "--samples",
        samples_path.to_str().unwrap(),
        "--set",
        set_path.to_str().unwrap(),
        "--truth",
        truth_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    let value: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    let err = value["recovery_error"].as_f64().unwrap();
    assert!(err <= 1e-20, "recovery error {err}");
    assert!(value["condition"].as_f64().unwrap() > 0.0);
}

#[test]
fn unknown_flag_exits_one() {
    let out = run(&["sample", "--definitely-not-a-flag", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.to_lowercase().contains("usage") || stderr.contains("error"), "{stderr}");
}

#[test]
fn missing_required_argument_exits_one() {
    let out = run(&["gen-graph", "--n", "10"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_zero() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_str(&out).contains("bandlimit"));
}

#[test]
fn invalid_probability_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "gen-graph",
        "--n",
        "10",
        "--edge-prob",
        "1.5",
        "--out",
        dir.path().join("g.edges").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn non_positive_definite_covariance_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let graph_path = gen_graph(dir.path(), 12, 0.5, 9);

    let set_path = dir.path().join("set.json");
    let out = run(&[
        "sample",
        "--basis-from",
        graph_path.to_str().unwrap(),
        "--k",
        "3",
        "--out",
        set_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    let samples_path = dir.path().join("samples.csv");
    core_io::write_vector_csv(&samples_path, &[0.5f64, -0.25, 0.125]).unwrap();

    // Indefinite "covariance": -I.
    let mut q = bandlimit_core::DenseMatrix::<f64>::identity(12);
    q = q.scale(-1.0);
    let q_path = dir.path().join("q.csv");
    core_io::write_matrix_csv(&q_path, &q).unwrap();

    let out = run(&[
        "reconstruct",
        "--basis-from",
        graph_path.to_str().unwrap(),
        "--k",
        "3",
        "--samples",
        samples_path.to_str().unwrap(),
        "--set",
        set_path.to_str().unwrap(),
        "--q",
        q_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
}

#[test]
fn uniform_sample_is_seed_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let graph_path = gen_graph(dir.path(), 16, 0.4, 2);
    let args = [
        "sample",
        "--basis-from",
        graph_path.to_str().unwrap(),
        "--k",
        "4",
        "--scheme",
        "uniform",
        "--seed",
        "77",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(stdout_str(&a), stdout_str(&b));
}

#[test]
fn experiment_writes_results_next_to_config_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("exp.toml");
    std::fs::write(
        &cfg_path,
        r#"
experiment = "sampling_vs_k"
n = 20
edge_prob = 0.4
k_grid = [3, 4]
m = "equal_k"
coeff_std = 1.0
trials = 4
seed = 5
schemes = ["iterative", "uniform"]

[noise]
kind = "isotropic"
std = 0.02
"#,
    )
    .unwrap();

    let out = run(&["experiment", "--config", cfg_path.to_str().unwrap()]);
    assert!(out.status.success(), "{out:?}");
    let csv_path = dir.path().join("results.csv");
    let json_path = dir.path().join("results.json");
    assert!(csv_path.exists() && json_path.exists());

    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert!(csv.starts_with("scheme,param,mean_error,std_error,success_rate,trials\n"));
    assert_eq!(csv.lines().count(), 1 + 4, "one row per scheme per k:\n{csv}");

    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(json["config"]["seed"].as_u64(), Some(5));
    assert_eq!(json["rows"].as_array().unwrap().len(), 4);
    assert!(json["version"].as_str().unwrap().contains('.'));

    // Same run pinned to one thread into a second directory: byte-identical.
    let dir2 = dir.path().join("rerun");
    let out = run(&[
        "experiment",
        "--config",
        cfg_path.to_str().unwrap(),
        "--threads",
        "1",
        "--out",
        dir2.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    assert_eq!(csv, std::fs::read_to_string(dir2.join("results.csv")).unwrap());
    assert_eq!(
        std::fs::read_to_string(&json_path).unwrap(),
        std::fs::read_to_string(dir2.join("results.json")).unwrap()
    );
}

#[test]
fn experiment_seed_override_changes_results() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("exp.toml");
    std::fs::write(
        &cfg_path,
        r#"
experiment = "sampling_vs_k"
n = 16
edge_prob = 0.4
k_grid = [3]
trials = 3
seed = 1
schemes = ["uniform"]

[noise]
kind = "white_snr"
snr_db = 10.0
"#,
    )
    .unwrap();
    let out = run(&["experiment", "--config", cfg_path.to_str().unwrap()]);
    assert!(out.status.success(), "{out:?}");
    let base = std::fs::read_to_string(dir.path().join("results.csv")).unwrap();

    let dir2 = dir.path().join("other-seed");
    let out = run(&[
        "experiment",
        "--config",
        cfg_path.to_str().unwrap(),
        "--seed",
        "999",
        "--out",
        dir2.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    let other = std::fs::read_to_string(dir2.join("results.csv")).unwrap();
    assert_ne!(base, other);
}

#[test]
fn experiment_with_invalid_config_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("bad.toml");
    std::fs::write(
        &cfg_path,
        r#"
experiment = "sampling_vs_k"
n = 10
k_grid = []
trials = 1
seed = 0
"#,
    )
    .unwrap();
    let out = run(&["experiment", "--config", cfg_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "{out:?}");
}
