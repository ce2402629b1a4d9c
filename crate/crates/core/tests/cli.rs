use std::fs;
use std::process::{Command, Output};

fn qaos(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qaos")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn generate_then_solve() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = qaos(&["generate", "--n", "6", "--edge-prob", "0.4", "--weight-min", "1", "--weight-max", "5", "--count", "2", "--seed", "3", "--out", out]);
    assert!(o.status.success(), "{o:?}");
    let g0 = dir.path().join("graph_0000.json");
    assert!(g0.exists() && dir.path().join("graph_0001.json").exists());

    for alg in ["brute", "greedy", "random"] {
        let o = qaos(&["solve", "--graph", g0.to_str().unwrap(), "--alg", alg]);
        assert!(o.status.success());
        let text = stdout(&o);
        assert!(text.contains("schedule: ") && text.contains("weight: ") && text.contains("eta: "), "{text}");
    }
    let o = qaos(&["solve", "--graph", g0.to_str().unwrap(), "--alg", "brute"]);
    assert!(stdout(&o).contains("eta: 1 "));
}

#[test]
fn solve_qaos_on_small_graph() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g2.json");
    fs::write(&g, r#"{"n": 2, "weights": [1, 2], "edges": [[0, 1]]}"#).unwrap();
    let o = qaos(&["solve", "--graph", g.to_str().unwrap(), "--alg", "qaos", "--p", "3", "--epochs", "50", "--seed", "4"]);
    assert!(o.status.success(), "{o:?}");
    let text = stdout(&o);
    assert!(text.contains("schedule: 01\n"), "{text}");
    assert!(text.contains("eta: 1 "), "{text}");
}

#[test]
fn bench_and_cdf_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| dir.path().join(name).to_str().unwrap().to_owned();
    fs::write(p("cfg.json"), r#"{"graph_count": 4, "algorithms": ["greedy", "random", "brute"], "master_seed": 11}"#).unwrap();
    let o = qaos(&["bench", "--config", &p("cfg.json"), "--out-records", &p("r.csv"), "--out-summary", &p("s.csv"), "--workers", "2"]);
    assert!(o.status.success(), "{o:?}");
    let records = fs::read_to_string(p("r.csv")).unwrap();
    assert_eq!(records.lines().count(), 13);
    let summary = fs::read_to_string(p("s.csv")).unwrap();
    assert_eq!(summary.lines().next().unwrap(), "algorithm,p,trials,optimal_rate,mean_eta");
    assert_eq!(summary.lines().count(), 4);

    let o = qaos(&["cdf", "--in", &p("r.csv"), "--out", &p("c.csv")]);
    assert!(o.status.success(), "{o:?}");
    let cdf = fs::read_to_string(p("c.csv")).unwrap();
    assert_eq!(cdf.lines().next().unwrap(), "algorithm,p,eta,cdf");
    assert!(cdf.lines().any(|l| l == "brute,0,1.0,1.0" || l == "brute,0,1,1"), "{cdf}");
}

#[test]
fn exit_codes() {
    assert_eq!(qaos(&["solve"]).status.code(), Some(1));
    assert_eq!(qaos(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(qaos(&["--help"]).status.code(), Some(0));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"n": 2, "weights": [1, 0], "edges": []}"#).unwrap();
    let o = qaos(&["solve", "--graph", bad.to_str().unwrap(), "--alg", "greedy"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("weight of node 1"));

    let o = qaos(&["generate", "--n", "5", "--edge-prob", "2.0", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));

    let missing = dir.path().join("missing.json");
    let o = qaos(&["solve", "--graph", missing.to_str().unwrap(), "--alg", "greedy"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing.json"));
}
