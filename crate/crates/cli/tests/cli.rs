use std::process::{Command, Output};

fn cyclerls(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyclerls"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn run_reports_json() {
    let o = cyclerls(&["--seed", "3", "run", "--n", "20"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["final_fitness"]["cardinality"], 7);
    assert_eq!(v["seed"], 3);
    let again = cyclerls(&["--seed", "3", "run", "--n", "20"]);
    assert_eq!(stdout(&o), stdout(&again));
}

#[test]
fn experiment_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.cfg");
    let plot = dir.path().join("plot.csv");
    let raw = dir.path().join("raw.csv");
    std::fs::write(&cfg, "kind = feasibility\nn = 20, 40\nseeds = 5\n").unwrap();
    let o = cyclerls(&[
        "--jobs",
        "1",
        "experiment",
        "--config",
        cfg.to_str().unwrap(),
        "--set",
        &format!("plot_out={}", plot.display()),
        "--set",
        &format!("raw_out={}", raw.display()),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("n,mean,se,bound,runs,capped\n"));
    let plot = std::fs::read_to_string(plot).unwrap();
    assert!(plot.starts_with("n,mean,se,bound\n"));
    assert!(plot.ends_with('\n'));
    let raw = std::fs::read_to_string(raw).unwrap();
    assert_eq!(raw.lines().count(), 11);
    assert!(raw.lines().skip(1).all(|l| l.ends_with(",ok")));
}

#[test]
fn capped_runs_fail_the_bound_check() {
    let o = cyclerls(&["experiment", "--set", "n=30", "--set", "seeds=2", "--set", "cap=1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(cyclerls(&["experiment", "--set", "n="]).status.code(), Some(1));
    assert_eq!(cyclerls(&["experiment", "--set", "n=40,20"]).status.code(), Some(1));
    assert_eq!(cyclerls(&["bogus"]).status.code(), Some(1));
    assert_eq!(cyclerls(&["equivalence", "--max-n", "30"]).status.code(), Some(1));
    assert_eq!(cyclerls(&["run", "--n", "2"]).status.code(), Some(1));
}

#[test]
fn census_csv() {
    let o = cyclerls(&["census", "--n", "6", "--k", "2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "n,k,total,redundant,minimal\n6,2,3,0,3\n");
}

#[test]
fn resistance_from_edge_list() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("net.txt");
    std::fs::write(&edges, "# series pair\n0 1 1\n1 2 0.5\n").unwrap();
    let o = cyclerls(&["resistance", "--edges", edges.to_str().unwrap()]);
    assert!(o.status.success());
    let last = stdout(&o).lines().last().unwrap().to_string();
    let r: f64 = last.rsplit(',').next().unwrap().parse().unwrap();
    assert!((r - 3.0).abs() < 1e-12);
    let o = cyclerls(&["resistance", "--family", "square", "--n", "2"]);
    assert!(stdout(&o).contains("0,3,1"));
}

#[test]
fn fixed_arc_and_trial_chain() {
    let o = cyclerls(&["fixed-arc", "--k", "4"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 1 + 15);
    assert!(out.contains("\n0,0,0,0\n"));
    let o = cyclerls(&["--seed", "1", "fixed-arc", "--mode", "couple", "--trials", "20"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let o = cyclerls(&["trial-chain", "--n", "10", "--runs", "2000"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("p_good,") && out.contains(",1/2\n"));
    assert!(out.contains("f_s,") && out.contains(",40\n"));
}

#[test]
fn equivalence_succeeds() {
    let o = cyclerls(&["--out", "/dev/null", "equivalence", "--max-n", "10"]);
    assert!(o.status.success());
}
