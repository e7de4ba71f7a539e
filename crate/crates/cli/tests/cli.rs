use std::fs;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bessel-heat")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn stochastic_completeness_example() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sc.csv");
    let o = run(&["verify", "stochastic-completeness", "--a", "0.5", "--z", "0,1,5", "--t", "0.1,1", "--output", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let mut rdr = csv::Reader::from_path(&path).unwrap();
    let header = rdr.headers().unwrap().clone();
    assert_eq!(
        header.iter().collect::<Vec<_>>(),
        ["suite", "citation", "a", "nu", "z", "zeta", "t_or_r", "value_lhs", "value_rhs", "residual", "margin", "pass"]
    );
    let rows: Vec<_> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 6);
    for r in &rows {
        assert!(r[9].parse::<f64>().unwrap() <= 1e-9);
        assert_eq!(&r[11], "true");
    }
}

#[test]
fn soni_example() {
    let o = run(&["verify", "soni", "--nu", "-0.5,-0.25,0,1", "--zmax", "100"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true") || l.ends_with(",info")));
}

#[test]
fn sub_sharp_rows_are_informational() {
    let o = run(&["verify", "soni", "--nu", "-0.75", "--zmax", "10"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().any(|l| l.contains("quotient-below-one") && l.ends_with(",info")));
}

#[test]
fn verify_all_passes_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (p1, p2) = (dir.path().join("1.csv"), dir.path().join("2.csv"));
    for p in [&p1, &p2] {
        let o = run(&["verify", "all", "--output", p.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(fs::read(&p1).unwrap(), fs::read(&p2).unwrap());
}

#[test]
fn json_mirrors_csv() {
    let args = ["verify", "riccati", "--nu", "0,1", "--z", "1,5"];
    let csv_out = run(&args);
    let mut json_args = args.to_vec();
    json_args.extend(["--format", "json"]);
    let json_out = run(&json_args);
    assert_eq!(code(&csv_out), 0);
    assert_eq!(code(&json_out), 0);
    let rows: Vec<serde_json::Value> = serde_json::from_slice(&json_out.stdout).unwrap();
    let n_csv = String::from_utf8(csv_out.stdout).unwrap().lines().count() - 1;
    assert_eq!(rows.len(), n_csv);
    assert_eq!(rows[0]["suite"], "riccati");
    assert!(rows[0].get("citation").is_some() && rows[0].get("t_or_r").is_some());
}

#[test]
fn config_file_supplies_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    let out = dir.path().join("o.json");
    fs::write(&cfg, format!("a = [0.5]\nz = [0.0, 1.0]\nt = [0.1]\nformat = \"json\"\noutput = {:?}\n", out.to_str().unwrap())).unwrap();
    let o = run(&["verify", "stochastic-completeness", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rows: Vec<serde_json::Value> = serde_json::from_slice(&fs::read(&out).unwrap()).unwrap();
    assert_eq!(rows.len(), 2);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&run(&["verify", "soni", "--bogus"])), 2);
    assert_eq!(code(&run(&["verify", "no-such-suite"])), 2);
    assert_eq!(code(&run(&["verify", "liyau", "--a", "-1.5"])), 2);
    assert_eq!(code(&run(&["scan", "frequency", "--a", "0.5", "--kappa", "3"])), 2);
    assert_eq!(code(&run(&["semigroup", "apply", "--a", "0", "--z", "1", "--t", "1", "--datum", "bump:3:1"])), 2);
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "unknown_key = 1\n").unwrap();
    assert_eq!(code(&run(&["verify", "soni", "--config", cfg.to_str().unwrap()])), 2);
}

#[test]
fn failed_check_exits_1() {
    // An impossible tolerance makes residual checks fail.
    assert_eq!(code(&run(&["verify", "riccati", "--nu", "0", "--z", "1", "--tolerance", "1e-300"])), 1);
}

#[test]
fn non_convergence_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("q.toml");
    fs::write(&cfg, "[quadrature]\nrel_tol = 1e-15\nabs_tol = 1e-300\nmax_subdivisions = 1\n").unwrap();
    let o = run(&["verify", "weber", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn vmf_commands_emit_json() {
    let o = run(&["vmf", "estimate-kappa", "--n", "3", "--rbar", "0.9"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for k in ["z", "rbar", "iterations", "residual"] {
        assert!(v.get(k).is_some(), "missing {k}");
    }
    let o = run(&["vmf", "check", "--n", "4", "--z", "7.5"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["z"].as_f64().unwrap() - 7.5).abs() < 1e-8);
}

#[test]
fn evaluation_commands() {
    let o = run(&["kernel", "eval", "--a", "0.5", "--z", "1", "--zeta", "2", "--t", "0.5"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let r = rdr.records().next().unwrap().unwrap();
    let (gi, gd): (f64, f64) = (r[6].parse().unwrap(), r[7].parse().unwrap());
    assert!((gi - gd).abs() < 1e-9);
    assert_eq!(code(&run(&["bessel", "eval", "--nu", "0,2.5", "--z", "0,1,800"])), 0);
    assert_eq!(code(&run(&["semigroup", "apply", "--a", "0,1", "--z", "0,1", "--t", "0.5", "--datum", "gaussian:1"])), 0);
    assert_eq!(code(&run(&["scan", "frequency", "--a", "0.5", "--kappa", "2", "--r", "0.5,1,2"])), 0);
}
