use std::fs;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tridiag-hira"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn lambda_prints_eigenvalue() {
    let o = bin(&[
        "lambda", "--a", "2", "--c", "100", "--n", "250", "--k", "245",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let line = out.lines().nth(1).unwrap();
    let lambda: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
    assert!(lambda > 2.0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("wall time"));
}

#[test]
fn usage_errors_exit_3() {
    assert_eq!(
        bin(&["lambda", "--a", "2", "--c", "100", "--n", "250", "--k", "0"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(bin(&["lambda", "--a", "2"]).status.code(), Some(3));
    assert_eq!(bin(&["no-such-command"]).status.code(), Some(3));
    assert_eq!(bin(&["experiment", "4"]).status.code(), Some(3));
    assert_eq!(
        bin(&["bessel", "--x", "-1", "--n", "3"]).status.code(),
        Some(3)
    );
    assert_eq!(
        bin(&["eigvec", "--a", "2", "--c", "-5", "--n", "10", "--lambda", "3", "--method", "hira"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(bin(&["--help"]).status.code(), Some(0));
}

#[test]
fn numerical_failure_exits_2() {
    // 2k/x overflows, so the recurrence cannot be normalized
    let o = bin(&["bessel", "--x", "1e-300", "--n", "3", "--N", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("breakdown"));
    let o = bin(&[
        "eigvec", "--a", "2", "--c", "10", "--n", "20", "--lambda", "3", "--method", "invpow",
        "--iters", "0",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn eigvec_methods_agree() {
    let mut firsts = Vec::new();
    for method in ["hira", "simplified", "invpow"] {
        let o = bin(&[
            "eigvec", "--a", "2", "--c", "100", "--n", "250", "--lambda", "5.1665", "--method",
            method,
        ]);
        assert_eq!(o.status.code(), Some(0), "{method}");
        let out = stdout(&o);
        assert_eq!(out.lines().count(), 251);
        let col = if method == "invpow" { 1 } else { 3 };
        let x1: f64 = out
            .lines()
            .nth(1)
            .unwrap()
            .split(',')
            .nth(col)
            .unwrap()
            .parse()
            .unwrap();
        firsts.push(x1);
    }
    for x in &firsts {
        assert!(((x - 3.7636e-40) / 3.7636e-40).abs() < 1e-4, "{x:e}");
    }
}

#[test]
fn eigvec_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.csv");
    let o = bin(&[
        "eigvec",
        "--a",
        "2",
        "--c",
        "100",
        "--n",
        "250",
        "--lambda",
        "5.1665",
        "--method",
        "hira",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("index,mantissa,exponent_shift,value,region_tag\n"));
}

#[test]
fn bessel_both_columns() {
    let o = bin(&[
        "bessel", "--x", "100", "--n", "200", "--N", "215", "--method", "both",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("order,backward,hira,agreement_digits"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 201);
    assert!((rows[0][1] - 0.19986e-1).abs() < 1e-6);
    assert!(rows.iter().all(|r| r[3] >= 11.0));

    let o = bin(&["bessel", "--x", "5", "--n", "4", "--method", "backward"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("order,value\n"));
}

#[test]
fn experiments_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let o = Command::new(env!("CARGO_BIN_EXE_tridiag-hira"))
            .args([
                "experiment",
                "1",
                "--c",
                "100",
                "1000",
                "--seed",
                "7",
                "--out",
            ])
            .arg(dir.path())
            .env(
                "TRIDIAG_HIRA_THREADS",
                if dir.path() == a.path() { "1" } else { "4" },
            )
            .output()
            .unwrap();
        assert_eq!(
            o.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
    for name in [
        "experiment1.csv",
        "experiment1_c1e2.csv",
        "experiment1_c1e3.csv",
    ] {
        let x = fs::read(a.path().join(name)).unwrap();
        let y = fs::read(b.path().join(name)).unwrap();
        assert!(!x.is_empty());
        assert_eq!(x, y, "{name}");
    }
    let o = bin(&["experiment", "2"]);
    let p = bin(&["experiment", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(o.stdout, p.stdout);
    assert_eq!(stdout(&o).lines().count(), 1 + 14 * 3);
}

#[test]
fn bad_thread_count_is_usage_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_tridiag-hira"))
        .args(["lambda", "--a", "2", "--c", "10", "--n", "20", "--k", "1"])
        .env("TRIDIAG_HIRA_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}
