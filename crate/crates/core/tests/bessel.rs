use tridiag_hira::bessel::{bessel_backward, bessel_via_hira, choose_n, stability_gap, BesselRun};
use tridiag_hira::DDReal;

/// `Σ_m (−1)^m (x/2)^{2m+k} / (m! (m+k)!)` in double-double.
fn power_series(x: f64, k: usize) -> DDReal {
    let h = DDReal::from_f64(x) / 2.0;
    let mut term = DDReal::ONE;
    for i in 1..=k {
        term = term * h / DDReal::from_f64(i as f64);
    }
    let h2 = h.sqr();
    let mut sum = term;
    for m in 1..200 {
        term = -(term * h2) / DDReal::from_f64((m * (m + k)) as f64);
        sum += term;
        if term.abs().to_f64() < 1e-40 * sum.abs().to_f64() {
            break;
        }
    }
    sum
}

/// dd Miller reference, checked against a longer start.
fn reference(x: f64, n: usize, big_n: usize) -> BesselRun<DDReal> {
    let a = bessel_backward::<DDReal>(x, n, big_n + 100).unwrap();
    let b = bessel_backward::<DDReal>(x, n, big_n + 160).unwrap();
    for k in 0..=n {
        let rel = ((a.values[k] - b.values[k]) / b.values[k]).abs().to_f64();
        assert!(rel < 1e-24, "reference unstable at k={k}: {rel:e}");
    }
    a
}

fn rel(v: f64, r: DDReal) -> f64 {
    ((DDReal::from_f64(v) - r) / r).abs().to_f64()
}

/// `v` rounds to `mant · 10^e10` with five significant digits.
fn five_digits(v: f64, mant: f64, e10: i32) -> bool {
    (v / 10f64.powi(e10) - mant).abs() <= 0.5e-5 + 1e-12
}

#[test]
fn small_argument_matches_series() {
    for &x in &[0.5, 1.0, 2.5, 5.0] {
        let n = 12;
        let big_n = choose_n(x, n).unwrap();
        let run = bessel_backward::<DDReal>(x, n, big_n + 40).unwrap();
        for k in 0..=n {
            let s = power_series(x, k);
            let r = ((run.values[k] - s) / s).abs().to_f64();
            assert!(r <= 1e-25, "x={x} k={k}: {r:e}");
        }
    }
}

#[test]
fn j0_of_one_stable_in_start_order() {
    let big_n = choose_n(1.0, 0).unwrap();
    let a = bessel_backward::<f64>(1.0, 0, big_n).unwrap();
    let b = bessel_backward::<f64>(1.0, 0, big_n + 20).unwrap();
    let s = power_series(1.0, 0);
    assert!(rel(a.values[0], s) < 1e-15);
    assert!((a.values[0] - b.values[0]).abs() <= 1e-16);
}

#[test]
fn values_c100() {
    let (x, n, big_n) = (100.0, 200, 215);
    let r = reference(x, n, big_n);
    let back = bessel_backward::<f64>(x, n, big_n).unwrap();
    let hira = bessel_via_hira(x, n, big_n).unwrap();
    let expected = [
        (0, 0.19986, -1),
        (1, -0.77145, -1),
        (2, -0.21529, -1),
        (200, 0.20594, -40),
    ];
    for (k, mant, e) in expected {
        assert!(
            five_digits(r.values[k].to_f64(), mant, e),
            "J_{k} = {:e}",
            r.values[k].to_f64()
        );
        assert!(rel(back.values[k], r.values[k]) <= 1e-11, "backward J_{k}");
        assert!(rel(hira.values[k], r.values[k]) <= 1e-11, "hira J_{k}");
    }
    for k in 0..=n {
        let d = tridiag_hira::bessel::agreement_digits(hira.values[k], back.values[k]);
        assert!(d >= 11.0, "k={k}: {d} digits");
    }
}

#[test]
fn values_c1000() {
    let (x, n, big_n) = (1000.0, 1200, 1250);
    let r = reference(x, n, big_n);
    let hira = bessel_via_hira(x, n, big_n).unwrap();
    for (k, mant, e) in [
        (0, 0.24787, -1),
        (1, 0.47283, -2),
        (2, -0.24777, -1),
        (1200, 0.83509, -38),
    ] {
        assert!(five_digits(r.values[k].to_f64(), mant, e), "J_{k}");
        assert!(rel(hira.values[k], r.values[k]) <= 1e-10, "hira J_{k}");
    }
}

#[test]
fn values_c1e4_tail() {
    let (x, n, big_n) = (1e4, 10490, 10550);
    let r = reference(x, n, big_n);
    let hira = bessel_via_hira(x, n, big_n).unwrap();
    assert!(five_digits(r.values[n].to_f64(), 0.35152, -46));
    assert!(rel(hira.values[n], r.values[n]) <= 1e-10);
    assert!(five_digits(r.values[0].to_f64(), -0.70962, -2));
}

#[test]
fn paired_start_orders_agree() {
    for (x, n, a, b) in [(100.0, 200, 215, 235), (1000.0, 1200, 1250, 1270)] {
        // truncation alone, free of binary64 rounding
        let da = bessel_backward::<DDReal>(x, n, a).unwrap();
        let db = bessel_backward::<DDReal>(x, n, b).unwrap();
        for k in 0..=n {
            let r = ((da.values[k] - db.values[k]) / db.values[k])
                .abs()
                .to_f64();
            assert!(r <= 1e-15, "x={x} k={k}: {r:e}");
        }
        let ra = bessel_backward::<f64>(x, n, a).unwrap();
        let rb = bessel_backward::<f64>(x, n, b).unwrap();
        let gap = stability_gap(x, &ra.values, &rb.values);
        assert!(gap <= 1e-13, "x={x}: {gap:e}");
    }
}

#[test]
fn truncated_square_sum() {
    let run = bessel_backward::<f64>(100.0, 214, 215).unwrap();
    let s: f64 = run.values[0].powi(2) + 2.0 * run.values[1..].iter().map(|v| v * v).sum::<f64>();
    assert!((s - 1.0).abs() <= 1e-12);
}
