//! Acceptance gate: one line per criterion, nonzero exit on any failure.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{ensure, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tridiag_hira::bessel::{agreement_digits, bessel_backward, bessel_via_hira};
use tridiag_hira::eigensolve::{sturm_bisect, DEFAULT_TOL};
use tridiag_hira::hira::hira_eigenvector;
use tridiag_hira::{DDReal, DiagonalProfile, TridiagMatrix};
use tridiag_hira_bench::experiments::{
    eigen_case, run_experiment1, run_experiment2, EigenCase, MethodTag, Settings, EXPERIMENT2_DIM,
    EXPERIMENT2_LAMBDAS, EXPERIMENT2_SCALE, POWER,
};

/// Expected first coordinates of the sweep, as (mantissa, decimal exponent).
const SWEEP_X1: [(f64, i32); 14] = [
    (0.10809, -13),
    (0.99452, -18),
    (0.63720, -22),
    (0.12641, -25),
    (0.46754, -30),
    (0.27309, -33),
    (0.66341, -38),
    (0.29308, -41),
    (0.24013, -45),
    (0.84484, -49),
    (0.10509, -53),
    (0.29507, -57),
    (0.39899, -60),
    (0.13675, -91),
];

/// `v` agrees with `mant · 10^e` to four significant digits.
fn four_digits(v: f64, mant: f64, e: i32) -> bool {
    ((v / 10f64.powi(e) - mant) / mant).abs() < 5e-4
}

fn first_rel(case: &EigenCase, method: MethodTag) -> f64 {
    case.record(method).expect("method ran").rel_value
}

/// Cached runs shared by several criteria.
struct Runs {
    c100: EigenCase,
    c100_secs: f64,
    scaling: Vec<EigenCase>,
    scaling_secs: f64,
    sweep: Vec<EigenCase>,
    sweep_secs: f64,
}

fn runs() -> Result<Runs> {
    let settings = Settings::default();
    let t = Instant::now();
    let c100 = run_experiment1(&[1e2], settings)?.remove(0);
    let c100_secs = t.elapsed().as_secs_f64();
    let t = Instant::now();
    let scaling = run_experiment1(&[1e2, 1e3, 1e4], settings)?;
    let scaling_secs = t.elapsed().as_secs_f64();
    let t = Instant::now();
    let sweep = run_experiment2(settings)?;
    let sweep_secs = t.elapsed().as_secs_f64();
    Ok(Runs {
        c100,
        c100_secs,
        scaling,
        scaling_secs,
        sweep,
        sweep_secs,
    })
}

fn criterion1() -> Result<String> {
    let n = 100;
    let t = Instant::now();
    let m = TridiagMatrix::new(DiagonalProfile::relaxed(vec![0.0; n])?);
    let mut worst = 0.0f64;
    for k in 1..=n {
        // k-th smallest is σ_{n+1−k}
        let sigma = 2.0 * ((PI * (n + 1 - k) as f64 / (n + 1) as f64).cos() + 1.0);
        worst = worst.max((sturm_bisect(&m, k, DEFAULT_TOL)? - sigma).abs());
    }
    let secs = t.elapsed().as_secs_f64();
    ensure!(
        worst <= 1e-12 && secs < 1.0,
        "max error {worst:e}, {secs:.3} s"
    );
    Ok(format!("max error {worst:.1e}, {secs:.3} s"))
}

fn criterion2(r: &Runs) -> Result<String> {
    let case = &r.c100;
    let x1 = case.hira[0];
    let rel = first_rel(case, MethodTag::Hira);
    ensure!((case.lambda - 5.1665).abs() <= 5e-4, "λ = {}", case.lambda);
    ensure!(four_digits(x1, 0.37636, -39), "X₁ = {x1:e}");
    ensure!(rel <= 1e-11, "rel(X₁) = {rel:e}");
    ensure!(case.trusted, "reference gap {:e}", case.oracle_gap);
    ensure!(r.c100_secs < 5.0, "{:.2} s", r.c100_secs);
    Ok(format!(
        "λ = {:.6}, X₁ = {x1:.5e}, rel = {rel:.1e}, {:.2} s",
        case.lambda, r.c100_secs
    ))
}

fn criterion3(r: &Runs) -> Result<String> {
    let rels: Vec<f64> = r
        .scaling
        .iter()
        .map(|c| first_rel(c, MethodTag::Hira))
        .collect();
    for c in &r.scaling {
        ensure!(c.trusted, "reference gap {:e} at c = {}", c.oracle_gap, c.c);
    }
    let growth: Vec<f64> = rels.windows(2).map(|w| w[1] / w[0]).collect();
    ensure!(
        growth.iter().all(|g| *g <= 1e3),
        "growth per decade {growth:?}"
    );
    ensure!(r.scaling_secs < 600.0, "{:.1} s", r.scaling_secs);
    let fmt = |v: &[f64], f: fn(&f64) -> String| v.iter().map(f).collect::<Vec<_>>().join(" ");
    Ok(format!(
        "rel(X₁) {}, growth per decade {}, {:.1} s",
        fmt(&rels, |v| format!("{v:.1e}")),
        fmt(&growth, |v| format!("{v:.1}")),
        r.scaling_secs
    ))
}

fn criterion4(r: &Runs) -> Result<String> {
    let mut worst = 0.0f64;
    for (case, (mant, e)) in r.sweep.iter().zip(SWEEP_X1) {
        let x1 = case.hira[0];
        ensure!(
            four_digits(x1, mant, e),
            "λ = {}: X₁ = {x1:e}, expected {mant}E{e}",
            case.lambda
        );
        ensure!(
            case.trusted,
            "λ = {}: reference gap {:e}",
            case.lambda,
            case.oracle_gap
        );
        let rel = first_rel(case, MethodTag::Hira);
        ensure!(rel <= 1e-10, "λ = {}: rel(X₁) = {rel:e}", case.lambda);
        worst = worst.max(rel);
    }
    ensure!(r.sweep.len() == 14, "{} rows", r.sweep.len());
    ensure!(r.sweep_secs < 120.0, "{:.1} s", r.sweep_secs);
    Ok(format!(
        "14 rows match, worst rel(X₁) {worst:.1e}, {:.2} s",
        r.sweep_secs
    ))
}

fn criterion5() -> Result<String> {
    let (x, n, big_n) = (100.0, 200, 215);
    let t = Instant::now();
    let back = bessel_backward::<f64>(x, n, big_n)?.values;
    let hira = bessel_via_hira(x, n, big_n)?.values;
    let secs = t.elapsed().as_secs_f64();
    let reference = bessel_backward::<DDReal>(x, n, big_n + 100)?.values;
    let table = [
        (0, 0.19986, -1),
        (1, -0.77145, -1),
        (2, -0.21529, -1),
        (200, 0.20594, -40),
    ];
    let mut worst_rel = 0.0f64;
    let mut min_digits = f64::INFINITY;
    for (k, mant, e) in table {
        ensure!(
            four_digits(reference[k].to_f64(), mant, e),
            "J_{k} = {:e}",
            reference[k].to_f64()
        );
        for v in [back[k], hira[k]] {
            let rel = ((DDReal::from_f64(v) - reference[k]) / reference[k])
                .abs()
                .to_f64();
            worst_rel = worst_rel.max(rel);
        }
        min_digits = min_digits.min(agreement_digits(hira[k], back[k]));
    }
    ensure!(worst_rel <= 1e-11, "worst rel {worst_rel:e}");
    ensure!(
        min_digits >= 11.0,
        "methods agree to {min_digits:.1} digits"
    );
    ensure!(secs < 5.0, "{secs:.2} s");
    Ok(format!(
        "worst rel {worst_rel:.1e}, agreement ≥ {min_digits:.1} digits, {secs:.3} s"
    ))
}

/// Random matrices for criteria 6 and 8.
fn random_matrices() -> Result<Vec<TridiagMatrix>> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    (0..20)
        .map(|_| {
            let a = rng.gen_range(1.0..=3.0);
            let c = rng.gen_range(5.0..=50.0);
            let n = rng.gen_range(20..=200);
            Ok(TridiagMatrix::power_law(a, c, n)?)
        })
        .collect()
}

fn criterion6(mats: &[TridiagMatrix]) -> Result<String> {
    let mut pairs = 0;
    for m in mats {
        for k in 1..=m.n() {
            let lambda = sturm_bisect(m, k, DEFAULT_TOL)?;
            let res = hira_eigenvector(m, lambda)?;
            let s = res.sign_agreements();
            ensure!(s == k - 1, "n = {}, k = {k}: {s} agreements", m.n());
            pairs += 1;
        }
    }
    Ok(format!("{pairs} eigenpairs over {} matrices", mats.len()))
}

fn criterion7(r: &Runs) -> Result<String> {
    let mut worst = 0.0f64;
    for case in std::iter::once(&r.c100).chain(&r.sweep) {
        ensure!(
            case.radius_error <= 1e-25,
            "λ = {}: {:e}",
            case.lambda,
            case.radius_error
        );
        worst = worst.max(case.radius_error);
    }
    Ok(format!(
        "worst {worst:.1e} over {} sweeps",
        1 + r.sweep.len()
    ))
}

fn criterion8(r: &Runs, mats: &[TridiagMatrix]) -> Result<String> {
    let mut count = 0;
    let mut worst = 0.0f64;
    let cases = std::iter::once(&r.c100).chain(&r.scaling).chain(&r.sweep);
    for case in cases {
        let bound = 1e-13 * case.matrix.scale();
        for rec in &case.records {
            let res = rec.residual.expect("eigenvector record");
            ensure!(
                res <= bound,
                "c = {}, λ = {}, {}: {res:e}",
                case.c,
                rec.lambda,
                rec.method.as_str()
            );
            worst = worst.max(res / bound);
            count += 1;
        }
    }
    for m in mats {
        let bound = 1e-13 * m.scale();
        for k in 1..=m.n() {
            let lambda = sturm_bisect(m, k, DEFAULT_TOL)?;
            let res = m.residual_inf(lambda, &hira_eigenvector(m, lambda)?.x)?;
            ensure!(res <= bound, "n = {}, k = {k}: {res:e}", m.n());
            worst = worst.max(res / bound);
            count += 1;
        }
    }
    Ok(format!(
        "{count} eigenpairs, worst residual {worst:.2} of the bound"
    ))
}

fn criterion9() -> Result<String> {
    let target = EXPERIMENT2_LAMBDAS[12];
    let rel = |iters| -> Result<f64> {
        let settings = Settings {
            iters,
            ..Settings::default()
        };
        let case = eigen_case(
            2,
            POWER,
            EXPERIMENT2_SCALE,
            EXPERIMENT2_DIM,
            target,
            true,
            settings,
        )?;
        Ok(first_rel(&case, MethodTag::InversePower))
    };
    let (r5, r30) = (rel(5)?, rel(30)?);
    ensure!(
        r5 <= 1e-8 && r30 <= 1e-11,
        "5 iterations {r5:e}, 30 iterations {r30:e}"
    );
    Ok(format!("5 iterations {r5:.1e}, 30 iterations {r30:.1e}"))
}

fn digits(a: &[f64], b: &[f64]) -> f64 {
    let worst = a
        .iter()
        .zip(b)
        .map(|(x, y)| if x == y { 0.0 } else { ((x - y) / y).abs() })
        .fold(0.0, f64::max);
    if worst == 0.0 {
        17.0
    } else {
        -worst.log10()
    }
}

fn criterion10(r: &Runs) -> Result<String> {
    let mut min = f64::INFINITY;
    for case in std::iter::once(&r.c100).chain(&r.sweep) {
        let p = case.partition;
        let vs = [&case.hira, &case.simplified, &case.inverse];
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            for range in [0..p.k, p.m..case.hira.len()] {
                let d = digits(&vs[i][range.clone()], &vs[j][range]);
                ensure!(d >= 10.0, "λ = {}: {d:.1} digits", case.lambda);
                min = min.min(d);
            }
        }
    }
    Ok(format!("at least {min:.1} digits"))
}

fn main() -> ExitCode {
    let mut failed = 0;
    let mut report = |n: usize, r: Result<String>| match r {
        Ok(msg) => println!("criterion {n}: PASS {msg}"),
        Err(e) => {
            println!("criterion {n}: FAIL {e:#}");
            failed += 1;
        }
    };
    report(1, criterion1());
    let mats = random_matrices();
    match runs() {
        Ok(r) => {
            report(2, criterion2(&r));
            report(3, criterion3(&r));
            report(4, criterion4(&r));
            report(5, criterion5());
            match &mats {
                Ok(m) => report(6, criterion6(m)),
                Err(e) => report(6, Err(anyhow::anyhow!("{e:#}"))),
            }
            report(7, criterion7(&r));
            match &mats {
                Ok(m) => report(8, criterion8(&r, m)),
                Err(e) => report(8, Err(anyhow::anyhow!("{e:#}"))),
            }
            report(9, criterion9());
            report(10, criterion10(&r));
        }
        Err(e) => {
            for n in 2..=10 {
                report(n, Err(anyhow::anyhow!("experiment run failed: {e:#}")));
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
