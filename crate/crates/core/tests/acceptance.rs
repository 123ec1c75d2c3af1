//! Acceptance criteria, one test each. Every test writes a single
//! `criterion N: PASS|FAIL ...` line to stdout (bypassing output capture).

use std::io::Write;
use std::process::Command;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use wqbern::analytic;
use wqbern::exactq::{PolyQ, RatFuncQ};
use wqbern::identities::{summarize, GridSpec, IdentityChecker};
use wqbern::padicint;
use wqbern::qbern::{weighted_number_closed, weighted_number_recurrence};

fn report(criterion: u32, passed: bool, detail: &str) {
    let status = if passed { "PASS" } else { "FAIL" };
    let line = format!("criterion {criterion}: {status} {detail}\n");
    let mut out = std::io::stdout().lock();
    out.write_all(line.as_bytes()).unwrap();
    out.flush().unwrap();
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// `B_n` from `sum_{k <= n} C(n+1, k) B_k = 0`, `B_0 = 1`.
fn classical_oracle(n_max: usize) -> Vec<BigRational> {
    let mut b = vec![BigRational::one()];
    for n in 1..=n_max {
        let s: BigRational = (0..n).map(|k| BigRational::from_integer(binomial(n + 1, k)) * &b[k]).sum();
        b.push(-s / BigRational::from_integer(BigInt::from(n + 1)));
    }
    b
}

/// Carlitz numbers from `q (q beta + 1)^k - beta_k = [k == 1]`, `beta_0 = 1`.
fn carlitz_oracle(k_max: usize) -> Vec<RatFuncQ> {
    let q = RatFuncQ::q_pow(1);
    let mut beta = vec![RatFuncQ::one()];
    for k in 1..=k_max {
        let mut rhs = if k == 1 { RatFuncQ::one() } else { RatFuncQ::from_int(0) };
        for (l, b) in beta.iter().enumerate() {
            let c = RatFuncQ::from_bigint(binomial(k, l));
            rhs = &rhs - &(&(&c * b) * &q.pow(l as i64 + 1).unwrap());
        }
        // (q^(k+1) - 1) beta_k = rhs
        let lead = &q.pow(k as i64 + 1).unwrap() - &RatFuncQ::one();
        beta.push(rhs.checked_div(&lead).unwrap());
    }
    beta
}

#[test]
fn criterion_1_dual_construction() {
    let mut mismatches = Vec::new();
    for alpha in 1..=4 {
        for n in 0..=10 {
            if weighted_number_closed(n, alpha).value != weighted_number_recurrence(n, alpha).value {
                mismatches.push((n, alpha));
            }
        }
    }
    let ok = mismatches.is_empty();
    report(1, ok, &format!("closed form = recurrence for n <= 10, alpha <= 4; mismatches {mismatches:?}"));
    assert!(ok);
}

#[test]
fn criterion_2_classical_limit() {
    let oracle = classical_oracle(10);
    let mut mismatches = Vec::new();
    for alpha in 1..=4 {
        for n in 0..=10u32 {
            if weighted_number_closed(n, alpha).value_at_one() != oracle[n as usize] {
                mismatches.push((n, alpha));
            }
        }
    }
    let spots = oracle[1] == rat(-1, 2) && oracle[2] == rat(1, 6) && oracle[4] == rat(-1, 30);
    let ok = mismatches.is_empty() && spots;
    report(2, ok, &format!("b_n(q=1) = B_n for n <= 10, alpha <= 4; B_1, B_2, B_4 = -1/2, 1/6, -1/30: {spots}; mismatches {mismatches:?}"));
    assert!(ok);
}

#[test]
fn criterion_3_carlitz() {
    let oracle = carlitz_oracle(10);
    let mismatched: Vec<usize> = (0..=10).filter(|&k| weighted_number_closed(k as u32, 1).value != oracle[k]).collect();
    let b1 = RatFuncQ::new(&PolyQ::from_ints(&[-1]), &PolyQ::from_ints(&[1, 1])).unwrap();
    let b2 = RatFuncQ::new(&PolyQ::from_ints(&[0, 1]), &PolyQ::from_ints(&[1, 2, 2, 1])).unwrap();
    let spots = weighted_number_closed(1, 1).value == b1 && weighted_number_closed(2, 1).value == b2;
    let ok = mismatched.is_empty() && spots;
    report(3, ok, &format!("alpha = 1 equals Carlitz for k <= 10; spot values {spots}; mismatches {mismatched:?}"));
    assert!(ok);
}

#[test]
fn criterion_4_identity_grid() {
    let start = Instant::now();
    let reports = IdentityChecker::new().run_grid(&GridSpec::default()).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let summary = summarize(&reports);
    let failures: Vec<String> = reports
        .iter()
        .filter(|r| !r.passed)
        .take(10)
        .map(|r| format!("{} {}", r.identity_id, r.params_string()))
        .collect();
    let ok = summary.failed == 0 && summary.total > 0 && elapsed < 120.0;
    report(
        4,
        ok,
        &format!("{} checks, {} passed, {} failed in {elapsed:.1}s; failures {failures:?}", summary.total, summary.passed, summary.failed),
    );
    assert!(ok);
}

#[test]
fn criterion_5_padic_convergence() {
    let mut not_monotone = Vec::new();
    let mut flat_steps = Vec::new();
    let mut envelope = 0;
    let mut integral_failures = Vec::new();
    for (p, max_level) in [(3u32, 5u32), (5, 3)] {
        let q = BigRational::from_integer((p + 1).into());
        let levels: Vec<u32> = (1..=max_level).collect();
        for alpha in 1..=2 {
            for n in 0..=3 {
                let profile = padicint::convergence_profile(n, alpha, p, &q, &levels, None).unwrap();
                let defects: Vec<i64> = profile.defects().iter().map(|d| d.valuation).collect();
                if !profile.nondecreasing() {
                    not_monotone.push((p, alpha, n, defects.clone()));
                }
                if !profile.increases_each_level() {
                    flat_steps.push((p, alpha, n, defects));
                }
                envelope = envelope.max(profile.envelope_constant());
                for &level in &levels {
                    let r = padicint::check_integral_equation(n, alpha, p, &q, level, padicint::default_precision(level)).unwrap();
                    if !r.passed {
                        integral_failures.push((p, alpha, n, level));
                    }
                }
            }
        }
    }
    let ok = not_monotone.is_empty() && flat_steps.is_empty() && integral_failures.is_empty();
    report(
        5,
        ok,
        &format!(
            "nondecreasing violations {not_monotone:?}; levels without a gain of >= 1 (p, alpha, n, defects) {flat_steps:?}; \
             envelope defect >= N - {envelope}; integral equation failures {integral_failures:?}"
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_6_analytic_series() {
    let tol = analytic::DEFAULT_TOLERANCE;
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for q in [0.25, 0.5] {
        for alpha in 1..=3 {
            let m_terms = analytic::default_m_terms(q, alpha, tol);
            for n in 1..=8 {
                count += 1;
                match analytic::series_number_check(n, alpha, q, m_terms, tol) {
                    Ok(r) => worst = worst.max(r.abs_error),
                    Err(e) => failures.push(format!("T2 n={n} alpha={alpha} q={q}: {e}")),
                }
            }
            for t in [0.0, 0.1, 0.2] {
                for x in [0, 1] {
                    count += 1;
                    match analytic::generating_function_check(alpha, q, t, x, m_terms, 16, tol) {
                        Ok(r) => worst = worst.max(r.abs_error),
                        Err(e) => failures.push(format!("GF alpha={alpha} q={q} t={t} x={x}: {e}")),
                    }
                }
            }
        }
    }
    let ok = failures.is_empty();
    report(6, ok, &format!("{count} series checks, max abs error {worst:e} (tolerance {tol:e}); failures {failures:?}"));
    assert!(ok);
}

#[test]
fn criterion_7_determinism() {
    let configs: [&[&str]; 4] = [
        &["verify", "--n", "0..5", "--alpha", "1..3", "--format", "json"],
        &["verify", "--only", "T8,T11", "--n", "2..4", "--full", "--format", "text"],
        &["padic", "--p", "3,5", "--integral", "--format", "json"],
        &["padic", "--p", "3", "--n", "1..2", "--format", "csv"],
    ];
    let mut differing = Vec::new();
    for args in configs {
        let outputs: Vec<Vec<u8>> = (0..2)
            .map(|_| {
                let o = Command::new(env!("CARGO_BIN_EXE_wqbern")).args(args).env_remove("WQBERN_FORMAT").output().unwrap();
                assert_eq!(o.status.code(), Some(0), "{args:?}");
                o.stdout
            })
            .collect();
        if outputs[0] != outputs[1] || outputs[0].is_empty() {
            differing.push(args.join(" "));
        }
    }
    let ok = differing.is_empty();
    report(7, ok, &format!("verify and padic reruns byte-identical over {} configs; differing {differing:?}", configs.len()));
    assert!(ok);
}
