//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use dbar_core::adjoint::dual_certificate_check;
use dbar_core::extensions::{solve_bounded_domain, solve_scaled, solve_scaled_field};
use dbar_core::hermite::{eval_field, ladder_scale, CoeffField, OperatorParams};
use dbar_core::quadrature::{analyze, moment_table_error, QuadratureRule};
use dbar_core::random::{random_complex, random_field, trial_rng};
use dbar_core::solver::{norm_bound, solve_chain, solve_min_norm, BOUND_TOL, RESIDUAL_RTOL};
use dbar_core::suite::{run_identity_suite, SuiteConfig};
use dbar_core::DomainSpec;

const SEED: u64 = 20240607;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

fn identity_suite() -> Outcome {
    let start = Instant::now();
    let cfg = SuiteConfig::new(vec![1, 2, 3, 4], 50, SEED).unwrap();
    let res = run_identity_suite(&cfg).unwrap();
    let elapsed = start.elapsed();
    let failed: Vec<String> = res.records.iter().filter(|r| !r.passed()).map(|r| r.to_record().to_line()).collect();
    let checks: usize = res.records.iter().map(|r| r.checks).sum();
    outcome(
        failed.is_empty() && elapsed < Duration::from_secs(60),
        format!("{} records, {checks} exact checks, {} failing, {:.1}s", res.records.len(), failed.len(), elapsed.as_secs_f64()),
    )
}

#[allow(clippy::approx_constant)]
fn sharp_ratios() -> Outcome {
    let expected = [1.0, 0.70710678, 0.40824829, 0.20412415];
    let mut pass = true;
    let mut got = Vec::new();
    for k in 1..=4u32 {
        let f = CoeffField::basis(0, 0, 0, 0);
        let params = OperatorParams::new(k, c(0.0, 0.0)).unwrap();
        let (_, rep) = solve_min_norm(&f, &params, 16).unwrap();
        pass &= (rep.ratio - norm_bound(k)).abs() <= 1e-12;
        pass &= (rep.ratio - expected[k as usize - 1]).abs() <= 5e-9;
        got.push(format!("{:.8}", rep.ratio));
    }
    outcome(pass, format!("ratios [{}]", got.join(", ")))
}

fn bound_sweep() -> Outcome {
    let a_list = [c(0.0, 0.0), c(1.0, 0.0), c(-2.0, 3.0), c(0.0, 10.0), c(100.0, 0.0)];
    let mut pass = true;
    let mut worst_excess = f64::NEG_INFINITY;
    let mut worst_residual: f64 = 0.0;
    let mut independence = Vec::new();
    for k in 1..=4u32 {
        let bound = norm_bound(k);
        let mut max_per_a = vec![0.0f64; a_list.len()];
        for trial in 0..200u64 {
            let mut rng = trial_rng(SEED, trial);
            let f = random_field(&mut rng, 4, 64);
            for (ai, &a) in a_list.iter().enumerate() {
                let params = OperatorParams::new(k, a).unwrap();
                let (_, rep) = solve_min_norm(&f, &params, 64).unwrap();
                worst_excess = worst_excess.max(rep.ratio - bound);
                worst_residual = worst_residual.max(rep.residual_low / rep.norm_f);
                pass &= rep.ratio <= bound + BOUND_TOL && rep.residual_low / rep.norm_f <= RESIDUAL_RTOL;
                max_per_a[ai] = max_per_a[ai].max(rep.ratio);
            }
        }
        let sweep_max = max_per_a.iter().copied().fold(0.0, f64::max);
        pass &= sweep_max <= max_per_a[0] + BOUND_TOL;
        independence.push(format!("k={k} a0_max={:.6} sweep_max={:.6}", max_per_a[0], sweep_max));
    }
    outcome(
        pass,
        format!(
            "max(ratio - bound) = {worst_excess:.3e}, max residual/|f| = {worst_residual:.3e}; {}",
            independence.join("; ")
        ),
    )
}

fn chain_oracle() -> Outcome {
    let mut worst: f64 = 0.0;
    for case in 0..100u64 {
        let mut rng = trial_rng(SEED ^ 0xC4A1, case);
        let len = rng.random_range(1..=12usize);
        let k = rng.random_range(1..=4u32);
        let start = rng.random_range(0..20usize);
        let a = if case % 5 == 0 { c(0.0, 0.0) } else { random_complex(&mut rng) * 3.0 };
        let scales: Vec<f64> = (0..len).map(|i| ladder_scale(start + i * k as usize, k)).collect();
        let rhs: Vec<Complex64> = (0..len).map(|_| random_complex(&mut rng)).collect();
        let sol = solve_chain(a, &scales, &rhs).unwrap();
        let mut dense = DMatrix::<Complex64>::zeros(len, len + 1);
        for i in 0..len {
            dense[(i, i)] = a;
            dense[(i, i + 1)] = c(scales[i], 0.0);
        }
        let pinv = dense.pseudo_inverse(1e-14).unwrap();
        let oracle = pinv * DMatrix::from_column_slice(len, 1, &rhs);
        let scale = oracle.iter().map(|v| v.norm()).fold(1.0, f64::max);
        for (j, v) in sol.u.iter().enumerate() {
            worst = worst.max((v - oracle[j]).norm() / scale);
        }
    }
    outcome(worst <= 1e-11, format!("100 chains, max relative deviation {worst:.3e}"))
}

fn scaling_corollary() -> Outcome {
    let mut pass = true;
    let mut worst_excess = f64::NEG_INFINITY;
    for &lambda in &[0.25, 1.0, 4.0, 16.0] {
        for k in 1..=3u32 {
            let params = OperatorParams::new(k, c(1.0, -1.0)).unwrap();
            for trial in 0..10u64 {
                let mut rng = trial_rng(SEED ^ 0x5CA1E, trial);
                let g = random_field(&mut rng, 3, 20);
                let (_, rep) = solve_scaled_field(&g, lambda, c(0.5, -0.25), &params, 20).unwrap();
                worst_excess = worst_excess.max(rep.ratio_sq - rep.bound_sq);
                pass &= rep.ratio_sq <= 1.0 / (lambda.powi(k as i32) * factorial(k)) + 1e-10;
            }
            let rule = QuadratureRule::default_for(0, 8, k).unwrap();
            let sharp = OperatorParams::new(k, c(0.0, 0.0)).unwrap();
            let (_, rep) = solve_scaled(|_| c(1.0, 0.0), lambda, c(0.0, 0.0), &sharp, 0, 8, &rule).unwrap();
            let expect = 1.0 / (lambda.powi(k as i32) * factorial(k));
            worst_excess = worst_excess.max(rep.ratio_sq - rep.bound_sq);
            pass &= rep.ratio_sq <= expect + 1e-10 && (rep.ratio_sq - expect).abs() <= 1e-10;
        }
    }
    let mut frame_dev: f64 = 0.0;
    for k in 1..=3u32 {
        let mut rng = trial_rng(SEED ^ 0xF4A, k as u64);
        let f = random_field(&mut rng, 4, 24);
        let params = OperatorParams::new(k, c(2.0, 3.0)).unwrap();
        let (u, _) = solve_min_norm(&f, &params, 24).unwrap();
        let (sol, _) = solve_scaled_field(&f, 1.0, c(0.0, 0.0), &params, 24).unwrap();
        frame_dev = frame_dev.max(sol.v.sub(&u).max_abs());
    }
    pass &= frame_dev <= 1e-13;
    outcome(
        pass,
        format!("max(ratio^2 - bound^2) = {worst_excess:.3e}, lambda=1 frame deviation {frame_dev:.3e}"),
    )
}

fn bounded_domain() -> Outcome {
    let dom = DomainSpec::disk(c(0.0, 0.0), 1.0).unwrap();
    let params = OperatorParams::new(1, c(0.0, 0.0)).unwrap();
    let (m_max, n_eq) = (12, 24);
    let rule = QuadratureRule::default_for(m_max, n_eq, 1).unwrap();
    let (_, rep) = solve_bounded_domain(|_| c(1.0, 0.0), &dom, &params, &rule, m_max, n_eq).unwrap();
    let pass = rep.certified() && rep.measured_ratio <= 4f64.exp().sqrt() && (rep.constant - 7.389056).abs() <= 1e-5;
    outcome(pass, format!("c = {:.6}, measured ratio = {:.6}", rep.constant, rep.measured_ratio))
}

fn quadrature_exactness() -> Outcome {
    let rule = QuadratureRule::new(8, 17).unwrap();
    let moments = moment_table_error(&rule, 7).unwrap();
    let mut round_trip: f64 = 0.0;
    for trial in 0..20u64 {
        let mut rng = trial_rng(SEED ^ 0x9A4D, trial);
        let (m_max, n_max) = if trial % 2 == 0 { (3, 3) } else { (6, 10) };
        let f = random_field(&mut rng, m_max, n_max);
        let r = if trial % 2 == 0 { rule.clone() } else { QuadratureRule::default_for(m_max, n_max, 0).unwrap() };
        let back = analyze(|z| eval_field(&f, z), &r, m_max, n_max).unwrap();
        round_trip = round_trip.max(back.sub(&f).max_abs());
    }
    let weight_sum: f64 = rule.nodes().map(|(_, w)| w).sum();
    let pass = moments <= 1e-12 && round_trip <= 1e-10 && (weight_sum - PI).abs() <= 1e-12;
    outcome(pass, format!("moment table error {moments:.3e}, round trip {round_trip:.3e}"))
}

fn duality_falsification() -> Outcome {
    let f = CoeffField::basis(0, 0, 0, 0);
    let mut pass = true;
    let mut parts = Vec::new();
    for k in 1..=4u32 {
        let params = OperatorParams::new(k, c(0.0, 0.0)).unwrap();
        let kf = factorial(k);
        let tight = dual_certificate_check(&f, 1.0 / kf, &params, 1000, SEED).unwrap();
        let half = dual_certificate_check(&f, 0.5 / kf, &params, 1000, SEED).unwrap();
        pass &= !tight.violated() && half.violated();
        parts.push(format!("k={k} max={:.6} violations@half={}", tight.max_ratio * kf, half.violations));
    }
    outcome(pass, parts.join("; "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("exact identity suite", identity_suite),
        ("sharp bound reproduction", sharp_ratios),
        ("bound certificate sweep", bound_sweep),
        ("chain oracle equivalence", chain_oracle),
        ("scaling corollary", scaling_corollary),
        ("bounded domain", bounded_domain),
        ("quadrature exactness", quadrature_exactness),
        ("duality falsification", duality_falsification),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        if !o.pass {
            failures += 1;
        }
        println!(
            "{} criterion {} ({name}): {} [{:.1}s]",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criterion(s) failed");
        ExitCode::FAILURE
    }
}
