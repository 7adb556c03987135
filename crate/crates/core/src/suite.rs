//! Seeded runner for the exact identity checks.
//!
//! Every trial draws one random test function ψ from its own ChaCha stream
//! (`trial_rng(seed, t)`), so a record can be reproduced from its seed and the
//! trial index alone. Trials run in parallel; results are reduced in trial order.

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::adjoint::{
    coercivity_check, faa_di_bruno_p, first_order_commutator, pairing_coefficient, verify_commutator,
    verify_lemma_adjoint_norm, verify_lemma_gaussian_pairing_with, weighted_derivative_chain, IdentityReport,
    WeightSpec, TEST_FUNCTION_DEGREE,
};
use crate::error::{Error, Result};
use crate::exactpoly::{BiPoly, GaussianRational};
use crate::random::{random_test_function, trial_rng};
use crate::report::Record;

/// Highest order for which `P_i` on the Fock weight is compared to `(-z̄)^i`.
pub const FDB_POWER_MAX: u32 = 10;

/// Pairing-coefficient table used by the pairing identity.
pub type CoefficientTable = fn(u32, u32) -> BigRational;

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub ks: Vec<u32>,
    pub trials: usize,
    pub seed: u64,
    pub pairing_table: CoefficientTable,
}

impl SuiteConfig {
    pub fn new(ks: Vec<u32>, trials: usize, seed: u64) -> Result<Self> {
        if ks.is_empty() || ks.contains(&0) {
            return Err(Error::InvalidParameter("orders must be nonempty and at least 1".into()));
        }
        Ok(SuiteConfig { ks, trials, seed, pairing_table: pairing_coefficient })
    }

    /// Swap in a deliberately wrong pairing table so the failure path can be exercised.
    pub fn with_tampered_pairing_table(mut self) -> Self {
        self.pairing_table = tampered_pairing_coefficient;
        self
    }
}

/// The correct table with the top entry (`j = k - 1`) doubled.
pub fn tampered_pairing_coefficient(k: u32, j: u32) -> BigRational {
    let c = pairing_coefficient(k, j);
    if j + 1 == k {
        &c + &c
    } else {
        c
    }
}

/// The two weights of the suite: `|z|²` and `|z|² + (z² + z̄²)/4`.
pub fn suite_weights() -> Vec<WeightSpec> {
    let tilted: BiPoly = "z*zb + (z^2 + zb^2)/4".parse().expect("literal");
    vec![WeightSpec::fock(), WeightSpec::poly(tilted).expect("real weight")]
}

/// Constants cycled through the adjoint-norm identity.
pub fn adjoint_norm_constants() -> Vec<GaussianRational> {
    vec![
        GaussianRational::zero(),
        GaussianRational::from_ints(1, 0),
        GaussianRational::from_ints(2, -3),
        GaussianRational::from_ints(1, 2),
    ]
}

/// Constants for the coercivity inequality.
pub fn coercivity_constants() -> Vec<GaussianRational> {
    vec![GaussianRational::zero(), GaussianRational::from_ints(1, 0), GaussianRational::from_ints(2, -3)]
}

/// First failing check of a record.
#[derive(Clone, Debug, PartialEq)]
pub struct Failure {
    pub trial: Option<usize>,
    pub test_function: String,
    pub discrepancy: String,
}

/// Aggregate over all trials of one identity at one order and weight.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteRecord {
    pub identity: String,
    pub k: u32,
    pub weight: String,
    pub seed: u64,
    pub checks: usize,
    pub failures: usize,
    pub first_failure: Option<Failure>,
}

impl SuiteRecord {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn to_record(&self) -> Record {
        let mut r = Record::new("record")
            .field("identity", &self.identity)
            .field("k", self.k)
            .field("weight", &self.weight)
            .field("seed", self.seed)
            .field("checks", self.checks)
            .field("failures", self.failures)
            .field("passed", self.passed());
        if let Some(f) = &self.first_failure {
            if let Some(t) = f.trial {
                r = r.field("first_failure_trial", t);
            }
            r = r.field("first_failure_psi", &f.test_function).field("discrepancy", &f.discrepancy);
        }
        r
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteResult {
    pub records: Vec<SuiteRecord>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.records.iter().all(SuiteRecord::passed)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&r.to_record().to_line());
            out.push('\n');
        }
        out
    }
}

fn aggregate(identity: &str, k: u32, weight: String, seed: u64, reports: Vec<(Option<usize>, IdentityReport)>) -> SuiteRecord {
    let checks = reports.len();
    let mut failures = 0;
    let mut first_failure = None;
    for (trial, r) in reports {
        if !r.passed() {
            failures += 1;
            if first_failure.is_none() {
                first_failure = Some(Failure {
                    trial,
                    test_function: r.test_function.clone(),
                    discrepancy: r.discrepancy.to_string(),
                });
            }
        }
    }
    SuiteRecord { identity: identity.into(), k, weight, seed, checks, failures, first_failure }
}

/// Run `check` on every trial's ψ in parallel, keeping trial order.
fn per_trial<F>(psis: &[BiPoly], check: F) -> Result<Vec<(Option<usize>, IdentityReport)>>
where
    F: Fn(usize, &BiPoly) -> Result<Vec<IdentityReport>> + Sync,
{
    let nested: Vec<Vec<(Option<usize>, IdentityReport)>> = psis
        .par_iter()
        .enumerate()
        .map(|(t, psi)| Ok(check(t, psi)?.into_iter().map(|r| (Some(t), r)).collect()))
        .collect::<Result<_>>()?;
    Ok(nested.into_iter().flatten().collect())
}

fn pointwise_report(name: &str, k: u32, weight: &WeightSpec, lhs: &BiPoly, rhs: &BiPoly) -> IdentityReport {
    let diff = lhs - rhs;
    IdentityReport {
        name: name.into(),
        kind: crate::adjoint::ReportKind::Identity,
        k,
        weight: weight.to_string(),
        test_function: "1".into(),
        exact_zero: diff.is_zero(),
        discrepancy: crate::adjoint::Discrepancy::Poly(diff),
        terms: vec![],
    }
}

/// Run the full identity suite.
pub fn run_identity_suite(cfg: &SuiteConfig) -> Result<SuiteResult> {
    let psis: Vec<BiPoly> = (0..cfg.trials)
        .map(|t| random_test_function(&mut trial_rng(cfg.seed, t as u64), TEST_FUNCTION_DEGREE))
        .collect();
    let weights = suite_weights();
    let fock_name = WeightSpec::fock().to_string();
    let fock_phi = BiPoly::abs_sqr();
    let mut records = Vec::new();

    // P_i = (-z̄)^i on the Fock weight, deterministic
    let power_reports = (1..=FDB_POWER_MAX)
        .map(|i| {
            let expected = (-BiPoly::zbar()).pow(i);
            Ok((None, pointwise_report("fdb-power", i, &WeightSpec::fock(), &faa_di_bruno_p(i, &fock_phi)?, &expected)))
        })
        .collect::<Result<Vec<_>>>()?;
    records.push(aggregate("fdb-power", FDB_POWER_MAX, fock_name.clone(), cfg.seed, power_reports));

    for &k in &cfg.ks {
        for w in &weights {
            let phi = w.as_poly()?;
            let chain = (1..=k)
                .map(|i| {
                    let p = faa_di_bruno_p(i, &phi)?;
                    let direct = weighted_derivative_chain(i, &phi)?;
                    Ok((None, pointwise_report("fdb-chain", i, w, &p, &direct)))
                })
                .collect::<Result<Vec<_>>>()?;
            records.push(aggregate("fdb-chain", k, w.to_string(), cfg.seed, chain));
            let reports = per_trial(&psis, |_, psi| Ok(vec![verify_commutator(psi, w, k)?]))?;
            records.push(aggregate("commutator-expansion", k, w.to_string(), cfg.seed, reports));
        }

        let constants = adjoint_norm_constants();
        let reports = per_trial(&psis, |t, psi| {
            Ok(vec![verify_lemma_adjoint_norm(psi, k, &constants[t % constants.len()])?])
        })?;
        records.push(aggregate("adjoint-norm", k, fock_name.clone(), cfg.seed, reports));

        let table = cfg.pairing_table;
        let reports = per_trial(&psis, |_, psi| Ok(vec![verify_lemma_gaussian_pairing_with(psi, k, table)?]))?;
        records.push(aggregate("gaussian-commutator-pairing", k, fock_name.clone(), cfg.seed, reports));

        let reports = per_trial(&psis, |_, psi| {
            coercivity_constants().iter().map(|a| coercivity_check(psi, k, a)).collect()
        })?;
        records.push(aggregate("coercivity", k, fock_name.clone(), cfg.seed, reports));
    }

    for w in &weights {
        let reports = per_trial(&psis, |_, psi| Ok(vec![first_order_commutator(psi, w)?]))?;
        records.push(aggregate("first-order-commutator", 1, w.to_string(), cfg.seed, reports));
    }
    Ok(SuiteResult { records })
}
