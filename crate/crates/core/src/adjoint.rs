//! Exact checks of the weighted formal adjoint and the commutator identities
//! behind the a-priori estimate `‖(∂̄^k + a)*ψ‖² ≥ k!‖ψ‖²`.
//!
//! Test functions are polynomials in z and z̄. Pointwise identities work for any
//! real polynomial weight; identities that integrate are restricted to the
//! Fock weight `|z|²`, where moments are closed-form.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactpoly::{gaussian_pairing, rational_to_f64, BiPoly, GaussianRational};
use crate::hermite::{
    binomial, factorial, field_inner, field_norm, ladder_dbar_star, poly_to_field, CoeffField, OperatorParams,
};
use crate::random::{random_test_function, trial_rng};

/// Weight φ of `L²(ℂ, e^{-φ})`.
#[derive(Clone, Debug, PartialEq)]
pub enum WeightSpec {
    /// `λ|z - z₀|²`
    ScaledGaussian { lambda: f64, center: Complex64 },
    /// Real-valued polynomial φ (`conj(φ) = φ`).
    Poly(BiPoly),
}

impl WeightSpec {
    /// The Fock weight `|z|²`.
    pub fn fock() -> Self {
        WeightSpec::ScaledGaussian { lambda: 1.0, center: Complex64::zero() }
    }

    pub fn scaled_gaussian(lambda: f64, center: Complex64) -> Result<Self> {
        if !lambda.is_finite() || lambda <= 0.0 {
            return Err(Error::InvalidParameter(format!("lambda must be positive, got {lambda}")));
        }
        if !(center.re.is_finite() && center.im.is_finite()) {
            return Err(Error::NonFinite(format!("center {center}")));
        }
        Ok(WeightSpec::ScaledGaussian { lambda, center })
    }

    pub fn poly(phi: BiPoly) -> Result<Self> {
        if !phi.is_real() {
            return Err(Error::ComplexWeight);
        }
        Ok(WeightSpec::Poly(phi))
    }

    /// φ as an exact polynomial. Doubles are dyadic rationals, so the Gaussian
    /// case converts without rounding.
    pub fn as_poly(&self) -> Result<BiPoly> {
        match self {
            WeightSpec::Poly(p) => Ok(p.clone()),
            WeightSpec::ScaledGaussian { lambda, center } => {
                let exact = |v: f64| {
                    BigRational::from_float(v).ok_or_else(|| Error::NonFinite(format!("{v}")))
                };
                let lam = GaussianRational::real(exact(*lambda)?);
                let z0 = GaussianRational::new(exact(center.re)?, exact(center.im)?);
                let zm = &BiPoly::z() - &BiPoly::constant(z0.clone());
                let zbm = &BiPoly::zbar() - &BiPoly::constant(z0.conj());
                Ok((&zm * &zbm).scale(&lam))
            }
        }
    }
}

impl fmt::Display for WeightSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightSpec::ScaledGaussian { lambda, center } => {
                write!(f, "gauss(lambda={lambda},z0={}{:+}i)", center.re, center.im)
            }
            WeightSpec::Poly(p) => write!(f, "poly({p})"),
        }
    }
}

/// Whether a report checks an equality or a one-sided inequality.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportKind {
    Identity,
    Inequality,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Discrepancy {
    Poly(BiPoly),
    Scalar(GaussianRational),
    Numeric(f64),
}

impl Discrepancy {
    pub fn is_zero(&self) -> bool {
        match self {
            Discrepancy::Poly(p) => p.is_zero(),
            Discrepancy::Scalar(c) => c.is_zero(),
            Discrepancy::Numeric(v) => *v == 0.0,
        }
    }
}

impl fmt::Display for Discrepancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Discrepancy::Poly(p) => write!(f, "{p}"),
            Discrepancy::Scalar(c) => write!(f, "{c}"),
            Discrepancy::Numeric(v) => write!(f, "{v:e}"),
        }
    }
}

/// Outcome of one identity or inequality check.
///
/// For identities `discrepancy` is `LHS - RHS`; for inequalities it is the
/// slack `LHS - RHS`, which must be nonnegative.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport {
    pub name: String,
    pub kind: ReportKind,
    pub k: u32,
    pub weight: String,
    pub test_function: String,
    pub exact_zero: bool,
    pub discrepancy: Discrepancy,
    /// Named intermediate values, in evaluation order.
    pub terms: Vec<(String, String)>,
}

impl IdentityReport {
    fn identity(name: &str, k: u32, weight: String, psi: &BiPoly, d: Discrepancy, terms: Vec<(String, String)>) -> Self {
        IdentityReport {
            name: name.into(),
            kind: ReportKind::Identity,
            k,
            weight,
            test_function: psi.to_string(),
            exact_zero: d.is_zero(),
            discrepancy: d,
            terms,
        }
    }

    pub fn passed(&self) -> bool {
        match self.kind {
            ReportKind::Identity => self.exact_zero,
            ReportKind::Inequality => match &self.discrepancy {
                Discrepancy::Scalar(c) => c.im.is_zero() && !c.re.is_negative(),
                Discrepancy::Numeric(v) => *v >= 0.0,
                Discrepancy::Poly(_) => false,
            },
        }
    }
}

fn check_order(k: u32) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    Ok(())
}

/// `A g = ∂g - (∂φ) g`, i.e. `e^{φ} ∂(g e^{-φ})`.
fn twisted_d(g: &BiPoly, dphi: &BiPoly) -> Result<BiPoly> {
    let out = &g.d() - &(dphi * g);
    out.check_degree()?;
    Ok(out)
}

/// Formal adjoint `∂̄^{k*}_φ ψ = (-1)^k e^{φ} ∂^k (ψ e^{-φ}) = (-1)^k A^k ψ`.
pub fn formal_adjoint_k(psi: &BiPoly, phi: &BiPoly, k: u32) -> Result<BiPoly> {
    check_order(k)?;
    let dphi = phi.d();
    let mut g = psi.clone();
    for _ in 0..k {
        g = twisted_d(&g, &dphi)?;
    }
    Ok(if k % 2 == 1 { -g } else { g })
}

/// `(∂̄^k + a)*_φ ψ = ∂̄^{k*}_φ ψ + ā ψ` (the constant enters conjugated).
pub fn operator_adjoint(psi: &BiPoly, phi: &BiPoly, k: u32, a: &GaussianRational) -> Result<BiPoly> {
    Ok(&formal_adjoint_k(psi, phi, k)? + &psi.scale(&a.conj()))
}

/// `(∂̄^k + a) ψ`.
pub fn apply_operator_exact(psi: &BiPoly, k: u32, a: &GaussianRational) -> BiPoly {
    &psi.dbar_pow(k) + &psi.scale(a)
}

/// All multiplicity vectors `(m_1, …, m_i)` with `Σ γ m_γ = i`.
pub fn integer_partitions(i: u32) -> Vec<Vec<u32>> {
    fn rec(rest: u32, gamma: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if gamma == 0 {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for m in 0..=rest / gamma {
            cur[(gamma - 1) as usize] = m;
            rec(rest - m * gamma, gamma - 1, cur, out);
        }
        cur[(gamma - 1) as usize] = 0;
    }
    let mut out = Vec::new();
    let mut cur = vec![0; i as usize];
    rec(i, i, &mut cur, &mut out);
    out
}

/// `P_i` with `∂^i e^{-φ} = P_i e^{-φ}`, summed over partitions of `i`.
pub fn faa_di_bruno_p(i: u32, phi: &BiPoly) -> Result<BiPoly> {
    if !(1..=16).contains(&i) {
        return Err(Error::InvalidParameter(format!("Faà di Bruno order must be in 1..=16, got {i}")));
    }
    // -∂^γ φ / γ!
    let mut scaled = Vec::with_capacity(i as usize);
    let mut deriv = phi.clone();
    for gamma in 1..=i {
        deriv = deriv.d();
        let inv = GaussianRational::real(BigRational::new(BigInt::from(-1), factorial(gamma)));
        scaled.push(deriv.scale(&inv));
    }
    let i_fact = factorial(i);
    let mut out = BiPoly::zero();
    for mult in integer_partitions(i) {
        let denom: BigInt = mult.iter().map(|&m| factorial(m)).product();
        let coef = GaussianRational::real(BigRational::new(i_fact.clone(), denom));
        let mut prod = BiPoly::constant(coef);
        for (g, &m) in mult.iter().enumerate() {
            if m > 0 {
                prod = &prod * &scaled[g].pow(m);
            }
        }
        prod.check_degree()?;
        out = &out + &prod;
    }
    Ok(out)
}

/// `e^{φ} ∂^i e^{-φ}` by repeated application of `A = ∂ - ∂φ` to 1, independent of
/// the partition sum.
pub fn weighted_derivative_chain(i: u32, phi: &BiPoly) -> Result<BiPoly> {
    let dphi = phi.d();
    let mut g = BiPoly::one();
    for _ in 0..i {
        g = twisted_d(&g, &dphi)?;
    }
    Ok(g)
}

/// `∂̄^k(∂̄^{k*}_φ ψ) - ∂̄^{k*}_φ(∂̄^k ψ)` by direct composition.
pub fn commutator_direct(psi: &BiPoly, phi: &BiPoly, k: u32) -> Result<BiPoly> {
    let left = formal_adjoint_k(psi, phi, k)?.dbar_pow(k);
    let right = formal_adjoint_k(&psi.dbar_pow(k), phi, k)?;
    Ok(&left - &right)
}

/// The same commutator through `(-1)^k Σ_{i,j=1}^k C(k,i) C(k,j) ∂^{k-i} ∂̄^{k-j} ψ · ∂̄^j P_i`.
pub fn commutator_formula(psi: &BiPoly, phi: &BiPoly, k: u32) -> Result<BiPoly> {
    check_order(k)?;
    let mut out = BiPoly::zero();
    for i in 1..=k {
        let p_i = faa_di_bruno_p(i, phi)?;
        for j in 1..=k {
            let dbar_p = p_i.dbar_pow(j);
            if dbar_p.is_zero() {
                continue;
            }
            let c = GaussianRational::real(BigRational::from_integer(binomial(k, i) * binomial(k, j)));
            let dpsi = psi.d_pow(k - i).dbar_pow(k - j);
            out = &out + &(&dpsi * &dbar_p).scale(&c);
        }
    }
    out.check_degree()?;
    Ok(if k % 2 == 1 { -out } else { out })
}

/// Direct vs. formula commutator as an exact-zero report.
pub fn verify_commutator(psi: &BiPoly, w: &WeightSpec, k: u32) -> Result<IdentityReport> {
    let phi = w.as_poly()?;
    let direct = commutator_direct(psi, &phi, k)?;
    let formula = commutator_formula(psi, &phi, k)?;
    let diff = &direct - &formula;
    Ok(IdentityReport::identity(
        "commutator-expansion",
        k,
        w.to_string(),
        psi,
        Discrepancy::Poly(diff),
        vec![("direct".into(), direct.to_string()), ("formula".into(), formula.to_string())],
    ))
}

/// `‖H*ψ‖² = ‖Hψ‖² + ⟨ψ, HH*ψ - H*Hψ⟩` on the Fock weight, all terms exact (÷π).
pub fn verify_lemma_adjoint_norm(psi: &BiPoly, k: u32, a: &GaussianRational) -> Result<IdentityReport> {
    let phi = BiPoly::abs_sqr();
    let h_star = operator_adjoint(psi, &phi, k, a)?;
    let h = apply_operator_exact(psi, k, a);
    // HH* - H*H computed from the operators themselves, not from the cancellation
    let hh_star = apply_operator_exact(&h_star, k, a);
    let h_star_h = operator_adjoint(&h, &phi, k, a)?;
    let comm = &hh_star - &h_star_h;
    let lhs = gaussian_pairing(&h_star, &h_star);
    let h_norm = gaussian_pairing(&h, &h);
    let comm_pair = gaussian_pairing(psi, &comm);
    let rhs = &h_norm + &comm_pair;
    let weight = WeightSpec::fock().to_string();
    Ok(IdentityReport::identity(
        "adjoint-norm",
        k,
        weight,
        psi,
        Discrepancy::Scalar(&lhs - &rhs),
        vec![
            ("a".into(), a.to_string()),
            ("norm_Hstar_psi_sq".into(), lhs.to_string()),
            ("norm_H_psi_sq".into(), h_norm.to_string()),
            ("commutator_pairing".into(), comm_pair.to_string()),
        ],
    ))
}

/// `(k!)² / ((j!)² (k-j)!)`.
pub fn pairing_coefficient(k: u32, j: u32) -> BigRational {
    let kf = factorial(k);
    let jf = factorial(j);
    BigRational::new(&kf * &kf, &jf * &jf * factorial(k - j))
}

/// `⟨ψ, [∂̄^k, ∂̄^{k*}]ψ⟩ = Σ_{j<k} (k!)²/((j!)²(k-j)!) ‖∂̄^j ψ‖²` on the Fock weight.
pub fn verify_lemma_gaussian_pairing(psi: &BiPoly, k: u32) -> Result<IdentityReport> {
    verify_lemma_gaussian_pairing_with(psi, k, pairing_coefficient)
}

/// As [`verify_lemma_gaussian_pairing`] with a caller-supplied coefficient table;
/// lets tests confirm that a wrong table is detected.
pub fn verify_lemma_gaussian_pairing_with<F>(psi: &BiPoly, k: u32, coeff: F) -> Result<IdentityReport>
where
    F: Fn(u32, u32) -> BigRational,
{
    let phi = BiPoly::abs_sqr();
    let comm = commutator_direct(psi, &phi, k)?;
    let lhs = gaussian_pairing(psi, &comm);
    let mut rhs = GaussianRational::zero();
    let mut terms = vec![("pairing".to_string(), lhs.to_string())];
    let mut dj = psi.clone();
    for j in 0..k {
        let norm = gaussian_pairing(&dj, &dj);
        terms.push((format!("norm_dbar{j}_sq"), norm.to_string()));
        rhs += &norm.scale(&coeff(k, j));
        dj = dj.dbar();
    }
    Ok(IdentityReport::identity(
        "gaussian-commutator-pairing",
        k,
        WeightSpec::fock().to_string(),
        psi,
        Discrepancy::Scalar(&lhs - &rhs),
        terms,
    ))
}

/// `‖(∂̄^k + a)*ψ‖² - k!‖ψ‖² ≥ 0`, exact, Fock weight.
pub fn coercivity_check(psi: &BiPoly, k: u32, a: &GaussianRational) -> Result<IdentityReport> {
    let h_star = operator_adjoint(psi, &BiPoly::abs_sqr(), k, a)?;
    let lhs = gaussian_pairing(&h_star, &h_star);
    let rhs = gaussian_pairing(psi, psi).scale(&BigRational::from_integer(factorial(k)));
    let slack = &lhs - &rhs;
    Ok(IdentityReport {
        name: "coercivity".into(),
        kind: ReportKind::Inequality,
        k,
        weight: WeightSpec::fock().to_string(),
        test_function: psi.to_string(),
        exact_zero: slack.is_zero(),
        discrepancy: Discrepancy::Scalar(slack),
        terms: vec![
            ("a".into(), a.to_string()),
            ("norm_Hstar_psi_sq".into(), lhs.to_string()),
            ("kfact_norm_psi_sq".into(), rhs.to_string()),
        ],
    })
}

/// `∂̄(∂̄*_φ ψ) - ∂̄*_φ(∂̄ψ) = ψ ∂̄∂φ` for a real polynomial weight.
pub fn first_order_commutator(psi: &BiPoly, w: &WeightSpec) -> Result<IdentityReport> {
    let phi = w.as_poly()?;
    if !phi.is_real() {
        return Err(Error::ComplexWeight);
    }
    let direct = commutator_direct(psi, &phi, 1)?;
    let expected = psi * &phi.d().dbar();
    Ok(IdentityReport::identity(
        "first-order-commutator",
        1,
        w.to_string(),
        psi,
        Discrepancy::Poly(&direct - &expected),
        vec![("direct".into(), direct.to_string()), ("psi_laplacian".into(), expected.to_string())],
    ))
}

/// Result of sampling the duality inequality `|⟨f,ψ⟩|² ≤ c ‖H*ψ‖²`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualCertificateReport {
    pub k: u32,
    pub a: Complex64,
    pub c: f64,
    pub seed: u64,
    pub trials: usize,
    /// Trials with `‖H*ψ‖ = 0`, excluded from the ratio.
    pub skipped: usize,
    pub max_ratio: f64,
    pub argmax_trial: Option<usize>,
    pub violations: usize,
    /// `‖f‖²/k!`: the constant the coercivity estimate certifies for every ψ.
    pub coercivity_c: f64,
}

impl DualCertificateReport {
    pub fn violated(&self) -> bool {
        self.violations > 0
    }

    /// Whether `c` is at least the constant delivered by the coercivity route.
    pub fn coercivity_certifies(&self) -> bool {
        self.c >= self.coercivity_c * (1.0 - DUAL_RATIO_RTOL)
    }
}

/// Relative slack on `ratio > c` so that equality cases do not flag on rounding.
pub const DUAL_RATIO_RTOL: f64 = 1e-9;

/// Degree bound of the random test functions in the sampling checks.
pub const TEST_FUNCTION_DEGREE: u32 = 6;

/// Falsification sampling of the duality certificate on the Fock weight.
///
/// Each trial draws a random polynomial ψ (own ChaCha stream), expands it in the
/// orthonormal basis, and evaluates `|⟨f,ψ⟩|² / ‖(∂̄^k + a)*ψ‖²`.
pub fn dual_certificate_check(
    f: &CoeffField,
    c: f64,
    params: &OperatorParams,
    trials: usize,
    seed: u64,
) -> Result<DualCertificateReport> {
    if c.is_nan() || c <= 0.0 {
        return Err(Error::InvalidParameter(format!("certificate constant must be positive, got {c}")));
    }
    f.check_finite()?;
    let k = params.k;
    let d = TEST_FUNCTION_DEGREE as usize;
    let (m_max, n_max) = (f.m_max().max(d), d + k as usize);
    let mono = monomial_fields(TEST_FUNCTION_DEGREE, m_max, n_max)?;
    let a_conj = params.a.conj();

    let per_trial: Vec<Option<f64>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t as u64);
            let psi = random_test_function(&mut rng, TEST_FUNCTION_DEGREE);
            let mut field = CoeffField::zeros(m_max, n_max);
            for (&(p, q), coef) in psi.terms() {
                field = field.axpy(coef.to_complex64(), &mono[&(p, q)]);
            }
            let mut up = field.clone();
            for _ in 0..k {
                // headroom n_max = deg + k keeps this lossless
                up = ladder_dbar_star(&up).0;
            }
            let h_star = up.axpy(a_conj, &field);
            let denom = field_norm(&h_star).powi(2);
            if denom == 0.0 {
                return None;
            }
            Some(field_inner(f, &field).norm_sqr() / denom)
        })
        .collect();

    let mut report = DualCertificateReport {
        k,
        a: params.a,
        c,
        seed,
        trials,
        skipped: 0,
        max_ratio: 0.0,
        argmax_trial: None,
        violations: 0,
        coercivity_c: field_norm(f).powi(2) / rational_to_f64(&BigRational::from_integer(factorial(k))),
    };
    for (t, r) in per_trial.into_iter().enumerate() {
        match r {
            None => report.skipped += 1,
            Some(r) => {
                if report.argmax_trial.is_none() || r > report.max_ratio {
                    report.max_ratio = r;
                    report.argmax_trial = Some(t);
                }
                if r > c * (1.0 + DUAL_RATIO_RTOL) {
                    report.violations += 1;
                }
            }
        }
    }
    Ok(report)
}

/// Orthonormal expansion of every monomial of total degree ≤ `max_degree`.
fn monomial_fields(max_degree: u32, m_max: usize, n_max: usize) -> Result<HashMap<(u32, u32), CoeffField>> {
    let mut out = HashMap::new();
    for total in 0..=max_degree {
        for p in 0..=total {
            let q = total - p;
            let mono = BiPoly::monomial(GaussianRational::one(), p, q);
            out.insert((p, q), poly_to_field(&mono, m_max, n_max)?);
        }
    }
    Ok(out)
}
