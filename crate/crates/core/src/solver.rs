//! Minimal-norm right inverse of `∂̄^k + a` on truncated coefficient fields.
//!
//! In the orthonormal basis the operator maps `u_{m,n+k}` to `s(n,k) u_{m,n+k}`
//! at `(m, n)` and adds `a u_{m,n}`, so it only couples indices with the same
//! `m` and the same `n mod k`. Each such chain gives an underdetermined
//! bidiagonal system `a u_n + s(n,k) u_{n+k} = f_n` (equations `n ≤ N_eq`,
//! unknowns `n ≤ N_eq + k`) whose minimal-norm solution `u = Aᴴ (A Aᴴ)⁻¹ f` goes
//! through a Hermitian positive-definite tridiagonal Gram system.
//!
//! Truncating any exact solution gives a feasible point of the truncated
//! system, so the truncated minimal norm never exceeds the true one and
//! `‖u‖ ≤ ‖f‖/√(k!)` is a certificate rather than an asymptotic statement.

use num_complex::Complex64;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hermite::{field_norm, ladder_dbar, ladder_scale, CoeffField, OperatorParams};
use crate::report::{fmt_complex, Record};

/// Slack allowed on `ratio ≤ 1/√(k!)`.
pub const BOUND_TOL: f64 = 1e-10;
/// Largest accepted `residual_low / ‖f‖`.
pub const RESIDUAL_RTOL: f64 = 1e-8;

/// `1/√(k!)`.
pub fn norm_bound(k: u32) -> f64 {
    (1..=k).map(|t| (t as f64).sqrt()).product::<f64>().recip()
}

/// `∂̄^k u + a u` in the orthonormal basis.
pub fn apply_operator(u: &CoeffField, params: &OperatorParams) -> CoeffField {
    ladder_dbar(u, params.k).axpy(params.a, u)
}

/// Minimal-norm solution of one chain and the LDLᴴ pivots of its Gram matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainSolution {
    pub u: Vec<Complex64>,
    pub min_pivot: f64,
    pub max_pivot: f64,
}

/// Solves `a u_i + s_i u_{i+1} = f_i` for `i < L` with `L + 1` unknowns, returning the
/// minimal-Euclidean-norm solution.
///
/// For `a = 0` the system decouples and `u = (0, f_0/s_0, …)`. Otherwise the
/// Gram matrix `G = A Aᴴ` has diagonal `|a|² + s_i²`, superdiagonal `s_i ā` and
/// subdiagonal `a s_i`; it is factored as `L D Lᴴ` without pivoting.
pub fn solve_chain(a: Complex64, scales: &[f64], rhs: &[Complex64]) -> Result<ChainSolution> {
    assert_eq!(scales.len(), rhs.len(), "one scale per equation");
    let len = rhs.len();
    let mut u = vec![Complex64::zero(); len + 1];
    if len == 0 {
        return Ok(ChainSolution { u, min_pivot: f64::INFINITY, max_pivot: 0.0 });
    }
    if a.is_zero() {
        let mut min_pivot = f64::INFINITY;
        let mut max_pivot: f64 = 0.0;
        for i in 0..len {
            let s2 = scales[i] * scales[i];
            min_pivot = min_pivot.min(s2);
            max_pivot = max_pivot.max(s2);
            u[i + 1] = rhs[i] / scales[i];
        }
        return Ok(ChainSolution { u, min_pivot, max_pivot });
    }

    let a2 = a.norm_sqr();
    let mut pivots = Vec::with_capacity(len);
    let mut lower = vec![Complex64::zero(); len];
    let mut y = Vec::with_capacity(len);
    for i in 0..len {
        let diag = a2 + scales[i] * scales[i];
        let pivot = if i == 0 {
            diag
        } else {
            lower[i] = a * scales[i - 1] / pivots[i - 1];
            diag - lower[i].norm_sqr() * pivots[i - 1]
        };
        if !pivot.is_finite() || pivot <= 0.0 {
            return Err(Error::GramSolve { m: 0, residue: 0, pivot });
        }
        pivots.push(pivot);
        let prev = if i == 0 { Complex64::zero() } else { lower[i] * y[i - 1] };
        y.push(rhs[i] - prev);
    }
    for i in 0..len {
        y[i] /= pivots[i];
    }
    for i in (0..len - 1).rev() {
        let next = y[i + 1];
        y[i] -= lower[i + 1].conj() * next;
    }
    // u = Aᴴ y
    let ac = a.conj();
    for j in 0..=len {
        let mut v = Complex64::zero();
        if j < len {
            v += ac * y[j];
        }
        if j > 0 {
            v += scales[j - 1] * y[j - 1];
        }
        u[j] = v;
    }
    let min_pivot = pivots.iter().copied().fold(f64::INFINITY, f64::min);
    let max_pivot = pivots.iter().copied().fold(0.0, f64::max);
    Ok(ChainSolution { u, min_pivot, max_pivot })
}

/// Certification record of one solve.
#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    pub k: u32,
    pub a: Complex64,
    pub m_max: usize,
    pub n_eq: usize,
    pub n_u: usize,
    pub norm_f: f64,
    pub norm_u: f64,
    /// `‖u‖/‖f‖`, defined as 0 for `f = 0`.
    pub ratio: f64,
    pub bound: f64,
    pub bound_satisfied: bool,
    pub residual_low: f64,
    pub tail_mass: f64,
    pub chains: usize,
    /// Largest `max_pivot / min_pivot` over chains: a lower bound on the Gram condition number.
    pub worst_pivot_ratio: f64,
    pub smallest_pivot: f64,
}

impl SolveReport {
    pub fn to_record(&self) -> Record {
        Record::new("dbar solve-report v1")
            .field("k", self.k)
            .field("a", fmt_complex(self.a))
            .field("M", self.m_max)
            .field("N_eq", self.n_eq)
            .field("N_u", self.n_u)
            .num("norm_f", self.norm_f)
            .num("norm_u", self.norm_u)
            .num("ratio", self.ratio)
            .num("bound", self.bound)
            .field("bound_satisfied", self.bound_satisfied)
            .num("residual_low", self.residual_low)
            .num("tail_mass", self.tail_mass)
            .field("chains", self.chains)
            .num("worst_pivot_ratio", self.worst_pivot_ratio)
            .num("smallest_pivot", self.smallest_pivot)
            .field("certified", certify(self))
    }

    pub fn to_text(&self) -> String {
        self.to_record().to_text()
    }
}

/// `ratio ≤ 1/√(k!) + 1e-10` and `residual_low/‖f‖ ≤ 1e-8`.
pub fn certify(report: &SolveReport) -> bool {
    let ratio_ok = report.ratio <= norm_bound(report.k) + BOUND_TOL;
    let residual_ok = if report.norm_f == 0.0 {
        report.residual_low == 0.0
    } else {
        report.residual_low / report.norm_f <= RESIDUAL_RTOL
    };
    ratio_ok && residual_ok
}

/// `(‖(Hu - f)|_{n ≤ N_eq}‖, ‖Hu|_{N_eq < n ≤ N_eq+k}‖)`.
pub fn residual(u: &CoeffField, f: &CoeffField, params: &OperatorParams, n_eq: usize) -> (f64, f64) {
    let hu = apply_operator(u, params);
    let m_max = hu.m_max().max(f.m_max());
    let top = n_eq + params.k as usize;
    let mut low = 0.0;
    let mut tail = 0.0;
    for m in 0..=m_max {
        for n in 0..=top {
            if n <= n_eq {
                low += (hu.get(m, n) - f.get(m, n)).norm_sqr();
            } else {
                tail += hu.get(m, n).norm_sqr();
            }
        }
    }
    (low.sqrt(), tail.sqrt())
}

/// One coefficient row with its chain count, worst pivot ratio and smallest pivot.
type RowSolution = (Vec<Complex64>, usize, f64, f64);

/// Minimal-norm `u` (truncation `(M, N_eq + k)`) with `(∂̄^k + a)u = f` on `n ≤ N_eq`.
pub fn solve_min_norm(f: &CoeffField, params: &OperatorParams, n_eq: usize) -> Result<(CoeffField, SolveReport)> {
    f.check_finite()?;
    if f.n_max() > n_eq {
        if let Some((m, n, _)) = f.nonzero().find(|&(_, n, _)| n > n_eq) {
            return Err(Error::InvalidParameter(format!(
                "f has a nonzero coefficient at ({m}, {n}) above N_eq = {n_eq}"
            )));
        }
    }
    let k = params.k as usize;
    let m_max = f.m_max();
    let n_u = n_eq + k;

    let rows: Vec<Result<RowSolution>> = (0..=m_max)
        .into_par_iter()
        .map(|m| {
            let mut row = vec![Complex64::zero(); n_u + 1];
            let mut chains = 0;
            let mut worst: f64 = 1.0;
            let mut smallest = f64::INFINITY;
            for r in 0..k.min(n_eq + 1) {
                let eq: Vec<usize> = (r..=n_eq).step_by(k).collect();
                let scales: Vec<f64> = eq.iter().map(|&n| ladder_scale(n, params.k)).collect();
                let rhs: Vec<Complex64> = eq.iter().map(|&n| f.get(m, n)).collect();
                let sol = solve_chain(params.a, &scales, &rhs).map_err(|e| match e {
                    Error::GramSolve { pivot, .. } => Error::GramSolve { m, residue: r, pivot },
                    other => other,
                })?;
                for (j, v) in sol.u.into_iter().enumerate() {
                    row[r + j * k] = v;
                }
                chains += 1;
                worst = worst.max(sol.max_pivot / sol.min_pivot);
                smallest = smallest.min(sol.min_pivot);
            }
            Ok((row, chains, worst, smallest))
        })
        .collect();

    let mut u = CoeffField::zeros(m_max, n_u);
    let mut chains = 0;
    let mut worst: f64 = 1.0;
    let mut smallest = f64::INFINITY;
    for (m, row) in rows.into_iter().enumerate() {
        let (row, c, w, s) = row?;
        u.row_mut(m).copy_from_slice(&row);
        chains += c;
        worst = worst.max(w);
        smallest = smallest.min(s);
    }
    u.check_finite()?;

    let norm_f = field_norm(f);
    let norm_u = field_norm(&u);
    let ratio = if norm_f == 0.0 { 0.0 } else { norm_u / norm_f };
    let bound = norm_bound(params.k);
    let (residual_low, tail_mass) = residual(&u, f, params, n_eq);
    let report = SolveReport {
        k: params.k,
        a: params.a,
        m_max,
        n_eq,
        n_u,
        norm_f,
        norm_u,
        ratio,
        bound,
        bound_satisfied: ratio <= bound + BOUND_TOL,
        residual_low,
        tail_mass,
        chains,
        worst_pivot_ratio: worst,
        smallest_pivot: smallest,
    };
    Ok((u, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn params(k: u32, a: Complex64) -> OperatorParams {
        OperatorParams::new(k, a).unwrap()
    }

    #[test]
    fn apply_operator_examples() {
        for k in 1..=5u32 {
            let u = CoeffField::basis(0, k as usize, 0, k as usize);
            let hu = apply_operator(&u, &params(k, Complex64::zero()));
            let fact: f64 = (1..=k).map(f64::from).product();
            assert!((hu.get(0, 0) - c(fact.sqrt(), 0.0)).norm() < 1e-12);
            let hu = apply_operator(&CoeffField::basis(0, 0, 2, 4), &params(k, c(2.0, -1.0)));
            assert_eq!(hu, CoeffField::basis(0, 0, 2, 4).scaled(c(2.0, -1.0)));
        }
        let zero = CoeffField::zeros(3, 3);
        assert_eq!(apply_operator(&zero, &params(2, c(1.0, 1.0))), zero);
    }

    #[test]
    fn sharp_case_attains_the_bound() {
        for k in 1..=6u32 {
            let f = CoeffField::basis(0, 0, 0, 0);
            let (u, rep) = solve_min_norm(&f, &params(k, Complex64::zero()), 16).unwrap();
            let b = norm_bound(k);
            assert!((u.get(0, k as usize) - c(b, 0.0)).norm() < 1e-15);
            assert!((rep.ratio - b).abs() < 1e-15);
            assert!(certify(&rep));
        }
    }

    #[test]
    fn second_mode_example() {
        let f = CoeffField::basis(0, 1, 0, 1);
        let (u, rep) = solve_min_norm(&f, &params(1, Complex64::zero()), 1).unwrap();
        assert!((u.get(0, 2) - c(0.5f64.sqrt(), 0.0)).norm() < 1e-15);
        assert!((rep.ratio - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(rep.residual_low, 0.0);
        assert_eq!(rep.tail_mass, 0.0);
    }

    #[test]
    fn zero_input() {
        let f = CoeffField::zeros(2, 8);
        let (u, rep) = solve_min_norm(&f, &params(3, c(1.0, 2.0)), 8).unwrap();
        assert_eq!(u.norm_sqr(), 0.0);
        assert_eq!(rep.ratio, 0.0);
        assert!(certify(&rep));
    }

    #[test]
    fn large_constant_stays_bounded() {
        let f = CoeffField::basis(0, 0, 0, 0);
        let (_, rep) = solve_min_norm(&f, &params(1, c(100.0, 0.0)), 64).unwrap();
        assert!(rep.ratio <= 1.0);
        assert!(rep.residual_low <= 1e-10);
    }

    #[test]
    fn residual_of_zero_guess() {
        let f = CoeffField::basis(0, 0, 0, 4);
        let u = CoeffField::zeros(0, 5);
        let (low, tail) = residual(&u, &f, &params(1, c(1.0, 0.0)), 4);
        assert_eq!(low, 1.0);
        assert_eq!(tail, 0.0);
    }

    #[test]
    fn kernel_orthogonality_for_zero_constant() {
        let mut rng = crate::random::trial_rng(3, 0);
        let f = crate::random::random_field(&mut rng, 3, 20);
        for k in 1..=4u32 {
            let (u, _) = solve_min_norm(&f, &params(k, Complex64::zero()), 20).unwrap();
            for m in 0..=3 {
                for n in 0..k as usize {
                    assert_eq!(u.get(m, n), Complex64::zero());
                }
            }
        }
    }

    #[test]
    fn certify_examples() {
        let mut rep = SolveReport {
            k: 2,
            a: Complex64::zero(),
            m_max: 0,
            n_eq: 8,
            n_u: 10,
            norm_f: 1.0,
            norm_u: 0.7,
            ratio: 0.7,
            bound: norm_bound(2),
            bound_satisfied: true,
            residual_low: 0.0,
            tail_mass: 0.0,
            chains: 2,
            worst_pivot_ratio: 1.0,
            smallest_pivot: 1.0,
        };
        assert!(certify(&rep));
        rep.k = 3;
        rep.ratio = 0.41;
        assert!(!certify(&rep));
        rep.norm_f = 0.0;
        rep.ratio = 0.0;
        assert!(certify(&rep));
        rep.norm_f = 1.0;
        rep.residual_low = 1e-6;
        assert!(!certify(&rep));
    }

    #[test]
    fn rejects_bad_input() {
        let mut f = CoeffField::zeros(0, 3);
        f.set(0, 1, c(f64::NAN, 0.0));
        assert!(matches!(solve_min_norm(&f, &params(1, Complex64::zero()), 3), Err(Error::NonFinite(_))));
        let f = CoeffField::basis(0, 5, 0, 5);
        assert!(solve_min_norm(&f, &params(1, Complex64::zero()), 4).is_err());
        // trailing zeros above N_eq are fine
        let f = CoeffField::basis(0, 2, 0, 5);
        assert!(solve_min_norm(&f, &params(1, Complex64::zero()), 4).is_ok());
    }

    #[test]
    fn report_text_has_fixed_field_order() {
        let f = CoeffField::basis(0, 0, 0, 0);
        let (_, rep) = solve_min_norm(&f, &params(2, Complex64::zero()), 4).unwrap();
        let keys: Vec<String> = rep.to_record().fields.into_iter().map(|(k, _)| k).collect();
        assert_eq!(
            keys,
            [
                "k", "a", "M", "N_eq", "N_u", "norm_f", "norm_u", "ratio", "bound", "bound_satisfied",
                "residual_low", "tail_mass", "chains", "worst_pivot_ratio", "smallest_pivot", "certified"
            ]
        );
    }
}
