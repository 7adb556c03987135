//! Itô complex Hermite polynomials and coefficient fields in the orthonormal basis.
//!
//! `H_{m,n}(z, z̄) = Σ_j (-1)^j j! C(m,j) C(n,j) z^{m-j} z̄^{n-j}` with
//! `‖H_{m,n}‖² = π m! n!` under `e^{-|z|²}`. The first index counts z-degree,
//! the second z̄-degree; ∂̄ lowers the second index and its Fock adjoint
//! `∂̄* = z̄ - ∂` raises it.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactpoly::{gaussian_pairing, BiPoly, GaussianRational};

/// Largest Hermite index the exact layer will build.
pub const HERMITE_CAP: u32 = 32;

/// Order `k ≥ 1` and constant `a` of `H = ∂̄^k + a`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OperatorParams {
    pub k: u32,
    pub a: Complex64,
}

impl OperatorParams {
    pub fn new(k: u32, a: Complex64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("operator order k must be at least 1".into()));
        }
        if !(a.re.is_finite() && a.im.is_finite()) {
            return Err(Error::NonFinite(format!("constant a = {a}")));
        }
        Ok(OperatorParams { k, a })
    }
}

/// Coefficients of a function against `h_{m,n} = H_{m,n}/√(π m! n!)`, for
/// `0 ≤ m ≤ m_max`, `0 ≤ n ≤ n_max`. Stored dense, row-major in `m`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffField {
    m_max: usize,
    n_max: usize,
    data: Vec<Complex64>,
}

impl CoeffField {
    pub fn zeros(m_max: usize, n_max: usize) -> Self {
        CoeffField { m_max, n_max, data: vec![Complex64::zero(); (m_max + 1) * (n_max + 1)] }
    }

    /// The single basis element `h_{m,n}` inside an `(m_max, n_max)` truncation.
    pub fn basis(m: usize, n: usize, m_max: usize, n_max: usize) -> Self {
        let mut f = Self::zeros(m_max.max(m), n_max.max(n));
        f.set(m, n, Complex64::new(1.0, 0.0));
        f
    }

    pub fn from_entries<I>(m_max: usize, n_max: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Complex64)>,
    {
        let mut f = Self::zeros(m_max, n_max);
        for (m, n, c) in entries {
            if m > m_max || n > n_max {
                return Err(Error::InvalidParameter(format!(
                    "entry ({m}, {n}) outside truncation ({m_max}, {n_max})"
                )));
            }
            f.set(m, n, c);
        }
        f.check_finite()?;
        Ok(f)
    }

    pub fn m_max(&self) -> usize {
        self.m_max
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    #[inline]
    fn idx(&self, m: usize, n: usize) -> usize {
        m * (self.n_max + 1) + n
    }

    /// Entry `c_{m,n}`; zero outside the truncation.
    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        if m > self.m_max || n > self.n_max {
            return Complex64::zero();
        }
        self.data[self.idx(m, n)]
    }

    pub fn set(&mut self, m: usize, n: usize, c: Complex64) {
        let i = self.idx(m, n);
        self.data[i] = c;
    }

    pub fn row(&self, m: usize) -> &[Complex64] {
        let start = self.idx(m, 0);
        &self.data[start..start + self.n_max + 1]
    }

    pub fn row_mut(&mut self, m: usize) -> &mut [Complex64] {
        let start = self.idx(m, 0);
        let len = self.n_max + 1;
        &mut self.data[start..start + len]
    }

    /// Nonzero entries in `(m, n)` order.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..=self.m_max)
            .flat_map(move |m| (0..=self.n_max).map(move |n| (m, n, self.get(m, n))))
            .filter(|(_, _, c)| !c.is_zero())
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn check_finite(&self) -> Result<()> {
        match self.nonfinite_entry() {
            None => Ok(()),
            Some((m, n)) => Err(Error::NonFinite(format!("coefficient ({m}, {n})"))),
        }
    }

    fn nonfinite_entry(&self) -> Option<(usize, usize)> {
        (0..=self.m_max)
            .flat_map(|m| (0..=self.n_max).map(move |n| (m, n)))
            .find(|&(m, n)| {
                let c = self.get(m, n);
                !(c.re.is_finite() && c.im.is_finite())
            })
    }

    /// Copy into a larger (or equal) truncation, zero-filled.
    pub fn padded(&self, m_max: usize, n_max: usize) -> CoeffField {
        let mut out = CoeffField::zeros(m_max.max(self.m_max), n_max.max(self.n_max));
        for m in 0..=self.m_max {
            out.row_mut(m)[..=self.n_max].copy_from_slice(self.row(m));
        }
        out
    }

    /// Keep only `n ≤ n_max` and `m ≤ m_max`.
    pub fn restricted(&self, m_max: usize, n_max: usize) -> CoeffField {
        let mut out = CoeffField::zeros(m_max, n_max);
        for m in 0..=m_max.min(self.m_max) {
            for n in 0..=n_max.min(self.n_max) {
                out.set(m, n, self.get(m, n));
            }
        }
        out
    }

    pub fn scaled(&self, s: Complex64) -> CoeffField {
        CoeffField { m_max: self.m_max, n_max: self.n_max, data: self.data.iter().map(|c| c * s).collect() }
    }

    /// Entrywise `self + s·other` on the union truncation.
    pub fn axpy(&self, s: Complex64, other: &CoeffField) -> CoeffField {
        let mm = self.m_max.max(other.m_max);
        let nn = self.n_max.max(other.n_max);
        let mut out = self.padded(mm, nn);
        for m in 0..=other.m_max {
            for n in 0..=other.n_max {
                let i = out.idx(m, n);
                out.data[i] += s * other.get(m, n);
            }
        }
        out
    }

    pub fn sub(&self, other: &CoeffField) -> CoeffField {
        self.axpy(Complex64::new(-1.0, 0.0), other)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// `‖f‖` by Parseval in the orthonormal basis.
pub fn field_norm(f: &CoeffField) -> f64 {
    f.norm_sqr().sqrt()
}

/// `⟨f, g⟩`, conjugate-linear in `f`; the smaller truncation is zero-padded.
pub fn field_inner(f: &CoeffField, g: &CoeffField) -> Complex64 {
    let mm = f.m_max.min(g.m_max);
    let nn = f.n_max.min(g.n_max);
    let mut acc = Complex64::zero();
    for m in 0..=mm {
        for n in 0..=nn {
            acc += f.get(m, n).conj() * g.get(m, n);
        }
    }
    acc
}

/// `√((n+1)(n+2)⋯(n+k))`, the ∂̄^k ladder scale from `h_{m,n+k}` down to `h_{m,n}`.
/// Built as a running product so large `n` never touches a factorial.
pub fn ladder_scale(n: usize, k: u32) -> f64 {
    (1..=k as usize).map(|t| ((n + t) as f64).sqrt()).product()
}

/// Applies `∂̄^k`: `c_{m,n}` moves to `(m, n-k)` scaled by `√(n!/(n-k)!)`.
pub fn ladder_dbar(f: &CoeffField, k: u32) -> CoeffField {
    let k = k as usize;
    let mut out = CoeffField::zeros(f.m_max, f.n_max);
    for m in 0..=f.m_max {
        let src = f.row(m);
        let dst = out.row_mut(m);
        for n in k..src.len() {
            dst[n - k] = src[n] * ladder_scale(n - k, k as u32);
        }
    }
    out
}

/// Applies the Fock adjoint `∂̄* = z̄ - ∂`: `c_{m,n}` moves to `(m, n+1)` scaled by
/// `√(n+1)`. Mass pushed past `n_max` is dropped from the field and returned as
/// its squared norm.
pub fn ladder_dbar_star(f: &CoeffField) -> (CoeffField, f64) {
    let mut out = CoeffField::zeros(f.m_max, f.n_max);
    let mut lost = 0.0;
    for m in 0..=f.m_max {
        let src = f.row(m);
        let dst = out.row_mut(m);
        for n in 0..src.len() {
            let v = src[n] * ((n + 1) as f64).sqrt();
            if n + 1 < dst.len() {
                dst[n + 1] = v;
            } else {
                lost += v.norm_sqr();
            }
        }
    }
    (out, lost)
}

/// Exact `H_{m,n}` for `m, n ≤ 32`.
pub fn hermite_poly(m: u32, n: u32) -> Result<BiPoly> {
    if m > HERMITE_CAP || n > HERMITE_CAP {
        return Err(Error::HermiteCap { m, n, cap: HERMITE_CAP });
    }
    let mut out = BiPoly::zero();
    for j in 0..=m.min(n) {
        let c = BigInt::from(if j % 2 == 0 { 1 } else { -1 })
            * factorial(j)
            * binomial(m, j)
            * binomial(n, j);
        out.add_term(m - j, n - j, &GaussianRational::real(BigRational::from_integer(c)));
    }
    Ok(out)
}

pub(crate) fn factorial(n: u32) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

pub(crate) fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|t| (t as f64).ln()).sum()
}

/// `√(π / (m! n!))`, evaluated in log space.
fn inv_norm_times_pi(m: usize, n: usize) -> f64 {
    (0.5 * (std::f64::consts::PI.ln() - ln_factorial(m) - ln_factorial(n))).exp()
}

/// Orthonormal coefficients of a polynomial, from exact pairings against `H_{m,n}`.
///
/// `c_{m,n} = ⟨H_{m,n}, p⟩ / √(π m! n!)`; the pairing is exact, so each entry
/// carries a single rounding before the final scale.
pub fn poly_to_field(p: &BiPoly, m_max: usize, n_max: usize) -> Result<CoeffField> {
    let (bp, bq) = p.bidegree();
    if bp as usize > m_max || bq as usize > n_max {
        return Err(Error::DegreeOverflow { p: bp, q: bq, m_max, n_max });
    }
    let mut out = CoeffField::zeros(m_max, n_max);
    // Triangularity: H_{m,n} has leading term z^m z̄^n, so only m ≤ bp, n ≤ bq can pair.
    for m in 0..=bp {
        for n in 0..=bq {
            let h = hermite_poly(m, n)?;
            let pairing = gaussian_pairing(&h, p);
            if pairing.is_zero() {
                continue;
            }
            let s = inv_norm_times_pi(m as usize, n as usize);
            out.set(m as usize, n as usize, pairing.to_complex64() * s);
        }
    }
    Ok(out)
}

/// `poly_to_field` with the smallest truncation that holds `p`.
pub fn poly_to_field_auto(p: &BiPoly) -> Result<CoeffField> {
    let (bp, bq) = p.bidegree();
    poly_to_field(p, bp as usize, bq as usize)
}

/// Values `h_{m,n}(z)` for all `m ≤ m_max`, `n ≤ n_max`, row-major in `m`.
///
/// Normalised recurrences: `h_{0,n+1} = z̄ h_{0,n}/√(n+1)` and
/// `h_{m+1,n} = (z h_{m,n} - √n h_{m,n-1})/√(m+1)`.
pub fn basis_values(z: Complex64, m_max: usize, n_max: usize) -> Vec<Complex64> {
    let w = n_max + 1;
    let mut h = vec![Complex64::zero(); (m_max + 1) * w];
    let zb = z.conj();
    h[0] = Complex64::new(std::f64::consts::PI.sqrt().recip(), 0.0);
    for n in 0..n_max {
        h[n + 1] = zb * h[n] / ((n + 1) as f64).sqrt();
    }
    for m in 0..m_max {
        let inv = ((m + 1) as f64).sqrt().recip();
        for n in 0..=n_max {
            let mut v = z * h[m * w + n];
            if n > 0 {
                v -= h[m * w + n - 1] * (n as f64).sqrt();
            }
            h[(m + 1) * w + n] = v * inv;
        }
    }
    h
}

/// Pointwise synthesis `Σ c_{m,n} h_{m,n}(z)`.
pub fn eval_field(f: &CoeffField, z: Complex64) -> Complex64 {
    let h = basis_values(z, f.m_max, f.n_max);
    f.data.iter().zip(h.iter()).map(|(c, v)| c * v).sum()
}

/// Rational value of `⟨H_{m,n}, H_{p,q}⟩ / π`, used by the orthonormality tests.
pub fn hermite_gram(m: u32, n: u32, p: u32, q: u32) -> Result<GaussianRational> {
    Ok(gaussian_pairing(&hermite_poly(m, n)?, &hermite_poly(p, q)?))
}
