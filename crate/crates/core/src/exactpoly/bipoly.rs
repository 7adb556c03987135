use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::GaussianRational;
use crate::error::{Error, Result};

/// Degree cap for operator-level routines that repeatedly multiply.
pub const MAX_DEGREE: u32 = 64;

/// Polynomial in z and z̄ with Gaussian-rational coefficients.
///
/// Key `(p, q)` is the monomial `z^p z̄^q`. Zero coefficients are never stored,
/// so structural equality is polynomial equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), GaussianRational>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: GaussianRational, p: u32, q: u32) -> Self {
        let mut out = BiPoly::zero();
        out.add_term(p, q, &c);
        out
    }

    /// The polynomial `z`.
    pub fn z() -> Self {
        Self::monomial(GaussianRational::one(), 1, 0)
    }

    /// The polynomial `z̄`.
    pub fn zbar() -> Self {
        Self::monomial(GaussianRational::one(), 0, 1)
    }

    /// `z z̄ = |z|^2`, the Fock weight.
    pub fn abs_sqr() -> Self {
        Self::monomial(GaussianRational::one(), 1, 1)
    }

    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = ((u32, u32), GaussianRational)>,
    {
        let mut out = BiPoly::zero();
        for ((p, q), c) in terms {
            out.add_term(p, q, &c);
        }
        out
    }

    pub fn add_term(&mut self, p: u32, q: u32, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((p, q)).or_insert_with(GaussianRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&(p, q));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &GaussianRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, p: u32, q: u32) -> GaussianRational {
        self.terms.get(&(p, q)).cloned().unwrap_or_else(GaussianRational::zero)
    }

    /// Total degree max(p + q); zero for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|&(p, q)| p + q).max().unwrap_or(0)
    }

    /// Largest power of z and of z̄ appearing anywhere.
    pub fn bidegree(&self) -> (u32, u32) {
        self.terms
            .keys()
            .fold((0, 0), |(mp, mq), &(p, q)| (mp.max(p), mq.max(q)))
    }

    pub fn check_degree(&self) -> Result<()> {
        let degree = self.degree();
        if degree > MAX_DEGREE {
            return Err(Error::DegreeCap { degree, cap: MAX_DEGREE });
        }
        Ok(())
    }

    pub fn scale(&self, c: &GaussianRational) -> BiPoly {
        if c.is_zero() {
            return BiPoly::zero();
        }
        BiPoly { terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect() }
    }

    /// Swaps the roles of z and z̄ and conjugates every coefficient.
    pub fn conj(&self) -> BiPoly {
        BiPoly { terms: self.terms.iter().map(|(&(p, q), c)| ((q, p), c.conj())).collect() }
    }

    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    /// Wirtinger ∂ = ∂/∂z.
    pub fn d(&self) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(p, q), c) in &self.terms {
            if p > 0 {
                out.add_term(p - 1, q, &c.scale(&int(p)));
            }
        }
        out
    }

    /// Wirtinger ∂̄ = ∂/∂z̄.
    pub fn dbar(&self) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(p, q), c) in &self.terms {
            if q > 0 {
                out.add_term(p, q - 1, &c.scale(&int(q)));
            }
        }
        out
    }

    pub fn d_pow(&self, k: u32) -> BiPoly {
        (0..k).fold(self.clone(), |acc, _| acc.d())
    }

    pub fn dbar_pow(&self, k: u32) -> BiPoly {
        (0..k).fold(self.clone(), |acc, _| acc.dbar())
    }

    pub fn pow(&self, e: u32) -> BiPoly {
        (0..e).fold(BiPoly::one(), |acc, _| &acc * self)
    }

    /// Pointwise evaluation in double precision (Horner is not needed at these degrees).
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let zb = z.conj();
        self.terms
            .iter()
            .map(|(&(p, q), c)| c.to_complex64() * z.powu(p) * zb.powu(q))
            .sum()
    }
}

fn int(v: u32) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

impl<'a> Add<&'a BiPoly> for &'a BiPoly {
    type Output = BiPoly;
    fn add(self, o: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&(p, q), c) in &o.terms {
            out.add_term(p, q, c);
        }
        out
    }
}

impl<'a> Sub<&'a BiPoly> for &'a BiPoly {
    type Output = BiPoly;
    fn sub(self, o: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&(p, q), c) in &o.terms {
            out.add_term(p, q, &-c);
        }
        out
    }
}

impl<'a> Mul<&'a BiPoly> for &'a BiPoly {
    type Output = BiPoly;
    fn mul(self, o: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(p1, q1), c1) in &self.terms {
            for (&(p2, q2), c2) in &o.terms {
                out.add_term(p1 + p2, q1 + q2, &(c1 * c2));
            }
        }
        out
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for BiPoly {
            type Output = BiPoly;
            fn $m(self, o: BiPoly) -> BiPoly {
                (&self).$m(&o)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        -&self
    }
}

/// `⟨f, g⟩ / π` for the weight `e^{-|z|^2}`, conjugate-linear in `f`.
///
/// Uses `∫ z^m z̄^n e^{-|z|^2} dσ = π m! δ_{mn}`, so the result is an exact
/// rational multiple of π.
pub fn gaussian_pairing(f: &BiPoly, g: &BiPoly) -> GaussianRational {
    let mut acc = GaussianRational::zero();
    let mut fact_cache: Vec<BigInt> = vec![BigInt::one()];
    for (&(p, q), cf) in f.terms() {
        let cf = cf.conj();
        // conj(z^p z̄^q) = z^q z̄^p; paired against z^r z̄^s the moment needs q + r = p + s.
        for (&(r, s), cg) in g.terms() {
            if q + r != p + s {
                continue;
            }
            let m = (q + r) as usize;
            while fact_cache.len() <= m {
                let next = fact_cache.last().unwrap() * BigInt::from(fact_cache.len());
                fact_cache.push(next);
            }
            let moment = BigRational::from_integer(fact_cache[m].clone());
            acc += &(&cf * cg).scale(&moment);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: i64, im: i64) -> GaussianRational {
        GaussianRational::from_ints(re, im)
    }

    fn mono(re: i64, p: u32, q: u32) -> BiPoly {
        BiPoly::monomial(c(re, 0), p, q)
    }

    #[test]
    fn add_cancels_and_combines() {
        let s = &(&BiPoly::z() + &BiPoly::zbar()) + &(-&BiPoly::zbar());
        assert_eq!(s, BiPoly::z());
        let p = mono(2, 1, 1);
        assert_eq!(&p + &BiPoly::zero(), p);
        assert_eq!(&mono(2, 1, 1) + &mono(3, 1, 1), mono(5, 1, 1));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(&BiPoly::z() * &BiPoly::zbar(), mono(1, 1, 1));
        let zm1 = &BiPoly::z() - &BiPoly::one();
        let zp1 = &BiPoly::z() + &BiPoly::one();
        assert_eq!(&zm1 * &zp1, &mono(1, 2, 0) - &BiPoly::one());
        assert!((&zm1 * &BiPoly::zero()).is_zero());
    }

    #[test]
    fn conj_examples() {
        assert_eq!(BiPoly::z().conj(), BiPoly::zbar());
        let p = BiPoly::monomial(c(0, 1), 1, 1);
        assert_eq!(p.conj(), BiPoly::monomial(c(0, -1), 1, 1));
        let q = &p + &BiPoly::monomial(c(2, 3), 3, 1);
        assert_eq!(q.conj().conj(), q);
    }

    #[test]
    fn wirtinger_examples() {
        assert_eq!(mono(1, 2, 1).d(), mono(2, 1, 1));
        assert!(mono(1, 0, 3).d().is_zero());
        assert_eq!(BiPoly::abs_sqr().dbar().d(), BiPoly::one());
        assert_eq!(mono(1, 0, 2).dbar(), mono(2, 0, 1));
        assert!(mono(1, 3, 0).dbar().is_zero());
        for k in 1..8u32 {
            let fact: i64 = (1..=k as i64).product();
            assert_eq!(mono(1, 0, k).dbar_pow(k), mono(fact, 0, 0));
        }
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(gaussian_pairing(&BiPoly::one(), &BiPoly::one()), c(1, 0));
        let h11 = &BiPoly::abs_sqr() - &BiPoly::one();
        assert_eq!(gaussian_pairing(&h11, &h11), c(1, 0));
        assert_eq!(gaussian_pairing(&BiPoly::z(), &BiPoly::zbar()), c(0, 0));
    }

    #[test]
    fn pairing_is_conjugate_linear_in_first_slot() {
        let f = BiPoly::monomial(c(0, 1), 1, 0);
        let g = BiPoly::z();
        // <i z, z> = conj(i) * 1! = -i
        assert_eq!(gaussian_pairing(&f, &g), c(0, -1));
        assert_eq!(gaussian_pairing(&g, &f), c(0, 1));
    }

    #[test]
    fn moment_table() {
        // conj(z̄^m) · z̄^n = z^m z̄^n, so this pairing is the raw moment.
        for m in 0..=12u32 {
            for n in 0..=12u32 {
                let got = gaussian_pairing(&mono(1, 0, m), &mono(1, 0, n));
                let expected = if m == n {
                    let fact: BigInt = (1..=m as u64).map(BigInt::from).product();
                    GaussianRational::real(BigRational::from_integer(fact))
                } else {
                    GaussianRational::zero()
                };
                assert_eq!(got, expected, "m={m} n={n}");
            }
        }
    }

    #[test]
    fn degree_cap() {
        assert!(mono(1, 40, 24).check_degree().is_ok());
        assert_eq!(
            mono(1, 40, 25).check_degree(),
            Err(Error::DegreeCap { degree: 65, cap: MAX_DEGREE })
        );
    }

    #[test]
    fn eval_matches_closed_form() {
        let p = &mono(1, 1, 1) - &BiPoly::one();
        let z = Complex64::new(0.3, -1.2);
        let expected = z.norm_sqr() - 1.0;
        assert!((p.eval(z) - Complex64::new(expected, 0.0)).norm() < 1e-15);
    }
}
