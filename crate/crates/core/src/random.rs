//! Seeded generators for test functions, weights and coefficient fields.
//!
//! Every trial draws from its own ChaCha stream (`seed`, `stream = trial`), so
//! results do not depend on how trials are scheduled across threads.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::exactpoly::{BiPoly, GaussianRational};
use crate::hermite::CoeffField;

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Gaussian-integer coefficients in [-3, 3] on monomials of total degree ≤ `max_degree`.
pub fn random_bipoly<R: Rng>(rng: &mut R, max_degree: u32) -> BiPoly {
    let mut out = BiPoly::zero();
    for total in 0..=max_degree {
        for p in 0..=total {
            let c = GaussianRational::from_ints(rng.random_range(-3..=3), rng.random_range(-3..=3));
            out.add_term(p, total - p, &c);
        }
    }
    out
}

/// Random test function with a degree drawn uniformly from `0..=max_degree`.
pub fn random_test_function<R: Rng>(rng: &mut R, max_degree: u32) -> BiPoly {
    let d = rng.random_range(0..=max_degree);
    random_bipoly(rng, d)
}

/// Real-valued weight `p + conj(p)` of total degree ≤ `max_degree`.
pub fn random_real_weight<R: Rng>(rng: &mut R, max_degree: u32) -> BiPoly {
    let p = random_bipoly(rng, max_degree);
    &p + &p.conj()
}

/// Field with independent standard complex normal entries.
pub fn random_field<R: Rng>(rng: &mut R, m_max: usize, n_max: usize) -> CoeffField {
    let mut f = CoeffField::zeros(m_max, n_max);
    for m in 0..=m_max {
        for n in 0..=n_max {
            f.set(m, n, random_complex(rng));
        }
    }
    f
}

pub fn random_complex<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}
