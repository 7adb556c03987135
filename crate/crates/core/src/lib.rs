//! Bounded right inverses of `∂̄^k + a` on `L²(ℂ, e^{-|z|²})`.
//!
//! The crate has two layers. The exact layer ([`exactpoly`], [`adjoint`]) works
//! with polynomials in z and z̄ over the Gaussian rationals and checks operator
//! identities to literal zero. The numeric layer ([`hermite`], [`solver`],
//! [`quadrature`], [`extensions`]) represents functions by coefficients in the
//! orthonormal Itô–Hermite basis and computes the minimal-norm solution of
//! `∂̄^k u + a u = f`, certifying `‖u‖ ≤ ‖f‖/√(k!)`.

pub mod adjoint;
pub mod error;
pub mod exactpoly;
pub mod extensions;
pub mod fockcoef;
pub mod hermite;
pub mod quadrature;
pub mod random;
pub mod report;
pub mod solver;
pub mod suite;

pub use adjoint::{IdentityReport, WeightSpec};
pub use error::{Error, Result};
pub use exactpoly::{gaussian_pairing, BiPoly, GaussianRational};
pub use extensions::DomainSpec;
pub use hermite::{CoeffField, OperatorParams};
pub use num_complex::Complex64;
pub use quadrature::QuadratureRule;
pub use solver::SolveReport;
