//! Exact polynomials in z and z̄ over the Gaussian rationals.

mod bipoly;
mod gaussian;
mod literal;

pub use bipoly::{gaussian_pairing, BiPoly, MAX_DEGREE};
pub use gaussian::GaussianRational;
pub(crate) use gaussian::rational_to_f64;
pub use literal::{parse_complex, parse_poly};
