//! Product quadrature for `∫_ℂ g(z) e^{-|z|²} dσ`.
//!
//! Polar coordinates with `t = r²` turn the integral into
//! `½ ∫_0^∞ ∫_0^{2π} g(√t e^{iθ}) e^{-t} dθ dt`: Gauss–Laguerre in `t` and the
//! uniform rule in θ. The rule reproduces `∫ z^m z̄^n e^{-|z|²} dσ = π m! δ_{mn}`
//! whenever `m + n ≤ 2R - 1` and `|m - n| < T`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::io::{Read, Write};

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::hermite::{basis_values, CoeffField};
use crate::report::fmt_f64;

const NEWTON_EPS: f64 = 3e-14;
const NEWTON_MAX_ITER: usize = 100;

/// Gauss–Laguerre nodes in `t = |z|²` crossed with `T` uniform angles.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    pub radial_nodes: Vec<f64>,
    pub radial_weights: Vec<f64>,
    pub angles: usize,
}

/// `(L_n(t), L_{n-1}(t))` by the three-term recurrence.
fn laguerre_pair(n: usize, t: f64) -> (f64, f64) {
    let (mut p1, mut p2) = (1.0, 0.0);
    for j in 1..=n {
        let jf = j as f64;
        let p3 = p2;
        p2 = p1;
        p1 = ((2.0 * jf - 1.0 - t) * p2 - (jf - 1.0) * p3) / jf;
    }
    (p1, p2)
}

/// `(P_n(x), P_{n-1}(x))` by the three-term recurrence.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let (mut p1, mut p2) = (1.0, 0.0);
    for j in 1..=n {
        let jf = j as f64;
        let p3 = p2;
        p2 = p1;
        p1 = ((2.0 * jf - 1.0) * x * p2 - (jf - 1.0) * p3) / jf;
    }
    (p1, p2)
}

/// Nodes and weights of the `n`-point Gauss–Laguerre rule for `e^{-t}` on `[0, ∞)`.
///
/// Newton iteration on the three-term recurrence, seeded with the usual
/// asymptotic guesses; weights `-t/(n(n+1) L_{n-1}(t) L_{n+1}(t))` at the converged nodes.
pub fn gauss_laguerre(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::InvalidParameter("Gauss-Laguerre order must be at least 1".into()));
    }
    let nf = n as f64;
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut z = 0.0;
    for i in 0..n {
        z = match i {
            0 => 3.0 / (1.0 + 2.4 * nf),
            1 => z + 15.0 / (1.0 + 2.5 * nf),
            _ => {
                let ai = (i - 1) as f64;
                z + (1.0 + 2.55 * ai) / (1.9 * ai) * (z - x[i - 2])
            }
        };
        let mut converged = false;
        for _ in 0..NEWTON_MAX_ITER {
            let (p1, p2) = laguerre_pair(n, z);
            let pp = nf * (p1 - p2) / z;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= NEWTON_EPS * z.abs() {
                converged = true;
                break;
            }
        }
        if !converged || !z.is_finite() {
            return Err(Error::NodeConvergence(n));
        }
        let (p1, prev) = laguerre_pair(n, z);
        z -= p1 * z / (nf * (p1 - prev));
        // the two neighbour forms of the weight err in opposite directions
        // under a node perturbation, so their geometric mean is used
        let (_, below) = laguerre_pair(n, z);
        let (above, _) = laguerre_pair(n + 1, z);
        x[i] = z;
        w[i] = -z / (nf * (nf + 1.0) * below * above);
    }
    Ok((x, w))
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::InvalidParameter("Gauss-Legendre order must be at least 1".into()));
    }
    let nf = n as f64;
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut converged = false;
        for _ in 0..NEWTON_MAX_ITER {
            let (p1, p2) = legendre_pair(n, z);
            let pp = nf * (z * p1 - p2) / (z * z - 1.0);
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= NEWTON_EPS {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NodeConvergence(n));
        }
        let (_, prev) = legendre_pair(n, z);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 * (1.0 - z * z) / (nf * prev).powi(2);
        w[n - 1 - i] = w[i];
    }
    Ok((x, w))
}

impl QuadratureRule {
    pub fn new(radial: usize, angles: usize) -> Result<Self> {
        if angles == 0 {
            return Err(Error::InvalidParameter("angular node count must be at least 1".into()));
        }
        let (radial_nodes, radial_weights) = gauss_laguerre(radial)?;
        Ok(QuadratureRule { radial_nodes, radial_weights, angles })
    }

    /// `R = N + k + 4`, `T = 2(M + N) + 3`.
    pub fn default_for(m_max: usize, n_max: usize, k: u32) -> Result<Self> {
        Self::new(n_max + k as usize + 4, 2 * (m_max + n_max) + 3)
    }

    pub fn radial(&self) -> usize {
        self.radial_nodes.len()
    }

    /// All nodes `z_{ij} = √t_i e^{iθ_j}` with their full weights `½ w_i 2π/T`,
    /// in `i`-then-`j` order.
    pub fn nodes(&self) -> impl Iterator<Item = (Complex64, f64)> + '_ {
        let dtheta = 2.0 * PI / self.angles as f64;
        self.radial_nodes.iter().zip(&self.radial_weights).flat_map(move |(&t, &w)| {
            let r = t.sqrt();
            (0..self.angles).map(move |j| (Complex64::from_polar(r, dtheta * j as f64), 0.5 * w * dtheta))
        })
    }

    /// Whether the rule is exact for the moment `z^m z̄^n`.
    pub fn covers_moment(&self, m: usize, n: usize) -> bool {
        m + n < 2 * self.radial() && m.abs_diff(n) < self.angles
    }
}

/// `∫ g(z) e^{-|z|²} dσ` by the product rule.
pub fn integrate_weighted<G>(g: G, rule: &QuadratureRule) -> Result<Complex64>
where
    G: Fn(Complex64) -> Complex64,
{
    let mut acc = Complex64::zero();
    for (z, w) in rule.nodes() {
        let v = g(z);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFinite(format!("integrand at z = {z}")));
        }
        acc += v * w;
    }
    Ok(acc)
}

/// Orthonormal coefficients `c_{m,n} = ∫ conj(h_{m,n}) g e^{-|z|²} dσ`.
pub fn analyze<G>(g: G, rule: &QuadratureRule, m_max: usize, n_max: usize) -> Result<CoeffField>
where
    G: Fn(Complex64) -> Complex64,
{
    let mut out = CoeffField::zeros(m_max, n_max);
    let width = n_max + 1;
    let mut acc = vec![Complex64::zero(); (m_max + 1) * width];
    for (z, w) in rule.nodes() {
        let v = g(z);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFinite(format!("integrand at z = {z}")));
        }
        if v.is_zero() {
            continue;
        }
        let vw = v * w;
        let h = basis_values(z, m_max, n_max);
        for (a, hv) in acc.iter_mut().zip(h.iter()) {
            *a += hv.conj() * vw;
        }
    }
    for m in 0..=m_max {
        out.row_mut(m).copy_from_slice(&acc[m * width..(m + 1) * width]);
    }
    Ok(out)
}

/// Largest relative error of the moment table `m, n ≤ max_index` against `π m! δ_{mn}`,
/// over moments the rule covers. Off-diagonal moments are measured against the
/// diagonal scale `π max(m,n)!`.
pub fn moment_table_error(rule: &QuadratureRule, max_index: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for m in 0..=max_index {
        for n in 0..=max_index {
            if !rule.covers_moment(m, n) {
                continue;
            }
            let got = integrate_weighted(|z| z.powu(m as u32) * z.conj().powu(n as u32), rule)?;
            let scale = PI * (1..=m.max(n)).map(|t| t as f64).product::<f64>();
            let expected = if m == n { scale } else { 0.0 };
            worst = worst.max((got - Complex64::new(expected, 0.0)).norm() / scale);
        }
    }
    Ok(worst)
}

/// Field samples keyed by the exact bit patterns of node coordinates.
///
/// CSV schema: header `x,y,re,im`, one row per node. Lookups succeed only on
/// bit-identical coordinates; there is no interpolation.
#[derive(Clone, Debug, Default)]
pub struct SampleGrid {
    values: HashMap<(u64, u64), Complex64>,
}

impl SampleGrid {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn insert(&mut self, z: Complex64, v: Complex64) {
        self.values.insert(key(z), v);
    }

    pub fn get(&self, z: Complex64) -> Option<Complex64> {
        self.values.get(&key(z)).copied()
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers().map_err(|e| Error::Format(e.to_string()))?.clone();
        let expected = ["x", "y", "re", "im"];
        if headers.len() != 4 || headers.iter().zip(expected).any(|(h, e)| h != e) {
            return Err(Error::Format(format!("sample grid header must be x,y,re,im, got {:?}", headers)));
        }
        let mut grid = SampleGrid::default();
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| Error::Format(e.to_string()))?;
            let num = |i: usize| -> Result<f64> {
                let v: f64 = rec[i]
                    .parse()
                    .map_err(|_| Error::Format(format!("row {}: bad number `{}`", line + 2, &rec[i])))?;
                if !v.is_finite() {
                    return Err(Error::NonFinite(format!("row {}: `{}`", line + 2, &rec[i])));
                }
                Ok(v)
            };
            grid.insert(Complex64::new(num(0)?, num(1)?), Complex64::new(num(2)?, num(3)?));
        }
        if grid.is_empty() {
            return Err(Error::Format("sample grid has no rows".into()));
        }
        Ok(grid)
    }

    pub fn write_csv<W: Write>(&self, rule: &QuadratureRule, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        let io = |e: csv::Error| Error::Io(e.to_string());
        wtr.write_record(["x", "y", "re", "im"]).map_err(io)?;
        for (z, _) in rule.nodes() {
            let v = self.get(z).unwrap_or_default();
            wtr.write_record([fmt_f64(z.re), fmt_f64(z.im), fmt_f64(v.re), fmt_f64(v.im)])
                .map_err(io)?;
        }
        wtr.flush()?;
        Ok(())
    }

    /// Grid holding `g` at every node of `rule`.
    pub fn sample<G: Fn(Complex64) -> Complex64>(g: G, rule: &QuadratureRule) -> Self {
        let mut grid = SampleGrid::default();
        for (z, _) in rule.nodes() {
            grid.insert(z, g(z));
        }
        grid
    }

    /// Values at every node of `rule`, or an error naming how many nodes are missing.
    pub fn values_on(&self, rule: &QuadratureRule) -> Result<Vec<Complex64>> {
        let mut out = Vec::new();
        let mut missing = 0usize;
        for (z, _) in rule.nodes() {
            match self.get(z) {
                Some(v) => out.push(v),
                None => missing += 1,
            }
        }
        if missing > 0 {
            return Err(Error::Format(format!(
                "sample grid does not match the quadrature nodes: {missing} of {} nodes missing",
                rule.radial() * rule.angles
            )));
        }
        Ok(out)
    }

    /// Analysis of the sampled field; rejects grids that do not cover every node.
    pub fn analyze(&self, rule: &QuadratureRule, m_max: usize, n_max: usize) -> Result<CoeffField> {
        self.values_on(rule)?;
        analyze(|z| self.get(z).expect("checked above"), rule, m_max, n_max)
    }
}

fn key(z: Complex64) -> (u64, u64) {
    // -0.0 and 0.0 are the same node
    let canon = |v: f64| if v == 0.0 { 0.0f64.to_bits() } else { v.to_bits() };
    (canon(z.re), canon(z.im))
}
