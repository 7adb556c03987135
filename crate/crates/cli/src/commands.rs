//! Subcommand implementations. Each returns `Ok(certified)` or an error
//! (usage or I/O), which `main` maps to the exit code.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use dbar_core::extensions::{solve_bounded_domain, solve_scaled};
use dbar_core::fockcoef::{read_field, write_field};
use dbar_core::hermite::{eval_field, CoeffField};
use dbar_core::quadrature::{analyze, moment_table_error, SampleGrid};
use dbar_core::random::{random_field, trial_rng};
use dbar_core::report::{fmt_complex, fmt_f64, Record};
use dbar_core::solver::{certify, norm_bound, solve_min_norm, BOUND_TOL, RESIDUAL_RTOL};
use dbar_core::suite::{run_identity_suite, SuiteConfig};
use dbar_core::{DomainSpec, Error, OperatorParams, QuadratureRule, Result};

use crate::{Command, DomainArgs, QuadCheckArgs, ScaledArgs, SolveArgs, SweepArgs, VerifyArgs};

/// Schema line of the sweep CSV.
pub const SWEEP_HEADER: &str = "# dbar sweep v1";

pub fn run(cmd: Command) -> Result<bool> {
    match cmd {
        Command::Verify(a) => verify(a),
        Command::Solve(a) => solve(a),
        Command::Sweep(a) => sweep(a),
        Command::Scaled(a) => scaled(a),
        Command::Domain(a) => domain(a),
        Command::QuadCheck(a) => quad_check(a),
    }
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Io(format!("{}: {e}", path.display()))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| io_err(path, e))
}

/// Write `text` to `path`, or to stdout when no path is given.
fn emit(path: Option<&PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => {
            let mut w = create(p)?;
            w.write_all(text.as_bytes()).map_err(|e| io_err(p, e))?;
            w.flush().map_err(|e| io_err(p, e))
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn write_coefficients(path: &Path, f: &CoeffField) -> Result<()> {
    let mut w = create(path)?;
    write_field(f, &mut w)?;
    w.flush().map_err(|e| io_err(path, e))
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn verify(a: VerifyArgs) -> Result<bool> {
    let mut cfg = SuiteConfig::new(a.k.0.clone(), a.trials, a.seed)?;
    if a.mutate.is_some() {
        cfg = cfg.with_tampered_pairing_table();
    }
    let res = run_identity_suite(&cfg)?;
    let failing = res.records.iter().filter(|r| !r.passed()).count();
    let summary = Record::new("summary")
        .field("k", join(&a.k.0))
        .field("trials", a.trials)
        .field("seed", a.seed)
        .field("records", res.records.len())
        .field("failing", failing)
        .field("passed", res.passed());
    let text = format!("{}{}\n", res.to_text(), summary.to_line());
    emit(a.out.as_ref(), &text)?;
    Ok(res.passed())
}

fn solve(a: SolveArgs) -> Result<bool> {
    let params = OperatorParams::new(a.k, a.a)?;
    let k = a.k as usize;
    let (f, n_eq) = if let Some(path) = &a.input {
        let f = read_field(File::open(path).map_err(|e| io_err(path, e))?)?;
        let n_eq = a.n_eq.unwrap_or(f.n_max());
        (f, n_eq)
    } else if let Some(path) = &a.grid {
        let n_eq = a.n_eq.unwrap_or(16);
        let rule = QuadratureRule::new(
            a.radial.unwrap_or(n_eq + k + 4),
            a.angles.unwrap_or(2 * (a.m_max + n_eq) + 3),
        )?;
        let grid = SampleGrid::read_csv(File::open(path).map_err(|e| io_err(path, e))?)?;
        (grid.analyze(&rule, a.m_max, n_eq)?, n_eq)
    } else {
        let seed = a.random.expect("one input source is required");
        let n_eq = a.n_eq.unwrap_or(64);
        (random_field(&mut trial_rng(seed, 0), a.m_max, n_eq), n_eq)
    };
    let (u, rep) = solve_min_norm(&f, &params, n_eq)?;
    if let Some(out) = &a.out {
        write_coefficients(out, &u)?;
    }
    emit(a.report.as_ref(), &rep.to_text())?;
    Ok(certify(&rep))
}

struct SweepRow {
    k: u32,
    a: dbar_core::Complex64,
    ratio: f64,
    bound: f64,
    residual: f64,
    certified: bool,
}

fn sweep(a: SweepArgs) -> Result<bool> {
    if a.trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let fields: Vec<CoeffField> =
        (0..a.trials).map(|t| random_field(&mut trial_rng(a.seed, t as u64), a.m_max, a.n)).collect();
    let cases: Vec<(u32, dbar_core::Complex64)> =
        a.k.0.iter().flat_map(|&k| a.a.0.iter().map(move |&c| (k, c))).collect();
    let rows: Vec<SweepRow> = cases
        .par_iter()
        .map(|&(k, c)| {
            let params = OperatorParams::new(k, c)?;
            let mut row = SweepRow { k, a: c, ratio: 0.0, bound: norm_bound(k), residual: 0.0, certified: true };
            for f in &fields {
                let (_, rep) = solve_min_norm(f, &params, a.n)?;
                let rel = if rep.norm_f == 0.0 { rep.residual_low } else { rep.residual_low / rep.norm_f };
                row.ratio = row.ratio.max(rep.ratio);
                row.residual = row.residual.max(rel);
                row.certified &= certify(&rep);
            }
            row.certified &= row.ratio <= row.bound + BOUND_TOL && row.residual <= RESIDUAL_RTOL;
            Ok(row)
        })
        .collect::<Result<_>>()?;
    let mut text = format!("{SWEEP_HEADER}\nk,a,N,ratio,bound,residual\n");
    for r in &rows {
        text.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.k,
            fmt_complex(r.a),
            a.n,
            fmt_f64(r.ratio),
            fmt_f64(r.bound),
            fmt_f64(r.residual)
        ));
    }
    emit(a.out.as_ref(), &text)?;
    Ok(rows.iter().all(|r| r.certified))
}

fn scaled(a: ScaledArgs) -> Result<bool> {
    let params = OperatorParams::new(a.k, a.a)?;
    let (p, q) = a.f.bidegree();
    let m_max = a.m_max.max(p as usize);
    let n_eq = a.n_eq.max(q as usize);
    let rule = QuadratureRule::default_for(m_max, n_eq, a.k)?;
    let (sol, rep) = solve_scaled(|z| a.f.eval(z), a.lambda, a.z0, &params, m_max, n_eq, &rule)?;
    if let Some(out) = &a.out {
        write_coefficients(out, &sol.v)?;
    }
    emit(None, &rep.to_record().to_text())?;
    Ok(rep.certified())
}

fn domain(a: DomainArgs) -> Result<bool> {
    let dom = match (a.disk, a.rect) {
        (Some([x, y, r]), _) => DomainSpec::disk(dbar_core::Complex64::new(x, y), r)?,
        (None, Some([x0, y0, x1, y1])) => DomainSpec::rect(x0, y0, x1, y1)?,
        (None, None) => unreachable!("clap requires a shape"),
    };
    let params = OperatorParams::new(a.k, a.a)?;
    let (p, q) = a.f.bidegree();
    let m_max = a.m_max.max(p as usize);
    let n_eq = a.n_eq.max(q as usize);
    let rule = QuadratureRule::default_for(m_max, n_eq, a.k)?;
    let (_, rep) = solve_bounded_domain(|z| a.f.eval(z), &dom, &params, &rule, m_max, n_eq)?;
    emit(None, &rep.to_record().to_text())?;
    Ok(rep.certified())
}

/// Tolerances of the quadrature self-check.
const MOMENT_TOL: f64 = 1e-12;
const ROUND_TRIP_TOL: f64 = 1e-10;
const WEIGHT_SUM_TOL: f64 = 1e-13;

fn quad_check(a: QuadCheckArgs) -> Result<bool> {
    let rule = QuadratureRule::new(a.radial, a.angles)?;
    let weight_sum_error = (rule.radial_weights.iter().sum::<f64>() - 1.0).abs();
    let moment_error = moment_table_error(&rule, a.max_index)?;
    // largest square truncation inside the exactness region
    let n = ((2 * a.radial - 1) / 4).min((a.angles - 1) / 2);
    let f = random_field(&mut trial_rng(a.seed, 0), n, n);
    let back = analyze(|z| eval_field(&f, z), &rule, n, n)?;
    let round_trip = back.sub(&f).max_abs();
    if let Some(path) = &a.emit_grid {
        let mut w = create(path)?;
        SampleGrid::sample(|z| a.f.eval(z), &rule).write_csv(&rule, &mut w)?;
        w.flush().map_err(|e| io_err(path, e))?;
    }
    let passed = moment_error <= MOMENT_TOL && round_trip <= ROUND_TRIP_TOL && weight_sum_error <= WEIGHT_SUM_TOL;
    let rec = Record::new("dbar quad-check v1")
        .field("R", a.radial)
        .field("T", a.angles)
        .field("nodes", a.radial * a.angles)
        .num("weight_sum_error", weight_sum_error)
        .field("moment_max_index", a.max_index)
        .num("moment_error", moment_error)
        .field("round_trip_size", n)
        .num("round_trip_error", round_trip)
        .field("passed", passed);
    emit(None, &rec.to_text())?;
    Ok(passed)
}
