//! `dbar`: exact identity checks and certified solves of `∂̄^k u + a u = f`.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 certification failure.

mod args;
mod commands;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use args::{
    parse_complex_arg, parse_constants, parse_disk, parse_order, parse_orders, parse_poly_arg, parse_positive,
    parse_rect, Constants, Orders,
};
use dbar_core::{BiPoly, Complex64};

#[derive(Parser, Debug)]
#[command(name = "dbar", version, about = "Certified bounded solutions of dbar^k u + a u = f on the Fock space")]
pub struct Cli {
    /// Worker threads (0 = all cores)
    #[arg(long, global = true, env = "FOCK_THREADS", default_value_t = 0)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the exact identity suite
    Verify(VerifyArgs),
    /// Solve one problem and certify the norm bound
    Solve(SolveArgs),
    /// Sweep orders and constants over seeded random inputs (CSV)
    Sweep(SweepArgs),
    /// Solve on the weight exp(-lambda |z - z0|^2)
    Scaled(ScaledArgs),
    /// Solve on a bounded disk or rectangle
    Domain(DomainArgs),
    /// Check quadrature exactness
    QuadCheck(QuadCheckArgs),
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Orders: `2`, `1..4` or `1,3`
    #[arg(long, value_parser = parse_orders, default_value = "1..4")]
    pub k: Orders,
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
    #[arg(long, env = "FOCK_SEED", default_value_t = 7)]
    pub seed: u64,
    /// Replace a coefficient table with a wrong one (exercises the failure path)
    #[arg(long, hide = true, value_parser = ["pairing-table"])]
    pub mutate: Option<String>,
    /// Write the records here instead of stdout
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["input", "grid", "random"])))]
pub struct SolveArgs {
    /// Right-hand side as a FOCKCOEF file
    #[arg(long)]
    pub input: Option<std::path::PathBuf>,
    /// Right-hand side sampled on the quadrature nodes (CSV x,y,re,im)
    #[arg(long)]
    pub grid: Option<std::path::PathBuf>,
    /// Right-hand side drawn at random from this seed
    #[arg(long)]
    pub random: Option<u64>,
    #[arg(long, value_parser = parse_order, default_value = "1")]
    pub k: u32,
    #[arg(long, value_parser = parse_complex_arg, default_value = "0", allow_hyphen_values = true)]
    pub a: Complex64,
    /// Highest n with an equation (default: from the input)
    #[arg(long)]
    pub n_eq: Option<usize>,
    /// Highest m (grid and random inputs)
    #[arg(long, default_value_t = 4)]
    pub m_max: usize,
    /// Radial nodes for grid input (default N_eq + k + 4)
    #[arg(long = "R")]
    pub radial: Option<usize>,
    /// Angular nodes for grid input (default 2(M + N_eq) + 3)
    #[arg(long = "T")]
    pub angles: Option<usize>,
    /// Write u as a FOCKCOEF file
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
    /// Write the report here instead of stdout
    #[arg(long)]
    pub report: Option<std::path::PathBuf>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, value_parser = parse_orders, default_value = "1..4")]
    pub k: Orders,
    /// Comma-separated constants, e.g. `0,1,-2+3i,10i,100`
    #[arg(long, value_parser = parse_constants, allow_hyphen_values = true, default_value = "0,1,10i,100")]
    pub a: Constants,
    /// Highest n with an equation
    #[arg(long = "n", default_value_t = 64)]
    pub n: usize,
    #[arg(long, default_value_t = 4)]
    pub m_max: usize,
    #[arg(long, env = "FOCK_SEED", default_value_t = 7)]
    pub seed: u64,
    /// Random right-hand sides per row
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Args, Debug)]
pub struct ScaledArgs {
    #[arg(long, value_parser = parse_positive)]
    pub lambda: f64,
    /// Center z0 as a complex literal
    #[arg(long, value_parser = parse_complex_arg, default_value = "0", allow_hyphen_values = true)]
    pub z0: Complex64,
    #[arg(long, value_parser = parse_order, default_value = "1")]
    pub k: u32,
    #[arg(long, value_parser = parse_complex_arg, default_value = "0", allow_hyphen_values = true)]
    pub a: Complex64,
    /// Right-hand side as a polynomial literal in z and zb
    #[arg(long, value_parser = parse_poly_arg, default_value = "1", allow_hyphen_values = true)]
    pub f: BiPoly,
    #[arg(long, default_value_t = 16)]
    pub n_eq: usize,
    #[arg(long, default_value_t = 0)]
    pub m_max: usize,
    /// Write the frame coefficients v as a FOCKCOEF file
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("shape").required(true).args(["disk", "rect"])))]
pub struct DomainArgs {
    /// Disk `cx,cy,r`
    #[arg(long, value_parser = parse_disk, allow_hyphen_values = true)]
    pub disk: Option<[f64; 3]>,
    /// Rectangle `x0,y0,x1,y1`
    #[arg(long, value_parser = parse_rect, allow_hyphen_values = true)]
    pub rect: Option<[f64; 4]>,
    #[arg(long, value_parser = parse_order, default_value = "1")]
    pub k: u32,
    #[arg(long, value_parser = parse_complex_arg, default_value = "0", allow_hyphen_values = true)]
    pub a: Complex64,
    #[arg(long, value_parser = parse_poly_arg, default_value = "1", allow_hyphen_values = true)]
    pub f: BiPoly,
    #[arg(long, default_value_t = 12)]
    pub m_max: usize,
    #[arg(long, default_value_t = 24)]
    pub n_eq: usize,
}

#[derive(Args, Debug)]
pub struct QuadCheckArgs {
    #[arg(long = "R", default_value_t = 8)]
    pub radial: usize,
    #[arg(long = "T", default_value_t = 17)]
    pub angles: usize,
    /// Largest moment index m, n checked
    #[arg(long, default_value_t = 7)]
    pub max_index: usize,
    #[arg(long, env = "FOCK_SEED", default_value_t = 7)]
    pub seed: u64,
    /// Write samples of `--f` on the nodes as CSV x,y,re,im
    #[arg(long)]
    pub emit_grid: Option<std::path::PathBuf>,
    #[arg(long, value_parser = parse_poly_arg, default_value = "1", allow_hyphen_values = true)]
    pub f: BiPoly,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match commands::run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
