use std::f64::consts::PI;

use clap::{Args, ValueEnum};
use lattice_heat_core::graphs::twisted_determinant_residual;
use lattice_heat_core::greens::{
    bessel_identity_suite, det_identity_residual, fourier_series_bound, fourier_series_residual,
    green_cycle, kubert_residual, laplace_transform_residual, zeta_cycle,
    zeta_cycle_s1_closed_form, SpectralParam,
};
use lattice_heat_core::special_fn::{chebyshev, ChebKind};
use lattice_heat_core::spectra::CycleSpec;

use super::{positive, truncation, CmdResult};
use crate::report::{num, object, Check, RunReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Bessel,
    Trig,
    All,
}

#[derive(Debug, Clone, Args)]
pub struct IdentityArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    /// Bessel arguments.
    #[arg(long, value_delimiter = ',', num_args = 1.., default_values_t = [0.5, 1.0, 2.0, 7.5, 20.0])]
    pub z: Vec<f64>,
    /// Cycle lengths for the trigonometric suite.
    #[arg(long, value_delimiter = ',', num_args = 1.., default_values_t = [1, 2, 3, 4, 5, 8, 12])]
    pub p: Vec<usize>,
    /// Twists for the trigonometric suite.
    #[arg(long, value_delimiter = ',', num_args = 1.., default_values_t = [0.0, 0.25, 0.3, 0.5, 0.8])]
    pub alpha: Vec<f64>,
    /// Mass parameters for the trigonometric suite.
    #[arg(long, value_delimiter = ',', num_args = 1.., default_values_t = [0.1, 0.7])]
    pub gamma: Vec<f64>,
    /// Tolerance for the exact identities.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Tolerance for the Laplace-transform quadrature.
    #[arg(long, default_value_t = 1e-8)]
    pub quad_tol: f64,
    #[arg(long, default_value_t = 1e-14)]
    pub rel_tol: f64,
}

fn bessel(args: &IdentityArgs, report: &mut RunReport) -> CmdResult<()> {
    let trunc = truncation(args.rel_tol)?;
    for &z in &args.z {
        for (name, r) in bessel_identity_suite(z, &trunc)? {
            report
                .checks
                .push(Check::within(name, object([("z", num(z))]), r, args.tol));
        }
    }
    Ok(())
}

fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn trig(args: &IdentityArgs, report: &mut RunReport) -> CmdResult<()> {
    let tol = args.tol;
    for &p in &args.p {
        for &alpha in &args.alpha {
            let spec = CycleSpec::new(p, alpha)?;
            let at = |g: f64| object([("p", p.into()), ("alpha", num(alpha)), ("gamma", num(g))]);
            for &gamma in &args.gamma {
                let param = SpectralParam::new(gamma)?;
                report.checks.push(Check::within(
                    "determinant_product",
                    at(gamma),
                    det_identity_residual(&spec, &param),
                    tol,
                ));
                report.checks.push(Check::within(
                    "determinant_eigen",
                    at(gamma),
                    twisted_determinant_residual(&spec, &param),
                    1e3 * tol,
                ));
                let x = param.x();
                let closed = chebyshev(ChebKind::U, p as u64 - 1, &x)
                    / (2.0 * (chebyshev(ChebKind::T, p as u64, &x) - (2.0 * PI * alpha).cos()));
                let modes = green_cycle(&spec, 0, &param)?.re;
                report.checks.push(Check::within(
                    "resolvent_trace",
                    at(gamma),
                    relative(modes, closed),
                    tol,
                ));
            }
            let at = object([("p", p.into()), ("alpha", num(alpha))]);
            if alpha > 0.0 && alpha < 1.0 {
                report.checks.push(Check::within(
                    "kubert",
                    at.clone(),
                    kubert_residual(p, alpha)?,
                    tol,
                ));
                let direct = zeta_cycle(&spec, 1)?;
                let closed = zeta_cycle_s1_closed_form(&spec)?;
                report.checks.push(Check::within(
                    "zeta_at_one",
                    at,
                    relative(direct, closed),
                    1e3 * tol,
                ));
            }
        }
    }
    for &gamma in &args.gamma {
        for &alpha in &args.alpha {
            for n in [0usize, 5, 40] {
                let (a, b) = fourier_series_residual(gamma, alpha, n)?;
                let bound = fourier_series_bound(gamma, n) + tol;
                let at = object([
                    ("gamma", num(gamma)),
                    ("alpha", num(alpha)),
                    ("terms", n.into()),
                ]);
                report
                    .checks
                    .push(Check::within("fourier_series", at, a.max(b), bound));
            }
        }
        for n in [0u32, 1, 4, 9] {
            let at = object([("gamma", num(gamma)), ("order", n.into())]);
            report.checks.push(Check::within(
                "laplace_transform",
                at,
                laplace_transform_residual(n, gamma)?,
                args.quad_tol,
            ));
        }
    }
    Ok(())
}

pub fn run(args: &IdentityArgs) -> CmdResult<RunReport> {
    positive("--tol", args.tol)?;
    positive("--quad-tol", args.quad_tol)?;
    let mut params = object([("suite", format!("{:?}", args.suite).to_lowercase().into())]);
    if args.suite != Suite::Trig {
        params.insert("z".into(), args.z.iter().map(|&z| num(z)).collect());
    }
    if args.suite != Suite::Bessel {
        params.insert("p".into(), args.p.clone().into());
        params.insert("alpha".into(), args.alpha.iter().map(|&a| num(a)).collect());
        params.insert("gamma".into(), args.gamma.iter().map(|&g| num(g)).collect());
    }
    params.insert("tol".into(), num(args.tol));
    let mut report = RunReport::new("identities", params);
    if args.suite != Suite::Trig {
        bessel(args, &mut report)?;
    }
    if args.suite != Suite::Bessel {
        trig(args, &mut report)?;
    }
    Ok(report)
}
