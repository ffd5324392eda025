use clap::{Args, ValueEnum};
use lattice_heat_core::kernels::{kernel_cycle, kernel_interval};
use lattice_heat_core::kernels::{kernel_integers, HeatQuery, KernelMethod, TruncationPolicy};
use lattice_heat_core::quad::tanh_sinh;
use num_complex::Complex64;
use serde_json::{Map, Value};
use std::f64::consts::PI;

use super::{positive, truncation, CmdResult, GeometryArgs, Resolved};
use crate::report::{num, object, Check, RunReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Images,
    Modes,
    Both,
}

#[derive(Debug, Clone, Args)]
pub struct KernelArgs {
    #[command(flatten)]
    pub geometry: GeometryArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub j: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub jp: Option<i64>,
    /// Times, comma separated or repeated.
    #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
    pub t: Vec<f64>,
    #[arg(long, value_enum, default_value_t = MethodArg::Images)]
    pub method: MethodArg,
    /// Relative tolerance of the image and lattice sums.
    #[arg(long, default_value_t = 1e-14)]
    pub rel_tol: f64,
    /// Allowed `|images - modes| / (1 + |modes|)` with `--method both`.
    #[arg(long, default_value_t = 1e-12)]
    pub check_tol: f64,
}

/// Heat kernel on the integers by the Fourier integral
/// `(1/pi) int_0^pi e^{-2t(1 - cos theta)} cos(d theta) d theta`.
fn integers_by_modes(d: i64, t: f64) -> CmdResult<f64> {
    let q = tanh_sinh(
        |th| (-2.0 * t * (1.0 - th.cos())).exp() * (d as f64 * th).cos(),
        0.0,
        PI,
        1e-16,
        1e-15,
    )?;
    Ok(q.value / PI)
}

fn evaluate(
    g: &Resolved,
    q: &HeatQuery,
    m: KernelMethod,
    trunc: &TruncationPolicy,
) -> CmdResult<Complex64> {
    Ok(match (g, m) {
        (Resolved::Integers, KernelMethod::Images) => kernel_integers(q)?.into(),
        (Resolved::Integers, KernelMethod::Modes) => {
            integers_by_modes(q.j - q.j_prime, q.t)?.into()
        }
        (Resolved::Cycle(c), _) => kernel_cycle(c, q, m, trunc)?,
        (Resolved::Interval(s), _) => kernel_interval(s, q, m, trunc)?.into(),
    })
}

fn push_value(row: &mut Map<String, Value>, name: &str, v: Complex64, complex: bool) {
    row.insert(name.into(), num(v.re));
    if complex {
        row.insert(format!("{name}_im"), num(v.im));
    }
}

pub fn run(args: &KernelArgs) -> CmdResult<RunReport> {
    let g = args.geometry.resolve()?;
    positive("--check-tol", args.check_tol)?;
    let trunc = truncation(args.rel_tol)?;
    let j = args.j.unwrap_or(g.default_vertex());
    let jp = args.jp.unwrap_or(g.default_vertex());
    let complex = matches!(g, Resolved::Cycle(c) if c.alpha() != 0.0);

    let mut params = g.describe();
    params.insert("j".into(), j.into());
    params.insert("jp".into(), jp.into());
    params.insert(
        "method".into(),
        format!("{:?}", args.method).to_lowercase().into(),
    );
    params.insert("rel_tol".into(), num(args.rel_tol));
    let mut report = RunReport::new("kernel", params);

    for &t in &args.t {
        let q = HeatQuery::new(j, jp, t)?;
        let mut row = object([("t", num(t))]);
        let images = match args.method {
            MethodArg::Modes => None,
            _ => Some(evaluate(&g, &q, KernelMethod::Images, &trunc)?),
        };
        let modes = match args.method {
            MethodArg::Images => None,
            _ => Some(evaluate(&g, &q, KernelMethod::Modes, &trunc)?),
        };
        if let Some(v) = images {
            push_value(&mut row, "images", v, complex);
        }
        if let Some(v) = modes {
            push_value(&mut row, "modes", v, complex);
        }
        if let (Some(a), Some(b)) = (images, modes) {
            let diff = (a - b).norm();
            row.insert("difference".into(), num(diff));
            report.checks.push(Check::within(
                "images_vs_modes",
                object([("t", num(t))]),
                diff / (1.0 + b.norm()),
                args.check_tol,
            ));
        }
        report.results.push(row);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fourier_integral_matches_bessel() {
        for &(d, t) in &[(0, 0.0), (0, 1.0), (3, 0.5), (-7, 4.0), (12, 20.0)] {
            let by_modes = integers_by_modes(d, t).unwrap();
            let by_images = kernel_integers(&HeatQuery::new(d, 0, t).unwrap()).unwrap();
            assert!(
                (by_modes - by_images).abs() < 1e-13,
                "{d} {t}: {by_modes} {by_images}"
            );
        }
    }
}
