use clap::Args;
use lattice_heat_core::graphs::verify_green_inverse;
use lattice_heat_core::greens::{
    green, green_by_quadrature, green_cycle_closed_form, green_interval_exact, ExactSpectralParam,
    GreenGeometry, GreenIndices, SpectralParam,
};
use num_traits::ToPrimitive;
use serde_json::Value;

use super::{parse_rational, positive, truncation, usage, CmdResult, GeometryArgs, Resolved};
use crate::report::{num, object, Check, RunReport};

#[derive(Debug, Clone, Args)]
pub struct GreenArgs {
    #[command(flatten)]
    pub geometry: GeometryArgs,
    /// First vertex (interval label r, or lattice site j).
    #[arg(long, visible_alias = "r", allow_hyphen_values = true)]
    pub j: Option<i64>,
    /// Second vertex.
    #[arg(long, visible_alias = "rp", allow_hyphen_values = true)]
    pub jp: Option<i64>,
    /// Mass parameters gamma > 0, comma separated; m^2 = 4 sinh^2 gamma.
    #[arg(long, value_delimiter = ',', num_args = 1.., conflicts_with = "exact_x", required_unless_present = "exact_x")]
    pub gamma: Vec<f64>,
    /// Exact x = cosh 2 gamma as a rational a/b > 1 (intervals only).
    #[arg(long)]
    pub exact_x: Option<String>,
    #[arg(long, default_value_t = 1e-14)]
    pub rel_tol: f64,
    /// Allowed gap between the closed form and quadrature of the heat kernel.
    #[arg(long, default_value_t = 1e-8)]
    pub check_tol: f64,
}

pub fn run(args: &GreenArgs) -> CmdResult<RunReport> {
    let g = args.geometry.resolve()?;
    positive("--check-tol", args.check_tol)?;
    let i = args.j.unwrap_or(g.default_vertex());
    let ip = args.jp.unwrap_or(g.default_vertex());
    let mut params = g.describe();
    params.insert("j".into(), i.into());
    params.insert("jp".into(), ip.into());

    if let Some(text) = &args.exact_x {
        let Resolved::Interval(spec) = g else {
            return usage("--exact-x is available for intervals only");
        };
        let param = ExactSpectralParam::new(parse_rational(text)?)?;
        params.insert("x".into(), param.x().to_string().into());
        let mut report = RunReport::new("green", params);
        let value = green_interval_exact(&spec, i, ip, &param)?;
        report.results.push(object([
            ("x", Value::String(param.x().to_string())),
            ("m_squared", Value::String(param.m_squared().to_string())),
            ("r", i.into()),
            ("rp", ip.into()),
            ("value", Value::String(value.to_string())),
            ("value_f64", num(value.to_f64().unwrap_or(f64::NAN))),
        ]));
        report.checks.push(Check::exact(
            "resolvent_inverse",
            object([("x", Value::String(param.x().to_string()))]),
            verify_green_inverse(&spec, param.x())?,
        ));
        return Ok(report);
    }

    let trunc = truncation(args.rel_tol)?;
    params.insert("rel_tol".into(), num(args.rel_tol));
    let mut report = RunReport::new("green", params);
    let geometry = match g {
        Resolved::Integers => GreenGeometry::Integers,
        Resolved::Cycle(c) => GreenGeometry::Cycle(c),
        Resolved::Interval(s) => GreenGeometry::Interval(s),
    };
    for &gamma in &args.gamma {
        let param = SpectralParam::new(gamma)?;
        let v = green(&geometry, i, ip, &param)?;
        let mut row = object([
            ("gamma", num(gamma)),
            ("x", num(param.x())),
            ("m_squared", num(param.m_squared())),
        ]);
        if let GreenIndices::Winding { winding, residue } = v.indices {
            row.insert("winding".into(), winding.into());
            row.insert("residue".into(), residue.into());
        }
        row.insert("value".into(), num(v.value.re));
        if let GreenGeometry::Cycle(c) = geometry {
            if c.alpha() != 0.0 {
                row.insert("value_im".into(), num(v.value.im));
            }
            let closed = green_cycle_closed_form(&c, i - ip, &param)?;
            let rel = (closed - v.value.re).abs() / closed.abs().max(f64::MIN_POSITIVE);
            report.checks.push(Check::within(
                "closed_form_vs_mode_sum",
                object([("gamma", num(gamma))]),
                rel,
                1e-12,
            ));
        }
        let quad = green_by_quadrature(&geometry, i, ip, &param, &trunc)?;
        report.checks.push(Check::within(
            "laplace_transform_of_kernel",
            object([("gamma", num(gamma))]),
            (quad - v.value).norm(),
            args.check_tol,
        ));
        report.results.push(row);
    }
    Ok(report)
}
