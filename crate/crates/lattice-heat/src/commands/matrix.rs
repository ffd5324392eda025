use clap::{Args, ValueEnum};
use lattice_heat_core::graphs::{
    build_adjacency, build_laplacian, green_matrix_exact, laplacian_eigen_defect,
    verify_green_inverse, ExactMatrix,
};
use lattice_heat_core::greens::ExactSpectralParam;
use lattice_heat_core::kernels::Geometry;
use serde_json::{Map, Value};

use super::{parse_rational, usage, CmdResult, GeometryArgs, Resolved};
use crate::report::{Check, RunReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MatrixKind {
    Laplacian,
    Adjacency,
    Green,
}

#[derive(Debug, Clone, Args)]
pub struct MatrixArgs {
    #[command(flatten)]
    pub geometry: GeometryArgs,
    #[arg(long, value_enum, default_value_t = MatrixKind::Laplacian)]
    pub kind: MatrixKind,
    /// Exact x = cosh 2 gamma for the Green matrix, as a/b.
    #[arg(long)]
    pub exact_x: Option<String>,
}

fn to_json(m: &ExactMatrix) -> Value {
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|v| Value::String(v.to_string()))
                .collect::<Value>()
        })
        .collect()
}

pub fn run(args: &MatrixArgs) -> CmdResult<RunReport> {
    let geometry = match args.geometry.resolve()? {
        Resolved::Integers => return usage("matrices need a finite geometry"),
        Resolved::Cycle(c) => Geometry::Cycle(c),
        Resolved::Interval(s) => Geometry::Interval(s),
    };
    let mut params = args.geometry.resolve()?.describe();
    params.insert(
        "kind".into(),
        format!("{:?}", args.kind).to_lowercase().into(),
    );
    if args.kind != MatrixKind::Green && args.exact_x.is_some() {
        return usage("--exact-x applies to --kind green only");
    }
    let none = Map::new;
    let m = match args.kind {
        MatrixKind::Laplacian => build_laplacian(&geometry)?,
        MatrixKind::Adjacency => build_adjacency(&geometry)?,
        MatrixKind::Green => {
            let Geometry::Interval(spec) = geometry else {
                return usage("exact Green matrices are available for intervals only");
            };
            let Some(text) = &args.exact_x else {
                return usage("--kind green needs --exact-x");
            };
            let x = parse_rational(text)?;
            ExactSpectralParam::new(x.clone())?;
            params.insert("x".into(), x.to_string().into());
            let g = green_matrix_exact(&spec, &x)?;
            let mut report = RunReport::new("matrix", params);
            report.extras.insert("matrix".into(), to_json(&g));
            report
                .checks
                .push(Check::exact("symmetric", none(), g.is_symmetric()));
            report.checks.push(Check::exact(
                "resolvent_inverse",
                none(),
                verify_green_inverse(&spec, &x)?,
            ));
            return Ok(report);
        }
    };
    let mut report = RunReport::new("matrix", params);
    report.extras.insert("matrix".into(), to_json(&m));
    report
        .checks
        .push(Check::exact("symmetric", none(), m.is_symmetric()));
    if args.kind == MatrixKind::Laplacian {
        report.checks.push(Check::within(
            "eigenvalues_match_spectrum",
            none(),
            laplacian_eigen_defect(&geometry)?,
            1e-10,
        ));
    }
    Ok(report)
}
