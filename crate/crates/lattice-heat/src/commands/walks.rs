use clap::{Args, ValueEnum};
use lattice_heat_core::graphs::cycle_laplacian_cofactor;
use lattice_heat_core::walks::{
    bartholdi_f, g_binomial, g_rational, g_series, logdet_prime, spanning_trees, walk_oracle,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::Value;

use super::{positive, usage, CmdResult};
use crate::report::{num, object, Check, RunReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    /// Closed-walk counts g_k with their independent cross-checks.
    G,
    /// Bump-resolved counts f_{lk} and the bivariate closed form.
    F,
    /// Canonical text of the generating function g(sigma).
    Rational,
    /// Product of nonzero Laplacian eigenvalues from the walk integral.
    Detlog,
    /// Spanning-tree count.
    Trees,
}

#[derive(Debug, Clone, Args)]
pub struct WalkArgs {
    #[arg(long)]
    pub p: usize,
    #[arg(long, default_value_t = 8)]
    pub k_max: usize,
    #[arg(long, value_enum, default_value_t = Emit::Rational)]
    pub emit: Emit,
    /// Variable name used in printed polynomials.
    #[arg(long, default_value = "s")]
    pub var: String,
    /// Relative tolerance for the determinant.
    #[arg(long, default_value_t = 1e-6)]
    pub rel_tol: f64,
}

fn int(n: impl ToString) -> Value {
    Value::String(n.to_string())
}

pub fn run(args: &WalkArgs) -> CmdResult<RunReport> {
    let p = args.p;
    if p == 0 {
        return usage("--p must be at least 1");
    }
    positive("--rel-tol", args.rel_tol)?;
    let mut params = object([
        ("p", p.into()),
        ("emit", format!("{:?}", args.emit).to_lowercase().into()),
    ]);
    if matches!(args.emit, Emit::G | Emit::F) {
        params.insert("k_max".into(), args.k_max.into());
    }
    let mut report = RunReport::new("walks", params);
    let k_max = args.k_max;
    match args.emit {
        Emit::Rational => {
            let g = g_rational(p)?;
            report
                .extras
                .insert("rational".into(), g.to_text(&args.var).into());
            let series = g_series(p, k_max)?;
            report.checks.push(Check::exact(
                "taylor_vs_trace",
                object([("k_max", k_max.into())]),
                g.taylor(k_max) == series,
            ));
        }
        Emit::G => {
            let series = g_series(p, k_max)?;
            let oracle = walk_oracle(p, k_max)?;
            let taylor = g_rational(p)?.taylor(k_max);
            for (k, gk) in series.iter().enumerate() {
                let total = BigRational::from_integer(BigInt::from(oracle.total(k)));
                let binomial = BigRational::from_integer(BigInt::from(g_binomial(p, k)?));
                report
                    .results
                    .push(object([("k", k.into()), ("g", int(gk))]));
                report.checks.push(Check::exact(
                    "trace_vs_enumeration_vs_binomial_vs_taylor",
                    object([("k", k.into())]),
                    *gk == total && *gk == binomial && *gk == taylor[k],
                ));
            }
        }
        Emit::F => {
            let (series, closed) = bartholdi_f(p, k_max)?;
            let oracle = walk_oracle(p, k_max)?;
            report
                .extras
                .insert("closed_form".into(), closed.to_string().into());
            for k in 0..=k_max {
                for l in 0..=k {
                    report.results.push(object([
                        ("k", k.into()),
                        ("l", l.into()),
                        ("f", int(series.coefficient(l, k))),
                    ]));
                }
            }
            report.checks.push(Check::exact(
                "closed_form_vs_enumeration",
                object([("k_max", k_max.into())]),
                series.matches(&oracle),
            ));
        }
        Emit::Detlog => {
            let det = logdet_prime(p)?;
            let want = (p * p) as f64;
            report.results.push(object([
                ("det_prime", num(det)),
                ("p_squared", num(want)),
                ("residual", num((det - want).abs())),
            ]));
            report.checks.push(Check::within(
                "det_prime_is_p_squared",
                serde_json::Map::new(),
                ((det - want) / want).abs(),
                args.rel_tol,
            ));
        }
        Emit::Trees => {
            let cofactor = cycle_laplacian_cofactor(p)?;
            let mut row = object([("cofactor", int(&cofactor))]);
            if p >= 2 {
                let trees = spanning_trees(p)?;
                row.insert("from_integral".into(), int(trees));
                report.checks.push(Check::exact(
                    "integral_vs_cofactor",
                    serde_json::Map::new(),
                    BigInt::from(trees) == cofactor,
                ));
            }
            report.checks.push(Check::exact(
                "cofactor_is_p",
                serde_json::Map::new(),
                cofactor == BigInt::from(p),
            ));
            report.results.push(row);
        }
    }
    Ok(report)
}
