pub mod green;
pub mod identities;
pub mod kernel;
pub mod matrix;
pub mod walks;

use std::fmt;

use clap::{Args, ValueEnum};
use lattice_heat_core::kernels::TruncationPolicy;
use lattice_heat_core::spectra::{BoundaryCondition, CycleSpec, IntervalSpec};
use lattice_heat_core::Error;
use num_rational::BigRational;
use serde_json::{Map, Value};

use crate::report::num;

/// Failures a command can end with, split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or parameters outside a domain (exit 2).
    Usage(String),
    /// A numerical procedure failed to converge or two computations disagree (exit 3).
    Numerical(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::IndexOutOfRange { .. } => CliError::Usage(e.to_string()),
            Error::Truncation { .. } | Error::Quadrature { .. } | Error::Mismatch(_) => {
                CliError::Numerical(e.to_string())
            }
        }
    }
}

pub type CmdResult<T> = Result<T, CliError>;

pub fn usage<T>(msg: impl Into<String>) -> CmdResult<T> {
    Err(CliError::Usage(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GeometryKind {
    Integers,
    Cycle,
    Interval,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BcArg {
    Dd,
    Nn,
    Dn,
}

impl From<BcArg> for BoundaryCondition {
    fn from(b: BcArg) -> Self {
        match b {
            BcArg::Dd => BoundaryCondition::DD,
            BcArg::Nn => BoundaryCondition::NN,
            BcArg::Dn => BoundaryCondition::DN,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct GeometryArgs {
    #[arg(long, value_enum)]
    pub geometry: GeometryKind,
    /// Cycle length, or number of free interval vertices.
    #[arg(long = "p", visible_alias = "free")]
    pub p: Option<usize>,
    /// Twist of a cycle, in turns.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Interval boundary conditions.
    #[arg(long, value_enum)]
    pub bc: Option<BcArg>,
}

#[derive(Debug, Clone, Copy)]
pub enum Resolved {
    Integers,
    Cycle(CycleSpec),
    Interval(IntervalSpec),
}

impl GeometryArgs {
    pub fn resolve(&self) -> CmdResult<Resolved> {
        if self.alpha.is_some() && self.geometry != GeometryKind::Cycle {
            return usage("--alpha applies to cycles only");
        }
        if self.bc.is_some() && self.geometry != GeometryKind::Interval {
            return usage("--bc applies to intervals only");
        }
        match self.geometry {
            GeometryKind::Integers => {
                if self.p.is_some() {
                    return usage("--p does not apply to the integers");
                }
                Ok(Resolved::Integers)
            }
            GeometryKind::Cycle => {
                let p = self
                    .p
                    .ok_or_else(|| CliError::Usage("cycle needs --p".into()))?;
                Ok(Resolved::Cycle(CycleSpec::new(
                    p,
                    self.alpha.unwrap_or(0.0),
                )?))
            }
            GeometryKind::Interval => {
                let q = self
                    .p
                    .ok_or_else(|| CliError::Usage("interval needs --p (or --free)".into()))?;
                let bc = self
                    .bc
                    .ok_or_else(|| CliError::Usage("interval needs --bc".into()))?;
                Ok(Resolved::Interval(IntervalSpec::new(q, bc.into())?))
            }
        }
    }
}

impl Resolved {
    pub fn describe(&self) -> Map<String, Value> {
        let mut m = Map::new();
        match self {
            Resolved::Integers => {
                m.insert("geometry".into(), "integers".into());
            }
            Resolved::Cycle(c) => {
                m.insert("geometry".into(), "cycle".into());
                m.insert("p".into(), c.p().into());
                m.insert("alpha".into(), num(c.alpha()));
            }
            Resolved::Interval(s) => {
                m.insert("geometry".into(), "interval".into());
                m.insert("free".into(), s.free().into());
                m.insert("bc".into(), bc_name(s.bc()).into());
            }
        }
        m
    }

    /// Default vertex label: the origin, or the first free interval vertex.
    pub fn default_vertex(&self) -> i64 {
        match self {
            Resolved::Interval(_) => 1,
            _ => 0,
        }
    }
}

pub fn bc_name(bc: BoundaryCondition) -> &'static str {
    match bc {
        BoundaryCondition::DD => "dd",
        BoundaryCondition::NN => "nn",
        BoundaryCondition::DN => "dn",
    }
}

pub fn truncation(rel_tol: f64) -> CmdResult<TruncationPolicy> {
    let d = TruncationPolicy::default();
    Ok(TruncationPolicy::new(rel_tol, d.min_shells, d.max_shells)?)
}

/// Reject tolerances that no residual can meet.
pub fn positive(flag: &str, v: f64) -> CmdResult<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        usage(format!("{flag} must be positive and finite"))
    }
}

pub fn parse_rational(text: &str) -> CmdResult<BigRational> {
    text.trim()
        .parse::<BigRational>()
        .map_err(|_| CliError::Usage(format!("cannot parse {text:?} as a rational a/b")))
}
