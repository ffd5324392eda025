//! Exponentially scaled modified Bessel functions of integer order,
//! `e^{-z} I_n(z)`, for real `z >= 0`.
//!
//! Every heat-kernel formula in the crate pairs `I_n(2t)` with `e^{-2t}`, so
//! the scaled function is the primitive and never overflows. Values are
//! produced by Miller's backward recurrence
//!
//! ```text
//! I_{k-1}(z) = (2k / z) I_k(z) + I_{k+1}(z)
//! ```
//!
//! normalised with `1 = e^{-z} (I_0(z) + 2 sum_{k>=1} I_k(z))`. For `z < 1e-2`
//! the ascending power series is used instead.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Largest order accepted by the single-order entry points.
pub const MAX_ORDER: i64 = 1_000_000;

/// Below this argument the power series is used.
const SERIES_CUTOFF: f64 = 1e-2;

/// Largest argument for which the unscaled `I_n(z)` is offered.
pub const RAW_ARGUMENT_LIMIT: f64 = 50.0;

const RESCALE_ABOVE: f64 = 1e250;
const RESCALE_BY: f64 = 1e-250;

/// A single evaluation of `e^{-z} I_n(z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledBessel {
    pub order: i64,
    pub argument: f64,
    pub value: f64,
}

impl ScaledBessel {
    pub fn new(order: i64, argument: f64) -> Result<Self> {
        let value = bessel_i_scaled(order, argument)?;
        Ok(ScaledBessel {
            order,
            argument,
            value,
        })
    }
}

fn check_argument(z: f64) -> Result<()> {
    if !z.is_finite() {
        return Err(Error::Domain("Bessel argument must be finite"));
    }
    if z < 0.0 {
        return Err(Error::Domain("Bessel argument must be non-negative"));
    }
    Ok(())
}

/// Starting order for the backward recurrence. The `sqrt(80 z)` term keeps the
/// normalisation sum complete for large arguments, where `e^{-z} I_k(z)`
/// behaves like `exp(-k^2 / 2z)`.
fn miller_start(order: u64, z: f64) -> usize {
    let n = order as f64;
    let start = n + (40.0 * n).sqrt().ceil() + (80.0 * z).sqrt().ceil() + 40.0;
    start as usize
}

/// `e^{-z} I_n(z)` for any integer `n` and `z >= 0`.
pub fn bessel_i_scaled(n: i64, z: f64) -> Result<f64> {
    check_argument(z)?;
    let order = n.unsigned_abs();
    if order > MAX_ORDER as u64 {
        return Err(Error::Domain("Bessel order exceeds 10^6"));
    }
    if z == 0.0 {
        return Ok(if order == 0 { 1.0 } else { 0.0 });
    }
    if z < SERIES_CUTOFF {
        return Ok(series_scaled(order, z));
    }
    Ok(miller(order, z, None))
}

/// Unscaled `I_n(z)`, only for `z <= 50`.
pub fn bessel_i(n: i64, z: f64) -> Result<f64> {
    check_argument(z)?;
    if z > RAW_ARGUMENT_LIMIT {
        return Err(Error::Domain(
            "unscaled Bessel function offered only for z <= 50",
        ));
    }
    Ok(bessel_i_scaled(n, z)? * z.exp())
}

fn series_scaled(order: u64, z: f64) -> f64 {
    let half = 0.5 * z;
    let nf = order as f64;
    // (z/2)^n / n!
    let lead = (nf * half.ln() - libm::lgamma(nf + 1.0)).exp();
    if lead == 0.0 {
        return 0.0;
    }
    let q = half * half;
    let mut term = lead;
    let mut sum = lead;
    let mut k = 1.0;
    loop {
        term *= q / (k * (nf + k));
        sum += term;
        if term <= sum * 1e-17 {
            break;
        }
        k += 1.0;
    }
    sum * (-z).exp()
}

/// Backward recurrence. With `table = Some(out)` every order `0..out.len()` is
/// written; otherwise only `order` is returned.
fn miller(order: u64, z: f64, mut table: Option<&mut [f64]>) -> f64 {
    let top_wanted = match &table {
        Some(t) => (t.len() as u64).saturating_sub(1).max(order),
        None => order,
    };
    let start = miller_start(top_wanted, z);
    let two_over_z = 2.0 / z;

    let mut above = 0.0_f64; // I_{k+1}
    let mut current = 1e-300_f64; // I_k, k = start
    let mut norm = 0.0_f64; // 2 sum_{k>=1} I_k accumulated so far
    let mut wanted = 0.0_f64;

    let mut k = start;
    while k > 0 {
        if k as u64 == order {
            wanted = current;
        }
        if let Some(t) = table.as_deref_mut() {
            if k < t.len() {
                t[k] = current;
            }
        }
        norm += 2.0 * current;
        let below = (k as f64) * two_over_z * current + above;
        above = current;
        current = below;
        k -= 1;
        if current > RESCALE_ABOVE {
            current *= RESCALE_BY;
            above *= RESCALE_BY;
            norm *= RESCALE_BY;
            wanted *= RESCALE_BY;
            if let Some(t) = table.as_deref_mut() {
                for v in t.iter_mut().skip(k + 1) {
                    *v *= RESCALE_BY;
                }
            }
        }
    }
    // k == 0
    if order == 0 {
        wanted = current;
    }
    norm += current;
    if let Some(t) = table {
        if !t.is_empty() {
            t[0] = current;
        }
        for v in t.iter_mut() {
            *v /= norm;
        }
    }
    wanted / norm
}

/// All scaled values `e^{-z} I_k(z)` for `k = 0..=max_order` from one
/// recurrence pass. Negative orders follow from `I_{-k} = I_k`.
#[derive(Debug, Clone)]
pub struct ScaledBesselTable {
    argument: f64,
    values: Vec<f64>,
}

impl ScaledBesselTable {
    pub fn new(z: f64, max_order: usize) -> Result<Self> {
        check_argument(z)?;
        if max_order as i64 > MAX_ORDER {
            return Err(Error::Domain("Bessel order exceeds 10^6"));
        }
        let mut values = vec![0.0; max_order + 1];
        if z == 0.0 {
            values[0] = 1.0;
        } else if z < SERIES_CUTOFF {
            for (k, v) in values.iter_mut().enumerate() {
                *v = series_scaled(k as u64, z);
            }
        } else {
            miller(0, z, Some(&mut values));
        }
        Ok(ScaledBesselTable {
            argument: z,
            values,
        })
    }

    pub fn argument(&self) -> f64 {
        self.argument
    }

    pub fn max_order(&self) -> usize {
        self.values.len() - 1
    }

    /// Value at order `n`, or `None` past the table.
    pub fn get(&self, n: i64) -> Option<f64> {
        self.values.get(n.unsigned_abs() as usize).copied()
    }

    /// Value at order `n`, growing the table when `n` lies past its end.
    pub fn value(&mut self, n: i64) -> f64 {
        let k = n.unsigned_abs() as usize;
        if k >= self.values.len() {
            let grown = (2 * k).max(k + 64).min(MAX_ORDER as usize);
            if let Ok(t) = ScaledBesselTable::new(self.argument, grown) {
                *self = t;
            }
        }
        self.values.get(k).copied().unwrap_or(0.0)
    }
}
