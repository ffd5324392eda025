//! Tanh-sinh (double exponential) quadrature.

use core::f64::consts::FRAC_PI_2;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Outcome of an integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    /// Difference between the last two refinement levels.
    pub error: f64,
    pub evaluations: usize,
}

const T_MAX: f64 = 4.0;
const MAX_LEVEL: u32 = 12;
// coarse levels can agree by accident on sharply peaked integrands
const MIN_LEVEL: u32 = 3;

/// Integrate `f` over `[a, b]` with the tanh-sinh rule, halving the step
/// until two successive levels agree to `max(abs_tol, rel_tol * |I|)`.
///
/// The integrand is never evaluated at the endpoints.
pub fn tanh_sinh<F>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<Quadrature>
where
    F: FnMut(f64) -> f64,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain("quadrature bounds must be finite"));
    }
    if a == b {
        return Ok(Quadrature {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }
    let half = 0.5 * (b - a);
    let mut evaluations = 0usize;

    // contribution of the abscissa pair at +-t
    let mut node = |t: f64| -> f64 {
        let u = FRAC_PI_2 * t.sinh();
        let cu = u.cosh();
        let w = FRAC_PI_2 * t.cosh() / (cu * cu);
        // distance from the nearer endpoint, 1 - tanh(u), without cancellation
        let comp = 2.0 / (1.0 + (2.0 * u.abs()).exp());
        let (xr, xl) = if t == 0.0 {
            (a + half, a + half)
        } else {
            (b - half * comp, a + half * comp)
        };
        evaluations += if t == 0.0 { 1 } else { 2 };
        if t == 0.0 {
            w * f(xr)
        } else {
            let r = f(xr);
            let l = f(xl);
            w * (r + l)
        }
    };

    let mut h = 1.0;
    let mut sum = node(0.0);
    let mut k = 1;
    while k as f64 * h <= T_MAX {
        sum += node(k as f64 * h);
        k += 1;
    }
    let mut estimate = half * h * sum;
    for level in 1..=MAX_LEVEL {
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= T_MAX {
            sum += node(k as f64 * h);
            k += 2;
        }
        let next = half * h * sum;
        let error = (next - estimate).abs();
        estimate = next;
        if !estimate.is_finite() {
            return Err(Error::Quadrature { estimate, error });
        }
        if level >= MIN_LEVEL && error <= abs_tol.max(rel_tol * estimate.abs()) {
            return Ok(Quadrature {
                value: estimate,
                error,
                evaluations,
            });
        }
    }
    let error = f64::NAN;
    Err(Error::Quadrature { estimate, error })
}

/// Integrate a decaying integrand over `[0, inf)` as a chain of tanh-sinh
/// panels whose widths double from `first_panel`. Panels are added until they
/// reach at least `upper` and the last one contributes no more than
/// `max(abs_tol, rel_tol * |total|)`.
pub fn tanh_sinh_panels<F>(
    mut f: F,
    upper: f64,
    first_panel: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<Quadrature>
where
    F: FnMut(f64) -> f64,
{
    const MAX_PANELS: usize = 200;
    if !(upper > 0.0 && first_panel > 0.0 && upper.is_finite()) {
        return Err(Error::Domain("panel bounds must be positive"));
    }
    let mut total = Quadrature {
        value: 0.0,
        error: 0.0,
        evaluations: 0,
    };
    let mut lo = 0.0;
    let mut width = first_panel.min(upper);
    for panel in 1..=MAX_PANELS {
        let hi = lo + width;
        let part = tanh_sinh(&mut f, lo, hi, abs_tol / panel as f64, rel_tol)?;
        total.value += part.value;
        total.error += part.error;
        total.evaluations += part.evaluations;
        if hi >= upper && part.value.abs() <= abs_tol.max(rel_tol * total.value.abs()) {
            return Ok(total);
        }
        lo = hi;
        width *= 2.0;
    }
    Err(Error::Quadrature {
        estimate: total.value,
        error: f64::NAN,
    })
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn polynomial_and_smooth() {
        let q = tanh_sinh(|x| x * x, 0.0, 3.0, 1e-14, 1e-14).unwrap();
        assert!((q.value - 9.0).abs() < 1e-13);
        let q = tanh_sinh(|x| x.sin(), 0.0, PI, 1e-14, 1e-14).unwrap();
        assert!((q.value - 2.0).abs() < 1e-13);
    }

    #[test]
    fn endpoint_singularity() {
        // int_0^1 ln(x) dx = -1
        let q = tanh_sinh(|x| x.ln(), 0.0, 1.0, 1e-12, 1e-12).unwrap();
        assert!((q.value + 1.0).abs() < 1e-11);
        // int_0^1 x^{-1/2} dx = 2
        let q = tanh_sinh(|x| 1.0 / x.sqrt(), 0.0, 1.0, 1e-10, 1e-10).unwrap();
        assert!((q.value - 2.0).abs() < 1e-9);
    }

    #[test]
    fn panels_on_decaying_integrand() {
        let q = tanh_sinh_panels(
            |t| (-0.3 * t).exp() * (1.0 + t).recip(),
            1.0,
            1.0,
            1e-15,
            1e-15,
        )
        .unwrap();
        // e^{0.3} E_1(0.3)
        let want = 1.222_535_605_080_585_58;
        assert!((q.value - want).abs() < 1e-10, "{}", q.value);
    }

    #[test]
    fn reports_non_convergence() {
        let r = tanh_sinh(|x| (1.0 / x).sin() / x, 0.0, 1.0, 1e-15, 1e-15);
        assert!(matches!(r, Err(Error::Quadrature { .. })));
    }
}
