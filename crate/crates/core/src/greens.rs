//! Lattice Green functions `G = (L + m^2)^{-1}`, with `m^2 = 4 sinh^2 gamma`,
//! and the trigonometric and Bessel identities that surround them.
//!
//! Closed forms are written with Chebyshev polynomials at `x = cosh 2 gamma`,
//! so `m^2 = 2x - 2`. Interval formulas use the number of free vertices `q`
//! and are symmetric in `(r, r')`; they are evaluated with `r >= r'`:
//!
//! ```text
//! DD:  U_{q-r}(x) U_{r'-1}(x) / U_q(x)
//! NN:  V_{q-r}(x) V_{r'-1}(x) / (2 (x - 1) U_{q-1}(x))
//! DN:  V_{q-r}(x) U_{r'-1}(x) / V_q(x)
//! ```

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use core::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use num_rational::BigRational;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::kernels::{
    kernel_cycle, kernel_integers, kernel_interval, shell_sum, HeatQuery, KernelMethod,
    TruncationPolicy,
};
use crate::quad::{tanh_sinh_panels, Quadrature};
use crate::special_fn::{
    bessel_i_scaled, cheb_neumann_denominator, chebyshev, chebyshev_signed, ChebKind, Ring,
    ScaledBesselTable,
};
use crate::spectra::{BoundaryCondition, CycleSpec, IntervalSpec};

/// Mass parameter `gamma > 0`, with `m^2 = 4 sinh^2 gamma` and `x = cosh 2 gamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralParam {
    gamma: f64,
}

impl SpectralParam {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::Domain("gamma must be positive and finite"));
        }
        Ok(SpectralParam { gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn m_squared(&self) -> f64 {
        let s = self.gamma.sinh();
        4.0 * s * s
    }

    pub fn x(&self) -> f64 {
        (2.0 * self.gamma).cosh()
    }
}

/// `x = cosh 2 gamma` held as an exact rational, `x > 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactSpectralParam {
    x: BigRational,
}

impl ExactSpectralParam {
    pub fn new(x: BigRational) -> Result<Self> {
        if x <= BigRational::one() {
            return Err(Error::Domain("exact x must exceed 1"));
        }
        Ok(ExactSpectralParam { x })
    }

    pub fn x(&self) -> &BigRational {
        &self.x
    }

    /// `m^2 = 2x - 2`.
    pub fn m_squared(&self) -> BigRational {
        (&self.x - BigRational::one()) * BigRational::from_integer(2.into())
    }
}

/// Where a Green function lives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GreenGeometry {
    Integers,
    Cycle(CycleSpec),
    Interval(IntervalSpec),
}

/// Vertex labels attached to a Green value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GreenIndices {
    /// Separation `j = J p + r` on a cycle, `0 <= r < p`.
    Winding { winding: i64, residue: i64 },
    /// Endpoints `(r, r')`.
    Pair { r: i64, r_prime: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenValue {
    pub value: Complex64,
    pub geometry: GreenGeometry,
    pub indices: GreenIndices,
}

/// Green function between `i` and `i'` on any geometry. Cycles use the mode
/// sum, which carries the imaginary part as well.
pub fn green(
    geometry: &GreenGeometry,
    i: i64,
    i_prime: i64,
    param: &SpectralParam,
) -> Result<GreenValue> {
    let (value, indices) = match geometry {
        GreenGeometry::Integers => (
            Complex64::from(green_integers(i, i_prime, param.gamma())?),
            GreenIndices::Pair {
                r: i,
                r_prime: i_prime,
            },
        ),
        GreenGeometry::Cycle(spec) => {
            let d = i - i_prime;
            let p = spec.p() as i64;
            (
                green_cycle(spec, d, param)?,
                GreenIndices::Winding {
                    winding: d.div_euclid(p),
                    residue: d.rem_euclid(p),
                },
            )
        }
        GreenGeometry::Interval(spec) => (
            Complex64::from(green_interval(spec, i, i_prime, param)?),
            GreenIndices::Pair {
                r: i,
                r_prime: i_prime,
            },
        ),
    };
    Ok(GreenValue {
        value,
        geometry: *geometry,
        indices,
    })
}

/// Cycle Green function at separation `j` by the mode sum
/// `(1/p) sum_n e^{2 pi i (n + alpha) j / p} / (lambda_n + m^2)`.
pub fn green_cycle(spec: &CycleSpec, j: i64, param: &SpectralParam) -> Result<Complex64> {
    let p = spec.p();
    let m2 = param.m_squared();
    let mut total = Complex64::new(0.0, 0.0);
    for n in 0..p {
        let phase = 2.0 * PI * (n as f64 + spec.alpha()) * j as f64 / p as f64;
        total += Complex64::from_polar(1.0, phase) / (spec.eigenvalue(n) + m2);
    }
    Ok(total / p as f64)
}

/// Real part of the cycle Green function in closed form: with `j = J p + r`,
///
/// `[cos(2 pi alpha J) U_{p-1-r}(x) + cos(2 pi alpha (J+1)) U_{r-1}(x)] / (2 (T_p(x) - cos 2 pi alpha))`.
pub fn green_cycle_closed_form(spec: &CycleSpec, j: i64, param: &SpectralParam) -> Result<f64> {
    let p = spec.p() as i64;
    let a = spec.alpha();
    let x = param.x();
    let winding = j.div_euclid(p) as f64;
    let r = j.rem_euclid(p);
    let num = (2.0 * PI * a * winding).cos() * chebyshev_signed(ChebKind::U, p - 1 - r, &x)
        + (2.0 * PI * a * (winding + 1.0)).cos() * chebyshev_signed(ChebKind::U, r - 1, &x);
    let den = 2.0 * (chebyshev(ChebKind::T, p as u64, &x) - (2.0 * PI * a).cos());
    Ok(num / den)
}

/// Green function on the integers, `e^{-2 gamma |j - j'|} / (2 sinh 2 gamma)`.
pub fn green_integers(j: i64, j_prime: i64, gamma: f64) -> Result<f64> {
    let param = SpectralParam::new(gamma)?;
    let d = (j - j_prime).unsigned_abs() as f64;
    Ok((-2.0 * param.gamma() * d).exp() / (2.0 * (2.0 * param.gamma()).sinh()))
}

fn interval_parts<R: Ring>(spec: &IntervalSpec, r: i64, r_prime: i64, x: &R) -> Result<(R, R)> {
    spec.check_vertex(r)?;
    spec.check_vertex(r_prime)?;
    let (r, rp) = if r >= r_prime {
        (r, r_prime)
    } else {
        (r_prime, r)
    };
    let q = spec.free() as i64;
    let u = |n: i64| chebyshev_signed(ChebKind::U, n, x);
    let v = |n: i64| chebyshev_signed(ChebKind::V, n, x);
    Ok(match spec.bc() {
        BoundaryCondition::DD => (u(q - r) * u(rp - 1), u(q)),
        BoundaryCondition::NN => (v(q - r) * v(rp - 1), cheb_neumann_denominator(q as u64, x)),
        BoundaryCondition::DN => (v(q - r) * u(rp - 1), v(q)),
    })
}

/// Interval Green function in floating point.
pub fn green_interval(
    spec: &IntervalSpec,
    r: i64,
    r_prime: i64,
    param: &SpectralParam,
) -> Result<f64> {
    let (num, den) = interval_parts(spec, r, r_prime, &param.x())?;
    Ok(num / den)
}

/// Interval Green function as an exact rational.
pub fn green_interval_exact(
    spec: &IntervalSpec,
    r: i64,
    r_prime: i64,
    param: &ExactSpectralParam,
) -> Result<BigRational> {
    let (num, den) = interval_parts(spec, r, r_prime, param.x())?;
    if den.is_zero() {
        return Err(Error::Domain("singular interval Green function"));
    }
    Ok(num / den)
}

/// Laplace transform `int_0^inf e^{-m^2 t} K(i, i'; t) dt` of the image-sum
/// heat kernel, by tanh-sinh quadrature over at least `[0, T]` with
/// `e^{-m^2 T} < 1e-16`, continued until the tail is negligible.
pub fn green_by_quadrature(
    geometry: &GreenGeometry,
    i: i64,
    i_prime: i64,
    param: &SpectralParam,
    trunc: &TruncationPolicy,
) -> Result<Complex64> {
    let m2 = param.m_squared();
    let upper = 16.0 * core::f64::consts::LN_10 / m2;
    let first = upper.min(1.0);
    let mut failure: Option<Error> = None;
    let mut kernel = |t: f64| -> Complex64 {
        let q = match HeatQuery::new(i, i_prime, t) {
            Ok(q) => q,
            Err(e) => {
                failure.get_or_insert(e);
                return Complex64::new(0.0, 0.0);
            }
        };
        let k = match geometry {
            GreenGeometry::Integers => kernel_integers(&q).map(Complex64::from),
            GreenGeometry::Cycle(spec) => kernel_cycle(spec, &q, KernelMethod::Images, trunc),
            GreenGeometry::Interval(spec) => {
                kernel_interval(spec, &q, KernelMethod::Images, trunc).map(Complex64::from)
            }
        };
        match k {
            Ok(k) => k * (-m2 * t).exp(),
            Err(e) => {
                failure.get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        }
    };
    let re = tanh_sinh_panels(|t| kernel(t).re, upper, first, 1e-12, 1e-13)?;
    let im = match geometry {
        GreenGeometry::Cycle(spec) if spec.alpha() != 0.0 => {
            tanh_sinh_panels(|t| kernel(t).im, upper, first, 1e-12, 1e-13)?
        }
        _ => Quadrature {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        },
    };
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(Complex64::new(re.value, im.value))
}

fn relative(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        ((a - b) / b).abs()
    }
}

/// Relative residual of
/// `prod_m (4 sin^2(pi (m + alpha)/p) + 4 sinh^2 gamma) = 2 (cosh 2 p gamma - cos 2 pi alpha)`.
pub fn det_identity_residual(spec: &CycleSpec, param: &SpectralParam) -> f64 {
    let m2 = param.m_squared();
    let lhs: f64 = (0..spec.p()).map(|n| spec.eigenvalue(n) + m2).product();
    let rhs =
        2.0 * ((2.0 * spec.p() as f64 * param.gamma()).cosh() - (2.0 * PI * spec.alpha()).cos());
    relative(lhs, rhs)
}

/// Residual of `sum_m ln 2 sin(pi (m + alpha)/p) = ln 2 sin(pi alpha)`.
pub fn kubert_residual(p: usize, alpha: f64) -> Result<f64> {
    if p == 0 {
        return Err(Error::Domain("p must be positive"));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain("Kubert identity needs 0 < alpha < 1"));
    }
    let lhs: f64 = (0..p)
        .map(|m| (2.0 * (PI * (m as f64 + alpha) / p as f64).sin()).ln())
        .sum();
    let rhs = (2.0 * (PI * alpha).sin()).ln();
    Ok((lhs - rhs).abs())
}

/// Twisted zeta value `sum_n lambda_n^{-s}`, the zero mode omitted when `alpha = 0`.
pub fn zeta_cycle(spec: &CycleSpec, s: u32) -> Result<f64> {
    if s == 0 {
        return Err(Error::Domain("s must be a positive integer"));
    }
    let skip_zero = spec.alpha() == 0.0;
    if skip_zero && spec.p() < 2 {
        return Err(Error::Domain("untwisted zeta needs p >= 2"));
    }
    let first = if skip_zero { 1 } else { 0 };
    Ok((first..spec.p())
        .map(|n| spec.eigenvalue(n).powi(-(s as i32)))
        .sum())
}

/// Closed form of the `s = 1` value for `alpha > 0`: `(p^2 / 4) cosec^2(pi alpha)`.
pub fn zeta_cycle_s1_closed_form(spec: &CycleSpec) -> Result<f64> {
    if spec.alpha() == 0.0 {
        return Err(Error::Domain("closed form needs alpha > 0"));
    }
    let s = (PI * spec.alpha()).sin();
    let p = spec.p() as f64;
    Ok(p * p / (4.0 * s * s))
}

/// Residuals of the truncated series
///
/// ```text
/// sin 2 pi alpha  / (cosh 2 gamma - cos 2 pi alpha) = 2 sum_{n>=1} e^{-2 gamma n} sin 2 pi n alpha
/// sinh 2 gamma    / (cosh 2 gamma - cos 2 pi alpha) = 1 + 2 sum_{n>=1} e^{-2 gamma n} cos 2 pi n alpha
/// ```
///
/// after `n_terms` terms.
pub fn fourier_series_residual(gamma: f64, alpha: f64, n_terms: usize) -> Result<(f64, f64)> {
    let param = SpectralParam::new(gamma)?;
    let g2 = 2.0 * param.gamma();
    let c = (2.0 * PI * alpha).cos();
    let den = g2.cosh() - c;
    let mut sin_sum = 0.0;
    let mut cos_sum = 1.0;
    for n in 1..=n_terms {
        let w = 2.0 * (-g2 * n as f64).exp();
        let a = 2.0 * PI * n as f64 * alpha;
        sin_sum += w * a.sin();
        cos_sum += w * a.cos();
    }
    let r1 = ((2.0 * PI * alpha).sin() / den - sin_sum).abs();
    let r2 = (g2.sinh() / den - cos_sum).abs();
    Ok((r1, r2))
}

/// Upper bound on either truncation error of [`fourier_series_residual`]:
/// `2 e^{-2 gamma (N+1)} / (1 - e^{-2 gamma})`.
pub fn fourier_series_bound(gamma: f64, n_terms: usize) -> f64 {
    let r = (-2.0 * gamma).exp();
    2.0 * r.powi(n_terms as i32 + 1) / (1.0 - r)
}

/// Relative residual of
/// `int_0^inf e^{-z} I_n(z) e^{-2 z sinh^2 gamma} dz = e^{-2 gamma n} / sinh 2 gamma`,
/// the left side by quadrature.
pub fn laplace_transform_residual(n: u32, gamma: f64) -> Result<f64> {
    let param = SpectralParam::new(gamma)?;
    let rate = 0.5 * param.m_squared();
    let upper = 16.0 * core::f64::consts::LN_10 / rate;
    let first = upper.min(1.0).min(1.0 / rate);
    let mut failure = None;
    let q = tanh_sinh_panels(
        |z| match bessel_i_scaled(n as i64, z) {
            Ok(b) => b * (-rate * z).exp(),
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        upper,
        first,
        f64::MIN_POSITIVE,
        1e-12,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    let exact = (-2.0 * param.gamma() * n as f64).exp() / (2.0 * param.gamma()).sinh();
    Ok(relative(q.value, exact))
}

/// `e^{-z} [1/2 I_0(z) + sum_{m>=1} c(m) I_{m p}(z)]`.
fn half_lattice<C>(
    table: &mut ScaledBesselTable,
    p: i64,
    c: C,
    trunc: &TruncationPolicy,
) -> Result<f64>
where
    C: Fn(i64) -> f64,
{
    let floor = (table.argument() / p as f64).ceil() as usize + 2;
    shell_sum(trunc, floor, |m| {
        if m == 0 {
            0.5 * table.value(0)
        } else {
            c(m) * table.value(m * p)
        }
    })
}

fn sign(m: i64) -> f64 {
    if m % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Twist grid used for the cosine-series identities.
pub const IDENTITY_ALPHAS: [f64; 6] = [0.0, 0.1, 0.25, 1.0 / 3.0, 0.5, 0.75];

/// Scaled residuals of the Bessel lattice-sum identities at argument `z`.
/// Both sides of every identity are multiplied by `e^{-z}` before comparing.
pub fn bessel_identity_suite(z: f64, trunc: &TruncationPolicy) -> Result<BTreeMap<String, f64>> {
    if !(z.is_finite() && z > 0.0) {
        return Err(Error::Domain(
            "identity argument must be positive and finite",
        ));
    }
    let mut table = ScaledBesselTable::new(z, z.ceil() as usize + 64)?;
    let mut out = BTreeMap::new();
    let e = |c: f64| (z * (c - 1.0)).exp();

    // 1/2 I_0 + sum cos(2 pi m alpha) I_{mp} = (1/2p) sum_n e^{z cos(2 pi (n + alpha)/p)}
    for p in 1..=8i64 {
        for &a in &IDENTITY_ALPHAS {
            let lhs = half_lattice(&mut table, p, |m| (2.0 * PI * m as f64 * a).cos(), trunc)?;
            let rhs: f64 = (0..p)
                .map(|n| e((2.0 * PI * (n as f64 + a) / p as f64).cos()))
                .sum::<f64>()
                / (2 * p) as f64;
            out.insert(
                format!("cosine_series p={p} alpha={a:.4}"),
                (lhs - rhs).abs(),
            );
        }
    }

    for &a in &IDENTITY_ALPHAS {
        let c = (2.0 * PI * a).cos();
        let lhs = half_lattice(&mut table, 1, |m| (2.0 * PI * m as f64 * a).cos(), trunc)?;
        out.insert(
            format!("single_step_twisted alpha={a:.4}"),
            (lhs - 0.5 * e(c)).abs(),
        );
        let c = (PI * a).cos();
        let lhs = half_lattice(&mut table, 2, |m| (2.0 * PI * m as f64 * a).cos(), trunc)?;
        let rhs = 0.25 * (e(c) + e(-c));
        out.insert(
            format!("double_step_twisted alpha={a:.4}"),
            (lhs - rhs).abs(),
        );
    }

    // anti-periodic sums: 1/2 I_0 + sum (-1)^m I_m = e^{-z}/2, ... I_{2m} = 1/2
    let lhs = half_lattice(&mut table, 1, sign, trunc)?;
    out.insert(
        "antiperiodic_single_step".into(),
        (lhs - 0.5 * e(-1.0)).abs(),
    );
    let lhs = half_lattice(&mut table, 2, sign, trunc)?;
    out.insert(
        "antiperiodic_double_step".into(),
        (lhs - 0.5 * e(0.0)).abs(),
    );

    // 2 sum_{mu>=0} I_{2 mu + 1} = sinh z
    let floor = (z / 2.0).ceil() as usize + 2;
    let odd = shell_sum(trunc, floor, |mu| 2.0 * table.value(2 * mu + 1))?;
    out.insert("odd_orders".into(), (odd - 0.5 * (1.0 - e(-1.0))).abs());

    // alpha = 1/4: I_0 + 2 sum (-1)^m I_{2m} = 1, I_0 + 2 sum (-1)^m I_{4m} = cosh(z / sqrt 2)
    let lhs = 2.0 * half_lattice(&mut table, 2, sign, trunc)?;
    out.insert("quarter_twist_double_step".into(), (lhs - e(0.0)).abs());
    let lhs = 2.0 * half_lattice(&mut table, 4, sign, trunc)?;
    let rhs = 0.5 * (e(1.0 / SQRT_2) + e(-1.0 / SQRT_2));
    out.insert("quarter_twist_quadruple_step".into(), (lhs - rhs).abs());

    // p = 3: 1/2 I_0 + sum (-1)^m I_{3m} = (e^{z/2} + 2 e^{-z/4} cosh(3z/4)) / 6
    //        1/2 I_0 + sum (-1)^m I_{6m} = (1 + 2 cosh(sqrt(3) z / 2)) / 6
    let lhs = half_lattice(&mut table, 3, sign, trunc)?;
    let rhs = (e(0.5) + e(-0.25 + 0.75) + e(-0.25 - 0.75)) / 6.0;
    out.insert("antiperiodic_triple_step".into(), (lhs - rhs).abs());
    let lhs = half_lattice(&mut table, 6, sign, trunc)?;
    let h = 3.0f64.sqrt() / 2.0;
    let rhs = (e(0.0) + e(h) + e(-h)) / 6.0;
    out.insert("antiperiodic_sextuple_step".into(), (lhs - rhs).abs());

    // sum_{all m} I_m = e^z
    let all = shell_sum(trunc, z.ceil() as usize + 2, |m| {
        if m == 0 {
            table.value(0)
        } else {
            2.0 * table.value(m)
        }
    })?;
    out.insert("generating_function_at_one".into(), (all - 1.0).abs());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn gp(g: f64) -> SpectralParam {
        SpectralParam::new(g).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn cyc(p: usize, a: f64) -> CycleSpec {
        CycleSpec::new(p, a).unwrap()
    }

    fn iv(n: usize, bc: BoundaryCondition) -> IntervalSpec {
        IntervalSpec::new(n, bc).unwrap()
    }

    #[test]
    fn param_relations() {
        let p = gp(0.7);
        assert!((p.m_squared() - (2.0 * p.x() - 2.0)).abs() < 1e-14);
        assert!(SpectralParam::new(0.0).is_err());
        assert!(SpectralParam::new(-1.0).is_err());
        assert!(ExactSpectralParam::new(q(1, 1)).is_err());
        assert_eq!(
            ExactSpectralParam::new(q(3, 2)).unwrap().m_squared(),
            q(1, 1)
        );
    }

    #[test]
    fn single_mode_cycles() {
        let g = gp(0.4);
        let v = green_cycle(&cyc(1, 0.0), 0, &g).unwrap();
        assert!((v.re - 1.0 / g.m_squared()).abs() < 1e-13);
        let v = green_cycle(&cyc(2, 0.5), 0, &g).unwrap();
        assert!((v.re - 1.0 / (2.0 + g.m_squared())).abs() < 1e-13);
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn modes_match_closed_form() {
        for p in 1..=12usize {
            for &a in &[0.0, 0.13, 0.25, 0.5, 0.8] {
                for &g in &[0.05, 0.3, 1.1] {
                    let s = cyc(p, a);
                    for j in -2 * p as i64..=2 * p as i64 {
                        let ms = green_cycle(&s, j, &gp(g)).unwrap().re;
                        let cf = green_cycle_closed_form(&s, j, &gp(g)).unwrap();
                        assert!(
                            (ms - cf).abs() <= 1e-12 * cf.abs().max(1.0),
                            "p={p} a={a} g={g} j={j}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn diagonal_cycle_value() {
        let g = gp(0.5);
        let x = g.x();
        let want = chebyshev(ChebKind::U, 2, &x) / (2.0 * (chebyshev(ChebKind::T, 3, &x) - 1.0));
        let got = green_cycle(&cyc(3, 0.0), 0, &g).unwrap().re;
        assert!((got - want).abs() < 1e-14);
    }

    #[test]
    fn exact_interval_examples() {
        let x = q(3, 2);
        let e = ExactSpectralParam::new(x.clone()).unwrap();
        let two = q(2, 1);
        let one = q(1, 1);
        let dd = green_interval_exact(&iv(1, BoundaryCondition::DD), 1, 1, &e).unwrap();
        assert_eq!(dd, one.clone() / (&two * &x));
        let nn = green_interval_exact(&iv(1, BoundaryCondition::NN), 1, 1, &e).unwrap();
        assert_eq!(nn, one.clone() / (&two * &x - &two));
        let dn = green_interval_exact(&iv(1, BoundaryCondition::DN), 1, 1, &e).unwrap();
        assert_eq!(dn, one.clone() / (&two * &x - &one));
    }

    #[test]
    fn interval_symmetric_positive_and_in_range() {
        let g = gp(0.35);
        for bc in [
            BoundaryCondition::DD,
            BoundaryCondition::NN,
            BoundaryCondition::DN,
        ] {
            let s = iv(6, bc);
            for r in 1..=6 {
                assert!(green_interval(&s, r, r, &g).unwrap() > 0.0);
                for rp in 1..=6 {
                    let a = green_interval(&s, r, rp, &g).unwrap();
                    let b = green_interval(&s, rp, r, &g).unwrap();
                    assert_eq!(a, b);
                }
            }
            assert!(matches!(
                green_interval(&s, 0, 1, &g),
                Err(Error::IndexOutOfRange { .. })
            ));
            assert!(green_interval(&s, 1, 7, &g).is_err());
        }
    }

    #[test]
    fn interval_matches_mode_resolvent() {
        let g = gp(0.45);
        for bc in [
            BoundaryCondition::DD,
            BoundaryCondition::NN,
            BoundaryCondition::DN,
        ] {
            for n in 1..=7usize {
                let s = iv(n, bc);
                let modes = crate::spectra::interval_modes(&s);
                for r in 1..=n as i64 {
                    for rp in 1..=n as i64 {
                        let mut want = 0.0;
                        for (k, lam) in modes.eigenvalues.iter().enumerate() {
                            let y = &modes.eigenfunctions[k];
                            want += (y[(r - 1) as usize] * y[(rp - 1) as usize].conj()).re
                                / (lam + g.m_squared());
                        }
                        let got = green_interval(&s, r, rp, &g).unwrap();
                        assert!((got - want).abs() < 1e-12, "{bc:?} n={n} r={r} rp={rp}");
                    }
                }
            }
        }
    }

    #[test]
    fn integers_and_large_cycle() {
        let g = 1.0;
        assert!((green_integers(4, 4, g).unwrap() - 1.0 / (2.0 * 2.0f64.sinh())).abs() < 1e-15);
        let v = green_integers(0, 3, 0.5).unwrap();
        assert!((v - (-3.0f64).exp() / (2.0 * 1.0f64.sinh())).abs() < 1e-15);
        let big = green_cycle(&cyc(200, 0.0), 2, &gp(0.5)).unwrap().re;
        assert!((big - green_integers(2, 0, 0.5).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn determinant_and_kubert() {
        assert!(det_identity_residual(&cyc(1, 0.37), &gp(0.2)) < 1e-15);
        assert!(det_identity_residual(&cyc(6, 0.3), &gp(0.7)) < 1e-12);
        assert!(det_identity_residual(&cyc(12, 0.0), &gp(0.1)) < 1e-12);
        assert_eq!(kubert_residual(1, 0.3).unwrap(), 0.0);
        assert!(kubert_residual(2, 0.25).unwrap() < 1e-12);
        assert!(kubert_residual(7, 0.41).unwrap() < 1e-12);
        assert!(kubert_residual(3, 0.0).is_err());
    }

    #[test]
    fn zeta_values() {
        assert!((zeta_cycle(&cyc(2, 0.0), 1).unwrap() - 0.25).abs() < 1e-15);
        assert!((zeta_cycle(&cyc(1, 0.5), 1).unwrap() - 0.25).abs() < 1e-15);
        assert!(zeta_cycle(&cyc(1, 0.0), 1).is_err());
        let direct: f64 = (0..3)
            .map(|m| {
                let s = (PI * (m as f64 + 0.25) / 3.0).sin();
                1.0 / (16.0 * s.powi(4))
            })
            .sum();
        assert!((zeta_cycle(&cyc(3, 0.25), 2).unwrap() - direct).abs() < 1e-13);
        for p in 1..=10 {
            for &a in &[0.1, 0.25, 0.5, 0.77] {
                let s = cyc(p, a);
                let d = zeta_cycle(&s, 1).unwrap();
                let c = zeta_cycle_s1_closed_form(&s).unwrap();
                assert!(((d - c) / c).abs() < 1e-10, "p={p} a={a}");
            }
        }
    }

    #[test]
    fn fourier_series() {
        assert_eq!(fourier_series_residual(0.8, 0.0, 10).unwrap().0, 0.0);
        let (a, b) = fourier_series_residual(1.0, 0.25, 40).unwrap();
        assert!(a <= 1e-12 && b <= 1e-12);
        let (a, b) = fourier_series_residual(0.5, 0.1, 80).unwrap();
        assert!(a <= 1e-12 && b <= 1e-12);
        for &g in &[0.05, 0.2, 0.6] {
            for n in [5usize, 20, 60] {
                let (a, b) = fourier_series_residual(g, 0.31, n).unwrap();
                let bound = fourier_series_bound(g, n) + 1e-13;
                assert!(a <= bound && b <= bound, "g={g} n={n}");
            }
        }
    }

    #[test]
    fn laplace_transform() {
        assert!(laplace_transform_residual(0, 1.0).unwrap() < 1e-8);
        assert!(laplace_transform_residual(5, 0.5).unwrap() < 1e-8);
        assert!(laplace_transform_residual(0, 5.0).unwrap() < 1e-8);
        assert!(laplace_transform_residual(3, 0.1).unwrap() < 1e-8);
    }

    #[test]
    fn identity_suite() {
        let trunc = TruncationPolicy::default();
        for &z in &[0.3, 1.0, 2.0, 17.5, 60.0] {
            let suite = bessel_identity_suite(z, &trunc).unwrap();
            assert!(suite.len() > 60);
            for (name, r) in &suite {
                assert!(*r <= 1e-12, "z={z} {name}: {r:e}");
            }
        }
    }

    #[test]
    fn quadrature_of_kernels() {
        let trunc = TruncationPolicy::default();
        let cases = [
            (GreenGeometry::Integers, 2, 0, 0.6),
            (GreenGeometry::Cycle(cyc(4, 0.3)), 1, 3, 0.5),
            (
                GreenGeometry::Interval(iv(3, BoundaryCondition::DD)),
                1,
                2,
                0.4,
            ),
            (
                GreenGeometry::Interval(iv(3, BoundaryCondition::NN)),
                3,
                3,
                0.7,
            ),
            (
                GreenGeometry::Interval(iv(4, BoundaryCondition::DN)),
                2,
                4,
                0.3,
            ),
        ];
        for (geom, i, ip, g) in cases {
            let param = gp(g);
            let want = green(&geom, i, ip, &param).unwrap().value;
            let got = green_by_quadrature(&geom, i, ip, &param, &trunc).unwrap();
            assert!((want - got).norm() < 1e-8, "{geom:?}: {want} vs {got}");
        }
    }
}
