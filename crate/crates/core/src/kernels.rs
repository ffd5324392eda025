//! Heat kernels `K(j, j'; t)` solving `dK/dt = (E + E^{-1} - 2) K` with
//! `K(j, j'; 0) = delta_{jj'}`.
//!
//! Every finite geometry is computable two ways:
//!
//! * **images**: a (phased or signed) sum of translated copies of the kernel on
//!   the integers, `e^{-2t} I_{j - j'}(2t)`;
//! * **modes**: `sum_n e^{-lambda_n t} y_n(j) conj(y_n(j'))` over the
//!   eigenpairs from [`crate::spectra`].
//!
//! The two are independent and are cross-checked throughout the tests.
//!
//! Twist convention: the cycle image sum is
//! `sum_m e^{-2 pi i m alpha} e^{-2t} I_{j - j' + m p}(2t)`, which carries the
//! same twist as the modes `e^{2 pi i (n + alpha) j / p}`, i.e.
//! `K(j + p, j') = e^{2 pi i alpha} K(j, j')`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::special_fn::{bessel_i_scaled, ScaledBesselTable};
use crate::spectra::{BoundaryCondition, CycleSpec, IntervalSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelMethod {
    /// Sum over images (classical paths).
    Images,
    /// Eigenfunction expansion.
    Modes,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatQuery {
    pub j: i64,
    pub j_prime: i64,
    pub t: f64,
}

impl HeatQuery {
    pub fn new(j: i64, j_prime: i64, t: f64) -> Result<Self> {
        check_time(t)?;
        Ok(HeatQuery { j, j_prime, t })
    }

    fn swapped(&self) -> Self {
        HeatQuery {
            j: self.j_prime,
            j_prime: self.j,
            t: self.t,
        }
    }
}

fn check_time(t: f64) -> Result<()> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::Domain(
            "diffusion time must be finite and non-negative",
        ));
    }
    Ok(())
}

/// Stopping rule for infinite image and lattice sums.
///
/// Shells `m = 0, +-1, +-2, ...` are added until `min_shells` consecutive
/// shells each change the partial sum by less than `rel_tol` times its
/// magnitude, and never before a geometry-dependent floor of shells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    pub rel_tol: f64,
    pub min_shells: usize,
    pub max_shells: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            rel_tol: 1e-14,
            min_shells: 3,
            max_shells: 1_000_000,
        }
    }
}

impl TruncationPolicy {
    pub fn new(rel_tol: f64, min_shells: usize, max_shells: usize) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol < 1.0) {
            return Err(Error::Domain("rel_tol must lie in (0, 1)"));
        }
        if min_shells == 0 || min_shells > max_shells {
            return Err(Error::Domain("need 0 < min_shells <= max_shells"));
        }
        Ok(TruncationPolicy {
            rel_tol,
            min_shells,
            max_shells,
        })
    }

    /// Shell floor for an image lattice of the given period at time `t`.
    fn floor(&self, t: f64, period: usize) -> usize {
        (2.0 * t / period as f64).ceil() as usize + 2
    }
}

/// Sum `shell(0) + sum_{s>=1} shell(s)`, where `shell(s)` returns the combined
/// contribution of the `+s` and `-s` images.
pub(crate) fn shell_sum<T, F>(trunc: &TruncationPolicy, floor: usize, mut shell: F) -> Result<T>
where
    T: Copy + core::ops::AddAssign,
    F: FnMut(i64) -> T,
    T: Magnitude,
{
    let mut total = shell(0);
    let mut quiet = 0usize;
    let mut s = 1usize;
    loop {
        if s > trunc.max_shells {
            return Err(Error::Truncation {
                shells: trunc.max_shells,
            });
        }
        let c = shell(s as i64);
        total += c;
        let small = c.magnitude() == 0.0 || c.magnitude() < trunc.rel_tol * total.magnitude();
        quiet = if small { quiet + 1 } else { 0 };
        if s >= floor && quiet >= trunc.min_shells {
            return Ok(total);
        }
        s += 1;
    }
}

pub(crate) trait Magnitude {
    fn magnitude(&self) -> f64;
}

impl Magnitude for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Magnitude for Complex64 {
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Scaled Bessel values at `z = 2t`, grown on demand.
struct Images {
    table: ScaledBesselTable,
}

impl Images {
    fn new(t: f64, reach: usize) -> Result<Self> {
        Ok(Images {
            table: ScaledBesselTable::new(2.0 * t, reach.max(8))?,
        })
    }

    /// `e^{-2t} I_n(2t)`.
    fn k(&mut self, n: i64) -> f64 {
        self.table.value(n)
    }
}

fn initial_reach(q: &HeatQuery, period: usize, trunc: &TruncationPolicy) -> usize {
    let base = q.j.unsigned_abs() as usize + q.j_prime.unsigned_abs() as usize;
    base + (trunc.floor(q.t, period) + trunc.min_shells + 2) * period
}

/// `K_Z(j, j'; t) = e^{-2t} I_{j - j'}(2t)`.
pub fn kernel_integers(q: &HeatQuery) -> Result<f64> {
    check_time(q.t)?;
    bessel_i_scaled(q.j - q.j_prime, 2.0 * q.t)
}

/// Heat kernel on the twisted p-cycle.
pub fn kernel_cycle(
    spec: &CycleSpec,
    q: &HeatQuery,
    method: KernelMethod,
    trunc: &TruncationPolicy,
) -> Result<Complex64> {
    check_time(q.t)?;
    match method {
        KernelMethod::Images => cycle_images(spec, q, trunc),
        KernelMethod::Modes => Ok(cycle_modes_sum(spec, q)),
    }
}

fn cycle_images(spec: &CycleSpec, q: &HeatQuery, trunc: &TruncationPolicy) -> Result<Complex64> {
    let p = spec.p();
    let d = q.j - q.j_prime;
    let pi = p as i64;
    let mut img = Images::new(q.t, initial_reach(q, p, trunc))?;
    let twist = spec.alpha();
    shell_sum(trunc, trunc.floor(q.t, p), |s| {
        if s == 0 {
            return Complex64::new(img.k(d), 0.0);
        }
        let plus = img.k(d + s * pi);
        let minus = img.k(d - s * pi);
        let phase = Complex64::from_polar(1.0, -2.0 * PI * s as f64 * twist);
        phase * plus + phase.conj() * minus
    })
}

fn cycle_modes_sum(spec: &CycleSpec, q: &HeatQuery) -> Complex64 {
    let p = spec.p() as i64;
    let d = q.j - q.j_prime;
    let big_j = d.div_euclid(p);
    let r = d.rem_euclid(p);
    let alpha = spec.alpha();
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 0..spec.p() {
        let decay = (-spec.eigenvalue(n) * q.t).exp();
        let angle = 2.0 * PI * (n as f64 + alpha) * r as f64 / p as f64;
        acc += Complex64::from_polar(decay, angle);
    }
    acc / p as f64 * Complex64::from_polar(1.0, 2.0 * PI * alpha * big_j as f64)
}

/// Heat kernel on an interval; `j` and `j'` must be free vertices.
pub fn kernel_interval(
    spec: &IntervalSpec,
    q: &HeatQuery,
    method: KernelMethod,
    trunc: &TruncationPolicy,
) -> Result<f64> {
    check_time(q.t)?;
    spec.check_vertex(q.j)?;
    spec.check_vertex(q.j_prime)?;
    match method {
        KernelMethod::Images => interval_images(spec, q, trunc),
        KernelMethod::Modes => Ok(interval_modes_sum(spec, q)),
    }
}

/// Image form of the interval kernel at arbitrary integer labels, including
/// boundary and ghost vertices outside the free range.
pub fn kernel_interval_images_extended(
    spec: &IntervalSpec,
    q: &HeatQuery,
    trunc: &TruncationPolicy,
) -> Result<f64> {
    check_time(q.t)?;
    interval_images(spec, q, trunc)
}

fn interval_images(spec: &IntervalSpec, q: &HeatQuery, trunc: &TruncationPolicy) -> Result<f64> {
    let (j, jp) = (q.j, q.j_prime);
    match spec.bc() {
        BoundaryCondition::DD => {
            // mirrors at 0 and P; images j' - 2mP (even) and -j' - 2mP (odd, sign -1)
            let period = 2 * spec.host_parameter();
            let w = period as i64;
            let mut img = Images::new(q.t, initial_reach(q, period, trunc))?;
            shell_sum(trunc, trunc.floor(q.t, period), |s| {
                let pair = |img: &mut Images, m: i64| img.k(j - jp + m * w) - img.k(j + jp + m * w);
                if s == 0 {
                    pair(&mut img, 0)
                } else {
                    pair(&mut img, s) + pair(&mut img, -s)
                }
            })
        }
        BoundaryCondition::NN => {
            // mirrors at 1/2 and p + 1/2; both image families enter with sign +1
            let period = 2 * spec.free();
            let w = period as i64;
            let mut img = Images::new(q.t, initial_reach(q, period, trunc))?;
            shell_sum(trunc, trunc.floor(q.t, period), |s| {
                let pair =
                    |img: &mut Images, m: i64| img.k(j - jp + m * w) + img.k(j + jp - 1 + m * w);
                if s == 0 {
                    pair(&mut img, 0)
                } else {
                    pair(&mut img, s) + pair(&mut img, -s)
                }
            })
        }
        BoundaryCondition::DN => {
            // mirrors at 0 and p + 1/2; shells of width 2p + 1 with alternating sign
            let period = 2 * spec.free() + 1;
            let w = period as i64;
            let mut img = Images::new(q.t, initial_reach(q, period, trunc))?;
            shell_sum(trunc, trunc.floor(q.t, period), |s| {
                let pair = |img: &mut Images, m: i64| img.k(j - jp + m * w) - img.k(j + jp + m * w);
                let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
                if s == 0 {
                    pair(&mut img, 0)
                } else {
                    sign * (pair(&mut img, s) + pair(&mut img, -s))
                }
            })
        }
    }
}

fn interval_modes_sum(spec: &IntervalSpec, q: &HeatQuery) -> f64 {
    let first = spec.first_mode();
    (first..first + spec.free())
        .map(|n| {
            (-spec.eigenvalue(n) * q.t).exp()
                * spec.eigenfunction(n, q.j)
                * spec.eigenfunction(n, q.j_prime)
        })
        .sum()
}

/// Either finite geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Geometry {
    Cycle(CycleSpec),
    Interval(IntervalSpec),
}

impl Geometry {
    /// Labels of the vertices carrying dynamics.
    pub fn vertices(&self) -> core::ops::RangeInclusive<i64> {
        match self {
            Geometry::Cycle(c) => 0..=c.p() as i64 - 1,
            Geometry::Interval(i) => 1..=i.free() as i64,
        }
    }

    /// Kernel value; real-valued geometries return a zero imaginary part.
    pub fn kernel(
        &self,
        q: &HeatQuery,
        method: KernelMethod,
        trunc: &TruncationPolicy,
    ) -> Result<Complex64> {
        match self {
            Geometry::Cycle(c) => kernel_cycle(c, q, method, trunc),
            Geometry::Interval(i) => kernel_interval(i, q, method, trunc).map(Complex64::from),
        }
    }

    /// Eigenvalues in mode order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        match self {
            Geometry::Cycle(c) => (0..c.p()).map(|n| c.eigenvalue(n)).collect(),
            Geometry::Interval(i) => {
                let f = i.first_mode();
                (f..f + i.free()).map(|n| i.eigenvalue(n)).collect()
            }
        }
    }
}

/// `sum_j K(j, j; t)` over the dynamical vertices.
pub fn trace_kernel(
    geometry: &Geometry,
    t: f64,
    method: KernelMethod,
    trunc: &TruncationPolicy,
) -> Result<f64> {
    check_time(t)?;
    if method == KernelMethod::Modes {
        return Ok(geometry.eigenvalues().iter().map(|l| (-l * t).exp()).sum());
    }
    match geometry {
        Geometry::Cycle(c) => {
            // translation invariant: p K(0, 0; t)
            let k = kernel_cycle(c, &HeatQuery::new(0, 0, t)?, method, trunc)?;
            Ok(c.p() as f64 * k.re)
        }
        Geometry::Interval(spec) if spec.bc() == BoundaryCondition::DD => {
            // P sum_m e^{-2t} I_{2mP}(2t) - e^{-2t} cosh 2t
            let p = spec.host_parameter();
            let w = 2 * p as i64;
            let q = HeatQuery::new(0, 0, t)?;
            let mut img = Images::new(t, initial_reach(&q, 2 * p, trunc))?;
            let lattice = shell_sum(trunc, trunc.floor(t, 2 * p), |s| {
                if s == 0 {
                    img.k(0)
                } else {
                    2.0 * img.k(s * w)
                }
            })?;
            Ok(p as f64 * lattice - 0.5 * (1.0 + (-4.0 * t).exp()))
        }
        Geometry::Interval(spec) => {
            let mut total = 0.0;
            for j in 1..=spec.free() as i64 {
                total += kernel_interval(spec, &HeatQuery::new(j, j, t)?, method, trunc)?;
            }
            Ok(total)
        }
    }
}

/// Residual of the composition rule
/// `I_{j-j''}(z1 + z2) = sum_{j'} I_{j-j'}(z1) I_{j'-j''}(z2)`, with both sides
/// multiplied by `e^{-z1-z2}`.
pub fn composition_check(
    z1: f64,
    z2: f64,
    j: i64,
    j_double_prime: i64,
    trunc: &TruncationPolicy,
) -> Result<f64> {
    if !(z1.is_finite() && z2.is_finite()) || z1 < 0.0 || z2 < 0.0 {
        return Err(Error::Domain(
            "composition arguments must be finite and non-negative",
        ));
    }
    let reach = (j - j_double_prime).unsigned_abs() as usize + (z1 + z2).ceil() as usize + 64;
    let lhs = ScaledBesselTable::new(z1 + z2, reach)?.value(j - j_double_prime);
    let mut first = ScaledBesselTable::new(z1, reach)?;
    let mut second = ScaledBesselTable::new(z2, reach)?;
    let floor = z1.max(z2).ceil() as usize + 2;
    let rhs = shell_sum(trunc, floor, |s| {
        let mut term = |jp: i64| first.value(j - jp) * second.value(jp - j_double_prime);
        if s == 0 {
            term(j)
        } else {
            term(j + s) + term(j - s)
        }
    })?;
    Ok((lhs - rhs).abs())
}

/// Conjugate-symmetry defect `|K(j, j') - conj(K(j', j))|`.
pub fn symmetry_defect(
    geometry: &Geometry,
    q: &HeatQuery,
    method: KernelMethod,
    trunc: &TruncationPolicy,
) -> Result<f64> {
    let a = geometry.kernel(q, method, trunc)?;
    let b = geometry.kernel(&q.swapped(), method, trunc)?;
    Ok((a - b.conj()).norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    const DEFAULT: TruncationPolicy = TruncationPolicy {
        rel_tol: 1e-14,
        min_shells: 3,
        max_shells: 1_000_000,
    };

    fn hq(j: i64, jp: i64, t: f64) -> HeatQuery {
        HeatQuery::new(j, jp, t).unwrap()
    }

    fn cyc(p: usize, a: f64) -> CycleSpec {
        CycleSpec::new(p, a).unwrap()
    }

    fn iv(q: usize, bc: BoundaryCondition) -> IntervalSpec {
        IntervalSpec::new(q, bc).unwrap()
    }

    #[test]
    fn integers_initial_condition() {
        assert_eq!(kernel_integers(&hq(5, 5, 0.0)).unwrap(), 1.0);
        assert_eq!(kernel_integers(&hq(3, 0, 0.0)).unwrap(), 0.0);
        assert!(HeatQuery::new(0, 0, -1.0).is_err());
        let bad = HeatQuery {
            j: 0,
            j_prime: 0,
            t: -0.5,
        };
        assert!(kernel_integers(&bad).is_err());
    }

    #[test]
    fn integers_against_series() {
        // e^{-2} I_2(2) with I_2(2) = sum 1 / (n! (n+2)!)
        let mut s = 0.0;
        let mut nf = 1.0;
        for n in 0..25 {
            if n > 0 {
                nf *= n as f64;
            }
            s += 1.0 / (nf * nf * ((n + 1) * (n + 2)) as f64);
        }
        let want = (-2.0f64).exp() * s;
        let got = kernel_integers(&hq(2, 0, 1.0)).unwrap();
        assert!((got - want).abs() < 1e-15);
    }

    #[test]
    fn cycle_examples() {
        for m in [KernelMethod::Images, KernelMethod::Modes] {
            let k = kernel_cycle(&cyc(3, 0.0), &hq(1, 1, 0.0), m, &DEFAULT).unwrap();
            assert!((k - 1.0).norm() < 1e-15);
            for t in [0.1, 1.0, 7.0] {
                let k = kernel_cycle(&cyc(1, 0.0), &hq(0, 0, t), m, &DEFAULT).unwrap();
                assert!((k - 1.0).norm() < 1e-13, "{m:?} t={t}: {k}");
            }
            let k = kernel_cycle(&cyc(2, 0.5), &hq(0, 0, 0.5), m, &DEFAULT).unwrap();
            // both eigenvalues equal 2
            assert!((k - (-1.0f64).exp()).norm() < 1e-14, "{m:?}: {k}");
        }
    }

    #[test]
    fn twisted_cycle_quasi_periodicity() {
        let spec = cyc(5, 0.3);
        for m in [KernelMethod::Images, KernelMethod::Modes] {
            let a = kernel_cycle(&spec, &hq(1, 0, 0.8), m, &DEFAULT).unwrap();
            let b = kernel_cycle(&spec, &hq(6, 0, 0.8), m, &DEFAULT).unwrap();
            let phase = Complex64::from_polar(1.0, 2.0 * PI * 0.3);
            assert!((b - phase * a).norm() < 1e-13);
        }
    }

    #[test]
    fn interval_examples() {
        for m in [KernelMethod::Images, KernelMethod::Modes] {
            for q in 1..5 {
                for j in 1..=q as i64 {
                    let k =
                        kernel_interval(&iv(q, BoundaryCondition::DD), &hq(j, j, 0.0), m, &DEFAULT)
                            .unwrap();
                    assert!((k - 1.0).abs() < 1e-14);
                }
            }
            let nn = iv(2, BoundaryCondition::NN);
            for j in 1..=2 {
                for jp in 1..=2 {
                    let k = kernel_interval(&nn, &hq(j, jp, 20.0), m, &DEFAULT).unwrap();
                    assert!((k - 0.5).abs() < 1e-10, "{m:?} {j} {jp}: {k}");
                }
            }
            let dn = iv(1, BoundaryCondition::DN);
            for t in [0.3, 2.0] {
                let k = kernel_interval(&dn, &hq(1, 1, t), m, &DEFAULT).unwrap();
                assert!((k - (-t).exp()).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn interval_rejects_out_of_range() {
        let s = iv(3, BoundaryCondition::NN);
        assert!(matches!(
            kernel_interval(&s, &hq(0, 1, 1.0), KernelMethod::Modes, &DEFAULT),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(kernel_interval(&s, &hq(1, 4, 1.0), KernelMethod::Images, &DEFAULT).is_err());
    }

    #[test]
    fn dirichlet_vanishes_on_boundary() {
        for q in 1..6 {
            let s = iv(q, BoundaryCondition::DD);
            let host = s.host_parameter() as i64;
            for jp in 1..=q as i64 {
                for t in [0.2, 1.5] {
                    for b in [0, host] {
                        let k =
                            kernel_interval_images_extended(&s, &hq(b, jp, t), &DEFAULT).unwrap();
                        assert!(k.abs() < 1e-15, "q={q} b={b} jp={jp}: {k}");
                    }
                }
            }
        }
    }

    #[test]
    fn neumann_ghost_reflection() {
        for q in 1..6 {
            let s = iv(q, BoundaryCondition::NN);
            let qi = q as i64;
            for jp in 1..=qi {
                let t = 0.7;
                let g0 = kernel_interval_images_extended(&s, &hq(0, jp, t), &DEFAULT).unwrap();
                let g1 = kernel_interval_images_extended(&s, &hq(1, jp, t), &DEFAULT).unwrap();
                let gq = kernel_interval_images_extended(&s, &hq(qi, jp, t), &DEFAULT).unwrap();
                let gq1 =
                    kernel_interval_images_extended(&s, &hq(qi + 1, jp, t), &DEFAULT).unwrap();
                assert!((g0 - g1).abs() < 1e-15);
                assert!((gq - gq1).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn trace_examples() {
        let c4 = Geometry::Cycle(cyc(4, 0.0));
        let dd = Geometry::Interval(IntervalSpec::dirichlet_host(4).unwrap());
        let c2 = Geometry::Cycle(cyc(2, 0.0));
        for m in [KernelMethod::Images, KernelMethod::Modes] {
            assert!((trace_kernel(&c4, 0.0, m, &DEFAULT).unwrap() - 4.0).abs() < 1e-14);
            assert!((trace_kernel(&dd, 0.0, m, &DEFAULT).unwrap() - 3.0).abs() < 1e-14);
            let want = 1.0 + (-4.0f64).exp();
            assert!((trace_kernel(&c2, 1.0, m, &DEFAULT).unwrap() - want).abs() < 1e-14);
        }
    }

    #[test]
    fn composition_examples() {
        assert_eq!(composition_check(0.0, 2.5, 3, -1, &DEFAULT).unwrap(), 0.0);
        assert!(composition_check(1.0, 1.0, 0, 0, &DEFAULT).unwrap() <= 1e-12);
        assert!(composition_check(2.0, 3.0, 4, -1, &DEFAULT).unwrap() <= 1e-12);
        assert!(composition_check(-1.0, 3.0, 4, -1, &DEFAULT).is_err());
    }

    #[test]
    fn truncation_failure_is_reported() {
        let tight = TruncationPolicy {
            rel_tol: 1e-14,
            min_shells: 3,
            max_shells: 2,
        };
        let r = kernel_cycle(&cyc(1, 0.0), &hq(0, 0, 50.0), KernelMethod::Images, &tight);
        assert!(matches!(r, Err(Error::Truncation { .. })));
        assert!(TruncationPolicy::new(0.0, 3, 10).is_err());
        assert!(TruncationPolicy::new(1e-10, 11, 10).is_err());
    }

    #[test]
    fn idr_imaginary_part_vanishes() {
        for p in 1..12usize {
            for j in 0..p as i64 {
                for t in [0.1, 1.0, 5.0] {
                    let s: f64 = (0..p)
                        .map(|n| {
                            let x = (PI * n as f64 / p as f64).sin();
                            (-4.0 * x * x * t).exp()
                                * (2.0 * PI * (n as i64 * j) as f64 / p as f64).sin()
                        })
                        .sum();
                    assert!(s.abs() < 1e-12);
                }
            }
        }
    }
}
