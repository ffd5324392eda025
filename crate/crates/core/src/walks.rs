//! Closed walks on the `p`-cycle, counted by length (`g_p(sigma)`) and by
//! length and number of bumps (`f_p(u, sigma)`). A bump is an immediate
//! reversal of direction between consecutive steps.
//!
//! Everything is exact. The generating function `g_p` is built from
//! Chebyshev polynomials,
//!
//! ```text
//! g_p(sigma) = (1 / 2 sigma) U_{p-1}(1 / 2 sigma) / (T_p(1 / 2 sigma) - 1),
//! ```
//!
//! and `f_p` follows from
//!
//! ```text
//! f(u, sigma) = (1 - (1-u)^2 sigma^2) / D * g(sigma / D),   D = 1 + (1 - u^2) sigma^2.
//! ```

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graphs::{build_adjacency, cycle_laplacian_cofactor};
use crate::kernels::Geometry;
use crate::poly::{Polynomial, RationalFunction};
use crate::quad::tanh_sinh;
use crate::special_fn::{chebyshev, ChebKind};
use crate::spectra::CycleSpec;

fn check_p(p: usize) -> Result<()> {
    if p == 0 {
        return Err(Error::Domain("p must be positive"));
    }
    Ok(())
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `g_p(sigma)` as a canonical rational function.
pub fn g_rational(p: usize) -> Result<RationalFunction> {
    check_p(p)?;
    // with y = 1/s, s = 2 sigma:  g = s^{p-1} U_{p-1}(1/s) / (s^p T_p(1/s) - s^p)
    let y = Polynomial::x();
    let u = chebyshev(ChebKind::U, p as u64 - 1, &y).reversed(p - 1);
    let t = chebyshev(ChebKind::T, p as u64, &y).reversed(p);
    let den = t - Polynomial::monomial(BigRational::one(), p);
    let two = int(2);
    Ok(RationalFunction::new(u.dilate(&two), den.dilate(&two)))
}

/// `g_0 .. g_{k_max}` from the trace definition `g_k = tr(A^k) / p`.
pub fn g_series(p: usize, k_max: usize) -> Result<Vec<BigRational>> {
    check_p(p)?;
    let a = build_adjacency(&Geometry::Cycle(CycleSpec::periodic(p)?))?;
    let mut power = crate::graphs::ExactMatrix::identity(p);
    let mut out = Vec::with_capacity(k_max + 1);
    let scale = int(p as i64);
    for _ in 0..=k_max {
        out.push(power.trace() / &scale);
        power = power.mul(&a)?;
    }
    Ok(out)
}

/// `g_k = sum_m C(k, (k - m p) / 2)` over integers `m` with `|m p| <= k` and
/// `k - m p` even.
pub fn g_binomial(p: usize, k: usize) -> Result<BigUint> {
    check_p(p)?;
    let (p, k) = (p as i64, k as i64);
    let mut total = BigUint::zero();
    let reach = k / p;
    for m in -reach..=reach {
        let d = k - m * p;
        if d % 2 == 0 {
            total += num_integer::binomial(BigUint::from(k as u64), BigUint::from((d / 2) as u64));
        }
    }
    Ok(total)
}

/// Exact counts `f_{lk}` of closed walks of length `k` with `l` bumps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkCounts {
    p: usize,
    /// `table[k][l]`.
    table: Vec<Vec<BigUint>>,
}

impl WalkCounts {
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn k_max(&self) -> usize {
        self.table.len() - 1
    }

    /// `f_{lk}`, zero outside the table.
    pub fn count(&self, l: usize, k: usize) -> BigUint {
        self.table
            .get(k)
            .and_then(|row| row.get(l))
            .cloned()
            .unwrap_or_default()
    }

    /// Counts for length `k` indexed by bump number.
    pub fn row(&self, k: usize) -> &[BigUint] {
        &self.table[k]
    }

    /// `sum_l f_{lk}`.
    pub fn total(&self, k: usize) -> BigUint {
        self.table[k].iter().sum()
    }
}

/// Count closed walks from a fixed vertex by dynamic programming over
/// (position, direction of the last step, bumps so far). Also covers `p = 1`
/// and `p = 2`, where both directions lead to the same neighbour but count as
/// distinct steps.
pub fn walk_oracle(p: usize, k_max: usize) -> Result<WalkCounts> {
    check_p(p)?;
    let mut table = vec![vec![BigUint::one()]];
    // state[dir][pos][bumps], dir 0 = forward, 1 = backward
    let mut state: [Vec<Vec<BigUint>>; 2] = [vec![Vec::new(); p], vec![Vec::new(); p]];
    if k_max >= 1 {
        state[0][1 % p] = vec![BigUint::one()];
        state[1][(p - 1) % p] = vec![BigUint::one()];
    }
    for k in 1..=k_max {
        let mut row = vec![BigUint::zero(); k];
        for dir in &state {
            for (l, c) in dir[0].iter().enumerate() {
                row[l] += c;
            }
        }
        table.push(row);
        if k == k_max {
            break;
        }
        let width = k + 1;
        let mut next: [Vec<Vec<BigUint>>; 2] = [
            vec![vec![BigUint::zero(); width]; p],
            vec![vec![BigUint::zero(); width]; p],
        ];
        for (last, dir) in state.iter().enumerate() {
            for (pos, counts) in dir.iter().enumerate() {
                for (l, c) in counts.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    for (step, slot) in next.iter_mut().enumerate() {
                        let to = if step == 0 {
                            (pos + 1) % p
                        } else {
                            (pos + p - 1) % p
                        };
                        let bumps = l + usize::from(step != last);
                        slot[to][bumps] += c;
                    }
                }
            }
        }
        state = next;
    }
    Ok(WalkCounts { p, table })
}

/// Polynomial in `sigma` whose coefficients are polynomials in `u`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BivariatePolynomial {
    /// `coeffs[k]` multiplies `sigma^k`.
    coeffs: Vec<Polynomial>,
}

impl BivariatePolynomial {
    pub fn new(mut coeffs: Vec<Polynomial>) -> Self {
        while coeffs.last().is_some_and(Polynomial::is_zero) {
            coeffs.pop();
        }
        BivariatePolynomial { coeffs }
    }

    /// Lift a polynomial in `sigma` with constant coefficients.
    pub fn from_sigma(p: &Polynomial) -> Self {
        Self::new(
            p.coeffs()
                .iter()
                .map(|c| Polynomial::constant(c.clone()))
                .collect(),
        )
    }

    pub fn sigma_coeffs(&self) -> &[Polynomial] {
        &self.coeffs
    }

    /// Coefficient of `sigma^k` as a polynomial in `u`.
    pub fn sigma_coeff(&self, k: usize) -> Polynomial {
        self.coeffs.get(k).cloned().unwrap_or_else(Polynomial::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|k| &self.sigma_coeff(k) + &other.sigma_coeff(k))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::default();
        }
        let mut out = vec![Polynomial::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Self::new(out)
    }

    fn sigma_power(k: usize) -> Self {
        let mut coeffs = vec![Polynomial::zero(); k + 1];
        coeffs[k] = Polynomial::one();
        Self::new(coeffs)
    }

    fn pow(&self, k: usize) -> Self {
        let mut out = Self::new(vec![Polynomial::one()]);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Substitute a value for `u`, leaving a polynomial in `sigma`.
    pub fn at_u(&self, u: &BigRational) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| c.eval(u)).collect())
    }
}

impl fmt::Display for BivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match k {
                0 => write!(f, "({})", c.display_with("u"))?,
                1 => write!(f, "({})σ", c.display_with("u"))?,
                _ => write!(f, "({})σ^{k}", c.display_with("u"))?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Quotient of bivariate polynomials whose denominator is a nonzero constant
/// at `sigma = 0`, so that it expands as a power series in `sigma`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BivariateRational {
    pub numerator: BivariatePolynomial,
    pub denominator: BivariatePolynomial,
}

impl BivariateRational {
    pub fn new(numerator: BivariatePolynomial, denominator: BivariatePolynomial) -> Result<Self> {
        let d0 = denominator.sigma_coeff(0);
        if d0.is_zero() || d0.degree() != Some(0) {
            return Err(Error::Domain(
                "denominator must be a nonzero constant at sigma = 0",
            ));
        }
        Ok(BivariateRational {
            numerator,
            denominator,
        })
    }

    /// Equality as functions, by cross-multiplication.
    pub fn equivalent(&self, other: &Self) -> bool {
        self.numerator.mul(&other.denominator) == other.numerator.mul(&self.denominator)
    }

    /// Substitute a value for `u`.
    pub fn at_u(&self, u: &BigRational) -> RationalFunction {
        RationalFunction::new(self.numerator.at_u(u), self.denominator.at_u(u))
    }

    /// Power series in `sigma` through `sigma^{k_max}`.
    pub fn series(&self, k_max: usize) -> BivariateSeries {
        let inv = self.denominator.sigma_coeff(0).coeff(0).recip();
        let mut rows: Vec<Polynomial> = Vec::with_capacity(k_max + 1);
        for k in 0..=k_max {
            let mut acc = self.numerator.sigma_coeff(k);
            for i in 1..=k {
                let d = self.denominator.sigma_coeff(i);
                if !d.is_zero() {
                    acc = &acc - &(&d * &rows[k - i]);
                }
            }
            rows.push(acc.scale(&inv));
        }
        BivariateSeries { rows }
    }
}

impl fmt::Display for BivariateRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", self.numerator, self.denominator)
    }
}

/// Truncated expansion `sum_{k <= max_k} sum_l f_{lk} u^l sigma^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BivariateSeries {
    rows: Vec<Polynomial>,
}

impl BivariateSeries {
    pub fn max_k(&self) -> usize {
        self.rows.len() - 1
    }

    /// Coefficient of `u^l sigma^k`, zero past the truncation.
    pub fn coefficient(&self, l: usize, k: usize) -> BigRational {
        self.rows
            .get(k)
            .map(|r| r.coeff(l))
            .unwrap_or_else(BigRational::zero)
    }

    /// Coefficient of `sigma^k` as a polynomial in `u`.
    pub fn row(&self, k: usize) -> &Polynomial {
        &self.rows[k]
    }

    /// Whether every coefficient equals the walk count.
    pub fn matches(&self, counts: &WalkCounts) -> bool {
        let k_max = self.max_k().min(counts.k_max());
        (0..=k_max).all(|k| {
            let row = counts.row(k);
            let degree = self.rows[k].degree().map_or(0, |d| d + 1);
            (0..row.len().max(degree)).all(|l| {
                let c = counts.count(l, k);
                self.coefficient(l, k) == BigRational::from_integer(BigInt::from(c))
            })
        })
    }
}

/// `f_p(u, sigma)` in closed form.
pub fn bartholdi_rational(p: usize) -> Result<BivariateRational> {
    let g = g_rational(p)?;
    let (num, den) = (g.numerator(), g.denominator());
    let d = num.degree().unwrap_or(0).max(den.degree().unwrap_or(0));
    // D = 1 + (1 - u^2) sigma^2
    let dd = BivariatePolynomial::new(vec![
        Polynomial::one(),
        Polynomial::zero(),
        Polynomial::from_ints(&[1, 0, -1]),
    ]);
    // multiply numerator and denominator of g(sigma / D) by D^d
    let substitute = |poly: &Polynomial| {
        let mut acc = BivariatePolynomial::default();
        for (i, c) in poly.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = BivariatePolynomial::new(vec![Polynomial::constant(c.clone())])
                .mul(&BivariatePolynomial::sigma_power(i))
                .mul(&dd.pow(d - i));
            acc = acc.add(&term);
        }
        acc
    };
    // 1 - (1 - u)^2 sigma^2
    let lead = BivariatePolynomial::new(vec![
        Polynomial::one(),
        Polynomial::zero(),
        Polynomial::from_ints(&[-1, 2, -1]),
    ]);
    BivariateRational::new(lead.mul(&substitute(num)), dd.mul(&substitute(den)))
}

/// Series of `f_p(u, sigma)` through `sigma^{k_max}` with its closed form.
pub fn bartholdi_f(p: usize, k_max: usize) -> Result<(BivariateSeries, BivariateRational)> {
    let f = bartholdi_rational(p)?;
    Ok((f.series(k_max), f))
}

/// Integrand `(p g*_p(sigma) - p + 1) / sigma` with
/// `p g*_p = p g_p - 1 / (1 - 2 sigma)`, reduced exactly so that it is
/// regular on `[0, 1/2]`.
pub fn logdet_integrand(p: usize) -> Result<RationalFunction> {
    check_p(p)?;
    let g = g_rational(p)?.scale(&int(p as i64));
    let zero_mode = RationalFunction::new(Polynomial::one(), Polynomial::from_ints(&[1, -2]));
    let shifted = g
        .sub(&zero_mode)
        .sub(&RationalFunction::from_polynomial(Polynomial::constant(
            int(p as i64 - 1),
        )));
    let (over_sigma, rem) = shifted.numerator().div_rem(&Polynomial::x());
    if !rem.is_zero() {
        return Err(Error::Mismatch(
            "logdet integrand does not vanish at sigma = 0",
        ));
    }
    let out = RationalFunction::new(over_sigma, shifted.denominator().clone());
    if out
        .denominator()
        .eval(&BigRational::new(1.into(), 2.into()))
        .is_zero()
    {
        return Err(Error::Mismatch(
            "logdet integrand keeps a pole at sigma = 1/2",
        ));
    }
    Ok(out)
}

/// Product of the nonzero Laplacian eigenvalues of the `p`-cycle,
/// `2^{p-1} exp(-int_0^{1/2} (p g*_p - p + 1) / sigma dsigma)`.
pub fn logdet_prime(p: usize) -> Result<f64> {
    if p < 2 {
        return Err(Error::Domain("logdet needs p >= 2"));
    }
    let h = logdet_integrand(p)?;
    let integral = tanh_sinh(|s| h.eval_f64(s), 0.0, 0.5, 1e-15, 1e-14)?;
    Ok(2f64.powi(p as i32 - 1) * (-integral.value).exp())
}

/// Spanning trees of the `p`-cycle, `det'/p` rounded, confirmed against the
/// Laplacian cofactor.
pub fn spanning_trees(p: usize) -> Result<u64> {
    let det = logdet_prime(p)?;
    let from_integral = (det / p as f64).round();
    let cofactor = cycle_laplacian_cofactor(p)?
        .to_u64()
        .ok_or(Error::Domain("cofactor out of range"))?;
    if from_integral != cofactor as f64 {
        return Err(Error::Mismatch(
            "spanning-tree count disagrees with cofactor",
        ));
    }
    Ok(cofactor)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(num: &[i64], den: &[i64]) -> RationalFunction {
        RationalFunction::new(Polynomial::from_ints(num), Polynomial::from_ints(den))
    }

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn listed() -> Vec<RationalFunction> {
        vec![
            rf(&[-1], &[-1, 2]),
            rf(&[-1], &[-1, 0, 4]),
            rf(&[-1, 1], &[-1, 1, 2]),
            rf(&[-1, 0, 2], &[-1, 0, 4]),
            rf(&[1, -1, -1], &[1, -1, -3, 2]),
            rf(&[1, 0, -3], &[1, 0, -5, 0, 4]),
            rf(&[1, -1, -2, 1], &[1, -1, -4, 3, 2]),
            rf(&[1, 0, -4, 0, 2], &[1, 0, -6, 0, 8]),
            rf(&[-1, 1, 3, -2, -1], &[-1, 1, 5, -4, -5, 2]),
            rf(&[-1, 0, 5, 0, -5], &[-1, 0, 7, 0, -13, 0, 4]),
        ]
    }

    #[test]
    fn matches_listed_generating_functions() {
        for (i, want) in listed().iter().enumerate() {
            let got = g_rational(i + 1).unwrap();
            assert!(got.equivalent(want), "p={}: {got} vs {want}", i + 1);
            assert_eq!(&got, want, "canonical forms differ at p={}", i + 1);
        }
    }

    #[test]
    fn small_cases() {
        assert!(g_rational(1).unwrap().equivalent(&rf(&[1], &[1, -2])));
        assert!(g_rational(2).unwrap().equivalent(&rf(&[1], &[1, 0, -4])));
        assert!(g_rational(0).is_err());
    }

    #[test]
    fn series_examples() {
        let s = g_series(3, 4).unwrap();
        let want: Vec<BigRational> = [1, 0, 2, 2, 6].iter().map(|&v| int(v)).collect();
        assert_eq!(s, want);
        let s = g_series(1, 10).unwrap();
        assert!(s.iter().enumerate().all(|(k, v)| *v == int(1 << k)));
        assert!(g_series(4, 3).unwrap()[3].is_zero());
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(g_binomial(3, 3).unwrap(), big(2));
        assert_eq!(g_binomial(5, 2).unwrap(), big(2));
        // m = -2..=2 all contribute: 1 + 4 + 6 + 4 + 1
        assert_eq!(g_binomial(2, 4).unwrap(), big(16));
        assert_eq!(g_binomial(7, 0).unwrap(), big(1));
    }

    #[test]
    fn oracle_examples() {
        let w = walk_oracle(4, 6).unwrap();
        assert_eq!(w.count(0, 0), big(1));
        let row = |k: usize| -> Vec<u64> { w.row(k).iter().map(|c| c.to_u64().unwrap()).collect() };
        assert_eq!(row(1), vec![0]);
        assert_eq!(row(2), vec![0, 2]);
        assert_eq!(row(4), vec![2, 2, 2, 2]);
        // 2(u^5 + 2u^4 + 4u^3 + 6u^2 + 3u); the row sums to g_6 = 32
        assert_eq!(row(6), vec![0, 6, 12, 8, 4, 2]);
        let w = walk_oracle(3, 2).unwrap();
        assert_eq!(w.row(2), &[big(0), big(2)][..]);
    }

    #[test]
    fn closed_forms_for_one_and_two_vertices() {
        // (1 + (1-u) sigma) / (1 - (1+u) sigma)
        let f1 = BivariateRational::new(
            BivariatePolynomial::new(vec![Polynomial::one(), Polynomial::from_ints(&[1, -1])]),
            BivariatePolynomial::new(vec![Polynomial::one(), Polynomial::from_ints(&[-1, -1])]),
        )
        .unwrap();
        assert!(bartholdi_rational(1).unwrap().equivalent(&f1));
        // (1 + (1-u^2) sigma^2) / (1 - (1+u)^2 sigma^2)
        let f2 = BivariateRational::new(
            BivariatePolynomial::new(vec![
                Polynomial::one(),
                Polynomial::zero(),
                Polynomial::from_ints(&[1, 0, -1]),
            ]),
            BivariatePolynomial::new(vec![
                Polynomial::one(),
                Polynomial::zero(),
                Polynomial::from_ints(&[-1, -2, -1]),
            ]),
        )
        .unwrap();
        assert!(bartholdi_rational(2).unwrap().equivalent(&f2));
    }

    #[test]
    fn bartholdi_matches_oracle_and_specialises() {
        for p in 1..=6 {
            let (series, f) = bartholdi_f(p, 12).unwrap();
            assert!(series.matches(&walk_oracle(p, 12).unwrap()), "p={p}");
            assert!(f
                .at_u(&BigRational::one())
                .equivalent(&g_rational(p).unwrap()));
        }
        let (series, _) = bartholdi_f(4, 6).unwrap();
        assert_eq!(series.row(6), &Polynomial::from_ints(&[0, 6, 12, 8, 4, 2]));
    }

    #[test]
    fn logdet_values() {
        assert_eq!(logdet_integrand(2).unwrap(), rf(&[-2], &[1, 2]));
        for p in 2..=12 {
            let d = logdet_prime(p).unwrap();
            let want = (p * p) as f64;
            assert!(((d - want) / want).abs() < 1e-8, "p={p}: {d}");
        }
        assert!(logdet_prime(1).is_err());
    }

    #[test]
    fn tree_counts() {
        assert_eq!(spanning_trees(2).unwrap(), 2);
        assert_eq!(spanning_trees(3).unwrap(), 3);
        assert_eq!(spanning_trees(10).unwrap(), 10);
    }
}
