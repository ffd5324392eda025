//! Explicit Laplacian and adjacency matrices for the cycle and the three
//! interval types, with exact and numeric checks against the closed forms.
//!
//! The cycle adjacency counts both directions around the ring, so `p = 2`
//! carries a doubled edge and `p = 1` a doubled loop (`A = [2]`). That keeps
//! `tr A^k = p g_k` for every `p`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::greens::{green_interval_exact, ExactSpectralParam, SpectralParam};
use crate::kernels::Geometry;
use crate::spectra::{BoundaryCondition, CycleSpec, IntervalSpec};

/// Dense matrix of exact rationals, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            entries: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    /// From rows of integers; all rows must have equal length.
    pub fn from_rows(rows: &[&[i64]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Domain("ragged matrix rows"));
        }
        let entries = rows
            .iter()
            .flat_map(|r| {
                r.iter()
                    .map(|&v| BigRational::from_integer(BigInt::from(v)))
            })
            .collect();
        Ok(ExactMatrix {
            rows: rows.len(),
            cols,
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.entries[i * self.cols + j] = v;
    }

    fn add_to(&mut self, i: usize, j: usize, v: i64) {
        self.entries[i * self.cols + j] += BigRational::from_integer(BigInt::from(v));
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn mul(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != other.rows {
            return Err(Error::Domain("matrix dimensions do not match"));
        }
        let mut out = ExactMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `self + c I`.
    pub fn shift_diagonal(&self, c: &BigRational) -> Result<ExactMatrix> {
        if !self.is_square() {
            return Err(Error::Domain("diagonal shift needs a square matrix"));
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            out.entries[i * self.cols + i] += c;
        }
        Ok(out)
    }

    pub fn trace(&self) -> BigRational {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i).clone())
            .sum()
    }

    pub fn pow(&self, mut k: u32) -> Result<ExactMatrix> {
        if !self.is_square() {
            return Err(Error::Domain("matrix power needs a square matrix"));
        }
        let mut result = ExactMatrix::identity(self.rows);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// The matrix with row `r` and column `c` removed.
    pub fn minor(&self, r: usize, c: usize) -> ExactMatrix {
        let mut entries =
            Vec::with_capacity(self.rows.saturating_sub(1) * self.cols.saturating_sub(1));
        for i in (0..self.rows).filter(|&i| i != r) {
            for j in (0..self.cols).filter(|&j| j != c) {
                entries.push(self.get(i, j).clone());
            }
        }
        ExactMatrix {
            rows: self.rows - 1,
            cols: self.cols - 1,
            entries,
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination with row pivoting.
    pub fn determinant(&self) -> Result<BigRational> {
        if !self.is_square() {
            return Err(Error::Domain("determinant needs a square matrix"));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigRational::one());
        }
        let mut a: Vec<Vec<BigRational>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut prev = BigRational::one();
        let mut negate = false;
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(k, i);
                        negate = !negate;
                    }
                    None => return Ok(BigRational::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = a[k][k].clone();
        }
        let det = a[n - 1][n - 1].clone();
        Ok(if negate { -det } else { det })
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| {
            crate::poly::to_f64(self.get(i, j))
        })
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Adjacency matrix. Twisted cycles are rejected; see
/// [`hermitian_laplacian_twisted`].
pub fn build_adjacency(geometry: &Geometry) -> Result<ExactMatrix> {
    match geometry {
        Geometry::Cycle(spec) => {
            if spec.alpha() != 0.0 {
                return Err(Error::Domain("twisted cycle has no real adjacency matrix"));
            }
            let p = spec.p();
            let mut a = ExactMatrix::zeros(p, p);
            for j in 0..p {
                a.add_to(j, (j + 1) % p, 1);
                a.add_to(j, (j + p - 1) % p, 1);
            }
            Ok(a)
        }
        Geometry::Interval(spec) => {
            let n = spec.free();
            let mut a = ExactMatrix::zeros(n, n);
            for j in 1..n {
                a.add_to(j - 1, j, 1);
                a.add_to(j, j - 1, 1);
            }
            Ok(a)
        }
    }
}

/// Laplacian `L = D - A` restricted to the free vertices. Dirichlet ends keep
/// the full diagonal 2; Neumann ends have diagonal 1. In the mixed case the
/// Dirichlet end is vertex 1.
pub fn build_laplacian(geometry: &Geometry) -> Result<ExactMatrix> {
    let a = build_adjacency(geometry)?;
    let n = a.rows();
    let mut l = ExactMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            l.set(i, j, -a.get(i, j).clone());
        }
        l.add_to(i, i, 2);
    }
    if let Geometry::Interval(spec) = geometry {
        match spec.bc() {
            BoundaryCondition::DD => {}
            BoundaryCondition::NN => {
                l.add_to(0, 0, -1);
                l.add_to(n - 1, n - 1, -1);
            }
            BoundaryCondition::DN => l.add_to(n - 1, n - 1, -1),
        }
    }
    Ok(l)
}

/// Hermitian Laplacian of the twisted cycle, where the wrap-around entries
/// carry `e^{+-2 pi i alpha}` so that `psi(j + p) = e^{2 pi i alpha} psi(j)`.
pub fn hermitian_laplacian_twisted(spec: &CycleSpec) -> DMatrix<Complex64> {
    let p = spec.p() as i64;
    let mut l = DMatrix::from_element(p as usize, p as usize, Complex64::new(0.0, 0.0));
    for j in 0..p {
        l[(j as usize, j as usize)] += 2.0;
        for step in [1, -1] {
            let k = j + step;
            let phase = 2.0 * PI * spec.alpha() * k.div_euclid(p) as f64;
            l[(j as usize, k.rem_euclid(p) as usize)] -= Complex64::from_polar(1.0, phase);
        }
    }
    l
}

/// Largest gap between the numerically diagonalised Laplacian and the
/// closed-form eigenvalues, both sorted.
pub fn laplacian_eigen_defect(geometry: &Geometry) -> Result<f64> {
    let mut numeric: Vec<f64> = match geometry {
        Geometry::Cycle(spec) => hermitian_laplacian_twisted(spec)
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect(),
        Geometry::Interval(_) => build_laplacian(geometry)?
            .to_f64()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect(),
    };
    let mut formula = geometry.eigenvalues();
    numeric.sort_by(f64::total_cmp);
    formula.sort_by(f64::total_cmp);
    Ok(numeric
        .iter()
        .zip(&formula)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

/// Relative residual of `det(L + m^2 I) = 2 (cosh 2 p gamma - cos 2 pi alpha)`
/// for the twisted Hermitian Laplacian.
pub fn twisted_determinant_residual(spec: &CycleSpec, param: &SpectralParam) -> f64 {
    let p = spec.p();
    let m = hermitian_laplacian_twisted(spec)
        + DMatrix::<Complex64>::identity(p, p) * Complex64::from(param.m_squared());
    let det = m.determinant();
    let want = 2.0 * ((2.0 * p as f64 * param.gamma()).cosh() - (2.0 * PI * spec.alpha()).cos());
    (det - want).norm() / want.abs()
}

/// Green matrix of an interval at exact `x`, assembled entry by entry.
pub fn green_matrix_exact(spec: &IntervalSpec, x: &BigRational) -> Result<ExactMatrix> {
    let param = ExactSpectralParam::new(x.clone())?;
    let n = spec.free();
    let mut g = ExactMatrix::zeros(n, n);
    for r in 1..=n {
        for rp in 1..=n {
            g.set(
                r - 1,
                rp - 1,
                green_interval_exact(spec, r as i64, rp as i64, &param)?,
            );
        }
    }
    Ok(g)
}

/// Whether `(L + (2x - 2) I) G = I` holds exactly.
pub fn verify_green_inverse(spec: &IntervalSpec, x: &BigRational) -> Result<bool> {
    let param = ExactSpectralParam::new(x.clone())?;
    let l = build_laplacian(&Geometry::Interval(*spec))?;
    let g = green_matrix_exact(spec, x)?;
    let product = l.shift_diagonal(&param.m_squared())?.mul(&g)?;
    Ok(product == ExactMatrix::identity(spec.free()))
}

fn untwisted(p: usize) -> Result<Geometry> {
    Ok(Geometry::Cycle(CycleSpec::periodic(p)?))
}

/// `tr A^k` for the `p`-cycle.
pub fn trace_power(p: usize, k: u32) -> Result<BigInt> {
    let a = build_adjacency(&untwisted(p)?)?;
    Ok(a.pow(k)?.trace().to_integer())
}

/// Spanning trees of the `p`-cycle as the cofactor of its Laplacian.
pub fn cycle_laplacian_cofactor(p: usize) -> Result<BigInt> {
    let l = build_laplacian(&untwisted(p)?)?;
    let det = l.minor(0, 0).determinant()?;
    Ok(det.to_integer())
}
