//! Laplacian eigenvalues and normalised eigenfunctions on the twisted cycle
//! and on the Dirichlet, Neumann and mixed intervals.
//!
//! Mode indices follow the classical ranges: cycle and Neumann start at 0,
//! Dirichlet at 1, Dirichlet-Neumann at 0. Eigenvalues come back in mode
//! order, unsorted.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// The p-cycle `Z/pZ` with twisted periodicity `psi(j + p) = e^{2 pi i alpha} psi(j)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleSpec {
    p: usize,
    alpha: f64,
}

impl CycleSpec {
    pub fn new(p: usize, alpha: f64) -> Result<Self> {
        if p == 0 {
            return Err(Error::Domain("cycle needs at least one vertex"));
        }
        if !(0.0..1.0).contains(&alpha) {
            return Err(Error::Domain("twist must lie in [0, 1)"));
        }
        Ok(CycleSpec { p, alpha })
    }

    pub fn periodic(p: usize) -> Result<Self> {
        Self::new(p, 0.0)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `lambda_n(alpha) = 4 sin^2(pi (n + alpha) / p)`.
    pub fn eigenvalue(&self, n: usize) -> f64 {
        let s = (PI * (n as f64 + self.alpha) / self.p as f64).sin();
        4.0 * s * s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryCondition {
    /// Dirichlet at both ends.
    DD,
    /// Neumann at both ends.
    NN,
    /// Dirichlet at the left end, Neumann at the right.
    DN,
}

/// A discrete path described by its number of free vertices `q`; the free
/// vertices are always labelled `1..=q`.
///
/// The Dirichlet host has `q + 2` vertices `0..=q+1` with the two ends
/// clamped, so the classical Dirichlet parameter (number of edges) is `q + 1`.
/// For Neumann and mixed intervals the classical parameter equals `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IntervalSpec {
    free: usize,
    bc: BoundaryCondition,
}

impl IntervalSpec {
    pub fn new(free: usize, bc: BoundaryCondition) -> Result<Self> {
        if free == 0 {
            return Err(Error::Domain("interval needs at least one free vertex"));
        }
        Ok(IntervalSpec { free, bc })
    }

    /// Dirichlet path with host vertices `0..=p`, i.e. `p - 1` free vertices.
    pub fn dirichlet_host(p: usize) -> Result<Self> {
        if p < 2 {
            return Err(Error::Domain("Dirichlet host needs p >= 2"));
        }
        Self::new(p - 1, BoundaryCondition::DD)
    }

    pub fn free(&self) -> usize {
        self.free
    }

    pub fn bc(&self) -> BoundaryCondition {
        self.bc
    }

    /// The classical interval parameter: `q + 1` for DD, `q` otherwise.
    pub fn host_parameter(&self) -> usize {
        match self.bc {
            BoundaryCondition::DD => self.free + 1,
            _ => self.free,
        }
    }

    pub fn check_vertex(&self, j: i64) -> Result<()> {
        if j < 1 || j > self.free as i64 {
            return Err(Error::IndexOutOfRange {
                index: j,
                lo: 1,
                hi: self.free as i64,
            });
        }
        Ok(())
    }

    /// Index of the first mode.
    pub fn first_mode(&self) -> usize {
        match self.bc {
            BoundaryCondition::DD => 1,
            _ => 0,
        }
    }

    /// Eigenvalue of mode `n` (using this geometry's mode numbering).
    pub fn eigenvalue(&self, n: usize) -> f64 {
        let s = match self.bc {
            BoundaryCondition::DD => {
                let p = self.host_parameter() as f64;
                (PI * n as f64 / (2.0 * p)).sin()
            }
            BoundaryCondition::NN => (PI * n as f64 / (2.0 * self.free as f64)).sin(),
            BoundaryCondition::DN => {
                let w = 2.0 * self.free as f64 + 1.0;
                (PI * (2.0 * n as f64 + 1.0) / (2.0 * w)).sin()
            }
        };
        4.0 * s * s
    }

    /// Real amplitude of mode `n` at vertex `j`.
    pub fn eigenfunction(&self, n: usize, j: i64) -> f64 {
        let jf = j as f64;
        let nf = n as f64;
        match self.bc {
            BoundaryCondition::DD => {
                let p = self.host_parameter() as f64;
                (2.0 / p).sqrt() * (jf * PI * nf / p).sin()
            }
            BoundaryCondition::NN => {
                let p = self.free as f64;
                if n == 0 {
                    1.0 / p.sqrt()
                } else {
                    (2.0 / p).sqrt() * (nf * PI * (2.0 * jf - 1.0) / (2.0 * p)).cos()
                }
            }
            BoundaryCondition::DN => {
                let w = 2.0 * self.free as f64 + 1.0;
                2.0 / w.sqrt() * (PI * (2.0 * nf + 1.0) * jf / w).sin()
            }
        }
    }
}

/// Eigenvalues with their eigenfunctions sampled on the free vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSet {
    /// Index of the first mode; entry `k` below belongs to mode `first_mode + k`.
    pub first_mode: usize,
    /// Label of the first vertex; column `c` belongs to vertex `first_vertex + c`.
    pub first_vertex: i64,
    pub eigenvalues: Vec<f64>,
    /// `eigenfunctions[k][c]` is the amplitude of mode `first_mode + k` at
    /// vertex `first_vertex + c`.
    pub eigenfunctions: Vec<Vec<Complex64>>,
}

impl ModeSet {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn vertex_labels(&self) -> impl Iterator<Item = i64> + '_ {
        let n = self.eigenfunctions.first().map_or(0, Vec::len) as i64;
        self.first_vertex..self.first_vertex + n
    }

    /// `max_{k,l} |<y_k, y_l> - delta_kl|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (a, ya) in self.eigenfunctions.iter().enumerate() {
            for (b, yb) in self.eigenfunctions.iter().enumerate() {
                let ip: Complex64 = ya.iter().zip(yb).map(|(x, y)| x * y.conj()).sum();
                let want = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((ip - want).norm());
            }
        }
        worst
    }
}

/// Eigenpairs on the twisted cycle: `psi_n(j) = p^{-1/2} e^{2 pi i (n + alpha) j / p}`.
pub fn cycle_modes(spec: &CycleSpec) -> ModeSet {
    let p = spec.p();
    let norm = 1.0 / (p as f64).sqrt();
    let eigenvalues = (0..p).map(|n| spec.eigenvalue(n)).collect();
    let eigenfunctions = (0..p)
        .map(|n| {
            let k = 2.0 * PI * (n as f64 + spec.alpha()) / p as f64;
            (0..p)
                .map(|j| Complex64::from_polar(norm, k * j as f64))
                .collect()
        })
        .collect();
    ModeSet {
        first_mode: 0,
        first_vertex: 0,
        eigenvalues,
        eigenfunctions,
    }
}

/// Eigenpairs on an interval, sampled on the free vertices `1..=q`.
pub fn interval_modes(spec: &IntervalSpec) -> ModeSet {
    let q = spec.free();
    let first = spec.first_mode();
    let modes = first..first + q;
    let eigenvalues = modes.clone().map(|n| spec.eigenvalue(n)).collect();
    let eigenfunctions = modes
        .map(|n| {
            (1..=q as i64)
                .map(|j| Complex64::new(spec.eigenfunction(n, j), 0.0))
                .collect()
        })
        .collect();
    ModeSet {
        first_mode: first,
        first_vertex: 1,
        eigenvalues,
        eigenfunctions,
    }
}
