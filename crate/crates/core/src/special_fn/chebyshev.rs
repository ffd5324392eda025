//! Chebyshev polynomials of the first, second and third kinds as traces of
//! powers of the 2x2 transfer matrix
//!
//! ```text
//! C(x) = [[0, 1], [-1, 2x]]
//! T_n = tr(C^n) / 2,   U_n = tr(C^n Q),   V_n = tr(C^n R)
//! Q = [[0, 0], [0, 1]],   R = [[0, 0], [-1, 1]],   S = [[-1, 1], [-1, 1]]
//! ```
//!
//! The routines are generic over [`Ring`], so the same code evaluates in
//! `f64`, exactly in `BigRational`, or symbolically over polynomials.

use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Commutative ring with the few extra operations the transfer matrices need.
pub trait Ring:
    Clone
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_int(v: i64) -> Self;
    /// Division by two; only ever applied to values known to be even.
    fn halve(self) -> Self;
}

impl Ring for f64 {
    fn from_int(v: i64) -> Self {
        v as f64
    }
    fn halve(self) -> Self {
        0.5 * self
    }
}

impl Ring for BigRational {
    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn halve(self) -> Self {
        self / BigRational::from_integer(BigInt::from(2))
    }
}

/// Exact scalar: a rational number kept in lowest terms with positive
/// denominator (the invariant `BigRational` maintains).
pub type ExactScalar = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChebKind {
    /// First kind, `T_n`.
    T,
    /// Second kind, `U_n`.
    U,
    /// Third kind, `V_n`.
    V,
}

/// 2x2 matrix, row major.
#[derive(Debug, Clone, PartialEq)]
struct Mat2<R>([R; 4]);

impl<R: Ring> Mat2<R> {
    fn identity() -> Self {
        Mat2([R::one(), R::zero(), R::zero(), R::one()])
    }

    fn transfer(x: &R) -> Self {
        Mat2([R::zero(), R::one(), -R::one(), R::from_int(2) * x.clone()])
    }

    fn mul(&self, rhs: &Self) -> Self {
        let [a, b, c, d] = &self.0;
        let [e, f, g, h] = &rhs.0;
        Mat2([
            a.clone() * e.clone() + b.clone() * g.clone(),
            a.clone() * f.clone() + b.clone() * h.clone(),
            c.clone() * e.clone() + d.clone() * g.clone(),
            c.clone() * f.clone() + d.clone() * h.clone(),
        ])
    }

    fn trace(&self) -> R {
        self.0[0].clone() + self.0[3].clone()
    }

    /// `tr(self * [[q0, q1], [q2, q3]])` for a small integer matrix.
    fn trace_with(&self, q: [i64; 4]) -> R {
        let [a, b, c, d] = &self.0;
        let mut acc = R::zero();
        // (M Q)_{00} = a q0 + b q2 ; (M Q)_{11} = c q1 + d q3
        for (m, k) in [(a, q[0]), (b, q[2]), (c, q[1]), (d, q[3])] {
            if k != 0 {
                acc = acc + m.clone() * R::from_int(k);
            }
        }
        acc
    }

    fn pow(&self, n: u64) -> Self {
        if n <= 64 {
            let mut acc = Self::identity();
            for _ in 0..n {
                acc = acc.mul(self);
            }
            return acc;
        }
        let mut acc = Self::identity();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

const Q: [i64; 4] = [0, 0, 0, 1];
const R_MAT: [i64; 4] = [0, 0, -1, 1];
const S: [i64; 4] = [-1, 1, -1, 1];

/// `C(x)^n` for repeated use.
fn transfer_power<R: Ring>(x: &R, n: u64) -> Mat2<R> {
    Mat2::transfer(x).pow(n)
}

/// `T_n(x)`, `U_n(x)` or `V_n(x)` for `n >= 0`.
pub fn chebyshev<R: Ring>(kind: ChebKind, n: u64, x: &R) -> R {
    let m = transfer_power(x, n);
    match kind {
        ChebKind::T => m.trace().halve(),
        ChebKind::U => m.trace_with(Q),
        ChebKind::V => m.trace_with(R_MAT),
    }
}

/// Chebyshev polynomial at a signed degree, extended by the recurrence:
/// `T_{-n} = T_n`, `U_{-1} = 0`, `U_{-n} = -U_{n-2}`, `V_{-n} = V_{n-1}`.
pub fn chebyshev_signed<R: Ring>(kind: ChebKind, n: i64, x: &R) -> R {
    if n >= 0 {
        return chebyshev(kind, n as u64, x);
    }
    let k = n.unsigned_abs();
    match kind {
        ChebKind::T => chebyshev(ChebKind::T, k, x),
        ChebKind::U => {
            if k == 1 {
                R::zero()
            } else {
                -chebyshev(ChebKind::U, k - 2, x)
            }
        }
        ChebKind::V => chebyshev(ChebKind::V, k - 1, x),
    }
}

/// `U_p + U_{p-2} - 2 U_{p-1} = tr(C^p S)`, the denominator of the Neumann
/// Green function. Equals `2 (x - 1) U_{p-1}(x)`.
pub fn cheb_neumann_denominator<R: Ring>(p: u64, x: &R) -> R {
    transfer_power(x, p).trace_with(S)
}
