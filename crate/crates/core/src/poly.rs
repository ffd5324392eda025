//! Univariate polynomials and rational functions over `BigRational`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::special_fn::Ring;

/// Polynomial with ascending-degree coefficients and no trailing zeros. The
/// zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<BigRational>,
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `c x^k`.
    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// The indeterminate `x`.
    pub fn x() -> Self {
        Self::from_ints(&[0, 1])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `x^k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + to_f64(c);
        }
        acc
    }

    /// `x^d p(1/x)` for `d >= degree`, i.e. the coefficient list reversed and
    /// padded to length `d + 1`.
    pub fn reversed(&self, d: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); d + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            assert!(k <= d, "reversal degree below polynomial degree");
            coeffs[d - k] = c.clone();
        }
        Self::new(coeffs)
    }

    /// `p(c x)`.
    pub fn dilate(&self, c: &BigRational) -> Self {
        let mut pow = BigRational::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &pow);
            pow *= c;
        }
        Self::new(out)
    }

    /// `p(q(x))`.
    pub fn compose(&self, q: &Polynomial) -> Self {
        let mut acc = Polynomial::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * q.clone() + Polynomial::constant(c.clone());
        }
        acc
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Polynomial) -> (Polynomial, Polynomial) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return (Polynomial::zero(), Polynomial::zero());
        };
        if nd < dd {
            return (Polynomial::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = &rem[k + dd] / &lead;
            if !c.is_zero() {
                for (i, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + i] -= &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Polynomial::new(quot), Polynomial::new(rem))
    }

    /// Monic greatest common divisor; zero only when both inputs are zero.
    pub fn gcd(&self, other: &Polynomial) -> Polynomial {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        match a.leading().cloned() {
            Some(l) => a.scale(&l.recip()),
            None => a,
        }
    }

    /// Lowest common denominator of the coefficients and gcd of the numerators.
    fn integer_content(&self) -> (BigInt, BigInt) {
        let mut lcm = BigInt::one();
        for c in &self.coeffs {
            lcm = lcm.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(&(c.numer() * (&lcm / c.denom())));
        }
        (lcm, g)
    }

    /// Truncated power series of `self / den` through `x^order`; requires a
    /// nonzero constant term in `den`.
    pub fn series_div(&self, den: &Polynomial, order: usize) -> Vec<BigRational> {
        let d0 = den.coeff(0);
        assert!(!d0.is_zero(), "series division needs a unit constant term");
        let inv = d0.recip();
        let mut out: Vec<BigRational> = Vec::with_capacity(order + 1);
        for k in 0..=order {
            let mut acc = self.coeff(k);
            for i in 1..=k.min(den.coeffs.len().saturating_sub(1)) {
                acc -= &den.coeffs[i] * &out[k - i];
            }
            out.push(acc * &inv);
        }
        out
    }

    /// Render with the given variable name, ascending powers.
    pub fn display_with<'a>(&'a self, var: &'a str) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, var }
    }
}

pub(crate) fn to_f64(c: &BigRational) -> f64 {
    c.to_f64().unwrap_or_else(|| {
        let n = c.numer().to_f64().unwrap_or(f64::NAN);
        let d = c.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

impl Zero for Polynomial {
    fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for Polynomial {
    fn one() -> Self {
        Polynomial::from_ints(&[1])
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl Ring for Polynomial {
    fn from_int(v: i64) -> Self {
        Polynomial::from_ints(&[v])
    }
    fn halve(self) -> Self {
        self.scale(&BigRational::new(1.into(), 2.into()))
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a Polynomial,
    var: &'a str,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.poly.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if neg {
                f.write_str("-")?;
            } else if !first {
                f.write_str("+")?;
            }
            first = false;
            let mag = c.abs();
            let unit = mag.is_one();
            if k == 0 || !unit {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => f.write_str(self.var)?,
                _ => write!(f, "{}^{}", self.var, k)?,
            }
        }
        Ok(())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.display_with("x").fmt(f)
    }
}

/// Ratio of polynomials in canonical form: coprime, integer coefficients
/// whose joint content is 1, positive leading denominator coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    /// Build and canonicalise; panics on a zero denominator.
    pub fn new(num: Polynomial, den: Polynomial) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RationalFunction {
                num,
                den: Polynomial::one(),
            };
        }
        let g = num.gcd(&den);
        let (mut num, _) = num.div_rem(&g);
        let (mut den, _) = den.div_rem(&g);

        let (ln, _) = num.integer_content();
        let (ld, _) = den.integer_content();
        let lcm = ln.lcm(&ld);
        let lift = BigRational::from_integer(lcm);
        num = num.scale(&lift);
        den = den.scale(&lift);
        let (_, gn) = num.integer_content();
        let (_, gd) = den.integer_content();
        let mut content = BigRational::from_integer(gn.gcd(&gd));
        if den.leading().unwrap().is_negative() {
            content = -content;
        }
        let inv = content.recip();
        RationalFunction {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        Self::new(p, Polynomial::one())
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    /// Equality by cross-multiplication, valid for non-canonical inputs too.
    pub fn equivalent(&self, other: &RationalFunction) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }

    /// Taylor coefficients through `x^order`; requires the function to be
    /// regular at zero.
    pub fn taylor(&self, order: usize) -> Vec<BigRational> {
        self.num.series_div(&self.den, order)
    }

    pub fn eval(&self, x: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.num.eval_f64(x) / self.den.eval_f64(x)
    }

    pub fn add(&self, other: &RationalFunction) -> RationalFunction {
        RationalFunction::new(
            &(&self.num * &other.den) + &(&other.num * &self.den),
            &self.den * &other.den,
        )
    }

    pub fn sub(&self, other: &RationalFunction) -> RationalFunction {
        RationalFunction::new(
            &(&self.num * &other.den) - &(&other.num * &self.den),
            &self.den * &other.den,
        )
    }

    pub fn mul(&self, other: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &other.num, &self.den * &other.den)
    }

    pub fn scale(&self, c: &BigRational) -> RationalFunction {
        RationalFunction::new(self.num.scale(c), self.den.clone())
    }

    /// Canonical text `(<num>)/(<den>)` in the given variable.
    pub fn to_text(&self, var: &str) -> String {
        alloc::format!(
            "({})/({})",
            self.num.display_with(var),
            self.den.display_with(var)
        )
    }

    /// Parse the canonical text form produced by [`to_text`](Self::to_text).
    pub fn parse(text: &str, var: &str) -> Result<RationalFunction, ParsePolyError> {
        let text = text.trim();
        let (num, den) = match text.find(")/(") {
            Some(i) if text.starts_with('(') && text.ends_with(')') => {
                (&text[1..i], &text[i + 3..text.len() - 1])
            }
            _ => (text, "1"),
        };
        let num = parse_poly(num, var)?;
        let den = parse_poly(den, var)?;
        if den.is_zero() {
            return Err(ParsePolyError("zero denominator"));
        }
        Ok(RationalFunction::new(num, den))
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text("σ"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsePolyError(pub &'static str);

impl fmt::Display for ParsePolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cannot parse polynomial: {}", self.0)
    }
}

impl core::error::Error for ParsePolyError {}

/// Parse a sum of terms `c`, `c var`, `c var^k` with optional signs.
pub fn parse_poly(text: &str, var: &str) -> Result<Polynomial, ParsePolyError> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(ParsePolyError("empty"));
    }
    let mut terms: Vec<(bool, &str)> = Vec::new();
    let mut start = 0;
    let mut neg = false;
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if (b == b'+' || b == b'-') && i > 0 && bytes[i - 1] != b'^' {
            terms.push((neg, &s[start..i]));
            neg = b == b'-';
            start = i + 1;
        } else if i == 0 && (b == b'+' || b == b'-') {
            neg = b == b'-';
            start = 1;
        }
        i += 1;
    }
    terms.push((neg, &s[start..]));

    let mut acc = Polynomial::zero();
    for (neg, term) in terms {
        if term.is_empty() {
            return Err(ParsePolyError("empty term"));
        }
        let (coef_str, power) = match term.find(var) {
            None => (term, 0usize),
            Some(at) => {
                let rest = &term[at + var.len()..];
                let power = if rest.is_empty() {
                    1
                } else if let Some(exp) = rest.strip_prefix('^') {
                    exp.parse::<usize>()
                        .map_err(|_| ParsePolyError("bad exponent"))?
                } else {
                    return Err(ParsePolyError("unexpected text after variable"));
                };
                (&term[..at], power)
            }
        };
        let coef_str = coef_str.trim_end_matches('*');
        let mut c = if coef_str.is_empty() {
            BigRational::one()
        } else {
            BigRational::from_str(coef_str).map_err(|_| ParsePolyError("bad coefficient"))?
        };
        if neg {
            c = -c;
        }
        acc = &acc + &Polynomial::monomial(c, power);
    }
    Ok(acc)
}
