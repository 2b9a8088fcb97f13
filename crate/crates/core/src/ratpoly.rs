//! Dense univariate polynomials with exact rational coefficients.
//!
//! Coefficients are stored lowest degree first and kept in canonical form:
//! the leading coefficient is non-zero unless the polynomial is zero.
//! Besides ring arithmetic this module carries the tools the verifier
//! needs: affine substitution, exact division, square-free decomposition
//! (Yun), Sturm chains, and the symmetry / even-odd reductions used to
//! move a root-on-a-line question onto the real axis.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Rational = BigRational;

/// Shorthand for the rational `n/d`.
pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("affine substitution with zero scale")]
    ZeroScale,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("inexact division: remainder {0}")]
    Remainder(String),
    #[error("polynomial is not square-free")]
    NotSquareFree,
    #[error("empty interval: lower end must be below upper end")]
    EmptyInterval,
    #[error("polynomial is not symmetric about {0}")]
    NotSymmetric(String),
    #[error("operation needs a polynomial of degree at least {0}")]
    DegreeTooLow(usize),
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RatPoly {
    coeffs: Vec<Rational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `a*z + b`
    pub fn linear(a: Rational, b: Rational) -> Self {
        Self::new(vec![b, a])
    }

    pub fn x() -> Self {
        Self::linear(Rational::one(), Rational::zero())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, z: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn eval_f64(&self, z: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * z + to_f64(c))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading();
        self.scale(&(Rational::one() / lc))
    }

    /// Returns `p(a*z + b)`.
    pub fn compose_affine(&self, a: &Rational, b: &Rational) -> Result<Self, PolyError> {
        if a.is_zero() {
            return Err(PolyError::ZeroScale);
        }
        // Horner in the substituted variable.
        let lin = Self::linear(a.clone(), b.clone());
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &Self::constant(c.clone());
        }
        Ok(acc)
    }

    /// `p(z + shift)`.
    pub fn shift(&self, shift: &Rational) -> Self {
        self.compose_affine(&Rational::one(), shift)
            .expect("unit scale is non-zero")
    }

    pub fn div_rem(&self, q: &Self) -> Result<(Self, Self), PolyError> {
        if q.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let dq = q.deg();
        let lq = q.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() < q.coeffs.len() {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![Rational::zero(); rem.len() - dq];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dq] / &lq;
            if !c.is_zero() {
                for (j, qc) in q.coeffs.iter().enumerate() {
                    rem[i + j] -= &c * qc;
                }
            }
            quot[i] = c;
        }
        rem.truncate(dq);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Exact quotient; a non-zero remainder is an error.
    pub fn exact_div(&self, q: &Self) -> Result<Self, PolyError> {
        let (quot, rem) = self.div_rem(q)?;
        if !rem.is_zero() {
            return Err(PolyError::Remainder(rem.to_string()));
        }
        Ok(quot)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("b is non-zero");
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Yun's square-free decomposition.
    ///
    /// Returns monic, square-free, pairwise coprime factors with their
    /// multiplicities; the product of `factor^mult` equals `self` divided by
    /// its leading coefficient. Constant input yields an empty list.
    pub fn squarefree_parts(&self) -> Vec<(RatPoly, u32)> {
        let mut out = Vec::new();
        if self.deg() == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let mut a = f.gcd(&df);
        let mut b = f.exact_div(&a).expect("gcd divides f");
        let mut c = df.exact_div(&a).expect("gcd divides f'");
        let mut d = &c - &b.derivative();
        let mut mult = 1u32;
        while b.deg() > 0 {
            a = b.gcd(&d);
            if a.deg() > 0 {
                out.push((a.clone(), mult));
            }
            b = b.exact_div(&a).expect("gcd divides b");
            c = d.exact_div(&a).expect("gcd divides d");
            d = &c - &b.derivative();
            mult += 1;
        }
        out
    }

    pub fn is_squarefree(&self) -> bool {
        self.deg() == 0 || self.gcd(&self.derivative()).deg() == 0
    }

    /// Canonical Sturm chain `p, p', -rem(p_{i-1}, p_i), ...`.
    pub fn sturm_chain(&self) -> Vec<RatPoly> {
        let mut chain = vec![self.clone()];
        let d = self.derivative();
        if d.is_zero() {
            return chain;
        }
        chain.push(d);
        loop {
            let n = chain.len();
            let (_, r) = chain[n - 2].div_rem(&chain[n - 1]).expect("non-zero");
            if r.is_zero() {
                break;
            }
            chain.push(-r);
        }
        chain
    }

    /// Number of distinct real roots in `(lo, hi]` via Sturm's theorem.
    ///
    /// A root exactly at `hi` is counted, one exactly at `lo` is not.
    pub fn sturm_count(&self, lo: &Bound, hi: &Bound) -> Result<SturmCertificate, PolyError> {
        if !(lo < hi) {
            return Err(PolyError::EmptyInterval);
        }
        if self.is_zero() || !self.is_squarefree() {
            return Err(PolyError::NotSquareFree);
        }
        let chain = self.sturm_chain();
        let var_lo = sign_variations(&chain, lo);
        let var_hi = sign_variations(&chain, hi);
        debug_assert!(var_lo >= var_hi);
        Ok(SturmCertificate {
            lo: lo.clone(),
            hi: hi.clone(),
            chain_len: chain.len(),
            var_lo,
            var_hi,
            count: var_lo - var_hi,
        })
    }

    /// Center `c` and sign `s = (-1)^deg` with `p(z) = s * p(2c - z)`, if any.
    pub fn symmetry_center(&self) -> Option<(Rational, i32)> {
        let n = self.degree()?;
        if n == 0 {
            return None;
        }
        let c = -self.coeff(n - 1) / (int(n as i64) * self.leading());
        let sign = if n % 2 == 0 { 1 } else { -1 };
        let mirrored = self
            .compose_affine(&int(-1), &(&c * int(2)))
            .expect("scale -1");
        let rhs = if sign == 1 { mirrored } else { -mirrored };
        (rhs == *self).then_some((c, sign))
    }

    /// Writes `p(w + center) = w^eps * q(w^2)`.
    pub fn even_odd_split(&self, center: &Rational) -> Result<(u32, RatPoly), PolyError> {
        let r = self.shift(center);
        let n = r.deg();
        let eps = (n % 2) as u32;
        let mut q = Vec::with_capacity(n / 2 + 1);
        for (i, c) in r.coeffs.iter().enumerate() {
            if i % 2 != eps as usize {
                if !c.is_zero() {
                    return Err(PolyError::NotSymmetric(fmt_rational(center)));
                }
            } else {
                q.push(c.clone());
            }
        }
        Ok((eps, RatPoly::new(q)))
    }

    /// Inverse of [`RatPoly::even_odd_split`].
    pub fn from_even_odd(eps: u32, q: &RatPoly, center: &Rational) -> RatPoly {
        let mut coeffs = vec![Rational::zero(); 2 * q.coeffs.len() + eps as usize];
        for (j, c) in q.coeffs.iter().enumerate() {
            coeffs[2 * j + eps as usize] = c.clone();
        }
        RatPoly::new(coeffs).shift(&-center.clone())
    }

    /// Every root real and inside `(lo, hi]`, counting each square-free
    /// part separately so that repeated roots are handled.
    pub fn all_roots_in(&self, lo: &Bound, hi: &Bound) -> Result<bool, PolyError> {
        for (f, _) in self.squarefree_parts() {
            let cert = f.sturm_count(lo, hi)?;
            if cert.count != f.deg() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Sign variations of a Sturm chain at a point, zeros dropped.
fn sign_variations(chain: &[RatPoly], at: &Bound) -> usize {
    let signs = chain.iter().map(|p| match at {
        Bound::NegInf => {
            let s = p.leading().signum();
            if p.deg() % 2 == 1 {
                -s
            } else {
                s
            }
        }
        Bound::PosInf => p.leading().signum(),
        Bound::Finite(x) => p.eval(x).signum(),
    });
    let mut prev: Option<Rational> = None;
    let mut count = 0;
    for s in signs {
        if s.is_zero() {
            continue;
        }
        if let Some(p) = &prev {
            if *p != s {
                count += 1;
            }
        }
        prev = Some(s);
    }
    count
}

/// An interval endpoint on the extended real line.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Bound {
    NegInf,
    Finite(#[serde(with = "rational_str")] Rational),
    PosInf,
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::NegInf => write!(f, "-inf"),
            Bound::PosInf => write!(f, "+inf"),
            Bound::Finite(x) => write!(f, "{}", fmt_rational(x)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SturmCertificate {
    pub lo: Bound,
    pub hi: Bound,
    pub chain_len: usize,
    pub var_lo: usize,
    pub var_hi: usize,
    pub count: usize,
}

pub fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

pub fn to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or_else(|| {
        // numerator or denominator beyond f64 range: scale down by bit length
        let nb = q.numer().bits() as i64;
        let db = q.denom().bits() as i64;
        let shift = (nb.max(db) - 1000).max(0) as u32;
        let n = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Serde adapter rendering rationals as `"p/q"` strings.
pub mod rational_str {
    use super::{fmt_rational, parse_rational, Rational};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).ok_or_else(|| D::Error::custom(format!("bad rational {s:?}")))
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = i == 0 || !a.is_one();
            if show_coeff {
                write!(f, "{}", fmt_rational(&a))?;
            }
            match i {
                0 => {}
                1 => write!(f, "{}z", if show_coeff { "*" } else { "" })?,
                _ => write!(f, "{}z^{}", if show_coeff { "*" } else { "" }, i)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatPoly({self})")
    }
}

impl Add for &RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }
}

impl Neg for RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RatPoly {
            type Output = RatPoly;
            fn $m(self, rhs: RatPoly) -> RatPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl std::iter::Product for RatPoly {
    fn product<I: Iterator<Item = RatPoly>>(iter: I) -> RatPoly {
        iter.fold(RatPoly::one(), |acc, p| &acc * &p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> RatPoly {
        RatPoly::from_ints(c)
    }

    /// C(z + a, 3) as a cubic in z.
    fn binom3(a: i64) -> RatPoly {
        let f = |s| RatPoly::linear(int(1), int(a - s));
        (f(0) * f(1) * f(2)).scale(&rat(1, 6))
    }

    #[test]
    fn arithmetic() {
        assert_eq!(p(&[1, 1]) * p(&[-1, 1]), p(&[-1, 0, 1]));
        let q = p(&[3, -2, 7]);
        assert!((&q - &q).is_zero());
        // quadric surface: C(z+3,3) - C(z+1,3) = (z+1)^2
        assert_eq!(binom3(3) - binom3(1), p(&[1, 2, 1]));
    }

    #[test]
    fn affine_substitution() {
        assert_eq!(
            p(&[0, 0, 1]).compose_affine(&int(1), &int(-1)).unwrap(),
            p(&[1, -2, 1])
        );
        assert_eq!(
            p(&[1, 2, 1]).compose_affine(&int(2), &int(0)).unwrap(),
            p(&[1, 4, 4])
        );
        assert_eq!(
            RatPoly::x().compose_affine(&int(1), &rat(-5, 7)).unwrap(),
            RatPoly::linear(int(1), rat(-5, 7))
        );
        assert_eq!(
            p(&[1, 1]).compose_affine(&int(0), &int(1)),
            Err(PolyError::ZeroScale)
        );
    }

    #[test]
    fn exact_division() {
        assert_eq!(p(&[-1, 0, 1]).exact_div(&p(&[-1, 1])).unwrap(), p(&[1, 1]));
        assert_eq!(p(&[1, 4, 4]).exact_div(&p(&[1, 2])).unwrap(), p(&[1, 2]));
        assert!(matches!(
            p(&[1, 0, 1]).exact_div(&p(&[1, 1])),
            Err(PolyError::Remainder(r)) if r == "2"
        ));
        assert_eq!(
            p(&[1]).exact_div(&RatPoly::zero()),
            Err(PolyError::DivisionByZero)
        );
    }

    #[test]
    fn squarefree() {
        assert_eq!(p(&[1, 2, 1]).squarefree_parts(), vec![(p(&[1, 1]), 2)]);
        assert_eq!(p(&[-1, 0, 1]).squarefree_parts(), vec![(p(&[-1, 0, 1]), 1)]);
        let mut parts = p(&[0, 0, 1, 1]).squarefree_parts();
        parts.sort_by_key(|(_, m)| *m);
        assert_eq!(parts, vec![(p(&[1, 1]), 1), (p(&[0, 1]), 2)]);
        // leading constant dropped
        assert_eq!(p(&[3, 3]).squarefree_parts(), vec![(p(&[1, 1]), 1)]);
    }

    #[test]
    fn sturm() {
        let c = p(&[-1, 0, 1])
            .sturm_count(&Bound::NegInf, &Bound::Finite(int(0)))
            .unwrap();
        assert_eq!(c.count, 1);
        assert_eq!(c.var_lo - c.var_hi, 1);
        let c = p(&[1, 0, 1])
            .sturm_count(&Bound::NegInf, &Bound::PosInf)
            .unwrap();
        assert_eq!(c.count, 0);
        let sq = RatPoly::new(vec![rat(1, 4), int(1), int(1)]);
        assert_eq!(
            sq.sturm_count(&Bound::NegInf, &Bound::PosInf),
            Err(PolyError::NotSquareFree)
        );
        assert_eq!(
            p(&[1, 1]).sturm_count(&Bound::PosInf, &Bound::NegInf),
            Err(PolyError::EmptyInterval)
        );
    }

    #[test]
    fn sturm_endpoint_convention() {
        // roots -1 and 1
        let f = p(&[-1, 0, 1]);
        let at = |a, b| {
            f.sturm_count(&Bound::Finite(int(a)), &Bound::Finite(int(b)))
                .unwrap()
                .count
        };
        assert_eq!(at(-1, 1), 1);
        assert_eq!(at(-2, -1), 1);
        assert_eq!(at(1, 2), 0);
        assert_eq!(at(-2, 2), 2);
    }

    #[test]
    fn symmetry() {
        assert_eq!(p(&[1, 2, 1]).symmetry_center(), Some((int(-1), 1)));
        assert_eq!(p(&[-1, 2]).symmetry_center(), Some((rat(1, 2), -1)));
        assert_eq!(p(&[1, 1, 1]).symmetry_center(), Some((rat(-1, 2), 1)));
        assert_eq!(p(&[2, 3, 1]).symmetry_center(), Some((rat(-3, 2), 1)));
        assert_eq!(p(&[1, 0, 1, 1]).symmetry_center(), None);
        assert_eq!(p(&[5]).symmetry_center(), None);
    }

    #[test]
    fn even_odd() {
        let (e, q) = p(&[1, 1, 1]).even_odd_split(&rat(-1, 2)).unwrap();
        assert_eq!((e, q), (0, RatPoly::new(vec![rat(3, 4), int(1)])));
        let (e, q) = p(&[1, 4, 4]).even_odd_split(&rat(-1, 2)).unwrap();
        assert_eq!((e, q), (0, p(&[0, 4])));
        let (e, q) = p(&[0, 0, 0, 1]).even_odd_split(&int(0)).unwrap();
        assert_eq!((e, q), (1, p(&[0, 1])));
        assert!(p(&[2, 3, 1]).even_odd_split(&int(0)).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(p(&[1, -2, 1]).to_string(), "z^2 - 2*z + 1");
        assert_eq!(RatPoly::linear(int(1), rat(-5, 7)).to_string(), "z - 5/7");
        assert_eq!(RatPoly::zero().to_string(), "0");
    }

    #[test]
    fn rational_strings() {
        assert_eq!(fmt_rational(&rat(-6, 4)), "-3/2");
        assert_eq!(parse_rational("-3/2"), Some(rat(-3, 2)));
        assert_eq!(parse_rational("7"), Some(int(7)));
        assert_eq!(parse_rational("1/0"), None);
    }
}
