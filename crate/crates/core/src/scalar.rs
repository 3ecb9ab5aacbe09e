//! Exact Gaussian-rational scalars.
//!
//! Every spectral point handled by this crate is a complex number with
//! rational real and imaginary parts, kept in canonical reduced form so that
//! equality is structural. Magnitude comparisons go through `|z|^2`, which
//! stays inside the rationals; no floating point is used anywhere.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Errors from scalar arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
}

/// Error from parsing a scalar literal.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid scalar literal `{text}`: {reason}")]
pub struct ParseScalarError {
    pub text: String,
    pub reason: String,
}

/// A complex number with rational real and imaginary parts.
///
/// The parts are reduced fractions with positive denominators, so `==` and
/// `Ord` (lexicographic on real then imaginary part) are structural. The
/// `Ord` impl exists to give sets and reports a stable canonical order; it is
/// not a magnitude order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        GaussianRational::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    /// Builds `re_num/re_den + (im_num/im_den)i`. Panics on a zero denominator.
    pub fn from_parts(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        assert!(re_den != 0 && im_den != 0, "zero denominator");
        GaussianRational::new(
            BigRational::new(BigInt::from(re_num), BigInt::from(re_den)),
            BigRational::new(BigInt::from(im_num), BigInt::from(im_den)),
        )
    }

    pub fn zero() -> Self {
        GaussianRational::default()
    }

    pub fn one() -> Self {
        GaussianRational::from_int(1)
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Squared modulus `re^2 + im^2`, exact.
    pub fn abs_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// True when `|self| < 1`, decided on squared moduli.
    pub fn abs_sq_lt_one(&self) -> bool {
        self.abs_sq() < BigRational::one()
    }

    pub fn recip(&self) -> Result<Self, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        let d = self.abs_sq();
        Ok(GaussianRational::new(&self.re / &d, -&self.im / &d))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, ArithError> {
        Ok(self * &rhs.recip()?)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = GaussianRational::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        GaussianRational::from_int(n)
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-&self.re, -&self.im)
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: GaussianRational) -> GaussianRational {
                $trait::$method(&self, &rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        -&self
    }
}

fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussianRational {
    /// Canonical text form: `a/b` for real values, `a/b+c/di` or `a/b-c/di`
    /// otherwise, with reduced fractions and no internal whitespace.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", format_rational(&self.re));
        }
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(
            f,
            "{}{}{}i",
            format_rational(&self.re),
            sign,
            format_rational(&self.im.abs())
        )
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

struct ScalarCursor<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> ScalarCursor<'a> {
    fn new(text: &'a str) -> Self {
        ScalarCursor { text, bytes: text.as_bytes(), pos: 0 }
    }

    fn err(&self, reason: &str) -> ParseScalarError {
        ParseScalarError { text: self.text.to_string(), reason: reason.to_string() }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn integer(&mut self) -> Result<BigInt, ParseScalarError> {
        let mut start = self.pos;
        if matches!(self.peek(), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        let digits_from = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if self.pos == digits_from {
            return Err(self.err("expected digits"));
        }
        if self.bytes[start] == b'+' {
            start += 1;
        }
        self.text[start..self.pos]
            .parse::<BigInt>()
            .map_err(|e| self.err(&e.to_string()))
    }

    fn rational(&mut self) -> Result<BigRational, ParseScalarError> {
        let numer = self.integer()?;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let denom = self.integer()?;
            if denom.is_negative() || denom.is_zero() {
                return Err(self.err("denominator must be a positive integer"));
            }
            Ok(BigRational::new(numer, denom))
        } else {
            Ok(BigRational::from_integer(numer))
        }
    }
}

impl FromStr for GaussianRational {
    type Err = ParseScalarError;

    /// Parses the canonical text form: `rational`, or `rational sign rational i`
    /// with `rational := int ["/" nat]`, e.g. `-3`, `1/2`, `1/2+1/2i`, `2-3i`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cur = ScalarCursor::new(s.trim());
        let re = cur.rational()?;
        match cur.peek() {
            None => Ok(GaussianRational::new(re, BigRational::zero())),
            Some(b'+') | Some(b'-') => {
                let negate = cur.peek() == Some(b'-');
                cur.pos += 1;
                let mag = cur.rational()?;
                if cur.peek() != Some(b'i') {
                    return Err(cur.err("expected `i` after imaginary part"));
                }
                cur.pos += 1;
                if cur.pos != cur.bytes.len() {
                    return Err(cur.err("trailing characters"));
                }
                let im = if negate { -mag } else { mag };
                Ok(GaussianRational::new(re, im))
            }
            Some(_) => Err(cur.err("trailing characters")),
        }
    }
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// Index `n >= 1` with `p == base + scale * ratio^n`, if `p` lies on the
/// geometric sequence. Requires `scale != 0` and `0 < |ratio|^2 < 1`; under
/// those bounds the term moduli are strictly decreasing, so the scan stops as
/// soon as they drop below `|p - base|`. `p == base` is never a member (the
/// limit is not a sequence point).
pub fn geom_member(
    base: &GaussianRational,
    scale: &GaussianRational,
    ratio: &GaussianRational,
    p: &GaussianRational,
) -> Option<u32> {
    debug_assert!(!scale.is_zero() && !ratio.is_zero() && ratio.abs_sq_lt_one());
    let target = p - base;
    if target.is_zero() {
        return None;
    }
    let target_abs = target.abs_sq();
    let mut term = scale * ratio;
    let mut n = 1u32;
    loop {
        if term == target {
            return Some(n);
        }
        if term.abs_sq() < target_abs {
            return None;
        }
        term = &term * ratio;
        n += 1;
    }
}

/// Integer `k` with `x == ratio^k`, if one exists. Requires `x != 0` and
/// `0 < |ratio|^2 < 1`. `|ratio^k|` is strictly monotone in `k`, so at most
/// one exponent can match and the scan is bounded by the moduli.
pub fn ratio_power(x: &GaussianRational, ratio: &GaussianRational) -> Option<i64> {
    debug_assert!(!ratio.is_zero() && ratio.abs_sq_lt_one());
    if x.is_zero() {
        return None;
    }
    if x.is_one() {
        return Some(0);
    }
    let one = BigRational::one();
    let x_abs = x.abs_sq();
    if x_abs < one {
        let mut term = ratio.clone();
        let mut k = 1i64;
        loop {
            if &term == x {
                return Some(k);
            }
            if term.abs_sq() < x_abs {
                return None;
            }
            term = &term * ratio;
            k += 1;
        }
    } else if x_abs > one {
        let inv = x.recip().expect("nonzero");
        ratio_power(&inv, ratio).map(|k| -k)
    } else {
        // |x| == 1 but x != 1: positive powers have modulus < 1, negative > 1.
        None
    }
}
