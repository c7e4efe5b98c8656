//! Exact rational numbers.
//!
//! Values are kept in lowest terms with a positive denominator. Small values
//! live in a pair of `i128`s; any operation that would overflow is redone on
//! arbitrary-precision integers and demoted again when the result fits.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An exact rational number.
#[derive(Clone)]
pub struct Rational(Repr);

#[derive(Clone)]
enum Repr {
    Small { num: i128, den: i128 },
    Big { num: BigInt, den: BigInt },
}

/// Error returned when parsing a rational literal.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid integer `{0}` in rational literal")]
    InvalidInteger(String),
    #[error("zero denominator")]
    ZeroDenominator,
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    // Only called with |b| being a valid positive denominator, so the gcd
    // always fits in i128.
    gcd_u128(a.unsigned_abs(), b.unsigned_abs()) as i128
}

impl Rational {
    /// Builds `num / den` from machine integers. Panics on a zero denominator.
    pub fn new(num: i128, den: i128) -> Self {
        assert!(den != 0, "zero denominator");
        Self::reduce_small(num, den)
            .unwrap_or_else(|| Self::from_big_parts(BigInt::from(num), BigInt::from(den)))
    }

    /// Builds `num / den` from big integers. Panics on a zero denominator.
    pub fn from_big_parts(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let g = num.gcd(&den);
        let (mut num, mut den) = (num / &g, den / &g);
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        Self::demote(num, den)
    }

    pub fn integer(n: i128) -> Self {
        Rational(Repr::Small { num: n, den: 1 })
    }

    pub fn zero() -> Self {
        Self::integer(0)
    }

    pub fn one() -> Self {
        Self::integer(1)
    }

    fn reduce_small(num: i128, den: i128) -> Option<Self> {
        if num == i128::MIN || den == i128::MIN {
            return None;
        }
        let g = gcd_i128(num, den);
        let (mut num, mut den) = (num / g, den / g);
        if den < 0 {
            num = -num;
            den = -den;
        }
        Some(Rational(Repr::Small { num, den }))
    }

    fn demote(num: BigInt, den: BigInt) -> Self {
        match (num.to_i128(), den.to_i128()) {
            (Some(n), Some(d)) if n != i128::MIN => Rational(Repr::Small { num: n, den: d }),
            _ => Rational(Repr::Big { num, den }),
        }
    }

    fn big_parts(&self) -> (BigInt, BigInt) {
        match &self.0 {
            Repr::Small { num, den } => (BigInt::from(*num), BigInt::from(*den)),
            Repr::Big { num, den } => (num.clone(), den.clone()),
        }
    }

    /// Numerator in lowest terms (carries the sign).
    pub fn numer(&self) -> BigInt {
        self.big_parts().0
    }

    /// Denominator in lowest terms (always positive).
    pub fn denom(&self) -> BigInt {
        self.big_parts().1
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small { num: 0, .. })
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small { num, .. } => num.signum() as i32,
            Repr::Big { num, .. } => match num.sign() {
                Sign::Minus => -1,
                Sign::NoSign => 0,
                Sign::Plus => 1,
            },
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small { den, .. } => *den == 1,
            Repr::Big { den, .. } => den.is_one(),
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        match &self.0 {
            Repr::Small { num, den } => Self::new(*den, *num),
            Repr::Big { num, den } => Self::from_big_parts(den.clone(), num.clone()),
        }
    }

    /// Largest integer not greater than `self`.
    pub fn floor(&self) -> Self {
        match &self.0 {
            Repr::Small { num, den } => Self::integer(num.div_euclid(*den)),
            Repr::Big { num, den } => Self::demote(num.div_floor(den), BigInt::one()),
        }
    }

    /// Smallest integer not less than `self`.
    pub fn ceil(&self) -> Self {
        -(-self).floor()
    }

    /// Value as a machine integer when it is an integer that fits.
    pub fn to_i128(&self) -> Option<i128> {
        match &self.0 {
            Repr::Small { num, den: 1 } => Some(*num),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small { num, den } => *num as f64 / *den as f64,
            Repr::Big { num, den } => {
                num_rational::Ratio::new(num.clone(), den.clone()).to_f64().unwrap_or(f64::NAN)
            }
        }
    }

    /// Decimal rendering rounded half away from zero to `places` digits.
    pub fn to_decimal(&self, places: usize) -> String {
        let (num, den) = self.big_parts();
        let scale = BigInt::from(10u8).pow(places as u32);
        let scaled = num.abs() * &scale;
        let (mut q, r) = scaled.div_rem(&den);
        if r * 2u8 >= den {
            q += 1u8;
        }
        let digits = q.to_string();
        let (int_part, frac_part) = if places == 0 {
            (digits, String::new())
        } else if digits.len() > places {
            let (a, b) = digits.split_at(digits.len() - places);
            (a.to_string(), b.to_string())
        } else {
            ("0".to_string(), format!("{digits:0>places$}"))
        };
        let sign = if num.is_negative() && !q.is_zero() { "-" } else { "" };
        if places == 0 {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac_part}")
        }
    }

    /// `2^-bits` as an exact rational.
    pub fn pow2_neg(bits: u32) -> Self {
        Self::from_big_parts(BigInt::one(), BigInt::one() << bits)
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn big_binop(a: &Self, b: &Self, op: impl Fn(BigInt, BigInt, BigInt, BigInt) -> (BigInt, BigInt)) -> Self {
        let (an, ad) = a.big_parts();
        let (bn, bd) = b.big_parts();
        let (n, d) = op(an, ad, bn, bd);
        Self::from_big_parts(n, d)
    }

    fn add_impl(a: &Self, b: &Self) -> Self {
        if let (Repr::Small { num: an, den: ad }, Repr::Small { num: bn, den: bd }) = (&a.0, &b.0) {
            let fast = if ad == bd {
                an.checked_add(*bn).and_then(|n| Self::reduce_small(n, *ad))
            } else {
                let g = gcd_i128(*ad, *bd);
                let (ad1, bd1) = (ad / g, bd / g);
                an.checked_mul(bd1)
                    .zip(bn.checked_mul(ad1))
                    .and_then(|(x, y)| x.checked_add(y))
                    .zip(ad.checked_mul(bd1))
                    .and_then(|(n, d)| Self::reduce_small(n, d))
            };
            if let Some(r) = fast {
                return r;
            }
        }
        Self::big_binop(a, b, |an, ad, bn, bd| (an * &bd + bn * &ad, ad * bd))
    }

    fn mul_impl(a: &Self, b: &Self) -> Self {
        if let (Repr::Small { num: an, den: ad }, Repr::Small { num: bn, den: bd }) = (&a.0, &b.0) {
            if *an == 0 || *bn == 0 {
                return Self::zero();
            }
            let g1 = gcd_i128(*an, *bd);
            let g2 = gcd_i128(*bn, *ad);
            let fast = (an / g1)
                .checked_mul(bn / g2)
                .zip((ad / g2).checked_mul(bd / g1))
                .and_then(|(n, d)| Self::reduce_small(n, d));
            if let Some(r) = fast {
                return r;
            }
        }
        Self::big_binop(a, b, |an, ad, bn, bd| (an * bn, ad * bd))
    }

    fn div_impl(a: &Self, b: &Self) -> Self {
        Self::mul_impl(a, &b.recip())
    }

    fn cmp_impl(a: &Self, b: &Self) -> Ordering {
        if let (Repr::Small { num: an, den: ad }, Repr::Small { num: bn, den: bd }) = (&a.0, &b.0) {
            if ad == bd {
                return an.cmp(bn);
            }
            if let (Some(l), Some(r)) = (an.checked_mul(*bd), bn.checked_mul(*ad)) {
                return l.cmp(&r);
            }
        }
        let (an, ad) = a.big_parts();
        let (bn, bd) = b.big_parts();
        (an * bd).cmp(&(bn * ad))
    }
}

impl Default for Rational {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Self::integer(n as i128)
    }
}

impl From<i32> for Rational {
    fn from(n: i32) -> Self {
        Self::integer(n as i128)
    }
}

impl From<u64> for Rational {
    fn from(n: u64) -> Self {
        Self::integer(n as i128)
    }
}

impl From<usize> for Rational {
    fn from(n: usize) -> Self {
        Self::integer(n as i128)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Self::demote(n, BigInt::one())
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => a == c && b == d,
            // Canonical form: a value that fits is never stored as Big.
            (Repr::Big { num: a, den: b }, Repr::Big { num: c, den: d }) => a == c && b == d,
            _ => false,
        }
    }
}

impl Eq for Rational {}

impl Hash for Rational {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small { num, den } => {
                num.hash(state);
                den.hash(state);
            }
            Repr::Big { num, den } => {
                num.hash(state);
                den.hash(state);
            }
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        Self::cmp_impl(self, other)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match &self.0 {
            Repr::Small { num, den } => Rational::new(-*num, *den),
            Repr::Big { num, den } => Rational::demote(-num.clone(), den.clone()),
        }
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $imp:ident, $assign_trait:ident, $assign_method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational::$imp(self, rhs)
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational::$imp(&self, &rhs)
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational::$imp(&self, rhs)
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational::$imp(self, &rhs)
            }
        }
        impl $assign_trait<&Rational> for Rational {
            fn $assign_method(&mut self, rhs: &Rational) {
                *self = Rational::$imp(self, rhs);
            }
        }
        impl $assign_trait<Rational> for Rational {
            fn $assign_method(&mut self, rhs: Rational) {
                *self = Rational::$imp(self, &rhs);
            }
        }
    };
}

fn sub_impl(a: &Rational, b: &Rational) -> Rational {
    Rational::add_impl(a, &-b)
}

impl Rational {
    fn sub_impl(a: &Self, b: &Self) -> Self {
        sub_impl(a, b)
    }
}

forward_binop!(Add, add, add_impl, AddAssign, add_assign);
forward_binop!(Sub, sub, sub_impl, SubAssign, sub_assign);
forward_binop!(Mul, mul, mul_impl, MulAssign, mul_assign);
forward_binop!(Div, div, div_impl, DivAssign, div_assign);

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small { num, den: 1 } => write!(f, "{num}"),
            Repr::Small { num, den } => write!(f, "{num}/{den}"),
            Repr::Big { num, den } if den.is_one() => write!(f, "{num}"),
            Repr::Big { num, den } => write!(f, "{num}/{den}"),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_int(s: &str) -> Result<BigInt, ParseRationalError> {
    let t = s.trim();
    let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseRationalError::InvalidInteger(s.trim().to_string()));
    }
    BigInt::from_str(t).map_err(|_| ParseRationalError::InvalidInteger(t.to_string()))
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    /// Accepts `p/q` or a plain integer `p`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParseRationalError::Empty);
        }
        match s.split_once('/') {
            Some((n, d)) => {
                let num = parse_int(n)?;
                let den = parse_int(d)?;
                if den.is_zero() {
                    return Err(ParseRationalError::ZeroDenominator);
                }
                Ok(Rational::from_big_parts(num, den))
            }
            None => Ok(Rational::from(parse_int(s)?)),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Shorthand for building a rational in tests and examples: `q(3, 4)` is 3/4.
pub fn q(num: i128, den: i128) -> Rational {
    Rational::new(num, den)
}
