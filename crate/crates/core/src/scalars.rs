//! Scalar backends: exact arithmetic in Q(sqrt 2) and an f64 fallback.
//!
//! Every model is built over exactly one backend. Generic code works through
//! the [`Scalar`] trait; the two implementations never meet in one computation.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default relative tolerance of the float backend.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("square root of {0} is not representable on this backend")]
    NotRepresentable(String),
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Exact => write!(f, "exact"),
            Backend::Float => write!(f, "float"),
        }
    }
}

impl FromStr for Backend {
    type Err = ScalarError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Backend::Exact),
            "float" => Ok(Backend::Float),
            other => Err(ScalarError::Parse(other.to_string())),
        }
    }
}

/// Field operations shared by both backends.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
{
    const BACKEND: Backend;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_rational(r: &BigRational) -> Self;

    fn frac(n: i64, d: i64) -> Self {
        Self::from_rational(&BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    /// Literal zero (no tolerance).
    fn is_zero(&self) -> bool;

    /// Zero up to the backend tolerance: exact equality on the exact
    /// backend, `|x| <= tol * max(1, scale)` on floats.
    fn is_negligible(&self, scale: f64, tol: f64) -> bool;

    fn mul_ref(&self, other: &Self) -> Self;

    /// `self += a * b`
    fn add_mul(&mut self, a: &Self, b: &Self) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        *self += a.mul_ref(b);
    }

    fn inv(&self) -> Result<Self, ScalarError>;

    fn div(&self, other: &Self) -> Result<Self, ScalarError> {
        Ok(self.mul_ref(&other.inv()?))
    }

    fn abs(&self) -> Self;

    /// Total order on values (floats compare with NaN treated as equal).
    fn cmp_value(&self, other: &Self) -> Ordering;

    fn signum(&self) -> i32 {
        match self.cmp_value(&Self::zero()) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    fn sqrt_if_representable(&self) -> Result<Self, ScalarError>;

    fn to_f64(&self) -> f64;

    fn to_text(&self) -> String;

    fn parse_text(s: &str) -> Result<Self, ScalarError>;

    /// Value used for "largest pivot" decisions; exact elimination only
    /// needs nonzero pivots so it returns 0 or 1 there.
    fn pivot_weight(&self) -> f64;
}

/// Element `a + b*sqrt(2)` of Q(sqrt 2).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QSqrt2 {
    pub a: BigRational,
    pub b: BigRational,
}

impl QSqrt2 {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        QSqrt2 { a, b }
    }

    pub fn rational(a: BigRational) -> Self {
        QSqrt2 { a, b: BigRational::zero() }
    }

    pub fn sqrt2() -> Self {
        QSqrt2 { a: BigRational::zero(), b: BigRational::one() }
    }

    pub fn from_parts(an: i64, ad: i64, bn: i64, bd: i64) -> Self {
        QSqrt2 {
            a: BigRational::new(an.into(), ad.into()),
            b: BigRational::new(bn.into(), bd.into()),
        }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Galois conjugate `a - b*sqrt(2)`.
    pub fn conj(&self) -> Self {
        QSqrt2 { a: self.a.clone(), b: -self.b.clone() }
    }

    /// Field norm `a^2 - 2 b^2`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - BigRational::from_integer(2.into()) * &self.b * &self.b
    }

    fn sign(&self) -> i32 {
        let sa = sgn(&self.a);
        let sb = sgn(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // opposite signs: compare a^2 with 2 b^2 (never equal for nonzero parts)
        let a2 = &self.a * &self.a;
        let b2 = BigRational::from_integer(2.into()) * &self.b * &self.b;
        if a2 > b2 {
            sa
        } else {
            sb
        }
    }
}

fn sgn(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer();
    let d = r.denom();
    let sn = n.sqrt();
    let sd = d.sqrt();
    if &(&sn * &sn) == n && &(&sd * &sd) == d {
        Some(BigRational::new(sn, sd))
    } else {
        None
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn parse_rational(s: &str) -> Result<BigRational, ScalarError> {
    let err = || ScalarError::Parse(s.to_string());
    let t = s.strip_prefix('+').unwrap_or(s);
    if t.is_empty() {
        return Err(err());
    }
    if let Some((int, frac)) = t.split_once('.') {
        if t.contains('/') {
            return Err(err());
        }
        let neg = int.starts_with('-');
        let int_digits = int.trim_start_matches('-');
        if !int_digits.chars().all(|c| c.is_ascii_digit())
            || !frac.chars().all(|c| c.is_ascii_digit())
            || (int_digits.is_empty() && frac.is_empty())
        {
            return Err(err());
        }
        let digits = format!("{}{}", int_digits, frac);
        let n = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| err())?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let v = BigRational::new(n, d);
        return Ok(if neg { -v } else { v });
    }
    BigRational::from_str(t).map_err(|_| err())
}

impl fmt::Display for QSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", fmt_rational(&self.a)),
            (true, false) => write!(f, "{}*sqrt2", fmt_rational(&self.b)),
            (false, false) => {
                let sign = if self.b.is_negative() { '-' } else { '+' };
                write!(f, "{}{}{}*sqrt2", fmt_rational(&self.a), sign, fmt_rational(&self.b.abs()))
            }
        }
    }
}

impl fmt::Debug for QSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for QSqrt2 {
    type Err = ScalarError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let err = || ScalarError::Parse(s.to_string());
        if t.is_empty() {
            return Err(err());
        }
        let Some(body) = t.strip_suffix("sqrt2") else {
            return Ok(QSqrt2::rational(parse_rational(&t)?));
        };
        let body = body.strip_suffix('*').unwrap_or(body);
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .last();
        let (rat, coef) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("", body),
        };
        let a = if rat.is_empty() { BigRational::zero() } else { parse_rational(rat)? };
        let b = match coef {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            c => parse_rational(c)?,
        };
        Ok(QSqrt2 { a, b })
    }
}

impl Add for QSqrt2 {
    type Output = QSqrt2;
    fn add(self, o: QSqrt2) -> QSqrt2 {
        QSqrt2 { a: self.a + o.a, b: self.b + o.b }
    }
}
impl<'a> Add<&'a QSqrt2> for QSqrt2 {
    type Output = QSqrt2;
    fn add(self, o: &QSqrt2) -> QSqrt2 {
        QSqrt2 { a: self.a + &o.a, b: self.b + &o.b }
    }
}
impl Sub for QSqrt2 {
    type Output = QSqrt2;
    fn sub(self, o: QSqrt2) -> QSqrt2 {
        QSqrt2 { a: self.a - o.a, b: self.b - o.b }
    }
}
impl<'a> Sub<&'a QSqrt2> for QSqrt2 {
    type Output = QSqrt2;
    fn sub(self, o: &QSqrt2) -> QSqrt2 {
        QSqrt2 { a: self.a - &o.a, b: self.b - &o.b }
    }
}
impl Mul for QSqrt2 {
    type Output = QSqrt2;
    fn mul(self, o: QSqrt2) -> QSqrt2 {
        self.mul_ref(&o)
    }
}
impl<'a> Mul<&'a QSqrt2> for QSqrt2 {
    type Output = QSqrt2;
    fn mul(self, o: &QSqrt2) -> QSqrt2 {
        self.mul_ref(o)
    }
}
impl Neg for QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        QSqrt2 { a: -self.a, b: -self.b }
    }
}
impl AddAssign for QSqrt2 {
    fn add_assign(&mut self, o: QSqrt2) {
        self.a += o.a;
        self.b += o.b;
    }
}
impl<'a> AddAssign<&'a QSqrt2> for QSqrt2 {
    fn add_assign(&mut self, o: &QSqrt2) {
        self.a += &o.a;
        self.b += &o.b;
    }
}
impl SubAssign for QSqrt2 {
    fn sub_assign(&mut self, o: QSqrt2) {
        self.a -= o.a;
        self.b -= o.b;
    }
}
impl<'a> SubAssign<&'a QSqrt2> for QSqrt2 {
    fn sub_assign(&mut self, o: &QSqrt2) {
        self.a -= &o.a;
        self.b -= &o.b;
    }
}
impl MulAssign for QSqrt2 {
    fn mul_assign(&mut self, o: QSqrt2) {
        *self = self.mul_ref(&o);
    }
}

impl Scalar for QSqrt2 {
    const BACKEND: Backend = Backend::Exact;

    fn zero() -> Self {
        QSqrt2::default()
    }
    fn one() -> Self {
        QSqrt2::rational(BigRational::one())
    }
    fn from_i64(v: i64) -> Self {
        QSqrt2::rational(BigRational::from_integer(v.into()))
    }
    fn from_rational(r: &BigRational) -> Self {
        QSqrt2::rational(r.clone())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn is_negligible(&self, _scale: f64, _tol: f64) -> bool {
        self.is_zero()
    }
    fn mul_ref(&self, o: &Self) -> Self {
        if self.b.is_zero() && o.b.is_zero() {
            return QSqrt2::rational(&self.a * &o.a);
        }
        let two = BigRational::from_integer(2.into());
        QSqrt2 {
            a: &self.a * &o.a + two * &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
        }
    }
    fn add_mul(&mut self, x: &Self, y: &Self) {
        if x.is_zero() || y.is_zero() {
            return;
        }
        if x.b.is_zero() && y.b.is_zero() {
            self.a += &x.a * &y.a;
            return;
        }
        *self += x.mul_ref(y);
    }
    fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if self.b.is_zero() {
            return Ok(QSqrt2::rational(self.a.recip()));
        }
        let n = self.norm();
        Ok(QSqrt2 { a: &self.a / &n, b: -(&self.b / &n) })
    }
    fn abs(&self) -> Self {
        if self.sign() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }
    fn cmp_value(&self, o: &Self) -> Ordering {
        (self.clone() - o).sign().cmp(&0)
    }
    fn sqrt_if_representable(&self) -> Result<Self, ScalarError> {
        let fail = || ScalarError::NotRepresentable(self.to_string());
        if self.is_zero() {
            return Ok(Self::zero());
        }
        if self.sign() < 0 {
            return Err(fail());
        }
        if self.b.is_zero() {
            if let Some(r) = rational_sqrt(&self.a) {
                return Ok(QSqrt2::rational(r));
            }
            let half = &self.a / BigRational::from_integer(2.into());
            if let Some(r) = rational_sqrt(&half) {
                return Ok(QSqrt2 { a: BigRational::zero(), b: r });
            }
            return Err(fail());
        }
        // (p + q sqrt2)^2 = p^2 + 2q^2 + 2pq sqrt2
        let disc = rational_sqrt(&self.norm()).ok_or_else(fail)?;
        let two = BigRational::from_integer(2.into());
        for p2 in [(&self.a + &disc) / &two, (&self.a - &disc) / &two] {
            if let Some(p) = rational_sqrt(&p2) {
                if p.is_zero() {
                    continue;
                }
                let q = &self.b / (&two * &p);
                let cand = QSqrt2 { a: p, b: q };
                let cand = cand.abs();
                if cand.mul_ref(&cand) == *self {
                    return Ok(cand);
                }
            }
        }
        Err(fail())
    }
    fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * std::f64::consts::SQRT_2
    }
    fn to_text(&self) -> String {
        self.to_string()
    }
    fn parse_text(s: &str) -> Result<Self, ScalarError> {
        s.parse()
    }
    fn pivot_weight(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            1.0
        }
    }
}

impl Scalar for f64 {
    const BACKEND: Backend = Backend::Float;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_rational(r: &BigRational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn is_negligible(&self, scale: f64, tol: f64) -> bool {
        f64::abs(*self) <= tol * f64::abs(scale).max(1.0)
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn add_mul(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
    fn inv(&self) -> Result<Self, ScalarError> {
        if *self == 0.0 {
            Err(ScalarError::DivisionByZero)
        } else {
            Ok(1.0 / self)
        }
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn cmp_value(&self, o: &Self) -> Ordering {
        self.partial_cmp(o).unwrap_or(Ordering::Equal)
    }
    fn sqrt_if_representable(&self) -> Result<Self, ScalarError> {
        if *self < 0.0 {
            Err(ScalarError::NotRepresentable(self.to_string()))
        } else {
            Ok(self.sqrt())
        }
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn to_text(&self) -> String {
        format!("{:?}", self)
    }
    fn parse_text(s: &str) -> Result<Self, ScalarError> {
        let t = s.trim();
        if let Ok(v) = t.parse::<f64>() {
            return Ok(v);
        }
        t.parse::<QSqrt2>().map(|q| q.to_f64())
    }
    fn pivot_weight(&self) -> f64 {
        f64::abs(*self)
    }
}

/// Largest absolute entry of `xs` (zero for an empty slice). On the exact
/// backend the result is the exact maximum.
pub fn residual_norm<S: Scalar>(xs: &[S]) -> S {
    let mut m = S::zero();
    for x in xs {
        let a = x.abs();
        if a.cmp_value(&m) == Ordering::Greater {
            m = a;
        }
    }
    m
}

/// Runtime tolerance setting used by float-backend checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rel: DEFAULT_TOL }
    }
}

impl Tolerance {
    pub fn accepts<S: Scalar>(&self, residual: &S, scale: f64) -> bool {
        residual.is_negligible(scale, self.rel)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> QSqrt2 {
        s.parse().unwrap()
    }

    #[test]
    fn text_forms() {
        assert_eq!(q("1/2+3*sqrt2"), QSqrt2::from_parts(1, 2, 3, 1));
        assert_eq!(q("1/2+3*sqrt2").to_string(), "1/2+3*sqrt2");
        assert_eq!(q("-sqrt2"), QSqrt2::from_parts(0, 1, -1, 1));
        assert_eq!(q("2-1/3*sqrt2").to_string(), "2-1/3*sqrt2");
        assert_eq!(q("0").to_string(), "0");
        assert_eq!(q("-7/4").to_string(), "-7/4");
        assert_eq!(q("0.25"), QSqrt2::from_parts(1, 4, 0, 1));
        assert!("1/2+".parse::<QSqrt2>().is_err());
        assert!("abc".parse::<QSqrt2>().is_err());
    }

    #[test]
    fn sqrt_cases() {
        assert_eq!(q("9/4").sqrt_if_representable().unwrap(), q("3/2"));
        assert_eq!(q("8").sqrt_if_representable().unwrap(), q("2*sqrt2"));
        assert_eq!(q("1/2").sqrt_if_representable().unwrap(), q("1/2*sqrt2"));
        assert_eq!(q("3+2*sqrt2").sqrt_if_representable().unwrap(), q("1+sqrt2"));
        assert!(matches!(q("3").sqrt_if_representable(), Err(ScalarError::NotRepresentable(_))));
        assert!(q("-4").sqrt_if_representable().is_err());
    }

    #[test]
    fn ordering_and_inverse() {
        assert_eq!(q("3-2*sqrt2").signum(), 1);
        assert_eq!(q("1-sqrt2").signum(), -1);
        assert_eq!(q("1+sqrt2").inv().unwrap(), q("-1+sqrt2"));
        assert_eq!(QSqrt2::zero().inv(), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn residual_norm_exact() {
        let s2 = QSqrt2::sqrt2();
        let xs = vec![QSqrt2::one() - QSqrt2::one(), s2.mul_ref(&s2) - QSqrt2::from_i64(2)];
        assert!(residual_norm(&xs).is_zero());
        let ys = vec![q("-3"), q("2*sqrt2")];
        assert_eq!(residual_norm(&ys), q("3"));
    }

    #[test]
    fn float_tolerance() {
        let t = Tolerance::default();
        assert!(t.accepts(&1e-10_f64, 1.0));
        assert!(!t.accepts(&1e-8_f64, 1.0));
        assert!(t.accepts(&1e-8_f64, 100.0));
        assert_eq!(f64::parse_text("1/2").unwrap(), 0.5);
    }
}
