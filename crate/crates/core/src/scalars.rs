//! Complex scalar backends.
//!
//! Two field implementations share the [`Field`] interface: [`Gaussian`], exact
//! arithmetic in ℚ(i) on arbitrary-precision rationals, and [`Approx`], IEEE
//! double complex numbers compared under a [`Tolerance`]. Generic code in the
//! rest of the crate is written against [`Field`]; the dynamically tagged
//! [`Scalar`] exists for the JSON boundary, where the backend is only known at
//! run time.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("cannot mix exact and approximate scalars")]
    BackendMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not a perfect square in Q(i)")]
    NotAPerfectSquare(String),
    #[error("negative tolerance {0}")]
    NegativeTolerance(String),
    #[error("cannot parse scalar `{0}`")]
    Parse(String),
}

/// Comparison threshold for the approximate backend. Exact arithmetic ignores it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    epsilon: f64,
}

impl Tolerance {
    pub const DEFAULT_EPSILON: f64 = 1e-9;

    pub fn new(epsilon: f64) -> Result<Self, ScalarError> {
        if epsilon >= 0.0 && epsilon.is_finite() {
            Ok(Self { epsilon })
        } else {
            Err(ScalarError::NegativeTolerance(epsilon.to_string()))
        }
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            epsilon: Self::DEFAULT_EPSILON,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Exact,
    Approx,
}

impl FromStr for Backend {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Backend::Exact),
            "approx" => Ok(Backend::Approx),
            other => Err(ScalarError::Parse(other.to_string())),
        }
    }
}

/// The arithmetic interface shared by both backends.
pub trait Field:
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
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
{
    const BACKEND: Backend;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    /// `num/den`; panics on `den == 0`.
    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_complex_ratio(re: (i64, i64), im: (i64, i64)) -> Self;
    fn imag_unit() -> Self;

    fn is_zero(&self, tol: Tolerance) -> bool;
    fn is_exact_zero(&self) -> bool;
    fn try_div(&self, rhs: &Self, tol: Tolerance) -> Result<Self, ScalarError>;
    fn sqrt(&self) -> Result<Self, ScalarError>;
    /// |z| as a double, used for pivot selection and residual reporting.
    fn magnitude(&self) -> f64;
    fn to_approx(&self) -> Approx;

    /// The nearest integer when the value is (within tolerance) a real integer.
    fn to_integer(&self, tol: Tolerance) -> Option<i64>;

    fn approx_eq(&self, other: &Self, tol: Tolerance) -> bool {
        (self.clone() - other).is_zero(tol)
    }

    fn square(&self) -> Self {
        self.clone() * self
    }
}

// ---------------------------------------------------------------------------
// Exact backend

/// A Gaussian rational `re + im·i` with normalized big-rational parts.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Gaussian {
    re: BigRational,
    im: BigRational,
}

impl Gaussian {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Self {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    fn norm_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_exact_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if self.im.is_zero() {
            return Ok(Self::real(self.re.recip()));
        }
        let n = self.norm_sq();
        Ok(Self {
            re: &self.re / &n,
            im: -(&self.im / &n),
        })
    }
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let root = |n: &BigInt| {
        let r = n.sqrt();
        (&r * &r == *n).then_some(r)
    };
    let num = root(q.numer())?;
    let den = root(q.denom())?;
    Some(BigRational::new(num, den))
}

impl Add for Gaussian {
    type Output = Gaussian;
    fn add(mut self, rhs: Gaussian) -> Gaussian {
        self += &rhs;
        self
    }
}

impl<'a> Add<&'a Gaussian> for Gaussian {
    type Output = Gaussian;
    fn add(mut self, rhs: &'a Gaussian) -> Gaussian {
        self += rhs;
        self
    }
}

impl Sub for Gaussian {
    type Output = Gaussian;
    fn sub(mut self, rhs: Gaussian) -> Gaussian {
        self -= &rhs;
        self
    }
}

impl<'a> Sub<&'a Gaussian> for Gaussian {
    type Output = Gaussian;
    fn sub(mut self, rhs: &'a Gaussian) -> Gaussian {
        self -= rhs;
        self
    }
}

impl<'a> AddAssign<&'a Gaussian> for Gaussian {
    fn add_assign(&mut self, rhs: &'a Gaussian) {
        self.re += &rhs.re;
        if !rhs.im.is_zero() {
            self.im += &rhs.im;
        }
    }
}

impl<'a> SubAssign<&'a Gaussian> for Gaussian {
    fn sub_assign(&mut self, rhs: &'a Gaussian) {
        self.re -= &rhs.re;
        if !rhs.im.is_zero() {
            self.im -= &rhs.im;
        }
    }
}

impl<'a> Mul<&'a Gaussian> for Gaussian {
    type Output = Gaussian;
    fn mul(self, rhs: &'a Gaussian) -> Gaussian {
        if self.im.is_zero() && rhs.im.is_zero() {
            return Gaussian::real(self.re * &rhs.re);
        }
        let re = &self.re * &rhs.re - &self.im * &rhs.im;
        let im = &self.re * &rhs.im + &self.im * &rhs.re;
        Gaussian { re, im }
    }
}

impl Mul for Gaussian {
    type Output = Gaussian;
    fn mul(self, rhs: Gaussian) -> Gaussian {
        self * &rhs
    }
}

impl Neg for Gaussian {
    type Output = Gaussian;
    fn neg(self) -> Gaussian {
        Gaussian {
            re: -self.re,
            im: -self.im,
        }
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Formats as `p/q+r/si`; denominators of 1 and zero parts are omitted.
impl fmt::Display for Gaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rational(&self.re)),
            (true, false) => write!(f, "{}i", fmt_rational(&self.im)),
            (false, false) => {
                let sign = if self.im.is_negative() { "" } else { "+" };
                write!(f, "{}{}{}i", fmt_rational(&self.re), sign, fmt_rational(&self.im))
            }
        }
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().ok()?;
            let d: BigInt = d.parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None if s.contains(['.', 'e', 'E']) => parse_decimal(s),
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// Exact value of a decimal literal such as `-1.25` or `3e-2`.
fn parse_decimal(s: &str) -> Option<BigRational> {
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.trim_start_matches(['+', '-']).is_empty() && frac_part.is_empty() {
        return None;
    }
    if !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let digits = match digits.as_str() {
        "+" | "-" | "" => return None,
        d => d,
    };
    let n: BigInt = digits.parse().ok()?;
    let shift = exp - i32::try_from(frac_part.len()).ok()?;
    let ten = BigInt::from(10u32);
    let scale = num_traits::pow(ten, shift.unsigned_abs() as usize);
    Some(if shift >= 0 {
        BigRational::from_integer(n * scale)
    } else {
        BigRational::new(n, scale)
    })
}

impl FromStr for Gaussian {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ScalarError::Parse(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(err());
        }
        let Some(body) = t.strip_suffix('i') else {
            return parse_rational(&t).map(Gaussian::real).ok_or_else(err);
        };
        // Split at the last sign that is not the leading one.
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(i, c)| (c == '+' || c == '-') && !matches!(body.as_bytes()[i - 1], b'e' | b'E'))
            .map(|(i, _)| i)
            .last();
        let (re_part, im_part) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("0", body),
        };
        let im = match im_part {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            p => parse_rational(p.strip_prefix('+').unwrap_or(p)).ok_or_else(err)?,
        };
        let re = parse_rational(re_part).ok_or_else(err)?;
        Ok(Gaussian { re, im })
    }
}

impl Field for Gaussian {
    const BACKEND: Backend = Backend::Exact;

    fn zero() -> Self {
        Self::real(BigRational::zero())
    }

    fn one() -> Self {
        Self::real(BigRational::one())
    }

    fn from_i64(n: i64) -> Self {
        Self::real(BigRational::from_integer(n.into()))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::real(BigRational::new(num.into(), den.into()))
    }

    fn from_complex_ratio(re: (i64, i64), im: (i64, i64)) -> Self {
        Self {
            re: BigRational::new(re.0.into(), re.1.into()),
            im: BigRational::new(im.0.into(), im.1.into()),
        }
    }

    fn imag_unit() -> Self {
        Self {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    fn is_zero(&self, _tol: Tolerance) -> bool {
        self.is_exact_zero()
    }

    fn is_exact_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn try_div(&self, rhs: &Self, _tol: Tolerance) -> Result<Self, ScalarError> {
        Ok(self.clone() * &rhs.inv()?)
    }

    fn sqrt(&self) -> Result<Self, ScalarError> {
        let fail = || ScalarError::NotAPerfectSquare(self.to_string());
        if self.im.is_zero() {
            if !self.re.is_negative() {
                return rational_sqrt(&self.re).map(Self::real).ok_or_else(fail);
            }
            let r = rational_sqrt(&-self.re.clone()).ok_or_else(fail)?;
            return Ok(Self {
                re: BigRational::zero(),
                im: r,
            });
        }
        // (x + yi)^2 = p + qi  with  x^2 = (p + |z|)/2,  y = q/(2x).
        let modulus = rational_sqrt(&self.norm_sq()).ok_or_else(fail)?;
        let half = BigRational::new(1.into(), 2.into());
        let x = rational_sqrt(&((&self.re + &modulus) * &half)).ok_or_else(fail)?;
        let y = &self.im / (&x + &x);
        Ok(Self { re: x, im: y })
    }

    fn magnitude(&self) -> f64 {
        self.to_approx().0.norm()
    }

    fn to_approx(&self) -> Approx {
        Approx(Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        ))
    }

    fn to_integer(&self, _tol: Tolerance) -> Option<i64> {
        if self.im.is_zero() && self.re.is_integer() {
            self.re.to_integer().to_i64()
        } else {
            None
        }
    }
}

// ---------------------------------------------------------------------------
// Approximate backend

/// A double-precision complex number.
#[derive(Clone, Copy, PartialEq, Debug, Default)]
pub struct Approx(pub Complex64);

impl Approx {
    pub fn new(re: f64, im: f64) -> Self {
        Self(Complex64::new(re, im))
    }

    pub fn re(&self) -> f64 {
        self.0.re
    }

    pub fn im(&self) -> f64 {
        self.0.im
    }
}

impl fmt::Display for Approx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.0.re, self.0.im)
    }
}

macro_rules! approx_binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr for Approx {
            type Output = Approx;
            fn $m(self, rhs: Approx) -> Approx {
                Approx(self.0 $op rhs.0)
            }
        }
        impl<'a> $tr<&'a Approx> for Approx {
            type Output = Approx;
            fn $m(self, rhs: &'a Approx) -> Approx {
                Approx(self.0 $op rhs.0)
            }
        }
    };
}

approx_binop!(Add, add, +);
approx_binop!(Sub, sub, -);
approx_binop!(Mul, mul, *);

impl<'a> AddAssign<&'a Approx> for Approx {
    fn add_assign(&mut self, rhs: &'a Approx) {
        self.0 += rhs.0;
    }
}

impl<'a> SubAssign<&'a Approx> for Approx {
    fn sub_assign(&mut self, rhs: &'a Approx) {
        self.0 -= rhs.0;
    }
}

impl Neg for Approx {
    type Output = Approx;
    fn neg(self) -> Approx {
        Approx(-self.0)
    }
}

impl Field for Approx {
    const BACKEND: Backend = Backend::Approx;

    fn zero() -> Self {
        Self::default()
    }

    fn one() -> Self {
        Self::new(1.0, 0.0)
    }

    fn from_i64(n: i64) -> Self {
        Self::new(n as f64, 0.0)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::new(num as f64 / den as f64, 0.0)
    }

    fn from_complex_ratio(re: (i64, i64), im: (i64, i64)) -> Self {
        Self::new(re.0 as f64 / re.1 as f64, im.0 as f64 / im.1 as f64)
    }

    fn imag_unit() -> Self {
        Self::new(0.0, 1.0)
    }

    fn is_zero(&self, tol: Tolerance) -> bool {
        self.0.norm() <= tol.epsilon
    }

    fn is_exact_zero(&self) -> bool {
        self.0.re == 0.0 && self.0.im == 0.0
    }

    fn try_div(&self, rhs: &Self, tol: Tolerance) -> Result<Self, ScalarError> {
        if rhs.is_zero(tol) {
            Err(ScalarError::DivisionByZero)
        } else {
            Ok(Approx(self.0 / rhs.0))
        }
    }

    fn sqrt(&self) -> Result<Self, ScalarError> {
        Ok(Approx(self.0.sqrt()))
    }

    fn magnitude(&self) -> f64 {
        self.0.norm()
    }

    fn to_approx(&self) -> Approx {
        *self
    }

    fn to_integer(&self, tol: Tolerance) -> Option<i64> {
        let r = self.0.re.round();
        (Approx::new(self.0.re - r, self.0.im).is_zero(tol)).then_some(r as i64)
    }
}

// ---------------------------------------------------------------------------
// Dynamically tagged scalar

/// A scalar whose backend is decided at run time (JSON input, CLI flags).
#[derive(Clone, PartialEq, Debug)]
pub enum Scalar {
    Exact(Gaussian),
    Approx(Approx),
}

macro_rules! scalar_checked {
    ($name:ident, $op:tt) => {
        pub fn $name(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
            match (self, rhs) {
                (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(a.clone() $op b)),
                (Scalar::Approx(a), Scalar::Approx(b)) => Ok(Scalar::Approx(*a $op *b)),
                _ => Err(ScalarError::BackendMismatch),
            }
        }
    };
}

impl Scalar {
    scalar_checked!(checked_add, +);
    scalar_checked!(checked_sub, -);
    scalar_checked!(checked_mul, *);

    pub fn checked_div(&self, rhs: &Scalar, tol: Tolerance) -> Result<Scalar, ScalarError> {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.try_div(b, tol).map(Scalar::Exact),
            (Scalar::Approx(a), Scalar::Approx(b)) => a.try_div(b, tol).map(Scalar::Approx),
            _ => Err(ScalarError::BackendMismatch),
        }
    }

    pub fn sqrt(&self) -> Result<Scalar, ScalarError> {
        match self {
            Scalar::Exact(a) => a.sqrt().map(Scalar::Exact),
            Scalar::Approx(a) => a.sqrt().map(Scalar::Approx),
        }
    }

    pub fn is_zero(&self, tol: Tolerance) -> bool {
        match self {
            Scalar::Exact(a) => a.is_zero(tol),
            Scalar::Approx(a) => a.is_zero(tol),
        }
    }

    pub fn backend(&self) -> Backend {
        match self {
            Scalar::Exact(_) => Backend::Exact,
            Scalar::Approx(_) => Backend::Approx,
        }
    }

    pub fn to_approx(&self) -> Approx {
        match self {
            Scalar::Exact(a) => a.to_approx(),
            Scalar::Approx(a) => *a,
        }
    }
}

impl From<Gaussian> for Scalar {
    fn from(g: Gaussian) -> Self {
        Scalar::Exact(g)
    }
}

impl From<Approx> for Scalar {
    fn from(a: Approx) -> Self {
        Scalar::Approx(a)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(a) => a.fmt(f),
            Scalar::Approx(a) => a.fmt(f),
        }
    }
}

/// Conversion out of a dynamically tagged scalar into a concrete backend.
pub trait FromScalar: Field {
    fn from_scalar(s: Scalar) -> Result<Self, ScalarError>;
    fn into_scalar(self) -> Scalar;
}

impl FromScalar for Gaussian {
    fn from_scalar(s: Scalar) -> Result<Self, ScalarError> {
        match s {
            Scalar::Exact(g) => Ok(g),
            Scalar::Approx(_) => Err(ScalarError::BackendMismatch),
        }
    }

    fn into_scalar(self) -> Scalar {
        Scalar::Exact(self)
    }
}

impl FromScalar for Approx {
    // Exact literals are accepted by the approximate backend; the reverse is an error.
    fn from_scalar(s: Scalar) -> Result<Self, ScalarError> {
        Ok(s.to_approx())
    }

    fn into_scalar(self) -> Scalar {
        Scalar::Approx(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> Gaussian {
        s.parse().unwrap()
    }

    #[test]
    fn basic_arithmetic() {
        assert_eq!(g("1/2") + g("1/2"), Gaussian::one());
        assert_eq!(g("i") * g("i"), g("-1"));
        let z = g("3/4+1/4i");
        assert_eq!(z.try_div(&z, Tolerance::default()).unwrap(), Gaussian::one());
        assert_eq!(
            Gaussian::one().try_div(&Gaussian::zero(), Tolerance::default()),
            Err(ScalarError::DivisionByZero)
        );
    }

    #[test]
    fn exact_sqrt() {
        assert_eq!(g("4").sqrt().unwrap(), g("2"));
        assert_eq!(g("-1").sqrt().unwrap(), g("i"));
        assert!(matches!(g("2").sqrt(), Err(ScalarError::NotAPerfectSquare(_))));
        // (1+2i)^2 = -3+4i
        assert_eq!(g("-3+4i").sqrt().unwrap(), g("1+2i"));
        let r = g("9/4-10i").sqrt().unwrap();
        assert_eq!(r.square(), g("9/4-10i"));
        assert!(matches!(g("1+i").sqrt(), Err(ScalarError::NotAPerfectSquare(_))));
        assert_eq!(g("2i").sqrt().unwrap(), g("1+i"));
    }

    #[test]
    fn is_zero_respects_backend() {
        let tol = Tolerance::default();
        assert!(Gaussian::zero().is_zero(tol));
        assert!(Approx::new(1e-12, 0.0).is_zero(tol));
        assert!(!Gaussian::from_ratio(1, 1_000_000).is_zero(tol));
    }

    #[test]
    fn display_round_trip() {
        for s in ["0", "1/2", "-3", "3/4+1/4i", "1/2-3i", "-1/2i", "1i", "7/3-2/5i"] {
            let v = g(s);
            assert_eq!(g(&v.to_string()), v, "{s}");
        }
        assert_eq!(g("i").to_string(), "1i");
        assert_eq!(g("2/4").to_string(), "1/2");
        assert_eq!(g("-i"), -Gaussian::imag_unit());
        assert!("1/0".parse::<Gaussian>().is_err());
        assert!("abc".parse::<Gaussian>().is_err());
    }

    #[test]
    fn decimal_literals_are_exact() {
        assert_eq!(g("0.25"), g("1/4"));
        assert_eq!(g("-1.5+2.5i"), g("-3/2+5/2i"));
        assert_eq!(g("3e-2"), g("3/100"));
        assert_eq!(g("1.5e2-1e-1i"), g("150-1/10i"));
        assert!(".".parse::<Gaussian>().is_err());
        assert!("1.2.3".parse::<Gaussian>().is_err());
    }

    #[test]
    fn dynamic_scalars_refuse_mixing() {
        let a = Scalar::Exact(Gaussian::one());
        let b = Scalar::Approx(Approx::one());
        assert_eq!(a.checked_add(&b), Err(ScalarError::BackendMismatch));
        assert_eq!(
            a.checked_div(&b, Tolerance::default()),
            Err(ScalarError::BackendMismatch)
        );
        assert!(a.checked_mul(&a).is_ok());
        assert_eq!(Gaussian::from_scalar(b), Err(ScalarError::BackendMismatch));
    }

    #[test]
    fn tolerance_must_be_nonnegative() {
        assert!(Tolerance::new(-1.0).is_err());
        assert_eq!(Tolerance::default().epsilon(), 1e-9);
    }
}
