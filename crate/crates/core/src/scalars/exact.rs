use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde_json::{json, Value};

use super::number_theory::{is_perfect_square, is_rational_sum_of_two_squares, rational_sqrt};
use super::{BackendKind, Field, Ring, Scalar};
use crate::error::{Error, Result};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn rat_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn rational_to_json(q: &BigRational) -> Value {
    json!({"num": q.numer().to_string(), "den": q.denom().to_string()})
}

pub(crate) fn rational_from_json(v: &Value) -> Result<BigRational> {
    let field = |k: &str| -> Result<BigInt> {
        v.get(k)
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Json(format!("rational needs string field `{k}`: {v}")))?
            .parse::<BigInt>()
            .map_err(|e| Error::Json(e.to_string()))
    };
    let den = field("den")?;
    if den.is_zero() {
        return Err(Error::Json("zero denominator".into()));
    }
    Ok(BigRational::new(field("num")?, den))
}

const SMALL_RATIONALS: [(i64, i64); 7] = [(0, 1), (1, 1), (1, 2), (2, 1), (1, 3), (3, 2), (2, 3)];

fn sample_rational<R: Rng + ?Sized>(rng: &mut R, signed: bool) -> BigRational {
    let (n, d) = SMALL_RATIONALS[rng.gen_range(0..SMALL_RATIONALS.len())];
    let q = rat(n, d);
    if signed && rng.gen_bool(0.5) {
        -q
    } else {
        q
    }
}

impl Scalar for bool {
    const KIND: BackendKind = BackendKind::Bool;

    fn zero() -> Self {
        false
    }
    fn one() -> Self {
        true
    }
    fn add(&self, other: &Self) -> Self {
        *self || *other
    }
    fn mul(&self, other: &Self) -> Self {
        *self && *other
    }
    fn conj(&self) -> Self {
        *self
    }
    fn is_zero(&self) -> bool {
        !*self
    }
    fn from_u64(n: u64) -> Self {
        n > 0
    }
    fn magnitude(&self) -> f64 {
        if *self {
            1.0
        } else {
            0.0
        }
    }
    fn distance(&self, other: &Self) -> f64 {
        if self == other {
            0.0
        } else {
            1.0
        }
    }
    fn is_positive(&self, _tol: f64) -> bool {
        // b = b · b
        true
    }
    fn to_json(&self) -> Value {
        Value::Bool(*self)
    }
    fn from_json(v: &Value) -> Result<Self> {
        v.as_bool()
            .ok_or_else(|| Error::Json(format!("expected boolean, got {v}")))
    }
    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.gen_bool(0.5)
    }
}

/// Unbounded natural numbers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Nat(pub BigUint);

impl Nat {
    pub fn new(n: u64) -> Self {
        Nat(BigUint::from(n))
    }
}

impl fmt::Display for Nat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Scalar for Nat {
    const KIND: BackendKind = BackendKind::Nat;

    fn zero() -> Self {
        Nat(BigUint::zero())
    }
    fn one() -> Self {
        Nat(BigUint::one())
    }
    fn add(&self, other: &Self) -> Self {
        Nat(&self.0 + &other.0)
    }
    fn mul(&self, other: &Self) -> Self {
        Nat(&self.0 * &other.0)
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn from_u64(n: u64) -> Self {
        Nat::new(n)
    }
    fn magnitude(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::INFINITY)
    }
    fn distance(&self, other: &Self) -> f64 {
        if self == other {
            0.0
        } else {
            1.0
        }
    }
    fn is_positive(&self, _tol: f64) -> bool {
        // trivial involution: positive means a perfect square
        is_perfect_square(&self.0)
    }
    fn to_json(&self) -> Value {
        Value::String(self.0.to_string())
    }
    fn from_json(v: &Value) -> Result<Self> {
        v.as_str()
            .ok_or_else(|| Error::Json(format!("natural must be a decimal string, got {v}")))?
            .parse::<BigUint>()
            .map(Nat)
            .map_err(|e| Error::Json(e.to_string()))
    }
    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Nat::new(rng.gen_range(0..4))
    }
}

/// Nonnegative rationals, a semifield without subtraction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatNonneg(BigRational);

impl RatNonneg {
    pub fn new(q: BigRational) -> Result<Self> {
        if q.is_negative() {
            Err(Error::Invalid(format!("{q} is negative")))
        } else {
            Ok(RatNonneg(q))
        }
    }

    pub fn frac(n: u64, d: u64) -> Self {
        RatNonneg(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        RatNonneg::new(&self.0 - &other.0).ok()
    }

    pub fn inv(&self) -> Option<Self> {
        (!self.0.is_zero()).then(|| RatNonneg(self.0.recip()))
    }
}

impl fmt::Display for RatNonneg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Scalar for RatNonneg {
    const KIND: BackendKind = BackendKind::RatNonneg;

    fn zero() -> Self {
        RatNonneg(BigRational::zero())
    }
    fn one() -> Self {
        RatNonneg(BigRational::one())
    }
    fn add(&self, other: &Self) -> Self {
        RatNonneg(&self.0 + &other.0)
    }
    fn mul(&self, other: &Self) -> Self {
        RatNonneg(&self.0 * &other.0)
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn from_u64(n: u64) -> Self {
        RatNonneg::frac(n, 1)
    }
    fn magnitude(&self) -> f64 {
        rat_to_f64(&self.0)
    }
    fn distance(&self, other: &Self) -> f64 {
        if self == other {
            0.0
        } else {
            1.0
        }
    }
    fn is_positive(&self, _tol: f64) -> bool {
        rational_sqrt(&self.0).is_some()
    }
    fn to_json(&self) -> Value {
        rational_to_json(&self.0)
    }
    fn from_json(v: &Value) -> Result<Self> {
        RatNonneg::new(rational_from_json(v)?)
    }
    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        RatNonneg(sample_rational(rng, false))
    }
}

/// Rationals with the trivial involution.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rat(pub BigRational);

impl Rat {
    pub fn frac(n: i64, d: i64) -> Self {
        Rat(rat(n, d))
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Scalar for Rat {
    const KIND: BackendKind = BackendKind::Rat;

    fn zero() -> Self {
        Rat(BigRational::zero())
    }
    fn one() -> Self {
        Rat(BigRational::one())
    }
    fn add(&self, other: &Self) -> Self {
        Rat(&self.0 + &other.0)
    }
    fn mul(&self, other: &Self) -> Self {
        Rat(&self.0 * &other.0)
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn from_u64(n: u64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }
    fn magnitude(&self) -> f64 {
        rat_to_f64(&self.0).abs()
    }
    fn distance(&self, other: &Self) -> f64 {
        if self == other {
            0.0
        } else {
            1.0
        }
    }
    fn is_positive(&self, _tol: f64) -> bool {
        rational_sqrt(&self.0).is_some()
    }
    fn to_json(&self) -> Value {
        rational_to_json(&self.0)
    }
    fn from_json(v: &Value) -> Result<Self> {
        rational_from_json(v).map(Rat)
    }
    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Rat(sample_rational(rng, true))
    }
}

impl Ring for Rat {
    fn neg(&self) -> Self {
        Rat(-&self.0)
    }
}

impl Field for Rat {
    fn inv(&self) -> Option<Self> {
        (!self.0.is_zero()).then(|| Rat(self.0.recip()))
    }
}

/// Gaussian rationals `ℚ[i]` with complex conjugation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussRat::new(rat(re, 1), rat(im, 1))
    }

    pub fn to_c64(&self) -> num_complex::Complex64 {
        use num_traits::ToPrimitive;
        num_complex::Complex64::new(self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }

    /// `z · z̄`.
    pub fn norm(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// A square root `t` with `t · t = self`, when one exists in `ℚ[i]`.
    pub fn sqrt(&self) -> Option<GaussRat> {
        let modulus = rational_sqrt(&self.norm())?;
        let two = rat(2, 1);
        let x2 = (&modulus + &self.re) / &two;
        let t = match rational_sqrt(&x2) {
            Some(x) if !x.is_zero() => {
                let y = &self.im / (&two * &x);
                GaussRat::new(x, y)
            }
            Some(_) => {
                let y = rational_sqrt(&((&modulus - &self.re) / &two))?;
                GaussRat::new(BigRational::zero(), y)
            }
            None => return None,
        };
        (Scalar::mul(&t, &t) == *self).then_some(t)
    }

    fn json(&self) -> Value {
        json!({"re": rational_to_json(&self.re), "im": rational_to_json(&self.im)})
    }

    fn parse(v: &Value) -> Result<Self> {
        let part = |k: &str| {
            v.get(k)
                .ok_or_else(|| Error::Json(format!("gaussian rational needs `{k}`: {v}")))
                .and_then(rational_from_json)
        };
        Ok(GaussRat::new(part("re")?, part("im")?))
    }

    fn draw<R: Rng + ?Sized>(rng: &mut R) -> Self {
        GaussRat::new(sample_rational(rng, true), sample_rational(rng, true))
    }

    fn product(&self, other: &Self) -> Self {
        GaussRat::new(
            &self.re * &other.re - &self.im * &other.im,
            &self.re * &other.im + &self.im * &other.re,
        )
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, -&self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl Scalar for GaussRat {
    const KIND: BackendKind = BackendKind::GaussRat;

    fn zero() -> Self {
        GaussRat::new(BigRational::zero(), BigRational::zero())
    }
    fn one() -> Self {
        GaussRat::new(BigRational::one(), BigRational::zero())
    }
    fn add(&self, other: &Self) -> Self {
        GaussRat::new(&self.re + &other.re, &self.im + &other.im)
    }
    fn mul(&self, other: &Self) -> Self {
        self.product(other)
    }
    fn conj(&self) -> Self {
        GaussRat::new(self.re.clone(), -&self.im)
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn from_u64(n: u64) -> Self {
        GaussRat::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }
    fn magnitude(&self) -> f64 {
        rat_to_f64(&self.norm()).sqrt()
    }
    fn distance(&self, other: &Self) -> f64 {
        if self == other {
            0.0
        } else {
            1.0
        }
    }
    /// `t† t = |t|²`, so positives are the nonnegative rationals that are
    /// sums of two rational squares.
    fn is_positive(&self, _tol: f64) -> bool {
        self.is_real() && is_rational_sum_of_two_squares(&self.re)
    }
    fn to_json(&self) -> Value {
        self.json()
    }
    fn from_json(v: &Value) -> Result<Self> {
        GaussRat::parse(v)
    }
    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        GaussRat::draw(rng)
    }
}

impl Ring for GaussRat {
    fn neg(&self) -> Self {
        GaussRat::new(-&self.re, -&self.im)
    }
}

impl Field for GaussRat {
    fn inv(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        Some(GaussRat::new(&self.re / &n, -&self.im / &n))
    }
}

/// `ℚ[i]` with the identity involution. Unitary scalars are `±1` and `-1 = i · i`
/// is positive, so phases here are not positive-free.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussRatTrivial(pub GaussRat);

impl GaussRatTrivial {
    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussRatTrivial(GaussRat::from_ints(re, im))
    }
}

impl Scalar for GaussRatTrivial {
    const KIND: BackendKind = BackendKind::GaussRatTrivial;

    fn zero() -> Self {
        GaussRatTrivial(GaussRat::zero())
    }
    fn one() -> Self {
        GaussRatTrivial(GaussRat::one())
    }
    fn add(&self, other: &Self) -> Self {
        GaussRatTrivial(self.0.add(&other.0))
    }
    fn mul(&self, other: &Self) -> Self {
        GaussRatTrivial(self.0.mul(&other.0))
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn magnitude(&self) -> f64 {
        self.0.magnitude()
    }
    fn distance(&self, other: &Self) -> f64 {
        self.0.distance(&other.0)
    }
    fn is_positive(&self, _tol: f64) -> bool {
        self.0.sqrt().is_some()
    }
    fn to_json(&self) -> Value {
        self.0.json()
    }
    fn from_json(v: &Value) -> Result<Self> {
        GaussRat::parse(v).map(GaussRatTrivial)
    }
    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        GaussRatTrivial(GaussRat::draw(rng))
    }
}

impl Ring for GaussRatTrivial {
    fn neg(&self) -> Self {
        GaussRatTrivial(self.0.neg())
    }
}

impl Field for GaussRatTrivial {
    fn inv(&self) -> Option<Self> {
        Field::inv(&self.0).map(GaussRatTrivial)
    }
}
