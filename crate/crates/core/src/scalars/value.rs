use serde_json::Value;

use super::{BackendKind, Complex64, GaussRat, GaussRatTrivial, Nat, Rat, RatNonneg, Scalar};
use crate::error::{Error, Result};

/// A scalar tagged with its backend, for interchange and dynamic dispatch.
///
/// Typed code works with the concrete [`Scalar`] implementations directly;
/// this enum is what crosses JSON and CLI boundaries.
#[derive(Clone, Debug, PartialEq)]
pub enum ScalarValue {
    Bool(bool),
    Nat(Nat),
    RatNonneg(RatNonneg),
    Rat(Rat),
    GaussRat(GaussRat),
    GaussRatTrivial(GaussRatTrivial),
    FloatReal(f64),
    FloatComplex(Complex64),
}

macro_rules! dispatch {
    ($v:expr, $x:ident => $body:expr) => {
        match $v {
            ScalarValue::Bool($x) => $body,
            ScalarValue::Nat($x) => $body,
            ScalarValue::RatNonneg($x) => $body,
            ScalarValue::Rat($x) => $body,
            ScalarValue::GaussRat($x) => $body,
            ScalarValue::GaussRatTrivial($x) => $body,
            ScalarValue::FloatReal($x) => $body,
            ScalarValue::FloatComplex($x) => $body,
        }
    };
}

macro_rules! binary {
    ($a:expr, $b:expr, $x:ident, $y:ident => $body:expr) => {
        match ($a, $b) {
            (ScalarValue::Bool($x), ScalarValue::Bool($y)) => Ok(ScalarValue::Bool($body)),
            (ScalarValue::Nat($x), ScalarValue::Nat($y)) => Ok(ScalarValue::Nat($body)),
            (ScalarValue::RatNonneg($x), ScalarValue::RatNonneg($y)) => {
                Ok(ScalarValue::RatNonneg($body))
            }
            (ScalarValue::Rat($x), ScalarValue::Rat($y)) => Ok(ScalarValue::Rat($body)),
            (ScalarValue::GaussRat($x), ScalarValue::GaussRat($y)) => {
                Ok(ScalarValue::GaussRat($body))
            }
            (ScalarValue::GaussRatTrivial($x), ScalarValue::GaussRatTrivial($y)) => {
                Ok(ScalarValue::GaussRatTrivial($body))
            }
            (ScalarValue::FloatReal($x), ScalarValue::FloatReal($y)) => {
                Ok(ScalarValue::FloatReal($body))
            }
            (ScalarValue::FloatComplex($x), ScalarValue::FloatComplex($y)) => {
                Ok(ScalarValue::FloatComplex($body))
            }
            (a, b) => Err(Error::BackendMismatch(a.backend(), b.backend())),
        }
    };
}

impl ScalarValue {
    pub fn backend(&self) -> BackendKind {
        match self {
            ScalarValue::Bool(_) => BackendKind::Bool,
            ScalarValue::Nat(_) => BackendKind::Nat,
            ScalarValue::RatNonneg(_) => BackendKind::RatNonneg,
            ScalarValue::Rat(_) => BackendKind::Rat,
            ScalarValue::GaussRat(_) => BackendKind::GaussRat,
            ScalarValue::GaussRatTrivial(_) => BackendKind::GaussRatTrivial,
            ScalarValue::FloatReal(_) => BackendKind::FloatReal,
            ScalarValue::FloatComplex(_) => BackendKind::FloatComplex,
        }
    }

    pub fn add(&self, other: &ScalarValue) -> Result<ScalarValue> {
        binary!(self, other, x, y => x.add(y))
    }

    pub fn mul(&self, other: &ScalarValue) -> Result<ScalarValue> {
        binary!(self, other, x, y => x.mul(y))
    }

    pub fn dagger(&self) -> ScalarValue {
        match self {
            ScalarValue::Bool(x) => ScalarValue::Bool(x.conj()),
            ScalarValue::Nat(x) => ScalarValue::Nat(x.conj()),
            ScalarValue::RatNonneg(x) => ScalarValue::RatNonneg(x.conj()),
            ScalarValue::Rat(x) => ScalarValue::Rat(x.conj()),
            ScalarValue::GaussRat(x) => ScalarValue::GaussRat(x.conj()),
            ScalarValue::GaussRatTrivial(x) => ScalarValue::GaussRatTrivial(x.conj()),
            ScalarValue::FloatReal(x) => ScalarValue::FloatReal(x.conj()),
            ScalarValue::FloatComplex(x) => ScalarValue::FloatComplex(Scalar::conj(x)),
        }
    }

    pub fn is_positive(&self, tol: f64) -> bool {
        dispatch!(self, x => x.is_positive(tol))
    }

    pub fn is_zero(&self) -> bool {
        dispatch!(self, x => Scalar::is_zero(x))
    }

    /// False on backend mismatch.
    pub fn approx_eq(&self, other: &ScalarValue, tol: f64) -> bool {
        dispatch_pair_eq(self, other, tol)
    }

    pub fn to_json(&self) -> Value {
        dispatch!(self, x => x.to_json())
    }

    pub fn from_json(backend: BackendKind, v: &Value) -> Result<ScalarValue> {
        Ok(match backend {
            BackendKind::Bool => ScalarValue::Bool(Scalar::from_json(v)?),
            BackendKind::Nat => ScalarValue::Nat(Scalar::from_json(v)?),
            BackendKind::RatNonneg => ScalarValue::RatNonneg(Scalar::from_json(v)?),
            BackendKind::Rat => ScalarValue::Rat(Scalar::from_json(v)?),
            BackendKind::GaussRat => ScalarValue::GaussRat(Scalar::from_json(v)?),
            BackendKind::GaussRatTrivial => ScalarValue::GaussRatTrivial(Scalar::from_json(v)?),
            BackendKind::FloatReal => ScalarValue::FloatReal(<f64 as Scalar>::from_json(v)?),
            BackendKind::FloatComplex => {
                ScalarValue::FloatComplex(<Complex64 as Scalar>::from_json(v)?)
            }
        })
    }
}

fn dispatch_pair_eq(a: &ScalarValue, b: &ScalarValue, tol: f64) -> bool {
    match (a, b) {
        (ScalarValue::Bool(x), ScalarValue::Bool(y)) => x.approx_eq(y, tol),
        (ScalarValue::Nat(x), ScalarValue::Nat(y)) => x.approx_eq(y, tol),
        (ScalarValue::RatNonneg(x), ScalarValue::RatNonneg(y)) => x.approx_eq(y, tol),
        (ScalarValue::Rat(x), ScalarValue::Rat(y)) => x.approx_eq(y, tol),
        (ScalarValue::GaussRat(x), ScalarValue::GaussRat(y)) => x.approx_eq(y, tol),
        (ScalarValue::GaussRatTrivial(x), ScalarValue::GaussRatTrivial(y)) => x.approx_eq(y, tol),
        (ScalarValue::FloatReal(x), ScalarValue::FloatReal(y)) => x.approx_eq(y, tol),
        (ScalarValue::FloatComplex(x), ScalarValue::FloatComplex(y)) => x.approx_eq(y, tol),
        _ => false,
    }
}
