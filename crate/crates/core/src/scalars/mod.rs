//! Scalar backends: commutative semirings with an involution.
//!
//! Exact backends (Boolean, naturals, nonnegative rationals, rationals,
//! Gaussian rationals) are used for structural checks. The two float
//! backends (`f64` and `Complex64`) carry every construction that needs
//! square roots: Gram–Schmidt, polar decompositions, Kraus extraction.

mod exact;
mod float;
pub mod number_theory;
mod phased_ring;
mod value;

use std::fmt::Debug;

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Result;

pub use exact::{GaussRat, GaussRatTrivial, Nat, Rat, RatNonneg};
pub use float::{polar_decompose, FloatScalar, DEFAULT_TOL};
pub use num_complex::Complex64;
pub use phased_ring::{check_phased_ring, PhasedRingCandidate, PhasedRingWitness};
pub use value::ScalarValue;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendKind {
    Bool,
    Nat,
    RatNonneg,
    Rat,
    GaussRat,
    /// Gaussian rationals with the identity as involution. Only used to
    /// exhibit the failure of positive-free phases.
    GaussRatTrivial,
    FloatReal,
    FloatComplex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Capabilities {
    pub has_involution: bool,
    pub has_subtraction: bool,
    pub has_division: bool,
    pub has_sqrt_of_positives: bool,
}

impl BackendKind {
    pub const ALL: [BackendKind; 8] = [
        BackendKind::Bool,
        BackendKind::Nat,
        BackendKind::RatNonneg,
        BackendKind::Rat,
        BackendKind::GaussRat,
        BackendKind::GaussRatTrivial,
        BackendKind::FloatReal,
        BackendKind::FloatComplex,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BackendKind::Bool => "bool",
            BackendKind::Nat => "nat",
            BackendKind::RatNonneg => "rat_nonneg",
            BackendKind::Rat => "rat",
            BackendKind::GaussRat => "gauss_rat",
            BackendKind::GaussRatTrivial => "gauss_rat_trivial",
            BackendKind::FloatReal => "float_real",
            BackendKind::FloatComplex => "float_complex",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    pub fn is_float(self) -> bool {
        matches!(self, BackendKind::FloatReal | BackendKind::FloatComplex)
    }

    pub fn capabilities(self) -> Capabilities {
        use BackendKind::*;
        Capabilities {
            // every backend carries at least the trivial involution
            has_involution: true,
            has_subtraction: matches!(self, Rat | GaussRat | GaussRatTrivial | FloatReal | FloatComplex),
            has_division: matches!(self, Rat | GaussRat | GaussRatTrivial | FloatReal | FloatComplex),
            has_sqrt_of_positives: self.is_float(),
        }
    }
}

/// An element of a commutative semiring with involution.
///
/// Implementations are immutable values; every operation is pure.
pub trait Scalar: Clone + Debug + PartialEq + Send + Sync + 'static {
    const KIND: BackendKind;

    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// The involution `s ↦ s†`.
    fn conj(&self) -> Self;
    fn is_zero(&self) -> bool;

    /// `n · 1`.
    fn from_u64(n: u64) -> Self {
        let mut acc = Self::zero();
        for _ in 0..n {
            acc = acc.add(&Self::one());
        }
        acc
    }

    /// Size used to scale float tolerances; exact backends may return anything.
    fn magnitude(&self) -> f64;

    /// Absolute difference for floats; 0 or 1 for exact backends.
    fn distance(&self, other: &Self) -> f64;

    /// Exact equality on exact backends; `|a - b| <= tol * (1 + max(|a|, |b|))` on floats.
    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if Self::KIND.is_float() {
            self.distance(other) <= tol * (1.0 + self.magnitude().max(other.magnitude()))
        } else {
            self == other
        }
    }

    /// Whether `self = t† · t` for some `t` in the backend.
    fn is_positive(&self, tol: f64) -> bool;

    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;

    /// Draws from a small value set suited to law sampling.
    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

pub trait Ring: Scalar {
    fn neg(&self) -> Self;
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}

pub trait Field: Ring {
    fn inv(&self) -> Option<Self>;
    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }
}
