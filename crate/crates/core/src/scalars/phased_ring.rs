use num_rational::BigRational;

use super::number_theory::rational_two_squares;
use super::{Complex64, Field, GaussRat};
use crate::report::{Failure, LawReport};

/// Backends on which the phased-ring axiom can be attempted: given `a, b`,
/// find `c` with `a†a + b†b = c†c`.
pub trait PhasedRingCandidate: Field {
    fn norm_root(a: &Self, b: &Self) -> Option<Self>;
}

impl PhasedRingCandidate for Complex64 {
    fn norm_root(a: &Self, b: &Self) -> Option<Self> {
        Some(Complex64::new((a.norm_sqr() + b.norm_sqr()).sqrt(), 0.0))
    }
}

impl PhasedRingCandidate for f64 {
    fn norm_root(a: &Self, b: &Self) -> Option<Self> {
        Some((a * a + b * b).sqrt())
    }
}

impl PhasedRingCandidate for GaussRat {
    /// Exists iff `|a|² + |b|²` is a sum of two rational squares.
    fn norm_root(a: &Self, b: &Self) -> Option<Self> {
        let n: BigRational = a.norm() + b.norm();
        let (x, y) = rational_two_squares(&n)?;
        Some(GaussRat::new(x, y))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhasedRingWitness<S> {
    pub c: S,
    pub d: S,
    pub e: S,
}

/// Produces `c, d, e` with `a†a + b†b = c†c`, `a = c·d`, `b = c·e`.
pub fn phased_ring_witness<S: PhasedRingCandidate>(a: &S, b: &S) -> Option<PhasedRingWitness<S>> {
    let c = S::norm_root(a, b)?;
    if c.is_zero() {
        // a†a + b†b = 0 forces a = b = 0 in the backends we support
        return (a.is_zero() && b.is_zero()).then(|| PhasedRingWitness {
            c: S::zero(),
            d: S::zero(),
            e: S::zero(),
        });
    }
    Some(PhasedRingWitness {
        d: a.div(&c)?,
        e: b.div(&c)?,
        c,
    })
}

/// Attempts the phased-ring axioms on every sample pair and the
/// integral-domain law `a·b = 0 ⇒ a = 0 ∨ b = 0`. Missing witnesses are
/// report failures, never errors.
pub fn check_phased_ring<S: PhasedRingCandidate>(samples: &[(S, S)], tol: f64) -> LawReport {
    let mut report = LawReport::new(format!("phased_ring[{}]", S::KIND.name()))
        .with_statement("a†a + b†b = c†c with a = c·d, b = c·e; integral domain");
    for (a, b) in samples {
        let inputs = || vec![a.to_json(), b.to_json()];
        match phased_ring_witness(a, b) {
            None => report.check(false, || {
                Failure::new("no c with a†a + b†b = c†c").inputs(inputs())
            }),
            Some(w) => {
                let lhs = a.conj().mul(a).add(&b.conj().mul(b));
                let rhs = w.c.conj().mul(&w.c);
                let ok = lhs.approx_eq(&rhs, tol)
                    && a.approx_eq(&w.c.mul(&w.d), tol)
                    && b.approx_eq(&w.c.mul(&w.e), tol);
                report.check(ok, || {
                    Failure::new("witness does not satisfy the phased ring equations")
                        .inputs(inputs())
                        .sides(lhs.to_json(), rhs.to_json())
                        .deviation(lhs.distance(&rhs))
                });
            }
        }
        let prod = a.mul(b);
        let domain_ok = !prod.approx_eq(&S::zero(), tol)
            || a.approx_eq(&S::zero(), tol)
            || b.approx_eq(&S::zero(), tol);
        report.check(domain_ok, || {
            Failure::new("zero divisor").inputs(inputs()).sides(prod.to_json(), S::zero().to_json())
        });
    }
    if S::KIND == super::BackendKind::GaussRat && !report.passed() {
        report.note("gauss_rat is a field but not a phased ring: norms need not be sums of two squares");
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn float_three_four_five() {
        let w = phased_ring_witness(&Complex64::new(3.0, 0.0), &Complex64::new(4.0, 0.0)).unwrap();
        assert!((w.c - Complex64::new(5.0, 0.0)).norm() < 1e-12);
        assert!((w.d - Complex64::new(0.6, 0.0)).norm() < 1e-12);
        assert!((w.e - Complex64::new(0.8, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn float_zero_pair_passes() {
        let z = Complex64::new(0.0, 0.0);
        let report = check_phased_ring(&[(z, z)], 1e-9);
        assert!(report.passed());
    }

    /// Bounded search for `c ∈ ℚ[i]` with `c†c = n`, denominators up to `max_den`.
    fn brute_norm_root(n: &BigRational, max_den: i64, max_num: i64) -> bool {
        for den in 1..=max_den {
            for x in -max_num..=max_num {
                for y in -max_num..=max_num {
                    let c = GaussRat::new(q(x, den), q(y, den));
                    if &c.norm() == n {
                        return true;
                    }
                }
            }
        }
        false
    }

    #[test]
    fn gauss_one_one_passes_with_one_plus_i() {
        let one = GaussRat::from_ints(1, 0);
        let w = phased_ring_witness(&one, &one).unwrap();
        assert_eq!(w.c.norm(), q(2, 1));
        assert!(check_phased_ring(&[(one.clone(), one)], 0.0).passed());
    }

    #[test]
    fn gauss_norm_three_has_no_root() {
        let a = GaussRat::from_ints(1, 0);
        let b = GaussRat::from_ints(1, 1);
        assert!(!brute_norm_root(&q(3, 1), 6, 12));
        assert!(phased_ring_witness(&a, &b).is_none());
        let report = check_phased_ring(&[(a, b)], 0.0);
        assert!(!report.passed());
        assert_eq!(report.failures[0].inputs.len(), 2);
    }
}
