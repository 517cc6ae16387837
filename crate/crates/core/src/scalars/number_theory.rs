//! Integer helpers for the exact backends: factorisation, squares and
//! sums of two squares.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

const SMALL_PRIME_LIMIT: u32 = 10_000;

pub fn is_perfect_square(n: &BigUint) -> bool {
    let r = n.sqrt();
    &r * &r == *n
}

/// Exact square root of a nonnegative rational, if it is a rational square.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let num = q.numer().magnitude();
    let den = q.denom().magnitude();
    if is_perfect_square(num) && is_perfect_square(den) {
        Some(BigRational::new(
            BigInt::from(num.sqrt()),
            BigInt::from(den.sqrt()),
        ))
    } else {
        None
    }
}

fn pow_mod(base: &BigUint, exp: &BigUint, m: &BigUint) -> BigUint {
    base.modpow(exp, m)
}

/// Miller–Rabin with the first twelve prime bases; deterministic below 3.3e24.
pub fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    const BASES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &BASES {
        let p = BigUint::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let n_minus_one = n - 1u32;
    let mut d = n_minus_one.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(&BigUint::from(a), &d, n);
        if x.is_one() || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent's variant of Pollard's rho. `n` must be composite and odd.
fn pollard_rho(n: &BigUint) -> BigUint {
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        let mut d = BigUint::one();
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            d = diff.gcd(n);
        }
        if &d != n {
            return d;
        }
        c += 1u32;
    }
}

fn factor_into(n: BigUint, out: &mut BTreeMap<BigUint, u32>) {
    if n.is_one() {
        return;
    }
    if is_probable_prime(&n) {
        *out.entry(n).or_insert(0) += 1;
        return;
    }
    let d = pollard_rho(&n);
    let rest = &n / &d;
    factor_into(d, out);
    factor_into(rest, out);
}

/// Prime factorisation of a positive integer.
pub fn factorize(n: &BigUint) -> BTreeMap<BigUint, u32> {
    let mut out = BTreeMap::new();
    if n.is_zero() {
        return out;
    }
    let mut rest = n.clone();
    let mut p = 2u32;
    while p <= SMALL_PRIME_LIMIT {
        let bp = BigUint::from(p);
        if &bp * &bp > rest {
            break;
        }
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            *out.entry(bp.clone()).or_insert(0) += 1;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    factor_into(rest, &mut out);
    out
}

/// Two-squares theorem: `n = x² + y²` iff no prime `≡ 3 (mod 4)` divides
/// `n` to an odd power.
pub fn is_sum_of_two_squares(n: &BigUint) -> bool {
    if n.is_zero() {
        return true;
    }
    factorize(n)
        .iter()
        .all(|(p, e)| e % 2 == 0 || (p % 4u32).to_u32() != Some(3))
}

/// A nonnegative rational is a sum of two rational squares iff `num · den` is
/// a sum of two integer squares.
pub fn is_rational_sum_of_two_squares(q: &BigRational) -> bool {
    if q.is_negative() {
        return false;
    }
    is_sum_of_two_squares(&(q.numer().magnitude() * q.denom().magnitude()))
}

/// Gaussian integer `a + bi` with `a² + b² = p` for a prime `p ≡ 1 (mod 4)`
/// (Hermite–Serret descent).
fn prime_two_squares(p: &BigUint) -> (BigInt, BigInt) {
    let exp = (p - 1u32) / 4u32;
    let minus_one = p - 1u32;
    let mut a = BigUint::from(2u32);
    let root = loop {
        let x = pow_mod(&a, &exp, p);
        if (&x * &x) % p == minus_one {
            break x;
        }
        a += 1u32;
    };
    let bound = p.sqrt();
    let (mut r0, mut r1) = (p.clone(), root);
    while r1 > bound {
        let r2 = &r0 % &r1;
        r0 = r1;
        r1 = r2;
    }
    let x = BigInt::from(r1);
    let y2 = BigInt::from(p.clone()) - &x * &x;
    let y = y2.magnitude().sqrt();
    (x, BigInt::from(y))
}

/// Integers `(x, y)` with `x² + y² = n`, if they exist.
pub fn two_squares(n: &BigUint) -> Option<(BigInt, BigInt)> {
    if n.is_zero() {
        return Some((BigInt::zero(), BigInt::zero()));
    }
    let mut re = BigInt::one();
    let mut im = BigInt::zero();
    for (p, e) in factorize(n) {
        let class = (&p % 4u32).to_u32().unwrap_or(0);
        let (gr, gi, times) = match class {
            3 if e % 2 == 1 => return None,
            3 => (BigInt::from(p.clone()), BigInt::zero(), e / 2),
            2 => (BigInt::one(), BigInt::one(), e),
            _ => {
                let (a, b) = prime_two_squares(&p);
                (a, b, e)
            }
        };
        for _ in 0..times {
            let nr = &re * &gr - &im * &gi;
            let ni = &re * &gi + &im * &gr;
            re = nr;
            im = ni;
        }
    }
    Some((re.abs(), im.abs()))
}

/// Rationals `(x, y)` with `x² + y² = q`, if they exist.
pub fn rational_two_squares(q: &BigRational) -> Option<(BigRational, BigRational)> {
    if q.is_negative() {
        return None;
    }
    let den = q.denom().clone();
    let prod = q.numer().magnitude() * den.magnitude();
    let (x, y) = two_squares(&prod)?;
    Some((
        BigRational::new(x, den.clone()),
        BigRational::new(y, den),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_two_squares(n: u64) -> bool {
        let mut x = 0u64;
        while x * x <= n {
            let r = n - x * x;
            let y = (r as f64).sqrt() as u64;
            if (y.saturating_sub(1)..=y + 1).any(|y| y * y == r) {
                return true;
            }
            x += 1;
        }
        false
    }

    #[test]
    fn two_squares_matches_brute_force() {
        for n in 0u64..2000 {
            let b = BigUint::from(n);
            assert_eq!(is_sum_of_two_squares(&b), brute_two_squares(n), "n = {n}");
            match two_squares(&b) {
                Some((x, y)) => assert_eq!(&x * &x + &y * &y, BigInt::from(n)),
                None => assert!(!brute_two_squares(n)),
            }
        }
    }

    #[test]
    fn factorizes_large_semiprime() {
        let p = BigUint::from(1_000_003u64);
        let q = BigUint::from(998_244_353u64);
        let f = factorize(&(&p * &q));
        assert_eq!(f.len(), 2);
        assert_eq!(f[&p], 1);
        assert_eq!(f[&q], 1);
    }

    #[test]
    fn three_is_not_two_squares_but_two_is() {
        assert!(!is_sum_of_two_squares(&BigUint::from(3u32)));
        assert!(is_sum_of_two_squares(&BigUint::from(2u32)));
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let (x, y) = rational_two_squares(&half).unwrap();
        assert_eq!(&x * &x + &y * &y, half);
    }
}
