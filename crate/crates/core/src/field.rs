//! Exact arithmetic in prime fields with 64-bit moduli.
//!
//! All intermediate products go through 128-bit widening, so any odd prime
//! modulus below 2^64 is handled without bignum support.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// An element of F_p, kept reduced to the canonical range `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    modulus: u64,
}

impl FieldElement {
    /// Reduces `value` into `[0, p)`. The modulus is taken on trust here;
    /// curve construction is where primality gets checked.
    pub fn new(value: u64, modulus: u64) -> Self {
        debug_assert!(modulus >= 2);
        Self {
            value: value % modulus,
            modulus,
        }
    }

    /// Canonical representative of a signed integer mod p.
    pub fn from_i128(value: i128, modulus: u64) -> Self {
        let m = modulus as i128;
        Self {
            value: value.rem_euclid(m) as u64,
            modulus,
        }
    }

    pub fn zero(modulus: u64) -> Self {
        Self::new(0, modulus)
    }

    pub fn one(modulus: u64) -> Self {
        Self::new(1, modulus)
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inv(&self) -> Result<Self> {
        if self.value == 0 {
            return Err(Error::ZeroInverse);
        }
        // Invariant: old_r = old_s * p + old_t * value (signed bookkeeping).
        let (mut old_r, mut r) = (self.modulus as i128, self.value as i128);
        let (mut old_t, mut t) = (0i128, 1i128);
        while r != 0 {
            let q = old_r / r;
            (old_r, r) = (r, old_r - q * r);
            (old_t, t) = (t, old_t - q * t);
        }
        debug_assert_eq!(old_r, 1, "modulus must be prime");
        Ok(Self::from_i128(old_t, self.modulus))
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut base = *self;
        let mut acc = Self::one(self.modulus);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            exp >>= 1;
        }
        acc
    }

    fn check_same_modulus(&self, other: &Self) {
        assert_eq!(
            self.modulus, other.modulus,
            "field operations require equal moduli"
        );
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        self.check_same_modulus(&rhs);
        let sum = (self.value as u128 + rhs.value as u128) % self.modulus as u128;
        FieldElement {
            value: sum as u64,
            modulus: self.modulus,
        }
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        self.check_same_modulus(&rhs);
        let m = self.modulus as u128;
        let diff = (self.value as u128 + m - rhs.value as u128) % m;
        FieldElement {
            value: diff as u64,
            modulus: self.modulus,
        }
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        self.check_same_modulus(&rhs);
        let prod = (self.value as u128 * rhs.value as u128) % self.modulus as u128;
        FieldElement {
            value: prod as u64,
            modulus: self.modulus,
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::zero(self.modulus) - self
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers, restricted to odd p >= 3.
pub fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p % 2 == 0 {
        return false;
    }
    let d = p - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    // This base set is a proven witness set for all n < 2^64.
    for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if a % p == 0 {
            continue;
        }
        let mut x = pow_mod(a, d, p);
        if x == 1 || x == p - 1 {
            continue;
        }
        let mut witness = true;
        for _ in 1..s {
            x = mul_mod(x, x, p);
            if x == p - 1 {
                witness = false;
                break;
            }
        }
        if witness {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn fe(v: u64, p: u64) -> FieldElement {
        FieldElement::new(v, p)
    }

    #[test]
    fn inverse_identity_mod_3() {
        assert_eq!(fe(1, 3).inv().unwrap(), fe(1, 3));
    }

    #[test]
    fn inverse_of_two_mod_3() {
        // 2 * 2 = 4 = 1 mod 3
        assert_eq!(fe(2, 3).inv().unwrap(), fe(2, 3));
    }

    #[test]
    fn inverse_mod_1021_matches_fermat_oracle() {
        // Independent route: Fermat's little theorem, z = x^(p-2).
        let x = fe(74, 1021);
        let z = x.inv().unwrap();
        assert_eq!(z, x.pow(1021 - 2));
        assert_eq!(x * z, fe(1, 1021));
    }

    #[test]
    fn zero_has_no_inverse() {
        assert!(matches!(fe(0, 7).inv(), Err(Error::ZeroInverse)));
    }

    #[test]
    fn field_axioms_randomized() {
        let mut rng = StdRng::seed_from_u64(0x5eed);
        for &p in &[3u64, 5, 7, 11, 1021, 65521, 4294967291] {
            for _ in 0..120 {
                let a = fe(rng.gen(), p);
                let b = fe(rng.gen(), p);
                let c = fe(rng.gen(), p);
                assert_eq!((a + b) + c, a + (b + c));
                assert_eq!((a * b) * c, a * (b * c));
                assert_eq!(a * (b + c), a * b + a * c);
                assert_eq!(a + b, b + a);
                assert_eq!(a * b, b * a);
                assert_eq!(a - a, fe(0, p));
                assert_eq!(a + (-a), fe(0, p));
                if !a.is_zero() {
                    assert_eq!(a * a.inv().unwrap(), fe(1, p));
                }
            }
        }
    }

    #[test]
    fn primality_check() {
        assert!(is_odd_prime(3));
        assert!(is_odd_prime(1021));
        assert!(is_odd_prime(4294967291));
        assert!(!is_odd_prime(1));
        assert!(!is_odd_prime(2));
        assert!(!is_odd_prime(9));
        assert!(!is_odd_prime(1023));
    }
}
