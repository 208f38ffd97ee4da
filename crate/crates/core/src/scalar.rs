//! Coefficient scalars for ring elements.
//!
//! Residues live in `[0, p^e)`. The `u64` implementation covers every modulus
//! that fits a machine word (with 128-bit intermediates); `BigUint` is the
//! arbitrary-precision fallback for larger moduli.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::fmt::{Debug, Display};
use std::hash::Hash;

pub trait Residue:
    Clone + Eq + Ord + Hash + Debug + Display + Zero + One + Send + Sync + 'static
{
    fn from_u64(v: u64) -> Self;
    /// None when the value does not fit in a u64.
    fn to_u64(&self) -> Option<u64>;
    fn to_biguint(&self) -> BigUint;
    fn parse(s: &str) -> Option<Self>;

    /// Operands must already be reduced mod `m`.
    fn add_mod(&self, rhs: &Self, m: &Self) -> Self;
    fn sub_mod(&self, rhs: &Self, m: &Self) -> Self;
    fn mul_mod(&self, rhs: &Self, m: &Self) -> Self;
    fn rem_of(&self, m: &Self) -> Self;

    /// Exact quotient; caller guarantees divisibility.
    fn div_exact(&self, d: &Self) -> Self;
    fn divisible_by(&self, d: &Self) -> bool;

    /// `base^exp` in the scalar domain, None on overflow.
    fn checked_pow(base: u64, exp: u32) -> Option<Self>;
}

impl Residue for u64 {
    fn from_u64(v: u64) -> Self {
        v
    }

    fn to_u64(&self) -> Option<u64> {
        Some(*self)
    }

    fn to_biguint(&self) -> BigUint {
        BigUint::from(*self)
    }

    fn parse(s: &str) -> Option<Self> {
        s.parse().ok()
    }

    fn add_mod(&self, rhs: &Self, m: &Self) -> Self {
        // self, rhs < m <= 2^63 would allow plain addition; m may use all 64
        // bits, so go through the wrapping form.
        let (s, carry) = self.overflowing_add(*rhs);
        if carry || s >= *m {
            s.wrapping_sub(*m)
        } else {
            s
        }
    }

    fn sub_mod(&self, rhs: &Self, m: &Self) -> Self {
        if self >= rhs {
            self - rhs
        } else {
            m - rhs + self
        }
    }

    fn mul_mod(&self, rhs: &Self, m: &Self) -> Self {
        let prod = *self as u128 * *rhs as u128;
        if prod < (1u128 << 64) {
            (prod as u64) % *m
        } else {
            (prod % *m as u128) as u64
        }
    }

    fn rem_of(&self, m: &Self) -> Self {
        self % m
    }

    fn div_exact(&self, d: &Self) -> Self {
        debug_assert_eq!(self % d, 0);
        self / d
    }

    fn divisible_by(&self, d: &Self) -> bool {
        self.is_multiple_of(*d)
    }

    fn checked_pow(base: u64, exp: u32) -> Option<Self> {
        base.checked_pow(exp)
    }
}

impl Residue for BigUint {
    fn from_u64(v: u64) -> Self {
        BigUint::from(v)
    }

    fn to_u64(&self) -> Option<u64> {
        u64::try_from(self).ok()
    }

    fn to_biguint(&self) -> BigUint {
        self.clone()
    }

    fn parse(s: &str) -> Option<Self> {
        s.parse().ok()
    }

    fn add_mod(&self, rhs: &Self, m: &Self) -> Self {
        let s = self + rhs;
        if &s >= m {
            s - m
        } else {
            s
        }
    }

    fn sub_mod(&self, rhs: &Self, m: &Self) -> Self {
        if self >= rhs {
            self - rhs
        } else {
            m - rhs + self
        }
    }

    fn mul_mod(&self, rhs: &Self, m: &Self) -> Self {
        self * rhs % m
    }

    fn rem_of(&self, m: &Self) -> Self {
        self % m
    }

    fn div_exact(&self, d: &Self) -> Self {
        debug_assert!((self % d).is_zero());
        self / d
    }

    fn divisible_by(&self, d: &Self) -> bool {
        (self % d).is_zero()
    }

    fn checked_pow(base: u64, exp: u32) -> Option<Self> {
        Some(BigUint::from(base).pow(exp))
    }
}
