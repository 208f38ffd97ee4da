//! Exact arithmetic for threshold-sized quantities: finite sums of terms
//! c * sqrt(m) with c a nonnegative rational and m a nonnegative integer.
//!
//! Every threshold in the bounds module is such a sum (all exponents are
//! half-integers over one prime base). Single-term comparisons square both
//! sides and compare rationals, so they are exact. Multi-term comparisons
//! use certified dyadic enclosures sqrt(m) in
//! [isqrt(m*4^B)/2^B, (isqrt(m*4^B)+1)/2^B], widening B until the order
//! resolves or a cap is hit.

use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

const BIT_SCHEDULE: [u32; 7] = [64, 128, 256, 512, 1024, 2048, 4096];

/// Nonnegative value Sum_i c_i * sqrt(m_i), canonicalized: square parts of
/// each radicand pulled into the coefficient, equal radicands merged, zero
/// terms dropped. The prime base `p` only matters for display (log_p).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Magnitude {
    p: u64,
    terms: Vec<(BigRational, BigUint)>,
}

/// Pull square factors of the radicand into the coefficient. Trial division
/// stops at 997; whatever remains is checked once for being a perfect
/// square. Incomplete extraction only reduces term merging, never value.
fn canonical_term(coef: BigRational, radicand: BigUint) -> Option<(BigRational, BigUint)> {
    if coef.is_zero() || radicand.is_zero() {
        return None;
    }
    let mut coef = coef;
    let mut m = radicand;
    let mut inside = BigUint::one();
    let mut q = 2u64;
    while q <= 997 && !m.is_one() {
        let qq = BigUint::from(q);
        let mut count = 0u32;
        while (&m % &qq).is_zero() {
            m /= &qq;
            count += 1;
        }
        if count % 2 == 1 {
            inside *= &qq;
        }
        if count / 2 > 0 {
            coef *= BigRational::from(BigInt::from(qq.pow(count / 2)));
        }
        q = if q == 2 { 3 } else { q + 2 };
    }
    if !m.is_one() {
        let s = m.sqrt();
        if &s * &s == m {
            coef *= BigRational::from(BigInt::from(s));
            m = BigUint::one();
        }
    }
    Some((coef, m * inside))
}

impl Magnitude {
    pub fn zero(p: u64) -> Self {
        Magnitude { p, terms: Vec::new() }
    }

    pub fn from_rational(p: u64, value: BigRational) -> Result<Self> {
        Self::term(p, value, BigRational::one())
    }

    pub fn from_biguint(p: u64, value: &BigUint) -> Self {
        Self::from_rational(p, BigRational::from(BigInt::from(value.clone())))
            .expect("nonnegative integer")
    }

    /// coef * sqrt(radicand); both must be nonnegative.
    pub fn term(p: u64, coef: BigRational, radicand: BigRational) -> Result<Self> {
        if coef.is_negative() || radicand.is_negative() {
            return Err(Error::ParseError(format!(
                "magnitude terms must be nonnegative, got {coef} * sqrt({radicand})"
            )));
        }
        // sqrt(a/b) = sqrt(a*b)/b
        let (num, den) = (radicand.numer().clone(), radicand.denom().clone());
        let m = (num * &den).to_biguint().expect("nonnegative");
        let coef = coef / BigRational::from(den);
        let mut out = Magnitude { p, terms: Vec::new() };
        if let Some(t) = canonical_term(coef, m) {
            out.terms.push(t);
        }
        Ok(out)
    }

    pub fn base(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Some(value) iff the magnitude is rational (every radicand is 1).
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 if self.terms[0].1.is_one() => Some(self.terms[0].0.clone()),
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BigRational, &BigUint)> {
        self.terms.iter().map(|(c, m)| (c, m))
    }

    fn check_base(&self, other: &Self) -> Result<()> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(Error::RingMismatch {
                left: format!("magnitude base {}", self.p),
                right: format!("magnitude base {}", other.p),
            })
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_base(other)?;
        let mut terms = self.terms.clone();
        'outer: for (c, m) in &other.terms {
            for (tc, tm) in terms.iter_mut() {
                if tm == m {
                    *tc += c;
                    continue 'outer;
                }
            }
            terms.push((c.clone(), m.clone()));
        }
        terms.sort_by(|a, b| a.1.cmp(&b.1));
        Ok(Magnitude { p: self.p, terms })
    }

    pub fn scale(&self, factor: &BigRational) -> Result<Self> {
        if factor.is_negative() {
            return Err(Error::ParseError(format!(
                "magnitude scale factor must be nonnegative, got {factor}"
            )));
        }
        if factor.is_zero() {
            return Ok(Magnitude::zero(self.p));
        }
        Ok(Magnitude {
            p: self.p,
            terms: self
                .terms
                .iter()
                .map(|(c, m)| (c * factor, m.clone()))
                .collect(),
        })
    }

    /// Certified enclosure [lo, hi] of the value at B fractional bits per
    /// square root.
    fn enclosure(&self, bits: u32) -> (BigRational, BigRational) {
        let mut lo = BigRational::zero();
        let mut hi = BigRational::zero();
        let scale = BigInt::from(BigUint::one() << bits);
        for (c, m) in &self.terms {
            if m.is_one() {
                lo += c;
                hi += c;
                continue;
            }
            let s = (m << (2 * bits as usize)).sqrt();
            let s = BigInt::from(s);
            lo += c * BigRational::new(s.clone(), scale.clone());
            hi += c * BigRational::new(s + 1, scale.clone());
        }
        (lo, hi)
    }

    /// Exact square of a zero- or one-term magnitude.
    fn square_if_simple(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (c, m) = &self.terms[0];
                Some(c * c * BigRational::from(BigInt::from(m.clone())))
            }
            _ => None,
        }
    }

    /// Total order on values. Returns the ordering and the enclosure
    /// precision that resolved it (0 when the comparison was exact).
    pub fn cmp_with_bits(&self, other: &Self) -> Result<(Ordering, u32)> {
        self.check_base(other)?;
        if self.terms == other.terms {
            return Ok((Ordering::Equal, 0));
        }
        if let (Some(a), Some(b)) = (self.square_if_simple(), other.square_if_simple()) {
            // both nonnegative, so comparing squares is comparing values
            return Ok((a.cmp(&b), 0));
        }
        for bits in BIT_SCHEDULE {
            let (l1, u1) = self.enclosure(bits);
            let (l2, u2) = other.enclosure(bits);
            if u1 < l2 {
                return Ok((Ordering::Less, bits));
            }
            if l1 > u2 {
                return Ok((Ordering::Greater, bits));
            }
        }
        Err(Error::PrecisionCapExceeded {
            bits: BIT_SCHEDULE[BIT_SCHEDULE.len() - 1],
        })
    }

    pub fn cmp_value(&self, other: &Self) -> Result<Ordering> {
        self.cmp_with_bits(other).map(|(o, _)| o)
    }

    pub fn cmp_biguint(&self, n: &BigUint) -> Result<Ordering> {
        self.cmp_value(&Magnitude::from_biguint(self.p, n))
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(c, m)| rational_to_f64_via_ln(c) * ln_biguint(m).exp().sqrt().max(0.0))
            .sum()
    }

    /// log base p of the value; -inf for zero.
    pub fn log_p(&self) -> f64 {
        if self.terms.is_empty() {
            return f64::NEG_INFINITY;
        }
        let lnp = (self.p as f64).ln();
        let logs: Vec<f64> = self
            .terms
            .iter()
            .map(|(c, m)| ln_rational(c) + ln_biguint(m) / 2.0)
            .collect();
        let max = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let sum: f64 = logs.iter().map(|l| (l - max).exp()).sum();
        (max + sum.ln()) / lnp
    }
}

fn ln_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 53 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 53;
    let top = (x >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

fn ln_rational(x: &BigRational) -> f64 {
    ln_biguint(x.numer().magnitude()) - ln_biguint(x.denom().magnitude())
}

fn rational_to_f64_via_ln(x: &BigRational) -> f64 {
    if x.is_zero() {
        0.0
    } else {
        ln_rational(x).exp()
    }
}

impl fmt::Display for Magnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{r}");
        }
        write!(f, "~{}^{:.6}", self.p, self.log_p())
    }
}
