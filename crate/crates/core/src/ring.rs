//! Galois rings R = Z_{p^e}[x]/(f) with f monic of degree k, irreducible
//! mod p. Elements are length-k coefficient vectors over Z_{p^e}, constant
//! term first. k = 1 gives Z_{p^e}, e = 1 gives F_{p^k}.

use crate::error::{Error, Result};
use crate::modp;
use crate::scalar::Residue;
use crate::teich::TeichData;
use num_bigint::BigUint;
use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, OnceLock};

pub(crate) struct RingInner<T: Residue> {
    pub(crate) p: u64,
    pub(crate) e: u32,
    pub(crate) k: u32,
    /// k+1 coefficients, constant first, leading coefficient 1.
    pub(crate) f: Vec<T>,
    /// p^e
    pub(crate) modulus: T,
    pub(crate) p_scalar: T,
    pub(crate) teich: OnceLock<Result<TeichData<T>>>,
}

pub struct Ring<T: Residue> {
    pub(crate) inner: Arc<RingInner<T>>,
}

impl<T: Residue> Clone for Ring<T> {
    fn clone(&self) -> Self {
        Ring {
            inner: Arc::clone(&self.inner),
        }
    }
}

impl<T: Residue> Ring<T> {
    /// Ring with the default defining polynomial: the lexicographically
    /// smallest monic irreducible of degree k mod p (constant term first),
    /// coefficients lifted verbatim.
    pub fn new(p: u64, e: u32, k: u32) -> Result<Self> {
        let f = modp::default_poly(p, k as usize)
            .into_iter()
            .map(T::from_u64)
            .collect();
        Self::with_poly(p, e, k, f)
    }

    pub fn with_poly(p: u64, e: u32, k: u32, f: Vec<T>) -> Result<Self> {
        if !modp::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 || k == 0 {
            return Err(Error::ParseError(format!(
                "ring exponents must be at least 1, got e={e} k={k}"
            )));
        }
        let modulus =
            T::checked_pow(p, e).ok_or(Error::ScalarOverflow { p, e })?;
        if f.len() != k as usize + 1 {
            return Err(Error::DegreeMismatch {
                got: f.len().saturating_sub(1),
                want: k as usize,
            });
        }
        let f: Vec<T> = f.into_iter().map(|c| c.rem_of(&modulus)).collect();
        if !f[k as usize].is_one() {
            // a non-monic lift cannot define the quotient we promise
            return Err(Error::DegreeMismatch {
                got: k as usize,
                want: k as usize,
            });
        }
        let f_mod_p: Vec<u64> = f
            .iter()
            .map(|c| c.rem_of(&T::from_u64(p)).to_u64().expect("residue < p"))
            .collect();
        if !modp::is_irreducible(&f_mod_p, p) {
            let shown = f
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",");
            return Err(Error::NotIrreducible(shown, p));
        }
        Ok(Ring {
            inner: Arc::new(RingInner {
                p,
                e,
                k,
                f,
                modulus,
                p_scalar: T::from_u64(p),
                teich: OnceLock::new(),
            }),
        })
    }

    pub fn with_poly_u64(p: u64, e: u32, k: u32, f: &[u64]) -> Result<Self> {
        Self::with_poly(p, e, k, f.iter().map(|&c| T::from_u64(c)).collect())
    }

    /// `p=2 e=3 k=2 f=1,1,1`, constant-first coefficients; f optional.
    pub fn parse_descriptor(s: &str) -> Result<Self> {
        let mut p = None;
        let mut e = None;
        let mut k = None;
        let mut f: Option<Vec<T>> = None;
        for tok in s.split_whitespace() {
            let (key, val) = tok
                .split_once('=')
                .ok_or_else(|| Error::ParseError(format!("bad descriptor token {tok:?}")))?;
            match key {
                "p" => p = Some(parse_u64(val)?),
                "e" => e = Some(parse_u64(val)? as u32),
                "k" => k = Some(parse_u64(val)? as u32),
                "f" => {
                    let coeffs = val
                        .split(',')
                        .map(|c| {
                            T::parse(c.trim()).ok_or_else(|| {
                                Error::ParseError(format!("bad coefficient {c:?}"))
                            })
                        })
                        .collect::<Result<Vec<T>>>()?;
                    f = Some(coeffs);
                }
                _ => return Err(Error::ParseError(format!("unknown descriptor key {key:?}"))),
            }
        }
        let (p, e, k) = match (p, e, k) {
            (Some(p), Some(e), Some(k)) => (p, e, k),
            _ => {
                return Err(Error::ParseError(
                    "descriptor requires p=, e=, k=".to_string(),
                ))
            }
        };
        match f {
            Some(f) => Self::with_poly(p, e, k, f),
            None => Self::new(p, e, k),
        }
    }

    pub fn p(&self) -> u64 {
        self.inner.p
    }

    pub fn e(&self) -> u32 {
        self.inner.e
    }

    pub fn k(&self) -> u32 {
        self.inner.k
    }

    pub fn poly(&self) -> &[T] {
        &self.inner.f
    }

    /// p^e, the coefficient modulus.
    pub fn coeff_modulus(&self) -> &T {
        &self.inner.modulus
    }

    pub fn cardinality(&self) -> BigUint {
        BigUint::from(self.inner.p).pow(self.inner.e * self.inner.k)
    }

    pub fn unit_count(&self) -> BigUint {
        let p = BigUint::from(self.inner.p);
        p.pow(self.inner.e * self.inner.k) - p.pow((self.inner.e - 1) * self.inner.k)
    }

    /// |(p^i)| = p^{(e-i)k} for 0 <= i <= e.
    pub fn ideal_size(&self, i: u32) -> Result<BigUint> {
        if i > self.inner.e {
            return Err(self.index_err("ideal exponent", i, self.inner.e));
        }
        Ok(BigUint::from(self.inner.p).pow((self.inner.e - i) * self.inner.k))
    }

    /// |[p^i]| = |(p^i)| - |(p^{i+1})| for 0 <= i < e.
    pub fn layer_size(&self, i: u32) -> Result<BigUint> {
        if i >= self.inner.e {
            return Err(self.index_err("layer exponent", i, self.inner.e - 1));
        }
        Ok(self.ideal_size(i)? - self.ideal_size(i + 1)?)
    }

    /// p^{ek} when it fits a u64.
    pub fn size_u64(&self) -> Option<u64> {
        let ek = self.inner.e.checked_mul(self.inner.k)?;
        self.inner.p.checked_pow(ek)
    }

    pub fn zero(&self) -> RingElement<T> {
        RingElement {
            ring: self.clone(),
            coeffs: vec![T::zero(); self.inner.k as usize],
        }
    }

    pub fn one(&self) -> RingElement<T> {
        self.constant(T::one())
    }

    pub fn constant(&self, c: T) -> RingElement<T> {
        let mut coeffs = vec![T::zero(); self.inner.k as usize];
        coeffs[0] = c.rem_of(&self.inner.modulus);
        RingElement {
            ring: self.clone(),
            coeffs,
        }
    }

    pub fn constant_u64(&self, c: u64) -> RingElement<T> {
        self.constant(T::from_u64(c))
    }

    /// The scalar p^n as a ring constant, n <= e.
    pub fn p_power_constant(&self, n: u32) -> Result<RingElement<T>> {
        if n > self.inner.e {
            return Err(self.index_err("power of p", n, self.inner.e));
        }
        Ok(self.constant(self.p_pow_scalar(n)))
    }

    pub(crate) fn p_pow_scalar(&self, n: u32) -> T {
        // p^n for n < e stays below the modulus; n = e wraps to 0.
        let mut acc = T::one();
        for _ in 0..n {
            acc = acc.mul_mod(&self.inner.p_scalar, &self.inner.modulus);
        }
        acc
    }

    /// Element from explicit coefficients (constant first, at most k),
    /// reduced mod p^e.
    pub fn element(&self, coeffs: Vec<T>) -> Result<RingElement<T>> {
        if coeffs.len() > self.inner.k as usize {
            return Err(Error::DegreeMismatch {
                got: coeffs.len() - 1,
                want: self.inner.k as usize - 1,
            });
        }
        let mut c: Vec<T> = coeffs
            .into_iter()
            .map(|v| v.rem_of(&self.inner.modulus))
            .collect();
        c.resize(self.inner.k as usize, T::zero());
        Ok(RingElement {
            ring: self.clone(),
            coeffs: c,
        })
    }

    pub fn element_u64(&self, coeffs: &[u64]) -> Result<RingElement<T>> {
        self.element(coeffs.iter().map(|&c| T::from_u64(c)).collect())
    }

    /// Comma-separated coefficients, constant first: `3,1` is x+3.
    pub fn parse_element(&self, s: &str) -> Result<RingElement<T>> {
        let coeffs = s
            .split(',')
            .map(|c| {
                T::parse(c.trim())
                    .ok_or_else(|| Error::ParseError(format!("bad coefficient {c:?}")))
            })
            .collect::<Result<Vec<T>>>()?;
        self.element(coeffs)
    }

    pub fn same_ring(&self, other: &Ring<T>) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p
                && self.inner.e == other.inner.e
                && self.inner.k == other.inner.k
                && self.inner.f == other.inner.f)
    }

    pub(crate) fn check_same(&self, other: &Ring<T>) -> Result<()> {
        if self.same_ring(other) {
            Ok(())
        } else {
            Err(Error::RingMismatch {
                left: self.to_string(),
                right: other.to_string(),
            })
        }
    }

    fn index_err(&self, what: &'static str, index: u32, limit: u32) -> Error {
        Error::IndexOutOfRange { what, index, limit }
    }

    /// R_{e-i,k} with the same defining polynomial reduced mod p^{e-i}.
    pub fn child_ring(&self, i: u32) -> Result<Ring<T>> {
        if i >= self.inner.e {
            return Err(self.index_err("ring reduction", i, self.inner.e - 1));
        }
        Ring::with_poly(
            self.inner.p,
            self.inner.e - i,
            self.inner.k,
            self.inner.f.clone(),
        )
    }

    pub fn elements(&self) -> ElementsIter<T> {
        ElementsIter::new(self.clone(), T::one())
    }

    pub fn units(&self) -> impl Iterator<Item = RingElement<T>> {
        self.elements().filter(|z| z.is_unit())
    }

    /// The ideal (p^i), 0 <= i <= e; i = e yields just zero.
    pub fn ideal_elements(&self, i: u32) -> Result<ElementsIter<T>> {
        if i > self.inner.e {
            return Err(self.index_err("ideal exponent", i, self.inner.e));
        }
        let step = if i == self.inner.e {
            self.inner.modulus.clone()
        } else {
            self.p_pow_scalar(i)
        };
        Ok(ElementsIter::new(self.clone(), step))
    }

    /// The layer [p^i] = (p^i) \ (p^{i+1}), 0 <= i < e.
    pub fn layer_elements(&self, i: u32) -> Result<impl Iterator<Item = RingElement<T>>> {
        if i >= self.inner.e {
            return Err(self.index_err("layer exponent", i, self.inner.e - 1));
        }
        Ok(self.ideal_elements(i)?.filter(move |z| z.valuation() == i))
    }

    /// Product of coefficient slices into `work`; after the call
    /// `work[..k]` holds the reduced product. No allocation when `work`
    /// already has capacity 2k-1.
    pub(crate) fn mul_into(&self, a: &[T], b: &[T], work: &mut Vec<T>) {
        let k = self.inner.k as usize;
        let m = &self.inner.modulus;
        work.clear();
        work.resize(2 * k - 1, T::zero());
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                let t = ai.mul_mod(bj, m);
                work[i + j] = work[i + j].add_mod(&t, m);
            }
        }
        // fold degrees >= k using x^k = -(f_0 + f_1 x + ... + f_{k-1} x^{k-1})
        for deg in (k..2 * k - 1).rev() {
            let c = std::mem::replace(&mut work[deg], T::zero());
            if c.is_zero() {
                continue;
            }
            for j in 0..k {
                if self.inner.f[j].is_zero() {
                    continue;
                }
                let t = c.mul_mod(&self.inner.f[j], m);
                work[deg - k + j] = work[deg - k + j].sub_mod(&t, m);
            }
        }
    }

    pub(crate) fn coeffs_of_index(&self, mut idx: u64) -> Vec<T> {
        let m = self
            .inner
            .modulus
            .to_u64()
            .expect("indexing requires a word-size modulus");
        let k = self.inner.k as usize;
        let mut c = Vec::with_capacity(k);
        for _ in 0..k {
            c.push(T::from_u64(idx % m));
            idx /= m;
        }
        c
    }

    pub fn element_of_index(&self, idx: u64) -> RingElement<T> {
        RingElement {
            ring: self.clone(),
            coeffs: self.coeffs_of_index(idx),
        }
    }
}

fn parse_u64(s: &str) -> Result<u64> {
    s.parse()
        .map_err(|_| Error::ParseError(format!("bad integer {s:?}")))
}

impl<T: Residue> fmt::Display for Ring<T> {
    fn fmt(&self, w: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            w,
            "p={} e={} k={} f={}",
            self.inner.p,
            self.inner.e,
            self.inner.k,
            self.inner
                .f
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",")
        )
    }
}

impl<T: Residue> fmt::Debug for Ring<T> {
    fn fmt(&self, w: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(w, "Ring({self})")
    }
}

pub struct RingElement<T: Residue> {
    pub(crate) ring: Ring<T>,
    pub(crate) coeffs: Vec<T>,
}

impl<T: Residue> Clone for RingElement<T> {
    fn clone(&self) -> Self {
        RingElement {
            ring: self.ring.clone(),
            coeffs: self.coeffs.clone(),
        }
    }
}

impl<T: Residue> RingElement<T> {
    pub fn ring(&self) -> &Ring<T> {
        &self.ring
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// Unit iff some coefficient is not divisible by p.
    pub fn is_unit(&self) -> bool {
        self.coeffs
            .iter()
            .any(|c| !c.divisible_by(&self.ring.inner.p_scalar))
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.ring.check_same(&rhs.ring)?;
        let m = &self.ring.inner.modulus;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a.add_mod(b, m))
            .collect();
        Ok(RingElement {
            ring: self.ring.clone(),
            coeffs,
        })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.ring.check_same(&rhs.ring)?;
        let m = &self.ring.inner.modulus;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a.sub_mod(b, m))
            .collect();
        Ok(RingElement {
            ring: self.ring.clone(),
            coeffs,
        })
    }

    pub fn neg(&self) -> Self {
        let m = &self.ring.inner.modulus;
        let z = T::zero();
        RingElement {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|c| z.sub_mod(c, m)).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.ring.check_same(&rhs.ring)?;
        let mut work = Vec::new();
        self.ring.mul_into(&self.coeffs, &rhs.coeffs, &mut work);
        work.truncate(self.ring.inner.k as usize);
        Ok(RingElement {
            ring: self.ring.clone(),
            coeffs: work,
        })
    }

    /// Coefficientwise scalar multiple.
    pub fn scale(&self, c: &T) -> Self {
        let m = &self.ring.inner.modulus;
        let c = c.rem_of(m);
        RingElement {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|v| v.mul_mod(&c, m)).collect(),
        }
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.ring.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base).expect("same ring");
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base).expect("same ring");
            }
        }
        acc
    }

    pub fn pow_big(&self, exp: &BigUint) -> Self {
        let mut acc = self.ring.one();
        let bits = exp.bits();
        for i in (0..bits).rev() {
            acc = acc.mul(&acc).expect("same ring");
            if exp.bit(i) {
                acc = acc.mul(self).expect("same ring");
            }
        }
        acc
    }

    /// Inverse of a unit by Hensel lifting of the mod-p inverse.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotAUnit(self.to_string()));
        }
        let ring = &self.ring;
        let p = ring.inner.p;
        let f_mod_p: Vec<u64> = ring
            .inner
            .f
            .iter()
            .map(|c| c.rem_of(&ring.inner.p_scalar).to_u64().unwrap())
            .collect();
        let a_mod_p: Vec<u64> = self
            .coeffs
            .iter()
            .map(|c| c.rem_of(&ring.inner.p_scalar).to_u64().unwrap())
            .collect();
        let inv0 = modp::poly_inverse(&a_mod_p, &f_mod_p, p)
            .expect("unit image mod p is invertible");
        let mut u = ring.element_u64(&inv0)?;
        // Newton: u <- u(2 - z u), doubling the p-adic precision each step.
        let two = ring.constant_u64(2);
        let mut prec = 1u32;
        while prec < ring.inner.e {
            let zu = self.mul(&u)?;
            u = u.mul(&two.sub(&zu)?)?;
            prec *= 2;
        }
        debug_assert!(self.mul(&u).unwrap().is_one());
        Ok(u)
    }

    /// Largest i with z in (p^i); valuation(0) = e.
    pub fn valuation(&self) -> u32 {
        let e = self.ring.inner.e;
        let p = &self.ring.inner.p_scalar;
        let mut min_v = e;
        for c in &self.coeffs {
            if c.is_zero() {
                continue;
            }
            let mut v = 0u32;
            let mut cur = c.clone();
            while v < min_v && cur.divisible_by(p) {
                cur = cur.div_exact(p);
                v += 1;
            }
            if v < min_v {
                min_v = v;
            }
            if min_v == 0 {
                break;
            }
        }
        min_v
    }
}

impl<T: Residue> PartialEq for RingElement<T> {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same_ring(&other.ring) && self.coeffs == other.coeffs
    }
}

impl<T: Residue> Eq for RingElement<T> {}

impl<T: Residue> std::hash::Hash for RingElement<T> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

/// Order by coefficient encoding: most significant coefficient last.
impl<T: Residue> Ord for RingElement<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs.iter().rev().cmp(other.coeffs.iter().rev())
    }
}

impl<T: Residue> PartialOrd for RingElement<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Residue> fmt::Display for RingElement<T> {
    fn fmt(&self, w: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self
            .coeffs
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",");
        write!(w, "{s}")
    }
}

impl<T: Residue> fmt::Debug for RingElement<T> {
    fn fmt(&self, w: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(w, "[{self}]")
    }
}

/// Odometer over coefficient vectors with a fixed step dividing p^e.
/// Step 1 enumerates the ring, step p^i the ideal (p^i).
pub struct ElementsIter<T: Residue> {
    ring: Ring<T>,
    next: Option<Vec<T>>,
    step: T,
}

impl<T: Residue> ElementsIter<T> {
    fn new(ring: Ring<T>, step: T) -> Self {
        let k = ring.inner.k as usize;
        ElementsIter {
            ring,
            next: Some(vec![T::zero(); k]),
            step,
        }
    }
}

impl<T: Residue> Iterator for ElementsIter<T> {
    type Item = RingElement<T>;

    fn next(&mut self) -> Option<Self::Item> {
        let cur = self.next.take()?;
        let m = &self.ring.inner.modulus;
        let mut succ = cur.clone();
        let mut exhausted = true;
        for c in succ.iter_mut() {
            *c = c.add_mod(&self.step, m);
            // wrapping to zero carries into the next coefficient
            if !c.is_zero() {
                exhausted = false;
                break;
            }
        }
        if !exhausted {
            self.next = Some(succ);
        }
        Some(RingElement {
            ring: self.ring.clone(),
            coeffs: cur,
        })
    }
}
