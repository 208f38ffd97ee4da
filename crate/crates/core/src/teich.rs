//! Teichmüller representatives, p-adic digits, Frobenius, trace, and the
//! digit-truncation map into child rings R_{e-i,k}.
//!
//! The Teichmüller set T is the p^k fixed points of x -> x^{p^k}. Starting
//! from any lift of a residue class mod p, each application of the map gains
//! at least one p-adic digit of agreement with the fixed point of that class,
//! so e-1 iterations converge. Every z then has a unique expansion
//! z = z_0 + p z_1 + ... + p^{e-1} z_{e-1} with digits in T.

use crate::error::{Error, Result};
use crate::ring::{Ring, RingElement};
use crate::scalar::Residue;
use std::collections::HashMap;

/// Materializing T costs p^k ring elements; beyond this it is refused.
pub(crate) const TEICH_CAP: u64 = 1 << 20;

pub(crate) struct TeichData<T: Residue> {
    /// Fixed points, indexed by their residue class mod p (mixed-radix
    /// class index, least significant coordinate first).
    pub(crate) coeffs: Vec<Vec<T>>,
    pub(crate) by_residue: HashMap<Vec<u64>, u32>,
}

impl<T: Residue> TeichData<T> {
    fn compute(ring: &Ring<T>) -> Result<Self> {
        let p = ring.p();
        let k = ring.k();
        let pk = p
            .checked_pow(k)
            .filter(|&n| n <= TEICH_CAP)
            .ok_or_else(|| Error::CapExceeded {
                what: "teichmuller set size p^k",
                needed: format!("{p}^{k}"),
                cap: TEICH_CAP.to_string(),
            })?;
        let mut coeffs = Vec::with_capacity(pk as usize);
        let mut by_residue = HashMap::with_capacity(pk as usize);
        for class in 0..pk {
            let mut digits = Vec::with_capacity(k as usize);
            let mut rest = class;
            for _ in 0..k {
                digits.push(rest % p);
                rest /= p;
            }
            let mut z = ring.element_u64(&digits)?;
            for _ in 1..ring.e() {
                z = z.pow(pk);
            }
            if z.pow(pk) != z {
                return Err(Error::InternalCardinalityError {
                    what: "teichmuller fixed-point iteration",
                    expected: format!("fixed point over class {class}"),
                    got: z.to_string(),
                });
            }
            let key = residue_key(&z);
            if by_residue.insert(key, coeffs.len() as u32).is_some() {
                return Err(Error::InternalCardinalityError {
                    what: "teichmuller residue classes",
                    expected: pk.to_string(),
                    got: "collision".to_string(),
                });
            }
            coeffs.push(z.coeffs().to_vec());
        }
        Ok(TeichData { coeffs, by_residue })
    }
}

fn residue_key<T: Residue>(z: &RingElement<T>) -> Vec<u64> {
    let p = T::from_u64(z.ring().p());
    z.coeffs()
        .iter()
        .map(|c| c.rem_of(&p).to_u64().expect("residue below p"))
        .collect()
}

/// The p^k solutions of x^{p^k} = x, with a generator of the cyclic group
/// of nonzero solutions.
pub struct TeichmullerSet<T: Residue> {
    elements: Vec<RingElement<T>>,
    beta: RingElement<T>,
}

impl<T: Residue> TeichmullerSet<T> {
    pub fn elements(&self) -> &[RingElement<T>] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Generator of the order-(p^k - 1) group of nonzero representatives,
    /// the one with the smallest coefficient encoding.
    pub fn beta(&self) -> &RingElement<T> {
        &self.beta
    }

    pub fn contains(&self, z: &RingElement<T>) -> bool {
        self.elements.iter().any(|t| t == z)
    }
}

impl<T: Residue> Ring<T> {
    pub(crate) fn teich_data(&self) -> Result<&TeichData<T>> {
        match self.inner.teich.get_or_init(|| TeichData::compute(self)) {
            Ok(d) => Ok(d),
            Err(e) => Err(e.clone()),
        }
    }

    pub fn teichmuller_set(&self) -> Result<TeichmullerSet<T>> {
        let data = self.teich_data()?;
        let elements: Vec<RingElement<T>> = data
            .coeffs
            .iter()
            .map(|c| RingElement {
                ring: self.clone(),
                coeffs: c.clone(),
            })
            .collect();
        let pk = elements.len() as u64;
        if elements.len() != self.p().checked_pow(self.k()).unwrap() as usize {
            return Err(Error::InternalCardinalityError {
                what: "teichmuller set",
                expected: format!("{}^{}", self.p(), self.k()),
                got: elements.len().to_string(),
            });
        }
        let order = pk - 1;
        let prime_divisors = distinct_prime_factors(order);
        let mut candidates: Vec<&RingElement<T>> =
            elements.iter().filter(|t| !t.is_zero()).collect();
        candidates.sort();
        let beta = candidates
            .into_iter()
            .find(|t| {
                order == 1
                    || prime_divisors
                        .iter()
                        .all(|&q| !t.pow(order / q).is_one())
            })
            .ok_or(Error::InternalCardinalityError {
                what: "teichmuller generator",
                expected: format!("element of order {order}"),
                got: "none".to_string(),
            })?
            .clone();
        Ok(TeichmullerSet { elements, beta })
    }

    pub fn padic_compose(&self, digits: &PadicDigits<T>) -> Result<RingElement<T>> {
        if digits.digits.len() != self.e() as usize {
            return Err(Error::IndexOutOfRange {
                what: "digit count",
                index: digits.digits.len() as u32,
                limit: self.e(),
            });
        }
        let mut acc = self.zero();
        for (i, d) in digits.digits.iter().enumerate() {
            self.check_same(d.ring())?;
            acc = acc.add(&d.scale(&self.p_pow_scalar(i as u32)))?;
        }
        Ok(acc)
    }

}

pub struct PadicDigits<T: Residue> {
    digits: Vec<RingElement<T>>,
}

impl<T: Residue> PadicDigits<T> {
    pub fn digits(&self) -> &[RingElement<T>] {
        &self.digits
    }

    pub fn into_vec(self) -> Vec<RingElement<T>> {
        self.digits
    }
}

impl<T: Residue> RingElement<T> {
    /// Unique expansion z = z_0 + p z_1 + ... + p^{e-1} z_{e-1}, z_i in T.
    /// z_0 is the representative congruent to z mod p; strip it, divide by
    /// p coefficientwise, recurse.
    pub fn padic_digits(&self) -> Result<PadicDigits<T>> {
        let ring = self.ring();
        let e = ring.e();
        if e == 1 {
            // T is the whole field
            return Ok(PadicDigits {
                digits: vec![self.clone()],
            });
        }
        let data = ring.teich_data()?;
        let p = T::from_u64(ring.p());
        let m = ring.coeff_modulus();
        let mut cur = self.coeffs().to_vec();
        let mut digits = Vec::with_capacity(e as usize);
        for _ in 0..e {
            let key: Vec<u64> = cur
                .iter()
                .map(|c| c.rem_of(&p).to_u64().expect("residue below p"))
                .collect();
            let ti = data.by_residue[&key] as usize;
            let t = &data.coeffs[ti];
            for (c, tc) in cur.iter_mut().zip(t) {
                *c = c.sub_mod(tc, m).div_exact(&p);
            }
            digits.push(RingElement {
                ring: ring.clone(),
                coeffs: t.clone(),
            });
        }
        // leftover in cur is the carry past p^e and vanishes mod p^e
        Ok(PadicDigits { digits })
    }

    /// Digit-wise p-th power: an automorphism with phi^k = identity.
    pub fn frobenius(&self) -> Result<Self> {
        let ring = self.ring();
        let p = ring.p();
        if ring.e() == 1 {
            return Ok(self.pow(p));
        }
        let digits = self.padic_digits()?;
        let mut acc = ring.zero();
        for (i, d) in digits.digits.iter().enumerate() {
            acc = acc.add(&d.pow(p).scale(&ring.p_pow_scalar(i as u32)))?;
        }
        Ok(acc)
    }

    /// Tr(z) = z + phi(z) + ... + phi^{k-1}(z), a constant polynomial,
    /// returned as its residue mod p^e.
    pub fn trace(&self) -> Result<T> {
        let k = self.ring().k();
        let mut acc = self.clone();
        let mut cur = self.clone();
        for _ in 1..k {
            cur = cur.frobenius()?;
            acc = acc.add(&cur)?;
        }
        if acc.coeffs()[1..].iter().any(|c| !c.is_zero()) {
            return Err(Error::TraceNotConstant(self.to_string()));
        }
        Ok(acc.coeffs()[0].clone())
    }

    /// Character exponent: chi(z) is the p^e-th root of unity raised to
    /// this power, namely Tr(z) mod p^e.
    pub fn chi_exponent(&self) -> Result<u64> {
        self.trace()?.to_u64().ok_or_else(|| Error::CapExceeded {
            what: "character exponent modulus p^e",
            needed: self.ring().coeff_modulus().to_string(),
            cap: u64::MAX.to_string(),
        })
    }

    /// Truncate the digit expansion to its first e-i digits and recompose
    /// in R_{e-i,k}. The result lives in `self.ring().child_ring(i)`.
    pub fn rho(&self, i: u32) -> Result<RingElement<T>> {
        let ring = self.ring();
        let child = ring.child_ring(i)?;
        if i == 0 {
            return child.element(self.coeffs().to_vec());
        }
        let keep = (ring.e() - i) as usize;
        let digits = self.padic_digits()?;
        let cm = child.coeff_modulus();
        let mut acc = child.zero();
        for (j, d) in digits.digits[..keep].iter().enumerate() {
            let reduced = child.element(
                d.coeffs().iter().map(|c| c.rem_of(cm)).collect(),
            )?;
            acc = acc.add(&reduced.scale(&child.p_pow_scalar(j as u32)))?;
        }
        Ok(acc)
    }
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z9() -> Ring<u64> {
        Ring::new(3, 2, 1).unwrap()
    }

    fn gr42() -> Ring<u64> {
        Ring::with_poly_u64(2, 2, 2, &[1, 1, 1]).unwrap()
    }

    #[test]
    fn teichmuller_examples() {
        let t: Vec<u64> = z9()
            .teichmuller_set()
            .unwrap()
            .elements()
            .iter()
            .map(|z| z.coeffs()[0])
            .collect();
        assert_eq!(t, vec![0, 1, 8]);

        let f4 = Ring::<u64>::new(2, 1, 2).unwrap();
        assert_eq!(f4.teichmuller_set().unwrap().len(), 4);

        let z4 = Ring::<u64>::new(2, 2, 1).unwrap();
        let t: Vec<u64> = z4
            .teichmuller_set()
            .unwrap()
            .elements()
            .iter()
            .map(|z| z.coeffs()[0])
            .collect();
        assert_eq!(t, vec![0, 1]);
    }

    #[test]
    fn teichmuller_properties() {
        for ring in [gr42(), Ring::new(3, 2, 2).unwrap(), Ring::new(2, 3, 3).unwrap()] {
            let ts = ring.teichmuller_set().unwrap();
            let pk = ring.p().pow(ring.k());
            assert_eq!(ts.len() as u64, pk);
            for t in ts.elements() {
                assert_eq!(&t.pow(pk), t);
            }
            let beta = ts.beta();
            assert!(beta.pow(pk - 1).is_one());
            // full order: no smaller power hits 1
            for j in 1..pk - 1 {
                assert!(!beta.pow(j).is_one(), "beta order divides {j}");
            }
        }
    }

    #[test]
    fn digit_examples() {
        let r = z9();
        let five = r.constant_u64(5);
        let d = five.padic_digits().unwrap();
        let got: Vec<u64> = d.digits().iter().map(|z| z.coeffs()[0]).collect();
        assert_eq!(got, vec![8, 8]); // 8 + 3*8 = 32 = 5 mod 9

        // brute force the unique T-valued pair as an independent check
        let ts = r.teichmuller_set().unwrap();
        let mut hits = Vec::new();
        for a in ts.elements() {
            for b in ts.elements() {
                if a.add(&b.scale(&3)).unwrap() == five {
                    hits.push((a.coeffs()[0], b.coeffs()[0]));
                }
            }
        }
        assert_eq!(hits, vec![(8, 8)]);

        let zero_digits = r.zero().padic_digits().unwrap();
        assert!(zero_digits.digits().iter().all(|z| z.is_zero()));

        let g = gr42();
        let beta = g.teichmuller_set().unwrap().beta().clone();
        let d = beta.padic_digits().unwrap();
        assert_eq!(d.digits()[0], beta);
        assert!(d.digits()[1].is_zero());
    }

    #[test]
    fn digit_round_trip_exhaustive() {
        for ring in [gr42(), z9(), Ring::new(2, 3, 1).unwrap(), Ring::new(2, 2, 3).unwrap()] {
            let ts = ring.teichmuller_set().unwrap();
            for z in ring.elements() {
                let d = z.padic_digits().unwrap();
                for digit in d.digits() {
                    assert!(ts.contains(digit));
                }
                assert_eq!(ring.padic_compose(&d).unwrap(), z);
            }
        }
    }

    #[test]
    fn frobenius_examples() {
        let g = gr42();
        let x = g.element_u64(&[0, 1]).unwrap();
        let fx = x.frobenius().unwrap();
        assert_eq!(fx, g.element_u64(&[3, 3]).unwrap()); // x^2 since x in T
        assert_eq!(fx.frobenius().unwrap(), x); // phi^2 = id for k = 2
        for c in 0..4 {
            let z = g.constant_u64(c);
            assert_eq!(z.frobenius().unwrap(), z); // prime-ring constants fixed
        }
    }

    #[test]
    fn trace_examples() {
        let g = gr42();
        assert_eq!(g.element_u64(&[0, 1]).unwrap().trace().unwrap(), 3);
        assert_eq!(g.one().trace().unwrap(), 2);
        let r = z9();
        for z in r.elements() {
            assert_eq!(z.trace().unwrap(), z.coeffs()[0]); // k = 1
        }
    }

    #[test]
    fn rho_examples() {
        let r = z9();
        let five = r.constant_u64(5);
        let down = five.rho(1).unwrap();
        assert_eq!(down.ring().to_string(), "p=3 e=1 k=1 f=0,1");
        assert_eq!(down.coeffs()[0], 2); // first digit 8, reduced mod 3

        let g = Ring::<u64>::new(2, 3, 2).unwrap();
        for z in g.elements() {
            let same = z.rho(0).unwrap();
            assert_eq!(same.coeffs(), z.coeffs());
            assert!(same.ring().same_ring(z.ring()));
            // last truncation keeps just z_0 mod p
            let digits = z.padic_digits().unwrap();
            let d0 = &digits.digits()[0];
            let bottom = z.rho(g.e() - 1).unwrap();
            let p = bottom.ring().coeff_modulus();
            let want: Vec<u64> = d0.coeffs().iter().map(|c| c.rem_of(p).to_u64().unwrap()).collect();
            assert_eq!(bottom.coeffs(), &want[..]);
        }
        assert!(r.constant_u64(1).rho(2).is_err());
    }

    #[test]
    fn chi_exponent_examples() {
        let z4 = Ring::<u64>::new(2, 2, 1).unwrap();
        assert_eq!(z4.zero().chi_exponent().unwrap(), 0);
        assert_eq!(z4.constant_u64(2).chi_exponent().unwrap(), 2);
        assert_eq!(gr42().element_u64(&[0, 1]).unwrap().chi_exponent().unwrap(), 3);
    }
}
