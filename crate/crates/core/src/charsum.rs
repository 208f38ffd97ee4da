//! Additive character sums evaluated exactly as cyclotomic integers.
//!
//! chi(z) = zeta^{Tr(z)} with zeta = e^{2*pi*i/p^e}. Sums of such values
//! are kept as integer coefficient vectors over the canonical basis
//! 1, zeta, ..., zeta^{phi-1} with phi = p^{e-1}(p-1), so equality and
//! integrality are coefficient checks, never float comparisons.

use crate::error::{Error, Result};
use crate::ring::{Ring, RingElement};
use crate::scalar::Residue;
use num_complex::Complex64;
use std::borrow::Borrow;
use std::fmt;

/// Coefficient vectors grow linearly in p^e; refuse beyond this.
const MODULUS_CAP: u64 = 1 << 20;

/// Integer combination of p^e-th roots of unity in canonical form:
/// only exponents below phi = p^{e-1}(p-1) carry coefficients, via the
/// relation zeta^{phi+s} = -(zeta^s + zeta^{s+p^{e-1}} + ... ) from the
/// minimal polynomial of zeta.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CyclotomicSum {
    p: u64,
    e: u32,
    modulus: u64,
    coeffs: Vec<i64>,
}

impl CyclotomicSum {
    pub fn zero_for(p: u64, e: u32) -> Result<Self> {
        if p < 2 || e == 0 {
            return Err(Error::ParseError(format!(
                "cyclotomic modulus needs p >= 2 and e >= 1, got p={p} e={e}"
            )));
        }
        let modulus = p
            .checked_pow(e)
            .filter(|&m| m <= MODULUS_CAP)
            .ok_or_else(|| Error::CapExceeded {
                what: "cyclotomic modulus p^e",
                needed: format!("{p}^{e}"),
                cap: MODULUS_CAP.to_string(),
            })?;
        let phi = (modulus / p) * (p - 1);
        Ok(CyclotomicSum {
            p,
            e,
            modulus,
            coeffs: vec![0; phi as usize],
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    /// p^e, the order of the root of unity.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Canonical coefficients, indexed by exponent 0..p^{e-1}(p-1).
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Add multiplicity * zeta^exponent, reducing into the canonical basis.
    #[inline]
    pub fn add_root(&mut self, exponent: u64, multiplicity: i64) {
        if multiplicity == 0 {
            return;
        }
        let exp = exponent % self.modulus;
        let phi = self.coeffs.len() as u64;
        if exp < phi {
            self.coeffs[exp as usize] += multiplicity;
        } else {
            let s = exp - phi;
            let step = self.modulus / self.p;
            for r in 0..self.p - 1 {
                self.coeffs[(s + r * step) as usize] -= multiplicity;
            }
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.modulus == other.modulus {
            Ok(())
        } else {
            Err(Error::RingMismatch {
                left: format!("cyclotomic mod={}", self.modulus),
                right: format!("cyclotomic mod={}", other.modulus),
            })
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (c, o) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *c += o;
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c = -*c;
        }
        out
    }

    pub fn scale(&self, factor: i64) -> Self {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c *= factor;
        }
        out
    }

    /// Complex conjugate: zeta^j maps to zeta^{-j}.
    pub fn conj(&self) -> Self {
        let mut out = CyclotomicSum {
            p: self.p,
            e: self.e,
            modulus: self.modulus,
            coeffs: vec![0; self.coeffs.len()],
        };
        for (j, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                out.add_root((self.modulus - j as u64) % self.modulus, c);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Some(n) iff the sum is the rational integer n.
    pub fn integer_value(&self) -> Option<i64> {
        if self.coeffs[1..].iter().all(|&c| c == 0) {
            Some(self.coeffs[0])
        } else {
            None
        }
    }

    /// Reinterpret in the cyclotomic field of order p^{e_target} >= p^e;
    /// zeta_{p^e} = zeta_{p^{e_target}}^{p^{e_target - e}}.
    pub fn embed_into(&self, e_target: u32) -> Result<Self> {
        if e_target < self.e {
            return Err(Error::IndexOutOfRange {
                what: "cyclotomic embedding exponent",
                index: e_target,
                limit: self.e,
            });
        }
        let mut out = CyclotomicSum::zero_for(self.p, e_target)?;
        let factor = out.modulus / self.modulus;
        for (j, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                out.add_root(j as u64 * factor, c);
            }
        }
        Ok(out)
    }

    pub fn to_complex(&self) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                let theta = 2.0 * std::f64::consts::PI * j as f64 / self.modulus as f64;
                acc += Complex64::new(theta.cos(), theta.sin()) * c as f64;
            }
        }
        acc
    }

    /// `mod=p^e; [j:coeff, ...]`, optionally followed by `re,im` to 12
    /// places.
    pub fn render(&self, with_complex: bool) -> String {
        let mut body = String::new();
        for (j, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                if !body.is_empty() {
                    body.push_str(", ");
                }
                body.push_str(&format!("{j}:{c}"));
            }
        }
        let mut out = format!("mod={}; [{}]", self.modulus, body);
        if with_complex {
            let v = self.to_complex();
            out.push_str(&format!(" {:.12},{:.12}", v.re, v.im));
        }
        out
    }
}

impl fmt::Display for CyclotomicSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

/// Exact Sum_{z in domain} chi(a*z).
///
/// Exponents are linear in the coordinates of z: Tr(a*z) =
/// Sum_i z_i * Tr(a*x^i), so one trace per basis vector suffices and the
/// per-element work is k multiplications mod p^e.
pub fn char_sum<T, I>(domain: I, a: &RingElement<T>) -> Result<CyclotomicSum>
where
    T: Residue,
    I: IntoIterator,
    I::Item: Borrow<RingElement<T>>,
{
    let ring = a.ring();
    let mut sum = CyclotomicSum::zero_for(ring.p(), ring.e())?;
    let m = sum.modulus();
    let k = ring.k() as usize;
    let mut basis_exp = Vec::with_capacity(k);
    for i in 0..k {
        let mut coeffs = vec![0u64; k];
        coeffs[i] = 1;
        let xi = ring.element_u64(&coeffs)?;
        basis_exp.push(a.mul(&xi)?.chi_exponent()?);
    }
    for z in domain {
        let z = z.borrow();
        ring.check_same(z.ring())?;
        let mut exp = 0u64;
        let mut fast = true;
        for (c, be) in z.coeffs().iter().zip(&basis_exp) {
            match c.to_u64() {
                // c < p^e <= 2^20 and be < 2^20 keep this within u64
                Some(c) => exp = (exp + c * be) % m,
                None => {
                    fast = false;
                    break;
                }
            }
        }
        if !fast {
            exp = a.mul(z)?.chi_exponent()?;
        }
        sum.add_root(exp, 1);
    }
    Ok(sum)
}

/// char_sum over the whole ring, iterating coefficient odometers instead
/// of materialized elements. Same value as char_sum(ring.elements(), a);
/// exists because full-ring sweeps over thousands of rings are the hot
/// path of the identity suites.
pub fn char_sum_full<T: Residue>(ring: &Ring<T>, a: &RingElement<T>) -> Result<CyclotomicSum> {
    ring.check_same(a.ring())?;
    let mut sum = CyclotomicSum::zero_for(ring.p(), ring.e())?;
    let m = sum.modulus();
    let k = ring.k() as usize;
    let mut basis_exp = Vec::with_capacity(k);
    for i in 0..k {
        let mut coeffs = vec![0u64; k];
        coeffs[i] = 1;
        let xi = ring.element_u64(&coeffs)?;
        basis_exp.push(a.mul(&xi)?.chi_exponent()?);
    }
    // digit rollover p^e - 1 -> 0 needs no exponent fixup: the overshoot
    // is p^e * basis_exp = 0 mod p^e
    let mut digits = vec![0u64; k];
    let mut exp = 0u64;
    'sweep: loop {
        sum.add_root(exp, 1);
        let mut pos = 0;
        loop {
            if pos == k {
                break 'sweep;
            }
            digits[pos] += 1;
            exp += basis_exp[pos];
            if exp >= m {
                exp -= m;
            }
            if digits[pos] < m {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
    Ok(sum)
}

/// Sum over the units of chi(p^n z). For 0 < n < e this is 0 when
/// n + 1 < e and -p^{(e-1)k} when n + 1 = e.
pub fn unit_sum<T: Residue>(ring: &Ring<T>, n: u32) -> Result<CyclotomicSum> {
    if n == 0 || n >= ring.e() {
        return Err(Error::IndexOutOfRange {
            what: "unit-sum p-power exponent",
            index: n,
            limit: ring.e(),
        });
    }
    char_sum(ring.units(), &ring.p_power_constant(n)?)
}

pub struct IdealReductionReport {
    pub lhs: CyclotomicSum,
    pub rhs: CyclotomicSum,
    pub equal: bool,
}

/// Compare Sum_{z in p^i R} chi(a z) against the same sum pushed down to
/// the child ring: Sum_{w in R_{e-i,k}} chi_{e-i,k}(rho_i(a) w). Equality
/// is after embedding the child value into the parent cyclotomic field.
pub fn ideal_sum_reduction_check<T: Residue>(
    a: &RingElement<T>,
    i: u32,
) -> Result<IdealReductionReport> {
    let ring = a.ring();
    if i >= ring.e() {
        return Err(Error::IndexOutOfRange {
            what: "ideal reduction index",
            index: i,
            limit: ring.e(),
        });
    }
    let lhs = char_sum(ring.ideal_elements(i)?, a)?;
    let child = ring.child_ring(i)?;
    let rho_a = a.rho(i)?;
    let rhs = char_sum(child.elements(), &rho_a)?;
    let equal = rhs.embed_into(ring.e())? == lhs;
    Ok(IdealReductionReport { lhs, rhs, equal })
}

pub struct SteeleReport {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Bilinear form bound: |Sum_{j,k} z_j y_k c_{jk}| is at most
/// sqrt(R*C) * ||z|| * ||y|| with R the maximum row sum and C the maximum
/// column sum of the nonnegative matrix c.
pub fn steele_bound_check(
    c: &[Vec<f64>],
    z: &[Complex64],
    y: &[Complex64],
) -> Result<SteeleReport> {
    if c.len() != z.len() {
        return Err(Error::DimensionMismatch {
            left: c.len(),
            right: z.len(),
        });
    }
    for row in c {
        if row.len() != y.len() {
            return Err(Error::DimensionMismatch {
                left: row.len(),
                right: y.len(),
            });
        }
    }
    let mut form = Complex64::new(0.0, 0.0);
    let mut row_max = 0.0f64;
    let mut col_sums = vec![0.0f64; y.len()];
    for (j, row) in c.iter().enumerate() {
        let mut row_sum = 0.0;
        for (k, &cjk) in row.iter().enumerate() {
            form += z[j] * y[k] * cjk;
            row_sum += cjk;
            col_sums[k] += cjk;
        }
        row_max = row_max.max(row_sum);
    }
    let col_max = col_sums.iter().fold(0.0f64, |a, &b| a.max(b));
    let z_norm = z.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    let y_norm = y.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    let lhs = form.norm();
    let rhs = (row_max * col_max).sqrt() * z_norm * y_norm;
    let holds = lhs <= rhs + 1e-9 * rhs.max(1.0);
    Ok(SteeleReport { lhs, rhs, holds })
}
