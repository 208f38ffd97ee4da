//! Threshold formulas for the counting theorems and conclusion checks
//! against concrete point sets.
//!
//! Every threshold is a finite sum of terms c * sqrt(r) * p^{h/2} with c a
//! nonnegative rational, r a small integer, and h an integer, so all of
//! them live in `Magnitude` and compare exactly or by certified enclosure.
//! Parameters follow one convention throughout: p prime, e the nilpotency
//! degree, k the residue field degree, d the ambient dimension, n the
//! number of dot-product constraints.

use crate::count::{matrix_solutions, nu, pi_forest, pi_pair, ForestSpec, PointSet};
use crate::error::{Error, Result};
use crate::magnitude::Magnitude;
use crate::ring::RingElement;
use crate::scalar::Residue;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed};
use std::cmp::Ordering;

fn pow_rational(p: u64, exp: i64) -> BigRational {
    let mag = BigInt::from(p).pow(exp.unsigned_abs() as u32);
    if exp >= 0 {
        BigRational::from(mag)
    } else {
        BigRational::new(BigInt::one(), mag)
    }
}

// coef * sqrt(root) * p^{half_exp/2}
fn sqrt_with_p_half(
    p: u64,
    coef: BigRational,
    root: BigRational,
    half_exp: i64,
) -> Result<Magnitude> {
    let c = coef * pow_rational(p, half_exp.div_euclid(2));
    let r = root * pow_rational(p, half_exp.rem_euclid(2));
    Magnitude::term(p, c, r)
}

fn check_params(p: u64, e: u32, k: u32, d: u32) -> Result<()> {
    for (what, v) in [("modulus exponent e", e), ("field degree k", k), ("dimension d", d)] {
        if v == 0 {
            return Err(Error::IndexOutOfRange { what, index: 0, limit: 1 });
        }
    }
    if !crate::modp::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

fn rat_u64(n: u64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

/// p^{d e k} as an exact integer: the number of points in R^d.
pub fn ambient_size(p: u64, e: u32, k: u32, d: u32) -> BigUint {
    BigUint::from(p).pow(d * e * k)
}

/// Closed-form premise threshold for the single dot-product count:
/// sqrt(6 + 3e) * p^{dek - dk/2 + ek/2 + k/2}.
pub fn single_threshold_closed(p: u64, e: u32, k: u32, d: u32) -> Result<Magnitude> {
    check_params(p, e, k, d)?;
    let (d, e, k) = (d as i64, e as i64, k as i64);
    let h = 2 * d * e * k - d * k + e * k + k;
    sqrt_with_p_half(p, BigRational::one(), rat_u64((6 + 3 * e) as u64), h)
}

/// Refined premise threshold, one radical per digit layer:
/// p^{ek} * Sum_{i=0}^{e-1} sqrt(p^{dek + dik - ik} (2 p^{-ik-k} + 1 + p^{-ek})).
/// Never exceeds the closed form.
pub fn single_threshold_refined(p: u64, e: u32, k: u32, d: u32) -> Result<Magnitude> {
    check_params(p, e, k, d)?;
    let (di, ei, ki) = (d as i64, e as i64, k as i64);
    let mut total = Magnitude::zero(p);
    for i in 0..ei {
        let inner = pow_rational(p, -(i * ki + ki)) * rat_u64(2)
            + BigRational::one()
            + pow_rational(p, -(ei * ki));
        // sqrt(p^{dek + dik - ik} * inner) = sqrt(inner) * p^{h/2}
        let h = di * ei * ki + di * i * ki - i * ki;
        let term = sqrt_with_p_half(p, pow_rational(p, ei * ki), inner, h)?;
        total = total.add(&term)?;
    }
    Ok(total)
}

/// Conclusion ceilings for the single dot-product count. `literal` is
/// 2|E|/p^{ek}; `consistent` is 2|E|^2/p^{ek}, which matches the main term
/// of the refined estimate. Reports default to `consistent`.
#[derive(Clone, Debug, PartialEq)]
pub struct CeilingPair {
    pub literal: BigRational,
    pub consistent: BigRational,
}

pub fn single_dot_ceiling(set_size: u64, p: u64, e: u32, k: u32) -> CeilingPair {
    let s = rat_u64(set_size);
    let scale = pow_rational(p, -((e as i64) * (k as i64)));
    CeilingPair {
        literal: rat_u64(2) * &s * &scale,
        consistent: rat_u64(2) * &s * &s * scale,
    }
}

/// Premise data for the pair-of-dot-products count.
#[derive(Clone, Debug)]
pub struct PairThresholds {
    /// Exact error-sum majorant; rational because every radical cancels.
    pub g: BigRational,
    pub sqrt_2g: Magnitude,
    /// sqrt(35 e / 8) * p^{dek - dk/2 + ek/2 + k/2}; relaxes sqrt(2G).
    pub closed: Magnitude,
    /// d >= 3, e >= 5, k >= 1; outside this the values are informational.
    pub in_hypothesis: bool,
}

/// Closed-form pair threshold alone; defined for every d >= 1.
pub fn pair_threshold_closed(p: u64, e: u32, k: u32, d: u32) -> Result<Magnitude> {
    check_params(p, e, k, d)?;
    let (d, e, k) = (d as i64, e as i64, k as i64);
    let h = 2 * d * e * k - d * k + e * k + k;
    let root = rat_u64(35 * e as u64) / rat_u64(8);
    sqrt_with_p_half(p, BigRational::one(), root, h)
}

/// G = p^{dek+2ek} e (2 p^{-k} (p^{dek-2ek}-1)/(p^{dk-2k}-1)
///              + (1 + p^{-ek}) (p^{dek-ek}-1)/(p^{dk-k}-1)).
/// The denominators vanish at d = 2 and d = 1 respectively; both cases
/// error and are out of hypothesis anyway.
pub fn pair_thresholds(p: u64, e: u32, k: u32, d: u32) -> Result<PairThresholds> {
    check_params(p, e, k, d)?;
    let (di, ei, ki) = (d as i64, e as i64, k as i64);
    for (label, exp) in [("p^{dk-2k} - 1", di * ki - 2 * ki), ("p^{dk-k} - 1", di * ki - ki)] {
        if exp == 0 {
            return Err(Error::DivisionByZero(format!(
                "{label} vanishes at d = {d}"
            )));
        }
    }
    let one = BigRational::one();
    let ratio_a = (pow_rational(p, di * ei * ki - 2 * ei * ki) - &one)
        / (pow_rational(p, di * ki - 2 * ki) - &one);
    let ratio_b = (pow_rational(p, di * ei * ki - ei * ki) - &one)
        / (pow_rational(p, di * ki - ki) - &one);
    let g = pow_rational(p, di * ei * ki + 2 * ei * ki)
        * rat_u64(e as u64)
        * (pow_rational(p, -ki) * rat_u64(2) * ratio_a
            + (&one + pow_rational(p, -(ei * ki))) * ratio_b);
    debug_assert!(!g.is_negative());
    let sqrt_2g = Magnitude::term(p, BigRational::one(), rat_u64(2) * &g)?;
    Ok(PairThresholds {
        g,
        sqrt_2g,
        closed: pair_threshold_closed(p, e, k, d)?,
        in_hypothesis: d >= 3 && e >= 5,
    })
}

/// Every labeled variant of the forest-type premise threshold. The
/// power-branch and single-expression constants occur in two algebraically
/// different spellings, `e` outside the radical (e * sqrt(14)) and inside
/// it (sqrt(14 e)); they differ by a factor sqrt(e). The matrix forms
/// differ in the middle exponent (nek/2 vs nk/2) and the tail (+k vs
/// +3k/2). None is declared canonical; all are exposed.
#[derive(Clone, Debug)]
pub struct ForestThresholds {
    /// 2n sqrt(6+3e) p^{dek - dk/2 + 3ek/2 + k/2}
    pub tuple_branch: Magnitude,
    /// e sqrt(14) p^{dek - dk/2 + nek/2 + n/2 - ek/2 + k/2}
    pub power_branch_e_outside: Magnitude,
    /// sqrt(14e) p^{same exponent}
    pub power_branch_e_inside: Magnitude,
    /// n >= 4 single expression: e n sqrt(14) p^{dek - dk/2 + nek/2 + n/2 - ek/2 + 3k/2}
    pub single_expr_e_outside: Magnitude,
    /// n sqrt(14e) p^{same exponent}
    pub single_expr_e_inside: Magnitude,
    /// k = 1 rewrite, base q = p^e; equals single_expr_e_outside in value.
    pub base_q_k1: Option<Magnitude>,
    /// e = 1 specialization: n sqrt(14) p^{dk - dk/2 + nk/2 + n/2}.
    pub field_case: Option<Magnitude>,
    /// e = 1, base q = p^k: n sqrt(2) q^{d/2 + n/2} p^{n/2}. Same exponent
    /// as field_case, smaller constant.
    pub field_case_base_q: Option<Magnitude>,
    /// e n sqrt(14) p^{dek - dk/2 + nek/2 + n/2 - ek/2 + k}
    pub matrix_full_exponent: Magnitude,
    /// e n sqrt(14) p^{dek - dk/2 + nk/2 + n/2 - ek/2 + 3k/2}
    pub matrix_reduced_exponent: Magnitude,
    /// d >= 3, e >= 5, k >= 1, n >= 3.
    pub in_hypothesis: bool,
}

pub fn forest_thresholds(p: u64, e: u32, k: u32, d: u32, n: u32) -> Result<ForestThresholds> {
    check_params(p, e, k, d)?;
    if n == 0 {
        return Err(Error::IndexOutOfRange { what: "edge count n", index: 0, limit: 1 });
    }
    let (di, ei, ki, ni) = (d as i64, e as i64, k as i64, n as i64);
    let root14 = rat_u64(14);
    let root14e = rat_u64(14 * e as u64);
    let ce = rat_u64(e as u64);
    let cn = rat_u64(n as u64);

    let h_tuple = 2 * di * ei * ki - di * ki + 3 * ei * ki + ki;
    let h_power = 2 * di * ei * ki - di * ki + ni * ei * ki + ni - ei * ki + ki;
    let h_single = h_power + 2 * ki;
    let h_matrix_full = h_power + ki;
    let h_matrix_reduced = 2 * di * ei * ki - di * ki + ni * ki + ni - ei * ki + 3 * ki;

    let base_q_k1 = if k == 1 {
        // 2de - d + ne + n - e + 3 in half units, stated directly
        let h = 2 * di * ei - di + ni * ei + ni - ei + 3;
        Some(sqrt_with_p_half(p, &ce * &cn, root14.clone(), h)?)
    } else {
        None
    };
    let (field_case, field_case_base_q) = if e == 1 {
        let h = di * ki + ni * ki + ni;
        (
            Some(sqrt_with_p_half(p, cn.clone(), root14.clone(), h)?),
            Some(sqrt_with_p_half(p, cn.clone(), rat_u64(2), h)?),
        )
    } else {
        (None, None)
    };

    Ok(ForestThresholds {
        tuple_branch: sqrt_with_p_half(
            p,
            rat_u64(2 * n as u64),
            rat_u64((6 + 3 * e) as u64),
            h_tuple,
        )?,
        power_branch_e_outside: sqrt_with_p_half(p, ce.clone(), root14.clone(), h_power)?,
        power_branch_e_inside: sqrt_with_p_half(p, BigRational::one(), root14e.clone(), h_power)?,
        single_expr_e_outside: sqrt_with_p_half(p, &ce * &cn, root14.clone(), h_single)?,
        single_expr_e_inside: sqrt_with_p_half(p, cn.clone(), root14e, h_single)?,
        base_q_k1,
        field_case,
        field_case_base_q,
        matrix_full_exponent: sqrt_with_p_half(p, &ce * &cn, root14.clone(), h_matrix_full)?,
        matrix_reduced_exponent: sqrt_with_p_half(p, &ce * &cn, root14, h_matrix_reduced)?,
        in_hypothesis: d >= 3 && e >= 5 && n >= 3,
    })
}

/// Which premise threshold a nontrivial-dimension query refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThresholdFamily {
    SingleDot,
    Pair,
    Forest { n: u32 },
}

/// Smallest ambient dimension at which the premise can hold at all.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NontrivialDimension {
    /// From an exact sweep: least d with threshold <= p^{dek}.
    pub exact: u32,
    /// Ceiling of the logarithmic formula; agrees with `exact` within 1.
    pub formula: u32,
}

fn family_threshold(p: u64, e: u32, k: u32, d: u32, family: ThresholdFamily) -> Result<Magnitude> {
    match family {
        ThresholdFamily::SingleDot => single_threshold_closed(p, e, k, d),
        ThresholdFamily::Pair => pair_threshold_closed(p, e, k, d),
        ThresholdFamily::Forest { n } => {
            // n sqrt(14e) p^{dek - dk/2 + nek/2 + n/2 - ek/2 + 3k/2}: the
            // variant whose log form is (n-1)e + 3 + (n + log_p(14 e n^2))/k
            let (di, ei, ki, ni) = (d as i64, e as i64, k as i64, n as i64);
            let h = 2 * di * ei * ki - di * ki + ni * ei * ki + ni - ei * ki + 3 * ki;
            sqrt_with_p_half(p, rat_u64(n as u64), rat_u64(14 * e as u64), h)
        }
    }
}

pub fn nontrivial_dimension(
    p: u64,
    e: u32,
    k: u32,
    family: ThresholdFamily,
) -> Result<NontrivialDimension> {
    check_params(p, e, k, 1)?;
    if let ThresholdFamily::Forest { n: 0 } = family {
        return Err(Error::IndexOutOfRange { what: "edge count n", index: 0, limit: 1 });
    }
    let (pf, ef, kf) = (p as f64, e as f64, k as f64);
    let formula_value = match family {
        ThresholdFamily::SingleDot => ef + 1.0 + (6.0 + 3.0 * ef).ln() / pf.ln() / kf,
        ThresholdFamily::Pair => ef + 1.0 + (35.0 * ef / 8.0).ln() / pf.ln() / kf,
        ThresholdFamily::Forest { n } => {
            let nf = n as f64;
            (nf - 1.0) * ef + 3.0 + (nf + (14.0 * ef * nf * nf).ln() / pf.ln()) / kf
        }
    };
    let formula = formula_value.ceil().max(1.0) as u32;
    for d in 1..=formula + 8 {
        let threshold = family_threshold(p, e, k, d, family)?;
        if threshold.cmp_biguint(&ambient_size(p, e, k, d))? != Ordering::Greater {
            return Ok(NontrivialDimension { exact: d, formula });
        }
    }
    Err(Error::InternalCardinalityError {
        what: "nontrivial dimension sweep",
        expected: format!("a dimension within {} of the formula", 8),
        got: format!("none up to {}", formula + 8),
    })
}

/// Which conclusion to check against a concrete point set.
pub enum ConclusionCheck<'a, T: Residue> {
    /// nu(t) <= 2|E|^2/p^{ek} (consistent ceiling; literal also reported).
    SingleDot { t: &'a RingElement<T> },
    /// pair count <= 2|E|^3/p^{2ek}.
    Pair { alpha: &'a RingElement<T>, beta: &'a RingElement<T> },
    /// forest count <= 2|E|^m/p^{nek}, m vertices, n edges.
    Forest { forest: &'a ForestSpec<T> },
    /// row-matrix solutions <= 2|E|^{n+1}/p^{nek}, n = b.len().
    Matrix { b: &'a [RingElement<T>] },
}

/// Outcome of one premise/conclusion evaluation. `vacuous` is set exactly
/// when the premise |E| >= threshold fails; the conclusion status is then
/// informational only. `in_hypothesis` tracks the stated parameter ranges.
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub theorem: &'static str,
    pub p: u64,
    pub e: u32,
    pub k: u32,
    pub d: u32,
    pub n: u32,
    pub set_size: u64,
    pub threshold: Magnitude,
    pub premise_satisfied: bool,
    pub in_hypothesis: bool,
    pub vacuous: bool,
    pub observed: BigUint,
    pub ceiling: BigRational,
    /// Single-dot only: the 2|E|/p^{ek} variant.
    pub ceiling_literal: Option<BigRational>,
    pub conclusion_holds: bool,
}

pub fn check_conclusion<T: Residue>(
    e_set: &PointSet<T>,
    check: ConclusionCheck<'_, T>,
    budget: u64,
) -> Result<BoundReport> {
    let ring = e_set.ring();
    let (p, e, k) = (ring.p(), ring.e(), ring.k());
    let d = e_set.d() as u32;
    let size = e_set.len() as u64;
    let s = rat_u64(size);
    let ek = (e as i64) * (k as i64);

    let (theorem, n, threshold, observed, ceiling, ceiling_literal) = match check {
        ConclusionCheck::SingleDot { t } => {
            ring.check_same(t.ring())?;
            let observed = BigUint::from(nu(e_set, t)?);
            let ceilings = single_dot_ceiling(size, p, e, k);
            (
                "single-dot",
                1,
                single_threshold_closed(p, e, k, d)?,
                observed,
                ceilings.consistent,
                Some(ceilings.literal),
            )
        }
        ConclusionCheck::Pair { alpha, beta } => {
            ring.check_same(alpha.ring())?;
            ring.check_same(beta.ring())?;
            let observed = BigUint::from(pi_pair(e_set, alpha, beta)?);
            let ceiling = rat_u64(2) * &s * &s * &s * pow_rational(p, -2 * ek);
            ("pair", 2, pair_threshold_closed(p, e, k, d)?, observed, ceiling, None)
        }
        ConclusionCheck::Forest { forest } => {
            for (_, _, alpha) in forest.edges() {
                ring.check_same(alpha.ring())?;
            }
            let m = forest.vertex_count() as u32;
            let n = forest.edges().len() as u32;
            let thresholds = forest_thresholds(p, e, k, d, n.max(1))?;
            let threshold = match thresholds
                .tuple_branch
                .cmp_value(&thresholds.power_branch_e_outside)?
            {
                Ordering::Less => thresholds.power_branch_e_outside,
                _ => thresholds.tuple_branch,
            };
            let observed = pi_forest(e_set, forest, false, budget)?;
            let ceiling =
                rat_u64(2) * pow_rat(&s, m) * pow_rational(p, -(n as i64) * ek);
            ("forest", n, threshold, observed, ceiling, None)
        }
        ConclusionCheck::Matrix { b } => {
            for entry in b {
                ring.check_same(entry.ring())?;
            }
            let n = b.len() as u32;
            let thresholds = forest_thresholds(p, e, k, d, n.max(1))?;
            let observed = matrix_solutions(e_set, b, budget)?;
            let ceiling =
                rat_u64(2) * pow_rat(&s, n + 1) * pow_rational(p, -(n as i64) * ek);
            ("matrix", n, thresholds.matrix_full_exponent, observed, ceiling, None)
        }
    };

    let premise_satisfied = threshold.cmp_biguint(&BigUint::from(size))? != Ordering::Greater;
    let in_hypothesis = match theorem {
        "single-dot" => e >= 5 && d >= 2,
        "pair" => e >= 5 && d >= 3,
        _ => e >= 5 && d >= 3 && n >= 3,
    };
    let conclusion_holds = BigRational::from(BigInt::from(observed.clone())) <= ceiling;
    Ok(BoundReport {
        theorem,
        p,
        e,
        k,
        d,
        n,
        set_size: size,
        threshold,
        premise_satisfied,
        in_hypothesis,
        vacuous: !premise_satisfied,
        observed,
        ceiling,
        ceiling_literal,
        conclusion_holds,
    })
}

fn pow_rat(base: &BigRational, exp: u32) -> BigRational {
    let mut out = BigRational::one();
    for _ in 0..exp {
        out *= base;
    }
    out
}
