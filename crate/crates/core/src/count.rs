//! Configuration counting over point sets E in R^d: dot-product counts
//! nu(t), their character-sum decomposition, pair and forest counts via
//! tree DP, and the aA = b matrix-solution count.
//!
//! All counts are exact. Work budgets are measured in dot products; paths
//! that could blow up (brute-force oracles, the DP, the decomposition)
//! take an explicit budget and fail with WorkBudgetExceeded instead of
//! silently grinding.

use crate::charsum::char_sum;
use crate::error::{Error, Result};
use crate::ring::{Ring, RingElement};
use crate::scalar::Residue;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::{HashMap, HashSet};

/// Full R^d enumeration refuses beyond this many points.
const FULL_SET_CAP: u64 = 1 << 20;

pub const DEFAULT_WORK_BUDGET: u64 = 10_000_000;

/// Deduplicated list of points in R^d, order-preserving.
pub struct PointSet<T: Residue> {
    ring: Ring<T>,
    d: usize,
    points: Vec<Vec<RingElement<T>>>,
}

impl<T: Residue> PointSet<T> {
    pub fn new(ring: Ring<T>, d: usize, points: Vec<Vec<RingElement<T>>>) -> Result<Self> {
        if d == 0 {
            return Err(Error::DimensionMismatch { left: 0, right: 1 });
        }
        let mut seen: HashSet<Vec<Vec<T>>> = HashSet::with_capacity(points.len());
        let mut kept = Vec::with_capacity(points.len());
        for pt in points {
            if pt.len() != d {
                return Err(Error::DimensionMismatch {
                    left: pt.len(),
                    right: d,
                });
            }
            for c in &pt {
                ring.check_same(c.ring())?;
            }
            let key: Vec<Vec<T>> = pt.iter().map(|c| c.coeffs().to_vec()).collect();
            if seen.insert(key) {
                kept.push(pt);
            }
        }
        Ok(PointSet {
            ring,
            d,
            points: kept,
        })
    }

    /// All of R^d.
    pub fn full(ring: &Ring<T>, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::DimensionMismatch { left: 0, right: 1 });
        }
        let total = ring
            .size_u64()
            .and_then(|n| n.checked_pow(d as u32))
            .filter(|&n| n <= FULL_SET_CAP)
            .ok_or_else(|| Error::CapExceeded {
                what: "full point-set size p^{dek}",
                needed: format!("{}^{d}", ring.cardinality()),
                cap: FULL_SET_CAP.to_string(),
            })?;
        let n = ring.size_u64().unwrap();
        let mut points = Vec::with_capacity(total as usize);
        for idx in 0..total {
            let mut rest = idx;
            let mut pt = Vec::with_capacity(d);
            for _ in 0..d {
                pt.push(ring.element_of_index(rest % n));
                rest /= n;
            }
            points.push(pt);
        }
        PointSet::new(ring.clone(), d, points)
    }

    pub fn ring(&self) -> &Ring<T> {
        &self.ring
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<RingElement<T>>] {
        &self.points
    }

    /// Coefficient rows of every point, coordinate-major.
    fn coeff_rows(&self) -> Vec<Vec<&[T]>> {
        self.points
            .iter()
            .map(|pt| pt.iter().map(|c| c.coeffs()).collect())
            .collect()
    }
}

pub fn dot<T: Residue>(
    x: &[RingElement<T>],
    y: &[RingElement<T>],
) -> Result<RingElement<T>> {
    if x.len() != y.len() || x.is_empty() {
        return Err(Error::DimensionMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let mut acc = x[0].mul(&y[0])?;
    for (a, b) in x[1..].iter().zip(&y[1..]) {
        acc = acc.add(&a.mul(b)?)?;
    }
    Ok(acc)
}

/// Allocation-free inner product into `acc` (k coefficients), using `work`
/// as multiply scratch. Callers guarantee equal lengths and one ring.
fn dot_into<T: Residue>(
    ring: &Ring<T>,
    x: &[&[T]],
    y: &[&[T]],
    work: &mut Vec<T>,
    acc: &mut [T],
) {
    let m = ring.coeff_modulus();
    for c in acc.iter_mut() {
        *c = T::zero();
    }
    for (a, b) in x.iter().zip(y) {
        ring.mul_into(a, b, work);
        for (dst, src) in acc.iter_mut().zip(work.iter()) {
            *dst = dst.add_mod(src, m);
        }
    }
}

/// nu(t): ordered pairs (x, y) in E x E with x . y = t.
pub fn nu<T: Residue>(e_set: &PointSet<T>, t: &RingElement<T>) -> Result<u64> {
    e_set.ring().check_same(t.ring())?;
    let rows = e_set.coeff_rows();
    let k = e_set.ring().k() as usize;
    let mut work = Vec::with_capacity(2 * k);
    let mut acc = vec![T::zero(); k];
    let mut count = 0u64;
    for x in &rows {
        for y in &rows {
            dot_into(e_set.ring(), x, y, &mut work, &mut acc);
            if acc == t.coeffs() {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// One pass over E x E giving the count of every attained dot value.
pub fn nu_spectrum<T: Residue>(e_set: &PointSet<T>) -> HashMap<Vec<T>, u64> {
    let rows = e_set.coeff_rows();
    let k = e_set.ring().k() as usize;
    let mut work = Vec::with_capacity(2 * k);
    let mut acc = vec![T::zero(); k];
    let mut counts: HashMap<Vec<T>, u64> = HashMap::new();
    for x in &rows {
        for y in &rows {
            dot_into(e_set.ring(), x, y, &mut work, &mut acc);
            if let Some(c) = counts.get_mut(acc.as_slice()) {
                *c += 1;
            } else {
                counts.insert(acc.clone(), 1);
            }
        }
    }
    counts
}

/// N(x, alpha) for every x in E, stored sparsely per point.
pub struct DotTable<T: Residue> {
    maps: Vec<HashMap<Vec<T>, u64>>,
}

impl<T: Residue> DotTable<T> {
    pub fn build(e_set: &PointSet<T>) -> Self {
        let rows = e_set.coeff_rows();
        let k = e_set.ring().k() as usize;
        let mut work = Vec::with_capacity(2 * k);
        let mut acc = vec![T::zero(); k];
        let mut maps = Vec::with_capacity(rows.len());
        for x in &rows {
            let mut m: HashMap<Vec<T>, u64> = HashMap::new();
            for y in &rows {
                dot_into(e_set.ring(), x, y, &mut work, &mut acc);
                if let Some(c) = m.get_mut(acc.as_slice()) {
                    *c += 1;
                } else {
                    m.insert(acc.clone(), 1);
                }
            }
            maps.push(m);
        }
        DotTable { maps }
    }

    /// Count of y in E with x_i . y = alpha.
    pub fn count(&self, x_index: usize, alpha: &RingElement<T>) -> u64 {
        self.maps[x_index]
            .get(alpha.coeffs())
            .copied()
            .unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }
}

/// nu(t) by summing the t column of a prebuilt table.
pub fn nu_from_table<T: Residue>(
    table: &DotTable<T>,
    t: &RingElement<T>,
) -> u64 {
    (0..table.len()).map(|i| table.count(i, t)).sum()
}

pub struct NuDecomposition {
    /// nu_0 .. nu_e; the last entry is |E|^2 / p^{ek}.
    pub nu_i: Vec<BigRational>,
    /// D(t) = nu_0 + ... + nu_{e-1}.
    pub discrepancy: BigRational,
    /// Sum of all nu_i; equals nu(E, t) when everything is consistent.
    pub reconstructed: BigRational,
}

/// Split nu(E, t) along valuation layers of the character argument:
/// nu_i(t) = p^{-ek} Sum_{s in [p^i]} Sum_{x,y} chi(s(x.y - t)).
///
/// Pairs are bucketed by u = x.y - t first, so the character work is one
/// layer sum per attained value. Work is |E|^2 dots plus p^{ek} character
/// evaluations per distinct value.
pub fn nu_char_decomposition<T: Residue>(
    e_set: &PointSet<T>,
    t: &RingElement<T>,
    budget: u64,
) -> Result<NuDecomposition> {
    let ring = e_set.ring();
    ring.check_same(t.ring())?;
    let size = ring.size_u64().ok_or_else(|| Error::CapExceeded {
        what: "character decomposition ring size p^{ek}",
        needed: ring.cardinality().to_string(),
        cap: u64::MAX.to_string(),
    })?;
    let n = e_set.len() as u128;
    let needed = n * n + (n * n).min(size as u128) * size as u128;
    if needed > budget as u128 {
        return Err(Error::WorkBudgetExceeded { needed, budget });
    }

    // bucket pairs by u = x.y - t
    let rows = e_set.coeff_rows();
    let k = ring.k() as usize;
    let m = ring.coeff_modulus().clone();
    let mut work = Vec::with_capacity(2 * k);
    let mut acc = vec![T::zero(); k];
    let mut buckets: HashMap<Vec<T>, u64> = HashMap::new();
    for x in &rows {
        for y in &rows {
            dot_into(ring, x, y, &mut work, &mut acc);
            let u: Vec<T> = acc
                .iter()
                .zip(t.coeffs())
                .map(|(a, b)| a.sub_mod(b, &m))
                .collect();
            *buckets.entry(u).or_insert(0) += 1;
        }
    }

    let denom = BigInt::from(size);
    let mut nu_i = Vec::with_capacity(ring.e() as usize + 1);
    for i in 0..ring.e() {
        let mut numer = BigInt::zero();
        for (u_coeffs, &mult) in &buckets {
            let u = ring.element(u_coeffs.clone())?;
            let s = char_sum(ring.layer_elements(i)?, &u)?;
            let val = s.integer_value().ok_or_else(|| {
                Error::InternalCardinalityError {
                    what: "layer character sum",
                    expected: "rational integer".to_string(),
                    got: s.to_string(),
                }
            })?;
            numer += BigInt::from(val) * BigInt::from(mult);
        }
        nu_i.push(BigRational::new(numer, denom.clone()));
    }
    // s = 0 layer: every pair contributes 1
    nu_i.push(BigRational::new(
        BigInt::from(n) * BigInt::from(n),
        denom,
    ));

    let discrepancy: BigRational = nu_i[..ring.e() as usize].iter().sum();
    let reconstructed: BigRational = nu_i.iter().sum();
    Ok(NuDecomposition {
        nu_i,
        discrepancy,
        reconstructed,
    })
}

/// Pi_{alpha,beta}: triples (x, y, z) in E^3 with x.y = alpha, x.z = beta,
/// computed as Sum_x N(x, alpha) N(x, beta).
pub fn pi_pair<T: Residue>(
    e_set: &PointSet<T>,
    alpha: &RingElement<T>,
    beta: &RingElement<T>,
) -> Result<u128> {
    e_set.ring().check_same(alpha.ring())?;
    e_set.ring().check_same(beta.ring())?;
    let table = DotTable::build(e_set);
    let mut total = 0u128;
    for i in 0..table.len() {
        total += u128::from(table.count(i, alpha)) * u128::from(table.count(i, beta));
    }
    Ok(total)
}

/// O(|E|^3) oracle for pi_pair.
pub fn pi_pair_brute<T: Residue>(
    e_set: &PointSet<T>,
    alpha: &RingElement<T>,
    beta: &RingElement<T>,
    budget: u64,
) -> Result<u128> {
    e_set.ring().check_same(alpha.ring())?;
    e_set.ring().check_same(beta.ring())?;
    let n = e_set.len() as u128;
    let needed = n * n * n;
    if needed > budget as u128 {
        return Err(Error::WorkBudgetExceeded { needed, budget });
    }
    let rows = e_set.coeff_rows();
    let ring = e_set.ring();
    let k = ring.k() as usize;
    let mut work = Vec::with_capacity(2 * k);
    let mut acc = vec![T::zero(); k];
    let mut total = 0u128;
    for x in &rows {
        for y in &rows {
            dot_into(ring, x, y, &mut work, &mut acc);
            if acc != alpha.coeffs() {
                continue;
            }
            for z in &rows {
                dot_into(ring, x, z, &mut work, &mut acc);
                if acc == beta.coeffs() {
                    total += 1;
                }
            }
        }
    }
    Ok(total)
}

/// Acyclic edge-labelled constraint graph on vertices 1..=m.
pub struct ForestSpec<T: Residue> {
    m: usize,
    edges: Vec<(usize, usize, RingElement<T>)>,
}

impl<T: Residue> ForestSpec<T> {
    pub fn new(m: usize, edges: Vec<(usize, usize, RingElement<T>)>) -> Result<Self> {
        let mut uf: Vec<usize> = (0..m).collect();
        fn find(uf: &mut [usize], mut v: usize) -> usize {
            while uf[v] != v {
                uf[v] = uf[uf[v]];
                v = uf[v];
            }
            v
        }
        for (i, j, _) in &edges {
            if *i < 1 || *j > m || i >= j {
                return Err(Error::IndexOutOfRange {
                    what: "forest edge endpoint",
                    index: if *i < 1 || i >= j { *i as u32 } else { *j as u32 },
                    limit: m as u32,
                });
            }
            let (ri, rj) = (find(&mut uf, i - 1), find(&mut uf, j - 1));
            if ri == rj {
                return Err(Error::CyclicGraph);
            }
            uf[ri] = rj;
        }
        Ok(ForestSpec { m, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.m
    }

    pub fn edges(&self) -> &[(usize, usize, RingElement<T>)] {
        &self.edges
    }

    /// Path 1-2-...-{n+1} with the j-th edge labelled alpha_j.
    pub fn chain(alphas: &[RingElement<T>]) -> Result<Self> {
        ForestSpec::new(
            alphas.len() + 1,
            alphas
                .iter()
                .enumerate()
                .map(|(j, a)| (j + 1, j + 2, a.clone()))
                .collect(),
        )
    }

    /// Center 1 joined to leaves 2..=n+1, the j-th spoke labelled alpha_j.
    pub fn star(alphas: &[RingElement<T>]) -> Result<Self> {
        ForestSpec::new(
            alphas.len() + 1,
            alphas
                .iter()
                .enumerate()
                .map(|(j, a)| (1, j + 2, a.clone()))
                .collect(),
        )
    }
}

/// Pi_alpha(T): tuples x in E^m with x_i . x_j = alpha_{ij} on every edge.
///
/// Default mode counts all tuples by rooting each component and folding
/// bottom-up: count_v(x) = prod over children c of
/// Sum_{y : x.y = alpha_{vc}} count_c(y). With `distinct` set, injective
/// tuples are counted by brute force instead.
pub fn pi_forest<T: Residue>(
    e_set: &PointSet<T>,
    forest: &ForestSpec<T>,
    distinct: bool,
    budget: u64,
) -> Result<BigUint> {
    for (_, _, alpha) in forest.edges() {
        e_set.ring().check_same(alpha.ring())?;
    }
    if distinct {
        return forest_brute(e_set, forest, true, budget);
    }
    let m = forest.m;
    if m == 0 {
        return Ok(BigUint::one());
    }
    let n = e_set.len();
    let needed = (m as u128) * (n as u128) * (n as u128);
    if needed > budget as u128 {
        return Err(Error::WorkBudgetExceeded { needed, budget });
    }

    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); m];
    for (idx, (i, j, _)) in forest.edges().iter().enumerate() {
        adj[i - 1].push((j - 1, idx));
        adj[j - 1].push((i - 1, idx));
    }

    let rows = e_set.coeff_rows();
    let ring = e_set.ring();
    let k = ring.k() as usize;
    let mut work = Vec::with_capacity(2 * k);
    let mut acc = vec![T::zero(); k];

    let mut visited = vec![false; m];
    let mut total = BigUint::one();
    for root in 0..m {
        if visited[root] {
            continue;
        }
        // DFS order, then fold leaves-first
        let mut order: Vec<(usize, usize)> = Vec::new(); // (vertex, parent or self)
        let mut stack = vec![(root, root)];
        visited[root] = true;
        while let Some((v, parent)) = stack.pop() {
            order.push((v, parent));
            for &(w, _) in &adj[v] {
                if !visited[w] {
                    visited[w] = true;
                    stack.push((w, v));
                }
            }
        }
        let mut counts: Vec<Option<Vec<BigUint>>> = vec![None; m];
        for &(v, parent) in order.iter().rev() {
            let mut cnt = vec![BigUint::one(); n];
            for &(c, edge_idx) in &adj[v] {
                if c == parent && v != root {
                    continue;
                }
                let child = counts[c].take().expect("child folded before parent");
                let alpha = &forest.edges()[edge_idx].2;
                for (xi, x) in rows.iter().enumerate() {
                    let mut s = BigUint::zero();
                    for (yi, y) in rows.iter().enumerate() {
                        dot_into(ring, x, y, &mut work, &mut acc);
                        if acc == alpha.coeffs() {
                            s += &child[yi];
                        }
                    }
                    cnt[xi] *= s;
                }
            }
            counts[v] = Some(cnt);
        }
        let root_counts = counts[root].take().expect("root folded last");
        let component: BigUint = root_counts.iter().sum();
        total *= component;
    }
    Ok(total)
}

/// Enumerative oracle for pi_forest; `distinct` restricts to injective
/// tuples.
pub fn pi_forest_brute<T: Residue>(
    e_set: &PointSet<T>,
    forest: &ForestSpec<T>,
    distinct: bool,
    budget: u64,
) -> Result<BigUint> {
    for (_, _, alpha) in forest.edges() {
        e_set.ring().check_same(alpha.ring())?;
    }
    forest_brute(e_set, forest, distinct, budget)
}

fn forest_brute<T: Residue>(
    e_set: &PointSet<T>,
    forest: &ForestSpec<T>,
    distinct: bool,
    budget: u64,
) -> Result<BigUint> {
    let m = forest.m;
    if m == 0 {
        return Ok(BigUint::one());
    }
    let n = e_set.len();
    let mut needed = 1u128;
    for _ in 0..m {
        needed = needed.saturating_mul(n.max(1) as u128);
    }
    needed = needed.saturating_mul(forest.edges().len().max(1) as u128);
    if needed > budget as u128 {
        return Err(Error::WorkBudgetExceeded { needed, budget });
    }
    if n == 0 {
        return Ok(BigUint::zero());
    }

    // all pairwise dots once
    let rows = e_set.coeff_rows();
    let ring = e_set.ring();
    let k = ring.k() as usize;
    let mut work = Vec::with_capacity(2 * k);
    let mut acc = vec![T::zero(); k];
    let mut dots: Vec<Vec<Vec<T>>> = vec![vec![Vec::new(); n]; n];
    for (i, x) in rows.iter().enumerate() {
        for (j, y) in rows.iter().enumerate() {
            dot_into(ring, x, y, &mut work, &mut acc);
            dots[i][j] = acc.clone();
        }
    }

    let mut assign = vec![0usize; m];
    let mut total = BigUint::zero();
    'outer: loop {
        let ok = (!distinct
            || (1..m).all(|i| !assign[..i].contains(&assign[i])))
            && forest.edges().iter().all(|(i, j, alpha)| {
                dots[assign[i - 1]][assign[j - 1]] == alpha.coeffs()
            });
        if ok {
            total += 1u32;
        }
        for slot in assign.iter_mut() {
            *slot += 1;
            if *slot < n {
                continue 'outer;
            }
            *slot = 0;
        }
        break;
    }
    Ok(total)
}

/// Tuples (x_1..x_{n+1}) with x_j . x_{j+1} = alpha_j along a path.
pub fn k_chain<T: Residue>(
    e_set: &PointSet<T>,
    alphas: &[RingElement<T>],
    distinct: bool,
    budget: u64,
) -> Result<BigUint> {
    if alphas.is_empty() {
        return Err(Error::IndexOutOfRange {
            what: "chain constraint count",
            index: 0,
            limit: 1,
        });
    }
    pi_forest(e_set, &ForestSpec::chain(alphas)?, distinct, budget)
}

/// Tuples (c, x_1..x_n) with c . x_j = alpha_j.
pub fn star<T: Residue>(
    e_set: &PointSet<T>,
    alphas: &[RingElement<T>],
    distinct: bool,
    budget: u64,
) -> Result<BigUint> {
    if alphas.is_empty() {
        return Err(Error::IndexOutOfRange {
            what: "star constraint count",
            index: 0,
            limit: 1,
        });
    }
    pi_forest(e_set, &ForestSpec::star(alphas)?, distinct, budget)
}

/// S = |{(a, A) : a in E, columns of A in E, aA = b}|. Row vector a against
/// the n columns of A is exactly a star with spoke labels b_j.
pub fn matrix_solutions<T: Residue>(
    e_set: &PointSet<T>,
    b: &[RingElement<T>],
    budget: u64,
) -> Result<BigUint> {
    star(e_set, b, false, budget)
}

/// Direct enumeration of (a, A) pairs; must agree with matrix_solutions.
pub fn matrix_solutions_brute<T: Residue>(
    e_set: &PointSet<T>,
    b: &[RingElement<T>],
    budget: u64,
) -> Result<BigUint> {
    if b.is_empty() {
        return Err(Error::IndexOutOfRange {
            what: "matrix column count",
            index: 0,
            limit: 1,
        });
    }
    pi_forest_brute(e_set, &ForestSpec::star(b)?, false, budget)
}
