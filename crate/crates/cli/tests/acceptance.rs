//! Acceptance gate: ten criteria, one visible line each. The process
//! exits nonzero if any criterion fails. Run via
//! `cargo test -p galdot-cli --test acceptance`.

use galdot::{
    char_sum_full, ideal_sum_reduction_check, matrix_solutions, nontrivial_dimension, nu,
    nu_char_decomposition, nu_from_table, pair_thresholds, pi_forest, pi_forest_brute, pi_pair,
    pi_pair_brute, single_threshold_closed, single_threshold_refined, unit_sum, DotTable,
    Element64, ForestSpec, PointSet, Ring64, ThresholdFamily, DEFAULT_WORK_BUDGET,
};
use num_bigint::BigUint;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use std::cmp::Ordering;
use std::collections::HashSet;
use std::process::Command;
use std::time::Instant;

type Criterion = fn() -> Result<String, String>;

fn main() {
    let mut failures = 0usize;
    let criteria: Vec<(&str, Criterion)> = vec![
        ("orthogonality, every ring up to 4096", criterion_1),
        ("unit-sum closed form, five rings", criterion_2),
        ("ideal reduction, every ring up to 256", criterion_3),
        ("nu-decomposition vs brute force, seeded", criterion_4),
        ("desk-scale counting oracles, two paths", criterion_5),
        ("forest dp vs brute force, all shapes m <= 4", criterion_6),
        ("full-space matrix closed form", criterion_7),
        ("relaxation chains, certified", criterion_8),
        ("nontrivial dimensions vs formula", criterion_9),
        ("census byte-determinism", criterion_10),
    ];
    for (idx, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("[{:>2}/10] {name} ... PASS ({detail})", idx + 1),
            Err(msg) => {
                failures += 1;
                println!("[{:>2}/10] {name} ... FAIL ({msg})", idx + 1);
            }
        }
    }
    if failures > 0 {
        println!("acceptance: {failures} of 10 criteria FAILED");
        std::process::exit(1);
    }
    println!("acceptance: all 10 criteria pass");
}

fn ring(p: u64, e: u32, k: u32) -> Result<Ring64, String> {
    Ring64::new(p, e, k).map_err(|e| e.to_string())
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            return false;
        }
        q += 1;
    }
    true
}

fn rings_up_to(cap: u64) -> Result<Vec<Ring64>, String> {
    let mut out = Vec::new();
    for p in (2..=cap).filter(|&p| is_prime(p)) {
        let mut m = 1u32;
        let mut power = p;
        loop {
            for e in 1..=m {
                if m.is_multiple_of(e) {
                    out.push(ring(p, e, m / e)?);
                }
            }
            match power.checked_mul(p) {
                Some(next) if next <= cap => {
                    power = next;
                    m += 1;
                }
                _ => break,
            }
        }
    }
    Ok(out)
}

fn random_element(r: &Ring64, rng: &mut ChaCha12Rng) -> Element64 {
    let n = r.size_u64().expect("acceptance rings fit u64");
    r.element_of_index(rng.gen_range(0..n))
}

fn random_set(
    r: &Ring64,
    d: usize,
    size: usize,
    rng: &mut ChaCha12Rng,
) -> Result<PointSet<u64>, String> {
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut points = Vec::with_capacity(size);
    while points.len() < size {
        let pt: Vec<Element64> = (0..d).map(|_| random_element(r, rng)).collect();
        let key: Vec<u64> = pt.iter().flat_map(|z| z.coeffs().to_vec()).collect();
        if seen.insert(key) {
            points.push(pt);
        }
    }
    PointSet::new(r.clone(), d, points).map_err(|e| e.to_string())
}

fn criterion_1() -> Result<String, String> {
    let start = Instant::now();
    let rings = rings_up_to(4096)?;
    let mut sums = 0u64;
    for r in &rings {
        let n = r.size_u64().unwrap() as i64;
        for a in r.elements() {
            let s = char_sum_full(r, &a).map_err(|e| e.to_string())?;
            if a.is_zero() {
                if s.integer_value() != Some(n) {
                    return Err(format!("{r}: sum at a = 0 is {s}, expected {n}"));
                }
            } else if !s.is_zero() {
                return Err(format!("{r}: sum at a = {a} is {s}, expected 0"));
            }
            sums += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if secs > 60.0 {
        return Err(format!("{sums} sums took {secs:.1}s, over the 60s target"));
    }
    Ok(format!("{} rings, {sums} sums in {secs:.1}s", rings.len()))
}

fn criterion_2() -> Result<String, String> {
    let rings = [
        ring(2, 3, 1)?,
        ring(2, 4, 1)?,
        ring(3, 3, 1)?,
        ring(2, 3, 2)?,
        ring(2, 5, 1)?,
    ];
    let mut checks = 0u32;
    for r in &rings {
        let (e, k) = (r.e(), r.k());
        for n in 1..e {
            let s = unit_sum(r, n).map_err(|e| e.to_string())?;
            let want = if n + 1 == e {
                -(r.p().pow((e - 1) * k) as i64)
            } else {
                0
            };
            if s.integer_value() != Some(want) {
                return Err(format!("{r}: unit sum at level {n} is {s}, expected {want}"));
            }
            checks += 1;
        }
    }
    Ok(format!("{checks} levels across {} rings, all exact", rings.len()))
}

fn criterion_3() -> Result<String, String> {
    let rings = rings_up_to(256)?;
    let mut checks = 0u64;
    for r in &rings {
        for a in r.elements() {
            for i in 0..r.e() {
                let rep = ideal_sum_reduction_check(&a, i).map_err(|e| e.to_string())?;
                if !rep.equal {
                    return Err(format!(
                        "{r}: (a = {a}, i = {i}) gives {} vs {}",
                        rep.lhs, rep.rhs
                    ));
                }
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} identities over {} rings", rings.len()))
}

fn criterion_4() -> Result<String, String> {
    let rings = [ring(2, 2, 1)?, ring(3, 2, 1)?, ring(2, 3, 1)?, ring(2, 2, 2)?];
    let mut trials_total = 0u32;
    for (idx, r) in rings.iter().enumerate() {
        let mut rng = ChaCha12Rng::seed_from_u64(9_000 + idx as u64);
        for trial in 0..50u32 {
            let d = 1 + (trial % 2) as usize;
            let space = r.size_u64().unwrap().saturating_pow(d as u32);
            let size = rng.gen_range(2..=12u64.min(space)) as usize;
            let e_set = random_set(r, d, size, &mut rng)?;
            let t = random_element(r, &mut rng);
            let dec = nu_char_decomposition(&e_set, &t, DEFAULT_WORK_BUDGET)
                .map_err(|e| e.to_string())?;
            let brute = nu(&e_set, &t).map_err(|e| e.to_string())?;
            if dec.reconstructed != BigRational::from_integer(brute.into()) {
                return Err(format!(
                    "{r}, trial {trial}: layers sum to {}, brute force {brute}",
                    dec.reconstructed
                ));
            }
            trials_total += 1;
        }
    }
    Ok(format!("{trials_total} seeded decompositions reconstruct exactly"))
}

fn criterion_5() -> Result<String, String> {
    let z3 = ring(3, 1, 1)?;
    let e3 = PointSet::full(&z3, 2).map_err(|e| e.to_string())?;
    let table3 = DotTable::build(&e3);
    let one3 = z3.one();
    let zero3 = z3.zero();
    let expect = |name: &str, got: u128, want: u128| -> Result<(), String> {
        if got == want {
            Ok(())
        } else {
            Err(format!("{name}: got {got}, expected {want}"))
        }
    };
    expect("nu(Z_3^2, 1) direct", nu(&e3, &one3).map_err(|e| e.to_string())? as u128, 24)?;
    expect("nu(Z_3^2, 1) table", nu_from_table(&table3, &one3) as u128, 24)?;
    expect("nu(Z_3^2, 0) direct", nu(&e3, &zero3).map_err(|e| e.to_string())? as u128, 33)?;
    expect("nu(Z_3^2, 0) table", nu_from_table(&table3, &zero3) as u128, 33)?;
    expect(
        "pi(Z_3^2, 0, 0) table",
        pi_pair(&e3, &zero3, &zero3).map_err(|e| e.to_string())?,
        153,
    )?;
    expect(
        "pi(Z_3^2, 0, 0) brute",
        pi_pair_brute(&e3, &zero3, &zero3, DEFAULT_WORK_BUDGET).map_err(|e| e.to_string())?,
        153,
    )?;
    let z4 = ring(2, 2, 1)?;
    let e4 = PointSet::full(&z4, 1).map_err(|e| e.to_string())?;
    let table4 = DotTable::build(&e4);
    let one4 = z4.one();
    expect("nu(Z_4, 1) direct", nu(&e4, &one4).map_err(|e| e.to_string())? as u128, 2)?;
    expect("nu(Z_4, 1) table", nu_from_table(&table4, &one4) as u128, 2)?;
    Ok("24/33/153/2, table and brute force agree".to_string())
}

fn uf_find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Every acyclic edge subset of the complete graph on vertices 1..=m.
fn forest_shapes(m: usize) -> Vec<Vec<(usize, usize)>> {
    let mut pairs = Vec::new();
    for i in 1..=m {
        for j in (i + 1)..=m {
            pairs.push((i, j));
        }
    }
    let mut shapes = Vec::new();
    'subset: for mask in 0u32..(1 << pairs.len()) {
        let mut parent: Vec<usize> = (0..m).collect();
        let mut edges = Vec::new();
        for (b, &(i, j)) in pairs.iter().enumerate() {
            if mask & (1 << b) != 0 {
                let (ri, rj) = (uf_find(&mut parent, i - 1), uf_find(&mut parent, j - 1));
                if ri == rj {
                    continue 'subset;
                }
                parent[ri] = rj;
                edges.push((i, j));
            }
        }
        shapes.push(edges);
    }
    shapes
}

fn criterion_6() -> Result<String, String> {
    let rings = [ring(2, 2, 1)?, ring(3, 2, 1)?, ring(2, 1, 3)?];
    let shapes: Vec<(usize, Vec<(usize, usize)>)> = (1..=4usize)
        .flat_map(|m| forest_shapes(m).into_iter().map(move |edges| (m, edges)))
        .collect();
    let mut comparisons = 0u64;
    for (idx, r) in rings.iter().enumerate() {
        let mut rng = ChaCha12Rng::seed_from_u64(11_000 + idx as u64);
        for trial in 0..20u32 {
            let d = 1 + (trial % 2) as usize;
            let space = r.size_u64().unwrap().saturating_pow(d as u32);
            let size = rng.gen_range(2..=10u64.min(space)) as usize;
            let e_set = random_set(r, d, size, &mut rng)?;
            for (m, edges) in &shapes {
                let labelled: Vec<(usize, usize, Element64)> = edges
                    .iter()
                    .map(|&(i, j)| (i, j, random_element(r, &mut rng)))
                    .collect();
                let forest = ForestSpec::new(*m, labelled).map_err(|e| e.to_string())?;
                let fast = pi_forest(&e_set, &forest, false, DEFAULT_WORK_BUDGET)
                    .map_err(|e| e.to_string())?;
                let slow = pi_forest_brute(&e_set, &forest, false, DEFAULT_WORK_BUDGET)
                    .map_err(|e| e.to_string())?;
                if fast != slow {
                    return Err(format!(
                        "{r}, trial {trial}, m = {m}, edges {edges:?}: dp {fast} vs brute {slow}"
                    ));
                }
                comparisons += 1;
            }
        }
    }
    Ok(format!(
        "{comparisons} comparisons over {} shapes, 3 rings",
        shapes.len()
    ))
}

fn criterion_7() -> Result<String, String> {
    let mut checks = 0u32;
    for p in [2u64, 3] {
        let r = ring(p, 1, 1)?;
        for d in 1..=2u32 {
            let e_set = PointSet::full(&r, d as usize).map_err(|e| e.to_string())?;
            for n in 1..=2u32 {
                // every right-hand side with at least one unit entry
                for idx in 0..p.pow(n) {
                    let b: Vec<Element64> = (0..n)
                        .map(|j| r.element_of_index(idx / p.pow(j) % p))
                        .collect();
                    if !b.iter().any(|z| !z.is_zero()) {
                        continue;
                    }
                    let got = matrix_solutions(&e_set, &b, DEFAULT_WORK_BUDGET)
                        .map_err(|e| e.to_string())?;
                    let want = BigUint::from(p).pow(d * n - n) * (BigUint::from(p).pow(d) - 1u32);
                    if got != want {
                        let b_str: Vec<String> = b.iter().map(|z| z.to_string()).collect();
                        return Err(format!(
                            "p = {p}, d = {d}, n = {n}, b = ({}): got {got}, want {want}",
                            b_str.join(", ")
                        ));
                    }
                    checks += 1;
                }
            }
        }
    }
    Ok(format!("{checks} (p, d, n, b) points match p^(dn-n)(p^d - 1)"))
}

fn criterion_8() -> Result<String, String> {
    let mut comparisons = 0u64;
    let mut max_bits = 0u32;
    for p in [2u64, 3, 5] {
        for e in 5..=8u32 {
            for k in 1..=3u32 {
                for d in 2..=(2 * e + 4) {
                    let refined =
                        single_threshold_refined(p, e, k, d).map_err(|e| e.to_string())?;
                    let closed = single_threshold_closed(p, e, k, d).map_err(|e| e.to_string())?;
                    let (ord, bits) = refined.cmp_with_bits(&closed).map_err(|e| e.to_string())?;
                    if ord == Ordering::Greater {
                        return Err(format!(
                            "refined > closed at p = {p}, e = {e}, k = {k}, d = {d}"
                        ));
                    }
                    if bits > 256 {
                        return Err(format!(
                            "refined comparison needed {bits} bits at p = {p}, e = {e}, k = {k}, d = {d}"
                        ));
                    }
                    max_bits = max_bits.max(bits);
                    comparisons += 1;
                }
                for d in 3..=(2 * e + 4) {
                    let pair = pair_thresholds(p, e, k, d).map_err(|e| e.to_string())?;
                    let (ord, bits) = pair
                        .sqrt_2g
                        .cmp_with_bits(&pair.closed)
                        .map_err(|e| e.to_string())?;
                    if ord == Ordering::Greater {
                        return Err(format!(
                            "sqrt(2G) > closed pair form at p = {p}, e = {e}, k = {k}, d = {d}"
                        ));
                    }
                    if bits > 256 {
                        return Err(format!(
                            "pair comparison needed {bits} bits at p = {p}, e = {e}, k = {k}, d = {d}"
                        ));
                    }
                    max_bits = max_bits.max(bits);
                    comparisons += 1;
                }
            }
        }
    }
    Ok(format!("{comparisons} certified comparisons, worst case {max_bits} bits"))
}

fn criterion_9() -> Result<String, String> {
    let pinned = nontrivial_dimension(2, 5, 1, ThresholdFamily::SingleDot)
        .map_err(|e| e.to_string())?;
    if pinned.exact != 11 {
        return Err(format!("(2,5,1) single-dot sweep gives {}, expected 11", pinned.exact));
    }
    let mut grid = 0u32;
    for p in [2u64, 3, 5] {
        for e in 5..=8u32 {
            for k in 1..=3u32 {
                let nd = nontrivial_dimension(p, e, k, ThresholdFamily::SingleDot)
                    .map_err(|e| e.to_string())?;
                if nd.exact.abs_diff(nd.formula) > 1 {
                    return Err(format!(
                        "p = {p}, e = {e}, k = {k}: sweep {} vs formula {}",
                        nd.exact, nd.formula
                    ));
                }
                grid += 1;
            }
        }
    }
    Ok(format!("(2,5,1) gives 11; {grid} grid points within 1 of the formula"))
}

fn criterion_10() -> Result<String, String> {
    let exe = env!("CARGO_BIN_EXE_galdot");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let config_path = dir.path().join("census.json");
    std::fs::write(
        &config_path,
        r#"{
  "task": "census",
  "ring": "p=3 e=2 k=1",
  "d": 2,
  "sizes": [5, 9],
  "samples": 3,
  "seed": 42
}
"#,
    )
    .map_err(|e| e.to_string())?;
    let mut sizes = Vec::new();
    for format in ["csv", "json"] {
        let out_a = dir.path().join(format!("a.{format}"));
        let out_b = dir.path().join(format!("b.{format}"));
        for out in [&out_a, &out_b] {
            let status = Command::new(exe)
                .args(["census", "--config"])
                .arg(&config_path)
                .args(["--format", format, "--out"])
                .arg(out)
                .status()
                .map_err(|e| e.to_string())?;
            if !status.success() {
                return Err(format!("census run exited with {status}"));
            }
        }
        let a = std::fs::read(&out_a).map_err(|e| e.to_string())?;
        let b = std::fs::read(&out_b).map_err(|e| e.to_string())?;
        if a != b {
            return Err(format!("{format} outputs differ between identical runs"));
        }
        if a.is_empty() {
            return Err(format!("{format} output is empty"));
        }
        sizes.push(format!("{} {format} bytes", a.len()));
    }
    Ok(format!("reruns byte-identical ({})", sizes.join(", ")))
}
