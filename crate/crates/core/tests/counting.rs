//! Counting-layer oracles on seeded random point sets: the spectrum
//! partition, the character decomposition of nu, tree DP against brute
//! force over every forest shape on up to four vertices, the three-way
//! pair agreement, and the closed form for full-space row-matrix counts.

use galdot::{
    matrix_solutions, matrix_solutions_brute, nu, nu_char_decomposition, nu_spectrum, pi_forest,
    pi_forest_brute, pi_pair, Element64, ForestSpec, PointSet, Ring64,
};
use num_bigint::BigUint;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use std::collections::HashSet;

fn seeded_set(ring: &Ring64, d: usize, size: usize, rng: &mut ChaCha12Rng) -> PointSet<u64> {
    let n = ring.size_u64().unwrap();
    let mut seen = HashSet::new();
    let mut points = Vec::new();
    let space = (n as u128).pow(d as u32);
    let target = size.min(space as usize);
    while points.len() < target {
        let idx: Vec<u64> = (0..d).map(|_| rng.gen_range(0..n)).collect();
        if seen.insert(idx.clone()) {
            points.push(idx.iter().map(|&i| ring.element_of_index(i)).collect());
        }
    }
    PointSet::new(ring.clone(), d, points).unwrap()
}

fn decomposition_rings() -> Vec<Ring64> {
    vec![
        Ring64::new(2, 2, 1).unwrap(), // Z_4
        Ring64::new(3, 2, 1).unwrap(), // Z_9
        Ring64::new(2, 3, 1).unwrap(), // Z_8
        Ring64::new(2, 2, 2).unwrap(), // GR(4,2)
    ]
}

#[test]
fn spectrum_partition_seeded() {
    let mut rng = ChaCha12Rng::seed_from_u64(2024);
    for ring in decomposition_rings() {
        for _ in 0..10 {
            let d = rng.gen_range(1..=3);
            let e_set = seeded_set(&ring, d, rng.gen_range(0..=12), &mut rng);
            let spectrum = nu_spectrum(&e_set);
            let total: u64 = spectrum.values().sum();
            assert_eq!(total, (e_set.len() * e_set.len()) as u64, "{ring}");
            // spectrum agrees with per-t counts, including absent values
            for t in ring.elements() {
                let from_table = spectrum.get(t.coeffs()).copied().unwrap_or(0);
                assert_eq!(from_table, nu(&e_set, &t).unwrap(), "{ring} t={t}");
            }
        }
    }
}

#[test]
fn nu_decomposition_reconstructs_seeded() {
    for (ring_idx, ring) in decomposition_rings().into_iter().enumerate() {
        let mut rng = ChaCha12Rng::seed_from_u64(5000 + ring_idx as u64);
        let n = ring.size_u64().unwrap();
        for trial in 0..50 {
            let d = rng.gen_range(1..=3);
            let e_set = seeded_set(&ring, d, rng.gen_range(0..=12), &mut rng);
            let t = ring.element_of_index(rng.gen_range(0..n));
            let exact = nu(&e_set, &t).unwrap();
            let decomp = nu_char_decomposition(&e_set, &t, 1 << 22).unwrap();
            assert_eq!(
                decomp.reconstructed,
                BigRational::from_integer(exact.into()),
                "{ring} trial {trial} t={t}"
            );
            assert_eq!(decomp.nu_i.len() as u32, ring.e() + 1);
        }
    }
}

/// All acyclic edge subsets of the complete graph on m vertices.
fn forest_shapes(m: usize) -> Vec<Vec<(usize, usize)>> {
    let all_edges: Vec<(usize, usize)> = (1..=m)
        .flat_map(|i| (i + 1..=m).map(move |j| (i, j)))
        .collect();
    let mut shapes = Vec::new();
    for mask in 0..1u32 << all_edges.len() {
        let edges: Vec<(usize, usize)> = all_edges
            .iter()
            .enumerate()
            .filter(|(b, _)| mask >> b & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        // cycle detection by union-find over the selected edges
        let mut parent: Vec<usize> = (0..m).collect();
        fn find(p: &mut [usize], mut v: usize) -> usize {
            while p[v] != v {
                p[v] = p[p[v]];
                v = p[v];
            }
            v
        }
        let mut acyclic = true;
        for &(i, j) in &edges {
            let (ri, rj) = (find(&mut parent, i - 1), find(&mut parent, j - 1));
            if ri == rj {
                acyclic = false;
                break;
            }
            parent[ri] = rj;
        }
        if acyclic {
            shapes.push(edges);
        }
    }
    shapes
}

#[test]
fn forest_dp_equals_brute_force_all_shapes() {
    let rings = [
        Ring64::new(2, 2, 1).unwrap(), // Z_4
        Ring64::new(3, 2, 1).unwrap(), // Z_9
        Ring64::new(2, 1, 3).unwrap(), // F_8
    ];
    type ShapesByOrder = Vec<(usize, Vec<Vec<(usize, usize)>>)>;
    let shapes: ShapesByOrder = (1..=4).map(|m| (m, forest_shapes(m))).collect();
    assert_eq!(shapes.iter().map(|(_, s)| s.len()).sum::<usize>(), 1 + 2 + 7 + 38);

    for (ring_idx, ring) in rings.iter().enumerate() {
        let mut rng = ChaCha12Rng::seed_from_u64(7000 + ring_idx as u64);
        let n = ring.size_u64().unwrap();
        for trial in 0..20 {
            let d = rng.gen_range(1..=2);
            let e_set = seeded_set(ring, d, rng.gen_range(0..=10), &mut rng);
            for (m, shape_list) in &shapes {
                for edges in shape_list {
                    let labeled: Vec<(usize, usize, Element64)> = edges
                        .iter()
                        .map(|&(i, j)| (i, j, ring.element_of_index(rng.gen_range(0..n))))
                        .collect();
                    let forest = ForestSpec::new(*m, labeled).unwrap();
                    let dp = pi_forest(&e_set, &forest, false, u64::MAX).unwrap();
                    let brute = pi_forest_brute(&e_set, &forest, false, u64::MAX).unwrap();
                    assert_eq!(dp, brute, "{ring} trial {trial} m={m} edges={edges:?}");
                }
            }
        }
    }
}

#[test]
fn pair_count_three_way_agreement() {
    let rings = [
        Ring64::new(2, 2, 1).unwrap(),
        Ring64::new(3, 2, 1).unwrap(),
        Ring64::new(2, 1, 3).unwrap(),
    ];
    for (ring_idx, ring) in rings.iter().enumerate() {
        let mut rng = ChaCha12Rng::seed_from_u64(9000 + ring_idx as u64);
        let n = ring.size_u64().unwrap();
        for _ in 0..10 {
            let e_set = seeded_set(ring, 2, rng.gen_range(0..=10), &mut rng);
            let alpha = ring.element_of_index(rng.gen_range(0..n));
            let beta = ring.element_of_index(rng.gen_range(0..n));
            let direct = BigUint::from(pi_pair(&e_set, &alpha, &beta).unwrap());
            let star = ForestSpec::star(&[alpha.clone(), beta.clone()]).unwrap();
            let dp = pi_forest(&e_set, &star, false, u64::MAX).unwrap();
            let brute = pi_forest_brute(&e_set, &star, false, u64::MAX).unwrap();
            assert_eq!(direct, dp, "{ring}");
            assert_eq!(direct, brute, "{ring}");
        }
    }
}

#[test]
fn full_space_matrix_closed_form() {
    // matrix_solutions on E = full Z_p^d with a unit somewhere in b equals
    // p^{dn - n} (p^d - 1)
    for p in [2u64, 3] {
        let ring = Ring64::new(p, 1, 1).unwrap();
        for d in [1usize, 2] {
            let e_set = PointSet::full(&ring, d).unwrap();
            for n in [1usize, 2] {
                for unit_pos in 0..n {
                    let b: Vec<Element64> = (0..n)
                        .map(|i| if i == unit_pos { ring.one() } else { ring.zero() })
                        .collect();
                    let expect = BigUint::from(
                        p.pow((d * n - n) as u32) * (p.pow(d as u32) - 1),
                    );
                    let got = matrix_solutions(&e_set, &b, u64::MAX).unwrap();
                    assert_eq!(got, expect, "p={p} d={d} n={n} unit at {unit_pos}");
                    let brute = matrix_solutions_brute(&e_set, &b, u64::MAX).unwrap();
                    assert_eq!(brute, expect, "brute p={p} d={d} n={n}");
                }
            }
        }
    }
}
