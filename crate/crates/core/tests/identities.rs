//! Exact identity sweeps for the character-sum layer: orthogonality over
//! every ring up to the size cap, the unit-sum closed form, the ideal
//! reduction identity, exponent additivity, complex rendering agreement,
//! and the bilinear-form inequality on random instances.

use galdot::{char_sum, char_sum_full, ideal_sum_reduction_check, steele_bound_check, unit_sum, Ring64};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use std::time::Instant;

/// Every (p, e, k) with p prime and p^{ek} <= cap, one ring each.
fn rings_up_to(cap: u64) -> Vec<Ring64> {
    let mut sieve = vec![true; cap as usize + 1];
    let mut out = Vec::new();
    for p in 2..=cap as usize {
        if !sieve[p] {
            continue;
        }
        for m in (p * p..=cap as usize).step_by(p) {
            sieve[m] = false;
        }
        let mut max_m = 0u32;
        let mut power = 1u64;
        while power <= cap / p as u64 {
            power *= p as u64;
            max_m += 1;
        }
        for m in 1..=max_m {
            for e in 1..=m {
                if m % e == 0 {
                    out.push(Ring64::new(p as u64, e, m / e).unwrap());
                }
            }
        }
    }
    out
}

#[test]
fn orthogonality_for_every_ring_up_to_4096() {
    let start = Instant::now();
    let rings = rings_up_to(4096);
    let mut checked = 0u64;
    for ring in &rings {
        let n = ring.size_u64().unwrap() as i64;
        for a in ring.elements() {
            let s = char_sum_full(ring, &a).unwrap();
            if a.is_zero() {
                assert_eq!(s.integer_value(), Some(n), "{ring}");
            } else {
                assert!(s.is_zero(), "{ring} a={a}");
            }
            checked += 1;
        }
    }
    eprintln!(
        "orthogonality: {} rings, {} sums, {:?}",
        rings.len(),
        checked,
        start.elapsed()
    );
}

#[test]
fn unit_sum_closed_form_every_ring() {
    for ring in rings_up_to(4096) {
        let (p, e, k) = (ring.p(), ring.e(), ring.k());
        for n in 1..e {
            let s = unit_sum(&ring, n).unwrap();
            let want = if n + 1 == e {
                -(p.pow((e - 1) * k) as i64)
            } else {
                0
            };
            assert_eq!(s.integer_value(), Some(want), "{ring} n={n}");
        }
    }
}

#[test]
fn ideal_reduction_every_ring_up_to_256() {
    for ring in rings_up_to(256) {
        for a in ring.elements() {
            for i in 0..ring.e() {
                let report = ideal_sum_reduction_check(&a, i).unwrap();
                assert!(report.equal, "{ring} a={a} i={i}");
            }
        }
    }
}

#[test]
fn chi_exponent_additive_every_ring_up_to_256() {
    for ring in rings_up_to(256) {
        let pe = ring.p().pow(ring.e());
        let elems: Vec<_> = ring.elements().collect();
        let exps: Vec<u64> = elems.iter().map(|z| z.chi_exponent().unwrap()).collect();
        let mut nontrivial = false;
        for (a, ea) in elems.iter().zip(&exps) {
            if *ea != 0 {
                nontrivial = true;
            }
            for (b, eb) in elems.iter().zip(&exps) {
                let got = a.add(b).unwrap().chi_exponent().unwrap();
                assert_eq!(got, (ea + eb) % pe, "{ring} {a} {b}");
            }
        }
        assert!(nontrivial, "{ring} character trivial");
    }
}

#[test]
fn complex_rendering_matches_float_evaluation() {
    // canonical cyclotomic coefficients evaluated once vs naive float
    // accumulation of e^{2 pi i Tr(az)/p^e} over the whole ring
    let mut rng = ChaCha12Rng::seed_from_u64(7);
    for ring in rings_up_to(512) {
        let n = ring.size_u64().unwrap();
        let pe = ring.p().pow(ring.e()) as f64;
        let mut picks = vec![ring.zero(), ring.one()];
        for _ in 0..3 {
            picks.push(ring.element_of_index(rng.gen_range(0..n)));
        }
        for a in picks {
            let exact = char_sum(ring.elements(), &a).unwrap().to_complex();
            let mut float_sum = Complex64::new(0.0, 0.0);
            for z in ring.elements() {
                let t = a.mul(&z).unwrap().chi_exponent().unwrap() as f64;
                let angle = 2.0 * std::f64::consts::PI * t / pe;
                float_sum += Complex64::new(angle.cos(), angle.sin());
            }
            assert!(
                (exact - float_sum).norm() < 1e-9 * (1.0 + float_sum.norm()),
                "{ring} a={a}: {exact} vs {float_sum}"
            );
        }
    }
}

#[test]
fn bilinear_inequality_seeded_trials() {
    let mut rng = ChaCha12Rng::seed_from_u64(99);
    for trial in 0..100 {
        let rows = rng.gen_range(1..=6);
        let cols = rng.gen_range(1..=6);
        let c: Vec<Vec<f64>> = (0..rows)
            .map(|_| {
                (0..cols)
                    .map(|_| {
                        if rng.gen_bool(0.3) {
                            0.0
                        } else {
                            rng.gen_range(0.0..4.0)
                        }
                    })
                    .collect()
            })
            .collect();
        let rand_vec = |rng: &mut ChaCha12Rng, len: usize| -> Vec<Complex64> {
            (0..len)
                .map(|_| Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
                .collect()
        };
        let z = rand_vec(&mut rng, rows);
        let y = rand_vec(&mut rng, cols);
        let report = steele_bound_check(&c, &z, &y).unwrap();
        assert!(report.holds, "trial {trial}: {} > {}", report.lhs, report.rhs);
        assert!(report.rhs >= 0.0);
    }
}
