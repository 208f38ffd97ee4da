//! Config-driven jobs: ring description, exact counting with input echo,
//! threshold tables over parameter grids, and identity verification over
//! every small ring.

use crate::config::{CountKind, JobConfig};
use crate::output::{Cell, Report};
use crate::selftest;
use galdot::{
    ambient_size, forest_thresholds, matrix_solutions, nontrivial_dimension, nu,
    nu_char_decomposition, pair_threshold_closed, parse_forest, parse_point_set, pi_forest,
    pi_pair, render_forest, render_point_set, single_threshold_closed, Element64, Error,
    Magnitude, Ring64, ThresholdFamily,
};
use num_bigint::BigUint;
use std::cmp::Ordering;

pub fn ring_info(desc: &str) -> Result<Report, Error> {
    let ring = Ring64::parse_descriptor(desc)?;
    let meta = vec![("task", Cell::from("ring-info"))];
    let columns = vec![
        "ring",
        "p",
        "e",
        "k",
        "f",
        "cardinality",
        "unit_count",
        "digit_alphabet",
        "generator",
        "layer_sizes",
    ];
    let mut report = Report::new(meta, columns);
    let f = ring
        .poly()
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(",");
    // generator of the nonzero digit representatives; absent for alphabets
    // too large to materialize
    let generator = match ring.teichmuller_set() {
        Ok(t) => Cell::from(t.beta().to_string()),
        Err(_) => Cell::Null,
    };
    let layers = (0..ring.e())
        .map(|i| ring.layer_size(i).map(|n| n.to_string()))
        .collect::<Result<Vec<_>, Error>>()?
        .join(";");
    report.push(vec![
        Cell::from(ring.to_string()),
        Cell::from(ring.p()),
        Cell::from(ring.e()),
        Cell::from(ring.k()),
        Cell::from(f),
        Cell::from(ring.cardinality().to_string()),
        Cell::from(ring.unit_count().to_string()),
        Cell::from(BigUint::from(ring.p()).pow(ring.k()).to_string()),
        generator,
        Cell::from(layers),
    ]);
    Ok(report)
}

fn missing(field: &str) -> Error {
    Error::ParseError(format!("config is missing required field `{field}`"))
}

fn read_input(path: &std::path::Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::ParseError(format!("cannot read {}: {e}", path.display())))
}

pub fn run_count(cfg: &JobConfig, budget: u64) -> Result<Report, Error> {
    let kind = cfg.kind.ok_or_else(|| missing("kind"))?;
    let points_path = cfg.points_file.as_ref().ok_or_else(|| missing("points_file"))?;
    let e_set = parse_point_set::<u64>(&read_input(&cfg.resolve(points_path))?)?;
    let ring = e_set.ring().clone();

    let parse_el = |field: &Option<String>, name: &str| -> Result<Element64, Error> {
        let s = field.as_ref().ok_or_else(|| missing(name))?;
        ring.parse_element(s)
    };

    let mut t_cell = Cell::Null;
    let mut alpha_cell = Cell::Null;
    let mut beta_cell = Cell::Null;
    let mut b_cell = Cell::Null;
    let mut forest_cell = Cell::Null;
    let mut distinct_cell = Cell::Null;
    let (value, detail) = match kind {
        CountKind::Nu => {
            let t = parse_el(&cfg.t, "t")?;
            t_cell = Cell::from(t.to_string());
            (nu(&e_set, &t)?.to_string(), Cell::Null)
        }
        CountKind::NuDecomposition => {
            let t = parse_el(&cfg.t, "t")?;
            t_cell = Cell::from(t.to_string());
            let dec = nu_char_decomposition(&e_set, &t, budget)?;
            let layers: Vec<String> = dec
                .nu_i
                .iter()
                .enumerate()
                .map(|(i, v)| format!("nu_{i}={v}"))
                .collect();
            (
                dec.reconstructed.to_string(),
                Cell::from(format!(
                    "{}; discrepancy={}",
                    layers.join("; "),
                    dec.discrepancy
                )),
            )
        }
        CountKind::Pair => {
            let alpha = parse_el(&cfg.alpha, "alpha")?;
            let beta = parse_el(&cfg.beta, "beta")?;
            alpha_cell = Cell::from(alpha.to_string());
            beta_cell = Cell::from(beta.to_string());
            (pi_pair(&e_set, &alpha, &beta)?.to_string(), Cell::Null)
        }
        CountKind::Forest => {
            let forest_path = cfg.forest_file.as_ref().ok_or_else(|| missing("forest_file"))?;
            let forest = parse_forest(&read_input(&cfg.resolve(forest_path))?, &ring)?;
            forest_cell = Cell::from(render_forest(&forest));
            let distinct = cfg.distinct.unwrap_or(false);
            distinct_cell = Cell::from(distinct);
            (
                pi_forest(&e_set, &forest, distinct, budget)?.to_string(),
                Cell::Null,
            )
        }
        CountKind::Matrix => {
            let b_strs = cfg.b.as_ref().ok_or_else(|| missing("b"))?;
            let b: Vec<Element64> = b_strs
                .iter()
                .map(|s| ring.parse_element(s))
                .collect::<Result<_, Error>>()?;
            b_cell = Cell::from(
                b.iter()
                    .map(|z| z.to_string())
                    .collect::<Vec<_>>()
                    .join(";"),
            );
            (matrix_solutions(&e_set, &b, budget)?.to_string(), Cell::Null)
        }
    };

    let meta = vec![
        ("task", Cell::from("count")),
        ("ring", Cell::from(ring.to_string())),
        ("d", Cell::from(e_set.d())),
        ("budget", Cell::from(budget)),
        ("points", Cell::from(render_point_set(&e_set))),
    ];
    let columns = vec![
        "kind", "set_size", "t", "alpha", "beta", "b", "forest", "distinct", "value", "detail",
    ];
    let mut report = Report::new(meta, columns);
    report.push(vec![
        Cell::from(kind.to_string()),
        Cell::from(e_set.len()),
        t_cell,
        alpha_cell,
        beta_cell,
        b_cell,
        forest_cell,
        distinct_cell,
        Cell::from(value),
        detail,
    ]);
    Ok(report)
}

const ALL_THEOREMS: &[&str] = &["single-dot", "pair", "forest", "matrix"];

pub fn run_bounds(cfg: &JobConfig) -> Result<Report, Error> {
    let ps = cfg.p.as_ref().ok_or_else(|| missing("p"))?;
    let es = cfg.e.as_ref().ok_or_else(|| missing("e"))?;
    let ks = cfg.k.as_ref().ok_or_else(|| missing("k"))?;
    let d_min = cfg.d_min.unwrap_or(1);
    let n = cfg.n.unwrap_or(3);
    let theorems: Vec<String> = match &cfg.theorems {
        Some(list) => list.clone(),
        None => ALL_THEOREMS.iter().map(|s| s.to_string()).collect(),
    };
    for th in &theorems {
        if !ALL_THEOREMS.contains(&th.as_str()) {
            return Err(Error::ParseError(format!(
                "unknown theorem `{th}`; expected one of {}",
                ALL_THEOREMS.join(", ")
            )));
        }
    }

    let meta = vec![("task", Cell::from("bounds"))];
    let columns = vec![
        "theorem",
        "p",
        "e",
        "k",
        "d",
        "n",
        "threshold_log_p",
        "ambient_log_p",
        "nontrivial_d",
        "vacuous",
    ];
    let mut report = Report::new(meta, columns);
    for &p in ps {
        for &e in es {
            for &k in ks {
                let d_max = cfg.d_max.unwrap_or(2 * e + 4);
                if d_max < d_min {
                    return Err(Error::ParseError(format!(
                        "empty dimension range {d_min}..{d_max}"
                    )));
                }
                for th in &theorems {
                    let nontrivial = nontrivial_d(th, p, e, k, n)?;
                    for d in d_min..=d_max {
                        let (threshold, n_col) = threshold_of(th, p, e, k, d, n)?;
                        let vacuous =
                            threshold.cmp_biguint(&ambient_size(p, e, k, d))? == Ordering::Greater;
                        report.push(vec![
                            Cell::from(th.as_str()),
                            Cell::from(p),
                            Cell::from(e),
                            Cell::from(k),
                            Cell::from(d),
                            Cell::from(n_col),
                            Cell::from(format!("{:.6}", threshold.log_p())),
                            Cell::from(format!("{:.6}", d as f64 * e as f64 * k as f64)),
                            Cell::from(nontrivial),
                            Cell::from(vacuous),
                        ]);
                    }
                }
            }
        }
    }
    Ok(report)
}

fn threshold_of(
    theorem: &str,
    p: u64,
    e: u32,
    k: u32,
    d: u32,
    n: u32,
) -> Result<(Magnitude, u32), Error> {
    match theorem {
        "single-dot" => Ok((single_threshold_closed(p, e, k, d)?, 1)),
        "pair" => Ok((pair_threshold_closed(p, e, k, d)?, 2)),
        "forest" => Ok((forest_thresholds(p, e, k, d, n)?.single_expr_e_inside, n)),
        "matrix" => Ok((forest_thresholds(p, e, k, d, n)?.matrix_full_exponent, n)),
        other => Err(Error::ParseError(format!("unknown theorem `{other}`"))),
    }
}

/// Least d at which the premise is satisfiable at all.
fn nontrivial_d(theorem: &str, p: u64, e: u32, k: u32, n: u32) -> Result<u32, Error> {
    let family = match theorem {
        "single-dot" => ThresholdFamily::SingleDot,
        "pair" => ThresholdFamily::Pair,
        "forest" => ThresholdFamily::Forest { n },
        "matrix" => {
            for d in 1..=(10 * e + n + 32) {
                let threshold = forest_thresholds(p, e, k, d, n)?.matrix_full_exponent;
                if threshold.cmp_biguint(&ambient_size(p, e, k, d))? != Ordering::Greater {
                    return Ok(d);
                }
            }
            return Err(Error::InternalCardinalityError {
                what: "matrix nontrivial dimension sweep",
                expected: "a feasible dimension".to_string(),
                got: format!("none up to {}", 10 * e + n + 32),
            });
        }
        other => return Err(Error::ParseError(format!("unknown theorem `{other}`"))),
    };
    Ok(nontrivial_dimension(p, e, k, family)?.exact)
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

/// Every (p, e, k) with p^{ek} <= cap, in (p, ek, e) order.
fn rings_up_to(cap: u64) -> Result<Vec<Ring64>, Error> {
    let mut out = Vec::new();
    for p in 2..=cap {
        if !is_prime(p) {
            continue;
        }
        let mut m = 1u32;
        let mut power = p;
        loop {
            for e in 1..=m {
                if m.is_multiple_of(e) {
                    out.push(Ring64::new(p, e, m / e)?);
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

pub const VERIFY_DEFAULT_CAP: u64 = 256;

pub fn run_verify(descriptors: Option<&[String]>, cap: u64) -> Result<(Report, bool), Error> {
    let rings: Vec<Ring64> = match descriptors {
        Some(list) => list
            .iter()
            .map(|d| Ring64::parse_descriptor(d))
            .collect::<Result<_, Error>>()?,
        None => rings_up_to(cap)?,
    };
    let meta = vec![
        ("task", Cell::from("verify-identities")),
        ("cap", Cell::from(cap)),
    ];
    let mut report = Report::new(meta, vec!["ring", "check", "status", "detail"]);
    let mut all_ok = true;
    for ring in &rings {
        let name = ring.to_string();
        let checks = [
            ("orthogonality", selftest::orthogonality(ring)),
            ("unit-sum", selftest::unit_sum_closed_form(ring)),
            ("ideal-reduction", selftest::ideal_reduction(ring)),
        ];
        for (check, result) in checks {
            let (status, detail) = match result {
                Ok(()) => (Cell::from("pass"), Cell::Null),
                Err(msg) => {
                    all_ok = false;
                    (Cell::from("FAIL"), Cell::from(msg))
                }
            };
            report.push(vec![
                Cell::from(name.as_str()),
                Cell::from(check),
                status,
                detail,
            ]);
        }
    }
    eprintln!(
        "verify-identities: {} rings, {}",
        rings.len(),
        if all_ok { "all passed" } else { "FAILURES present" }
    );
    Ok((report, all_ok))
}
