//! Text formats for point sets and forests.
//!
//! Point-set file: a `ring: p=..,e=..,k=..,f=..` header, a `d=..` line,
//! then one point per line as `;`-separated coefficient tuples. Forest
//! file: `m=..` then `i j alpha` lines with alpha a coefficient tuple.

use crate::count::{ForestSpec, PointSet};
use crate::error::{Error, Result};
use crate::ring::{Ring, RingElement};
use crate::scalar::Residue;

fn bad(msg: impl Into<String>) -> Error {
    Error::ParseError(msg.into())
}

fn parse_ring_header<T: Residue>(line: &str) -> Result<Ring<T>> {
    let rest = line
        .strip_prefix("ring:")
        .ok_or_else(|| bad(format!("expected 'ring:' header, got '{line}'")))?
        .trim();
    let (params, f_part) = rest
        .split_once(",f=")
        .ok_or_else(|| bad(format!("ring header missing ',f=': '{line}'")))?;
    let mut p = None;
    let mut e = None;
    let mut k = None;
    for field in params.split(',') {
        let (key, value) = field
            .trim()
            .split_once('=')
            .ok_or_else(|| bad(format!("bad ring field '{field}'")))?;
        let n: u64 = value
            .trim()
            .parse()
            .map_err(|_| bad(format!("bad ring number '{value}'")))?;
        match key.trim() {
            "p" => p = Some(n),
            "e" => e = Some(n as u32),
            "k" => k = Some(n as u32),
            other => return Err(bad(format!("unknown ring field '{other}'"))),
        }
    }
    let (p, e, k) = match (p, e, k) {
        (Some(p), Some(e), Some(k)) => (p, e, k),
        _ => return Err(bad(format!("ring header needs p, e, k: '{line}'"))),
    };
    let f: Vec<u64> = f_part
        .split(',')
        .map(|c| {
            c.trim()
                .parse::<u64>()
                .map_err(|_| bad(format!("bad polynomial coefficient '{c}'")))
        })
        .collect::<Result<_>>()?;
    Ring::with_poly_u64(p, e, k, &f)
}

fn parse_point<T: Residue>(ring: &Ring<T>, d: usize, line: &str) -> Result<Vec<RingElement<T>>> {
    let coords: Vec<&str> = line.split(';').collect();
    if coords.len() != d {
        return Err(Error::DimensionMismatch {
            left: coords.len(),
            right: d,
        });
    }
    coords
        .iter()
        .map(|c| ring.parse_element(c.trim()))
        .collect()
}

pub fn parse_point_set<T: Residue>(text: &str) -> Result<PointSet<T>> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| bad("empty point-set file"))?;
    let ring = parse_ring_header::<T>(header)?;
    let d_line = lines
        .next()
        .ok_or_else(|| bad("point-set file missing 'd=' line"))?;
    let d: usize = d_line
        .strip_prefix("d=")
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| bad(format!("expected 'd=<dim>', got '{d_line}'")))?;
    let points = lines
        .map(|line| parse_point(&ring, d, line))
        .collect::<Result<Vec<_>>>()?;
    PointSet::new(ring, d, points)
}

pub fn render_point_set<T: Residue>(e_set: &PointSet<T>) -> String {
    let r = e_set.ring();
    let f = r
        .poly()
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(",");
    let mut out = format!(
        "ring: p={},e={},k={},f={}\nd={}\n",
        r.p(),
        r.e(),
        r.k(),
        f,
        e_set.d()
    );
    for pt in e_set.points() {
        let line = pt
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(";");
        out.push_str(&line);
        out.push('\n');
    }
    out
}

pub fn parse_forest<T: Residue>(text: &str, ring: &Ring<T>) -> Result<ForestSpec<T>> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let m_line = lines.next().ok_or_else(|| bad("empty forest file"))?;
    let m: usize = m_line
        .strip_prefix("m=")
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| bad(format!("expected 'm=<vertices>', got '{m_line}'")))?;
    let mut edges = Vec::new();
    for line in lines {
        let mut parts = line.split_whitespace();
        let (i, j, alpha) = match (parts.next(), parts.next(), parts.next(), parts.next()) {
            (Some(i), Some(j), Some(a), None) => (i, j, a),
            _ => return Err(bad(format!("expected 'i j alpha', got '{line}'"))),
        };
        let i: usize = i.parse().map_err(|_| bad(format!("bad vertex '{i}'")))?;
        let j: usize = j.parse().map_err(|_| bad(format!("bad vertex '{j}'")))?;
        edges.push((i, j, ring.parse_element(alpha)?));
    }
    ForestSpec::new(m, edges)
}

pub fn render_forest<T: Residue>(forest: &ForestSpec<T>) -> String {
    let mut out = format!("m={}\n", forest.vertex_count());
    for (i, j, alpha) in forest.edges() {
        out.push_str(&format!("{i} {j} {alpha}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::{nu, pi_forest, DEFAULT_WORK_BUDGET};

    #[test]
    fn point_set_round_trip() {
        let text = "ring: p=2,e=2,k=2,f=1,1,1\nd=2\n3,1;0,2\n1,0;2,2\n";
        let e = parse_point_set::<u64>(text).unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(e.d(), 2);
        assert_eq!(e.ring().to_string(), "p=2 e=2 k=2 f=1,1,1");
        assert_eq!(render_point_set(&e), text);
        let again = parse_point_set::<u64>(&render_point_set(&e)).unwrap();
        assert_eq!(again.points(), e.points());
    }

    #[test]
    fn point_set_is_usable() {
        let text = "ring: p=3,e=1,k=1,f=0,1\nd=2\n1;2\n0;0\n2;1\n";
        let e = parse_point_set::<u64>(text).unwrap();
        let t = e.ring().zero();
        // dot hits zero only through the origin: 2*1 + 3 ordered pairs
        assert_eq!(nu(&e, &t).unwrap(), 5);
    }

    #[test]
    fn point_set_errors() {
        assert!(parse_point_set::<u64>("").is_err());
        assert!(parse_point_set::<u64>("ring: p=2,e=1,k=1\nd=1\n").is_err());
        assert!(parse_point_set::<u64>("ring: p=2,e=1,k=1,f=0,1\nx=1\n").is_err());
        let text = "ring: p=2,e=1,k=1,f=0,1\nd=2\n1\n";
        assert!(matches!(
            parse_point_set::<u64>(text),
            Err(Error::DimensionMismatch { .. })
        ));
        let text = "ring: p=4,e=1,k=1,f=0,1\nd=1\n1\n";
        assert!(matches!(
            parse_point_set::<u64>(text),
            Err(Error::NotPrime(4))
        ));
    }

    #[test]
    fn forest_round_trip() {
        let ring = Ring::<u64>::with_poly_u64(2, 2, 2, &[1, 1, 1]).unwrap();
        let text = "m=3\n1 2 1,0\n1 3 0,1\n";
        let f = parse_forest(text, &ring).unwrap();
        assert_eq!(f.vertex_count(), 3);
        assert_eq!(f.edges().len(), 2);
        assert_eq!(render_forest(&f), text);

        assert!(parse_forest("m=3\n1 2\n", &ring).is_err());
        assert!(matches!(
            parse_forest("m=2\n1 2 1,0\n1 2 0,1\n", &ring),
            Err(Error::CyclicGraph)
        ));
    }

    #[test]
    fn parsed_pieces_count_together() {
        let e = parse_point_set::<u64>("ring: p=3,e=1,k=1,f=0,1\nd=2\n0;0\n0;1\n0;2\n1;0\n1;1\n1;2\n2;0\n2;1\n2;2\n").unwrap();
        let f = parse_forest("m=3\n1 2 0\n1 3 0\n", e.ring()).unwrap();
        let n = pi_forest(&e, &f, false, DEFAULT_WORK_BUDGET).unwrap();
        assert_eq!(n, 153u32.into());
    }
}
