//! Polynomial helpers over F_p with u64 coefficients: primality of p,
//! irreducibility by trial division, the default defining polynomial, and
//! modular inverses used to seed Hensel lifting.
//!
//! Polynomials are coefficient vectors, constant term first. The zero
//! polynomial is the empty vector; invariants below assume trimmed input.

/// Deterministic Miller-Rabin, valid for all u64 inputs with this base set.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n.is_multiple_of(q) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

pub fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    assert!(!b.is_empty());
    let mut r: Vec<u64> = a.iter().map(|c| c % p).collect();
    r = trim(r);
    let db = b.len() - 1;
    let lead_inv = inv_mod_p(b[db], p);
    while r.len() > db {
        let dr = r.len() - 1;
        let c = mul_mod(r[dr], lead_inv, p);
        for (j, &bj) in b.iter().enumerate() {
            let t = mul_mod(c, bj, p);
            let idx = dr - db + j;
            r[idx] = (r[idx] + p - t) % p;
        }
        r = trim(r);
    }
    r
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(ai, bj, p)) % p;
        }
    }
    trim(out)
}

fn inv_mod_p(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Monic degree-k polynomials over F_p in lexicographic order of
/// (c_0, c_1, ..., c_{k-1}), constant term most significant.
fn monic_polys(p: u64, k: usize) -> impl Iterator<Item = Vec<u64>> {
    let total = (p as u128).checked_pow(k as u32).expect("search space");
    (0..total).map(move |n| {
        let mut c = Vec::with_capacity(k + 1);
        let mut rest = n;
        let mut place = total / p as u128;
        for _ in 0..k {
            c.push((rest / place.max(1)) as u64);
            rest %= place.max(1);
            place /= p as u128;
        }
        c.push(1);
        c
    })
}

/// Trial division by every monic polynomial of degree 1..=k/2.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let fp: Vec<u64> = trim(f.iter().map(|c| c % p).collect());
    if fp.len() < 2 {
        return false; // degree dropped mod p, or constant
    }
    let k = fp.len() - 1;
    if k == 1 {
        return true;
    }
    // constant term zero means x divides f
    if fp[0] == 0 {
        return false;
    }
    for d in 1..=k / 2 {
        for g in monic_polys(p, d) {
            if poly_rem(&fp, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of degree k mod p,
/// coefficients in {0..p-1}.
pub fn default_poly(p: u64, k: usize) -> Vec<u64> {
    monic_polys(p, k)
        .find(|f| is_irreducible(f, p))
        .expect("an irreducible polynomial of every degree exists over F_p")
}

/// Inverse of `a` modulo `f` over F_p, via extended Euclid. None when
/// gcd(a, f) is not constant.
pub fn poly_inverse(a: &[u64], f: &[u64], p: u64) -> Option<Vec<u64>> {
    let a = trim(a.iter().map(|c| c % p).collect());
    if a.is_empty() {
        return None;
    }
    // (r0, s0) and (r1, s1) with s*a = r mod f
    let mut r0: Vec<u64> = trim(f.iter().map(|c| c % p).collect());
    let mut r1 = a;
    let mut s0: Vec<u64> = Vec::new();
    let mut s1: Vec<u64> = vec![1];
    while !r1.is_empty() {
        let (q, r) = poly_divmod(&r0, &r1, p);
        let s = poly_sub(&s0, &poly_mul(&q, &s1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    if r0.len() != 1 {
        return None;
    }
    let c = inv_mod_p(r0[0], p);
    let mut inv: Vec<u64> = s0.iter().map(|&x| mul_mod(x, c, p)).collect();
    inv = poly_rem(&inv, &trim(f.iter().map(|c| c % p).collect()), p);
    Some(inv)
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

fn poly_divmod(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    assert!(!b.is_empty());
    let db = b.len() - 1;
    let lead_inv = inv_mod_p(b[db], p);
    let mut r = trim(a.to_vec());
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - db];
    while r.len() > db {
        let dr = r.len() - 1;
        let c = mul_mod(r[dr], lead_inv, p);
        q[dr - db] = c;
        for (j, &bj) in b.iter().enumerate() {
            let t = mul_mod(c, bj, p);
            let idx = dr - db + j;
            r[idx] = (r[idx] + p - t) % p;
        }
        r = trim(r);
    }
    (trim(q), r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small_and_large() {
        let primes: Vec<u64> = (0..100).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97]
        );
        assert!(is_prime((1 << 61) - 1));
        assert!(!is_prime(3215031751)); // strong pseudoprime to bases 2,3,5,7
    }

    #[test]
    fn irreducibility_mod_2() {
        // x^2 + x + 1 irreducible, x^2 + 1 = (x+1)^2
        assert!(is_irreducible(&[1, 1, 1], 2));
        assert!(!is_irreducible(&[1, 0, 1], 2));
        assert!(!is_irreducible(&[0, 0, 1], 2));
        // count of monic irreducible quartics over F_2 is 3
        let n = monic_polys(2, 4).filter(|f| is_irreducible(f, 2)).count();
        assert_eq!(n, 3);
        // and necklace-count check over F_3, degree 3: (27 - 3)/3 = 8
        let n = monic_polys(3, 3).filter(|f| is_irreducible(f, 3)).count();
        assert_eq!(n, 8);
    }

    #[test]
    fn default_polys() {
        assert_eq!(default_poly(2, 1), vec![0, 1]); // x
        assert_eq!(default_poly(2, 2), vec![1, 1, 1]); // x^2+x+1
        assert_eq!(default_poly(2, 3), vec![1, 0, 1, 1]); // x^3+x^2+1 beats x^3+x+1 in constant-first lex
        assert_eq!(default_poly(3, 1), vec![0, 1]);
        assert_eq!(default_poly(3, 2), vec![1, 0, 1]); // x^2+1 over F_3
    }

    #[test]
    fn inverse_round_trip() {
        let f = [1u64, 1, 1]; // x^2+x+1 mod 2
        let a = [1u64, 1]; // x+1
        let inv = poly_inverse(&a, &f, 2).unwrap();
        let prod = poly_rem(&poly_mul(&a, &inv, 2), &f, 2);
        assert_eq!(prod, vec![1]);
        // non-unit: gcd(x, x^2) != 1 ... use reducible modulus
        assert!(poly_inverse(&[0, 1], &[0, 0, 1], 2).is_none());
    }
}
