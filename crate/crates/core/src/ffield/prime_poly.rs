//! Dense polynomials over F_p on raw residues; only used to pick the
//! canonical modulus before any context exists.

use crate::arith::{self, pow_mod};

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = pow_mod(m[dm], p - 2, p);
    while r.len() > dm {
        let top = r.len() - 1;
        let c = (r[top] as u128 * lead_inv as u128 % p as u128) as u64;
        let shift = top - dm;
        for (i, mi) in m.iter().enumerate() {
            let sub = (c as u128 * *mi as u128 % p as u128) as u64;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        r = trim(r);
    }
    r
}

fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u128; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + *x as u128 * *y as u128) % p as u128;
        }
    }
    rem(&out.into_iter().map(|c| c as u64).collect::<Vec<_>>(), m, p)
}

fn pow_mod_poly(base: &[u64], mut e: u128, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(&acc, &b, m, p);
        }
        e >>= 1;
        if e > 0 {
            b = mul_mod(&b, &b, m, p);
        }
    }
    acc
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

fn sub_t(a: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    if r.len() < 2 {
        r.resize(2, 0);
    }
    r[1] = (r[1] + p - 1) % p;
    trim(r)
}

/// Rabin's irreducibility test for a monic polynomial of degree d.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let d = f.len() - 1;
    if d == 1 {
        return true;
    }
    // T^(p^k) mod f for k = 1..=d
    let t = vec![0u64, 1];
    let mut powers = Vec::with_capacity(d);
    let mut cur = t;
    for _ in 0..d {
        cur = pow_mod_poly(&cur, p as u128, f, p);
        powers.push(cur.clone());
    }
    if !sub_t(&powers[d - 1], p).is_empty() {
        return false;
    }
    arith::factorize(d as u64).into_iter().all(|(q, _)| {
        let k = d / q as usize;
        gcd(f, &sub_t(&powers[k - 1], p), p).len() == 1
    })
}

/// Lexicographically smallest monic irreducible of degree d: the lower
/// coefficients are read as base-p digits (constant term least significant)
/// and scanned in increasing order.
pub(crate) fn canonical_irreducible(p: u64, d: usize) -> Vec<u64> {
    if d == 1 {
        return vec![0, 1];
    }
    let mut digits = vec![0u64; d];
    loop {
        let mut f = digits.clone();
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
        // increment base-p counter
        let mut i = 0;
        loop {
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
            i += 1;
            assert!(i < d, "irreducible polynomials of every degree exist");
        }
    }
}

/// Multiply a reduced element (len d) by T modulo the monic `modulus` (len d + 1).
pub(crate) fn mul_by_t(a: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let d = a.len();
    let top = a[d - 1];
    let mut out = vec![0u64; d];
    for i in (1..d).rev() {
        out[i] = a[i - 1];
    }
    if top != 0 {
        for (i, slot) in out.iter_mut().enumerate() {
            let sub = (top as u128 * modulus[i] as u128 % p as u128) as u64;
            *slot = (*slot + p - sub) % p;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rabin_agrees_with_brute_force_for_small_degrees() {
        let p = 5u64;
        for d in 2..=3usize {
            for k in 0..p.pow(d as u32) {
                let mut f: Vec<u64> = (0..d).map(|i| (k / p.pow(i as u32)) % p).collect();
                f.push(1);
                // degree <= 3: irreducible iff no root
                let has_root =
                    (0..p).any(|x| f.iter().rev().fold(0u64, |acc, c| (acc * x + c) % p) == 0);
                assert_eq!(is_irreducible(&f, p), !has_root, "{f:?}");
            }
        }
    }

    #[test]
    fn quartic_with_quadratic_factors_is_reducible() {
        // (T^2 + 2)(T^2 + 3) = T^4 + 5T^2 + 6 = T^4 + 1 over F_5; no roots but reducible
        assert!(!is_irreducible(&[1, 0, 0, 0, 1], 5));
    }
}
