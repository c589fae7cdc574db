//! Pohlig-Hellman discrete logarithms in GF(p^d)^*.

use std::collections::HashMap;

use num_integer::Integer;

use super::FieldElement;
use crate::error::{Error, Result};

/// Largest prime-order subgroup handled by baby-step giant-step.
const BSGS_PRIME_LIMIT: u128 = 1 << 44;

fn mod_inv(a: u128, m: u128) -> Option<u128> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(m as i128) as u128)
}

/// log of `h` to base `gamma`, where `gamma` has prime order `q`.
fn bsgs(gamma: &FieldElement, h: &FieldElement, q: u128) -> Result<u128> {
    if q > BSGS_PRIME_LIMIT {
        return Err(Error::BudgetExceeded {
            what: "discrete log prime factor".into(),
            needed: q,
            budget: BSGS_PRIME_LIMIT,
        });
    }
    let m = (q as f64).sqrt().ceil() as u128 + 1;
    let mut table = HashMap::with_capacity(m as usize);
    let mut cur = gamma.ctx().one();
    for j in 0..m {
        table.entry(cur.canonical_index()).or_insert(j);
        cur = &cur * gamma;
    }
    let step = gamma.pow(q - (m % q));
    let mut y = h.clone();
    for i in 0..=m {
        if let Some(&j) = table.get(&y.canonical_index()) {
            return Ok((i * m + j) % q);
        }
        y = &y * &step;
    }
    Err(Error::InvariantViolation(
        "element outside the cyclic subgroup".into(),
    ))
}

pub(super) fn discrete_log(a: &FieldElement) -> Result<u128> {
    if a.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let ctx = a.ctx().clone();
    let n = ctx.group_order();
    let g = ctx.primitive_element();
    let mut residues = Vec::new();
    for &(q, e) in ctx.group_order_factors() {
        let qe = q.pow(e);
        let cof = n / qe;
        let gq = g.pow(cof);
        let aq = a.pow(cof);
        let gamma = gq.pow(qe / q);
        let mut x = 0u128;
        let mut qk = 1u128;
        for k in 0..e {
            let shifted = &aq * &gq.pow(qe - x % qe);
            let h = shifted.pow(qe / q / q.pow(k));
            let digit = bsgs(&gamma, &h, q)?;
            x += digit * qk;
            qk *= q;
        }
        residues.push((x % qe, qe));
    }
    // CRT
    let mut acc = 0u128;
    let mut modulus = 1u128;
    for (r, m) in residues {
        let inv = mod_inv(modulus % m, m).expect("coprime prime powers");
        let t = ((r + m - acc % m) % m) * inv % m;
        acc += modulus * t;
        modulus *= m;
    }
    Ok(acc % n)
}

pub(super) fn power_preimages(a: &FieldElement, e: u128) -> Result<Vec<FieldElement>> {
    let ctx = a.ctx().clone();
    let n = ctx.group_order();
    if a.is_zero() {
        return Ok(if e == 0 { Vec::new() } else { vec![ctx.zero()] });
    }
    let k = discrete_log(a)?;
    let g = e.gcd(&n);
    if k % g != 0 {
        return Ok(Vec::new());
    }
    let reduced = n / g;
    let j0 = if reduced == 1 {
        0
    } else {
        (k / g) % reduced * mod_inv((e / g) % reduced, reduced).expect("coprime after division")
            % reduced
    };
    let prim = ctx.primitive_element();
    let base = prim.pow(j0);
    let step = prim.pow(reduced);
    let mut out = Vec::with_capacity(g as usize);
    let mut cur = base;
    for _ in 0..g {
        out.push(cur.clone());
        cur = &cur * &step;
    }
    out.sort();
    Ok(out)
}
