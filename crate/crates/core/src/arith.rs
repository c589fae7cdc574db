//! Integer and cyclotomic arithmetic: totients, cyclotomic polynomials,
//! the `phi(N) <= 20` index bound, and the classifier that reads the Artin
//! invariant of a reduction off the residue of p modulo the complex index.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::IntScalar;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &SMALL {
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

fn pollard_rho(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        while g == 1 {
            x = f(x);
            y = f(f(y));
            g = x.abs_diff(y).gcd(&n);
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

/// Prime factorization as sorted `(prime, exponent)` pairs; `factorize(1)` is empty.
pub fn factorize(n: u64) -> Vec<(u64, u32)> {
    let mut primes = Vec::new();
    let mut rest = n;
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        while rest.is_multiple_of(q) {
            primes.push(q);
            rest /= q;
        }
    }
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            primes.push(m);
            continue;
        }
        let f = pollard_rho(m);
        stack.push(f);
        stack.push(m / f);
    }
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for q in primes {
        match out.last_mut() {
            Some((last, e)) if *last == q => *e += 1,
            _ => out.push((q, 1)),
        }
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    factorize(n)
        .into_iter()
        .fold(1, |acc, (q, e)| acc * (q - 1) * q.pow(e - 1))
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (q, e) in factorize(n) {
        let len = out.len();
        let mut qk = 1;
        for _ in 0..e {
            qk *= q;
            for i in 0..len {
                out.push(out[i] * qk);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Multiplicative order of `a` modulo `n`; `None` unless gcd(a, n) = 1.
pub fn multiplicative_order(a: u64, n: u64) -> Option<u64> {
    if n == 1 {
        return Some(1);
    }
    if a.gcd(&n) != 1 {
        return None;
    }
    let phi = euler_phi(n);
    let mut ord = phi;
    for (q, _) in factorize(phi) {
        while ord.is_multiple_of(q) && pow_mod(a, ord / q, n) == 1 {
            ord /= q;
        }
    }
    Some(ord)
}

/// Exact division of integer polynomials (low degree first) by a monic divisor.
fn div_exact_monic<T: IntScalar>(num: &[T], den: &[T]) -> Vec<T> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![T::zero(); num.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[k + j] = rem[k + j].clone() - c.clone() * dj.clone();
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(|r| r.is_zero()));
    quot
}

/// Coefficients of the n-th cyclotomic polynomial, low degree first, by
/// dividing `T^n - 1` by the cyclotomic factors of the proper divisors.
pub fn cyclotomic_poly<T: IntScalar>(n: u64) -> Vec<T> {
    assert!(n >= 1, "cyclotomic_poly needs n >= 1");
    let mut cache: BTreeMap<u64, Vec<T>> = BTreeMap::new();
    for d in divisors(n) {
        let mut poly = vec![T::zero(); d as usize + 1];
        poly[0] = -T::one();
        poly[d as usize] = T::one();
        for (e, phi_e) in cache.iter() {
            if d % e == 0 {
                poly = div_exact_monic(&poly, phi_e);
            }
        }
        cache.insert(d, poly);
    }
    cache.remove(&n).expect("n is its own divisor")
}

/// All N >= 1 with phi(N) <= `rank_bound`, sorted.
pub fn admissible_complex_indices(rank_bound: u64) -> Vec<u64> {
    // phi(N) >= sqrt(N/2), so N <= 2 * bound^2 covers everything.
    let limit = 2 * rank_bound * rank_bound + 2;
    (1..=limit)
        .filter(|&n| euler_phi(n) <= rank_bound)
        .collect()
}

/// Smallest m >= 1 with p^m = -1 (mod n), or `None` when -1 is not a power of p.
pub fn neg_one_exponent(p: u64, n: u64) -> Result<Option<u64>> {
    if p.gcd(&n) != 1 {
        return Err(Error::NotCoprime { p, n });
    }
    let ord = multiplicative_order(p % n, n).expect("coprime");
    let target = (n - 1) % n;
    let mut x = 1u64;
    for m in 1..=ord {
        x = mul_mod(x, p % n, n);
        if x == target {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReductionOutcome {
    Supersingular { artin: u64 },
    FiniteHeight,
    Invalid,
}

/// Type of the reduction modulo p of a complex K3 surface of non-symplectic
/// index `n` whose transcendental rank equals phi(n).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionClass {
    pub n: u64,
    pub p: u64,
    pub outcome: ReductionOutcome,
}

pub fn classify_reduction(n: u64, p: u64) -> ReductionClass {
    let outcome = match neg_one_exponent(p, n) {
        Err(_) => ReductionOutcome::Invalid,
        Ok(Some(m)) => ReductionOutcome::Supersingular { artin: m },
        Ok(None) => ReductionOutcome::FiniteHeight,
    };
    ReductionClass { n, p, outcome }
}

/// Residues r in [0, n) coprime to n whose reductions are supersingular of Artin invariant m.
pub fn residue_classes_for_artin(n: u64, m: u64) -> Vec<u64> {
    (0..n)
        .filter(|&r| matches!(neg_one_exponent(r, n), Ok(Some(k)) if k == m))
        .collect()
}

/// Residue lists printed in the literature for the order-38 elliptic K3
/// surface y^2 = x^3 + t^7 x + t, keyed by (N, Artin invariant).
pub const REFERENCE_RESIDUE_LISTS: &[(u64, u64, &[u64])] = &[
    (38, 9, &[3, 13, 15, 19, 29, 33]),
    (38, 3, &[27, 31]),
    (38, 1, &[37]),
];

/// Machine-readable comparison of a computed residue class with a printed one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueNote {
    pub n: u64,
    pub artin: u64,
    pub printed: Vec<u64>,
    pub computed: Vec<u64>,
    pub agrees: bool,
    pub missing_from_printed: Vec<u64>,
    pub extra_in_printed: Vec<u64>,
    pub non_units_in_printed: Vec<u64>,
}

pub fn compare_with_printed(n: u64, artin: u64, printed: &[u64]) -> ResidueNote {
    let computed = residue_classes_for_artin(n, artin);
    let missing_from_printed = computed
        .iter()
        .copied()
        .filter(|r| !printed.contains(r))
        .collect();
    let extra_in_printed: Vec<u64> = printed
        .iter()
        .copied()
        .filter(|r| !computed.contains(r))
        .collect();
    let non_units_in_printed = printed.iter().copied().filter(|r| r.gcd(&n) != 1).collect();
    ResidueNote {
        n,
        artin,
        printed: printed.to_vec(),
        agrees: computed.as_slice() == printed,
        computed,
        missing_from_printed,
        extra_in_printed,
        non_units_in_printed,
    }
}

/// Partition of Z/n by reduction type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResiduePartition {
    pub n: u64,
    pub supersingular: BTreeMap<u64, Vec<u64>>,
    pub finite_height: Vec<u64>,
    pub non_units: Vec<u64>,
    pub notes: Vec<ResidueNote>,
}

pub fn residue_partition(n: u64) -> ResiduePartition {
    let mut supersingular: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    let mut finite_height = Vec::new();
    let mut non_units = Vec::new();
    for r in 0..n {
        match neg_one_exponent(r, n) {
            Err(_) => non_units.push(r),
            Ok(Some(m)) => supersingular.entry(m).or_default().push(r),
            Ok(None) => finite_height.push(r),
        }
    }
    let notes = REFERENCE_RESIDUE_LISTS
        .iter()
        .filter(|(nn, _, _)| *nn == n)
        .map(|&(nn, m, printed)| compare_with_printed(nn, m, printed))
        .collect();
    ResiduePartition {
        n,
        supersingular,
        finite_height,
        non_units,
        notes,
    }
}
