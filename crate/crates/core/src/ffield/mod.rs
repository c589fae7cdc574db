//! Exact arithmetic in GF(p^d).
//!
//! A [`FieldCtx`] fixes the characteristic, the degree and the canonical
//! modulus; [`FieldElement`]s hold an `Arc` to their context plus `d`
//! coefficients in `[0, p)`, low degree first. Contexts are deterministic:
//! `field_create(p, d)` always picks the same modulus, so two contexts with
//! equal `(p, d)` are interchangeable.

mod dlog;
mod prime_poly;
mod roots;

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::scalar::FieldScalar;

pub use roots::poly_roots;

/// Largest supported field size, as a power of two.
pub const DEFAULT_MAX_FIELD_BITS: u32 = 62;
/// Fields with at most this many elements are searched exhaustively for roots.
pub const EXHAUSTIVE_ROOT_THRESHOLD: u128 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldOptions {
    /// Accept p = 3 (never p = 2).
    pub allow_p3: bool,
    pub max_field_bits: u32,
}

impl Default for FieldOptions {
    fn default() -> Self {
        Self {
            allow_p3: false,
            max_field_bits: DEFAULT_MAX_FIELD_BITS,
        }
    }
}

pub struct FieldCtx {
    p: u64,
    d: usize,
    modulus: Vec<u64>,
    // reduction[k] = T^(d+k) mod modulus
    reduction: Vec<Vec<u64>>,
    // frob[k][j] = (T^j)^(p^k) mod modulus
    frob: Vec<Vec<Vec<u64>>>,
    order: u128,
    factors: OnceLock<Vec<(u128, u32)>>,
    generator: OnceLock<Vec<u64>>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) mod {:?}", self.p, self.d, self.modulus)
    }
}

/// Serializable description `{p, d, modulus}` of a context.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldRecord {
    pub p: u64,
    pub d: usize,
    pub modulus: Vec<u64>,
}

pub fn field_create(p: u64, d: usize) -> Result<Arc<FieldCtx>> {
    FieldCtx::with_options(p, d, FieldOptions::default())
}

impl FieldCtx {
    pub fn with_options(p: u64, d: usize, opts: FieldOptions) -> Result<Arc<FieldCtx>> {
        if p > u32::MAX as u64 {
            return Err(Error::PrimeTooLarge(p));
        }
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p == 2 || (p == 3 && !opts.allow_p3) {
            return Err(Error::CharacteristicTooSmall(p));
        }
        if d == 0 {
            return Err(Error::InvalidDegree(d));
        }
        let size = (p as u128)
            .checked_pow(d as u32)
            .filter(|s| *s <= 1u128 << opts.max_field_bits.min(126))
            .ok_or(Error::FieldTooLarge {
                p,
                d,
                bits: opts.max_field_bits,
            })?;
        let modulus = prime_poly::canonical_irreducible(p, d);
        Ok(Arc::new(Self::from_modulus(p, d, modulus, size - 1)))
    }

    fn from_modulus(p: u64, d: usize, modulus: Vec<u64>, order: u128) -> Self {
        let mut reduction = Vec::with_capacity(d.saturating_sub(1));
        // T^d = -(m_0 + ... + m_{d-1} T^{d-1})
        let mut cur: Vec<u64> = modulus[..d].iter().map(|&c| (p - c) % p).collect();
        for _ in 0..d.saturating_sub(1) {
            reduction.push(cur.clone());
            cur = prime_poly::mul_by_t(&cur, &modulus, p);
        }
        let mut ctx = FieldCtx {
            p,
            d,
            modulus,
            reduction,
            frob: Vec::new(),
            order,
            factors: OnceLock::new(),
            generator: OnceLock::new(),
        };
        ctx.frob = ctx.frobenius_tables();
        ctx
    }

    fn frobenius_tables(&self) -> Vec<Vec<Vec<u64>>> {
        let d = self.d;
        let mut t = vec![0u64; d];
        if d == 1 {
            t[0] = 0;
        } else {
            t[1] = 1;
        }
        let tp = self.pow_raw(&t, self.p as u128);
        // images of the power basis under one Frobenius
        let mut first = Vec::with_capacity(d);
        let mut acc = self.one_raw();
        for _ in 0..d {
            first.push(acc.clone());
            acc = self.mul_raw(&acc, &tp);
        }
        let mut tables = Vec::with_capacity(d);
        tables.push((0..d).map(|j| self.basis_raw(j)).collect::<Vec<_>>());
        for k in 1..d {
            let prev: &Vec<Vec<u64>> = &tables[k - 1];
            let next = prev
                .iter()
                .map(|img| apply_linear(&first, img, self.p))
                .collect();
            tables.push(next);
        }
        tables
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Number of elements, p^d.
    pub fn size(&self) -> u128 {
        self.order + 1
    }

    /// Order of the multiplicative group, p^d - 1.
    pub fn group_order(&self) -> u128 {
        self.order
    }

    pub fn record(&self) -> FieldRecord {
        FieldRecord {
            p: self.p,
            d: self.d,
            modulus: self.modulus.clone(),
        }
    }

    pub(crate) fn group_order_factors(&self) -> &[(u128, u32)] {
        self.factors.get_or_init(|| {
            arith::factorize(self.order as u64)
                .into_iter()
                .map(|(q, e)| (q as u128, e))
                .collect()
        })
    }

    fn same_as(&self, other: &FieldCtx) -> bool {
        std::ptr::eq(self, other) || (self.p == other.p && self.d == other.d)
    }

    fn one_raw(&self) -> Vec<u64> {
        self.basis_raw(0)
    }

    fn basis_raw(&self, j: usize) -> Vec<u64> {
        let mut v = vec![0u64; self.d];
        v[j] = 1;
        v
    }

    fn mul_raw(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let d = self.d;
        let p = self.p as u128;
        if d == 1 {
            return vec![((a[0] as u128 * b[0] as u128) % p) as u64];
        }
        let mut wide = vec![0u128; 2 * d - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                wide[i + j] += ai as u128 * bj as u128;
            }
        }
        let high: Vec<u128> = wide[d..].iter().map(|c| c % p).collect();
        let mut low: Vec<u128> = wide[..d].iter().map(|c| c % p).collect();
        for (k, hk) in high.iter().enumerate() {
            if *hk == 0 {
                continue;
            }
            for (i, r) in self.reduction[k].iter().enumerate() {
                low[i] += hk * *r as u128;
            }
        }
        low.into_iter().map(|c| (c % p) as u64).collect()
    }

    fn pow_raw(&self, a: &[u64], mut e: u128) -> Vec<u64> {
        let mut acc = self.one_raw();
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul_raw(&base, &base);
            }
        }
        acc
    }

    fn wrap(self: &Arc<Self>, coeffs: Vec<u64>) -> FieldElement {
        FieldElement {
            ctx: Arc::clone(self),
            coeffs,
        }
    }

    pub fn zero(self: &Arc<Self>) -> FieldElement {
        self.wrap(vec![0; self.d])
    }

    pub fn one(self: &Arc<Self>) -> FieldElement {
        self.wrap(self.one_raw())
    }

    /// Image of an integer under Z -> F_p -> GF(p^d).
    pub fn from_int(self: &Arc<Self>, n: i64) -> FieldElement {
        let mut v = vec![0u64; self.d];
        v[0] = n.rem_euclid(self.p as i64) as u64;
        self.wrap(v)
    }

    /// The class of T, i.e. the root of the modulus generating the power basis.
    pub fn generator_t(self: &Arc<Self>) -> FieldElement {
        if self.d == 1 {
            // modulus is T itself
            return self.zero();
        }
        self.wrap(self.basis_raw(1))
    }

    /// Element from coefficients (low degree first, reduced mod p, zero-padded).
    pub fn element(self: &Arc<Self>, coeffs: &[i64]) -> Result<FieldElement> {
        if coeffs.len() > self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                got: coeffs.len(),
            });
        }
        let mut v = vec![0u64; self.d];
        for (slot, c) in v.iter_mut().zip(coeffs) {
            *slot = c.rem_euclid(self.p as i64) as u64;
        }
        Ok(self.wrap(v))
    }

    /// Element whose coefficients are the base-p digits of `index` (low degree least significant).
    pub fn from_index(self: &Arc<Self>, mut index: u128) -> FieldElement {
        let p = self.p as u128;
        let mut v = vec![0u64; self.d];
        for slot in v.iter_mut() {
            *slot = (index % p) as u64;
            index /= p;
        }
        self.wrap(v)
    }

    /// All elements in canonical order (intended for small fields).
    pub fn elements(self: &Arc<Self>) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.size()).map(move |k| self.from_index(k))
    }

    /// Smallest primitive element in canonical order.
    pub fn primitive_element(self: &Arc<Self>) -> FieldElement {
        let raw = self.generator.get_or_init(|| {
            (1..self.size())
                .map(|k| self.from_index(k))
                .find(|x| x.mult_order_unchecked() == self.order)
                .expect("finite fields have cyclic unit groups")
                .coeffs
        });
        self.wrap(raw.clone())
    }

    /// Deterministic element of exact multiplicative order `n`.
    pub fn root_of_unity(self: &Arc<Self>, n: u128) -> Result<FieldElement> {
        if n == 0 || !self.order.is_multiple_of(n) {
            return Err(Error::NotDividing {
                n,
                order: self.order,
            });
        }
        Ok(self.primitive_element().pow(self.order / n))
    }
}

fn apply_linear(images: &[Vec<u64>], coeffs: &[u64], p: u64) -> Vec<u64> {
    let d = images.len();
    let mut out = vec![0u128; d];
    for (c, img) in coeffs.iter().zip(images) {
        if *c == 0 {
            continue;
        }
        for (o, v) in out.iter_mut().zip(img) {
            *o += *c as u128 * *v as u128;
        }
    }
    out.into_iter().map(|x| (x % p as u128) as u64).collect()
}

#[derive(Clone)]
pub struct FieldElement {
    ctx: Arc<FieldCtx>,
    coeffs: Vec<u64>,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coeffs)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            terms.push(match (i, c) {
                (0, _) => format!("{c}"),
                (1, 1) => "t".to_string(),
                (1, _) => format!("{c}*t"),
                (_, 1) => format!("t^{i}"),
                _ => format!("{c}*t^{i}"),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.same_as(&other.ctx) && self.coeffs == other.coeffs
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: compare base-p digit strings from the top coefficient down.
impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs.iter().rev().cmp(other.coeffs.iter().rev())
    }
}

impl FieldElement {
    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn canonical_index(&self) -> u128 {
        let p = self.ctx.p as u128;
        self.coeffs
            .iter()
            .rev()
            .fold(0u128, |acc, &c| acc * p + c as u128)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// True when the element lies in the prime field.
    pub fn is_prime_field(&self) -> bool {
        self.coeffs[1..].iter().all(|&c| c == 0)
    }

    pub fn same_ctx(&self, other: &FieldElement) -> bool {
        self.ctx.same_as(&other.ctx)
    }

    fn check(&self, other: &FieldElement) -> Result<()> {
        if self.same_ctx(other) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    fn assert_ctx(&self, other: &FieldElement) {
        assert!(
            self.same_ctx(other),
            "field context mismatch: {:?} vs {:?}",
            self.ctx,
            other.ctx
        );
    }

    fn add_raw(&self, other: &FieldElement) -> FieldElement {
        let p = self.ctx.p;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| {
                let s = a + b;
                if s >= p {
                    s - p
                } else {
                    s
                }
            })
            .collect();
        self.ctx.wrap(coeffs)
    }

    fn sub_raw(&self, other: &FieldElement) -> FieldElement {
        let p = self.ctx.p;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| if a >= b { a - b } else { a + p - b })
            .collect();
        self.ctx.wrap(coeffs)
    }

    pub fn checked_add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(self.add_raw(other))
    }

    pub fn checked_sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(self.sub_raw(other))
    }

    pub fn checked_mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(self.ctx.wrap(self.ctx.mul_raw(&self.coeffs, &other.coeffs)))
    }

    pub fn inv(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(self.ctx.order - 1))
    }

    pub fn pow(&self, e: u128) -> FieldElement {
        self.ctx.wrap(self.ctx.pow_raw(&self.coeffs, e))
    }

    /// Power with a signed exponent; negative exponents go through `inv`.
    pub fn pow_signed(&self, e: i128) -> Result<FieldElement> {
        if e >= 0 {
            Ok(self.pow(e as u128))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs()))
        }
    }

    /// x^(p^e); negative e gives the inverse Frobenius.
    pub fn frobenius(&self, e: i64) -> FieldElement {
        let k = e.rem_euclid(self.ctx.d as i64) as usize;
        if k == 0 {
            return self.clone();
        }
        let coeffs = apply_linear(&self.ctx.frob[k], &self.coeffs, self.ctx.p);
        self.ctx.wrap(coeffs)
    }

    fn mult_order_unchecked(&self) -> u128 {
        let mut ord = self.ctx.order;
        for &(q, _) in self.ctx.group_order_factors() {
            while ord.is_multiple_of(q) && self.pow(ord / q).is_one() {
                ord /= q;
            }
        }
        ord
    }

    /// Smallest n >= 1 with x^n = 1.
    pub fn mult_order(&self) -> Result<u128> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.mult_order_unchecked())
    }

    /// Discrete logarithm to the base of the context's primitive element.
    pub fn discrete_log(&self) -> Result<u128> {
        dlog::discrete_log(self)
    }

    /// All t with t^e = self, sorted canonically.
    pub fn power_preimages(&self, e: u128) -> Result<Vec<FieldElement>> {
        dlog::power_preimages(self, e)
    }
}

impl FieldScalar for FieldElement {
    fn zero_like(&self) -> Self {
        self.ctx.zero()
    }
    fn one_like(&self) -> Self {
        self.ctx.one()
    }
    fn is_zero(&self) -> bool {
        FieldElement::is_zero(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Option<Self> {
        self.inv().ok()
    }
    fn is_one(&self) -> bool {
        FieldElement::is_one(self)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $raw:expr) => {
        impl $trait<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.assert_ctx(rhs);
                $raw(self, rhs)
            }
        }
        impl $trait<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, |a: &FieldElement, b: &FieldElement| a.add_raw(b));
binop!(Sub, sub, |a: &FieldElement, b: &FieldElement| a.sub_raw(b));
binop!(Mul, mul, |a: &FieldElement, b: &FieldElement| a
    .ctx
    .wrap(a.ctx.mul_raw(&a.coeffs, &b.coeffs)));

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.ctx.zero().sub_raw(self)
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

impl Serialize for FieldElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}
