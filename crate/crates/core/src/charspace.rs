//! Characteristic subspaces K of the extended discriminant space, their
//! distinguished bases v_1..v_2σ and moduli coordinates a_1..a_(σ-1).
//!
//! Conventions: f is the coordinatewise Frobenius, v_i = f^(1-i)(v_1) and
//! b(v_1, v_(σ+1)) = 1. Indices in code are 0-based, so `v()[i]` is v_(i+1).

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::discform::{frob_vec, DiscSpace, ExtVector};
use crate::error::{Error, Result};
use crate::ffield::{poly_roots, FieldElement};
use crate::linalg::{intersect, span_rank, vec_mat, Matrix};
use crate::poly::Poly;
use crate::strata::ZeroPattern;

/// Largest orbit enumerated when computing the canonical Ψ representative.
pub const ORBIT_BUDGET: u128 = 1 << 24;

#[derive(Debug, Clone, Serialize)]
pub struct CharReport {
    pub isotropic: bool,
    pub characteristic: bool,
    pub strict: bool,
    /// Generator of l_K in reduced echelon form, when l_K is a line.
    pub line: Option<ExtVector>,
}

impl CharReport {
    pub fn all_hold(&self) -> bool {
        self.isotropic && self.characteristic && self.strict
    }
}

fn check_basis(space: &DiscSpace, basis: &[ExtVector]) -> Result<Matrix<FieldElement>> {
    let sigma = space.sigma();
    if basis.len() != sigma {
        return Err(Error::DimensionMismatch {
            expected: sigma,
            got: basis.len(),
        });
    }
    for v in basis {
        space.check_vector(v)?;
    }
    let m = Matrix::from_rows(basis.to_vec(), space.dim(), space.working_field().zero());
    let rank = m.rank();
    if rank != sigma {
        return Err(Error::RankDeficient {
            rank,
            expected: sigma,
        });
    }
    Ok(m)
}

fn frob_rows(m: &Matrix<FieldElement>, e: i64) -> Matrix<FieldElement> {
    m.map(|x| x.frobenius(e))
}

/// Evaluate isotropy, the characteristic condition, the line l_K and strictness.
pub fn verify_characteristic(space: &DiscSpace, basis: &[ExtVector]) -> Result<CharReport> {
    let k = check_basis(space, basis)?;
    let sigma = space.sigma();
    let n = space.dim();
    let zero = space.working_field().zero();

    let isotropic = basis.iter().enumerate().all(|(i, u)| {
        basis[i..]
            .iter()
            .all(|w| space.bilinear_unchecked(u, w).is_zero())
    });
    let characteristic = k.stack(&frob_rows(&k, 1)).rank() == sigma + 1;

    let mut inter = k.rref().0;
    for i in 1..sigma {
        if inter.nrows() == 0 {
            break;
        }
        inter = intersect(&inter, &frob_rows(&k, i as i64));
    }
    let line = (inter.nrows() == 1).then(|| inter.row(0).to_vec());
    let strict = line.as_ref().is_some_and(|l| {
        let conj: Vec<ExtVector> = (0..n as i64).map(|i| frob_vec(l, -i)).collect();
        span_rank(&conj, n, &zero) == n
    });
    Ok(CharReport {
        isotropic,
        characteristic,
        strict,
        line,
    })
}

#[derive(Debug, Clone)]
pub struct CharSubspace {
    space: Arc<DiscSpace>,
    basis: Matrix<FieldElement>,
    v: Vec<ExtVector>,
    a: Vec<FieldElement>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SubspaceRecord {
    pub p: u64,
    pub sigma: usize,
    #[serde(rename = "D")]
    pub working_degree: usize,
    pub basis: Vec<Vec<Vec<u64>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PsiResult {
    pub a: Vec<FieldElement>,
    pub canonical: Vec<FieldElement>,
}

/// Scale `v` so that b(v, f^-σ v) = 1, with the smallest admissible scalar.
fn normalize_generator(space: &DiscSpace, v: &[FieldElement]) -> Result<ExtVector> {
    let sigma = space.sigma() as i64;
    let c = space.bilinear_unchecked(v, &frob_vec(v, -sigma));
    if c.is_zero() {
        return Err(Error::InvariantViolation(
            "b(v1, v(sigma+1)) vanishes".into(),
        ));
    }
    // t * F^-σ(t) = t^(1 + p^(D-σ)) must equal c^-1
    let d = space.working_degree() as u32;
    let e = 1 + (space.p() as u128).pow(d - sigma as u32);
    let t = c
        .inv()?
        .power_preimages(e)?
        .into_iter()
        .next()
        .ok_or(Error::NotNormalizable)?;
    Ok(v.iter().map(|x| x * &t).collect())
}

impl CharSubspace {
    /// Verify every invariant and build the distinguished basis; fails fast.
    pub fn from_basis(space: &Arc<DiscSpace>, basis: &[ExtVector]) -> Result<Self> {
        let report = verify_characteristic(space, basis)?;
        if !report.isotropic {
            return Err(Error::NotCharacteristic(
                "K is not totally isotropic".into(),
            ));
        }
        if !report.characteristic {
            return Err(Error::NotCharacteristic("dim(K + fK) != sigma + 1".into()));
        }
        let line = report
            .line
            .ok_or_else(|| Error::NotCharacteristic("l_K is not a line".into()))?;
        if !report.strict {
            return Err(Error::NotCharacteristic(
                "conjugates of l_K do not span".into(),
            ));
        }
        let v1 = normalize_generator(space, &line)?;
        Self::from_generator(space, &v1)
    }

    /// Build from a normalized generator v_1 of l_K (invariants re-checked).
    fn from_generator(space: &Arc<DiscSpace>, v1: &[FieldElement]) -> Result<Self> {
        let sigma = space.sigma();
        let n = space.dim();
        let v: Vec<ExtVector> = (0..n as i64).map(|i| frob_vec(v1, -i)).collect();
        let a = (1..sigma)
            .map(|i| space.bilinear_unchecked(&v[0], &v[sigma + i]))
            .collect();
        let basis = Matrix::from_rows(v[..sigma].to_vec(), n, space.working_field().zero())
            .rref()
            .0;
        let k = Self {
            space: Arc::clone(space),
            basis,
            v,
            a,
        };
        k.gram_in_vbasis()?;
        Ok(k)
    }

    pub fn space(&self) -> &Arc<DiscSpace> {
        &self.space
    }

    pub fn sigma(&self) -> usize {
        self.space.sigma()
    }

    /// Reduced echelon basis of K.
    pub fn basis(&self) -> &Matrix<FieldElement> {
        &self.basis
    }

    /// Distinguished basis v_1..v_2σ (0-based).
    pub fn distinguished_basis(&self) -> &[ExtVector] {
        &self.v
    }

    /// Moduli coordinates a_1..a_(σ-1).
    pub fn a(&self) -> &[FieldElement] {
        &self.a
    }

    pub fn record(&self) -> SubspaceRecord {
        SubspaceRecord {
            p: self.space.p(),
            sigma: self.sigma(),
            working_degree: self.space.working_degree(),
            basis: self
                .basis
                .rows()
                .iter()
                .map(|r| r.iter().map(|x| x.coeffs().to_vec()).collect())
                .collect(),
        }
    }

    pub fn report(&self) -> Result<CharReport> {
        verify_characteristic(&self.space, self.basis.rows())
    }

    /// Gram matrix in the distinguished basis; checks the block shape
    /// [[0, A], [A^T, 0]] with A_(j,l) = F^-j(a_(l-j)) above a unit diagonal.
    pub fn gram_in_vbasis(&self) -> Result<Matrix<FieldElement>> {
        let sigma = self.sigma();
        let n = 2 * sigma;
        let zero = self.space.working_field().zero();
        let rows: Vec<ExtVector> = (0..n)
            .map(|j| {
                (0..n)
                    .map(|l| self.space.bilinear_unchecked(&self.v[j], &self.v[l]))
                    .collect()
            })
            .collect();
        let h = Matrix::from_rows(rows, n, zero.clone());
        let one = self.space.working_field().one();
        for j in 0..n {
            for l in 0..n {
                let same_block = (j < sigma) == (l < sigma);
                let expected = if same_block {
                    zero.clone()
                } else {
                    let (r, c) = if j < sigma {
                        (j, l - sigma)
                    } else {
                        (l, j - sigma)
                    };
                    match c.cmp(&r) {
                        std::cmp::Ordering::Less => zero.clone(),
                        std::cmp::Ordering::Equal => one.clone(),
                        std::cmp::Ordering::Greater => self.a[c - r - 1].frobenius(-(r as i64)),
                    }
                };
                if *h.get(j, l) != expected {
                    return Err(Error::ShapeViolation(format!(
                        "entry ({}, {}) is {}, expected {}",
                        j + 1,
                        l + 1,
                        h.get(j, l),
                        expected
                    )));
                }
            }
        }
        Ok(h)
    }

    /// a-vector after replacing v_1 by ξ·v_1, recomputed from the vectors.
    pub fn rescaled_a(&self, xi: &FieldElement) -> (FieldElement, Vec<FieldElement>) {
        let sigma = self.sigma();
        let w: ExtVector = self.v[0].iter().map(|x| x * xi).collect();
        let pair = |k: usize| {
            self.space
                .bilinear_unchecked(&w, &frob_vec(&w, -(k as i64)))
        };
        (pair(sigma), (1..sigma).map(|i| pair(sigma + i)).collect())
    }

    /// a together with its canonical representative modulo μ_(p^σ+1).
    pub fn psi(&self) -> Result<PsiResult> {
        Ok(PsiResult {
            a: self.a.clone(),
            canonical: canonical_orbit_rep(&self.space, &self.a)?,
        })
    }

    /// Coefficients b_1..b_2σ of f^-1(v_2σ) in the distinguished basis.
    pub fn wrap_coefficients(&self) -> Result<Vec<FieldElement>> {
        let n = 2 * self.sigma();
        let zero = self.space.working_field().zero();
        let vm = Matrix::from_rows(self.v.clone(), n, zero.clone());
        let inv = vm
            .inverse()
            .ok_or_else(|| Error::InvariantViolation("distinguished basis is singular".into()))?;
        let tail = frob_vec(&self.v[n - 1], -1);
        Ok(vec_mat(&tail, &inv, &zero))
    }
}

/// Factor ξ·F^-(σ+i)(ξ) picked up by a_i when v_1 is scaled by ξ.
pub fn orbit_factor(space: &DiscSpace, xi: &FieldElement, i: usize) -> FieldElement {
    xi * &xi.frobenius(-((space.sigma() + i) as i64))
}

/// Lexicographically smallest point of the μ_(p^σ+1)-orbit of `a`.
pub fn canonical_orbit_rep(space: &DiscSpace, a: &[FieldElement]) -> Result<Vec<FieldElement>> {
    if a.iter().all(|x| x.is_zero()) {
        return Ok(a.to_vec());
    }
    let n = (space.p() as u128).pow(space.sigma() as u32) + 1;
    if n > ORBIT_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "Psi orbit enumeration".into(),
            needed: n,
            budget: ORBIT_BUDGET,
        });
    }
    let zeta = space.working_field().root_of_unity(n)?;
    let mut xi = space.working_field().one();
    let mut best = a.to_vec();
    for _ in 0..n {
        let image: Vec<FieldElement> = a
            .iter()
            .enumerate()
            .map(|(i, ai)| &orbit_factor(space, &xi, i + 1) * ai)
            .collect();
        if image < best {
            best = image;
        }
        xi = &xi * &zeta;
    }
    Ok(best)
}

pub fn zero_pattern(a: &[FieldElement]) -> Result<ZeroPattern> {
    ZeroPattern::new(a.len() + 1, a.iter().map(|x| !x.is_zero()).collect())
}

/// Eigenvector of multiplication by the model generator, for the canonical root.
fn eigen_generator(space: &DiscSpace) -> Result<ExtVector> {
    let n = space.dim();
    let w = space.working_field();
    let t = space.model_field().generator_t();
    let mult = space.multiplication_matrix(&t)?;
    let r = space.theta_root();
    // rows of (M^T - r I); its right kernel holds row eigenvectors v M = r v
    let rows: Vec<ExtVector> = (0..n)
        .map(|j| {
            (0..n)
                .map(|l| {
                    let entry = w.from_int(mult[l][j] as i64);
                    if l == j {
                        &entry - r
                    } else {
                        entry
                    }
                })
                .collect()
        })
        .collect();
    let kernel = Matrix::from_rows(rows, n, w.zero()).right_kernel();
    if kernel.len() != 1 {
        return Err(Error::InvariantViolation(format!(
            "eigenspace has dimension {}",
            kernel.len()
        )));
    }
    Ok(kernel.into_iter().next().expect("one kernel vector"))
}

/// The subspace with a = 0, spanned by the first σ Frobenius conjugates of an eigenline.
pub fn special_subspace(space: &Arc<DiscSpace>) -> Result<CharSubspace> {
    let e0 = eigen_generator(space)?;
    let basis: Vec<ExtVector> = (0..space.sigma() as i64)
        .map(|i| frob_vec(&e0, -i))
        .collect();
    let k = CharSubspace::from_basis(space, &basis)?;
    if k.a().iter().any(|x| !x.is_zero()) {
        return Err(Error::InvariantViolation(
            "special subspace has a nonzero coordinate".into(),
        ));
    }
    Ok(k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub seed: u64,
    /// Maximum number of candidate generators examined.
    pub budget: u128,
    pub max_sigma: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            budget: 100_000,
            max_sigma: 2,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub found: Option<CharSubspace>,
    pub scanned: u128,
}

struct EigenFrame {
    space: Arc<DiscSpace>,
    e: Vec<ExtVector>,
    free: Vec<usize>,
    nodes: Vec<FieldElement>,
}

impl EigenFrame {
    fn new(space: &Arc<DiscSpace>) -> Result<Self> {
        let e0 = eigen_generator(space)?;
        let n = space.dim();
        let sigma = space.sigma();
        let e = (0..n as i64).map(|j| frob_vec(&e0, j)).collect();
        let free = if sigma >= 2 {
            (1..n - 1).filter(|&j| j != sigma).collect()
        } else {
            Vec::new()
        };
        let w = space.working_field();
        let nodes = (0..space.p() as u128 + 2)
            .map(|k| w.from_index(k))
            .collect();
        Ok(Self {
            space: Arc::clone(space),
            e,
            free,
            nodes,
        })
    }

    fn combine(&self, xs: &[FieldElement]) -> ExtVector {
        let mut v = self.space.zero_vector();
        for (x, ej) in xs.iter().zip(&self.e) {
            if x.is_zero() {
                continue;
            }
            for (slot, c) in v.iter_mut().zip(ej) {
                *slot = &*slot + &(x * c);
            }
        }
        v
    }

    /// Generator with x_0 = 1, x_(2σ-1) = y^p and x_σ solving b(v, v) = 0.
    fn generator(&self, free: &[FieldElement], y: &FieldElement) -> Option<ExtVector> {
        let sigma = self.space.sigma();
        let n = 2 * sigma;
        let w = self.space.working_field();
        let mut xs = vec![w.zero(); n];
        xs[0] = w.one();
        if sigma == 1 {
            return Some(self.combine(&xs));
        }
        for (&j, x) in self.free.iter().zip(free) {
            xs[j] = x.clone();
        }
        xs[n - 1] = y.frobenius(1);
        let base = self.combine(&xs);
        let q0 = self.space.bilinear_unchecked(&base, &base);
        let with_unit: ExtVector = base
            .iter()
            .zip(&self.e[sigma])
            .map(|(b, e)| b + e)
            .collect();
        let slope = &self.space.bilinear_unchecked(&with_unit, &with_unit) - &q0;
        let x_sigma = -&(&q0 * &slope.inv().ok()?);
        Some(
            base.iter()
                .zip(&self.e[sigma])
                .map(|(b, e)| b + &(&x_sigma * e))
                .collect(),
        )
    }

    fn free_coords(&self, mut index: u128) -> Vec<FieldElement> {
        let w = self.space.working_field();
        let q = w.size();
        self.free
            .iter()
            .map(|_| {
                let x = w.from_index(index % q);
                index /= q;
                x
            })
            .collect()
    }

    fn candidate_count(&self) -> u128 {
        let q = self.space.working_field().size();
        q.checked_pow(self.free.len() as u32).unwrap_or(u128::MAX)
    }

    /// Generators for one choice of free coordinates: roots of b(v, f^-1 v) in y.
    fn generators_for(&self, free: &[FieldElement]) -> Vec<ExtVector> {
        if self.space.sigma() == 1 {
            return self
                .generator(free, &self.space.working_field().zero())
                .into_iter()
                .collect();
        }
        let mut ys = Vec::with_capacity(self.nodes.len());
        for y in &self.nodes {
            let Some(v) = self.generator(free, y) else {
                return Vec::new();
            };
            ys.push(self.space.bilinear_unchecked(&v, &frob_vec(&v, -1)));
        }
        let zero = self.space.working_field().zero();
        let poly = Poly::interpolate(&self.nodes, &ys, zero);
        if poly.is_zero() {
            return Vec::new();
        }
        poly_roots(poly.coeffs())
            .unwrap_or_default()
            .iter()
            .filter_map(|y| self.generator(free, y))
            .collect()
    }

    fn try_candidate(&self, index: u128, pattern: &ZeroPattern) -> Result<Option<CharSubspace>> {
        let sigma = self.space.sigma() as i64;
        for v in self.generators_for(&self.free_coords(index)) {
            let basis: Vec<ExtVector> = (0..sigma).map(|i| frob_vec(&v, -i)).collect();
            match CharSubspace::from_basis(&self.space, &basis) {
                Ok(k) => {
                    if zero_pattern(k.a())? == *pattern {
                        return Ok(Some(k));
                    }
                }
                Err(
                    Error::NotCharacteristic(_)
                    | Error::NotNormalizable
                    | Error::RankDeficient { .. },
                ) => {}
                Err(e) => return Err(e),
            }
        }
        Ok(None)
    }
}

const SEARCH_BATCH: u128 = 64;

/// Scan generators v = Σ x_j f^j(e_0) for a subspace with the given zero pattern.
///
/// Candidate 0 (all free coordinates zero) is tried first, then a contiguous
/// range starting at a seed-derived offset. Batches run in parallel and the
/// first hit in scan order wins, so the result depends only on the inputs.
pub fn search_subspace(
    space: &Arc<DiscSpace>,
    pattern: &ZeroPattern,
    opts: SearchOptions,
) -> Result<SearchOutcome> {
    let sigma = space.sigma();
    if pattern.sigma() != sigma {
        return Err(Error::DimensionMismatch {
            expected: sigma,
            got: pattern.sigma(),
        });
    }
    if sigma > opts.max_sigma {
        return Err(Error::BudgetExceeded {
            what: "search sigma bound".into(),
            needed: sigma as u128,
            budget: opts.max_sigma as u128,
        });
    }
    // over GF(p^2σ) every characteristic subspace has a = 0
    if !pattern.is_all_zero() && space.working_degree() == space.dim() {
        return Ok(SearchOutcome {
            found: None,
            scanned: 0,
        });
    }
    let frame = EigenFrame::new(space)?;
    let total = frame.candidate_count();
    let offset = ChaCha8Rng::seed_from_u64(opts.seed).gen_range(0..total);
    let limit = total.min(opts.budget);
    let index_at = |j: u128| if j == 0 { 0 } else { (offset + j - 1) % total };

    let mut start = 0u128;
    while start < limit {
        let end = (start + SEARCH_BATCH).min(limit);
        let results: Vec<Result<Option<CharSubspace>>> = (start..end)
            .into_par_iter()
            .map(|j| frame.try_candidate(index_at(j), pattern))
            .collect();
        for (j, r) in (start..end).zip(results) {
            if let Some(k) = r? {
                return Ok(SearchOutcome {
                    found: Some(k),
                    scanned: j + 1,
                });
            }
        }
        start = end;
    }
    if limit < total {
        return Err(Error::BudgetExceeded {
            what: "subspace search candidates".into(),
            needed: total,
            budget: opts.budget,
        });
    }
    Ok(SearchOutcome {
        found: None,
        scanned: limit,
    })
}
