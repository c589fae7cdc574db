//! The 2σ-dimensional non-split quadratic space over F_p and its extension of
//! scalars to a working field GF(p^D).
//!
//! The model is the trace form b(x, y) = Tr(λ·x·y^(p^σ)) on GF(p^(2σ)) written in
//! the power basis of the canonical modulus. Vectors over the working field
//! are plain coordinate vectors in that rational basis.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::pow_mod;
use crate::error::{Error, Result};
use crate::ffield::{poly_roots, FieldCtx, FieldElement, FieldOptions};
use crate::linalg::Matrix;

/// Enumeration budget for the construction-time isotropic count.
pub const SELF_CHECK_COUNT_BUDGET: u128 = 1 << 20;

const MAX_LAMBDA_CANDIDATES: usize = 64;

/// Coordinates in the rational basis, entries in the working field.
pub type ExtVector = Vec<FieldElement>;

#[derive(Debug)]
pub struct DiscSpace {
    p: u64,
    sigma: usize,
    gram: Vec<Vec<u64>>,
    model: Arc<FieldCtx>,
    lambda: FieldElement,
    working: Arc<FieldCtx>,
    gram_w: Matrix<FieldElement>,
    theta: FieldElement,
}

#[derive(Debug, Clone, Serialize)]
pub struct GramRecord {
    pub p: u64,
    pub sigma: usize,
    pub gram: Vec<Vec<u64>>,
}

/// Trace of GF(p^d) over F_p.
fn trace(x: &FieldElement) -> u64 {
    let d = x.ctx().degree() as i64;
    let t = (0..d).fold(x.ctx().zero(), |acc, k| acc + x.frobenius(k));
    debug_assert!(t.is_prime_field());
    t.coeffs()[0]
}

fn legendre(a: u64, p: u64) -> i8 {
    match pow_mod(a % p, (p - 1) / 2, p) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

fn trace_gram(model: &Arc<FieldCtx>, lambda: &FieldElement, sigma: usize) -> Vec<Vec<u64>> {
    let n = 2 * sigma;
    let t = model.generator_t();
    let powers: Vec<FieldElement> = (0..n).map(|j| t.pow(j as u128)).collect();
    let twisted: Vec<FieldElement> = powers.iter().map(|x| x.frobenius(sigma as i64)).collect();
    (0..n)
        .map(|j| {
            (0..n)
                .map(|l| trace(&(lambda * &powers[j] * &twisted[l])))
                .collect()
        })
        .collect()
}

/// Number of x in F_p^n with x^T G x = 0, counted exhaustively in parallel.
fn count_isotropic(gram: &[Vec<u64>], p: u64) -> u128 {
    let n = gram.len();
    let total = (p as u128).pow(n as u32);
    let chunk = (p as u128).pow(n.saturating_sub(1) as u32);
    (0..p)
        .into_par_iter()
        .map(|lead| {
            let mut x = vec![0u64; n];
            let mut count = 0u128;
            for k in 0..chunk {
                let mut rest = k;
                for slot in x.iter_mut().take(n - 1) {
                    *slot = (rest % p as u128) as u64;
                    rest /= p as u128;
                }
                x[n - 1] = lead;
                if quad_value(gram, &x, p) == 0 {
                    count += 1;
                }
            }
            count
        })
        .sum::<u128>()
        .min(total)
}

fn quad_value(gram: &[Vec<u64>], x: &[u64], p: u64) -> u64 {
    bil_value(gram, x, x, p)
}

fn bil_value(gram: &[Vec<u64>], x: &[u64], y: &[u64], p: u64) -> u64 {
    let p = p as u128;
    let mut acc = 0u128;
    for (xi, row) in x.iter().zip(gram) {
        if *xi == 0 {
            continue;
        }
        let inner = row
            .iter()
            .zip(y)
            .fold(0u128, |s, (g, yj)| (s + *g as u128 * *yj as u128) % p);
        acc = (acc + *xi as u128 * inner) % p;
    }
    acc as u64
}

/// Closed form p^(2σ-1) - p^σ + p^(σ-1) for the non-split space.
pub fn nonsplit_isotropic_count(p: u64, sigma: usize) -> u128 {
    let p = p as u128;
    let s = sigma as u32;
    p.pow(2 * s - 1) - p.pow(s) + p.pow(s - 1)
}

/// Number of dim-dimensional subspaces of F_p^n.
pub fn gaussian_binomial(n: usize, dim: usize, p: u64) -> u128 {
    if dim > n {
        return 0;
    }
    let p = p as u128;
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..dim {
        num *= p.pow((n - i) as u32) - 1;
        den *= p.pow((i + 1) as u32) - 1;
    }
    num / den
}

/// Build the space for (p, σ) with working degree D (default 2σ).
pub fn build_disc_space(
    p: u64,
    sigma: usize,
    working_degree: Option<usize>,
) -> Result<Arc<DiscSpace>> {
    build_disc_space_with(p, sigma, working_degree, FieldOptions::default())
}

pub fn build_disc_space_with(
    p: u64,
    sigma: usize,
    working_degree: Option<usize>,
    opts: FieldOptions,
) -> Result<Arc<DiscSpace>> {
    if !(1..=10).contains(&sigma) {
        return Err(Error::InvalidSigma(sigma));
    }
    let n = 2 * sigma;
    let d = working_degree.unwrap_or(n);
    if d == 0 || !d.is_multiple_of(n) {
        return Err(Error::WorkingDegree {
            degree: d,
            needed: n,
        });
    }
    let model = FieldCtx::with_options(p, n, opts)?;
    let working = FieldCtx::with_options(p, d, opts)?;

    // λ candidates: nonzero elements of GF(p^σ) in canonical order
    let mut chosen = None;
    let mut tried = 0;
    let mut last_failure = String::new();
    for k in 1..model.size() {
        let lambda = model.from_index(k);
        if lambda.frobenius(sigma as i64) != lambda {
            continue;
        }
        tried += 1;
        if tried > MAX_LAMBDA_CANDIDATES {
            break;
        }
        let gram = trace_gram(&model, &lambda, sigma);
        match self_check(&gram, p, sigma) {
            Ok(()) => {
                chosen = Some((lambda, gram));
                break;
            }
            Err(msg) => last_failure = msg,
        }
    }
    let (lambda, gram) = chosen.ok_or(Error::DiscriminantCheck(last_failure))?;

    let lift = |x: u64| working.from_int(x as i64);
    let gram_w = Matrix::from_rows(
        gram.iter()
            .map(|r| r.iter().map(|&x| lift(x)).collect())
            .collect(),
        n,
        working.zero(),
    );
    let modulus: Vec<FieldElement> = model.modulus().iter().map(|&c| lift(c)).collect();
    let theta = poly_roots(&modulus)?.into_iter().next().ok_or_else(|| {
        Error::InvariantViolation("model modulus does not split in the working field".into())
    })?;

    Ok(Arc::new(DiscSpace {
        p,
        sigma,
        gram,
        model,
        lambda,
        working,
        gram_w,
        theta,
    }))
}

fn self_check(gram: &[Vec<u64>], p: u64, sigma: usize) -> std::result::Result<(), String> {
    let n = gram.len();
    for i in 0..n {
        for j in 0..i {
            if gram[i][j] != gram[j][i] {
                return Err("Gram matrix is not symmetric".into());
            }
        }
    }
    let fp = FieldCtx::with_options(
        p,
        1,
        FieldOptions {
            allow_p3: true,
            ..Default::default()
        },
    )
    .map_err(|e| e.to_string())?;
    let m = Matrix::from_rows(
        gram.iter()
            .map(|r| r.iter().map(|&x| fp.from_int(x as i64)).collect())
            .collect(),
        n,
        fp.zero(),
    );
    let det = m.determinant().coeffs()[0];
    if det == 0 {
        return Err("Gram matrix is degenerate".into());
    }
    let signed = if sigma % 2 == 1 { (p - det) % p } else { det };
    if legendre(signed, p) != -1 {
        return Err(format!("(-1)^sigma * det = {signed} is a square mod {p}"));
    }
    if (p as u128).pow(n as u32) <= SELF_CHECK_COUNT_BUDGET {
        let count = count_isotropic(gram, p);
        let expected = nonsplit_isotropic_count(p, sigma);
        if count != expected {
            return Err(format!("isotropic count {count}, expected {expected}"));
        }
    }
    Ok(())
}

impl DiscSpace {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    /// Dimension 2σ.
    pub fn dim(&self) -> usize {
        2 * self.sigma
    }

    pub fn gram(&self) -> &[Vec<u64>] {
        &self.gram
    }

    pub fn gram_record(&self) -> GramRecord {
        GramRecord {
            p: self.p,
            sigma: self.sigma,
            gram: self.gram.clone(),
        }
    }

    pub fn model_field(&self) -> &Arc<FieldCtx> {
        &self.model
    }

    pub fn lambda(&self) -> &FieldElement {
        &self.lambda
    }

    pub fn working_field(&self) -> &Arc<FieldCtx> {
        &self.working
    }

    pub fn working_degree(&self) -> usize {
        self.working.degree()
    }

    /// Gram matrix lifted to the working field.
    pub fn gram_working(&self) -> &Matrix<FieldElement> {
        &self.gram_w
    }

    /// Canonical root of the model modulus inside the working field.
    pub fn theta_root(&self) -> &FieldElement {
        &self.theta
    }

    pub(crate) fn check_vector(&self, v: &[FieldElement]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: v.len(),
            });
        }
        if v.iter()
            .any(|x| x.ctx().degree() != self.working.degree() || x.ctx().p() != self.p)
        {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }

    /// Vector with F_p coordinates lifted to the working field.
    pub fn rational_vector(&self, coords: &[i64]) -> ExtVector {
        coords.iter().map(|&c| self.working.from_int(c)).collect()
    }

    pub fn zero_vector(&self) -> ExtVector {
        vec![self.working.zero(); self.dim()]
    }

    /// u^T G w over the working field.
    pub fn bilinear(&self, u: &[FieldElement], w: &[FieldElement]) -> Result<FieldElement> {
        self.check_vector(u)?;
        self.check_vector(w)?;
        Ok(self.bilinear_unchecked(u, w))
    }

    pub(crate) fn bilinear_unchecked(
        &self,
        u: &[FieldElement],
        w: &[FieldElement],
    ) -> FieldElement {
        let zero = self.working.zero();
        let mut acc = zero.clone();
        for (ui, row) in u.iter().zip(&self.gram) {
            if ui.is_zero() {
                continue;
            }
            let mut inner = zero.clone();
            for (g, wj) in row.iter().zip(w) {
                if *g != 0 && !wj.is_zero() {
                    inner = inner + wj * &self.working.from_int(*g as i64);
                }
            }
            acc = acc + ui * &inner;
        }
        acc
    }

    /// Coordinatewise Frobenius x -> x^(p^e).
    pub fn frob_semilinear(&self, x: &[FieldElement], e: i64) -> ExtVector {
        frob_vec(x, e)
    }

    /// Exact number of isotropic vectors of the F_p form, zero included.
    pub fn isotropic_vector_count(&self, budget: u128) -> Result<u128> {
        let needed = (self.p as u128).pow(self.dim() as u32);
        if needed > budget {
            return Err(Error::BudgetExceeded {
                what: "isotropic vector enumeration".into(),
                needed,
                budget,
            });
        }
        Ok(count_isotropic(&self.gram, self.p))
    }

    /// Whether some F_p-subspace of dimension `dim` is totally isotropic.
    ///
    /// Subspaces are visited once each through their reduced row-echelon
    /// forms; partial bases that already fail isotropy are pruned.
    pub fn has_totally_isotropic_subspace(&self, dim: usize, budget: u128) -> Result<bool> {
        let n = self.dim();
        if dim == 0 {
            return Ok(true);
        }
        if dim > n {
            return Ok(false);
        }
        let needed = gaussian_binomial(n, dim, self.p);
        if needed > budget {
            return Err(Error::BudgetExceeded {
                what: "subspace enumeration".into(),
                needed,
                budget,
            });
        }
        let pivot_sets = combinations(n, dim);
        Ok(pivot_sets
            .par_iter()
            .any(|pivots| self.isotropic_with_pivots(pivots)))
    }

    fn isotropic_with_pivots(&self, pivots: &[usize]) -> bool {
        let mut rows: Vec<Vec<u64>> = Vec::with_capacity(pivots.len());
        self.extend_rows(pivots, &mut rows)
    }

    fn extend_rows(&self, pivots: &[usize], rows: &mut Vec<Vec<u64>>) -> bool {
        let i = rows.len();
        if i == pivots.len() {
            return true;
        }
        let n = self.dim();
        let p = self.p;
        // free columns: right of the pivot, not another pivot
        let free: Vec<usize> = (pivots[i] + 1..n).filter(|c| !pivots.contains(c)).collect();
        let combos = p.pow(free.len() as u32);
        for k in 0..combos {
            let mut row = vec![0u64; n];
            row[pivots[i]] = 1;
            let mut rest = k;
            for &c in &free {
                row[c] = rest % p;
                rest /= p;
            }
            if quad_value(&self.gram, &row, p) != 0 {
                continue;
            }
            if rows.iter().any(|r| bil_value(&self.gram, r, &row, p) != 0) {
                continue;
            }
            rows.push(row);
            if self.extend_rows(pivots, rows) {
                return true;
            }
            rows.pop();
        }
        false
    }

    /// Matrix (rows = images of the power basis) of multiplication by `z` in the model field.
    pub fn multiplication_matrix(&self, z: &FieldElement) -> Result<Vec<Vec<u64>>> {
        if !z.same_ctx(&self.model.one()) {
            return Err(Error::ContextMismatch);
        }
        let t = self.model.generator_t();
        Ok((0..self.dim())
            .map(|j| (z * &t.pow(j as u128)).coeffs().to_vec())
            .collect())
    }

    /// Whether the F_p matrix `m` (row convention) preserves the Gram matrix.
    pub fn preserves_gram(&self, m: &[Vec<u64>]) -> bool {
        let n = self.dim();
        (0..n)
            .all(|i| (0..n).all(|j| bil_value(&self.gram, &m[i], &m[j], self.p) == self.gram[i][j]))
    }
}

pub(crate) fn frob_vec(x: &[FieldElement], e: i64) -> ExtVector {
    x.iter().map(|c| c.frobenius(e)).collect()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for c in start..n {
            cur.push(c);
            rec(c + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anisotropic_plane_over_f5() {
        let s = build_disc_space(5, 1, Some(2)).unwrap();
        assert_eq!(s.gram().len(), 2);
        assert_eq!(s.isotropic_vector_count(1000).unwrap(), 1);
        assert!(!s.has_totally_isotropic_subspace(1, 1000).unwrap());
    }

    #[test]
    fn sigma_two_counts() {
        let s = build_disc_space(5, 2, Some(4)).unwrap();
        assert_eq!(s.isotropic_vector_count(1000).unwrap(), 105);
        assert_eq!(gaussian_binomial(4, 2, 5), 806);
        assert!(!s.has_totally_isotropic_subspace(2, 1000).unwrap());
        assert!(s.has_totally_isotropic_subspace(1, 1000).unwrap());
    }

    #[test]
    fn gram_is_trace_form_with_unit_lambda() {
        // independent oracle: Tr(T^j * T^(5l)) in GF(25) = F_5[T]/(T^2 + 2), T^2 = 3
        // T^5 = T * (T^2)^2 = 9T = 4T, so y^5 is conjugation T -> -T
        // Tr(1) = 2, Tr(T) = 0, Tr(T^2) = 2*3 = 6 = 1
        // b(1,1) = Tr(1) = 2, b(1,T) = Tr(-T) = 0, b(T,T) = Tr(-T^2) = -1 = 4
        let s = build_disc_space(5, 1, None).unwrap();
        assert!(s.lambda().is_one());
        assert_eq!(s.gram(), &[vec![2, 0], vec![0, 4]]);
    }

    #[test]
    fn p_three_needs_override() {
        assert_eq!(
            build_disc_space(3, 1, Some(2)).unwrap_err(),
            Error::CharacteristicTooSmall(3)
        );
        let opts = FieldOptions {
            allow_p3: true,
            ..Default::default()
        };
        let s = build_disc_space_with(3, 1, Some(2), opts).unwrap();
        assert_eq!(s.isotropic_vector_count(100).unwrap(), 1);
    }

    #[test]
    fn working_degree_must_be_multiple() {
        assert!(matches!(
            build_disc_space(5, 2, Some(6)),
            Err(Error::WorkingDegree { .. })
        ));
        assert!(matches!(
            build_disc_space(5, 11, None),
            Err(Error::InvalidSigma(11))
        ));
    }

    #[test]
    fn budget_is_enforced() {
        let s = build_disc_space(5, 2, None).unwrap();
        assert!(matches!(
            s.isotropic_vector_count(100),
            Err(Error::BudgetExceeded { needed: 625, .. })
        ));
        assert!(matches!(
            s.has_totally_isotropic_subspace(2, 100),
            Err(Error::BudgetExceeded { needed: 806, .. })
        ));
    }

    #[test]
    fn unit_circle_acts_by_isometries() {
        let s = build_disc_space(5, 2, None).unwrap();
        let zeta = s.model_field().root_of_unity(26).unwrap();
        for k in 0..26 {
            let m = s.multiplication_matrix(&zeta.pow(k)).unwrap();
            assert!(s.preserves_gram(&m));
        }
        let other = s.model_field().root_of_unity(3).unwrap();
        assert!(!s.preserves_gram(&s.multiplication_matrix(&other).unwrap()));
    }

    #[test]
    fn bilinear_rationality() {
        let s = build_disc_space(7, 1, Some(4)).unwrap();
        let w = s.working_field();
        let u: Vec<_> = [11u128, 1999].iter().map(|&k| w.from_index(k)).collect();
        let v: Vec<_> = [523u128, 42].iter().map(|&k| w.from_index(k)).collect();
        let lhs = s.bilinear(&u, &v).unwrap().frobenius(-1);
        let rhs = s
            .bilinear(&s.frob_semilinear(&u, -1), &s.frob_semilinear(&v, -1))
            .unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(s.bilinear(&u, &v).unwrap(), s.bilinear(&v, &u).unwrap());
        assert!(s.bilinear(&s.zero_vector(), &v).unwrap().is_zero());
        assert_eq!(
            s.bilinear(&u[..1], &v).unwrap_err(),
            Error::DimensionMismatch {
                expected: 2,
                got: 1
            }
        );
    }
}
