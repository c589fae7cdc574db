//! Brute-force index: enumerate the isometries that are diagonal in the
//! distinguished basis, g(v_i) = F^(1-i)(ξ)·v_i for ξ in μ_(p^σ+1), and keep
//! those that are orthogonal, defined over F_p and preserve K.

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{multiplicative_order, pow_mod};
use crate::charspace::CharSubspace;
use crate::error::{Error, Result};
use crate::ffield::FieldElement;
use crate::linalg::Matrix;

/// Default cap on |μ_(p^σ+1)|.
pub const DEFAULT_ORACLE_BUDGET: u128 = 1 << 20;

#[derive(Debug, Clone)]
pub struct EigenIsometry {
    pub xi: FieldElement,
    /// Action on row vectors in the rational basis: x -> x·M.
    pub matrix: Matrix<FieldElement>,
    pub orthogonal: bool,
    pub rational: bool,
    pub preserves_k: bool,
}

impl EigenIsometry {
    pub fn kept(&self) -> bool {
        self.orthogonal && self.rational && self.preserves_k
    }

    pub fn apply(&self, x: &[FieldElement]) -> Vec<FieldElement> {
        crate::linalg::vec_mat(x, &self.matrix, self.matrix.zero_elem())
    }
}

/// Change of basis between the rational basis and v_1..v_2σ, computed once per K.
pub struct IsometryFrame<'a> {
    k: &'a CharSubspace,
    v: Matrix<FieldElement>,
    v_inv: Matrix<FieldElement>,
}

impl<'a> IsometryFrame<'a> {
    pub fn new(k: &'a CharSubspace) -> Result<Self> {
        let n = 2 * k.sigma();
        let zero = k.space().working_field().zero();
        let v = Matrix::from_rows(k.distinguished_basis().to_vec(), n, zero);
        let v_inv = v
            .inverse()
            .ok_or_else(|| Error::InvariantViolation("distinguished basis is singular".into()))?;
        Ok(Self { k, v, v_inv })
    }

    /// M = V^-1 · diag(F^(1-i)(ξ)) · V.
    pub fn build(&self, xi: &FieldElement) -> Result<EigenIsometry> {
        if xi.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let space = self.k.space();
        if xi.ctx().degree() != space.working_degree() || xi.ctx().p() != space.p() {
            return Err(Error::ContextMismatch);
        }
        let n = self.v.nrows();
        let scaled: Vec<Vec<FieldElement>> = (0..n)
            .map(|i| {
                let d = xi.frobenius(-(i as i64));
                self.v.row(i).iter().map(|x| x * &d).collect()
            })
            .collect();
        let dv = Matrix::from_rows(scaled, n, space.working_field().zero());
        let m = self.v_inv.mul(&dv);

        let g = space.gram_working();
        let orthogonal = m.mul(g).mul(&m.transpose()) == *g;
        let rational = m.rows().iter().flatten().all(|x| x.is_prime_field());
        let basis = self.k.basis();
        let preserves_k = basis.stack(&basis.mul(&m)).rank() == self.k.sigma();
        Ok(EigenIsometry {
            xi: xi.clone(),
            matrix: m,
            orthogonal,
            rational,
            preserves_k,
        })
    }
}

pub fn build_eigen_isometry(k: &CharSubspace, xi: &FieldElement) -> Result<EigenIsometry> {
    IsometryFrame::new(k)?.build(xi)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EigenConstraint {
    /// Multiplicative order of ξ.
    pub n: u128,
    /// Smallest m >= 0 with F^-m(ξ) = ξ^-1.
    pub m: usize,
}

/// Order of ξ and the minimal m with F^-m(ξ) = ξ^-1, cross-checking
/// ord_n(p) = 2m and n | p^m + 1 when m >= 1.
pub fn eigenvalue_constraints(xi: &FieldElement, sigma: usize) -> Result<EigenConstraint> {
    let n = xi.mult_order()?;
    let inv = xi.inv()?;
    let bound = 2 * sigma;
    let m = (0..=bound)
        .find(|&m| xi.frobenius(-(m as i64)) == inv)
        .ok_or(Error::EigenvalueOutOfRange { bound })?;
    if m >= 1 {
        let p = xi.ctx().p();
        let n64 = u64::try_from(n)
            .map_err(|_| Error::InvariantViolation("eigenvalue order exceeds u64".into()))?;
        if multiplicative_order(p % n64, n64) != Some(2 * m as u64) {
            return Err(Error::InvariantViolation(format!(
                "order of {p} modulo {n} is not {}",
                2 * m
            )));
        }
        if !(pow_mod(p % n64, m as u64, n64) + 1).is_multiple_of(n64) {
            return Err(Error::InvariantViolation(format!(
                "{n} does not divide {p}^{m} + 1"
            )));
        }
    }
    Ok(EigenConstraint { n, m })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub p: u64,
    pub sigma: usize,
    #[serde(rename = "D")]
    pub working_degree: usize,
    /// p^σ + 1, the size of the enumerated group.
    pub group_size: u128,
    pub index: u128,
    /// Exponents k with ζ^k kept, ζ the canonical generator of μ_(p^σ+1).
    pub kept_exponents: Vec<u128>,
    /// Distinct multiplicative orders among kept eigenvalues.
    pub kept_orders: Vec<u128>,
    pub contains_minus_identity: bool,
}

/// Enumerate μ_(p^σ+1), keep eigenvalues whose isometry passes every flag,
/// and check that they form a subgroup containing -1.
pub fn enumerate_index(k: &CharSubspace, budget: u128) -> Result<OracleReport> {
    let space = k.space();
    let n = (space.p() as u128)
        .checked_pow(space.sigma() as u32)
        .map(|q| q + 1)
        .unwrap_or(u128::MAX);
    if n > budget {
        return Err(Error::BudgetExceeded {
            what: "oracle enumeration of mu(p^sigma+1)".into(),
            needed: n,
            budget,
        });
    }
    let zeta = space.working_field().root_of_unity(n)?;
    let frame = IsometryFrame::new(k)?;
    let flags: Vec<Result<bool>> = (0..n)
        .into_par_iter()
        .map(|e| frame.build(&zeta.pow(e)).map(|g| g.kept()))
        .collect();
    let mut kept = Vec::new();
    for (e, f) in (0..n).zip(flags) {
        if f? {
            kept.push(e);
        }
    }

    if kept.first() != Some(&0) {
        return Err(Error::InvariantViolation("identity was rejected".into()));
    }
    let contains_minus_identity = kept.binary_search(&(n / 2)).is_ok();
    if !contains_minus_identity {
        return Err(Error::InvariantViolation("-id was rejected".into()));
    }
    let step = kept.get(1).copied().unwrap_or(n);
    let expected: Vec<u128> = (0..n).step_by(step as usize).collect();
    if !n.is_multiple_of(step) || kept != expected {
        return Err(Error::InvariantViolation(
            "kept eigenvalues do not form a subgroup".into(),
        ));
    }
    let mut kept_orders: Vec<u128> = kept.iter().map(|&e| n / e.gcd(&n)).collect();
    kept_orders.sort_unstable();
    kept_orders.dedup();
    Ok(OracleReport {
        p: space.p(),
        sigma: space.sigma(),
        working_degree: space.working_degree(),
        group_size: n,
        index: n / step,
        kept_exponents: kept,
        kept_orders,
        contains_minus_identity,
    })
}
