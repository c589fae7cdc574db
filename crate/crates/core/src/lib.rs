//! Non-symplectic indices of supersingular K3 surfaces.
//!
//! The crate has two independent routes to the index. [`strata`] evaluates the
//! combinatorial criterion on a zero pattern of moduli coordinates, and
//! [`oracle`] enumerates diagonal isometries of a concrete characteristic
//! subspace built in [`charspace`]. Everything runs over exact scalars:
//! finite-field elements from [`ffield`], rationals, and integers generic over
//! [`scalar::IntScalar`].

#![allow(clippy::needless_range_loop)]

pub mod arith;
pub mod charspace;
pub mod discform;
pub mod error;
pub mod ffield;
pub mod latred;
pub mod linalg;
pub mod oracle;
pub mod poly;
pub mod scalar;
pub mod strata;

pub use error::{Error, Result};
pub use ffield::{field_create, FieldCtx, FieldElement};

/// Matrices over a finite field.
pub type GfMatrix = linalg::Matrix<FieldElement>;
/// Matrices over the rationals.
pub type QMatrix = linalg::Matrix<num_rational::BigRational>;
/// Integral lattice with machine-word Gram entries.
pub type Lattice = latred::IntegralLattice<i64>;
/// Integral lattice with arbitrary-precision Gram entries.
pub type BigLattice = latred::IntegralLattice<num_bigint::BigInt>;
