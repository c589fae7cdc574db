//! Scalar abstractions shared by the linear algebra, polynomial and lattice code.
//!
//! Finite-field elements carry their context at runtime, so the field trait
//! derives its identities from an existing element instead of `Zero::zero()`.
//! Rationals (`Ratio<T>`) get the same trait through a blanket impl, which lets
//! the row-echelon code run unchanged over GF(p^d) and over Q.

use std::fmt::{Debug, Display};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

/// Exact field scalar with context-derived identities.
pub trait FieldScalar: Clone + PartialEq + Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;
    /// `None` exactly when `self` is zero.
    fn inverse(&self) -> Option<Self>;

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }
}

impl<T> FieldScalar for Ratio<T>
where
    T: Clone + Integer + Signed + Debug + Send + Sync,
{
    fn zero_like(&self) -> Self {
        Ratio::zero()
    }
    fn one_like(&self) -> Self {
        Ratio::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self.clone() + rhs.clone()
    }
    fn minus(&self, rhs: &Self) -> Self {
        self.clone() - rhs.clone()
    }
    fn times(&self, rhs: &Self) -> Self {
        self.clone() * rhs.clone()
    }
    fn negated(&self) -> Self {
        -self.clone()
    }
    fn inverse(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// Integer scalar for Gram matrices, Smith forms and cyclotomic coefficients.
pub trait IntScalar:
    Clone + Debug + Display + Integer + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    fn from_i64_lossless(v: i64) -> Self {
        Self::from_i64(v).expect("i64 fits every supported integer scalar")
    }
}

impl<T> IntScalar for T where
    T: Clone
        + Debug
        + Display
        + Integer
        + Signed
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}
