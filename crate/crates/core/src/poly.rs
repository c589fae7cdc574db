//! Univariate polynomials over any [`FieldScalar`].

use crate::scalar::FieldScalar;

/// Dense polynomial, coefficients low degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<F: FieldScalar> {
    coeffs: Vec<F>,
    zero: F,
}

impl<F: FieldScalar> Poly<F> {
    pub fn new(coeffs: Vec<F>, zero: F) -> Self {
        let mut p = Self { coeffs, zero };
        p.trim();
        p
    }

    pub fn zero(zero: F) -> Self {
        Self {
            coeffs: Vec::new(),
            zero,
        }
    }

    pub fn constant(c: F) -> Self {
        let zero = c.zero_like();
        Self::new(vec![c], zero)
    }

    /// The monomial T.
    pub fn x(zero: F) -> Self {
        let one = zero.one_like();
        Self::new(vec![zero.clone(), one], zero)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &F) -> F {
        self.coeffs
            .iter()
            .rev()
            .fold(self.zero.clone(), |acc, c| acc.times(x).plus(c))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                (Some(a), Some(b)) => a.plus(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Self::new(coeffs, self.zero.clone())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(&self.zero.one_like().negated()))
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::new(
            self.coeffs.iter().map(|a| a.times(c)).collect(),
            self.zero.clone(),
        )
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(self.zero.clone());
        }
        let mut out = vec![self.zero.clone(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].plus(&a.times(b));
            }
        }
        Self::new(out, self.zero.clone())
    }

    /// Quotient and remainder; panics on division by the zero polynomial.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = divisor.coeffs[dd].inverse().expect("nonzero lead");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(self.zero.clone()), self.clone());
        }
        let mut quot = vec![self.zero.clone(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].times(&lead_inv);
            if c.is_zero() {
                continue;
            }
            for (j, dj) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].minus(&c.times(dj));
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (
            Self::new(quot, self.zero.clone()),
            Self::new(rem, self.zero.clone()),
        )
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            None => self.clone(),
            Some(l) => self.scale(&l.inverse().expect("nonzero lead")),
        }
    }

    /// Monic gcd (zero only if both inputs are zero).
    pub fn gcd(&self, rhs: &Self) -> Self {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod modulus`.
    pub fn pow_mod(&self, mut e: u128, modulus: &Self) -> Self {
        let mut acc = Self::constant(self.zero.one_like()).rem(modulus);
        let mut base = self.rem(modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rem(modulus);
            }
        }
        acc
    }

    /// Lagrange interpolation through distinct nodes.
    pub fn interpolate(xs: &[F], ys: &[F], zero: F) -> Self {
        assert_eq!(xs.len(), ys.len());
        let one = zero.one_like();
        let mut acc = Self::zero(zero.clone());
        for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
            if yi.is_zero() {
                continue;
            }
            let mut basis = Self::constant(one.clone());
            let mut denom = one.clone();
            for (j, xj) in xs.iter().enumerate() {
                if i == j {
                    continue;
                }
                basis = basis.mul(&Self::new(vec![xj.negated(), one.clone()], zero.clone()));
                denom = denom.times(&xi.minus(xj));
            }
            let factor = yi.times(&denom.inverse().expect("interpolation nodes are distinct"));
            acc = acc.add(&basis.scale(&factor));
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    type Q = Ratio<i64>;

    fn q(v: &[i64]) -> Poly<Q> {
        Poly::new(
            v.iter().map(|&x| Q::from_integer(x)).collect(),
            Q::from_integer(0),
        )
    }

    #[test]
    fn division_identity_over_q() {
        let a = q(&[1, 2, 0, 3, 5]);
        let b = q(&[2, 0, 7]);
        let (qq, r) = a.div_rem(&b);
        assert_eq!(qq.mul(&b).add(&r), a);
        assert!(r.degree().unwrap() < 2);
    }

    #[test]
    fn gcd_over_q() {
        // (T-1)(T-2) and (T-1)(T+3)
        let a = q(&[2, -3, 1]);
        let b = q(&[-3, 2, 1]);
        assert_eq!(a.gcd(&b), q(&[-1, 1]));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let f = q(&[4, -1, 0, 2]);
        let xs: Vec<Q> = (0..4).map(Q::from_integer).collect();
        let ys: Vec<Q> = xs.iter().map(|x| f.eval(x)).collect();
        assert_eq!(Poly::interpolate(&xs, &ys, Q::from_integer(0)), f);
    }
}
