//! Dense matrices over a [`FieldScalar`] with row-echelon based kernels,
//! ranks, inverses and subspace intersections.
//!
//! Vectors are rows. A subspace is represented by a matrix whose rows span it.

use crate::scalar::FieldScalar;

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<F: FieldScalar> {
    rows: Vec<Vec<F>>,
    ncols: usize,
    zero: F,
}

impl<F: FieldScalar> Matrix<F> {
    /// Matrix from rows; every row must have `ncols` entries.
    pub fn from_rows(rows: Vec<Vec<F>>, ncols: usize, zero: F) -> Self {
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged matrix");
        Self { rows, ncols, zero }
    }

    pub fn zeros(nrows: usize, ncols: usize, zero: F) -> Self {
        Self {
            rows: vec![vec![zero.clone(); ncols]; nrows],
            ncols,
            zero,
        }
    }

    pub fn identity(n: usize, zero: F) -> Self {
        let mut m = Self::zeros(n, n, zero);
        for i in 0..n {
            m.rows[i][i] = m.zero.one_like();
        }
        m
    }

    pub fn diagonal(entries: &[F], zero: F) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len(), zero);
        for (i, e) in entries.iter().enumerate() {
            m.rows[i][i] = e.clone();
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn zero_elem(&self) -> &F {
        &self.zero
    }

    pub fn rows(&self) -> &[Vec<F>] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Vec<F>> {
        self.rows
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.rows[i][j] = v;
    }

    pub fn map(&self, f: impl Fn(&F) -> F) -> Self {
        Self {
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(&f).collect())
                .collect(),
            ncols: self.ncols,
            zero: self.zero.clone(),
        }
    }

    pub fn transpose(&self) -> Self {
        let rows = (0..self.ncols)
            .map(|j| self.rows.iter().map(|r| r[j].clone()).collect())
            .collect();
        Self {
            rows,
            ncols: self.rows.len(),
            zero: self.zero.clone(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.ncols, rhs.nrows(), "shape mismatch in product");
        let rows = self
            .rows
            .iter()
            .map(|r| vec_mat(r, rhs, &self.zero))
            .collect();
        Self {
            rows,
            ncols: rhs.ncols,
            zero: self.zero.clone(),
        }
    }

    /// Stack the rows of `other` below the rows of `self`.
    pub fn stack(&self, other: &Self) -> Self {
        assert_eq!(self.ncols, other.ncols);
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Self {
            rows,
            ncols: self.ncols,
            zero: self.zero.clone(),
        }
    }

    /// Reduced row-echelon form (zero rows dropped) and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.ncols {
            let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(r, pr);
            let inv = rows[r][c].inverse().expect("pivot is nonzero");
            for x in rows[r].iter_mut() {
                *x = x.times(&inv);
            }
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i == r || row[c].is_zero() {
                    continue;
                }
                let factor = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = x.minus(&factor.times(y));
                }
            }
            pivots.push(c);
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        rows.truncate(r);
        (
            Self {
                rows,
                ncols: self.ncols,
                zero: self.zero.clone(),
            },
            pivots,
        )
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of { x : M x^T = 0 }, one vector per free column.
    pub fn right_kernel(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref();
        let one = self.zero.one_like();
        (0..self.ncols)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = vec![self.zero.clone(); self.ncols];
                v[free] = one.clone();
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = r.rows[i][free].negated();
                }
                v
            })
            .collect()
    }

    /// Basis of { y : y M = 0 }.
    pub fn left_kernel(&self) -> Vec<Vec<F>> {
        self.transpose().right_kernel()
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.nrows();
        if n != self.ncols {
            return None;
        }
        let mut aug_rows = Vec::with_capacity(n);
        let one = self.zero.one_like();
        for (i, r) in self.rows.iter().enumerate() {
            let mut row = r.clone();
            row.extend((0..n).map(|j| {
                if i == j {
                    one.clone()
                } else {
                    self.zero.clone()
                }
            }));
            aug_rows.push(row);
        }
        let aug = Self::from_rows(aug_rows, 2 * n, self.zero.clone());
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Self::from_rows(
            r.rows.into_iter().map(|row| row[n..].to_vec()).collect(),
            n,
            self.zero.clone(),
        ))
    }

    pub fn determinant(&self) -> F {
        let n = self.nrows();
        assert_eq!(n, self.ncols, "determinant of a non-square matrix");
        let mut rows = self.rows.clone();
        let mut det = self.zero.one_like();
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !rows[i][c].is_zero()) else {
                return self.zero.clone();
            };
            if pr != c {
                rows.swap(pr, c);
                det = det.negated();
            }
            det = det.times(&rows[c][c]);
            let inv = rows[c][c].inverse().expect("nonzero pivot");
            for i in c + 1..n {
                if rows[i][c].is_zero() {
                    continue;
                }
                let factor = rows[i][c].times(&inv);
                let pivot = rows[c].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot) {
                    *x = x.minus(&factor.times(y));
                }
            }
        }
        det
    }
}

/// Row vector times matrix.
pub fn vec_mat<F: FieldScalar>(v: &[F], m: &Matrix<F>, zero: &F) -> Vec<F> {
    let mut out = vec![zero.clone(); m.ncols()];
    for (vi, row) in v.iter().zip(m.rows()) {
        if vi.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(row) {
            *o = o.plus(&vi.times(x));
        }
    }
    out
}

pub fn dot<F: FieldScalar>(a: &[F], b: &[F], zero: &F) -> F {
    a.iter()
        .zip(b)
        .fold(zero.clone(), |acc, (x, y)| acc.plus(&x.times(y)))
}

/// Rank of the span of a list of vectors of length `ncols`.
pub fn span_rank<F: FieldScalar>(vectors: &[Vec<F>], ncols: usize, zero: &F) -> usize {
    Matrix::from_rows(vectors.to_vec(), ncols, zero.clone()).rank()
}

/// Basis (in reduced echelon form) of the intersection of two row spaces.
pub fn intersect<F: FieldScalar>(a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    let zero = a.zero_elem().clone();
    let stacked = a.stack(b);
    let na = a.nrows();
    let vectors: Vec<Vec<F>> = stacked
        .left_kernel()
        .into_iter()
        .map(|coeffs| vec_mat(&coeffs[..na], a, &zero))
        .collect();
    Matrix::from_rows(vectors, a.ncols(), zero).rref().0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::field_create;
    use num_rational::Ratio;

    type Q = Ratio<i64>;

    fn qm(rows: &[&[i64]]) -> Matrix<Q> {
        let ncols = rows[0].len();
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Q::from_integer(x)).collect())
                .collect(),
            ncols,
            Q::from_integer(0),
        )
    }

    #[test]
    fn kernel_and_rank_over_q() {
        let m = qm(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let ker = m.right_kernel();
        assert_eq!(ker.len(), 1);
        for row in m.rows() {
            assert_eq!(dot(row, &ker[0], &Q::from_integer(0)), Q::from_integer(0));
        }
    }

    #[test]
    fn inverse_and_determinant_over_q() {
        let m = qm(&[&[2, 1], &[7, 4]]);
        assert_eq!(m.determinant(), Q::from_integer(1));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2, Q::from_integer(0)));
        assert!(qm(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn intersection_of_planes_in_gf25() {
        let f = field_create(5, 2).unwrap();
        let e = |v: &[i64]| v.iter().map(|&x| f.from_int(x)).collect::<Vec<_>>();
        let a = Matrix::from_rows(vec![e(&[1, 0, 0]), e(&[0, 1, 0])], 3, f.zero());
        let b = Matrix::from_rows(vec![e(&[0, 1, 0]), e(&[0, 0, 1])], 3, f.zero());
        let i = intersect(&a, &b);
        assert_eq!(i.nrows(), 1);
        assert_eq!(i.row(0), e(&[0, 1, 0]).as_slice());
    }
}
