//! Integral lattices, Smith normal form, discriminant groups and ±2 reflections.
//!
//! Column convention: vectors are integer coordinate columns in the lattice
//! basis and an isometry R acts as w -> R·w, preserving the Gram matrix when
//! R^T·G·R = G.

use num_rational::Ratio;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::IntScalar;

pub type IntMatrix<T> = Vec<Vec<T>>;

pub fn identity<T: IntScalar>(n: usize) -> IntMatrix<T> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { T::one() } else { T::zero() })
                .collect()
        })
        .collect()
}

pub fn mat_mul<T: IntScalar>(a: &IntMatrix<T>, b: &IntMatrix<T>) -> IntMatrix<T> {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(T::zero(), |acc, k| acc + row[k].clone() * b[k][j].clone())
                })
                .collect()
        })
        .collect()
}

fn transpose<T: IntScalar>(a: &IntMatrix<T>) -> IntMatrix<T> {
    let cols = a.first().map_or(0, |r| r.len());
    (0..cols)
        .map(|j| a.iter().map(|r| r[j].clone()).collect())
        .collect()
}

fn mat_vec<T: IntScalar>(a: &IntMatrix<T>, v: &[T]) -> Vec<T> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
        })
        .collect()
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant<T: IntScalar>(m: &IntMatrix<T>) -> T {
    let n = m.len();
    if n == 0 {
        return T::one();
    }
    let mut a = m.clone();
    let mut sign = T::one();
    let mut prev = T::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return T::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j].clone() * a[k][k].clone() - a[i][k].clone() * a[k][j].clone();
                a[i][j] = num / prev.clone();
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// D = U·M·V with U, V unimodular and D diagonal, d_1 | d_2 | ..., d_i >= 0.
#[derive(Debug, Clone, PartialEq)]
pub struct SmithForm<T> {
    pub d: IntMatrix<T>,
    pub u: IntMatrix<T>,
    pub v: IntMatrix<T>,
}

impl<T: IntScalar> SmithForm<T> {
    pub fn diagonal(&self) -> Vec<T> {
        (0..self.d.len().min(self.d.first().map_or(0, |r| r.len())))
            .map(|i| self.d[i][i].clone())
            .collect()
    }
}

pub fn smith_normal_form<T: IntScalar>(m: &IntMatrix<T>) -> SmithForm<T> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut d = m.clone();
    let mut u = identity::<T>(rows);
    let mut v = identity::<T>(cols);

    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if d[i][j].is_zero() {
                        continue;
                    }
                    if pivot.is_none_or(|(pi, pj)| d[i][j].abs() < d[pi][pj].abs()) {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                return SmithForm { d, u, v };
            };
            d.swap(t, pi);
            u.swap(t, pi);
            for row in d.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }

            let mut clean = true;
            for i in t + 1..rows {
                let q = d[i][t].div_floor(&d[t][t]);
                if !q.is_zero() {
                    for j in 0..cols {
                        let x = d[t][j].clone();
                        d[i][j] = d[i][j].clone() - q.clone() * x;
                    }
                    for j in 0..rows {
                        let x = u[t][j].clone();
                        u[i][j] = u[i][j].clone() - q.clone() * x;
                    }
                }
                clean &= d[i][t].is_zero();
            }
            for j in t + 1..cols {
                let q = d[t][j].div_floor(&d[t][t]);
                if !q.is_zero() {
                    for i in 0..rows {
                        let x = d[i][t].clone();
                        d[i][j] = d[i][j].clone() - q.clone() * x;
                    }
                    for i in 0..cols {
                        let x = v[i][t].clone();
                        v[i][j] = v[i][j].clone() - q.clone() * x;
                    }
                }
                clean &= d[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            // the pivot must divide the whole trailing block
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !d[i][j].is_multiple_of(&d[t][t]));
            match offender {
                Some((i, _)) => {
                    for j in 0..cols {
                        let x = d[i][j].clone();
                        d[t][j] = d[t][j].clone() + x;
                    }
                    for j in 0..rows {
                        let x = u[i][j].clone();
                        u[t][j] = u[t][j].clone() + x;
                    }
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            for j in 0..cols {
                d[t][j] = -d[t][j].clone();
            }
            for j in 0..rows {
                u[t][j] = -u[t][j].clone();
            }
        }
    }
    SmithForm { d, u, v }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegralLattice<T> {
    gram: IntMatrix<T>,
}

impl<T: IntScalar> IntegralLattice<T> {
    pub fn new(gram: IntMatrix<T>) -> Result<Self> {
        let n = gram.len();
        if gram.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: gram.iter().map(|r| r.len()).find(|&l| l != n).unwrap_or(n),
            });
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        if determinant(&gram).is_zero() {
            return Err(Error::DegenerateLattice);
        }
        Ok(Self { gram })
    }

    pub fn from_i64(gram: &[Vec<i64>]) -> Result<Self> {
        Self::new(
            gram.iter()
                .map(|r| r.iter().map(|&x| T::from_i64_lossless(x)).collect())
                .collect(),
        )
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &IntMatrix<T> {
        &self.gram
    }

    pub fn det(&self) -> T {
        determinant(&self.gram)
    }

    pub fn is_even(&self) -> bool {
        self.gram.iter().enumerate().all(|(i, r)| r[i].is_even())
    }

    pub fn inner(&self, u: &[T], w: &[T]) -> T {
        u.iter()
            .zip(mat_vec(&self.gram, w))
            .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b)
    }

    pub fn norm(&self, v: &[T]) -> T {
        self.inner(v, v)
    }

    fn check_vector(&self, v: &[T]) -> Result<()> {
        if v.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                got: v.len(),
            });
        }
        Ok(())
    }

    fn reflection(&self, v: &[T], expected: i64, sign: T) -> Result<IntMatrix<T>> {
        self.check_vector(v)?;
        let norm = self.norm(v);
        if norm != T::from_i64_lossless(expected) {
            return Err(Error::NormMismatch {
                expected,
                got: norm.to_string(),
            });
        }
        let gv = mat_vec(&self.gram, v);
        let mut r = identity::<T>(self.rank());
        for (i, vi) in v.iter().enumerate() {
            for (j, gj) in gv.iter().enumerate() {
                r[i][j] = r[i][j].clone() + sign.clone() * vi.clone() * gj.clone();
            }
        }
        Ok(r)
    }

    /// s_v: w -> w + (v·w) v for v·v = -2.
    pub fn reflect_minus2(&self, v: &[T]) -> Result<IntMatrix<T>> {
        self.reflection(v, -2, T::one())
    }

    /// t_u: w -> w - (w·u) u for u·u = 2.
    pub fn reflect_plus2(&self, u: &[T]) -> Result<IntMatrix<T>> {
        self.reflection(u, 2, -T::one())
    }

    /// R^T·G·R = G.
    pub fn preserves_gram(&self, r: &IntMatrix<T>) -> bool {
        mat_mul(&mat_mul(&transpose(r), &self.gram), r) == self.gram
    }

    pub fn disc_group(&self) -> DiscGroup<T> {
        let snf = smith_normal_form(&self.gram);
        let n = self.rank();
        let mut factors = Vec::new();
        let mut generators = Vec::new();
        for (i, di) in snf.diagonal().into_iter().enumerate() {
            if di.is_one() {
                continue;
            }
            generators.push(
                (0..n)
                    .map(|r| Ratio::new(snf.v[r][i].clone(), di.clone()))
                    .collect::<Vec<_>>(),
            );
            factors.push(di);
        }
        let form = generators
            .iter()
            .map(|g| {
                generators
                    .iter()
                    .map(|h| reduce_mod_one(self.rational_inner(g, h)))
                    .collect()
            })
            .collect();
        DiscGroup {
            factors,
            generators,
            form,
        }
    }

    fn rational_inner(&self, g: &[Ratio<T>], h: &[Ratio<T>]) -> Ratio<T> {
        let mut acc = Ratio::zero();
        for (i, gi) in g.iter().enumerate() {
            for (j, hj) in h.iter().enumerate() {
                acc = acc + gi.clone() * Ratio::from_integer(self.gram[i][j].clone()) * hj.clone();
            }
        }
        acc
    }

    /// Whether R acts trivially on L*/L: R·g - g is integral for every generator.
    pub fn acts_trivially_on_discriminant(&self, r: &IntMatrix<T>) -> bool {
        self.disc_group().generators.iter().all(|g| {
            (0..self.rank()).all(|i| {
                let image = g
                    .iter()
                    .zip(&r[i])
                    .fold(Ratio::zero(), |acc: Ratio<T>, (x, rij)| {
                        acc + x.clone() * Ratio::from_integer(rij.clone())
                    });
                (image - g[i].clone()).is_integer()
            })
        })
    }

    /// Vectors of the given norm with coordinates in [-bound, bound], one per ± pair.
    pub fn vectors_of_norm(&self, norm: i64, bound: i64) -> Vec<Vec<T>> {
        let n = self.rank();
        let target = T::from_i64_lossless(norm);
        let width = (2 * bound + 1) as u64;
        let total = width.pow(n as u32);
        let mut out = Vec::new();
        for k in 0..total {
            let mut rest = k;
            let v: Vec<i64> = (0..n)
                .map(|_| {
                    let c = (rest % width) as i64 - bound;
                    rest /= width;
                    c
                })
                .collect();
            if v.iter().find(|&&c| c != 0).is_none_or(|&c| c < 0) {
                continue;
            }
            let v: Vec<T> = v.into_iter().map(T::from_i64_lossless).collect();
            if self.norm(&v) == target {
                out.push(v);
            }
        }
        out
    }
}

fn reduce_mod_one<T: IntScalar>(r: Ratio<T>) -> Ratio<T> {
    r.clone() - r.floor()
}

/// L*/L as a product of cyclic groups with its Q/Z-valued bilinear form.
#[derive(Debug, Clone)]
pub struct DiscGroup<T> {
    /// Invariant factors greater than one.
    pub factors: Vec<T>,
    /// Dual-lattice generators, rational coordinates in the lattice basis.
    pub generators: Vec<Vec<Ratio<T>>>,
    /// b(g_i, g_j) mod Z, in [0, 1).
    pub form: Vec<Vec<Ratio<T>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiscGroupRecord {
    pub factors: Vec<String>,
    pub order: String,
    pub form: Vec<Vec<String>>,
}

impl<T: IntScalar> DiscGroup<T> {
    pub fn order(&self) -> T {
        self.factors.iter().fold(T::one(), |acc, f| acc * f.clone())
    }

    pub fn record(&self) -> DiscGroupRecord {
        DiscGroupRecord {
            factors: self.factors.iter().map(|f| f.to_string()).collect(),
            order: self.order().to_string(),
            form: self
                .form
                .iter()
                .map(|r| r.iter().map(|x| x.to_string()).collect())
                .collect(),
        }
    }
}

/// Names accepted by [`named_lattice`].
pub const LATTICE_NAMES: &[&str] = &["A1", "A1+", "A2", "U", "U+A1", "diag(2,-2)", "E8"];

/// Gram matrix of a registered lattice; root lattices are negative definite.
pub fn named_gram(name: &str) -> Result<Vec<Vec<i64>>> {
    Ok(match name {
        "A1" => vec![vec![-2]],
        "A1+" => vec![vec![2]],
        "A2" => vec![vec![-2, 1], vec![1, -2]],
        "U" => vec![vec![0, 1], vec![1, 0]],
        "U+A1" => vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, -2]],
        "diag(2,-2)" => vec![vec![2, 0], vec![0, -2]],
        "E8" => {
            // Bourbaki numbering: chain 1-3-4-5-6-7-8, node 2 attached to 4
            let edges = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)];
            let mut g = vec![vec![0i64; 8]; 8];
            for (i, row) in g.iter_mut().enumerate() {
                row[i] = -2;
            }
            for (a, b) in edges {
                g[a][b] = 1;
                g[b][a] = 1;
            }
            g
        }
        other => return Err(Error::UnknownLattice(other.to_string())),
    })
}

pub fn named_lattice<T: IntScalar>(name: &str) -> Result<IntegralLattice<T>> {
    IntegralLattice::from_i64(&named_gram(name)?)
}
