//! Dense exact matrices over the cyclotomic scalars.
//!
//! Rank, kernel, inverse and determinant all run the same deterministic
//! Gaussian elimination (first nonzero pivot in row order, no magnitude
//! pivoting), so results are reproducible bit for bit across runs.

use super::{Cyclotomic, ScalarError};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix is singular (rank {rank} of {size})")]
    Singular { rank: usize, size: usize },
    #[error("dimension mismatch: {0}")]
    Shape(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// A `rows x cols` matrix of [`Cyclotomic`] entries, row major.
///
/// A matrix represents a linear map `k^cols -> k^rows` acting on column
/// vectors; composition is ordinary matrix product `self * rhs`.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Cyclotomic>,
}

impl ExactMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Cyclotomic>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows*cols");
        ExactMatrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![Cyclotomic::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Cyclotomic::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Cyclotomic>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        ExactMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Cyclotomic) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ExactMatrix { rows, cols, data }
    }

    /// Column vector from entries.
    pub fn column(entries: Vec<Cyclotomic>) -> Self {
        let rows = entries.len();
        ExactMatrix { rows, cols: 1, data: entries }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Cyclotomic] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col_vec(&self, j: usize) -> Vec<Cyclotomic> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] * c)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && self.data.iter().enumerate().all(|(k, e)| {
                let (i, j) = (k / self.cols, k % self.cols);
                if i == j { *e == Cyclotomic::one() } else { e.is_zero() }
            })
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols { self[(i, j)].clone() } else { other[(i, j - self.cols)].clone() }
        })
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        Self::from_fn(self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows { self[(i, j)].clone() } else { other[(i - self.rows, j)].clone() }
        })
    }

    /// Kronecker product; shape `(r1*r2) x (c1*c2)`.
    pub fn kronecker(&self, other: &Self) -> Self {
        Self::from_fn(self.rows * other.rows, self.cols * other.cols, |i, j| {
            let (i1, i2) = (i / other.rows, i % other.rows);
            let (j1, j2) = (j / other.cols, j % other.cols);
            &self[(i1, j1)] * &other[(i2, j2)]
        })
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        Self::from_fn(self.rows + other.rows, self.cols + other.cols, |i, j| {
            if i < self.rows && j < self.cols {
                self[(i, j)].clone()
            } else if i >= self.rows && j >= self.cols {
                other[(i - self.rows, j - self.cols)].clone()
            } else {
                Cyclotomic::zero()
            }
        })
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = &out[(i, j)] + &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] + &rhs[(i, j)])
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] - &rhs[(i, j)])
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r >= m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv().expect("pivot is nonzero");
            for j in c..m.cols {
                m[(r, j)] = &m[(r, j)] * &inv;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        let t = &f * &m[(r, j)];
                        m[(i, j)] = &m[(i, j)] - &t;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn det(&self) -> Cyclotomic {
        assert_eq!(self.rows, self.cols, "determinant of a square matrix");
        let mut m = self.clone();
        let mut det = Cyclotomic::one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                return Cyclotomic::zero();
            };
            if p != c {
                m.swap_rows(c, p);
                det = -det;
            }
            det = &det * &m[(c, c)];
            let inv = m[(c, c)].inv().unwrap();
            for i in c + 1..m.rows {
                if !m[(i, c)].is_zero() {
                    let f = &m[(i, c)] * &inv;
                    for j in c..m.cols {
                        let t = &f * &m[(c, j)];
                        m[(i, j)] = &m[(i, j)] - &t;
                    }
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Self, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::Shape(format!("{}x{} is not square", self.rows, self.cols)));
        }
        let n = self.rows;
        let aug = self.hstack(&Self::identity(n));
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots.iter().take(n).enumerate().any(|(i, &p)| p != i) {
            return Err(MatrixError::Singular { rank: self.rank(), size: n });
        }
        Ok(Self::from_fn(n, n, |i, j| red[(i, n + j)].clone()))
    }

    /// Basis of the right kernel, returned as the columns of a matrix
    /// (`cols x nullity`). Deterministic: one basis vector per free column in
    /// ascending order.
    pub fn kernel(&self) -> Self {
        let (red, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Self::zeros(self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out[(fc, k)] = Cyclotomic::one();
            for (r, &pc) in pivots.iter().enumerate() {
                out[(pc, k)] = -red[(r, fc)].clone();
            }
        }
        out
    }

    /// Solve `self * x = b` for a single solution; `None` if inconsistent.
    pub fn solve(&self, b: &Self) -> Option<Self> {
        assert_eq!(b.nrows(), self.rows);
        let aug = self.hstack(b);
        let (red, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Self::zeros(self.cols, b.ncols());
        for (r, &pc) in pivots.iter().enumerate() {
            for j in 0..b.ncols() {
                x[(pc, j)] = red[(r, self.cols + j)].clone();
            }
        }
        Some(x)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl std::ops::Index<(usize, usize)> for ExactMatrix {
    type Output = Cyclotomic;
    fn index(&self, (i, j): (usize, usize)) -> &Cyclotomic {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ExactMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cyclotomic {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|e| e.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// A deterministic basis for the quotient of `k^d` by the column space of a
/// relation matrix, as used for coinvariants of group actions.
///
/// `proj * lift = identity` on the quotient; `proj` kills the relations.
#[derive(Clone, Debug)]
pub struct QuotientBasis {
    /// `q x d`: coordinates of a vector in the chosen quotient basis.
    pub proj: ExactMatrix,
    /// `d x q`: representative lifts (standard basis vectors) of the quotient basis.
    pub lift: ExactMatrix,
}

impl QuotientBasis {
    pub fn dim(&self) -> usize {
        self.proj.nrows()
    }
}

/// Quotient of `k^d` by the span of the columns of `relations` (`d x m`).
///
/// The complement basis is chosen deterministically: standard basis vectors
/// `e_i` in ascending index order that are independent of the relation span.
pub fn quotient_by_columns(dim: usize, relations: &ExactMatrix) -> QuotientBasis {
    assert_eq!(relations.nrows(), dim);
    // Echelonize [relations | I]; pivot columns beyond the relations identify
    // the standard basis vectors completing the span.
    let aug = relations.hstack(&ExactMatrix::identity(dim));
    let (_, pivots) = aug.rref();
    let chosen: Vec<usize> = pivots
        .iter()
        .filter(|&&p| p >= relations.ncols())
        .map(|&p| p - relations.ncols())
        .collect();
    let q = chosen.len();
    let mut lift = ExactMatrix::zeros(dim, q);
    for (k, &i) in chosen.iter().enumerate() {
        lift[(i, k)] = Cyclotomic::one();
    }
    // proj: express v in the combined basis [relations-basis | chosen], take
    // the chosen coordinates. Build from solving [R | L] * y = e_i columns.
    let rel_pivot_cols: Vec<usize> = pivots.iter().filter(|&&p| p < relations.ncols()).copied().collect();
    let mut basis = ExactMatrix::zeros(dim, rel_pivot_cols.len() + q);
    for (k, &c) in rel_pivot_cols.iter().enumerate() {
        for i in 0..dim {
            basis[(i, k)] = relations[(i, c)].clone();
        }
    }
    for (k, &i) in chosen.iter().enumerate() {
        basis[(i, rel_pivot_cols.len() + k)] = Cyclotomic::one();
    }
    let full = basis
        .solve(&ExactMatrix::identity(dim))
        .expect("combined basis spans k^d");
    let proj = ExactMatrix::from_fn(q, dim, |i, j| full[(rel_pivot_cols.len() + i, j)].clone());
    QuotientBasis { proj, lift }
}

#[cfg(test)]
mod tests {
    use super::super::rational;
    use super::*;
    use proptest::prelude::*;

    fn c(n: i64) -> Cyclotomic {
        Cyclotomic::from_integer(n)
    }

    #[test]
    fn identity_det_and_rank() {
        let id = ExactMatrix::identity(3);
        assert_eq!(id.det(), Cyclotomic::one());
        assert_eq!(id.rank(), 3);
    }

    #[test]
    fn ones_matrix_rank_and_kernel() {
        let m = ExactMatrix::from_rows(vec![vec![c(1), c(1)], vec![c(1), c(1)]]);
        assert_eq!(m.rank(), 1);
        let k = m.kernel();
        assert_eq!(k.ncols(), 1);
        // kernel spanned by (1, -1) up to sign/normalization
        let v0 = &k[(0, 0)];
        let v1 = &k[(1, 0)];
        assert_eq!(&(v0 + v1), &Cyclotomic::zero());
        assert!(!v0.is_zero());
    }

    #[test]
    fn vandermonde_of_fifth_roots_has_full_rank() {
        // 5x5 character table of Z/5: rows chi_j, cols g^k, entry zeta_5^{jk}.
        let m = ExactMatrix::from_fn(5, 5, |j, k| {
            Cyclotomic::root_of_unity(5, (j * k) as i64).unwrap()
        });
        assert_eq!(m.rank(), 5);
        // Brute-force elimination oracle: no nonzero vector in the kernel.
        assert_eq!(m.kernel().ncols(), 0);
    }

    #[test]
    fn singular_inverse_reports_rank() {
        let m = ExactMatrix::from_rows(vec![vec![c(1), c(1)], vec![c(1), c(1)]]);
        match m.inverse() {
            Err(MatrixError::Singular { rank, size }) => {
                assert_eq!((rank, size), (1, 2));
            }
            other => panic!("expected singular, got {:?}", other),
        }
    }

    #[test]
    fn inverse_multiplies_to_identity() {
        let m = ExactMatrix::from_rows(vec![
            vec![c(2), c(1), c(0)],
            vec![c(0), c(1), c(3)],
            vec![c(1), c(0), c(1)],
        ]);
        let inv = m.inverse().unwrap();
        assert!(m.matmul(&inv).is_identity());
        assert!(inv.matmul(&m).is_identity());
    }

    #[test]
    fn quotient_by_sign_relation() {
        // Z/2 sign action on k^1: relation v - (-v) = 2v spans everything.
        let rel = ExactMatrix::from_rows(vec![vec![c(2)]]);
        let q = quotient_by_columns(1, &rel);
        assert_eq!(q.dim(), 0);
        // trivial action: relation 0, quotient is everything
        let rel = ExactMatrix::from_rows(vec![vec![c(0)]]);
        let q = quotient_by_columns(1, &rel);
        assert_eq!(q.dim(), 1);
        assert!(q.proj.matmul(&q.lift).is_identity());
    }

    #[test]
    fn quotient_proj_kills_relations() {
        let rel = ExactMatrix::from_rows(vec![
            vec![c(1), c(0)],
            vec![c(-1), c(0)],
            vec![c(0), c(0)],
        ]);
        let q = quotient_by_columns(3, &rel);
        assert_eq!(q.dim(), 2);
        assert!(q.proj.matmul(&rel).is_zero());
        assert!(q.proj.matmul(&q.lift).is_identity());
    }

    fn arb_invertible(n: usize) -> impl Strategy<Value = ExactMatrix> {
        // L * U with unit diagonals scaled: always nonsingular.
        proptest::collection::vec(-3i64..=3, n * n * 2).prop_map(move |v| {
            let mut l = ExactMatrix::identity(n);
            let mut u = ExactMatrix::identity(n);
            let mut it = v.into_iter();
            for i in 0..n {
                for j in 0..n {
                    let x = it.next().unwrap();
                    if i > j {
                        l[(i, j)] = c(x);
                    }
                    let y = it.next().unwrap();
                    if i < j {
                        u[(i, j)] = c(y);
                    } else if i == j {
                        u[(i, j)] = c(if y == 0 { 1 } else { y });
                    }
                }
            }
            l.matmul(&u)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn inverse_involution(m in (1usize..=8).prop_flat_map(arb_invertible)) {
            let inv = m.inverse().unwrap();
            prop_assert_eq!(inv.inverse().unwrap(), m.clone());
            prop_assert_eq!(m.rank() + m.kernel().ncols(), m.ncols());
        }

        #[test]
        fn rank_plus_nullity(rows in 1usize..=5, cols in 1usize..=5, entries in proptest::collection::vec(-2i64..=2, 25)) {
            let m = ExactMatrix::from_fn(rows, cols, |i, j| c(entries[i * cols + j]));
            prop_assert_eq!(m.rank() + m.kernel().ncols(), cols);
            let halves = ExactMatrix::from_fn(rows, cols, |i, j| m[(i, j)].scale(&rational(1, 2)));
            prop_assert_eq!(halves.rank(), m.rank());
        }
    }
}
