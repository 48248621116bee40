//! Exact integer and rational linear algebra on small dense matrices.

mod gf2;
mod snf;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use gf2::{gf2_rank, solve_affine_gf2, BitVec, Gf2AffineSolutionSet, GrayCodeSolutions};
pub use snf::{smith_normal_form, SnfDiagonal};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("rows have unequal lengths")]
    Ragged,
    #[error("matrix is not square ({rows}×{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Builds from rows; `cols` is only consulted when there are no rows.
    pub fn from_rows_with_cols(rows: Vec<Vec<BigInt>>, cols: usize) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(cols, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::Ragged);
        }
        let nrows = rows.len();
        Ok(IntMatrix { rows: nrows, cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self, LinalgError> {
        IntMatrix::from_rows_with_cols(rows, 0)
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self, LinalgError> {
        IntMatrix::from_rows(rows.iter().map(|r| r.iter().copied().map(BigInt::from).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|x| x.to_i64()).collect()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch { expected: self.cols, got: other.rows });
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = BigInt::zero();
                for k in 0..self.cols {
                    acc += self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Exact determinant by Bareiss fraction-free elimination.
    pub fn determinant(&self) -> Result<BigInt, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare { rows: self.rows, cols: self.cols });
        }
        Ok(bareiss_determinant(self.to_rows()))
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let mut w: Vec<Vec<BigRational>> = self
            .to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(BigRational::from_integer).collect())
            .collect();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&i| !w[i][col].is_zero()) else {
                continue;
            };
            w.swap(rank, p);
            for i in rank + 1..self.rows {
                if w[i][col].is_zero() {
                    continue;
                }
                let factor = &w[i][col] / &w[rank][col];
                for j in col..self.cols {
                    let delta = &factor * &w[rank][j];
                    w[i][j] -= delta;
                }
            }
            rank += 1;
        }
        rank
    }
}

fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, p);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let value = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = value;
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

impl fmt::Display for IntMatrix {
    /// Row-major bracketed form: `[[-5, 1], [1, 0]]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Square integer matrix with `M[i][j] = M[j][i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymmetricIntMatrix(IntMatrix);

impl SymmetricIntMatrix {
    pub fn new(m: IntMatrix) -> Result<Self, LinalgError> {
        if !m.is_square() {
            return Err(LinalgError::NotSquare { rows: m.rows, cols: m.cols });
        }
        for i in 0..m.rows {
            for j in i + 1..m.cols {
                if m.get(i, j) != m.get(j, i) {
                    return Err(LinalgError::NotSymmetric(i, j));
                }
            }
        }
        Ok(SymmetricIntMatrix(m))
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self, LinalgError> {
        SymmetricIntMatrix::new(IntMatrix::from_rows(rows)?)
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self, LinalgError> {
        SymmetricIntMatrix::new(IntMatrix::from_i64_rows(rows)?)
    }

    pub fn identity(n: usize) -> Self {
        SymmetricIntMatrix(IntMatrix::identity(n))
    }

    pub fn dim(&self) -> usize {
        self.0.rows
    }

    pub fn as_matrix(&self) -> &IntMatrix {
        &self.0
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        self.0.get(i, j)
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        self.0.to_i64_rows()
    }

    pub fn neg(&self) -> Self {
        SymmetricIntMatrix(self.0.neg())
    }

    /// Block diagonal `self ⊕ other`.
    pub fn direct_sum(&self, other: &SymmetricIntMatrix) -> Self {
        let (a, b) = (self.dim(), other.dim());
        let mut m = IntMatrix::zeros(a + b, a + b);
        for i in 0..a {
            for j in 0..a {
                m.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..b {
            for j in 0..b {
                m.set(a + i, a + j, other.get(i, j).clone());
            }
        }
        SymmetricIntMatrix(m)
    }

    /// Congruence `Uᵀ M U`.
    pub fn congruent(&self, u: &IntMatrix) -> Result<Self, LinalgError> {
        let product = u.transpose().mul(&self.0)?.mul(u)?;
        SymmetricIntMatrix::new(product)
    }

    /// Principal submatrix on the given (sorted) indices.
    pub fn principal_submatrix(&self, indices: &[usize]) -> Self {
        let rows = indices
            .iter()
            .map(|&i| indices.iter().map(|&j| self.get(i, j).clone()).collect())
            .collect();
        SymmetricIntMatrix(IntMatrix::from_rows_with_cols(rows, 0).expect("square by construction"))
    }

    /// Diagonal reduced mod 2.
    pub fn diagonal_parity(&self) -> BitVec {
        let mut b = BitVec::zeros(self.dim());
        for i in 0..self.dim() {
            if self.get(i, i).is_odd() {
                b.set(i, true);
            }
        }
        b
    }
}

impl fmt::Display for SymmetricIntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

trait Parity {
    fn is_odd(&self) -> bool;
}

impl Parity for BigInt {
    fn is_odd(&self) -> bool {
        num_integer::Integer::is_odd(self)
    }
}

pub fn determinant(m: &SymmetricIntMatrix) -> BigInt {
    bareiss_determinant(m.0.to_rows())
}

/// Signature (positive minus negative inertia) by exact symmetric
/// elimination over the rationals.
///
/// The first nonzero diagonal entry of the working block (declaration order)
/// is used as a 1×1 pivot. When the whole working diagonal vanishes, the
/// first nonzero off-diagonal pair `(p, q)` forms a hyperbolic 2×2 pivot,
/// which contributes zero.
pub fn signature(m: &SymmetricIntMatrix) -> i64 {
    let n = m.dim();
    let mut w: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| BigRational::from_integer(m.get(i, j).clone())).collect())
        .collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut sig = 0i64;
    while !active.is_empty() {
        if let Some(pos) = active.iter().position(|&p| !w[p][p].is_zero()) {
            let p = active.remove(pos);
            let d = w[p][p].clone();
            sig += if d.is_positive() { 1 } else { -1 };
            for &i in &active {
                if w[i][p].is_zero() {
                    continue;
                }
                let factor = &w[i][p] / &d;
                for &j in &active {
                    let delta = &factor * &w[p][j];
                    w[i][j] -= delta;
                }
            }
            continue;
        }
        let pair = active.iter().enumerate().find_map(|(a, &p)| {
            active[a + 1..].iter().find(|&&q| !w[p][q].is_zero()).map(|&q| (p, q))
        });
        let Some((p, q)) = pair else {
            break;
        };
        let b = w[p][q].clone();
        active.retain(|&x| x != p && x != q);
        let snapshot: Vec<(BigRational, BigRational)> =
            active.iter().map(|&i| (w[i][p].clone(), w[i][q].clone())).collect();
        for (a, &i) in active.iter().enumerate() {
            for (c, &j) in active.iter().enumerate() {
                let delta = (&snapshot[a].0 * &snapshot[c].1 + &snapshot[a].1 * &snapshot[c].0) / &b;
                w[i][j] -= delta;
            }
        }
    }
    sig
}
