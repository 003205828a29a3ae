//! Dense matrices over exact rationals, with deterministic elimination.
//!
//! All solvers reduce to the reduced row echelon form computed with
//! first-nonzero pivoting in column order, so bases and particular solutions
//! are canonical: `kernel` returns the reduced column-echelon basis (one
//! vector per free column, ascending), and `solve` zeroes every free variable.

use std::fmt;
use std::ops::{Index, IndexMut};

use serde::de::{Deserializer, Error as DeError};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A coordinate vector.
pub type Vector = Vec<Rational>;

/// Row-major dense matrix of exact rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vector>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds an `rows x cols` matrix entry by entry.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut m = Matrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Reinterprets a flat row-major vector as an `rows x cols` matrix.
    pub fn from_flat(rows: usize, cols: usize, entries: Vector) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(Matrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Rational::is_zero)
    }

    /// Flat row-major copy of the entries.
    pub fn to_flat(&self) -> Vector {
        self.entries.clone()
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[Rational]) {
        assert_eq!(v.len(), self.rows);
        for i in 0..self.rows {
            self[(i, j)] = v[i].clone();
        }
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn neg(&self) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a * c).collect(),
        }
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let t = a * b;
                    out[(i, j)] += &t;
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[Rational]) -> Vector {
        assert_eq!(self.cols, v.len(), "inner dimension mismatch");
        let mut out = vec![Rational::zero(); self.rows];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() || v[k].is_zero() {
                    continue;
                }
                let t = a * &v[k];
                out[i] += &t;
            }
        }
        out
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        Matrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    /// Reduced row echelon form with first-nonzero pivoting in column order.
    pub fn rref(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = m[(r, c)].recip().expect("pivot is nonzero");
            if !m[(r, c)].is_one() {
                for j in c..m.cols {
                    if !m[(r, j)].is_zero() {
                        m[(r, j)] *= &inv;
                    }
                }
            }
            let pivot_row: Vector = m.row(r).to_vec();
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if pivot_row[j].is_zero() {
                        continue;
                    }
                    let t = &f * &pivot_row[j];
                    m[(i, j)] -= &t;
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the right nullspace, one vector per free column in ascending
    /// column order (reduced column-echelon normal form).
    pub fn kernel(&self) -> Vec<Vector> {
        let ech = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &ech.pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for f in 0..self.cols {
            if is_pivot[f] {
                continue;
            }
            let mut v = vec![Rational::zero(); self.cols];
            v[f] = Rational::one();
            for (row, &pc) in ech.pivots.iter().enumerate() {
                v[pc] = -&ech.matrix[(row, f)];
            }
            basis.push(v);
        }
        basis
    }

    /// Deterministic particular solution of `self * x = rhs`; free variables
    /// are set to zero.
    pub fn solve(&self, rhs: &[Rational]) -> Result<Vector> {
        if rhs.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "rhs has {} entries, matrix has {} rows",
                rhs.len(),
                self.rows
            )));
        }
        let rhs_col = Matrix::from_flat(self.rows, 1, rhs.to_vec())?;
        let aug = self.hstack(&rhs_col);
        let ech = aug.rref();
        if ech.pivots.last() == Some(&self.cols) {
            return Err(Error::NoSolution);
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (row, &pc) in ech.pivots.iter().enumerate() {
            x[pc] = ech.matrix[(row, self.cols)].clone();
        }
        Ok(x)
    }

    /// Two-sided inverse of a square matrix.
    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(n));
        let ech = aug.rref();
        if ech.pivots.len() < n || ech.pivots.iter().take(n).enumerate().any(|(i, &c)| c != i) {
            return Err(Error::Singular);
        }
        let inv = Matrix::from_fn(n, n, |i, j| ech.matrix[(i, n + j)].clone());
        debug_assert!(self.mul(&inv) == Matrix::identity(n));
        debug_assert!(inv.mul(self) == Matrix::identity(n));
        Ok(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|e| e.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            seq.serialize_element(self.row(i))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vector> = Vec::deserialize(deserializer)?;
        Matrix::from_rows(rows).map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// Result of a reduced row echelon computation.
pub struct Echelon {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

/// Drops zero rows and exact duplicates; the RREF (hence any kernel) is
/// unchanged by this preprocessing.
pub fn compress_rows(rows: Vec<Vector>) -> Vec<Vector> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for row in rows {
        if row.iter().all(Rational::is_zero) {
            continue;
        }
        if seen.insert(row.clone()) {
            out.push(row);
        }
    }
    out
}

/// Canonical basis of the span of `rows`: the nonzero rows of the RREF.
pub fn row_space_canonical(rows: &[Vector]) -> Vec<Vector> {
    if rows.is_empty() {
        return Vec::new();
    }
    let m = Matrix::from_rows(compress_rows(rows.to_vec())).expect("rectangular rows");
    if m.rows() == 0 {
        return Vec::new();
    }
    let ech = m.rref();
    (0..ech.pivots.len()).map(|i| ech.matrix.row(i).to_vec()).collect()
}

/// Whether two families of vectors span the same subspace.
pub fn spans_equal(a: &[Vector], b: &[Vector]) -> bool {
    row_space_canonical(a) == row_space_canonical(b)
}

/// Pre-reduced span for repeated membership queries.
pub struct SpanChecker {
    reduced: Vec<Vector>,
    pivots: Vec<usize>,
}

impl SpanChecker {
    pub fn new(basis: &[Vector]) -> Self {
        let reduced = row_space_canonical(basis);
        let pivots = reduced
            .iter()
            .map(|row| row.iter().position(|e| !e.is_zero()).expect("nonzero row"))
            .collect();
        SpanChecker { reduced, pivots }
    }

    pub fn dim(&self) -> usize {
        self.reduced.len()
    }

    /// Whether `v` lies in the span.
    pub fn contains(&self, v: &[Rational]) -> bool {
        let mut v = v.to_vec();
        for (row, &p) in self.reduced.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (vi, ri) in v.iter_mut().zip(row) {
                if ri.is_zero() {
                    continue;
                }
                let t = &f * ri;
                *vi -= &t;
            }
        }
        v.iter().all(Rational::is_zero)
    }
}

/// `a + b` componentwise.
pub fn vec_add(a: &[Rational], b: &[Rational]) -> Vector {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// `a - b` componentwise.
pub fn vec_sub(a: &[Rational], b: &[Rational]) -> Vector {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_neg(a: &[Rational]) -> Vector {
    a.iter().map(|x| -x).collect()
}

pub fn vec_scale(a: &[Rational], c: &Rational) -> Vector {
    a.iter().map(|x| x * c).collect()
}

pub fn vec_is_zero(a: &[Rational]) -> bool {
    a.iter().all(Rational::is_zero)
}

pub fn zeros(n: usize) -> Vector {
    vec![Rational::zero(); n]
}

/// Standard basis vector `e_i` of length `n`.
pub fn unit_vec(n: usize, i: usize) -> Vector {
    let mut v = zeros(n);
    v[i] = Rational::one();
    v
}
