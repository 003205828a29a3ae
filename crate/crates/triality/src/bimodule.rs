//! Bimodules connecting two algebras, presented by action matrices.
//!
//! `left[i]` is the matrix of the action of the `i`-th basis element of the
//! left algebra on the module; `right[j]` likewise for the right algebra.
//! `validate` machine-checks that the left action is a unital homomorphism,
//! the right action a unital antihomomorphism (as operators), and that the
//! two actions commute.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::matrix::{compress_rows, Matrix, Vector};
use crate::rational::Rational;

/// An `(A, B)`-bimodule of dimension `dim`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bimodule {
    pub dim: usize,
    /// `left[i]` = action matrix of the `i`-th basis element of `A`.
    pub left: Vec<Matrix>,
    /// `right[j]` = action matrix of the `j`-th basis element of `B`.
    pub right: Vec<Matrix>,
}

/// A single violated identity found by `Bimodule::validate`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BimoduleDefect {
    Shape(String),
    LeftAction { i: usize, j: usize },
    RightAction { i: usize, j: usize },
    LeftUnit,
    RightUnit,
    ActionsDontCommute { i: usize, j: usize },
}

impl fmt::Display for BimoduleDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BimoduleDefect::Shape(s) => write!(f, "shape: {s}"),
            BimoduleDefect::LeftAction { i, j } => {
                write!(f, "lambda(e{i})lambda(e{j}) != lambda(e{i}*e{j})")
            }
            BimoduleDefect::RightAction { i, j } => {
                write!(f, "rho(f{i}*f{j}) != rho(f{j})rho(f{i})")
            }
            BimoduleDefect::LeftUnit => write!(f, "lambda(1) != id"),
            BimoduleDefect::RightUnit => write!(f, "rho(1) != id"),
            BimoduleDefect::ActionsDontCommute { i, j } => {
                write!(f, "lambda(e{i}) and rho(f{j}) do not commute")
            }
        }
    }
}

impl Bimodule {
    /// The regular bimodule of an algebra over itself: left and right actions
    /// are left and right multiplication.
    pub fn regular(a: &Algebra) -> Bimodule {
        let left = (0..a.dim)
            .map(|i| a.left_op(&a.basis_element(i)).expect("basis element"))
            .collect();
        let right = (0..a.dim)
            .map(|j| a.right_op(&a.basis_element(j)).expect("basis element"))
            .collect();
        Bimodule {
            dim: a.dim,
            left,
            right,
        }
    }

    /// Checks all bimodule identities on basis elements.
    pub fn validate(&self, a: &Algebra, b: &Algebra) -> std::result::Result<(), Vec<BimoduleDefect>> {
        let m = self.dim;
        let mut defects = Vec::new();
        if m == 0 {
            defects.push(BimoduleDefect::Shape("dimension must be at least 1".into()));
        }
        if self.left.len() != a.dim || self.right.len() != b.dim {
            defects.push(BimoduleDefect::Shape(format!(
                "{} left and {} right action matrices for algebras of dimension {} and {}",
                self.left.len(),
                self.right.len(),
                a.dim,
                b.dim
            )));
        }
        if self
            .left
            .iter()
            .chain(self.right.iter())
            .any(|mat| mat.rows() != m || mat.cols() != m)
        {
            defects.push(BimoduleDefect::Shape(format!("action matrices must be {m} x {m}")));
        }
        if !defects.is_empty() {
            return Err(defects);
        }
        if self.lambda(&a.unit).expect("unit length") != Matrix::identity(m) {
            defects.push(BimoduleDefect::LeftUnit);
        }
        if self.rho(&b.unit).expect("unit length") != Matrix::identity(m) {
            defects.push(BimoduleDefect::RightUnit);
        }
        for i in 0..a.dim {
            for j in 0..a.dim {
                let lhs = self.left[i].mul(&self.left[j]);
                let rhs = self.lambda(&a.table[i][j]).expect("table row length");
                if lhs != rhs {
                    defects.push(BimoduleDefect::LeftAction { i, j });
                }
            }
        }
        for i in 0..b.dim {
            for j in 0..b.dim {
                // rho reverses products: rho(f_i f_j) = rho(f_j) rho(f_i).
                let lhs = self.rho(&b.table[i][j]).expect("table row length");
                let rhs = self.right[j].mul(&self.right[i]);
                if lhs != rhs {
                    defects.push(BimoduleDefect::RightAction { i, j });
                }
            }
        }
        for i in 0..a.dim {
            for j in 0..b.dim {
                if self.left[i].mul(&self.right[j]) != self.right[j].mul(&self.left[i]) {
                    defects.push(BimoduleDefect::ActionsDontCommute { i, j });
                }
            }
        }
        if defects.is_empty() {
            Ok(())
        } else {
            Err(defects)
        }
    }

    /// `validate` folded into the crate error type.
    pub fn validated(self, a: &Algebra, b: &Algebra) -> Result<Bimodule> {
        match self.validate(a, b) {
            Ok(()) => Ok(self),
            Err(defects) => {
                let shown: Vec<String> = defects.iter().take(4).map(|d| d.to_string()).collect();
                Err(Error::InvalidBimodule(shown.join("; ")))
            }
        }
    }

    /// Action matrix of a left-algebra element.
    pub fn lambda(&self, a_coords: &[Rational]) -> Result<Matrix> {
        if a_coords.len() != self.left.len() {
            return Err(Error::DimensionMismatch(format!(
                "left element has {} coordinates, expected {}",
                a_coords.len(),
                self.left.len()
            )));
        }
        let mut out = Matrix::zeros(self.dim, self.dim);
        for (ai, mat) in a_coords.iter().zip(&self.left) {
            if ai.is_zero() {
                continue;
            }
            out = out.add(&mat.scale(ai));
        }
        Ok(out)
    }

    /// Action matrix of a right-algebra element.
    pub fn rho(&self, b_coords: &[Rational]) -> Result<Matrix> {
        if b_coords.len() != self.right.len() {
            return Err(Error::DimensionMismatch(format!(
                "right element has {} coordinates, expected {}",
                b_coords.len(),
                self.right.len()
            )));
        }
        let mut out = Matrix::zeros(self.dim, self.dim);
        for (bj, mat) in b_coords.iter().zip(&self.right) {
            if bj.is_zero() {
                continue;
            }
            out = out.add(&mat.scale(bj));
        }
        Ok(out)
    }

    /// `a * m` for a left-algebra element.
    pub fn act_left(&self, a_coords: &[Rational], m: &[Rational]) -> Result<Vector> {
        Ok(self.lambda(a_coords)?.mul_vec(m))
    }

    /// `m * b` for a right-algebra element.
    pub fn act_right(&self, m: &[Rational], b_coords: &[Rational]) -> Result<Vector> {
        Ok(self.rho(b_coords)?.mul_vec(m))
    }

    /// Whether the left and right actions are faithful, i.e. have trivial
    /// annihilators in their respective algebras.
    pub fn is_faithful(&self) -> (bool, bool) {
        (
            action_kernel_is_trivial(&self.left),
            action_kernel_is_trivial(&self.right),
        )
    }
}

fn action_kernel_is_trivial(mats: &[Matrix]) -> bool {
    let n = mats.len();
    if n == 0 {
        return true;
    }
    let m = mats[0].rows();
    // Rows indexed by matrix position (r, c); unknowns are the combination
    // coefficients over the acting algebra.
    let mut rows = Vec::with_capacity(m * m);
    for r in 0..m {
        for c in 0..m {
            let row: Vector = mats.iter().map(|mat| mat[(r, c)].clone()).collect();
            rows.push(row);
        }
    }
    let rows = compress_rows(rows);
    if rows.is_empty() {
        return false;
    }
    Matrix::from_rows(rows)
        .expect("rectangular rows")
        .kernel()
        .is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::unit_vec;

    #[test]
    fn regular_bimodule_validates_and_is_faithful() {
        for a in [
            Algebra::upper_triangular(2),
            Algebra::full_matrix(2),
            Algebra::truncated_polynomial(2),
        ] {
            let m = Bimodule::regular(&a);
            assert!(m.validate(&a, &a).is_ok());
            assert_eq!(m.is_faithful(), (true, true));
        }
    }

    #[test]
    fn detects_broken_left_unit() {
        let a = Algebra::rationals();
        let mut m = Bimodule::regular(&a);
        m.left[0] = Matrix::zeros(1, 1);
        let defects = m.validate(&a, &a).unwrap_err();
        assert!(defects.iter().any(|d| matches!(d, BimoduleDefect::LeftUnit)));
    }

    #[test]
    fn non_faithful_left_action() {
        // Q x Q acting on Q through the first coordinate; right action of Q is
        // honest multiplication.
        let a = Algebra::rationals().direct_product(&Algebra::rationals());
        let b = Algebra::rationals();
        let m = Bimodule {
            dim: 1,
            left: vec![Matrix::identity(1), Matrix::zeros(1, 1)],
            right: vec![Matrix::identity(1)],
        };
        assert!(m.validate(&a, &b).is_ok());
        assert_eq!(m.is_faithful(), (false, true));
    }

    #[test]
    fn action_compatibility() {
        let a = Algebra::upper_triangular(2);
        let m = Bimodule::regular(&a);
        let x = unit_vec(3, 0);
        let y = unit_vec(3, 2);
        let v = unit_vec(3, 1);
        // (a m) b = a (m b)
        let lhs = m.act_right(&m.act_left(&x, &v).unwrap(), &y).unwrap();
        let rhs = m.act_left(&x, &m.act_right(&v, &y).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }
}
