//! Finite-dimensional unital associative algebras over the rationals,
//! presented by structure constants.
//!
//! `table[i][j]` holds the coordinates of the basis product `e_i * e_j`, so an
//! algebra is exactly the data `(dim, basis labels, unit coordinates, table)`.
//! `validate` machine-checks associativity and unitality on all basis tuples.

use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{unit_vec, zeros, Matrix, Vector};
use crate::rational::Rational;

/// A structure-constant presentation of a unital associative algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Algebra {
    pub dim: usize,
    /// Display labels for the basis; never semantically significant.
    pub basis: Vec<String>,
    /// Coordinates of the multiplicative unit.
    pub unit: Vector,
    /// `table[i][j]` = coordinates of `e_i * e_j`.
    pub table: Vec<Vec<Vector>>,
}

/// A single violated identity found by `Algebra::validate`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraDefect {
    Shape(String),
    Associativity { i: usize, j: usize, k: usize },
    LeftUnit { i: usize },
    RightUnit { i: usize },
}

impl fmt::Display for AlgebraDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraDefect::Shape(s) => write!(f, "shape: {s}"),
            AlgebraDefect::Associativity { i, j, k } => {
                write!(f, "(e{i}*e{j})*e{k} != e{i}*(e{j}*e{k})")
            }
            AlgebraDefect::LeftUnit { i } => write!(f, "1*e{i} != e{i}"),
            AlgebraDefect::RightUnit { i } => write!(f, "e{i}*1 != e{i}"),
        }
    }
}

impl Algebra {
    /// Checks the shape of the table, associativity on all basis triples, and
    /// two-sided unitality; returns every violated identity.
    pub fn validate(&self) -> std::result::Result<(), Vec<AlgebraDefect>> {
        let n = self.dim;
        let mut defects = Vec::new();
        if n == 0 {
            defects.push(AlgebraDefect::Shape("dimension must be at least 1".into()));
        }
        if self.basis.len() != n {
            defects.push(AlgebraDefect::Shape(format!(
                "{} basis labels for dimension {n}",
                self.basis.len()
            )));
        }
        if self.unit.len() != n {
            defects.push(AlgebraDefect::Shape(format!(
                "unit has {} coordinates for dimension {n}",
                self.unit.len()
            )));
        }
        let table_ok = self.table.len() == n
            && self
                .table
                .iter()
                .all(|row| row.len() == n && row.iter().all(|e| e.len() == n));
        if !table_ok {
            defects.push(AlgebraDefect::Shape("table is not dim x dim x dim".into()));
            return Err(defects);
        }
        if !defects.is_empty() {
            return Err(defects);
        }
        for i in 0..n {
            let left = self.mul(&self.unit, &unit_vec(n, i)).expect("shapes checked");
            if left != unit_vec(n, i) {
                defects.push(AlgebraDefect::LeftUnit { i });
            }
            let right = self.mul(&unit_vec(n, i), &self.unit).expect("shapes checked");
            if right != unit_vec(n, i) {
                defects.push(AlgebraDefect::RightUnit { i });
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let ij_k = self
                        .mul(&self.table[i][j], &unit_vec(n, k))
                        .expect("shapes checked");
                    let i_jk = self
                        .mul(&unit_vec(n, i), &self.table[j][k])
                        .expect("shapes checked");
                    if ij_k != i_jk {
                        defects.push(AlgebraDefect::Associativity { i, j, k });
                    }
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
    pub fn validated(self) -> Result<Algebra> {
        match self.validate() {
            Ok(()) => Ok(self),
            Err(defects) => {
                let shown: Vec<String> = defects.iter().take(4).map(|d| d.to_string()).collect();
                let more = defects.len().saturating_sub(4);
                let suffix = if more > 0 { format!(" (+{more} more)") } else { String::new() };
                Err(Error::InvalidAlgebra(format!("{}{}", shown.join("; "), suffix)))
            }
        }
    }

    pub fn unit_element(&self) -> Vector {
        self.unit.clone()
    }

    pub fn basis_element(&self, i: usize) -> Vector {
        unit_vec(self.dim, i)
    }

    fn check_len(&self, x: &[Rational]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "element has {} coordinates, algebra has dimension {}",
                x.len(),
                self.dim
            )));
        }
        Ok(())
    }

    /// Product of two elements given by coordinates.
    pub fn mul(&self, x: &[Rational], y: &[Rational]) -> Result<Vector> {
        self.check_len(x)?;
        self.check_len(y)?;
        let mut out = zeros(self.dim);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi * yj;
                for (k, t) in self.table[i][j].iter().enumerate() {
                    if t.is_zero() {
                        continue;
                    }
                    let add = &c * t;
                    out[k] += &add;
                }
            }
        }
        Ok(out)
    }

    /// Product of several elements, left to right.
    pub fn mul_all(&self, xs: &[&[Rational]]) -> Result<Vector> {
        let mut acc = self.unit_element();
        for x in xs {
            acc = self.mul(&acc, x)?;
        }
        Ok(acc)
    }

    /// Matrix of left multiplication `y -> x*y`.
    pub fn left_op(&self, x: &[Rational]) -> Result<Matrix> {
        self.check_len(x)?;
        let n = self.dim;
        let mut m = Matrix::zeros(n, n);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for j in 0..n {
                for (k, t) in self.table[i][j].iter().enumerate() {
                    if t.is_zero() {
                        continue;
                    }
                    let add = xi * t;
                    m[(k, j)] += &add;
                }
            }
        }
        Ok(m)
    }

    /// Matrix of right multiplication `x -> x*y`.
    pub fn right_op(&self, y: &[Rational]) -> Result<Matrix> {
        self.check_len(y)?;
        let n = self.dim;
        let mut m = Matrix::zeros(n, n);
        for (j, yj) in y.iter().enumerate() {
            if yj.is_zero() {
                continue;
            }
            for i in 0..n {
                for (k, t) in self.table[i][j].iter().enumerate() {
                    if t.is_zero() {
                        continue;
                    }
                    let add = yj * t;
                    m[(k, i)] += &add;
                }
            }
        }
        Ok(m)
    }

    /// Two-sided inverse of an element, found by solving `x*z = 1` and then
    /// verifying `z*x = 1` as well.
    pub fn invert_element(&self, x: &[Rational]) -> Result<Vector> {
        self.check_len(x)?;
        let l = self.left_op(x)?;
        let z = l.solve(&self.unit).map_err(|_| Error::NotInvertible)?;
        if self.mul(&z, x)? != self.unit {
            return Err(Error::NotInvertible);
        }
        Ok(z)
    }

    pub fn is_invertible_element(&self, x: &[Rational]) -> bool {
        self.invert_element(x).is_ok()
    }

    /// Canonical basis of the center, computed as the kernel of the stacked
    /// commutator system `z*e_i - e_i*z = 0`.
    pub fn center(&self) -> Vec<Vector> {
        let n = self.dim;
        let mut rows = Vec::with_capacity(n * n);
        for i in 0..n {
            for k in 0..n {
                let mut row = zeros(n);
                for r in 0..n {
                    row[r] = &self.table[i][r][k] - &self.table[r][i][k];
                }
                rows.push(row);
            }
        }
        let rows = crate::matrix::compress_rows(rows);
        if rows.is_empty() {
            // Commutative algebra: the center is everything.
            return (0..n).map(|i| unit_vec(n, i)).collect();
        }
        Matrix::from_rows(rows).expect("rectangular rows").kernel()
    }

    pub fn is_central(&self, z: &[Rational]) -> Result<bool> {
        Ok(self.left_op(z)? == self.right_op(z)?)
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| self.table[i][j] == self.table[j][i]))
    }

    /// The opposite algebra: same space, reversed multiplication.
    pub fn opposite(&self) -> Algebra {
        let n = self.dim;
        let table = (0..n)
            .map(|i| (0..n).map(|j| self.table[j][i].clone()).collect())
            .collect();
        Algebra {
            dim: n,
            basis: self.basis.clone(),
            unit: self.unit.clone(),
            table,
        }
    }

    /// Direct product with componentwise operations.
    pub fn direct_product(&self, other: &Algebra) -> Algebra {
        let n = self.dim + other.dim;
        let mut table = vec![vec![zeros(n); n]; n];
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    table[i][j][k] = self.table[i][j][k].clone();
                }
            }
        }
        for i in 0..other.dim {
            for j in 0..other.dim {
                for k in 0..other.dim {
                    table[self.dim + i][self.dim + j][self.dim + k] = other.table[i][j][k].clone();
                }
            }
        }
        let mut unit = self.unit.clone();
        unit.extend(other.unit.iter().cloned());
        let basis = self
            .basis
            .iter()
            .map(|s| format!("a.{s}"))
            .chain(other.basis.iter().map(|s| format!("b.{s}")))
            .collect();
        Algebra {
            dim: n,
            basis,
            unit,
            table,
        }
    }

    /// Extension by a square-zero adjoined part:
    /// `(x + eps y)(x' + eps y') = x x' + eps (x y' + y x')`.
    pub fn dual_extension(&self) -> DualExtension {
        let n = self.dim;
        let dim = 2 * n;
        let mut table = vec![vec![zeros(dim); dim]; dim];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let c = self.table[i][j][k].clone();
                    table[i][j][k] = c.clone();
                    table[i][n + j][n + k] = c.clone();
                    table[n + i][j][n + k] = c;
                }
            }
        }
        let mut unit = self.unit.clone();
        unit.extend(zeros(n));
        let basis = self
            .basis
            .iter()
            .cloned()
            .chain(self.basis.iter().map(|s| format!("eps_{s}")))
            .collect();
        DualExtension {
            algebra: Algebra {
                dim,
                basis,
                unit,
                table,
            },
            eps_range: n..dim,
        }
    }

    /// The algebra of upper triangular `n x n` rational matrices.
    pub fn upper_triangular(n: usize) -> Algebra {
        assert!(n >= 1);
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i..n).map(move |j| (i, j)))
            .collect();
        Self::from_matrix_units(n, pairs)
    }

    /// The full matrix algebra of `n x n` rational matrices.
    pub fn full_matrix(n: usize) -> Algebra {
        assert!(n >= 1);
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .collect();
        Self::from_matrix_units(n, pairs)
    }

    fn from_matrix_units(n: usize, pairs: Vec<(usize, usize)>) -> Algebra {
        let dim = pairs.len();
        let index = |p: (usize, usize)| pairs.iter().position(|&q| q == p);
        let mut table = vec![vec![zeros(dim); dim]; dim];
        for (a, &(i, j)) in pairs.iter().enumerate() {
            for (b, &(k, l)) in pairs.iter().enumerate() {
                if j == k {
                    if let Some(c) = index((i, l)) {
                        table[a][b][c] = Rational::one();
                    }
                }
            }
        }
        let mut unit = zeros(dim);
        for i in 0..n {
            unit[index((i, i)).expect("diagonal unit present")] = Rational::one();
        }
        let basis = pairs
            .iter()
            .map(|&(i, j)| format!("e{}{}", i + 1, j + 1))
            .collect();
        Algebra {
            dim,
            basis,
            unit,
            table,
        }
    }

    /// The truncated polynomial algebra `Q[x]/(x^n)`.
    pub fn truncated_polynomial(n: usize) -> Algebra {
        assert!(n >= 1);
        let mut table = vec![vec![zeros(n); n]; n];
        for i in 0..n {
            for j in 0..n {
                if i + j < n {
                    table[i][j][i + j] = Rational::one();
                }
            }
        }
        let basis = (0..n)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            })
            .collect();
        Algebra {
            dim: n,
            basis,
            unit: unit_vec(n, 0),
            table,
        }
    }

    /// The rationals as a one-dimensional algebra.
    pub fn rationals() -> Algebra {
        Algebra::truncated_polynomial(1)
    }
}

/// A dual-extension algebra together with the coordinate range of its
/// square-zero part.
#[derive(Clone)]
pub struct DualExtension {
    pub algebra: Algebra,
    pub eps_range: Range<usize>,
}

impl DualExtension {
    /// Base dimension `n`; coordinates `0..n` are the original algebra and
    /// `n..2n` the square-zero part.
    pub fn base_dim(&self) -> usize {
        self.eps_range.start
    }
}

/// True when the tables agree entry by entry (labels are ignored by design).
pub fn same_table(a: &Algebra, b: &Algebra) -> bool {
    a.dim == b.dim && a.unit == b.unit && a.table == b.table
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::vec_is_zero;
    use proptest::prelude::*;

    fn t2() -> Algebra {
        Algebra::upper_triangular(2)
    }

    #[test]
    fn presets_validate() {
        for a in [
            Algebra::upper_triangular(2),
            Algebra::upper_triangular(3),
            Algebra::full_matrix(2),
            Algebra::truncated_polynomial(2),
            Algebra::truncated_polynomial(4),
            Algebra::rationals(),
        ] {
            assert!(a.validate().is_ok(), "{:?} failed", a.basis);
        }
    }

    #[test]
    fn preset_dimensions() {
        assert_eq!(Algebra::upper_triangular(2).dim, 3);
        assert_eq!(Algebra::upper_triangular(3).dim, 6);
        assert_eq!(Algebra::full_matrix(2).dim, 4);
        assert_eq!(Algebra::full_matrix(3).dim, 9);
        assert_eq!(Algebra::truncated_polynomial(2).dim, 2);
    }

    #[test]
    fn validate_reports_unit_violation() {
        // dim 2, e0*e0 = e1, declared unit e0: then e0*e0 != e0.
        let mut table = vec![vec![zeros(2); 2]; 2];
        table[0][0][1] = Rational::one();
        let bad = Algebra {
            dim: 2,
            basis: vec!["u".into(), "v".into()],
            unit: unit_vec(2, 0),
            table,
        };
        let defects = bad.validate().unwrap_err();
        assert!(defects
            .iter()
            .any(|d| matches!(d, AlgebraDefect::LeftUnit { .. } | AlgebraDefect::RightUnit { .. })));
    }

    #[test]
    fn validate_reports_associativity_violation() {
        // Start from Q[x]/(x^3) and corrupt x*x.
        let mut a = Algebra::truncated_polynomial(3);
        a.table[1][1][2] = Rational::zero();
        a.table[1][1][0] = Rational::one();
        let defects = a.validate().unwrap_err();
        assert!(defects
            .iter()
            .any(|d| matches!(d, AlgebraDefect::Associativity { .. })));
    }

    #[test]
    fn t2_products() {
        let a = t2();
        // basis order: e11, e12, e22
        let e11 = a.basis_element(0);
        let e12 = a.basis_element(1);
        let e22 = a.basis_element(2);
        assert_eq!(a.mul(&e11, &e12).unwrap(), e12);
        assert_eq!(a.mul(&e12, &e11).unwrap(), zeros(3));
        assert_eq!(a.mul(&e12, &e22).unwrap(), e12);
        assert_eq!(a.mul(&e22, &e12).unwrap(), zeros(3));
        assert_eq!(a.unit, vec![Rational::one(), Rational::zero(), Rational::one()]);
    }

    #[test]
    fn left_right_ops_represent_multiplication() {
        let a = t2();
        let x: Vector = vec![Rational::from_int(2), Rational::from_int(-1), Rational::from_int(3)];
        let y: Vector = vec![Rational::from_int(1), Rational::from_int(4), Rational::from_int(-2)];
        assert_eq!(a.left_op(&x).unwrap().mul_vec(&y), a.mul(&x, &y).unwrap());
        assert_eq!(a.right_op(&y).unwrap().mul_vec(&x), a.mul(&x, &y).unwrap());
    }

    #[test]
    fn inversion_examples() {
        let a = t2();
        assert_eq!(a.invert_element(&a.unit).unwrap(), a.unit);
        // (e11 + e12 + e22)^{-1} = e11 - e12 + e22
        let x: Vector = vec![Rational::one(), Rational::one(), Rational::one()];
        let expect: Vector = vec![Rational::one(), -Rational::one(), Rational::one()];
        assert_eq!(a.invert_element(&x).unwrap(), expect);
        let e12 = a.basis_element(1);
        assert_eq!(a.invert_element(&e12).unwrap_err(), Error::NotInvertible);
    }

    #[test]
    fn center_dimensions() {
        // Oracle: every returned vector commutes with every basis element, and
        // the count matches the nullity of the commutator system.
        for (a, expect) in [
            (t2(), 1),
            (Algebra::full_matrix(2), 1),
            (Algebra::truncated_polynomial(2), 2),
        ] {
            let z = a.center();
            assert_eq!(z.len(), expect);
            for v in &z {
                assert!(a.is_central(v).unwrap());
            }
        }
    }

    #[test]
    fn opposite_and_products() {
        let a = t2();
        let op = a.opposite();
        assert!(op.validate().is_ok());
        let x = a.basis_element(0);
        let y = a.basis_element(1);
        assert_eq!(op.mul(&x, &y).unwrap(), a.mul(&y, &x).unwrap());
        // Commutative algebras are their own opposite.
        let d = Algebra::truncated_polynomial(3);
        assert!(same_table(&d, &d.opposite()));

        let p = a.direct_product(&Algebra::rationals());
        assert_eq!(p.dim, 4);
        assert!(p.validate().is_ok());
    }

    #[test]
    fn dual_extension_structure() {
        let d = Algebra::rationals().dual_extension();
        assert_eq!(d.algebra.dim, 2);
        assert!(d.algebra.validate().is_ok());
        assert_eq!(d.eps_range, 1..2);
        // Same table as Q[x]/(x^2), labels aside.
        assert!(same_table(&d.algebra, &Algebra::truncated_polynomial(2)));

        let dt = t2().dual_extension();
        assert!(dt.algebra.validate().is_ok());
        // The adjoined part squares to zero.
        for i in dt.eps_range.clone() {
            for j in dt.eps_range.clone() {
                assert!(vec_is_zero(&dt.algebra.table[i][j]));
            }
        }
    }

    fn preset() -> impl Strategy<Value = Algebra> {
        prop_oneof![
            Just(Algebra::upper_triangular(2)),
            Just(Algebra::full_matrix(2)),
            Just(Algebra::truncated_polynomial(2)),
            Just(Algebra::truncated_polynomial(3)),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn multiplication_operators_commute(a in preset(), xs in proptest::collection::vec(-3i64..=3, 16), ys in proptest::collection::vec(-3i64..=3, 16)) {
            let x: Vector = (0..a.dim).map(|i| Rational::from_int(xs[i])).collect();
            let y: Vector = (0..a.dim).map(|i| Rational::from_int(ys[i])).collect();
            let l = a.left_op(&x).unwrap();
            let r = a.right_op(&y).unwrap();
            // Associativity in operator form: L_x R_y = R_y L_x.
            prop_assert_eq!(l.mul(&r), r.mul(&l));
        }

        #[test]
        fn element_products_associate(a in preset(), xs in proptest::collection::vec(-3i64..=3, 48)) {
            let n = a.dim;
            let x: Vector = (0..n).map(|i| Rational::from_int(xs[i])).collect();
            let y: Vector = (0..n).map(|i| Rational::from_int(xs[n + i])).collect();
            let z: Vector = (0..n).map(|i| Rational::from_int(xs[2 * n + i])).collect();
            let xy_z = a.mul(&a.mul(&x, &y).unwrap(), &z).unwrap();
            let x_yz = a.mul(&x, &a.mul(&y, &z).unwrap()).unwrap();
            prop_assert_eq!(xy_z, x_yz);
        }
    }
}
