//! Ternary derivations and ternary automorphisms of an algebra.
//!
//! A ternary derivation is a triple `(d1, d2, d3)` of linear maps with
//! `d1(xy) = d2(x)y + x d3(y)`; a ternary automorphism is a triple of
//! invertible maps with `s1(xy) = s2(x) s3(y)`. Spaces are computed exactly as
//! kernels of the assembled bilinear identity over all basis pairs, with the
//! unknowns ordered `(d1 entries, d2 entries, d3 entries)` row-major, so the
//! returned bases are canonical.

use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, DualExtension};
use crate::error::{Error, Result};
use crate::matrix::{
    compress_rows, row_space_canonical, unit_vec, vec_add, vec_is_zero, vec_sub, zeros, Matrix,
    Vector,
};
use crate::rational::Rational;

/// A triple of linear endomorphisms of one algebra.
///
/// Serializes under keys `d1`, `d2`, `d3`; deserialization also accepts
/// `s1`, `s2`, `s3` for automorphism candidates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TernaryTriple {
    pub d1: Matrix,
    pub d2: Matrix,
    pub d3: Matrix,
}

impl<'de> Deserialize<'de> for TernaryTriple {
    fn deserialize<D>(deserializer: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        use serde::de::Error as _;
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            d1: Option<Matrix>,
            d2: Option<Matrix>,
            d3: Option<Matrix>,
            s1: Option<Matrix>,
            s2: Option<Matrix>,
            s3: Option<Matrix>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let has_d = raw.d1.is_some() || raw.d2.is_some() || raw.d3.is_some();
        let has_s = raw.s1.is_some() || raw.s2.is_some() || raw.s3.is_some();
        if has_d && has_s {
            return Err(D::Error::custom("mix of d1/d2/d3 and s1/s2/s3 keys"));
        }
        let (c1, c2, c3) = if has_s {
            (raw.s1, raw.s2, raw.s3)
        } else {
            (raw.d1, raw.d2, raw.d3)
        };
        let missing = || D::Error::custom("a triple needs components d1,d2,d3 or s1,s2,s3");
        TernaryTriple::new(
            c1.ok_or_else(missing)?,
            c2.ok_or_else(missing)?,
            c3.ok_or_else(missing)?,
        )
        .map_err(|e| D::Error::custom(e.to_string()))
    }
}

impl TernaryTriple {
    pub fn new(d1: Matrix, d2: Matrix, d3: Matrix) -> Result<Self> {
        let n = d1.rows();
        for m in [&d1, &d2, &d3] {
            if !m.is_square() || m.rows() != n {
                return Err(Error::DimensionMismatch(
                    "triple components must be square matrices of equal size".into(),
                ));
            }
        }
        Ok(TernaryTriple { d1, d2, d3 })
    }

    pub fn dim(&self) -> usize {
        self.d1.rows()
    }

    pub fn zero(n: usize) -> Self {
        TernaryTriple {
            d1: Matrix::zeros(n, n),
            d2: Matrix::zeros(n, n),
            d3: Matrix::zeros(n, n),
        }
    }

    /// Flat vector `(d1 | d2 | d3)`, each block row-major.
    pub fn to_flat(&self) -> Vector {
        let mut v = self.d1.to_flat();
        v.extend(self.d2.to_flat());
        v.extend(self.d3.to_flat());
        v
    }

    pub fn from_flat(n: usize, v: &[Rational]) -> Result<Self> {
        if v.len() != 3 * n * n {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries, got {}",
                3 * n * n,
                v.len()
            )));
        }
        Ok(TernaryTriple {
            d1: Matrix::from_flat(n, n, v[..n * n].to_vec())?,
            d2: Matrix::from_flat(n, n, v[n * n..2 * n * n].to_vec())?,
            d3: Matrix::from_flat(n, n, v[2 * n * n..].to_vec())?,
        })
    }

    pub fn add(&self, other: &TernaryTriple) -> TernaryTriple {
        TernaryTriple {
            d1: self.d1.add(&other.d1),
            d2: self.d2.add(&other.d2),
            d3: self.d3.add(&other.d3),
        }
    }

    pub fn scale(&self, c: &Rational) -> TernaryTriple {
        TernaryTriple {
            d1: self.d1.scale(c),
            d2: self.d2.scale(c),
            d3: self.d3.scale(c),
        }
    }

    /// Componentwise commutator `[s, t] = (s1 t1 - t1 s1, ...)`.
    pub fn bracket(&self, other: &TernaryTriple) -> TernaryTriple {
        let comm = |a: &Matrix, b: &Matrix| a.mul(b).sub(&b.mul(a));
        TernaryTriple {
            d1: comm(&self.d1, &other.d1),
            d2: comm(&self.d2, &other.d2),
            d3: comm(&self.d3, &other.d3),
        }
    }
}

/// Which component of a triple an operation targets.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Component {
    First,
    Second,
    Third,
}

impl Component {
    pub fn from_index(i: usize) -> Result<Self> {
        match i {
            1 => Ok(Component::First),
            2 => Ok(Component::Second),
            3 => Ok(Component::Third),
            _ => Err(Error::Parse(format!("component must be 1, 2 or 3, got {i}"))),
        }
    }
}

/// A derivation decomposed as `(d + L_x + R_y, d + L_x, d + R_y)`.
#[derive(Clone, Debug, Serialize)]
pub struct TerDerDecomposition {
    pub d: Matrix,
    pub x: Vector,
    pub y: Vector,
}

/// An automorphism decomposed as `(R_y L_x s, L_x s, R_y s)`.
#[derive(Clone, Debug, Serialize)]
pub struct TerAutDecomposition {
    pub sigma: Matrix,
    pub x: Vector,
    pub y: Vector,
}

/// Witness `(a, b, c)` that a triple equals `(L_a + R_b, L_a + R_c, -L_c + R_b)`.
#[derive(Clone, Debug, Serialize)]
pub struct InnerTerDerWitness {
    pub a: Vector,
    pub b: Vector,
    pub c: Vector,
}

fn check_triple_dim(a: &Algebra, t: &TernaryTriple) -> Result<()> {
    if t.dim() != a.dim {
        return Err(Error::DimensionMismatch(format!(
            "triple acts on dimension {}, algebra has dimension {}",
            t.dim(),
            a.dim
        )));
    }
    Ok(())
}

fn check_endo_dim(a: &Algebra, d: &Matrix) -> Result<()> {
    if !d.is_square() || d.rows() != a.dim {
        return Err(Error::DimensionMismatch(format!(
            "endomorphism must be {0} x {0}",
            a.dim
        )));
    }
    Ok(())
}

/// Whether `d1(e_i e_j) = d2(e_i) e_j + e_i d3(e_j)` for all basis pairs.
pub fn is_terder(a: &Algebra, t: &TernaryTriple) -> bool {
    if check_triple_dim(a, t).is_err() {
        return false;
    }
    let n = a.dim;
    for i in 0..n {
        for j in 0..n {
            let lhs = t.d1.mul_vec(&a.table[i][j]);
            let d2i = t.d2.column(i);
            let d3j = t.d3.column(j);
            let rhs = vec_add(
                &a.mul(&d2i, &unit_vec(n, j)).expect("sizes"),
                &a.mul(&unit_vec(n, i), &d3j).expect("sizes"),
            );
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// Whether all three maps are invertible and `s1(e_i e_j) = s2(e_i) s3(e_j)`
/// for all basis pairs.
pub fn is_terauto(a: &Algebra, t: &TernaryTriple) -> bool {
    if check_triple_dim(a, t).is_err() {
        return false;
    }
    if ![&t.d1, &t.d2, &t.d3].iter().all(|m| m.is_invertible()) {
        return false;
    }
    let n = a.dim;
    for i in 0..n {
        for j in 0..n {
            let lhs = t.d1.mul_vec(&a.table[i][j]);
            let rhs = a
                .mul(&t.d2.column(i), &t.d3.column(j))
                .expect("sizes");
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// Whether `s` is a unital algebra automorphism.
pub fn is_automorphism(a: &Algebra, s: &Matrix) -> bool {
    if check_endo_dim(a, s).is_err() || !s.is_invertible() {
        return false;
    }
    if s.mul_vec(&a.unit) != a.unit {
        return false;
    }
    let n = a.dim;
    for i in 0..n {
        for j in 0..n {
            let lhs = s.mul_vec(&a.table[i][j]);
            let rhs = a.mul(&s.column(i), &s.column(j)).expect("sizes");
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// Whether `d(e_i e_j) = d(e_i) e_j + e_i d(e_j)` for all basis pairs.
pub fn is_derivation(a: &Algebra, d: &Matrix) -> bool {
    if check_endo_dim(a, d).is_err() {
        return false;
    }
    leibniz_defect(a, d)
        .iter()
        .all(|row| row.iter().all(|v| vec_is_zero(v)))
}

/// Rows of the Leibniz system for a single unknown endomorphism; the kernel of
/// the stacked matrix is the derivation space.
pub(crate) fn leibniz_rows(a: &Algebra) -> Vec<Vector> {
    let n = a.dim;
    let mut rows = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut row = zeros(n * n);
                for l in 0..n {
                    if !a.table[i][j][l].is_zero() {
                        row[k * n + l] += &a.table[i][j][l];
                    }
                }
                for r in 0..n {
                    if !a.table[r][j][k].is_zero() {
                        row[r * n + i] -= &a.table[r][j][k];
                    }
                    if !a.table[i][r][k].is_zero() {
                        row[r * n + j] -= &a.table[i][r][k];
                    }
                }
                rows.push(row);
            }
        }
    }
    rows
}

/// Canonical basis of the derivation space.
pub fn derivation_space(a: &Algebra) -> Vec<Matrix> {
    let n = a.dim;
    let rows = compress_rows(leibniz_rows(a));
    let kernel = if rows.is_empty() {
        (0..n * n).map(|i| unit_vec(n * n, i)).collect()
    } else {
        Matrix::from_rows(rows).expect("rectangular rows").kernel()
    };
    kernel
        .into_iter()
        .map(|v| Matrix::from_flat(n, n, v).expect("length"))
        .collect()
}

/// Rows of the three-unknown Leibniz system `d1(e_i e_j) = d2(e_i) e_j + e_i d3(e_j)`.
fn terder_rows(a: &Algebra) -> Vec<Vector> {
    let n = a.dim;
    let nn = n * n;
    let mut rows = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut row = zeros(3 * nn);
                for l in 0..n {
                    if !a.table[i][j][l].is_zero() {
                        row[k * n + l] += &a.table[i][j][l];
                    }
                }
                for r in 0..n {
                    if !a.table[r][j][k].is_zero() {
                        row[nn + r * n + i] -= &a.table[r][j][k];
                    }
                    if !a.table[i][r][k].is_zero() {
                        row[2 * nn + r * n + j] -= &a.table[i][r][k];
                    }
                }
                rows.push(row);
            }
        }
    }
    rows
}

fn kernel_triples(a: &Algebra, rows: Vec<Vector>) -> Vec<TernaryTriple> {
    let n = a.dim;
    let rows = compress_rows(rows);
    let kernel = if rows.is_empty() {
        (0..3 * n * n).map(|i| unit_vec(3 * n * n, i)).collect()
    } else {
        Matrix::from_rows(rows).expect("rectangular rows").kernel()
    };
    kernel
        .into_iter()
        .map(|v| TernaryTriple::from_flat(n, &v).expect("length"))
        .collect()
}

/// Canonical basis of the ternary derivation space.
pub fn terder_space(a: &Algebra) -> Vec<TernaryTriple> {
    kernel_triples(a, terder_rows(a))
}

/// Canonical basis of the ternary derivations whose given component vanishes.
pub fn terder_space_with_zero_component(a: &Algebra, pos: Component) -> Vec<TernaryTriple> {
    let n = a.dim;
    let nn = n * n;
    let offset = match pos {
        Component::First => 0,
        Component::Second => nn,
        Component::Third => 2 * nn,
    };
    let mut rows = terder_rows(a);
    for e in 0..nn {
        let mut row = zeros(3 * nn);
        row[offset + e] = Rational::one();
        rows.push(row);
    }
    kernel_triples(a, rows)
}

/// `L_u - R_u`, the commutator map `x -> u x - x u`.
pub fn ad(a: &Algebra, u: &[Rational]) -> Result<Matrix> {
    Ok(a.left_op(u)?.sub(&a.right_op(u)?))
}

/// Canonical basis of the inner derivations, the span of `ad(e_i)` over all
/// basis elements; its dimension is `dim(a) - dim Z(a)`.
pub fn inner_derivation_space(a: &Algebra) -> Vec<Matrix> {
    let n = a.dim;
    let gens: Vec<Vector> = (0..n)
        .map(|i| {
            ad(a, &a.basis_element(i))
                .expect("basis element has algebra dimension")
                .to_flat()
        })
        .collect();
    row_space_canonical(&gens)
        .into_iter()
        .map(|v| Matrix::from_flat(n, n, v).expect("length"))
        .collect()
}

/// The inner automorphism `x -> w x w^{-1}`.
pub fn inner_automorphism(a: &Algebra, w: &[Rational]) -> Result<Matrix> {
    let w_inv = a
        .invert_element(w)
        .map_err(|_| Error::ComponentNotInvertible)?;
    Ok(a.left_op(w)?.mul(&a.right_op(&w_inv)?))
}

/// `(d + L_x + R_y, d + L_x, d + R_y)` for a derivation `d`.
pub fn compose_terder(a: &Algebra, d: &Matrix, x: &[Rational], y: &[Rational]) -> Result<TernaryTriple> {
    check_endo_dim(a, d)?;
    if !is_derivation(a, d) {
        return Err(Error::NotADerivation);
    }
    let l = a.left_op(x)?;
    let r = a.right_op(y)?;
    Ok(TernaryTriple {
        d1: d.add(&l).add(&r),
        d2: d.add(&l),
        d3: d.add(&r),
    })
}

/// Splits a ternary derivation into `(d, x, y)` with
/// `t = (d + L_x + R_y, d + L_x, d + R_y)`, re-verifying that `d` is a
/// derivation rather than trusting the formula.
pub fn decompose_terder(a: &Algebra, t: &TernaryTriple) -> Result<TerDerDecomposition> {
    check_triple_dim(a, t)?;
    if !is_terder(a, t) {
        return Err(Error::NotATernaryDerivation);
    }
    let x = t.d2.mul_vec(&a.unit);
    let y = t.d3.mul_vec(&a.unit);
    let d = t.d2.sub(&a.left_op(&x)?);
    if !is_derivation(a, &d) {
        return Err(Error::NotATernaryDerivation);
    }
    let recomposed = compose_terder(a, &d, &x, &y)?;
    if &recomposed != t {
        return Err(Error::NotATernaryDerivation);
    }
    Ok(TerDerDecomposition { d, x, y })
}

/// `(R_y L_x s, L_x s, R_y s)` for an automorphism `s` and invertible `x`, `y`.
pub fn compose_terauto(a: &Algebra, sigma: &Matrix, x: &[Rational], y: &[Rational]) -> Result<TernaryTriple> {
    check_endo_dim(a, sigma)?;
    if !is_automorphism(a, sigma) {
        return Err(Error::NotAnAutomorphism);
    }
    if !a.is_invertible_element(x) || !a.is_invertible_element(y) {
        return Err(Error::ComponentNotInvertible);
    }
    let l = a.left_op(x)?;
    let r = a.right_op(y)?;
    Ok(TernaryTriple {
        d1: r.mul(&l).mul(sigma),
        d2: l.mul(sigma),
        d3: r.mul(sigma),
    })
}

/// Splits a ternary automorphism into `(sigma, x, y)` with
/// `t = (R_y L_x sigma, L_x sigma, R_y sigma)`, re-verifying that `sigma` is a
/// unital automorphism.
pub fn decompose_terauto(a: &Algebra, t: &TernaryTriple) -> Result<TerAutDecomposition> {
    check_triple_dim(a, t)?;
    if !is_terauto(a, t) {
        return Err(Error::NotATernaryAutomorphism);
    }
    let x = t.d2.mul_vec(&a.unit);
    let y = t.d3.mul_vec(&a.unit);
    let x_inv = a
        .invert_element(&x)
        .map_err(|_| Error::ComponentNotInvertible)?;
    let y_inv = a
        .invert_element(&y)
        .map_err(|_| Error::ComponentNotInvertible)?;
    let sigma = a.left_op(&x_inv)?.mul(&a.right_op(&y_inv)?).mul(&t.d1);
    if !is_automorphism(a, &sigma) {
        return Err(Error::NotATernaryAutomorphism);
    }
    let recomposed = compose_terauto(a, &sigma, &x, &y)?;
    if &recomposed != t {
        return Err(Error::NotATernaryAutomorphism);
    }
    Ok(TerAutDecomposition { sigma, x, y })
}

/// `(R_y L_x In(w), L_x In(w), R_y In(w))` for invertible `w`, `x`, `y`.
pub fn make_inner_terauto(
    a: &Algebra,
    w: &[Rational],
    x: &[Rational],
    y: &[Rational],
) -> Result<TernaryTriple> {
    let inner = inner_automorphism(a, w)?;
    compose_terauto(a, &inner, x, y)
}

/// Witness `z` with `d = R_z - L_z`, or `None` when `d` is not inner.
pub fn is_inner_derivation(a: &Algebra, d: &Matrix) -> Result<Option<Vector>> {
    check_endo_dim(a, d)?;
    if !is_derivation(a, d) {
        return Err(Error::NotADerivation);
    }
    let n = a.dim;
    let mut rows = Vec::with_capacity(n * n);
    let mut rhs = Vec::with_capacity(n * n);
    for j in 0..n {
        for k in 0..n {
            let mut row = zeros(n);
            for r in 0..n {
                row[r] = &a.table[j][r][k] - &a.table[r][j][k];
            }
            rows.push(row);
            rhs.push(d[(k, j)].clone());
        }
    }
    let m = Matrix::from_rows(rows).expect("rectangular rows");
    match m.solve(&rhs) {
        Ok(z) => {
            let check = a.right_op(&z)?.sub(&a.left_op(&z)?);
            debug_assert!(&check == d);
            Ok(Some(z))
        }
        Err(Error::NoSolution) => Ok(None),
        Err(e) => Err(e),
    }
}

/// The triple `(L_a + R_b, L_a + R_c, -L_c + R_b)`.
pub fn inner_terder_from(
    alg: &Algebra,
    a: &[Rational],
    b: &[Rational],
    c: &[Rational],
) -> Result<TernaryTriple> {
    let la = alg.left_op(a)?;
    let rb = alg.right_op(b)?;
    let lc = alg.left_op(c)?;
    let rc = alg.right_op(c)?;
    Ok(TernaryTriple {
        d1: la.add(&rb),
        d2: la.add(&rc),
        d3: lc.neg().add(&rb),
    })
}

/// Witness `(a, b, c)` with `t = (L_a + R_b, L_a + R_c, -L_c + R_b)`, or
/// `None` when the underlying derivation is not inner.
pub fn is_inner_terder(a: &Algebra, t: &TernaryTriple) -> Result<Option<InnerTerDerWitness>> {
    let dec = decompose_terder(a, t)?;
    let Some(c) = is_inner_derivation(a, &dec.d)? else {
        return Ok(None);
    };
    let wa = vec_sub(&dec.x, &c);
    let wb = vec_add(&c, &dec.y);
    let rebuilt = inner_terder_from(a, &wa, &wb, &c)?;
    if &rebuilt != t {
        return Err(Error::NotATernaryDerivation);
    }
    Ok(Some(InnerTerDerWitness {
        a: wa,
        b: wb,
        c,
    }))
}

/// Which structured six-element family `check_tab_family` examines.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TabVariant {
    /// Triples `(L_a R_b, L_c R_d, L_e R_f)` tested against `TerAut`.
    Automorphism,
    /// Triples `(T_{a,b}, T_{c,d}, T_{e,f})`, `T_{u,v} = L_u - R_v`, tested
    /// against `TerDer`.
    Derivation,
}

/// Evaluates the structured-tuple criterion and actual membership for the
/// six-element family selected by `variant`; the two booleans always agree.
/// The automorphism variant requires all six elements invertible.
pub fn check_tab_family(
    alg: &Algebra,
    elems: &[Vector; 6],
    variant: TabVariant,
) -> Result<(bool, bool)> {
    match variant {
        TabVariant::Derivation => check_tab_derivation(alg, elems),
        TabVariant::Automorphism => check_tab_automorphism(alg, elems),
    }
}

/// For the triple `(T_{a,b}, T_{c,d}, T_{e,f})` with `T_{u,v} = L_u - R_v`:
/// returns `(condition, membership)` where `condition` is
/// `a-c, b-f, e-d` central and `a+f+d = c+b+e`, and `membership` is actual
/// ternary-derivation membership.
fn check_tab_derivation(alg: &Algebra, elems: &[Vector; 6]) -> Result<(bool, bool)> {
    for e in elems {
        if e.len() != alg.dim {
            return Err(Error::DimensionMismatch("tuple element size".into()));
        }
    }
    let [a, b, c, d, e, f] = elems;
    let t_of = |u: &Vector, v: &Vector| -> Result<Matrix> {
        Ok(alg.left_op(u)?.sub(&alg.right_op(v)?))
    };
    let triple = TernaryTriple {
        d1: t_of(a, b)?,
        d2: t_of(c, d)?,
        d3: t_of(e, f)?,
    };
    let condition = alg.is_central(&vec_sub(a, c))?
        && alg.is_central(&vec_sub(b, f))?
        && alg.is_central(&vec_sub(e, d))?
        && vec_add(&vec_add(a, f), d) == vec_add(&vec_add(c, b), e);
    let membership = is_terder(alg, &triple);
    Ok((condition, membership))
}

/// For the triple `(L_a R_b, L_c R_d, L_e R_f)` over invertible elements:
/// returns `(condition, membership)` where `condition` is
/// `c^{-1}a, b f^{-1}, d e` central and `ab = cdef`, and `membership` is
/// actual ternary-automorphism membership.
fn check_tab_automorphism(alg: &Algebra, elems: &[Vector; 6]) -> Result<(bool, bool)> {
    for e in elems {
        if e.len() != alg.dim {
            return Err(Error::DimensionMismatch("tuple element size".into()));
        }
        if !alg.is_invertible_element(e) {
            return Err(Error::ComponentNotInvertible);
        }
    }
    let [a, b, c, d, e, f] = elems;
    let lr = |u: &Vector, v: &Vector| -> Result<Matrix> {
        Ok(alg.left_op(u)?.mul(&alg.right_op(v)?))
    };
    let triple = TernaryTriple {
        d1: lr(a, b)?,
        d2: lr(c, d)?,
        d3: lr(e, f)?,
    };
    let c_inv = alg.invert_element(c)?;
    let f_inv = alg.invert_element(f)?;
    let condition = alg.is_central(&alg.mul(&c_inv, a)?)?
        && alg.is_central(&alg.mul(b, &f_inv)?)?
        && alg.is_central(&alg.mul(d, e)?)?
        && alg.mul(a, b)? == alg.mul_all(&[c.as_slice(), d.as_slice(), e.as_slice(), f.as_slice()])?;
    let membership = is_terauto(alg, &triple);
    Ok((condition, membership))
}

/// `defect[i][j] = d(e_i e_j) - d(e_i) e_j - e_i d(e_j)`.
pub fn leibniz_defect(a: &Algebra, d: &Matrix) -> Vec<Vec<Vector>> {
    let n = a.dim;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let lhs = d.mul_vec(&a.table[i][j]);
            let t1 = a
                .mul(&d.column(i), &unit_vec(n, j))
                .expect("sizes");
            let t2 = a
                .mul(&unit_vec(n, i), &d.column(j))
                .expect("sizes");
            row.push(vec_sub(&vec_sub(&lhs, &t1), &t2));
        }
        out.push(row);
    }
    out
}

/// Whether `d(xy) - d(x)y - x d(y) = -x d(1) y` on all basis pairs.
pub fn satisfies_generalized_leibniz(a: &Algebra, d: &Matrix) -> bool {
    if check_endo_dim(a, d).is_err() {
        return false;
    }
    let n = a.dim;
    let d1 = d.mul_vec(&a.unit);
    let defect = leibniz_defect(a, d);
    for i in 0..n {
        for j in 0..n {
            let expected = crate::matrix::vec_neg(
                &a.mul(
                    &a.mul(&unit_vec(n, i), &d1).expect("sizes"),
                    &unit_vec(n, j),
                )
                .expect("sizes"),
            );
            if defect[i][j] != expected {
                return false;
            }
        }
    }
    true
}

/// Extends a single map satisfying the generalized Leibniz identity to a full
/// ternary derivation with the map in the given position, shifted by `shift`:
/// position 1 gives `(d, d - R_s, d - L_{d(1)-s})`,
/// position 2 gives `(d + R_s, d, d + R_s - L_{d(1)})`,
/// position 3 gives `(d + L_s, d + L_s - R_{d(1)}, d)`.
pub fn extend_component(
    a: &Algebra,
    d: &Matrix,
    pos: Component,
    shift: &[Rational],
) -> Result<TernaryTriple> {
    check_endo_dim(a, d)?;
    if !satisfies_generalized_leibniz(a, d) {
        return Err(Error::GeneralizedLeibnizViolated);
    }
    let d1 = d.mul_vec(&a.unit);
    let triple = match pos {
        Component::First => {
            let rs = a.right_op(shift)?;
            let l = a.left_op(&vec_sub(&d1, shift))?;
            TernaryTriple {
                d1: d.clone(),
                d2: d.sub(&rs),
                d3: d.sub(&l),
            }
        }
        Component::Second => {
            let rs = a.right_op(shift)?;
            let l = a.left_op(&d1)?;
            TernaryTriple {
                d1: d.add(&rs),
                d2: d.clone(),
                d3: d.add(&rs).sub(&l),
            }
        }
        Component::Third => {
            let ls = a.left_op(shift)?;
            let r = a.right_op(&d1)?;
            TernaryTriple {
                d1: d.add(&ls),
                d2: d.add(&ls).sub(&r),
                d3: d.clone(),
            }
        }
    };
    debug_assert!(is_terder(a, &triple));
    Ok(triple)
}

/// Finds `b` with `R_b` equal to the given matrix, if one exists.
pub fn solve_right_mult(a: &Algebra, target: &Matrix) -> Result<Option<Vector>> {
    check_endo_dim(a, target)?;
    let n = a.dim;
    // right_op is linear in its element; solve entrywise.
    let mut rows = Vec::with_capacity(n * n);
    let mut rhs = Vec::with_capacity(n * n);
    for k in 0..n {
        for i in 0..n {
            let row: Vector = (0..n).map(|j| a.table[i][j][k].clone()).collect();
            rows.push(row);
            rhs.push(target[(k, i)].clone());
        }
    }
    match Matrix::from_rows(rows).expect("rectangular rows").solve(&rhs) {
        Ok(b) => {
            if &a.right_op(&b)? == target {
                Ok(Some(b))
            } else {
                Ok(None)
            }
        }
        Err(Error::NoSolution) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Finds `a_el` with `L_{a_el}` equal to the given matrix, if one exists.
pub fn solve_left_mult(a: &Algebra, target: &Matrix) -> Result<Option<Vector>> {
    check_endo_dim(a, target)?;
    let n = a.dim;
    let mut rows = Vec::with_capacity(n * n);
    let mut rhs = Vec::with_capacity(n * n);
    for k in 0..n {
        for j in 0..n {
            let row: Vector = (0..n).map(|i| a.table[i][j][k].clone()).collect();
            rows.push(row);
            rhs.push(target[(k, j)].clone());
        }
    }
    match Matrix::from_rows(rows).expect("rectangular rows").solve(&rhs) {
        Ok(x) => {
            if &a.left_op(&x)? == target {
                Ok(Some(x))
            } else {
                Ok(None)
            }
        }
        Err(Error::NoSolution) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Embeds a triple `t` on the base algebra as the triple of unitriangular
/// block maps `[[I, 0], [t_i, I]]` on the dual extension; the embedded triple
/// is a ternary automorphism exactly when `t` is a ternary derivation.
pub fn embed_dual_triple(dual: &DualExtension, t: &TernaryTriple) -> Result<TernaryTriple> {
    let n = dual.base_dim();
    if t.dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "triple acts on dimension {}, base has dimension {n}",
            t.dim()
        )));
    }
    let embed = |d: &Matrix| {
        let mut m = Matrix::identity(2 * n);
        for i in 0..n {
            for j in 0..n {
                m[(n + i, j)] = d[(i, j)].clone();
            }
        }
        m
    };
    Ok(TernaryTriple {
        d1: embed(&t.d1),
        d2: embed(&t.d2),
        d3: embed(&t.d3),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t2() -> Algebra {
        Algebra::upper_triangular(2)
    }

    fn m2() -> Algebra {
        Algebra::full_matrix(2)
    }

    fn dual1() -> Algebra {
        Algebra::truncated_polynomial(2)
    }

    /// The derivation of Q[x]/(x^2) with 1 -> 0, x -> x.
    fn dual1_derivation() -> Matrix {
        let mut d = Matrix::zeros(2, 2);
        d[(1, 1)] = Rational::one();
        d
    }

    fn int_vec(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| Rational::from_int(x)).collect()
    }

    #[test]
    fn derivation_space_dimensions() {
        assert_eq!(derivation_space(&t2()).len(), 2);
        assert_eq!(derivation_space(&m2()).len(), 3);
        assert_eq!(derivation_space(&dual1()).len(), 1);
        for a in [t2(), m2(), dual1()] {
            for d in derivation_space(&a) {
                assert!(is_derivation(&a, &d));
            }
        }
    }

    #[test]
    fn terder_space_dimension_law() {
        for (a, expect) in [(t2(), 8), (m2(), 11), (dual1(), 5)] {
            let space = terder_space(&a);
            assert_eq!(space.len(), expect);
            assert_eq!(space.len(), derivation_space(&a).len() + 2 * a.dim);
            for t in &space {
                assert!(is_terder(&a, t));
            }
        }
    }

    #[test]
    fn diagonal_derivation_triples_are_terders() {
        let a = t2();
        for d in derivation_space(&a) {
            let t = TernaryTriple {
                d1: d.clone(),
                d2: d.clone(),
                d3: d.clone(),
            };
            assert!(is_terder(&a, &t));
        }
    }

    #[test]
    fn single_slot_triples_are_not_terders() {
        let a = dual1();
        let d = dual1_derivation();
        let zero = Matrix::zeros(2, 2);
        let second_only = TernaryTriple {
            d1: zero.clone(),
            d2: d.clone(),
            d3: zero.clone(),
        };
        let third_only = TernaryTriple {
            d1: zero.clone(),
            d2: zero,
            d3: d,
        };
        assert!(!is_terder(&a, &second_only));
        assert!(!is_terder(&a, &third_only));
    }

    #[test]
    fn decompose_examples() {
        let a = t2();
        let d = &derivation_space(&a)[0];
        // (d, d, d) -> (d, 0, 0)
        let t = TernaryTriple {
            d1: d.clone(),
            d2: d.clone(),
            d3: d.clone(),
        };
        let dec = decompose_terder(&a, &t).unwrap();
        assert_eq!(&dec.d, d);
        assert!(vec_is_zero(&dec.x));
        assert!(vec_is_zero(&dec.y));

        // (L_a, L_a, 0) -> (0, a, 0)
        let el = int_vec(&[2, 1, -1]);
        let l = a.left_op(&el).unwrap();
        let t = TernaryTriple {
            d1: l.clone(),
            d2: l,
            d3: Matrix::zeros(3, 3),
        };
        let dec = decompose_terder(&a, &t).unwrap();
        assert!(dec.d.is_zero());
        assert_eq!(dec.x, el);
        assert!(vec_is_zero(&dec.y));

        // (R_b, 0, R_b) -> (0, 0, b)
        let r = a.right_op(&el).unwrap();
        let t = TernaryTriple {
            d1: r.clone(),
            d2: Matrix::zeros(3, 3),
            d3: r,
        };
        let dec = decompose_terder(&a, &t).unwrap();
        assert!(dec.d.is_zero());
        assert!(vec_is_zero(&dec.x));
        assert_eq!(dec.y, el);
    }

    #[test]
    fn decompose_rejects_non_terder() {
        let a = t2();
        let mut bad = TernaryTriple::zero(3);
        bad.d1[(0, 1)] = Rational::one();
        assert_eq!(
            decompose_terder(&a, &bad).unwrap_err(),
            Error::NotATernaryDerivation
        );
    }

    #[test]
    fn compose_decompose_round_trip() {
        let a = m2();
        let ds = derivation_space(&a);
        let d = ds[0].add(&ds[2].scale(&Rational::new(-1, 2)));
        let x = int_vec(&[1, 2, 0, -1]);
        let y = int_vec(&[0, 1, 1, 3]);
        let t = compose_terder(&a, &d, &x, &y).unwrap();
        assert!(is_terder(&a, &t));
        let dec = decompose_terder(&a, &t).unwrap();
        assert_eq!(dec.d, d);
        assert_eq!(dec.x, x);
        assert_eq!(dec.y, y);
    }

    #[test]
    fn compose_terder_rejects_non_derivation() {
        let a = t2();
        let mut not_der = Matrix::zeros(3, 3);
        not_der[(0, 0)] = Rational::one();
        assert_eq!(
            compose_terder(&a, &not_der, &zeros(3), &zeros(3)).unwrap_err(),
            Error::NotADerivation
        );
    }

    #[test]
    fn decompose_terauto_examples() {
        let a = t2();
        let n = a.dim;
        // Identity triple.
        let id = TernaryTriple {
            d1: Matrix::identity(n),
            d2: Matrix::identity(n),
            d3: Matrix::identity(n),
        };
        let dec = decompose_terauto(&a, &id).unwrap();
        assert_eq!(dec.sigma, Matrix::identity(n));
        assert_eq!(dec.x, a.unit);
        assert_eq!(dec.y, a.unit);

        // (R_y L_x, L_x, R_y) -> (Id, x, y)
        let x = int_vec(&[1, 1, 1]);
        let y = int_vec(&[2, 0, 1]);
        let t = compose_terauto(&a, &Matrix::identity(n), &x, &y).unwrap();
        assert!(is_terauto(&a, &t));
        let dec = decompose_terauto(&a, &t).unwrap();
        assert_eq!(dec.sigma, Matrix::identity(n));
        assert_eq!(dec.x, x);
        assert_eq!(dec.y, y);
    }

    #[test]
    fn decompose_terauto_rejects_scaled_identity() {
        let a = t2();
        let two = Rational::from_int(2);
        let t = TernaryTriple {
            d1: Matrix::identity(3),
            d2: Matrix::identity(3),
            d3: Matrix::identity(3).scale(&two),
        };
        assert_eq!(
            decompose_terauto(&a, &t).unwrap_err(),
            Error::NotATernaryAutomorphism
        );
    }

    #[test]
    fn make_inner_terauto_round_trip() {
        let a = m2();
        let w = int_vec(&[1, 1, 0, 1]);
        let x = int_vec(&[2, 0, 0, 1]);
        let y = int_vec(&[1, 0, 1, 1]);
        let t = make_inner_terauto(&a, &w, &x, &y).unwrap();
        assert!(is_terauto(&a, &t));
        let dec = decompose_terauto(&a, &t).unwrap();
        assert_eq!(dec.sigma, inner_automorphism(&a, &w).unwrap());
        assert_eq!(dec.x, x);
        assert_eq!(dec.y, y);
    }

    #[test]
    fn make_inner_terauto_rejects_singular_witness() {
        let a = t2();
        let e12 = a.basis_element(1);
        assert_eq!(
            make_inner_terauto(&a, &e12, &a.unit, &a.unit).unwrap_err(),
            Error::ComponentNotInvertible
        );
    }

    #[test]
    fn inner_derivation_witnesses() {
        let a = t2();
        let e11 = a.basis_element(0);
        let d = a.right_op(&e11).unwrap().sub(&a.left_op(&e11).unwrap());
        let z = is_inner_derivation(&a, &d).unwrap().unwrap();
        assert_eq!(
            a.right_op(&z).unwrap().sub(&a.left_op(&z).unwrap()),
            d
        );
        // Every derivation of M2 is inner.
        let m = m2();
        for d in derivation_space(&m) {
            assert!(is_inner_derivation(&m, &d).unwrap().is_some());
        }
        // x d/dx on Q[x]/(x^2) is not inner (the algebra is commutative).
        let dl = dual1();
        let d = dual1_derivation();
        assert!(is_inner_derivation(&dl, &d).unwrap().is_none());
    }

    #[test]
    fn inner_derivation_space_dimensions() {
        // dim Innder = dim - dim Z: 3-1, 4-1, 2-2.
        assert_eq!(inner_derivation_space(&t2()).len(), 2);
        assert_eq!(inner_derivation_space(&m2()).len(), 3);
        assert_eq!(inner_derivation_space(&dual1()).len(), 0);
        for a in [t2(), m2()] {
            for d in inner_derivation_space(&a) {
                assert!(is_inner_derivation(&a, &d).unwrap().is_some());
            }
        }
    }

    #[test]
    fn inner_terder_witness_round_trip() {
        let alg = t2();
        let a = int_vec(&[1, 2, 0]);
        let b = int_vec(&[0, -1, 3]);
        let c = int_vec(&[2, 1, 1]);
        let t = inner_terder_from(&alg, &a, &b, &c).unwrap();
        assert!(is_terder(&alg, &t));
        let w = is_inner_terder(&alg, &t).unwrap().unwrap();
        let rebuilt = inner_terder_from(&alg, &w.a, &w.b, &w.c).unwrap();
        assert_eq!(rebuilt, t);
    }

    #[test]
    fn outer_terder_has_no_witness() {
        let a = dual1();
        let d = dual1_derivation();
        let t = TernaryTriple {
            d1: d.clone(),
            d2: d.clone(),
            d3: d,
        };
        assert!(is_terder(&a, &t));
        assert!(is_inner_terder(&a, &t).unwrap().is_none());
    }

    #[test]
    fn tab_derivation_checks() {
        let alg = t2();
        let zero = zeros(3);
        // All zero: both hold.
        let elems = [zero.clone(), zero.clone(), zero.clone(), zero.clone(), zero.clone(), zero.clone()];
        assert_eq!(
            check_tab_family(&alg, &elems, TabVariant::Derivation).unwrap(),
            (true, true)
        );
        // A lone non-central first slot: both fail.
        let e11 = alg.basis_element(0);
        let elems = [e11, zero.clone(), zero.clone(), zero.clone(), zero.clone(), zero.clone()];
        assert_eq!(
            check_tab_family(&alg, &elems, TabVariant::Derivation).unwrap(),
            (false, false)
        );
        // Structured tuple (a, b, a, c, c, b): both hold.
        let a = int_vec(&[1, 2, 3]);
        let b = int_vec(&[0, 1, -1]);
        let c = int_vec(&[2, 0, 2]);
        let elems = [a.clone(), b.clone(), a, c.clone(), c, b];
        assert_eq!(
            check_tab_family(&alg, &elems, TabVariant::Derivation).unwrap(),
            (true, true)
        );
    }

    #[test]
    fn tab_automorphism_checks() {
        let alg = t2();
        let one = alg.unit_element();
        let elems = [one.clone(), one.clone(), one.clone(), one.clone(), one.clone(), one.clone()];
        assert_eq!(
            check_tab_family(&alg, &elems, TabVariant::Automorphism).unwrap(),
            (true, true)
        );
        // w = 1 + e12 in the first slot only: both fail.
        let w = int_vec(&[1, 1, 1]);
        let elems = [w, one.clone(), one.clone(), one.clone(), one.clone(), one.clone()];
        assert_eq!(
            check_tab_family(&alg, &elems, TabVariant::Automorphism).unwrap(),
            (false, false)
        );
        // Singular input is rejected.
        let e12 = alg.basis_element(1);
        let elems = [e12, one.clone(), one.clone(), one.clone(), one.clone(), one];
        assert_eq!(
            check_tab_family(&alg, &elems, TabVariant::Automorphism).unwrap_err(),
            Error::ComponentNotInvertible
        );
    }

    #[test]
    fn generalized_leibniz_examples() {
        let a = t2();
        for d in derivation_space(&a) {
            assert!(satisfies_generalized_leibniz(&a, &d));
        }
        let u = int_vec(&[1, 4, -2]);
        assert!(satisfies_generalized_leibniz(&a, &a.left_op(&u).unwrap()));
        assert!(satisfies_generalized_leibniz(&a, &a.right_op(&u).unwrap()));
        // A map with nonzero defect beyond the allowed shape.
        let m = m2();
        let mut bad = Matrix::zeros(4, 4);
        bad[(0, 1)] = Rational::one();
        bad[(3, 2)] = Rational::one();
        assert!(!satisfies_generalized_leibniz(&m, &bad));
    }

    #[test]
    fn terder_components_satisfy_generalized_leibniz() {
        for a in [t2(), dual1()] {
            for t in terder_space(&a) {
                for d in [&t.d1, &t.d2, &t.d3] {
                    assert!(satisfies_generalized_leibniz(&a, d));
                }
            }
        }
    }

    #[test]
    fn extend_component_examples() {
        let a = t2();
        let u = int_vec(&[1, -1, 2]);
        let s = int_vec(&[0, 2, 1]);
        // Position 2 with d = L_u: (L_u + R_s, L_u, R_s).
        let l = a.left_op(&u).unwrap();
        let t = extend_component(&a, &l, Component::Second, &s).unwrap();
        assert!(is_terder(&a, &t));
        assert_eq!(t.d2, l);
        assert_eq!(t.d3, a.right_op(&s).unwrap());
        // Position 3 with d = R_u.
        let r = a.right_op(&u).unwrap();
        let t = extend_component(&a, &r, Component::Third, &s).unwrap();
        assert!(is_terder(&a, &t));
        assert_eq!(t.d3, r);
        // Position 1 with a genuine derivation and zero shift: (d, d, d).
        let d = &derivation_space(&a)[0];
        let t = extend_component(&a, d, Component::First, &zeros(3)).unwrap();
        assert_eq!(t.d1, *d);
        assert_eq!(t.d2, *d);
        assert_eq!(t.d3, *d);
        // Precondition is enforced.
        let m = m2();
        let mut bad = Matrix::zeros(4, 4);
        bad[(0, 1)] = Rational::one();
        bad[(3, 2)] = Rational::one();
        assert_eq!(
            extend_component(&m, &bad, Component::First, &zeros(4)).unwrap_err(),
            Error::GeneralizedLeibnizViolated
        );
    }

    #[test]
    fn zero_component_classification() {
        let a = t2();
        // Second component zero: exactly (R_z, 0, R_z), dimension dim(a).
        let space = terder_space_with_zero_component(&a, Component::Second);
        assert_eq!(space.len(), a.dim);
        for t in &space {
            assert!(t.d2.is_zero());
            assert_eq!(t.d1, t.d3);
            let z = solve_right_mult(&a, &t.d1).unwrap().unwrap();
            assert_eq!(a.right_op(&z).unwrap(), t.d1);
        }
        // Third component zero: exactly (L_z, L_z, 0).
        let space = terder_space_with_zero_component(&a, Component::Third);
        assert_eq!(space.len(), a.dim);
        for t in &space {
            assert!(t.d3.is_zero());
            assert_eq!(t.d1, t.d2);
            assert!(solve_left_mult(&a, &t.d1).unwrap().is_some());
        }
    }

    #[test]
    fn shared_component_rigidity() {
        let a = m2();
        let space = terder_space(&a);
        let t = space[0].add(&space[4]);
        let b = int_vec(&[1, -2, 0, 3]);
        let rb = a.right_op(&b).unwrap();
        // Same second component: differences in slots 1 and 3 are one R_b.
        let t2 = TernaryTriple {
            d1: t.d1.add(&rb),
            d2: t.d2.clone(),
            d3: t.d3.add(&rb),
        };
        assert!(is_terder(&a, &t2));
        let diff1 = t2.d1.sub(&t.d1);
        let diff3 = t2.d3.sub(&t.d3);
        let w = solve_right_mult(&a, &diff1).unwrap().unwrap();
        assert_eq!(a.right_op(&w).unwrap(), diff1);
        assert_eq!(a.right_op(&w).unwrap(), diff3);
    }

    #[test]
    fn lie_bracket_stays_in_terder_space() {
        let a = t2();
        let space = terder_space(&a);
        let flat: Vec<Vector> = space.iter().map(TernaryTriple::to_flat).collect();
        let checker = crate::matrix::SpanChecker::new(&flat);
        for s in &space {
            for t in &space {
                let br = s.bracket(t);
                assert!(is_terder(&a, &br));
                assert!(checker.contains(&br.to_flat()));
            }
        }
    }

    #[test]
    fn triple_serde_accepts_both_key_families() {
        let a = t2();
        let t = terder_space(&a)[0].clone();
        let json = serde_json::to_string(&t).unwrap();
        assert!(json.contains("\"d1\""));
        let back: TernaryTriple = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
        let s_json = json
            .replace("\"d1\"", "\"s1\"")
            .replace("\"d2\"", "\"s2\"")
            .replace("\"d3\"", "\"s3\"");
        let back: TernaryTriple = serde_json::from_str(&s_json).unwrap();
        assert_eq!(back, t);
        let mixed = json.replacen("\"d1\"", "\"s1\"", 1);
        assert!(serde_json::from_str::<TernaryTriple>(&mixed).is_err());
    }

    #[test]
    fn dual_number_correspondence_small() {
        for a in [t2(), dual1()] {
            let dual = a.dual_extension();
            assert!(dual.algebra.validate().is_ok());
            for t in terder_space(&a) {
                let emb = embed_dual_triple(&dual, &t).unwrap();
                assert!(is_terauto(&dual.algebra, &emb));
            }
            // A perturbed first slot is no longer a ternary derivation, and
            // its embedding fails accordingly.
            let mut t = terder_space(&a)[0].clone();
            t.d1[(0, 0)] += &Rational::one();
            assert!(!is_terder(&a, &t));
            let emb = embed_dual_triple(&dual, &t).unwrap();
            assert!(!is_terauto(&dual.algebra, &emb));
        }
    }
}
