//! Ternary-derivation structure specific to triangular algebras: the block
//! form of a ternary derivation, its four characterizing conditions, the
//! canonical repair of partial data, the triangular inner criterion, and the
//! idempotent-based splitting of automorphisms and derivations.

use serde::{Deserialize, Serialize};
use std::ops::Range;

use crate::error::{Error, Result};
use crate::matrix::{row_space_canonical, unit_vec, vec_is_zero, vec_neg, zeros, Matrix, Vector};
use crate::rational::Rational;
use crate::ternary::{
    ad, inner_automorphism, is_automorphism, is_derivation, is_terder, leibniz_rows, TernaryTriple,
};
use crate::triangular::TriangularAlgebra;

/// Block data of a ternary derivation of a triangular algebra: the diagonal
/// actions on A, M, B plus the three corner elements of M.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TdComponents {
    pub delta1: Matrix,
    pub delta2: Matrix,
    pub delta3: Matrix,
    pub tau1: Matrix,
    pub tau2: Matrix,
    pub tau3: Matrix,
    pub mu1: Matrix,
    pub mu2: Matrix,
    pub mu3: Matrix,
    pub n1: Vector,
    pub n1p: Vector,
    pub n2: Vector,
}

impl TdComponents {
    pub fn zero(t: &TriangularAlgebra) -> Self {
        let (da, dm, db) = (t.a.dim, t.m.dim, t.b.dim);
        TdComponents {
            delta1: Matrix::zeros(da, da),
            delta2: Matrix::zeros(da, da),
            delta3: Matrix::zeros(da, da),
            tau1: Matrix::zeros(dm, dm),
            tau2: Matrix::zeros(dm, dm),
            tau3: Matrix::zeros(dm, dm),
            mu1: Matrix::zeros(db, db),
            mu2: Matrix::zeros(db, db),
            mu3: Matrix::zeros(db, db),
            n1: zeros(dm),
            n1p: zeros(dm),
            n2: zeros(dm),
        }
    }

    fn check_shapes(&self, t: &TriangularAlgebra) -> Result<()> {
        let (da, dm, db) = (t.a.dim, t.m.dim, t.b.dim);
        let square = |m: &Matrix, d: usize, what: &str| -> Result<()> {
            if !m.is_square() || m.rows() != d {
                return Err(Error::DimensionMismatch(format!("{what} must be {d} x {d}")));
            }
            Ok(())
        };
        square(&self.delta1, da, "delta1")?;
        square(&self.delta2, da, "delta2")?;
        square(&self.delta3, da, "delta3")?;
        square(&self.tau1, dm, "tau1")?;
        square(&self.tau2, dm, "tau2")?;
        square(&self.tau3, dm, "tau3")?;
        square(&self.mu1, db, "mu1")?;
        square(&self.mu2, db, "mu2")?;
        square(&self.mu3, db, "mu3")?;
        for (n, what) in [(&self.n1, "n1"), (&self.n1p, "n1p"), (&self.n2, "n2")] {
            if n.len() != dm {
                return Err(Error::DimensionMismatch(format!(
                    "{what} must have length {dm}"
                )));
            }
        }
        Ok(())
    }
}

/// Block data of an ordinary derivation of a triangular algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationBlocks {
    pub delta: Matrix,
    pub tau: Matrix,
    pub mu: Matrix,
    pub n: Vector,
}

/// The four characterizing conditions of the triangular block form.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TdConditionReport {
    pub i: bool,
    pub ii: bool,
    pub iii: bool,
    pub iv: bool,
}

impl TdConditionReport {
    pub fn all(&self) -> bool {
        self.i && self.ii && self.iii && self.iv
    }

    /// Comma-separated labels of the failing conditions.
    pub fn failing(&self) -> String {
        let mut out = Vec::new();
        for (ok, name) in [
            (self.i, "(i)"),
            (self.ii, "(ii)"),
            (self.iii, "(iii)"),
            (self.iv, "(iv)"),
        ] {
            if !ok {
                out.push(name);
            }
        }
        out.join(", ")
    }
}

/// Factorization of an M-preserving automorphism through the idempotent p.
#[derive(Clone, Debug, Serialize)]
pub struct FactorResult {
    pub conjugator: Vector,
    pub tau: Matrix,
}

/// Splitting of a derivation into an inner part and a part vanishing at p.
#[derive(Clone, Debug, Serialize)]
pub struct SplitResult {
    pub inner_part: Matrix,
    pub d0: Matrix,
}

fn block(m: &Matrix, rows: &Range<usize>, cols: &Range<usize>) -> Matrix {
    Matrix::from_fn(rows.len(), cols.len(), |r, c| {
        m[(rows.start + r, cols.start + c)].clone()
    })
}

fn m_part(t: &TriangularAlgebra, v: &[Rational]) -> Vector {
    v[t.m_range.clone()].to_vec()
}

/// Reads the block components of a ternary derivation of `t.algebra`.
///
/// The corner elements are pinned by evaluation at the idempotents:
/// `n1` is the M-part of `d3(p)`, `n1p` the M-part of `d1(q)`, and `n2` the
/// negated M-part of `d3(q)`; the result is cross-validated by reassembly.
pub fn extract_td(t: &TriangularAlgebra, triple: &TernaryTriple) -> Result<TdComponents> {
    if triple.dim() != t.dim() {
        return Err(Error::DimensionMismatch(format!(
            "triple acts on dimension {}, triangular algebra has dimension {}",
            triple.dim(),
            t.dim()
        )));
    }
    if !is_terder(&t.algebra, triple) {
        return Err(Error::NotATernaryDerivation);
    }
    let comps = TdComponents {
        delta1: block(&triple.d1, &t.a_range, &t.a_range),
        delta2: block(&triple.d2, &t.a_range, &t.a_range),
        delta3: block(&triple.d3, &t.a_range, &t.a_range),
        tau1: block(&triple.d1, &t.m_range, &t.m_range),
        tau2: block(&triple.d2, &t.m_range, &t.m_range),
        tau3: block(&triple.d3, &t.m_range, &t.m_range),
        mu1: block(&triple.d1, &t.b_range, &t.b_range),
        mu2: block(&triple.d2, &t.b_range, &t.b_range),
        mu3: block(&triple.d3, &t.b_range, &t.b_range),
        n1: m_part(t, &triple.d3.mul_vec(&t.p)),
        n1p: m_part(t, &triple.d1.mul_vec(&t.q)),
        n2: vec_neg(&m_part(t, &triple.d3.mul_vec(&t.q))),
    };
    let rebuilt = assemble_td_raw(t, &comps)?;
    if &rebuilt != triple {
        return Err(Error::TdConditionsViolated(
            "triple does not have the triangular block form".into(),
        ));
    }
    debug_assert!(check_td_conditions(t, &comps)?.all());
    Ok(comps)
}

/// Assembles the three block matrices from components without validating the
/// four conditions.
pub fn assemble_td_raw(t: &TriangularAlgebra, comps: &TdComponents) -> Result<TernaryTriple> {
    comps.check_shapes(t)?;
    let (da, db) = (t.a.dim, t.b.dim);
    let build = |diag_a: &Matrix,
                 diag_m: &Matrix,
                 diag_b: &Matrix,
                 corner_a: &Vector,
                 corner_b: &Vector|
     -> Result<Matrix> {
        let mut d = t.block_diagonal_endo(diag_a, diag_m, diag_b)?;
        for i in 0..da {
            let col = t.m.act_left(&t.a.basis_element(i), corner_a)?;
            for (k, v) in col.iter().enumerate() {
                d[(t.m_range.start + k, t.a_range.start + i)] = v.clone();
            }
        }
        for j in 0..db {
            let col = t.m.act_right(corner_b, &t.b.basis_element(j))?;
            for (k, v) in col.iter().enumerate() {
                d[(t.m_range.start + k, t.b_range.start + j)] = v.clone();
            }
        }
        Ok(d)
    };
    Ok(TernaryTriple {
        d1: build(&comps.delta1, &comps.tau1, &comps.mu1, &comps.n1, &comps.n1p)?,
        d2: build(&comps.delta2, &comps.tau2, &comps.mu2, &comps.n2, &comps.n1p)?,
        d3: build(
            &comps.delta3,
            &comps.tau3,
            &comps.mu3,
            &comps.n1,
            &vec_neg(&comps.n2),
        )?,
    })
}

/// Assembles complete components into a verified ternary derivation.
pub fn assemble_td(t: &TriangularAlgebra, comps: &TdComponents) -> Result<TernaryTriple> {
    let report = check_td_conditions(t, comps)?;
    if !report.all() {
        return Err(Error::TdConditionsViolated(format!(
            "conditions {} fail",
            report.failing()
        )));
    }
    let triple = assemble_td_raw(t, comps)?;
    debug_assert!(is_terder(&t.algebra, &triple));
    Ok(triple)
}

/// Evaluates the four conditions:
/// (i) the delta triple is a ternary derivation of A;
/// (ii) the mu triple is a ternary derivation of B;
/// (iii) `tau1(am) = delta2(a)m + a tau3(m)`;
/// (iv) `tau1(mb) = m mu3(b) + tau2(m)b`.
pub fn check_td_conditions(t: &TriangularAlgebra, comps: &TdComponents) -> Result<TdConditionReport> {
    comps.check_shapes(t)?;
    let delta_triple = TernaryTriple {
        d1: comps.delta1.clone(),
        d2: comps.delta2.clone(),
        d3: comps.delta3.clone(),
    };
    let mu_triple = TernaryTriple {
        d1: comps.mu1.clone(),
        d2: comps.mu2.clone(),
        d3: comps.mu3.clone(),
    };
    let i = is_terder(&t.a, &delta_triple);
    let ii = is_terder(&t.b, &mu_triple);
    let mut iii = true;
    for idx in 0..t.a.dim {
        let lam = &t.m.left[idx];
        let lhs = comps.tau1.mul(lam);
        let rhs = t
            .m
            .lambda(&comps.delta2.column(idx))?
            .add(&lam.mul(&comps.tau3));
        if lhs != rhs {
            iii = false;
            break;
        }
    }
    let mut iv = true;
    for idx in 0..t.b.dim {
        let rho = &t.m.right[idx];
        let lhs = comps.tau1.mul(rho);
        let rhs = t
            .m
            .rho(&comps.mu3.column(idx))?
            .add(&rho.mul(&comps.tau2));
        if lhs != rhs {
            iv = false;
            break;
        }
    }
    Ok(TdConditionReport { i, ii, iii, iv })
}

/// Completes partial components into a genuine ternary derivation, assuming
/// the bimodule conditions (iii) and (iv) hold and M is faithful on both
/// sides. The canonical completion keeps `delta2`, `mu3`, all `tau`s and all
/// corner elements, and replaces
/// `delta1 = delta2`, `delta3 = delta2 - L_{delta2(1_A)}`,
/// `mu1 = mu3`, `mu2 = mu3 - R_{mu3(1_B)}`.
pub fn repair_td(t: &TriangularAlgebra, comps: &TdComponents) -> Result<TernaryTriple> {
    let (left_faithful, right_faithful) = t.m.is_faithful();
    if !left_faithful || !right_faithful {
        let mut sides = Vec::new();
        if !left_faithful {
            sides.push("left");
        }
        if !right_faithful {
            sides.push("right");
        }
        return Err(Error::NotFaithful(format!(
            "bimodule is not faithful on the {} side",
            sides.join(" and ")
        )));
    }
    let report = check_td_conditions(t, comps)?;
    if !(report.iii && report.iv) {
        let mut failing = Vec::new();
        if !report.iii {
            failing.push("(iii)");
        }
        if !report.iv {
            failing.push("(iv)");
        }
        return Err(Error::TdConditionsViolated(format!(
            "conditions {} fail",
            failing.join(", ")
        )));
    }
    let delta2_one = comps.delta2.mul_vec(&t.a.unit);
    let mu3_one = comps.mu3.mul_vec(&t.b.unit);
    let repaired = TdComponents {
        delta1: comps.delta2.clone(),
        delta2: comps.delta2.clone(),
        delta3: comps.delta2.sub(&t.a.left_op(&delta2_one)?),
        mu1: comps.mu3.clone(),
        mu2: comps.mu3.sub(&t.b.right_op(&mu3_one)?),
        mu3: comps.mu3.clone(),
        ..comps.clone()
    };
    assemble_td(t, &repaired)
}

/// Triangular inner criterion: a ternary derivation of `t.algebra` is inner
/// exactly when `tau1(m) = a1 m + m b1` is solvable for fixed `a1` in A and
/// `b1` in B; requires M faithful on both sides. Returns the witness pair.
pub fn is_inner_terder_triangular(
    t: &TriangularAlgebra,
    triple: &TernaryTriple,
) -> Result<Option<(Vector, Vector)>> {
    let (left_faithful, right_faithful) = t.m.is_faithful();
    if !left_faithful || !right_faithful {
        return Err(Error::NotFaithful(
            "the triangular inner criterion needs a two-sided faithful bimodule".into(),
        ));
    }
    let comps = extract_td(t, triple)?;
    let (da, db, dm) = (t.a.dim, t.b.dim, t.m.dim);
    let mut rows = Vec::with_capacity(dm * dm);
    let mut rhs = Vec::with_capacity(dm * dm);
    for j in 0..dm {
        for k in 0..dm {
            let mut row = zeros(da + db);
            for i in 0..da {
                row[i] = t.m.left[i][(k, j)].clone();
            }
            for l in 0..db {
                row[da + l] = t.m.right[l][(k, j)].clone();
            }
            rows.push(row);
            rhs.push(comps.tau1[(k, j)].clone());
        }
    }
    match Matrix::from_rows(rows).expect("rectangular rows").solve(&rhs) {
        Ok(sol) => {
            let a1 = sol[..da].to_vec();
            let b1 = sol[da..].to_vec();
            debug_assert!({
                let lhs = t.m.lambda(&a1)?.add(&t.m.rho(&b1)?);
                lhs == comps.tau1
            });
            Ok(Some((a1, b1)))
        }
        Err(Error::NoSolution) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Factors an M-preserving automorphism as an inner automorphism composed
/// with an automorphism fixing p: `sigma = In(conjugator) . tau` with
/// `tau(p) = p`.
pub fn factor_automorphism(t: &TriangularAlgebra, sigma: &Matrix) -> Result<FactorResult> {
    if !is_automorphism(&t.algebra, sigma) {
        return Err(Error::NotAnAutomorphism);
    }
    if !t.preserves_m_block(sigma) {
        return Err(Error::NotMPreserving(
            "sigma does not map the M block onto itself".into(),
        ));
    }
    let sp = sigma.mul_vec(&t.p);
    let (a_part, m_p, b_part) = t.block_extract(&sp)?;
    if a_part != t.a.unit || !vec_is_zero(&b_part) {
        return Err(Error::NotMPreserving(
            "sigma(p) does not have the form (1_A, m, 0)".into(),
        ));
    }
    let conjugator = t.block_embed(&t.a.unit, &vec_neg(&m_p), &t.b.unit)?;
    let conj_inv = t.algebra.invert_element(&conjugator)?;
    let tau = inner_automorphism(&t.algebra, &conj_inv)?.mul(sigma);
    if tau.mul_vec(&t.p) != t.p {
        return Err(Error::NotMPreserving(
            "factored automorphism does not fix p".into(),
        ));
    }
    debug_assert!(inner_automorphism(&t.algebra, &conjugator)?.mul(&tau) == *sigma);
    Ok(FactorResult { conjugator, tau })
}

/// Splits a derivation as `d = inner_part + d0` with `d0(p) = 0`, where
/// `inner_part = ad(-d(p))` and `d0 = d + ad(d(p))`.
pub fn split_derivation(t: &TriangularAlgebra, d: &Matrix) -> Result<SplitResult> {
    if !is_derivation(&t.algebra, d) {
        return Err(Error::NotADerivation);
    }
    let dp = d.mul_vec(&t.p);
    let ad_dp = ad(&t.algebra, &dp)?;
    let d0 = d.add(&ad_dp);
    let inner_part = ad_dp.neg();
    debug_assert!(inner_part.add(&d0) == *d);
    debug_assert!(vec_is_zero(&d0.mul_vec(&t.p)));
    Ok(SplitResult { inner_part, d0 })
}

/// Canonical basis of the derivations of `t.algebra` vanishing at p.
pub fn der0_space(t: &TriangularAlgebra) -> Vec<Matrix> {
    let n = t.dim();
    let mut rows = leibniz_rows(&t.algebra);
    for k in 0..n {
        let mut row = zeros(n * n);
        for (c, pc) in t.p.iter().enumerate() {
            if !pc.is_zero() {
                row[k * n + c] = pc.clone();
            }
        }
        rows.push(row);
    }
    let rows = crate::matrix::compress_rows(rows);
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

/// Canonical basis of the span of `ad((a, 0, b))` over A- and B-basis
/// elements: the inner derivations vanishing at p.
pub fn innder0_space(t: &TriangularAlgebra) -> Result<Vec<Matrix>> {
    let n = t.dim();
    let mut gens = Vec::with_capacity(t.a.dim + t.b.dim);
    for i in 0..t.a.dim {
        let u = t.embed_a(&t.a.basis_element(i))?;
        gens.push(ad(&t.algebra, &u)?.to_flat());
    }
    for j in 0..t.b.dim {
        let u = t.embed_b(&t.b.basis_element(j))?;
        gens.push(ad(&t.algebra, &u)?.to_flat());
    }
    Ok(row_space_canonical(&gens)
        .into_iter()
        .map(|v| Matrix::from_flat(n, n, v).expect("length"))
        .collect())
}

/// Whether `(alpha, Tmap, beta)` satisfies the pullback condition
/// `Tmap(a m b) = alpha(a) Tmap(m) beta(b)` on all basis triples.
pub fn aut0_pullback_check(
    t: &TriangularAlgebra,
    tmap: &Matrix,
    alpha: &Matrix,
    beta: &Matrix,
) -> Result<bool> {
    if !is_automorphism(&t.a, alpha) || !is_automorphism(&t.b, beta) {
        return Err(Error::InputNotAutomorphism);
    }
    if !tmap.is_square() || tmap.rows() != t.m.dim || !tmap.is_invertible() {
        return Err(Error::InputNotAutomorphism);
    }
    for i in 0..t.a.dim {
        for j in 0..t.b.dim {
            let lhs = tmap.mul(&t.m.left[i]).mul(&t.m.right[j]);
            let rhs = t
                .m
                .lambda(&alpha.column(i))?
                .mul(&t.m.rho(&beta.column(j))?)
                .mul(tmap);
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Builds the block-diagonal automorphism `(alpha, Tmap, beta)` of
/// `t.algebra`; it fixes p and exists exactly when the pullback condition
/// holds.
pub fn build_aut0(
    t: &TriangularAlgebra,
    tmap: &Matrix,
    alpha: &Matrix,
    beta: &Matrix,
) -> Result<Matrix> {
    if !aut0_pullback_check(t, tmap, alpha, beta)? {
        return Err(Error::NotInPullback);
    }
    let s = t.block_diagonal_endo(alpha, tmap, beta)?;
    debug_assert!(is_automorphism(&t.algebra, &s));
    debug_assert!(s.mul_vec(&t.p) == t.p);
    Ok(s)
}

/// Reads the block data `(delta, tau, mu, n)` of an ordinary derivation;
/// `n` is the M-part of `d(p)`.
pub fn extract_derivation_blocks(t: &TriangularAlgebra, d: &Matrix) -> Result<DerivationBlocks> {
    if !is_derivation(&t.algebra, d) {
        return Err(Error::NotADerivation);
    }
    let blocks = DerivationBlocks {
        delta: block(d, &t.a_range, &t.a_range),
        tau: block(d, &t.m_range, &t.m_range),
        mu: block(d, &t.b_range, &t.b_range),
        n: m_part(t, &d.mul_vec(&t.p)),
    };
    let rebuilt = assemble_derivation(t, &blocks)?;
    if &rebuilt != d {
        return Err(Error::TdConditionsViolated(
            "derivation does not have the triangular block form".into(),
        ));
    }
    Ok(blocks)
}

/// Assembles the derivation matrix determined by block data: diagonal action
/// `(delta, tau, mu)` with corner columns `a n` on A and `-n b` on B.
pub fn assemble_derivation(t: &TriangularAlgebra, blocks: &DerivationBlocks) -> Result<Matrix> {
    let comps = TdComponents {
        delta1: blocks.delta.clone(),
        delta2: blocks.delta.clone(),
        delta3: blocks.delta.clone(),
        tau1: blocks.tau.clone(),
        tau2: blocks.tau.clone(),
        tau3: blocks.tau.clone(),
        mu1: blocks.mu.clone(),
        mu2: blocks.mu.clone(),
        mu3: blocks.mu.clone(),
        n1: blocks.n.clone(),
        n1p: vec_neg(&blocks.n),
        n2: blocks.n.clone(),
    };
    Ok(assemble_td_raw(t, &comps)?.d1)
}

/// Canonical basis of the solution space of the block system for derivations
/// vanishing at p: triples `(delta, tau, mu)` with delta and mu derivations
/// and `tau(am) = delta(a)m + a tau(m)`, `tau(mb) = tau(m)b + m mu(b)`.
/// This is an independent route to `der0_space` via the diagonal embedding.
pub fn der0_block_space(t: &TriangularAlgebra) -> Vec<(Matrix, Matrix, Matrix)> {
    let (da, dm, db) = (t.a.dim, t.m.dim, t.b.dim);
    let (na, nm, nb) = (da * da, dm * dm, db * db);
    let total = na + nm + nb;
    let mut rows = Vec::new();
    for row in leibniz_rows(&t.a) {
        let mut full = zeros(total);
        full[..na].clone_from_slice(&row);
        rows.push(full);
    }
    for row in leibniz_rows(&t.b) {
        let mut full = zeros(total);
        full[na + nm..].clone_from_slice(&row);
        rows.push(full);
    }
    // tau lambda(e_i) - lambda(e_i) tau - lambda(delta(e_i)) = 0
    for i in 0..da {
        let lam = &t.m.left[i];
        for r in 0..dm {
            for c in 0..dm {
                let mut full = zeros(total);
                for s in 0..dm {
                    if !lam[(s, c)].is_zero() {
                        full[na + r * dm + s] += &lam[(s, c)];
                    }
                    if !lam[(r, s)].is_zero() {
                        full[na + s * dm + c] -= &lam[(r, s)];
                    }
                }
                for u in 0..da {
                    if !t.m.left[u][(r, c)].is_zero() {
                        full[u * da + i] -= &t.m.left[u][(r, c)];
                    }
                }
                rows.push(full);
            }
        }
    }
    // tau rho(f_j) - rho(f_j) tau - rho(mu(f_j)) = 0
    for j in 0..db {
        let rho = &t.m.right[j];
        for r in 0..dm {
            for c in 0..dm {
                let mut full = zeros(total);
                for s in 0..dm {
                    if !rho[(s, c)].is_zero() {
                        full[na + r * dm + s] += &rho[(s, c)];
                    }
                    if !rho[(r, s)].is_zero() {
                        full[na + s * dm + c] -= &rho[(r, s)];
                    }
                }
                for u in 0..db {
                    if !t.m.right[u][(r, c)].is_zero() {
                        full[na + nm + u * db + j] -= &t.m.right[u][(r, c)];
                    }
                }
                rows.push(full);
            }
        }
    }
    let rows = crate::matrix::compress_rows(rows);
    let kernel = if rows.is_empty() {
        (0..total).map(|i| unit_vec(total, i)).collect()
    } else {
        Matrix::from_rows(rows).expect("rectangular rows").kernel()
    };
    kernel
        .into_iter()
        .map(|v| {
            (
                Matrix::from_flat(da, da, v[..na].to_vec()).expect("length"),
                Matrix::from_flat(dm, dm, v[na..na + nm].to_vec()).expect("length"),
                Matrix::from_flat(db, db, v[na + nm..].to_vec()).expect("length"),
            )
        })
        .collect()
}
