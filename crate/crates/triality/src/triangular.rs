//! Triangular algebras built from two algebras and a connecting bimodule.
//!
//! Elements are triples `(a, m, b)` with coordinates ordered `[A | M | B]` and
//! multiplication `(a, m, b)(a', m', b') = (a a', a m' + m b', b b')`. The
//! struct keeps the two corner algebras, the bimodule, the coordinate ranges
//! of the three blocks, and the standard idempotents `p = (1_A, 0, 0)` and
//! `q = 1 - p`.

use std::ops::Range;

use serde::Serialize;

use crate::algebra::Algebra;
use crate::bimodule::Bimodule;
use crate::error::{Error, Result};
use crate::matrix::{compress_rows, unit_vec, vec_is_zero, zeros, Matrix, Vector};
use crate::rational::Rational;

/// A triangular algebra together with its building data.
#[derive(Clone, Debug)]
pub struct TriangularAlgebra {
    pub algebra: Algebra,
    pub a: Algebra,
    pub b: Algebra,
    pub m: Bimodule,
    pub a_range: Range<usize>,
    pub m_range: Range<usize>,
    pub b_range: Range<usize>,
    /// `(1_A, 0, 0)`.
    pub p: Vector,
    /// `(0, 0, 1_B)`.
    pub q: Vector,
}

/// Builds the triangular algebra of `(a, b, m)`; validates all inputs and the
/// assembled structure-constant table.
pub fn build_triangular(a: Algebra, b: Algebra, m: Bimodule) -> Result<TriangularAlgebra> {
    let a = a.validated()?;
    let b = b.validated()?;
    let m = m.validated(&a, &b)?;
    let (da, dm, db) = (a.dim, m.dim, b.dim);
    let dim = da + dm + db;
    let a_range = 0..da;
    let m_range = da..da + dm;
    let b_range = da + dm..dim;

    let mut table = vec![vec![zeros(dim); dim]; dim];
    // A * A stays in A.
    for i in 0..da {
        for j in 0..da {
            for k in 0..da {
                table[i][j][k] = a.table[i][j][k].clone();
            }
        }
    }
    // B * B stays in B.
    for i in 0..db {
        for j in 0..db {
            for k in 0..db {
                table[da + dm + i][da + dm + j][da + dm + k] = b.table[i][j][k].clone();
            }
        }
    }
    // A * M and M * B land in M; every other mixed product is zero.
    for i in 0..da {
        for j in 0..dm {
            for k in 0..dm {
                table[i][da + j][da + k] = m.left[i][(k, j)].clone();
            }
        }
    }
    for i in 0..dm {
        for j in 0..db {
            for k in 0..dm {
                table[da + i][da + dm + j][da + k] = m.right[j][(k, i)].clone();
            }
        }
    }

    let mut unit = zeros(dim);
    unit[..da].clone_from_slice(&a.unit);
    for k in 0..db {
        unit[da + dm + k] = b.unit[k].clone();
    }
    let basis = a
        .basis
        .iter()
        .map(|s| format!("A:{s}"))
        .chain((0..dm).map(|i| format!("M:{i}")))
        .chain(b.basis.iter().map(|s| format!("B:{s}")))
        .collect();

    let algebra = Algebra {
        dim,
        basis,
        unit,
        table,
    }
    .validated()?;

    let mut p = zeros(dim);
    p[..da].clone_from_slice(&a.unit);
    let mut q = zeros(dim);
    for k in 0..db {
        q[da + dm + k] = b.unit[k].clone();
    }

    Ok(TriangularAlgebra {
        algebra,
        a,
        b,
        m,
        a_range,
        m_range,
        b_range,
        p,
        q,
    })
}

impl TriangularAlgebra {
    pub fn dim(&self) -> usize {
        self.algebra.dim
    }

    /// Splits an element of the triangular algebra into its `(a, m, b)` parts.
    pub fn block_extract(&self, e: &[Rational]) -> Result<(Vector, Vector, Vector)> {
        if e.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "element has {} coordinates, algebra has dimension {}",
                e.len(),
                self.dim()
            )));
        }
        Ok((
            e[self.a_range.clone()].to_vec(),
            e[self.m_range.clone()].to_vec(),
            e[self.b_range.clone()].to_vec(),
        ))
    }

    /// Assembles `(a, m, b)` parts into an element of the triangular algebra.
    pub fn block_embed(&self, a: &[Rational], m: &[Rational], b: &[Rational]) -> Result<Vector> {
        if a.len() != self.a.dim || m.len() != self.m.dim || b.len() != self.b.dim {
            return Err(Error::DimensionMismatch(format!(
                "block sizes ({}, {}, {}) do not match ({}, {}, {})",
                a.len(),
                m.len(),
                b.len(),
                self.a.dim,
                self.m.dim,
                self.b.dim
            )));
        }
        let mut out = Vector::with_capacity(self.dim());
        out.extend(a.iter().cloned());
        out.extend(m.iter().cloned());
        out.extend(b.iter().cloned());
        Ok(out)
    }

    pub fn embed_a(&self, a: &[Rational]) -> Result<Vector> {
        self.block_embed(a, &zeros(self.m.dim), &zeros(self.b.dim))
    }

    pub fn embed_m(&self, m: &[Rational]) -> Result<Vector> {
        self.block_embed(&zeros(self.a.dim), m, &zeros(self.b.dim))
    }

    pub fn embed_b(&self, b: &[Rational]) -> Result<Vector> {
        self.block_embed(&zeros(self.a.dim), &zeros(self.m.dim), b)
    }

    /// The block-diagonal endomorphism acting by `fa`, `fm`, `fb` on the three
    /// blocks.
    pub fn block_diagonal_endo(&self, fa: &Matrix, fm: &Matrix, fb: &Matrix) -> Result<Matrix> {
        let (da, dm, db) = (self.a.dim, self.m.dim, self.b.dim);
        if !(fa.rows() == da && fa.cols() == da && fm.rows() == dm && fm.cols() == dm && fb.rows() == db && fb.cols() == db)
        {
            return Err(Error::DimensionMismatch("block endomorphism sizes".into()));
        }
        let n = self.dim();
        let mut out = Matrix::zeros(n, n);
        for i in 0..da {
            for j in 0..da {
                out[(i, j)] = fa[(i, j)].clone();
            }
        }
        for i in 0..dm {
            for j in 0..dm {
                out[(da + i, da + j)] = fm[(i, j)].clone();
            }
        }
        for i in 0..db {
            for j in 0..db {
                out[(da + dm + i, da + dm + j)] = fb[(i, j)].clone();
            }
        }
        Ok(out)
    }

    /// Whether an endomorphism maps the `M`-block into itself.
    pub fn preserves_m_block(&self, s: &Matrix) -> bool {
        if s.rows() != self.dim() || s.cols() != self.dim() {
            return false;
        }
        self.m_range.clone().all(|c| {
            let img = s.column(c);
            self.a_range.clone().all(|r| img[r].is_zero())
                && self.b_range.clone().all(|r| img[r].is_zero())
        })
    }

    /// Canonical basis of the fibered product
    /// `{(a, b) : a central in A, b central in B, lambda(a) = rho(b)}`,
    /// embedded into the triangular algebra as `(a, 0, b)`.
    pub fn center_pullback(&self) -> Vec<Vector> {
        let (da, db, dm) = (self.a.dim, self.b.dim, self.m.dim);
        let unknowns = da + db;
        let mut rows = Vec::new();
        // a central in A.
        for i in 0..da {
            for k in 0..da {
                let mut row = zeros(unknowns);
                for r in 0..da {
                    row[r] = &self.a.table[i][r][k] - &self.a.table[r][i][k];
                }
                rows.push(row);
            }
        }
        // b central in B.
        for i in 0..db {
            for k in 0..db {
                let mut row = zeros(unknowns);
                for r in 0..db {
                    row[da + r] = &self.b.table[i][r][k] - &self.b.table[r][i][k];
                }
                rows.push(row);
            }
        }
        // lambda(a) = rho(b) as operators on M.
        for r in 0..dm {
            for c in 0..dm {
                let mut row = zeros(unknowns);
                for i in 0..da {
                    row[i] = self.m.left[i][(r, c)].clone();
                }
                for j in 0..db {
                    row[da + j] = -&self.m.right[j][(r, c)];
                }
                rows.push(row);
            }
        }
        let rows = compress_rows(rows);
        let pairs = if rows.is_empty() {
            (0..unknowns).map(|i| unit_vec(unknowns, i)).collect()
        } else {
            Matrix::from_rows(rows).expect("rectangular rows").kernel()
        };
        pairs
            .into_iter()
            .map(|v| {
                self.block_embed(&v[..da], &zeros(dm), &v[da..])
                    .expect("block sizes")
            })
            .collect()
    }
}

/// Serializable summary of a triangular algebra: the assembled table plus the
/// block layout.
#[derive(Serialize)]
pub struct TriangularSummary {
    pub algebra: Algebra,
    pub a_range: [usize; 2],
    pub m_range: [usize; 2],
    pub b_range: [usize; 2],
    pub p: Vector,
    pub q: Vector,
}

impl TriangularAlgebra {
    pub fn summary(&self) -> TriangularSummary {
        TriangularSummary {
            algebra: self.algebra.clone(),
            a_range: [self.a_range.start, self.a_range.end],
            m_range: [self.m_range.start, self.m_range.end],
            b_range: [self.b_range.start, self.b_range.end],
            p: self.p.clone(),
            q: self.q.clone(),
        }
    }
}

/// `p` and `q` are orthogonal idempotents summing to the unit.
pub fn idempotents_wellformed(t: &TriangularAlgebra) -> bool {
    let alg = &t.algebra;
    let pp = alg.mul(&t.p, &t.p).expect("sizes");
    let qq = alg.mul(&t.q, &t.q).expect("sizes");
    let pq = alg.mul(&t.p, &t.q).expect("sizes");
    let qp = alg.mul(&t.q, &t.p).expect("sizes");
    pp == t.p
        && qq == t.q
        && vec_is_zero(&pq)
        && vec_is_zero(&qp)
        && crate::matrix::vec_add(&t.p, &t.q) == alg.unit
}
