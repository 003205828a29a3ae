//! Builtin named algebras, triangular algebras, and example objects, plus the
//! JSON wire format for triangular-algebra specification files.
//!
//! Algebra preset names: `Q` (the rationals), `T<n>` (upper-triangular n x n
//! matrices), `M<n>` (full n x n matrices), `P<n>` (truncated polynomials
//! `Q[x]/(x^n)`), and `Dual1` (the dual numbers, same as `P2`). Triangular
//! preset names: `trian-QQQ`, `trian-T2T2T2`, `trian-Dual1`, each with the
//! regular bimodule.

use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::bimodule::Bimodule;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rational::Rational;
use crate::tri_ternary::TdComponents;
use crate::triangular::{build_triangular, TriangularAlgebra};

const MAX_PARAMETRIC_SIZE: usize = 12;

fn parametric(name: &str, prefix: char) -> Option<usize> {
    let rest = name.strip_prefix(prefix)?;
    let n: usize = rest.parse().ok()?;
    (1..=MAX_PARAMETRIC_SIZE).contains(&n).then_some(n)
}

/// Resolves an algebra preset name.
pub fn algebra_preset(name: &str) -> Result<Algebra> {
    if name == "Q" {
        return Ok(Algebra::rationals());
    }
    if name == "Dual1" {
        return Ok(Algebra::truncated_polynomial(2));
    }
    if let Some(n) = parametric(name, 'T') {
        return Ok(Algebra::upper_triangular(n));
    }
    if let Some(n) = parametric(name, 'M') {
        return Ok(Algebra::full_matrix(n));
    }
    if let Some(n) = parametric(name, 'P') {
        return Ok(Algebra::truncated_polynomial(n));
    }
    Err(Error::UnknownPreset(name.into()))
}

/// Resolves a triangular preset name.
pub fn triangular_preset(name: &str) -> Result<TriangularAlgebra> {
    let (a, b) = match name {
        "trian-QQQ" => (Algebra::rationals(), Algebra::rationals()),
        "trian-T2T2T2" => (Algebra::upper_triangular(2), Algebra::upper_triangular(2)),
        "trian-Dual1" => (
            Algebra::truncated_polynomial(2),
            Algebra::truncated_polynomial(2),
        ),
        _ => return Err(Error::UnknownPreset(name.into())),
    };
    let m = Bimodule::regular(&a);
    build_triangular(a, b, m)
}

/// Whether the name resolves to a triangular preset.
pub fn is_triangular_preset(name: &str) -> bool {
    matches!(name, "trian-QQQ" | "trian-T2T2T2" | "trian-Dual1")
}

/// The swap automorphism of `trian-T2T2T2` as an explicit 9 x 9 matrix, in
/// coordinates `[A: e11, e12, e22 | M: e11, e12, e22 | B: e11, e12, e22]`.
/// It is an involution and does not preserve the M block.
pub fn jondrup_sigma() -> Matrix {
    let images = [0usize, 3, 6, 1, 4, 7, 2, 5, 8];
    let mut s = Matrix::zeros(9, 9);
    for (col, &row) in images.iter().enumerate() {
        s[(row, col)] = Rational::one();
    }
    s
}

/// The partial component family on `trian-Dual1` whose delta and mu triples
/// fail to be ternary derivations while both bimodule conditions hold:
/// `delta2 = mu3 = tau1 = tau2 = tau3 = d` with `d(1) = 0`, `d(x) = x`, and
/// every other block zero.
pub fn example_4_2_components() -> TdComponents {
    let t = triangular_preset("trian-Dual1").expect("builtin");
    let mut d = Matrix::zeros(2, 2);
    d[(1, 1)] = Rational::one();
    TdComponents {
        delta2: d.clone(),
        tau1: d.clone(),
        tau2: d.clone(),
        tau3: d.clone(),
        mu3: d,
        ..TdComponents::zero(&t)
    }
}

/// A triangular-algebra specification as stored in JSON files: each part may
/// be inline data or a preset name, and the bimodule may be the string
/// `"regular"` (requires A = B).
#[derive(Clone, Serialize, Deserialize)]
pub struct TrianSpec {
    #[serde(rename = "A")]
    pub a: AlgebraRef,
    #[serde(rename = "B")]
    pub b: AlgebraRef,
    #[serde(rename = "M")]
    pub m: BimoduleRef,
}

/// An algebra given inline or by preset name.
#[derive(Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraRef {
    Name(String),
    Inline(Box<Algebra>),
}

impl AlgebraRef {
    pub fn resolve(&self) -> Result<Algebra> {
        match self {
            AlgebraRef::Name(name) => algebra_preset(name),
            AlgebraRef::Inline(a) => a.as_ref().clone().validated(),
        }
    }
}

/// A bimodule given inline or as the keyword `"regular"`.
#[derive(Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BimoduleRef {
    Keyword(String),
    Inline(Box<Bimodule>),
}

impl TrianSpec {
    pub fn resolve(&self) -> Result<TriangularAlgebra> {
        let a = self.a.resolve()?;
        let b = self.b.resolve()?;
        let m = match &self.m {
            BimoduleRef::Keyword(word) if word == "regular" => {
                if !crate::algebra::same_table(&a, &b) {
                    return Err(Error::InvalidBimodule(
                        "the regular bimodule requires A and B to share one multiplication table"
                            .into(),
                    ));
                }
                Bimodule::regular(&a)
            }
            BimoduleRef::Keyword(word) => {
                return Err(Error::Parse(format!(
                    "unknown bimodule keyword {word:?}; use \"regular\" or inline data"
                )))
            }
            BimoduleRef::Inline(m) => m.as_ref().clone(),
        };
        build_triangular(a, b, m)
    }

    pub fn named_regular(a: &str, b: &str) -> TrianSpec {
        TrianSpec {
            a: AlgebraRef::Name(a.into()),
            b: AlgebraRef::Name(b.into()),
            m: BimoduleRef::Keyword("regular".into()),
        }
    }
}

fn canonical_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("builtin data serializes");
    text.push('\n');
    text
}

/// The preset files shipped with the crate, as `(file name, canonical JSON)`
/// pairs; the repository copies under `presets/` must match these bytes.
pub fn shipped_presets() -> Vec<(&'static str, String)> {
    vec![
        ("T2.json", canonical_json(&Algebra::upper_triangular(2))),
        ("M2.json", canonical_json(&Algebra::full_matrix(2))),
        ("Dual1.json", canonical_json(&Algebra::truncated_polynomial(2))),
        (
            "trian-QQQ.json",
            canonical_json(&TrianSpec::named_regular("Q", "Q")),
        ),
        (
            "trian-T2T2T2.json",
            canonical_json(&TrianSpec::named_regular("T2", "T2")),
        ),
        (
            "trian-Dual1.json",
            canonical_json(&TrianSpec::named_regular("Dual1", "Dual1")),
        ),
        ("jondrup-sigma.json", canonical_json(&jondrup_sigma())),
        ("example-4-2.json", canonical_json(&example_4_2_components())),
    ]
}
