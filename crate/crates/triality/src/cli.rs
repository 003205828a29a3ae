//! Command-line interface: thirteen subcommands over a shared source
//! selection, each emitting one canonical JSON report.
//!
//! Sources: exactly one of `--preset NAME` (builtin), `--algebra PATH`
//! (algebra JSON), or `--trian PATH` (triangular specification JSON).
//! Exit codes: 0 on success, 1 for unusable input (parse, io, validation,
//! unknown preset), 2 when a mathematical precondition fails or a
//! verification check does not pass.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::matrix::{vec_is_zero, Matrix, SpanChecker, Vector};
use crate::presets::{algebra_preset, is_triangular_preset, triangular_preset, TrianSpec};
use crate::report::{ErrorInfo, Report};
use crate::ternary::{
    compose_terauto, compose_terder, decompose_terauto, decompose_terder, derivation_space,
    inner_automorphism, inner_derivation_space, is_automorphism, is_derivation,
    is_inner_derivation, is_inner_terder, is_terder, terder_space, TernaryTriple,
};
use crate::tri_ternary::{
    assemble_derivation, assemble_td, check_td_conditions, der0_block_space, der0_space,
    extract_td, factor_automorphism, innder0_space, is_inner_terder_triangular, repair_td,
    split_derivation, DerivationBlocks, TdComponents,
};
use crate::triangular::{idempotents_wellformed, TriangularAlgebra};
use crate::verify::{all_passed, verify_algebra_theorems, verify_triangular_theorems, Check};

#[derive(Parser)]
#[command(
    name = "triality",
    version,
    about = "Exact computation with ternary derivations and automorphisms of finite-dimensional algebras"
)]
pub struct Cli {
    /// Write the JSON report to this file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

/// Exactly one input source.
#[derive(Args)]
#[group(required = true, multiple = false)]
pub struct SourceArgs {
    /// Builtin preset name (for example T2, M3, Dual1, trian-T2T2T2).
    #[arg(long, value_name = "NAME")]
    pub preset: Option<String>,
    /// JSON file containing an algebra.
    #[arg(long, value_name = "PATH")]
    pub algebra: Option<PathBuf>,
    /// JSON file containing a triangular-algebra specification.
    #[arg(long, value_name = "PATH")]
    pub trian: Option<PathBuf>,
}

#[derive(Args)]
pub struct TripleArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// JSON file containing a ternary triple (keys d1,d2,d3 or s1,s2,s3).
    #[arg(long, value_name = "PATH")]
    pub triple: PathBuf,
}

#[derive(Args)]
pub struct ComponentsArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// JSON file containing block components.
    #[arg(long, value_name = "PATH")]
    pub components: PathBuf,
}

#[derive(Args)]
pub struct SigmaArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// JSON file containing an automorphism matrix.
    #[arg(long, value_name = "PATH")]
    pub sigma: PathBuf,
}

#[derive(Args)]
pub struct EndoArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// JSON file containing an endomorphism matrix.
    #[arg(long, value_name = "PATH")]
    pub endo: PathBuf,
}

/// Exactly one object to test for inner-ness.
#[derive(Args)]
#[group(required = true, multiple = false)]
pub struct ProbeArgs {
    /// JSON file containing a ternary triple to test.
    #[arg(long, value_name = "PATH")]
    pub triple: Option<PathBuf>,
    /// JSON file containing an endomorphism matrix to test.
    #[arg(long, value_name = "PATH")]
    pub endo: Option<PathBuf>,
}

#[derive(Args)]
pub struct InnerArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub probe: ProbeArgs,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Seed for the randomized property trials.
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
}

#[derive(Subcommand)]
pub enum Command {
    /// Compute the derivation Lie algebra and its inner part.
    Der(SourceArgs),
    /// Compute the space of ternary derivations.
    Terder(SourceArgs),
    /// Factor a ternary derivation as (d + L_x + R_y, d + L_x, d + R_y).
    Decompose(TripleArgs),
    /// Factor a ternary automorphism as (R_y L_x s, L_x s, R_y s).
    DecomposeAuto(TripleArgs),
    /// Test a derivation or a ternary derivation for inner-ness.
    InnerCheck(InnerArgs),
    /// Read off the block components of a ternary derivation.
    TdExtract(TripleArgs),
    /// Complete partial block components to a ternary derivation.
    TdRepair(ComponentsArgs),
    /// Compute the center, with the pullback description when triangular.
    Center(SourceArgs),
    /// Build a triangular algebra and summarize its structure.
    TrianBuild(SourceArgs),
    /// Factor an M-preserving automorphism through the corner idempotent.
    Factor(SigmaArgs),
    /// Split a derivation into a corner-inner part and one vanishing at p.
    Split(EndoArgs),
    /// Compute the derivations vanishing at p, with their inner subspace.
    Der0(SourceArgs),
    /// Run the machine-verification suite and report per-theorem results.
    VerifyTheorems(VerifyArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Der(_) => "der",
            Command::Terder(_) => "terder",
            Command::Decompose(_) => "decompose",
            Command::DecomposeAuto(_) => "decompose-auto",
            Command::InnerCheck(_) => "inner-check",
            Command::TdExtract(_) => "td-extract",
            Command::TdRepair(_) => "td-repair",
            Command::Center(_) => "center",
            Command::TrianBuild(_) => "trian-build",
            Command::Factor(_) => "factor",
            Command::Split(_) => "split",
            Command::Der0(_) => "der0",
            Command::VerifyTheorems(_) => "verify-theorems",
        }
    }

    fn source(&self) -> &SourceArgs {
        match self {
            Command::Der(s)
            | Command::Terder(s)
            | Command::Center(s)
            | Command::TrianBuild(s)
            | Command::Der0(s) => s,
            Command::Decompose(a) | Command::DecomposeAuto(a) | Command::TdExtract(a) => &a.source,
            Command::InnerCheck(a) => &a.source,
            Command::TdRepair(a) => &a.source,
            Command::Factor(a) => &a.source,
            Command::Split(a) => &a.source,
            Command::VerifyTheorems(a) => &a.source,
        }
    }

    fn extra_inputs(&self) -> Vec<(&'static str, &Path)> {
        match self {
            Command::Decompose(a) | Command::DecomposeAuto(a) | Command::TdExtract(a) => {
                vec![("triple", a.triple.as_path())]
            }
            Command::InnerCheck(a) => {
                let mut extras = Vec::new();
                if let Some(p) = &a.probe.triple {
                    extras.push(("triple", p.as_path()));
                }
                if let Some(p) = &a.probe.endo {
                    extras.push(("endo", p.as_path()));
                }
                extras
            }
            Command::TdRepair(a) => vec![("components", a.components.as_path())],
            Command::Factor(a) => vec![("sigma", a.sigma.as_path())],
            Command::Split(a) => vec![("endo", a.endo.as_path())],
            _ => Vec::new(),
        }
    }
}

/// The resolved input: either a plain algebra or a triangular algebra.
#[derive(Debug)]
enum SourceObject {
    Plain(Algebra),
    Triangular(Box<TriangularAlgebra>),
}

impl SourceObject {
    fn algebra(&self) -> &Algebra {
        match self {
            SourceObject::Plain(a) => a,
            SourceObject::Triangular(t) => &t.algebra,
        }
    }

    fn triangular(&self, command: &str) -> Result<&TriangularAlgebra> {
        match self {
            SourceObject::Triangular(t) => Ok(t),
            SourceObject::Plain(_) => Err(Error::InvalidAlgebra(format!(
                "the {command} command needs a triangular algebra; use --trian or a trian-* preset"
            ))),
        }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn resolve_source(source: &SourceArgs) -> Result<SourceObject> {
    if let Some(name) = &source.preset {
        if is_triangular_preset(name) {
            return Ok(SourceObject::Triangular(Box::new(triangular_preset(name)?)));
        }
        return Ok(SourceObject::Plain(algebra_preset(name)?));
    }
    if let Some(path) = &source.algebra {
        let alg: Algebra = read_json(path)?;
        return Ok(SourceObject::Plain(alg.validated()?));
    }
    let path = source.trian.as_ref().expect("clap enforces the source group");
    let spec: TrianSpec = read_json(path)?;
    Ok(SourceObject::Triangular(Box::new(spec.resolve()?)))
}

fn check(tag: &str, passed: bool, details: impl Into<String>) -> Check {
    Check {
        tag: tag.to_string(),
        passed,
        details: details.into(),
    }
}

fn check_square(name: &str, m: &Matrix, n: usize) -> Result<()> {
    if m.rows() != n || m.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "{name} is {}x{}, expected {n}x{n}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

fn check_triple_dim(triple: &TernaryTriple, n: usize) -> Result<()> {
    if triple.dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "triple acts on dimension {}, the algebra has dimension {n}",
            triple.dim()
        )));
    }
    Ok(())
}

/// Parses the process arguments, runs one command, writes one report, and
/// returns the exit code.
pub fn run() -> i32 {
    match Cli::try_parse() {
        Ok(cli) => execute(cli),
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            code
        }
    }
}

fn execute(cli: Cli) -> i32 {
    let name = cli.command.name();
    let mut inputs = BTreeMap::new();
    let source = cli.command.source();
    if let Some(preset) = &source.preset {
        inputs.insert("preset".to_string(), preset.clone());
    }
    if let Some(path) = &source.algebra {
        inputs.insert("algebra".to_string(), path.display().to_string());
    }
    if let Some(path) = &source.trian {
        inputs.insert("trian".to_string(), path.display().to_string());
    }
    for (key, path) in cli.command.extra_inputs() {
        inputs.insert(key.to_string(), path.display().to_string());
    }
    let seed = match &cli.command {
        Command::VerifyTheorems(a) => Some(a.seed),
        _ => None,
    };

    let (mut report, code) = match dispatch(&cli.command) {
        Ok((result, checks)) => {
            let ok = all_passed(&checks);
            let mut report = Report::success(name, inputs, result, checks);
            if ok {
                (report, 0)
            } else {
                report.ok = false;
                report.error = Some(ErrorInfo::from(&Error::VerificationFailed));
                (report, Error::VerificationFailed.exit_code())
            }
        }
        Err(e) => (Report::failure(name, inputs, &e), e.exit_code()),
    };
    if let Some(seed) = seed {
        report = report.with_seed(seed);
    }
    match emit(&report.render(), cli.out.as_deref()) {
        Ok(()) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn emit(text: &str, out: Option<&Path>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes())
        }
    }
}

fn dispatch(command: &Command) -> Result<(Value, Vec<Check>)> {
    let object = resolve_source(command.source())?;
    match command {
        Command::Der(_) => cmd_der(&object),
        Command::Terder(_) => cmd_terder(&object),
        Command::Decompose(args) => cmd_decompose(&object, &read_json(&args.triple)?),
        Command::DecomposeAuto(args) => cmd_decompose_auto(&object, &read_json(&args.triple)?),
        Command::InnerCheck(args) => cmd_inner_check(&object, &args.probe),
        Command::TdExtract(args) => cmd_td_extract(&object, &read_json(&args.triple)?),
        Command::TdRepair(args) => cmd_td_repair(&object, &read_json(&args.components)?),
        Command::Center(_) => cmd_center(&object),
        Command::TrianBuild(_) => cmd_trian_build(&object),
        Command::Factor(args) => cmd_factor(&object, &read_json(&args.sigma)?),
        Command::Split(args) => cmd_split(&object, &read_json(&args.endo)?),
        Command::Der0(_) => cmd_der0(&object),
        Command::VerifyTheorems(args) => cmd_verify(&object, args.seed),
    }
}

fn cmd_der(object: &SourceObject) -> Result<(Value, Vec<Check>)> {
    let alg = object.algebra();
    let der = derivation_space(alg);
    let inner = inner_derivation_space(alg);
    let flats: Vec<Vector> = der.iter().map(Matrix::to_flat).collect();
    let span = SpanChecker::new(&flats);
    let checks = vec![
        check(
            "Der-basis",
            der.iter().all(|d| is_derivation(alg, d)),
            format!("{} basis elements satisfy the Leibniz rule", der.len()),
        ),
        check(
            "Innder-contained",
            inner.iter().all(|g| span.contains(&g.to_flat())),
            format!(
                "{} inner generators lie in the derivation space",
                inner.len()
            ),
        ),
    ];
    let result = json!({
        "dim": der.len(),
        "basis": der,
        "inner": {"dim": inner.len(), "basis": inner},
    });
    Ok((result, checks))
}

fn cmd_terder(object: &SourceObject) -> Result<(Value, Vec<Check>)> {
    let alg = object.algebra();
    let ter = terder_space(alg);
    let der = derivation_space(alg);
    let checks = vec![
        check(
            "TerDer-basis",
            ter.iter().all(|t| is_terder(alg, t)),
            format!("{} basis triples satisfy the defining identity", ter.len()),
        ),
        check(
            "Cor3.2-dimension",
            ter.len() == der.len() + 2 * alg.dim,
            format!(
                "dim TerDer = {}, dim Der = {}, dim algebra = {}",
                ter.len(),
                der.len(),
                alg.dim
            ),
        ),
    ];
    let result = json!({"dim": ter.len(), "basis": ter});
    Ok((result, checks))
}

fn cmd_decompose(object: &SourceObject, triple: &TernaryTriple) -> Result<(Value, Vec<Check>)> {
    let alg = object.algebra();
    check_triple_dim(triple, alg.dim)?;
    let dec = decompose_terder(alg, triple)?;
    let rebuilt = compose_terder(alg, &dec.d, &dec.x, &dec.y)?;
    let checks = vec![
        check(
            "derivation",
            is_derivation(alg, &dec.d),
            "the extracted d satisfies the Leibniz rule",
        ),
        check(
            "recompose",
            rebuilt == *triple,
            "(d, x, y) recomposes to the input triple",
        ),
    ];
    Ok((serde_json::to_value(&dec).expect("serializable"), checks))
}

fn cmd_decompose_auto(
    object: &SourceObject,
    triple: &TernaryTriple,
) -> Result<(Value, Vec<Check>)> {
    let alg = object.algebra();
    check_triple_dim(triple, alg.dim)?;
    let dec = decompose_terauto(alg, triple)?;
    let rebuilt = compose_terauto(alg, &dec.sigma, &dec.x, &dec.y)?;
    let checks = vec![
        check(
            "automorphism",
            is_automorphism(alg, &dec.sigma),
            "the extracted sigma is an algebra automorphism",
        ),
        check(
            "recompose",
            rebuilt == *triple,
            "(sigma, x, y) recomposes to the input triple",
        ),
    ];
    Ok((serde_json::to_value(&dec).expect("serializable"), checks))
}

fn cmd_inner_check(object: &SourceObject, probe: &ProbeArgs) -> Result<(Value, Vec<Check>)> {
    let alg = object.algebra();
    if let Some(path) = &probe.triple {
        let triple: TernaryTriple = read_json(path)?;
        check_triple_dim(&triple, alg.dim)?;
        let witness = is_inner_terder(alg, &triple)?;
        let mut checks = Vec::new();
        if let Some(w) = &witness {
            let rebuilt = crate::ternary::inner_terder_from(alg, &w.a, &w.b, &w.c)?;
            checks.push(check(
                "witness-rebuilds",
                rebuilt == triple,
                "(L_a + R_b, L_a + R_c, -L_c + R_b) reproduces the input",
            ));
        }
        if let SourceObject::Triangular(t) = object {
            let (lf, rf) = t.m.is_faithful();
            if lf && rf {
                let tri_route = is_inner_terder_triangular(t, &triple)?;
                checks.push(check(
                    "Thm4.7-vs-Thm4.4",
                    tri_route.is_some() == witness.is_some(),
                    "the triangular criterion agrees with the general one",
                ));
            }
        }
        let result = json!({
            "kind": "ternary-derivation",
            "inner": witness.is_some(),
            "witness": witness,
        });
        return Ok((result, checks));
    }
    let path = probe.endo.as_ref().expect("clap enforces the probe group");
    let d: Matrix = read_json(path)?;
    check_square("endomorphism", &d, alg.dim)?;
    if !is_derivation(alg, &d) {
        return Err(Error::NotADerivation);
    }
    let witness = is_inner_derivation(alg, &d)?;
    let mut checks = Vec::new();
    if let Some(z) = &witness {
        let rebuilt = alg.right_op(z)?.sub(&alg.left_op(z)?);
        checks.push(check(
            "witness-rebuilds",
            rebuilt == d,
            "R_z - L_z reproduces the input",
        ));
    }
    let result = json!({
        "kind": "derivation",
        "inner": witness.is_some(),
        "witness": witness,
    });
    Ok((result, checks))
}

fn cmd_td_extract(object: &SourceObject, triple: &TernaryTriple) -> Result<(Value, Vec<Check>)> {
    let t = object.triangular("td-extract")?;
    check_triple_dim(triple, t.dim())?;
    let comps = extract_td(t, triple)?;
    let conditions = check_td_conditions(t, &comps)?;
    let rebuilt = assemble_td(t, &comps)?;
    let checks = vec![
        check(
            "Thm4.1-conditions",
            conditions.all(),
            "conditions (i)-(iv) hold for the extracted components",
        ),
        check(
            "Thm4.1-roundtrip",
            rebuilt == *triple,
            "the components assemble back to the input triple",
        ),
    ];
    let result = json!({"components": comps, "conditions": conditions});
    Ok((result, checks))
}

fn cmd_td_repair(object: &SourceObject, comps: &TdComponents) -> Result<(Value, Vec<Check>)> {
    let t = object.triangular("td-repair")?;
    let repaired = repair_td(t, comps)?;
    let out = extract_td(t, &repaired)?;
    let pinned = out.delta2 == comps.delta2
        && out.mu3 == comps.mu3
        && out.tau1 == comps.tau1
        && out.tau2 == comps.tau2
        && out.tau3 == comps.tau3
        && out.n1 == comps.n1
        && out.n1p == comps.n1p
        && out.n2 == comps.n2;
    let checks = vec![
        check(
            "terder",
            is_terder(&t.algebra, &repaired),
            "the repaired triple is a ternary derivation",
        ),
        check(
            "pinned-blocks",
            pinned,
            "delta2, mu3, the tau blocks, and the corner elements are unchanged",
        ),
    ];
    let result = json!({"triple": repaired, "components": out});
    Ok((result, checks))
}

fn cmd_center(object: &SourceObject) -> Result<(Value, Vec<Check>)> {
    let alg = object.algebra();
    let basis = alg.center();
    let mut central = true;
    for z in &basis {
        central &= alg.is_central(z)?;
    }
    let mut checks = vec![check(
        "central",
        central,
        format!("{} basis elements commute with the whole algebra", basis.len()),
    )];
    let mut result = json!({"dim": basis.len(), "basis": basis});
    if let SourceObject::Triangular(t) = object {
        let pullback = t.center_pullback();
        checks.push(check(
            "Center-pullback",
            crate::matrix::spans_equal(&pullback, &basis),
            "the fibered-product description spans the same subspace",
        ));
        result["pullback"] = json!({"dim": pullback.len(), "basis": pullback});
    }
    Ok((result, checks))
}

fn cmd_trian_build(object: &SourceObject) -> Result<(Value, Vec<Check>)> {
    let t = object.triangular("trian-build")?;
    let (lf, rf) = t.m.is_faithful();
    let checks = vec![
        check(
            "idempotents",
            idempotents_wellformed(t),
            "p and q are orthogonal idempotents summing to the unit",
        ),
        check(
            "algebra-valid",
            t.algebra.validate().is_ok(),
            "the assembled multiplication table is associative and unital",
        ),
    ];
    let mut result = serde_json::to_value(t.summary()).expect("serializable");
    result["faithful"] = json!({"left": lf, "right": rf});
    Ok((result, checks))
}

fn cmd_factor(object: &SourceObject, sigma: &Matrix) -> Result<(Value, Vec<Check>)> {
    let t = object.triangular("factor")?;
    check_square("sigma", sigma, t.dim())?;
    let fac = factor_automorphism(t, sigma)?;
    let rebuilt = inner_automorphism(&t.algebra, &fac.conjugator)?.mul(&fac.tau);
    let checks = vec![
        check(
            "recompose",
            rebuilt == *sigma,
            "In(conjugator) composed with tau reproduces sigma",
        ),
        check(
            "fixes-p",
            fac.tau.mul_vec(&t.p) == t.p,
            "the residual automorphism fixes the corner idempotent",
        ),
        check(
            "automorphism",
            is_automorphism(&t.algebra, &fac.tau),
            "the residual factor is an algebra automorphism",
        ),
    ];
    Ok((serde_json::to_value(&fac).expect("serializable"), checks))
}

fn cmd_split(object: &SourceObject, d: &Matrix) -> Result<(Value, Vec<Check>)> {
    let t = object.triangular("split")?;
    check_square("endomorphism", d, t.dim())?;
    let split = split_derivation(t, d)?;
    let checks = vec![
        check(
            "sum",
            split.d0.add(&split.inner_part) == *d,
            "the two parts sum to the input derivation",
        ),
        check(
            "vanishes-at-p",
            vec_is_zero(&split.d0.mul_vec(&t.p)),
            "d0 kills the corner idempotent",
        ),
        check(
            "derivation-parts",
            is_derivation(&t.algebra, &split.d0) && is_derivation(&t.algebra, &split.inner_part),
            "both parts satisfy the Leibniz rule",
        ),
    ];
    Ok((serde_json::to_value(&split).expect("serializable"), checks))
}

fn cmd_der0(object: &SourceObject) -> Result<(Value, Vec<Check>)> {
    let t = object.triangular("der0")?;
    let d0 = der0_space(t);
    let innder0 = innder0_space(t)?;
    let blocks = der0_block_space(t);
    let flats: Vec<Vector> = d0.iter().map(Matrix::to_flat).collect();
    let span = SpanChecker::new(&flats);
    let mut assembled = Vec::with_capacity(blocks.len());
    for (delta, tau, mu) in &blocks {
        let full = assemble_derivation(
            t,
            &DerivationBlocks {
                delta: delta.clone(),
                tau: tau.clone(),
                mu: mu.clone(),
                n: crate::matrix::zeros(t.m.dim),
            },
        )?;
        assembled.push(full.to_flat());
    }
    let checks = vec![
        check(
            "vanishes-at-p",
            d0.iter().all(|d| vec_is_zero(&d.mul_vec(&t.p))),
            format!("{} basis elements kill the corner idempotent", d0.len()),
        ),
        check(
            "Innder0-contained",
            innder0.iter().all(|g| span.contains(&g.to_flat())),
            format!("{} inner generators lie in the vanishing space", innder0.len()),
        ),
        check(
            "Cor5.6-pullback",
            crate::matrix::spans_equal(&assembled, &flats),
            "the block-triple description spans the same space",
        ),
    ];
    let result = json!({
        "dim": d0.len(),
        "basis": d0,
        "innder0": {"dim": innder0.len(), "basis": innder0},
        "blocks_dim": blocks.len(),
    });
    Ok((result, checks))
}

fn cmd_verify(object: &SourceObject, seed: u64) -> Result<(Value, Vec<Check>)> {
    let (kind, dim, checks) = match object {
        SourceObject::Plain(a) => ("algebra", a.dim, verify_algebra_theorems(a, seed)),
        SourceObject::Triangular(t) => (
            "triangular",
            t.dim(),
            verify_triangular_theorems(t, seed),
        ),
    };
    let passed = checks.iter().filter(|c| c.passed).count();
    let result = json!({
        "object": kind,
        "dim": dim,
        "total": checks.len(),
        "passed": passed,
    });
    Ok((result, checks))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn command_names_match_the_interface() {
        let cli = Cli::try_parse_from(["triality", "der", "--preset", "T2"]).unwrap();
        assert_eq!(cli.command.name(), "der");
        let cli =
            Cli::try_parse_from(["triality", "verify-theorems", "--preset", "trian-QQQ"]).unwrap();
        assert_eq!(cli.command.name(), "verify-theorems");
        match &cli.command {
            Command::VerifyTheorems(args) => assert_eq!(args.seed, 7),
            _ => panic!("wrong command"),
        }
    }

    #[test]
    fn source_group_is_exclusive_and_required() {
        assert!(Cli::try_parse_from(["triality", "der"]).is_err());
        assert!(Cli::try_parse_from([
            "triality", "der", "--preset", "T2", "--algebra", "x.json"
        ])
        .is_err());
    }

    #[test]
    fn probe_group_is_exclusive_and_required() {
        assert!(Cli::try_parse_from(["triality", "inner-check", "--preset", "T2"]).is_err());
        assert!(Cli::try_parse_from([
            "triality",
            "inner-check",
            "--preset",
            "T2",
            "--triple",
            "t.json",
            "--endo",
            "d.json"
        ])
        .is_err());
        assert!(Cli::try_parse_from([
            "triality",
            "inner-check",
            "--preset",
            "T2",
            "--endo",
            "d.json"
        ])
        .is_ok());
    }

    #[test]
    fn dispatch_runs_on_builtin_presets() {
        let object = resolve_source(&SourceArgs {
            preset: Some("T2".into()),
            algebra: None,
            trian: None,
        })
        .unwrap();
        let (result, checks) = cmd_der(&object).unwrap();
        assert_eq!(result["dim"], 2);
        assert!(checks.iter().all(|c| c.passed));

        let object = resolve_source(&SourceArgs {
            preset: Some("trian-QQQ".into()),
            algebra: None,
            trian: None,
        })
        .unwrap();
        let (result, checks) = cmd_center(&object).unwrap();
        assert_eq!(result["dim"], 1);
        assert_eq!(result["pullback"]["dim"], 1);
        assert!(checks.iter().all(|c| c.passed));
    }

    #[test]
    fn triangular_only_commands_reject_plain_algebras() {
        let object = resolve_source(&SourceArgs {
            preset: Some("T2".into()),
            algebra: None,
            trian: None,
        })
        .unwrap();
        let err = cmd_der0(&object).unwrap_err();
        assert!(matches!(err, Error::InvalidAlgebra(_)));
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn unknown_preset_is_a_validation_error() {
        let err = resolve_source(&SourceArgs {
            preset: Some("Z9".into()),
            algebra: None,
            trian: None,
        })
        .unwrap_err();
        assert!(matches!(err, Error::UnknownPreset(_)));
        assert_eq!(err.exit_code(), 1);
    }
}
