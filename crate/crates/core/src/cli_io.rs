//! Command-line front end, JSON input schemas, run reports and SVG output.
//!
//! Every run prints a [`RunReport`]. Its `revalidation` block is recomputed
//! from the embedded inputs by [`revalidate`], which only evaluates the
//! input oracles (fields, maps, set memberships, measures) at the reported
//! points. [`validate_report`] repeats that computation on a stored report.
//!
//! Exit codes: 0 witness or certificate, 2 hypothesis violation, 3
//! inconclusive, 1 input error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::complexes::{
    crosspolytope, deleted_join_simplex, zp_join_sphere, ComplexJson, SymmetricComplex, VertexId,
};
use crate::cover_solvers::{
    default_sphere, solve_colorful_fan_cover, solve_colorful_zp_cover, solve_fan_cover,
    solve_zp_cover, CoverFamilySet, CoverOutcome, RefinementConfig, SetSpec,
};
use crate::fan_core::{
    random_labeling, required_labels, sign_to_excluded, solve_fan_z2, solve_fan_zp,
    FanCertificate, OrbitLabeling, SignedLabeling,
};
use crate::ham_sandwich::{
    equalizing_residual, ham_sandwich_cut, naive_conjecture_scan, solve_bhj_fractions,
    solve_colorful_hs, solve_equalizing_hs, ColorfulHsResult, CutResult, MeasureFamilySet,
    SmoothedPointMeasure,
};
use crate::kkm_brouwer::{
    colorful_kkm_residual, radon_kkm_alternative, solve_colorful_brouwer, solve_colorful_kkm,
    SimplexMap, SimplexResult, SimplexWitness, StochasticFn,
};
use crate::linalg;
use crate::matrix_bu::{
    classical_bu_zero, orbit_collapse, solve_colorful_bu, transversal_residual, verify_outcome,
    BuResult, CollapseResult, OddMatrixField, VectorFn, ZeroResult,
};
use crate::reference_oracles::{
    exhaustive_fan_scan, line_sweep_2d, FractionConstraint, SweepConfig,
};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

// ----------------------------------------------------------------------------
// input schemas

/// `coef · Π x_k^{pow_k}`; missing exponents are zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Monomial {
    pub coef: f64,
    #[serde(default)]
    pub pow: Vec<u32>,
}

pub type Polynomial = Vec<Monomial>;

pub fn eval_polynomial(p: &Polynomial, x: &[f64]) -> f64 {
    p.iter()
        .map(|m| {
            m.pow
                .iter()
                .enumerate()
                .fold(m.coef, |acc, (k, e)| acc * x.get(k).copied().unwrap_or(0.0).powi(*e as i32))
        })
        .sum()
}

/// A polynomial field: `entries` gives a square matrix field, `components`
/// a vector field.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FieldJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entries: Option<Vec<Vec<Polynomial>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<Vec<Polynomial>>,
}

impl FieldJson {
    pub fn matrix_fn(&self) -> Result<Arc<dyn Fn(&[f64]) -> Vec<Vec<f64>> + Send + Sync>> {
        let e = self
            .entries
            .clone()
            .ok_or_else(|| Error::input("field has no \"entries\""))?;
        if e.is_empty() || e.iter().any(|r| r.len() != e.len()) {
            return Err(Error::input("field entries must form a nonempty square matrix"));
        }
        Ok(Arc::new(move |x: &[f64]| {
            e.iter()
                .map(|row| row.iter().map(|p| eval_polynomial(p, x)).collect())
                .collect()
        }))
    }

    pub fn vector_fn(&self) -> Result<VectorFn> {
        let c = self
            .components
            .clone()
            .ok_or_else(|| Error::input("field has no \"components\""))?;
        if c.is_empty() {
            return Err(Error::input("field has no components"));
        }
        Ok(Arc::new(move |x: &[f64]| c.iter().map(|p| eval_polynomial(p, x)).collect()))
    }

    pub fn size(&self) -> usize {
        self.entries
            .as_ref()
            .map(|e| e.len())
            .or(self.components.as_ref().map(|c| c.len()))
            .unwrap_or(0)
    }
}

/// Maps of the simplex, one polynomial per barycentric coordinate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapsJson {
    pub maps: Vec<Vec<Polynomial>>,
}

impl MapsJson {
    pub fn simplex_maps(&self) -> Vec<SimplexMap> {
        self.maps
            .iter()
            .map(|m| {
                let m = m.clone();
                Arc::new(move |x: &[f64]| m.iter().map(|p| eval_polynomial(p, x)).collect())
                    as SimplexMap
            })
            .collect()
    }
}

/// `families` for the colorful mode, `measures` for the others.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MeasuresJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub families: Option<Vec<Vec<SmoothedPointMeasure>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measures: Option<Vec<SmoothedPointMeasure>>,
}

impl MeasuresJson {
    fn all(&self) -> Vec<SmoothedPointMeasure> {
        let mut out: Vec<SmoothedPointMeasure> =
            self.families.iter().flatten().flatten().cloned().collect();
        out.extend(self.measures.iter().flatten().cloned());
        out
    }

    fn list(&self) -> Result<Vec<SmoothedPointMeasure>> {
        let ms = self
            .measures
            .clone()
            .ok_or_else(|| Error::input("expected a \"measures\" list"))?;
        for m in &ms {
            m.validate()?;
        }
        Ok(ms)
    }

    fn family_set(&self) -> Result<MeasureFamilySet> {
        let f = self
            .families
            .clone()
            .ok_or_else(|| Error::input("expected a \"families\" list"))?;
        MeasureFamilySet::new(f)
    }
}

/// Labels keyed by vertex id: signed integers for `Z/2`, `[j, t]` pairs
/// otherwise.
pub fn parse_labeling(v: &Value, p: u32) -> Result<OrbitLabeling> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::input("labeling must be a JSON object"))?;
    let mut labels = std::collections::BTreeMap::new();
    for (k, l) in obj {
        let id: i64 = k
            .parse()
            .map_err(|_| Error::input(format!("vertex id {k:?} is not an integer")))?;
        let label = match l {
            Value::Number(n) if p == 2 => {
                let s = n
                    .as_i64()
                    .filter(|s| *s != 0)
                    .ok_or_else(|| Error::input(format!("label of {k} must be a nonzero integer")))?;
                crate::fan_core::signed_to_label(s as i32)
            }
            Value::Array(a) if a.len() == 2 => {
                let j = a[0].as_u64().ok_or_else(|| Error::input(format!("bad block for {k}")))?;
                let t = a[1].as_u64().ok_or_else(|| Error::input(format!("bad shift for {k}")))?;
                (j as usize, t as u32)
            }
            _ => return Err(Error::input(format!("unreadable label for vertex {k}"))),
        };
        labels.insert(VertexId(id), label);
    }
    Ok(OrbitLabeling { p, labels })
}

pub fn labeling_to_json(l: &OrbitLabeling) -> Value {
    let map = l
        .labels
        .iter()
        .map(|(v, lab)| {
            let val = if l.p == 2 {
                json!(crate::fan_core::label_to_signed(*lab))
            } else {
                json!([lab.0, lab.1])
            };
            (v.0.to_string(), val)
        })
        .collect();
    Value::Object(map)
}

/// Parses `"++-"` (or `"+,+,-"`) into signs.
pub fn parse_signs(s: &str) -> Result<Vec<i8>> {
    s.chars()
        .filter(|c| *c != ',')
        .map(|c| match c {
            '+' => Ok(1),
            '-' => Ok(-1),
            _ => Err(Error::input(format!("sign {c:?} is not + or -"))),
        })
        .collect()
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::input(format!("cannot read {what} {t:?}")))
        })
        .collect()
}

/// Reads JSON, reporting the file and the line and column of a parse error.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<(T, Value)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::input(format!("{}: {e}", path.display())))?;
    let raw: Value = serde_json::from_str(&text)
        .map_err(|e| Error::input(format!("{}: {e}", path.display())))?;
    let typed = serde_json::from_value(raw.clone())
        .map_err(|e| Error::input(format!("{}: {e}", path.display())))?;
    Ok((typed, raw))
}

fn from_value<T: DeserializeOwned>(v: &Value, what: &str) -> Result<T> {
    serde_json::from_value(v.clone()).map_err(|e| Error::InvalidReport(format!("{what}: {e}")))
}

// ----------------------------------------------------------------------------
// command line

#[derive(Debug, Parser)]
#[command(name = "equibu", version, about = "Certificates for colorful Borsuk-Ulam type problems")]
pub struct Cli {
    /// Seed for randomized inputs.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a complex and report its invariants.
    Complex(ComplexArgs),
    /// Fan lemma on a labelled complex.
    Fan(FanArgs),
    /// Antipodal cover problems.
    Cover(CoverArgs),
    /// Colorful Borsuk-Ulam and zeros of odd maps.
    Bu(BuArgs),
    /// KKM alternatives on the simplex.
    Kkm(KkmArgs),
    /// Colorful Brouwer for stochastic matrix fields.
    Brouwer(BrouwerArgs),
    /// Ham sandwich cuts.
    Hs(HsArgs),
    /// Cyclic covers and orbit collapse.
    Zp(ZpArgs),
    /// Brute-force references and report validation.
    Oracle(OracleArgs),
}

#[derive(Debug, Args, Clone)]
pub struct SolverArgs {
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
    #[arg(long, default_value_t = 60)]
    pub max_depth: usize,
}

impl SolverArgs {
    fn config(&self) -> RefinementConfig {
        RefinementConfig {
            max_depth: self.max_depth,
            ..RefinementConfig::with_tol(self.tol)
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "kebab-case")]
pub enum ComplexKind {
    Crosspolytope,
    Zp,
    DeletedJoin,
}

#[derive(Debug, Args)]
pub struct ComplexArgs {
    #[arg(long, value_enum)]
    pub kind: Option<ComplexKind>,
    /// Crosspolytope dimension `k`.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long)]
    pub d: Option<usize>,
    /// Simplex dimension for the deleted join.
    #[arg(long)]
    pub n: Option<usize>,
    /// Read a complex instead of building one.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub subdivide: usize,
}

#[derive(Debug, Args)]
pub struct FanArgs {
    #[arg(long)]
    pub complex: PathBuf,
    #[arg(long, conflicts_with = "random")]
    pub labels: Option<PathBuf>,
    /// Draw a random equivariant labeling from `--seed`.
    #[arg(long)]
    pub random: bool,
    /// Sign vector for `Z/2`, e.g. `++-`.
    #[arg(long, allow_hyphen_values = true)]
    pub signs: Option<String>,
    /// Missing shifts for `Z/p`, e.g. `0,2`.
    #[arg(long)]
    pub shifts: Option<String>,
}

#[derive(Debug, Args)]
pub struct CoverArgs {
    #[arg(long, default_value_t = 2)]
    pub p: u32,
    /// Sphere dimension.
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub families: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub signs: String,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Args)]
pub struct BuArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub field: PathBuf,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Args)]
pub struct KkmArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub maps: PathBuf,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Args)]
pub struct BrouwerArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub field: PathBuf,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "kebab-case")]
pub enum HsMode {
    Colorful,
    Equalize,
    Fractions,
    Bisect,
}

#[derive(Debug, Args)]
pub struct HsArgs {
    #[arg(long, value_enum)]
    pub mode: HsMode,
    #[arg(long)]
    pub measures: PathBuf,
    #[arg(long)]
    pub alphas: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub anchor: Option<String>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Args)]
pub struct ZpArgs {
    #[arg(long)]
    pub p: u32,
    /// Number of label blocks; the sphere is `S^{(p-1)d-1}`.
    #[arg(long)]
    pub d: usize,
    /// Cover families; solved with `--shifts`.
    #[arg(long, conflicts_with = "field")]
    pub families: Option<PathBuf>,
    #[arg(long)]
    pub shifts: Option<String>,
    /// Vector field for orbit collapse.
    #[arg(long)]
    pub field: Option<PathBuf>,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(subcommand)]
    pub command: OracleCommand,
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// Every certificate of a `Z/2` labeling.
    Fan {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        labels: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        signs: Option<String>,
    },
    /// Lines cutting prescribed fractions, on an (angle, offset) grid.
    Sweep {
        #[arg(long)]
        measures: PathBuf,
        /// Target fraction per measure.
        #[arg(long)]
        fractions: String,
        #[arg(long, default_value_t = 400)]
        resolution: usize,
        #[arg(long, default_value_t = 1e-2)]
        slack: f64,
    },
    /// The naive colorful question on a two-family planar configuration
    /// given as colorful families with columns `(r1|g2, g1|r2, ...)`.
    Naive {
        #[arg(long)]
        measures: PathBuf,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        #[arg(long, default_value_t = 0.05)]
        slack: f64,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Re-check a stored run report.
    Validate {
        #[arg(long)]
        report: PathBuf,
    },
}

// ----------------------------------------------------------------------------
// reports

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Witness,
    Violation,
    Inconclusive,
    Info,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Witness | Outcome::Info => EXIT_OK,
            Outcome::Violation => EXIT_VIOLATION,
            Outcome::Inconclusive => EXIT_INCONCLUSIVE,
        }
    }
}

/// `value <= bound`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
}

impl Check {
    pub fn le(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            value,
            bound,
            pass: value <= bound,
        }
    }

    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Self::le(name, if ok { 0.0 } else { 1.0 }, 0.0)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Revalidation {
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl Revalidation {
    fn of(checks: Vec<Check>) -> Self {
        let passed = checks.iter().all(|c| c.pass);
        Self { checks, passed }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub subcommand: String,
    pub config: Value,
    pub inputs: Value,
    pub outcome: Outcome,
    pub result: Value,
    pub revalidation: Revalidation,
    pub timing_ms: f64,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        if self.outcome == Outcome::Info || self.outcome == Outcome::Inconclusive {
            self.outcome.exit_code()
        } else if !self.revalidation.passed {
            EXIT_INPUT
        } else {
            self.outcome.exit_code()
        }
    }
}

fn tol_of(config: &Value) -> f64 {
    config.get("tol").and_then(Value::as_f64).unwrap_or(1e-3)
}

fn need<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| Error::InvalidReport(format!("missing {key:?}")))
}

/// Recomputes the checks of a report from its inputs and result.
pub fn revalidate(
    subcommand: &str,
    config: &Value,
    inputs: &Value,
    outcome: Outcome,
    result: &Value,
) -> Result<Revalidation> {
    if matches!(outcome, Outcome::Inconclusive | Outcome::Info) && subcommand != "complex" {
        return Ok(Revalidation::of(vec![]));
    }
    let tol = tol_of(config);
    let checks = match subcommand {
        "complex" => revalidate_complex(result)?,
        "fan" => revalidate_fan(config, inputs, result)?,
        "cover" | "zp-cover" => revalidate_cover(config, inputs, result, tol)?,
        "bu" => revalidate_bu(inputs, result, tol)?,
        "kkm" => revalidate_kkm(config, inputs, result, tol)?,
        "brouwer" => revalidate_brouwer(inputs, result, tol)?,
        "hs" => revalidate_hs(config, inputs, result, tol)?,
        "zp-collapse" => revalidate_collapse(config, inputs, result, tol)?,
        other => return Err(Error::InvalidReport(format!("unknown subcommand {other:?}"))),
    };
    Ok(Revalidation::of(checks))
}

/// True iff every recomputed check passes at the tolerance stated in the
/// report.
pub fn validate_report(report: &Value) -> Result<bool> {
    let r: RunReport = from_value(report, "report")?;
    Ok(revalidate(&r.subcommand, &r.config, &r.inputs, r.outcome, &r.result)?.passed)
}

fn revalidate_complex(result: &Value) -> Result<Vec<Check>> {
    let f_claim: Vec<usize> = from_value(need(result, "f_vector")?, "f_vector")?;
    let chi_claim: i64 = from_value(need(result, "euler_characteristic")?, "euler")?;
    let sphere = result.get("sphere").and_then(Value::as_bool).unwrap_or(false);
    let mut checks = vec![];
    let complex = if let Some(sym) = result.get("symmetric") {
        let cj: ComplexJson = from_value(sym, "complex")?;
        let sc = SymmetricComplex::from_json(&cj)?;
        checks.push(Check::holds("action is a free simplicial symmetry", sc.check_free().is_ok()));
        sc.complex().clone()
    } else {
        let facets: Vec<Vec<VertexId>> = from_value(need(result, "facets")?, "facets")?;
        crate::complexes::SimplicialComplex::new(facets)?
    };
    checks.push(Check::holds("f-vector", complex.f_vector() == f_claim));
    let chi = complex.euler_characteristic();
    checks.push(Check::holds("euler characteristic", chi == chi_claim));
    if sphere {
        let dim = complex.dimension() as i64;
        checks.push(Check::holds("sphere euler characteristic", chi == 1 + (-1i64).pow(dim as u32)));
    }
    Ok(checks)
}

fn excluded_of(config: &Value, p: u32) -> Result<Vec<u32>> {
    if p == 2 {
        let s: String = from_value(need(config, "signs")?, "signs")?;
        Ok(parse_signs(&s)?.into_iter().map(sign_to_excluded).collect())
    } else {
        let s: String = from_value(need(config, "shifts")?, "shifts")?;
        parse_list(&s, "shift")
    }
}

fn revalidate_fan(config: &Value, inputs: &Value, result: &Value) -> Result<Vec<Check>> {
    let cj: ComplexJson = from_value(need(inputs, "complex")?, "complex")?;
    let sc = SymmetricComplex::from_json(&cj)?;
    let p = sc.order();
    let labeling = parse_labeling(need(inputs, "labels")?, p)?;
    let excluded = excluded_of(config, p)?;
    let cert: FanCertificate = from_value(result, "certificate")?;
    let face = match &cert {
        FanCertificate::ComplementaryEdge { edge, .. } => edge.to_vec(),
        FanCertificate::OrbitFace { face, .. } => face.clone(),
        FanCertificate::TargetFacet { facet, .. } => facet.clone(),
    };
    let mut sorted = face.clone();
    sorted.sort();
    Ok(vec![
        Check::holds("labeling is equivariant", labeling.validate(&sc, excluded.len()).is_ok()),
        Check::holds("certificate face is in the complex", sc.complex().contains_face(&sorted)),
        Check::holds("certificate labels", cert.verify(&labeling, &excluded)),
    ])
}

fn cover_families(inputs: &Value, p: u32) -> Result<CoverFamilySet> {
    let specs: Vec<Vec<SetSpec>> = from_value(need(inputs, "families")?, "families")?;
    CoverFamilySet::from_specs(p, specs)
}

fn revalidate_cover(config: &Value, inputs: &Value, result: &Value, tol: f64) -> Result<Vec<Check>> {
    let p: u32 = from_value(need(config, "p")?, "p")?;
    let families = cover_families(inputs, p)?;
    let excluded = excluded_of(config, p)?;
    let sc = default_sphere(p, excluded.len())?;
    let outcome: CoverOutcome = from_value(result, "cover outcome")?;
    let mut checks = vec![];
    match outcome {
        CoverOutcome::Witness(w) => {
            let required = required_labels(p, &excluded);
            let got: std::collections::BTreeSet<_> =
                w.supports.iter().map(|s| (s.set, s.shift)).collect();
            checks.push(Check::holds("one support per required translate", got == required && w.supports.len() == required.len()));
            for s in &w.supports {
                checks.push(Check::holds(
                    format!("support ({}, {}) lies in its set", s.set, s.shift),
                    s.holds(&families, &sc),
                ));
                checks.push(Check::le(
                    format!("distance to support ({}, {})", s.set, s.shift),
                    linalg::dist(&s.point, &w.point),
                    tol,
                ));
            }
        }
        CoverOutcome::Violation(v) => {
            checks.push(Check::holds("violation supports", v.verify(&families, &sc, tol)));
            checks.push(Check::le("violation diameter", v.diameter, tol));
        }
        CoverOutcome::Inconclusive { .. } => {}
    }
    Ok(checks)
}

fn unit_check(x: &[f64]) -> Check {
    Check::le("point lies on the sphere", (linalg::norm(x) - 1.0).abs(), 1e-9)
}

fn revalidate_bu(inputs: &Value, result: &Value, tol: f64) -> Result<Vec<Check>> {
    let field: FieldJson = from_value(need(inputs, "field")?, "field")?;
    if field.entries.is_some() {
        let f = OddMatrixField::new(field.size(), field.matrix_fn()?);
        let r: BuResult = from_value(result, "bu result")?;
        let Some(w) = r.witness() else { return Ok(vec![]) };
        let m = f.eval(&w.x);
        let neg = f.eval(&linalg::neg(&w.x));
        let odd = m
            .iter()
            .flatten()
            .zip(neg.iter().flatten())
            .map(|(a, b)| (a + b).abs())
            .fold(0.0, f64::max);
        Ok(vec![
            unit_check(&w.x),
            Check::le("oddness at the witness", odd, 0.0),
            Check::holds("colorful Borsuk-Ulam alternative", verify_outcome(&m, &w.outcome, tol)),
        ])
    } else {
        let g = crate::matrix_bu::odd_part(field.vector_fn()?);
        let r: ZeroResult = from_value(result, "zero result")?;
        match r {
            ZeroResult::Found { x, .. } => {
                let d = field.size();
                Ok(vec![unit_check(&x), Check::le("|f(x)|", linalg::norm(&g(&x)), (d + 1) as f64 * tol)])
            }
            ZeroResult::Inconclusive { .. } => Ok(vec![]),
        }
    }
}

fn simplex_check(name: &str, x: &[f64]) -> Check {
    let s: f64 = x.iter().sum();
    let neg = x.iter().cloned().fold(0.0, |a: f64, t| a.max(-t));
    Check::le(format!("{name} lies in the simplex"), (s - 1.0).abs().max(neg), 1e-9)
}

fn is_permutation(pi: &[usize]) -> bool {
    let mut s = pi.to_vec();
    s.sort();
    s == (1..=pi.len()).collect::<Vec<_>>()
}

fn revalidate_kkm(config: &Value, inputs: &Value, result: &Value, tol: f64) -> Result<Vec<Check>> {
    let maps: MapsJson = from_value(need(inputs, "maps")?, "maps")?;
    let d: usize = from_value(need(config, "d")?, "d")?;
    let fs = maps.simplex_maps();
    let r: SimplexResult = from_value(result, "kkm result")?;
    let Some(w) = r.witness() else { return Ok(vec![]) };
    Ok(match w {
        SimplexWitness::RadonPartition { j, j_prime, x, y, lambda, .. } => {
            let a = &fs[0];
            let (ax, ay) = (a(x), a(y));
            let join = ax
                .iter()
                .zip(&ay)
                .map(|(s, t)| (lambda * s - (1.0 - lambda) * t).abs())
                .fold(0.0, f64::max);
            let disjoint = j.iter().all(|i| !j_prime.contains(i));
            vec![
                simplex_check("x", x),
                simplex_check("y", y),
                Check::holds("faces are disjoint", disjoint),
                Check::holds("x lies on face J", crate::kkm_brouwer::support(x) == *j),
                Check::holds("y lies on face J'", crate::kkm_brouwer::support(y) == *j_prime),
                Check::le("|λα(x) - (1-λ)α(y)|", join, (2 * d + 3) as f64 * tol),
            ]
        }
        SimplexWitness::Intersection { x, pi, .. } => {
            let mut checks = vec![simplex_check("x", x), Check::holds("assignment is a permutation", is_permutation(pi))];
            if fs.len() == 1 {
                let v = fs[0](x);
                let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
                checks.push(Check::le("-min α_i(x)", -lo, 0.0));
            } else {
                checks.push(Check::le("colorful KKM residual", colorful_kkm_residual(&fs, x, pi), tol));
            }
            checks
        }
        SimplexWitness::BrouwerColorful { .. } => {
            return Err(Error::InvalidReport("Brouwer witness in a KKM report".into()))
        }
    })
}

fn stochastic_fn(field: &FieldJson) -> Result<StochasticFn> {
    field.matrix_fn()
}

fn revalidate_brouwer(inputs: &Value, result: &Value, tol: f64) -> Result<Vec<Check>> {
    let field: FieldJson = from_value(need(inputs, "field")?, "field")?;
    let f = stochastic_fn(&field)?;
    let r: SimplexResult = from_value(result, "brouwer result")?;
    let Some(SimplexWitness::BrouwerColorful { x, pi, .. }) = r.witness() else {
        return Ok(vec![]);
    };
    let m = f(x);
    let worst = pi
        .iter()
        .enumerate()
        .map(|(i, &j)| m[i][j - 1] - x[j - 1])
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(vec![
        simplex_check("x", x),
        Check::holds("assignment is a permutation", is_permutation(pi)),
        Check::le("max f_{iπ(i)}(x) - x_{π(i)}", worst, tol),
    ])
}

fn revalidate_hs(config: &Value, inputs: &Value, result: &Value, tol: f64) -> Result<Vec<Check>> {
    let mode: HsMode = from_value(need(config, "mode")?, "mode")?;
    let ms: MeasuresJson = from_value(need(inputs, "measures")?, "measures")?;
    match mode {
        HsMode::Colorful => {
            let set = ms.family_set()?;
            let r: ColorfulHsResult = from_value(result, "hs result")?;
            Ok(match r {
                ColorfulHsResult::Witness(w) => {
                    let res = set.residuals(&w.u);
                    vec![
                        unit_check(&w.u),
                        Check::holds("assignment is a permutation", is_permutation(&w.pi)),
                        Check::le("transversal residual", transversal_residual(&res, &w.pi), tol),
                    ]
                }
                ColorfulHsResult::OppositePair(rep) => {
                    let res = set.residuals(&rep.u);
                    let (a, b) = (&res[rep.maximizing - 1], &res[rep.minimizing - 1]);
                    let i = rep.measure - 1;
                    let top = |r: &[f64]| linalg::max_abs(r);
                    vec![
                        unit_check(&rep.u),
                        Check::le("maximizing entry below its row maximum", top(a) - a[i], tol),
                        Check::le("minimizing entry above minus its row maximum", top(b) + b[i], tol),
                        Check::le("sign clash", -a[i].min(-b[i]), tol),
                    ]
                }
                ColorfulHsResult::Inconclusive { .. } => vec![],
            })
        }
        _ => {
            let list = ms.list()?;
            let r: CutResult = from_value(result, "cut")?;
            let Some(cut) = r.cut() else { return Ok(vec![]) };
            let mut checks = vec![unit_check(&cut.u)];
            match mode {
                HsMode::Equalize => checks.push(Check::le(
                    "max |D_i - D_j|",
                    equalizing_residual(&list, &cut.u),
                    tol,
                )),
                _ => {
                    let alphas: Vec<f64> = if mode == HsMode::Bisect {
                        vec![0.5; list.len()]
                    } else {
                        from_value(need(config, "alphas")?, "alphas")?
                    };
                    for (i, (m, a)) in list.iter().zip(&alphas).enumerate() {
                        let f = m.halfspace_value(&cut.u) / m.total_mass();
                        checks.push(Check::le(format!("|μ_{}(H+)/μ_{} - α_{}|", i + 1, i + 1, i + 1), (f - a).abs(), tol));
                    }
                }
            }
            Ok(checks)
        }
    }
}

fn revalidate_collapse(config: &Value, inputs: &Value, result: &Value, tol: f64) -> Result<Vec<Check>> {
    let p: u32 = from_value(need(config, "p")?, "p")?;
    let d: usize = from_value(need(config, "d")?, "d")?;
    let field: FieldJson = from_value(need(inputs, "field")?, "field")?;
    let f = field.vector_fn()?;
    let r: CollapseResult = from_value(result, "collapse")?;
    let CollapseResult::Found(c) = r else { return Ok(vec![]) };
    let sc = zp_join_sphere(p, d)?;
    let mut checks = vec![Check::holds("orbit has p points", c.orbit.len() == p as usize)];
    for k in 1..c.orbit.len() {
        let moved = sc.act_point(&c.orbit[0], k as u32);
        checks.push(Check::le(format!("orbit point {k} is g^{k}·x"), linalg::dist(&moved, &c.orbit[k]), 1e-9));
    }
    for (k, x) in c.orbit.iter().enumerate() {
        let mut target = c.y.clone();
        if k == c.remaining {
            target.iter_mut().for_each(|t| *t -= c.alpha);
        }
        checks.push(Check::le(format!("|f(g^{k}x) - target|"), linalg::dist(&f(x), &target), tol));
    }
    Ok(checks)
}

// ----------------------------------------------------------------------------
// running

struct Ran {
    subcommand: &'static str,
    config: Value,
    inputs: Value,
    outcome: Outcome,
    result: Value,
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable")
}

fn load_complex(path: &Path) -> Result<(SymmetricComplex, Value)> {
    let (cj, raw): (ComplexJson, Value) = read_json(path)?;
    Ok((SymmetricComplex::from_json(&cj)?, raw))
}

fn run_complex(a: &ComplexArgs) -> Result<Ran> {
    let mut sym: Option<SymmetricComplex> = None;
    let mut plain = None;
    let mut sphere = true;
    if let Some(path) = &a.input {
        sym = Some(load_complex(path)?.0);
    } else {
        let kind = a.kind.ok_or_else(|| Error::input("give --kind or --input"))?;
        let get = |o: Option<usize>, n: &str| o.ok_or_else(|| Error::input(format!("--{n} is required")));
        match kind {
            ComplexKind::Crosspolytope => sym = Some(crosspolytope(get(a.k, "k")?)?),
            ComplexKind::Zp => {
                let p = a.p.ok_or_else(|| Error::input("--p is required"))?;
                sym = Some(zp_join_sphere(p, get(a.d, "d")?)?);
            }
            ComplexKind::DeletedJoin => {
                let p = a.p.unwrap_or(2);
                sphere = p == 2;
                plain = Some(deleted_join_simplex(get(a.n, "n")?, p as usize)?);
            }
        }
    }
    let mut result = serde_json::Map::new();
    let complex = if let Some(sc) = sym {
        let sc = sc.subdivide_times(a.subdivide, usize::MAX)?;
        result.insert("symmetric".into(), to_value(&sc.to_json()));
        sc.complex().clone()
    } else {
        let c = plain.expect("built above");
        result.insert("facets".into(), to_value(&c.facets().to_vec()));
        c
    };
    result.insert("dimension".into(), json!(complex.dimension()));
    result.insert("f_vector".into(), json!(complex.f_vector()));
    result.insert("euler_characteristic".into(), json!(complex.euler_characteristic()));
    result.insert("sphere".into(), json!(sphere));
    Ok(Ran {
        subcommand: "complex",
        config: json!({"kind": a.kind, "k": a.k, "p": a.p, "d": a.d, "n": a.n, "subdivide": a.subdivide}),
        inputs: json!({}),
        outcome: Outcome::Info,
        result: Value::Object(result),
    })
}

fn run_fan(a: &FanArgs, seed: u64) -> Result<Ran> {
    let (sc, complex_raw) = load_complex(&a.complex)?;
    let p = sc.order();
    let blocks = if p == 2 {
        sc.dimension() + 1
    } else {
        (sc.dimension() + 1) / (p as usize - 1)
    };
    let labeling = match (&a.labels, a.random) {
        (Some(path), false) => {
            let (raw, _): (Value, Value) = read_json(path)?;
            parse_labeling(&raw, p)?
        }
        (None, true) => random_labeling(&sc, blocks, &mut ChaCha8Rng::seed_from_u64(seed)),
        _ => return Err(Error::input("give exactly one of --labels and --random")),
    };
    let (cert, config) = if p == 2 {
        let s = a.signs.clone().ok_or_else(|| Error::input("--signs is required for Z/2"))?;
        let signs = parse_signs(&s)?;
        let signed = SignedLabeling(
            labeling
                .labels
                .iter()
                .map(|(v, l)| (*v, crate::fan_core::label_to_signed(*l)))
                .collect(),
        );
        (solve_fan_z2(&sc, &signed, &signs)?, json!({"signs": s}))
    } else {
        let s = a.shifts.clone().ok_or_else(|| Error::input("--shifts is required for Z/p"))?;
        let shifts: Vec<u32> = parse_list(&s, "shift")?;
        (solve_fan_zp(&sc, &labeling, &shifts)?, json!({"shifts": s}))
    };
    Ok(Ran {
        subcommand: "fan",
        config,
        inputs: json!({"complex": complex_raw, "labels": labeling_to_json(&labeling)}),
        outcome: Outcome::Witness,
        result: to_value(&cert),
    })
}

fn cover_outcome(o: &CoverOutcome) -> Outcome {
    match o {
        CoverOutcome::Witness(_) => Outcome::Witness,
        CoverOutcome::Violation(_) => Outcome::Violation,
        CoverOutcome::Inconclusive { .. } => Outcome::Inconclusive,
    }
}

fn run_cover(a: &CoverArgs) -> Result<Ran> {
    if a.p != 2 {
        return Err(Error::input("use `equibu zp` for p > 2"));
    }
    let (specs, raw): (Vec<Vec<SetSpec>>, Value) = read_json(&a.families)?;
    let families = CoverFamilySet::from_specs(2, specs)?;
    let signs = parse_signs(&a.signs)?;
    if signs.len() != a.d + 1 {
        return Err(Error::input(format!("S^{} needs {} signs", a.d, a.d + 1)));
    }
    let cfg = a.solver.config();
    let out = if families.family_count() == 1 {
        solve_fan_cover(&families, &signs, &cfg)?
    } else {
        solve_colorful_fan_cover(&families, &signs, &cfg)?
    };
    Ok(Ran {
        subcommand: "cover",
        config: json!({"p": 2, "d": a.d, "signs": a.signs, "tol": a.solver.tol, "max_depth": a.solver.max_depth}),
        inputs: json!({"families": raw}),
        outcome: cover_outcome(&out),
        result: to_value(&out),
    })
}

fn run_bu(a: &BuArgs) -> Result<Ran> {
    let (field, raw): (FieldJson, Value) = read_json(&a.field)?;
    let cfg = a.solver.config();
    let config = json!({"d": a.d, "tol": a.solver.tol, "max_depth": a.solver.max_depth});
    let inputs = json!({"field": raw});
    if field.entries.is_some() {
        if field.size() != a.d + 1 {
            return Err(Error::input(format!("S^{} needs a {}x{} field", a.d, a.d + 1, a.d + 1)));
        }
        let f = OddMatrixField::new(field.size(), field.matrix_fn()?);
        let r = solve_colorful_bu(&f, &cfg)?;
        let outcome = if r.witness().is_some() { Outcome::Witness } else { Outcome::Inconclusive };
        Ok(Ran { subcommand: "bu", config, inputs, outcome, result: to_value(&r) })
    } else {
        if field.size() != a.d {
            return Err(Error::input(format!("an odd map on S^{} has {} components", a.d, a.d)));
        }
        let r = classical_bu_zero(field.vector_fn()?, a.d, &cfg)?;
        let outcome = match r {
            ZeroResult::Found { .. } => Outcome::Witness,
            ZeroResult::Inconclusive { .. } => Outcome::Inconclusive,
        };
        Ok(Ran { subcommand: "bu", config, inputs, outcome, result: to_value(&r) })
    }
}

fn simplex_outcome(r: &SimplexResult) -> Outcome {
    if r.witness().is_some() {
        Outcome::Witness
    } else {
        Outcome::Inconclusive
    }
}

fn run_kkm(a: &KkmArgs) -> Result<Ran> {
    let (maps, raw): (MapsJson, Value) = read_json(&a.maps)?;
    if maps.maps.iter().any(|m| m.len() != a.d + 1) {
        return Err(Error::input(format!("maps of the {}-simplex need {} components", a.d, a.d + 1)));
    }
    let fs = maps.simplex_maps();
    let cfg = a.solver.config();
    let r = match fs.len() {
        1 => radon_kkm_alternative(fs[0].clone(), a.d, &cfg)?,
        n if n == a.d + 1 => solve_colorful_kkm(&fs, a.d, &cfg)?.0,
        n => return Err(Error::input(format!("expected 1 or {} maps, got {n}", a.d + 1))),
    };
    Ok(Ran {
        subcommand: "kkm",
        config: json!({"d": a.d, "tol": a.solver.tol, "max_depth": a.solver.max_depth}),
        inputs: json!({"maps": raw}),
        outcome: simplex_outcome(&r),
        result: to_value(&r),
    })
}

fn run_brouwer(a: &BrouwerArgs) -> Result<Ran> {
    let (field, raw): (FieldJson, Value) = read_json(&a.field)?;
    if field.size() != a.d + 1 {
        return Err(Error::input(format!("the {}-simplex needs a {}x{} field", a.d, a.d + 1, a.d + 1)));
    }
    let r = solve_colorful_brouwer(stochastic_fn(&field)?, a.d, &a.solver.config())?;
    Ok(Ran {
        subcommand: "brouwer",
        config: json!({"d": a.d, "tol": a.solver.tol, "max_depth": a.solver.max_depth}),
        inputs: json!({"field": raw}),
        outcome: simplex_outcome(&r),
        result: to_value(&r),
    })
}

fn run_hs(a: &HsArgs) -> Result<Ran> {
    let (ms, raw): (MeasuresJson, Value) = read_json(&a.measures)?;
    let cfg = a.solver.config();
    let mut config = json!({"mode": a.mode, "tol": a.solver.tol, "max_depth": a.solver.max_depth});
    let (outcome, result) = match a.mode {
        HsMode::Colorful => {
            let r = solve_colorful_hs(&ms.family_set()?, &cfg)?;
            let o = match r {
                ColorfulHsResult::Witness(_) => Outcome::Witness,
                ColorfulHsResult::OppositePair(_) => Outcome::Violation,
                ColorfulHsResult::Inconclusive { .. } => Outcome::Inconclusive,
            };
            (o, to_value(&r))
        }
        mode => {
            let list = ms.list()?;
            let r = match mode {
                HsMode::Equalize => solve_equalizing_hs(&list, &cfg)?,
                HsMode::Bisect => ham_sandwich_cut(&list, &cfg)?,
                _ => {
                    let alphas: Vec<f64> = parse_list(
                        a.alphas.as_deref().ok_or_else(|| Error::input("--alphas is required"))?,
                        "fraction",
                    )?;
                    let anchor: Vec<f64> = parse_list(
                        a.anchor.as_deref().ok_or_else(|| Error::input("--anchor is required"))?,
                        "coordinate",
                    )?;
                    config["alphas"] = json!(alphas);
                    config["anchor"] = json!(anchor);
                    solve_bhj_fractions(&list, &alphas, &anchor, &cfg)?
                }
            };
            let o = if r.cut().is_some() { Outcome::Witness } else { Outcome::Inconclusive };
            (o, to_value(&r))
        }
    };
    Ok(Ran {
        subcommand: "hs",
        config,
        inputs: json!({"measures": raw}),
        outcome,
        result,
    })
}

fn run_zp(a: &ZpArgs) -> Result<Ran> {
    let cfg = a.solver.config();
    if let Some(path) = &a.families {
        let (specs, raw): (Vec<Vec<SetSpec>>, Value) = read_json(path)?;
        let families = CoverFamilySet::from_specs(a.p, specs)?;
        let s = a.shifts.clone().ok_or_else(|| Error::input("--shifts is required"))?;
        let shifts: Vec<u32> = parse_list(&s, "shift")?;
        if shifts.len() != a.d {
            return Err(Error::input(format!("expected {} shifts", a.d)));
        }
        let out = if families.family_count() == 1 {
            solve_zp_cover(&families, &shifts, &cfg)?
        } else {
            solve_colorful_zp_cover(&families, &shifts, &cfg)?
        };
        Ok(Ran {
            subcommand: "zp-cover",
            config: json!({"p": a.p, "d": a.d, "shifts": s, "tol": a.solver.tol, "max_depth": a.solver.max_depth}),
            inputs: json!({"families": raw}),
            outcome: cover_outcome(&out),
            result: to_value(&out),
        })
    } else if let Some(path) = &a.field {
        let (field, raw): (FieldJson, Value) = read_json(path)?;
        let r = orbit_collapse(field.vector_fn()?, a.p, a.d, &cfg)?;
        let outcome = match r {
            CollapseResult::Found(_) => Outcome::Witness,
            CollapseResult::Inconclusive { .. } => Outcome::Inconclusive,
        };
        Ok(Ran {
            subcommand: "zp-collapse",
            config: json!({"p": a.p, "d": a.d, "tol": a.solver.tol, "max_depth": a.solver.max_depth}),
            inputs: json!({"field": raw}),
            outcome,
            result: to_value(&r),
        })
    } else {
        Err(Error::input("give --families or --field"))
    }
}

fn run_oracle(a: &OracleArgs) -> Result<Ran> {
    match &a.command {
        OracleCommand::Fan { complex, labels, signs } => {
            let (sc, complex_raw) = load_complex(complex)?;
            let (raw, _): (Value, Value) = read_json(labels)?;
            let l = parse_labeling(&raw, 2)?;
            let signed = SignedLabeling(
                l.labels.iter().map(|(v, t)| (*v, crate::fan_core::label_to_signed(*t))).collect(),
            );
            let s = signs.as_deref().map(parse_signs).transpose()?;
            let rep = exhaustive_fan_scan(&sc, &signed, s.as_deref())?;
            Ok(Ran {
                subcommand: "oracle-fan",
                config: json!({"signs": signs}),
                inputs: json!({"complex": complex_raw, "labels": raw}),
                outcome: Outcome::Info,
                result: to_value(&rep),
            })
        }
        OracleCommand::Sweep { measures, fractions, resolution, slack } => {
            let (ms, raw): (MeasuresJson, Value) = read_json(measures)?;
            let list = ms.list()?;
            let fr: Vec<f64> = parse_list(fractions, "fraction")?;
            let cons: Vec<FractionConstraint> =
                fr.iter().enumerate().map(|(i, f)| FractionConstraint::equal(i, *f)).collect();
            let sweep = line_sweep_2d(&list, &cons, &SweepConfig { resolution: *resolution, slack: *slack })?;
            Ok(Ran {
                subcommand: "oracle-sweep",
                config: json!({"fractions": fr, "resolution": resolution, "slack": slack}),
                inputs: json!({"measures": raw}),
                outcome: Outcome::Info,
                result: json!({
                    "nonempty": !sweep.is_empty(),
                    "satisfied": sweep.satisfied.len(),
                    "cells": sweep.cells,
                    "best": sweep.best,
                    "best_u": sweep.best_u,
                }),
            })
        }
        OracleCommand::Naive { measures, step, slack, .. } => {
            let (ms, raw): (MeasuresJson, Value) = read_json(measures)?;
            let set = ms.family_set()?;
            if set.families.len() < 2 {
                return Err(Error::input("need two families"));
            }
            let (f1, f2) = (&set.families[0], &set.families[1]);
            let scan = naive_conjecture_scan(&f1[0], &f1[1], &f2[1], &f2[0], *step, *slack)?;
            Ok(Ran {
                subcommand: "oracle-naive",
                config: json!({"step": step, "slack": slack}),
                inputs: json!({"measures": raw}),
                outcome: Outcome::Info,
                result: to_value(&scan),
            })
        }
        OracleCommand::Validate { report } => {
            let (raw, _): (Value, Value) = read_json(report)?;
            let ok = validate_report(&raw)?;
            Ok(Ran {
                subcommand: "oracle-validate",
                config: json!({}),
                inputs: json!({}),
                outcome: if ok { Outcome::Info } else { Outcome::Violation },
                result: json!({"valid": ok}),
            })
        }
    }
}

fn set_threads() {
    if let Some(n) = std::env::var("EQUIBU_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        if n > 0 {
            // a second call in the same process keeps the first pool
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

/// Parses `argv` and runs one subcommand.
pub fn run<I, T>(argv: I) -> Result<RunReport>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = Cli::try_parse_from(&argv).map_err(|e| Error::input(e.to_string()))?;
    set_threads();
    let start = Instant::now();
    let ran = match &cli.command {
        Command::Complex(a) => run_complex(a)?,
        Command::Fan(a) => run_fan(a, cli.seed)?,
        Command::Cover(a) => run_cover(a)?,
        Command::Bu(a) => run_bu(a)?,
        Command::Kkm(a) => run_kkm(a)?,
        Command::Brouwer(a) => run_brouwer(a)?,
        Command::Hs(a) => run_hs(a)?,
        Command::Zp(a) => run_zp(a)?,
        Command::Oracle(a) => run_oracle(a)?,
    };
    let timing_ms = start.elapsed().as_secs_f64() * 1e3;
    let revalidation = if ran.subcommand.starts_with("oracle") {
        Revalidation::of(vec![])
    } else {
        revalidate(ran.subcommand, &ran.config, &ran.inputs, ran.outcome, &ran.result)?
    };
    let mut config = ran.config;
    config["seed"] = json!(cli.seed);
    let report = RunReport {
        command: argv.iter().map(|s| s.to_string_lossy().into_owned()).collect(),
        subcommand: ran.subcommand.to_string(),
        config,
        inputs: ran.inputs,
        outcome: ran.outcome,
        result: ran.result,
        revalidation,
        timing_ms,
    };
    let svg = match &cli.command {
        Command::Hs(a) => a.svg.clone(),
        Command::Oracle(OracleArgs { command: OracleCommand::Naive { svg, .. } }) => svg.clone(),
        _ => None,
    };
    if let Some(path) = svg {
        emit_svg(&report, &path)?;
    }
    Ok(report)
}

/// Runs, prints the report (or the error) and returns the exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    if argv.iter().skip(1).any(|a| a == "--help" || a == "-h" || a == "--version" || a == "-V") {
        if let Err(e) = Cli::try_parse_from(&argv) {
            let _ = e.print();
            return EXIT_OK;
        }
    }
    match run(argv) {
        Ok(report) => {
            println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
            report.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}

// ----------------------------------------------------------------------------
// SVG

const PALETTE: [&str; 8] = [
    "#d62728", "#2ca02c", "#1f77b4", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

fn report_u(report: &RunReport) -> Option<Vec<f64>> {
    let r = &report.result;
    for path in [&["u"][..], &["best_u"], &["best", "u"]] {
        let mut v = r;
        let mut ok = true;
        for k in path {
            match v.get(*k) {
                Some(x) => v = x,
                None => ok = false,
            }
        }
        if ok {
            if let Ok(u) = serde_json::from_value::<Vec<f64>>(v.clone()) {
                return Some(u);
            }
        }
    }
    None
}

/// Clips a polygon to `{x : <n, x> <= c}`.
fn clip(poly: &[[f64; 2]], n: [f64; 2], c: f64) -> Vec<[f64; 2]> {
    let inside = |p: &[f64; 2]| n[0] * p[0] + n[1] * p[1] <= c;
    let mut out = vec![];
    for i in 0..poly.len() {
        let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
        let (ia, ib) = (inside(&a), inside(&b));
        if ia {
            out.push(a);
        }
        if ia != ib {
            let fa = n[0] * a[0] + n[1] * a[1] - c;
            let fb = n[0] * b[0] + n[1] * b[1] - c;
            let t = fa / (fa - fb);
            out.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
        }
    }
    out
}

/// Renders the planar measures of a ham sandwich report, its cut line and
/// the shaded halfspace `H^+`.
pub fn render_svg(report: &RunReport) -> Result<String> {
    let ms: MeasuresJson = from_value(need(&report.inputs, "measures")?, "measures")?;
    let groups: Vec<SmoothedPointMeasure> = ms.all();
    if groups.is_empty() {
        return Err(Error::InvalidReport("no measures to draw".into()));
    }
    if groups.iter().any(|m| m.dim() != 2) {
        return Err(Error::UnsupportedDimension("SVG output is planar".into()));
    }
    let pts = groups.iter().flat_map(|m| m.points.iter());
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in pts {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-9);
    let pad = 0.1 * span;
    let (x0, y0, w) = (lo[0] - pad, lo[1] - pad, span + 2.0 * pad);
    let size = 600.0;
    let sx = |x: f64| (x - x0) / w * size;
    let sy = |y: f64| size - (y - y0) / w * size;

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">"
    );
    let _ = writeln!(s, "<rect width=\"{size}\" height=\"{size}\" fill=\"white\"/>");
    if let Some(u) = report_u(report).filter(|u| u.len() == 3) {
        let n = [u[1], u[2]];
        let box_ = [[x0, y0], [x0 + w, y0], [x0 + w, y0 + w], [x0, y0 + w]];
        let shade = clip(&box_, n, u[0]);
        if !shade.is_empty() {
            let pts: Vec<String> = shade.iter().map(|p| format!("{:.3},{:.3}", sx(p[0]), sy(p[1]))).collect();
            let _ = writeln!(s, "<polygon points=\"{}\" fill=\"#cccccc\" fill-opacity=\"0.4\"/>", pts.join(" "));
        }
        let nn = linalg::norm(&n);
        if nn > 1e-12 {
            let base = [n[0] * u[0] / (nn * nn), n[1] * u[0] / (nn * nn)];
            let dir = [-n[1] / nn, n[0] / nn];
            let l = 2.0 * w;
            let _ = writeln!(
                s,
                "<line x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\" stroke=\"black\" stroke-width=\"1.5\"/>",
                sx(base[0] - l * dir[0]),
                sy(base[1] - l * dir[1]),
                sx(base[0] + l * dir[0]),
                sy(base[1] + l * dir[1])
            );
        }
    }
    for (i, m) in groups.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let _ = writeln!(s, "<g fill=\"{color}\">");
        for p in &m.points {
            let _ = writeln!(s, "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"2\"/>", sx(p[0]), sy(p[1]));
        }
        let _ = writeln!(s, "</g>");
    }
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn emit_svg(report: &RunReport, path: &Path) -> Result<()> {
    std::fs::write(path, render_svg(report)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_evaluation() {
        let p: Polynomial = serde_json::from_str(r#"[{"coef":2,"pow":[1,2]},{"coef":-1}]"#).unwrap();
        assert_eq!(eval_polynomial(&p, &[3.0, 0.5]), 2.0 * 3.0 * 0.25 - 1.0);
    }

    #[test]
    fn signs_and_labels() {
        assert_eq!(parse_signs("+-+").unwrap(), vec![1, -1, 1]);
        assert!(parse_signs("+x").is_err());
        let l = parse_labeling(&json!({"1": 2, "-1": -2}), 2).unwrap();
        assert_eq!(l.get(VertexId(-1)), (2, 1));
        assert_eq!(labeling_to_json(&l), json!({"-1": -2, "1": 2}));
        let l = parse_labeling(&json!({"0": [1, 2]}), 3).unwrap();
        assert_eq!(l.get(VertexId(0)), (1, 2));
    }

    #[test]
    fn clipping_a_square() {
        let sq = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        let half = clip(&sq, [1.0, 0.0], 0.5);
        assert_eq!(half.len(), 4);
        assert!(half.iter().all(|p| p[0] <= 0.5));
    }
}
