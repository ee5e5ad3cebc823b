//! Measure partitions by hyperplanes: colorful ham sandwich, equalizing
//! cuts, prescribed-fraction cuts and well-separation.
//!
//! A hyperplane is a unit vector `u = (u_0, u_1, …, u_d)` with
//! `H^+(u) = {x : ⟨u_{1..d}, x⟩ <= u_0}`, so `H^+(-u) = H^-(u)`. The poles
//! `(±1, 0, …, 0)` stand for `R^d` and the empty set.

use std::sync::Arc;

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complexes::for_each_permutation;
use crate::cover_solvers::RefinementConfig;
use crate::linalg;
use crate::matrix_bu::{
    bu_search_filtered, transversal_residual, BuOutcome, BuResult, OddMatrixField, RowClash,
};
use crate::{Error, Result};

/// Below this norm of `u_{1..d}` a hyperplane is treated as a pole.
pub const POLE_EPS: f64 = 1e-12;

/// Default ramp width relative to the cloud diameter.
pub const DEFAULT_RELATIVE_DELTA: f64 = 1e-3;

/// Number of sampled normals for the anchor condition.
pub const ANCHOR_DIRECTIONS: usize = 64;

/// A weighted point cloud whose mass crosses a hyperplane along a linear
/// ramp of width `delta`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothedPointMeasure {
    pub points: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    pub delta: f64,
}

impl SmoothedPointMeasure {
    pub fn new(points: Vec<Vec<f64>>, weights: Vec<f64>, delta: f64) -> Result<Self> {
        let m = Self {
            points,
            weights,
            delta,
        };
        m.validate()?;
        Ok(m)
    }

    /// Unit weights and `delta = 1e-3 · diameter` (or `1e-3` for a single point).
    pub fn uniform(points: Vec<Vec<f64>>) -> Result<Self> {
        let weights = vec![1.0; points.len()];
        let mut m = Self {
            points,
            weights,
            delta: 1.0,
        };
        m.delta = m.default_delta();
        m.validate()?;
        Ok(m)
    }

    pub fn default_delta(&self) -> f64 {
        let d = self.diameter();
        DEFAULT_RELATIVE_DELTA * if d > 0.0 { d } else { 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::param(format!("ramp width must be positive, got {}", self.delta)));
        }
        if self.points.is_empty() {
            return Err(Error::input("measure has no points"));
        }
        if self.points.len() != self.weights.len() {
            return Err(Error::input("points and weights differ in length"));
        }
        if self.weights.iter().any(|w| !(*w > 0.0 && w.is_finite())) {
            return Err(Error::param("weights must be positive"));
        }
        let d = self.points[0].len();
        if d == 0 || self.points.iter().any(|p| p.len() != d || p.iter().any(|v| !v.is_finite())) {
            return Err(Error::input("points must share a positive dimension"));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn diameter(&self) -> f64 {
        let mut best: f64 = 0.0;
        for (i, a) in self.points.iter().enumerate() {
            for b in &self.points[i + 1..] {
                best = best.max(linalg::dist(a, b));
            }
        }
        best
    }

    /// `μ(H^+(u))`.
    pub fn halfspace_value(&self, u: &[f64]) -> f64 {
        let n = &u[1..];
        let norm = linalg::norm(n);
        if norm < POLE_EPS {
            return if u[0] > 0.0 { self.total_mass() } else { 0.0 };
        }
        let scale = self.delta * norm;
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * ((u[0] - linalg::dot(n, x)) / scale + 0.5).clamp(0.0, 1.0))
            .sum()
    }

    /// `μ(H^+(u)) - ½μ(R^d)`, computed as an odd function of `u`.
    pub fn residual(&self, u: &[f64]) -> f64 {
        (self.halfspace_value(u) - self.halfspace_value(&linalg::neg(u))) / 2.0
    }

    /// Whether the hyperplane of `u` (with its ramp) touches the support.
    pub fn is_cut(&self, u: &[f64]) -> bool {
        let r = self.residual(u).abs();
        r < 0.5 * self.total_mass() * (1.0 - 1e-12)
    }
}

pub fn halfspace_value(mu: &SmoothedPointMeasure, u: &[f64]) -> Result<f64> {
    mu.validate()?;
    if u.len() != mu.dim() + 1 {
        return Err(Error::input("hyperplane parameter has the wrong dimension"));
    }
    Ok(mu.halfspace_value(u))
}

/// `d+1` families of `d+1` measures each in `R^d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureFamilySet {
    pub families: Vec<Vec<SmoothedPointMeasure>>,
}

impl MeasureFamilySet {
    pub fn new(families: Vec<Vec<SmoothedPointMeasure>>) -> Result<Self> {
        let set = Self { families };
        set.validate()?;
        Ok(set)
    }

    /// The same family repeated `d+1` times.
    pub fn repeated(family: Vec<SmoothedPointMeasure>) -> Result<Self> {
        let n = family.len();
        Self::new(vec![family; n])
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.families.len();
        if k < 2 {
            return Err(Error::param("need d+1 >= 2 families"));
        }
        let d = k - 1;
        for fam in &self.families {
            if fam.len() != k {
                return Err(Error::param(format!("each family needs {k} measures")));
            }
            for m in fam {
                m.validate()?;
                if m.dim() != d {
                    return Err(Error::input(format!("measure of dimension {} in R^{d}", m.dim())));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.families.len() - 1
    }

    /// `r_{ji} = μ_i^{(j)}(H^+) - ½μ_i^{(j)}(R^d)`.
    pub fn residuals(&self, u: &[f64]) -> Vec<Vec<f64>> {
        self.families
            .iter()
            .map(|fam| fam.iter().map(|m| m.residual(u)).collect())
            .collect()
    }

    fn all_measures(&self) -> impl Iterator<Item = &SmoothedPointMeasure> {
        self.families.iter().flatten()
    }

    fn field(&self) -> OddMatrixField {
        let set = self.clone();
        OddMatrixField::new(self.families.len(), Arc::new(move |u: &[f64]| set.residuals(u)))
    }
}

/// A hyperplane at which measure `i` of family `pi[i]` maximizes `H^+`
/// for its family, for every `i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HsWitness {
    pub u: Vec<f64>,
    /// 1-based family per measure index.
    pub pi: Vec<usize>,
    pub residuals: Vec<Vec<f64>>,
    pub residual: f64,
    pub tol: f64,
    pub depth: usize,
}

impl HsWitness {
    pub fn verify(&self, m: &MeasureFamilySet) -> bool {
        let r = m.residuals(&self.u);
        let mut seen = self.pi.clone();
        seen.sort();
        seen == (1..=r.len()).collect::<Vec<_>>() && transversal_residual(&r, &self.pi) <= self.tol
    }
}

/// At `u`, measure `measure` maximizes `H^+` in family `maximizing` and
/// minimizes it in family `minimizing` (all indices 1-based).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OppositePairReport {
    pub u: Vec<f64>,
    pub measure: usize,
    pub maximizing: usize,
    pub minimizing: usize,
    pub entries: (f64, f64),
    pub residuals: Vec<Vec<f64>>,
    pub tol: f64,
}

impl OppositePairReport {
    pub fn verify(&self, m: &MeasureFamilySet) -> bool {
        let r = m.residuals(&self.u);
        let clash = BuOutcome::BadRows(RowClash {
            rows: (self.maximizing, self.minimizing),
            column: self.measure,
            entries: self.entries,
        });
        crate::matrix_bu::verify_outcome(&r, &clash, self.tol)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum ColorfulHsResult {
    Witness(HsWitness),
    OppositePair(OppositePairReport),
    Inconclusive { best_residual: f64, depth: usize },
}

fn best_transversal(r: &[Vec<f64>]) -> (f64, Vec<usize>) {
    let n = r.len();
    let mut best = (f64::INFINITY, (1..=n).collect::<Vec<_>>());
    let rows: Vec<usize> = (1..=n).collect();
    for_each_permutation(&rows, |perm| {
        let pi = perm.to_vec();
        let v = transversal_residual(r, &pi);
        if v < best.0 {
            best = (v, pi);
        }
    });
    best
}

/// Either a hyperplane on which a transversal of maximizing measures
/// exists, or a measure that maximizes in one family and minimizes in
/// another. Hyperplanes missing every support are not accepted as
/// witnesses.
pub fn solve_colorful_hs(m: &MeasureFamilySet, cfg: &RefinementConfig) -> Result<ColorfulHsResult> {
    m.validate()?;
    let tol = cfg.witness_tol;
    let admissible = |u: &[f64]| m.all_measures().any(|mu| mu.is_cut(u));
    let res = bu_search_filtered(&m.field(), true, cfg, &admissible)?;
    let w = match res {
        BuResult::Witness(w) => w,
        BuResult::Inconclusive {
            best_residual,
            depth,
        } => {
            return Ok(ColorfulHsResult::Inconclusive {
                best_residual,
                depth,
            })
        }
    };
    let r = m.residuals(&w.x);
    let (best, pi) = best_transversal(&r);
    if best <= tol && admissible(&w.x) {
        return Ok(ColorfulHsResult::Witness(HsWitness {
            u: w.x,
            pi,
            residuals: r,
            residual: best,
            tol,
            depth: w.depth,
        }));
    }
    match w.outcome {
        BuOutcome::BadRows(clash) => {
            let (a, b) = clash.rows;
            let (ea, eb) = clash.entries;
            let (maximizing, minimizing, entries) = if ea >= eb {
                (a, b, (ea, eb))
            } else {
                (b, a, (eb, ea))
            };
            Ok(ColorfulHsResult::OppositePair(OppositePairReport {
                u: w.x,
                measure: clash.column,
                maximizing,
                minimizing,
                entries,
                residuals: r,
                tol,
            }))
        }
        BuOutcome::Transversal { .. } => Err(Error::Internal(format!(
            "transversal certificate has residual {best}"
        ))),
    }
}

/// A cut returned by the equalizing and fraction solvers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperplaneCut {
    pub u: Vec<f64>,
    /// `μ_i(H^+)` for each input measure.
    pub values: Vec<f64>,
    pub masses: Vec<f64>,
    pub residual: f64,
    pub tol: f64,
    pub depth: usize,
}

impl HyperplaneCut {
    fn at(u: Vec<f64>, measures: &[SmoothedPointMeasure], residual: f64, tol: f64, depth: usize) -> Self {
        Self {
            values: measures.iter().map(|m| m.halfspace_value(&u)).collect(),
            masses: measures.iter().map(|m| m.total_mass()).collect(),
            u,
            residual,
            tol,
            depth,
        }
    }

    /// `μ_i(H^+) / μ_i(R^d)`.
    pub fn fractions(&self) -> Vec<f64> {
        self.values.iter().zip(&self.masses).map(|(v, m)| v / m).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum CutResult {
    Found(HyperplaneCut),
    Inconclusive { best_residual: f64, depth: usize },
}

impl CutResult {
    pub fn cut(&self) -> Option<&HyperplaneCut> {
        match self {
            CutResult::Found(c) => Some(c),
            CutResult::Inconclusive { .. } => None,
        }
    }
}

/// `max_{i,j} |D_i - D_j|` with `D_i = μ_i(H^+) - μ_i(H^-)`.
pub fn equalizing_residual(measures: &[SmoothedPointMeasure], u: &[f64]) -> f64 {
    spread(&measures.iter().map(|m| 2.0 * m.residual(u)).collect::<Vec<_>>())
}

fn spread(v: &[f64]) -> f64 {
    let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
    hi - lo
}

/// A signed combination `Σ s_k μ_k` of smoothed measures.
type Composite = Vec<(SmoothedPointMeasure, f64)>;

fn composite_residual(c: &Composite, u: &[f64]) -> f64 {
    c.iter().map(|(m, s)| s * m.residual(u)).sum()
}

/// Equalizes `ν_i(H^+) - ν_i(H^-)` over the composites `ν_i` to within
/// `tol`. This is the colorful problem with every family equal, run
/// uncolored.
fn equalize_composites(
    measures: &[Composite],
    tol: f64,
    cfg: &RefinementConfig,
) -> Result<(Option<Vec<f64>>, usize)> {
    let n = measures.len();
    let d = measures[0][0].0.dim();
    if n != d + 1 {
        return Err(Error::param(format!("need {} measures in R^{d}, got {n}", d + 1)));
    }
    for (m, _) in measures.iter().flatten() {
        m.validate()?;
        if m.dim() != d {
            return Err(Error::input("measures of different dimensions"));
        }
    }
    let ms: Vec<Composite> = measures.to_vec();
    let row = move |u: &[f64]| -> Vec<f64> { ms.iter().map(|c| composite_residual(c, u)).collect() };
    let row2 = row.clone();
    let field = OddMatrixField::new(n, Arc::new(move |u: &[f64]| vec![row2(u); n]));
    // Rows agree, so a certificate of tolerance t pins every entry to within
    // 3t of the row maximum; entries are half differences.
    let inner = RefinementConfig {
        witness_tol: tol / 8.0,
        ..cfg.clone()
    };
    let admissible = |u: &[f64]| measures.iter().flatten().any(|(m, _)| m.is_cut(u));
    match bu_search_filtered(&field, false, &inner, &admissible)? {
        BuResult::Witness(w) => {
            let r = spread(&row(&w.x)) * 2.0;
            if r > tol {
                return Err(Error::Internal(format!("equalizing certificate has spread {r}")));
            }
            Ok((Some(w.x), w.depth))
        }
        BuResult::Inconclusive { depth, .. } => Ok((None, depth)),
    }
}

/// A hyperplane on which `μ_i(H^+) - μ_i(H^-)` is the same for all `d+1`
/// measures.
pub fn solve_equalizing_hs(measures: &[SmoothedPointMeasure], cfg: &RefinementConfig) -> Result<CutResult> {
    if measures.is_empty() {
        return Err(Error::param("no measures"));
    }
    let tol = cfg.witness_tol;
    let comps: Vec<Composite> = measures.iter().map(|m| vec![(m.clone(), 1.0)]).collect();
    let (u, depth) = equalize_composites(&comps, tol, cfg)?;
    Ok(match u {
        Some(u) => {
            let r = equalizing_residual(measures, &u);
            CutResult::Found(HyperplaneCut::at(u, measures, r, tol, depth))
        }
        None => CutResult::Inconclusive {
            best_residual: f64::INFINITY,
            depth,
        },
    })
}

fn max_fraction_error(measures: &[SmoothedPointMeasure], alphas: &[f64], u: &[f64]) -> f64 {
    measures
        .iter()
        .zip(alphas)
        .map(|(m, a)| (m.halfspace_value(u) / m.total_mass() - a).abs())
        .fold(0.0, f64::max)
}

fn bisecting_cut(measures: &[SmoothedPointMeasure], cfg: &RefinementConfig) -> Result<CutResult> {
    let tol = cfg.witness_tol;
    // With ν_i = μ_i/μ_i(R^d) and ν_{d+1} = 2Σν_i, equal differences D force
    // (2d-1)D ≈ 0, so every ν_i is bisected to within 2·(tol/2).
    let mut comps: Vec<Composite> = measures
        .iter()
        .map(|m| vec![(m.clone(), 1.0 / m.total_mass())])
        .collect();
    comps.push(measures.iter().map(|m| (m.clone(), 2.0 / m.total_mass())).collect());
    let (u, depth) = equalize_composites(&comps, tol / 2.0, cfg)?;
    Ok(match u {
        Some(u) => {
            let r = max_fraction_error(measures, &vec![0.5; measures.len()], &u);
            if r > tol {
                return Err(Error::Internal(format!("bisection error {r}")));
            }
            CutResult::Found(HyperplaneCut::at(u, measures, r, tol, depth))
        }
        None => CutResult::Inconclusive {
            best_residual: f64::INFINITY,
            depth,
        },
    })
}

/// A hyperplane bisecting `d` measures in `R^d` to within `tol` of half
/// their mass (classical ham sandwich).
pub fn ham_sandwich_cut(measures: &[SmoothedPointMeasure], cfg: &RefinementConfig) -> Result<CutResult> {
    if measures.is_empty() || measures.iter().any(|m| m.dim() != measures.len()) {
        return Err(Error::param("need d measures in R^d"));
    }
    bisecting_cut(measures, cfg)
}

/// Sampled unit normals in `R^d` for the anchor condition.
pub fn anchor_directions(d: usize) -> Vec<Vec<f64>> {
    match d {
        1 => vec![vec![1.0]],
        2 => (0..ANCHOR_DIRECTIONS)
            .map(|k| {
                let t = std::f64::consts::PI * k as f64 / ANCHOR_DIRECTIONS as f64;
                vec![t.cos(), t.sin()]
            })
            .collect(),
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            (0..ANCHOR_DIRECTIONS)
                .map(|_| loop {
                    let v: Vec<f64> = (0..d).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
                    let n = linalg::norm(&v);
                    if n > 1e-3 && n <= 1.0 {
                        break v.iter().map(|x| x / n).collect();
                    }
                })
                .collect()
        }
    }
}

/// Half the smallest sampled distance from the anchor to a hyperplane
/// meeting every (ramp-inflated) support. Fails with the offending normal
/// when some sampled hyperplane through the anchor meets all supports.
pub fn anchor_radius(measures: &[SmoothedPointMeasure], anchor: &[f64]) -> Result<f64> {
    let d = anchor.len();
    let scale = measures
        .iter()
        .flat_map(|m| m.points.iter())
        .map(|p| linalg::dist(p, anchor))
        .fold(0.0, f64::max)
        .max(1e-9);
    let mut gap = f64::INFINITY;
    for n in anchor_directions(d) {
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for m in measures {
            let proj = m.points.iter().map(|p| linalg::dot(&n, p));
            let (a, b) = proj.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), t| (a.min(t), b.max(t)));
            lo = lo.max(a - m.delta / 2.0);
            hi = hi.min(b + m.delta / 2.0);
        }
        let t = linalg::dot(&n, anchor);
        let g = if lo > hi {
            f64::INFINITY
        } else if t < lo {
            lo - t
        } else if t > hi {
            t - hi
        } else {
            0.0
        };
        if g <= 0.0 {
            return Err(Error::InvalidAnchor { direction: n });
        }
        gap = gap.min(g);
    }
    Ok(0.5 * gap.min(scale))
}

/// A hyperplane with `μ_i(H^+) = α_i μ_i(R^d)` for `d` measures in `R^d`,
/// using an auxiliary unit mass at `anchor`. Either all `α_i` are `½` or
/// none is.
pub fn solve_bhj_fractions(
    measures: &[SmoothedPointMeasure],
    alphas: &[f64],
    anchor: &[f64],
    cfg: &RefinementConfig,
) -> Result<CutResult> {
    let d = anchor.len();
    if measures.len() != d || alphas.len() != d {
        return Err(Error::param(format!("need {d} measures and fractions in R^{d}")));
    }
    for m in measures {
        m.validate()?;
        if m.dim() != d {
            return Err(Error::input("measure dimension differs from the anchor"));
        }
    }
    if alphas.iter().any(|a| !(*a > 0.0 && *a < 1.0)) {
        return Err(Error::param("fractions must lie in (0, 1)"));
    }
    let eps = anchor_radius(measures, anchor)?;
    let tol = cfg.witness_tol;
    let halves = alphas.iter().filter(|a| **a == 0.5).count();
    if halves == d {
        return bisecting_cut(measures, cfg);
    }
    if halves > 0 {
        return Err(Error::param("fractions mix ½ with other values"));
    }

    // ν_i = μ_i / ((2α_i - 1)μ_i(R^d)) has D_i = 1 exactly at the target cut;
    // the anchor mass pins the common value of D to ±1.
    let mut comps: Vec<Composite> = measures
        .iter()
        .zip(alphas)
        .map(|(m, a)| vec![(m.clone(), 1.0 / ((2.0 * a - 1.0) * m.total_mass()))])
        .collect();
    let anchor_mass = SmoothedPointMeasure::new(vec![anchor.to_vec()], vec![1.0], 2.0 * eps)?;
    comps.push(vec![(anchor_mass.clone(), 1.0)]);
    let inner_tol = alphas
        .iter()
        .map(|a| 2.0 * tol * (2.0 * a - 1.0).abs())
        .fold(f64::INFINITY, f64::min);
    let (u, depth) = equalize_composites(&comps, inner_tol, cfg)?;
    let Some(mut u) = u else {
        return Ok(CutResult::Inconclusive {
            best_residual: f64::INFINITY,
            depth,
        });
    };
    if anchor_mass.residual(&u) < 0.0 {
        u = linalg::neg(&u);
    }
    let r = max_fraction_error(measures, alphas, &u);
    if r > tol {
        return Err(Error::Internal(format!("fraction error {r}")));
    }
    Ok(CutResult::Found(HyperplaneCut::at(u, measures, r, tol, depth)))
}

/// Outcome of the well-separation test. A violation lists one point per
/// cloud, all lying in a common `(k-2)`-flat, and the split of the clouds
/// whose hulls meet.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparationReport {
    pub separated: bool,
    pub transversal: Option<Vec<Vec<f64>>>,
    pub split: Option<(Vec<usize>, Vec<usize>)>,
}

/// Decides whether `k <= d+1` point clouds in `R^d` are well separated:
/// no two disjoint subfamilies have intersecting hulls of their unions.
pub fn well_separated_check(clouds: &[Vec<Vec<f64>>]) -> Result<SeparationReport> {
    let k = clouds.len();
    if k == 0 || clouds.iter().any(|c| c.is_empty()) {
        return Err(Error::input("clouds must be nonempty"));
    }
    let d = clouds[0][0].len();
    if clouds.iter().flatten().any(|p| p.len() != d) {
        return Err(Error::input("points of different dimensions"));
    }
    if k > d + 1 {
        return Err(Error::param(format!("{k} clouds in R^{d}, at most {} allowed", d + 1)));
    }
    // side[i]: 0 unused, 1 in P, 2 in N. Splits and their mirrors coincide,
    // so cloud 0 is never in N.
    let total = 3usize.pow(k as u32);
    for code in 0..total {
        let side: Vec<usize> = (0..k).map(|i| code / 3usize.pow(i as u32) % 3).collect();
        if side[0] == 2 || !side.contains(&1) || !side.contains(&2) {
            continue;
        }
        if let Some(points) = hull_meeting(clouds, &side, d) {
            let pick = |s| (0..k).filter(|i| side[*i] == s).map(|i| i + 1).collect();
            return Ok(SeparationReport {
                separated: false,
                transversal: Some(points),
                split: Some((pick(1), pick(2))),
            });
        }
    }
    Ok(SeparationReport {
        separated: true,
        transversal: None,
        split: None,
    })
}

/// Solves `Σ_P y_i = Σ_N y_i` with `y_i = Σ_k λ_{ik} p_{ik}`, `λ >= 0` and
/// unit total weight on each side; returns `x_i = y_i / Σ_k λ_{ik}`.
fn hull_meeting(clouds: &[Vec<Vec<f64>>], side: &[usize], d: usize) -> Option<Vec<Vec<f64>>> {
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let vars: Vec<Vec<minilp::Variable>> = clouds
        .iter()
        .zip(side)
        .map(|(c, s)| {
            if *s == 0 {
                vec![]
            } else {
                c.iter().map(|_| lp.add_var(0.0, (0.0, f64::INFINITY))).collect()
            }
        })
        .collect();
    for s in [1usize, 2] {
        let expr: Vec<(minilp::Variable, f64)> = (0..clouds.len())
            .filter(|i| side[*i] == s)
            .flat_map(|i| vars[i].iter().map(|v| (*v, 1.0)))
            .collect();
        lp.add_constraint(expr, ComparisonOp::Eq, 1.0);
    }
    for c in 0..d {
        let expr: Vec<(minilp::Variable, f64)> = (0..clouds.len())
            .flat_map(|i| {
                let sign = if side[i] == 1 { 1.0 } else { -1.0 };
                vars[i].iter().zip(&clouds[i]).map(move |(v, p)| (*v, sign * p[c]))
            })
            .collect();
        lp.add_constraint(expr, ComparisonOp::Eq, 0.0);
    }
    let sol = lp.solve().ok()?;
    Some(
        clouds
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let w: Vec<f64> = vars[i].iter().map(|v| sol[*v].max(0.0)).collect();
                let s: f64 = w.iter().sum();
                if s <= 1e-12 {
                    c[0].clone()
                } else {
                    (0..d)
                        .map(|j| w.iter().zip(c).map(|(a, p)| a * p[j]).sum::<f64>() / s)
                        .collect()
                }
            })
            .collect(),
    )
}

/// Best line found by [`naive_conjecture_scan`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NaiveScan {
    pub found: bool,
    /// Largest over the grid of the smallest constraint margin.
    pub best_margin: f64,
    pub best_u: Vec<f64>,
}

/// Grid search for a line with `r_1(H^+), g_2(H^+), g_1(H^-), r_2(H^-)` all
/// at least `½ - slack` (as fractions of each measure). Angles advance by
/// `step` radians and offsets by `step · R` over `[-R, R]`, where `R`
/// bounds the points.
pub fn naive_conjecture_scan(
    r1: &SmoothedPointMeasure,
    g1: &SmoothedPointMeasure,
    r2: &SmoothedPointMeasure,
    g2: &SmoothedPointMeasure,
    step: f64,
    slack: f64,
) -> Result<NaiveScan> {
    let all = [r1, g1, r2, g2];
    for m in all {
        m.validate()?;
        if m.dim() != 2 {
            return Err(Error::UnsupportedDimension("the naive scan is planar".into()));
        }
    }
    if !(step > 0.0 && step < 1.0) {
        return Err(Error::param("step must lie in (0, 1)"));
    }
    let radius = all
        .iter()
        .flat_map(|m| m.points.iter())
        .map(|p| linalg::norm(p))
        .fold(0.0, f64::max)
        .max(1e-9);
    let angles = (2.0 * std::f64::consts::PI / step).ceil() as usize;
    // margin >= 0 iff r_1(H^+), g_1(H^-), r_2(H^-), g_2(H^+) are all >= ½
    let offsets = (2.0 / step).round() as usize;
    let mass: Vec<f64> = all.iter().map(|m| m.total_mass()).collect();
    let (best_margin, best_u) = (0..angles)
        .into_par_iter()
        .map(|a| {
            let t = a as f64 * step;
            let mut best = (f64::NEG_INFINITY, vec![]);
            for o in 0..=offsets {
                let c = -radius + o as f64 * step * radius;
                let u = linalg::normalized(&[c, t.cos(), t.sin()]).expect("unit normal");
                let f: Vec<f64> = all.iter().zip(&mass).map(|(m, w)| m.halfspace_value(&u) / w).collect();
                let margin = (f[0] - 0.5).min(0.5 - f[1]).min(0.5 - f[2]).min(f[3] - 0.5);
                if margin > best.0 {
                    best = (margin, u);
                }
            }
            best
        })
        .reduce(|| (f64::NEG_INFINITY, vec![]), |a, b| if b.0 > a.0 { b } else { a });
    Ok(NaiveScan {
        found: best_margin >= -slack,
        best_margin,
        best_u,
    })
}

/// Points `(t-2, (t-2)^2)` for `n` evenly spaced `t` in each of `ranges`.
pub fn parabola_cloud(ranges: &[(f64, f64)], n: usize) -> Result<SmoothedPointMeasure> {
    let points = ranges
        .iter()
        .flat_map(|&(a, b)| {
            (0..n).map(move |k| {
                let t = a + (b - a) * k as f64 / (n.max(2) - 1) as f64;
                vec![t - 2.0, (t - 2.0) * (t - 2.0)]
            })
        })
        .collect();
    SmoothedPointMeasure::uniform(points)
}

/// Two families of arcs on the parabola `y = x^2`: `r_1` and `g_1` split
/// the curve into halves, while `r_2` and `g_2` sit at its two ends.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParabolaFamilies {
    pub r1: SmoothedPointMeasure,
    pub g1: SmoothedPointMeasure,
    pub r2: SmoothedPointMeasure,
    pub g2: SmoothedPointMeasure,
    /// A small grid cloud above the vertex, used as the third measure.
    pub extra: SmoothedPointMeasure,
}

impl ParabolaFamilies {
    pub fn standard() -> Self {
        let p = |r: &[(f64, f64)]| parabola_cloud(r, 100).expect("valid arc");
        let extra = (0..100)
            .map(|k| vec![-0.3 + 0.6 * (k % 10) as f64 / 9.0, 5.7 + 0.6 * (k / 10) as f64 / 9.0])
            .collect();
        Self {
            r1: p(&[(0.0, 2.0)]),
            g1: p(&[(2.0, 4.0)]),
            r2: p(&[(0.0, 1.0)]),
            g2: p(&[(3.0, 4.0)]),
            extra: SmoothedPointMeasure::uniform(extra).expect("valid cloud"),
        }
    }

    /// The naive colorful question asks for `r_1, g_2` above half on `H^+`
    /// and `g_1, r_2` above half on `H^-`.
    pub fn naive_scan(&self, step: f64, slack: f64) -> Result<NaiveScan> {
        naive_conjecture_scan(&self.r1, &self.g1, &self.r2, &self.g2, step, slack)
    }

    /// Three families in the plane with columns `(r_1 | g_2, g_1 | r_2, extra)`;
    /// the third family repeats the first.
    pub fn families(&self) -> MeasureFamilySet {
        let first = vec![self.r1.clone(), self.g1.clone(), self.extra.clone()];
        let second = vec![self.g2.clone(), self.r2.clone(), self.extra.clone()];
        MeasureFamilySet::new(vec![first.clone(), second, first]).expect("valid families")
    }
}

/// Uniformly random points in a box, for tests and examples.
pub fn random_cloud(center: &[f64], half_width: f64, n: usize, seed: u64) -> Result<SmoothedPointMeasure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..n)
        .map(|_| {
            center
                .iter()
                .map(|c| c + half_width * (rng.random::<f64>() * 2.0 - 1.0))
                .collect()
        })
        .collect();
    SmoothedPointMeasure::uniform(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_at(p: Vec<f64>) -> SmoothedPointMeasure {
        SmoothedPointMeasure::new(vec![p], vec![1.0], 0.1).unwrap()
    }

    #[test]
    fn halfspace_examples() {
        let m = unit_at(vec![0.0, 0.0]);
        assert_eq!(m.halfspace_value(&[0.0, 0.0, 1.0]), 0.5);
        let u = linalg::normalized(&[-1.0, 0.0, 1.0]).unwrap();
        assert_eq!(m.halfspace_value(&u), 0.0);
        assert_eq!(m.halfspace_value(&[1.0, 0.0, 0.0]), 1.0);
        assert_eq!(m.halfspace_value(&[-1.0, 0.0, 0.0]), 0.0);
        assert!(SmoothedPointMeasure::new(vec![vec![0.0]], vec![1.0], 0.0).is_err());
    }

    #[test]
    fn pole_continuity() {
        let m = random_cloud(&[0.3, -0.2], 1.0, 40, 1).unwrap();
        let mut last = f64::INFINITY;
        for k in 1..12 {
            let e = 10f64.powi(-k);
            let u = linalg::normalized(&[1.0, e, -e]).unwrap();
            let gap = (m.total_mass() - m.halfspace_value(&u)).abs();
            assert!(gap <= last + 1e-12);
            last = gap;
        }
        assert_eq!(last, 0.0);
    }

    #[test]
    fn parabola_families() {
        let fig = ParabolaFamilies::standard();
        let scan = fig.naive_scan(0.01, 0.05).unwrap();
        assert!(!scan.found, "{scan:?}");
        let m = fig.families();
        match solve_colorful_hs(&m, &RefinementConfig::with_tol(1e-3)).unwrap() {
            ColorfulHsResult::OppositePair(rep) => assert!(rep.verify(&m)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn colorful_equal_symmetric_families() {
        let sym = |r: f64, k0: usize| {
            let pts = (0..8)
                .map(|k| {
                    let t = (k + k0) as f64 * std::f64::consts::PI / 4.0 + 0.1;
                    vec![r * t.cos(), r * t.sin()]
                })
                .collect();
            SmoothedPointMeasure::uniform(pts).unwrap()
        };
        let m = MeasureFamilySet::repeated(vec![sym(1.0, 0), sym(2.0, 1), sym(3.0, 2)]).unwrap();
        match solve_colorful_hs(&m, &RefinementConfig::with_tol(1e-3)).unwrap() {
            ColorfulHsResult::Witness(w) => {
                assert!(w.verify(&m));
                assert!(w.residuals.iter().flatten().all(|r| r.abs() <= 2e-3), "{w:?}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn colorful_perturbed_families() {
        let fam = |s: u64| {
            vec![
                random_cloud(&[-2.0, 0.0], 1.0, 30, s).unwrap(),
                random_cloud(&[2.0, 0.5], 1.0, 30, s + 1).unwrap(),
                random_cloud(&[0.0, 3.0], 1.0, 30, s + 2).unwrap(),
            ]
        };
        let m = MeasureFamilySet::new(vec![fam(1), fam(1), fam(1)]).unwrap();
        let mut shifted = m.clone();
        for p in shifted.families[1].iter_mut().flat_map(|mu| mu.points.iter_mut()) {
            p[0] += 0.01;
        }
        for set in [m, shifted] {
            match solve_colorful_hs(&set, &RefinementConfig::with_tol(1e-3)).unwrap() {
                ColorfulHsResult::Witness(w) => assert!(w.verify(&set)),
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn well_separation_examples() {
        let a = vec![vec![0.0, 0.0], vec![1.0, 0.0]];
        let b = vec![vec![0.0, 1.0], vec![1.0, 1.0]];
        assert!(well_separated_check(&[a.clone(), b.clone()]).unwrap().separated);
        let c = vec![vec![0.5, -1.0], vec![0.5, 2.0]];
        let rep = well_separated_check(&[a.clone(), b.clone(), c.clone()]).unwrap();
        assert!(!rep.separated);
        let pts = rep.transversal.unwrap();
        let (p, q, r) = (&pts[0], &pts[1], &pts[2]);
        let cross = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]);
        assert!(cross.abs() < 1e-9);
        let tri = |x: f64, y: f64| vec![vec![x, y], vec![x + 0.2, y], vec![x, y + 0.2]];
        let rep = well_separated_check(&[tri(0.0, 0.0), tri(5.0, 0.0), tri(0.0, 5.0)]).unwrap();
        assert!(rep.separated);
        assert!(well_separated_check(&[a.clone(), b.clone(), c, a]).is_err());
    }

    #[test]
    fn naive_scan_equal_families() {
        let r = parabola_cloud(&[(0.0, 2.0)], 60).unwrap();
        let g = parabola_cloud(&[(2.0, 4.0)], 60).unwrap();
        assert!(naive_conjecture_scan(&r, &g, &r, &g, 0.01, 0.05).unwrap().found);
    }

    #[test]
    fn equalizing_symmetric_clouds() {
        let sym = |r: f64| {
            let pts = (0..12)
                .map(|k| {
                    let t = k as f64 * std::f64::consts::PI / 6.0;
                    vec![r * t.cos() + 1.0, r * t.sin() - 1.0]
                })
                .collect();
            SmoothedPointMeasure::uniform(pts).unwrap()
        };
        let ms = vec![sym(1.0), sym(2.0), sym(3.0)];
        let cfg = RefinementConfig::with_tol(1e-3);
        let cut = solve_equalizing_hs(&ms, &cfg).unwrap();
        let cut = cut.cut().unwrap();
        assert!(equalizing_residual(&ms, &cut.u) <= 1e-3);
    }

    #[test]
    fn bisecting_two_clouds() {
        let a = random_cloud(&[-2.0, 0.0], 1.0, 50, 3).unwrap();
        let b = random_cloud(&[2.0, 1.0], 1.0, 50, 4).unwrap();
        let cfg = RefinementConfig::with_tol(1e-3);
        let cut = ham_sandwich_cut(&[a.clone(), b.clone()], &cfg).unwrap();
        for f in cut.cut().unwrap().fractions() {
            assert!((f - 0.5).abs() <= 1e-3, "{f}");
        }
    }

    #[test]
    fn quartile_on_a_line() {
        let pts: Vec<Vec<f64>> = (0..100).map(|k| vec![k as f64 / 10.0]).collect();
        let m = SmoothedPointMeasure::uniform(pts).unwrap();
        let cfg = RefinementConfig::with_tol(1e-3);
        let cut = solve_bhj_fractions(std::slice::from_ref(&m), &[0.25], &[20.0], &cfg).unwrap();
        let c = cut.cut().unwrap();
        assert!((c.fractions()[0] - 0.25).abs() <= 1e-3);
    }

    #[test]
    fn fractions_in_the_plane() {
        let a = random_cloud(&[-5.0, 0.0], 1.0, 60, 5).unwrap();
        let b = random_cloud(&[5.0, 0.0], 1.0, 60, 6).unwrap();
        let cfg = RefinementConfig::with_tol(1e-3);
        let cut = solve_bhj_fractions(&[a, b], &[0.25, 0.75], &[0.0, 5.0], &cfg).unwrap();
        let f = cut.cut().unwrap().fractions();
        assert!((f[0] - 0.25).abs() <= 1e-3 && (f[1] - 0.75).abs() <= 1e-3, "{f:?}");
    }

    #[test]
    fn anchor_on_a_stabbing_line_is_rejected() {
        let a = random_cloud(&[-5.0, 0.0], 1.0, 20, 5).unwrap();
        let b = random_cloud(&[5.0, 0.0], 1.0, 20, 6).unwrap();
        let err = solve_bhj_fractions(&[a, b], &[0.25, 0.75], &[0.0, 0.0], &RefinementConfig::default());
        assert!(matches!(err, Err(Error::InvalidAnchor { .. })));
    }

    #[test]
    fn mixed_half_is_rejected() {
        let a = random_cloud(&[-5.0, 0.0], 1.0, 20, 5).unwrap();
        let b = random_cloud(&[5.0, 0.0], 1.0, 20, 6).unwrap();
        let err = solve_bhj_fractions(&[a, b], &[0.5, 0.75], &[0.0, 5.0], &RefinementConfig::default());
        assert!(matches!(err, Err(Error::InvalidParameter(_))));
    }
}
