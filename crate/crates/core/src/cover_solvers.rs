//! Covering solvers on symmetric spheres.
//!
//! Every solver runs the same loop: label a triangulation from set
//! membership, scan it for full-orbit faces and target facets, then refine
//! the triangulation around the smallest candidates. Full-orbit faces that
//! shrink below the slack are reported as hypothesis violations; target
//! facets that shrink below the tolerance become witnesses.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::complexes::{crosspolytope, zp_join_sphere, Face, SymmetricComplex, VertexId};
use crate::fan_core::{self, rainbow_labeling, sign_to_excluded, Label};
use crate::linalg;
use crate::{Error, Result};

pub type Membership = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;

/// Membership oracle for one closed set `A_i^{(j)}`.
#[derive(Clone)]
pub struct CoverOracle {
    pub family: usize,
    pub set: usize,
    pub margin: f64,
    membership: Membership,
}

impl std::fmt::Debug for CoverOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CoverOracle")
            .field("family", &self.family)
            .field("set", &self.set)
            .field("margin", &self.margin)
            .finish_non_exhaustive()
    }
}

impl CoverOracle {
    pub fn new(family: usize, set: usize, membership: Membership) -> Self {
        Self {
            family,
            set,
            margin: 0.0,
            membership,
        }
    }

    pub fn from_spec(family: usize, set: usize, spec: SetSpec) -> Self {
        let margin = spec.margin();
        Self {
            family,
            set,
            margin,
            membership: Arc::new(move |x: &[f64]| spec.contains(x)),
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        (self.membership)(x)
    }
}

/// Built-in set primitives on the sphere. Angles are in degrees; margins
/// enlarge the set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SetSpec {
    /// Points within `radius` degrees of `center`.
    Cap {
        center: Vec<f64>,
        radius: f64,
        #[serde(default)]
        margin: f64,
    },
    /// Counter-clockwise arc of the circle from `from` to `to`.
    Arc {
        from: f64,
        to: f64,
        #[serde(default)]
        margin: f64,
    },
    /// `{x : <normal, x> >= offset}`.
    Halfspace {
        normal: Vec<f64>,
        offset: f64,
        #[serde(default)]
        margin: f64,
    },
    Union {
        sets: Vec<SetSpec>,
    },
}

impl SetSpec {
    pub fn margin(&self) -> f64 {
        match self {
            SetSpec::Cap { margin, .. }
            | SetSpec::Arc { margin, .. }
            | SetSpec::Halfspace { margin, .. } => *margin,
            SetSpec::Union { sets } => sets.iter().map(SetSpec::margin).fold(0.0, f64::max),
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            SetSpec::Cap {
                center,
                radius,
                margin,
            } => {
                let c = linalg::normalized(center).unwrap_or_else(|| center.clone());
                let cos = linalg::dot(&c, x).clamp(-1.0, 1.0);
                cos.acos().to_degrees() <= radius + margin
            }
            SetSpec::Arc { from, to, margin } => {
                let theta = x[1].atan2(x[0]).to_degrees();
                let len = (to - from).rem_euclid(360.0);
                let off = (theta - from + margin).rem_euclid(360.0);
                off <= len + 2.0 * margin
            }
            SetSpec::Halfspace {
                normal,
                offset,
                margin,
            } => linalg::dot(normal, x) >= offset - margin,
            SetSpec::Union { sets } => sets.iter().any(|s| s.contains(x)),
        }
    }

    /// The same set rotated by `degrees` (arcs only; other primitives are
    /// returned unchanged).
    pub fn rotated(&self, degrees: f64) -> SetSpec {
        match self {
            SetSpec::Arc { from, to, margin } => SetSpec::Arc {
                from: from + degrees,
                to: to + degrees,
                margin: *margin,
            },
            SetSpec::Union { sets } => SetSpec::Union {
                sets: sets.iter().map(|s| s.rotated(degrees)).collect(),
            },
            other => other.clone(),
        }
    }
}

/// Families of sets `A_i^{(j)}` sharing one group. A translate `g^s·A` is
/// tested as `x ∈ g^s·A ⇔ g^{-s}·x ∈ A`.
#[derive(Clone, Debug)]
pub struct CoverFamilySet {
    p: u32,
    families: Vec<Vec<CoverOracle>>,
}

impl CoverFamilySet {
    pub fn new(p: u32, families: Vec<Vec<CoverOracle>>) -> Result<Self> {
        if families.is_empty() || families[0].is_empty() {
            return Err(Error::param("need at least one family with one set"));
        }
        let k = families[0].len();
        if families.iter().any(|f| f.len() != k) {
            return Err(Error::param("all families need the same number of sets"));
        }
        Ok(Self { p, families })
    }

    /// One family of predicates.
    pub fn single(p: u32, sets: Vec<Membership>) -> Result<Self> {
        let family = sets
            .into_iter()
            .enumerate()
            .map(|(i, m)| CoverOracle::new(0, i, m))
            .collect();
        Self::new(p, vec![family])
    }

    /// Several families of predicates, indexed `[family][set]`.
    pub fn colorful(p: u32, families: Vec<Vec<Membership>>) -> Result<Self> {
        let families = families
            .into_iter()
            .enumerate()
            .map(|(j, sets)| {
                sets.into_iter()
                    .enumerate()
                    .map(|(i, m)| CoverOracle::new(j, i, m))
                    .collect()
            })
            .collect();
        Self::new(p, families)
    }

    pub fn from_specs(p: u32, specs: Vec<Vec<SetSpec>>) -> Result<Self> {
        let families = specs
            .into_iter()
            .enumerate()
            .map(|(j, sets)| {
                sets.into_iter()
                    .enumerate()
                    .map(|(i, s)| CoverOracle::from_spec(j, i, s))
                    .collect()
            })
            .collect();
        Self::new(p, families)
    }

    /// The same family repeated `count` times.
    pub fn repeated(&self, count: usize) -> Self {
        let base = &self.families[0];
        Self {
            p: self.p,
            families: (0..count)
                .map(|j| {
                    base.iter()
                        .map(|o| CoverOracle {
                            family: j,
                            ..o.clone()
                        })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn family_count(&self) -> usize {
        self.families.len()
    }

    pub fn set_count(&self) -> usize {
        self.families[0].len()
    }

    pub fn contains(&self, family: usize, set: usize, x: &[f64]) -> bool {
        self.families[family][set].contains(x)
    }
}

/// Refinement schedule. `initial` defaults to the standard sphere for the
/// group and dimension at hand.
#[derive(Clone, Debug)]
pub struct RefinementConfig {
    pub initial: Option<SymmetricComplex>,
    pub max_depth: usize,
    pub witness_tol: f64,
    /// Full-orbit faces smaller than this are reported as violations.
    pub slack: f64,
}

impl Default for RefinementConfig {
    fn default() -> Self {
        Self {
            initial: None,
            max_depth: 60,
            witness_tol: 1e-3,
            slack: 1e-3,
        }
    }
}

impl RefinementConfig {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            witness_tol: tol,
            slack: tol,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.max_depth < 1 {
            return Err(Error::param("max_depth must be at least 1"));
        }
        if !(self.witness_tol > 0.0 && self.slack > 0.0) {
            return Err(Error::param("tolerances must be positive"));
        }
        Ok(())
    }
}

/// A vertex certifying membership in one required translate
/// `g^shift·A_set^{(family)}`. Sets and families count from 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Support {
    pub set: usize,
    pub shift: u32,
    pub family: usize,
    pub vertex: VertexId,
    pub point: Vec<f64>,
}

impl Support {
    /// Membership re-check using only the oracles.
    pub fn holds(&self, families: &CoverFamilySet, sc: &SymmetricComplex) -> bool {
        let p = families.p();
        let pre = sc.act_point(&self.point, (p - self.shift % p) % p);
        families.contains(self.family - 1, self.set - 1, &pre)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverWitness {
    pub point: Vec<f64>,
    /// One support per required translate, sorted by `(set, shift)`.
    pub supports: Vec<Support>,
    /// Distance from `point` to each support.
    pub residuals: Vec<f64>,
    pub residual: f64,
    pub depth: usize,
    /// Best residual seen after each level (non-increasing).
    pub history: Vec<f64>,
}

impl CoverWitness {
    /// `(set, shift) ↦ family`, the assignment realized by the witness.
    pub fn assignment(&self) -> Vec<((usize, u32), usize)> {
        self.supports
            .iter()
            .map(|s| ((s.set, s.shift), s.family))
            .collect()
    }

    /// Checks support memberships, distances and the required label set.
    pub fn verify(
        &self,
        families: &CoverFamilySet,
        sc: &SymmetricComplex,
        excluded: &[u32],
        tol: f64,
    ) -> bool {
        let required = fan_core::required_labels(families.p(), excluded);
        let got: BTreeSet<Label> = self.supports.iter().map(|s| (s.set, s.shift)).collect();
        got == required
            && self.supports.len() == required.len()
            && self.supports.iter().all(|s| {
                s.holds(families, sc) && linalg::dist(&s.point, &self.point) <= tol
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// `A_i ∩ (-A_i) ≠ ∅`.
    Disjointness,
    /// `A_i^{(j)} ∩ (-A_i^{(l)}) ≠ ∅` for `j ≠ l`.
    CrossDisjointness,
    /// `⋂_k g^k·A_i ≠ ∅`.
    OrbitIntersection,
    /// `⋂_k g^k·A_i^{(j_k)} ≠ ∅` for distinct `j_k`.
    CrossOrbit,
}

/// A point (approximately) in every translate of one set that the
/// hypotheses require to be disjoint.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ViolationReport {
    pub kind: ViolationKind,
    pub set: usize,
    pub point: Vec<f64>,
    /// One support per translate `g^shift·A_set^{(family)}`.
    pub supports: Vec<Support>,
    pub diameter: f64,
}

impl ViolationReport {
    pub fn families(&self) -> Vec<usize> {
        self.supports.iter().map(|s| s.family).collect()
    }

    pub fn verify(&self, families: &CoverFamilySet, sc: &SymmetricComplex, slack: f64) -> bool {
        let shifts: BTreeSet<u32> = self.supports.iter().map(|s| s.shift).collect();
        shifts.len() == families.p() as usize
            && self.supports.iter().all(|s| {
                s.set == self.set
                    && s.holds(families, sc)
                    && linalg::dist(&s.point, &self.point) <= slack
            })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum CoverOutcome {
    Witness(CoverWitness),
    Violation(ViolationReport),
    Inconclusive { best_residual: f64, depth: usize },
}

impl CoverOutcome {
    pub fn witness(&self) -> Option<&CoverWitness> {
        match self {
            CoverOutcome::Witness(w) => Some(w),
            _ => None,
        }
    }

    pub fn violation(&self) -> Option<&ViolationReport> {
        match self {
            CoverOutcome::Violation(v) => Some(v),
            _ => None,
        }
    }
}

// ----------------------------------------------------------------------------
// refinement engine

/// A target facet of one level, with its barycenter and supports.
#[derive(Clone, Debug)]
pub(crate) struct Target {
    pub facet: Face,
    pub point: Vec<f64>,
    pub supports: Vec<Support>,
    pub diameter: f64,
}

impl Target {
    fn assignment(&self) -> Vec<((usize, u32), usize)> {
        self.supports
            .iter()
            .map(|s| ((s.set, s.shift), s.family))
            .collect()
    }

    pub fn max_support_distance(&self) -> f64 {
        self.supports
            .iter()
            .map(|s| linalg::dist(&s.point, &self.point))
            .fold(0.0, f64::max)
    }
}

/// How a candidate target scores. `immediate` accepts without waiting for
/// the assignment to repeat on the next level.
pub(crate) struct Assessment {
    pub residual: f64,
    pub immediate: bool,
}

pub(crate) enum Search<R> {
    Accepted {
        target: Target,
        residual: f64,
        depth: usize,
        history: Vec<f64>,
    },
    Stopped(R),
    Inconclusive {
        best_residual: f64,
        depth: usize,
    },
}

pub(crate) struct OrbitHit<'a> {
    pub sc: &'a SymmetricComplex,
    pub face: &'a Face,
    pub set: usize,
    pub supports: Vec<Support>,
    pub diameter: f64,
}

const TARGETS_REFINED: usize = 4;
const ORBIT_FACES_REFINED: usize = 16;
const TARGETS_ASSESSED: usize = 64;

/// The shared refinement loop. `on_orbit` may stop the search at a
/// full-orbit face; `assess` scores target facets.
pub(crate) fn refine_search<R>(
    families: &CoverFamilySet,
    excluded: &[u32],
    initial: SymmetricComplex,
    cfg: &RefinementConfig,
    on_orbit: impl Fn(&OrbitHit) -> Option<R>,
    assess: impl Fn(&Target) -> Assessment,
) -> Result<Search<R>> {
    cfg.validate()?;
    let p = families.p();
    let colorful = families.family_count() > 1;
    let mut coarse = initial;
    let mut prev_ok: BTreeSet<Vec<((usize, u32), usize)>> = BTreeSet::new();
    let mut best = f64::INFINITY;
    let mut history = Vec::new();

    for depth in 0..=cfg.max_depth {
        let fine = if colorful {
            coarse.barycentric_subdivide()
        } else {
            coarse.clone()
        };
        let labeling = rainbow_labeling(&fine, families)?;
        let labels: HashMap<VertexId, Label> =
            labeling.labels.iter().map(|(v, l)| (*v, *l)).collect();
        let family_of = |v: VertexId| -> usize {
            if colorful {
                fine.carrier_dim(v).unwrap() + 1
            } else {
                1
            }
        };
        let support = |v: VertexId| -> Support {
            let (set, shift) = labels[&v];
            Support {
                set,
                shift,
                family: family_of(v),
                vertex: v,
                point: fine.coord(v).to_vec(),
            }
        };
        let scan = fan_core::scan(&fine, &labels, p, excluded);

        let mut orbit: Vec<(f64, &Face, usize)> = scan
            .orbit_faces
            .iter()
            .map(|(f, j)| (fine.face_diameter(f), f, *j))
            .collect();
        orbit.sort_by(|a, b| a.0.total_cmp(&b.0));
        for (diameter, face, set) in &orbit {
            let hit = OrbitHit {
                sc: &fine,
                face,
                set: *set,
                supports: face.iter().map(|v| support(*v)).collect(),
                diameter: *diameter,
            };
            if let Some(r) = on_orbit(&hit) {
                return Ok(Search::Stopped(r));
            }
        }

        let mut targets: Vec<Target> = scan
            .targets
            .iter()
            .map(|f| {
                let mut supports: Vec<Support> = f.iter().map(|v| support(*v)).collect();
                supports.sort_by_key(|s| (s.set, s.shift));
                Target {
                    point: fine.barycenter(f).expect("facet barycenter vanished"),
                    diameter: fine.face_diameter(f),
                    facet: f.clone(),
                    supports,
                }
            })
            .collect();
        targets.sort_by(|a, b| a.diameter.total_cmp(&b.diameter));
        if targets.is_empty() && orbit.is_empty() {
            return Err(Error::Internal(
                "labelled sphere has neither a full-orbit face nor a target facet".into(),
            ));
        }

        let scored: Vec<(f64, bool, &Target)> = targets
            .iter()
            .take(TARGETS_ASSESSED)
            .map(|t| {
                let a = assess(t);
                (a.residual, a.immediate, t)
            })
            .collect();
        let level_best = scored.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
        best = best.min(level_best);
        history.push(best);

        let ok: Vec<&(f64, bool, &Target)> = scored
            .iter()
            .filter(|s| s.0 <= cfg.witness_tol)
            .collect();
        let accepted = ok
            .iter()
            .filter(|s| s.1 || !colorful || prev_ok.contains(&s.2.assignment()))
            .min_by(|a, b| a.0.total_cmp(&b.0));
        if let Some((residual, _, target)) = accepted {
            return Ok(Search::Accepted {
                target: (*target).clone(),
                residual: *residual,
                depth,
                history,
            });
        }
        prev_ok = ok.iter().map(|s| s.2.assignment()).collect();
        if depth == cfg.max_depth {
            break;
        }

        // refining a target alone lets the target drift into a coarse
        // neighbour, so its whole vertex star is refined
        let near: BTreeSet<VertexId> = targets
            .iter()
            .take(TARGETS_REFINED)
            .flat_map(|t| t.facet.iter().copied())
            .collect();
        let mut chosen: Vec<&Face> = fine
            .complex()
            .facets()
            .iter()
            .filter(|f| f.iter().any(|v| near.contains(v)))
            .collect();
        for (_, face, _) in orbit.iter().take(ORBIT_FACES_REFINED) {
            if let Some(f) = fine
                .complex()
                .facets()
                .iter()
                .find(|f| crate::complexes::is_subset(face, f))
            {
                chosen.push(f);
            }
        }
        let coarse_facets: BTreeSet<Face> = chosen
            .into_iter()
            .map(|f| {
                if colorful {
                    let carriers = fine.carriers().unwrap();
                    f.iter()
                        .map(|v| &carriers[v])
                        .max_by_key(|c| c.len())
                        .unwrap()
                        .clone()
                } else {
                    f.clone()
                }
            })
            .collect();
        let sel: Vec<Face> = coarse_facets.into_iter().collect();
        coarse = coarse.refine_facets(&sel);
    }
    Ok(Search::Inconclusive {
        best_residual: best,
        depth: cfg.max_depth,
    })
}

/// Default sphere for a cover problem: the crosspolytope for `Z/2`, the
/// join sphere otherwise.
pub fn default_sphere(p: u32, blocks: usize) -> Result<SymmetricComplex> {
    if p == 2 {
        crosspolytope(blocks)
    } else {
        zp_join_sphere(p, blocks)
    }
}

fn cover_search(
    families: &CoverFamilySet,
    excluded: &[u32],
    cfg: &RefinementConfig,
) -> Result<(CoverOutcome, SymmetricComplex)> {
    let p = families.p();
    let blocks = families.set_count();
    if excluded.len() != blocks || excluded.iter().any(|e| *e >= p) {
        return Err(Error::param(format!(
            "expected {blocks} signs/shifts for {blocks} sets"
        )));
    }
    let sc = match &cfg.initial {
        Some(sc) => sc.clone(),
        None => default_sphere(p, blocks)?,
    };
    if sc.order() != p {
        return Err(Error::param("initial complex carries a different group"));
    }
    if sc.dimension() + 1 != blocks * (p as usize - 1) {
        return Err(Error::param(format!(
            "{blocks} sets need a sphere of dimension {}",
            blocks * (p as usize - 1) - 1
        )));
    }
    let colorful = families.family_count() > 1;
    let kind = match (p == 2, colorful) {
        (true, false) => ViolationKind::Disjointness,
        (true, true) => ViolationKind::CrossDisjointness,
        (false, false) => ViolationKind::OrbitIntersection,
        (false, true) => ViolationKind::CrossOrbit,
    };
    let search = refine_search(
        families,
        excluded,
        sc.clone(),
        cfg,
        |hit| {
            (hit.diameter <= cfg.slack).then(|| {
                let mut supports = hit.supports.clone();
                supports.sort_by_key(|s| s.shift);
                ViolationReport {
                    kind,
                    set: hit.set,
                    point: hit.sc.barycenter(hit.face).unwrap_or_else(|| supports[0].point.clone()),
                    supports,
                    diameter: hit.diameter,
                }
            })
        },
        |t| Assessment {
            residual: t.max_support_distance(),
            immediate: false,
        },
    )?;
    let outcome = match search {
        Search::Accepted {
            target,
            residual,
            depth,
            history,
        } => CoverOutcome::Witness(CoverWitness {
            residuals: target
                .supports
                .iter()
                .map(|s| linalg::dist(&s.point, &target.point))
                .collect(),
            point: target.point,
            supports: target.supports,
            residual,
            depth,
            history,
        }),
        Search::Stopped(v) => CoverOutcome::Violation(v),
        Search::Inconclusive {
            best_residual,
            depth,
        } => CoverOutcome::Inconclusive {
            best_residual,
            depth,
        },
    };
    Ok((outcome, sc))
}

fn signs_to_excluded(signs: &[i8]) -> Result<Vec<u32>> {
    if signs.iter().any(|s| *s != 1 && *s != -1) {
        return Err(Error::param("signs must be +1 or -1"));
    }
    Ok(signs.iter().map(|s| sign_to_excluded(*s)).collect())
}

/// Antipodal cover of `S^d` by `A_1..A_{d+1}` and their antipodes: a point
/// near `⋂ s_i·A_i`, or a point of some `A_i ∩ (-A_i)`.
pub fn solve_fan_cover(
    families: &CoverFamilySet,
    signs: &[i8],
    cfg: &RefinementConfig,
) -> Result<CoverOutcome> {
    if families.p() != 2 || families.family_count() != 1 {
        return Err(Error::param("solve_fan_cover takes one antipodal family"));
    }
    Ok(cover_search(families, &signs_to_excluded(signs)?, cfg)?.0)
}

/// Colorful version with `d+1` families: a point near
/// `⋂ s_i·A_i^{(π(i))}` for a permutation `π`, or a point of some
/// `A_i^{(j)} ∩ (-A_i^{(l)})`.
pub fn solve_colorful_fan_cover(
    families: &CoverFamilySet,
    signs: &[i8],
    cfg: &RefinementConfig,
) -> Result<CoverOutcome> {
    if families.p() != 2 {
        return Err(Error::param("solve_colorful_fan_cover takes antipodal families"));
    }
    if families.family_count() != families.set_count() {
        return Err(Error::param("need as many families as sets"));
    }
    Ok(cover_search(families, &signs_to_excluded(signs)?, cfg)?.0)
}

/// Cyclic cover of `S^{(p-1)d-1}` by translates of `A_1..A_d`: a point near
/// `⋂_i ⋂_{s ≠ s_i} g^s·A_i`, or a point of some `⋂_k g^k·A_i`.
pub fn solve_zp_cover(
    families: &CoverFamilySet,
    shifts: &[u32],
    cfg: &RefinementConfig,
) -> Result<CoverOutcome> {
    if families.family_count() != 1 {
        return Err(Error::param("solve_zp_cover takes one family"));
    }
    Ok(cover_search(families, shifts, cfg)?.0)
}

/// Colorful cyclic version with `n+1` families.
pub fn solve_colorful_zp_cover(
    families: &CoverFamilySet,
    shifts: &[u32],
    cfg: &RefinementConfig,
) -> Result<CoverOutcome> {
    let n1 = families.set_count() * (families.p() as usize - 1);
    if families.family_count() != n1 {
        return Err(Error::param(format!("need {n1} families")));
    }
    Ok(cover_search(families, shifts, cfg)?.0)
}

/// Runs any of the cover solvers and also returns the sphere used, so the
/// caller can re-check supports.
pub fn solve_cover_with_sphere(
    families: &CoverFamilySet,
    excluded: &[u32],
    cfg: &RefinementConfig,
) -> Result<(CoverOutcome, SymmetricComplex)> {
    cover_search(families, excluded, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(from: f64, to: f64) -> SetSpec {
        SetSpec::Arc {
            from,
            to,
            margin: 0.0,
        }
    }

    fn circle_families(specs: Vec<Vec<SetSpec>>) -> CoverFamilySet {
        CoverFamilySet::from_specs(2, specs).unwrap()
    }

    #[test]
    fn arc_membership() {
        let a = arc(-45.0, 45.0);
        assert!(a.contains(&[1.0, 0.0]));
        assert!(!a.contains(&[0.0, 1.0]));
        let wrap = arc(300.0, 30.0);
        assert!(wrap.contains(&[1.0, 0.0]));
        assert!(!wrap.contains(&[-1.0, 0.0]));
    }

    #[test]
    fn two_arcs_meet_at_45_degrees() {
        let fam = circle_families(vec![vec![arc(-45.0, 45.0), arc(45.0, 135.0)]]);
        let cfg = RefinementConfig::with_tol(1e-4);
        let w = solve_fan_cover(&fam, &[1, 1], &cfg).unwrap();
        let w = w.witness().expect("witness");
        let h = 0.5f64.sqrt();
        assert!(linalg::dist(&w.point, &[h, h]) < 1e-4);
        assert!(w.history.windows(2).all(|p| p[1] <= p[0]));
        let sc = crosspolytope(2).unwrap();
        assert!(w.verify(&fam, &sc, &[1, 1], 1e-4));

        let w = solve_fan_cover(&fam, &[1, -1], &cfg).unwrap();
        let w = w.witness().expect("witness");
        assert!(linalg::dist(&w.point, &[h, -h]) < 1e-4);
    }

    #[test]
    fn long_arc_is_a_disjointness_violation() {
        let fam = circle_families(vec![vec![arc(-100.0, 100.0), arc(90.0, 270.0)]]);
        let out = solve_fan_cover(&fam, &[1, 1], &RefinementConfig::default()).unwrap();
        let v = out.violation().expect("violation");
        assert_eq!(v.kind, ViolationKind::Disjointness);
        assert!(v.verify(&fam, &crosspolytope(2).unwrap(), 1e-3));
    }

    #[test]
    fn colorful_rotated_family() {
        let f1 = vec![arc(-45.0, 45.0), arc(45.0, 135.0)];
        let f2: Vec<SetSpec> = f1.iter().map(|s| s.rotated(10.0)).collect();
        let fam = circle_families(vec![f1, f2]);
        let out = solve_colorful_fan_cover(&fam, &[1, 1], &RefinementConfig::default()).unwrap();
        let w = out.witness().expect("witness");
        assert!(w.verify(&fam, &crosspolytope(2).unwrap(), &[1, 1], 1e-3));
        let fams: BTreeSet<usize> = w.supports.iter().map(|s| s.family).collect();
        assert_eq!(fams, BTreeSet::from([1, 2]));
    }

    #[test]
    fn colorful_opposite_family_is_a_cross_violation() {
        let f1 = vec![arc(-45.0, 45.0), arc(45.0, 135.0)];
        let f2: Vec<SetSpec> = f1.iter().map(|s| s.rotated(180.0)).collect();
        let fam = circle_families(vec![f1, f2]);
        let out = solve_colorful_fan_cover(&fam, &[1, 1], &RefinementConfig::default()).unwrap();
        let v = out.violation().expect("violation");
        assert_eq!(v.kind, ViolationKind::CrossDisjointness);
        assert!(v.verify(&fam, &crosspolytope(2).unwrap(), 1e-3));
    }

    #[test]
    fn zp_arc_meets_rotate_near_180() {
        // 140 degree arcs: the two rotates overlap on [170, 190]
        let fam = CoverFamilySet::from_specs(3, vec![vec![arc(-70.0, 70.0)]]).unwrap();
        let out = solve_zp_cover(&fam, &[0], &RefinementConfig::default()).unwrap();
        let w = out.witness().expect("witness");
        let theta = w.point[1].atan2(w.point[0]).to_degrees().rem_euclid(360.0);
        assert!((theta - 180.0).abs() <= 10.0 + 0.1, "theta = {theta}");
        assert!(w.verify(&fam, &zp_join_sphere(3, 1).unwrap(), &[0], 1e-3));
    }

    #[test]
    fn zp_large_arc_on_circle_still_has_a_witness() {
        // facets of S^1 have two vertices, so no face can carry a full Z/3 orbit
        let fam = CoverFamilySet::from_specs(3, vec![vec![arc(-130.0, 130.0)]]).unwrap();
        let out = solve_zp_cover(&fam, &[0], &RefinementConfig::default()).unwrap();
        let w = out.witness().expect("witness");
        assert!(w.verify(&fam, &zp_join_sphere(3, 1).unwrap(), &[0], 1e-3));
    }

    #[test]
    fn zp_whole_sphere_is_an_orbit_violation() {
        let all = || SetSpec::Cap {
            center: vec![1.0, 0.0, 0.0, 0.0],
            radius: 180.0,
            margin: 0.0,
        };
        let fam = CoverFamilySet::from_specs(3, vec![vec![all(), all()]]).unwrap();
        let out = solve_zp_cover(&fam, &[0, 0], &RefinementConfig::with_tol(1e-2)).unwrap();
        let v = out.violation().expect("violation");
        assert_eq!(v.kind, ViolationKind::OrbitIntersection);
        assert!(v.verify(&fam, &zp_join_sphere(3, 2).unwrap(), 1e-2));
    }

    #[test]
    fn cover_gap_is_reported() {
        let fam = circle_families(vec![vec![arc(0.0, 10.0), arc(90.0, 100.0)]]);
        let err = solve_fan_cover(&fam, &[1, 1], &RefinementConfig::default()).unwrap_err();
        assert!(matches!(err, Error::CoverViolation { .. }));
    }
}
