//! Colorful Borsuk–Ulam on odd matrix fields.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::complexes::zp_join_sphere;
use crate::cover_solvers::{
    refine_search, Assessment, CoverFamilySet, Membership, RefinementConfig, Search,
};
use crate::linalg;
use crate::{Error, Result};

pub type MatrixFn = Arc<dyn Fn(&[f64]) -> Vec<Vec<f64>> + Send + Sync>;
pub type VectorFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// A square matrix field on `S^d`, evaluated through its odd part
/// `(F(x) - F(-x)) / 2`, which is odd bit for bit.
#[derive(Clone)]
pub struct OddMatrixField {
    size: usize,
    raw: MatrixFn,
}

impl std::fmt::Debug for OddMatrixField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OddMatrixField")
            .field("size", &self.size)
            .finish_non_exhaustive()
    }
}

impl OddMatrixField {
    /// `size = d + 1`: points live in `R^{d+1}` and matrices are `(d+1)×(d+1)`.
    pub fn new(size: usize, raw: MatrixFn) -> Self {
        Self { size, raw }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn eval(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let a = (self.raw)(x);
        let b = (self.raw)(&linalg::neg(x));
        a.iter()
            .zip(&b)
            .map(|(ra, rb)| ra.iter().zip(rb).map(|(u, v)| (u - v) / 2.0).collect())
            .collect()
    }
}

/// Two rows whose shared maximal column carries entries of opposite sign
/// (or a zero row). Indices count from 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RowClash {
    pub rows: (usize, usize),
    pub column: usize,
    pub entries: (f64, f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CubeFacetReport {
    pub verdict: bool,
    pub failure: Option<RowClash>,
}

fn max_columns(row: &[f64], tol: f64) -> (f64, Vec<usize>) {
    let m = linalg::max_abs(row);
    let cols = (0..row.len()).filter(|&j| row[j].abs() >= m - tol).collect();
    (m, cols)
}

/// True iff every two distinct rows sharing a maximal-absolute-value column
/// `j` (ties within `tol`) have `a_j·b_j > tol²`. A zero row (within `tol`)
/// fails against any other row.
pub fn rows_in_intersecting_cube_facets(m: &[Vec<f64>], tol: f64) -> CubeFacetReport {
    let info: Vec<(f64, Vec<usize>)> = m.iter().map(|r| max_columns(r, tol)).collect();
    for a in 0..m.len() {
        for b in a + 1..m.len() {
            let zero = info[a].0 <= tol || info[b].0 <= tol;
            let shared: Vec<usize> = info[a]
                .1
                .iter()
                .copied()
                .filter(|j| info[b].1.contains(j))
                .collect();
            let clash = shared
                .iter()
                .copied()
                .find(|&j| m[a][j] * m[b][j] <= tol * tol)
                .or_else(|| {
                    zero.then(|| {
                        shared.first().copied().unwrap_or_else(|| {
                            if info[a].0 <= tol {
                                info[b].1[0]
                            } else {
                                info[a].1[0]
                            }
                        })
                    })
                });
            if let Some(j) = clash {
                return CubeFacetReport {
                    verdict: false,
                    failure: Some(RowClash {
                        rows: (a + 1, b + 1),
                        column: j + 1,
                        entries: (m[a][j], m[b][j]),
                    }),
                };
            }
        }
    }
    CubeFacetReport {
        verdict: true,
        failure: None,
    }
}

/// Largest violation of `f_{π(i)i} >= 0` and `|f_{π(i)i}| >= |f_{π(i)j}|`,
/// with `pi[i]` the 1-based row for column `i`.
pub fn transversal_residual(m: &[Vec<f64>], pi: &[usize]) -> f64 {
    let mut r: f64 = 0.0;
    for (i, &row) in pi.iter().enumerate() {
        let row = &m[row - 1];
        r = r.max(-row[i]).max(linalg::max_abs(row) - row[i].abs());
    }
    r
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BuOutcome {
    BadRows(RowClash),
    /// `pi[i]` is the row (from 1) whose maximum sits in column `i + 1`.
    Transversal { pi: Vec<usize>, maxima: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BuWitness {
    pub x: Vec<f64>,
    pub outcome: BuOutcome,
    pub tol: f64,
    pub residual: f64,
    pub depth: usize,
}

impl BuWitness {
    /// Re-evaluates the field at `x` and checks the claimed branch.
    pub fn verify(&self, f: &OddMatrixField) -> bool {
        verify_outcome(&f.eval(&self.x), &self.outcome, self.tol)
    }
}

pub fn verify_outcome(m: &[Vec<f64>], outcome: &BuOutcome, tol: f64) -> bool {
    match outcome {
        BuOutcome::Transversal { pi, .. } => {
            let mut seen = pi.clone();
            seen.sort();
            seen == (1..=m.len()).collect::<Vec<_>>() && transversal_residual(m, pi) <= tol
        }
        BuOutcome::BadRows(clash) => {
            let (a, b) = (clash.rows.0 - 1, clash.rows.1 - 1);
            let j = clash.column - 1;
            if a == b || a >= m.len() || b >= m.len() {
                return false;
            }
            let (ma, mb) = (linalg::max_abs(&m[a]), linalg::max_abs(&m[b]));
            let zero = ma <= tol || mb <= tol;
            let both_max = m[a][j].abs() >= ma - tol && m[b][j].abs() >= mb - tol;
            zero || (both_max && m[a][j] * m[b][j] <= tol * tol)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum BuResult {
    Witness(BuWitness),
    Inconclusive { best_residual: f64, depth: usize },
}

impl BuResult {
    pub fn witness(&self) -> Option<&BuWitness> {
        match self {
            BuResult::Witness(w) => Some(w),
            BuResult::Inconclusive { .. } => None,
        }
    }
}

/// `A_i^{(j)}`: row `j` attains its maximal absolute value first in column
/// `i`, with a nonnegative entry.
fn row_cover(f: &OddMatrixField, families: usize) -> Result<CoverFamilySet> {
    let m = f.size();
    let sets: Vec<Vec<Membership>> = (0..families)
        .map(|j| {
            (0..m)
                .map(|i| {
                    let f = f.clone();
                    Arc::new(move |x: &[f64]| {
                        let row = &f.eval(x)[j];
                        let top = linalg::max_abs(row);
                        let first = row.iter().position(|v| v.abs() == top).unwrap_or(0);
                        first == i && row[i] >= 0.0
                    }) as Membership
                })
                .collect()
        })
        .collect();
    CoverFamilySet::colorful(2, sets)
}

fn bu_search(f: &OddMatrixField, colorful: bool, cfg: &RefinementConfig) -> Result<BuResult> {
    bu_search_filtered(f, colorful, cfg, &|_| true)
}

/// `admissible` rejects target points; rejected targets keep refining.
pub(crate) fn bu_search_filtered(
    f: &OddMatrixField,
    colorful: bool,
    cfg: &RefinementConfig,
    admissible: &dyn Fn(&[f64]) -> bool,
) -> Result<BuResult> {
    let m = f.size();
    if m < 1 {
        return Err(Error::param("empty matrix field"));
    }
    let tol = cfg.witness_tol;
    let families = row_cover(f, if colorful { m } else { 1 })?;
    let initial = match &cfg.initial {
        Some(sc) => sc.clone(),
        None => crate::complexes::crosspolytope(m)?,
    };
    let bad_rows_at = |x: &[f64]| -> Option<RowClash> {
        rows_in_intersecting_cube_facets(&f.eval(x), tol).failure
    };
    let pi_of = |t: &crate::cover_solvers::Target| -> Vec<usize> {
        let mut pi = vec![1; m];
        for s in &t.supports {
            pi[s.set - 1] = if colorful { s.family } else { s.set };
        }
        pi
    };
    let search = refine_search(
        &families,
        &vec![1; m],
        initial,
        cfg,
        |hit| {
            let mut probes: Vec<Vec<f64>> = hit.supports.iter().map(|s| s.point.clone()).collect();
            if let Some(b) = hit.sc.barycenter(hit.face) {
                probes.push(b);
            }
            probes.into_iter().find_map(|x| {
                bad_rows_at(&x).map(|clash| BuWitness {
                    x,
                    outcome: BuOutcome::BadRows(clash),
                    tol,
                    residual: 0.0,
                    depth: 0,
                })
            })
        },
        |t| {
            if !admissible(&t.point) {
                return Assessment {
                    residual: f64::INFINITY,
                    immediate: false,
                };
            }
            let mat = f.eval(&t.point);
            let r = transversal_residual(&mat, &pi_of(t));
            let bad = rows_in_intersecting_cube_facets(&mat, tol).failure.is_some();
            Assessment {
                residual: if bad { r.min(0.0) } else { r },
                immediate: true,
            }
        },
    )?;
    Ok(match search {
        Search::Accepted {
            target,
            residual,
            depth,
            ..
        } => {
            let mat = f.eval(&target.point);
            let pi = pi_of(&target);
            let outcome = if transversal_residual(&mat, &pi) <= tol && colorful {
                BuOutcome::Transversal {
                    maxima: pi.iter().enumerate().map(|(i, &r)| mat[r - 1][i]).collect(),
                    pi,
                }
            } else {
                match rows_in_intersecting_cube_facets(&mat, tol).failure {
                    Some(clash) => BuOutcome::BadRows(clash),
                    None => BuOutcome::Transversal {
                        maxima: pi.iter().enumerate().map(|(i, &r)| mat[r - 1][i]).collect(),
                        pi,
                    },
                }
            };
            BuResult::Witness(BuWitness {
                x: target.point,
                outcome,
                tol,
                residual,
                depth,
            })
        }
        Search::Stopped(w) => BuResult::Witness(w),
        Search::Inconclusive {
            best_residual,
            depth,
        } => BuResult::Inconclusive {
            best_residual,
            depth,
        },
    })
}

/// Finds `x ∈ S^d` where either two rows of `F(x)` lie in opposite facets of
/// the cube, or a permutation `π` places a nonnegative row maximum of row
/// `π(i)` in every column `i`.
pub fn solve_colorful_bu(f: &OddMatrixField, cfg: &RefinementConfig) -> Result<BuResult> {
    bu_search(f, f.size() > 1, cfg)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum ZeroResult {
    Found {
        x: Vec<f64>,
        value: Vec<f64>,
        norm: f64,
    },
    Inconclusive {
        best_residual: f64,
        depth: usize,
    },
}

/// Odd part of a vector field.
pub fn odd_part(f: VectorFn) -> VectorFn {
    Arc::new(move |x: &[f64]| {
        let a = f(x);
        let b = f(&linalg::neg(x));
        a.iter().zip(&b).map(|(u, v)| (u - v) / 2.0).collect()
    })
}

/// Near-zero of an odd map `S^d → R^d`: every row of the matrix field is
/// `f` with a zero appended, so any colorful witness forces
/// `‖f(x)‖ <= (d+1)·tol`.
pub fn classical_bu_zero(f: VectorFn, d: usize, cfg: &RefinementConfig) -> Result<ZeroResult> {
    let g = odd_part(f);
    let size = d + 1;
    let g2 = g.clone();
    let field = OddMatrixField::new(
        size,
        Arc::new(move |x: &[f64]| {
            let mut row = g2(x);
            row.resize(size, 0.0);
            vec![row; size]
        }),
    );
    Ok(match bu_search(&field, false, cfg)? {
        BuResult::Witness(w) => {
            let value = g(&w.x);
            let norm = linalg::norm(&value);
            if norm > size as f64 * cfg.witness_tol {
                return Err(Error::Internal(format!(
                    "zero certificate has ‖f(x)‖ = {norm}"
                )));
            }
            ZeroResult::Found {
                x: w.x,
                value,
                norm,
            }
        }
        BuResult::Inconclusive {
            best_residual,
            depth,
        } => ZeroResult::Inconclusive {
            best_residual,
            depth,
        },
    })
}

/// An orbit on which `f` takes one value `y` at all points but one, and
/// `y - (α, …, α)` at the remaining point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitCollapse {
    /// `x, g·x, …, g^{p-1}·x`.
    pub orbit: Vec<Vec<f64>>,
    /// Index into `orbit` of the point mapped to `y - α·1`.
    pub remaining: usize,
    pub y: Vec<f64>,
    pub alpha: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum CollapseResult {
    Found(OrbitCollapse),
    Inconclusive { best_residual: f64, depth: usize },
}

/// Best split of orbit values into `p-1` equal points plus one shifted by
/// `α` along the diagonal.
pub fn collapse_fit(values: &[Vec<f64>]) -> (usize, Vec<f64>, f64, f64) {
    let p = values.len();
    let d = values[0].len();
    let mut best = (0, vec![0.0; d], 0.0, f64::INFINITY);
    for r in 0..p {
        let rest: Vec<&Vec<f64>> = (0..p).filter(|&k| k != r).map(|k| &values[k]).collect();
        let y: Vec<f64> = (0..d)
            .map(|i| rest.iter().map(|v| v[i]).sum::<f64>() / rest.len() as f64)
            .collect();
        let alpha = (0..d).map(|i| y[i] - values[r][i]).sum::<f64>() / d as f64;
        let mut res: f64 = 0.0;
        for v in &rest {
            for i in 0..d {
                res = res.max((v[i] - y[i]).abs());
            }
        }
        for i in 0..d {
            res = res.max((values[r][i] - (y[i] - alpha)).abs());
        }
        if res < best.3 {
            best = (r, y, alpha, res);
        }
    }
    best
}

/// Orbit collapse on `S^n`, `n = (p-1)d - 1`, with the join-sphere action.
/// `x ∈ A_i` when `f_i` spreads the most over the orbit of `x` and takes its
/// orbit maximum at `x`; a witness of the cyclic cover theorem for these
/// sets collapses `p-1` orbit points.
pub fn orbit_collapse(
    f: VectorFn,
    p: u32,
    d: usize,
    cfg: &RefinementConfig,
) -> Result<CollapseResult> {
    let sc = zp_join_sphere(p, d)?;
    let tol = cfg.witness_tol;
    let gen = sc.clone();
    let orbit_of = move |x: &[f64]| -> Vec<Vec<f64>> {
        (0..p).map(|s| gen.act_point(x, s)).collect()
    };
    let sets: Vec<Membership> = (0..d)
        .map(|i| {
            let f = f.clone();
            let orbit_of = orbit_of.clone();
            Arc::new(move |x: &[f64]| {
                let vals: Vec<Vec<f64>> = orbit_of(x).iter().map(|y| f(y)).collect();
                let spread = |k: usize| {
                    let (lo, hi) = vals.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |a, v| {
                        (a.0.min(v[k]), a.1.max(v[k]))
                    });
                    hi - lo
                };
                let si = spread(i);
                (0..d).all(|k| si >= spread(k)) && vals.iter().all(|v| vals[0][i] >= v[i])
            }) as Membership
        })
        .collect();
    let families = CoverFamilySet::single(p, sets)?;
    let fit = |x: &[f64]| {
        let orbit = orbit_of(x);
        let vals: Vec<Vec<f64>> = orbit.iter().map(|y| f(y)).collect();
        (orbit, collapse_fit(&vals))
    };
    let cfg_run = RefinementConfig {
        initial: Some(cfg.initial.clone().unwrap_or(sc)),
        ..cfg.clone()
    };
    let search = refine_search(
        &families,
        &vec![p - 1; d],
        cfg_run.initial.clone().unwrap(),
        &cfg_run,
        |hit| {
            // a face carrying a full orbit: f is nearly constant on the orbit
            let x = hit.sc.barycenter(hit.face)?;
            let (orbit, (remaining, y, alpha, residual)) = fit(&x);
            (residual <= tol).then_some(OrbitCollapse {
                orbit,
                remaining,
                y,
                alpha,
                residual,
            })
        },
        |t| Assessment {
            residual: fit(&t.point).1 .3,
            immediate: true,
        },
    )?;
    Ok(match search {
        Search::Accepted { target, .. } => {
            let (orbit, (remaining, y, alpha, residual)) = fit(&target.point);
            CollapseResult::Found(OrbitCollapse {
                orbit,
                remaining,
                y,
                alpha,
                residual,
            })
        }
        Search::Stopped(c) => CollapseResult::Found(c),
        Search::Inconclusive {
            best_residual,
            depth,
        } => CollapseResult::Inconclusive {
            best_residual,
            depth,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_facet_examples() {
        let r = rows_in_intersecting_cube_facets(&[vec![1.0, 0.0], vec![1.0, 0.0]], 1e-9);
        assert!(r.verdict);
        let r = rows_in_intersecting_cube_facets(&[vec![1.0, 0.0], vec![-1.0, 0.0]], 1e-9);
        assert!(!r.verdict);
        let c = r.failure.unwrap();
        assert_eq!((c.rows, c.column), ((1, 2), 1));
        let r = rows_in_intersecting_cube_facets(&[vec![0.0, 0.0], vec![1.0, 0.0]], 1e-9);
        assert!(!r.verdict);
    }

    #[test]
    fn zero_field_gives_bad_rows() {
        let f = OddMatrixField::new(2, Arc::new(|_: &[f64]| vec![vec![0.0; 2]; 2]));
        let w = solve_colorful_bu(&f, &RefinementConfig::default()).unwrap();
        let w = w.witness().unwrap();
        assert!(matches!(w.outcome, BuOutcome::BadRows(_)));
        assert!(w.verify(&f));
    }

    #[test]
    fn equal_rows_on_circle() {
        let f = OddMatrixField::new(
            2,
            Arc::new(|x: &[f64]| vec![vec![x[0], x[1]], vec![x[0], x[1]]]),
        );
        let w = solve_colorful_bu(&f, &RefinementConfig::default()).unwrap();
        let w = w.witness().unwrap().clone();
        assert!(w.verify(&f));
        match &w.outcome {
            BuOutcome::Transversal { pi, .. } => {
                let h = 0.5f64.sqrt();
                assert!(linalg::dist(&w.x, &[h, h]) < 2e-3, "{:?}", w.x);
                let mut s = pi.clone();
                s.sort();
                assert_eq!(s, vec![1, 2]);
            }
            o => panic!("unexpected {o:?}"),
        }
    }

    #[test]
    fn oddness_is_exact() {
        let f = OddMatrixField::new(
            2,
            Arc::new(|x: &[f64]| vec![vec![x[0].exp(), x[1] * x[1]], vec![x[0].sin(), 3.0]]),
        );
        let x = [0.6, 0.8];
        let a = f.eval(&x);
        let b = f.eval(&linalg::neg(&x));
        for (ra, rb) in a.iter().zip(&b) {
            for (u, v) in ra.iter().zip(rb) {
                assert_eq!(u + v, 0.0);
            }
        }
    }

    #[test]
    fn classical_zero_examples() {
        let cfg = RefinementConfig::with_tol(1e-4);
        match classical_bu_zero(Arc::new(|u: &[f64]| vec![u[1]]), 1, &cfg).unwrap() {
            ZeroResult::Found { x, norm, .. } => {
                assert!(norm <= 2e-4);
                assert!((x[0].abs() - 1.0).abs() < 1e-6);
            }
            r => panic!("{r:?}"),
        }
        match classical_bu_zero(Arc::new(|u: &[f64]| vec![u[0], u[1]]), 2, &cfg).unwrap() {
            ZeroResult::Found { x, .. } => assert!((x[2].abs() - 1.0).abs() < 1e-6),
            r => panic!("{r:?}"),
        }
        match classical_bu_zero(Arc::new(|u: &[f64]| vec![u[1] - u[2], u[0]]), 2, &cfg).unwrap() {
            ZeroResult::Found { x, .. } => {
                let h = 0.5f64.sqrt();
                assert!(x[0].abs() < 1e-3);
                assert!((x[1].abs() - h).abs() < 1e-3 && (x[1] - x[2]).abs() < 1e-3);
            }
            r => panic!("{r:?}"),
        }
    }

    #[test]
    fn cosine_orbit_collapse() {
        let f: VectorFn = Arc::new(|x: &[f64]| vec![x[0]]);
        match orbit_collapse(f, 3, 1, &RefinementConfig::default()).unwrap() {
            CollapseResult::Found(c) => {
                assert!(c.residual <= 1e-3);
                assert!((c.y[0] - 0.5).abs() < 2e-3, "{c:?}");
                assert!((c.alpha - 1.5).abs() < 2e-3);
            }
            r => panic!("{r:?}"),
        }
    }

    #[test]
    fn antipodal_diagonal() {
        // p = 2, odd f on S^1: the pair lands on the diagonal
        let f: VectorFn = Arc::new(|x: &[f64]| vec![x[0], x[1]]);
        match orbit_collapse(f, 2, 2, &RefinementConfig::default()).unwrap() {
            CollapseResult::Found(c) => {
                let x = &c.orbit[0];
                assert!((x[0] - x[1]).abs() < 2e-3, "{x:?}");
            }
            r => panic!("{r:?}"),
        }
    }

    #[test]
    fn s0_collapse_is_trivial() {
        let f: VectorFn = Arc::new(|x: &[f64]| vec![x[0] * 3.0 + 1.0]);
        match orbit_collapse(f, 2, 1, &RefinementConfig::default()).unwrap() {
            CollapseResult::Found(c) => {
                assert_eq!(c.orbit.len(), 2);
                assert!(c.residual < 1e-12);
                assert!((c.alpha.abs() - 6.0).abs() < 1e-12);
            }
            r => panic!("{r:?}"),
        }
    }
}
