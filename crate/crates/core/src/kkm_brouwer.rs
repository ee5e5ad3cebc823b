//! Simplex-side consequences, solved on the deleted join of the simplex.
//!
//! A point `u` of `S^d ⊂ R^{d+1}` stands for `λx + (1-λ)y` in the deleted
//! join: `x` and `y` are the normalized positive and negative parts of `u`
//! and `λ = ‖u⁺‖₁ / ‖u‖₁`. Negating `u` swaps the two halves, so
//! `λA(x) - (1-λ)A(y)` is odd for any map `A` on the simplex.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cover_solvers::RefinementConfig;
use crate::matrix_bu::{
    classical_bu_zero, solve_colorful_bu, BuOutcome, BuResult, OddMatrixField, VectorFn,
    ZeroResult,
};
use crate::{Error, Result};

pub type SimplexMap = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
pub type DepthFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type StochasticFn = Arc<dyn Fn(&[f64]) -> Vec<Vec<f64>> + Send + Sync>;

const SUM_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeletedJoinPoint {
    pub lambda: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl DeletedJoinPoint {
    pub fn from_sphere(u: &[f64]) -> Self {
        let pos: Vec<f64> = u.iter().map(|v| v.max(0.0)).collect();
        let neg: Vec<f64> = u.iter().map(|v| (-v).max(0.0)).collect();
        let (a, b) = (pos.iter().sum::<f64>(), neg.iter().sum::<f64>());
        let scale = |v: Vec<f64>, s: f64| -> Vec<f64> {
            if s > 0.0 {
                v.iter().map(|t| t / s).collect()
            } else {
                vec![0.0; v.len()]
            }
        };
        Self {
            lambda: a / (a + b),
            x: scale(pos, a),
            y: scale(neg, b),
        }
    }

    /// `normalize(λ·x - (1-λ)·y)`.
    pub fn to_sphere(&self) -> Vec<f64> {
        let v: Vec<f64> = self
            .x
            .iter()
            .zip(&self.y)
            .map(|(a, b)| self.lambda * a - (1.0 - self.lambda) * b)
            .collect();
        crate::linalg::normalized(&v).unwrap_or(v)
    }

    /// `λA(x) - (1-λ)A(y)`, dropping a half whose weight is zero.
    pub fn combine<T>(&self, a: impl Fn(&[f64]) -> T, sub: impl Fn(T, f64, T, f64) -> T) -> T
    where
        T: Clone,
    {
        match (self.lambda > 0.0, self.lambda < 1.0) {
            (true, true) => sub(a(&self.x), self.lambda, a(&self.y), 1.0 - self.lambda),
            (true, false) => {
                let ax = a(&self.x);
                sub(ax.clone(), 1.0, ax, 0.0)
            }
            _ => {
                let ay = a(&self.y);
                sub(ay.clone(), 0.0, ay, 1.0)
            }
        }
    }
}

fn join_vector(p: &DeletedJoinPoint, alpha: &SimplexMap) -> Vec<f64> {
    p.combine(
        |z| alpha(z),
        |a, la, b, lb| a.iter().zip(&b).map(|(s, t)| la * s - lb * t).collect(),
    )
}

fn join_matrix(p: &DeletedJoinPoint, a: &dyn Fn(&[f64]) -> Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    p.combine(
        a,
        |ma, la, mb, lb| {
            ma.iter()
                .zip(&mb)
                .map(|(r, s)| r.iter().zip(s).map(|(u, v)| la * u - lb * v).collect())
                .collect()
        },
    )
}

pub fn support(x: &[f64]) -> Vec<usize> {
    (0..x.len()).filter(|&i| x[i] > 0.0).map(|i| i + 1).collect()
}

fn check_simplex_point(v: &[f64], what: &str) -> Result<()> {
    let s: f64 = v.iter().sum();
    if v.iter().any(|t| *t < -1e-12 || !t.is_finite()) || (s - 1.0).abs() > SUM_TOL {
        return Err(Error::input(format!("{what} is not a point of the simplex: {v:?}")));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SimplexWitness {
    /// Disjoint faces `J`, `J'` (from 1) with `α(x) = α(y)` up to `gap`.
    RadonPartition {
        j: Vec<usize>,
        j_prime: Vec<usize>,
        x: Vec<f64>,
        y: Vec<f64>,
        lambda: f64,
        gap: f64,
    },
    /// `pi[i]` is the coordinate (from 1) attached to map or cover `i + 1`;
    /// `values[i]` is the corresponding coordinate of that map at `x`; for
    /// covers it is the depth of `x` in the chosen set.
    Intersection {
        x: Vec<f64>,
        pi: Vec<usize>,
        values: Vec<f64>,
    },
    /// `slacks[i] = x_{π(i)} - f_{iπ(i)}(x)`.
    BrouwerColorful {
        x: Vec<f64>,
        pi: Vec<usize>,
        slacks: Vec<f64>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum SimplexResult {
    Witness(SimplexWitness),
    Inconclusive { best_residual: f64, depth: usize },
}

impl SimplexResult {
    pub fn witness(&self) -> Option<&SimplexWitness> {
        match self {
            SimplexResult::Witness(w) => Some(w),
            SimplexResult::Inconclusive { .. } => None,
        }
    }
}

fn inconclusive(best_residual: f64, depth: usize) -> SimplexResult {
    SimplexResult::Inconclusive {
        best_residual,
        depth,
    }
}

/// Either `α` identifies points of two disjoint faces (a Radon partition),
/// or some point has every coordinate of `α` positive. Searches for a zero
/// of the projection of `λα(x) - (1-λ)α(y)` onto the complement of the
/// diagonal; the sign of the diagonal component then picks the branch.
pub fn radon_kkm_alternative(
    alpha: SimplexMap,
    d: usize,
    cfg: &RefinementConfig,
) -> Result<SimplexResult> {
    let a = alpha.clone();
    let g: VectorFn = Arc::new(move |u: &[f64]| {
        let f = join_vector(&DeletedJoinPoint::from_sphere(u), &a);
        (0..d).map(|i| f[i] - f[d]).collect()
    });
    let u = match classical_bu_zero(g, d, cfg)? {
        ZeroResult::Found { x, .. } => x,
        ZeroResult::Inconclusive {
            best_residual,
            depth,
        } => return Ok(inconclusive(best_residual, depth)),
    };
    let p = DeletedJoinPoint::from_sphere(&u);
    let f = join_vector(&p, &alpha);
    let c = f.iter().sum::<f64>() / f.len() as f64;
    let tol = cfg.witness_tol;
    let positive = |z: &[f64]| {
        let v = alpha(z);
        (v.iter().all(|t| *t > 0.0)).then_some(v)
    };
    if c > tol && p.lambda > 0.0 {
        if let Some(values) = positive(&p.x) {
            return Ok(SimplexResult::Witness(SimplexWitness::Intersection {
                x: p.x,
                pi: (1..=d + 1).collect(),
                values,
            }));
        }
    }
    if c < -tol && p.lambda < 1.0 {
        if let Some(values) = positive(&p.y) {
            return Ok(SimplexResult::Witness(SimplexWitness::Intersection {
                x: p.y,
                pi: (1..=d + 1).collect(),
                values,
            }));
        }
    }
    let (ax, ay) = (alpha(&p.x), alpha(&p.y));
    let gap = ax.iter().zip(&ay).map(|(s, t)| (s - t).abs()).fold(0.0, f64::max);
    Ok(SimplexResult::Witness(SimplexWitness::RadonPartition {
        j: support(&p.x),
        j_prime: support(&p.y),
        x: p.x,
        y: p.y,
        lambda: p.lambda,
        gap,
    }))
}

/// Nonempty proper faces of the simplex on `d+1` vertices, as 0-based
/// index sets, plus deterministic sample points on each.
fn face_samples(d: usize) -> Vec<(Vec<usize>, Vec<Vec<f64>>)> {
    let n = d + 1;
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let j: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let mut pts = Vec::new();
        let mut bary = vec![0.0; n];
        j.iter().for_each(|&i| bary[i] = 1.0 / j.len() as f64);
        pts.push(bary);
        for a in 0..j.len() {
            for b in a + 1..j.len() {
                let mut mid = vec![0.0; n];
                mid[j[a]] = 0.5;
                mid[j[b]] = 0.5;
                pts.push(mid);
                let mut skew = vec![0.0; n];
                skew[j[a]] = 0.8;
                skew[j[b]] = 0.2;
                pts.push(skew);
            }
        }
        out.push((j, pts));
    }
    out
}

/// Spot-checks `α^{(i)}(Δ^J) ⊆ Δ^J` on face barycenters and edge points.
pub fn check_face_preservation(maps: &[SimplexMap], d: usize) -> Result<()> {
    for (j, pts) in face_samples(d) {
        for x in pts {
            for (i, a) in maps.iter().enumerate() {
                let v = a(&x);
                check_simplex_point(&v, &format!("map {} at {x:?}", i + 1))?;
                if (0..=d).any(|k| !j.contains(&k) && v[k] > 1e-12) {
                    return Err(Error::input(format!(
                        "map {} sends {x:?} in face {:?} to {v:?} outside the face",
                        i + 1,
                        j.iter().map(|k| k + 1).collect::<Vec<_>>()
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Diagnostics of the last colorful KKM run.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct KkmDiagnostics {
    pub evaluations: usize,
    /// Evaluations where some column of the join field had entries of both
    /// signs beyond the tolerance.
    pub column_sign_violations: usize,
}

/// Face-preserving maps `α^{(1)}..α^{(d+1)}` of `Δ_d`: a point `x` and a
/// permutation `π` with `α^{(i)}_{π(i)}(x) >= α^{(i)}_j(x) - tol` for all `j`.
pub fn solve_colorful_kkm(
    maps: &[SimplexMap],
    d: usize,
    cfg: &RefinementConfig,
) -> Result<(SimplexResult, KkmDiagnostics)> {
    if maps.len() != d + 1 {
        return Err(Error::param(format!("need {} maps, got {}", d + 1, maps.len())));
    }
    check_face_preservation(maps, d)?;
    let evaluations = Arc::new(AtomicUsize::new(0));
    let violations = Arc::new(AtomicUsize::new(0));
    let tol = cfg.witness_tol;
    let field = {
        let maps = maps.to_vec();
        let (ev, vi) = (evaluations.clone(), violations.clone());
        OddMatrixField::new(
            d + 1,
            Arc::new(move |u: &[f64]| {
                let p = DeletedJoinPoint::from_sphere(u);
                let a = |z: &[f64]| maps.iter().map(|m| m(z)).collect::<Vec<_>>();
                let f = join_matrix(&p, &a);
                ev.fetch_add(1, Ordering::Relaxed);
                let mixed = (0..=d).any(|c| {
                    f.iter().any(|r| r[c] > tol) && f.iter().any(|r| r[c] < -tol)
                });
                if mixed {
                    vi.fetch_add(1, Ordering::Relaxed);
                }
                f
            }),
        )
    };
    let inner = RefinementConfig {
        witness_tol: tol / 2.0,
        slack: cfg.slack.min(tol / 2.0),
        ..cfg.clone()
    };
    let result = solve_colorful_bu(&field, &inner)?;
    let diagnostics = KkmDiagnostics {
        evaluations: evaluations.load(Ordering::Relaxed),
        column_sign_violations: violations.load(Ordering::Relaxed),
    };
    let w = match result {
        BuResult::Witness(w) => w,
        BuResult::Inconclusive {
            best_residual,
            depth,
        } => return Ok((inconclusive(best_residual, depth), diagnostics)),
    };
    let pi_bu = match &w.outcome {
        BuOutcome::Transversal { pi, .. } => pi.clone(),
        BuOutcome::BadRows(c) => {
            return Err(Error::Internal(format!(
                "join field of face-preserving maps has clashing rows {c:?}"
            )))
        }
    };
    // column c is won by row pi_bu[c]; map i gets the column it wins
    let mut pi = vec![0; d + 1];
    for (c, &r) in pi_bu.iter().enumerate() {
        pi[r - 1] = c + 1;
    }
    let x = DeletedJoinPoint::from_sphere(&w.x).x;
    let values = pi
        .iter()
        .enumerate()
        .map(|(i, &c)| maps[i](&x)[c - 1])
        .collect();
    Ok((
        SimplexResult::Witness(SimplexWitness::Intersection { x, pi, values }),
        diagnostics,
    ))
}

/// Largest violation of `α^{(i)}_{π(i)}(x) >= α^{(i)}_j(x)`.
pub fn colorful_kkm_residual(maps: &[SimplexMap], x: &[f64], pi: &[usize]) -> f64 {
    let mut r: f64 = 0.0;
    for (i, m) in maps.iter().enumerate() {
        let v = m(x);
        let top = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        r = r.max(top - v[pi[i] - 1]);
    }
    r
}

/// A closed subset of the simplex given by a depth function: the set is
/// `{x : depth(x) >= 0}`.
#[derive(Clone)]
pub struct KkmSet {
    pub depth: DepthFn,
}

impl std::fmt::Debug for KkmSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("KkmSet")
    }
}

impl KkmSet {
    pub fn new(depth: DepthFn) -> Self {
        Self { depth }
    }

    pub fn contains(&self, x: &[f64], margin: f64) -> bool {
        (self.depth)(x) >= -margin
    }
}

/// Spot-checks `Δ^J ⊆ ⋃_{j∈J} A_j` for every cover.
pub fn check_kkm_covers(covers: &[Vec<KkmSet>], d: usize) -> Result<()> {
    for (j, pts) in face_samples(d) {
        for x in pts {
            for (i, cover) in covers.iter().enumerate() {
                if !j.iter().any(|&k| cover[k].contains(&x, 0.0)) {
                    return Err(Error::input(format!(
                        "cover {} misses {x:?} on face {:?}",
                        i + 1,
                        j.iter().map(|k| k + 1).collect::<Vec<_>>()
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Partition of unity subordinate to the open `margin`-neighbourhoods of a
/// KKM cover: weight `(depth_j + margin)⁺ · x_j`, normalized. The factor
/// `x_j` keeps faces invariant.
pub fn subordinate_partition(cover: &[KkmSet], margin: f64) -> SimplexMap {
    let cover = cover.to_vec();
    Arc::new(move |x: &[f64]| {
        let w: Vec<f64> = cover
            .iter()
            .zip(x)
            .map(|(s, &xj)| ((s.depth)(x) + margin).max(0.0) * xj.max(0.0))
            .collect();
        let total: f64 = w.iter().sum();
        if total > 0.0 {
            w.iter().map(|v| v / total).collect()
        } else {
            // only reachable when the KKM property fails at x
            let s: f64 = x.iter().map(|v| v.max(0.0)).sum();
            x.iter().map(|v| v.max(0.0) / s).collect()
        }
    })
}

/// Colorful KKM for covers: `x ∈ ⋂_i A^{(i)}_{π(i)}` up to the final margin.
/// Closed sets are approximated by open neighbourhoods with margins
/// `tol, tol/2`; the result of the finest successful run is returned.
///
/// Only positivity of the chosen partition weight is needed, and the
/// largest weight is at least `1/(d+1)`, so the partition maps are solved
/// at the coarse tolerance `1/(2(d+1))`. The partitions have Lipschitz
/// constant of order `1/margin`, which makes a fine tolerance expensive.
pub fn solve_colorful_kkm_covers(
    covers: &[Vec<KkmSet>],
    d: usize,
    cfg: &RefinementConfig,
) -> Result<(SimplexResult, f64)> {
    if covers.len() != d + 1 || covers.iter().any(|c| c.len() != d + 1) {
        return Err(Error::param(format!("need {} covers of {} sets", d + 1, d + 1)));
    }
    check_kkm_covers(covers, d)?;
    let tol = cfg.witness_tol;
    let coarse = RefinementConfig {
        witness_tol: 0.5 / (d + 1) as f64,
        ..cfg.clone()
    };
    let mut last = None;
    for margin in [tol, tol / 2.0] {
        let maps: Vec<SimplexMap> = covers
            .iter()
            .map(|c| subordinate_partition(c, margin))
            .collect();
        let (res, _) = solve_colorful_kkm(&maps, d, &coarse)?;
        match res {
            SimplexResult::Witness(SimplexWitness::Intersection { x, pi, .. }) => {
                let depths: Vec<f64> = pi
                    .iter()
                    .enumerate()
                    .map(|(i, &j)| (covers[i][j - 1].depth)(&x))
                    .collect();
                if depths.iter().any(|t| *t < -margin) {
                    return Err(Error::Internal(format!(
                        "partition weight positive outside the {margin} neighbourhood: {depths:?}"
                    )));
                }
                let w = SimplexWitness::Intersection { x, pi, values: depths };
                last = Some((SimplexResult::Witness(w), margin));
            }
            SimplexResult::Witness(w) => {
                return Err(Error::Internal(format!("unexpected KKM witness {w:?}")))
            }
            inc => {
                if last.is_none() {
                    last = Some((inc, margin));
                }
                break;
            }
        }
    }
    Ok(last.unwrap())
}

/// Checks nonnegative rows summing to one on the face sample points.
pub fn check_stochastic(f: &StochasticFn, d: usize) -> Result<()> {
    for (_, pts) in face_samples(d) {
        for x in pts {
            let m = f(&x);
            if m.len() != d + 1 {
                return Err(Error::input("stochastic field has the wrong number of rows"));
            }
            for (i, row) in m.iter().enumerate() {
                if row.len() != d + 1 {
                    return Err(Error::input("stochastic field has the wrong number of columns"));
                }
                check_simplex_point(row, &format!("row {} at {x:?}", i + 1))?;
            }
        }
    }
    Ok(())
}

/// Colorful Brouwer: for a field of stochastic matrices, a point `x` and a
/// permutation `π` with `f_{iπ(i)}(x) <= x_{π(i)} + tol`. Uses the covers
/// `A^{(i)}_j = {f_{ij}(x) <= x_j}` with margins `tol/2, tol/4`.
pub fn solve_colorful_brouwer(
    f: StochasticFn,
    d: usize,
    cfg: &RefinementConfig,
) -> Result<SimplexResult> {
    check_stochastic(&f, d)?;
    let covers: Vec<Vec<KkmSet>> = (0..=d)
        .map(|i| {
            (0..=d)
                .map(|j| {
                    let f = f.clone();
                    KkmSet::new(Arc::new(move |x: &[f64]| x[j] - f(x)[i][j]))
                })
                .collect()
        })
        .collect();
    let inner = RefinementConfig {
        witness_tol: cfg.witness_tol / 2.0,
        slack: cfg.slack.min(cfg.witness_tol / 2.0),
        ..cfg.clone()
    };
    let (res, _) = solve_colorful_kkm_covers(&covers, d, &inner)?;
    Ok(match res {
        SimplexResult::Witness(SimplexWitness::Intersection { x, pi, .. }) => {
            let m = f(&x);
            let slacks = pi
                .iter()
                .enumerate()
                .map(|(i, &j)| x[j - 1] - m[i][j - 1])
                .collect();
            SimplexResult::Witness(SimplexWitness::BrouwerColorful { x, pi, slacks })
        }
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg;

    fn identity() -> SimplexMap {
        Arc::new(|x: &[f64]| x.to_vec())
    }

    #[test]
    fn join_model_on_vertices_and_midpoints() {
        let p = DeletedJoinPoint::from_sphere(&[1.0, 0.0, 0.0]);
        assert_eq!((p.lambda, p.x.clone()), (1.0, vec![1.0, 0.0, 0.0]));
        let p = DeletedJoinPoint::from_sphere(&[0.0, -1.0, 0.0]);
        assert_eq!((p.lambda, p.y.clone()), (0.0, vec![0.0, 1.0, 0.0]));
        let h = 0.5f64.sqrt();
        let p = DeletedJoinPoint::from_sphere(&[h, -h, 0.0]);
        assert!((p.lambda - 0.5).abs() < 1e-15);
        assert!(linalg::dist(&p.to_sphere(), &[h, -h, 0.0]) < 1e-15);
    }

    #[test]
    fn identity_gives_intersection() {
        let res = radon_kkm_alternative(identity(), 2, &RefinementConfig::default()).unwrap();
        match res.witness().unwrap() {
            SimplexWitness::Intersection { values, .. } => {
                assert!(values.iter().all(|v| *v > 0.0))
            }
            w => panic!("{w:?}"),
        }
    }

    #[test]
    fn constant_map_gives_radon_partition() {
        let e1: SimplexMap = Arc::new(|x: &[f64]| {
            let mut v = vec![0.0; x.len()];
            v[0] = 1.0;
            v
        });
        let res = radon_kkm_alternative(e1, 2, &RefinementConfig::with_tol(1e-7)).unwrap();
        match res.witness().unwrap() {
            SimplexWitness::RadonPartition {
                lambda, gap, j, j_prime, ..
            } => {
                assert!((lambda - 0.5).abs() <= 1e-6, "lambda = {lambda}");
                assert!(*gap < 1e-12);
                assert!(j.iter().all(|a| !j_prime.contains(a)));
            }
            w => panic!("{w:?}"),
        }
    }

    #[test]
    fn colorful_kkm_identity_and_square() {
        let sq: SimplexMap = Arc::new(|x: &[f64]| {
            let a = x[0] * x[0];
            let b = 1.0 - a;
            vec![a, b]
        });
        let maps = vec![identity(), sq];
        let (res, diag) = solve_colorful_kkm(&maps, 1, &RefinementConfig::default()).unwrap();
        assert_eq!(diag.column_sign_violations, 0);
        match res.witness().unwrap() {
            SimplexWitness::Intersection { x, pi, .. } => {
                assert!(colorful_kkm_residual(&maps, x, pi) <= 1e-3);
                let mut s = pi.clone();
                s.sort();
                assert_eq!(s, vec![1, 2]);
            }
            w => panic!("{w:?}"),
        }
    }

    #[test]
    fn face_preservation_breach_is_rejected() {
        let swap: SimplexMap = Arc::new(|x: &[f64]| vec![x[1], x[0]]);
        let err = solve_colorful_kkm(&[identity(), swap], 1, &RefinementConfig::default());
        assert!(matches!(err, Err(Error::InvalidInput(_))));
    }

    #[test]
    fn standard_kkm_pair() {
        let m = 0.0;
        let a1 = KkmSet::new(Arc::new(move |x: &[f64]| x[0] - (1.0 / 3.0 - m)));
        let a2 = KkmSet::new(Arc::new(move |x: &[f64]| x[1] - (1.0 / 3.0 - m)));
        let cover = vec![a1, a2];
        let (res, margin) =
            solve_colorful_kkm_covers(&[cover.clone(), cover.clone()], 1, &RefinementConfig::default())
                .unwrap();
        match res.witness().unwrap() {
            SimplexWitness::Intersection { x, pi, .. } => {
                for (i, &j) in pi.iter().enumerate() {
                    assert!(cover[j - 1].contains(x, margin), "cover {i}");
                }
                assert!(x[0] >= 1.0 / 3.0 - 1e-3 && x[0] <= 2.0 / 3.0 + 1e-3);
            }
            w => panic!("{w:?}"),
        }
    }

    #[test]
    fn constant_brouwer_rows_find_the_constant() {
        let c = vec![0.2, 0.3, 0.5];
        let f: StochasticFn = Arc::new(move |_x: &[f64]| vec![c.clone(); 3]);
        let res = solve_colorful_brouwer(f, 2, &RefinementConfig::default()).unwrap();
        match res.witness().unwrap() {
            SimplexWitness::BrouwerColorful { x, slacks, .. } => {
                assert!(slacks.iter().all(|s| *s >= -1e-3));
                let l1: f64 = x.iter().zip([0.2, 0.3, 0.5]).map(|(a, b)| (a - b).abs()).sum();
                assert!(l1 <= 3e-3, "x = {x:?}");
            }
            w => panic!("{w:?}"),
        }
    }

    #[test]
    fn mixed_brouwer_rows() {
        let f: StochasticFn = Arc::new(|x: &[f64]| vec![vec![x[1], x[0]], x.to_vec()]);
        let res = solve_colorful_brouwer(f.clone(), 1, &RefinementConfig::default()).unwrap();
        match res.witness().unwrap() {
            SimplexWitness::BrouwerColorful { x, pi, slacks } => {
                let m = f(x);
                for (i, &j) in pi.iter().enumerate() {
                    assert!(m[i][j - 1] <= x[j - 1] + 1e-3);
                    assert!((slacks[i] - (x[j - 1] - m[i][j - 1])).abs() < 1e-15);
                }
            }
            w => panic!("{w:?}"),
        }
    }
}
