//! Brute-force references. Nothing here calls a solver; each routine
//! enumerates or grids its search space directly.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complexes::{Face, SymmetricComplex, VertexId};
use crate::fan_core::{OrbitLabeling, SignedLabeling};
use crate::ham_sandwich::SmoothedPointMeasure;
use crate::linalg;
use crate::{Error, Result};

pub const MAX_SCAN_FACETS: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub resolution: usize,
    pub slack: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            resolution: 200,
            slack: 1e-3,
        }
    }
}

impl SweepConfig {
    fn validate(&self) -> Result<()> {
        if self.resolution < 8 {
            return Err(Error::param("grid resolution must be at least 8"));
        }
        if !(self.slack >= 0.0) {
            return Err(Error::param("slack must be nonnegative"));
        }
        Ok(())
    }
}

/// Every certificate of an antipodal labeling.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FanScanReport {
    pub complementary_edges: Vec<[VertexId; 2]>,
    /// Facets labelled `{s_1·1, s_2·2, …}` together with their sign vector.
    pub target_facets: Vec<(Face, Vec<i8>)>,
}

fn check_size(sc: &SymmetricComplex) -> Result<()> {
    let n = sc.complex().facets().len();
    if n > MAX_SCAN_FACETS {
        return Err(Error::TooLarge(format!("{n} facets exceed the scan cap")));
    }
    Ok(())
}

/// Lists every complementary edge and every target facet. With `signs`
/// given, only facets for that sign vector are listed.
pub fn exhaustive_fan_scan(
    sc: &SymmetricComplex,
    labeling: &SignedLabeling,
    signs: Option<&[i8]>,
) -> Result<FanScanReport> {
    check_size(sc)?;
    let mut edges = BTreeSet::new();
    let mut targets = Vec::new();
    let n = sc.dimension() + 1;
    for f in sc.complex().facets() {
        for (a, u) in f.iter().enumerate() {
            for v in &f[a + 1..] {
                if labeling.get(*u) == -labeling.get(*v) {
                    edges.insert([*u.min(v), *u.max(v)]);
                }
            }
        }
        let mut by_block: Vec<Option<i32>> = vec![None; n];
        let mut ok = true;
        for v in f {
            let l = labeling.get(*v);
            let j = l.unsigned_abs() as usize;
            if j == 0 || j > n || by_block[j - 1].is_some() {
                ok = false;
                break;
            }
            by_block[j - 1] = Some(l);
        }
        if ok {
            let s: Vec<i8> = by_block.iter().map(|l| l.unwrap().signum() as i8).collect();
            if signs.is_none_or(|want| want == s.as_slice()) {
                targets.push((f.clone(), s));
            }
        }
    }
    Ok(FanScanReport {
        complementary_edges: edges.into_iter().collect(),
        target_facets: targets,
    })
}

/// Every certificate of a `Z/p` labeling with prescribed missing shifts.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ZpScanReport {
    /// Faces whose labels are exactly `{j} × Z/p`, with `j`.
    pub orbit_faces: Vec<(Face, usize)>,
    pub target_facets: Vec<Face>,
}

pub fn exhaustive_zp_scan(
    sc: &SymmetricComplex,
    labeling: &OrbitLabeling,
    shifts: &[u32],
) -> Result<ZpScanReport> {
    check_size(sc)?;
    let p = labeling.p;
    let mut orbit = BTreeSet::new();
    let mut targets = Vec::new();
    let wanted: BTreeSet<(usize, u32)> = shifts
        .iter()
        .enumerate()
        .flat_map(|(j, &e)| (0..p).filter(move |s| *s != e).map(move |s| (j + 1, s)))
        .collect();
    for f in sc.complex().facets() {
        // all subsets of size p, checked one by one
        let k = p as usize;
        if f.len() >= k {
            let mut idx: Vec<usize> = (0..k).collect();
            loop {
                let face: Face = idx.iter().map(|i| f[*i]).collect();
                let ls: BTreeSet<(usize, u32)> = face.iter().map(|v| labeling.get(*v)).collect();
                let blocks: BTreeSet<usize> = ls.iter().map(|l| l.0).collect();
                if ls.len() == k && blocks.len() == 1 {
                    orbit.insert((face, *blocks.iter().next().unwrap()));
                }
                let mut i = k;
                while i > 0 && idx[i - 1] == f.len() - k + i - 1 {
                    i -= 1;
                }
                if i == 0 {
                    break;
                }
                idx[i - 1] += 1;
                for t in i..k {
                    idx[t] = idx[t - 1] + 1;
                }
            }
        }
        let ls: Vec<(usize, u32)> = f.iter().map(|v| labeling.get(*v)).collect();
        let set: BTreeSet<(usize, u32)> = ls.iter().copied().collect();
        if set.len() == ls.len() && set == wanted {
            targets.push(f.clone());
        }
    }
    Ok(ZpScanReport {
        orbit_faces: orbit.into_iter().collect(),
        target_facets: targets,
    })
}

/// Best point of a uniform sphere grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridResult {
    pub point: Vec<f64>,
    pub value: f64,
    pub samples: usize,
    /// Values in grid order: by angle on `S^1`, by (polar, azimuth) on `S^2`.
    pub landscape: Vec<f64>,
}

/// Grid points of `S^d ⊂ R^{d+1}` for `d ∈ {1, 2}`.
pub fn sphere_grid(d: usize, resolution: usize) -> Result<Vec<Vec<f64>>> {
    use std::f64::consts::PI;
    if resolution < 8 {
        return Err(Error::param("grid resolution must be at least 8"));
    }
    match d {
        1 => Ok((0..resolution)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / resolution as f64;
                vec![t.cos(), t.sin()]
            })
            .collect()),
        2 => {
            let mut pts = Vec::with_capacity(resolution * 2 * resolution);
            for a in 0..=resolution {
                let th = PI * a as f64 / resolution as f64;
                for b in 0..2 * resolution {
                    let ph = PI * b as f64 / resolution as f64;
                    pts.push(vec![th.cos(), th.sin() * ph.cos(), th.sin() * ph.sin()]);
                }
            }
            Ok(pts)
        }
        _ => Err(Error::UnsupportedDimension(format!("dense grids need d <= 2, got {d}"))),
    }
}

/// Minimizes `residual` over a uniform grid on `S^d`.
pub fn sphere_grid_search(
    d: usize,
    resolution: usize,
    residual: impl Fn(&[f64]) -> f64 + Sync,
) -> Result<GridResult> {
    let pts = sphere_grid(d, resolution)?;
    let landscape: Vec<f64> = pts.par_iter().map(|x| residual(x)).collect();
    let (i, value) = landscape
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |b, (i, v)| if *v < b.1 { (i, *v) } else { b });
    Ok(GridResult {
        point: pts[i].clone(),
        value,
        samples: pts.len(),
        landscape,
    })
}

/// `lo <= μ(H^+)/μ(R^2) <= hi` for measure `measure`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FractionConstraint {
    pub measure: usize,
    pub lo: f64,
    pub hi: f64,
}

impl FractionConstraint {
    pub fn at_least(measure: usize, v: f64) -> Self {
        Self { measure, lo: v, hi: f64::INFINITY }
    }

    pub fn at_most(measure: usize, v: f64) -> Self {
        Self { measure, lo: f64::NEG_INFINITY, hi: v }
    }

    pub fn equal(measure: usize, v: f64) -> Self {
        Self { measure, lo: v, hi: v }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub angle: f64,
    pub offset: f64,
    pub margin: f64,
}

/// Constraint map over the (angle, offset) grid of oriented lines
/// `{x : cos(a)x_1 + sin(a)x_2 <= offset}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineSweep {
    pub satisfied: Vec<SweepCell>,
    pub best: SweepCell,
    pub best_u: Vec<f64>,
    pub cells: usize,
}

impl LineSweep {
    pub fn is_empty(&self) -> bool {
        self.satisfied.is_empty()
    }
}

/// Checks every line of a `resolution × resolution` grid (angles over the
/// full circle, offsets over `[-R, R]`) against the constraints, relaxed
/// by `cfg.slack`.
pub fn line_sweep_2d(
    measures: &[SmoothedPointMeasure],
    constraints: &[FractionConstraint],
    cfg: &SweepConfig,
) -> Result<LineSweep> {
    cfg.validate()?;
    for m in measures {
        m.validate()?;
        if m.dim() != 2 {
            return Err(Error::UnsupportedDimension("line sweeps are planar".into()));
        }
    }
    if constraints.iter().any(|c| c.measure >= measures.len()) {
        return Err(Error::param("constraint names a missing measure"));
    }
    let radius = measures
        .iter()
        .flat_map(|m| m.points.iter())
        .map(|p| linalg::norm(p))
        .fold(0.0, f64::max)
        .max(1e-9)
        * 1.01;
    let n = cfg.resolution;
    let cells: Vec<SweepCell> = (0..n)
        .into_par_iter()
        .flat_map_iter(|a| {
            let angle = 2.0 * std::f64::consts::PI * a as f64 / n as f64;
            (0..=n).map(move |o| {
                let offset = -radius + 2.0 * radius * o as f64 / n as f64;
                let u = [offset, angle.cos(), angle.sin()];
                let margin = constraints
                    .iter()
                    .map(|c| {
                        let m = &measures[c.measure];
                        let f = m.halfspace_value(&u) / m.total_mass();
                        (f - c.lo).min(c.hi - f)
                    })
                    .fold(f64::INFINITY, f64::min);
                SweepCell { angle, offset, margin }
            })
        })
        .collect();
    let best = cells
        .iter()
        .cloned()
        .reduce(|a, b| if b.margin > a.margin { b } else { a })
        .expect("nonempty grid");
    let best_u = linalg::normalized(&[best.offset, best.angle.cos(), best.angle.sin()])
        .expect("unit normal");
    let count = cells.len();
    Ok(LineSweep {
        satisfied: cells.into_iter().filter(|c| c.margin >= -cfg.slack).collect(),
        best,
        best_u,
        cells: count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::crosspolytope;
    use crate::ham_sandwich::{parabola_cloud, random_cloud};
    use std::collections::BTreeMap;

    fn identity(sc: &SymmetricComplex) -> SignedLabeling {
        SignedLabeling(sc.complex().vertices().iter().map(|v| (*v, v.0 as i32)).collect())
    }

    #[test]
    fn square_identity_has_four_targets() {
        let sq = crosspolytope(2).unwrap();
        let r = exhaustive_fan_scan(&sq, &identity(&sq), None).unwrap();
        assert!(r.complementary_edges.is_empty());
        assert_eq!(r.target_facets.len(), 4);
        let r = exhaustive_fan_scan(&sq, &identity(&sq), Some(&[1, 1])).unwrap();
        assert_eq!(r.target_facets.len(), 1);
    }

    #[test]
    fn square_mixed_labeling() {
        let sq = crosspolytope(2).unwrap();
        let l: BTreeMap<VertexId, i32> =
            [(1, 1), (-1, -1), (2, -1), (-2, 1)].into_iter().map(|(v, l)| (VertexId(v), l)).collect();
        let r = exhaustive_fan_scan(&sq, &SignedLabeling(l), None).unwrap();
        assert_eq!(r.complementary_edges.len(), 2);
        assert!(r.target_facets.is_empty());
    }

    #[test]
    fn grid_minimizer_on_circle() {
        let g = sphere_grid_search(1, 720, |x| (x[0] - x[1]).abs()).unwrap();
        assert!((g.point[0].abs() - 0.5f64.sqrt()).abs() < 1e-2);
        assert!(sphere_grid(3, 10).is_err());
    }

    #[test]
    fn sweeps() {
        let a = random_cloud(&[-2.0, 0.0], 1.0, 40, 1).unwrap();
        let b = random_cloud(&[2.0, 1.0], 1.0, 40, 2).unwrap();
        let cfg = SweepConfig { resolution: 400, slack: 0.02 };
        let bisect = [FractionConstraint::equal(0, 0.5), FractionConstraint::equal(1, 0.5)];
        assert!(!line_sweep_2d(&[a.clone(), b.clone()], &bisect, &cfg).unwrap().is_empty());
        let frac = [FractionConstraint::equal(0, 0.25), FractionConstraint::equal(1, 0.75)];
        assert!(!line_sweep_2d(&[a, b], &frac, &cfg).unwrap().is_empty());

        let p = |r: &[(f64, f64)]| parabola_cloud(r, 100).unwrap();
        let ms = [p(&[(0.0, 2.0)]), p(&[(2.0, 4.0)]), p(&[(0.0, 1.0)]), p(&[(3.0, 4.0)])];
        let naive = [
            FractionConstraint::at_least(0, 0.5),
            FractionConstraint::at_most(1, 0.5),
            FractionConstraint::at_most(2, 0.5),
            FractionConstraint::at_least(3, 0.5),
        ];
        let cfg = SweepConfig { resolution: 628, slack: 0.05 };
        assert!(line_sweep_2d(&ms, &naive, &cfg).unwrap().is_empty());
    }
}
