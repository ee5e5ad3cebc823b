//! Discrete Fan-lemma engines.
//!
//! Signed labels `±i` are handled as orbit labels `(i, 0)` / `(i, 1)` of the
//! group `Z/2`, so one facet scan serves both the antipodal and the cyclic
//! versions. A sign `+` on block `j` asks for the label `+j`, i.e. it
//! excludes shift `1`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::{Rng, RngExt};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complexes::{Face, SymmetricComplex, VertexId};
use crate::cover_solvers::CoverFamilySet;
use crate::{Error, Result};

/// `(block, shift)` with blocks counted from 1.
pub type Label = (usize, u32);

/// Antipodal labels in `±[d+1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SignedLabeling(pub BTreeMap<VertexId, i32>);

/// Equivariant labels in `[d] × Z/p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitLabeling {
    pub p: u32,
    pub labels: BTreeMap<VertexId, Label>,
}

impl SignedLabeling {
    pub fn get(&self, v: VertexId) -> i32 {
        self.0[&v]
    }

    pub fn to_orbit(&self) -> OrbitLabeling {
        OrbitLabeling {
            p: 2,
            labels: self
                .0
                .iter()
                .map(|(v, &l)| (*v, signed_to_label(l)))
                .collect(),
        }
    }

    /// Checks the range `±[blocks]` and `ℓ(-v) = -ℓ(v)`.
    pub fn validate(&self, sc: &SymmetricComplex, blocks: usize) -> Result<()> {
        for v in sc.complex().vertices() {
            let l = *self
                .0
                .get(&v)
                .ok_or_else(|| Error::labeling(format!("vertex {v} is unlabeled")))?;
            if l == 0 || l.unsigned_abs() as usize > blocks {
                return Err(Error::labeling(format!("label {l} of {v} is outside ±[{blocks}]")));
            }
            let w = sc.action().apply(v, 1);
            if self.0.get(&w) != Some(&-l) {
                return Err(Error::labeling(format!("labels of {v} and {w} are not antipodal")));
            }
        }
        Ok(())
    }
}

impl OrbitLabeling {
    pub fn get(&self, v: VertexId) -> Label {
        self.labels[&v]
    }

    /// Signed form, available for `p = 2`.
    pub fn to_signed(&self) -> Option<SignedLabeling> {
        (self.p == 2).then(|| {
            SignedLabeling(
                self.labels
                    .iter()
                    .map(|(v, &l)| (*v, label_to_signed(l)))
                    .collect(),
            )
        })
    }

    /// Checks the range `[blocks] × Z/p` and `ℓ(g·v) = ℓ(v) + (0, 1)`.
    pub fn validate(&self, sc: &SymmetricComplex, blocks: usize) -> Result<()> {
        if self.p != sc.order() {
            return Err(Error::labeling(format!(
                "labeling is for Z/{} but the complex carries Z/{}",
                self.p,
                sc.order()
            )));
        }
        for v in sc.complex().vertices() {
            let (j, t) = *self
                .labels
                .get(&v)
                .ok_or_else(|| Error::labeling(format!("vertex {v} is unlabeled")))?;
            if j == 0 || j > blocks || t >= self.p {
                return Err(Error::labeling(format!(
                    "label ({j},{t}) of {v} is outside [{blocks}]×Z/{}",
                    self.p
                )));
            }
            let w = sc.action().apply(v, 1);
            if self.labels.get(&w) != Some(&(j, (t + 1) % self.p)) {
                return Err(Error::labeling(format!("labels of {v} and {w} are not equivariant")));
            }
        }
        Ok(())
    }
}

pub fn signed_to_label(l: i32) -> Label {
    (l.unsigned_abs() as usize, if l > 0 { 0 } else { 1 })
}

pub fn label_to_signed((j, t): Label) -> i32 {
    if t == 0 {
        j as i32
    } else {
        -(j as i32)
    }
}

/// Shift excluded from the target facet by a sign: `+` asks for `(j, 0)`.
pub fn sign_to_excluded(s: i8) -> u32 {
    if s > 0 {
        1
    } else {
        0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FanCertificate {
    ComplementaryEdge {
        edge: [VertexId; 2],
        label: usize,
    },
    OrbitFace {
        face: Face,
        block: usize,
    },
    /// The facet together with the vertex carrying each required label.
    TargetFacet {
        facet: Face,
        matching: Vec<(Label, VertexId)>,
    },
}

impl FanCertificate {
    /// Re-reads the labels on the certificate and checks the claim.
    pub fn verify(&self, labeling: &OrbitLabeling, excluded: &[u32]) -> bool {
        let p = labeling.p;
        match self {
            FanCertificate::ComplementaryEdge { edge, label } => {
                let shifts: BTreeSet<u32> = edge
                    .iter()
                    .filter(|v| labeling.get(**v).0 == *label)
                    .map(|v| labeling.get(*v).1)
                    .collect();
                p == 2 && shifts.len() == 2
            }
            FanCertificate::OrbitFace { face, block } => {
                let shifts: BTreeSet<u32> = face
                    .iter()
                    .filter(|v| labeling.get(**v).0 == *block)
                    .map(|v| labeling.get(*v).1)
                    .collect();
                face.len() == p as usize && shifts.len() == p as usize
            }
            FanCertificate::TargetFacet { facet, matching } => {
                let claimed: BTreeSet<Label> = matching.iter().map(|(l, _)| *l).collect();
                let required = required_labels(p, excluded);
                let read: BTreeSet<Label> = facet.iter().map(|v| labeling.get(*v)).collect();
                claimed == required
                    && read == required
                    && facet.len() == required.len()
                    && matching.iter().all(|(l, v)| labeling.get(*v) == *l)
            }
        }
    }
}

/// `{(j, s) : s ≠ excluded_j}`.
pub fn required_labels(p: u32, excluded: &[u32]) -> BTreeSet<Label> {
    excluded
        .iter()
        .enumerate()
        .flat_map(|(j, &e)| (0..p).filter(move |&s| s != e).map(move |s| (j + 1, s)))
        .collect()
}

/// Every orbit face and every target facet of a labelled complex.
#[derive(Clone, Debug, Default)]
pub struct Scan {
    /// Faces carrying a full orbit `{j} × Z/p`, with their block `j`.
    pub orbit_faces: Vec<(Face, usize)>,
    /// Facets labelled exactly by the required labels, in facet order.
    pub targets: Vec<Face>,
}

/// Scans all facets, in parallel. Results are ordered canonically.
pub fn scan(
    sc: &SymmetricComplex,
    labels: &HashMap<VertexId, Label>,
    p: u32,
    excluded: &[u32],
) -> Scan {
    let required = required_labels(p, excluded);
    let per_facet: Vec<(Vec<(Face, usize)>, bool)> = sc
        .complex()
        .facets()
        .par_iter()
        .map(|f| {
            let ls: Vec<Label> = f.iter().map(|v| labels[v]).collect();
            let mut orbit = Vec::new();
            let mut blocks: BTreeMap<usize, BTreeMap<u32, VertexId>> = BTreeMap::new();
            for (v, &(j, t)) in f.iter().zip(&ls) {
                blocks.entry(j).or_default().entry(t).or_insert(*v);
            }
            for (j, shifts) in blocks {
                if shifts.len() == p as usize {
                    let mut face: Face = shifts.into_values().collect();
                    face.sort();
                    orbit.push((face, j));
                }
            }
            let distinct: BTreeSet<Label> = ls.iter().copied().collect();
            let target = distinct.len() == ls.len() && distinct == required;
            (orbit, target)
        })
        .collect();
    let mut orbit_faces: BTreeSet<(Face, usize)> = BTreeSet::new();
    let mut targets = Vec::new();
    for (f, (orbit, target)) in sc.complex().facets().iter().zip(per_facet) {
        orbit_faces.extend(orbit);
        if target {
            targets.push(f.clone());
        }
    }
    let mut orbit_faces: Vec<(Face, usize)> = orbit_faces.into_iter().collect();
    orbit_faces.sort_by_cached_key(|(f, j)| (face_key(f), *j));
    targets.sort_by_cached_key(|f| face_key(f));
    Scan {
        orbit_faces,
        targets,
    }
}

/// Canonical order on faces: by absolute vertex id, positive before negative.
pub fn face_key(face: &[VertexId]) -> Vec<(u64, bool)> {
    let mut k: Vec<(u64, bool)> = face.iter().map(|v| (v.0.unsigned_abs(), v.0 < 0)).collect();
    k.sort();
    k
}

fn matching(facet: &Face, labeling: &HashMap<VertexId, Label>) -> Vec<(Label, VertexId)> {
    let mut m: Vec<(Label, VertexId)> = facet.iter().map(|v| (labeling[v], *v)).collect();
    m.sort();
    m
}

fn certificate_from_scan(
    scan: Scan,
    labels: &HashMap<VertexId, Label>,
    p: u32,
) -> Option<FanCertificate> {
    if let Some((face, j)) = scan.orbit_faces.into_iter().next() {
        return Some(if p == 2 {
            FanCertificate::ComplementaryEdge {
                edge: [face[0], face[1]],
                label: j,
            }
        } else {
            FanCertificate::OrbitFace { face, block: j }
        });
    }
    scan.targets.into_iter().next().map(|facet| FanCertificate::TargetFacet {
        matching: matching(&facet, labels),
        facet,
    })
}

/// Antipodal Fan lemma on a `d`-sphere with labels in `±[d+1]`: finds a
/// complementary edge `{+j, -j}` or a facet labelled `{s_1·1, …, s_{d+1}·(d+1)}`.
/// Complementary edges take priority.
pub fn solve_fan_z2(
    sc: &SymmetricComplex,
    labeling: &SignedLabeling,
    signs: &[i8],
) -> Result<FanCertificate> {
    if sc.order() != 2 {
        return Err(Error::param("solve_fan_z2 needs an antipodal complex"));
    }
    let blocks = sc.dimension() + 1;
    if signs.len() != blocks || signs.iter().any(|s| *s != 1 && *s != -1) {
        return Err(Error::param(format!("expected {blocks} signs in {{+1,-1}}")));
    }
    labeling.validate(sc, blocks)?;
    let excluded: Vec<u32> = signs.iter().map(|s| sign_to_excluded(*s)).collect();
    let orbit = labeling.to_orbit();
    let labels: HashMap<VertexId, Label> = orbit.labels.iter().map(|(v, l)| (*v, *l)).collect();
    certificate_from_scan(scan(sc, &labels, 2, &excluded), &labels, 2)
        .ok_or_else(|| Error::Internal("no complementary edge and no target facet".into()))
}

/// Cyclic Fan lemma on an `n`-sphere, `n = (p-1)d - 1`: finds a face
/// labelled `{j} × Z/p` or a facet labelled `{(j, s) : s ≠ s_j}`.
pub fn solve_fan_zp(
    sc: &SymmetricComplex,
    labeling: &OrbitLabeling,
    shifts: &[u32],
) -> Result<FanCertificate> {
    let p = sc.order();
    let size = sc.dimension() + 1;
    if !size.is_multiple_of(p as usize - 1) {
        return Err(Error::param(format!(
            "dimension {} is not of the form (p-1)d-1",
            sc.dimension()
        )));
    }
    let d = size / (p as usize - 1);
    if shifts.len() != d || shifts.iter().any(|s| *s >= p) {
        return Err(Error::param(format!("expected {d} shifts in Z/{p}")));
    }
    labeling.validate(sc, d)?;
    let labels: HashMap<VertexId, Label> =
        labeling.labels.iter().map(|(v, l)| (*v, *l)).collect();
    let cert = certificate_from_scan(scan(sc, &labels, p, shifts), &labels, p)
        .ok_or_else(|| Error::Internal("no orbit face and no target facet".into()))?;
    Ok(match cert {
        FanCertificate::ComplementaryEdge { edge, label } => FanCertificate::OrbitFace {
            face: edge.to_vec(),
            block: label,
        },
        c => c,
    })
}

/// Uniformly random equivariant labeling in `[blocks] × Z/p`: each orbit
/// representative draws a label and the rest of its orbit follows.
pub fn random_labeling(sc: &SymmetricComplex, blocks: usize, rng: &mut impl Rng) -> OrbitLabeling {
    let p = sc.order();
    let mut reps: BTreeMap<VertexId, Label> = BTreeMap::new();
    let mut labels = BTreeMap::new();
    for v in sc.complex().vertices() {
        let (rep, k) = sc.orbit_representative(v);
        let (j, t) = *reps
            .entry(rep)
            .or_insert_with(|| (rng.random_range(1..=blocks), rng.random_range(0..p)));
        labels.insert(v, (j, (t + k) % p));
    }
    OrbitLabeling { p, labels }
}

/// On an `n`-sphere with `n = (p-1)d` and labels in `[d] × Z/p`, some face
/// always carries a full orbit.
pub fn forced_orbit_face(sc: &SymmetricComplex, labeling: &OrbitLabeling) -> Result<(Face, usize)> {
    let p = sc.order();
    let n = sc.dimension();
    if n == 0 || !n.is_multiple_of(p as usize - 1) {
        return Err(Error::param(format!("dimension {n} is not a multiple of p-1")));
    }
    let d = n / (p as usize - 1);
    labeling.validate(sc, d)?;
    let labels: HashMap<VertexId, Label> =
        labeling.labels.iter().map(|(v, l)| (*v, *l)).collect();
    scan(sc, &labels, p, &vec![0; d])
        .orbit_faces
        .into_iter()
        .next()
        .ok_or_else(|| Error::Internal("no face carries a full orbit".into()))
}

/// Labels a subdivided complex from set membership. Each orbit gets its label
/// at the representative with lexicographically smallest coordinates: the
/// first set `i`, then the first shift `t`, with `x ∈ g^t·A_i` for the family
/// assigned to the vertex; the rest of the orbit follows by equivariance.
///
/// With a single family every vertex uses it. With several families, a
/// vertex subdividing a face of dimension `k` uses family `k`.
pub fn rainbow_labeling(sc: &SymmetricComplex, families: &CoverFamilySet) -> Result<OrbitLabeling> {
    let p = sc.order();
    if families.p() != p {
        return Err(Error::param("families and complex use different groups"));
    }
    let colorful = families.family_count() > 1;
    if colorful {
        if sc.carriers().is_none() {
            return Err(Error::param(
                "several families need a barycentric subdivision with carrier dimensions",
            ));
        }
        if families.family_count() != sc.dimension() + 1 {
            return Err(Error::param(format!(
                "{} families for facets of size {}",
                families.family_count(),
                sc.dimension() + 1
            )));
        }
    }
    let verts = sc.complex().vertices();
    let reps: BTreeSet<VertexId> = verts.iter().map(|v| sc.orbit_representative(*v).0).collect();
    let reps: Vec<VertexId> = reps.into_iter().collect();
    let rep_labels: Vec<Result<Label>> = reps
        .par_iter()
        .map(|&r| {
            let family = if colorful { sc.carrier_dim(r).unwrap() } else { 0 };
            let x = sc.coord(r);
            label_point(sc, families, family, x).ok_or_else(|| Error::CoverViolation {
                vertex: r,
                point: x.to_vec(),
                family,
            })
        })
        .collect();
    let mut by_rep = HashMap::new();
    for (r, l) in reps.iter().zip(rep_labels) {
        by_rep.insert(*r, l?);
    }
    let labels = verts
        .iter()
        .map(|&v| {
            let (r, k) = sc.orbit_representative(v);
            let (i, t) = by_rep[&r];
            (v, (i, (t + k) % p))
        })
        .collect();
    Ok(OrbitLabeling { p, labels })
}

/// First `(i, t)` with `x ∈ g^t·A_i` in the given family.
pub fn label_point(
    sc: &SymmetricComplex,
    families: &CoverFamilySet,
    family: usize,
    x: &[f64],
) -> Option<Label> {
    let p = sc.order();
    for i in 0..families.set_count() {
        for t in 0..p {
            let pre = sc.act_point(x, (p - t) % p);
            if families.contains(family, i, &pre) {
                return Some((i + 1, t));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{crosspolytope, zp_join_sphere, zp_vertex};

    fn signed(pairs: &[(i64, i32)]) -> SignedLabeling {
        let mut m = BTreeMap::new();
        for &(v, l) in pairs {
            m.insert(VertexId(v), l);
            m.insert(VertexId(-v), -l);
        }
        SignedLabeling(m)
    }

    #[test]
    fn square_identity_labeling_gives_target_facet() {
        let sq = crosspolytope(2).unwrap();
        let l = signed(&[(1, 1), (2, 2)]);
        let cert = solve_fan_z2(&sq, &l, &[1, 1]).unwrap();
        match &cert {
            FanCertificate::TargetFacet { facet, .. } => {
                assert_eq!(facet, &vec![VertexId(1), VertexId(2)])
            }
            c => panic!("unexpected {c:?}"),
        }
        assert!(cert.verify(&l.to_orbit(), &[1, 1]));
    }

    #[test]
    fn square_mixed_labeling_gives_complementary_edge() {
        let sq = crosspolytope(2).unwrap();
        let l = signed(&[(1, 1), (2, -1)]);
        let cert = solve_fan_z2(&sq, &l, &[1, 1]).unwrap();
        match cert {
            FanCertificate::ComplementaryEdge { edge, label } => {
                assert_eq!(label, 1);
                assert_eq!(edge, [VertexId(1), VertexId(2)]);
                let ls: BTreeSet<i32> = edge.iter().map(|v| l.get(*v)).collect();
                assert_eq!(ls, BTreeSet::from([1, -1]));
            }
            c => panic!("unexpected {c:?}"),
        }
    }

    #[test]
    fn invalid_labelings_are_rejected() {
        let sq = crosspolytope(2).unwrap();
        let mut l = signed(&[(1, 1), (2, 2)]);
        l.0.insert(VertexId(-2), 2);
        assert!(matches!(
            solve_fan_z2(&sq, &l, &[1, 1]),
            Err(Error::InvalidLabeling(_))
        ));
        let l = signed(&[(1, 1), (2, 3)]);
        assert!(matches!(
            solve_fan_z2(&sq, &l, &[1, 1]),
            Err(Error::InvalidLabeling(_))
        ));
    }

    #[test]
    fn triangle_identity_labeling() {
        let tri = zp_join_sphere(3, 1).unwrap();
        let labels = tri
            .complex()
            .vertices()
            .into_iter()
            .map(|v| (v, (1, v.0 as u32)))
            .collect();
        let l = OrbitLabeling { p: 3, labels };
        let cert = solve_fan_zp(&tri, &l, &[0]).unwrap();
        assert_eq!(
            cert,
            FanCertificate::TargetFacet {
                facet: vec![zp_vertex(3, 0, 1), zp_vertex(3, 0, 2)],
                matching: vec![((1, 1), zp_vertex(3, 0, 1)), ((1, 2), zp_vertex(3, 0, 2))],
            }
        );
        assert!(cert.verify(&l, &[0]));
    }

    #[test]
    fn zp_with_p2_matches_z2() {
        let sq = zp_join_sphere(2, 2).unwrap();
        let l = SignedLabeling(
            sq.complex()
                .vertices()
                .into_iter()
                .map(|v| {
                    let (j, t) = crate::complexes::zp_block_shift(2, v);
                    (v, label_to_signed((j + 1, t)))
                })
                .collect(),
        );
        for signs in [[1i8, 1], [1, -1], [-1, 1], [-1, -1]] {
            let excl: Vec<u32> = signs.iter().map(|s| sign_to_excluded(*s)).collect();
            let a = solve_fan_z2(&sq, &l, &signs).unwrap();
            let b = solve_fan_zp(&sq, &l.to_orbit(), &excl).unwrap();
            match (a, b) {
                (
                    FanCertificate::TargetFacet { facet: f1, .. },
                    FanCertificate::TargetFacet { facet: f2, .. },
                ) => assert_eq!(f1, f2),
                (a, b) => panic!("{a:?} vs {b:?}"),
            }
        }
    }

    #[test]
    fn octahedron_forced_edge() {
        // labels only in ±[2] on the 2-sphere force a complementary edge
        let oct = crosspolytope(3).unwrap();
        let l = signed(&[(1, 1), (2, 2), (3, -1)]);
        let (face, j) = forced_orbit_face(&oct, &l.to_orbit()).unwrap();
        assert_eq!(face.len(), 2);
        assert_eq!(l.get(face[0]), -l.get(face[1]));
        assert_eq!(l.get(face[0]).unsigned_abs() as usize, j);
    }

    #[test]
    fn required_label_sets() {
        assert_eq!(
            required_labels(3, &[0, 2]),
            BTreeSet::from([(1, 1), (1, 2), (2, 0), (2, 1)])
        );
    }

    #[test]
    fn random_labelings_are_equivariant() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let oct = crosspolytope(3).unwrap().subdivide_times(1, usize::MAX).unwrap();
        let zp = zp_join_sphere(3, 2).unwrap();
        for _ in 0..5 {
            random_labeling(&oct, 3, &mut rng).validate(&oct, 3).unwrap();
            let l = random_labeling(&zp, 2, &mut rng);
            l.validate(&zp, 2).unwrap();
            assert!(solve_fan_zp(&zp, &l, &[0, 1]).is_ok());
        }
    }
}
