//! Symmetric simplicial spheres.
//!
//! Complexes are stored by their facets only; lower-dimensional faces are
//! enumerated on demand. A [`SymmetricComplex`] adds an order-`p` vertex
//! permutation together with a unit-sphere realization on which the
//! permutation acts by a fixed orthogonal matrix (the antipodal map `-I`
//! for `p = 2`).

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::linalg::{self, Mat};
use crate::{Error, Result};

/// Default cap on sphere dimension for the constructors.
pub const DEFAULT_MAX_DIM: usize = 5;
/// Default cap on repeated barycentric subdivision.
pub const DEFAULT_MAX_SUBDIVISION_DEPTH: usize = 8;

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub i64);

impl std::fmt::Display for VertexId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0 > 0 {
            write!(f, "+{}", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

pub type Face = Vec<VertexId>;

/// A pure or impure simplicial complex given by its facets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    facets: Vec<Face>,
}

impl SimplicialComplex {
    /// Builds a complex from a list of facets. Facets are sorted and
    /// deduplicated; an empty facet or a facet contained in another is
    /// rejected.
    pub fn new(facets: Vec<Face>) -> Result<Self> {
        let mut facets: Vec<Face> = facets
            .into_iter()
            .map(|mut f| {
                f.sort();
                f.dedup();
                f
            })
            .collect();
        if facets.iter().any(|f| f.is_empty()) {
            return Err(Error::input("empty facet"));
        }
        facets.sort();
        facets.dedup();
        let sizes: BTreeSet<usize> = facets.iter().map(Vec::len).collect();
        if sizes.len() > 1 {
            for (i, a) in facets.iter().enumerate() {
                for (j, b) in facets.iter().enumerate() {
                    if i != j && a.len() < b.len() && is_subset(a, b) {
                        return Err(Error::input(format!(
                            "facet {a:?} is contained in facet {b:?}"
                        )));
                    }
                }
            }
        }
        Ok(Self { facets })
    }

    pub(crate) fn from_sorted(mut facets: Vec<Face>) -> Self {
        facets.sort();
        Self { facets }
    }

    /// The full `n`-simplex on vertices `1..=n+1`.
    pub fn simplex(n: usize) -> Self {
        Self {
            facets: vec![(1..=n as i64 + 1).map(VertexId).collect()],
        }
    }

    pub fn facets(&self) -> &[Face] {
        &self.facets
    }

    pub fn vertices(&self) -> Vec<VertexId> {
        let set: BTreeSet<VertexId> = self.facets.iter().flatten().copied().collect();
        set.into_iter().collect()
    }

    pub fn dimension(&self) -> usize {
        self.facets.iter().map(Vec::len).max().unwrap_or(1) - 1
    }

    /// All nonempty faces.
    pub fn faces(&self) -> BTreeSet<Face> {
        let mut out = BTreeSet::new();
        for f in &self.facets {
            for_each_subset(f, |s| {
                out.insert(s.to_vec());
            });
        }
        out
    }

    /// Number of faces per dimension, starting with vertices.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut fv = vec![0; self.dimension() + 1];
        for face in self.faces() {
            fv[face.len() - 1] += 1;
        }
        fv
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }

    pub fn edges(&self) -> BTreeSet<[VertexId; 2]> {
        let mut out = BTreeSet::new();
        for f in &self.facets {
            for i in 0..f.len() {
                for j in i + 1..f.len() {
                    out.insert([f[i], f[j]]);
                }
            }
        }
        out
    }

    pub fn contains_face(&self, face: &[VertexId]) -> bool {
        let mut sorted = face.to_vec();
        sorted.sort();
        self.facets.iter().any(|f| is_subset(&sorted, f))
    }

    /// Barycentric subdivision. Vertices of the result correspond to nonempty
    /// faces; a singleton face keeps its vertex id, every other face gets a
    /// fresh id (counting up from the current maximum, in canonical face
    /// order). Returns the subdivided complex and, for every new vertex, the
    /// face it subdivides.
    pub fn barycentric_subdivision(&self) -> (SimplicialComplex, BTreeMap<VertexId, Face>) {
        let mut faces: Vec<Face> = self.faces().into_iter().collect();
        faces.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let mut next = self.vertices().last().map_or(0, |v| v.0) + 1;
        let mut id_of: HashMap<Face, VertexId> = HashMap::with_capacity(faces.len());
        let mut carrier = BTreeMap::new();
        for face in faces {
            let id = if face.len() == 1 {
                face[0]
            } else {
                let id = VertexId(next);
                next += 1;
                id
            };
            carrier.insert(id, face.clone());
            id_of.insert(face, id);
        }
        let mut facets = Vec::new();
        for f in &self.facets {
            for_each_permutation(f, |perm| {
                let mut chain = Vec::with_capacity(perm.len());
                let mut prefix: Face = Vec::with_capacity(perm.len());
                for &v in perm {
                    let pos = prefix.binary_search(&v).unwrap_err();
                    prefix.insert(pos, v);
                    chain.push(id_of[&prefix]);
                }
                chain.sort();
                facets.push(chain);
            });
        }
        (SimplicialComplex::from_sorted(facets), carrier)
    }
}

/// Deleted join of the `n`-simplex with `p` copies. Vertex `(e, c)` with
/// element `e ∈ 0..=n` and copy `c ∈ 0..p` gets id `c·(n+1) + e + 1`.
/// Facets assign every element to exactly one copy.
pub fn deleted_join_simplex(n: usize, p: usize) -> Result<SimplicialComplex> {
    if p < 2 {
        return Err(Error::param("deleted join needs p >= 2"));
    }
    let count = (p as u64)
        .checked_pow(n as u32 + 1)
        .filter(|&c| c <= 1_000_000)
        .ok_or_else(|| Error::TooLarge(format!("p^(n+1) facets for n={n}, p={p}")))?;
    let mut facets = Vec::with_capacity(count as usize);
    for code in 0..count {
        let mut c = code;
        let mut facet = Vec::with_capacity(n + 1);
        for e in 0..=n {
            let copy = (c % p as u64) as usize;
            c /= p as u64;
            facet.push(deleted_join_vertex(n, copy, e));
        }
        facet.sort();
        facets.push(facet);
    }
    Ok(SimplicialComplex::from_sorted(facets))
}

pub fn deleted_join_vertex(n: usize, copy: usize, element: usize) -> VertexId {
    VertexId((copy * (n + 1) + element + 1) as i64)
}

/// Searches for a vertex bijection mapping the facets of `a` onto those of
/// `b`.
pub fn find_isomorphism(
    a: &SimplicialComplex,
    b: &SimplicialComplex,
) -> Option<BTreeMap<VertexId, VertexId>> {
    let va = a.vertices();
    let vb = b.vertices();
    if va.len() != vb.len() || a.facets.len() != b.facets.len() || a.f_vector() != b.f_vector() {
        return None;
    }
    let degree = |c: &SimplicialComplex| {
        let mut d: HashMap<VertexId, usize> = HashMap::new();
        for f in &c.facets {
            for v in f {
                *d.entry(*v).or_default() += 1;
            }
        }
        d
    };
    let (da, db) = (degree(a), degree(b));
    let mut order = va.clone();
    order.sort_by_key(|v| std::cmp::Reverse(da[v]));
    let target: BTreeSet<Face> = b.facets.iter().cloned().collect();
    // facets of `a` become checkable once their last vertex in `order` is mapped
    let pos: HashMap<VertexId, usize> = order.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mut ready: Vec<Vec<&Face>> = vec![Vec::new(); order.len()];
    for f in &a.facets {
        let last = f.iter().map(|v| pos[v]).max().unwrap();
        ready[last].push(f);
    }
    let mut map: HashMap<VertexId, VertexId> = HashMap::new();
    let mut used: BTreeSet<VertexId> = BTreeSet::new();

    fn search(
        k: usize,
        order: &[VertexId],
        vb: &[VertexId],
        da: &HashMap<VertexId, usize>,
        db: &HashMap<VertexId, usize>,
        ready: &[Vec<&Face>],
        target: &BTreeSet<Face>,
        map: &mut HashMap<VertexId, VertexId>,
        used: &mut BTreeSet<VertexId>,
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let v = order[k];
        for &w in vb {
            if used.contains(&w) || da[&v] != db[&w] {
                continue;
            }
            map.insert(v, w);
            used.insert(w);
            let ok = ready[k].iter().all(|f| {
                let mut img: Face = f.iter().map(|x| map[x]).collect();
                img.sort();
                target.contains(&img)
            });
            if ok && search(k + 1, order, vb, da, db, ready, target, map, used) {
                return true;
            }
            map.remove(&v);
            used.remove(&w);
        }
        false
    }

    if search(0, &order, &vb, &da, &db, &ready, &target, &mut map, &mut used) {
        Some(map.into_iter().collect())
    } else {
        None
    }
}

/// An order-`p` permutation of the vertex set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryAction {
    order: u32,
    perm: BTreeMap<VertexId, VertexId>,
}

impl SymmetryAction {
    pub fn new(order: u32, perm: BTreeMap<VertexId, VertexId>) -> Result<Self> {
        if order < 2 {
            return Err(Error::param("action order must be at least 2"));
        }
        let images: BTreeSet<VertexId> = perm.values().copied().collect();
        if images.len() != perm.len() || images.iter().any(|v| !perm.contains_key(v)) {
            return Err(Error::input("action is not a permutation of the vertex set"));
        }
        let action = Self { order, perm };
        for &v in action.perm.keys() {
            if action.apply(v, order) != v {
                return Err(Error::input(format!(
                    "permutation^{order} does not fix vertex {v}"
                )));
            }
        }
        Ok(action)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn perm(&self) -> &BTreeMap<VertexId, VertexId> {
        &self.perm
    }

    /// Applies the generator `s` times.
    pub fn apply(&self, v: VertexId, s: u32) -> VertexId {
        (0..s % self.order.max(1) + if s != 0 && s.is_multiple_of(self.order) { self.order } else { 0 })
            .fold(v, |w, _| self.perm[&w])
    }

    pub fn apply_face(&self, face: &[VertexId], s: u32) -> Face {
        let mut img: Face = face.iter().map(|&v| self.apply(v, s)).collect();
        img.sort();
        img
    }

    /// `v, g·v, …, g^{p-1}·v`.
    pub fn orbit(&self, v: VertexId) -> Vec<VertexId> {
        let mut out = Vec::with_capacity(self.order as usize);
        let mut w = v;
        for _ in 0..self.order {
            out.push(w);
            w = self.perm[&w];
        }
        out
    }
}

/// A simplicial sphere with a free `Z/p`-action and a unit-sphere
/// realization.
#[derive(Clone, Debug)]
pub struct SymmetricComplex {
    complex: SimplicialComplex,
    action: SymmetryAction,
    coords: BTreeMap<VertexId, Vec<f64>>,
    generator: Mat,
    carriers: Option<BTreeMap<VertexId, Face>>,
}

impl SymmetricComplex {
    /// Assembles a symmetric complex, recovering the geometric action from
    /// the realization: `-I` for `p = 2`, a least-squares fit otherwise.
    pub fn new(
        complex: SimplicialComplex,
        action: SymmetryAction,
        coords: BTreeMap<VertexId, Vec<f64>>,
    ) -> Result<Self> {
        let m = coords
            .values()
            .next()
            .map(Vec::len)
            .ok_or_else(|| Error::input("no coordinates"))?;
        let generator = if action.order() == 2 {
            Mat::neg_identity(m)
        } else {
            let keys: Vec<VertexId> = coords.keys().copied().collect();
            let xs: Vec<Vec<f64>> = keys.iter().map(|v| coords[v].clone()).collect();
            let ys: Vec<Vec<f64>> = keys
                .iter()
                .map(|v| coords[&action.apply(*v, 1)].clone())
                .collect();
            Mat::fit(&xs, &ys)
                .ok_or_else(|| Error::input("vertex coordinates do not span the ambient space"))?
        };
        Self::with_generator(complex, action, coords, generator)
    }

    pub fn with_generator(
        complex: SimplicialComplex,
        action: SymmetryAction,
        coords: BTreeMap<VertexId, Vec<f64>>,
        generator: Mat,
    ) -> Result<Self> {
        let sc = Self {
            complex,
            action,
            coords,
            generator,
            carriers: None,
        };
        sc.check_structure()?;
        Ok(sc)
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn action(&self) -> &SymmetryAction {
        &self.action
    }

    pub fn order(&self) -> u32 {
        self.action.order
    }

    pub fn coords(&self) -> &BTreeMap<VertexId, Vec<f64>> {
        &self.coords
    }

    pub fn coord(&self, v: VertexId) -> &[f64] {
        &self.coords[&v]
    }

    pub fn generator(&self) -> &Mat {
        &self.generator
    }

    pub fn ambient_dim(&self) -> usize {
        self.generator.n
    }

    /// Dimension of the sphere realized (facet size minus one).
    pub fn dimension(&self) -> usize {
        self.complex.dimension()
    }

    /// For a complex produced by [`SymmetricComplex::barycentric_subdivide`]:
    /// the face of the coarser complex each vertex subdivides.
    pub fn carriers(&self) -> Option<&BTreeMap<VertexId, Face>> {
        self.carriers.as_ref()
    }

    /// Dimension of the coarse face a vertex subdivides, when known.
    pub fn carrier_dim(&self, v: VertexId) -> Option<usize> {
        self.carriers.as_ref().map(|c| c[&v].len() - 1)
    }

    /// Applies `g^s` to a point of the ambient space.
    pub fn act_point(&self, x: &[f64], s: u32) -> Vec<f64> {
        let s = s % self.order();
        if self.generator.is_neg_identity() {
            return if s % 2 == 1 { linalg::neg(x) } else { x.to_vec() };
        }
        (0..s).fold(x.to_vec(), |y, _| self.generator.apply(&y))
    }

    fn check_structure(&self) -> Result<()> {
        let verts = self.complex.vertices();
        if verts.len() != self.action.perm.len()
            || verts.iter().any(|v| !self.action.perm.contains_key(v))
        {
            return Err(Error::input("action must permute exactly the vertex set"));
        }
        if verts.iter().any(|v| !self.coords.contains_key(v)) {
            return Err(Error::input("missing vertex coordinates"));
        }
        let m = self.generator.n;
        for (v, c) in &self.coords {
            if c.len() != m {
                return Err(Error::input(format!("coordinate length mismatch at {v}")));
            }
            if (linalg::norm(c) - 1.0).abs() > 1e-9 {
                return Err(Error::input(format!("coordinates of {v} are not unit length")));
            }
        }
        Ok(())
    }

    /// Checks every structural invariant: the permutation maps facets to
    /// facets, the realization is equivariant, and the action is free (no
    /// vertex fixed, no face containing a full orbit).
    pub fn check_invariants(&self) -> Result<()> {
        self.check_structure()?;
        let facets: BTreeSet<&Face> = self.complex.facets.iter().collect();
        for f in &self.complex.facets {
            if !facets.contains(&self.action.apply_face(f, 1)) {
                return Err(Error::input(format!("action does not map facet {f:?} to a facet")));
            }
        }
        for (v, c) in &self.coords {
            let image = self.act_point(c, 1);
            let expected = &self.coords[&self.action.apply(*v, 1)];
            if linalg::dist(&image, expected) > 1e-9 {
                return Err(Error::input(format!("realization is not equivariant at {v}")));
            }
        }
        self.check_free()
    }

    /// Freeness on vertices and face stabilizers.
    pub fn check_free(&self) -> Result<()> {
        for &v in self.action.perm.keys() {
            if self.action.apply(v, 1) == v {
                return Err(Error::input(format!("vertex {v} is fixed by the action")));
            }
        }
        for f in &self.complex.facets {
            for &v in f {
                if self
                    .action
                    .orbit(v)
                    .iter()
                    .all(|w| f.binary_search(w).is_ok())
                {
                    return Err(Error::input(format!(
                        "facet {f:?} contains the full orbit of {v}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Normalized convex combination of the vertex coordinates of `face`.
    pub fn realize_point(&self, face: &[VertexId], weights: &[f64]) -> Result<Vec<f64>> {
        if face.len() != weights.len() || face.is_empty() {
            return Err(Error::param("face and weights differ in length"));
        }
        if weights.iter().any(|w| *w < 0.0 || !w.is_finite()) {
            return Err(Error::param("weights must be nonnegative"));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::param("weights must sum to one"));
        }
        if !self.complex.contains_face(face) {
            return Err(Error::param(format!("{face:?} is not a face")));
        }
        let mut acc = vec![0.0; self.ambient_dim()];
        for (v, w) in face.iter().zip(weights) {
            for (a, c) in acc.iter_mut().zip(&self.coords[v]) {
                *a += w * c;
            }
        }
        linalg::normalized(&acc).ok_or_else(|| Error::DegenerateRealization(face.to_vec()))
    }

    /// Barycenter of a face, pushed to the sphere.
    pub fn barycenter(&self, face: &[VertexId]) -> Option<Vec<f64>> {
        barycenter_of(face.iter().map(|v| self.coords[v].as_slice()))
    }

    /// Largest pairwise distance between the realized vertices of a face.
    pub fn face_diameter(&self, face: &[VertexId]) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..face.len() {
            for j in i + 1..face.len() {
                d = d.max(linalg::dist(&self.coords[&face[i]], &self.coords[&face[j]]));
            }
        }
        d
    }

    pub fn mesh_size(&self) -> f64 {
        self.complex
            .facets
            .iter()
            .map(|f| self.face_diameter(f))
            .fold(0.0, f64::max)
    }

    /// Barycentric subdivision with the action lifted facewise and new
    /// vertices placed at normalized barycenters.
    pub fn barycentric_subdivide(&self) -> SymmetricComplex {
        let (complex, carriers) = self.complex.barycentric_subdivision();
        let id_of: HashMap<&Face, VertexId> = carriers.iter().map(|(v, f)| (f, *v)).collect();
        let mut perm = BTreeMap::new();
        let mut coords = BTreeMap::new();
        for (v, face) in &carriers {
            let image = self.action.apply_face(face, 1);
            perm.insert(*v, id_of[&image]);
            let c = if face.len() == 1 {
                self.coords[&face[0]].clone()
            } else {
                self.barycenter(face).expect("barycenter of a face vanished")
            };
            coords.insert(*v, c);
        }
        SymmetricComplex {
            complex,
            action: SymmetryAction {
                order: self.action.order,
                perm,
            },
            coords,
            generator: self.generator.clone(),
            carriers: Some(carriers),
        }
    }

    /// Repeated barycentric subdivision, capped at `max_depth`.
    pub fn subdivide_times(&self, times: usize, max_depth: usize) -> Result<SymmetricComplex> {
        if times > max_depth {
            return Err(Error::param(format!(
                "subdivision depth {times} exceeds cap {max_depth}"
            )));
        }
        let mut sc = self.clone();
        for _ in 0..times {
            sc = sc.barycentric_subdivide();
        }
        Ok(sc)
    }

    /// Local barycentric refinement: every face of the selected facets (and
    /// of their orbit images) is stellarly subdivided, largest faces first.
    /// Neighbouring facets are split along the shared faces, so the result
    /// stays a symmetric triangulation of the same sphere.
    pub fn refine_facets(&self, selected: &[Face]) -> SymmetricComplex {
        let p = self.order();
        let mut closed: BTreeSet<Face> = BTreeSet::new();
        for f in selected {
            for s in 0..p {
                closed.insert(self.action.apply_face(f, s));
            }
        }
        // Splitting every face spanned by the closure's vertices keeps
        // same-size splits disjoint, so the result does not depend on order
        // and stays equivariant.
        let span: BTreeSet<VertexId> = closed.iter().flatten().copied().collect();
        let mut to_split: BTreeSet<Face> = BTreeSet::new();
        for f in &self.complex.facets {
            let inside: Face = f.iter().copied().filter(|v| span.contains(v)).collect();
            for_each_subset(&inside, |s| {
                if s.len() >= 2 {
                    to_split.insert(s.to_vec());
                }
            });
        }
        let mut order: Vec<Face> = to_split.into_iter().collect();
        order.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));

        let mut facets: Vec<Option<Face>> =
            self.complex.facets.iter().cloned().map(Some).collect();
        let mut incidence: HashMap<VertexId, Vec<usize>> = HashMap::new();
        for (i, f) in facets.iter().enumerate() {
            for v in f.as_ref().unwrap() {
                incidence.entry(*v).or_default().push(i);
            }
        }
        let mut coords = self.coords.clone();
        let mut next = coords.keys().last().map_or(0, |v| v.0) + 1;
        let mut new_id: HashMap<Face, VertexId> = HashMap::new();

        for face in &order {
            let w = VertexId(next);
            next += 1;
            coords.insert(
                w,
                barycenter_of(face.iter().map(|v| coords[v].as_slice()))
                    .expect("barycenter of a face vanished"),
            );
            new_id.insert(face.clone(), w);
            let hits: Vec<usize> = incidence[&face[0]]
                .iter()
                .copied()
                .filter(|&i| {
                    facets[i]
                        .as_ref()
                        .is_some_and(|f| is_subset(face, f))
                })
                .collect();
            for i in hits {
                let old = facets[i].take().unwrap();
                for v in face {
                    let mut nf: Face = old.iter().copied().filter(|x| x != v).collect();
                    nf.push(w);
                    nf.sort();
                    let idx = facets.len();
                    for x in &nf {
                        incidence.entry(*x).or_default().push(idx);
                    }
                    facets.push(Some(nf));
                }
            }
        }
        let mut perm = self.action.perm.clone();
        for (face, w) in &new_id {
            perm.insert(*w, new_id[&self.action.apply_face(face, 1)]);
        }
        SymmetricComplex {
            complex: SimplicialComplex::from_sorted(facets.into_iter().flatten().collect()),
            action: SymmetryAction {
                order: p,
                perm,
            },
            coords,
            generator: self.generator.clone(),
            carriers: None,
        }
    }

    /// Orbit representative: the vertex whose coordinate vector is
    /// lexicographically smallest.
    pub fn orbit_representative(&self, v: VertexId) -> (VertexId, u32) {
        let orbit = self.action.orbit(v);
        let (k, rep) = orbit
            .iter()
            .enumerate()
            .min_by(|a, b| lex_cmp(&self.coords[a.1], &self.coords[b.1]))
            .unwrap();
        // v = g^{p-k} · rep
        let p = self.order();
        (*rep, (p - k as u32) % p)
    }

    pub fn to_json(&self) -> ComplexJson {
        ComplexJson {
            vertices: self.complex.vertices().iter().map(|v| v.0).collect(),
            facets: self
                .complex
                .facets
                .iter()
                .map(|f| f.iter().map(|v| v.0).collect())
                .collect(),
            action: ActionJson {
                p: self.order(),
                perm: self
                    .action
                    .perm
                    .iter()
                    .map(|(a, b)| (a.0.to_string(), b.0))
                    .collect(),
            },
            coords: self
                .coords
                .iter()
                .map(|(v, c)| (v.0.to_string(), c.clone()))
                .collect(),
        }
    }

    pub fn from_json(json: &ComplexJson) -> Result<Self> {
        let complex = SimplicialComplex::new(
            json.facets
                .iter()
                .map(|f| f.iter().map(|&v| VertexId(v)).collect())
                .collect(),
        )?;
        let declared: BTreeSet<i64> = json.vertices.iter().copied().collect();
        let used: BTreeSet<i64> = complex.vertices().iter().map(|v| v.0).collect();
        if declared != used {
            return Err(Error::input("vertex list does not match the facets"));
        }
        let parse = |k: &str| -> Result<VertexId> {
            k.parse::<i64>()
                .map(VertexId)
                .map_err(|_| Error::input(format!("vertex key {k:?} is not an integer")))
        };
        let mut perm = BTreeMap::new();
        for (k, v) in &json.action.perm {
            perm.insert(parse(k)?, VertexId(*v));
        }
        let mut coords = BTreeMap::new();
        for (k, c) in &json.coords {
            coords.insert(parse(k)?, c.clone());
        }
        let action = SymmetryAction::new(json.action.p, perm)?;
        Self::new(complex, action, coords)
    }
}

/// Wire form of a symmetric complex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub vertices: Vec<i64>,
    pub facets: Vec<Vec<i64>>,
    pub action: ActionJson,
    pub coords: BTreeMap<String, Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActionJson {
    pub p: u32,
    pub perm: BTreeMap<String, i64>,
}

/// Boundary of the `k`-dimensional crosspolytope: vertices `±1..±k` at
/// `±e_i`, realizing `S^{k-1}` with the antipodal action.
pub fn crosspolytope(k: usize) -> Result<SymmetricComplex> {
    if k < 1 {
        return Err(Error::param("crosspolytope needs k >= 1"));
    }
    if k > DEFAULT_MAX_DIM + 1 {
        return Err(Error::param(format!(
            "crosspolytope dimension {k} exceeds cap {}",
            DEFAULT_MAX_DIM + 1
        )));
    }
    let mut facets = Vec::with_capacity(1 << k);
    for mask in 0..(1u32 << k) {
        let mut f: Face = (0..k)
            .map(|i| {
                let v = i as i64 + 1;
                VertexId(if mask & (1 << i) != 0 { -v } else { v })
            })
            .collect();
        f.sort();
        facets.push(f);
    }
    let mut perm = BTreeMap::new();
    let mut coords = BTreeMap::new();
    for i in 1..=k as i64 {
        for s in [1i64, -1] {
            perm.insert(VertexId(s * i), VertexId(-s * i));
            let mut c = vec![0.0; k];
            c[(i - 1) as usize] = s as f64;
            coords.insert(VertexId(s * i), c);
        }
    }
    Ok(SymmetricComplex {
        complex: SimplicialComplex::from_sorted(facets),
        action: SymmetryAction { order: 2, perm },
        coords,
        generator: Mat::neg_identity(k),
        carriers: None,
    })
}

pub fn is_prime(p: u32) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Vertex id of block `j` (0-based) and shift `t` in [`zp_join_sphere`].
pub fn zp_vertex(p: u32, block: usize, shift: u32) -> VertexId {
    VertexId(block as i64 * p as i64 + shift as i64)
}

/// Inverse of [`zp_vertex`].
pub fn zp_block_shift(p: u32, v: VertexId) -> (usize, u32) {
    ((v.0 / p as i64) as usize, (v.0 % p as i64) as u32)
}

/// The `d`-fold join of the boundary of the `(p-1)`-simplex, a sphere of
/// dimension `(p-1)d - 1` with the free cyclic action `(j,t) ↦ (j,t+1)`.
/// Each block is realized as a regular simplex in its own `(p-1)`-plane,
/// on which the shift acts by rotation.
pub fn zp_join_sphere(p: u32, d: usize) -> Result<SymmetricComplex> {
    if !is_prime(p) {
        return Err(Error::param(format!("{p} is not prime")));
    }
    if d < 1 {
        return Err(Error::param("zp_join_sphere needs d >= 1"));
    }
    let block = (p - 1) as usize;
    let m = block * d;
    if m > DEFAULT_MAX_DIM + 1 {
        return Err(Error::param(format!(
            "sphere dimension {} exceeds cap {DEFAULT_MAX_DIM}",
            m - 1
        )));
    }
    let (simplex, rot) = regular_simplex_block(p);
    let count = (p as u64).pow(d as u32);
    let mut facets = Vec::with_capacity(count as usize);
    for code in 0..count {
        let mut c = code;
        let mut f = Vec::with_capacity(m);
        for j in 0..d {
            let omit = (c % p as u64) as u32;
            c /= p as u64;
            f.extend((0..p).filter(|&t| t != omit).map(|t| zp_vertex(p, j, t)));
        }
        f.sort();
        facets.push(f);
    }
    let mut perm = BTreeMap::new();
    let mut coords = BTreeMap::new();
    for j in 0..d {
        for t in 0..p {
            perm.insert(zp_vertex(p, j, t), zp_vertex(p, j, (t + 1) % p));
            let mut c = vec![0.0; m];
            c[j * block..(j + 1) * block].copy_from_slice(&simplex[t as usize]);
            coords.insert(zp_vertex(p, j, t), c);
        }
    }
    let generator = if p == 2 {
        Mat::neg_identity(m)
    } else {
        let mut g = Mat { n: m, data: vec![0.0; m * m] };
        for j in 0..d {
            for a in 0..block {
                for b in 0..block {
                    g.data[(j * block + a) * m + j * block + b] = rot.get(a, b);
                }
            }
        }
        g
    };
    Ok(SymmetricComplex {
        complex: SimplicialComplex::from_sorted(facets),
        action: SymmetryAction { order: p, perm },
        coords,
        generator,
        carriers: None,
    })
}

/// Unit vertices of a regular `(p-1)`-simplex centred at the origin of
/// `R^{p-1}`, with vertex 0 on the first axis, plus the rotation taking
/// vertex `t` to vertex `t+1`.
fn regular_simplex_block(p: u32) -> (Vec<Vec<f64>>, Mat) {
    let p = p as usize;
    if p == 2 {
        return (vec![vec![1.0], vec![-1.0]], Mat::neg_identity(1));
    }
    let centred: Vec<Vec<f64>> = (0..p)
        .map(|t| {
            (0..p)
                .map(|i| if i == t { 1.0 } else { 0.0 } - 1.0 / p as f64)
                .collect()
        })
        .collect();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in centred.iter().take(p - 1) {
        let mut w = v.clone();
        for b in &basis {
            let c = linalg::dot(&w, b);
            w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
        basis.push(linalg::normalized(&w).unwrap());
    }
    let to_block = |v: &[f64]| -> Vec<f64> { basis.iter().map(|b| linalg::dot(v, b)).collect() };
    let verts: Vec<Vec<f64>> = centred
        .iter()
        .map(|v| linalg::normalized(&to_block(v)).unwrap())
        .collect();
    // rotation: R = B^T P B with P the cyclic shift e_t -> e_{t+1}
    let n = p - 1;
    let mut rot = Mat { n, data: vec![0.0; n * n] };
    for (b_col, b) in basis.iter().enumerate() {
        let shifted: Vec<f64> = (0..p).map(|i| b[(i + p - 1) % p]).collect();
        let img = to_block(&shifted);
        for a in 0..n {
            rot.data[a * n + b_col] = img[a];
        }
    }
    (verts, rot)
}

pub(crate) fn barycenter_of<'a>(points: impl Iterator<Item = &'a [f64]>) -> Option<Vec<f64>> {
    let mut acc: Vec<f64> = Vec::new();
    let mut count = 0usize;
    for p in points {
        if acc.is_empty() {
            acc = vec![0.0; p.len()];
        }
        acc.iter_mut().zip(p).for_each(|(a, x)| *a += x);
        count += 1;
    }
    if count == 0 {
        return None;
    }
    acc.iter_mut().for_each(|a| *a /= count as f64);
    linalg::normalized(&acc)
}

fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y) {
            Some(std::cmp::Ordering::Equal) | None => continue,
            Some(o) => return o,
        }
    }
    std::cmp::Ordering::Equal
}

pub(crate) fn is_subset(small: &[VertexId], big: &[VertexId]) -> bool {
    small.iter().all(|v| big.binary_search(v).is_ok())
}

/// Calls `f` on every nonempty subset of a sorted slice (subsets stay sorted).
pub(crate) fn for_each_subset(items: &[VertexId], mut f: impl FnMut(&[VertexId])) {
    let n = items.len();
    let mut buf = Vec::with_capacity(n);
    for mask in 1u64..(1u64 << n) {
        buf.clear();
        buf.extend((0..n).filter(|i| mask & (1 << i) != 0).map(|i| items[i]));
        f(&buf);
    }
}

pub(crate) fn for_each_permutation<T: Clone>(items: &[T], mut f: impl FnMut(&[T])) {
    let mut a = items.to_vec();
    let n = a.len();
    let mut c = vec![0usize; n];
    f(&a);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            f(&a);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(v: &[i64]) -> Face {
        v.iter().map(|&x| VertexId(x)).collect()
    }

    #[test]
    fn crosspolytope_counts() {
        let s0 = crosspolytope(1).unwrap();
        assert_eq!(s0.complex().vertices().len(), 2);
        assert_eq!(s0.complex().facets().len(), 2);
        let sq = crosspolytope(2).unwrap();
        assert_eq!(sq.complex().vertices().len(), 4);
        assert_eq!(sq.complex().facets().len(), 4);
        let oct = crosspolytope(3).unwrap();
        assert_eq!(oct.complex().vertices().len(), 6);
        assert_eq!(oct.complex().facets().len(), 8);
        assert!(oct.complex().facets().iter().all(|f| f.len() == 3));
        oct.check_invariants().unwrap();
        assert!(crosspolytope(0).is_err());
    }

    #[test]
    fn subdivision_counts() {
        let (tri, carriers) = SimplicialComplex::simplex(2).barycentric_subdivision();
        assert_eq!(tri.vertices().len(), 7);
        assert_eq!(tri.facets().len(), 6);
        assert_eq!(carriers.len(), 7);

        let sq = crosspolytope(2).unwrap().barycentric_subdivide();
        assert_eq!(sq.complex().vertices().len(), 8);
        assert_eq!(sq.complex().facets().len(), 8);

        let oct = crosspolytope(3).unwrap().barycentric_subdivide();
        assert_eq!(oct.complex().vertices().len(), 26);
        assert_eq!(oct.complex().facets().len(), 48);
        oct.check_invariants().unwrap();
        for (v, c) in oct.coords() {
            let w = oct.action().apply(*v, 1);
            for (a, b) in c.iter().zip(oct.coord(w)) {
                assert_eq!(*a, -*b);
            }
        }
    }

    #[test]
    fn subdivision_keeps_old_ids() {
        let sq = crosspolytope(2).unwrap();
        let sd = sq.barycentric_subdivide();
        for v in sq.complex().vertices() {
            assert_eq!(sd.coord(v), sq.coord(v));
            assert_eq!(sd.carrier_dim(v), Some(0));
        }
        assert!(sd.complex().vertices().iter().all(|v| v.0.abs() <= 2 || v.0 > 2));
    }

    #[test]
    fn deleted_join_small_cases() {
        let s0 = deleted_join_simplex(0, 2).unwrap();
        assert_eq!(s0.facets().len(), 2);
        assert_eq!(s0.vertices().len(), 2);
        let sq = deleted_join_simplex(1, 2).unwrap();
        assert_eq!(sq.vertices().len(), 4);
        assert_eq!(sq.facets().len(), 4);
        assert!(find_isomorphism(&sq, crosspolytope(2).unwrap().complex()).is_some());
        let oct = deleted_join_simplex(2, 2).unwrap();
        assert_eq!(oct.facets().len(), 8);
        assert!(find_isomorphism(&oct, crosspolytope(3).unwrap().complex()).is_some());
    }

    #[test]
    fn isomorphism_rejects_different_complexes() {
        let a = crosspolytope(3).unwrap();
        let b = SimplicialComplex::simplex(3);
        assert!(find_isomorphism(a.complex(), &b).is_none());
    }

    #[test]
    fn zp_join_examples() {
        let sq = zp_join_sphere(2, 2).unwrap();
        assert_eq!(sq.complex().facets().len(), 4);
        assert!(sq.generator().is_neg_identity());
        sq.check_invariants().unwrap();

        let tri = zp_join_sphere(3, 1).unwrap();
        assert_eq!(tri.complex().facets().len(), 3);
        assert!(tri.complex().facets().iter().all(|f| f.len() == 2));
        tri.check_invariants().unwrap();
        // vertex 1 sits at 120 degrees
        let c = tri.coord(zp_vertex(3, 0, 1));
        assert!((c[0] + 0.5).abs() < 1e-12 && (c[1] - 0.75f64.sqrt()).abs() < 1e-12);

        let s3 = zp_join_sphere(3, 2).unwrap();
        assert_eq!(s3.complex().facets().len(), 9);
        assert_eq!(s3.complex().vertices().len(), 6);
        assert!(s3.complex().facets().iter().all(|f| f.len() == 4));
        s3.check_invariants().unwrap();
        assert!(zp_join_sphere(4, 1).is_err());
    }

    #[test]
    fn zp_facets_miss_one_vertex_per_block() {
        for (p, d) in [(3u32, 1usize), (3, 2), (5, 1)] {
            let sc = zp_join_sphere(p, d).unwrap();
            for f in sc.complex().facets() {
                for j in 0..d {
                    let in_block = f.iter().filter(|v| zp_block_shift(p, **v).0 == j).count();
                    assert_eq!(in_block, (p - 1) as usize);
                }
                let orbit: BTreeSet<Face> =
                    (0..p).map(|s| sc.action().apply_face(f, s)).collect();
                assert_eq!(orbit.len(), p as usize);
            }
        }
    }

    #[test]
    fn realize_point_examples() {
        let sq = crosspolytope(2).unwrap();
        assert_eq!(sq.realize_point(&ids(&[1]), &[1.0]).unwrap(), vec![1.0, 0.0]);
        let x = sq.realize_point(&ids(&[1, 2]), &[0.5, 0.5]).unwrap();
        assert!((x[0] - 0.5f64.sqrt()).abs() < 1e-15 && (x[1] - 0.5f64.sqrt()).abs() < 1e-15);
        let oct = crosspolytope(3).unwrap();
        let third = 1.0 / 3.0;
        let x = oct.realize_point(&ids(&[1, 2, 3]), &[third, third, third]).unwrap();
        for c in x {
            assert!((c - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        }
        assert!(sq.realize_point(&ids(&[1, -1]), &[0.5, 0.5]).is_err());
    }

    #[test]
    fn refine_facets_is_symmetric_and_local() {
        let oct = crosspolytope(3).unwrap();
        let target = oct.complex().facets()[0].clone();
        let r = oct.refine_facets(&[target]);
        r.check_invariants().unwrap();
        assert_eq!(r.complex().euler_characteristic(), 2);
        // a facet and its antipode span every vertex of the octahedron
        assert_eq!(r.complex().facets().len(), 48);
        let r2 = r.refine_facets(&[r.complex().facets()[3].clone()]);
        r2.check_invariants().unwrap();
        assert_eq!(r2.complex().euler_characteristic(), 2);
        assert!(r2.complex().facets().len() < 2 * 48);
    }

    #[test]
    fn repeated_local_refinement_stays_equivariant() {
        for mut sc in [crosspolytope(3).unwrap(), zp_join_sphere(3, 2).unwrap()] {
            for round in 0..6 {
                let facets = sc.complex().facets();
                let sel: Vec<Face> = facets.iter().step_by(7 + round).take(5).cloned().collect();
                sc = sc.refine_facets(&sel);
                sc.check_invariants().unwrap();
                if round % 2 == 1 {
                    sc.barycentric_subdivide().check_invariants().unwrap();
                }
            }
        }
    }

    #[test]
    fn orbit_representative_is_lexicographic_minimum() {
        let sq = crosspolytope(2).unwrap();
        assert_eq!(sq.orbit_representative(VertexId(1)), (VertexId(-1), 1));
        assert_eq!(sq.orbit_representative(VertexId(-2)), (VertexId(-2), 0));
    }

    #[test]
    fn json_round_trip() {
        let sc = crosspolytope(3).unwrap().barycentric_subdivide();
        let json = serde_json::to_string(&sc.to_json()).unwrap();
        let back = SymmetricComplex::from_json(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back.to_json(), sc.to_json());

        let zp = zp_join_sphere(3, 2).unwrap();
        let back = SymmetricComplex::from_json(&zp.to_json()).unwrap();
        assert!(linalg::dist(&back.generator().data, &zp.generator().data) < 1e-12);
    }
}
