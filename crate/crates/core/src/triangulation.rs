//! Plane triangulations represented by rotation systems.
//!
//! A triangulation is stored as a per-vertex cyclic neighbor order
//! (counterclockwise convention) together with a designated outer face. Faces
//! are recovered purely combinatorially by tracing: the directed edge `(u, v)`
//! is followed by `(v, w)` where `w` is the successor of `u` in the rotation
//! at `v`. Every directed edge lies on exactly one face walk, and validation
//! requires every walk to close after three steps.
//!
//! Inside/outside classification of a cycle is combinatorial as well: faces
//! are classified by dual-graph reachability from the outer face without
//! crossing the cycle's edges, and vertices inherit the side of their incident
//! faces. No coordinates appear anywhere.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::graph::{edge, Edge, SimpleGraph};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TriangulationError {
    #[error("not a simple symmetric rotation system: {0}")]
    NotSimple(String),
    #[error("face walk {0:?} is not a triangle")]
    NonTriangularFace(Vec<usize>),
    #[error("Euler relation violated: n={n}, m={m}, f={f}")]
    EulerViolation { n: usize, m: usize, f: usize },
    #[error("graph is not 3-connected")]
    Not3Connected,
    #[error("designated outer face {0:?} is not a face")]
    OuterFaceMissing([usize; 3]),
    #[error("({0},{1}) is not an edge")]
    NotAnEdge(usize, usize),
    #[error("edge ({0},{1}) lies on a separating triangle")]
    EdgeOnSeparatingTriangle(usize, usize),
    #[error("triangulation is not 4-connected")]
    NotFourConnected,
    #[error("{0:?} is not a cycle of the triangulation")]
    NotACycle(Vec<usize>),
}

/// A cycle of length 3 or 4 with the vertex sets strictly inside and outside.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleInfo {
    /// Cyclic vertex sequence in canonical form.
    pub vertices: Vec<usize>,
    pub inside: BTreeSet<usize>,
    pub outside: BTreeSet<usize>,
}

impl CycleInfo {
    pub fn is_separating(&self) -> bool {
        !self.inside.is_empty() && !self.outside.is_empty()
    }

    /// The edges of the cycle itself.
    pub fn cycle_edges(&self) -> BTreeSet<Edge> {
        let k = self.vertices.len();
        (0..k)
            .map(|i| edge(self.vertices[i], self.vertices[(i + 1) % k]))
            .collect()
    }
}

/// Canonical form of a cyclic sequence: lexicographically smallest among all
/// rotations of both orientations.
pub fn canonical_cycle(cycle: &[usize]) -> Vec<usize> {
    let k = cycle.len();
    let mut best: Option<Vec<usize>> = None;
    let mut consider = |seq: Vec<usize>| {
        if best.as_ref().is_none_or(|b| seq < *b) {
            best = Some(seq);
        }
    };
    for dir in [false, true] {
        let base: Vec<usize> = if dir {
            cycle.iter().rev().copied().collect()
        } else {
            cycle.to_vec()
        };
        for s in 0..k {
            consider((0..k).map(|i| base[(s + i) % k]).collect());
        }
    }
    best.expect("cycle is nonempty")
}

/// A plane graph in which every bounded face is a triangle, induced by a cycle
/// of a host triangulation and the vertices inside it. Vertex ids are the
/// host's.
#[derive(Debug, Clone)]
pub struct NearTriangulation {
    pub vertices: BTreeSet<usize>,
    /// Boundary cycle in host ids.
    pub boundary: Vec<usize>,
    /// Vertices strictly inside the boundary.
    pub interior: BTreeSet<usize>,
    /// Induced edges (host ids).
    pub edges: BTreeSet<Edge>,
    /// Oriented bounded faces (host ids), inherited from the host embedding.
    pub faces: Vec<[usize; 3]>,
}

impl NearTriangulation {
    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    /// Edges not on the boundary cycle.
    pub fn interior_edges(&self) -> BTreeSet<Edge> {
        let b: BTreeSet<Edge> = (0..self.boundary.len())
            .map(|i| {
                edge(
                    self.boundary[i],
                    self.boundary[(i + 1) % self.boundary.len()],
                )
            })
            .collect();
        self.edges.difference(&b).copied().collect()
    }

    /// Wheel test for 4-cycle boundaries: one interior vertex joined to the
    /// whole boundary.
    pub fn is_wheel(&self) -> bool {
        self.boundary.len() == 4 && self.interior.len() == 1
    }

    /// The induced subgraph as a compact [`SimpleGraph`] plus the new-to-old
    /// vertex list.
    pub fn to_graph(&self) -> (SimpleGraph, Vec<usize>) {
        let order: Vec<usize> = self.vertices.iter().copied().collect();
        let index: BTreeMap<usize, usize> =
            order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut g = SimpleGraph::new(order.len());
        for &(u, v) in &self.edges {
            g.add_edge(index[&u], index[&v]).expect("induced edge");
        }
        (g, order)
    }

    /// For a triangle boundary the closed disk is itself a plane
    /// triangulation; relabel and build it. Returns the triangulation
    /// (outer face = the boundary) and the new-to-old vertex list.
    pub fn to_plane_triangulation(
        &self,
    ) -> Result<(PlaneTriangulation, Vec<usize>), TriangulationError> {
        assert_eq!(self.boundary.len(), 3, "boundary must be a triangle");
        let order: Vec<usize> = self.vertices.iter().copied().collect();
        let index: BTreeMap<usize, usize> =
            order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut faces: Vec<Vec<usize>> = self
            .faces
            .iter()
            .map(|f| f.iter().map(|v| index[v]).collect())
            .collect();
        // The outer face closes the boundary with the complementary directed
        // edges of the bounded faces.
        let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
        for f in &faces {
            for i in 0..3 {
                seen.insert((f[i], f[(i + 1) % 3]));
            }
        }
        let b: Vec<usize> = self.boundary.iter().map(|v| index[v]).collect();
        let oriented: Vec<usize> = if seen.contains(&(b[0], b[1])) {
            vec![b[0], b[2], b[1]]
        } else {
            b.clone()
        };
        faces.push(oriented.clone());
        let outer = [oriented[0], oriented[1], oriented[2]];
        let t = PlaneTriangulation::from_faces(order.len(), &faces, Some(outer))?;
        Ok((t, order))
    }
}

/// Result of contracting an edge: the new triangulation plus the bookkeeping
/// needed to name vertices stably in certificates.
#[derive(Debug, Clone)]
pub struct Contraction {
    pub result: PlaneTriangulation,
    /// Old-to-new vertex map; both endpoints map to the merged id.
    pub map: Vec<usize>,
    /// Merged vertex id in the new triangulation (= min of the endpoints).
    pub merged: usize,
    /// The two common neighbors of the contracted edge, in old ids.
    pub apexes: (usize, usize),
    /// The contracted edge, in old ids.
    pub edge: Edge,
}

/// A validated plane triangulation: rotation system, traced faces, designated
/// outer face.
#[derive(Debug, Clone)]
pub struct PlaneTriangulation {
    graph: SimpleGraph,
    rotation: Vec<Vec<usize>>,
    faces: Vec<[usize; 3]>,
    /// Face index of each directed edge.
    face_at: BTreeMap<(usize, usize), usize>,
    outer: usize,
}

fn next_in_rotation(rot: &[usize], u: usize) -> Option<usize> {
    let i = rot.iter().position(|&w| w == u)?;
    Some(rot[(i + 1) % rot.len()])
}

impl PlaneTriangulation {
    /// Validate a rotation system as a plane triangulation. This is the single
    /// entry point all constructions go through.
    pub fn from_rotation(
        rotation: Vec<Vec<usize>>,
        outer_face: Option<[usize; 3]>,
    ) -> Result<Self, TriangulationError> {
        let n = rotation.len();
        let mut graph = SimpleGraph::new(n);
        for (v, rot) in rotation.iter().enumerate() {
            let mut seen = BTreeSet::new();
            for &w in rot {
                if w >= n {
                    return Err(TriangulationError::NotSimple(format!(
                        "rotation of {v} names vertex {w} out of range"
                    )));
                }
                if w == v {
                    return Err(TriangulationError::NotSimple(format!("loop at {v}")));
                }
                if !seen.insert(w) {
                    return Err(TriangulationError::NotSimple(format!(
                        "rotation of {v} repeats neighbor {w}"
                    )));
                }
            }
        }
        for (v, rot) in rotation.iter().enumerate() {
            for &w in rot {
                if !rotation[w].contains(&v) {
                    return Err(TriangulationError::NotSimple(format!(
                        "{v} lists {w} but not conversely"
                    )));
                }
                graph.add_edge(v, w).map_err(|e| {
                    TriangulationError::NotSimple(e.to_string())
                })?;
            }
        }

        // trace all face walks
        let mut faces: Vec<[usize; 3]> = Vec::new();
        let mut face_at: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for v in 0..n {
            for &w in &rotation[v] {
                if face_at.contains_key(&(v, w)) {
                    continue;
                }
                let mut walk = vec![(v, w)];
                loop {
                    let (a, b) = *walk.last().expect("walk is nonempty");
                    let c = next_in_rotation(&rotation[b], a)
                        .expect("rotations are symmetric");
                    if (b, c) == walk[0] {
                        break;
                    }
                    walk.push((b, c));
                    if walk.len() > 3 {
                        return Err(TriangulationError::NonTriangularFace(
                            walk.iter().map(|&(a, _)| a).collect(),
                        ));
                    }
                }
                if walk.len() != 3 {
                    return Err(TriangulationError::NonTriangularFace(
                        walk.iter().map(|&(a, _)| a).collect(),
                    ));
                }
                let idx = faces.len();
                faces.push([walk[0].0, walk[1].0, walk[2].0]);
                for &de in &walk {
                    face_at.insert(de, idx);
                }
            }
        }

        let m = graph.m();
        let f = faces.len();
        if n < 4 || m != 3 * n - 6 || f != 2 * n - 4 {
            return Err(TriangulationError::EulerViolation { n, m, f });
        }
        if !graph.is_k_connected(3) {
            return Err(TriangulationError::Not3Connected);
        }

        let mut t = PlaneTriangulation {
            graph,
            rotation,
            faces,
            face_at,
            outer: 0,
        };
        t.outer = match outer_face {
            Some(tri) => t
                .find_face(&tri)
                .ok_or(TriangulationError::OuterFaceMissing(tri))?,
            None => t.default_outer(),
        };
        Ok(t)
    }

    /// Build from an oriented face list (each face a directed triangle walk;
    /// consistent orientation required).
    pub fn from_faces(
        n: usize,
        faces: &[Vec<usize>],
        outer_face: Option<[usize; 3]>,
    ) -> Result<Self, TriangulationError> {
        let rotation = rotations_from_faces(n, faces)?;
        Self::from_rotation(rotation, outer_face)
    }

    /// The face containing the directed edge `(0, first neighbor of 0)`.
    fn default_outer(&self) -> usize {
        self.face_at[&(0, self.rotation[0][0])]
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn m(&self) -> usize {
        self.graph.m()
    }

    pub fn graph(&self) -> &SimpleGraph {
        &self.graph
    }

    pub fn rotation(&self) -> &[Vec<usize>] {
        &self.rotation
    }

    /// All faces, outer included; count is `2n - 4`.
    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn outer_face(&self) -> usize {
        self.outer
    }

    pub fn face_triple(&self, idx: usize) -> [usize; 3] {
        self.faces[idx]
    }

    pub fn face_vertex_set(&self, idx: usize) -> BTreeSet<usize> {
        self.faces[idx].iter().copied().collect()
    }

    pub fn face_edges(&self, idx: usize) -> BTreeSet<Edge> {
        let f = self.faces[idx];
        BTreeSet::from([edge(f[0], f[1]), edge(f[1], f[2]), edge(f[2], f[0])])
    }

    /// Locate a face by its vertex set.
    pub fn find_face(&self, tri: &[usize; 3]) -> Option<usize> {
        let want: BTreeSet<usize> = tri.iter().copied().collect();
        if want.len() != 3 {
            return None;
        }
        (0..self.faces.len()).find(|&i| self.face_vertex_set(i) == want)
    }

    /// Re-designate the outer face.
    pub fn with_outer_face(&self, face: usize) -> PlaneTriangulation {
        assert!(face < self.faces.len());
        let mut t = self.clone();
        t.outer = face;
        t
    }

    /// The two face indices at an edge.
    pub fn faces_at_edge(&self, u: usize, v: usize) -> Result<(usize, usize), TriangulationError> {
        if !self.graph.has_edge(u, v) {
            return Err(TriangulationError::NotAnEdge(u, v));
        }
        Ok((self.face_at[&(u, v)], self.face_at[&(v, u)]))
    }

    /// Third vertices of the two faces at an edge, sorted.
    pub fn apexes(&self, u: usize, v: usize) -> Result<(usize, usize), TriangulationError> {
        let (f1, f2) = self.faces_at_edge(u, v)?;
        let third = |idx: usize| {
            self.faces[idx]
                .iter()
                .copied()
                .find(|&w| w != u && w != v)
                .expect("triangle has a third vertex")
        };
        let (a, b) = (third(f1), third(f2));
        Ok((a.min(b), a.max(b)))
    }

    /// Classify the faces of the triangulation relative to a cycle: a face is
    /// outside iff it is reachable from `outer` in the dual graph without
    /// crossing an edge of the cycle.
    fn face_sides(&self, cycle: &[usize], outer: usize) -> Vec<bool> {
        let k = cycle.len();
        let cut: BTreeSet<Edge> = (0..k)
            .map(|i| edge(cycle[i], cycle[(i + 1) % k]))
            .collect();
        let mut outside = vec![false; self.faces.len()];
        let mut stack = vec![outer];
        outside[outer] = true;
        while let Some(f) = stack.pop() {
            let tri = self.faces[f];
            for i in 0..3 {
                let (a, b) = (tri[i], tri[(i + 1) % 3]);
                if cut.contains(&edge(a, b)) {
                    continue;
                }
                let g = self.face_at[&(b, a)];
                if !outside[g] {
                    outside[g] = true;
                    stack.push(g);
                }
            }
        }
        outside
    }

    /// Cycle info (inside/outside vertex sets) relative to a given outer face.
    pub fn cycle_info_rel(
        &self,
        cycle: &[usize],
        outer: usize,
    ) -> Result<CycleInfo, TriangulationError> {
        let k = cycle.len();
        for i in 0..k {
            if !self.graph.has_edge(cycle[i], cycle[(i + 1) % k]) {
                return Err(TriangulationError::NotACycle(cycle.to_vec()));
            }
        }
        let on_cycle: BTreeSet<usize> = cycle.iter().copied().collect();
        if on_cycle.len() != k {
            return Err(TriangulationError::NotACycle(cycle.to_vec()));
        }
        let outside_face = self.face_sides(cycle, outer);
        let mut inside = BTreeSet::new();
        let mut outside = BTreeSet::new();
        for v in 0..self.n() {
            if on_cycle.contains(&v) {
                continue;
            }
            // all faces at v lie on one side
            let mut side = None;
            for (&(a, _), &f) in self.face_at.range((v, 0)..(v + 1, 0)) {
                debug_assert_eq!(a, v);
                let s = outside_face[f];
                debug_assert!(side.is_none_or(|prev| prev == s), "vertex straddles cycle");
                side = Some(s);
            }
            if side.expect("every vertex has incident faces") {
                outside.insert(v);
            } else {
                inside.insert(v);
            }
        }
        Ok(CycleInfo {
            vertices: canonical_cycle(cycle),
            inside,
            outside,
        })
    }

    pub fn cycle_info(&self, cycle: &[usize]) -> Result<CycleInfo, TriangulationError> {
        self.cycle_info_rel(cycle, self.outer)
    }

    /// All separating 3-cycles. Empty iff the triangulation is 4-connected.
    pub fn separating_triangles(&self) -> Vec<CycleInfo> {
        self.separating_triangles_rel(self.outer)
    }

    pub fn separating_triangles_rel(&self, outer: usize) -> Vec<CycleInfo> {
        let mut out = Vec::new();
        for (u, v) in self.graph.edges() {
            for &w in &self.graph.common_neighbors(u, v) {
                if w < v {
                    continue; // u < v < w canonical
                }
                let tri = [u, v, w];
                if self.find_face(&tri).is_some() {
                    continue;
                }
                let info = self
                    .cycle_info_rel(&tri, outer)
                    .expect("triangle is a cycle");
                // a non-facial triangle in a triangulation always separates
                debug_assert!(info.is_separating());
                out.push(info);
            }
        }
        out
    }

    pub fn is_four_connected(&self) -> bool {
        self.n() > 4 && self.separating_triangles().is_empty()
    }

    /// All separating 4-cycles of a 4-connected triangulation; each is
    /// chordless. Inside/outside are relative to the designated outer face.
    pub fn separating_quads(&self) -> Result<Vec<CycleInfo>, TriangulationError> {
        self.separating_quads_rel(self.outer)
    }

    pub fn separating_quads_rel(
        &self,
        outer: usize,
    ) -> Result<Vec<CycleInfo>, TriangulationError> {
        if !self.is_four_connected() {
            return Err(TriangulationError::NotFourConnected);
        }
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        for a in 0..self.n() {
            for c in a + 1..self.n() {
                let common: Vec<usize> = self
                    .graph
                    .common_neighbors(a, c)
                    .into_iter()
                    .collect();
                for (i, &b) in common.iter().enumerate() {
                    for &d in &common[i + 1..] {
                        // 4-cycle a-b-c-d; canonical form dedupes the diagonal choice
                        let key = canonical_cycle(&[a, b, c, d]);
                        if !seen.insert(key.clone()) {
                            continue;
                        }
                        let info = self.cycle_info_rel(&key, outer).expect("cycle");
                        if info.is_separating() {
                            // separating 4-cycles of a 4-connected triangulation
                            // have no chords
                            assert!(
                                !self.graph.has_edge(a, c) && !self.graph.has_edge(b, d),
                                "separating 4-cycle with a chord"
                            );
                            out.push(info);
                        }
                    }
                }
            }
        }
        out.sort_by(|x, y| x.vertices.cmp(&y.vertices));
        Ok(out)
    }

    /// Contract an edge lying on no separating 3-cycle. The merged vertex
    /// keeps the smaller id; the rotation of the merged vertex is the splice
    /// of the endpoint rotations with the duplicated apex occurrences removed
    /// (realized here by relabeling the face system).
    pub fn contract(&self, u: usize, v: usize) -> Result<Contraction, TriangulationError> {
        if !self.graph.has_edge(u, v) {
            return Err(TriangulationError::NotAnEdge(u, v));
        }
        let common = self.graph.common_neighbors(u, v);
        if common.len() != 2 {
            return Err(TriangulationError::EdgeOnSeparatingTriangle(u, v));
        }
        let mut it = common.iter();
        let apexes = (*it.next().expect("two apexes"), *it.next().expect("two apexes"));

        let keep = u.min(v);
        let drop = u.max(v);
        let map: Vec<usize> = (0..self.n())
            .map(|w| {
                let w = if w == drop { keep } else { w };
                if w > drop {
                    w - 1
                } else {
                    w
                }
            })
            .collect();

        let mut new_faces: Vec<Vec<usize>> = Vec::with_capacity(self.faces.len() - 2);
        for f in &self.faces {
            let s: BTreeSet<usize> = f.iter().copied().collect();
            if s.contains(&u) && s.contains(&v) {
                continue; // the two faces at the contracted edge vanish
            }
            new_faces.push(f.iter().map(|&w| map[w]).collect());
        }
        let outer_set = self.face_vertex_set(self.outer);
        let new_outer = if outer_set.contains(&u) && outer_set.contains(&v) {
            None
        } else {
            let mapped: Vec<usize> = outer_set.iter().map(|&w| map[w]).collect();
            Some([mapped[0], mapped[1], mapped[2]])
        };
        let result = PlaneTriangulation::from_faces(self.n() - 1, &new_faces, new_outer)?;
        Ok(Contraction {
            result,
            merged: keep,
            map,
            apexes,
            edge: (keep, drop),
        })
    }

    /// The near triangulation induced by a cycle and the vertices inside it.
    pub fn induced_near_triangulation(&self, c: &CycleInfo) -> NearTriangulation {
        let mut vertices: BTreeSet<usize> = c.vertices.iter().copied().collect();
        vertices.extend(c.inside.iter().copied());
        let mut edges = BTreeSet::new();
        for &a in &vertices {
            for &b in self.graph.neighbors(a) {
                if a < b && vertices.contains(&b) {
                    edges.insert((a, b));
                }
            }
        }
        // The bounded faces are the ones on the same side as c.inside. The
        // cycle info may have been computed relative to a different outer
        // face, so read the side off an inside vertex rather than trusting
        // the designated outer face.
        let outside_face = self.face_sides(&c.vertices, self.outer);
        let bounded_mark = match c.inside.iter().next() {
            Some(&v) => {
                let f = self
                    .faces
                    .iter()
                    .position(|f| f.contains(&v))
                    .expect("every vertex lies on a face");
                outside_face[f]
            }
            None => false,
        };
        let faces: Vec<[usize; 3]> = self
            .faces
            .iter()
            .enumerate()
            .filter(|&(i, f)| {
                outside_face[i] == bounded_mark && f.iter().all(|w| vertices.contains(w))
            })
            .map(|(_, f)| *f)
            .collect();
        let nt = NearTriangulation {
            boundary: c.vertices.clone(),
            interior: c.inside.clone(),
            vertices,
            edges,
            faces,
        };
        // triangulated disk: m = 3n - 3 - boundary length
        debug_assert_eq!(nt.edges.len(), 3 * nt.n() - 3 - nt.boundary.len());
        debug_assert_eq!(nt.faces.len(), 2 * nt.n() - 2 - nt.boundary.len());
        nt
    }
}

/// Rebuild per-vertex rotations from a consistently oriented face list.
/// Rotations start at each vertex's smallest neighbor, which makes the result
/// canonical.
pub fn rotations_from_faces(
    n: usize,
    faces: &[Vec<usize>],
) -> Result<Vec<Vec<usize>>, TriangulationError> {
    let mut succ: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); n];
    for f in faces {
        let k = f.len();
        for i in 0..k {
            let (u, v, w) = (f[i], f[(i + 1) % k], f[(i + 2) % k]);
            for x in [u, v, w] {
                if x >= n {
                    return Err(TriangulationError::NotSimple(format!(
                        "face names vertex {x} out of range"
                    )));
                }
            }
            if succ[v].insert(u, w).is_some() {
                return Err(TriangulationError::NotSimple(format!(
                    "inconsistent face orientation at vertex {v}"
                )));
            }
        }
    }
    let mut rotation = Vec::with_capacity(n);
    for (v, map) in succ.iter().enumerate() {
        if map.is_empty() {
            return Err(TriangulationError::NotSimple(format!(
                "vertex {v} lies on no face"
            )));
        }
        let start = *map.keys().next().expect("nonempty");
        let mut cyc = vec![start];
        loop {
            let &next = map.get(cyc.last().expect("nonempty")).ok_or_else(|| {
                TriangulationError::NotSimple(format!("open rotation at vertex {v}"))
            })?;
            if next == start {
                break;
            }
            cyc.push(next);
            if cyc.len() > map.len() {
                return Err(TriangulationError::NotSimple(format!(
                    "rotation at vertex {v} does not close"
                )));
            }
        }
        if cyc.len() != map.len() {
            return Err(TriangulationError::NotSimple(format!(
                "rotation at vertex {v} splits into several cycles"
            )));
        }
        rotation.push(cyc);
    }
    Ok(rotation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    #[test]
    fn tetrahedron_validates() {
        let t = generate::tetrahedron();
        assert_eq!(t.n(), 4);
        assert_eq!(t.m(), 6);
        assert_eq!(t.faces().len(), 4);
    }

    #[test]
    fn octahedron_validates() {
        let t = generate::octahedron();
        assert_eq!(t.n(), 6);
        assert_eq!(t.m(), 12);
        assert_eq!(t.faces().len(), 8);
        assert!(t.is_four_connected());
    }

    #[test]
    fn icosahedron_validates() {
        let t = generate::icosahedron();
        assert_eq!(t.n(), 12);
        assert_eq!(t.m(), 30);
        assert_eq!(t.faces().len(), 20);
        assert!(t.is_four_connected());
    }

    #[test]
    fn corrupted_rotation_is_rejected() {
        let t = generate::octahedron();
        let mut rot: Vec<Vec<usize>> = t.rotation().to_vec();
        rot[0].swap(0, 1);
        let err = PlaneTriangulation::from_rotation(rot, None).unwrap_err();
        assert!(matches!(err, TriangulationError::NonTriangularFace(_)));
    }

    #[test]
    fn octahedron_has_no_separating_triangles() {
        let t = generate::octahedron();
        assert!(t.separating_triangles().is_empty());
    }

    #[test]
    fn stacked_has_glue_triangle() {
        let t = generate::stacked(5);
        let seps = t.separating_triangles();
        assert_eq!(seps.len(), 1);
        assert_eq!(seps[0].inside.len() + seps[0].outside.len(), 2);
        assert!(!t.graph().is_k_connected(4));
    }

    #[test]
    fn icosahedron_has_no_separating_triangles_brute() {
        let t = generate::icosahedron();
        assert!(t.separating_triangles().is_empty());
        assert!(t.graph().is_k_connected(4));
    }

    #[test]
    fn octahedron_equators() {
        let t = generate::octahedron();
        let quads = t.separating_quads().unwrap();
        assert_eq!(quads.len(), 3);
        // every edge lies on exactly one equator
        let mut count: BTreeMap<Edge, usize> = BTreeMap::new();
        for q in &quads {
            for e in q.cycle_edges() {
                *count.entry(e).or_insert(0) += 1;
            }
        }
        assert_eq!(count.len(), 12);
        assert!(count.values().all(|&c| c == 1));
    }

    #[test]
    fn icosahedron_has_no_separating_quads() {
        let t = generate::icosahedron();
        assert!(t.separating_quads().unwrap().is_empty());
    }

    #[test]
    fn seven_vertex_four_connected_has_quads() {
        let t = generate::double_wheel(5);
        assert_eq!(t.n(), 7);
        assert!(t.is_four_connected());
        let quads = t.separating_quads().unwrap();
        assert_eq!(quads.len(), 5);
    }

    #[test]
    fn contract_octahedron_gives_double_wheel() {
        let t = generate::octahedron();
        for (u, v) in t.graph().edges() {
            let c = t.contract(u, v).unwrap();
            assert_eq!(c.result.n(), 5);
            assert_eq!(c.result.m(), 9);
            // K5 minus one edge: degree sequence 3,3,4,4,4
            let mut degs: Vec<usize> =
                (0..5).map(|w| c.result.graph().degree(w)).collect();
            degs.sort_unstable();
            assert_eq!(degs, vec![3, 3, 4, 4, 4]);
        }
    }

    #[test]
    fn contract_icosahedron_edge_counts() {
        let t = generate::icosahedron();
        let (u, v) = t.graph().edges()[0];
        let c = t.contract(u, v).unwrap();
        assert_eq!(c.result.n(), 11);
        assert_eq!(c.result.m(), 27);
    }

    #[test]
    fn contract_rejects_separating_triangle_edge() {
        let t = generate::stacked(5);
        let sep = &t.separating_triangles()[0];
        let verts = &sep.vertices;
        let err = t.contract(verts[0], verts[1]).unwrap_err();
        assert_eq!(
            err,
            TriangulationError::EdgeOnSeparatingTriangle(verts[0].min(verts[1]), verts[0].max(verts[1]))
        );
    }

    #[test]
    fn near_triangulation_of_equator_is_wheel() {
        let t = generate::octahedron();
        let quads = t.separating_quads().unwrap();
        let q = &quads[0];
        // pick the smaller side as inside by re-reading the cycle info
        let nt = t.induced_near_triangulation(q);
        assert_eq!(nt.n(), 5);
        assert!(nt.is_wheel());
        assert_eq!(nt.edges.len(), 8);
    }

    #[test]
    fn near_triangulation_of_glue_triangle_is_k4() {
        let t = generate::stacked(5);
        let sep = &t.separating_triangles()[0];
        let nt = t.induced_near_triangulation(sep);
        assert_eq!(nt.n(), 4);
        assert_eq!(nt.edges.len(), 6);
        let (pt, _) = nt.to_plane_triangulation().unwrap();
        assert_eq!(pt.n(), 4);
    }

    #[test]
    fn face_triangle_has_empty_inside() {
        let t = generate::octahedron();
        let f = t.face_triple(1);
        let info = t.cycle_info(&f).unwrap();
        assert!(info.inside.is_empty() || info.outside.is_empty());
        assert!(!info.is_separating());
        let nt = t.induced_near_triangulation(&CycleInfo {
            vertices: canonical_cycle(&f),
            inside: BTreeSet::new(),
            outside: (0..6).filter(|v| !f.contains(v)).collect(),
        });
        assert_eq!(nt.n(), 3);
        assert!(nt.interior.is_empty());
    }

    #[test]
    fn connectivity_predicate_examples() {
        assert!(generate::octahedron().graph().is_k_connected(4));
        assert!(!generate::stacked(5).graph().is_k_connected(4));
        assert!(SimpleGraph::complete(5).is_k_connected(4));
    }
}
