//! Rigidity matrices and infinitesimal-rigidity tests over exact fields,
//! plus the realization operations: vertex splitting, 1-extension, gluing.
//!
//! Generic configurations are emulated by random field elements; a rank
//! computed at a random configuration only ever undershoots the generic rank,
//! so taking the maximum over independent trials gives the generic value with
//! failure probability bounded by the usual polynomial-identity argument.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::exact_linalg::{Matrix, RandomSource, Scalar};
use crate::graph::{Edge, SimpleGraph};

/// Bounded retries for all randomized constructions. Generic placement
/// succeeds, so exhausting this signals a bug or a false precondition.
pub const MAX_ATTEMPTS: usize = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RigidityError {
    #[error("invalid vertex split: {0}")]
    InvalidSplit(String),
    #[error("points violate the general-position requirement")]
    GeneralPositionViolated,
    #[error("randomized construction failed {MAX_ATTEMPTS} times")]
    MaxAttemptsExceeded,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

/// A graph plus a configuration of its vertices in `F^d`.
#[derive(Debug, Clone)]
pub struct Framework<S> {
    pub graph: SimpleGraph,
    pub d: usize,
    /// Vertex coordinates, `d` entries per vertex.
    pub config: Vec<S>,
}

impl<S: Scalar> Framework<S> {
    pub fn new(graph: SimpleGraph, d: usize, config: Vec<S>) -> Self {
        assert_eq!(config.len(), graph.n() * d, "configuration length mismatch");
        Framework { graph, d, config }
    }

    pub fn random(graph: SimpleGraph, d: usize, rng: &mut RandomSource) -> Self {
        let config = crate::exact_linalg::random_config(graph.n(), d, rng);
        Framework { graph, d, config }
    }

    /// Coordinates of one vertex.
    pub fn point(&self, v: usize) -> &[S] {
        &self.config[v * self.d..(v + 1) * self.d]
    }

    pub fn set_point(&mut self, v: usize, p: &[S]) {
        assert_eq!(p.len(), self.d);
        self.config[v * self.d..(v + 1) * self.d].clone_from_slice(p);
    }

    /// Compact the framework onto a vertex subset; returns the restriction
    /// and the new-to-old vertex list.
    pub fn restrict(&self, verts: &BTreeSet<usize>) -> (Framework<S>, Vec<usize>) {
        let (g, order) = self.graph.induced(verts);
        let mut config = Vec::with_capacity(order.len() * self.d);
        for &v in &order {
            config.extend_from_slice(self.point(v));
        }
        (Framework::new(g, self.d, config), order)
    }
}

fn choose2(k: usize) -> usize {
    k * (k - 1) / 2
}

/// Maximal achievable rigidity-matrix rank:
/// `min(d n - C(d+1, 2), C(n, 2))`, clamped at zero.
pub fn max_rank(n: usize, d: usize) -> usize {
    let a = (d * n) as i64 - choose2(d + 1) as i64;
    let b = choose2(n) as i64;
    a.min(b).max(0) as usize
}

/// The Jacobian of the squared-edge-length map, up to the scalar 2: one row
/// per edge, with `p(u) - p(v)` in `u`'s column block and the negation in
/// `v`'s.
pub fn rigidity_matrix<S: Scalar>(fw: &Framework<S>) -> Matrix<S> {
    let d = fw.d;
    let n = fw.graph.n();
    let edges = fw.graph.edges();
    let mut m = Matrix::zero(edges.len(), d * n);
    for (row, &(u, v)) in edges.iter().enumerate() {
        for k in 0..d {
            let diff = fw.point(u)[k].clone() - fw.point(v)[k].clone();
            m.set(row, u * d + k, diff.clone());
            m.set(row, v * d + k, -diff);
        }
    }
    m
}

pub fn is_inf_rigid<S: Scalar>(fw: &Framework<S>) -> bool {
    rigidity_matrix(fw).rank() == max_rank(fw.graph.n(), fw.d)
}

/// Maximum rigidity-matrix rank over `trials` random configurations.
pub fn generic_rank<S: Scalar>(
    g: &SimpleGraph,
    d: usize,
    rng: &mut RandomSource,
    trials: usize,
) -> usize {
    (0..trials.max(1))
        .map(|_| rigidity_matrix(&Framework::<S>::random(g.clone(), d, rng)).rank())
        .max()
        .expect("at least one trial")
}

/// The coincident vertex pair of a coincident realization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoincidentSpec {
    pub u: usize,
    pub v: usize,
}

impl CoincidentSpec {
    pub fn new(u: usize, v: usize) -> Self {
        assert_ne!(u, v);
        CoincidentSpec { u, v }
    }
}

/// A random configuration with `p(v) = p(u)`. If `uv` is an edge its row is
/// identically zero and stays in the matrix.
pub fn coincident_config<S: Scalar>(
    n: usize,
    d: usize,
    spec: CoincidentSpec,
    rng: &mut RandomSource,
) -> Vec<S> {
    let mut config: Vec<S> = crate::exact_linalg::random_config(n, d, rng);
    for k in 0..d {
        config[spec.v * d + k] = config[spec.u * d + k].clone();
    }
    config
}

/// Maximum rigidity-matrix rank over `trials` random `uv`-coincident
/// configurations.
pub fn coincident_rank<S: Scalar>(
    g: &SimpleGraph,
    spec: CoincidentSpec,
    d: usize,
    rng: &mut RandomSource,
    trials: usize,
) -> usize {
    (0..trials.max(1))
        .map(|_| {
            let config = coincident_config::<S>(g.n(), d, spec, rng);
            rigidity_matrix(&Framework::new(g.clone(), d, config)).rank()
        })
        .max()
        .expect("at least one trial")
}

/// Does the graph have an infinitesimally rigid realization with `u` and `v`
/// coincident? Decided by rank maximization over random coincident
/// configurations.
pub fn is_coincident_inf_rigid<S: Scalar>(
    g: &SimpleGraph,
    spec: CoincidentSpec,
    d: usize,
    rng: &mut RandomSource,
    trials: usize,
) -> bool {
    coincident_rank::<S>(g, spec, d, rng, trials) == max_rank(g.n(), d)
}

/// Description of a vertex split: `v` is replaced by `v' = v` (adjacent to
/// `side1`) and a new vertex `v''` (adjacent to `side2`), with the edge
/// `v'v''` added. The sides must cover `N(v)` and overlap in exactly `d - 1`
/// vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSplit {
    pub v: usize,
    pub side1: BTreeSet<usize>,
    pub side2: BTreeSet<usize>,
}

impl VertexSplit {
    pub fn shared(&self) -> BTreeSet<usize> {
        self.side1.intersection(&self.side2).copied().collect()
    }

    pub fn validate(&self, g: &SimpleGraph, d: usize) -> Result<(), RigidityError> {
        if self.v >= g.n() {
            return Err(RigidityError::InvalidSplit(format!(
                "split vertex {} out of range",
                self.v
            )));
        }
        let union: BTreeSet<usize> = self.side1.union(&self.side2).copied().collect();
        if union != *g.neighbors(self.v) {
            return Err(RigidityError::InvalidSplit(
                "side sets must cover exactly the neighborhood of v".into(),
            ));
        }
        if self.shared().len() != d - 1 {
            return Err(RigidityError::InvalidSplit(format!(
                "|side1 ∩ side2| = {}, need d - 1 = {}",
                self.shared().len(),
                d - 1
            )));
        }
        Ok(())
    }
}

/// Apply a vertex split; the new vertex gets id `n`. Contracting `v v''` in
/// the result (simplifying parallel edges) recovers the input graph.
pub fn apply_vertex_split(
    g: &SimpleGraph,
    split: &VertexSplit,
    d: usize,
) -> Result<SimpleGraph, RigidityError> {
    split.validate(g, d)?;
    let v = split.v;
    let new = g.n();
    let mut h = SimpleGraph::new(g.n() + 1);
    for (a, b) in g.edges() {
        if a != v && b != v {
            h.add_edge(a, b).expect("existing edge");
        }
    }
    for &w in &split.side1 {
        h.add_edge(v, w).expect("side1 edge");
    }
    for &w in &split.side2 {
        h.add_edge(new, w).expect("side2 edge");
    }
    h.add_edge(v, new).expect("split edge");
    Ok(h)
}

/// Are the points of `{v} ∪ shared` affinely independent? With `|shared| =
/// d - 1` this is the general-position requirement of the split realization.
fn in_general_position<S: Scalar>(fw: &Framework<S>, v: usize, others: &BTreeSet<usize>) -> bool {
    let rows: Vec<Vec<S>> = others
        .iter()
        .map(|&s| {
            (0..fw.d)
                .map(|k| fw.point(s)[k].clone() - fw.point(v)[k].clone())
                .collect()
        })
        .collect();
    let k = rows.len();
    Matrix::from_rows(rows).rank() == k
}

/// Realize a vertex split on an infinitesimally rigid framework: `v' = v`
/// keeps its point, every other original vertex keeps its point, and `v''`
/// gets fresh random coordinates, retried until the result is
/// infinitesimally rigid.
pub fn realize_vertex_split<S: Scalar>(
    fw: &Framework<S>,
    split: &VertexSplit,
    rng: &mut RandomSource,
) -> Result<Framework<S>, RigidityError> {
    if !is_inf_rigid(fw) {
        return Err(RigidityError::PreconditionViolated(
            "input framework is not infinitesimally rigid".into(),
        ));
    }
    let shared = split.shared();
    let h = apply_vertex_split(&fw.graph, split, fw.d)?;
    if !in_general_position(fw, split.v, &shared) {
        return Err(RigidityError::GeneralPositionViolated);
    }
    for _ in 0..MAX_ATTEMPTS {
        let mut config = fw.config.clone();
        config.extend((0..fw.d).map(|_| S::sample(rng)));
        let cand = Framework::new(h.clone(), fw.d, config);
        if is_inf_rigid(&cand) {
            debug_assert_eq!(cand.point(split.v), fw.point(split.v));
            return Ok(cand);
        }
    }
    Err(RigidityError::MaxAttemptsExceeded)
}

/// 1-extension: delete the edge `v1 v2`, add a new vertex joined to `v1`,
/// `v2` and `d - 1` further attachment vertices, placed at fresh random
/// coordinates.
pub fn one_extension<S: Scalar>(
    fw: &Framework<S>,
    remove: Edge,
    attach: &[usize],
    rng: &mut RandomSource,
) -> Result<Framework<S>, RigidityError> {
    let (v1, v2) = remove;
    if !fw.graph.has_edge(v1, v2) {
        return Err(RigidityError::PreconditionViolated(format!(
            "({v1},{v2}) is not an edge"
        )));
    }
    if attach.len() != fw.d - 1 {
        return Err(RigidityError::PreconditionViolated(format!(
            "need {} attachment vertices besides the removed edge",
            fw.d - 1
        )));
    }
    let mut all: BTreeSet<usize> = attach.iter().copied().collect();
    all.insert(v1);
    all.insert(v2);
    if all.len() != fw.d + 1 || all.iter().any(|&w| w >= fw.graph.n()) {
        return Err(RigidityError::PreconditionViolated(
            "attachment vertices must be distinct existing vertices".into(),
        ));
    }
    if !is_inf_rigid(fw) {
        return Err(RigidityError::PreconditionViolated(
            "input framework is not infinitesimally rigid".into(),
        ));
    }
    // the d+1 attachment points must be in general position
    let mut others = all.clone();
    others.remove(&v1);
    if !in_general_position(fw, v1, &others) {
        return Err(RigidityError::GeneralPositionViolated);
    }
    let new = fw.graph.n();
    let mut h = fw.graph.clone();
    h.remove_edge(v1, v2);
    let mut g = SimpleGraph::new(new + 1);
    for (a, b) in h.edges() {
        g.add_edge(a, b).expect("existing edge");
    }
    for &w in &all {
        g.add_edge(new, w).expect("extension edge");
    }
    for _ in 0..MAX_ATTEMPTS {
        let mut config = fw.config.clone();
        config.extend((0..fw.d).map(|_| S::sample(rng)));
        let cand = Framework::new(g.clone(), fw.d, config);
        if is_inf_rigid(&cand) {
            return Ok(cand);
        }
    }
    Err(RigidityError::MaxAttemptsExceeded)
}

fn active_vertices(g: &SimpleGraph) -> BTreeSet<usize> {
    (0..g.n()).filter(|&v| g.degree(v) > 0).collect()
}

/// Glue a second rigid graph onto an infinitesimally rigid framework.
///
/// `fw1` and `g2` live on a common vertex universe; their active vertex sets
/// `V1`, `V2` must share at least three vertices, with `x` only in `V1`, `y`
/// only in `V2`, `z` shared and `xz` an edge of `fw1`. The result is an
/// infinitesimally rigid framework on `(G1 ∪ G2) - xz + xy` agreeing with
/// `fw1` on `V1`: the construction 1-extends on `xz` to place `y`, joins `y`
/// to the shared set, then extends to the remaining vertices of `g2` at
/// random positions.
pub fn glue<S: Scalar>(
    fw1: &Framework<S>,
    g2: &SimpleGraph,
    x: usize,
    y: usize,
    z: usize,
    rng: &mut RandomSource,
) -> Result<Framework<S>, RigidityError> {
    if fw1.graph.n() != g2.n() {
        return Err(RigidityError::PreconditionViolated(
            "frameworks must share a vertex universe".into(),
        ));
    }
    let v1 = active_vertices(&fw1.graph);
    let v2 = active_vertices(g2);
    let shared: BTreeSet<usize> = v1.intersection(&v2).copied().collect();
    if shared.len() < 3 {
        return Err(RigidityError::PreconditionViolated(format!(
            "shared vertex set has size {}, need at least 3",
            shared.len()
        )));
    }
    if !v1.contains(&x) || v2.contains(&x) || !v2.contains(&y) || v1.contains(&y) {
        return Err(RigidityError::PreconditionViolated(
            "x must lie only in the first graph and y only in the second".into(),
        ));
    }
    if !shared.contains(&z) || !fw1.graph.has_edge(x, z) {
        return Err(RigidityError::PreconditionViolated(
            "z must be shared with xz an edge of the first graph".into(),
        ));
    }

    // place y by a 1-extension on xz inside the compacted first framework
    let (cfw, order) = fw1.restrict(&v1);
    let local = |w: usize| order.binary_search(&w).expect("vertex in V1");
    if !is_inf_rigid(&cfw) {
        return Err(RigidityError::PreconditionViolated(
            "first framework is not infinitesimally rigid".into(),
        ));
    }
    let extra: Vec<usize> = shared
        .iter()
        .filter(|&&w| w != z)
        .take(fw1.d - 1)
        .map(|&w| local(w))
        .collect();
    let ext = one_extension(&cfw, (local(x).min(local(z)), local(x).max(local(z))), &extra, rng)?;
    let y_point: Vec<S> = ext.point(cfw.graph.n()).to_vec();

    // assemble (G1 ∪ G2) - xz + xy on the universe
    let mut g = fw1.graph.union(g2);
    g.remove_edge(x, z);
    g.add_edge(x, y).map_err(|e| {
        RigidityError::PreconditionViolated(format!("cannot add brace edge: {e}"))
    })?;
    let rest: Vec<usize> = v2
        .iter()
        .filter(|&&w| !v1.contains(&w) && w != y)
        .copied()
        .collect();
    let all_active: BTreeSet<usize> = v1.union(&v2).copied().collect();
    for _ in 0..MAX_ATTEMPTS {
        let mut config = fw1.config.clone();
        for &w in &rest {
            let p: Vec<S> = (0..fw1.d).map(|_| S::sample(rng)).collect();
            config[w * fw1.d..(w + 1) * fw1.d].clone_from_slice(&p);
        }
        config[y * fw1.d..(y + 1) * fw1.d].clone_from_slice(&y_point);
        let cand = Framework::new(g.clone(), fw1.d, config);
        let (compact, _) = cand.restrict(&all_active);
        if is_inf_rigid(&compact) {
            return Ok(cand);
        }
    }
    Err(RigidityError::MaxAttemptsExceeded)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::{FieldSpec, PRIME, PRIME_ALT};
    use crate::generate;
    use crate::{Fq, FqAlt, Rat};

    fn k(n: usize) -> SimpleGraph {
        SimpleGraph::complete(n)
    }

    #[test]
    fn single_edge_matrix_d1() {
        let g = SimpleGraph::from_edges(2, &[(0, 1)]).unwrap();
        let fw = Framework::new(g, 1, vec![Fq::from_u64(0), Fq::from_u64(1)]);
        let m = rigidity_matrix(&fw);
        assert_eq!((m.rows(), m.cols()), (1, 2));
        assert_eq!(*m.get(0, 0), -Fq::from_u64(1));
        assert_eq!(*m.get(0, 1), Fq::from_u64(1));
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn triangle_d2_is_isostatic() {
        let mut rng = RandomSource::new(1);
        let r = generic_rank::<Fq>(&k(3), 2, &mut rng, 3);
        assert_eq!(r, 3);
        assert_eq!(max_rank(3, 2), 3);
    }

    #[test]
    fn k5_rank_nine_d3() {
        let mut rng = RandomSource::new(2);
        let fw = Framework::<Fq>::random(k(5), 3, &mut rng);
        assert_eq!(rigidity_matrix(&fw).rank(), 9);
        assert!(is_inf_rigid(&fw));
        // seed-independent
        let mut rng2 = RandomSource::new(99);
        let fw2 = Framework::<Fq>::random(k(5), 3, &mut rng2);
        assert_eq!(rigidity_matrix(&fw2).rank(), 9);
        // and the same over the rationals
        let mut rng3 = RandomSource::new(3);
        assert_eq!(generic_rank::<Rat>(&k(5), 3, &mut rng3, 1), 9);
    }

    #[test]
    fn octahedron_is_isostatic() {
        let t = generate::octahedron();
        let mut rng = RandomSource::new(4);
        assert_eq!(generic_rank::<Fq>(t.graph(), 3, &mut rng, 3), 12);
        let mut minus = t.graph().clone();
        let (u, v) = minus.edges()[0];
        minus.remove_edge(u, v);
        assert_eq!(generic_rank::<Fq>(&minus, 3, &mut rng, 3), 11);
    }

    #[test]
    fn k4_and_path_ranks() {
        let mut rng = RandomSource::new(5);
        assert_eq!(generic_rank::<Fq>(&k(4), 3, &mut rng, 3), 6);
        let path = SimpleGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(generic_rank::<Fq>(&path, 2, &mut rng, 3), 2);
    }

    #[test]
    fn corpus_triangulations_are_isostatic() {
        let mut rng = RandomSource::new(6);
        for t in [
            generate::tetrahedron(),
            generate::octahedron(),
            generate::icosahedron(),
            generate::stacked(8),
            generate::double_wheel(5),
        ] {
            let n = t.n();
            assert_eq!(generic_rank::<Fq>(t.graph(), 3, &mut rng, 3), 3 * n - 6);
        }
    }

    #[test]
    fn ranks_agree_across_primes() {
        assert_ne!(PRIME, PRIME_ALT);
        assert_eq!(Fq::field_spec(), FieldSpec::Prime(PRIME));
        assert_eq!(FqAlt::field_spec(), FieldSpec::Prime(PRIME_ALT));
        let t = generate::icosahedron();
        let mut a = RandomSource::new(7);
        let mut b = RandomSource::new(7);
        assert_eq!(
            generic_rank::<Fq>(t.graph(), 3, &mut a, 2),
            generic_rank::<FqAlt>(t.graph(), 3, &mut b, 2)
        );
    }

    #[test]
    fn coincident_rank_k5() {
        let mut rng = RandomSource::new(8);
        let spec = CoincidentSpec::new(0, 1);
        assert_eq!(coincident_rank::<Fq>(&k(5), spec, 3, &mut rng, 3), 9);
        assert!(is_coincident_inf_rigid::<Fq>(&k(5), spec, 3, &mut rng, 3));
    }

    #[test]
    fn bare_octahedron_coincident_deficient() {
        let t = generate::octahedron();
        let mut rng = RandomSource::new(9);
        for (u, v) in t.graph().edges() {
            let r = coincident_rank::<Fq>(t.graph(), CoincidentSpec::new(u, v), 3, &mut rng, 3);
            assert!(r < 12, "edge ({u},{v}) reached rank {r}");
        }
    }

    #[test]
    fn braced_octahedron_coincident_full() {
        let mut g = generate::octahedron().graph().clone();
        g.add_edge(4, 5).unwrap();
        let mut rng = RandomSource::new(10);
        for (u, v) in generate::octahedron().graph().edges() {
            assert!(is_coincident_inf_rigid::<Fq>(
                &g,
                CoincidentSpec::new(u, v),
                3,
                &mut rng,
                3
            ));
        }
    }

    #[test]
    fn split_k4_gives_k5_minus_edge() {
        let split = VertexSplit {
            v: 0,
            side1: BTreeSet::from([1, 2, 3]),
            side2: BTreeSet::from([1, 2]),
        };
        let h = apply_vertex_split(&k(4), &split, 3).unwrap();
        assert_eq!(h.n(), 5);
        assert_eq!(h.m(), 9);
        assert!(!h.has_edge(3, 4));
        // contracting the split edge recovers K4
        let (back, _) = h.contract_edge(0, 4);
        assert_eq!(back, k(4));
    }

    #[test]
    fn split_shared_size_is_checked() {
        let split = VertexSplit {
            v: 0,
            side1: BTreeSet::from([1, 2, 3]),
            side2: BTreeSet::from([1]),
        };
        assert!(matches!(
            apply_vertex_split(&k(4), &split, 3),
            Err(RigidityError::InvalidSplit(_))
        ));
    }

    #[test]
    fn realize_split_raises_rank_by_three() {
        let mut rng = RandomSource::new(11);
        let fw = Framework::<Fq>::random(k(4), 3, &mut rng);
        assert_eq!(rigidity_matrix(&fw).rank(), 6);
        let split = VertexSplit {
            v: 0,
            side1: BTreeSet::from([1, 2, 3]),
            side2: BTreeSet::from([1, 2]),
        };
        let out = realize_vertex_split(&fw, &split, &mut rng).unwrap();
        assert_eq!(rigidity_matrix(&out).rank(), 9);
        assert_eq!(out.point(0), fw.point(0));
        assert_eq!(out.point(2), fw.point(2));
    }

    #[test]
    fn realize_split_rejects_flexible_input() {
        let mut rng = RandomSource::new(12);
        let path = SimpleGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let fw = Framework::<Fq>::random(path, 3, &mut rng);
        let split = VertexSplit {
            v: 1,
            side1: BTreeSet::from([0, 2]),
            side2: BTreeSet::from([0, 2]),
        };
        assert!(matches!(
            realize_vertex_split(&fw, &split, &mut rng),
            Err(RigidityError::PreconditionViolated(_))
        ));
    }

    #[test]
    fn octahedron_splits_stay_rigid() {
        let t = generate::octahedron();
        let mut rng = RandomSource::new(13);
        let fw = Framework::<Fq>::random(t.graph().clone(), 3, &mut rng);
        assert!(is_inf_rigid(&fw));
        // split vertex 0 along two shared neighbors
        let nbrs: Vec<usize> = t.graph().neighbors(0).iter().copied().collect();
        let split = VertexSplit {
            v: 0,
            side1: nbrs.iter().copied().collect(),
            side2: BTreeSet::from([nbrs[0], nbrs[1]]),
        };
        let out = realize_vertex_split(&fw, &split, &mut rng).unwrap();
        assert!(is_inf_rigid(&out));
        assert_eq!(out.graph.n(), 7);
    }

    #[test]
    fn one_extension_on_k4() {
        let mut rng = RandomSource::new(14);
        let fw = Framework::<Fq>::random(k(4), 3, &mut rng);
        let out = one_extension(&fw, (0, 1), &[2, 3], &mut rng).unwrap();
        assert_eq!(out.graph.n(), 5);
        assert_eq!(rigidity_matrix(&out).rank(), 9);
        assert!(!out.graph.has_edge(0, 1));
    }

    #[test]
    fn repeated_one_extensions_stay_rigid() {
        let mut rng = RandomSource::new(15);
        let mut fw = Framework::<Fq>::random(k(4), 3, &mut rng);
        for step in 0..10 {
            let (v1, v2) = fw.graph.edges()[step % fw.graph.m()];
            let others: Vec<usize> = (0..fw.graph.n())
                .filter(|&w| w != v1 && w != v2)
                .take(2)
                .collect();
            fw = one_extension(&fw, (v1, v2), &others, &mut rng).unwrap();
            assert!(is_inf_rigid(&fw));
        }
        assert_eq!(fw.graph.n(), 14);
    }

    #[test]
    fn one_extension_rejects_bad_attach() {
        let mut rng = RandomSource::new(16);
        let fw = Framework::<Fq>::random(k(4), 3, &mut rng);
        assert!(matches!(
            one_extension(&fw, (0, 1), &[2, 2], &mut rng),
            Err(RigidityError::PreconditionViolated(_))
        ));
        assert!(matches!(
            one_extension(&fw, (0, 1), &[1, 2], &mut rng),
            Err(RigidityError::PreconditionViolated(_))
        ));
    }

    #[test]
    fn glue_two_k5() {
        // K5 on {0..4} and K5 on {2..6} sharing {2,3,4}
        let n = 7;
        let mut g1 = SimpleGraph::new(n);
        for u in 0..5 {
            for v in u + 1..5 {
                g1.add_edge(u, v).unwrap();
            }
        }
        let mut g2 = SimpleGraph::new(n);
        for u in 2..7 {
            for v in u + 1..7 {
                g2.add_edge(u, v).unwrap();
            }
        }
        let mut rng = RandomSource::new(17);
        let mut fw1 = Framework::<Fq>::random(g1.clone(), 3, &mut rng);
        // zero out the inactive coordinates for determinism of the assertion
        fw1.set_point(5, &[Fq::from_u64(0), Fq::from_u64(0), Fq::from_u64(0)]);
        fw1.set_point(6, &[Fq::from_u64(0), Fq::from_u64(0), Fq::from_u64(0)]);
        let out = glue(&fw1, &g2, 0, 5, 2, &mut rng).unwrap();
        assert!(!out.graph.has_edge(0, 2));
        assert!(out.graph.has_edge(0, 5));
        assert_eq!(rigidity_matrix(&out).rank(), 3 * 7 - 6);
        // p restricted to G1 is untouched
        for v in [1, 2, 3, 4] {
            assert_eq!(out.point(v), fw1.point(v));
        }
    }

    #[test]
    fn glue_rejects_small_shared_set() {
        let n = 6;
        let mut g1 = SimpleGraph::new(n);
        for u in 0..4 {
            for v in u + 1..4 {
                g1.add_edge(u, v).unwrap();
            }
        }
        let mut g2 = SimpleGraph::new(n);
        for u in 2..6 {
            for v in u + 1..6 {
                g2.add_edge(u, v).unwrap();
            }
        }
        let mut rng = RandomSource::new(18);
        let fw1 = Framework::<Fq>::random(g1, 3, &mut rng);
        assert!(matches!(
            glue(&fw1, &g2, 0, 5, 2, &mut rng),
            Err(RigidityError::PreconditionViolated(_))
        ));
    }

    #[test]
    fn split_preserves_generic_rank_offset() {
        let mut rng = RandomSource::new(19);
        for t in [generate::octahedron(), generate::double_wheel(5)] {
            let g = t.graph();
            let base = generic_rank::<Fq>(g, 3, &mut rng, 2);
            let nbrs: Vec<usize> = g.neighbors(1).iter().copied().collect();
            let split = VertexSplit {
                v: 1,
                side1: nbrs.iter().copied().collect(),
                side2: BTreeSet::from([nbrs[0], nbrs[1]]),
            };
            let h = apply_vertex_split(g, &split, 3).unwrap();
            assert_eq!(generic_rank::<Fq>(&h, 3, &mut rng, 2), base + 3);
        }
    }

    #[test]
    fn coincident_rank_never_exceeds_generic() {
        let mut rng = RandomSource::new(22);
        for g in [
            k(5),
            generate::octahedron().graph().clone(),
            generate::stacked(7).graph().clone(),
        ] {
            let full = generic_rank::<Fq>(&g, 3, &mut rng, 2);
            for (u, v) in g.edges().into_iter().take(4) {
                let r = coincident_rank::<Fq>(&g, CoincidentSpec::new(u, v), 3, &mut rng, 2);
                assert!(r <= full);
            }
        }
    }

    #[test]
    fn adding_edges_never_decreases_rank() {
        let mut rng = RandomSource::new(20);
        let t = generate::stacked(7);
        let g = t.graph().clone();
        let base = generic_rank::<Fq>(&g, 3, &mut rng, 2);
        for u in 0..g.n() {
            for v in u + 1..g.n() {
                if g.has_edge(u, v) {
                    continue;
                }
                let mut h = g.clone();
                h.add_edge(u, v).unwrap();
                assert!(generic_rank::<Fq>(&h, 3, &mut rng, 2) >= base);
            }
        }
    }

    #[test]
    fn row_blocks_sum_to_zero() {
        let mut rng = RandomSource::new(21);
        let fw = Framework::<Fq>::random(k(5), 3, &mut rng);
        let m = rigidity_matrix(&fw);
        for row in 0..m.rows() {
            for kk in 0..3 {
                let mut acc = Fq::from_u64(0);
                for v in 0..5 {
                    acc += *m.get(row, v * 3 + kk);
                }
                assert_eq!(acc, Fq::from_u64(0));
            }
        }
    }
}
