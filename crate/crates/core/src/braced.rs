//! Braced plane triangulations and the global-rigidity decision procedure.
//!
//! A braced triangulation is a plane triangulation `T` plus a set of extra
//! edges (braces) disjoint from `E(T)`. Such a graph is generically globally
//! rigid in R^3 exactly when it is 4-connected and has at least one brace.
//! [`decide_braced`] decides this constructively by induction on the vertex
//! count: it contracts down to K5, and each step back up is a vertex split
//! certified by an exact rank witness of an infinitesimally rigid coincident
//! realization. The emitted [`Certificate`] replays independently of the
//! decision run: [`verify_certificate`] recomputes every graph derivation and
//! every rank witness, at the recorded seed and at fresh ones.
//!
//! Steps certify a *spanning subgraph* of their result and then add the
//! remaining braces (`augment`); edge additions preserve global rigidity, so
//! chains reach targets with any number of braces.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::contractible::{
    contractible_edges, find_contractible_avoiding, find_contractible_off_face, path2_edges,
    ContractibleError,
};
use crate::exact_linalg::{FieldSpec, RandomSource, Scalar, PRIME, PRIME_ALT};
use crate::graph::{edge, Edge, GraphError, SimpleGraph};
use crate::rigidity::{
    coincident_config, coincident_rank, is_inf_rigid, max_rank, realize_vertex_split, glue,
    CoincidentSpec, Framework, RigidityError, VertexSplit, MAX_ATTEMPTS,
};
use crate::triangulation::{Contraction, PlaneTriangulation, TriangulationError};
use crate::{Fq, FqAlt, Rat};

/// Dimension the decision procedure works in.
const D: usize = 3;

#[derive(Debug, Error)]
pub enum BracedError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("certification failed: {0}")]
    Certification(String),
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Rigidity(#[from] RigidityError),
    #[error(transparent)]
    Contractible(#[from] ContractibleError),
}

/// A plane triangulation plus bracing edges disjoint from the triangulation.
#[derive(Debug, Clone)]
pub struct BracedTriangulation {
    t: PlaneTriangulation,
    braces: BTreeSet<Edge>,
}

impl BracedTriangulation {
    pub fn new(
        t: PlaneTriangulation,
        braces: BTreeSet<Edge>,
    ) -> Result<Self, BracedError> {
        for &(u, v) in &braces {
            if u == v {
                return Err(BracedError::InvalidInput(format!("brace loop at {u}")));
            }
            if u > v {
                return Err(BracedError::InvalidInput(format!(
                    "brace ({u},{v}) must be stored sorted"
                )));
            }
            if v >= t.n() {
                return Err(BracedError::InvalidInput(format!(
                    "brace ({u},{v}) out of range"
                )));
            }
            if t.graph().has_edge(u, v) {
                return Err(BracedError::InvalidInput(format!(
                    "brace ({u},{v}) is parallel to a triangulation edge"
                )));
            }
        }
        Ok(BracedTriangulation { t, braces })
    }

    pub fn bare(t: PlaneTriangulation) -> Self {
        BracedTriangulation {
            t,
            braces: BTreeSet::new(),
        }
    }

    pub fn t(&self) -> &PlaneTriangulation {
        &self.t
    }

    pub fn braces(&self) -> &BTreeSet<Edge> {
        &self.braces
    }

    pub fn n(&self) -> usize {
        self.t.n()
    }

    /// The union `T ∪ B` as a simple graph.
    pub fn union_graph(&self) -> SimpleGraph {
        let mut g = self.t.graph().clone();
        for &(u, v) in &self.braces {
            g.add_edge(u, v).expect("brace validated");
        }
        g
    }

    /// Contract a triangulation edge; braces are remapped through the vertex
    /// relabeling, merged when they collide, and deleted when they become
    /// parallel to a triangulation edge.
    pub fn contract(&self, e: Edge) -> Result<BracedContraction, BracedError> {
        let c = self.t.contract(e.0, e.1)?;
        let mut origins: BTreeMap<Edge, Vec<Edge>> = BTreeMap::new();
        let mut braces = BTreeSet::new();
        for &(u, v) in &self.braces {
            let (a, b) = (c.map[u], c.map[v]);
            // a brace with both endpoints on the contracted edge would be
            // parallel to it, which the invariants forbid
            debug_assert_ne!(a, b);
            let img = edge(a, b);
            if c.result.graph().has_edge(img.0, img.1) {
                continue; // parallel to an edge of T/e: deleted
            }
            origins.entry(img).or_default().push(edge(u, v));
            braces.insert(img);
        }
        let result = BracedTriangulation::new(c.result.clone(), braces)?;
        Ok(BracedContraction {
            result,
            contraction: c,
            origins,
        })
    }

    /// Delete an interior vertex of triangulation-degree three, together
    /// with its braces. Returns the new braced triangulation and the
    /// old-to-new vertex map.
    pub fn delete_vertex(
        &self,
        x: usize,
    ) -> Result<(BracedTriangulation, Vec<usize>), BracedError> {
        if self.t.graph().degree(x) != 3 {
            return Err(BracedError::InvalidInput(format!(
                "vertex {x} has triangulation degree {} != 3",
                self.t.graph().degree(x)
            )));
        }
        let map: Vec<usize> = (0..self.n())
            .map(|v| {
                if v == x {
                    usize::MAX
                } else if v < x {
                    v
                } else {
                    v - 1
                }
            })
            .collect();
        // drop the three faces at x and close with the link triangle; each
        // dropped face contributes the one directed edge avoiding x
        let mut link: BTreeMap<usize, usize> = BTreeMap::new();
        let mut faces: Vec<Vec<usize>> = Vec::new();
        for f in self.t.faces() {
            if !f.contains(&x) {
                faces.push(f.iter().map(|&v| map[v]).collect());
                continue;
            }
            for i in 0..3 {
                let (p, q) = (f[i], f[(i + 1) % 3]);
                if p != x && q != x {
                    link.insert(map[p], map[q]);
                }
            }
        }
        if link.len() != 3 {
            return Err(BracedError::InvalidInput(format!(
                "vertex {x} does not have a triangular link"
            )));
        }
        let start = *link.keys().next().expect("link nonempty");
        let second = link[&start];
        let third = link[&second];
        faces.push(vec![start, second, third]);

        let outer_triple = self.t.face_triple(self.t.outer_face());
        let outer = if outer_triple.contains(&x) {
            None
        } else {
            Some([
                map[outer_triple[0]],
                map[outer_triple[1]],
                map[outer_triple[2]],
            ])
        };
        let t = PlaneTriangulation::from_faces(self.n() - 1, &faces, outer)?;
        let braces: BTreeSet<Edge> = self
            .braces
            .iter()
            .filter(|&&(u, v)| u != x && v != x)
            .map(|&(u, v)| edge(map[u], map[v]))
            .collect();
        Ok((BracedTriangulation::new(t, braces)?, map))
    }
}

/// A braced contraction with the bookkeeping the certifier needs.
#[derive(Debug, Clone)]
pub struct BracedContraction {
    pub result: BracedTriangulation,
    pub contraction: Contraction,
    /// For each surviving brace of the result, the parent braces that map to
    /// it (two when braces from both contracted endpoints collide).
    pub origins: BTreeMap<Edge, Vec<Edge>>,
}

/// 64-bit FNV-1a over the canonical edge list: edges sorted with the smaller
/// endpoint first, each endpoint written as 8 little-endian bytes.
pub fn graph_hash(g: &SimpleGraph) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut h = OFFSET;
    for (u, v) in g.edges() {
        for x in [u as u64, v as u64] {
            for b in x.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(FNV_PRIME);
            }
        }
    }
    h
}

mod hex64 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &u64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{v:016x}"))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u64, D::Error> {
        let s = String::deserialize(d)?;
        u64::from_str_radix(&s, 16).map_err(serde::de::Error::custom)
    }
}

/// An exact rank witness: the coincident rank achieved at `seed` over the
/// given field (`prime: null` means the rational path).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub seed: u64,
    pub prime: Option<u64>,
    pub rank: usize,
}

impl Witness {
    pub fn new(seed: u64, field: FieldSpec, rank: usize) -> Self {
        let prime = match field {
            FieldSpec::Prime(p) => Some(p),
            FieldSpec::Rational => None,
        };
        Witness { seed, prime, rank }
    }

    pub fn field(&self) -> FieldSpec {
        match self.prime {
            Some(p) => FieldSpec::Prime(p),
            None => FieldSpec::Rational,
        }
    }
}

/// One derivation step of a certificate. Every step derives its result from
/// the previous chain element ("child", hashed for drift detection).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Step {
    /// The chain starts at the complete graph on five vertices.
    BaseK5 { vertices: Vec<usize> },
    /// The result is a vertex split of the child (undoing the contraction of
    /// `edge`), certified by a coincident rank witness, plus `augment` edges.
    Contract {
        edge: Edge,
        #[serde(with = "hex64")]
        child_hash: u64,
        side_a: Vec<usize>,
        side_b: Vec<usize>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        augment: Vec<Edge>,
        witness: Witness,
    },
    /// Same derivation as `Contract`, with the separating-triangle
    /// decomposition that produced the coincident realization recorded.
    Glue {
        edge: Edge,
        #[serde(with = "hex64")]
        child_hash: u64,
        side_a: Vec<usize>,
        side_b: Vec<usize>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        augment: Vec<Edge>,
        witness: Witness,
        cycle: Vec<usize>,
        inside: Vec<usize>,
        t1: Vec<usize>,
        x: usize,
        y: usize,
        z: usize,
    },
    /// The result adds one vertex joined to at least four existing vertices.
    VertexAddition {
        vertex: usize,
        neighbors: Vec<usize>,
        #[serde(with = "hex64")]
        child_hash: u64,
    },
}

/// Machine-checkable derivation chain from K5 up to the target graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    #[serde(with = "hex64")]
    pub target_hash: u64,
    pub steps: Vec<Step>,
}

impl Certificate {
    pub fn base_k5() -> Certificate {
        Certificate {
            target_hash: graph_hash(&SimpleGraph::complete(5)),
            steps: vec![Step::BaseK5 {
                vertices: vec![0, 1, 2, 3, 4],
            }],
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Certificate, serde_json::Error> {
        serde_json::from_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    NotFourConnected,
    NoBraces,
    Certified,
}

impl std::fmt::Display for Reason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Reason::NotFourConnected => write!(f, "not 4-connected"),
            Reason::NoBraces => write!(f, "no braces (G = T)"),
            Reason::Certified => write!(f, "certified"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub globally_rigid: bool,
    pub reason: Reason,
    pub certificate: Option<Certificate>,
}

/// Decide global rigidity in R^3 of a braced plane triangulation, emitting a
/// verifiable certificate for positive verdicts.
pub fn decide_braced<S: Scalar>(
    g: &BracedTriangulation,
    rng: &mut RandomSource,
    trials: usize,
) -> Result<Verdict, BracedError> {
    if g.n() < 5 {
        return Err(BracedError::InvalidInput(format!(
            "need at least five vertices, got {}",
            g.n()
        )));
    }
    if !g.union_graph().is_k_connected(4) {
        return Ok(Verdict {
            globally_rigid: false,
            reason: Reason::NotFourConnected,
            certificate: None,
        });
    }
    if g.braces.is_empty() {
        return Ok(Verdict {
            globally_rigid: false,
            reason: Reason::NoBraces,
            certificate: None,
        });
    }
    let mut budget = 64 * g.n();
    let cert = certify::<S>(g, rng, trials, usize::MAX, &mut budget)?;
    Ok(Verdict {
        globally_rigid: true,
        reason: Reason::Certified,
        certificate: Some(cert),
    })
}

fn cert_err(msg: impl Into<String>) -> BracedError {
    BracedError::Certification(msg.into())
}

/// Search `trials` seeds for one whose coincident configuration achieves the
/// rigidity threshold; the witness records that seed.
fn coincident_witness_rank<S: Scalar>(
    g: &SimpleGraph,
    pair: Edge,
    rng: &mut RandomSource,
    trials: usize,
) -> Result<Witness, BracedError> {
    let target = max_rank(g.n(), D);
    let mut best = 0;
    for _ in 0..trials.max(1) {
        let seed = rng.next_u64();
        let r = coincident_rank::<S>(
            g,
            CoincidentSpec::new(pair.0, pair.1),
            D,
            &mut RandomSource::new(seed),
            1,
        );
        if r == target {
            return Ok(Witness::new(seed, S::field_spec(), r));
        }
        best = best.max(r);
    }
    Err(cert_err(format!(
        "coincident rank at {pair:?} reached {best}, need {target}"
    )))
}

/// Replay a coincident-rank computation in the witness's field.
fn coincident_rank_in(field: FieldSpec, g: &SimpleGraph, pair: Edge, seed: u64) -> Option<usize> {
    let spec = CoincidentSpec::new(pair.0, pair.1);
    let mut src = RandomSource::new(seed);
    match field {
        FieldSpec::Prime(PRIME) => Some(coincident_rank::<Fq>(g, spec, D, &mut src, 1)),
        FieldSpec::Prime(PRIME_ALT) => Some(coincident_rank::<FqAlt>(g, spec, D, &mut src, 1)),
        FieldSpec::Rational => Some(coincident_rank::<Rat>(g, spec, D, &mut src, 1)),
        FieldSpec::Prime(_) => None,
    }
}

struct GlueMeta {
    cycle: Vec<usize>,
    inside: Vec<usize>,
    t1: Vec<usize>,
    x: usize,
    y: usize,
    z: usize,
}

/// Build the certificate step undoing `bc`. The step certifies the spanning
/// subgraph `H = T ∪ (one surviving parent brace per child brace)` — a
/// legitimate vertex split of the contracted graph — and lists the remaining
/// braces as `augment`. When braces from both contracted endpoints collide
/// onto one child brace, only one preimage may enter `H` (the other would
/// break the split's shared-neighbor count), but which one can decide whether
/// the coincident rank witness exists; all assignments are tried.
fn contract_step<S: Scalar>(
    full: &BracedTriangulation,
    bc: &BracedContraction,
    rng: &mut RandomSource,
    trials: usize,
    meta: Option<GlueMeta>,
) -> Result<Step, BracedError> {
    let (keep, drop) = bc.contraction.edge;
    let forced: Vec<Edge> = bc
        .origins
        .values()
        .filter(|pre| pre.len() == 1)
        .map(|pre| pre[0])
        .collect();
    let collided: Vec<&Vec<Edge>> = bc
        .origins
        .values()
        .filter(|pre| pre.len() > 1)
        .collect();
    if collided.len() > 12 {
        return Err(cert_err("too many collided braces to enumerate"));
    }

    let mut last_err = cert_err("contraction has no surviving brace assignment");
    let mut found = None;
    'masks: for mask in 0..(1u32 << collided.len()) {
        let mut survivors: BTreeSet<Edge> = forced.iter().copied().collect();
        for (i, pre) in collided.iter().enumerate() {
            survivors.insert(pre[(mask >> i) as usize & 1]);
        }
        let mut h = full.t.graph().clone();
        for &(u, v) in &survivors {
            h.add_edge(u, v)?;
        }
        let side_a: Vec<usize> = h
            .neighbors(keep)
            .iter()
            .copied()
            .filter(|&w| w != drop)
            .collect();
        let side_b: Vec<usize> = h
            .neighbors(drop)
            .iter()
            .copied()
            .filter(|&w| w != keep)
            .collect();
        let shared = side_a.iter().filter(|w| side_b.contains(w)).count();
        if shared != D - 1 {
            last_err = cert_err(format!(
                "split sides share {shared} vertices, need {}",
                D - 1
            ));
            continue;
        }
        match coincident_witness_rank::<S>(&h, (keep, drop), rng, trials) {
            Ok(witness) => {
                found = Some((side_a, side_b, survivors, witness));
                break 'masks;
            }
            Err(e) => last_err = e,
        }
    }
    let Some((side_a, side_b, survivors, witness)) = found else {
        return Err(last_err);
    };
    let augment: Vec<Edge> = full.braces.difference(&survivors).copied().collect();
    let child_hash = graph_hash(&bc.result.union_graph());
    Ok(match meta {
        None => Step::Contract {
            edge: (keep, drop),
            child_hash,
            side_a,
            side_b,
            augment,
            witness,
        },
        Some(m) => Step::Glue {
            edge: (keep, drop),
            child_hash,
            side_a,
            side_b,
            augment,
            witness,
            cycle: m.cycle,
            inside: m.inside,
            t1: m.t1,
            x: m.x,
            y: m.y,
            z: m.z,
        },
    })
}

fn extend(child: Certificate, step: Step, target: &BracedTriangulation) -> Certificate {
    let mut steps = child.steps;
    steps.push(step);
    Certificate {
        target_hash: graph_hash(&target.union_graph()),
        steps,
    }
}

fn certify<S: Scalar>(
    g: &BracedTriangulation,
    rng: &mut RandomSource,
    trials: usize,
    parent_n: usize,
    budget: &mut usize,
) -> Result<Certificate, BracedError> {
    let n = g.n();
    // every step contracts or deletes exactly one vertex
    if n >= parent_n {
        return Err(cert_err("recursion did not shrink the graph"));
    }
    if *budget == 0 {
        return Err(cert_err("certification search budget exhausted"));
    }
    *budget -= 1;
    if n == 5 {
        if !g.union_graph().is_complete() {
            return Err(cert_err("five-vertex braced triangulation is not complete"));
        }
        return Ok(Certificate::base_k5());
    }

    let mut seps = g.t.separating_triangles();
    if seps.is_empty() {
        return certify_four_connected::<S>(g, rng, trials, budget);
    }
    seps.sort_by(|a, b| (a.inside.len(), &a.vertices).cmp(&(b.inside.len(), &b.vertices)));

    // work through the separating triangles, smallest disk first; the
    // minimal one is the theory-guided choice, the rest are backups
    let mut last_err = cert_err("no separating-triangle move certifies");
    for c1 in &seps {
        let r = if c1.inside.len() == 1 {
            certify_small_disk::<S>(g, c1, rng, trials, budget)
        } else {
            certify_big_disk::<S>(g, c1, rng, trials, budget)
        };
        match r {
            Ok(cert) => return Ok(cert),
            Err(e) => last_err = e,
        }
    }

    // last resort: any contraction or deletion whose step checks out is
    // sound, whatever the case analysis would have picked
    for e in g.t.graph().edges() {
        if g.t.graph().common_neighbors(e.0, e.1).len() != 2 {
            continue;
        }
        if let Ok(cert) = try_contract_candidate::<S>(g, g, e, rng, trials, budget, None) {
            return Ok(cert);
        }
    }
    for x in 0..n {
        if g.t.graph().degree(x) == 3 {
            if let Ok(cert) = try_delete_candidate::<S>(g, x, rng, trials, budget) {
                return Ok(cert);
            }
        }
    }
    Err(last_err)
}

/// Contract `e` on `contract_on` (either the full graph or its single-brace
/// companion), build the step undoing it for `g`, and recurse. Fails fast if
/// the child is unusable or no witness exists.
fn try_contract_candidate<S: Scalar>(
    g: &BracedTriangulation,
    contract_on: &BracedTriangulation,
    e: Edge,
    rng: &mut RandomSource,
    trials: usize,
    budget: &mut usize,
    meta: Option<GlueMeta>,
) -> Result<Certificate, BracedError> {
    let bc = contract_on.contract(e)?;
    if !viable(&bc.result) {
        return Err(cert_err("contraction child is unusable"));
    }
    let step = contract_step::<S>(g, &bc, rng, trials, meta)?;
    let child = certify::<S>(&bc.result, rng, trials, contract_on.n(), budget)?;
    Ok(extend(child, step, g))
}

/// Delete a triangulation-degree-3 vertex and certify the child; the step
/// re-adds the vertex over all its (at least four) neighbors.
fn try_delete_candidate<S: Scalar>(
    g: &BracedTriangulation,
    x: usize,
    rng: &mut RandomSource,
    trials: usize,
    budget: &mut usize,
) -> Result<Certificate, BracedError> {
    let neighbors: Vec<usize> = g.union_graph().neighbors(x).iter().copied().collect();
    if neighbors.len() < D + 1 {
        return Err(cert_err(format!(
            "vertex {x} has degree {} < 4",
            neighbors.len()
        )));
    }
    let (child_bt, _) = g.delete_vertex(x)?;
    if !viable(&child_bt) {
        return Err(cert_err(format!(
            "removing vertex {x} leaves an unusable graph"
        )));
    }
    let child_hash = graph_hash(&child_bt.union_graph());
    let child = certify::<S>(&child_bt, rng, trials, g.n(), budget)?;
    let step = Step::VertexAddition {
        vertex: x,
        neighbors,
        child_hash,
    };
    Ok(extend(child, step, g))
}

/// A child is worth recursing into only if it still satisfies the necessary
/// conditions the chain relies on.
fn viable(child: &BracedTriangulation) -> bool {
    !child.braces.is_empty() && child.union_graph().is_k_connected(4)
}

/// The triangulation itself is 4-connected: contract an edge that keeps the
/// chosen brace and stays 4-connected. The constructive search supplies the
/// first candidate; the remaining admissible edges back it up.
fn certify_four_connected<S: Scalar>(
    g: &BracedTriangulation,
    rng: &mut RandomSource,
    trials: usize,
    budget: &mut usize,
) -> Result<Certificate, BracedError> {
    let n = g.n();
    let &(x, y) = g.braces.iter().next().expect("braces nonempty");
    let s = path2_edges(&g.t, x, y)?;
    let mut candidates: Vec<Edge> = Vec::new();
    if n >= 7 {
        let uv0 = g.t.graph().edges()[0];
        if let Ok(c) = find_contractible_avoiding(&g.t, uv0, x, y) {
            candidates.push(c.edge);
        }
        for e in contractible_edges(&g.t)? {
            if !s.contains(&e) && !candidates.contains(&e) {
                candidates.push(e);
            }
        }
    } else {
        // the octahedron: every edge off the brace's midpoint star leads to K5
        candidates.extend(g.t.graph().edges().into_iter().filter(|e| !s.contains(e)));
    }
    let sub = BracedTriangulation::new(g.t.clone(), BTreeSet::from([(x, y)]))?;
    let mut last_err = cert_err("no admissible contraction preserves the brace");
    for e in candidates {
        match try_contract_candidate::<S>(g, &sub, e, rng, trials, budget, None) {
            Ok(cert) => return Ok(cert),
            Err(err) => last_err = err,
        }
    }
    Err(last_err)
}

/// A separating triangle enclosing a single vertex `x` (a K4 disk).
/// Contract `x` toward a cycle vertex avoided by one of its braces, or
/// failing that delete `x` and re-add it over its neighbors.
fn certify_small_disk<S: Scalar>(
    g: &BracedTriangulation,
    c1: &crate::triangulation::CycleInfo,
    rng: &mut RandomSource,
    trials: usize,
    budget: &mut usize,
) -> Result<Certificate, BracedError> {
    let x = *c1.inside.iter().next().expect("inside nonempty");
    let mut cycle_sorted = c1.vertices.clone();
    cycle_sorted.sort_unstable();

    for &(p, q) in &g.braces {
        let far = if p == x {
            q
        } else if q == x {
            p
        } else {
            continue;
        };
        for &z in &cycle_sorted {
            if g.t.graph().has_edge(z, far) {
                continue;
            }
            if let Ok(cert) =
                try_contract_candidate::<S>(g, g, edge(x, z), rng, trials, budget, None)
            {
                return Ok(cert);
            }
        }
    }
    // deletion fallback: x has triangulation degree three, so removing it
    // closes the disk
    try_delete_candidate::<S>(g, x, rng, trials, budget)
}

/// A separating triangle bounding a 4-connected disk. A brace leaves the
/// disk; gluing a single-brace coincident realization of the disk to the
/// outside witnesses the contraction of a disk-interior edge.
fn certify_big_disk<S: Scalar>(
    g: &BracedTriangulation,
    c1: &crate::triangulation::CycleInfo,
    rng: &mut RandomSource,
    trials: usize,
    budget: &mut usize,
) -> Result<Certificate, BracedError> {
    let n = g.n();
    let disk = g.t.induced_near_triangulation(c1);
    let mut cycle_sorted = c1.vertices.clone();
    cycle_sorted.sort_unstable();

    let Some((x, y)) = g.braces.iter().copied().find_map(|(p, q)| {
        if c1.inside.contains(&p) && !disk.vertices.contains(&q) {
            Some((p, q))
        } else if c1.inside.contains(&q) && !disk.vertices.contains(&p) {
            Some((q, p))
        } else {
            None
        }
    }) else {
        return Err(cert_err(
            "no brace from inside the separating triangle to the outside",
        ));
    };
    let (disk_graph, _) = disk.to_graph();
    if !disk_graph.is_k_connected(4) {
        return Err(cert_err("disk is neither K4 nor 4-connected"));
    }
    let z = *cycle_sorted
        .iter()
        .find(|&&z| !g.t.graph().has_edge(z, x))
        .ok_or_else(|| cert_err("every cycle vertex is adjacent to x"))?;

    let (t1, order) = disk.to_plane_triangulation()?;
    let to_local: BTreeMap<usize, usize> =
        order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let boundary_local: BTreeSet<usize> = c1.vertices.iter().map(|v| to_local[v]).collect();

    // interior contraction candidates: for the 6-vertex disk the unique edge
    // avoiding the boundary and x; otherwise the off-face search first, then
    // every other disk-contractible interior edge
    let mut local_candidates: Vec<Edge> = Vec::new();
    if t1.n() == 6 {
        let x_local = to_local[&x];
        local_candidates.extend(t1.graph().edges().into_iter().filter(|&(a, b)| {
            !boundary_local.contains(&a)
                && !boundary_local.contains(&b)
                && a != x_local
                && b != x_local
        }));
        if local_candidates.len() != 1 {
            return Err(cert_err("six-vertex disk interior edge is not unique"));
        }
    } else {
        let outer = t1.face_triple(t1.outer_face());
        if let Ok(c) = find_contractible_off_face(&t1, &outer) {
            local_candidates.push(c.edge);
        }
        for e in contractible_edges(&t1)? {
            if !boundary_local.contains(&e.0)
                && !boundary_local.contains(&e.1)
                && !local_candidates.contains(&e)
            {
                local_candidates.push(e);
            }
        }
    }

    let outside_verts: BTreeSet<usize> = c1
        .vertices
        .iter()
        .chain(c1.outside.iter())
        .copied()
        .collect();
    let mut last_err = cert_err("no disk-interior contraction certifies");
    for e_local in local_candidates {
        let e_host = edge(order[e_local.0], order[e_local.1]);

        // constructive coincident realization of T + xy at e_host: a
        // single-brace witness on the disk, glued to the outside part
        let Ok(g1) = BracedTriangulation::new(
            t1.clone(),
            BTreeSet::from([edge(to_local[&x], to_local[&z])]),
        ) else {
            continue;
        };
        let w1 = match coincident_witness::<S>(&g1, e_local, rng, trials) {
            Ok(w) => w,
            Err(err) => {
                last_err = err;
                continue;
            }
        };
        let mut g1_host = SimpleGraph::new(n);
        for (a, b) in w1.framework.graph.edges() {
            g1_host.add_edge(order[a], order[b])?;
        }
        let mut config: Vec<S> = crate::exact_linalg::random_config(n, D, rng);
        for (local, &host) in order.iter().enumerate() {
            config[host * D..(host + 1) * D].clone_from_slice(w1.framework.point(local));
        }
        let fw_host = Framework::new(g1_host, D, config);
        let mut g2_host = SimpleGraph::new(n);
        for (a, b) in g.t.graph().edges() {
            if outside_verts.contains(&a) && outside_verts.contains(&b) {
                g2_host.add_edge(a, b)?;
            }
        }
        let glued = glue(&fw_host, &g2_host, x, y, z, rng)?;
        if glued.point(e_host.0) != glued.point(e_host.1) {
            return Err(cert_err("glued realization lost the coincident pair"));
        }

        let meta = GlueMeta {
            cycle: c1.vertices.clone(),
            inside: c1.inside.iter().copied().collect(),
            t1: disk.vertices.iter().copied().collect(),
            x,
            y,
            z,
        };
        match try_contract_candidate::<S>(g, g, e_host, rng, trials, budget, Some(meta)) {
            Ok(cert) => return Ok(cert),
            Err(err) => last_err = err,
        }
    }
    Err(last_err)
}

/// A coincident-realization witness for a 4-connected triangulation with a
/// single brace: the direct rank witness plus the constructed realization.
#[derive(Debug, Clone)]
pub struct CoincidentWitness<S> {
    pub pair: Edge,
    pub witness: Witness,
    pub framework: Framework<S>,
    /// Number of constructive stages (contractions plus the base sample).
    pub chain_length: usize,
}

/// Coincident-realization constructor: every edge `uv` of a 4-connected
/// triangulation with exactly one brace admits an infinitesimally rigid
/// `uv`-coincident realization. The primary output is the rank witness; the
/// realization itself is built by contracting down to the 6-vertex base case
/// and realizing the splits back up.
pub fn coincident_witness<S: Scalar>(
    g: &BracedTriangulation,
    uv: Edge,
    rng: &mut RandomSource,
    trials: usize,
) -> Result<CoincidentWitness<S>, BracedError> {
    if g.braces.len() != 1 {
        return Err(BracedError::InvalidInput(format!(
            "need exactly one brace, got {}",
            g.braces.len()
        )));
    }
    if !g.t.is_four_connected() {
        return Err(BracedError::InvalidInput(
            "triangulation must be 4-connected".into(),
        ));
    }
    if !g.t.graph().has_edge(uv.0, uv.1) {
        return Err(BracedError::InvalidInput(format!(
            "{uv:?} is not a triangulation edge"
        )));
    }
    let union = g.union_graph();
    let witness = coincident_witness_rank::<S>(&union, uv, rng, trials)
        .map_err(|_| cert_err(format!("coincident witness failed at {uv:?}")))?;
    let (framework, chain_length) = build_coincident_realization::<S>(g, uv, rng)?;
    debug_assert!(is_inf_rigid(&framework));
    debug_assert_eq!(framework.point(uv.0), framework.point(uv.1));
    Ok(CoincidentWitness {
        pair: uv,
        witness,
        framework,
        chain_length,
    })
}

fn sample_coincident_rigid<S: Scalar>(
    g: &SimpleGraph,
    pair: Edge,
    rng: &mut RandomSource,
) -> Result<Framework<S>, BracedError> {
    for _ in 0..MAX_ATTEMPTS {
        let config = coincident_config::<S>(g.n(), D, CoincidentSpec::new(pair.0, pair.1), rng);
        let fw = Framework::new(g.clone(), D, config);
        if is_inf_rigid(&fw) {
            return Ok(fw);
        }
    }
    Err(cert_err(format!(
        "no rigid coincident configuration found at {pair:?}"
    )))
}

/// Undo a contraction on a realized framework: split the merged vertex back,
/// keeping the merged point on `anchor` and placing `other` freshly.
fn realize_uncontraction<S: Scalar>(
    child_fw: &Framework<S>,
    parent_union: &SimpleGraph,
    map: &[usize],
    anchor: usize,
    other: usize,
    rng: &mut RandomSource,
) -> Result<Framework<S>, BracedError> {
    debug_assert_eq!(map[anchor], map[other]);
    let m = map[anchor];
    let side1: BTreeSet<usize> = parent_union
        .neighbors(anchor)
        .iter()
        .filter(|&&w| w != other)
        .map(|&w| map[w])
        .collect();
    let side2: BTreeSet<usize> = parent_union
        .neighbors(other)
        .iter()
        .filter(|&&w| w != anchor)
        .map(|&w| map[w])
        .collect();
    let split = VertexSplit {
        v: m,
        side1,
        side2,
    };
    let out = realize_vertex_split(child_fw, &split, rng)?;
    let new_id = child_fw.graph.n();
    let mut config = Vec::with_capacity(parent_union.n() * D);
    for (w, &mapped) in map.iter().enumerate().take(parent_union.n()) {
        let src = if w == other { new_id } else { mapped };
        config.extend_from_slice(out.point(src));
    }
    debug_assert!(parent_union.edges().iter().all(|&(a, b)| {
        let sa = if a == other { new_id } else { map[a] };
        let sb = if b == other { new_id } else { map[b] };
        out.graph.has_edge(sa, sb)
    }));
    debug_assert_eq!(parent_union.m(), out.graph.m());
    Ok(Framework::new(parent_union.clone(), D, config))
}

fn build_coincident_realization<S: Scalar>(
    g: &BracedTriangulation,
    uv: Edge,
    rng: &mut RandomSource,
) -> Result<(Framework<S>, usize), BracedError> {
    let n = g.n();
    let union = g.union_graph();
    let &(x, y) = g.braces.iter().next().expect("one brace");
    if n == 6 {
        // base case: the octahedron. The two faces at uv leave a unique
        // opposite edge; if the brace interferes with it, sample a coincident
        // configuration directly, otherwise contract to K5 and split back.
        let (f1, f2) = g.t.faces_at_edge(uv.0, uv.1)?;
        let mut covered: BTreeSet<usize> = g.t.face_vertex_set(f1);
        covered.extend(g.t.face_vertex_set(f2));
        let rest: Vec<usize> = (0..n).filter(|w| !covered.contains(w)).collect();
        if rest.len() != 2 || !g.t.graph().has_edge(rest[0], rest[1]) {
            return Err(cert_err("octahedron base case is malformed"));
        }
        let opposite = edge(rest[0], rest[1]);
        let s = path2_edges(&g.t, x, y)?;
        if s.contains(&opposite) {
            let fw = sample_coincident_rigid::<S>(&union, uv, rng)?;
            return Ok((fw, 1));
        }
        let bc = g.contract(opposite)?;
        let child_union = bc.result.union_graph();
        if !child_union.is_complete() {
            return Err(cert_err("contracted octahedron base is not complete"));
        }
        let pair = edge(bc.contraction.map[uv.0], bc.contraction.map[uv.1]);
        let child_fw = sample_coincident_rigid::<S>(&child_union, pair, rng)?;
        let fw = realize_uncontraction(
            &child_fw,
            &union,
            &bc.contraction.map,
            opposite.0,
            opposite.1,
            rng,
        )?;
        return Ok((fw, 2));
    }

    let choice = find_contractible_avoiding(&g.t, uv, x, y)?;
    let e = choice.edge;
    let bc = g.contract(e)?;
    if bc.result.braces.len() != 1 {
        return Err(cert_err("brace did not survive the witness contraction"));
    }
    let pair = edge(bc.contraction.map[uv.0], bc.contraction.map[uv.1]);
    if pair.0 == pair.1 || !bc.result.t().graph().has_edge(pair.0, pair.1) {
        return Err(cert_err("coincident pair collapsed during contraction"));
    }
    let (child_fw, chain) = build_coincident_realization::<S>(&bc.result, pair, rng)?;
    // the endpoint shared with uv (if any) must keep the merged point so the
    // coincidence survives the split
    let (anchor, other) = if e.0 == uv.0 || e.0 == uv.1 {
        (e.0, e.1)
    } else if e.1 == uv.0 || e.1 == uv.1 {
        (e.1, e.0)
    } else {
        (e.0, e.1)
    };
    let fw = realize_uncontraction(&child_fw, &union, &bc.contraction.map, anchor, other, rng)?;
    if fw.point(uv.0) != fw.point(uv.1) {
        return Err(cert_err("coincidence lost while realizing the split"));
    }
    Ok((fw, chain + 1))
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("certificate verification failed at step {step}: {detail}")]
pub struct VerifyError {
    pub step: usize,
    pub detail: String,
}

/// Replay a certificate against a target: every graph derivation is
/// recomputed, every rank witness is replayed at its recorded seed and
/// re-derived at fresh seeds, and the chain must end at the target graph.
pub fn verify_certificate(
    cert: &Certificate,
    target: &BracedTriangulation,
    rng: &mut RandomSource,
    trials: usize,
) -> Result<(), VerifyError> {
    fn fail<T>(step: usize, detail: impl Into<String>) -> Result<T, VerifyError> {
        Err(VerifyError {
            step,
            detail: detail.into(),
        })
    }

    let Some(Step::BaseK5 { vertices }) = cert.steps.first() else {
        return fail(0, "certificate must start from the K5 base");
    };
    if *vertices != vec![0, 1, 2, 3, 4] {
        return fail(0, "base vertices must be 0..4");
    }
    let mut cur = SimpleGraph::complete(5);

    for (idx, step) in cert.steps.iter().enumerate().skip(1) {
        // decomposition metadata of glue steps must be internally consistent
        if let Step::Glue {
            cycle,
            inside,
            t1,
            x,
            y,
            z,
            ..
        } = step
        {
            let cy: BTreeSet<usize> = cycle.iter().copied().collect();
            let ins: BTreeSet<usize> = inside.iter().copied().collect();
            let disk: BTreeSet<usize> = t1.iter().copied().collect();
            if cy.len() != 3 || cycle.len() != 3 {
                return fail(idx, "glue cycle must be a triangle");
            }
            if !ins.contains(x) || !cy.contains(z) || disk.contains(y) {
                return fail(idx, "glue roles do not match the decomposition");
            }
            if !cy.is_disjoint(&ins) || disk != cy.union(&ins).copied().collect() {
                return fail(idx, "glue disk must be the cycle plus its inside");
            }
        }
        match step {
            Step::BaseK5 { .. } => return fail(idx, "unexpected base step"),
            Step::Contract {
                edge: e,
                child_hash,
                side_a,
                side_b,
                augment,
                witness,
            }
            | Step::Glue {
                edge: e,
                child_hash,
                side_a,
                side_b,
                augment,
                witness,
                ..
            } => {
                if graph_hash(&cur) != *child_hash {
                    return fail(idx, "child graph hash mismatch");
                }
                let (a, b) = *e;
                if a >= b || b > cur.n() || a >= cur.n() {
                    return fail(idx, "malformed split edge");
                }
                let sa: BTreeSet<usize> = side_a.iter().copied().collect();
                let sb: BTreeSet<usize> = side_b.iter().copied().collect();
                if sa.len() != side_a.len() || sb.len() != side_b.len() {
                    return fail(idx, "duplicate vertices in split sides");
                }
                if sa.intersection(&sb).count() != D - 1 {
                    return fail(idx, "split sides must share exactly two vertices");
                }
                if [a, b].iter().any(|w| sa.contains(w) || sb.contains(w)) {
                    return fail(idx, "split sides touch the split pair");
                }
                let psi = |w: usize| if w >= b { w + 1 } else { w };
                let merged_nbrs: BTreeSet<usize> =
                    cur.neighbors(a).iter().map(|&w| psi(w)).collect();
                let union: BTreeSet<usize> = sa.union(&sb).copied().collect();
                if union != merged_nbrs {
                    return fail(idx, "split sides do not cover the merged neighborhood");
                }
                let mut h = SimpleGraph::new(cur.n() + 1);
                for (p, q) in cur.edges() {
                    if p != a && q != a && h.add_edge(psi(p), psi(q)).is_err() {
                        return fail(idx, "split produced an invalid edge");
                    }
                }
                for &w in &sa {
                    if h.add_edge(a, w).is_err() {
                        return fail(idx, "invalid side edge");
                    }
                }
                for &w in &sb {
                    if h.add_edge(b, w).is_err() {
                        return fail(idx, "invalid side edge");
                    }
                }
                h.add_edge(a, b).expect("split pair is a valid edge");

                let target_rank = max_rank(h.n(), D);
                if witness.rank != target_rank {
                    return fail(idx, "witness rank is not the rigidity threshold");
                }
                match coincident_rank_in(witness.field(), &h, (a, b), witness.seed) {
                    None => return fail(idx, "witness names an unsupported field"),
                    Some(r) if r != witness.rank => {
                        return fail(idx, "witness rank does not replay at its seed")
                    }
                    Some(_) => {}
                }
                let mut reproduced = false;
                for _ in 0..trials.max(1) {
                    let s = rng.next_u64();
                    if coincident_rank_in(witness.field(), &h, (a, b), s) == Some(target_rank) {
                        reproduced = true;
                        break;
                    }
                }
                if !reproduced {
                    return fail(idx, "coincident rank not reproducible at fresh seeds");
                }
                for &(p, q) in augment {
                    if p == q || q >= h.n() || h.has_edge(p, q) {
                        return fail(idx, "invalid augment edge");
                    }
                    h.add_edge(p, q).expect("checked above");
                }
                if let Step::Glue { x, y, .. } = step {
                    if *x >= h.n() || *y >= h.n() || !h.has_edge(*x, *y) {
                        return fail(idx, "glue brace is not an edge of the result");
                    }
                }
                cur = h;
            }
            Step::VertexAddition {
                vertex,
                neighbors,
                child_hash,
            } => {
                if graph_hash(&cur) != *child_hash {
                    return fail(idx, "child graph hash mismatch");
                }
                let x = *vertex;
                if x > cur.n() {
                    return fail(idx, "vertex id out of range");
                }
                let nbset: BTreeSet<usize> = neighbors.iter().copied().collect();
                if nbset.len() != neighbors.len() {
                    return fail(idx, "duplicate neighbors");
                }
                if nbset.len() < D + 1 {
                    return fail(idx, "vertex addition needs at least four neighbors");
                }
                let psi = |w: usize| if w >= x { w + 1 } else { w };
                let mut h = SimpleGraph::new(cur.n() + 1);
                for (p, q) in cur.edges() {
                    h.add_edge(psi(p), psi(q)).expect("relabeled edge");
                }
                for &w in &nbset {
                    if w == x || w >= h.n() {
                        return fail(idx, "neighbor out of range");
                    }
                    h.add_edge(x, w).expect("new vertex edge");
                }
                cur = h;
            }
        }
    }

    if graph_hash(&cur) != cert.target_hash {
        return fail(cert.steps.len(), "target hash mismatch");
    }
    if cur != target.union_graph() {
        return fail(
            cert.steps.len(),
            "reconstructed graph differs from the target",
        );
    }
    Ok(())
}
