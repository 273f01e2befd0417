//! Randomized global-rigidity oracle and related checks.
//!
//! The oracle uses the standard stress-matrix criterion for generic global
//! rigidity: a graph on `n >= d + 2` vertices is generically globally rigid
//! in `R^d` iff some generic framework is infinitesimally rigid and carries
//! an equilibrium stress whose stress matrix has rank `n - d - 1`. For
//! `n <= d + 1` the globally rigid graphs are exactly the complete ones.
//! This criterion is imported background, not something established here; we
//! evaluate it exactly over random field configurations, so a positive
//! verdict can only err with the usual polynomial-identity probability and a
//! negative rank witness is exact.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::braced::{graph_hash, Certificate, Step, Witness};
use crate::exact_linalg::{FieldSpec, Matrix, RandomSource, Scalar};
use crate::graph::{Edge, SimpleGraph};
use crate::rigidity::{
    apply_vertex_split, coincident_rank, generic_rank, max_rank, rigidity_matrix, CoincidentSpec,
    Framework, RigidityError, VertexSplit,
};

#[derive(Debug, Error)]
pub enum GlobalRigidityError {
    #[error("edge weights are not an equilibrium stress")]
    NotEquilibrium,
    #[error("certificate does not match the supplied parent graph")]
    CertificateMismatch,
    #[error("the split result admits no full-rank coincident realization (rank {rank} < {target})")]
    CoincidentRankDeficient { rank: usize, target: usize },
    #[error(transparent)]
    Rigidity(#[from] RigidityError),
}

/// An equilibrium stress: one weight per edge, in sorted edge order, lying in
/// the kernel of the transposed rigidity matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stress<S> {
    pub omega: Vec<S>,
}

/// Basis of the equilibrium-stress space of a framework; its size is
/// `|E| - rank`.
pub fn stress_basis<S: Scalar>(fw: &Framework<S>) -> Vec<Stress<S>> {
    rigidity_matrix(fw)
        .transpose()
        .kernel_basis()
        .into_iter()
        .map(|omega| Stress { omega })
        .collect()
}

/// The `n x n` stress matrix of an equilibrium stress: `-w_uv` off diagonal
/// for edges, zero for non-adjacent pairs, diagonal entries making every row
/// sum to zero. It annihilates the all-ones vector and each coordinate
/// vector of the configuration.
pub fn stress_matrix_of<S: Scalar>(
    fw: &Framework<S>,
    stress: &Stress<S>,
) -> Result<Matrix<S>, GlobalRigidityError> {
    let edges = fw.graph.edges();
    assert_eq!(stress.omega.len(), edges.len(), "stress length mismatch");
    let residual = rigidity_matrix(fw).transpose().mul_vec(&stress.omega);
    if residual.iter().any(|x| !x.is_zero()) {
        return Err(GlobalRigidityError::NotEquilibrium);
    }
    let n = fw.graph.n();
    let mut m = Matrix::zero(n, n);
    for (&(u, v), w) in edges.iter().zip(&stress.omega) {
        m.set(u, v, -w.clone());
        m.set(v, u, -w.clone());
        let du = m.get(u, u).clone() + w.clone();
        m.set(u, u, du);
        let dv = m.get(v, v).clone() + w.clone();
        m.set(v, v, dv);
    }
    Ok(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict3 {
    GloballyRigid,
    NotGloballyRigid,
    Inconclusive,
}

/// Oracle verdict plus the data needed to reproduce it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlobalRigidityVerdict {
    pub verdict: Verdict3,
    pub seed: u64,
    pub field: FieldSpec,
    /// Best rigidity-matrix rank observed, and the rank needed for rigidity.
    pub rigidity_rank: usize,
    pub rigidity_target: usize,
    /// Best stress-matrix rank observed, and the rank certifying global
    /// rigidity (`n - d - 1`); `None` when the rigidity screen already failed.
    pub stress_rank: Option<usize>,
    pub stress_target: usize,
    pub reason: &'static str,
}

impl GlobalRigidityVerdict {
    pub fn is_globally_rigid(&self) -> bool {
        self.verdict == Verdict3::GloballyRigid
    }
}

/// Randomized global-rigidity test. Negative stress-rank witnesses are exact;
/// positive verdicts hold up to the random-evaluation failure probability.
pub fn check_global_rigidity<S: Scalar>(
    g: &SimpleGraph,
    d: usize,
    rng: &mut RandomSource,
    trials: usize,
) -> GlobalRigidityVerdict {
    let n = g.n();
    let mut src = rng.fork();
    let seed = src.seed();
    let field = S::field_spec();
    let rigidity_target = max_rank(n, d);
    let stress_target = n.saturating_sub(d + 1);

    if n <= d + 1 {
        // affine regime: globally rigid iff complete
        let complete = g.is_complete();
        let r = generic_rank::<S>(g, d, &mut src, 1);
        return GlobalRigidityVerdict {
            verdict: if complete {
                Verdict3::GloballyRigid
            } else {
                Verdict3::NotGloballyRigid
            },
            seed,
            field,
            rigidity_rank: r,
            rigidity_target,
            stress_rank: None,
            stress_target,
            reason: if complete {
                "complete graph on at most d+1 vertices"
            } else {
                "incomplete graph on at most d+1 vertices"
            },
        };
    }

    let mut best_rank = 0;
    let mut best_stress: Option<usize> = None;
    for _ in 0..trials.max(1) {
        let fw = Framework::<S>::random(g.clone(), d, &mut src);
        let r = rigidity_matrix(&fw).rank();
        best_rank = best_rank.max(r);
        if r < rigidity_target {
            continue; // not rigid at this configuration
        }
        let basis = stress_basis(&fw);
        if basis.is_empty() {
            // isostatic: no framework carries a nonzero stress
            best_stress = Some(0);
            break;
        }
        // a random combination of the kernel basis attains the maximal
        // stress-matrix rank generically
        let mut omega = vec![S::zero(); g.m()];
        for b in &basis {
            let c = S::sample(&mut src);
            for (acc, x) in omega.iter_mut().zip(&b.omega) {
                *acc += c.clone() * x.clone();
            }
        }
        let sm = stress_matrix_of(&fw, &Stress { omega })
            .expect("kernel combinations are equilibrium stresses");
        let sr = sm.rank();
        best_stress = Some(best_stress.map_or(sr, |b| b.max(sr)));
    }

    if best_rank < rigidity_target {
        return GlobalRigidityVerdict {
            verdict: Verdict3::NotGloballyRigid,
            seed,
            field,
            rigidity_rank: best_rank,
            rigidity_target,
            stress_rank: None,
            stress_target,
            reason: "not generically rigid",
        };
    }
    match best_stress {
        Some(sr) if sr == stress_target => GlobalRigidityVerdict {
            verdict: Verdict3::GloballyRigid,
            seed,
            field,
            rigidity_rank: best_rank,
            rigidity_target,
            stress_rank: Some(sr),
            stress_target,
            reason: "rigid with a maximal-rank equilibrium stress",
        },
        Some(0) => GlobalRigidityVerdict {
            verdict: Verdict3::NotGloballyRigid,
            seed,
            field,
            rigidity_rank: best_rank,
            rigidity_target,
            stress_rank: Some(0),
            stress_target,
            reason: "isostatic: no nonzero equilibrium stress",
        },
        Some(sr) => GlobalRigidityVerdict {
            verdict: Verdict3::NotGloballyRigid,
            seed,
            field,
            rigidity_rank: best_rank,
            rigidity_target,
            stress_rank: Some(sr),
            stress_target,
            reason: "stress matrix rank deficient",
        },
        None => GlobalRigidityVerdict {
            verdict: Verdict3::Inconclusive,
            seed,
            field,
            rigidity_rank: best_rank,
            rigidity_target,
            stress_rank: None,
            stress_target,
            reason: "no trial produced a usable configuration",
        },
    }
}

/// Necessary conditions for global rigidity of graphs on at least five
/// vertices: `(d+1)`-connectivity and redundant rigidity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NecessityReport {
    pub connectivity_ok: bool,
    pub redundantly_rigid: bool,
    /// An edge whose removal drops the generic rank, if any.
    pub failing_edge: Option<Edge>,
}

impl NecessityReport {
    pub fn satisfied(&self) -> bool {
        self.connectivity_ok && self.redundantly_rigid
    }
}

pub fn necessity_check<S: Scalar>(
    g: &SimpleGraph,
    d: usize,
    rng: &mut RandomSource,
) -> NecessityReport {
    assert!(g.n() >= 5, "necessity conditions apply from five vertices up");
    let connectivity_ok = g.is_k_connected(d + 1);
    let target = d * g.n() - (d + 1) * d / 2;
    let mut failing_edge = None;
    for (u, v) in g.edges() {
        let mut h = g.clone();
        h.remove_edge(u, v);
        if generic_rank::<S>(&h, d, rng, 2) != target {
            failing_edge = Some((u, v));
            break;
        }
    }
    NecessityReport {
        connectivity_ok,
        redundantly_rigid: failing_edge.is_none(),
        failing_edge,
    }
}

/// Extend a global-rigidity certificate across a vertex split.
///
/// Checks that the split result admits an infinitesimally rigid realization
/// with the two split vertices coincident (which, together with the parent's
/// global rigidity, makes the result generically globally rigid) and appends
/// the corresponding step with its rank witness.
pub fn certify_split_global<S: Scalar>(
    parent_cert: &Certificate,
    parent_graph: &SimpleGraph,
    split: &VertexSplit,
    d: usize,
    rng: &mut RandomSource,
    trials: usize,
) -> Result<Certificate, GlobalRigidityError> {
    if parent_cert.target_hash != graph_hash(parent_graph) {
        return Err(GlobalRigidityError::CertificateMismatch);
    }
    let child = apply_vertex_split(parent_graph, split, d)?;
    let pair = CoincidentSpec::new(split.v, parent_graph.n());
    let target = max_rank(child.n(), d);
    let mut best = 0;
    let mut witness = None;
    for _ in 0..trials.max(1) {
        let seed = rng.next_u64();
        let r = coincident_rank::<S>(&child, pair, d, &mut RandomSource::new(seed), 1);
        best = best.max(r);
        if r == target {
            witness = Some(Witness::new(seed, S::field_spec(), r));
            break;
        }
    }
    let Some(witness) = witness else {
        return Err(GlobalRigidityError::CoincidentRankDeficient { rank: best, target });
    };
    let mut steps = parent_cert.steps.clone();
    steps.push(Step::Contract {
        edge: (split.v, parent_graph.n()),
        child_hash: parent_cert.target_hash,
        side_a: split.side1.iter().copied().collect(),
        side_b: split.side2.iter().copied().collect(),
        augment: Vec::new(),
        witness,
    });
    Ok(Certificate {
        target_hash: graph_hash(&child),
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::rigidity::is_inf_rigid;
    use crate::{Fq, Rat};
    use num_traits::Zero;
    use std::collections::BTreeSet;

    fn braced_octahedron() -> SimpleGraph {
        let mut g = generate::octahedron().graph().clone();
        g.add_edge(4, 5).unwrap();
        g
    }

    #[test]
    fn stress_basis_sizes() {
        let mut rng = RandomSource::new(30);
        let k5 = Framework::<Fq>::random(SimpleGraph::complete(5), 3, &mut rng);
        assert_eq!(stress_basis(&k5).len(), 1);
        let o6 = Framework::<Fq>::random(generate::octahedron().graph().clone(), 3, &mut rng);
        assert_eq!(stress_basis(&o6).len(), 0);
        let ob = Framework::<Fq>::random(braced_octahedron(), 3, &mut rng);
        assert_eq!(stress_basis(&ob).len(), 1);
    }

    #[test]
    fn zero_stress_gives_zero_matrix() {
        let mut rng = RandomSource::new(31);
        let fw = Framework::<Fq>::random(SimpleGraph::complete(5), 3, &mut rng);
        let s = Stress {
            omega: vec![Fq::zero(); 10],
        };
        let m = stress_matrix_of(&fw, &s).unwrap();
        assert_eq!(m.rank(), 0);
    }

    #[test]
    fn stress_matrix_ranks() {
        let mut rng = RandomSource::new(32);
        let fw = Framework::<Fq>::random(SimpleGraph::complete(5), 3, &mut rng);
        let basis = stress_basis(&fw);
        let m = stress_matrix_of(&fw, &basis[0]).unwrap();
        assert_eq!(m.rank(), 1); // 5 - 3 - 1
        let fw = Framework::<Fq>::random(braced_octahedron(), 3, &mut rng);
        let basis = stress_basis(&fw);
        let m = stress_matrix_of(&fw, &basis[0]).unwrap();
        assert_eq!(m.rank(), 2); // 6 - 3 - 1

        // stress matrices annihilate the configuration coordinates
        let ones: Vec<Fq> = vec![num_traits::One::one(); 6];
        assert!(m.mul_vec(&ones).iter().all(Zero::is_zero));
    }

    #[test]
    fn non_stress_rejected() {
        let mut rng = RandomSource::new(33);
        let fw = Framework::<Fq>::random(SimpleGraph::complete(5), 3, &mut rng);
        assert!(is_inf_rigid(&fw));
        let mut omega = vec![Fq::zero(); 10];
        omega[0] = num_traits::One::one();
        assert!(matches!(
            stress_matrix_of(&fw, &Stress { omega }),
            Err(GlobalRigidityError::NotEquilibrium)
        ));
    }

    #[test]
    fn k5_is_globally_rigid() {
        let mut rng = RandomSource::new(34);
        let v = check_global_rigidity::<Fq>(&SimpleGraph::complete(5), 3, &mut rng, 3);
        assert_eq!(v.verdict, Verdict3::GloballyRigid);
        assert_eq!(v.stress_rank, Some(1));
    }

    #[test]
    fn bare_octahedron_is_not() {
        let mut rng = RandomSource::new(35);
        let v = check_global_rigidity::<Fq>(generate::octahedron().graph(), 3, &mut rng, 3);
        assert_eq!(v.verdict, Verdict3::NotGloballyRigid);
        assert_eq!(v.stress_rank, Some(0));
    }

    #[test]
    fn braced_octahedron_is_globally_rigid() {
        let mut rng = RandomSource::new(36);
        let v = check_global_rigidity::<Fq>(&braced_octahedron(), 3, &mut rng, 3);
        assert_eq!(v.verdict, Verdict3::GloballyRigid);
        assert_eq!(v.stress_rank, Some(2));
    }

    #[test]
    fn complete_graphs_low_dimensions() {
        let mut rng = RandomSource::new(37);
        for d in 1..=3 {
            let g = SimpleGraph::complete(d + 2);
            let v = check_global_rigidity::<Fq>(&g, d, &mut rng, 3);
            assert_eq!(v.verdict, Verdict3::GloballyRigid, "K_{} in d={}", d + 2, d);
        }
        // and the affine regime
        let v = check_global_rigidity::<Fq>(&SimpleGraph::complete(4), 3, &mut rng, 1);
        assert_eq!(v.verdict, Verdict3::GloballyRigid);
        let mut notk4 = SimpleGraph::complete(4);
        notk4.remove_edge(0, 1);
        let v = check_global_rigidity::<Fq>(&notk4, 3, &mut rng, 1);
        assert_eq!(v.verdict, Verdict3::NotGloballyRigid);
    }

    #[test]
    fn verdicts_reproduce_and_agree_over_rationals() {
        let g = braced_octahedron();
        let a = check_global_rigidity::<Fq>(&g, 3, &mut RandomSource::new(5), 2);
        let b = check_global_rigidity::<Fq>(&g, 3, &mut RandomSource::new(5), 2);
        assert_eq!(a, b);
        let q = check_global_rigidity::<Rat>(&g, 3, &mut RandomSource::new(5), 1);
        assert_eq!(q.verdict, Verdict3::GloballyRigid);
    }

    #[test]
    fn stress_rank_never_exceeds_target() {
        let mut rng = RandomSource::new(38);
        for seed in 0..4 {
            let t = generate::flip_walk(8, 50, seed, true).unwrap();
            let mut g = t.graph().clone();
            // brace a non-adjacent pair
            'out: for u in 0..g.n() {
                for v in u + 1..g.n() {
                    if !g.has_edge(u, v) {
                        g.add_edge(u, v).unwrap();
                        break 'out;
                    }
                }
            }
            let v = check_global_rigidity::<Fq>(&g, 3, &mut rng, 2);
            if let Some(sr) = v.stress_rank {
                assert!(sr <= v.stress_target);
            }
        }
    }

    #[test]
    fn necessity_examples() {
        let mut rng = RandomSource::new(39);
        let r = necessity_check::<Fq>(&braced_octahedron(), 3, &mut rng);
        assert!(r.satisfied());
        let r = necessity_check::<Fq>(generate::octahedron().graph(), 3, &mut rng);
        assert!(r.connectivity_ok);
        assert!(!r.redundantly_rigid);
        let r = necessity_check::<Fq>(&SimpleGraph::complete(5), 3, &mut rng);
        assert!(r.satisfied());
    }

    #[test]
    fn split_certification_to_braced_octahedron() {
        // contract an octahedron rim edge against the orthogonal brace: the
        // result is K5, and inverting that contraction is a vertex split
        let mut rng = RandomSource::new(40);
        let base = Certificate::base_k5();
        // rim edge (0,1) of the braced octahedron (brace 4-5) contracts to K5;
        // the inverse split of K5 at vertex 0 reproduces it
        let g = braced_octahedron();
        let side1: BTreeSet<usize> = g.neighbors(0).iter().copied().filter(|&w| w != 1).collect();
        let side2: BTreeSet<usize> = g.neighbors(1).iter().copied().filter(|&w| w != 0).collect();
        // relabel through the contraction: 1 disappears, ids above shift down
        let relabel = |w: usize| if w > 1 { w - 1 } else { w };
        let split = VertexSplit {
            v: 0,
            side1: side1.into_iter().map(relabel).collect(),
            side2: side2.into_iter().map(relabel).collect(),
        };
        let k5 = SimpleGraph::complete(5);
        let cert = certify_split_global::<Fq>(&base, &k5, &split, 3, &mut rng, 3).unwrap();
        assert_eq!(cert.steps.len(), 2);
        // the certified graph is the braced octahedron up to the relabeling
        let child = apply_vertex_split(&k5, &split, 3).unwrap();
        assert_eq!(child.n(), 6);
        assert_eq!(child.m(), 13);
        assert_eq!(
            check_global_rigidity::<Fq>(&child, 3, &mut rng, 3).verdict,
            Verdict3::GloballyRigid
        );
    }

    #[test]
    fn deficient_split_is_rejected() {
        let mut rng = RandomSource::new(41);
        let base = Certificate::base_k5();
        let k5 = SimpleGraph::complete(5);
        // v' keeps only the two shared neighbors: coincident rank stays short
        let split = VertexSplit {
            v: 0,
            side1: BTreeSet::from([1, 2]),
            side2: BTreeSet::from([1, 2, 3, 4]),
        };
        assert!(matches!(
            certify_split_global::<Fq>(&base, &k5, &split, 3, &mut rng, 3),
            Err(GlobalRigidityError::CoincidentRankDeficient { .. })
        ));
    }

    #[test]
    fn invalid_split_is_rejected() {
        let mut rng = RandomSource::new(42);
        let base = Certificate::base_k5();
        let k5 = SimpleGraph::complete(5);
        let split = VertexSplit {
            v: 0,
            side1: BTreeSet::from([1, 2, 3, 4]),
            side2: BTreeSet::from([1]),
        };
        assert!(matches!(
            certify_split_global::<Fq>(&base, &k5, &split, 3, &mut rng, 3),
            Err(GlobalRigidityError::Rigidity(RigidityError::InvalidSplit(_)))
        ));
    }
}
