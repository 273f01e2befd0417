//! Randomized structural invariants.

use std::collections::BTreeSet;

use proptest::prelude::*;

use tririg_core::contractible::contractible_edges;
use tririg_core::exact_linalg::{Matrix, RandomSource, Scalar};
use tririg_core::generate;
use tririg_core::rigidity::{apply_vertex_split, VertexSplit};
use tririg_core::triangulation::canonical_cycle;
use tririg_core::{Fq, FqAlt};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Flip walks always produce valid triangulations, and the
    /// separating-triangle test agrees with exhaustive 4-connectivity.
    #[test]
    fn flip_walks_revalidate(n in 6usize..12, steps in 0usize..150, seed in any::<u64>()) {
        let t = generate::flip_walk(n, steps, seed, false).unwrap();
        prop_assert_eq!(t.n(), n);
        prop_assert_eq!(t.m(), 3 * n - 6);
        prop_assert_eq!(t.faces().len(), 2 * n - 4);
        prop_assert_eq!(
            t.separating_triangles().is_empty() && t.n() > 4,
            t.graph().is_k_connected(4)
        );
    }

    /// An edge of a 4-connected triangulation lies on no separating 4-cycle
    /// exactly when its contraction has no separating triangle.
    #[test]
    fn contraction_cross_check(n in 7usize..11, seed in any::<u64>()) {
        let t = generate::flip_walk(n, 12 * n, seed, true).unwrap();
        let good = contractible_edges(&t).unwrap();
        for e in t.graph().edges() {
            let c = t.contract(e.0, e.1).unwrap();
            prop_assert_eq!(c.result.n(), n - 1);
            prop_assert_eq!(c.result.m(), t.m() - 3);
            let stays = c.result.separating_triangles().is_empty();
            prop_assert_eq!(good.contains(&e), stays, "edge {:?}", e);
        }
    }

    /// Contracting the split edge of a vertex split recovers the original
    /// graph.
    #[test]
    fn split_round_trip(n in 6usize..11, seed in any::<u64>(), pick in any::<u64>()) {
        let t = generate::flip_walk(n, 60, seed, false).unwrap();
        let g = t.graph();
        let mut rng = RandomSource::new(pick);
        let v = rng.below(n as u64) as usize;
        let nbrs: Vec<usize> = g.neighbors(v).iter().copied().collect();
        prop_assume!(nbrs.len() >= 2);
        let s1 = nbrs[rng.below(nbrs.len() as u64) as usize];
        let s2 = loop {
            let c = nbrs[rng.below(nbrs.len() as u64) as usize];
            if c != s1 { break c; }
        };
        let mut side1: BTreeSet<usize> = BTreeSet::from([s1, s2]);
        let mut side2: BTreeSet<usize> = BTreeSet::from([s1, s2]);
        for &w in &nbrs {
            if w != s1 && w != s2 {
                if rng.below(2) == 0 { side1.insert(w); } else { side2.insert(w); }
            }
        }
        let split = VertexSplit { v, side1, side2 };
        let h = apply_vertex_split(g, &split, 3).unwrap();
        let (back, _) = h.contract_edge(v, g.n());
        prop_assert_eq!(&back, g);
    }

    /// Rank agrees with the transposed rank, over both primes.
    #[test]
    fn rank_transpose_and_prime_agreement(rows in 1usize..7, cols in 1usize..7, seed in any::<u64>()) {
        let mut a = RandomSource::new(seed);
        let mut b = RandomSource::new(seed);
        let m1: Matrix<Fq> = Matrix::from_rows(
            (0..rows).map(|_| (0..cols).map(|_| Fq::sample(&mut a)).collect()).collect());
        let m2: Matrix<FqAlt> = Matrix::from_rows(
            (0..rows).map(|_| (0..cols).map(|_| FqAlt::sample(&mut b)).collect()).collect());
        prop_assert_eq!(m1.rank(), m1.transpose().rank());
        // the two streams draw the same 62-bit values, so the matrices carry
        // the same integer entries reduced by different primes
        prop_assert_eq!(m1.rank(), m2.rank());
        for v in m1.kernel_basis() {
            prop_assert!(m1.mul_vec(&v).iter().all(num_traits::Zero::is_zero));
        }
    }

    /// Canonical cycles are invariant under rotation and reflection.
    #[test]
    fn cycle_canonical_form(shift in 0usize..4, flip in any::<bool>()) {
        let base = [3usize, 9, 1, 7];
        let mut seq: Vec<usize> = (0..4).map(|i| base[(i + shift) % 4]).collect();
        if flip { seq.reverse(); }
        prop_assert_eq!(canonical_cycle(&seq), canonical_cycle(&base));
    }
}
