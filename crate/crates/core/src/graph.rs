//! Simple undirected graphs on vertices `0..n-1`, with the small-scale
//! connectivity checks the decision procedure relies on.

use std::collections::BTreeSet;

use thiserror::Error;

/// An undirected edge, always stored with the smaller endpoint first.
pub type Edge = (usize, usize);

/// Normalize an unordered vertex pair into an [`Edge`].
pub fn edge(u: usize, v: usize) -> Edge {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} out of range (n = {1})")]
    VertexOutOfRange(usize, usize),
    #[error("loops are not allowed ({0},{0})")]
    Loop(usize),
}

/// Simple graph: no loops, no parallel edges, vertices `0..n-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    adj: Vec<BTreeSet<usize>>,
}

impl SimpleGraph {
    pub fn new(n: usize) -> Self {
        SimpleGraph {
            n,
            adj: vec![BTreeSet::new(); n],
        }
    }

    pub fn from_edges(n: usize, edges: &[Edge]) -> Result<Self, GraphError> {
        let mut g = SimpleGraph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        if u == v {
            return Err(GraphError::Loop(u));
        }
        for w in [u, v] {
            if w >= self.n {
                return Err(GraphError::VertexOutOfRange(w, self.n));
            }
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.adj[u].remove(&v);
        self.adj[v].remove(&u);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].contains(&v)
    }

    pub fn neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Edges in sorted order, smaller endpoint first.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::with_capacity(self.m());
        for u in 0..self.n {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn common_neighbors(&self, u: usize, v: usize) -> BTreeSet<usize> {
        self.adj[u].intersection(&self.adj[v]).copied().collect()
    }

    pub fn is_complete(&self) -> bool {
        self.m() == self.n * (self.n - 1) / 2
    }

    /// Union of edge sets over the same vertex range.
    pub fn union(&self, other: &SimpleGraph) -> SimpleGraph {
        assert_eq!(self.n, other.n);
        let mut g = self.clone();
        for (u, v) in other.edges() {
            g.add_edge(u, v).expect("edges already validated");
        }
        g
    }

    /// Is the subgraph induced by masking out `removed` connected (on the
    /// remaining vertices)? Empty remainders count as connected.
    fn connected_without(&self, removed: &BTreeSet<usize>) -> bool {
        let Some(start) = (0..self.n).find(|v| !removed.contains(v)) else {
            return true;
        };
        let mut seen = vec![false; self.n];
        let mut stack = vec![start];
        seen[start] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if !seen[w] && !removed.contains(&w) {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n - removed.len()
    }

    pub fn is_connected(&self) -> bool {
        self.connected_without(&BTreeSet::new())
    }

    /// Exhaustive vertex-connectivity test: true iff `n > k` and no cut set of
    /// fewer than `k` vertices disconnects the graph. Exponential in `k`;
    /// intended for the small graphs this crate works with.
    pub fn is_k_connected(&self, k: usize) -> bool {
        if self.n <= k {
            return false;
        }
        if !self.is_connected() {
            return k == 0;
        }
        let mut cut = Vec::new();
        !self.has_small_cut(0, k.saturating_sub(1), &mut cut)
    }

    /// The lexicographically first vertex cut of size at most `max_size`,
    /// if any.
    pub fn small_cut(&self, max_size: usize) -> Option<Vec<usize>> {
        if !self.is_connected() {
            return Some(Vec::new());
        }
        let mut cut = Vec::new();
        if self.has_small_cut(0, max_size, &mut cut) {
            Some(cut)
        } else {
            None
        }
    }

    fn has_small_cut(&self, start: usize, max_size: usize, cut: &mut Vec<usize>) -> bool {
        if !cut.is_empty() {
            let removed: BTreeSet<usize> = cut.iter().copied().collect();
            if removed.len() < self.n && !self.connected_without(&removed) {
                return true;
            }
        }
        if cut.len() == max_size {
            return false;
        }
        for v in start..self.n {
            cut.push(v);
            if self.has_small_cut(v + 1, max_size, cut) {
                return true;
            }
            cut.pop();
        }
        false
    }

    /// Connected components after deleting a vertex set.
    pub fn components_without(&self, removed: &BTreeSet<usize>) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] || removed.contains(&s) {
                continue;
            }
            let mut comp = vec![s];
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(v) = stack.pop() {
                for &w in &self.adj[v] {
                    if !seen[w] && !removed.contains(&w) {
                        seen[w] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Delete a vertex and relabel the ones above it down by one.
    /// Returns the new graph and the old-to-new vertex map (`map[x]` is the
    /// new id; the deleted vertex maps to `usize::MAX`).
    pub fn delete_vertex(&self, x: usize) -> (SimpleGraph, Vec<usize>) {
        assert!(x < self.n);
        let map: Vec<usize> = (0..self.n)
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
        let mut g = SimpleGraph::new(self.n - 1);
        for (u, v) in self.edges() {
            if u != x && v != x {
                g.add_edge(map[u], map[v]).expect("relabeled edge is valid");
            }
        }
        (g, map)
    }

    /// Contract an edge, merging into `min(u, v)` and simplifying parallels.
    /// Returns the contracted graph and the old-to-new vertex map.
    pub fn contract_edge(&self, u: usize, v: usize) -> (SimpleGraph, Vec<usize>) {
        assert!(self.has_edge(u, v), "({u},{v}) is not an edge");
        let keep = u.min(v);
        let drop = u.max(v);
        let map: Vec<usize> = (0..self.n)
            .map(|w| {
                let w = if w == drop { keep } else { w };
                if w > drop {
                    w - 1
                } else {
                    w
                }
            })
            .collect();
        let mut g = SimpleGraph::new(self.n - 1);
        for (a, b) in self.edges() {
            let (a, b) = (map[a], map[b]);
            if a != b {
                g.add_edge(a, b).expect("relabeled edge is valid");
            }
        }
        (g, map)
    }

    /// Induced subgraph on `verts`, relabeled to `0..verts.len()-1` in sorted
    /// order. Returns the subgraph and the new-to-old vertex list.
    pub fn induced(&self, verts: &BTreeSet<usize>) -> (SimpleGraph, Vec<usize>) {
        let order: Vec<usize> = verts.iter().copied().collect();
        let index = |v: usize| order.binary_search(&v).expect("vertex in set");
        let mut g = SimpleGraph::new(order.len());
        for &v in &order {
            for &w in &self.adj[v] {
                if v < w && verts.contains(&w) {
                    g.add_edge(index(v), index(w)).expect("induced edge is valid");
                }
            }
        }
        (g, order)
    }

    pub fn complete(n: usize) -> SimpleGraph {
        let mut g = SimpleGraph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).expect("complete graph edge");
            }
        }
        g
    }
}
