//! Undirected simple graphs over dense vertex ids, vertex sets and the two
//! complexity measures used to score branching rules.

use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// A set of vertices of some graph, stored as a fixed-width bit set.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet(FixedBitSet);

impl VertexSet {
    pub fn new(capacity: usize) -> Self {
        VertexSet(FixedBitSet::with_capacity(capacity))
    }

    pub fn full(capacity: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(capacity);
        bits.insert_range(..);
        VertexSet(bits)
    }

    pub fn from_vertices<I: IntoIterator<Item = usize>>(capacity: usize, vertices: I) -> Self {
        let mut set = Self::new(capacity);
        for v in vertices {
            set.insert(v);
        }
        set
    }

    /// Width of the underlying bit set (the vertex count of the owning graph).
    pub fn capacity(&self) -> usize {
        self.0.len()
    }

    pub fn insert(&mut self, v: usize) {
        if v >= self.0.len() {
            self.0.grow(v + 1);
        }
        self.0.insert(v);
    }

    pub fn remove(&mut self, v: usize) {
        if v < self.0.len() {
            self.0.set(v, false);
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.contains(v)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        self.0.union_with(&other.0);
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        self.0.difference_with(&other.0);
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        self.0.intersect_with(&other.0);
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.0.is_disjoint(&other.0)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Complexity measure ρ of a graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Measure {
    /// ρ(G) = |V(G)|.
    #[default]
    VertexCount,
    /// ρ(G) = Σ_v max(0, d(v) − 2); graphs of maximum degree two measure zero.
    EffectiveDegree,
}

impl Measure {
    /// Contribution of a single vertex of degree `d`.
    #[inline]
    pub fn weight(self, degree: usize) -> usize {
        match self {
            Measure::VertexCount => 1,
            Measure::EffectiveDegree => degree.saturating_sub(2),
        }
    }
}

/// Undirected simple graph with vertices `0..n` and sorted adjacency lists.
///
/// Graphs are immutable once built; every modification produces a new graph
/// together with the map from its vertex ids back to the ids of the source.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph from an edge list. Parallel edges are merged; self-loops
    /// and out-of-range endpoints are rejected.
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::Input(format!("self-loop on vertex {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        Ok(Self::from_adjacency_unchecked(adj))
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Sorts and deduplicates the lists. Callers guarantee symmetry and no loops.
    pub(crate) fn from_adjacency_unchecked(mut adj: Vec<Vec<usize>>) -> Self {
        let mut twice = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            twice += list.len();
        }
        Graph {
            adj,
            edge_count: twice / 2,
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// Edges `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    fn check_set(&self, s: &VertexSet) -> Result<()> {
        match s.iter().find(|&v| v >= self.n()) {
            Some(v) => Err(Error::VertexOutOfRange { vertex: v, n: self.n() }),
            None => Ok(()),
        }
    }

    /// Open neighborhood N(S) = ∪ N(v) ∖ S.
    pub fn open_neighborhood(&self, s: &VertexSet) -> VertexSet {
        let mut out = VertexSet::new(self.n());
        for v in s.iter() {
            for &u in &self.adj[v] {
                out.insert(u);
            }
        }
        out.difference_with(s);
        out
    }

    /// Closed neighborhood N[S] = N(S) ∪ S.
    pub fn closed_neighborhood(&self, s: &VertexSet) -> VertexSet {
        let mut out = self.open_neighborhood(s);
        out.union_with(s);
        out
    }

    /// k-th order neighborhood: N_k(S) (open) or N_k[S] (closed), following
    /// N_1[S] = N[S], N_k(S) = N(N_{k-1}[S]) and N_k[S] = N_k(S) ∪ N_{k-1}[S].
    pub fn neighbors_k(&self, s: &VertexSet, k: usize, closed: bool) -> Result<VertexSet> {
        if k == 0 {
            return Err(Error::Input("neighborhood order must be positive".into()));
        }
        if s.is_empty() {
            return Err(Error::Input("neighborhood of an empty vertex set".into()));
        }
        self.check_set(s)?;
        let mut inner = s.clone();
        for _ in 1..k {
            inner = self.closed_neighborhood(&inner);
        }
        if closed {
            Ok(self.closed_neighborhood(&inner))
        } else {
            Ok(self.open_neighborhood(&inner))
        }
    }

    /// Induced subgraph on the vertices in `keep`. Returns the new graph and
    /// the map from new vertex ids to ids of `self`.
    pub fn induced_subgraph(&self, keep: &VertexSet) -> (Graph, Vec<usize>) {
        let map: Vec<usize> = keep.iter().filter(|&v| v < self.n()).collect();
        let mut index = vec![usize::MAX; self.n()];
        for (new, &old) in map.iter().enumerate() {
            index[old] = new;
        }
        let adj = map
            .iter()
            .map(|&old| {
                self.adj[old]
                    .iter()
                    .filter_map(|&u| (index[u] != usize::MAX).then_some(index[u]))
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>();
        let edge_count = adj.iter().map(Vec::len).sum::<usize>() / 2;
        (Graph { adj, edge_count }, map)
    }

    /// G ∖ removed, re-indexed densely. Returns the map new id → old id.
    pub fn induced_delete(&self, removed: &VertexSet) -> Result<(Graph, Vec<usize>)> {
        self.check_set(removed)?;
        let mut keep = VertexSet::full(self.n());
        keep.difference_with(removed);
        Ok(self.induced_subgraph(&keep))
    }

    pub fn measure(&self, m: Measure) -> usize {
        match m {
            Measure::VertexCount => self.n(),
            Measure::EffectiveDegree => self.adj.iter().map(|l| m.weight(l.len())).sum(),
        }
    }

    /// ρ(G) − ρ(G ∖ removed), evaluated without materializing the smaller graph.
    pub fn measure_drop(&self, removed: &VertexSet, m: Measure) -> usize {
        match m {
            Measure::VertexCount => removed.len(),
            Measure::EffectiveDegree => {
                let mut lost = vec![0usize; self.n()];
                let mut drop = 0;
                for v in removed.iter() {
                    drop += m.weight(self.degree(v));
                    for &u in &self.adj[v] {
                        if !removed.contains(u) {
                            lost[u] += 1;
                        }
                    }
                }
                for (u, &k) in lost.iter().enumerate() {
                    if k > 0 {
                        let d = self.degree(u);
                        drop += m.weight(d) - m.weight(d - k);
                    }
                }
                drop
            }
        }
    }

    /// Connected components, each sorted ascending, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        let mut stack = Vec::new();
        for start in 0..self.n() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            stack.push(start);
            let mut comp = Vec::new();
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &u in &self.adj[v] {
                    if !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// True iff no edge joins two members of `set`.
    pub fn is_independent(&self, set: &VertexSet) -> bool {
        set.iter()
            .all(|v| v < self.n() && self.adj[v].iter().all(|&u| u < v || !set.contains(u)))
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges=[", self.n())?;
        for (i, (u, v)) in self.edges().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{u}-{v}")?;
        }
        write!(f, "])")
    }
}
