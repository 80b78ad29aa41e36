//! Small exact independent-set routines on bit masks.

use crate::graph::{Graph, VertexSet};

/// Calls `visit` with every independent set of the graph given by local
/// adjacency masks (`adj[i]` = neighbors of vertex `i`). The empty set is included.
pub fn for_each_independent_set(adj: &[u64], mut visit: impl FnMut(u64)) {
    fn recurse(adj: &[u64], i: usize, chosen: u64, blocked: u64, visit: &mut impl FnMut(u64)) {
        if i == adj.len() {
            visit(chosen);
            return;
        }
        recurse(adj, i + 1, chosen, blocked, visit);
        if blocked & (1 << i) == 0 {
            recurse(adj, i + 1, chosen | (1 << i), blocked | adj[i], visit);
        }
    }
    recurse(adj, 0, 0, 0, &mut visit);
}

/// Maximum independent set size of the subgraph induced by `candidates`.
pub fn mis_size_mask(adj: &[u64], candidates: u64) -> u32 {
    if candidates == 0 {
        return 0;
    }
    let v = candidates.trailing_zeros() as usize;
    let nv = adj[v] & candidates;
    if nv == 0 {
        return 1 + mis_size_mask(adj, candidates & !(1 << v));
    }
    let take = 1 + mis_size_mask(adj, candidates & !(1 << v) & !nv);
    let skip = mis_size_mask(adj, candidates & !(1 << v));
    take.max(skip)
}

/// α of the subgraph of `g` induced by `set`; `None` when it has more than 64 vertices.
pub fn induced_alpha(g: &Graph, set: &VertexSet) -> Option<u32> {
    let members = set.to_vec();
    if members.len() > 64 {
        return None;
    }
    let mut index = std::collections::HashMap::with_capacity(members.len());
    for (i, &v) in members.iter().enumerate() {
        index.insert(v, i);
    }
    let adj: Vec<u64> = members
        .iter()
        .map(|&v| {
            g.neighbors(v)
                .iter()
                .filter_map(|u| index.get(u))
                .fold(0u64, |acc, &j| acc | (1 << j))
        })
        .collect();
    let all = if members.len() == 64 {
        u64::MAX
    } else {
        (1u64 << members.len()) - 1
    };
    Some(mis_size_mask(&adj, all))
}
