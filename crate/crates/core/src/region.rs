//! Regions: induced subgraphs of a host graph together with their boundary.

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// Widest region whose local configurations fit in a machine word.
pub const MAX_REGION_WIDTH: usize = 64;

/// A subgraph `R` of a host graph with its boundary `∂R`.
///
/// Local bit `i` of a configuration refers to host vertex `local_order()[i]`;
/// the local order is always ascending host id.
#[derive(Debug, Clone)]
pub struct Region<'g> {
    host: &'g Graph,
    vertices: VertexSet,
    boundary: VertexSet,
    local_order: Vec<usize>,
    local_adj: Vec<u64>,
    boundary_positions: Vec<usize>,
    explicit_boundary: bool,
}

impl<'g> Region<'g> {
    /// Region on `vertices` whose boundary is every member with a neighbor outside.
    pub fn of(host: &'g Graph, vertices: &VertexSet) -> Result<Self> {
        let mut boundary = VertexSet::new(host.n());
        for v in vertices.iter() {
            if v >= host.n() {
                return Err(Error::VertexOutOfRange { vertex: v, n: host.n() });
            }
            if host.neighbors(v).iter().any(|&u| !vertices.contains(u)) {
                boundary.insert(v);
            }
        }
        Self::build(host, vertices, boundary, false)
    }

    /// Region with a caller-chosen boundary, used when the environment is
    /// hypothetical (the host holds only part of the real graph).
    pub fn with_boundary(host: &'g Graph, vertices: &VertexSet, boundary: &VertexSet) -> Result<Self> {
        if !boundary.is_subset(vertices) {
            return Err(Error::Input("boundary must be a subset of the region".into()));
        }
        Self::build(host, vertices, boundary.clone(), true)
    }

    fn build(host: &'g Graph, vertices: &VertexSet, boundary: VertexSet, explicit: bool) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::Input("region must contain at least one vertex".into()));
        }
        let local_order: Vec<usize> = vertices.iter().collect();
        if let Some(&v) = local_order.iter().find(|&&v| v >= host.n()) {
            return Err(Error::VertexOutOfRange { vertex: v, n: host.n() });
        }
        if local_order.len() > MAX_REGION_WIDTH {
            return Err(Error::Capacity {
                what: "vertices",
                size: local_order.len(),
                limit: MAX_REGION_WIDTH,
            });
        }
        let mut local_index = vec![usize::MAX; host.n()];
        for (i, &v) in local_order.iter().enumerate() {
            local_index[v] = i;
        }
        let local_adj = local_order
            .iter()
            .map(|&v| {
                host.neighbors(v)
                    .iter()
                    .filter(|&&u| local_index[u] != usize::MAX)
                    .fold(0u64, |acc, &u| acc | (1u64 << local_index[u]))
            })
            .collect();
        let boundary_positions = local_order
            .iter()
            .enumerate()
            .filter(|(_, &v)| boundary.contains(v))
            .map(|(i, _)| i)
            .collect();
        let mut vertex_set = VertexSet::new(host.n());
        vertex_set.union_with(vertices);
        Ok(Region {
            host,
            vertices: vertex_set,
            boundary,
            local_order,
            local_adj,
            boundary_positions,
            explicit_boundary: explicit,
        })
    }

    pub fn host(&self) -> &'g Graph {
        self.host
    }

    pub fn vertices(&self) -> &VertexSet {
        &self.vertices
    }

    pub fn boundary(&self) -> &VertexSet {
        &self.boundary
    }

    /// Host ids in local bit order.
    pub fn local_order(&self) -> &[usize] {
        &self.local_order
    }

    /// |V(R)|.
    pub fn width(&self) -> usize {
        self.local_order.len()
    }

    /// Local positions of the boundary vertices, ascending.
    pub fn boundary_positions(&self) -> &[usize] {
        &self.boundary_positions
    }

    /// Neighbors of local vertex `i` inside the region, as a local bit mask.
    pub fn local_neighbors(&self, i: usize) -> u64 {
        self.local_adj[i]
    }

    /// Whether the boundary was supplied by the caller instead of derived from the host.
    pub fn has_explicit_boundary(&self) -> bool {
        self.explicit_boundary
    }

    /// Mask of local positions that belong to the boundary.
    pub fn boundary_mask(&self) -> u64 {
        self.boundary_positions.iter().fold(0, |acc, &p| acc | (1 << p))
    }

    /// True iff the local configuration selects no two adjacent region vertices.
    pub fn is_independent(&self, config: u64) -> bool {
        let mut rest = config;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            if self.local_adj[i] & config != 0 {
                return false;
            }
            rest &= rest - 1;
        }
        true
    }

    /// Compresses the boundary bits of a local configuration into a boundary key
    /// (bit `j` of the key is boundary position `j`).
    pub fn boundary_key(&self, config: u64) -> u64 {
        self.boundary_positions
            .iter()
            .enumerate()
            .fold(0, |acc, (j, &p)| acc | (((config >> p) & 1) << j))
    }

    /// Expands a boundary key back into a local configuration (zeros elsewhere).
    pub fn expand_key(&self, key: u64) -> u64 {
        self.boundary_positions
            .iter()
            .enumerate()
            .fold(0, |acc, (j, &p)| acc | (((key >> j) & 1) << p))
    }

    /// Host vertices selected by a local bit mask.
    pub fn to_host_set(&self, bits: u64) -> VertexSet {
        let mut set = VertexSet::new(self.host.n());
        let mut rest = bits;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            set.insert(self.local_order[i]);
            rest &= rest - 1;
        }
        set
    }
}

/// Renders the low `width` bits with bit 0 first, e.g. `0b00110` of width 5 → "01100".
pub fn bits_to_string(bits: u64, width: usize) -> String {
    (0..width)
        .map(|i| if (bits >> i) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Inverse of [`bits_to_string`].
pub fn bits_from_str(s: &str) -> Result<u64> {
    if s.len() > 64 {
        return Err(Error::Input(format!("bit string longer than 64: {s}")));
    }
    s.chars().enumerate().try_fold(0u64, |acc, (i, ch)| match ch {
        '0' => Ok(acc),
        '1' => Ok(acc | (1 << i)),
        _ => Err(Error::Input(format!("invalid bit string {s:?}"))),
    })
}

/// Ordering key that sorts bit strings the way their rendered text sorts.
pub fn string_order_key(bits: u64, width: usize) -> u64 {
    if width == 0 {
        0
    } else {
        bits.reverse_bits() >> (64 - width)
    }
}
