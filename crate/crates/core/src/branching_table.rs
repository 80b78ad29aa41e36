//! α-tensors of regions, their pruning, and the boundary-grouped maximum
//! independent sets that branching rules are designed against.

use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{for_each_independent_set, induced_alpha};
use crate::graph::VertexSet;
use crate::region::{bits_to_string, string_order_key, Region};

/// Default cap on |V(R)| for exhaustive enumeration.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 26;

/// Largest boundary for which the dense 2^|∂R| tensor is materialized.
pub const MAX_BOUNDARY: usize = 22;

/// Largest environment difference set whose α is computed exactly.
pub const ENV_EXACT_LIMIT: usize = 20;

/// Local MIS sizes of a region indexed by boundary configuration.
///
/// Entry `key` (bit `j` = boundary vertex `j` in local order) holds `None` for
/// −∞ and otherwise the largest independent set of `R` consistent with it.
#[derive(Debug, Clone)]
pub struct AlphaTensor<'a, 'g> {
    region: &'a Region<'g>,
    values: Vec<Option<u32>>,
}

impl<'a, 'g> AlphaTensor<'a, 'g> {
    /// Computes the tensor by enumerating every independent set of `R`.
    pub fn compute(region: &'a Region<'g>, enumeration_limit: usize) -> Result<Self> {
        if region.width() > enumeration_limit {
            return Err(Error::Capacity {
                what: "vertices",
                size: region.width(),
                limit: enumeration_limit,
            });
        }
        let b = region.boundary_positions().len();
        if b > MAX_BOUNDARY {
            return Err(Error::Capacity {
                what: "boundary vertices",
                size: b,
                limit: MAX_BOUNDARY,
            });
        }
        let adj: Vec<u64> = (0..region.width()).map(|i| region.local_neighbors(i)).collect();
        let mut values: Vec<Option<u32>> = vec![None; 1 << b];
        for_each_independent_set(&adj, |config| {
            let key = region.boundary_key(config) as usize;
            let size = config.count_ones();
            if values[key].is_none_or(|best| size > best) {
                values[key] = Some(size);
            }
        });
        Ok(AlphaTensor { region, values })
    }

    pub fn region(&self) -> &'a Region<'g> {
        self.region
    }

    pub fn boundary_len(&self) -> usize {
        self.region.boundary_positions().len()
    }

    pub fn get(&self, key: u64) -> Option<u32> {
        self.values[key as usize]
    }

    pub fn values(&self) -> &[Option<u32>] {
        &self.values
    }

    /// Keys with finite entries, in text order of their bit strings.
    pub fn finite_keys(&self) -> Vec<u64> {
        let b = self.boundary_len();
        let mut keys: Vec<u64> = (0..self.values.len() as u64)
            .filter(|&k| self.values[k as usize].is_some())
            .collect();
        keys.sort_by_key(|&k| string_order_key(k, b));
        keys
    }

    /// Sets to −∞ every entry `t` for which some less restrictive `s ≺ t`
    /// (bitwise `s ≤ t`, `s ≠ t`) has `α_s ≥ α_t`.
    pub fn prune_irrelevant(mut self) -> Self {
        let b = self.boundary_len();
        // best[t] = max over subsets s ⊆ t of α_s
        let mut best: Vec<i64> = self.values.iter().map(|v| v.map_or(-1, i64::from)).collect();
        for j in 0..b {
            for t in 0..best.len() {
                if t & (1 << j) != 0 {
                    best[t] = best[t].max(best[t ^ (1 << j)]);
                }
            }
        }
        for t in 0..self.values.len() {
            if let Some(alpha) = self.values[t] {
                let dominated = (0..b)
                    .filter(|j| t & (1 << j) != 0)
                    .any(|j| best[t ^ (1 << j)] >= i64::from(alpha));
                if dominated {
                    self.values[t] = None;
                }
            }
        }
        self
    }

    /// Environment-aware pruning: discards `s` when another surviving `t` satisfies
    /// `α_s + α(G_left(s) ∖ G_left(t)) ≤ α_t`, where
    /// `G_left(x) = host ∖ (N(T(x)) ∪ V(R))`.
    ///
    /// Pairs are visited in text order of the keys and a discarded entry no
    /// longer serves as a witness, so at least one entry always survives.
    pub fn prune_by_environment(mut self) -> Self {
        let host = self.region.host();
        let keys = self.finite_keys();
        let outside: Vec<VertexSet> = keys
            .iter()
            .map(|&key| {
                let positives = self.region.to_host_set(self.region.expand_key(key));
                let mut nb = host.open_neighborhood(&positives);
                nb.difference_with(self.region.vertices());
                nb
            })
            .collect();
        let mut alive = vec![true; keys.len()];
        for si in 0..keys.len() {
            let alpha_s = self.values[keys[si] as usize].expect("finite key");
            for ti in 0..keys.len() {
                if ti == si || !alive[ti] {
                    continue;
                }
                let alpha_t = self.values[keys[ti] as usize].expect("finite key");
                if alpha_s > alpha_t {
                    continue;
                }
                // G_left(s) ∖ G_left(t) = outside neighbors of T(t) that are not next to T(s)
                let mut diff = outside[ti].clone();
                diff.difference_with(&outside[si]);
                let extra = if diff.len() <= ENV_EXACT_LIMIT {
                    induced_alpha(host, &diff).expect("small difference set")
                } else {
                    diff.len() as u32
                };
                if alpha_s + extra <= alpha_t {
                    alive[si] = false;
                    self.values[keys[si] as usize] = None;
                    break;
                }
            }
        }
        self
    }

    /// Groups every optimal local configuration by its boundary configuration.
    pub fn boundary_grouped(&self) -> Result<BranchingTable> {
        let keys = self.finite_keys();
        if keys.is_empty() {
            return Err(Error::Internal("α-tensor has no finite entry".into()));
        }
        let mut slot = vec![usize::MAX; self.values.len()];
        for (row, &k) in keys.iter().enumerate() {
            slot[k as usize] = row;
        }
        let region = self.region;
        let adj: Vec<u64> = (0..region.width()).map(|i| region.local_neighbors(i)).collect();
        let mut rows: Vec<Vec<u64>> = vec![Vec::new(); keys.len()];
        for_each_independent_set(&adj, |config| {
            let key = region.boundary_key(config) as usize;
            if slot[key] != usize::MAX && self.values[key] == Some(config.count_ones()) {
                rows[slot[key]].push(config);
            }
        });
        let width = region.width();
        for row in &mut rows {
            row.sort_by_key(|&c| string_order_key(c, width));
        }
        BranchingTable::new(width, rows)
    }
}

/// Boundary-grouped maximum independent sets of a region: each row holds the
/// optimal local configurations sharing one boundary configuration.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BranchingTable {
    width: usize,
    rows: Vec<Vec<u64>>,
    row_alpha: Vec<u32>,
}

impl BranchingTable {
    /// Builds a table from explicit rows of local configurations.
    pub fn new(width: usize, rows: Vec<Vec<u64>>) -> Result<Self> {
        if width == 0 || width > 64 {
            return Err(Error::Input(format!("table width {width} outside 1..=64")));
        }
        if rows.is_empty() || rows.iter().any(Vec::is_empty) {
            return Err(Error::Input("branching table rows must be nonempty".into()));
        }
        let limit = if width == 64 { u64::MAX } else { (1u64 << width) - 1 };
        if rows.iter().flatten().any(|&c| c & !limit != 0) {
            return Err(Error::Input("configuration wider than the table".into()));
        }
        let row_alpha = rows.iter().map(|r| r[0].count_ones()).collect();
        Ok(BranchingTable { width, rows, row_alpha })
    }

    /// Table from rows of bit strings such as `["00001", "00010"]`.
    pub fn from_strings(rows: &[&[&str]]) -> Result<Self> {
        let width = rows
            .first()
            .and_then(|r| r.first())
            .map(|s| s.len())
            .ok_or_else(|| Error::Input("empty table".into()))?;
        let mut parsed = Vec::with_capacity(rows.len());
        for row in rows {
            let mut out = Vec::with_capacity(row.len());
            for s in *row {
                if s.len() != width {
                    return Err(Error::Input(format!("bit string {s:?} has wrong width")));
                }
                out.push(crate::region::bits_from_str(s)?);
            }
            parsed.push(out);
        }
        Self::new(width, parsed)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn row_alpha(&self) -> &[u32] {
        &self.row_alpha
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// All configurations, row by row.
    pub fn configs(&self) -> impl Iterator<Item = u64> + '_ {
        self.rows.iter().flatten().copied()
    }
}

impl fmt::Display for BranchingTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            let text: Vec<String> = row.iter().map(|&c| bits_to_string(c, self.width)).collect();
            writeln!(f, "{}", text.join(", "))?;
        }
        Ok(())
    }
}

/// Region → α-tensor → pruning → boundary-grouped table.
pub fn branching_table(region: &Region<'_>, env_pruning: bool, enumeration_limit: usize) -> Result<BranchingTable> {
    let mut tensor = AlphaTensor::compute(region, enumeration_limit)?.prune_irrelevant();
    if env_pruning {
        tensor = tensor.prune_by_environment();
    }
    tensor.boundary_grouped()
}
