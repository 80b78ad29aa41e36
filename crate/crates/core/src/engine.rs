//! Branch-and-reduce search for a maximum independent set, branching with
//! rules generated on the fly for the selected region.

use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeMap;
use std::hash::{Hash, Hasher};

use log::{debug, trace};

use crate::branching_table::{branching_table, DEFAULT_ENUMERATION_LIMIT};
use crate::clause::build_candidates;
use crate::error::{Error, Result};
use crate::graph::{Graph, Measure, VertexSet};
use crate::optimizer::minimize_gamma;
use crate::region::Region;

pub use crate::optimizer::SolverKind;

/// Solver switches. The defaults correspond to the exact on-the-fly variant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SolveConfig {
    pub measure: Measure,
    pub solver_kind: SolverKind,
    /// Regions are N_r[v] for this radius r (shrunk when too large).
    pub selection_radius: usize,
    pub env_pruning: bool,
    pub enumeration_limit: usize,
    pub seed: u64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            measure: Measure::VertexCount,
            solver_kind: SolverKind::Exact,
            selection_radius: 2,
            env_pruning: true,
            enumeration_limit: DEFAULT_ENUMERATION_LIMIT,
            seed: 0,
        }
    }
}

impl SolveConfig {
    /// The LP-relaxed variant with otherwise default settings.
    pub fn relaxed() -> Self {
        SolveConfig {
            solver_kind: SolverKind::LpRelaxed,
            ..Self::default()
        }
    }
}

/// Outcome of [`mis_branch`].
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub mis_size: usize,
    pub witness: VertexSet,
    /// Branches spawned: a rule with k ≥ 2 clauses adds k, a single-clause rule adds 0.
    pub branch_count: u64,
    pub max_depth: usize,
    /// Applied rules keyed by (clause count, γ rounded to 1e-6 as an integer of millionths).
    pub rule_stats: BTreeMap<(usize, u64), u64>,
}

impl SolveReport {
    /// (clause count, γ, occurrences) triples in key order.
    pub fn rule_histogram(&self) -> Vec<(usize, f64, u64)> {
        self.rule_stats
            .iter()
            .map(|(&(k, g), &count)| (k, g as f64 / 1e6, count))
            .collect()
    }
}

/// One recorded reduction step, in working-vertex ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionOp {
    /// The vertex belongs to the independent set.
    Take(usize),
    /// `v` with non-adjacent neighbors `u`, `w` was folded into the new vertex `merged`.
    Fold {
        v: usize,
        u: usize,
        w: usize,
        merged: usize,
    },
}

/// Result of exhausting the degree ≤ 2 reductions.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub kernel: Graph,
    /// α(G) = α(kernel) + offset.
    pub offset: usize,
    /// Kernel vertex → working id. Working ids below `original_n` are input vertices.
    pub kernel_map: Vec<usize>,
    pub ops: Vec<ReductionOp>,
    pub original_n: usize,
}

impl Reduction {
    /// Turns an independent set of the kernel into one of the input graph.
    pub fn lift(&self, kernel_set: &[usize]) -> Vec<usize> {
        let total = self
            .ops
            .iter()
            .map(|op| match *op {
                ReductionOp::Take(v) => v + 1,
                ReductionOp::Fold { merged, .. } => merged + 1,
            })
            .max()
            .unwrap_or(0)
            .max(self.original_n)
            .max(self.kernel_map.iter().map(|&x| x + 1).max().unwrap_or(0));
        let mut inside = vec![false; total];
        for &k in kernel_set {
            inside[self.kernel_map[k]] = true;
        }
        for op in self.ops.iter().rev() {
            match *op {
                ReductionOp::Take(v) => inside[v] = true,
                ReductionOp::Fold { v, u, w, merged } => {
                    if inside[merged] {
                        inside[merged] = false;
                        inside[u] = true;
                        inside[w] = true;
                    } else {
                        inside[v] = true;
                    }
                }
            }
        }
        (0..self.original_n).filter(|&v| inside[v]).collect()
    }

    /// The vertices fixed into the set by reductions alone (empty kernel solution).
    pub fn partial_witness(&self) -> Vec<usize> {
        self.lift(&[])
    }
}

struct Workspace {
    adj: Vec<Vec<usize>>,
    alive: Vec<bool>,
    stack: Vec<usize>,
}

impl Workspace {
    fn delete(&mut self, x: usize) {
        let nbrs = std::mem::take(&mut self.adj[x]);
        for y in nbrs {
            if let Some(pos) = self.adj[y].iter().position(|&z| z == x) {
                self.adj[y].swap_remove(pos);
            }
            self.stack.push(y);
        }
        self.alive[x] = false;
    }
}

/// Applies degree-0, degree-1 and degree-2 (triangle removal or vertex folding)
/// reductions until every remaining vertex has degree at least three.
pub fn reduce_fixpoint(g: &Graph) -> Reduction {
    let n = g.n();
    let mut ws = Workspace {
        adj: (0..n).map(|v| g.neighbors(v).to_vec()).collect(),
        alive: vec![true; n],
        stack: (0..n).rev().collect(),
    };
    let mut ops = Vec::new();
    let mut offset = 0;
    while let Some(v) = ws.stack.pop() {
        if !ws.alive[v] || ws.adj[v].len() > 2 {
            continue;
        }
        match ws.adj[v].len() {
            0 => {
                ops.push(ReductionOp::Take(v));
                ws.delete(v);
            }
            1 => {
                let u = ws.adj[v][0];
                ops.push(ReductionOp::Take(v));
                ws.delete(u);
                ws.delete(v);
            }
            _ => {
                let (u, w) = (ws.adj[v][0], ws.adj[v][1]);
                if ws.adj[u].contains(&w) {
                    ops.push(ReductionOp::Take(v));
                    ws.delete(v);
                    ws.delete(u);
                    ws.delete(w);
                } else {
                    let mut merged_nbrs: Vec<usize> = ws.adj[u]
                        .iter()
                        .chain(&ws.adj[w])
                        .copied()
                        .filter(|&x| x != v && x != u && x != w)
                        .collect();
                    merged_nbrs.sort_unstable();
                    merged_nbrs.dedup();
                    ws.delete(v);
                    ws.delete(u);
                    ws.delete(w);
                    let merged = ws.adj.len();
                    for &y in &merged_nbrs {
                        ws.adj[y].push(merged);
                    }
                    ws.adj.push(merged_nbrs);
                    ws.alive.push(true);
                    ws.stack.push(merged);
                    ops.push(ReductionOp::Fold { v, u, w, merged });
                }
            }
        }
        offset += 1;
    }
    let kernel_map: Vec<usize> = (0..ws.adj.len()).filter(|&x| ws.alive[x]).collect();
    let mut index = vec![usize::MAX; ws.adj.len()];
    for (k, &x) in kernel_map.iter().enumerate() {
        index[x] = k;
    }
    let adj = kernel_map
        .iter()
        .map(|&x| ws.adj[x].iter().map(|&y| index[y]).collect())
        .collect();
    Reduction {
        kernel: Graph::from_adjacency_unchecked(adj),
        offset,
        kernel_map,
        ops,
        original_n: n,
    }
}

fn boundary_size(g: &Graph, set: &VertexSet) -> usize {
    set.iter()
        .filter(|&v| g.neighbors(v).iter().any(|&u| !set.contains(u)))
        .count()
}

/// Picks the region N_r[v] with the fewest boundary vertices, breaking ties by
/// fewer vertices and then by smaller anchor id. Neighborhoods larger than
/// the enumeration limit are shrunk to smaller radii, or skipped.
pub fn select_subgraph<'g>(g: &'g Graph, cfg: &SolveConfig) -> Result<Region<'g>> {
    if g.n() == 0 {
        return Err(Error::Input("cannot select a region in an empty graph".into()));
    }
    let mut best: Option<((usize, usize, usize), VertexSet)> = None;
    for v in 0..g.n() {
        let seed = VertexSet::from_vertices(g.n(), [v]);
        let mut chosen = None;
        for radius in (1..=cfg.selection_radius.max(1)).rev() {
            let set = g.neighbors_k(&seed, radius, true)?;
            if set.len() <= cfg.enumeration_limit {
                chosen = Some(set);
                break;
            }
        }
        let Some(set) = chosen else { continue };
        let key = (boundary_size(g, &set), set.len(), v);
        if best.as_ref().is_none_or(|(k, _)| key < *k) {
            best = Some((key, set));
        }
    }
    let set = match best {
        Some((_, set)) => set,
        None => VertexSet::from_vertices(g.n(), [0]),
    };
    Region::of(g, &set)
}

/// True iff no edge joins two members of `w`.
pub fn verify_witness(g: &Graph, w: &VertexSet) -> bool {
    g.is_independent(w)
}

struct Solver<'c> {
    cfg: &'c SolveConfig,
    branch_count: u64,
    max_depth: usize,
    rule_stats: BTreeMap<(usize, u64), u64>,
}

impl Solver<'_> {
    fn solve(&mut self, g: &Graph, depth: usize) -> Result<Vec<usize>> {
        self.max_depth = self.max_depth.max(depth);
        let red = reduce_fixpoint(g);
        let kernel = &red.kernel;
        let mut kernel_set = Vec::new();
        for comp in kernel.components() {
            if comp.len() == kernel.n() {
                kernel_set.extend(self.solve_component(kernel, depth)?);
            } else {
                let keep = VertexSet::from_vertices(kernel.n(), comp.iter().copied());
                let (sub, map) = kernel.induced_subgraph(&keep);
                kernel_set.extend(self.solve_component(&sub, depth)?.into_iter().map(|x| map[x]));
            }
        }
        Ok(red.lift(&kernel_set))
    }

    fn solve_component(&mut self, g: &Graph, depth: usize) -> Result<Vec<usize>> {
        let region = select_subgraph(g, self.cfg)?;
        if region.boundary().is_empty() && region.width() == g.n() {
            // a closed component: its table has one row of maximum sets
            let table = branching_table(&region, false, self.cfg.enumeration_limit)?;
            return Ok(region.to_host_set(table.rows()[0][0]).to_vec());
        }
        let table = branching_table(&region, self.cfg.env_pruning, self.cfg.enumeration_limit)?;
        let candidates = build_candidates(&table, &region, self.cfg.measure)?;
        let mut hasher = DefaultHasher::new();
        table.hash(&mut hasher);
        let seed = self.cfg.seed ^ hasher.finish();
        let result = minimize_gamma(&candidates, table.len(), self.cfg.solver_kind, seed)?;
        debug_assert!(result.rule.is_valid_rule(&table));
        trace!(
            "depth {depth}: region {} (∂ {}), {} rows, {} candidates, γ = {:.6}, vector {:?}",
            region.width(),
            region.boundary().len(),
            table.len(),
            candidates.len(),
            result.gamma,
            result.branching_vector
        );
        let k = result.rule.len();
        if k >= 2 {
            self.branch_count += k as u64;
        }
        *self
            .rule_stats
            .entry((k, (result.gamma * 1e6).round() as u64))
            .or_insert(0) += 1;

        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(result.branching_vector[i]));
        let mut best: Option<Vec<usize>> = None;
        for i in order {
            let clause = result.rule.clauses[i];
            let taken = region.to_host_set(clause.positives());
            let mut removed = g.open_neighborhood(&taken);
            removed.union_with(&region.to_host_set(clause.mask()));
            let (sub, map) = g.induced_delete(&removed)?;
            let mut set: Vec<usize> = self.solve(&sub, depth + 1)?.into_iter().map(|x| map[x]).collect();
            set.extend(taken.iter());
            if best.as_ref().is_none_or(|b| set.len() > b.len()) {
                best = Some(set);
            }
        }
        Ok(best.expect("rule has at least one clause"))
    }
}

/// Solves maximum independent set exactly, counting the branches spawned.
pub fn mis_branch(g: &Graph, cfg: &SolveConfig) -> Result<SolveReport> {
    if cfg.selection_radius == 0 {
        return Err(Error::Input("selection radius must be at least 1".into()));
    }
    let mut solver = Solver {
        cfg,
        branch_count: 0,
        max_depth: 0,
        rule_stats: BTreeMap::new(),
    };
    let set = solver.solve(g, 0)?;
    let witness = VertexSet::from_vertices(g.n(), set.iter().copied());
    debug!(
        "solved n={} m={}: α={} branches={}",
        g.n(),
        g.num_edges(),
        witness.len(),
        solver.branch_count
    );
    Ok(SolveReport {
        mis_size: witness.len(),
        witness,
        branch_count: solver.branch_count,
        max_depth: solver.max_depth,
        rule_stats: solver.rule_stats,
    })
}
