//! LP-based branch and bound for weighted set cover. Node relaxations are
//! solved by column generation over a pool of columns shared by all nodes,
//! so the simplex only ever sees a small part of a large instance.

use fixedbitset::FixedBitSet;

use super::lp::solve_covering_lp;
use super::{WmscInstance, TOLERANCE};
use crate::error::{Error, Result};

/// Columns added to the pool per pricing round.
const COLUMNS_PER_ROUND: usize = 64;
const MAX_PRICING_ROUNDS: usize = 10_000;
const INTEGRALITY_EPS: f64 = 1e-9;
/// Pooled columns leave after this many relaxations without positive value.
const POOL_AGE: usize = 32;

pub(super) enum Relaxation {
    Infeasible,
    /// The bound already exceeds the cutoff.
    Pruned,
    /// Optimal value and the nonzero primal entries as (set id, value).
    Solved {
        bound: f64,
        x: Vec<(usize, f64)>,
        y: Vec<f64>,
    },
}

/// What the search is after.
#[derive(Debug, Clone, Copy)]
pub(super) enum Goal {
    /// The cheapest cover; only strict improvements replace the incumbent.
    Minimize,
    /// Any cover costing at most the given value (plus tolerance).
    Reach(f64),
}

pub(super) struct Search<'a> {
    inst: &'a WmscInstance,
    /// Candidate set ids (after dominance reduction).
    candidates: Vec<usize>,
    pool: Vec<usize>,
    in_pool: Vec<bool>,
    /// Relaxation count when each set last had positive value or joined.
    last_used: Vec<usize>,
    relaxations: usize,
    goal: Goal,
    found: bool,
    pub(super) best: Option<(f64, Vec<usize>)>,
    pub(super) nodes: usize,
}

impl<'a> Search<'a> {
    pub(super) fn new(inst: &'a WmscInstance, candidates: Vec<usize>) -> Self {
        Search {
            inst,
            candidates,
            pool: Vec::new(),
            in_pool: vec![false; inst.sets.len()],
            last_used: vec![0; inst.sets.len()],
            relaxations: 0,
            goal: Goal::Minimize,
            found: false,
            best: None,
            nodes: 0,
        }
    }

    fn add_to_pool(&mut self, s: usize) {
        if !self.in_pool[s] {
            self.in_pool[s] = true;
            self.pool.push(s);
        }
        self.last_used[s] = self.relaxations;
    }

    /// Records `chosen` if it improves on the incumbent, or if it reaches the
    /// target.
    pub(super) fn offer(&mut self, cost: f64, chosen: &[usize]) {
        let accept = match self.goal {
            Goal::Minimize => self.best.as_ref().is_none_or(|(b, _)| cost < b - TOLERANCE),
            Goal::Reach(t) => !self.found && cost <= t + TOLERANCE,
        };
        if accept {
            let mut sorted = chosen.to_vec();
            sorted.sort_unstable();
            self.best = Some((cost, sorted));
            self.found = matches!(self.goal, Goal::Reach(_));
        }
    }

    /// Subtrees whose bound exceeds this value cannot contribute.
    fn limit(&self, cost: f64) -> f64 {
        match self.goal {
            Goal::Minimize => self.best.as_ref().map_or(f64::INFINITY, |(b, _)| b - cost - TOLERANCE),
            Goal::Reach(t) => t - cost + TOLERANCE,
        }
    }

    /// LP relaxation restricted to `uncovered` and the sets not in `banned`.
    /// Stops early once a valid lower bound exceeds `limit`.
    pub(super) fn relax(&mut self, uncovered: &FixedBitSet, banned: &[bool], limit: f64) -> Result<Relaxation> {
        let inst = self.inst;
        self.relaxations += 1;
        let now = self.relaxations;
        let (last_used, in_pool) = (&self.last_used, &mut self.in_pool);
        self.pool.retain(|&s| {
            let keep = now - last_used[s] <= POOL_AGE;
            in_pool[s] = keep;
            keep
        });
        let rows: Vec<usize> = uncovered.ones().collect();
        let mut row_of = vec![usize::MAX; inst.universe_size];
        for (r, &e) in rows.iter().enumerate() {
            row_of[e] = r;
        }
        let available: Vec<usize> = self
            .candidates
            .iter()
            .copied()
            .filter(|&s| !banned[s] && !inst.sets[s].is_disjoint(uncovered))
            .collect();
        let mut usable = vec![false; inst.sets.len()];
        for &s in &available {
            usable[s] = true;
        }

        // every row needs a pooled column: seed with the cheapest per element
        let mut seeded = FixedBitSet::with_capacity(inst.universe_size);
        for &s in self.pool.iter().filter(|&&s| usable[s]) {
            seeded.union_with(&inst.sets[s]);
        }
        for &e in &rows {
            if seeded.contains(e) {
                continue;
            }
            let pick = available
                .iter()
                .copied()
                .filter(|&s| inst.sets[s].contains(e))
                .min_by(|&a, &b| {
                    let ra = inst.weights[a] / inst.sets[a].intersection_count(uncovered) as f64;
                    let rb = inst.weights[b] / inst.sets[b].intersection_count(uncovered) as f64;
                    ra.total_cmp(&rb).then(a.cmp(&b))
                });
            let Some(s) = pick else {
                return Ok(Relaxation::Infeasible);
            };
            self.add_to_pool(s);
            seeded.union_with(&inst.sets[s]);
        }

        for _ in 0..MAX_PRICING_ROUNDS {
            let columns: Vec<usize> = self.pool.iter().copied().filter(|&s| usable[s]).collect();
            let members: Vec<Vec<usize>> = columns
                .iter()
                .map(|&s| inst.sets[s].intersection(uncovered).map(|e| row_of[e]).collect())
                .collect();
            let weights: Vec<f64> = columns.iter().map(|&s| inst.weights[s]).collect();
            let lp = solve_covering_lp(rows.len(), &members, &weights)?;

            // pricing, plus the bound obtained by scaling the duals into feasibility
            let mut entering: Vec<(f64, usize)> = Vec::new();
            let mut scale = 1.0f64;
            for &s in &available {
                let dot: f64 = inst.sets[s].intersection(uncovered).map(|e| lp.y[row_of[e]]).sum();
                let w = inst.weights[s];
                if dot > 0.0 {
                    scale = scale.min(w / dot);
                }
                let reduced = w - dot;
                if reduced < -TOLERANCE * w.max(1.0) && !self.in_pool[s] {
                    entering.push((reduced, s));
                }
            }
            if lp.objective * scale > limit {
                return Ok(Relaxation::Pruned);
            }
            if entering.is_empty() {
                let x: Vec<(usize, f64)> = columns
                    .iter()
                    .zip(&lp.x)
                    .filter(|(_, &v)| v > INTEGRALITY_EPS)
                    .map(|(&s, &v)| (s, v))
                    .collect();
                for &(s, _) in &x {
                    self.last_used[s] = now;
                }
                let mut y = vec![0.0; inst.universe_size];
                for (r, &e) in rows.iter().enumerate() {
                    y[e] = lp.y[r];
                }
                return Ok(Relaxation::Solved {
                    bound: lp.objective,
                    x,
                    y,
                });
            }
            entering.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            for &(_, s) in entering.iter().take(COLUMNS_PER_ROUND) {
                self.add_to_pool(s);
            }
        }
        Err(Error::Numeric(format!(
            "column generation exceeded {MAX_PRICING_ROUNDS} rounds"
        )))
    }

    /// Greedy completion of `start` over the sets allowed at this node.
    fn round(&self, start: &[usize], uncovered: &FixedBitSet, banned: &[bool]) -> Option<Vec<usize>> {
        let inst = self.inst;
        let mut chosen = start.to_vec();
        let mut left = uncovered.clone();
        for &s in start {
            left.difference_with(&inst.sets[s]);
        }
        while !left.is_clear() {
            let pick = self
                .candidates
                .iter()
                .copied()
                .filter(|&s| !banned[s])
                .filter_map(|s| {
                    let fresh = inst.sets[s].intersection_count(&left);
                    (fresh > 0).then(|| (inst.weights[s] / fresh as f64, s))
                })
                .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))?;
            chosen.push(pick.1);
            left.difference_with(&inst.sets[pick.1]);
        }
        Some(chosen)
    }

    /// Depth-first branch and bound on the most fractional variable:
    /// first the branch that takes the set, then the branch that bans it.
    pub(super) fn run(
        &mut self,
        chosen: &mut Vec<usize>,
        banned: &mut [bool],
        uncovered: FixedBitSet,
        cost: f64,
    ) -> Result<()> {
        if self.found {
            return Ok(());
        }
        self.nodes += 1;
        if uncovered.is_clear() {
            self.offer(cost, chosen);
            return Ok(());
        }
        let limit = self.limit(cost);
        if limit < 0.0 {
            return Ok(());
        }
        let (bound, x, y) = match self.relax(&uncovered, banned, limit)? {
            Relaxation::Infeasible | Relaxation::Pruned => return Ok(()),
            Relaxation::Solved { bound, x, y } => (bound, x, y),
        };
        if bound > limit {
            return Ok(());
        }
        let heavy: Vec<usize> = x.iter().filter(|(_, v)| *v >= 0.5).map(|&(s, _)| s).collect();
        if let Some(mut cover) = self.round(&heavy, &uncovered, banned) {
            super::drop_redundant_within(self.inst, &mut cover, &uncovered);
            let c = self.inst.cost(&cover);
            let full: Vec<usize> = chosen.iter().copied().chain(cover).collect();
            self.offer(cost + c, &full);
        }
        let limit = self.limit(cost);
        if self.found || bound > limit {
            return Ok(());
        }
        let fractional = x
            .iter()
            .filter(|(_, v)| *v < 1.0 - INTEGRALITY_EPS)
            .min_by(|a, b| (a.1 - 0.5).abs().total_cmp(&(b.1 - 0.5).abs()).then(a.0.cmp(&b.0)));
        let Some(&(s, _)) = fractional else {
            // integral relaxation: the rounding above already took it
            return Ok(());
        };
        let fixed = self.fix_by_reduced_cost(&uncovered, banned, bound, limit, &y);
        let result = self.branch_on(s, chosen, banned, uncovered, cost);
        for f in fixed {
            banned[f] = false;
        }
        result
    }

    /// Bans every set whose reduced cost alone pushes the bound past `limit`;
    /// returns the newly banned sets.
    fn fix_by_reduced_cost(
        &self,
        uncovered: &FixedBitSet,
        banned: &mut [bool],
        bound: f64,
        limit: f64,
        y: &[f64],
    ) -> Vec<usize> {
        let mut fixed = Vec::new();
        for &s in &self.candidates {
            if !banned[s] && bound + self.reduced_cost(s, uncovered, y) > limit {
                banned[s] = true;
                fixed.push(s);
            }
        }
        fixed
    }

    fn reduced_cost(&self, s: usize, uncovered: &FixedBitSet, y: &[f64]) -> f64 {
        self.inst.weights[s] - self.inst.sets[s].intersection(uncovered).map(|e| y[e]).sum::<f64>()
    }

    fn branch_on(
        &mut self,
        s: usize,
        chosen: &mut Vec<usize>,
        banned: &mut [bool],
        uncovered: FixedBitSet,
        cost: f64,
    ) -> Result<()> {
        let mut next = uncovered.clone();
        next.difference_with(&self.inst.sets[s]);
        chosen.push(s);
        self.run(chosen, banned, next, cost + self.inst.weights[s])?;
        chosen.pop();
        banned[s] = true;
        self.run(chosen, banned, uncovered, cost)?;
        banned[s] = false;
        Ok(())
    }

    /// Among covers costing at most `target` (plus tolerance), the one whose
    /// sorted index list is lexicographically smallest. `witness` must be
    /// such a cover.
    ///
    /// Candidates are decided in ascending order: each joins the answer iff
    /// some qualifying cover extends the sets taken so far with it while
    /// avoiding every smaller candidate that was rejected.
    pub(super) fn lex_first(&mut self, target: f64, witness: Vec<usize>) -> Result<Vec<usize>> {
        let inst = self.inst;
        let mut order = self.candidates.clone();
        order.sort_unstable();
        let mut witness = witness;
        witness.sort_unstable();
        let mut banned = vec![true; inst.sets.len()];
        for &s in &order {
            banned[s] = false;
        }
        let mut taken: Vec<usize> = Vec::new();
        let mut cost = 0.0;
        let mut uncovered = FixedBitSet::with_capacity(inst.universe_size);
        uncovered.insert_range(..);
        // duals of the relaxation at the current prefix; later bans only
        // raise its value, so they stay valid until the prefix grows
        let mut duals: Option<(f64, Vec<f64>)> = None;
        self.goal = Goal::Reach(target);
        for s in order {
            if uncovered.is_clear() {
                break;
            }
            if inst.sets[s].is_disjoint(&uncovered) {
                banned[s] = true;
                continue;
            }
            let include = if witness.binary_search(&s).is_ok() {
                true
            } else {
                if duals.is_none() {
                    duals = match self.relax(&uncovered, &banned, f64::INFINITY)? {
                        Relaxation::Solved { bound, y, .. } => Some((bound, y)),
                        _ => return Err(Error::Internal("witness cover lost during tie-breaking".into())),
                    };
                }
                let (bound, y) = duals.as_ref().expect("set above");
                if cost + bound + self.reduced_cost(s, &uncovered, y) > target + TOLERANCE {
                    false
                } else {
                    self.found = false;
                    self.best = None;
                    let mut chosen = taken.clone();
                    chosen.push(s);
                    let mut next = uncovered.clone();
                    next.difference_with(&inst.sets[s]);
                    self.run(&mut chosen, &mut banned, next, cost + inst.weights[s])?;
                    if let Some((_, cover)) = self.best.take().filter(|_| self.found) {
                        witness = cover;
                        true
                    } else {
                        false
                    }
                }
            };
            if include {
                taken.push(s);
                cost += inst.weights[s];
                uncovered.difference_with(&inst.sets[s]);
                duals = None;
            } else {
                banned[s] = true;
            }
        }
        self.goal = Goal::Minimize;
        self.found = false;
        Ok(taken)
    }
}
