//! Weighted minimum set cover: an exact LP-based branch-and-bound solver and
//! an LP relaxation with seeded randomized rounding.

mod lp;
mod search;

use std::cmp::Ordering;

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub use lp::{solve_covering_lp, LpSolution};
use search::{Relaxation, Search};

/// Absolute tolerance for objective comparisons.
pub const TOLERANCE: f64 = 1e-9;

/// Number of randomized rounding trials in [`solve_lp`].
pub const DEFAULT_ROUNDING_TRIALS: usize = 32;

/// Universe `0..universe_size`, subsets, and a positive weight per subset.
#[derive(Debug, Clone)]
pub struct WmscInstance {
    pub universe_size: usize,
    pub sets: Vec<FixedBitSet>,
    pub weights: Vec<f64>,
}

/// Chosen subset indices (ascending), their total weight, and whether the
/// cover is proven optimal.
#[derive(Debug, Clone, PartialEq)]
pub struct WmscSolution {
    pub chosen: Vec<usize>,
    pub objective: f64,
    pub exact: bool,
}

impl WmscInstance {
    pub fn new(universe_size: usize, sets: Vec<FixedBitSet>, weights: Vec<f64>) -> Result<Self> {
        if sets.len() != weights.len() {
            return Err(Error::Input(format!(
                "{} sets but {} weights",
                sets.len(),
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
            return Err(Error::Input(format!(
                "set weights must be positive and finite, got {w}"
            )));
        }
        let sets = sets
            .into_iter()
            .map(|mut s| {
                if s.len() < universe_size {
                    s.grow(universe_size);
                }
                s
            })
            .collect::<Vec<_>>();
        if sets.iter().any(|s| s.ones().any(|e| e >= universe_size)) {
            return Err(Error::Input("set contains an element outside the universe".into()));
        }
        Ok(WmscInstance {
            universe_size,
            sets,
            weights,
        })
    }

    /// Convenience constructor from element lists.
    pub fn from_lists(universe_size: usize, sets: &[Vec<usize>], weights: Vec<f64>) -> Result<Self> {
        let bits = sets
            .iter()
            .map(|elems| {
                let mut b = FixedBitSet::with_capacity(universe_size);
                for &e in elems {
                    if e >= universe_size {
                        b.grow(e + 1);
                    }
                    b.insert(e);
                }
                b
            })
            .collect();
        Self::new(universe_size, bits, weights)
    }

    pub fn check_feasible(&self) -> Result<()> {
        let mut all = FixedBitSet::with_capacity(self.universe_size);
        for s in &self.sets {
            all.union_with(s);
        }
        match (0..self.universe_size).find(|&e| !all.contains(e)) {
            Some(e) => Err(Error::Infeasible(e)),
            None => Ok(()),
        }
    }

    /// True iff the chosen sets jointly cover the universe.
    pub fn covers(&self, chosen: &[usize]) -> bool {
        let mut acc = FixedBitSet::with_capacity(self.universe_size);
        for &i in chosen {
            acc.union_with(&self.sets[i]);
        }
        acc.count_ones(..) == self.universe_size
    }

    pub fn cost(&self, chosen: &[usize]) -> f64 {
        chosen.iter().map(|&i| self.weights[i]).sum()
    }

    fn empty_solution(&self, exact: bool) -> WmscSolution {
        WmscSolution {
            chosen: Vec::new(),
            objective: 0.0,
            exact,
        }
    }
}

/// `a` beats `b`: strictly cheaper, or tied within tolerance and lexicographically smaller.
fn better(a_cost: f64, a: &[usize], b_cost: f64, b: &[usize]) -> bool {
    if a_cost < b_cost - TOLERANCE {
        return true;
    }
    if a_cost > b_cost + TOLERANCE {
        return false;
    }
    a.cmp(b) == Ordering::Less
}

/// Drops sets that can never appear in the lexicographically smallest optimum:
/// empty sets, and any set `b` whose coverage is contained in that of some `a`
/// with `w_a < w_b`, or with `w_a == w_b` and `a < b`.
fn undominated(inst: &WmscInstance) -> Vec<usize> {
    let mut order: Vec<usize> = (0..inst.sets.len()).filter(|&i| !inst.sets[i].is_clear()).collect();
    // larger sets first so that dominators are usually met early
    order.sort_by(|&a, &b| {
        inst.sets[b]
            .count_ones(..)
            .cmp(&inst.sets[a].count_ones(..))
            .then(inst.weights[a].total_cmp(&inst.weights[b]))
            .then(a.cmp(&b))
    });
    let mut kept: Vec<usize> = Vec::new();
    let dominates = |a: usize, b: usize| {
        inst.sets[b].is_subset(&inst.sets[a])
            && (inst.weights[a] < inst.weights[b] || (inst.weights[a] == inst.weights[b] && a < b))
    };
    for &b in &order {
        if !kept.iter().any(|&a| dominates(a, b)) {
            kept.retain(|&k| !dominates(b, k));
            kept.push(b);
        }
    }
    kept.sort_unstable();
    kept
}

/// Greedy cover by smallest weight per newly covered element, starting from `start`.
fn greedy_complete(inst: &WmscInstance, candidates: &[usize], start: &[usize]) -> Vec<usize> {
    let mut chosen = start.to_vec();
    let mut uncovered = FixedBitSet::with_capacity(inst.universe_size);
    uncovered.insert_range(..);
    for &s in &chosen {
        uncovered.difference_with(&inst.sets[s]);
    }
    while !uncovered.is_clear() {
        let pick = candidates
            .iter()
            .copied()
            .filter_map(|s| {
                let fresh = inst.sets[s].intersection_count(&uncovered);
                (fresh > 0).then(|| (inst.weights[s] / fresh as f64, s))
            })
            .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
            .map(|(_, s)| s)
            .expect("feasible instance");
        chosen.push(pick);
        uncovered.difference_with(&inst.sets[pick]);
    }
    chosen
}

/// Removes sets whose elements are all covered by the others, heaviest first.
fn drop_redundant(inst: &WmscInstance, chosen: &mut Vec<usize>) {
    let mut all = FixedBitSet::with_capacity(inst.universe_size);
    all.insert_range(..);
    drop_redundant_within(inst, chosen, &all);
}

/// [`drop_redundant`] with respect to covering `target` only.
fn drop_redundant_within(inst: &WmscInstance, chosen: &mut Vec<usize>, target: &FixedBitSet) {
    let mut order = chosen.clone();
    order.sort_by(|&a, &b| inst.weights[b].total_cmp(&inst.weights[a]).then(b.cmp(&a)));
    for s in order {
        let mut acc = FixedBitSet::with_capacity(inst.universe_size);
        for &x in chosen.iter().filter(|&&x| x != s) {
            acc.union_with(&inst.sets[x]);
        }
        if target.is_subset(&acc) {
            chosen.retain(|&x| x != s);
        }
    }
    chosen.sort_unstable();
}

/// Minimum-weight cover by LP-based branch and bound.
pub fn solve_exact(inst: &WmscInstance) -> Result<WmscSolution> {
    solve_exact_with_hint(inst, None)
}

/// [`solve_exact`] starting from a known cover, which only speeds up the
/// search. The optimum is exact to within [`TOLERANCE`] (relative, when the
/// greedy cover costs less than 1); among tied covers the one with the
/// lexicographically smallest sorted index list is returned.
pub fn solve_exact_with_hint(inst: &WmscInstance, hint: Option<&[usize]>) -> Result<WmscSolution> {
    exact(inst, hint, true)
}

/// Like [`solve_exact_with_hint`], but returns whichever optimal cover the
/// search meets first.
pub(crate) fn solve_exact_untied(inst: &WmscInstance, hint: Option<&[usize]>) -> Result<WmscSolution> {
    exact(inst, hint, false)
}

fn exact(inst: &WmscInstance, hint: Option<&[usize]>, lex: bool) -> Result<WmscSolution> {
    inst.check_feasible()?;
    if inst.universe_size == 0 {
        return Ok(inst.empty_solution(true));
    }
    // tiny weights are rescaled so that the tolerances stay meaningful
    let sets = undominated(inst);
    let mut greedy = greedy_complete(inst, &sets, &[]);
    drop_redundant(inst, &mut greedy);
    let scale = inst.cost(&greedy).min(1.0);
    let scaled = WmscInstance {
        universe_size: inst.universe_size,
        sets: inst.sets.clone(),
        weights: inst.weights.iter().map(|w| w / scale).collect(),
    };
    let mut search = Search::new(&scaled, sets);
    search.offer(scaled.cost(&greedy), &greedy);
    if let Some(h) = hint.filter(|h| h.iter().all(|&s| s < inst.sets.len()) && inst.covers(h)) {
        let mut h = h.to_vec();
        drop_redundant(inst, &mut h);
        search.offer(scaled.cost(&h), &h);
    }
    let mut all = FixedBitSet::with_capacity(inst.universe_size);
    all.insert_range(..);
    let mut banned = vec![false; inst.sets.len()];
    search.run(&mut Vec::new(), &mut banned, all, 0.0)?;
    let (optimum, cover) = search.best.take().expect("feasible instance has a cover");
    let chosen = if lex { search.lex_first(optimum, cover)? } else { cover };
    log::trace!("set cover: {} sets, {} nodes", inst.sets.len(), search.nodes);
    Ok(WmscSolution {
        objective: inst.cost(&chosen),
        chosen,
        exact: true,
    })
}

fn trial_seed(seed: u64, trial: u64) -> u64 {
    // splitmix64 step
    let mut z = seed ^ trial.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Solves the LP relaxation of the cover. Only columns generated during
/// pricing can be nonzero in the returned `x`.
pub fn solve_relaxation(inst: &WmscInstance) -> Result<LpSolution> {
    inst.check_feasible()?;
    if inst.universe_size == 0 {
        return Ok(LpSolution {
            x: vec![0.0; inst.sets.len()],
            y: Vec::new(),
            objective: 0.0,
        });
    }
    let mut search = Search::new(inst, (0..inst.sets.len()).collect());
    let mut all = FixedBitSet::with_capacity(inst.universe_size);
    all.insert_range(..);
    let banned = vec![false; inst.sets.len()];
    match search.relax(&all, &banned, f64::INFINITY)? {
        Relaxation::Solved { bound, x: support, y } => {
            let mut x = vec![0.0; inst.sets.len()];
            for (s, v) in support {
                x[s] = v;
            }
            Ok(LpSolution { x, y, objective: bound })
        }
        _ => Err(Error::Internal("relaxation of a feasible cover failed".into())),
    }
}

/// LP relaxation followed by `trials` rounds of randomized rounding (set `i`
/// kept with probability `x_i`), greedy repair and redundancy removal.
pub fn solve_lp_with_trials(inst: &WmscInstance, seed: u64, trials: usize) -> Result<WmscSolution> {
    inst.check_feasible()?;
    if inst.universe_size == 0 {
        return Ok(inst.empty_solution(false));
    }
    let lp = solve_relaxation(inst)?;
    let all: Vec<usize> = (0..inst.sets.len()).collect();
    let mut best: Option<(f64, Vec<usize>)> = None;
    for trial in 0..trials.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, trial as u64));
        let picked: Vec<usize> =
            lp.x.iter()
                .enumerate()
                .filter(|(_, &x)| {
                    let p = x.clamp(0.0, 1.0);
                    p >= 1.0 - TOLERANCE || (p > TOLERANCE && rng.random_bool(p))
                })
                .map(|(i, _)| i)
                .collect();
        let mut chosen = greedy_complete(inst, &all, &picked);
        drop_redundant(inst, &mut chosen);
        let cost = inst.cost(&chosen);
        let replace = match &best {
            None => true,
            Some((bc, bs)) => better(cost, &chosen, *bc, bs),
        };
        if replace {
            best = Some((cost, chosen));
        }
    }
    let (objective, chosen) = best.expect("at least one trial");
    Ok(WmscSolution {
        chosen,
        objective,
        exact: false,
    })
}

/// [`solve_lp_with_trials`] with [`DEFAULT_ROUNDING_TRIALS`] trials.
pub fn solve_lp(inst: &WmscInstance, seed: u64) -> Result<WmscSolution> {
    solve_lp_with_trials(inst, seed, DEFAULT_ROUNDING_TRIALS)
}
