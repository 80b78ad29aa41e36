//! Clauses over region variables, DNF branching rules, and candidate-clause
//! generation by closure under intersection.

use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;

use crate::branching_table::BranchingTable;
use crate::error::{Error, Result};
use crate::graph::Measure;
use crate::region::Region;

/// Conjunction of literals over local region variables.
///
/// Bit `i` of `mask` is set when variable `i` appears; the same bit of
/// `values` is its sign (1 = positive). Bits of `values` outside `mask` are
/// always zero, so equal clauses are bitwise equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clause {
    mask: u64,
    values: u64,
}

impl Clause {
    pub fn new(mask: u64, values: u64) -> Self {
        Clause {
            mask,
            values: values & mask,
        }
    }

    /// The clause fixing every one of `width` variables to `config`.
    pub fn single_cover(config: u64, width: usize) -> Self {
        let mask = if width >= 64 { u64::MAX } else { (1u64 << width) - 1 };
        Clause::new(mask, config)
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn values(&self) -> u64 {
        self.values
    }

    /// Variables asserted to be in the set, T(c).
    pub fn positives(&self) -> u64 {
        self.values
    }

    pub fn literal_count(&self) -> u32 {
        self.mask.count_ones()
    }

    /// Literals shared with the same sign by both clauses; `None` when none are.
    pub fn intersection(&self, other: &Clause) -> Option<Clause> {
        let mask = self.mask & other.mask & !(self.values ^ other.values);
        (mask != 0).then(|| Clause::new(mask, self.values))
    }

    pub fn is_satisfied_by(&self, config: u64) -> bool {
        config & self.mask == self.values
    }

    /// S ⊢ c: some configuration of the row satisfies the clause.
    pub fn covers(&self, row: &[u64]) -> bool {
        row.iter().any(|&c| self.is_satisfied_by(c))
    }

    /// Rows of `table` covered by this clause.
    pub fn coverage(&self, table: &BranchingTable) -> FixedBitSet {
        let mut bits = FixedBitSet::with_capacity(table.len());
        for (j, row) in table.rows().iter().enumerate() {
            if self.covers(row) {
                bits.insert(j);
            }
        }
        bits
    }

    /// Renders the clause as `¬a ∧ b ∧ …` with `label(i)` naming local variable `i`.
    pub fn render(&self, width: usize, label: &dyn Fn(usize) -> String) -> String {
        let mut out = String::new();
        for i in (0..width).filter(|&i| self.mask >> i & 1 == 1) {
            if !out.is_empty() {
                out.push_str(" ∧ ");
            }
            if self.values >> i & 1 == 0 {
                out.push('¬');
            }
            out.push_str(&label(i));
        }
        out
    }
}

/// Default variable labels `#1, #2, …` (1-based local positions).
pub fn hash_label(i: usize) -> String {
    format!("#{}", i + 1)
}

/// A branching rule: the disjunction of its clauses, one branch per clause.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Dnf {
    pub clauses: Vec<Clause>,
}

impl Dnf {
    pub fn new(clauses: Vec<Clause>) -> Self {
        Dnf { clauses }
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Every row of `table` is covered by at least one clause.
    pub fn is_valid_rule(&self, table: &BranchingTable) -> bool {
        table
            .rows()
            .iter()
            .all(|row| self.clauses.iter().any(|c| c.covers(row)))
    }

    pub fn render(&self, width: usize, label: &dyn Fn(usize) -> String) -> String {
        let mut out = String::new();
        for (k, c) in self.clauses.iter().enumerate() {
            if k > 0 {
                out.push_str(" ∨ ");
            }
            let _ = write!(out, "({})", c.render(width, label));
        }
        out
    }
}

/// A candidate clause together with the rows it covers and its measure reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateClause {
    pub clause: Clause,
    pub coverage: FixedBitSet,
    pub delta_rho: u32,
}

/// Closure of the single covers of every configuration under intersection
/// with single covers. A popped clause is only intersected with
/// configurations of rows it does not already cover, so every derived clause
/// keeps the longest literal set for the rows it reaches. Output is in
/// insertion order: single covers first, row by row, then derived clauses in
/// work-list order.
pub fn candidate_clauses(table: &BranchingTable) -> Vec<Clause> {
    let width = table.width();
    let mut seen: HashSet<Clause> = HashSet::new();
    let mut out = Vec::new();
    let mut work = VecDeque::new();
    for c in table.configs().map(|c| Clause::single_cover(c, width)) {
        if seen.insert(c) {
            out.push(c);
            work.push_back(c);
        }
    }
    while let Some(c) = work.pop_front() {
        for row in table.rows() {
            if c.covers(row) {
                continue;
            }
            for &s in row {
                if let Some(next) = c.intersection(&Clause::single_cover(s, width)) {
                    if seen.insert(next) {
                        out.push(next);
                        work.push_back(next);
                    }
                }
            }
        }
    }
    out
}

/// Δρ(c) = ρ(G) − ρ(G ∖ (V(c) ∪ N(T(c)))) evaluated on the region's host.
pub fn delta_rho(clause: &Clause, region: &Region<'_>, measure: Measure) -> Result<u32> {
    let host = region.host();
    let positives = region.to_host_set(clause.positives());
    let mut removed = host.open_neighborhood(&positives);
    removed.union_with(&region.to_host_set(clause.mask()));
    let drop = host.measure_drop(&removed, measure);
    if drop == 0 {
        return Err(Error::DegenerateClause(clause.render(region.width(), &hash_label)));
    }
    Ok(drop as u32)
}

/// Candidate clauses with coverage sets and Δρ. Clauses whose reduction is
/// zero under the effective-degree measure are dropped.
pub fn build_candidates(table: &BranchingTable, region: &Region<'_>, measure: Measure) -> Result<Vec<CandidateClause>> {
    let mut out = Vec::new();
    for clause in candidate_clauses(table) {
        let delta = match delta_rho(&clause, region, measure) {
            Ok(d) => d,
            Err(Error::DegenerateClause(_)) if measure == Measure::EffectiveDegree => continue,
            Err(e) => return Err(e),
        };
        out.push(CandidateClause {
            coverage: clause.coverage(table),
            clause,
            delta_rho: delta,
        });
    }
    Ok(out)
}

/// Candidates scored with a caller-supplied Δρ, e.g. the literal count.
pub fn candidates_with(table: &BranchingTable, mut score: impl FnMut(&Clause) -> u32) -> Vec<CandidateClause> {
    candidate_clauses(table)
        .into_iter()
        .map(|clause| CandidateClause {
            coverage: clause.coverage(table),
            delta_rho: score(&clause),
            clause,
        })
        .collect()
}
