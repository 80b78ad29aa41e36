//! Selection of the branching rule with the smallest branching factor γ.

use std::fmt::Write as _;

use crate::clause::{CandidateClause, Dnf};
use crate::error::{Error, Result};
use crate::wmsc::{solve_exact_untied, solve_exact_with_hint, solve_lp, WmscInstance, WmscSolution};

/// Hard cap on fixed-point rounds; reaching it indicates a bug.
pub const MAX_FIXED_POINT_ROUNDS: usize = 64;

/// Set-cover backend used inside the γ iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SolverKind {
    #[default]
    Exact,
    LpRelaxed,
}

/// The chosen rule with its branching vector and factor.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimalBranchingResult {
    pub rule: Dnf,
    /// Indices into the candidate list, in the order the clauses appear in `rule`.
    pub chosen_indices: Vec<usize>,
    pub branching_vector: Vec<u32>,
    pub gamma: f64,
    pub solver_kind: SolverKind,
    /// γ values visited by the fixed-point iteration, starting at 2.
    pub gamma_trace: Vec<f64>,
}

impl OptimalBranchingResult {
    /// Multi-line summary: selected ids (1-based), rule, branching vector and γ.
    pub fn render(&self, width: usize, label: &dyn Fn(usize) -> String) -> String {
        let ids: Vec<String> = self.chosen_indices.iter().map(|i| (i + 1).to_string()).collect();
        let vector: Vec<String> = self.branching_vector.iter().map(u32::to_string).collect();
        let mut out = String::from("OptimalBranchingResult:\n");
        let _ = writeln!(out, " selected_ids: [{}]", ids.join(", "));
        let _ = writeln!(out, " optimal_rule: DNF: {}", self.rule.render(width, label));
        let _ = writeln!(out, " branching_vector: [{}]", vector.join(", "));
        let _ = writeln!(out, " γ: {}", self.gamma);
        out
    }
}

fn sum_powers(gamma: f64, vector: &[f64]) -> f64 {
    vector.iter().map(|&v| gamma.powf(-v)).sum()
}

/// The unique γ ≥ 1 with Σ γ^(−v_i) = 1; exactly 1 for a single entry.
///
/// # Panics
/// If `vector` is empty or has a non-positive entry.
pub fn find_gamma(vector: &[f64]) -> f64 {
    assert!(!vector.is_empty(), "branching vector must be nonempty");
    assert!(
        vector.iter().all(|&v| v > 0.0),
        "branching vector entries must be positive"
    );
    if vector.len() == 1 {
        return 1.0;
    }
    let min = vector.iter().copied().fold(f64::INFINITY, f64::min);
    let (mut lo, mut hi) = (1.0f64, (vector.len() as f64).powf(1.0 / min));
    // f is strictly decreasing on γ > 1: f(lo) ≥ 1 ≥ f(hi)
    while hi - lo > 1e-15 * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sum_powers(mid, vector) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut gamma = 0.5 * (lo + hi);
    for _ in 0..2 {
        let f = sum_powers(gamma, vector) - 1.0;
        let df: f64 = vector.iter().map(|&v| -v * gamma.powf(-v - 1.0)).sum();
        if df != 0.0 {
            let next = gamma - f / df;
            if next > 1.0 && (sum_powers(next, vector) - 1.0).abs() <= f.abs() {
                gamma = next;
            }
        }
    }
    gamma
}

fn instance_at(candidates: &[CandidateClause], universe_size: usize, gamma: f64) -> Result<WmscInstance> {
    WmscInstance::new(
        universe_size,
        candidates.iter().map(|c| c.coverage.clone()).collect(),
        candidates.iter().map(|c| gamma.powf(-f64::from(c.delta_rho))).collect(),
    )
}

fn solve_at(
    candidates: &[CandidateClause],
    universe_size: usize,
    gamma: f64,
    solver: SolverKind,
    seed: u64,
    hint: Option<&[usize]>,
) -> Result<WmscSolution> {
    let inst = instance_at(candidates, universe_size, gamma)?;
    match solver {
        SolverKind::Exact => solve_exact_untied(&inst, hint),
        SolverKind::LpRelaxed => solve_lp(&inst, seed),
    }
}

fn vector_of(candidates: &[CandidateClause], chosen: &[usize]) -> Vec<f64> {
    chosen.iter().map(|&i| f64::from(candidates[i].delta_rho)).collect()
}

/// Fixed-point iteration: starting from γ = 2, solve the weighted cover with
/// weights γ^(−Δρ_i), recompute γ from the chosen clauses, and stop once γ no
/// longer decreases.
///
/// With [`SolverKind::Exact`] the result is the global minimum of γ over all
/// valid rules built from `candidates`. With [`SolverKind::LpRelaxed`] the best
/// rule seen along the iteration is returned.
pub fn minimize_gamma(
    candidates: &[CandidateClause],
    universe_size: usize,
    solver: SolverKind,
    seed: u64,
) -> Result<OptimalBranchingResult> {
    if candidates.is_empty() {
        return Err(Error::Infeasible(0));
    }
    if let Some(c) = candidates.iter().find(|c| c.delta_rho == 0) {
        return Err(Error::DegenerateClause(format!("{:?}", c.clause)));
    }
    let mut gamma = 2.0;
    let mut trace = vec![gamma];
    let mut best: Option<(f64, Vec<usize>)> = None;
    for round in 0..MAX_FIXED_POINT_ROUNDS {
        let hint = best.as_ref().map(|(_, chosen)| chosen.as_slice());
        let sol = solve_at(
            candidates,
            universe_size,
            gamma,
            solver,
            seed.wrapping_add(round as u64),
            hint,
        )?;
        let next = find_gamma(&vector_of(candidates, &sol.chosen));
        if best.as_ref().is_none_or(|(g, _)| next < *g) {
            best = Some((next, sol.chosen.clone()));
        }
        // the first step may move up when no rule reaches γ ≤ 2
        let converged = if round > 0 {
            next >= gamma - 1e-12
        } else {
            trace.push(next);
            (next - gamma).abs() <= 1e-12
        };
        if converged {
            let best = settle_ties(candidates, universe_size, solver, best.expect("set above"))?;
            return Ok(assemble(candidates, best, solver, trace));
        }
        if round > 0 {
            trace.push(next);
        }
        gamma = next;
    }
    Err(Error::NonConvergence(MAX_FIXED_POINT_ROUNDS))
}

/// Replaces the optimal cover by the lexicographically smallest one among
/// those tied with it at its own γ.
fn settle_ties(
    candidates: &[CandidateClause],
    universe_size: usize,
    solver: SolverKind,
    (gamma, chosen): (f64, Vec<usize>),
) -> Result<(f64, Vec<usize>)> {
    if solver != SolverKind::Exact {
        return Ok((gamma, chosen));
    }
    let inst = instance_at(candidates, universe_size, gamma)?;
    let sol = solve_exact_with_hint(&inst, Some(&chosen))?;
    let settled = find_gamma(&vector_of(candidates, &sol.chosen));
    Ok(if settled <= gamma + 1e-12 {
        (settled.min(gamma), sol.chosen)
    } else {
        (gamma, chosen)
    })
}

fn assemble(
    candidates: &[CandidateClause],
    (gamma, chosen): (f64, Vec<usize>),
    solver: SolverKind,
    trace: Vec<f64>,
) -> OptimalBranchingResult {
    OptimalBranchingResult {
        rule: Dnf::new(chosen.iter().map(|&i| candidates[i].clause).collect()),
        branching_vector: chosen.iter().map(|&i| candidates[i].delta_rho).collect(),
        chosen_indices: chosen,
        gamma,
        solver_kind: solver,
        gamma_trace: trace,
    }
}

/// Bisection on the indicator "some valid cover has Σ γ^(−Δρ_i) ≤ 1", to
/// precision `eps`. Independent of [`minimize_gamma`]; used as a cross-check.
pub fn minimize_gamma_bisection(candidates: &[CandidateClause], universe_size: usize, eps: f64) -> Result<f64> {
    let feasible = |gamma: f64| -> Result<bool> {
        let sol = solve_at(candidates, universe_size, gamma, SolverKind::Exact, 0, None)?;
        Ok(sol.objective <= 1.0 + 1e-12)
    };
    if feasible(1.0)? {
        return Ok(1.0);
    }
    let (mut lo, mut hi) = (1.0, 2.0);
    while !feasible(hi)? {
        lo = hi;
        hi *= 2.0;
    }
    while hi - lo > eps {
        let mid = 0.5 * (lo + hi);
        if feasible(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
