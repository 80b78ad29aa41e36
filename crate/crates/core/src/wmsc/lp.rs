//! Dense two-phase primal simplex for covering LPs:
//! minimize `c·x` subject to `A x ≥ 1`, `x ≥ 0`, with 0/1 rows of `A`.

use crate::error::{Error, Result};

const EPS: f64 = 1e-9;
const PIVOT_EPS: f64 = 1e-8;
const MAX_PIVOTS: usize = 200_000;
const REFACTOR_EVERY: usize = 50;
const PERTURBATION: f64 = 1e-6;

/// Optimal primal values, covering-row duals and objective of a covering LP.
#[derive(Debug, Clone)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub objective: f64,
}

struct Tableau {
    rows: usize,
    cols: usize,
    // rows × (cols + 1); last column is the right-hand side
    data: Vec<f64>,
    basis: Vec<usize>,
    // the constraint matrix as built, for re-inversion
    original: Vec<f64>,
}

impl Tableau {
    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * (self.cols + 1) + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.cols)
    }

    fn pivot(&mut self, pr: usize, pc: usize, obj: &mut [f64]) {
        let w = self.cols + 1;
        let p = self.data[pr * w + pc];
        for c in 0..w {
            self.data[pr * w + c] /= p;
        }
        let pivot_row: Vec<f64> = self.data[pr * w..(pr + 1) * w].to_vec();
        for r in 0..self.rows {
            if r == pr {
                continue;
            }
            let f = self.data[r * w + pc];
            if f != 0.0 {
                for (c, &pv) in pivot_row.iter().enumerate() {
                    self.data[r * w + c] -= f * pv;
                }
            }
        }
        let f = obj[pc];
        if f != 0.0 {
            for (o, &pv) in obj.iter_mut().zip(&pivot_row) {
                *o -= f * pv;
            }
        }
        for r in 0..self.rows {
            let b = &mut self.data[r * w + self.cols];
            if *b < 0.0 && *b > -EPS {
                *b = 0.0;
            }
        }
        self.basis[pr] = pc;
    }

    /// Rebuilds the tableau from the original matrix for the current basis
    /// (Gauss-Jordan with partial pivoting), discarding accumulated round-off.
    fn refactor(&mut self) -> Result<()> {
        let w = self.cols + 1;
        let m = self.rows;
        let mut data = self.original.clone();
        let mut order: Vec<usize> = (0..m).collect();
        for k in 0..m {
            let col = self.basis[k];
            let pr = (k..m)
                .max_by(|&a, &b| {
                    data[order[a] * w + col]
                        .abs()
                        .total_cmp(&data[order[b] * w + col].abs())
                })
                .expect("non-empty range");
            if data[order[pr] * w + col].abs() < PIVOT_EPS {
                return Err(Error::Numeric("singular simplex basis".into()));
            }
            order.swap(k, pr);
            let r = order[k];
            let p = data[r * w + col];
            for c in 0..w {
                data[r * w + c] /= p;
            }
            for other in 0..m {
                if other == r {
                    continue;
                }
                let f = data[other * w + col];
                if f != 0.0 {
                    for c in 0..w {
                        data[other * w + c] -= f * data[r * w + c];
                    }
                }
            }
        }
        // row k of the tableau is the one whose basic variable is basis[k]
        let mut fresh = vec![0.0; m * w];
        for k in 0..m {
            fresh[k * w..(k + 1) * w].copy_from_slice(&data[order[k] * w..(order[k] + 1) * w]);
            let b = &mut fresh[k * w + self.cols];
            if *b < 0.0 && *b > -EPS {
                *b = 0.0;
            }
        }
        self.data = fresh;
        Ok(())
    }

    /// Reduced-cost row for `cost` under the current basis; the last entry
    /// is minus the objective.
    fn reduced_costs(&self, cost: &[f64]) -> Vec<f64> {
        let w = self.cols + 1;
        let mut obj = cost.to_vec();
        obj.push(0.0);
        for r in 0..self.rows {
            let cb = cost[self.basis[r]];
            if cb != 0.0 {
                let row = &self.data[r * w..(r + 1) * w];
                for (o, &a) in obj.iter_mut().zip(row) {
                    *o -= cb * a;
                }
            }
        }
        obj
    }

    /// Minimizes `cost` (one entry per column) from the current basis and
    /// returns the final reduced-cost row. Columns with `allowed[c] == false`
    /// never enter.
    fn optimize(&mut self, cost: &[f64], allowed: &[bool]) -> Result<Vec<f64>> {
        let mut obj = self.reduced_costs(cost);
        // after the first degenerate pivot, Bland's rule for good: switching
        // back lets round-off drive a slow cycle of tiny "improving" steps
        let mut bland = false;
        for pivots in 1..=MAX_PIVOTS {
            let entering = if bland {
                (0..self.cols).find(|&c| allowed[c] && obj[c] < -EPS)
            } else {
                (0..self.cols)
                    .filter(|&c| allowed[c] && obj[c] < -EPS)
                    .min_by(|&a, &b| obj[a].total_cmp(&obj[b]).then(a.cmp(&b)))
            };
            let Some(pc) = entering else {
                return Ok(obj);
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.rows {
                let a = self.at(r, pc);
                if a > PIVOT_EPS {
                    // round-off can push a right-hand side slightly below zero
                    let ratio = self.rhs(r).max(0.0) / a;
                    let better = match leave {
                        None => true,
                        Some((lr, best)) => {
                            ratio < best - EPS || (ratio <= best + EPS && self.basis[r] < self.basis[lr])
                        }
                    };
                    if better {
                        leave = Some((r, ratio));
                    }
                }
            }
            let Some((pr, ratio)) = leave else {
                return Err(Error::Numeric("covering LP reported unbounded".into()));
            };
            bland = ratio <= EPS;
            self.pivot(pr, pc, &mut obj);
            if pivots % REFACTOR_EVERY == 0 {
                self.refactor()?;
                obj = self.reduced_costs(cost);
            }
        }
        Err(Error::Numeric(format!("simplex exceeded {MAX_PIVOTS} pivots")))
    }

    /// Dual simplex from a dual-feasible basis until every right-hand side
    /// is non-negative; updates `obj` in place.
    fn restore_feasibility(&mut self, cost: &[f64], allowed: &[bool], obj: &mut Vec<f64>) -> Result<()> {
        for pivots in 1..=MAX_PIVOTS {
            let leaving = (0..self.rows)
                .filter(|&r| self.rhs(r) < -EPS)
                .min_by(|&a, &b| self.rhs(a).total_cmp(&self.rhs(b)).then(a.cmp(&b)));
            let Some(pr) = leaving else {
                return Ok(());
            };
            let entering = (0..self.cols)
                .filter(|&c| allowed[c] && self.at(pr, c) < -PIVOT_EPS)
                .min_by(|&a, &b| {
                    let ra = obj[a].max(0.0) / -self.at(pr, a);
                    let rb = obj[b].max(0.0) / -self.at(pr, b);
                    ra.total_cmp(&rb).then(a.cmp(&b))
                });
            let Some(pc) = entering else {
                return Err(Error::Numeric("covering LP has no feasible point".into()));
            };
            self.pivot(pr, pc, obj);
            if pivots % REFACTOR_EVERY == 0 {
                self.refactor()?;
                *obj = self.reduced_costs(cost);
            }
        }
        Err(Error::Numeric(format!("dual simplex exceeded {MAX_PIVOTS} pivots")))
    }
}

/// Solves min `weights·x` s.t. every element of `0..universe` lies in some
/// chosen set with total weight ≥ 1, `x ≥ 0`. `members[i]` lists the elements of set `i`.
///
/// Upper bounds `x ≤ 1` are implied: with positive weights, lowering any
/// `x_i > 1` to 1 keeps every covering row satisfied and reduces the cost.
pub fn solve_covering_lp(universe: usize, members: &[Vec<usize>], weights: &[f64]) -> Result<LpSolution> {
    let n = members.len();
    let m = universe;
    // columns: n structural, m surplus, m artificial
    let cols = n + 2 * m;
    let w = cols + 1;
    let mut data = vec![0.0; m * w];
    for (j, elems) in members.iter().enumerate() {
        for &e in elems {
            data[e * w + j] = 1.0;
        }
    }
    // every covering row has right-hand side 1, which makes the LP highly
    // degenerate; solve with distinct slightly raised sides, then restore
    for r in 0..m {
        data[r * w + n + r] = -1.0;
        data[r * w + n + m + r] = 1.0;
        data[r * w + cols] = 1.0 + PERTURBATION * (1.0 + ((r as u64).wrapping_mul(0x9E37_79B9) % 1024) as f64 / 1024.0);
    }
    let mut t = Tableau {
        rows: m,
        cols,
        original: data.clone(),
        data,
        basis: (0..m).map(|r| n + m + r).collect(),
    };

    // phase 1: minimize the sum of artificials
    let mut cost = vec![0.0; cols];
    cost[n + m..].fill(1.0);
    let obj = t.optimize(&cost, &vec![true; cols])?;
    if -obj[cols] > 1e-7 {
        return Err(Error::Numeric("covering LP has no feasible point".into()));
    }
    // drive zero-valued artificials out of the basis where possible
    for r in 0..m {
        if t.basis[r] >= n + m {
            let c = (0..n + m)
                .filter(|&c| t.at(r, c).abs() > PIVOT_EPS)
                .max_by(|&a, &b| t.at(r, a).abs().total_cmp(&t.at(r, b).abs()).then(b.cmp(&a)));
            if let Some(c) = c {
                let mut dummy = vec![0.0; w];
                t.pivot(r, c, &mut dummy);
            }
        }
    }
    t.refactor()?;

    // phase 2
    let allowed: Vec<bool> = (0..cols).map(|c| c < n + m).collect();
    let mut cost = vec![0.0; cols];
    cost[..n].copy_from_slice(weights);
    t.optimize(&cost, &allowed)?;
    for r in 0..m {
        t.original[r * w + cols] = 1.0;
    }
    t.refactor()?;
    let mut obj = t.reduced_costs(&cost);
    t.restore_feasibility(&cost, &allowed, &mut obj)?;
    let obj = t.optimize(&cost, &allowed)?;

    let mut x = vec![0.0; n];
    for r in 0..m {
        if t.basis[r] < n {
            x[t.basis[r]] = t.rhs(r).max(0.0);
        }
    }
    // the reduced cost of surplus column r is the dual of covering row r
    let y = (0..m).map(|r| obj[n + r].max(0.0)).collect();
    let objective = x.iter().zip(weights).map(|(a, b)| a * b).sum();
    Ok(LpSolution { x, y, objective })
}
