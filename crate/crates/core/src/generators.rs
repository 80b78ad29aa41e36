//! Seeded random graph families used by the benchmark harness.

use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Attempts of the pairing model before giving up on a simple 3-regular graph.
const MAX_PAIRING_ATTEMPTS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Generator {
    ThreeRegular,
    ErdosRenyi {
        avg_degree: f64,
    },
    /// Sites of a square lattice with diagonal neighbors.
    KingsSubgraph {
        filling: f64,
    },
    Grid {
        filling: f64,
    },
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Generator::ThreeRegular => write!(f, "3reg"),
            Generator::ErdosRenyi { avg_degree } => write!(f, "er:{avg_degree}"),
            Generator::KingsSubgraph { filling } => write!(f, "kings:{filling}"),
            Generator::Grid { filling } => write!(f, "grid:{filling}"),
        }
    }
}

impl FromStr for Generator {
    type Err = Error;

    /// `3reg`, `er[:d]`, `kings[:f]` or `grid[:f]`; d defaults to 3 and f to 0.8.
    fn from_str(s: &str) -> Result<Self> {
        let (name, param) = match s.split_once(':') {
            Some((a, b)) => (a, Some(b)),
            None => (s, None),
        };
        let value = |default: f64| -> Result<f64> {
            match param {
                None => Ok(default),
                Some(p) => p
                    .parse()
                    .map_err(|_| Error::Input(format!("bad generator parameter '{p}'"))),
            }
        };
        let g = match name {
            "3reg" | "three-regular" if param.is_none() => Generator::ThreeRegular,
            "er" | "erdos-renyi" => Generator::ErdosRenyi {
                avg_degree: value(3.0)?,
            },
            "kings" | "ksg" => Generator::KingsSubgraph { filling: value(0.8)? },
            "grid" => Generator::Grid { filling: value(0.8)? },
            _ => return Err(Error::Input(format!("unknown generator '{s}'"))),
        };
        g.validate()?;
        Ok(g)
    }
}

impl Generator {
    fn validate(&self) -> Result<()> {
        match *self {
            Generator::ThreeRegular => Ok(()),
            Generator::ErdosRenyi { avg_degree } if avg_degree.is_finite() && avg_degree >= 0.0 => Ok(()),
            Generator::KingsSubgraph { filling } | Generator::Grid { filling } if filling > 0.0 && filling <= 1.0 => {
                Ok(())
            }
            _ => Err(Error::Input(format!("invalid generator parameters: {self}"))),
        }
    }

    /// Whether `n` is a valid size for this family.
    pub fn check_size(&self, n: usize) -> Result<()> {
        match self {
            Generator::ThreeRegular if n % 2 == 1 || n < 4 => {
                Err(Error::Input(format!("3-regular graphs need an even n ≥ 4, got {n}")))
            }
            _ => Ok(()),
        }
    }
}

/// Draws a graph with `n` vertices, deterministic in `seed`.
pub fn generate(spec: Generator, n: usize, seed: u64) -> Result<Graph> {
    spec.validate()?;
    spec.check_size(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match spec {
        Generator::ThreeRegular => three_regular(n, &mut rng),
        Generator::ErdosRenyi { avg_degree } => {
            let p = if n > 1 {
                (avg_degree / (n - 1) as f64).min(1.0)
            } else {
                0.0
            };
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random_bool(p) {
                        edges.push((u, v));
                    }
                }
            }
            Graph::new(n, edges)
        }
        Generator::KingsSubgraph { filling } => lattice(n, filling, true, &mut rng),
        Generator::Grid { filling } => lattice(n, filling, false, &mut rng),
    }
}

fn three_regular(n: usize, rng: &mut ChaCha8Rng) -> Result<Graph> {
    'attempt: for _ in 0..MAX_PAIRING_ATTEMPTS {
        let mut points: Vec<usize> = (0..3 * n).map(|p| p / 3).collect();
        // Fisher-Yates, then pair consecutive points
        for i in (1..points.len()).rev() {
            let j = rng.random_range(0..=i);
            points.swap(i, j);
        }
        let mut edges = Vec::with_capacity(3 * n / 2);
        for pair in points.chunks(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v || edges.contains(&(u, v)) {
                continue 'attempt;
            }
            edges.push((u, v));
        }
        return Graph::new(n, edges);
    }
    Err(Error::Internal(format!(
        "no simple 3-regular graph after {MAX_PAIRING_ATTEMPTS} pairings"
    )))
}

/// Places `n` vertices on distinct sites of an L×L lattice with
/// L = ⌈√(n/f)⌉, so that the occupied fraction is close to `filling`.
fn lattice(n: usize, filling: f64, diagonals: bool, rng: &mut ChaCha8Rng) -> Result<Graph> {
    let side = ((n as f64 / filling).sqrt().ceil() as usize).max(1);
    let side = if side * side < n { side + 1 } else { side };
    let mut sites = sample(rng, side * side, n).into_vec();
    sites.sort_unstable();
    let mut index = vec![usize::MAX; side * side];
    for (i, &s) in sites.iter().enumerate() {
        index[s] = i;
    }
    let mut edges = Vec::new();
    let offsets: &[(isize, isize)] = if diagonals {
        &[(0, 1), (1, -1), (1, 0), (1, 1)]
    } else {
        &[(0, 1), (1, 0)]
    };
    for (i, &s) in sites.iter().enumerate() {
        let (r, c) = ((s / side) as isize, (s % side) as isize);
        for &(dr, dc) in offsets {
            let (nr, nc) = (r + dr, c + dc);
            if nr < 0 || nc < 0 || nr >= side as isize || nc >= side as isize {
                continue;
            }
            let j = index[nr as usize * side + nc as usize];
            if j != usize::MAX {
                edges.push((i, j));
            }
        }
    }
    Graph::new(n, edges)
}
