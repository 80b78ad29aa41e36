#![allow(dead_code)]

use optbranch::{Clause, Graph};

/// Maximum independent set size by exhaustive take/skip search over all
/// independent subsets. Kept deliberately naive.
pub fn brute_alpha(g: &Graph) -> usize {
    assert!(g.n() <= 64);
    let adj: Vec<u64> = (0..g.n())
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &u| m | 1 << u))
        .collect();
    fn go(adj: &[u64], allowed: u64) -> usize {
        if allowed == 0 {
            return 0;
        }
        let v = allowed.trailing_zeros() as usize;
        let skip = go(adj, allowed & !(1 << v));
        let take = 1 + go(adj, allowed & !(1 << v) & !adj[v]);
        skip.max(take)
    }
    let all = if g.n() == 64 { u64::MAX } else { (1u64 << g.n()) - 1 };
    go(&adj, all)
}

/// Cheapest cover by enumerating every subset of sets.
pub fn enumerate_cover(universe: usize, sets: &[Vec<usize>], weights: &[f64]) -> Option<f64> {
    assert!(sets.len() <= 20);
    let full: u32 = if universe == 32 {
        u32::MAX
    } else {
        (1u32 << universe) - 1
    };
    let masks: Vec<u32> = sets.iter().map(|s| s.iter().fold(0, |m, &e| m | 1 << e)).collect();
    let mut best: Option<f64> = None;
    for subset in 0u32..1 << sets.len() {
        let mut covered = 0;
        let mut cost = 0.0;
        for i in 0..sets.len() {
            if subset >> i & 1 == 1 {
                covered |= masks[i];
                cost += weights[i];
            }
        }
        if covered == full && best.is_none_or(|b| cost < b) {
            best = Some(cost);
        }
    }
    best
}

fn graph(n: usize, edges: &[(usize, usize)]) -> Graph {
    Graph::new(n, edges.iter().copied()).unwrap()
}

/// Letters `a, b, ...` as 0-based ids.
fn letter_edges(pairs: &str) -> Vec<(usize, usize)> {
    pairs
        .split_whitespace()
        .map(|p| {
            let b = p.as_bytes();
            ((b[0] - b'a') as usize, (b[1] - b'a') as usize)
        })
        .collect()
}

/// Hangs a 7-vertex binary tree (root, two children, four grandchildren) off
/// each vertex in `roots`.
fn with_trees(n: usize, mut edges: Vec<(usize, usize)>, roots: &[usize]) -> Graph {
    let mut next = n;
    for &r in roots {
        let t = next;
        edges.push((r, t));
        edges.extend([
            (t, t + 1),
            (t, t + 2),
            (t + 1, t + 3),
            (t + 1, t + 4),
            (t + 2, t + 5),
            (t + 2, t + 6),
        ]);
        next += 7;
    }
    graph(next, &edges)
}

/// Five vertices a..e; the boundary is {a, b, c}.
pub fn five_vertex() -> Graph {
    graph(5, &letter_edges("ad ae be cd de"))
}

/// Vertices w, v, j, k, l as 0..5; boundary {j, k, l}.
pub fn domination(with_kl: bool) -> Graph {
    let mut edges = vec![(2, 0), (2, 1), (0, 1), (0, 3), (0, 4), (1, 4)];
    if with_kl {
        edges.push((3, 4));
    }
    graph(5, &edges)
}

/// Pentagon and hexagon sharing two edges (a..h = 0..8), with a tree on
/// every vertex of degree two.
pub fn pentagon_hexagon() -> Graph {
    let core = letter_edges("ab ae bc ed cd bf eh gf gh");
    with_trees(8, core, &[0, 2, 3, 5, 6, 7])
}

/// Three symmetric branches around `a` (a..v = 0..22), trees on the twelve
/// outermost vertices.
pub fn bottleneck() -> Graph {
    let mut core = Vec::new();
    for [c, g, h, o, r, p, q] in ["cghorpq", "befknlm", "dijsvtu"].map(|s| {
        let b: Vec<usize> = s.bytes().map(|x| (x - b'a') as usize).collect();
        [b[0], b[1], b[2], b[3], b[4], b[5], b[6]]
    }) {
        core.extend([(0, c), (c, g), (c, h), (g, o), (g, p), (h, r), (h, q), (o, r), (p, q)]);
    }
    let leaves: Vec<usize> = "orpqknlmsvtu".bytes().map(|x| (x - b'a') as usize).collect();
    with_trees(22, core, &leaves)
}

pub fn tutte() -> Graph {
    const EDGES: [(usize, usize); 69] = [
        (0, 1),
        (0, 2),
        (0, 3),
        (1, 4),
        (1, 26),
        (2, 10),
        (2, 11),
        (3, 18),
        (3, 19),
        (4, 5),
        (4, 33),
        (5, 6),
        (5, 29),
        (6, 7),
        (6, 27),
        (7, 8),
        (7, 14),
        (8, 9),
        (8, 38),
        (9, 10),
        (9, 37),
        (10, 39),
        (11, 12),
        (11, 39),
        (12, 13),
        (12, 35),
        (13, 14),
        (13, 15),
        (14, 34),
        (15, 16),
        (15, 22),
        (16, 17),
        (16, 44),
        (17, 18),
        (17, 43),
        (18, 45),
        (19, 20),
        (19, 45),
        (20, 21),
        (20, 41),
        (21, 22),
        (21, 23),
        (22, 40),
        (23, 24),
        (23, 27),
        (24, 25),
        (24, 32),
        (25, 26),
        (25, 31),
        (26, 33),
        (27, 28),
        (28, 29),
        (28, 32),
        (29, 30),
        (30, 31),
        (30, 33),
        (31, 32),
        (34, 35),
        (34, 38),
        (35, 36),
        (36, 37),
        (36, 39),
        (37, 38),
        (40, 41),
        (40, 44),
        (41, 42),
        (42, 43),
        (42, 45),
        (43, 44),
    ];
    graph(46, &EDGES)
}

/// Parses `¬a ∧ b ∧ ...` with variable `i` named by `names[i]`.
pub fn clause(text: &str, names: &str) -> Clause {
    let (mut mask, mut values) = (0u64, 0u64);
    for lit in text.split('∧').map(str::trim) {
        let (neg, name) = match lit.strip_prefix('¬') {
            Some(rest) => (true, rest.trim()),
            None => (false, lit),
        };
        let i = names.find(name).unwrap_or_else(|| panic!("unknown variable {name}"));
        mask |= 1 << i;
        if !neg {
            values |= 1 << i;
        }
    }
    Clause::new(mask, values)
}
