mod common;

use optbranch::bench::{run_bench, BenchSpec};
use optbranch::branching_table::{branching_table, DEFAULT_ENUMERATION_LIMIT};
use optbranch::clause::{build_candidates, candidates_with};
use optbranch::generators::Generator;
use optbranch::optimizer::minimize_gamma_bisection;
use optbranch::{
    find_gamma, minimize_gamma, BranchingTable, CandidateClause, Measure, Region, SolveConfig, SolverKind, VertexSet,
};
use proptest::prelude::*;

/// Smallest γ over every subset of candidates covering all rows.
fn enumerate_gamma(cands: &[CandidateClause], rows: usize) -> f64 {
    assert!(cands.len() <= 16);
    let mut best = f64::INFINITY;
    for subset in 1u32..1 << cands.len() {
        let chosen: Vec<&CandidateClause> = (0..cands.len())
            .filter(|i| subset >> i & 1 == 1)
            .map(|i| &cands[i])
            .collect();
        if (0..rows).all(|r| chosen.iter().any(|c| c.coverage.contains(r))) {
            let v: Vec<f64> = chosen.iter().map(|c| f64::from(c.delta_rho)).collect();
            best = best.min(find_gamma(&v));
        }
    }
    best
}

fn arb_table() -> impl Strategy<Value = BranchingTable> {
    (2usize..=5).prop_flat_map(|width| {
        let config = 0u64..1 << width;
        proptest::collection::vec(proptest::collection::btree_set(config, 1..=2), 2..=4).prop_map(move |rows| {
            BranchingTable::new(width, rows.into_iter().map(|r| r.into_iter().collect()).collect()).unwrap()
        })
    })
}

fn literal_candidates(table: &BranchingTable) -> Vec<CandidateClause> {
    candidates_with(table, |c| c.literal_count())
        .into_iter()
        .filter(|c| c.delta_rho > 0)
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn optimal_gamma_matches_enumeration(table in arb_table()) {
        let cands = literal_candidates(&table);
        prop_assume!(!cands.is_empty() && cands.len() <= 16);
        let covered = (0..table.len()).all(|r| cands.iter().any(|c| c.coverage.contains(r)));
        prop_assume!(covered);
        let res = minimize_gamma(&cands, table.len(), SolverKind::Exact, 0).unwrap();
        let oracle = enumerate_gamma(&cands, table.len());
        prop_assert!((res.gamma - oracle).abs() < 1e-9, "{} vs {}", res.gamma, oracle);
        let v: Vec<f64> = res.branching_vector.iter().map(|&d| f64::from(d)).collect();
        prop_assert!((find_gamma(&v) - res.gamma).abs() < 1e-12);
        for r in 0..table.len() {
            prop_assert!(res.chosen_indices.iter().any(|&i| cands[i].coverage.contains(r)));
        }
        let bisection = minimize_gamma_bisection(&cands, table.len(), 1e-9).unwrap();
        prop_assert!((bisection - res.gamma).abs() < 1e-7);
    }

    #[test]
    fn relaxed_rules_are_valid_and_no_better(table in arb_table(), seed in any::<u64>()) {
        let cands = literal_candidates(&table);
        prop_assume!(!cands.is_empty());
        let covered = (0..table.len()).all(|r| cands.iter().any(|c| c.coverage.contains(r)));
        prop_assume!(covered);
        let exact = minimize_gamma(&cands, table.len(), SolverKind::Exact, seed).unwrap();
        let relaxed = minimize_gamma(&cands, table.len(), SolverKind::LpRelaxed, seed).unwrap();
        for r in 0..table.len() {
            prop_assert!(relaxed.chosen_indices.iter().any(|&i| cands[i].coverage.contains(r)));
        }
        prop_assert!(relaxed.gamma >= exact.gamma - 1e-9);
    }
}

#[test]
fn gamma_of_known_vectors() {
    assert_eq!(find_gamma(&[3.0]), 1.0);
    // golden ratio
    assert!((find_gamma(&[1.0, 2.0]) - 1.618_033_988_749_895).abs() < 1e-12);
    assert!((find_gamma(&[1.0, 1.0]) - 2.0).abs() < 1e-12);
    assert!((find_gamma(&[10.0, 10.0]) - 2f64.powf(0.1)).abs() < 1e-12);
}

#[test]
fn domination_with_the_kl_edge() {
    // with k and l adjacent, j, k, l cannot all be taken and one row disappears
    let g = common::domination(true);
    let region = Region::with_boundary(&g, &VertexSet::full(5), &VertexSet::from_vertices(5, [2, 3, 4])).unwrap();
    let table = branching_table(&region, false, DEFAULT_ENUMERATION_LIMIT).unwrap();
    assert_eq!(table.len(), 3);
    let cands = build_candidates(&table, &region, Measure::VertexCount).unwrap();
    let res = minimize_gamma(&cands, table.len(), SolverKind::Exact, 0).unwrap();
    assert_eq!(res.rule.clauses, vec![common::clause("¬w", "wvjkl")]);
    assert_eq!(res.gamma, 1.0);
}

#[test]
fn bench_ignores_the_thread_count() {
    let spec = |jobs| BenchSpec {
        generator: Generator::ErdosRenyi { avg_degree: 3.0 },
        sizes: vec![20, 30, 40],
        trials: 8,
        seed: 11,
        config: SolveConfig::default(),
        jobs,
    };
    let strip = |r: optbranch::bench::BenchReport| {
        r.records
            .into_iter()
            .map(|x| (x.n, x.trial, x.seed, x.mis, x.branches))
            .collect::<Vec<_>>()
    };
    let one = run_bench(&spec(1)).unwrap();
    let gamma = one.fitted_gamma;
    let four = run_bench(&spec(4)).unwrap();
    assert_eq!(four.fitted_gamma, gamma);
    assert_eq!(strip(one), strip(four));
}
