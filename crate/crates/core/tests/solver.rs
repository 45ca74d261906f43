use forbidden_diff::clique::brute_force_max_clique;
use forbidden_diff::graph::{circulant_graph, zero_neighborhood_graph};
use forbidden_diff::validate::forbidden_pair;
use forbidden_diff::{CliqueSearch, DiffGraph, ForbiddenSet, SearchConfig};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

const FAMILIES: &[&str] = &[
    "squares",
    "squares+1",
    "squares+2",
    "squares-3",
    "primes",
    "primes-1",
    "primes+2",
    "powers:3",
];

fn set(spec: &str) -> ForbiddenSet {
    spec.parse().unwrap()
}

fn omega(graph: &DiffGraph, config: SearchConfig) -> usize {
    CliqueSearch::new(graph).config(config).run().unwrap().size
}

fn sequential() -> SearchConfig {
    SearchConfig::default().with_threads(1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adjacency_is_symmetric(idx in 0..FAMILIES.len(), n in 1u64..90) {
        let g = zero_neighborhood_graph(n, &set(FAMILIES[idx])).unwrap();
        for a in 0..g.len() {
            prop_assert!(!g.adjacent(a, a));
            for b in 0..g.len() {
                prop_assert_eq!(g.adjacent(a, b), g.adjacent(b, a));
            }
        }
    }

    #[test]
    fn vertex_count(idx in 0..FAMILIES.len(), n in 1u64..200) {
        let x = set(FAMILIES[idx]);
        let g = zero_neighborhood_graph(n, &x).unwrap();
        let excluded = (1..n as i64)
            .filter(|&i| x.contains(i).unwrap() || x.contains(-i).unwrap())
            .count() as u64;
        prop_assert_eq!(g.len() as u64, n - 1 - excluded);
    }

    #[test]
    fn cliques_translate_to_x_sets(idx in 0..FAMILIES.len(), n in 1u64..100) {
        let x = set(FAMILIES[idx]);
        let g = zero_neighborhood_graph(n, &x).unwrap();
        let outcome = CliqueSearch::new(&g).config(sequential()).run().unwrap();
        prop_assert!(g.is_clique(&outcome.witness));
        let mut a = vec![1];
        a.extend(outcome.witness.iter().map(|c| c + 1));
        prop_assert!(a.iter().all(|&v| (1..=n as i64).contains(&v)));
        prop_assert_eq!(forbidden_pair(&x, &a).unwrap(), None);
    }

    #[test]
    fn solver_matches_oracle_on_random_graphs(n in 1usize..26, density in 0.05f64..0.95, seed in any::<u64>()) {
        use rand::Rng;
        let mut rng = StdRng::seed_from_u64(seed);
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if rng.gen_bool(density) {
                    edges.push((a, b));
                }
            }
        }
        let g = DiffGraph::from_edges((1..=n as i64).collect(), &edges).unwrap();
        let exact = brute_force_max_clique(&g).unwrap().size;
        prop_assert_eq!(omega(&g, sequential()), exact);
        let plain = SearchConfig { dynamic_ordering: false, ..sequential() };
        prop_assert_eq!(omega(&g, plain), exact);
        prop_assert_eq!(omega(&g, sequential().with_threads(3)), exact);
    }
}

#[test]
fn relabeling_does_not_change_size() {
    let mut rng = StdRng::seed_from_u64(7);
    for spec in FAMILIES {
        for n in [20u64, 41, 60] {
            let g = zero_neighborhood_graph(n, &set(spec)).unwrap();
            let base = omega(&g, sequential());
            for _ in 0..3 {
                let mut perm: Vec<usize> = (0..g.len()).collect();
                perm.shuffle(&mut rng);
                let edges: Vec<(usize, usize)> = (0..g.len())
                    .flat_map(|a| g.neighbors(a).filter(move |&b| a < b).map(move |b| (a, b)))
                    .map(|(a, b)| (perm[a], perm[b]))
                    .collect();
                let shuffled = DiffGraph::from_edges((0..g.len() as i64).collect(), &edges).unwrap();
                assert_eq!(shuffled.edge_count(), g.edge_count());
                assert_eq!(omega(&shuffled, sequential()), base, "{spec}, N = {n}");
            }
        }
    }
}

#[test]
fn parallel_and_sequential_agree() {
    for spec in FAMILIES {
        for n in [30u64, 75, 110] {
            let g = zero_neighborhood_graph(n, &set(spec)).unwrap();
            let one = omega(&g, sequential());
            assert_eq!(omega(&g, sequential().with_threads(4)), one, "{spec}, N = {n}");
            assert_eq!(omega(&g, sequential().with_threads(0)), one, "{spec}, N = {n}");
        }
    }
}

#[test]
fn sequential_witness_is_reproducible() {
    let g = zero_neighborhood_graph(90, &ForbiddenSet::squares()).unwrap();
    let a = CliqueSearch::new(&g).config(sequential()).run().unwrap();
    let b = CliqueSearch::new(&g).config(sequential()).run().unwrap();
    assert_eq!(a.witness, b.witness);
}

#[test]
fn symmetric_closure_keeps_density() {
    for spec in FAMILIES.iter().chain(&["list:1,5", "squares+3", "polyz:1,0,3"]) {
        let x = set(spec);
        for m in 1..=40 {
            let residues = x.residues_mod(m).unwrap();
            let g = circulant_graph(&residues);
            let h = circulant_graph(&residues.symmetric_closure());
            assert_eq!(omega(&g, sequential()), omega(&h, sequential()), "{spec} mod {m}");
        }
    }
}

#[test]
fn dimacs_export() {
    let g = zero_neighborhood_graph(12, &ForbiddenSet::squares()).unwrap();
    let text = g.to_dimacs();
    let header = text.lines().find(|l| l.starts_with("p ")).unwrap();
    assert_eq!(header, format!("p edge {} {}", g.len(), g.edge_count()));
    assert_eq!(text.lines().filter(|l| l.starts_with("e ")).count(), g.edge_count());
}
