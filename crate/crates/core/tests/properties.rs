mod common;

use proptest::prelude::*;

use slice_embed::generator::{generate, Degree, GeneratorConfig, Span};
use slice_embed::group::NegativeRule;
use slice_embed::model::{residual_after, validate_plan};
use slice_embed::{solve, Algorithm, Instance, SolveOptions, Topology};

fn small_config(seed: u64, shortage: bool, k: Option<usize>) -> GeneratorConfig {
    let base = if shortage {
        GeneratorConfig::shortage(seed)
    } else {
        GeneratorConfig::normal(seed)
    };
    GeneratorConfig {
        n_substrate: Span(8, 20),
        n_slices: Span(1, 4),
        vnfs_per_slice: Span(4, 12),
        substrate_degree: k.map_or(Degree::Random, Degree::Fixed),
        ..base
    }
}

fn instance() -> impl Strategy<Value = Instance> {
    (any::<u64>(), any::<bool>(), prop::option::of(2usize..6))
        .prop_map(|(seed, shortage, k)| generate(&small_config(seed, shortage, k)).unwrap())
}

fn rule() -> impl Strategy<Value = NegativeRule> {
    prop_oneof![
        Just(NegativeRule::ClosestToZero),
        Just(NegativeRule::MostNegative)
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn plans_are_feasible(inst in instance(), negative_rule in rule()) {
        let topo = Topology::new(&inst).unwrap();
        let opts = SolveOptions { negative_rule, ..SolveOptions::default() };
        for alg in Algorithm::HEURISTICS {
            let sol = solve(alg, &topo, &opts).unwrap();
            let report = validate_plan(&inst.substrate, &inst.slices, &sol.plan);
            prop_assert!(report.is_ok(), "{alg}: {report}");
            prop_assert!(common::feasible(&inst, &common::hosts_of(&inst, &sol.plan)));
        }
    }

    #[test]
    fn residual_matches_recomputation(inst in instance()) {
        let topo = Topology::new(&inst).unwrap();
        for alg in Algorithm::HEURISTICS {
            let sol = solve(alg, &topo, &SolveOptions::default()).unwrap();
            let fresh = residual_after(&inst.substrate, &inst.slices, &sol.plan).unwrap();
            prop_assert_eq!(&fresh, &sol.residual);

            let hosted: i64 = sol.plan.iter()
                .map(|(v, _)| inst.slices.demand_of(v).unwrap())
                .sum();
            prop_assert_eq!(
                sol.residual.total_node_residual(),
                inst.substrate.total_capacity() - hosted
            );
            for (node, &r) in inst.substrate.nodes.iter().zip(sol.residual.nodes()) {
                prop_assert!(0 <= r && r <= node.capacity);
            }
        }
    }

    #[test]
    fn solvers_are_deterministic(inst in instance()) {
        let topo = Topology::new(&inst).unwrap();
        let again = Topology::new(&Instance::from_json(&inst.to_json()).unwrap()).unwrap();
        for alg in Algorithm::HEURISTICS {
            let a = solve(alg, &topo, &SolveOptions::default()).unwrap();
            let b = solve(alg, &again, &SolveOptions::default()).unwrap();
            prop_assert_eq!(a.plan.to_json(), b.plan.to_json());
        }
    }

    #[test]
    fn generator_is_seed_deterministic(seed in any::<u64>(), shortage in any::<bool>()) {
        let cfg = small_config(seed, shortage, None);
        prop_assert_eq!(generate(&cfg).unwrap().to_json(), generate(&cfg).unwrap().to_json());
    }

    #[test]
    fn more_capacity_never_hurts_the_oracle(seed in 0u64..10_000, extra in 1i64..3) {
        let inst = common::random_micro(seed, 4, 6);
        let mut bigger = inst.clone();
        for n in &mut bigger.substrate.nodes {
            n.capacity += extra;
        }
        let opts = SolveOptions::default();
        let a = solve(Algorithm::Exact, &Topology::new(&inst).unwrap(), &opts).unwrap();
        let b = solve(Algorithm::Exact, &Topology::new(&bigger).unwrap(), &opts).unwrap();
        prop_assert!(b.embedded() >= a.embedded());
    }
}
