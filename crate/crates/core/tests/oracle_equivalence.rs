mod common;

use common::{brute_force_max, feasible, hosts_of, random_micro};
use slice_embed::fixtures;
use slice_embed::model::validate_plan;
use slice_embed::oracle::{solve_exact, OracleBudget};
use slice_embed::{solve, Algorithm, SolveOptions, Topology};

#[test]
fn brute_force_on_fixtures() {
    assert_eq!(brute_force_max(&fixtures::fig2()), 5);
    assert_eq!(brute_force_max(&fixtures::rrs_micro()), 2);
    assert_eq!(brute_force_max(&fixtures::shortage_micro()), 2);
}

#[test]
fn oracle_matches_brute_force() {
    for seed in 0..300 {
        let inst = random_micro(seed, 4, 6);
        let topo = Topology::new(&inst).unwrap();
        let exact = solve_exact(&topo, &OracleBudget::default()).unwrap();
        assert!(exact.optimal);
        assert_eq!(
            exact.solution.embedded(),
            brute_force_max(&inst),
            "seed {seed}"
        );
        assert!(feasible(&inst, &hosts_of(&inst, &exact.solution.plan)));
    }
}

#[test]
fn heuristics_never_beat_the_oracle() {
    let opts = SolveOptions::default();
    for seed in 1000..1300 {
        let inst = random_micro(seed, 4, 6);
        let topo = Topology::new(&inst).unwrap();
        let best = solve(Algorithm::Exact, &topo, &opts).unwrap().embedded();
        for alg in Algorithm::HEURISTICS {
            let sol = solve(alg, &topo, &opts).unwrap();
            assert!(sol.embedded() <= best, "{alg} seed {seed}");
            assert!(
                feasible(&inst, &hosts_of(&inst, &sol.plan)),
                "{alg} seed {seed}"
            );
        }
    }
}

#[test]
fn validator_agrees_with_independent_check() {
    use rand::{Rng, SeedableRng};
    use slice_embed::model::{NodeId, VnfId};
    use slice_embed::MappingPlan;

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let mut infeasible = 0;
    for seed in 0..400 {
        let inst = random_micro(seed, 4, 6);
        let n = inst.substrate.nodes.len();
        let mut plan = MappingPlan::new();
        for (s, slice) in inst.slices.slices.iter().enumerate() {
            for v in &slice.vnfs {
                if rng.gen_bool(0.7) {
                    plan.assign(VnfId::new(s, v.id), NodeId(rng.gen_range(0..n)));
                }
            }
        }
        let ours = feasible(&inst, &hosts_of(&inst, &plan));
        let report = validate_plan(&inst.substrate, &inst.slices, &plan);
        assert_eq!(report.is_ok(), ours, "seed {seed}: {report}");
        infeasible += usize::from(!ours);
    }
    assert!(infeasible > 50, "random plans should often be infeasible");
}
