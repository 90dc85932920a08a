mod common;

use common::{brute_force_pure_binary, enumerate_binaries, random_milp, vertex_enumeration};
use outage_mpc::milp::{
    check_solution, solve_lp, solve_milp, LpStatus, MilpModel, MilpStatus, Relation, SolverOptions, VarId,
};
use proptest::prelude::*;

fn exact() -> SolverOptions {
    SolverOptions {
        rel_gap_limit: 0.0,
        ..SolverOptions::default()
    }
}

fn knapsack() -> MilpModel {
    let values = [10.0, 13.0, 7.0, 8.0, 4.0, 11.0];
    let weights = [5.0, 7.0, 3.0, 4.0, 2.0, 6.0];
    let mut m = MilpModel::new();
    let items: Vec<VarId> = (0..6).map(|i| m.add_binary(format!("item{i}"))).collect();
    for (i, &v) in items.iter().enumerate() {
        m.set_objective(v, -values[i]);
    }
    m.add_constraint(
        "cap",
        items.iter().zip(weights).map(|(&v, w)| (v, w)),
        Relation::Le,
        14.0,
    );
    m
}

#[test]
fn pick_one_of_two() {
    let mut m = MilpModel::new();
    let a = m.add_binary("a");
    let b = m.add_binary("b");
    m.set_objective(a, -3.0);
    m.set_objective(b, -2.0);
    m.add_constraint("one", [(a, 1.0), (b, 1.0)], Relation::Le, 1.0);
    let s = solve_milp(&m, &SolverOptions::default());
    assert_eq!(s.status, MilpStatus::Optimal);
    assert_eq!(s.values, vec![1.0, 0.0]);
    assert_eq!(s.objective, -3.0);
}

#[test]
fn knapsack_matches_exhaustive_enumeration() {
    let m = knapsack();
    let (oracle, _) = brute_force_pure_binary(&m).unwrap();
    // 64 cases: best is items {0,2,3,4} or similar at value 29
    assert_eq!(oracle, -29.0);
    let s = solve_milp(&m, &exact());
    assert_eq!(s.status, MilpStatus::Optimal);
    assert!((s.objective - oracle).abs() < 1e-6);
    assert!(check_solution(&m, &s.values, 1e-7).is_empty());
}

#[test]
fn continuous_model_needs_no_branching() {
    let mut m = MilpModel::new();
    let x = m.add_continuous("x", 0.0, 4.0);
    let y = m.add_continuous("y", 0.0, 4.0);
    m.set_objective(x, -3.0);
    m.set_objective(y, -2.0);
    m.add_constraint("a", [(x, 1.0), (y, 1.0)], Relation::Le, 5.0);
    m.add_constraint("b", [(x, 2.0), (y, 1.0)], Relation::Le, 8.0);
    let lp = solve_lp(&m);
    let s = solve_milp(&m, &SolverOptions::default());
    assert_eq!(s.status, MilpStatus::Optimal);
    assert_eq!(s.nodes_explored, 1);
    assert!((s.objective - lp.objective).abs() < 1e-12);
    assert_eq!(s.values, lp.values);
}

#[test]
fn integer_infeasible_model() {
    // a + b = 1.5 has LP solutions but no binary one
    let mut m = MilpModel::new();
    let a = m.add_binary("a");
    let b = m.add_binary("b");
    m.add_constraint("half", [(a, 1.0), (b, 1.0)], Relation::Eq, 1.5);
    let s = solve_milp(&m, &SolverOptions::default());
    assert_eq!(s.status, MilpStatus::Infeasible);
    assert!(!s.has_incumbent());
}

#[test]
fn node_limit_without_incumbent_is_flagged() {
    let m = random_milp(7, 12, 20);
    let s = solve_milp(
        &m,
        &SolverOptions {
            node_limit: Some(1),
            rel_gap_limit: 0.0,
            ..SolverOptions::default()
        },
    );
    if !s.has_incumbent() {
        assert!(matches!(s.status, MilpStatus::NodeLimit | MilpStatus::Infeasible));
    }
}

#[test]
fn random_models_match_enumeration() {
    for seed in 0..60 {
        let m = random_milp(seed, 8, 12);
        let oracle = enumerate_binaries(&m);
        let s = solve_milp(&m, &exact());
        match oracle {
            None => assert_eq!(s.status, MilpStatus::Infeasible, "seed {seed}"),
            Some((obj, _)) => {
                assert_eq!(s.status, MilpStatus::Optimal, "seed {seed}");
                assert!(
                    (s.objective - obj).abs() <= 1e-6 * obj.abs().max(1.0),
                    "seed {seed}: {} vs {obj}",
                    s.objective
                );
                assert!(check_solution(&m, &s.values, 1e-6).is_empty(), "seed {seed}");
                assert!(s.best_bound <= s.objective + 1e-9);
            }
        }
    }
}

#[test]
fn pure_binary_models_match_brute_force() {
    for seed in 100..160 {
        let mut m = random_milp(seed, 10, 8);
        // drop continuous variables by fixing them at zero-cost bounds
        let cont: Vec<VarId> = (0..m.num_vars())
            .map(VarId)
            .filter(|&v| m.var(v).kind != outage_mpc::milp::Integrality::Binary)
            .collect();
        if !cont.is_empty() {
            continue;
        }
        let oracle = brute_force_pure_binary(&m);
        let s = solve_milp(&m, &exact());
        match oracle {
            None => assert_eq!(s.status, MilpStatus::Infeasible),
            Some((obj, _)) => assert!((s.objective - obj).abs() < 1e-6, "seed {seed}"),
        }
        let _ = &mut m;
    }
}

#[test]
fn lp_matches_vertex_enumeration() {
    for seed in 0..80 {
        let m = random_milp(1000 + seed, 3, 5).relaxed();
        let lp = solve_lp(&m);
        match vertex_enumeration(&m) {
            None => assert_eq!(lp.status, LpStatus::Infeasible, "seed {seed}"),
            Some(obj) => {
                assert_eq!(lp.status, LpStatus::Optimal, "seed {seed}");
                assert!(
                    (lp.objective - obj).abs() < 1e-6,
                    "seed {seed}: {} vs {obj}",
                    lp.objective
                );
            }
        }
    }
}

#[test]
fn repeated_solves_are_identical() {
    for seed in 200..220 {
        let m = random_milp(seed, 12, 20);
        let a = solve_milp(&m, &SolverOptions::default());
        let b = solve_milp(&m, &SolverOptions::default());
        assert_eq!(a.status, b.status);
        assert_eq!(a.nodes_explored, b.nodes_explored);
        assert_eq!(a.objective.to_bits(), b.objective.to_bits());
        assert_eq!(a.values, b.values);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn objective_scaling_keeps_the_argmin(seed in 0u64..10_000, scale_pow in 1i32..4) {
        let m = random_milp(seed, 10, 15);
        let c = 2f64.powi(scale_pow);
        let mut scaled = m.clone();
        for j in 0..m.num_vars() {
            scaled.set_objective(VarId(j), m.objective()[j] * c);
        }
        let a = solve_milp(&m, &exact());
        let b = solve_milp(&scaled, &exact());
        prop_assert_eq!(a.status, b.status);
        if a.has_incumbent() {
            prop_assert_eq!(&a.values, &b.values);
            prop_assert!((b.objective - c * a.objective).abs() <= 1e-9 * b.objective.abs().max(1.0));
        }
    }

    #[test]
    fn bound_never_exceeds_incumbent(seed in 0u64..10_000) {
        let m = random_milp(seed, 12, 20);
        let s = solve_milp(&m, &SolverOptions::default());
        if s.has_incumbent() {
            prop_assert!(s.best_bound <= s.objective + 1e-9 * s.objective.abs().max(1.0));
            prop_assert!(s.rel_gap <= 0.01 + 1e-9);
            prop_assert!(check_solution(&m, &s.values, 1e-6).is_empty());
        }
    }
}
