use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use outage_mpc::milp::{solve_lp, solve_milp, MilpModel, Relation, SolverOptions};
use outage_mpc::mpc::{build_mpc_milp, plan, ForecastWindow};
use outage_mpc::plant::PlantState;
use outage_mpc::scenario::SystemConfig;

fn knapsack(n: usize) -> MilpModel {
    let mut m = MilpModel::new();
    let mut row = Vec::new();
    for i in 0..n {
        let x = m.add_binary(format!("x{i}"));
        m.set_objective(x, -((i * 7919 % 23) as f64 + 1.0));
        row.push((x, (i * 104_729 % 17) as f64 + 1.0));
    }
    let cap = row.iter().map(|r| r.1).sum::<f64>() / 2.0;
    m.add_constraint("cap", row, Relation::Le, cap);
    m
}

fn forecast(n: usize) -> ForecastWindow {
    ForecastWindow {
        g_avail: (0..n)
            .map(|i| {
                let h = (i as f64 / 6.0) % 24.0;
                if (6.0..18.0).contains(&h) {
                    140.0 * (std::f64::consts::PI * (h - 6.0) / 12.0).sin()
                } else {
                    0.0
                }
            })
            .collect(),
        t_house: vec![27.0; n],
        e_secondary: (0..n).map(|i| if (i / 6) % 24 >= 18 { 51.3 } else { 0.0 }).collect(),
    }
}

fn bench_knapsack(c: &mut Criterion) {
    let mut g = c.benchmark_group("knapsack");
    for n in [10, 20, 30] {
        let m = knapsack(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| {
            b.iter(|| solve_milp(black_box(m), &SolverOptions::default()))
        });
    }
    g.finish();
}

fn bench_mpc(c: &mut Criterion) {
    let mut g = c.benchmark_group("mpc");
    g.sample_size(10);
    let state = PlantState {
        e_bat: 4000.0,
        t_fr: 3.0,
        step_index: 0,
        u_fr_prev: false,
    };
    for n in [12, 36] {
        let config = SystemConfig {
            horizon_steps: n,
            ..SystemConfig::default()
        };
        let f = forecast(n);
        let relaxed = build_mpc_milp(&state, &f, &config).unwrap().relaxed();
        g.bench_with_input(BenchmarkId::new("relaxation", n), &relaxed, |b, m| {
            b.iter(|| solve_lp(black_box(m)))
        });
        g.bench_with_input(BenchmarkId::new("plan", n), &f, |b, f| {
            b.iter(|| plan(&state, black_box(f), &config, &SolverOptions::default()).unwrap())
        });
    }
    g.finish();
}

criterion_group!(solver, bench_knapsack, bench_mpc);
criterion_main!(solver);
