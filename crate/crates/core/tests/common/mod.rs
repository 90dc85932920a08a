//! Test-only oracles shared by the integration suites.
#![allow(dead_code)]

use outage_mpc::milp::{solve_lp, Integrality, LpStatus, MilpModel, Relation, VarId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random MILP with `1..=max_bin` binaries, up to three continuous variables
/// and `1..=max_rows` rows. Right-hand sides are set around a random
/// reference point so most instances are feasible, some are not.
pub fn random_milp(seed: u64, max_bin: usize, max_rows: usize) -> MilpModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nb = rng.random_range(1..=max_bin);
    let nc = rng.random_range(0..=3);
    let mut m = MilpModel::new();
    let mut reference = Vec::new();
    for i in 0..nb {
        m.add_binary(format!("b{i}"));
        reference.push(f64::from(rng.random_range(0..=1u8)));
    }
    for i in 0..nc {
        let lb = if rng.random_bool(0.3) {
            -rng.random_range(1.0..5.0)
        } else {
            0.0
        };
        let ub = lb + rng.random_range(1.0..10.0);
        m.add_continuous(format!("c{i}"), lb, ub);
        reference.push(rng.random_range(lb..ub));
    }
    let n = nb + nc;
    for j in 0..n {
        let c: f64 = (rng.random_range(-20.0..20.0_f64) * 2.0).round() / 2.0;
        m.set_objective(VarId(j), c);
    }
    let rows = rng.random_range(1..=max_rows);
    for r in 0..rows {
        let mut coeffs = Vec::new();
        for j in 0..n {
            if rng.random_bool(0.5) {
                let a: f64 = (rng.random_range(-5.0..5.0_f64) * 2.0).round() / 2.0;
                if a != 0.0 {
                    coeffs.push((VarId(j), a));
                }
            }
        }
        if coeffs.is_empty() {
            coeffs.push((VarId(rng.random_range(0..n)), 1.0));
        }
        let act: f64 = coeffs.iter().map(|&(v, a)| a * reference[v.0]).sum();
        // occasionally tighten past the reference point to create infeasible rows
        let slack = rng.random_range(-1.0..3.0_f64).max(0.0) - if rng.random_bool(0.05) { 2.0 } else { 0.0 };
        let has_cont = coeffs.iter().any(|&(v, _)| v.0 >= nb);
        let (rel, rhs) = match rng.random_range(0..10) {
            0 if has_cont => (Relation::Eq, act),
            1..=3 => (Relation::Ge, act - slack),
            _ => (Relation::Le, act + slack),
        };
        m.add_constraint(format!("r{r}"), coeffs, rel, rhs);
    }
    m
}

/// Best objective over every binary assignment, each completed by an LP over
/// the continuous variables. `None` when no assignment is feasible.
pub fn enumerate_binaries(model: &MilpModel) -> Option<(f64, Vec<f64>)> {
    let bins: Vec<VarId> = model.binaries().collect();
    assert!(bins.len() <= 16, "enumeration oracle is exponential");
    let mut best: Option<(f64, Vec<f64>)> = None;
    'masks: for mask in 0u32..(1 << bins.len()) {
        let mut fixed = model.clone();
        for (i, &b) in bins.iter().enumerate() {
            let v = f64::from((mask >> i) & 1);
            // a binary can carry a tightened bound, e.g. a forced-off load
            let var = model.var(b);
            if v < var.lb || v > var.ub {
                continue 'masks;
            }
            fixed.set_bounds(b, v, v);
        }
        let r = solve_lp(&fixed);
        if r.status == LpStatus::Optimal && best.as_ref().is_none_or(|(o, _)| r.objective < *o) {
            best = Some((r.objective, r.values));
        }
    }
    best
}

/// Brute force over 0/1 points for pure-binary models, no LP involved.
pub fn brute_force_pure_binary(model: &MilpModel) -> Option<(f64, Vec<f64>)> {
    assert!(model.vars().iter().all(|v| v.kind == Integrality::Binary));
    let n = model.num_vars();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for mask in 0u32..(1 << n) {
        let x: Vec<f64> = (0..n).map(|i| f64::from((mask >> i) & 1)).collect();
        let ok = model.vars().iter().zip(&x).all(|(v, &xi)| xi >= v.lb && xi <= v.ub)
            && model.constraints().iter().all(|c| {
                let a = c.activity(&x);
                match c.relation {
                    Relation::Le => a <= c.rhs + 1e-9,
                    Relation::Ge => a >= c.rhs - 1e-9,
                    Relation::Eq => (a - c.rhs).abs() <= 1e-9,
                }
            });
        if ok {
            let obj = model.objective_value(&x);
            if best.as_ref().is_none_or(|(o, _)| obj < *o) {
                best = Some((obj, x));
            }
        }
    }
    best
}

/// Vertex enumeration for small bounded LPs: every choice of `n` tight
/// constraints among rows and bounds, solved by Gaussian elimination.
pub fn vertex_enumeration(model: &MilpModel) -> Option<f64> {
    let n = model.num_vars();
    let mut planes: Vec<(Vec<f64>, f64)> = Vec::new();
    for c in model.constraints() {
        let mut a = vec![0.0; n];
        for &(v, coef) in &c.coeffs {
            a[v.0] += coef;
        }
        planes.push((a, c.rhs));
    }
    for (j, v) in model.vars().iter().enumerate() {
        assert!(v.lb.is_finite() && v.ub.is_finite());
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        planes.push((e.clone(), v.lb));
        planes.push((e, v.ub));
    }
    let mut best: Option<f64> = None;
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        if let Some(x) = solve_square(&idx.iter().map(|&i| planes[i].clone()).collect::<Vec<_>>()) {
            let feasible = model
                .vars()
                .iter()
                .zip(&x)
                .all(|(v, &xi)| xi >= v.lb - 1e-7 && xi <= v.ub + 1e-7)
                && model.constraints().iter().all(|c| {
                    let a = c.activity(&x);
                    match c.relation {
                        Relation::Le => a <= c.rhs + 1e-7,
                        Relation::Ge => a >= c.rhs - 1e-7,
                        Relation::Eq => (a - c.rhs).abs() <= 1e-7,
                    }
                });
            if feasible {
                let obj = model.objective_value(&x);
                best = Some(best.map_or(obj, |b: f64| b.min(obj)));
            }
        }
        // next combination
        let k = planes.len();
        let mut i = n;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if idx[i] < k - n + i {
                idx[i] += 1;
                for j in i + 1..n {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn solve_square(rows: &[(Vec<f64>, f64)]) -> Option<Vec<f64>> {
    let n = rows.len();
    let mut a: Vec<Vec<f64>> = rows
        .iter()
        .map(|(r, b)| {
            let mut v = r.clone();
            v.push(*b);
            v
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-10 {
            return None;
        }
        a.swap(col, piv);
        for i in 0..n {
            if i != col {
                let f = a[i][col] / a[col][col];
                for j in col..=n {
                    a[i][j] -= f * a[col][j];
                }
            }
        }
    }
    Some((0..n).map(|i| a[i][n] / a[i][i]).collect())
}
