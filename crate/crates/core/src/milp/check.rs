use std::fmt;

use super::model::{Integrality, MilpModel, Relation};

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Bound {
        var: usize,
        value: f64,
        lb: f64,
        ub: f64,
        excess: f64,
    },
    Row {
        row: usize,
        activity: f64,
        relation: Relation,
        rhs: f64,
        excess: f64,
    },
    Integrality {
        var: usize,
        value: f64,
        distance: f64,
    },
    /// The assignment length does not match the model.
    Shape {
        expected: usize,
        got: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Bound {
                var,
                value,
                lb,
                ub,
                excess,
            } => {
                write!(f, "x{var} = {value} outside [{lb}, {ub}] by {excess:e}")
            }
            Violation::Row {
                row,
                activity,
                relation,
                rhs,
                excess,
            } => {
                write!(f, "row {row}: {activity} {relation} {rhs} violated by {excess:e}")
            }
            Violation::Integrality { var, value, distance } => {
                write!(f, "binary x{var} = {value} is {distance:e} from integral")
            }
            Violation::Shape { expected, got } => {
                write!(f, "assignment has {got} values, model has {expected} variables")
            }
        }
    }
}

/// Every bound, row and integrality violation above `tol`. Row excesses are
/// absolute; an empty report means the point is feasible.
pub fn check_solution(model: &MilpModel, values: &[f64], tol: f64) -> Vec<Violation> {
    if values.len() != model.num_vars() {
        return vec![Violation::Shape {
            expected: model.num_vars(),
            got: values.len(),
        }];
    }
    let mut out = Vec::new();
    for (j, (v, &x)) in model.vars().iter().zip(values).enumerate() {
        let excess = if x.is_nan() {
            f64::INFINITY
        } else {
            (v.lb - x).max(x - v.ub).max(0.0)
        };
        if excess > tol {
            out.push(Violation::Bound {
                var: j,
                value: x,
                lb: v.lb,
                ub: v.ub,
                excess,
            });
        }
        if v.kind == Integrality::Binary {
            let distance = (x - x.round()).abs();
            if distance > tol || x.is_nan() {
                out.push(Violation::Integrality {
                    var: j,
                    value: x,
                    distance,
                });
            }
        }
    }
    for (r, c) in model.constraints().iter().enumerate() {
        let activity = c.activity(values);
        let excess = match c.relation {
            Relation::Le => activity - c.rhs,
            Relation::Ge => c.rhs - activity,
            Relation::Eq => (activity - c.rhs).abs(),
        };
        if excess > tol || activity.is_nan() {
            out.push(Violation::Row {
                row: r,
                activity,
                relation: c.relation,
                rhs: c.rhs,
                excess,
            });
        }
    }
    out
}
