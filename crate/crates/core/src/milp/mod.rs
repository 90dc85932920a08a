//! Self-contained mixed-integer linear programming: model, bounded simplex
//! for the relaxations, branch-and-bound, and an independent feasibility
//! auditor.

mod bnb;
mod check;
mod lp_format;
mod model;
mod simplex;

pub use bnb::{relative_gap, solve_milp, MilpSolution, MilpStatus, SolverOptions};
pub use check::{check_solution, Violation};
pub use lp_format::to_lp_string;
pub use model::{Constraint, Integrality, MilpModel, Relation, VarId, Variable};
pub use simplex::{solve_lp, solve_lp_with_tol, LpResult, LpStatus};
