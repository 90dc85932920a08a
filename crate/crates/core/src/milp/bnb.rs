//! Best-bound-first branch-and-bound over binary variables.
//!
//! Children are evaluated eagerly: when a node is expanded its tableau is
//! rebuilt once from the stored basis, and each child re-optimizes a clone of
//! it with the dual simplex. Only the basis and the fixings are queued. A
//! depth-first dive from the root supplies an early incumbent so the gap is
//! meaningful from the first iterations.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::Arc;
use std::time::Instant;

use super::model::{Integrality, MilpModel};
use super::simplex::{BasisSnapshot, LpData, LpStatus, Tableau};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MilpStatus {
    /// The search tree is exhausted; the incumbent is optimal.
    Optimal,
    /// Stopped with open nodes because the relative gap reached the limit.
    GapLimit,
    /// Stopped by the wall-clock limit. `values` is empty without an incumbent.
    TimeLimit,
    /// Stopped by the node limit. `values` is empty without an incumbent.
    NodeLimit,
    Infeasible,
    Unbounded,
    /// The LP engine failed on the root relaxation.
    NumericalFailure,
}

#[derive(Debug, Clone)]
pub struct SolverOptions {
    pub rel_gap_limit: f64,
    /// Seconds.
    pub time_limit: f64,
    pub node_limit: Option<usize>,
    pub feasibility_tol: f64,
    pub integrality_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            rel_gap_limit: 0.01,
            time_limit: 300.0,
            node_limit: None,
            feasibility_tol: 1e-7,
            integrality_tol: 1e-6,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> crate::Result<()> {
        let ok = self.rel_gap_limit.is_finite()
            && self.rel_gap_limit >= 0.0
            && self.time_limit > 0.0
            && self.node_limit.is_none_or(|n| n > 0)
            && self.feasibility_tol > 0.0
            && self.integrality_tol > 0.0;
        if ok {
            Ok(())
        } else {
            Err(crate::Error::Invalid(format!("solver options out of range: {self:?}")))
        }
    }
}

#[derive(Debug, Clone)]
pub struct MilpSolution {
    pub status: MilpStatus,
    pub values: Vec<f64>,
    pub objective: f64,
    pub best_bound: f64,
    pub rel_gap: f64,
    pub nodes_explored: usize,
    pub lp_iterations: usize,
    pub wall_time: f64,
}

impl MilpSolution {
    pub fn has_incumbent(&self) -> bool {
        !self.values.is_empty()
    }
}

pub fn relative_gap(incumbent: f64, bound: f64) -> f64 {
    ((incumbent - bound) / incumbent.abs().max(1e-10)).max(0.0)
}

/// Node expansions between plunges for a better incumbent.
const DIVE_EVERY: usize = 16;

struct Node {
    bound: f64,
    id: usize,
    fixings: Vec<(usize, f64)>,
    basis: BasisSnapshot,
}

// Min-heap on (bound, id) for BinaryHeap.
impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        other.bound.total_cmp(&self.bound).then_with(|| other.id.cmp(&self.id))
    }
}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

struct Search<'a> {
    binaries: Vec<usize>,
    options: &'a SolverOptions,
    incumbent: Option<(f64, Vec<f64>)>,
    nodes: usize,
    lp_iterations: usize,
    next_id: usize,
}

impl Search<'_> {
    fn most_fractional(&self, x: &[f64]) -> Option<usize> {
        let mut best = None;
        let mut best_frac = self.options.integrality_tol;
        for &j in &self.binaries {
            let f = (x[j] - x[j].floor()).min(x[j].ceil() - x[j]);
            if f > best_frac {
                best_frac = f;
                best = Some(j);
            }
        }
        best
    }

    fn cutoff(&self) -> f64 {
        match &self.incumbent {
            Some((obj, _)) => obj - 1e-9 * obj.abs().max(1.0),
            None => f64::INFINITY,
        }
    }

    fn offer_incumbent(&mut self, tab: &Tableau) {
        let obj = tab.objective();
        if self.incumbent.as_ref().is_none_or(|(best, _)| obj < *best) {
            let mut values = tab.structural_values();
            for &j in &self.binaries {
                values[j] = values[j].round();
            }
            log::trace!("incumbent {obj} after {} nodes", self.nodes);
            self.incumbent = Some((obj, values));
        }
    }

    /// Fix `var` to `value` on a copy of `parent` and re-optimize.
    fn child(&mut self, parent: &Tableau, var: usize, value: f64) -> Option<Tableau> {
        let mut tab = parent.clone();
        tab.iterations = 0;
        tab.set_bounds(var, value, value);
        let status = tab.dual();
        self.nodes += 1;
        self.lp_iterations += tab.iterations;
        (status == LpStatus::Optimal).then_some(tab)
    }

    /// Depth-first plunge rounding the most fractional binary each level.
    fn dive(&mut self, root: &Tableau, deadline: &Deadline) {
        let mut tab = root.clone();
        while let Some(j) = self.most_fractional(&tab.x) {
            if deadline.expired(self.nodes) {
                return;
            }
            let near = tab.x[j].round();
            tab = match self.child(&tab, j, near) {
                Some(t) => t,
                None => match self.child(&tab, j, 1.0 - near) {
                    Some(t) => t,
                    None => return,
                },
            };
            if tab.objective() >= self.cutoff() {
                return;
            }
        }
        self.offer_incumbent(&tab);
    }
}

struct Deadline {
    start: Instant,
    time_limit: f64,
    node_limit: Option<usize>,
}

impl Deadline {
    fn expired(&self, nodes: usize) -> bool {
        self.start.elapsed().as_secs_f64() >= self.time_limit || self.node_limit.is_some_and(|n| nodes >= n)
    }

    fn status(&self, nodes: usize) -> MilpStatus {
        if self.node_limit.is_some_and(|n| nodes >= n) {
            MilpStatus::NodeLimit
        } else {
            MilpStatus::TimeLimit
        }
    }
}

pub fn solve_milp(model: &MilpModel, options: &SolverOptions) -> MilpSolution {
    let start = Instant::now();
    let deadline = Deadline {
        start,
        time_limit: options.time_limit,
        node_limit: options.node_limit,
    };
    let failed = |status| MilpSolution {
        status,
        values: Vec::new(),
        objective: f64::NAN,
        best_bound: f64::NAN,
        rel_gap: f64::INFINITY,
        nodes_explored: 0,
        lp_iterations: 0,
        wall_time: start.elapsed().as_secs_f64(),
    };
    if model.validate().is_err() || options.validate().is_err() {
        return failed(MilpStatus::NumericalFailure);
    }

    let data = Arc::new(LpData::from_model(model));
    let binaries: Vec<usize> = model
        .vars()
        .iter()
        .enumerate()
        .filter(|(_, v)| v.kind == Integrality::Binary)
        .map(|(j, _)| j)
        .collect();
    let mut search = Search {
        binaries,
        options,
        incumbent: None,
        nodes: 0,
        lp_iterations: 0,
        next_id: 0,
    };

    let mut root = Tableau::new(Arc::clone(&data), options.feasibility_tol);
    let root_status = root.primal();
    search.nodes += 1;
    search.lp_iterations += root.iterations;
    match root_status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => {
            let mut s = failed(MilpStatus::Infeasible);
            s.objective = f64::INFINITY;
            s.best_bound = f64::INFINITY;
            s.nodes_explored = search.nodes;
            return s;
        }
        LpStatus::Unbounded => {
            let mut s = failed(MilpStatus::Unbounded);
            s.objective = f64::NEG_INFINITY;
            s.best_bound = f64::NEG_INFINITY;
            s.nodes_explored = search.nodes;
            return s;
        }
        LpStatus::NumericalFailure => return failed(MilpStatus::NumericalFailure),
    }

    let mut heap = BinaryHeap::new();
    if search.most_fractional(&root.x).is_none() {
        search.offer_incumbent(&root);
    } else {
        search.dive(&root, &deadline);
        log::debug!(
            "dive: {} after {} nodes",
            search
                .incumbent
                .as_ref()
                .map_or("no incumbent".to_string(), |(o, _)| format!("incumbent {o}")),
            search.nodes
        );
        heap.push(Node {
            bound: root.objective(),
            id: 0,
            fixings: Vec::new(),
            basis: root.snapshot(),
        });
        search.next_id = 1;
    }

    let mut stop = None;
    let mut expanded = 0usize;
    while let Some(node) = heap.pop() {
        if node.bound >= search.cutoff() {
            continue;
        }
        if let Some((inc, _)) = &search.incumbent {
            if relative_gap(*inc, node.bound) <= options.rel_gap_limit {
                heap.push(node);
                stop = Some(MilpStatus::GapLimit);
                break;
            }
        }
        if deadline.expired(search.nodes) {
            stop = Some(deadline.status(search.nodes));
            heap.push(node);
            break;
        }
        let (lb, ub) = bounds_with(&data, &node.fixings);
        let Some(tab) = Tableau::from_snapshot(Arc::clone(&data), &node.basis, lb, ub, options.feasibility_tol) else {
            log::warn!("dropping node {} with a singular basis", node.id);
            continue;
        };
        let Some(var) = search.most_fractional(&tab.x) else {
            // the rebuilt relaxation landed on an integer point
            search.offer_incumbent(&tab);
            continue;
        };
        expanded += 1;
        if expanded.is_multiple_of(DIVE_EVERY) {
            search.dive(&tab, &deadline);
        }
        let down_first = tab.x[var] < 0.5;
        let order = if down_first { [0.0, 1.0] } else { [1.0, 0.0] };
        for value in order {
            let Some(child) = search.child(&tab, var, value) else {
                continue;
            };
            let bound = child.objective().max(node.bound);
            if bound >= search.cutoff() {
                continue;
            }
            if search.most_fractional(&child.x).is_none() {
                search.offer_incumbent(&child);
                continue;
            }
            let mut fixings = node.fixings.clone();
            fixings.push((var, value));
            heap.push(Node {
                bound,
                id: search.next_id,
                fixings,
                basis: child.snapshot(),
            });
            search.next_id += 1;
        }
    }

    let open_bound = heap
        .iter()
        .filter(|n| n.bound < search.cutoff())
        .map(|n| n.bound)
        .fold(f64::INFINITY, f64::min);
    let wall_time = start.elapsed().as_secs_f64();
    match search.incumbent {
        Some((objective, values)) => {
            let best_bound = open_bound.min(objective);
            let rel_gap = relative_gap(objective, best_bound);
            let status = match stop {
                None => MilpStatus::Optimal,
                Some(s) if rel_gap == 0.0 => {
                    if s == MilpStatus::GapLimit {
                        MilpStatus::Optimal
                    } else {
                        s
                    }
                }
                Some(s) => s,
            };
            MilpSolution {
                status,
                values,
                objective,
                best_bound,
                rel_gap,
                nodes_explored: search.nodes,
                lp_iterations: search.lp_iterations,
                wall_time,
            }
        }
        None => MilpSolution {
            status: stop.unwrap_or(MilpStatus::Infeasible),
            values: Vec::new(),
            objective: f64::INFINITY,
            best_bound: if stop.is_some() { open_bound } else { f64::INFINITY },
            rel_gap: f64::INFINITY,
            nodes_explored: search.nodes,
            lp_iterations: search.lp_iterations,
            wall_time,
        },
    }
}

fn bounds_with(data: &LpData, fixings: &[(usize, f64)]) -> (Vec<f64>, Vec<f64>) {
    let mut lb = data.lb.clone();
    let mut ub = data.ub.clone();
    for &(j, v) in fixings {
        lb[j] = v;
        ub[j] = v;
    }
    (lb, ub)
}
