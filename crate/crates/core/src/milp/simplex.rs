//! Dense bounded-variable simplex.
//!
//! Every row `a_i x <= / = / >= b_i` becomes `a_i x + s_i = b_i` with a slack
//! whose bounds encode the relation, so variable bounds never turn into rows.
//! The tableau stores `B^-1 [A I]` explicitly; the problems this crate builds
//! have a few hundred rows, where a dense explicit inverse is fast enough and
//! simple to keep numerically honest through periodic refactorization.
//!
//! Two drivers share the tableau: a primal simplex with a composite phase 1
//! (minimize the sum of bound infeasibilities of the basic variables), and a
//! dual simplex used by branch-and-bound after a bound change on a
//! dual-feasible basis.

use std::sync::Arc;

use super::model::{MilpModel, Relation};

const PIVOT_TOL: f64 = 1e-9;
const OPT_TOL: f64 = 1e-9;
const SINGULAR_TOL: f64 = 1e-11;
const REFACTOR_EVERY: usize = 100;
/// Consecutive degenerate pivots tolerated before switching to Bland's rule.
const DEGENERATE_LIMIT: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// The factorization broke down or the iteration cap was hit.
    NumericalFailure,
}

#[derive(Debug, Clone)]
pub struct LpResult {
    pub status: LpStatus,
    /// Structural variable values; empty unless `status` is `Optimal`.
    pub values: Vec<f64>,
    pub objective: f64,
    /// One multiplier per row: the sensitivity of the optimum to its rhs.
    pub duals: Vec<f64>,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum VarStatus {
    Basic,
    AtLower,
    AtUpper,
    /// Nonbasic free variable parked at zero.
    Free,
}

/// Immutable problem data shared by every tableau of one solve.
#[derive(Debug)]
pub(crate) struct LpData {
    pub m: usize,
    pub n: usize,
    pub cols: usize,
    /// Row-major `[A I]`, `m x cols`.
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub cost: Vec<f64>,
    pub lb: Vec<f64>,
    pub ub: Vec<f64>,
}

impl LpData {
    pub fn from_model(model: &MilpModel) -> Self {
        let n = model.num_vars();
        let m = model.constraints().len();
        let cols = n + m;
        let mut a = vec![0.0; m * cols];
        let mut b = Vec::with_capacity(m);
        let mut lb = Vec::with_capacity(cols);
        let mut ub = Vec::with_capacity(cols);
        let mut cost = vec![0.0; cols];
        for (j, v) in model.vars().iter().enumerate() {
            lb.push(v.lb);
            ub.push(v.ub);
            cost[j] = model.objective()[j];
        }
        for (i, c) in model.constraints().iter().enumerate() {
            for &(v, coef) in &c.coeffs {
                a[i * cols + v.0] += coef;
            }
            a[i * cols + n + i] = 1.0;
            b.push(c.rhs);
            let (l, u) = match c.relation {
                Relation::Le => (0.0, f64::INFINITY),
                Relation::Ge => (f64::NEG_INFINITY, 0.0),
                Relation::Eq => (0.0, 0.0),
            };
            lb.push(l);
            ub.push(u);
        }
        Self {
            m,
            n,
            cols,
            a,
            b,
            cost,
            lb,
            ub,
        }
    }
}

/// Restorable basis description, much smaller than a tableau.
#[derive(Debug, Clone)]
pub(crate) struct BasisSnapshot {
    pub basis: Vec<usize>,
    pub status: Vec<VarStatus>,
}

#[derive(Debug, Clone)]
pub(crate) struct Tableau {
    data: Arc<LpData>,
    pub lb: Vec<f64>,
    pub ub: Vec<f64>,
    t: Vec<f64>,
    pub x: Vec<f64>,
    d: Vec<f64>,
    basis: Vec<usize>,
    status: Vec<VarStatus>,
    feas_tol: f64,
    since_refactor: usize,
    last_step_degenerate: bool,
    pub iterations: usize,
    row_buf: Vec<f64>,
    nz_buf: Vec<usize>,
}

enum Step {
    Progress,
    Done,
    Unbounded,
}

impl Tableau {
    /// Slack basis with every structural variable at its finite bound
    /// nearest zero, or free at zero.
    pub fn new(data: Arc<LpData>, feas_tol: f64) -> Self {
        let (m, n, cols) = (data.m, data.n, data.cols);
        let lb = data.lb.clone();
        let ub = data.ub.clone();
        let mut status = vec![VarStatus::Basic; cols];
        let mut x = vec![0.0; cols];
        for j in 0..n {
            let (s, v) = nonbasic_home(lb[j], ub[j]);
            status[j] = s;
            x[j] = v;
        }
        let basis: Vec<usize> = (n..cols).collect();
        let mut tab = Self {
            t: data.a.clone(),
            d: data.cost.clone(),
            data,
            lb,
            ub,
            x,
            basis,
            status,
            feas_tol,
            since_refactor: 0,
            last_step_degenerate: false,
            iterations: 0,
            row_buf: vec![0.0; cols],
            nz_buf: Vec::with_capacity(cols),
        };
        for i in 0..m {
            let row = &tab.data.a[i * cols..(i + 1) * cols];
            let activity: f64 = (0..n).map(|j| row[j] * tab.x[j]).sum();
            tab.x[n + i] = tab.data.b[i] - activity;
        }
        tab
    }

    pub fn from_snapshot(
        data: Arc<LpData>,
        snap: &BasisSnapshot,
        lb: Vec<f64>,
        ub: Vec<f64>,
        feas_tol: f64,
    ) -> Option<Self> {
        let cols = data.cols;
        let mut x = vec![0.0; cols];
        for j in 0..cols {
            x[j] = match snap.status[j] {
                VarStatus::AtLower => lb[j],
                VarStatus::AtUpper => ub[j],
                VarStatus::Free | VarStatus::Basic => 0.0,
            };
        }
        let mut tab = Self {
            t: Vec::new(),
            d: Vec::new(),
            data,
            lb,
            ub,
            x,
            basis: snap.basis.clone(),
            status: snap.status.clone(),
            feas_tol,
            since_refactor: 0,
            last_step_degenerate: false,
            iterations: 0,
            row_buf: vec![0.0; cols],
            nz_buf: Vec::with_capacity(cols),
        };
        tab.refactor().then_some(tab)
    }

    pub fn snapshot(&self) -> BasisSnapshot {
        BasisSnapshot {
            basis: self.basis.clone(),
            status: self.status.clone(),
        }
    }

    fn cols(&self) -> usize {
        self.data.cols
    }

    pub fn objective(&self) -> f64 {
        self.data.cost.iter().zip(&self.x).map(|(c, x)| c * x).sum()
    }

    pub fn structural_values(&self) -> Vec<f64> {
        self.x[..self.data.n].to_vec()
    }

    pub fn duals(&self) -> Vec<f64> {
        let n = self.data.n;
        (0..self.data.m).map(|i| -self.d[n + i]).collect()
    }

    /// Rebuild `B^-1 [A I]`, the basic values and the reduced costs from the
    /// current basis. Returns false when the basis is singular.
    fn refactor(&mut self) -> bool {
        let (m, cols) = (self.data.m, self.data.cols);
        let mut t = self.data.a.clone();
        let mut rhs = self.data.b.clone();
        for j in 0..cols {
            if self.status[j] != VarStatus::Basic && self.x[j] != 0.0 {
                let xj = self.x[j];
                for i in 0..m {
                    rhs[i] -= t[i * cols + j] * xj;
                }
            }
        }
        let mut assigned = vec![false; m];
        let mut new_basis = vec![usize::MAX; m];
        let mut order = self.basis.clone();
        order.sort_unstable();
        for &k in &order {
            let mut best = None;
            let mut best_abs = SINGULAR_TOL;
            for i in 0..m {
                if !assigned[i] {
                    let v = t[i * cols + k].abs();
                    if v > best_abs {
                        best_abs = v;
                        best = Some(i);
                    }
                }
            }
            let Some(r) = best else {
                return false;
            };
            assigned[r] = true;
            new_basis[r] = k;
            eliminate(&mut t, &mut rhs, m, cols, r, k, &mut self.row_buf, &mut self.nz_buf);
        }
        self.t = t;
        self.basis = new_basis;
        for (r, &k) in self.basis.iter().enumerate() {
            self.x[k] = rhs[r];
        }
        self.recompute_reduced_costs();
        self.since_refactor = 0;
        self.x.iter().all(|v| v.is_finite())
    }

    fn recompute_reduced_costs(&mut self) {
        let cols = self.cols();
        let mut d = self.data.cost.clone();
        for (r, &k) in self.basis.iter().enumerate() {
            let ck = self.data.cost[k];
            if ck != 0.0 {
                let row = &self.t[r * cols..(r + 1) * cols];
                for j in 0..cols {
                    d[j] -= ck * row[j];
                }
            }
        }
        for &k in &self.basis {
            d[k] = 0.0;
        }
        self.d = d;
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let (m, cols) = (self.data.m, self.data.cols);
        eliminate_no_rhs(&mut self.t, m, cols, r, q, &mut self.row_buf, &mut self.nz_buf);
        let dq = self.d[q];
        if dq != 0.0 {
            for &j in &self.nz_buf {
                self.d[j] -= dq * self.row_buf[j];
            }
        }
        self.d[q] = 0.0;
        let leaving = self.basis[r];
        self.basis[r] = q;
        self.status[q] = VarStatus::Basic;
        // caller fixes the leaving status
        self.status[leaving] = VarStatus::AtLower;
        self.since_refactor += 1;
        self.iterations += 1;
    }

    fn is_fixed(&self, j: usize) -> bool {
        self.lb[j] == self.ub[j]
    }

    fn infeasibility(&self, k: usize) -> f64 {
        let v = self.x[k];
        if v < self.lb[k] - self.feas_tol {
            self.lb[k] - v
        } else if v > self.ub[k] + self.feas_tol {
            v - self.ub[k]
        } else {
            0.0
        }
    }

    fn primal_infeasible(&self) -> bool {
        self.basis.iter().any(|&k| self.infeasibility(k) > 0.0)
    }

    /// Change the bounds of a variable, keeping basic values consistent when
    /// a nonbasic variable has to move.
    pub fn set_bounds(&mut self, j: usize, lb: f64, ub: f64) {
        self.lb[j] = lb;
        self.ub[j] = ub;
        if self.status[j] == VarStatus::Basic {
            return;
        }
        let (s, v) = match self.status[j] {
            VarStatus::AtUpper if ub.is_finite() => (VarStatus::AtUpper, ub),
            _ => nonbasic_home(lb, ub),
        };
        let delta = v - self.x[j];
        self.status[j] = s;
        if delta != 0.0 {
            self.move_nonbasic(j, delta);
        }
    }

    fn move_nonbasic(&mut self, j: usize, delta: f64) {
        let cols = self.cols();
        self.x[j] += delta;
        for (r, &k) in self.basis.iter().enumerate() {
            let a = self.t[r * cols + j];
            if a != 0.0 {
                self.x[k] -= a * delta;
            }
        }
    }

    fn max_iterations(&self) -> usize {
        50 * (self.data.m + self.data.cols) + 1000
    }

    /// Largest row residual of `[A I] x = b` using the original data.
    fn residual(&self) -> f64 {
        let cols = self.cols();
        let mut worst: f64 = 0.0;
        for i in 0..self.data.m {
            let row = &self.data.a[i * cols..(i + 1) * cols];
            let act: f64 = row.iter().zip(&self.x).map(|(a, x)| a * x).sum();
            let r = (act - self.data.b[i]).abs() / (1.0 + self.data.b[i].abs());
            worst = worst.max(r);
        }
        worst
    }

    /// Primal simplex from the current basis, feasible or not.
    pub fn primal(&mut self) -> LpStatus {
        let limit = self.iterations + self.max_iterations();
        let mut retries = 0;
        loop {
            match self.primal_inner(limit) {
                LpStatus::Optimal => {
                    if self.residual() <= 1e-7 {
                        return LpStatus::Optimal;
                    }
                    retries += 1;
                    if retries > 2 || !self.refactor() {
                        return LpStatus::NumericalFailure;
                    }
                }
                other => return other,
            }
        }
    }

    fn primal_inner(&mut self, limit: usize) -> LpStatus {
        let mut degenerate = 0usize;
        let mut phase1_weights = vec![0.0; self.data.m];
        loop {
            if self.iterations >= limit {
                return LpStatus::NumericalFailure;
            }
            if self.since_refactor >= REFACTOR_EVERY && !self.refactor() {
                return LpStatus::NumericalFailure;
            }
            let bland = degenerate > DEGENERATE_LIMIT;
            let phase1 = self.primal_infeasible();
            let step = if phase1 {
                for (r, &k) in self.basis.iter().enumerate() {
                    let v = self.x[k];
                    phase1_weights[r] = if v < self.lb[k] - self.feas_tol {
                        -1.0
                    } else if v > self.ub[k] + self.feas_tol {
                        1.0
                    } else {
                        0.0
                    };
                }
                let dj = self.phase1_costs(&phase1_weights);
                match self.choose_entering(&dj, bland) {
                    None => return LpStatus::Infeasible,
                    Some((q, dir)) => self.primal_step(q, dir, true, bland),
                }
            } else {
                let dj = std::mem::take(&mut self.d);
                let choice = self.choose_entering(&dj, bland);
                self.d = dj;
                match choice {
                    None => Step::Done,
                    Some((q, dir)) => self.primal_step(q, dir, false, bland),
                }
            };
            match step {
                Step::Done => return LpStatus::Optimal,
                Step::Unbounded => {
                    return if phase1 {
                        LpStatus::NumericalFailure
                    } else {
                        LpStatus::Unbounded
                    }
                }
                Step::Progress => {}
            }
            if self.last_step_degenerate {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            if !self.x.iter().all(|v| v.is_finite()) {
                return LpStatus::NumericalFailure;
            }
        }
    }

    fn phase1_costs(&self, w: &[f64]) -> Vec<f64> {
        let cols = self.cols();
        let mut dj = vec![0.0; cols];
        for (r, &wr) in w.iter().enumerate() {
            if wr != 0.0 {
                let row = &self.t[r * cols..(r + 1) * cols];
                for j in 0..cols {
                    dj[j] -= wr * row[j];
                }
            }
        }
        for &k in &self.basis {
            dj[k] = 0.0;
        }
        dj
    }

    /// Dantzig pricing, or lowest eligible index under Bland's rule.
    fn choose_entering(&self, dj: &[f64], bland: bool) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        let mut best_mag = 0.0;
        for j in 0..self.cols() {
            let dir = match self.status[j] {
                VarStatus::Basic => continue,
                _ if self.is_fixed(j) => continue,
                VarStatus::AtLower if dj[j] < -OPT_TOL => 1.0,
                VarStatus::AtUpper if dj[j] > OPT_TOL => -1.0,
                VarStatus::Free if dj[j].abs() > OPT_TOL => -dj[j].signum(),
                _ => continue,
            };
            if bland {
                return Some((j, dir));
            }
            let mag = dj[j].abs();
            if mag > best_mag {
                best_mag = mag;
                best = Some((j, dir));
            }
        }
        best
    }

    fn primal_step(&mut self, q: usize, dir: f64, phase1: bool, bland: bool) -> Step {
        let cols = self.cols();
        let flip = if self.lb[q].is_finite() && self.ub[q].is_finite() {
            self.ub[q] - self.lb[q]
        } else {
            f64::INFINITY
        };
        // (row, leaves at upper, |alpha|, step)
        let mut best: Option<(usize, bool, f64, f64)> = None;
        for r in 0..self.data.m {
            let alpha = self.t[r * cols + q];
            if alpha.abs() < PIVOT_TOL {
                continue;
            }
            let rate = -dir * alpha;
            let k = self.basis[r];
            let (xr, lo, hi) = (self.x[k], self.lb[k], self.ub[k]);
            let (cand, to_upper) = if phase1 && xr < lo - self.feas_tol {
                if rate > 0.0 {
                    ((lo - xr) / rate, false)
                } else {
                    continue;
                }
            } else if phase1 && xr > hi + self.feas_tol {
                if rate < 0.0 {
                    ((xr - hi) / -rate, true)
                } else {
                    continue;
                }
            } else if rate < 0.0 && lo.is_finite() {
                ((xr - lo).max(0.0) / -rate, false)
            } else if rate > 0.0 && hi.is_finite() {
                ((hi - xr).max(0.0) / rate, true)
            } else {
                continue;
            };
            let better = match best {
                None => true,
                Some((br, _, ba, bt)) => {
                    if cand < bt - 1e-12 {
                        true
                    } else if cand <= bt + 1e-12 {
                        if bland {
                            k < self.basis[br]
                        } else {
                            alpha.abs() > ba
                        }
                    } else {
                        false
                    }
                }
            };
            if better {
                best = Some((r, to_upper, alpha.abs(), cand));
            }
        }
        let (theta, leave) = match best {
            Some((r, up, _, t)) if t < flip => (t, Some((r, up))),
            _ => (flip, None),
        };
        if theta.is_infinite() {
            return Step::Unbounded;
        }
        self.last_step_degenerate = theta <= 1e-12;
        if theta > 0.0 {
            self.move_nonbasic(q, dir * theta);
        }
        match leave {
            None => {
                if dir > 0.0 {
                    self.status[q] = VarStatus::AtUpper;
                    self.x[q] = self.ub[q];
                } else {
                    self.status[q] = VarStatus::AtLower;
                    self.x[q] = self.lb[q];
                }
                self.iterations += 1;
            }
            Some((r, to_upper)) => {
                let k = self.basis[r];
                self.pivot(r, q);
                if to_upper {
                    self.status[k] = VarStatus::AtUpper;
                    self.x[k] = self.ub[k];
                } else {
                    self.status[k] = VarStatus::AtLower;
                    self.x[k] = self.lb[k];
                }
            }
        }
        Step::Progress
    }

    fn dual_feasible(&self) -> bool {
        (0..self.cols()).all(|j| {
            if self.is_fixed(j) {
                return true;
            }
            match self.status[j] {
                VarStatus::Basic => true,
                VarStatus::AtLower => self.d[j] >= -OPT_TOL,
                VarStatus::AtUpper => self.d[j] <= OPT_TOL,
                VarStatus::Free => self.d[j].abs() <= OPT_TOL,
            }
        })
    }

    /// Dual simplex; falls back to the primal driver when the basis is not
    /// dual feasible or the dual iterations stall.
    pub fn dual(&mut self) -> LpStatus {
        if !self.dual_feasible() {
            return self.primal();
        }
        let limit = self.iterations + self.max_iterations();
        let cols = self.cols();
        let mut degenerate = 0usize;
        loop {
            if self.iterations >= limit {
                return self.primal();
            }
            if self.since_refactor >= REFACTOR_EVERY && !self.refactor() {
                return LpStatus::NumericalFailure;
            }
            let bland = degenerate > DEGENERATE_LIMIT;
            // leaving row: largest infeasibility, or lowest index under Bland
            let mut leave: Option<(usize, f64)> = None;
            for (r, &k) in self.basis.iter().enumerate() {
                let inf = self.infeasibility(k);
                if inf <= 0.0 {
                    continue;
                }
                match leave {
                    None => leave = Some((r, inf)),
                    Some((br, binf)) => {
                        let better = if bland { k < self.basis[br] } else { inf > binf };
                        if better {
                            leave = Some((r, inf));
                        }
                    }
                }
            }
            let Some((r, _)) = leave else {
                // primal feasible; polish any dual drift with the primal driver
                return if self.dual_feasible() && self.residual() <= 1e-7 {
                    LpStatus::Optimal
                } else {
                    self.primal()
                };
            };
            let k = self.basis[r];
            let (target, to_upper) = if self.x[k] < self.lb[k] {
                (self.lb[k], false)
            } else {
                (self.ub[k], true)
            };
            let delta = target - self.x[k];
            let sign = delta.signum();
            let mut enter: Option<(usize, f64, f64)> = None;
            for j in 0..cols {
                if self.status[j] == VarStatus::Basic || self.is_fixed(j) {
                    continue;
                }
                let alpha = self.t[r * cols + j];
                if alpha.abs() < PIVOT_TOL {
                    continue;
                }
                let ok = match self.status[j] {
                    VarStatus::AtLower => alpha * sign < 0.0,
                    VarStatus::AtUpper => alpha * sign > 0.0,
                    VarStatus::Free => true,
                    VarStatus::Basic => false,
                };
                if !ok {
                    continue;
                }
                let ratio = self.d[j].abs() / alpha.abs();
                let better = match enter {
                    None => true,
                    Some((bj, br, ba)) => {
                        if ratio < br - 1e-12 {
                            true
                        } else if ratio <= br + 1e-12 {
                            if bland {
                                j < bj
                            } else {
                                alpha.abs() > ba
                            }
                        } else {
                            false
                        }
                    }
                };
                if better {
                    enter = Some((j, ratio, alpha.abs()));
                }
            }
            let Some((q, ratio, _)) = enter else {
                return LpStatus::Infeasible;
            };
            if ratio <= 1e-12 {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            let alpha = self.t[r * cols + q];
            let step = -delta / alpha;
            self.move_nonbasic(q, step);
            self.pivot(r, q);
            self.x[k] = target;
            self.status[k] = if to_upper {
                VarStatus::AtUpper
            } else {
                VarStatus::AtLower
            };
            if !self.x.iter().all(|v| v.is_finite()) {
                return LpStatus::NumericalFailure;
            }
        }
    }
}

fn nonbasic_home(lb: f64, ub: f64) -> (VarStatus, f64) {
    if lb.is_finite() && ub.is_finite() {
        if lb.abs() <= ub.abs() {
            (VarStatus::AtLower, lb)
        } else {
            (VarStatus::AtUpper, ub)
        }
    } else if lb.is_finite() {
        (VarStatus::AtLower, lb)
    } else if ub.is_finite() {
        (VarStatus::AtUpper, ub)
    } else {
        (VarStatus::Free, 0.0)
    }
}

/// Gauss-Jordan elimination of column `q` using pivot row `r`. Leaves the
/// normalized pivot row in `row` and its nonzero pattern in `nz`.
fn eliminate_no_rhs(t: &mut [f64], m: usize, cols: usize, r: usize, q: usize, row: &mut Vec<f64>, nz: &mut Vec<usize>) {
    let piv = t[r * cols + q];
    nz.clear();
    row.clear();
    row.extend_from_slice(&t[r * cols..(r + 1) * cols]);
    for (j, v) in row.iter_mut().enumerate() {
        if *v != 0.0 {
            *v /= piv;
            nz.push(j);
        }
    }
    row[q] = 1.0;
    t[r * cols..(r + 1) * cols].copy_from_slice(row);
    for i in 0..m {
        if i == r {
            continue;
        }
        let f = t[i * cols + q];
        if f == 0.0 {
            continue;
        }
        let dst = &mut t[i * cols..(i + 1) * cols];
        for &j in nz.iter() {
            dst[j] -= f * row[j];
        }
        dst[q] = 0.0;
    }
}

#[allow(clippy::too_many_arguments)]
fn eliminate(
    t: &mut [f64],
    rhs: &mut [f64],
    m: usize,
    cols: usize,
    r: usize,
    q: usize,
    row: &mut Vec<f64>,
    nz: &mut Vec<usize>,
) {
    let piv = t[r * cols + q];
    let pivot_rhs = rhs[r] / piv;
    let column: Vec<f64> = (0..m).map(|i| t[i * cols + q]).collect();
    eliminate_no_rhs(t, m, cols, r, q, row, nz);
    rhs[r] = pivot_rhs;
    for i in 0..m {
        if i != r && column[i] != 0.0 {
            rhs[i] -= column[i] * pivot_rhs;
        }
    }
}

/// Solve the continuous relaxation of `model` (integrality is ignored).
pub fn solve_lp(model: &MilpModel) -> LpResult {
    solve_lp_with_tol(model, 1e-7)
}

pub fn solve_lp_with_tol(model: &MilpModel, feas_tol: f64) -> LpResult {
    if let Err(e) = model.validate() {
        log::warn!("solve_lp on an invalid model: {e}");
        return LpResult {
            status: LpStatus::NumericalFailure,
            values: Vec::new(),
            objective: f64::NAN,
            duals: Vec::new(),
            iterations: 0,
        };
    }
    let data = Arc::new(LpData::from_model(model));
    let mut tab = Tableau::new(data, feas_tol);
    let status = tab.primal();
    finish(&tab, status)
}

pub(crate) fn finish(tab: &Tableau, status: LpStatus) -> LpResult {
    if status == LpStatus::Optimal {
        LpResult {
            status,
            values: tab.structural_values(),
            objective: tab.objective(),
            duals: tab.duals(),
            iterations: tab.iterations,
        }
    } else {
        LpResult {
            status,
            values: Vec::new(),
            objective: match status {
                LpStatus::Infeasible => f64::INFINITY,
                LpStatus::Unbounded => f64::NEG_INFINITY,
                _ => f64::NAN,
            },
            duals: Vec::new(),
            iterations: tab.iterations,
        }
    }
}
