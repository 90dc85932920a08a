use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub usize);

impl VarId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integrality {
    Continuous,
    Binary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub name: String,
    pub lb: f64,
    pub ub: f64,
    pub kind: Integrality,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub name: String,
    pub coeffs: Vec<(VarId, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Constraint {
    pub fn activity(&self, values: &[f64]) -> f64 {
        self.coeffs.iter().map(|&(v, a)| a * values[v.0]).sum()
    }
}

/// A minimization problem over continuous and binary variables.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MilpModel {
    vars: Vec<Variable>,
    objective: Vec<f64>,
    constraints: Vec<Constraint>,
}

impl MilpModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, name: impl Into<String>, lb: f64, ub: f64, kind: Integrality) -> VarId {
        self.vars.push(Variable {
            name: name.into(),
            lb,
            ub,
            kind,
        });
        self.objective.push(0.0);
        VarId(self.vars.len() - 1)
    }

    pub fn add_continuous(&mut self, name: impl Into<String>, lb: f64, ub: f64) -> VarId {
        self.add_var(name, lb, ub, Integrality::Continuous)
    }

    pub fn add_binary(&mut self, name: impl Into<String>) -> VarId {
        self.add_var(name, 0.0, 1.0, Integrality::Binary)
    }

    pub fn set_objective(&mut self, var: VarId, coeff: f64) {
        self.objective[var.0] = coeff;
    }

    pub fn add_objective(&mut self, var: VarId, coeff: f64) {
        self.objective[var.0] += coeff;
    }

    pub fn set_bounds(&mut self, var: VarId, lb: f64, ub: f64) {
        let v = &mut self.vars[var.0];
        v.lb = lb;
        v.ub = ub;
    }

    /// Adds a row; repeated variables in `coeffs` are merged.
    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        coeffs: impl IntoIterator<Item = (VarId, f64)>,
        relation: Relation,
        rhs: f64,
    ) -> usize {
        let mut merged: Vec<(VarId, f64)> = Vec::new();
        for (v, a) in coeffs {
            match merged.iter_mut().find(|(w, _)| *w == v) {
                Some((_, b)) => *b += a,
                None => merged.push((v, a)),
            }
        }
        self.constraints.push(Constraint {
            name: name.into(),
            coeffs: merged,
            relation,
            rhs,
        });
        self.constraints.len() - 1
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn var(&self, id: VarId) -> &Variable {
        &self.vars[id.0]
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn num_binaries(&self) -> usize {
        self.vars.iter().filter(|v| v.kind == Integrality::Binary).count()
    }

    pub fn binaries(&self) -> impl Iterator<Item = VarId> + '_ {
        self.vars
            .iter()
            .enumerate()
            .filter(|(_, v)| v.kind == Integrality::Binary)
            .map(|(i, _)| VarId(i))
    }

    pub fn objective_value(&self, values: &[f64]) -> f64 {
        self.objective.iter().zip(values).map(|(c, x)| c * x).sum()
    }

    /// Copy with every binary relaxed to a continuous variable on its bounds.
    pub fn relaxed(&self) -> MilpModel {
        let mut m = self.clone();
        for v in &mut m.vars {
            v.kind = Integrality::Continuous;
        }
        m
    }

    pub fn validate(&self) -> Result<()> {
        for (i, v) in self.vars.iter().enumerate() {
            if v.lb.is_nan() || v.ub.is_nan() || v.lb > v.ub {
                return Err(Error::Model(format!(
                    "variable {} ({}) has bounds [{}, {}]",
                    i, v.name, v.lb, v.ub
                )));
            }
            if v.lb == f64::INFINITY || v.ub == f64::NEG_INFINITY {
                return Err(Error::Model(format!("variable {} has an empty domain", v.name)));
            }
            if v.kind == Integrality::Binary && (v.lb < 0.0 || v.ub > 1.0) {
                return Err(Error::Model(format!(
                    "binary variable {} has bounds outside [0,1]",
                    v.name
                )));
            }
            if !self.objective[i].is_finite() {
                return Err(Error::Model(format!(
                    "objective coefficient of {} is not finite",
                    v.name
                )));
            }
        }
        for (r, c) in self.constraints.iter().enumerate() {
            if !c.rhs.is_finite() {
                return Err(Error::Model(format!("row {} ({}) has a non-finite rhs", r, c.name)));
            }
            for &(v, a) in &c.coeffs {
                if v.0 >= self.vars.len() {
                    return Err(Error::Model(format!(
                        "row {} references unknown variable {}",
                        c.name, v.0
                    )));
                }
                if !a.is_finite() {
                    return Err(Error::Model(format!("row {} has a non-finite coefficient", c.name)));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_terms_are_merged() {
        let mut m = MilpModel::new();
        let x = m.add_continuous("x", 0.0, 1.0);
        m.add_constraint("r", [(x, 1.0), (x, 2.0)], Relation::Le, 1.0);
        assert_eq!(m.constraints()[0].coeffs, vec![(x, 3.0)]);
    }

    #[test]
    fn validation_catches_bad_models() {
        let mut m = MilpModel::new();
        let x = m.add_continuous("x", 2.0, 1.0);
        assert!(m.validate().is_err());
        m.set_bounds(x, 0.0, 1.0);
        assert!(m.validate().is_ok());
        let b = m.add_binary("b");
        m.set_bounds(b, 0.0, 2.0);
        assert!(m.validate().is_err());
        m.set_bounds(b, 0.0, 1.0);
        m.add_constraint("r", [(x, f64::NAN)], Relation::Le, 1.0);
        assert!(m.validate().is_err());
    }
}
