//! Plain-text listing in the CPLEX LP layout, for cross-checking a model
//! with an external solver.

use std::fmt::Write;

use super::model::{Integrality, MilpModel, Relation};

pub fn to_lp_string(model: &MilpModel) -> String {
    let names: Vec<String> = model
        .vars()
        .iter()
        .enumerate()
        .map(|(j, v)| lp_name(&v.name, j))
        .collect();
    let mut out = String::new();
    out.push_str("\\ outage-mpc model dump\nMinimize\n obj:");
    let mut any = false;
    for (j, &c) in model.objective().iter().enumerate() {
        if c != 0.0 {
            write_term(&mut out, c, &names[j]);
            any = true;
        }
    }
    if !any {
        out.push_str(" 0 ");
        out.push_str(names.first().map_or("x0", |s| s.as_str()));
    }
    out.push_str("\nSubject To\n");
    for (r, c) in model.constraints().iter().enumerate() {
        let _ = write!(out, " {}:", lp_name(&c.name, r).replace('x', "r"));
        if c.coeffs.is_empty() {
            let _ = write!(out, " 0 {}", names.first().map_or("x0", |s| s.as_str()));
        }
        for &(v, a) in &c.coeffs {
            write_term(&mut out, a, &names[v.0]);
        }
        let rel = match c.relation {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        };
        let _ = writeln!(out, " {rel} {}", fmt_num(c.rhs));
    }
    out.push_str("Bounds\n");
    for (v, name) in model.vars().iter().zip(&names) {
        match (v.lb.is_finite(), v.ub.is_finite()) {
            (false, false) => {
                let _ = writeln!(out, " {name} free");
            }
            (true, true) if v.lb == v.ub => {
                let _ = writeln!(out, " {name} = {}", fmt_num(v.lb));
            }
            (true, true) => {
                let _ = writeln!(out, " {} <= {name} <= {}", fmt_num(v.lb), fmt_num(v.ub));
            }
            (true, false) => {
                let _ = writeln!(out, " {name} >= {}", fmt_num(v.lb));
            }
            (false, true) => {
                let _ = writeln!(out, " -inf <= {name} <= {}", fmt_num(v.ub));
            }
        }
    }
    let bins: Vec<&str> = model
        .vars()
        .iter()
        .zip(&names)
        .filter(|(v, _)| v.kind == Integrality::Binary)
        .map(|(_, n)| n.as_str())
        .collect();
    if !bins.is_empty() {
        out.push_str("Binaries\n");
        for chunk in bins.chunks(8) {
            let _ = writeln!(out, " {}", chunk.join(" "));
        }
    }
    out.push_str("End\n");
    out
}

fn lp_name(name: &str, idx: usize) -> String {
    let clean: String = name
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || "_.()[]".contains(c) {
                c
            } else {
                '_'
            }
        })
        .collect();
    if clean.is_empty() || clean.starts_with(|c: char| c.is_ascii_digit() || c == '.') {
        format!("x{idx}")
    } else {
        clean
    }
}

fn write_term(out: &mut String, c: f64, name: &str) {
    let sign = if c < 0.0 { '-' } else { '+' };
    let _ = write!(out, " {sign} {} {name}", fmt_num(c.abs()));
}

fn fmt_num(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x}")
    }
}
