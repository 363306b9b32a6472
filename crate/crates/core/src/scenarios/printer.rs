//! Canonical text form. Nodes appear in topological order, included models
//! are printed inline, and `parse(print(doc)) == doc`.

use std::collections::BTreeSet;
use std::fmt::Write;

use super::{Expectation, ScenarioDoc, Section};
use crate::function::{render_tuple, FunctionBody};
use crate::model::Sfm;
use crate::value::{Domain, NodeId};

fn names(model: &Sfm, set: &BTreeSet<NodeId>) -> String {
    let ordered: Vec<&str> = model
        .topological_order()
        .iter()
        .filter(|n| set.contains(*n))
        .map(|n| n.as_str())
        .collect();
    format!("({})", ordered.join(", "))
}

pub fn print_model(model: &Sfm) -> String {
    let mut out = String::from("model {\n");
    for n in model.topological_order() {
        let domain = match model.domain(n).expect("every node has a domain") {
            Domain::Real => "real".to_string(),
            Domain::Finite(vs) => format!("{{{}}}", render_tuple(vs)),
        };
        let Some(f) = model.function(n) else {
            writeln!(out, "  node {n} exo domain {domain}").unwrap();
            continue;
        };
        let parents: Vec<&str> = f.parents.iter().map(NodeId::as_str).collect();
        write!(
            out,
            "  node {n} endo parents ({}) domain {domain} ",
            parents.join(", ")
        )
        .unwrap();
        match &f.body {
            FunctionBody::Expr(e) => writeln!(out, "expr {e}").unwrap(),
            FunctionBody::Table(rows) => {
                out.push_str("table {\n");
                for (k, v) in rows {
                    writeln!(out, "    ({}) -> {v},", render_tuple(k)).unwrap();
                }
                out.push_str("  }\n");
            }
        }
    }
    out.push_str("}\n");
    out
}

pub fn print_scenario(doc: &ScenarioDoc) -> String {
    let m = &doc.model;
    let order = m.topological_order();
    let mut out = print_model(m);
    match &doc.section {
        Section::Default { default, actual } => {
            writeln!(out, "default {}", default.render_ordered(order)).unwrap();
            writeln!(out, "actual {}", actual.render_ordered(order)).unwrap();
        }
        Section::Tweak { actual, tweak } => {
            writeln!(out, "actual {}", actual.render_ordered(order)).unwrap();
            writeln!(out, "tweak {}", tweak.render_ordered(order)).unwrap();
        }
        Section::Vfi { exo } => writeln!(out, "vfi {}", exo.render_ordered(order)).unwrap(),
        Section::Csp { known, targets } => {
            writeln!(
                out,
                "csp known {} targets {}",
                known.render_ordered(order),
                names(m, targets)
            )
            .unwrap();
        }
        Section::Fd { claims } => {
            for (x, y) in claims {
                writeln!(out, "fd {} -> {}", names(m, x), names(m, y)).unwrap();
            }
        }
    }
    match &doc.expect {
        None => {}
        Some(Expectation::Utterance { cause, effect }) => {
            writeln!(
                out,
                "expect cause {} effect {}",
                cause.render_ordered(order),
                effect.render_ordered(order)
            )
            .unwrap();
        }
        Some(Expectation::Answer(answers)) => {
            let parts: Vec<String> = answers.iter().map(|a| a.render_ordered(order)).collect();
            writeln!(out, "expect answer {}", parts.join(" ")).unwrap();
        }
        Some(Expectation::Holds) => out.push_str("expect holds\n"),
    }
    out
}
