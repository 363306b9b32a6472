//! Sub-models, composition and decomposition.

use std::collections::BTreeSet;

use super::{Sfm, SfmParts, Violation};
use crate::error::{Result, SfmError};
use crate::value::NodeId;

/// Keeps `keep_nodes`; nodes in `keep_as_endo` keep their parents and
/// function, every other kept node becomes exogenous.
pub fn extract_sub_sfm(
    model: &Sfm,
    keep_nodes: &BTreeSet<NodeId>,
    keep_as_endo: &BTreeSet<NodeId>,
) -> Result<Sfm> {
    for n in keep_nodes {
        model.require_node(n)?;
    }
    let mut parts = SfmParts::new();
    for n in keep_nodes {
        parts.nodes.insert(n.clone());
        parts
            .domains
            .insert(n.clone(), model.domain(n).expect("node has domain").clone());
    }
    for u in keep_as_endo {
        if !keep_nodes.contains(u) {
            return Err(SfmError::UnexpectedBinding {
                node: u.clone(),
                reason: "kept endogenous but not kept",
            });
        }
        let func = model
            .function(u)
            .ok_or_else(|| SfmError::NotEndo(u.clone()))?;
        for p in &func.parents {
            if !keep_nodes.contains(p) {
                return Err(SfmError::MissingParent {
                    node: u.clone(),
                    parent: p.clone(),
                });
            }
            parts.edges.insert((p.clone(), u.clone()));
        }
        parts.functions.insert(u.clone(), func.clone());
    }
    Sfm::new(parts)
}

/// Checks the four sub-model conditions: subgraph, same parents, same
/// domains and same functions for every endo-node of `sub`.
pub fn is_sub_sfm(sub: &Sfm, model: &Sfm) -> bool {
    let subgraph = sub.nodes().is_subset(model.nodes()) && sub.edges().is_subset(model.edges());
    subgraph
        && sub.nodes().iter().all(|n| sub.domain(n) == model.domain(n))
        && sub.endo_nodes().iter().all(|u| {
            let (Some(fs), Some(fm)) = (sub.function(u), model.function(u)) else {
                return false;
            };
            fs.parent_set() == fm.parent_set() && fs == fm
        })
}

/// Union of models after checking the pairwise prerequisites on shared nodes.
pub fn compose(parts: &[Sfm]) -> Result<Sfm> {
    for (i, a) in parts.iter().enumerate() {
        for (j, b) in parts.iter().enumerate().skip(i + 1) {
            for n in a.nodes().intersection(b.nodes()) {
                let fail = |reason| SfmError::Compose {
                    left: i,
                    right: j,
                    node: n.clone(),
                    reason,
                };
                if a.domain(n) != b.domain(n) {
                    return Err(fail("domains differ"));
                }
                if let (Some(fa), Some(fb)) = (a.function(n), b.function(n)) {
                    if fa.parent_set() != fb.parent_set() {
                        return Err(fail("parent sets differ"));
                    }
                    if fa != fb {
                        return Err(fail("structural functions differ"));
                    }
                }
            }
        }
    }
    let mut union = SfmParts::new();
    for m in parts {
        let p = m.parts();
        union.nodes.extend(p.nodes.iter().cloned());
        union.edges.extend(p.edges.iter().cloned());
        union
            .domains
            .extend(p.domains.iter().map(|(k, v)| (k.clone(), v.clone())));
        union
            .functions
            .extend(p.functions.iter().map(|(k, v)| (k.clone(), v.clone())));
    }
    Sfm::new(union).map_err(|e| match e {
        SfmError::InvalidModel(report) => match report.violations.iter().find_map(|v| match v {
            Violation::Cycle(path) => Some(path.clone()),
            _ => None,
        }) {
            Some(path) => SfmError::Cycle(path),
            None => SfmError::InvalidModel(report),
        },
        other => other,
    })
}

/// One fragment per endo-node (with its parents), in topological order,
/// followed by one single-node fragment per exo-node that has no children.
/// A model without endo-nodes is its own single fragment.
pub fn decompose(model: &Sfm) -> Vec<Sfm> {
    if model.endo_nodes().is_empty() {
        return vec![model.clone()];
    }
    let mut out = Vec::new();
    for u in model.endo_nodes() {
        let mut keep: BTreeSet<NodeId> = model.parents(u).iter().cloned().collect();
        keep.insert(u.clone());
        let endo = BTreeSet::from([u.clone()]);
        out.push(extract_sub_sfm(model, &keep, &endo).expect("parents are kept"));
    }
    for x in model.exo_nodes() {
        if model.children(x).is_empty() {
            let keep = BTreeSet::from([x.clone()]);
            out.push(extract_sub_sfm(model, &keep, &BTreeSet::new()).expect("single node"));
        }
    }
    out
}
