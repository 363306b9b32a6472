//! Forward inference: vanilla, contrastive (incremental) and partial.

use std::collections::{BTreeMap, BTreeSet};

use crate::assignment::Assignment;
use crate::error::{Result, SfmError};
use crate::model::{require_satisfies, Sfm};
use crate::value::{NodeId, Value};

/// A complete world plus how many times each endo-node's function ran.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InferResult {
    pub world: Assignment,
    /// One entry per endo-node; each count is 0 or 1.
    pub evals: BTreeMap<NodeId, u32>,
}

impl InferResult {
    pub fn total_evals(&self) -> u32 {
        self.evals.values().sum()
    }

    pub fn evaluated(&self, node: &str) -> u32 {
        self.evals.get(node).copied().unwrap_or(0)
    }
}

/// Values restricted to the requested targets, with evaluation counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialResult {
    pub values: Assignment,
    pub evals: BTreeMap<NodeId, u32>,
}

impl PartialResult {
    pub fn total_evals(&self) -> u32 {
        self.evals.values().sum()
    }
}

fn zero_counts(model: &Sfm) -> BTreeMap<NodeId, u32> {
    model.endo_nodes().iter().map(|n| (n.clone(), 0)).collect()
}

/// `exo` must bind exactly the exo-nodes, with in-domain values.
fn check_exo(model: &Sfm, exo: &Assignment) -> Result<()> {
    check_exo_subset(model, exo)?;
    let missing: Vec<NodeId> = model
        .exo_nodes()
        .iter()
        .filter(|n| !exo.contains(n))
        .cloned()
        .collect();
    if !missing.is_empty() {
        return Err(SfmError::IncompleteWorld { missing });
    }
    Ok(())
}

fn check_exo_subset(model: &Sfm, exo: &Assignment) -> Result<()> {
    model.check_fragment(exo)?;
    if let Some(n) = exo.nodes().find(|n| model.is_endo(n)) {
        return Err(SfmError::UnexpectedBinding {
            node: n.clone(),
            reason: "not an exo-node",
        });
    }
    Ok(())
}

fn apply_at(model: &Sfm, node: &NodeId, world: &Assignment) -> Result<Value> {
    let func = model.function(node).expect("endo-node has a function");
    let args: Vec<Value> = func
        .parents
        .iter()
        .map(|p| world.get(p).expect("parents precede children").clone())
        .collect();
    func.apply(&args).map_err(|source| SfmError::Apply {
        node: node.clone(),
        source,
    })
}

/// Evaluates every endo-node once, in topological order.
pub fn vfi(model: &Sfm, exo: &Assignment) -> Result<InferResult> {
    check_exo(model, exo)?;
    let mut world = exo.clone();
    let mut evals = zero_counts(model);
    for u in model.endo_nodes() {
        let val = apply_at(model, u, &world)?;
        world.insert(u.clone(), val);
        *evals.get_mut(u).expect("endo") += 1;
    }
    Ok(InferResult { world, evals })
}

/// Contrastive forward inference.
///
/// Starts from a reference world satisfying the model and re-evaluates a
/// node's function only when one of its parents changed value; a node whose
/// recomputed value equals the reference does not propagate further.
/// Exo-nodes outside `new_exo` keep their reference values.
pub fn cfi(model: &Sfm, reference: &Assignment, new_exo: &Assignment) -> Result<InferResult> {
    require_satisfies(model, reference)?;
    check_exo_subset(model, new_exo)?;

    let mut changed: BTreeSet<&NodeId> = new_exo
        .iter()
        .filter(|(n, v)| reference.get(n) != Some(*v))
        .map(|(n, _)| n)
        .collect();
    let mut world = Assignment::new();
    let mut evals = zero_counts(model);
    for u in model.topological_order() {
        let dirty = changed.contains(u) || model.parents(u).iter().any(|p| changed.contains(p));
        let old = reference.get(u).expect("reference is complete");
        if !dirty {
            world.insert(u.clone(), old.clone());
        } else if model.is_exo(u) {
            world.insert(
                u.clone(),
                new_exo
                    .get(u)
                    .expect("only tweaked exo-nodes are dirty")
                    .clone(),
            );
        } else {
            let val = apply_at(model, u, &world)?;
            *evals.get_mut(u).expect("endo") += 1;
            if val != *old {
                changed.insert(u);
            }
            world.insert(u.clone(), val);
        }
    }
    Ok(InferResult { world, evals })
}

/// Computes only the targets, evaluating just their endo ancestors.
pub fn partial_fi(
    model: &Sfm,
    exo: &Assignment,
    targets: &BTreeSet<NodeId>,
) -> Result<PartialResult> {
    for t in targets {
        model.require_node(t)?;
    }
    check_exo(model, exo)?;
    let needed = model.ancestors(targets);
    let mut world = exo.clone();
    let mut evals = zero_counts(model);
    for u in model.endo_nodes().iter().filter(|u| needed.contains(*u)) {
        let val = apply_at(model, u, &world)?;
        world.insert(u.clone(), val);
        *evals.get_mut(u).expect("endo") += 1;
    }
    Ok(PartialResult {
        values: world.restrict(targets),
        evals,
    })
}
