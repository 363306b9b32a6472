//! Workloads shared by the forward-inference benchmarks.

use sfm_core::{fixtures, vfi, Assignment, NodeId, Sfm, Value};

/// A model, a satisfying reference world and one single-node tweak.
pub struct Workload {
    pub name: String,
    pub model: Sfm,
    pub reference: Assignment,
    pub tweak: Assignment,
}

fn flip(node: &NodeId) -> Assignment {
    [(node.clone(), Value::Int(1))].into_iter().collect()
}

fn workload(name: String, model: Sfm, tweaked: impl Fn(&Sfm) -> NodeId) -> Workload {
    let reference = vfi(&model, &fixtures::all_zero(model.exo_nodes()))
        .expect("all-zero exo assignment is in-domain")
        .world;
    let tweak = flip(&tweaked(&model));
    Workload {
        name,
        model,
        reference,
        tweak,
    }
}

/// Make-like chains of `n` sources with the last source edited.
pub fn make_chain(n: usize) -> Workload {
    workload(format!("make_chain/{n}"), fixtures::make_chain(n), |m| {
        m.exo_nodes().last().expect("nonempty").clone()
    })
}

/// Layered circuits with the first input toggled.
pub fn circuit(width: usize, depth: usize) -> Workload {
    workload(
        format!("circuit/{width}x{depth}"),
        fixtures::circuit(width, depth),
        |m| m.exo_nodes()[0].clone(),
    )
}
