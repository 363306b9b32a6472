use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Result, SfmError};
use crate::value::NodeId;

/// Kahn's algorithm processed in generations: every node whose parents are
/// all placed forms the next generation, emitted in name order.
///
/// On a cycle the error carries one witness cycle.
pub fn topological_order(
    nodes: &BTreeSet<NodeId>,
    edges: &BTreeSet<(NodeId, NodeId)>,
) -> Result<Vec<NodeId>> {
    let mut indegree: BTreeMap<&NodeId, usize> = nodes.iter().map(|n| (n, 0)).collect();
    let mut children: BTreeMap<&NodeId, Vec<&NodeId>> = BTreeMap::new();
    for (a, b) in edges {
        if let (true, Some(d)) = (nodes.contains(a), indegree.get_mut(b)) {
            *d += 1;
            children.entry(a).or_default().push(b);
        }
    }
    let mut order = Vec::with_capacity(nodes.len());
    let mut layer: Vec<&NodeId> = indegree
        .iter()
        .filter(|(_, d)| **d == 0)
        .map(|(n, _)| *n)
        .collect();
    while !layer.is_empty() {
        let mut next = Vec::new();
        for n in &layer {
            for c in children.get(n).into_iter().flatten() {
                let d = indegree.get_mut(c).expect("child is a node");
                *d -= 1;
                if *d == 0 {
                    next.push(*c);
                }
            }
        }
        order.extend(layer.iter().map(|n| (*n).clone()));
        next.sort();
        layer = next;
    }
    if order.len() == nodes.len() {
        return Ok(order);
    }
    let placed: BTreeSet<&NodeId> = order.iter().collect();
    let rest: BTreeSet<NodeId> = nodes
        .iter()
        .filter(|n| !placed.contains(n))
        .cloned()
        .collect();
    let rest_edges: BTreeSet<(NodeId, NodeId)> = edges
        .iter()
        .filter(|(a, b)| rest.contains(a) && rest.contains(b))
        .cloned()
        .collect();
    match gmt_witness(&rest, &rest_edges) {
        Witness::Cycle(path) => Err(SfmError::Cycle(path)),
        Witness::Root(_) | Witness::Empty => {
            unreachable!("residual of Kahn's algorithm has no roots")
        }
    }
}

/// What a finite directed graph must contain: a root or a cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Root(NodeId),
    /// `path[0] == path[last]`, consecutive pairs are edges.
    Cycle(Vec<NodeId>),
    /// The graph has no nodes.
    Empty,
}

impl Witness {
    /// Structural check of the witness against the graph.
    pub fn verify(&self, nodes: &BTreeSet<NodeId>, edges: &BTreeSet<(NodeId, NodeId)>) -> bool {
        match self {
            Witness::Empty => nodes.is_empty(),
            Witness::Root(r) => nodes.contains(r) && !edges.iter().any(|(_, b)| b == r),
            Witness::Cycle(path) => {
                path.len() >= 2
                    && path.first() == path.last()
                    && path.iter().all(|n| nodes.contains(n))
                    && path
                        .windows(2)
                        .all(|w| edges.contains(&(w[0].clone(), w[1].clone())))
            }
        }
    }
}

/// Returns the first root by name if there is one; otherwise walks parent
/// links from the first node until a node repeats, which closes a cycle.
pub fn gmt_witness(nodes: &BTreeSet<NodeId>, edges: &BTreeSet<(NodeId, NodeId)>) -> Witness {
    let mut parents: BTreeMap<&NodeId, BTreeSet<&NodeId>> = BTreeMap::new();
    for (a, b) in edges {
        if nodes.contains(a) && nodes.contains(b) {
            parents.entry(b).or_default().insert(a);
        }
    }
    let Some(start) = nodes.iter().next() else {
        return Witness::Empty;
    };
    if let Some(root) = nodes.iter().find(|n| !parents.contains_key(n)) {
        return Witness::Root(root.clone());
    }
    // Every node has a parent, so the backward walk never gets stuck.
    let mut walk: Vec<&NodeId> = vec![start];
    let mut seen: BTreeMap<&NodeId, usize> = BTreeMap::from([(start, 0)]);
    loop {
        let cur = *walk.last().expect("walk is nonempty");
        let p = *parents[cur].iter().next().expect("no roots remain");
        if let Some(&i) = seen.get(p) {
            let mut cycle: Vec<NodeId> = walk[i..].iter().map(|n| (*n).clone()).collect();
            cycle.push(p.clone());
            cycle.reverse();
            return Witness::Cycle(cycle);
        }
        seen.insert(p, walk.len());
        walk.push(p);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(ns: &[&str], es: &[(&str, &str)]) -> (BTreeSet<NodeId>, BTreeSet<(NodeId, NodeId)>) {
        (
            ns.iter().map(NodeId::new).collect(),
            es.iter()
                .map(|(a, b)| (NodeId::new(a), NodeId::new(b)))
                .collect(),
        )
    }

    #[test]
    fn layered_lexicographic_order() {
        let (n, e) = graph(
            &["A", "B", "C", "D", "E"],
            &[("A", "B"), ("B", "D"), ("C", "D"), ("C", "E")],
        );
        let order = topological_order(&n, &e).unwrap();
        assert_eq!(order, ["A", "C", "B", "E", "D"].map(NodeId::new).to_vec());
        let (n, e) = graph(&["X"], &[]);
        assert_eq!(topological_order(&n, &e).unwrap(), vec![NodeId::new("X")]);
        let (n, e) = graph(
            &["Assassin", "Bullet", "Death"],
            &[("Assassin", "Bullet"), ("Bullet", "Death")],
        );
        assert_eq!(
            topological_order(&n, &e).unwrap(),
            ["Assassin", "Bullet", "Death"].map(NodeId::new).to_vec()
        );
    }

    #[test]
    fn cycle_witness() {
        let (n, e) = graph(&["A", "B"], &[("A", "B"), ("B", "A")]);
        let w = gmt_witness(&n, &e);
        assert_eq!(w, Witness::Cycle(["A", "B", "A"].map(NodeId::new).to_vec()));
        assert!(w.verify(&n, &e));
        assert_eq!(
            topological_order(&n, &e),
            Err(SfmError::Cycle(["A", "B", "A"].map(NodeId::new).to_vec()))
        );
    }

    #[test]
    fn self_loop_and_tail() {
        // R -> A, A -> A: Kahn places R, the residual {A} holds the loop.
        let (n, e) = graph(&["A", "R"], &[("R", "A"), ("A", "A")]);
        match topological_order(&n, &e) {
            Err(SfmError::Cycle(p)) => assert_eq!(p, ["A", "A"].map(NodeId::new).to_vec()),
            other => panic!("{other:?}"),
        }
        assert_eq!(gmt_witness(&n, &e), Witness::Root(NodeId::new("R")));
    }

    #[test]
    fn single_node_is_root() {
        let (n, e) = graph(&["X"], &[]);
        assert_eq!(gmt_witness(&n, &e), Witness::Root(NodeId::new("X")));
    }
}
