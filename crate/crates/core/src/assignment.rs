//! Assignments (worlds and world fragments) and teams of worlds.

use std::collections::btree_map;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::value::{NodeId, Value};

/// A partial or complete map from nodes to values.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment(BTreeMap<NodeId, Value>);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, node: &str) -> Option<&Value> {
        self.0.get(node)
    }

    pub fn insert(&mut self, node: NodeId, value: Value) -> Option<Value> {
        self.0.insert(node, value)
    }

    pub fn remove(&mut self, node: &str) -> Option<Value> {
        self.0.remove(node)
    }

    pub fn contains(&self, node: &str) -> bool {
        self.0.contains_key(node)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> btree_map::Iter<'_, NodeId, Value> {
        self.0.iter()
    }

    pub fn nodes(&self) -> impl Iterator<Item = &NodeId> {
        self.0.keys()
    }

    pub fn key_set(&self) -> BTreeSet<NodeId> {
        self.0.keys().cloned().collect()
    }

    /// The fragment over `nodes`; nodes not bound here are skipped.
    pub fn restrict<'a, I>(&self, nodes: I) -> Assignment
    where
        I: IntoIterator<Item = &'a NodeId>,
    {
        nodes
            .into_iter()
            .filter_map(|n| self.0.get(n).map(|v| (n.clone(), v.clone())))
            .collect()
    }

    /// True if every binding of `fragment` also appears here.
    pub fn extends(&self, fragment: &Assignment) -> bool {
        fragment.iter().all(|(n, v)| self.0.get(n) == Some(v))
    }

    /// Later bindings win.
    pub fn merged(&self, over: &Assignment) -> Assignment {
        let mut out = self.clone();
        for (n, v) in over.iter() {
            out.insert(n.clone(), v.clone());
        }
        out
    }

    /// Nodes whose values differ; both sides must bind the same keys.
    pub fn changed_nodes(&self, other: &Assignment) -> BTreeSet<NodeId> {
        self.0
            .iter()
            .filter(|(n, v)| other.get(n) != Some(v))
            .map(|(n, _)| n.clone())
            .collect()
    }

    /// `{A:1, B:0}` with keys in the given order (nodes not bound here are skipped).
    pub fn render_ordered(&self, order: &[NodeId]) -> String {
        let body: Vec<String> = order
            .iter()
            .filter_map(|n| self.0.get(n).map(|v| format!("{n}:{v}")))
            .collect();
        format!("{{{}}}", body.join(", "))
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (n, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{n}:{v}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromIterator<(NodeId, Value)> for Assignment {
    fn from_iter<T: IntoIterator<Item = (NodeId, Value)>>(iter: T) -> Self {
        Assignment(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a Assignment {
    type Item = (&'a NodeId, &'a Value);
    type IntoIter = btree_map::Iter<'a, NodeId, Value>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Shorthand for building assignments in code: `assignment([("A", 1), ("B", 0)])`.
pub fn assignment<I, K, V>(pairs: I) -> Assignment
where
    I: IntoIterator<Item = (K, V)>,
    K: Into<NodeId>,
    V: Into<Value>,
{
    pairs
        .into_iter()
        .map(|(k, v)| (k.into(), v.into()))
        .collect()
}

/// A finite set of complete assignments sharing one key set.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct Team {
    members: BTreeSet<Assignment>,
}

impl Team {
    /// Returns `None` if the members do not share a key set.
    pub fn new<I: IntoIterator<Item = Assignment>>(members: I) -> Option<Team> {
        let members: BTreeSet<Assignment> = members.into_iter().collect();
        let mut keys = members.iter().map(Assignment::key_set);
        if let Some(first) = keys.next() {
            if keys.any(|k| k != first) {
                return None;
            }
        }
        Some(Team { members })
    }

    pub(crate) fn from_set(members: BTreeSet<Assignment>) -> Team {
        Team { members }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, world: &Assignment) -> bool {
        self.members.contains(world)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Assignment> {
        self.members.iter()
    }

    pub fn members(&self) -> &BTreeSet<Assignment> {
        &self.members
    }

    /// Shared key set, or `None` for the empty team.
    pub fn key_set(&self) -> Option<BTreeSet<NodeId>> {
        self.members.iter().next().map(Assignment::key_set)
    }

    /// Members that extend `fragment`.
    pub fn extending<'a>(
        &'a self,
        fragment: &'a Assignment,
    ) -> impl Iterator<Item = &'a Assignment> {
        self.members.iter().filter(move |w| w.extends(fragment))
    }
}

impl<'a> IntoIterator for &'a Team {
    type Item = &'a Assignment;
    type IntoIter = std::collections::btree_set::Iter<'a, Assignment>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}
