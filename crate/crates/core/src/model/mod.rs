//! The model `(V, E, D, F)`, its validation, and operations over teams.

mod algebra;
mod graph;
mod intersection;
mod team;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use algebra::{compose, decompose, extract_sub_sfm, is_sub_sfm};
pub use graph::{gmt_witness, topological_order, Witness};
pub use intersection::{construct_intersection, intersection_team, FDet};
pub(crate) use team::require_satisfies;
pub use team::{enumerate_team, fd_holds, fd_value_holds, is_permitted, satisfies};

use crate::enumerate::product;
use crate::error::{Result, SfmError};
use crate::function::{render_tuple, FunctionBody, StructuralFunction};
use crate::value::{Domain, NodeId, Value};

/// Cap on the number of assignments an enumerating operation may visit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget(pub u64);

impl Budget {
    pub const DEFAULT: Budget = Budget(1_000_000);

    pub fn check(self, required: u128) -> Result<()> {
        if required > self.0 as u128 {
            Err(SfmError::BudgetExceeded {
                required,
                budget: self.0,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::DEFAULT
    }
}

/// Size of the Cartesian product of the given domains; `None` if any is real.
pub(crate) fn product_size<'a, I>(domains: I) -> std::result::Result<u128, NodeId>
where
    I: IntoIterator<Item = (&'a NodeId, &'a Domain)>,
{
    let mut total: u128 = 1;
    for (n, d) in domains {
        match d.size() {
            Some(s) => total = total.saturating_mul(s as u128),
            None => return Err(n.clone()),
        }
    }
    Ok(total)
}

/// Raw `(V, E, D, F)` as declared. May be invalid; see [`validate`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SfmParts {
    pub nodes: BTreeSet<NodeId>,
    pub edges: BTreeSet<(NodeId, NodeId)>,
    pub domains: BTreeMap<NodeId, Domain>,
    pub functions: BTreeMap<NodeId, StructuralFunction>,
}

impl SfmParts {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a root node.
    pub fn exo(mut self, name: impl Into<NodeId>, domain: Domain) -> Self {
        let n = name.into();
        self.nodes.insert(n.clone());
        self.domains.insert(n, domain);
        self
    }

    /// Adds a node computed by `function`, with one edge per declared parent.
    pub fn endo(
        mut self,
        name: impl Into<NodeId>,
        domain: Domain,
        function: StructuralFunction,
    ) -> Self {
        let n = name.into();
        for p in &function.parents {
            self.edges.insert((p.clone(), n.clone()));
        }
        self.nodes.insert(n.clone());
        self.domains.insert(n.clone(), domain);
        self.functions.insert(n, function);
        self
    }

    /// Validates and freezes the model.
    pub fn build(self) -> Result<Sfm> {
        Sfm::new(self)
    }

    fn in_edges(&self) -> BTreeMap<&NodeId, BTreeSet<&NodeId>> {
        let mut m: BTreeMap<&NodeId, BTreeSet<&NodeId>> = BTreeMap::new();
        for (a, b) in &self.edges {
            m.entry(b).or_default().insert(a);
        }
        m
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    EdgeUnknownNode {
        from: NodeId,
        to: NodeId,
    },
    Cycle(Vec<NodeId>),
    MissingDomain(NodeId),
    DomainUnknownNode(NodeId),
    EmptyDomain(NodeId),
    DuplicateDomainValue {
        node: NodeId,
        value: Value,
    },
    FunctionUnknownNode(NodeId),
    FunctionOnExo(NodeId),
    MissingFunction(NodeId),
    ParentMismatch {
        node: NodeId,
        declared: Vec<NodeId>,
        edges: Vec<NodeId>,
    },
    TableArity {
        node: NodeId,
        row: Vec<Value>,
    },
    TableOverRealParent {
        node: NodeId,
        parent: NodeId,
    },
    RowOutOfDomain {
        node: NodeId,
        row: Vec<Value>,
    },
    TableNotLeftTotal {
        node: NodeId,
        missing: Vec<Value>,
    },
    OutputOutsideDomain {
        node: NodeId,
        args: Vec<Value>,
        value: Value,
    },
    UndeclaredReference {
        node: NodeId,
        reference: NodeId,
    },
    ExprError {
        node: NodeId,
        args: Vec<Value>,
        message: String,
    },
}

fn names(ns: &[NodeId]) -> String {
    ns.iter().map(NodeId::as_str).collect::<Vec<_>>().join(",")
}

impl Violation {
    /// The node the violation is reported against.
    pub fn node(&self) -> &NodeId {
        match self {
            Violation::EdgeUnknownNode { to, .. } => to,
            Violation::Cycle(p) => &p[0],
            Violation::MissingDomain(n)
            | Violation::DomainUnknownNode(n)
            | Violation::EmptyDomain(n)
            | Violation::FunctionUnknownNode(n)
            | Violation::FunctionOnExo(n)
            | Violation::MissingFunction(n) => n,
            Violation::DuplicateDomainValue { node, .. }
            | Violation::ParentMismatch { node, .. }
            | Violation::TableArity { node, .. }
            | Violation::TableOverRealParent { node, .. }
            | Violation::RowOutOfDomain { node, .. }
            | Violation::TableNotLeftTotal { node, .. }
            | Violation::OutputOutsideDomain { node, .. }
            | Violation::UndeclaredReference { node, .. }
            | Violation::ExprError { node, .. } => node,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EdgeUnknownNode { from, to } => {
                write!(f, "edge ({from},{to}) uses an undeclared node")
            }
            Violation::Cycle(p) => write!(f, "cycle: {}", names(p)),
            Violation::MissingDomain(n) => write!(f, "no domain for {n}"),
            Violation::DomainUnknownNode(n) => write!(f, "domain given for undeclared node {n}"),
            Violation::EmptyDomain(n) => write!(f, "empty domain at {n}"),
            Violation::DuplicateDomainValue { node, value } => {
                write!(f, "duplicate value {value} in domain of {node}")
            }
            Violation::FunctionUnknownNode(n) => {
                write!(f, "function given for undeclared node {n}")
            }
            Violation::FunctionOnExo(n) => write!(f, "exo-node {n} has a structural function"),
            Violation::MissingFunction(n) => write!(f, "endo-node {n} has no structural function"),
            Violation::ParentMismatch {
                node,
                declared,
                edges,
            } => write!(
                f,
                "parents of {node} declared as ({}) but edges give ({})",
                names(declared),
                names(edges)
            ),
            Violation::TableArity { node, row } => {
                write!(
                    f,
                    "table row ({}) at {node} has the wrong arity",
                    render_tuple(row)
                )
            }
            Violation::TableOverRealParent { node, parent } => {
                write!(f, "table at {node} ranges over real-line parent {parent}")
            }
            Violation::RowOutOfDomain { node, row } => {
                write!(
                    f,
                    "table row ({}) at {node} lies outside the parent domains",
                    render_tuple(row)
                )
            }
            Violation::TableNotLeftTotal { node, missing } => {
                write!(
                    f,
                    "table not left-total at {node} (missing row ({}))",
                    render_tuple(missing)
                )
            }
            Violation::OutputOutsideDomain { node, args, value } => write!(
                f,
                "F[{node}]({}) = {value} lies outside the domain of {node}",
                render_tuple(args)
            ),
            Violation::UndeclaredReference { node, reference } => {
                write!(
                    f,
                    "F[{node}] references {reference}, which is not a declared parent"
                )
            }
            Violation::ExprError {
                node,
                args,
                message,
            } => {
                write!(f, "F[{node}]({}) fails: {message}", render_tuple(args))
            }
        }
    }
}

/// Every violated model invariant; empty means valid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Topological order, present when the graph is acyclic.
    pub order: Option<Vec<NodeId>>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("valid");
        }
        let parts: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join("; "))
    }
}

/// Checks every model invariant. Expression functions over finite parents
/// are evaluated on the whole parent product when it fits in `budget`.
pub fn validate_with(parts: &SfmParts, budget: Budget) -> ValidationReport {
    let mut v = Vec::new();

    for (a, b) in &parts.edges {
        if !parts.nodes.contains(a) || !parts.nodes.contains(b) {
            v.push(Violation::EdgeUnknownNode {
                from: a.clone(),
                to: b.clone(),
            });
        }
    }
    for n in &parts.nodes {
        match parts.domains.get(n) {
            None => v.push(Violation::MissingDomain(n.clone())),
            Some(Domain::Finite(vals)) => {
                if vals.is_empty() {
                    v.push(Violation::EmptyDomain(n.clone()));
                }
                let mut seen = BTreeSet::new();
                for val in vals {
                    if !seen.insert(val) {
                        v.push(Violation::DuplicateDomainValue {
                            node: n.clone(),
                            value: val.clone(),
                        });
                    }
                }
            }
            Some(Domain::Real) => {}
        }
    }
    for n in parts.domains.keys() {
        if !parts.nodes.contains(n) {
            v.push(Violation::DomainUnknownNode(n.clone()));
        }
    }

    let in_edges = parts.in_edges();
    for n in &parts.nodes {
        let is_endo = in_edges.contains_key(n);
        match (is_endo, parts.functions.get(n)) {
            (false, Some(_)) => v.push(Violation::FunctionOnExo(n.clone())),
            (true, None) => v.push(Violation::MissingFunction(n.clone())),
            (true, Some(func)) => {
                let edges: Vec<NodeId> = in_edges[n].iter().map(|p| (*p).clone()).collect();
                if func.parent_set() != edges {
                    v.push(Violation::ParentMismatch {
                        node: n.clone(),
                        declared: func.parents.clone(),
                        edges,
                    });
                } else {
                    check_function(parts, n, func, budget, &mut v);
                }
            }
            (false, None) => {}
        }
    }
    for n in parts.functions.keys() {
        if !parts.nodes.contains(n) {
            v.push(Violation::FunctionUnknownNode(n.clone()));
        }
    }

    let order = match topological_order(&parts.nodes, &parts.edges) {
        Ok(order) => Some(order),
        Err(SfmError::Cycle(path)) => {
            v.push(Violation::Cycle(path));
            None
        }
        Err(_) => None,
    };
    ValidationReport {
        violations: v,
        order,
    }
}

pub fn validate(parts: &SfmParts) -> ValidationReport {
    validate_with(parts, Budget::DEFAULT)
}

fn check_function(
    parts: &SfmParts,
    node: &NodeId,
    func: &StructuralFunction,
    budget: Budget,
    v: &mut Vec<Violation>,
) {
    let Some(child_domain) = parts.domains.get(node) else {
        return;
    };
    let parent_domains: Option<Vec<&Domain>> =
        func.parents.iter().map(|p| parts.domains.get(p)).collect();
    let Some(parent_domains) = parent_domains else {
        return;
    };
    match &func.body {
        FunctionBody::Table(rows) => {
            if let Some((p, _)) = func
                .parents
                .iter()
                .zip(&parent_domains)
                .find(|(_, d)| !d.is_finite())
            {
                v.push(Violation::TableOverRealParent {
                    node: node.clone(),
                    parent: p.clone(),
                });
                return;
            }
            for (row, out) in rows {
                if row.len() != func.parents.len() {
                    v.push(Violation::TableArity {
                        node: node.clone(),
                        row: row.clone(),
                    });
                    continue;
                }
                if row
                    .iter()
                    .zip(&parent_domains)
                    .any(|(val, d)| !d.contains(val))
                {
                    v.push(Violation::RowOutOfDomain {
                        node: node.clone(),
                        row: row.clone(),
                    });
                }
                if !child_domain.contains(out) {
                    v.push(Violation::OutputOutsideDomain {
                        node: node.clone(),
                        args: row.clone(),
                        value: out.clone(),
                    });
                }
            }
            let slices: Vec<&[Value]> = parent_domains.iter().filter_map(|d| d.values()).collect();
            for tuple in product(&slices) {
                if !rows.contains_key(&tuple) {
                    v.push(Violation::TableNotLeftTotal {
                        node: node.clone(),
                        missing: tuple,
                    });
                    break;
                }
            }
        }
        FunctionBody::Expr(e) => {
            let mut bad_ref = false;
            for r in e.refs() {
                if !func.parents.contains(&r) {
                    v.push(Violation::UndeclaredReference {
                        node: node.clone(),
                        reference: r,
                    });
                    bad_ref = true;
                }
            }
            if bad_ref {
                return;
            }
            let sized = product_size(func.parents.iter().zip(parent_domains.iter().copied()));
            let Ok(size) = sized else {
                return;
            };
            if budget.check(size).is_err() {
                return;
            }
            let slices: Vec<&[Value]> = parent_domains.iter().filter_map(|d| d.values()).collect();
            for tuple in product(&slices) {
                match func.apply(&tuple) {
                    Ok(out) if child_domain.contains(&out) => {}
                    Ok(out) => {
                        v.push(Violation::OutputOutsideDomain {
                            node: node.clone(),
                            args: tuple,
                            value: out,
                        });
                        return;
                    }
                    Err(err) => {
                        v.push(Violation::ExprError {
                            node: node.clone(),
                            args: tuple,
                            message: err.to_string(),
                        });
                        return;
                    }
                }
            }
        }
    }
}

/// A validated, immutable model with cached graph structure.
#[derive(Clone, Debug)]
pub struct Sfm {
    parts: SfmParts,
    order: Vec<NodeId>,
    position: BTreeMap<NodeId, usize>,
    children: BTreeMap<NodeId, Vec<NodeId>>,
    exo: Vec<NodeId>,
    endo: Vec<NodeId>,
}

impl PartialEq for Sfm {
    fn eq(&self, other: &Self) -> bool {
        self.parts == other.parts
    }
}

impl Eq for Sfm {}

impl Sfm {
    pub fn new(parts: SfmParts) -> Result<Sfm> {
        let report = validate(&parts);
        if !report.is_valid() {
            return Err(SfmError::InvalidModel(report));
        }
        let order = report.order.expect("valid model has an order");
        let position = order
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        let mut children: BTreeMap<NodeId, Vec<NodeId>> = parts
            .nodes
            .iter()
            .map(|n| (n.clone(), Vec::new()))
            .collect();
        for (a, b) in &parts.edges {
            children
                .get_mut(a)
                .expect("edge endpoints are nodes")
                .push(b.clone());
        }
        let (endo, exo): (Vec<NodeId>, Vec<NodeId>) = order
            .iter()
            .cloned()
            .partition(|n| parts.functions.contains_key(n));
        Ok(Sfm {
            parts,
            order,
            position,
            children,
            exo,
            endo,
        })
    }

    pub fn parts(&self) -> &SfmParts {
        &self.parts
    }

    pub fn into_parts(self) -> SfmParts {
        self.parts
    }

    pub fn nodes(&self) -> &BTreeSet<NodeId> {
        &self.parts.nodes
    }

    pub fn edges(&self) -> &BTreeSet<(NodeId, NodeId)> {
        &self.parts.edges
    }

    pub fn contains(&self, node: &str) -> bool {
        self.parts.nodes.contains(node)
    }

    pub fn domain(&self, node: &str) -> Option<&Domain> {
        self.parts.domains.get(node)
    }

    pub fn function(&self, node: &str) -> Option<&StructuralFunction> {
        self.parts.functions.get(node)
    }

    /// Parents in function-argument order; empty for exo-nodes.
    pub fn parents(&self, node: &str) -> &[NodeId] {
        self.parts.functions.get(node).map_or(&[], |f| &f.parents)
    }

    pub fn children(&self, node: &str) -> &[NodeId] {
        self.children.get(node).map_or(&[], Vec::as_slice)
    }

    pub fn is_exo(&self, node: &str) -> bool {
        self.contains(node) && !self.parts.functions.contains_key(node)
    }

    pub fn is_endo(&self, node: &str) -> bool {
        self.parts.functions.contains_key(node)
    }

    /// Exo-nodes in topological order.
    pub fn exo_nodes(&self) -> &[NodeId] {
        &self.exo
    }

    /// Endo-nodes in topological order.
    pub fn endo_nodes(&self) -> &[NodeId] {
        &self.endo
    }

    pub fn topological_order(&self) -> &[NodeId] {
        &self.order
    }

    pub fn position(&self, node: &str) -> Option<usize> {
        self.position.get(node).copied()
    }

    pub fn all_finite(&self) -> std::result::Result<(), NodeId> {
        match self.parts.domains.iter().find(|(_, d)| !d.is_finite()) {
            Some((n, _)) => Err(n.clone()),
            None => Ok(()),
        }
    }

    /// `nodes` plus everything reachable from them.
    pub fn descendants<'a, I>(&self, nodes: I) -> BTreeSet<NodeId>
    where
        I: IntoIterator<Item = &'a NodeId>,
    {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<NodeId> = nodes.into_iter().cloned().collect();
        while let Some(n) = stack.pop() {
            if seen.insert(n.clone()) {
                stack.extend(self.children(&n).iter().cloned());
            }
        }
        seen
    }

    /// `nodes` plus everything they are reachable from.
    pub fn ancestors<'a, I>(&self, nodes: I) -> BTreeSet<NodeId>
    where
        I: IntoIterator<Item = &'a NodeId>,
    {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<NodeId> = nodes.into_iter().cloned().collect();
        while let Some(n) = stack.pop() {
            if seen.insert(n.clone()) {
                stack.extend(self.parents(&n).iter().cloned());
            }
        }
        seen
    }

    pub(crate) fn require_node(&self, node: &NodeId) -> Result<()> {
        if self.contains(node) {
            Ok(())
        } else {
            Err(SfmError::UnknownNode(node.clone()))
        }
    }

    /// Checks every binding is a known node with an in-domain value.
    pub fn check_fragment(&self, fragment: &crate::Assignment) -> Result<()> {
        for (n, val) in fragment {
            self.require_node(n)?;
            if !self.parts.domains[n].contains(val) {
                return Err(SfmError::OutOfDomain {
                    node: n.clone(),
                    value: val.clone(),
                });
            }
        }
        Ok(())
    }
}
