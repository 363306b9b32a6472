use thiserror::Error;

use crate::assignment::Assignment;
use crate::function::ApplyError;
use crate::model::ValidationReport;
use crate::value::{NodeId, Value};

pub type Result<T, E = SfmError> = std::result::Result<T, E>;

fn path(nodes: &[NodeId]) -> String {
    nodes
        .iter()
        .map(NodeId::as_str)
        .collect::<Vec<_>>()
        .join(",")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SfmError {
    #[error("cycle: {}", path(.0))]
    Cycle(Vec<NodeId>),
    #[error("invalid model: {0}")]
    InvalidModel(ValidationReport),
    #[error("unknown node `{0}`")]
    UnknownNode(NodeId),
    #[error("assignment is not complete: missing {}", path(.missing))]
    IncompleteWorld { missing: Vec<NodeId> },
    #[error("`{node}` may not be bound here ({reason})")]
    UnexpectedBinding { node: NodeId, reason: &'static str },
    #[error("value {value} is outside the domain of `{node}`")]
    OutOfDomain { node: NodeId, value: Value },
    #[error("world does not satisfy the model at `{node}`: expected {expected}, found {found}")]
    NotSatisfied {
        node: NodeId,
        expected: Value,
        found: Value,
    },
    #[error("evaluating F[{node}]: {source}")]
    Apply { node: NodeId, source: ApplyError },
    #[error("node `{node}` has a real-line domain and cannot be enumerated")]
    UnsupportedEnumeration { node: NodeId },
    #[error("enumeration needs {required} assignments, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u64 },
    #[error("fragment {0} is not permitted")]
    UnpermittedFragment(Assignment),
    #[error("`{node}` is kept endogenous but its parent `{parent}` is not kept")]
    MissingParent { node: NodeId, parent: NodeId },
    #[error("`{0}` is not an endo-node of the source model")]
    NotEndo(NodeId),
    #[error("cannot compose parts {left} and {right} at `{node}`: {reason}")]
    Compose {
        left: usize,
        right: usize,
        node: NodeId,
        reason: &'static str,
    },
    #[error("functional determination {index} has no sources")]
    ConstantFdet { index: usize },
    #[error("functional determination {index} has `{node}` as both source and target")]
    CyclicFdet { index: usize, node: NodeId },
    #[error("invalid functional determination: {0}")]
    InvalidFdet(String),
    #[error("domains of `{0}` disagree")]
    DomainMismatch(NodeId),
    #[error("tweak binds endo-node `{0}`; extract a sub-model to tweak it")]
    EndoTweak(NodeId),
    #[error("solution limit must be positive")]
    ZeroLimit,
    #[error("random node set is not downward closed: `{descendant}` descends from `{node}`")]
    NotDownwardClosed { node: NodeId, descendant: NodeId },
    #[error("invalid distribution for `{node}`: {reason}")]
    InvalidDistribution { node: NodeId, reason: String },
    #[error("outcome has no coordinate for source `{0}`")]
    MissingCoordinate(String),
    #[error("invalid Bayesian network: {0}")]
    InvalidBayesNet(String),
}
