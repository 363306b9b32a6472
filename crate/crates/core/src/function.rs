//! Structural functions: the mechanism computing an endo-node from its parents.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::expr::{EvalError, Expr};
use crate::value::{NodeId, Value};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunctionBody {
    /// Rows keyed by parent values in `parents` order.
    Table(BTreeMap<Vec<Value>, Value>),
    Expr(Expr),
}

/// `F[u]`, with its parent list in a fixed order (tuple order for tables).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuralFunction {
    pub parents: Vec<NodeId>,
    pub body: FunctionBody,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ApplyError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("no table row for ({})", render_tuple(.0))]
    MissingRow(Vec<Value>),
}

pub(crate) fn render_tuple(vals: &[Value]) -> String {
    vals.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

impl StructuralFunction {
    pub fn expr<I, N>(parents: I, expr: Expr) -> Self
    where
        I: IntoIterator<Item = N>,
        N: Into<NodeId>,
    {
        StructuralFunction {
            parents: parents.into_iter().map(Into::into).collect(),
            body: FunctionBody::Expr(expr),
        }
    }

    pub fn table<I, N, R>(parents: I, rows: R) -> Self
    where
        I: IntoIterator<Item = N>,
        N: Into<NodeId>,
        R: IntoIterator<Item = (Vec<Value>, Value)>,
    {
        StructuralFunction {
            parents: parents.into_iter().map(Into::into).collect(),
            body: FunctionBody::Table(rows.into_iter().collect()),
        }
    }

    /// The identity on a single parent.
    pub fn copy_of(parent: impl Into<NodeId>) -> Self {
        let p = parent.into();
        StructuralFunction::expr([p.clone()], Expr::Ref(p))
    }

    /// Applies the function to parent values given in `parents` order.
    pub fn apply(&self, args: &[Value]) -> Result<Value, ApplyError> {
        debug_assert_eq!(args.len(), self.parents.len());
        match &self.body {
            FunctionBody::Table(rows) => rows
                .get(args)
                .cloned()
                .ok_or_else(|| ApplyError::MissingRow(args.to_vec())),
            FunctionBody::Expr(e) => {
                let lookup =
                    |n: &NodeId| self.parents.iter().position(|p| p == n).map(|i| &args[i]);
                Ok(e.eval(&lookup)?)
            }
        }
    }

    /// Parents sorted by name; comparison key for parent-set equality.
    pub fn parent_set(&self) -> Vec<NodeId> {
        let mut ps = self.parents.clone();
        ps.sort();
        ps
    }
}
