//! Columnar text format for conditional probability tables.
//!
//! One row per line, whitespace separated: `node parents value prob`.
//! `parents` is `-` for a root or `X=0,Z=b` otherwise (same parent order on
//! every row of a node); `prob` is `p/q` or an integer. `#` starts a
//! comment. Values that parse as integers are integers, anything else is a
//! symbol. A node's domain is the set of values it lists, in order of first
//! appearance; zero-probability rows only contribute to the domain.

use std::collections::BTreeMap;

use num::Zero;

use super::{parse_probability, BayesNet, BnNode, Distribution, Probability};
use crate::error::{Result, SfmError};
use crate::value::{NodeId, Value};

fn parse_value(s: &str) -> Value {
    s.parse::<i64>()
        .map(Value::Int)
        .unwrap_or_else(|_| Value::symbol(s))
}

#[derive(Default)]
struct Pending {
    parents: Vec<NodeId>,
    domain: Vec<Value>,
    rows: BTreeMap<Vec<Value>, Vec<(Value, Probability)>>,
}

pub fn parse_cpt(text: &str) -> Result<BayesNet> {
    let err = |line: usize, msg: String| SfmError::InvalidBayesNet(format!("line {line}: {msg}"));
    let mut order: Vec<NodeId> = Vec::new();
    let mut nodes: BTreeMap<NodeId, Pending> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let cols: Vec<&str> = content.split_whitespace().collect();
        let [node, parents, value, prob] = cols[..] else {
            return Err(err(
                line,
                format!("expected 4 columns, found {}", cols.len()),
            ));
        };
        let node = NodeId::new(node);
        let (names, tuple): (Vec<NodeId>, Vec<Value>) = if parents == "-" {
            (Vec::new(), Vec::new())
        } else {
            let mut names = Vec::new();
            let mut tuple = Vec::new();
            for binding in parents.split(',') {
                let Some((p, v)) = binding.split_once('=') else {
                    return Err(err(
                        line,
                        format!("parent binding `{binding}` is not NAME=VALUE"),
                    ));
                };
                if p.is_empty() || v.is_empty() {
                    return Err(err(
                        line,
                        format!("parent binding `{binding}` is not NAME=VALUE"),
                    ));
                }
                names.push(NodeId::new(p));
                tuple.push(parse_value(v));
            }
            (names, tuple)
        };
        let Some(p) = parse_probability(prob) else {
            return Err(err(line, format!("`{prob}` is not a probability")));
        };
        let entry = nodes.entry(node.clone()).or_insert_with(|| {
            order.push(node.clone());
            Pending {
                parents: names.clone(),
                ..Pending::default()
            }
        });
        if entry.parents != names {
            return Err(err(
                line,
                format!("parents of `{node}` differ from its first row"),
            ));
        }
        let value = parse_value(value);
        if !entry.domain.contains(&value) {
            entry.domain.push(value.clone());
        }
        if !p.is_zero() {
            entry.rows.entry(tuple).or_default().push((value, p));
        }
    }
    let mut out = Vec::with_capacity(order.len());
    for name in order {
        let pending = nodes.remove(&name).expect("recorded");
        let mut cpt = BTreeMap::new();
        for (tuple, support) in pending.rows {
            let dist = Distribution::new(support).map_err(|m| {
                SfmError::InvalidBayesNet(format!("row {tuple:?} of `{name}`: {m}"))
            })?;
            cpt.insert(tuple, dist);
        }
        out.push(BnNode {
            name,
            domain: pending.domain,
            parents: pending.parents,
            cpt,
        });
    }
    BayesNet::new(out)
}
