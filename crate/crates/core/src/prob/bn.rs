//! Bayesian networks and their import as models with noise parents.
//!
//! Each network node `Y` gets an exogenous noise parent `U_Y` whose values
//! are the left endpoints of a finite partition of `[0, 1)`: the union of
//! the cumulative endpoints of every CPT row of `Y`. Cells are left-closed,
//! right-open, and values are laid out in CPT row order, so `F[Y]` is the
//! inverse CDF of the matching row evaluated on the cell.

use std::collections::{BTreeMap, BTreeSet};

use num::{ToPrimitive, Zero};

use super::{extend, Distribution, ProbSfm, Probability, RandomValue};
use crate::enumerate::product;
use crate::error::{Result, SfmError};
use crate::function::StructuralFunction;
use crate::model::{topological_order, SfmParts};
use crate::value::{Domain, NodeId, Rational, Value};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BnNode {
    pub name: NodeId,
    pub domain: Vec<Value>,
    pub parents: Vec<NodeId>,
    /// Keyed by parent values in `parents` order.
    pub cpt: BTreeMap<Vec<Value>, Distribution>,
}

/// A DAG of finite nodes, each with a left-total conditional probability table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BayesNet {
    nodes: BTreeMap<NodeId, BnNode>,
}

impl BayesNet {
    pub fn new(nodes: impl IntoIterator<Item = BnNode>) -> Result<BayesNet> {
        let bad = |s: String| Err(SfmError::InvalidBayesNet(s));
        let mut map = BTreeMap::new();
        for n in nodes {
            let name = n.name.clone();
            if map.insert(name.clone(), n).is_some() {
                return bad(format!("node `{name}` declared twice"));
            }
        }
        let mut edges = BTreeSet::new();
        for n in map.values() {
            if n.domain.is_empty() {
                return bad(format!("empty domain at `{}`", n.name));
            }
            if n.domain.iter().collect::<BTreeSet<_>>().len() != n.domain.len() {
                return bad(format!("duplicate domain value at `{}`", n.name));
            }
            for p in &n.parents {
                if !map.contains_key(p) {
                    return bad(format!("`{}` has unknown parent `{p}`", n.name));
                }
                edges.insert((p.clone(), n.name.clone()));
            }
        }
        let names: BTreeSet<NodeId> = map.keys().cloned().collect();
        topological_order(&names, &edges).map_err(|e| SfmError::InvalidBayesNet(e.to_string()))?;
        for n in map.values() {
            let slices: Vec<&[Value]> =
                n.parents.iter().map(|p| map[p].domain.as_slice()).collect();
            let mut rows = 0;
            for tuple in product(&slices) {
                rows += 1;
                let Some(dist) = n.cpt.get(&tuple) else {
                    return bad(format!("CPT of `{}` has no row for {tuple:?}", n.name));
                };
                if let Some((v, _)) = dist.support().iter().find(|(v, _)| !n.domain.contains(v)) {
                    return bad(format!(
                        "CPT of `{}` puts mass on {v}, outside its domain",
                        n.name
                    ));
                }
            }
            if rows != n.cpt.len() {
                return bad(format!(
                    "CPT of `{}` has rows outside the parent product",
                    n.name
                ));
            }
        }
        Ok(BayesNet { nodes: map })
    }

    pub fn nodes(&self) -> impl Iterator<Item = &BnNode> {
        self.nodes.values()
    }

    pub fn node(&self, name: &str) -> Option<&BnNode> {
        self.nodes.get(name)
    }
}

/// Name of the noise parent introduced for `node`.
pub fn noise_node(node: &str) -> NodeId {
    NodeId::new(format!("U_{node}"))
}

fn to_value(p: &Probability) -> Option<Value> {
    let n = p.numer().to_i64()?;
    let d = p.denom().to_i64()?;
    Some(Value::rational(Rational::new(n, d)))
}

/// Rewrites every conditional distribution as a deterministic function of
/// the parents and one independent noise parent.
pub fn bn_import(bn: &BayesNet) -> Result<ProbSfm> {
    let mut parts = SfmParts::new();
    let mut dists = BTreeMap::new();
    for n in bn.nodes() {
        let u = noise_node(&n.name);
        if bn.node(&u).is_some() {
            return Err(SfmError::InvalidBayesNet(format!(
                "noise name `{u}` is already a node"
            )));
        }
        let mut cuts: BTreeSet<Probability> = BTreeSet::from([Probability::zero()]);
        for row in n.cpt.values() {
            let mut cum = Probability::zero();
            for (_, p) in &row.support()[..row.len() - 1] {
                cum += p;
                cuts.insert(cum.clone());
            }
        }
        let cuts: Vec<Probability> = cuts.into_iter().collect();
        let mut cells = Vec::with_capacity(cuts.len());
        for (k, lo) in cuts.iter().enumerate() {
            let hi = cuts.get(k + 1).cloned().unwrap_or_else(num::One::one);
            let v = to_value(lo).ok_or_else(|| {
                SfmError::InvalidBayesNet(format!(
                    "endpoint {lo} of `{}` does not fit a 64-bit rational",
                    n.name
                ))
            })?;
            cells.push((lo.clone(), v, hi - lo));
        }
        let noise_dist = Distribution::new(cells.iter().map(|(_, v, p)| (v.clone(), p.clone())))
            .expect("cells partition [0, 1)");

        let mut rows = Vec::new();
        for (tuple, row) in &n.cpt {
            for (lo, v, _) in &cells {
                let mut cum = Probability::zero();
                let out = row
                    .support()
                    .iter()
                    .find(|(_, p)| {
                        cum += p;
                        *lo < cum
                    })
                    .map(|(val, _)| val.clone())
                    .expect("every cell lies below 1");
                let mut key = tuple.clone();
                key.push(v.clone());
                rows.push((key, out));
            }
        }
        let mut parents = n.parents.clone();
        parents.push(u.clone());
        parts = parts
            .exo(
                u.clone(),
                Domain::finite(cells.iter().map(|(_, v, _)| v.clone())),
            )
            .endo(
                n.name.clone(),
                Domain::finite(n.domain.clone()),
                StructuralFunction::table(parents, rows),
            );
        dists.insert(u.clone(), RandomValue::new(u.as_str(), noise_dist));
    }
    let base = parts.build()?;
    let all = base.nodes().clone();
    extend(&base, &all, dists)
}

/// Law of `node` given its network parents' values, read off the imported
/// model as exact lengths of noise cells.
pub fn implied_conditional(
    model: &ProbSfm,
    node: &str,
    parent_values: &[Value],
) -> Result<BTreeMap<Value, Probability>> {
    let u = noise_node(node);
    let rv = model
        .exo_distributions()
        .get(&u)
        .ok_or_else(|| SfmError::UnknownNode(u.clone()))?;
    let func = model
        .base()
        .function(node)
        .ok_or_else(|| SfmError::NotEndo(NodeId::new(node)))?;
    let mut out: BTreeMap<Value, Probability> = BTreeMap::new();
    for (cell, p) in rv.dist.support() {
        let mut args = parent_values.to_vec();
        args.push(cell.clone());
        let v = func.apply(&args).map_err(|source| SfmError::Apply {
            node: NodeId::new(node),
            source,
        })?;
        *out.entry(v).or_insert_with(Probability::zero) += p;
    }
    Ok(out)
}
