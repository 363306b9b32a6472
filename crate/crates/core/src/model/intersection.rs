//! Functional determinations and SFM-intersections.

use std::collections::{BTreeMap, BTreeSet};

use super::{product_size, Budget, Sfm, SfmParts};
use crate::assignment::{Assignment, Team};
use crate::enumerate::product;
use crate::error::{Result, SfmError};
use crate::function::StructuralFunction;
use crate::value::{Domain, NodeId, Value};

/// `X →f Y` given as a table from source tuples to target tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FDet {
    sources: Vec<NodeId>,
    targets: Vec<NodeId>,
    domains: BTreeMap<NodeId, Domain>,
    map: BTreeMap<Vec<Value>, Vec<Value>>,
}

impl FDet {
    /// Checks the map is left-total over the source product and lands in
    /// the target domains. All involved domains must be finite.
    pub fn new(
        sources: Vec<NodeId>,
        targets: Vec<NodeId>,
        domains: BTreeMap<NodeId, Domain>,
        map: BTreeMap<Vec<Value>, Vec<Value>>,
    ) -> Result<FDet> {
        let bad = |s: String| Err(SfmError::InvalidFdet(s));
        for n in sources.iter().chain(&targets) {
            match domains.get(n) {
                Some(Domain::Finite(_)) => {}
                Some(Domain::Real) => return bad(format!("`{n}` has a real-line domain")),
                None => return bad(format!("no domain for `{n}`")),
            }
        }
        let src_domains: Vec<&[Value]> = sources
            .iter()
            .map(|n| domains[n].values().expect("finite"))
            .collect();
        let mut expected = 0usize;
        for tuple in product(&src_domains) {
            expected += 1;
            let Some(out) = map.get(&tuple) else {
                return bad(format!("no image for source tuple {tuple:?}"));
            };
            if out.len() != targets.len() {
                return bad(format!("image of {tuple:?} has the wrong arity"));
            }
            for (t, v) in targets.iter().zip(out) {
                if !domains[t].contains(v) {
                    return bad(format!("image value {v} outside the domain of `{t}`"));
                }
            }
        }
        if map.len() != expected {
            return bad("map has entries outside the source product".into());
        }
        Ok(FDet {
            sources,
            targets,
            domains,
            map,
        })
    }

    /// Tabulates `f` over the source product.
    pub fn from_fn<F>(
        sources: Vec<NodeId>,
        targets: Vec<NodeId>,
        domains: BTreeMap<NodeId, Domain>,
        f: F,
    ) -> Result<FDet>
    where
        F: Fn(&[Value]) -> Vec<Value>,
    {
        let mut map = BTreeMap::new();
        {
            let src: Option<Vec<&[Value]>> = sources
                .iter()
                .map(|n| domains.get(n).and_then(Domain::values))
                .collect();
            let Some(src) = src else {
                return Err(SfmError::InvalidFdet(
                    "source domains must be declared and finite".into(),
                ));
            };
            for tuple in product(&src) {
                let out = f(&tuple);
                map.insert(tuple, out);
            }
        }
        FDet::new(sources, targets, domains, map)
    }

    pub fn sources(&self) -> &[NodeId] {
        &self.sources
    }

    pub fn targets(&self) -> &[NodeId] {
        &self.targets
    }

    pub fn domains(&self) -> &BTreeMap<NodeId, Domain> {
        &self.domains
    }

    /// True iff `world` maps its source values to its target values.
    pub fn holds_in(&self, world: &Assignment) -> bool {
        let x: Option<Vec<Value>> = self.sources.iter().map(|n| world.get(n).cloned()).collect();
        let y: Option<Vec<Value>> = self.targets.iter().map(|n| world.get(n).cloned()).collect();
        match (x, y) {
            (Some(x), Some(y)) => self.map.get(&x) == Some(&y),
            _ => false,
        }
    }
}

/// One model per determination: sources exogenous, each target computed
/// from all sources by projecting the determination's image.
pub fn construct_intersection(fdets: &[FDet]) -> Result<Vec<Sfm>> {
    if fdets.is_empty() {
        return Err(SfmError::InvalidFdet(
            "no functional determinations given".into(),
        ));
    }
    let mut out = Vec::with_capacity(fdets.len());
    for (index, fd) in fdets.iter().enumerate() {
        if fd.sources.is_empty() {
            return Err(SfmError::ConstantFdet { index });
        }
        if let Some(node) = fd.targets.iter().find(|t| fd.sources.contains(t)) {
            return Err(SfmError::CyclicFdet {
                index,
                node: node.clone(),
            });
        }
        let mut parts = SfmParts::new();
        for x in &fd.sources {
            parts = parts.exo(x.clone(), fd.domains[x].clone());
        }
        for (k, y) in fd.targets.iter().enumerate() {
            let rows = fd.map.iter().map(|(xs, ys)| (xs.clone(), ys[k].clone()));
            let func = StructuralFunction::table(fd.sources.iter().cloned(), rows);
            parts = parts.endo(y.clone(), fd.domains[y].clone(), func);
        }
        out.push(Sfm::new(parts)?);
    }
    Ok(out)
}

/// All assignments over `universe` satisfying every part.
pub fn intersection_team(
    parts: &[Sfm],
    universe: &BTreeMap<NodeId, Domain>,
    budget: Budget,
) -> Result<Team> {
    for m in parts {
        for n in m.nodes() {
            match universe.get(n) {
                None => return Err(SfmError::UnknownNode(n.clone())),
                Some(d) if Some(d) != m.domain(n) => {
                    return Err(SfmError::DomainMismatch(n.clone()))
                }
                Some(_) => {}
            }
        }
    }
    let size =
        product_size(universe.iter()).map_err(|node| SfmError::UnsupportedEnumeration { node })?;
    budget.check(size)?;
    let keys: Vec<&NodeId> = universe.keys().collect();
    let factors: Vec<&[Value]> = universe
        .values()
        .map(|d| d.values().expect("finite"))
        .collect();
    let restricted: Vec<BTreeSet<NodeId>> = parts.iter().map(|m| m.nodes().clone()).collect();
    let mut members = BTreeSet::new();
    for tuple in product(&factors) {
        let world: Assignment = keys.iter().map(|k| (*k).clone()).zip(tuple).collect();
        let mut ok = true;
        for (m, nodes) in parts.iter().zip(&restricted) {
            if !super::satisfies(m, &world.restrict(nodes))? {
                ok = false;
                break;
            }
        }
        if ok {
            members.insert(world);
        }
    }
    Ok(Team::from_set(members))
}
