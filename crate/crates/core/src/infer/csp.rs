//! Backward inference as a finite constraint satisfaction problem.

use std::collections::BTreeSet;

use crate::assignment::Assignment;
use crate::error::{Result, SfmError};
use crate::model::Sfm;
use crate::value::{NodeId, Value};

/// Distinct restrictions to `targets` of worlds in `R_M` that extend
/// `known`, at most `limit` of them.
///
/// Only the ancestral closure of `targets ∪ known` is searched: any
/// consistent assignment to an upward-closed node set extends to a full
/// world. Variables are visited in topological order and exo values in
/// domain declaration order; an endo-node's value is forced by its parents
/// and checked against `known`. Results come out in discovery order.
pub fn csp_solve(
    model: &Sfm,
    known: &Assignment,
    targets: &BTreeSet<NodeId>,
    limit: usize,
) -> Result<Vec<Assignment>> {
    if limit == 0 {
        return Err(SfmError::ZeroLimit);
    }
    model.check_fragment(known)?;
    for t in targets {
        model.require_node(t)?;
    }
    let closure = model.ancestors(targets.iter().chain(known.nodes()));
    let vars: Vec<&NodeId> = model
        .topological_order()
        .iter()
        .filter(|n| closure.contains(*n))
        .collect();
    if let Some(n) = vars.iter().find(|n| {
        model.is_exo(n) && !known.contains(n) && !model.domain(n).is_some_and(|d| d.is_finite())
    }) {
        return Err(SfmError::UnsupportedEnumeration { node: (*n).clone() });
    }

    let mut search = Search {
        model,
        known,
        targets,
        vars,
        limit,
        seen: BTreeSet::new(),
        out: Vec::new(),
    };
    let mut partial = Assignment::new();
    search.descend(0, &mut partial)?;
    Ok(search.out)
}

struct Search<'a> {
    model: &'a Sfm,
    known: &'a Assignment,
    targets: &'a BTreeSet<NodeId>,
    vars: Vec<&'a NodeId>,
    limit: usize,
    seen: BTreeSet<Assignment>,
    out: Vec<Assignment>,
}

impl Search<'_> {
    /// Returns `true` once the limit is reached.
    fn descend(&mut self, depth: usize, partial: &mut Assignment) -> Result<bool> {
        let Some(&var) = self.vars.get(depth) else {
            let answer = partial.restrict(self.targets);
            if self.seen.insert(answer.clone()) {
                self.out.push(answer);
            }
            return Ok(self.out.len() >= self.limit);
        };
        if let Some(func) = self.model.function(var) {
            let args: Vec<Value> = func
                .parents
                .iter()
                .map(|p| {
                    partial
                        .get(p)
                        .expect("parents are earlier variables")
                        .clone()
                })
                .collect();
            let val = func.apply(&args).map_err(|source| SfmError::Apply {
                node: var.clone(),
                source,
            })?;
            if self.known.get(var).is_some_and(|k| *k != val) {
                return Ok(false);
            }
            return self.bind(depth, partial, var, val);
        }
        if let Some(k) = self.known.get(var) {
            return self.bind(depth, partial, var, k.clone());
        }
        let values = self
            .model
            .domain(var)
            .and_then(|d| d.values())
            .expect("checked finite");
        for val in values {
            if self.bind(depth, partial, var, val.clone())? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn bind(
        &mut self,
        depth: usize,
        partial: &mut Assignment,
        var: &NodeId,
        val: Value,
    ) -> Result<bool> {
        partial.insert(var.clone(), val);
        let done = self.descend(depth + 1, partial);
        partial.remove(var);
        done
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assignment::assignment;
    use crate::fixtures;
    use crate::model::{enumerate_team, Budget};

    fn set(ns: &[&str]) -> BTreeSet<NodeId> {
        ns.iter().map(NodeId::new).collect()
    }

    #[test]
    fn indicative_shakespeare() {
        let m = fixtures::shakespeare_indicative();
        let known = assignment([("Shakespeare", 0i64), ("Hamlet", 1)]);
        let r = csp_solve(&m, &known, &set(&["Writer2"]), 10).unwrap();
        assert_eq!(r, vec![assignment([("Writer2", 1i64)])]);
    }

    #[test]
    fn square_preimages() {
        let m = fixtures::square();
        let r = csp_solve(&m, &assignment([("B", 4i64)]), &set(&["A"]), 10).unwrap();
        assert_eq!(
            r,
            vec![assignment([("A", -2i64)]), assignment([("A", 2i64)])]
        );
        let r = csp_solve(&m, &assignment([("B", 4i64)]), &set(&["A"]), 1).unwrap();
        assert_eq!(r.len(), 1);
        assert!(csp_solve(&m, &assignment([("B", 3i64)]), &set(&["A"]), 10)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn complete_known_world() {
        let m = fixtures::connected_preemption();
        let w = assignment([
            ("Assassin1", 0i64),
            ("EarlyDeath", 0),
            ("Assassin2", 1),
            ("LateDeath", 1),
        ]);
        let targets = set(&["Assassin2", "LateDeath"]);
        assert_eq!(
            csp_solve(&m, &w, &targets, 5).unwrap(),
            vec![w.restrict(&targets)]
        );
    }

    #[test]
    fn matches_team_filter() {
        let m = fixtures::example_one_finite();
        let team = enumerate_team(&m, Budget::DEFAULT).unwrap();
        let known = assignment([("E", 0i64)]);
        let targets = set(&["B", "D"]);
        let got: BTreeSet<Assignment> = csp_solve(&m, &known, &targets, usize::MAX)
            .unwrap()
            .into_iter()
            .collect();
        let want: BTreeSet<Assignment> = team
            .extending(&known)
            .map(|w| w.restrict(&targets))
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn errors() {
        let m = fixtures::square();
        assert_eq!(
            csp_solve(&m, &Assignment::new(), &set(&["A"]), 0),
            Err(SfmError::ZeroLimit)
        );
        assert!(matches!(
            csp_solve(
                &fixtures::example_one(),
                &Assignment::new(),
                &set(&["E"]),
                1
            ),
            Err(SfmError::UnsupportedEnumeration { .. })
        ));
        assert!(matches!(
            csp_solve(&m, &Assignment::new(), &set(&["Q"]), 1),
            Err(SfmError::UnknownNode(_))
        ));
    }
}
