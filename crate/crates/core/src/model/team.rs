use std::collections::{BTreeMap, BTreeSet};

use super::{product_size, Budget, Sfm};
use crate::assignment::{Assignment, Team};
use crate::enumerate::product;
use crate::error::{Result, SfmError};
use crate::infer::{csp_solve, vfi};
use crate::value::{NodeId, Value};

/// True iff every endo-node's value equals its function of the parents.
pub fn satisfies(model: &Sfm, world: &Assignment) -> Result<bool> {
    match require_satisfies(model, world) {
        Ok(()) => Ok(true),
        Err(SfmError::NotSatisfied { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Like [`satisfies`], but names the first violating node (topological order).
pub(crate) fn require_satisfies(model: &Sfm, world: &Assignment) -> Result<()> {
    check_complete(model, world)?;
    for n in model.endo_nodes() {
        let func = model.function(n).expect("endo-node has a function");
        let args: Vec<Value> = func
            .parents
            .iter()
            .map(|p| world.get(p).expect("complete").clone())
            .collect();
        let out = func.apply(&args).map_err(|source| SfmError::Apply {
            node: n.clone(),
            source,
        })?;
        let found = world.get(n).expect("complete");
        if *found != out {
            return Err(SfmError::NotSatisfied {
                node: n.clone(),
                expected: out,
                found: found.clone(),
            });
        }
    }
    Ok(())
}

pub(crate) fn check_complete(model: &Sfm, world: &Assignment) -> Result<()> {
    model.check_fragment(world)?;
    let missing: Vec<NodeId> = model
        .nodes()
        .iter()
        .filter(|n| !world.contains(n))
        .cloned()
        .collect();
    if missing.is_empty() {
        Ok(())
    } else {
        Err(SfmError::IncompleteWorld { missing })
    }
}

/// `R_M`: one world per exo-assignment, computed by forward inference.
pub fn enumerate_team(model: &Sfm, budget: Budget) -> Result<Team> {
    if let Err(node) = model.all_finite() {
        return Err(SfmError::UnsupportedEnumeration { node });
    }
    let exo = model.exo_nodes();
    let size = product_size(
        exo.iter()
            .map(|n| (n, model.domain(n).expect("node has domain"))),
    )
    .expect("all domains finite");
    budget.check(size)?;
    let factors: Vec<&[Value]> = exo
        .iter()
        .map(|n| model.domain(n).and_then(|d| d.values()).expect("finite"))
        .collect();
    let mut members = BTreeSet::new();
    for tuple in product(&factors) {
        let exo_assignment: Assignment = exo.iter().cloned().zip(tuple).collect();
        members.insert(vfi(model, &exo_assignment)?.world);
    }
    Ok(Team::from_set(members))
}

/// True iff some world of `R_M` extends `fragment`.
pub fn is_permitted(model: &Sfm, fragment: &Assignment) -> Result<bool> {
    model.check_fragment(fragment)?;
    Ok(!csp_solve(model, fragment, &BTreeSet::new(), 1)?.is_empty())
}

fn check_keys(team: &Team, nodes: &BTreeSet<NodeId>) -> Result<()> {
    if let Some(keys) = team.key_set() {
        if let Some(n) = nodes.iter().find(|n| !keys.contains(*n)) {
            return Err(SfmError::UnknownNode(n.clone()));
        }
    }
    Ok(())
}

/// Node-level functional dependency `sources →. targets`: no two members
/// agree on `sources` and differ on `targets`. Vacuously true on the empty team.
pub fn fd_holds(
    team: &Team,
    sources: &BTreeSet<NodeId>,
    targets: &BTreeSet<NodeId>,
) -> Result<bool> {
    check_keys(team, sources)?;
    check_keys(team, targets)?;
    let mut seen: BTreeMap<Assignment, Assignment> = BTreeMap::new();
    for w in team {
        let x = w.restrict(sources);
        let y = w.restrict(targets);
        match seen.get(&x) {
            Some(prev) if *prev != y => return Ok(false),
            Some(_) => {}
            None => {
                seen.insert(x, y);
            }
        }
    }
    Ok(true)
}

/// Value-level dependency: every member extending `fragment` agrees on `targets`.
pub fn fd_value_holds(
    team: &Team,
    fragment: &Assignment,
    targets: &BTreeSet<NodeId>,
) -> Result<bool> {
    check_keys(team, &fragment.key_set())?;
    check_keys(team, targets)?;
    let mut ext = team.extending(fragment).map(|w| w.restrict(targets));
    let Some(first) = ext.next() else {
        return Err(SfmError::UnpermittedFragment(fragment.clone()));
    };
    Ok(ext.all(|y| y == first))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assignment::assignment;
    use crate::fixtures;
    use crate::{Domain, SfmParts, StructuralFunction};

    fn set(ns: &[&str]) -> BTreeSet<NodeId> {
        ns.iter().map(NodeId::new).collect()
    }

    #[test]
    fn example_one_satisfaction() {
        let m = fixtures::example_one();
        let w = assignment([("A", 2i64), ("B", 2), ("C", 2), ("D", 2), ("E", 2)]);
        assert!(!satisfies(&m, &w).unwrap());
        let w = assignment([("A", 3i64), ("B", 9), ("C", -1), ("D", 8), ("E", -7)]);
        assert!(satisfies(&m, &w).unwrap());
        let partial = assignment([("A", 3i64)]);
        assert!(matches!(
            satisfies(&m, &partial),
            Err(SfmError::IncompleteWorld { .. })
        ));
    }

    #[test]
    fn or_squad_actual_world_satisfies() {
        let m = fixtures::or_firing_squad();
        let w = assignment([("Assassin1", 1i64), ("Assassin2", 1), ("Death", 1)]);
        assert!(satisfies(&m, &w).unwrap());
        let bad = assignment([("Assassin1", 1i64), ("Assassin2", 1), ("Death", 2)]);
        assert!(matches!(
            satisfies(&m, &bad),
            Err(SfmError::OutOfDomain { .. })
        ));
    }

    #[test]
    fn teams() {
        let m = fixtures::assassin();
        let team = enumerate_team(&m, Budget::DEFAULT).unwrap();
        let expected = Team::new([
            assignment([("Assassin", 0i64), ("Death", 0)]),
            assignment([("Assassin", 1i64), ("Death", 1)]),
        ])
        .unwrap();
        assert_eq!(team, expected);

        let and = fixtures::and_firing_squad();
        let team = enumerate_team(&and, Budget::DEFAULT).unwrap();
        assert_eq!(team.len(), 4);
        for w in &team {
            let both = w.get("Assassin1") == Some(&Value::Int(1))
                && w.get("Assassin2") == Some(&Value::Int(1));
            assert_eq!(w.get("Death"), Some(&Value::Int(both as i64)));
        }

        let bare = SfmParts::new()
            .exo("X", Domain::binary())
            .exo("Y", Domain::binary())
            .build()
            .unwrap();
        assert_eq!(enumerate_team(&bare, Budget::DEFAULT).unwrap().len(), 4);
    }

    #[test]
    fn enumeration_limits() {
        assert!(matches!(
            enumerate_team(&fixtures::example_one(), Budget::DEFAULT),
            Err(SfmError::UnsupportedEnumeration { .. })
        ));
        let m = fixtures::or_firing_squad();
        assert_eq!(
            enumerate_team(&m, Budget(3)),
            Err(SfmError::BudgetExceeded {
                required: 4,
                budget: 3
            })
        );
    }

    #[test]
    fn permitted_fragments() {
        let m = fixtures::example_one_finite();
        assert!(!is_permitted(&m, &assignment([("D", -10i64), ("E", 7)])).unwrap());
        assert!(is_permitted(&m, &assignment([("A", 3i64), ("B", 9)])).unwrap());
        assert!(is_permitted(&m, &assignment([("A", -3i64), ("C", 1)])).unwrap());
        assert!(is_permitted(&m, &Assignment::new()).unwrap());
    }

    #[test]
    fn thermometer_dependencies() {
        let team = fixtures::thermometer_team();
        assert!(!fd_holds(&team, &set(&["HighReading"]), &set(&["HighTemperature"])).unwrap());
        assert!(!fd_holds(
            &team,
            &set(&["HighReading", "ColdWater"]),
            &set(&["HighTemperature"])
        )
        .unwrap());
        assert!(fd_holds(
            &team,
            &set(&["HighTemperature", "ColdWater"]),
            &set(&["HighReading"])
        )
        .unwrap());
        assert!(fd_holds(&team, &set(&["ColdWater"]), &set(&["ColdWater"])).unwrap());
        assert!(fd_holds(&Team::default(), &set(&["A"]), &set(&["B"])).unwrap());
    }

    #[test]
    fn value_level_vs_node_level() {
        // Y = X1 | X2 | X3
        let parts = SfmParts::new()
            .exo("X1", Domain::binary())
            .exo("X2", Domain::binary())
            .exo("X3", Domain::binary())
            .endo(
                "Y",
                Domain::binary(),
                StructuralFunction::expr(
                    ["X1", "X2", "X3"],
                    crate::Expr::or(
                        crate::Expr::or(crate::Expr::var("X1"), crate::Expr::var("X2")),
                        crate::Expr::var("X3"),
                    ),
                ),
            );
        let team = enumerate_team(&parts.build().unwrap(), Budget::DEFAULT).unwrap();
        let y = set(&["Y"]);
        assert!(fd_value_holds(&team, &assignment([("X1", 1i64)]), &y).unwrap());
        assert!(!fd_value_holds(&team, &assignment([("X1", 0i64)]), &y).unwrap());
        assert!(!fd_holds(&team, &set(&["X1"]), &y).unwrap());
        assert!(fd_holds(&team, &set(&["X1", "X2", "X3"]), &y).unwrap());
        let full = team.iter().next().unwrap().clone();
        assert!(fd_value_holds(&team, &full, &y).unwrap());
        assert!(matches!(
            fd_value_holds(&team, &assignment([("X1", 5i64)]), &y),
            Err(SfmError::UnpermittedFragment(_))
        ));
    }
}
