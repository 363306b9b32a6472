//! Executes a scenario and compares the outcome with its expectation.

use std::collections::BTreeSet;
use std::fmt;

use super::{Expectation, ScenarioDoc, Section};
use crate::assignment::Assignment;
use crate::error::Result;
use crate::infer::{
    cfi, contrast_default, contrast_tweak, csp_solve, utterance_of, vfi, Utterance,
};
use crate::model::{enumerate_team, fd_holds, Budget};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Utterance(Utterance),
    /// One world for vfi, the solution list for csp.
    Answer(Vec<Assignment>),
    /// Truth of each fd claim, in order.
    Holds(Vec<bool>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScenarioResult {
    pub outcome: Outcome,
    /// `None` when the document carries no expectation.
    pub passed: Option<bool>,
    /// Structural-function evaluations, for forward-inference scenarios.
    pub evals: Option<u32>,
    order: Vec<crate::value::NodeId>,
}

impl fmt::Display for ScenarioResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.outcome {
            Outcome::Utterance(u) => write!(f, "{u}"),
            Outcome::Answer(ws) => {
                let parts: Vec<String> = ws.iter().map(|w| w.render_ordered(&self.order)).collect();
                write!(f, "[{}]", parts.join(", "))
            }
            Outcome::Holds(hs) => {
                let parts: Vec<&str> = hs
                    .iter()
                    .map(|h| if *h { "holds" } else { "fails" })
                    .collect();
                f.write_str(&parts.join(", "))
            }
        }
    }
}

/// Runs with the default enumeration budget and an unbounded solution limit.
pub fn run_scenario(doc: &ScenarioDoc) -> Result<ScenarioResult> {
    run_scenario_with(doc, Budget::DEFAULT, usize::MAX)
}

pub fn run_scenario_with(
    doc: &ScenarioDoc,
    budget: Budget,
    limit: usize,
) -> Result<ScenarioResult> {
    let m = &doc.model;
    let (outcome, evals) = match &doc.section {
        Section::Default { default, actual } => (
            Outcome::Utterance(utterance_of(&contrast_default(m, default, actual)?)),
            None,
        ),
        Section::Tweak { actual, tweak } => {
            let c = contrast_tweak(m, actual, tweak)?;
            let evals = cfi(m, actual, tweak)?.total_evals();
            (Outcome::Utterance(utterance_of(&c)), Some(evals))
        }
        Section::Vfi { exo } => {
            let r = vfi(m, exo)?;
            let evals = r.total_evals();
            (Outcome::Answer(vec![r.world]), Some(evals))
        }
        Section::Csp { known, targets } => {
            (Outcome::Answer(csp_solve(m, known, targets, limit)?), None)
        }
        Section::Fd { claims } => {
            let team = enumerate_team(m, budget)?;
            let holds = claims
                .iter()
                .map(|(x, y)| fd_holds(&team, x, y))
                .collect::<Result<Vec<_>>>()?;
            (Outcome::Holds(holds), None)
        }
    };
    let passed = doc.expect.as_ref().map(|e| matches(&outcome, e));
    Ok(ScenarioResult {
        outcome,
        passed,
        evals,
        order: m.topological_order().to_vec(),
    })
}

fn matches(outcome: &Outcome, expect: &Expectation) -> bool {
    match (outcome, expect) {
        (Outcome::Utterance(u), Expectation::Utterance { cause, effect }) => {
            &u.cause == cause && &u.effect == effect
        }
        (Outcome::Answer(got), Expectation::Answer(want)) => {
            got.len() == want.len()
                && got.iter().collect::<BTreeSet<_>>() == want.iter().collect::<BTreeSet<_>>()
        }
        (Outcome::Holds(hs), Expectation::Holds) => hs.iter().all(|h| *h),
        _ => false,
    }
}
