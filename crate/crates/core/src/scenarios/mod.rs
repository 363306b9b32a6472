//! Text language for models and scenarios, its canonical printer, a runner,
//! and the golden corpus loader.
//!
//! ```text
//! model {
//!   node Assassin exo domain {0, 1}
//!   node Death endo parents (Assassin) domain {0, 1} expr Assassin
//! }
//! default {Assassin:0, Death:0}
//! actual {Assassin:1, Death:1}
//! expect cause {Assassin:1} effect {Death:1}
//! ```
//!
//! A document is a model section (or `include "file"`), one contrast or
//! query section, and an optional expectation. Sections:
//! `default {..} actual {..}`, `actual {..} tweak {..}`, `vfi {..}`,
//! `csp known {..} targets (..)`, and one or more `fd (..) -> (..)` claims.
//! Expectations: `expect cause {..} effect {..}`, `expect answer {..}+`,
//! `expect holds`.

mod corpus;
mod lexer;
mod parser;
mod printer;
mod runner;
mod switch;

use std::collections::BTreeSet;
use std::fmt;

use crate::assignment::Assignment;
use crate::model::Sfm;
use crate::value::NodeId;

pub use corpus::{run_corpus, run_file, scenario_files, CorpusEntry, CorpusReport};
pub use parser::{
    parse_assignment, parse_expr, parse_model, parse_scenario, parse_scenario_bytes,
    parse_scenario_with, parse_value,
};
pub use printer::{print_model, print_scenario};
pub use runner::{run_scenario, run_scenario_with, Outcome, ScenarioResult};
pub use switch::{switch_circuit, switch_circuits};

/// A syntax or static error at a 1-based character position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    /// Tokens that would have been accepted here, if known.
    pub expected: Vec<String>,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
            expected: Vec::new(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(" or "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Section {
    Default {
        default: Assignment,
        actual: Assignment,
    },
    Tweak {
        actual: Assignment,
        tweak: Assignment,
    },
    Vfi {
        exo: Assignment,
    },
    Csp {
        known: Assignment,
        targets: BTreeSet<NodeId>,
    },
    /// Functional-dependency claims `X -> Y` checked on the enumerated team.
    Fd {
        claims: Vec<(BTreeSet<NodeId>, BTreeSet<NodeId>)>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expectation {
    Utterance {
        cause: Assignment,
        effect: Assignment,
    },
    /// The vfi world, or the csp solution set.
    Answer(Vec<Assignment>),
    /// Every fd claim holds.
    Holds,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScenarioDoc {
    pub model: Sfm,
    pub section: Section,
    pub expect: Option<Expectation>,
}
