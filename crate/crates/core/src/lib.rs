//! Structural functional models: finite acyclic causal models built from
//! structural functions, with forward, contrastive and backward inference,
//! delta-compressed causal utterances, a probabilistic extension and a small
//! scenario language.
//!
//! ```
//! use sfm_core::{assignment, fixtures, infer};
//!
//! let model = fixtures::or_firing_squad();
//! let actual = assignment([("Assassin1", 1i64), ("Assassin2", 1), ("Death", 1)]);
//! let contrast = infer::contrast_tweak(&model, &actual, &assignment([("Assassin1", 0i64)])).unwrap();
//! assert_eq!(infer::utterance_of(&contrast).to_string(), "{Assassin1:1} causes nothing");
//! ```

pub mod assignment;
pub mod enumerate;
pub mod error;
pub mod expr;
pub mod fixtures;
pub mod function;
pub mod infer;
pub mod model;
pub mod prob;
pub mod scenarios;
pub mod value;

pub use assignment::{assignment, Assignment, Team};
pub use error::{Result, SfmError};
pub use expr::{BinOp, EvalError, Expr, UnOp};
pub use function::{ApplyError, FunctionBody, StructuralFunction};
pub use infer::{
    bench_eval_counts, cfi, contrast_default, contrast_tweak, csp_solve, partial_fi, utterance_of,
    vfi, Contrast, ContrastMode, InferResult, PartialResult, Utterance,
};
pub use model::{
    compose, construct_intersection, decompose, enumerate_team, extract_sub_sfm, fd_holds,
    fd_value_holds, gmt_witness, intersection_team, is_permitted, is_sub_sfm, satisfies,
    topological_order, validate, validate_with, Budget, FDet, Sfm, SfmParts, ValidationReport,
    Violation, Witness,
};
pub use value::{Domain, NodeId, Rational, Value};
