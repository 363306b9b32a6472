//! Forward, contrastive and backward inference.

mod bench;
mod contrast;
mod csp;
mod forward;

pub use bench::{bench_eval_counts, BenchRow, BenchTable};
pub use contrast::{
    contrast_default, contrast_tweak, utterance_of, Contrast, ContrastMode, Utterance,
};
pub use csp::csp_solve;
pub use forward::{cfi, partial_fi, vfi, InferResult, PartialResult};
