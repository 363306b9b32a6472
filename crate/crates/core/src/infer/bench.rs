//! Evaluation-count comparison between vanilla and contrastive inference.

use super::forward::{cfi, vfi};
use crate::assignment::Assignment;
use crate::error::Result;
use crate::model::{require_satisfies, Sfm};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchRow {
    pub tweak: Assignment,
    pub vfi_evals: u32,
    pub cfi_evals: u32,
}

impl BenchRow {
    pub fn saved(&self) -> u32 {
        self.vfi_evals - self.cfi_evals
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BenchTable {
    pub rows: Vec<BenchRow>,
}

impl BenchTable {
    pub fn total_vfi(&self) -> u64 {
        self.rows.iter().map(|r| r.vfi_evals as u64).sum()
    }

    pub fn total_cfi(&self) -> u64 {
        self.rows.iter().map(|r| r.cfi_evals as u64).sum()
    }
}

/// Runs each tweak through both algorithms from `reference`. The two worlds
/// must agree and `cfi` may never evaluate more than `vfi`.
pub fn bench_eval_counts(
    model: &Sfm,
    reference: &Assignment,
    tweaks: &[Assignment],
) -> Result<BenchTable> {
    require_satisfies(model, reference)?;
    let base_exo = reference.restrict(model.exo_nodes());
    let mut rows = Vec::with_capacity(tweaks.len());
    for tweak in tweaks {
        let incremental = cfi(model, reference, tweak)?;
        let full = vfi(model, &base_exo.merged(tweak))?;
        assert_eq!(
            incremental.world, full.world,
            "contrastive and vanilla inference disagree"
        );
        assert!(incremental.total_evals() <= full.total_evals());
        rows.push(BenchRow {
            tweak: tweak.clone(),
            vfi_evals: full.total_evals(),
            cfi_evals: incremental.total_evals(),
        });
    }
    Ok(BenchTable { rows })
}
