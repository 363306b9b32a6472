//! Contrasts between an actual and a contrastive world, and the
//! delta-compressed utterance they induce.

use std::collections::BTreeSet;
use std::fmt;

use super::forward::cfi;
use crate::assignment::Assignment;
use crate::error::{Result, SfmError};
use crate::model::{require_satisfies, Sfm};
use crate::value::NodeId;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContrastMode {
    DefaultWorld,
    Tweak,
}

/// An actual world `ω_a` and a contrastive world `ω_c`, both satisfying `model`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contrast {
    pub model: Sfm,
    pub actual: Assignment,
    pub contrastive: Assignment,
    pub mode: ContrastMode,
}

/// Contrast against a stated default world.
pub fn contrast_default(
    model: &Sfm,
    default_world: &Assignment,
    actual_world: &Assignment,
) -> Result<Contrast> {
    require_satisfies(model, default_world)?;
    require_satisfies(model, actual_world)?;
    Ok(Contrast {
        model: model.clone(),
        actual: actual_world.clone(),
        contrastive: default_world.clone(),
        mode: ContrastMode::DefaultWorld,
    })
}

/// Contrast against the world obtained by tweaking some exo-nodes of the
/// actual world and propagating with [`cfi`].
pub fn contrast_tweak(
    model: &Sfm,
    actual_world: &Assignment,
    tweak: &Assignment,
) -> Result<Contrast> {
    if let Some(n) = tweak.nodes().find(|n| model.is_endo(n)) {
        return Err(SfmError::EndoTweak(n.clone()));
    }
    let contrastive = cfi(model, actual_world, tweak)?.world;
    Ok(Contrast {
        model: model.clone(),
        actual: actual_world.clone(),
        contrastive,
        mode: ContrastMode::Tweak,
    })
}

/// `ω_a|C_exo causes ω_a|C_endo` for `C = {u | ω_a(u) ≠ ω_c(u)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Utterance {
    pub cause: Assignment,
    pub effect: Assignment,
    pub changed: BTreeSet<NodeId>,
    order: Vec<NodeId>,
}

impl Utterance {
    /// Renders an assignment with keys in the model's topological order.
    pub fn render_part(&self, part: &Assignment) -> String {
        part.render_ordered(&self.order)
    }

    pub fn render_cause(&self) -> String {
        self.render_part(&self.cause)
    }

    pub fn render_effect(&self) -> String {
        self.render_part(&self.effect)
    }
}

impl fmt::Display for Utterance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.effect.is_empty() {
            write!(f, "{} causes nothing", self.render_cause())
        } else {
            write!(f, "{} causes {}", self.render_cause(), self.render_effect())
        }
    }
}

pub fn utterance_of(contrast: &Contrast) -> Utterance {
    let model = &contrast.model;
    let changed = contrast.actual.changed_nodes(&contrast.contrastive);
    let (exo, endo): (Vec<&NodeId>, Vec<&NodeId>) = changed.iter().partition(|n| model.is_exo(n));
    let cause = contrast.actual.restrict(exo);
    let effect = contrast.actual.restrict(endo);
    debug_assert!(
        !cause.is_empty() || effect.is_empty(),
        "endogenous change without an exogenous one"
    );
    Utterance {
        cause,
        effect,
        changed,
        order: model.topological_order().to_vec(),
    }
}
