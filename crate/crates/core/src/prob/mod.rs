//! Probabilistic extension: random exo values over finite outcome spaces.
//!
//! A random value is a named noise source with a finite-support
//! distribution. Nodes sharing a source are perfectly correlated; distinct
//! sources are independent. An outcome fixes one support index per source,
//! and realizing it yields an ordinary world of the base model.

mod bn;
mod cpt;

use std::collections::{BTreeMap, BTreeSet};

use num::{BigInt, BigRational, One, Signed, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::assignment::Assignment;
use crate::enumerate::product;
use crate::error::{Result, SfmError};
use crate::infer::vfi;
use crate::model::{Budget, Sfm};
use crate::value::{NodeId, Value};

pub use bn::{bn_import, implied_conditional, noise_node, BayesNet, BnNode};
pub use cpt::parse_cpt;

pub type Probability = BigRational;

/// Parses `p/q` or an integer into an exact probability.
pub fn parse_probability(text: &str) -> Option<Probability> {
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (
            n.trim().parse::<BigInt>().ok()?,
            d.trim().parse::<BigInt>().ok()?,
        ),
        None => (text.trim().parse::<BigInt>().ok()?, BigInt::one()),
    };
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

/// Finite support with exact, strictly positive probabilities summing to one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distribution {
    support: Vec<(Value, Probability)>,
}

impl Distribution {
    pub fn new<I>(support: I) -> std::result::Result<Distribution, String>
    where
        I: IntoIterator<Item = (Value, Probability)>,
    {
        let support: Vec<(Value, Probability)> = support.into_iter().collect();
        if support.is_empty() {
            return Err("empty support".into());
        }
        let mut seen = BTreeSet::new();
        let mut total = Probability::zero();
        for (v, p) in &support {
            if !seen.insert(v) {
                return Err(format!("value {v} listed twice"));
            }
            if !p.is_positive() {
                return Err(format!("probability of {v} is not positive"));
            }
            total += p;
        }
        if !total.is_one() {
            return Err(format!("probabilities sum to {total}, not 1"));
        }
        Ok(Distribution { support })
    }

    /// Uniform over `values`.
    pub fn uniform(
        values: impl IntoIterator<Item = Value>,
    ) -> std::result::Result<Distribution, String> {
        let values: Vec<Value> = values.into_iter().collect();
        let p = Probability::new(BigInt::one(), BigInt::from(values.len().max(1)));
        Distribution::new(values.into_iter().map(|v| (v, p.clone())))
    }

    /// `{0: 1-p, 1: p}`, dropping a zero-probability side.
    pub fn bernoulli(p: Probability) -> std::result::Result<Distribution, String> {
        let q = Probability::one() - &p;
        Distribution::new(
            [(Value::Int(0), q), (Value::Int(1), p)]
                .into_iter()
                .filter(|(_, x)| !x.is_zero()),
        )
    }

    pub fn support(&self) -> &[(Value, Probability)] {
        &self.support
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn probability(&self, value: &Value) -> Probability {
        self.support
            .iter()
            .find(|(v, _)| v == value)
            .map_or_else(Probability::zero, |(_, p)| p.clone())
    }

    /// Exclusive upper bounds `ceil(cdf_k * 2^64)` for mapping a uniform
    /// 64-bit word to a support index.
    fn thresholds(&self) -> Vec<u128> {
        let scale: BigInt = BigInt::one() << 64usize;
        let mut cum = Probability::zero();
        self.support
            .iter()
            .map(|(_, p)| {
                cum += p;
                let t = (&cum * BigRational::from_integer(scale.clone()))
                    .ceil()
                    .to_integer();
                u128::try_from(t).expect("cdf is at most one")
            })
            .collect()
    }
}

/// A draw from a named noise source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomValue {
    pub source: String,
    pub dist: Distribution,
}

impl RandomValue {
    pub fn new(source: impl Into<String>, dist: Distribution) -> Self {
        RandomValue {
            source: source.into(),
            dist,
        }
    }
}

/// One support index per noise source.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Outcome {
    pub coordinates: BTreeMap<String, usize>,
}

impl Outcome {
    pub fn new<I, S>(coords: I) -> Self
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        Outcome {
            coordinates: coords.into_iter().map(|(s, i)| (s.into(), i)).collect(),
        }
    }
}

/// A base model with a downward-closed random node set and distributions
/// for the random exo-nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbSfm {
    base: Sfm,
    random: BTreeSet<NodeId>,
    exo_distributions: BTreeMap<NodeId, RandomValue>,
}

/// Checks downward closure of `random_nodes` and the distributions.
pub fn extend(
    base: &Sfm,
    random_nodes: &BTreeSet<NodeId>,
    exo_distributions: BTreeMap<NodeId, RandomValue>,
) -> Result<ProbSfm> {
    for u in random_nodes {
        base.require_node(u)?;
        if !base.domain(u).is_some_and(|d| d.is_finite()) {
            return Err(SfmError::UnsupportedEnumeration { node: u.clone() });
        }
        if let Some(child) = base.children(u).iter().find(|c| !random_nodes.contains(*c)) {
            return Err(SfmError::NotDownwardClosed {
                node: u.clone(),
                descendant: child.clone(),
            });
        }
    }
    let mut by_source: BTreeMap<&str, &Distribution> = BTreeMap::new();
    for (u, rv) in &exo_distributions {
        base.require_node(u)?;
        if !random_nodes.contains(u) {
            return Err(SfmError::UnexpectedBinding {
                node: u.clone(),
                reason: "distribution for a node outside S",
            });
        }
        if !base.is_exo(u) {
            return Err(SfmError::UnexpectedBinding {
                node: u.clone(),
                reason: "distribution for an endo-node",
            });
        }
        let domain = base.domain(u).expect("node has domain");
        if let Some((v, _)) = rv.dist.support().iter().find(|(v, _)| !domain.contains(v)) {
            return Err(SfmError::InvalidDistribution {
                node: u.clone(),
                reason: format!("support value {v} is outside the domain"),
            });
        }
        if let Some(prev) = by_source.insert(&rv.source, &rv.dist) {
            if *prev != rv.dist {
                return Err(SfmError::InvalidDistribution {
                    node: u.clone(),
                    reason: format!(
                        "source `{}` is shared with a different distribution",
                        rv.source
                    ),
                });
            }
        }
    }
    Ok(ProbSfm {
        base: base.clone(),
        random: random_nodes.clone(),
        exo_distributions,
    })
}

impl ProbSfm {
    pub fn base(&self) -> &Sfm {
        &self.base
    }

    pub fn random_nodes(&self) -> &BTreeSet<NodeId> {
        &self.random
    }

    pub fn exo_distributions(&self) -> &BTreeMap<NodeId, RandomValue> {
        &self.exo_distributions
    }

    /// Distinct sources feeding exo-nodes not fixed by `exo_choice`, by name.
    pub fn sources_in_play(&self, exo_choice: &Assignment) -> BTreeMap<&str, &Distribution> {
        self.exo_distributions
            .iter()
            .filter(|(u, _)| !exo_choice.contains(u))
            .map(|(_, rv)| (rv.source.as_str(), &rv.dist))
            .collect()
    }

    /// Exo values after realizing every random exo-node at `outcome`.
    /// Bindings in `exo_choice` win over distributions.
    fn realized_exo(&self, exo_choice: &Assignment, outcome: &Outcome) -> Result<Assignment> {
        let mut exo = exo_choice.clone();
        for (u, rv) in &self.exo_distributions {
            if exo.contains(u) {
                continue;
            }
            let idx = *outcome
                .coordinates
                .get(&rv.source)
                .ok_or_else(|| SfmError::MissingCoordinate(rv.source.clone()))?;
            let (v, _) =
                rv.dist
                    .support()
                    .get(idx)
                    .ok_or_else(|| SfmError::InvalidDistribution {
                        node: u.clone(),
                        reason: format!("outcome index {idx} is outside the support"),
                    })?;
            exo.insert(u.clone(), v.clone());
        }
        Ok(exo)
    }
}

/// The complete world reached by realizing `outcome` and running forward inference.
pub fn realize(model: &ProbSfm, exo_choice: &Assignment, outcome: &Outcome) -> Result<Assignment> {
    Ok(vfi(&model.base, &model.realized_exo(exo_choice, outcome)?)?.world)
}

/// Exact distribution over realized worlds.
pub fn push_forward(
    model: &ProbSfm,
    exo_choice: &Assignment,
    budget: Budget,
) -> Result<BTreeMap<Assignment, Probability>> {
    let sources = model.sources_in_play(exo_choice);
    let size = sources
        .values()
        .fold(1u128, |acc, d| acc.saturating_mul(d.len() as u128));
    budget.check(size)?;
    let names: Vec<&str> = sources.keys().copied().collect();
    let dists: Vec<&Distribution> = sources.values().copied().collect();
    let indices: Vec<Vec<Value>> = dists
        .iter()
        .map(|d| (0..d.len() as i64).map(Value::Int).collect())
        .collect();
    let slices: Vec<&[Value]> = indices.iter().map(Vec::as_slice).collect();
    let mut out: BTreeMap<Assignment, Probability> = BTreeMap::new();
    for tuple in product(&slices) {
        let idx: Vec<usize> = tuple
            .iter()
            .map(|v| match v {
                Value::Int(i) => *i as usize,
                _ => unreachable!("indices are integers"),
            })
            .collect();
        let p = idx
            .iter()
            .zip(&dists)
            .fold(Probability::one(), |acc, (&i, d)| acc * &d.support()[i].1);
        let outcome = Outcome::new(names.iter().copied().zip(idx));
        let world = realize(model, exo_choice, &outcome)?;
        *out.entry(world).or_insert_with(Probability::zero) += p;
    }
    Ok(out)
}

/// Stable 64-bit FNV-1a hash, used to key sampling streams by source name.
fn fnv1a(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Seeded Monte-Carlo tallies of realized worlds; counts sum to `n`.
///
/// Draw `i` of source `s` reads words `2i` and `2i + 1` of the ChaCha8
/// stream `fnv1a(s)` under `seed`, so results depend only on the seed,
/// the source names and the draw index.
pub fn sample(
    model: &ProbSfm,
    exo_choice: &Assignment,
    seed: u64,
    n: u64,
) -> Result<BTreeMap<Assignment, u64>> {
    let sources = model.sources_in_play(exo_choice);
    let names: Vec<&str> = sources.keys().copied().collect();
    let thresholds: Vec<Vec<u128>> = sources.values().map(|d| d.thresholds()).collect();
    let mut rngs: Vec<ChaCha8Rng> = names
        .iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(fnv1a(s));
            rng
        })
        .collect();
    let mut cache: BTreeMap<Vec<usize>, Assignment> = BTreeMap::new();
    let mut tally: BTreeMap<Assignment, u64> = BTreeMap::new();
    for _ in 0..n {
        let idx: Vec<usize> = rngs
            .iter_mut()
            .zip(&thresholds)
            .map(|(rng, th)| {
                let x = rng.next_u64() as u128;
                th.iter()
                    .position(|&t| x < t)
                    .expect("last threshold is 2^64")
            })
            .collect();
        let world = match cache.get(&idx) {
            Some(w) => w.clone(),
            None => {
                let outcome = Outcome::new(names.iter().copied().zip(idx.iter().copied()));
                let w = realize(model, exo_choice, &outcome)?;
                cache.insert(idx, w.clone());
                w
            }
        };
        *tally.entry(world).or_insert(0) += 1;
    }
    Ok(tally)
}

/// Sums a joint distribution down to `nodes`.
pub fn marginal(
    joint: &BTreeMap<Assignment, Probability>,
    nodes: &BTreeSet<NodeId>,
) -> BTreeMap<Assignment, Probability> {
    let mut out: BTreeMap<Assignment, Probability> = BTreeMap::new();
    for (w, p) in joint {
        *out.entry(w.restrict(nodes))
            .or_insert_with(Probability::zero) += p;
    }
    out
}

/// Total-variation distance between an exact law and empirical counts.
pub fn total_variation(
    exact: &BTreeMap<Assignment, Probability>,
    counts: &BTreeMap<Assignment, u64>,
) -> f64 {
    use num::ToPrimitive;
    let n: u64 = counts.values().sum();
    let keys: BTreeSet<&Assignment> = exact.keys().chain(counts.keys()).collect();
    let mut sum = 0.0;
    for k in keys {
        let p = exact.get(k).and_then(|p| p.to_f64()).unwrap_or(0.0);
        let q = counts.get(k).copied().unwrap_or(0) as f64 / n.max(1) as f64;
        sum += (p - q).abs();
    }
    sum / 2.0
}
