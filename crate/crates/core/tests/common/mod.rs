//! Seeded generators shared by the property suites and the acceptance run.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use num::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sfm_core::enumerate::product;
use sfm_core::prob::{BayesNet, BnNode, Distribution};
use sfm_core::{
    enumerate_team, Assignment, Budget, Domain, FDet, NodeId, Sfm, SfmParts, StructuralFunction,
    Value,
};

pub fn config(cases: u32) -> proptest::test_runner::Config {
    proptest::test_runner::Config {
        cases,
        failure_persistence: None,
        ..Default::default()
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn int_domain(k: usize) -> Vec<Value> {
    (0..k as i64).map(Value::Int).collect()
}

/// A valid finite model: 1..=`max_nodes` nodes, domains of 1..=`max_values`
/// integers, random table functions over at most three parents. Names are
/// shuffled so name order and topological order disagree.
pub fn random_model(rng: &mut impl Rng, max_nodes: usize, max_values: usize) -> Sfm {
    let n = rng.random_range(1..=max_nodes);
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(rng);
    let names: Vec<NodeId> = labels
        .iter()
        .map(|l| NodeId::new(format!("N{l}")))
        .collect();
    let mut domains: Vec<Vec<Value>> = Vec::with_capacity(n);
    let mut parts = SfmParts::new();
    for i in 0..n {
        let dom = int_domain(rng.random_range(1..=max_values));
        if i == 0 || rng.random_bool(0.4) {
            parts = parts.exo(names[i].clone(), Domain::Finite(dom.clone()));
        } else {
            let mut ps: Vec<usize> = (0..i).filter(|_| rng.random_bool(0.5)).collect();
            if ps.is_empty() {
                ps.push(rng.random_range(0..i));
            }
            ps.shuffle(rng);
            ps.truncate(3);
            let slices: Vec<&[Value]> = ps.iter().map(|p| domains[*p].as_slice()).collect();
            let rows: Vec<(Vec<Value>, Value)> = product(&slices)
                .map(|t| (t, dom[rng.random_range(0..dom.len())].clone()))
                .collect();
            let f = StructuralFunction::table(ps.iter().map(|p| names[*p].clone()), rows);
            parts = parts.endo(names[i].clone(), Domain::Finite(dom.clone()), f);
        }
        domains.push(dom);
    }
    parts.build().expect("generated models are valid")
}

fn pick(rng: &mut impl Rng, model: &Sfm, node: &NodeId) -> Value {
    let vals = model.domain(node).and_then(Domain::values).expect("finite");
    vals[rng.random_range(0..vals.len())].clone()
}

/// A complete exo-assignment.
pub fn random_exo(rng: &mut impl Rng, model: &Sfm) -> Assignment {
    model
        .exo_nodes()
        .iter()
        .map(|u| (u.clone(), pick(rng, model, u)))
        .collect()
}

/// Each exo-node bound with probability one half.
pub fn random_exo_fragment(rng: &mut impl Rng, model: &Sfm) -> Assignment {
    let mut out = Assignment::new();
    for u in model.exo_nodes() {
        if rng.random_bool(0.5) {
            out.insert(u.clone(), pick(rng, model, u));
        }
    }
    out
}

/// Each node bound with probability `p`, to any domain value.
pub fn random_fragment(rng: &mut impl Rng, model: &Sfm, p: f64) -> Assignment {
    let mut out = Assignment::new();
    for u in model.nodes() {
        if rng.random_bool(p) {
            out.insert(u.clone(), pick(rng, model, u));
        }
    }
    out
}

pub fn random_subset(rng: &mut impl Rng, nodes: &BTreeSet<NodeId>, p: f64) -> BTreeSet<NodeId> {
    nodes
        .iter()
        .filter(|_| rng.random_bool(p))
        .cloned()
        .collect()
}

/// Restrictions of team members extending `known`, projected to `targets`.
pub fn csp_oracle(
    model: &Sfm,
    known: &Assignment,
    targets: &BTreeSet<NodeId>,
) -> BTreeSet<Assignment> {
    let team = enumerate_team(model, Budget::DEFAULT).unwrap();
    team.iter()
        .filter(|w| w.extends(known))
        .map(|w| w.restrict(targets))
        .collect()
}

/// A universe of 2..=`max_nodes` finite nodes and 1..=3 determinations on it.
pub fn random_fdets(rng: &mut impl Rng, max_nodes: usize) -> (BTreeMap<NodeId, Domain>, Vec<FDet>) {
    let n = rng.random_range(2..=max_nodes);
    let universe: BTreeMap<NodeId, Domain> = (0..n)
        .map(|i| {
            (
                NodeId::new(format!("F{i}")),
                Domain::Finite(int_domain(rng.random_range(1..=3))),
            )
        })
        .collect();
    let names: Vec<NodeId> = universe.keys().cloned().collect();
    let count = rng.random_range(1..=3);
    let mut fdets = Vec::with_capacity(count);
    for _ in 0..count {
        let mut order = names.clone();
        order.shuffle(rng);
        let split = rng.random_range(1..n);
        let sources = order[..split].to_vec();
        let rest = &order[split..];
        let take = rng.random_range(1..=rest.len());
        let targets = rest[..take].to_vec();
        let target_domains: Vec<Vec<Value>> = targets
            .iter()
            .map(|t| universe[t].values().unwrap().to_vec())
            .collect();
        let mut choose = |_: &[Value]| -> Vec<Value> {
            target_domains
                .iter()
                .map(|d| d[rng.random_range(0..d.len())].clone())
                .collect()
        };
        let src: Vec<&[Value]> = sources
            .iter()
            .map(|s| universe[s].values().unwrap())
            .collect();
        let map: BTreeMap<Vec<Value>, Vec<Value>> = product(&src)
            .map(|t| {
                let out = choose(&t);
                (t, out)
            })
            .collect();
        fdets.push(FDet::new(sources, targets, universe.clone(), map).unwrap());
    }
    (universe, fdets)
}

/// 1..=`max_nodes` nodes and each ordered pair, self-loops included, an
/// edge with a per-graph density.
pub fn random_digraph(
    rng: &mut impl Rng,
    max_nodes: usize,
) -> (BTreeSet<NodeId>, BTreeSet<(NodeId, NodeId)>) {
    let n = rng.random_range(1..=max_nodes);
    let nodes: Vec<NodeId> = (0..n).map(|i| NodeId::new(format!("G{i}"))).collect();
    let density = rng.random_range(0.0..1.0);
    let mut edges = BTreeSet::new();
    for a in &nodes {
        for b in &nodes {
            if rng.random_bool(density) {
                edges.insert((a.clone(), b.clone()));
            }
        }
    }
    (nodes.into_iter().collect(), edges)
}

fn random_row(rng: &mut impl Rng, domain: &[Value]) -> Distribution {
    loop {
        let weights: Vec<i64> = domain.iter().map(|_| rng.random_range(0..=4)).collect();
        let total: i64 = weights.iter().sum();
        if total == 0 {
            continue;
        }
        let support = domain
            .iter()
            .zip(&weights)
            .filter(|(_, w)| **w > 0)
            .map(|(v, w)| (v.clone(), BigRational::new((*w).into(), total.into())));
        return Distribution::new(support).unwrap();
    }
}

/// 1..=`max_nodes` nodes with 1..=`max_values` values and at most two parents.
pub fn random_bn(rng: &mut impl Rng, max_nodes: usize, max_values: usize) -> BayesNet {
    let n = rng.random_range(1..=max_nodes);
    let mut nodes: Vec<BnNode> = Vec::with_capacity(n);
    for i in 0..n {
        let domain = int_domain(rng.random_range(1..=max_values));
        let mut ps: Vec<usize> = (0..i).filter(|_| rng.random_bool(0.5)).collect();
        ps.shuffle(rng);
        ps.truncate(2);
        let slices: Vec<&[Value]> = ps.iter().map(|p| nodes[*p].domain.as_slice()).collect();
        let rows: Vec<Vec<Value>> = product(&slices).collect();
        let cpt = rows
            .into_iter()
            .map(|t| (t, random_row(rng, &domain)))
            .collect();
        let parents = ps.iter().map(|p| nodes[*p].name.clone()).collect();
        nodes.push(BnNode {
            name: NodeId::new(format!("X{i}")),
            domain,
            parents,
            cpt,
        });
    }
    BayesNet::new(nodes).unwrap()
}

/// `random_model` with every node random and a distribution on every
/// exo-node. Exo-nodes with equal domains may share a noise source.
pub fn random_prob_model(rng: &mut impl Rng) -> sfm_core::prob::ProbSfm {
    use sfm_core::prob::{extend, RandomValue};
    let m = random_model(rng, 5, 3);
    let mut sources: BTreeMap<String, Distribution> = BTreeMap::new();
    let mut dists = BTreeMap::new();
    for u in m.exo_nodes() {
        let domain = m.domain(u).and_then(Domain::values).unwrap().to_vec();
        let name = format!("s{}_{}", domain.len(), rng.random_range(0..2));
        let dist = match sources.get(&name) {
            Some(d) => d.clone(),
            None => {
                let d = random_row(rng, &domain);
                sources.insert(name.clone(), d.clone());
                d
            }
        };
        dists.insert(u.clone(), RandomValue::new(name, dist));
    }
    extend(&m, m.nodes(), dists).unwrap()
}

/// A well-formed document over `random_model`, with a random section and,
/// usually, the expectation the runner would produce.
pub fn random_scenario(rng: &mut impl Rng) -> sfm_core::scenarios::ScenarioDoc {
    use sfm_core::scenarios::{Expectation, ScenarioDoc, Section};
    use sfm_core::{csp_solve, vfi};
    let model = random_model(rng, 5, 3);
    let world = |rng: &mut _| vfi(&model, &random_exo(rng, &model)).unwrap().world;
    let (section, expect) = match rng.random_range(0..5) {
        0 => (
            Section::Default {
                default: world(rng),
                actual: world(rng),
            },
            None,
        ),
        1 => (
            Section::Tweak {
                actual: world(rng),
                tweak: random_exo_fragment(rng, &model),
            },
            None,
        ),
        2 => {
            let exo = random_exo(rng, &model);
            let w = vfi(&model, &exo).unwrap().world;
            (Section::Vfi { exo }, Some(Expectation::Answer(vec![w])))
        }
        3 => {
            let known = random_fragment(rng, &model, 0.3);
            let targets = random_subset(rng, model.nodes(), 0.5);
            let answers = csp_solve(&model, &known, &targets, usize::MAX).unwrap();
            let expect = (!answers.is_empty()).then_some(Expectation::Answer(answers));
            (Section::Csp { known, targets }, expect)
        }
        _ => {
            let claims = (0..rng.random_range(1..=3))
                .map(|_| {
                    (
                        random_subset(rng, model.nodes(), 0.5),
                        random_subset(rng, model.nodes(), 0.5),
                    )
                })
                .collect();
            (
                Section::Fd { claims },
                rng.random_bool(0.5).then_some(Expectation::Holds),
            )
        }
    };
    let expect = expect.filter(|_| rng.random_bool(0.8));
    ScenarioDoc {
        model,
        section,
        expect,
    }
}

/// `text` with a few random byte-level edits: deletion, duplication,
/// insertion of a random printable or structural byte, or a swap.
pub fn mutate(rng: &mut impl Rng, text: &[u8]) -> Vec<u8> {
    const PIECES: &[u8] = b"{}()[],:;\"-+*^!|&=<>/ \n\t0123456789abcXYZ";
    let mut out = text.to_vec();
    for _ in 0..rng.random_range(1..=4) {
        if out.is_empty() {
            out.push(PIECES[rng.random_range(0..PIECES.len())]);
            continue;
        }
        let i = rng.random_range(0..out.len());
        match rng.random_range(0..4) {
            0 => {
                let end = (i + rng.random_range(1..=8)).min(out.len());
                out.drain(i..end);
            }
            1 => {
                let end = (i + rng.random_range(1..=8)).min(out.len());
                let piece: Vec<u8> = out[i..end].to_vec();
                out.splice(i..i, piece);
            }
            2 => out.insert(i, PIECES[rng.random_range(0..PIECES.len())]),
            _ => {
                let j = rng.random_range(0..out.len());
                out.swap(i, j);
            }
        }
    }
    out
}

/// Raw fuzz input: arbitrary bytes, biased toward the language's alphabet.
pub fn random_bytes(rng: &mut impl Rng) -> Vec<u8> {
    let len = rng.random_range(0..64);
    (0..len)
        .map(|_| {
            if rng.random_bool(0.7) {
                b"model{node exo endo}()A:1,"[rng.random_range(0..26)]
            } else {
                rng.random()
            }
        })
        .collect()
}
