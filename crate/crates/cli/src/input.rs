//! Reading model, scenario, edge-list and CPT files, and parsing flag values.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use sfm_core::prob::{parse_probability, Distribution};
use sfm_core::scenarios::{
    parse_assignment, parse_model, parse_scenario_with, parse_value, ScenarioDoc,
};
use sfm_core::{vfi, Assignment, NodeId, Sfm, SfmError};

/// A failure with its exit status.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<SfmError> for CliError {
    fn from(e: SfmError) -> Self {
        let code = if matches!(e, SfmError::BudgetExceeded { .. }) {
            3
        } else {
            2
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn read_text(path: &Path) -> CliResult<String> {
    let bytes = fs::read(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    String::from_utf8(bytes)
        .map_err(|_| CliError::usage(format!("{}: not valid UTF-8", path.display())))
}

/// A bare model file or a full scenario document.
pub struct Loaded {
    pub model: Sfm,
    pub doc: Option<ScenarioDoc>,
}

pub fn load(path: &Path) -> CliResult<Loaded> {
    let text = read_text(path)?;
    if let Ok(model) = parse_model(&text) {
        return Ok(Loaded { model, doc: None });
    }
    let base = path.parent().unwrap_or(Path::new(".")).to_path_buf();
    let resolve = |rel: &str| fs::read_to_string(base.join(rel)).map_err(|e| e.to_string());
    let doc = parse_scenario_with(&text, &resolve)
        .map_err(|e| CliError::usage(format!("{}:{e}", path.display())))?;
    Ok(Loaded {
        model: doc.model.clone(),
        doc: Some(doc),
    })
}

pub fn assignment_arg(flag: &str, text: &str, model: &Sfm) -> CliResult<Assignment> {
    parse_assignment(text, model).map_err(|e| CliError::usage(format!("--{flag}: {e}")))
}

pub fn node_list(flag: &str, text: &str, model: &Sfm) -> CliResult<BTreeSet<NodeId>> {
    let mut out = BTreeSet::new();
    for name in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if !model.contains(name) {
            return Err(CliError::usage(format!("--{flag}: unknown node `{name}`")));
        }
        out.insert(NodeId::new(name));
    }
    Ok(out)
}

/// A complete world from `given`: returned as is when complete, otherwise
/// its exo part is run forward and must agree with every endo value given.
pub fn complete_world(flag: &str, given: &Assignment, model: &Sfm) -> CliResult<Assignment> {
    if given.len() == model.nodes().len() {
        return Ok(given.clone());
    }
    let exo = given.restrict(model.exo_nodes());
    if exo.len() != model.exo_nodes().len() {
        let missing: Vec<&str> = model
            .exo_nodes()
            .iter()
            .filter(|u| !exo.contains(u))
            .map(|u| u.as_str())
            .collect();
        return Err(CliError::usage(format!(
            "--{flag}: no value for exo-node(s) {}",
            missing.join(", ")
        )));
    }
    let world = vfi(model, &exo)?.world;
    if let Some(node) = given.changed_nodes(&world).into_iter().next() {
        return Err(CliError::usage(format!(
            "--{flag}: `{node}` is {} but the model gives {}",
            given.get(&node).unwrap(),
            world.get(&node).unwrap()
        )));
    }
    Ok(world)
}

pub type Graph = (BTreeSet<NodeId>, BTreeSet<(NodeId, NodeId)>);

/// `SRC DST` per line; a single name declares an isolated node. `#` starts a comment.
pub fn edge_list(text: &str) -> CliResult<Graph> {
    let mut nodes = BTreeSet::new();
    let mut edges = BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let cols: Vec<&str> = raw
            .split('#')
            .next()
            .unwrap_or("")
            .split_whitespace()
            .collect();
        match cols[..] {
            [] => {}
            [n] => {
                nodes.insert(NodeId::new(n));
            }
            [a, b] => {
                nodes.insert(NodeId::new(a));
                nodes.insert(NodeId::new(b));
                edges.insert((NodeId::new(a), NodeId::new(b)));
            }
            _ => {
                return Err(CliError::usage(format!(
                    "line {}: expected `SRC DST`",
                    i + 1
                )))
            }
        }
    }
    Ok((nodes, edges))
}

/// One `--dist` flag: node, noise source and law.
pub struct DistSpec {
    pub node: NodeId,
    pub source: String,
    pub dist: Distribution,
}

pub fn dist_arg(text: &str, model: &Sfm) -> CliResult<DistSpec> {
    let bad = |msg: String| CliError::usage(format!("--dist `{text}`: {msg}"));
    let (node, rest) = text
        .split_once('=')
        .ok_or_else(|| bad("expected NODE=LAW".into()))?;
    let node = NodeId::new(node.trim());
    let domain = model
        .domain(&node)
        .ok_or_else(|| bad(format!("unknown node `{node}`")))?
        .values()
        .ok_or_else(|| bad(format!("`{node}` has a real-line domain")))?
        .to_vec();
    let rest = rest.trim();
    let (source, law) = match rest.find('{') {
        Some(0) | None => (node.to_string(), rest),
        Some(i) => {
            let s = rest[..i].trim().trim_end_matches(':').trim();
            (s.to_string(), &rest[i..])
        }
    };
    let (source, law) = match law {
        "uniform" => (source, None),
        l if l.ends_with(":uniform") => (l.trim_end_matches(":uniform").to_string(), None),
        l => (source, Some(l)),
    };
    let dist = match law {
        None => Distribution::uniform(domain),
        Some(l) => {
            let body = l
                .strip_prefix('{')
                .and_then(|l| l.strip_suffix('}'))
                .ok_or_else(|| bad("law must be `{v:p, ...}` or `uniform`".into()))?;
            let mut support = Vec::new();
            for item in body.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let (v, p) = item
                    .rsplit_once(':')
                    .ok_or_else(|| bad(format!("`{item}` is not v:p")))?;
                let v = parse_value(v.trim()).map_err(|e| bad(e.to_string()))?;
                let p = parse_probability(p)
                    .ok_or_else(|| bad(format!("`{p}` is not a probability")))?;
                support.push((v, p));
            }
            Distribution::new(support)
        }
    }
    .map_err(bad)?;
    Ok(DistSpec { node, source, dist })
}

/// Distinct `--dist` nodes, keyed by node.
pub fn dist_args(texts: &[String], model: &Sfm) -> CliResult<BTreeMap<NodeId, DistSpec>> {
    let mut out = BTreeMap::new();
    for t in texts {
        let parsed = dist_arg(t, model)?;
        if out.contains_key(&parsed.node) {
            return Err(CliError::usage(format!(
                "--dist: `{}` given twice",
                parsed.node
            )));
        }
        out.insert(parsed.node.clone(), parsed);
    }
    Ok(out)
}
