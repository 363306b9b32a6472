//! JSON shapes. Integers and booleans map to JSON scalars; rationals and
//! symbols to their text form.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value as Json};
use sfm_core::prob::{Distribution, Probability};
use sfm_core::{Assignment, NodeId, Value};

pub fn value(v: &Value) -> Json {
    match v {
        Value::Int(n) => json!(n),
        Value::Bool(b) => json!(b),
        other => json!(other.to_string()),
    }
}

pub fn assignment(a: &Assignment) -> Json {
    Json::Object(
        a.iter()
            .map(|(n, v)| (n.to_string(), value(v)))
            .collect::<Map<_, _>>(),
    )
}

pub fn nodes<'a>(ns: impl IntoIterator<Item = &'a NodeId>) -> Json {
    ns.into_iter().map(|n| json!(n.as_str())).collect()
}

pub fn probability(p: &Probability) -> String {
    if p.is_integer() {
        p.numer().to_string()
    } else {
        format!("{}/{}", p.numer(), p.denom())
    }
}

/// `{v: p, ...}`.
pub fn distribution(d: &Distribution) -> String {
    let parts: Vec<String> = d
        .support()
        .iter()
        .map(|(v, p)| format!("{v}: {}", probability(p)))
        .collect();
    format!("{{{}}}", parts.join(", "))
}

pub fn law(l: &BTreeMap<Assignment, Probability>, order: &[NodeId]) -> (String, Json) {
    let mut text = String::new();
    let mut rows = Vec::new();
    for (w, p) in l {
        text.push_str(&format!(
            "{}  {}\n",
            w.render_ordered(order),
            probability(p)
        ));
        rows.push(json!({ "world": assignment(w), "probability": probability(p) }));
    }
    (text, Json::Array(rows))
}

pub fn pretty(j: &Json) -> String {
    let mut s = serde_json::to_string_pretty(j).expect("JSON values serialize");
    s.push('\n');
    s
}
