//! One function per subcommand. Each returns the rendered output and
//! whether the check it performs passed.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde_json::{json, Value as Json};
use sfm_core::prob::{
    bn_import, extend, marginal, parse_cpt, push_forward, sample, total_variation, ProbSfm,
    RandomValue,
};
use sfm_core::scenarios::{
    print_model, print_scenario, run_corpus, run_file, CorpusReport, Section,
};
use sfm_core::{
    bench_eval_counts, contrast_default, contrast_tweak, csp_solve, enumerate_team, fd_holds,
    gmt_witness, partial_fi, utterance_of, vfi, Assignment, Budget, NodeId, Sfm, Team, Witness,
};

use crate::input::{
    assignment_arg, complete_world, dist_args, edge_list, load, node_list, read_text, CliError,
    CliResult,
};
use crate::render;
use crate::{Cli, Command, Format, Global, ProbAction, ProbModel, ScenarioAction};

pub struct Output {
    pub text: String,
    pub passed: bool,
}

fn emit(g: &Global, text: String, json: Json) -> Output {
    let text = match g.format {
        Format::Text => text,
        Format::Json => render::pretty(&json),
    };
    Output { text, passed: true }
}

pub fn run(cli: &Cli) -> CliResult<Output> {
    let g = &cli.global;
    match &cli.command {
        Command::Validate { file } => validate(g, file),
        Command::Infer { file, exo, targets } => infer(g, file, exo.as_deref(), targets.as_deref()),
        Command::Contrast {
            file,
            actual,
            default,
            tweak,
        } => contrast(
            g,
            file,
            actual.as_deref(),
            default.as_deref(),
            tweak.as_deref(),
        ),
        Command::Csp {
            file,
            known,
            targets,
        } => csp(g, file, known.as_deref(), targets.as_deref()),
        Command::Scenario {
            action: ScenarioAction::Run { path },
        } => scenario_run(g, path),
        Command::Scenario {
            action: ScenarioAction::Print { file },
        } => {
            let l = load(file)?;
            let text = match &l.doc {
                Some(doc) => print_scenario(doc),
                None => print_model(&l.model),
            };
            Ok(emit(g, text.clone(), json!({ "text": text })))
        }
        Command::Team { file } => team(g, file),
        Command::Fd { file, x, y } => fd(g, file, x.as_deref(), y.as_deref()),
        Command::Gmt { file } => gmt(g, file),
        Command::Prob {
            action: ProbAction::Push { model },
        } => prob_push(g, model),
        Command::Prob {
            action:
                ProbAction::Sample {
                    model,
                    samples,
                    compare,
                },
        } => prob_sample(g, model, *samples, *compare),
        Command::Prob {
            action: ProbAction::ImportBn { file },
        } => import_bn(g, file),
        Command::Bench {
            file,
            actual,
            tweak,
        } => bench(g, file, actual, tweak),
    }
}

fn validate(g: &Global, file: &Path) -> CliResult<Output> {
    let l = match load(file) {
        Ok(l) => l,
        Err(e) if e.message.contains("invalid model") => {
            let mut out = emit(
                g,
                format!("invalid: {}\n", e.message),
                json!({ "valid": false, "error": e.message }),
            );
            out.passed = false;
            return Ok(out);
        }
        Err(e) => return Err(e),
    };
    let m = &l.model;
    let order: Vec<&str> = m.topological_order().iter().map(|n| n.as_str()).collect();
    let text = format!(
        "valid: {} nodes ({} exo, {} endo), {} edges\norder: {}\n",
        m.nodes().len(),
        m.exo_nodes().len(),
        m.endo_nodes().len(),
        m.edges().len(),
        order.join(" ")
    );
    let json = json!({
        "valid": true,
        "exo": render::nodes(m.exo_nodes()),
        "endo": render::nodes(m.endo_nodes()),
        "edges": m.edges().len(),
        "order": order,
    });
    Ok(emit(g, text, json))
}

fn infer(g: &Global, file: &Path, exo: Option<&str>, targets: Option<&str>) -> CliResult<Output> {
    let l = load(file)?;
    let m = &l.model;
    let exo = match (exo, l.doc.as_ref().map(|d| &d.section)) {
        (Some(t), _) => assignment_arg("exo", t, m)?,
        (None, Some(Section::Vfi { exo })) => exo.clone(),
        _ => return Err(CliError::usage("--exo is required")),
    };
    let order = m.topological_order();
    match targets {
        None => {
            let r = vfi(m, &exo)?;
            let text = format!(
                "{}\nevaluations: {}\n",
                r.world.render_ordered(order),
                r.total_evals()
            );
            Ok(emit(
                g,
                text,
                json!({ "world": render::assignment(&r.world), "evaluations": r.total_evals() }),
            ))
        }
        Some(t) => {
            let targets = node_list("targets", t, m)?;
            let r = partial_fi(m, &exo, &targets)?;
            let text = format!(
                "{}\nevaluations: {}\n",
                r.values.render_ordered(order),
                r.total_evals()
            );
            Ok(emit(
                g,
                text,
                json!({ "values": render::assignment(&r.values), "evaluations": r.total_evals() }),
            ))
        }
    }
}

fn contrast(
    g: &Global,
    file: &Path,
    actual: Option<&str>,
    default: Option<&str>,
    tweak: Option<&str>,
) -> CliResult<Output> {
    let l = load(file)?;
    let m = &l.model;
    let (doc_actual, doc_default, doc_tweak) = match l.doc.as_ref().map(|d| &d.section) {
        Some(Section::Default { default, actual }) => (Some(actual), Some(default), None),
        Some(Section::Tweak { actual, tweak }) => (Some(actual), None, Some(tweak)),
        _ => (None, None, None),
    };
    let actual = match actual {
        Some(t) => assignment_arg("actual", t, m)?,
        None => doc_actual
            .cloned()
            .ok_or_else(|| CliError::usage("--actual is required"))?,
    };
    let actual = complete_world("actual", &actual, m)?;
    let c = match (default, tweak) {
        (_, Some(t)) => contrast_tweak(m, &actual, &assignment_arg("tweak", t, m)?)?,
        (Some(d), None) => {
            let d = complete_world("default", &assignment_arg("default", d, m)?, m)?;
            contrast_default(m, &d, &actual)?
        }
        (None, None) => match (doc_default, doc_tweak) {
            (Some(d), _) => contrast_default(m, d, &actual)?,
            (_, Some(t)) => contrast_tweak(m, &actual, t)?,
            _ => return Err(CliError::usage("give --default or --tweak")),
        },
    };
    let u = utterance_of(&c);
    let json = json!({
        "utterance": u.to_string(),
        "cause": render::assignment(&u.cause),
        "effect": render::assignment(&u.effect),
        "actual": render::assignment(&c.actual),
        "contrastive": render::assignment(&c.contrastive),
    });
    Ok(emit(g, format!("{u}\n"), json))
}

fn csp(g: &Global, file: &Path, known: Option<&str>, targets: Option<&str>) -> CliResult<Output> {
    let l = load(file)?;
    let m = &l.model;
    let (doc_known, doc_targets) = match l.doc.as_ref().map(|d| &d.section) {
        Some(Section::Csp { known, targets }) => (Some(known), Some(targets)),
        _ => (None, None),
    };
    let known = match known {
        Some(t) => assignment_arg("known", t, m)?,
        None => doc_known.cloned().unwrap_or_default(),
    };
    let targets = match targets {
        Some(t) => node_list("targets", t, m)?,
        None => doc_targets
            .cloned()
            .ok_or_else(|| CliError::usage("--targets is required"))?,
    };
    let answers = csp_solve(m, &known, &targets, g.limit.unwrap_or(usize::MAX))?;
    let order = m.topological_order();
    let mut text: String = answers
        .iter()
        .map(|a| format!("{}\n", a.render_ordered(order)))
        .collect();
    if answers.is_empty() {
        text.push_str("no solutions\n");
    }
    Ok(emit(
        g,
        text,
        answers.iter().map(render::assignment).collect(),
    ))
}

fn scenario_run(g: &Global, path: &Path) -> CliResult<Output> {
    let io = |e: std::io::Error| CliError::usage(format!("{}: {e}", path.display()));
    let report = if path.is_dir() {
        run_corpus(path).map_err(io)?
    } else {
        CorpusReport {
            entries: vec![run_file(path).map_err(io)?],
        }
    };
    let width = report
        .entries
        .iter()
        .map(|e| e.name.len())
        .max()
        .unwrap_or(0);
    let mut text = String::new();
    let mut rows = Vec::new();
    for e in &report.entries {
        let (status, detail) = match &e.result {
            Ok(r) if r.passed == Some(false) => ("FAIL", r.to_string()),
            Ok(r) if r.passed.is_none() => ("RUN", r.to_string()),
            Ok(r) => ("PASS", r.to_string()),
            Err(msg) => ("ERROR", msg.clone()),
        };
        text.push_str(&format!("{status:<5} {:<width$}  {detail}\n", e.name));
        rows.push(json!({ "name": e.name, "status": status, "result": detail }));
    }
    let summary = format!("{} passed, {} failed", report.passed(), report.failed());
    text.push_str(&format!("{summary}\n"));
    let mut out = emit(
        g,
        text,
        json!({ "cases": rows, "passed": report.passed(), "failed": report.failed() }),
    );
    out.passed = report.failed() == 0;
    Ok(out)
}

fn team(g: &Global, file: &Path) -> CliResult<Output> {
    let l = load(file)?;
    let t = enumerate_team(&l.model, Budget(g.budget))?;
    let order = l.model.topological_order();
    let mut text: String = t
        .iter()
        .map(|w| format!("{}\n", w.render_ordered(order)))
        .collect();
    text.push_str(&format!("{} worlds\n", t.len()));
    Ok(emit(g, text, t.iter().map(render::assignment).collect()))
}

/// Two members that agree on `x` and differ on `y`.
fn counterexample(
    team: &Team,
    x: &BTreeSet<NodeId>,
    y: &BTreeSet<NodeId>,
) -> Option<(Assignment, Assignment)> {
    let mut seen: BTreeMap<Assignment, &Assignment> = BTreeMap::new();
    for w in team.iter() {
        let key = w.restrict(x);
        match seen.get(&key) {
            Some(other) if other.restrict(y) != w.restrict(y) => {
                return Some(((*other).clone(), w.clone()))
            }
            Some(_) => {}
            None => {
                seen.insert(key, w);
            }
        }
    }
    None
}

fn fd(g: &Global, file: &Path, x: Option<&str>, y: Option<&str>) -> CliResult<Output> {
    let l = load(file)?;
    let m = &l.model;
    let claims = match (x, y, l.doc.as_ref().map(|d| &d.section)) {
        (Some(x), Some(y), _) => vec![(node_list("x", x, m)?, node_list("y", y, m)?)],
        (None, None, Some(Section::Fd { claims })) => claims.clone(),
        _ => return Err(CliError::usage("give both --x and --y")),
    };
    let t = enumerate_team(m, Budget(g.budget))?;
    let order = m.topological_order();
    let names = |s: &BTreeSet<NodeId>| s.iter().map(|n| n.as_str()).collect::<Vec<_>>().join(", ");
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut all = true;
    for (x, y) in &claims {
        let holds = fd_holds(&t, x, y)?;
        all &= holds;
        text.push_str(&format!(
            "({}) -> ({}): {}\n",
            names(x),
            names(y),
            if holds { "holds" } else { "fails" }
        ));
        let mut row = json!({ "x": render::nodes(x), "y": render::nodes(y), "holds": holds });
        if let Some((a, b)) = counterexample(&t, x, y) {
            text.push_str(&format!(
                "  {}\n  {}\n",
                a.render_ordered(order),
                b.render_ordered(order)
            ));
            row["counterexample"] = json!([render::assignment(&a), render::assignment(&b)]);
        }
        rows.push(row);
    }
    let mut out = emit(g, text, Json::Array(rows));
    out.passed = all;
    Ok(out)
}

fn gmt(g: &Global, file: &Path) -> CliResult<Output> {
    let (nodes, edges) = edge_list(&read_text(file)?)
        .map_err(|e| CliError::usage(format!("{}: {}", file.display(), e.message)))?;
    let (text, json) = match gmt_witness(&nodes, &edges) {
        Witness::Root(r) => (format!("root: {r}\n"), json!({ "root": r.as_str() })),
        Witness::Cycle(c) => {
            let path: Vec<&str> = c.iter().map(|n| n.as_str()).collect();
            (
                format!("cycle: {}\n", path.join(" ")),
                json!({ "cycle": path }),
            )
        }
        Witness::Empty => ("empty graph\n".to_string(), json!({ "empty": true })),
    };
    Ok(emit(g, text, json))
}

fn is_cpt(path: &Path) -> bool {
    path.extension().is_some_and(|x| x == "cpt")
}

fn import(path: &Path) -> CliResult<ProbSfm> {
    let bn = parse_cpt(&read_text(path)?)
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    Ok(bn_import(&bn)?)
}

/// The probabilistic model, the fixed exo values, and the nodes to report.
fn prob_model(input: &ProbModel) -> CliResult<(ProbSfm, Assignment, Option<BTreeSet<NodeId>>)> {
    let pm = if is_cpt(&input.file) {
        if !input.dist.is_empty() {
            return Err(CliError::usage(
                "--dist does not apply to an imported network",
            ));
        }
        import(&input.file)?
    } else {
        let m = load(&input.file)?.model;
        let dists = dist_args(&input.dist, &m)?;
        if dists.is_empty() {
            return Err(CliError::usage("give at least one --dist"));
        }
        let random = m.descendants(dists.keys());
        let rvs = dists
            .into_values()
            .map(|d| (d.node, RandomValue::new(d.source, d.dist)))
            .collect();
        extend(&m, &random, rvs)?
    };
    let exo = match &input.exo {
        Some(t) => assignment_arg("exo", t, pm.base())?,
        None => Assignment::new(),
    };
    let nodes = input
        .nodes
        .as_deref()
        .map(|t| node_list("nodes", t, pm.base()))
        .transpose()?;
    Ok((pm, exo, nodes))
}

fn prob_push(g: &Global, input: &ProbModel) -> CliResult<Output> {
    let (pm, exo, nodes) = prob_model(input)?;
    let mut l = push_forward(&pm, &exo, Budget(g.budget))?;
    if let Some(ns) = &nodes {
        l = marginal(&l, ns);
    }
    let (text, json) = render::law(&l, pm.base().topological_order());
    Ok(emit(g, text, json))
}

fn prob_sample(g: &Global, input: &ProbModel, n: u64, compare: bool) -> CliResult<Output> {
    let (pm, exo, nodes) = prob_model(input)?;
    let raw = sample(&pm, &exo, g.seed, n)?;
    let mut counts: BTreeMap<Assignment, u64> = BTreeMap::new();
    for (w, c) in raw {
        let key = match &nodes {
            Some(ns) => w.restrict(ns),
            None => w,
        };
        *counts.entry(key).or_insert(0) += c;
    }
    let order = pm.base().topological_order();
    let mut text = String::new();
    let mut rows = Vec::new();
    for (w, c) in &counts {
        let freq = *c as f64 / n.max(1) as f64;
        text.push_str(&format!("{}  {c}  {freq:.5}\n", w.render_ordered(order)));
        rows.push(json!({ "world": render::assignment(w), "count": c, "frequency": freq }));
    }
    let mut json = json!({ "seed": g.seed, "samples": n, "counts": rows });
    if compare {
        let mut exact = push_forward(&pm, &exo, Budget(g.budget))?;
        if let Some(ns) = &nodes {
            exact = marginal(&exact, ns);
        }
        let tv = total_variation(&exact, &counts);
        text.push_str(&format!("total variation: {tv:.5}\n"));
        json["total_variation"] = json!(tv);
    }
    Ok(emit(g, text, json))
}

fn import_bn(g: &Global, file: &Path) -> CliResult<Output> {
    let pm = import(file)?;
    let mut text = print_model(pm.base());
    let mut noise = Vec::new();
    for (node, rv) in pm.exo_distributions() {
        text.push_str(&format!(
            "{node} ~ {} {}\n",
            rv.source,
            render::distribution(&rv.dist)
        ));
        let law: serde_json::Map<String, Json> = rv
            .dist
            .support()
            .iter()
            .map(|(v, p)| (v.to_string(), json!(render::probability(p))))
            .collect();
        noise.push(json!({ "node": node.as_str(), "source": rv.source, "law": law }));
    }
    Ok(emit(
        g,
        text,
        json!({ "model": print_model(pm.base()), "noise": noise }),
    ))
}

fn bench(g: &Global, file: &Path, actual: &str, tweaks: &[String]) -> CliResult<Output> {
    let m: Sfm = load(file)?.model;
    let reference = complete_world("actual", &assignment_arg("actual", actual, &m)?, &m)?;
    let tweaks = tweaks
        .iter()
        .map(|t| assignment_arg("tweak", t, &m))
        .collect::<CliResult<Vec<_>>>()?;
    let table = bench_eval_counts(&m, &reference, &tweaks)?;
    let width = table
        .rows
        .iter()
        .map(|r| r.tweak.to_string().len())
        .max()
        .unwrap_or(5)
        .max(5);
    let mut text = format!(
        "{:<width$}  {:>5}  {:>5}  {:>5}\n",
        "tweak", "vfi", "cfi", "saved"
    );
    let mut rows = Vec::new();
    for r in &table.rows {
        text.push_str(&format!(
            "{:<width$}  {:>5}  {:>5}  {:>5}\n",
            r.tweak.to_string(),
            r.vfi_evals,
            r.cfi_evals,
            r.saved()
        ));
        rows.push(json!({ "tweak": render::assignment(&r.tweak), "vfi": r.vfi_evals, "cfi": r.cfi_evals }));
    }
    text.push_str(&format!(
        "{:<width$}  {:>5}  {:>5}\n",
        "total",
        table.total_vfi(),
        table.total_cfi()
    ));
    Ok(emit(
        g,
        text,
        json!({ "rows": rows, "total_vfi": table.total_vfi(), "total_cfi": table.total_cfi() }),
    ))
}
