use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn sfm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sfm"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn file(name: &str) -> String {
    corpus().join(name).to_string_lossy().into_owned()
}

#[test]
fn scenario_run_reports_every_case() {
    let o = sfm(&["scenario", "run", corpus().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(
        stdout(&o).ends_with("26 passed, 0 failed\n"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn failing_expectation_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.sfm");
    std::fs::write(
        &path,
        "model {\n  node A exo domain {0, 1}\n  node B endo parents (A) domain {0, 1} expr A\n}\n\
         default {A:0, B:0}\nactual {A:1, B:1}\nexpect cause {A:1} effect {}\n",
    )
    .unwrap();
    let o = sfm(&["scenario", "run", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("FAIL"));
}

#[test]
fn tweak_contrast_prints_the_utterance() {
    let o = sfm(&[
        "contrast",
        &file("07b-or-squad-tweak.sfm"),
        "--tweak",
        "Assassin1:0",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "{Assassin1:1} causes nothing\n");
    let o = sfm(&[
        "contrast",
        &file("models/assassin.model"),
        "--actual",
        "Assassin:1",
        "--default",
        "Assassin:0",
    ]);
    assert_eq!(stdout(&o), "{Assassin:1} causes {Death:1}\n");
}

#[test]
fn inference_and_queries() {
    let o = sfm(&["infer", &file("15a-shakespeare-subjunctive.sfm")]);
    assert_eq!(
        stdout(&o),
        "{Shakespeare:0, Writer2:1, Hamlet:1}\nevaluations: 2\n"
    );
    let o = sfm(&[
        "infer",
        &file("15a-shakespeare-subjunctive.sfm"),
        "--targets",
        "Writer2",
    ]);
    assert_eq!(stdout(&o), "{Writer2:1}\nevaluations: 1\n");
    let o = sfm(&["csp", &file("15b-shakespeare-indicative.sfm")]);
    assert_eq!(stdout(&o), "{Writer2:1}\n");
    let o = sfm(&[
        "csp",
        &file("models/or_firing_squad.model"),
        "--known",
        "Death:0",
        "--targets",
        "Assassin1",
    ]);
    assert_eq!(stdout(&o), "{Assassin1:0}\n");
}

#[test]
fn usage_and_parse_errors_exit_two() {
    let o = sfm(&["infer", &file("models/assassin.model"), "--exo", "Nope:1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown node"));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.sfm");
    std::fs::write(&path, "model {\n  node A exo domain {0, 1\n}\n").unwrap();
    let o = sfm(&["validate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("broken.sfm:4:1: unexpected end of input"));
    assert_eq!(sfm(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn budget_errors_exit_three() {
    let o = sfm(&[
        "team",
        &file("models/or_firing_squad.model"),
        "--budget",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let o = sfm(&["team", &file("models/or_firing_squad.model")]);
    assert!(stdout(&o).ends_with("4 worlds\n"));
}

#[test]
fn dependencies_and_witnesses() {
    let o = sfm(&["fd", &file("16-impossible-interventions.sfm")]);
    assert_eq!(o.status.code(), Some(0));
    let o = sfm(&[
        "fd",
        &file("models/or_firing_squad.model"),
        "--x",
        "Assassin1",
        "--y",
        "Death",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("(Assassin1) -> (Death): fails"));
    let dir = tempfile::tempdir().unwrap();
    let cyclic = dir.path().join("cyclic.txt");
    std::fs::write(&cyclic, "A B\nB A\n").unwrap();
    assert_eq!(
        stdout(&sfm(&["gmt", cyclic.to_str().unwrap()])),
        "cycle: A B A\n"
    );
    let rooted = dir.path().join("rooted.txt");
    std::fs::write(&rooted, "A B\nB C\n").unwrap();
    assert_eq!(
        stdout(&sfm(&["gmt", rooted.to_str().unwrap()])),
        "root: A\n"
    );
}

#[test]
fn probability_commands() {
    let model = file("models/or_firing_squad.model");
    let o = sfm(&[
        "prob",
        "push",
        &model,
        "--dist",
        "Assassin1=s:uniform",
        "--dist",
        "Assassin2=s:uniform",
        "--nodes",
        "Death",
    ]);
    assert_eq!(stdout(&o), "{Death:0}  1/2\n{Death:1}  1/2\n");
    let args = [
        "prob",
        "sample",
        &model,
        "--dist",
        "Assassin1={0:1/2, 1:1/2}",
        "--dist",
        "Assassin2=uniform",
        "--seed",
        "5",
        "--compare",
    ];
    let a = stdout(&sfm(&args));
    assert_eq!(a, stdout(&sfm(&args)));
    let tv: f64 = a
        .lines()
        .last()
        .unwrap()
        .trim_start_matches("total variation: ")
        .parse()
        .unwrap();
    assert!(tv < 0.01);
    let dir = tempfile::tempdir().unwrap();
    let cpt = dir.path().join("rain.cpt");
    std::fs::write(&cpt, "Rain - 1 1/5\nRain - 0 4/5\nWet Rain=1 1 9/10\nWet Rain=1 0 1/10\nWet Rain=0 1 1/4\nWet Rain=0 0 3/4\n").unwrap();
    let o = sfm(&["prob", "push", cpt.to_str().unwrap(), "--nodes", "Rain,Wet"]);
    assert_eq!(stdout(&o), "{Rain:0, Wet:0}  3/5\n{Rain:0, Wet:1}  1/5\n{Rain:1, Wet:0}  1/50\n{Rain:1, Wet:1}  9/50\n");
    let o = sfm(&["prob", "import-bn", cpt.to_str().unwrap()]);
    assert!(stdout(&o).contains("U_Wet ~ U_Wet {0: 1/4, 1/4: 13/20, 9/10: 1/10}"));
}

#[test]
fn json_output_and_bench() {
    let o = sfm(&[
        "--format",
        "json",
        "contrast",
        &file("01a-assassin-default.sfm"),
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["utterance"], "{Assassin:1} causes {Death:1}");
    assert_eq!(v["cause"]["Assassin"], 1);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("light.model");
    std::fs::write(
        &path,
        "model {\n  node LightSwitch exo domain {0, 1}\n  node TVSwitch exo domain {0, 1}\n  \
         node Light endo parents (LightSwitch) domain {0, 1} expr LightSwitch\n  \
         node TV endo parents (TVSwitch) domain {0, 1} expr TVSwitch\n}\n",
    )
    .unwrap();
    let o = sfm(&[
        "--format",
        "json",
        "bench",
        path.to_str().unwrap(),
        "--actual",
        "LightSwitch:0, TVSwitch:0",
        "--tweak",
        "LightSwitch:1",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(
        (v["total_vfi"].as_u64(), v["total_cfi"].as_u64()),
        (Some(2), Some(1))
    );
}
