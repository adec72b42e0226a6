use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use candidacy::fixtures::FILES;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

fn fx(name: &str) -> String {
    fixtures().join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_candidacy"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

/// Copies every bundled fixture into a fresh directory.
fn fixture_copy() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in FILES {
        fs::write(dir.path().join(name), text).unwrap();
    }
    dir
}

#[test]
fn borda_winner_of_example1() {
    let o = run(&[
        "winner",
        "--rule",
        "borda",
        "--profile",
        &fx("example1.prof"),
        "--subset",
        "abcd",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "c\n");
    let o = run(&[
        "winner",
        "--rule",
        "borda",
        "--profile",
        &fx("example1.prof"),
        "--subset",
        "1110",
    ]);
    assert_eq!(stdout(&o), "a\n");
}

#[test]
fn maximin_winner_from_tournament() {
    let o = run(&[
        "winner",
        "--rule",
        "maximin",
        "--tournament",
        &fx("maximin5.wt"),
        "--subset",
        "abcde",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "e\n");
}

#[test]
fn singleton_wins_under_plurality() {
    let o = run(&[
        "winner",
        "--rule",
        "plurality",
        "--profile",
        &fx("plurality13.prof"),
        "--subset",
        "a",
    ]);
    assert_eq!(stdout(&o), "a\n");
}

#[test]
fn full_choice_table_reparses() {
    let o = run(&["winner", "--rule", "uc", "--profile", &fx("example1.prof"), "--all"]);
    assert_eq!(code(&o), 0);
    let text = format!("candidates: a b c d\n{}", stdout(&o));
    let cf = candidacy::format::parse_choice_function(&text).unwrap().choice;
    assert_eq!(cf.entries().count(), 15);
}

#[test]
fn plurality_counterexample_has_no_ne() {
    let o = run(&[
        "equilibria",
        "--kind",
        "ne",
        "--rule",
        "plurality",
        "--profile",
        &fx("plurality13.prof"),
        "--prefs",
        &fx("plurality13.prefs"),
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "0 NE\n");
}

#[test]
fn strong_equilibria_of_example1_include_1110() {
    let o = run(&[
        "equilibria",
        "--kind",
        "se",
        "--rule",
        "borda",
        "--profile",
        &fx("example1.prof"),
        "--prefs",
        &fx("example1.prefs"),
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).lines().any(|l| l.starts_with("1110 ")), "{}", stdout(&o));
}

#[test]
fn borda_remark_game_has_no_2ne() {
    let args = [
        "--json",
        "equilibria",
        "--kind",
        "kne",
        "--k",
        "2",
        "--rule",
        "borda",
        "--profile",
        &fx("borda-2ne.prof"),
        "--prefs",
        &fx("borda-2ne.prefs"),
    ];
    let o = run(&args);
    assert_eq!(code(&o), 0);
    let lines: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 1);
    assert_eq!(lines[0]["count"], 0);
    assert_eq!(lines[0]["summary"], "2-NE");
}

#[test]
fn classifying_every_state_with_the_bridge() {
    let o = run(&[
        "--json",
        "equilibria",
        "--all",
        "--bridge",
        "--rule",
        "borda",
        "--profile",
        &fx("borda-2ne.prof"),
        "--prefs",
        &fx("borda-2ne.prefs"),
    ]);
    assert_eq!(code(&o), 0);
    let records: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(records.len(), 17);
    for r in &records[..16] {
        assert_eq!(r["bridge_agrees"], true);
        assert_eq!(r["witness"].is_null(), r["se"] == true);
    }
    let ne: Vec<&str> = records[..16]
        .iter()
        .filter(|r| r["ne"] == true)
        .map(|r| r["state"].as_str().unwrap())
        .collect();
    assert_eq!(ne, ["1101", "0111"]);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let args = [
        "dynamics",
        "--activation",
        "random",
        "--seed",
        "9",
        "--rule",
        "plurality",
        "--profile",
        &fx("plurality13.prof"),
        "--prefs",
        &fx("plurality13.prefs"),
    ];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).lines().last().unwrap().starts_with("cycle at "));
}

#[test]
fn control_instance_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dcdc.ctl");
    let body = format!(
        "mode: dcdc\nconsenting: yes\ndistinguished: c\nbudget: 1\nrule: borda\n[profile]\n{}[preferences]\n{}",
        fs::read_to_string(fixtures().join("example1.prof")).unwrap(),
        fs::read_to_string(fixtures().join("example1.prefs")).unwrap()
    );
    fs::write(&path, &body).unwrap();
    let o = run(&["--json", "control", "--instance", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(
        (v["decision"].as_bool(), v["removed"].as_str()),
        (Some(true), Some("d"))
    );

    fs::write(&path, body.replace("budget: 1", "budget: 0")).unwrap();
    let o = run(&["control", "--instance", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("no"));

    fs::write(&path, body.replace("mode: dcdc", "mode: dcxx")).unwrap();
    let o = run(&["control", "--instance", path.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
}

#[test]
fn search_writes_solution_files() {
    let dir = tempfile::tempdir().unwrap();
    let (cf, prefs) = (dir.path().join("s.cf"), dir.path().join("s.prefs"));
    let o = run(&[
        "search",
        "--m",
        "4",
        "--seed",
        "3",
        "--choice-out",
        cf.to_str().unwrap(),
        "--prefs-out",
        prefs.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("sat m=4"));
    let choice = candidacy::format::parse_choice_function(&fs::read_to_string(&cf).unwrap())
        .unwrap()
        .choice;
    let p = candidacy::format::parse_preferences(&fs::read_to_string(&prefs).unwrap(), choice.candidates()).unwrap();
    assert!(candidacy::search::verify_no_ne(&choice, &p).unwrap());
}

#[test]
fn search_statuses_and_exit_codes() {
    assert!(stdout(&run(&["search", "--m", "3"])).starts_with("unsat"));
    assert!(stdout(&run(&["search", "--m", "4", "--borda"])).starts_with("unsat"));
    assert_eq!(code(&run(&["search", "--m", "5", "--node-limit", "2"])), 4);
    assert_eq!(code(&run(&["search", "--m", "9"])), 2);
}

#[test]
fn paper_verify_passes_on_pristine_fixtures() {
    let o = run(&["paper-verify"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let dir = fixture_copy();
    let o = run(&["paper-verify", "--fixtures", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.lines().filter(|l| l.starts_with("PASS ")).count() >= 10);
    assert!(!out.contains("FAIL"));
}

#[test]
fn paper_verify_flags_a_mutated_ballot() {
    let dir = fixture_copy();
    let path = dir.path().join("example1.prof");
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.contains("1: a b c d"));
    fs::write(&path, text.replace("1: a b c d", "1: d b c a")).unwrap();
    let o = run(&["paper-verify", "--fixtures", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("FAIL borda-example1-outcomes"), "{}", stdout(&o));
}

#[test]
fn paper_verify_with_a_missing_fixture() {
    let dir = fixture_copy();
    fs::remove_file(dir.path().join("g3.wt")).unwrap();
    let o = run(&["paper-verify", "--fixtures", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}

#[test]
fn paper_verify_filter_runs_only_matching_checks() {
    let o = run(&["paper-verify", "--filter", "maximin"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let checks: Vec<&str> = out
        .lines()
        .filter(|l| l.starts_with("PASS") || l.starts_with("FAIL"))
        .collect();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|l| l.contains("maximin")));
    assert_eq!(code(&run(&["paper-verify", "--filter", "nothing-matches"])), 2);
}

#[test]
fn input_errors_map_to_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.prof");
    fs::write(&bad, "candidates: a b c\n1: a b c\n2: a b\n").unwrap();
    let o = run(&["winner", "--rule", "borda", "--profile", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    let o = run(&["winner", "--rule", "plurality", "--tournament", &fx("maximin5.wt")]);
    assert_eq!(code(&o), 3);
    let o = run(&["winner", "--rule", "approval", "--profile", &fx("example1.prof")]);
    assert_eq!(code(&o), 2);
    let o = run(&["winner", "--rule", "borda", "--profile", "/no/such/file.prof"]);
    assert_eq!(code(&o), 2);
}
