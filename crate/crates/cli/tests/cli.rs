use std::path::PathBuf;
use std::process::{Command, Output};

use extortion_core::files::ReportFile;
use extortion_core::{Decision, Rational};

const BIN: &str = env!("CARGO_BIN_EXE_extortion");

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("extortion-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn analyze_prints_threat_sentence_and_report() {
    let out = run(&["analyze", "--game", &data("concord.game"), "--threat", &data("concord_two_player.threat")]);
    assert!(out.status.success());
    assert!(stderr(&out).contains(
        "Either you pay me 2, or if you decline, I give 3 to player Column whenever they play L"
    ));
    let report = ReportFile::parse_str(&stdout(&out)).unwrap();
    assert_eq!(report.decision, Some(Decision::Accept));
    assert_eq!(report.bounds.c1_max.value, Rational::integer(4));
}

#[test]
fn analyze_writes_report_to_file() {
    let path = std::env::temp_dir().join(format!("extortion-out-{}.json", std::process::id()));
    let out = run(&[
        "analyze",
        "--game",
        &data("asym_concord.game"),
        "--threat",
        &data("asym_concord_internal.threat"),
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("worthwhile for extortioner: true"));
    let report = ReportFile::parse_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(report.worthwhile, Some(true));
    assert_eq!(report.extortioner.as_deref(), Some("Column"));
}

#[test]
fn declined_threat_still_exits_zero() {
    let threat = std::fs::read_to_string(data("concord_two_player.threat"))
        .unwrap()
        .replace("\"c1\": \"2\"", "\"c1\": \"5\"");
    let path = temp_file("decline.threat", &threat);
    let out = run(&["analyze", "--game", &data("concord.game"), "--threat", path.to_str().unwrap()]);
    assert!(out.status.success());
    let report = ReportFile::parse_str(&stdout(&out)).unwrap();
    assert_eq!(report.decision, Some(Decision::Decline));
}

#[test]
fn float_payoff_is_rejected() {
    let game = std::fs::read_to_string(data("concord.game")).unwrap().replace("[4, 4]", "[\"0.5\", 4]");
    let path = temp_file("float.game", &game);
    let out = run(&["analyze", "--game", path.to_str().unwrap(), "--threat", &data("concord_two_player.threat")]);
    assert!(!out.status.success());
    let err = stderr(&out);
    assert!(err.contains("error [format]"), "{err}");
    assert!(err.contains("floating-point literal"), "{err}");
    assert!(err.contains("use p/q"), "{err}");
}

#[test]
fn structural_error_carries_condition_label() {
    let game = r#"{"players": ["Row", "Column"], "strategies": [["T", "B"], ["L", "R"]],
                   "payoffs": [[[2, 2], [0, 0]], [[0, 0], [1, 1]]]}"#;
    let path = temp_file("coordination.game", game);
    let out = run(&["analyze", "--game", path.to_str().unwrap(), "--threat", &data("concord_two_player.threat")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("error [assumption-1]"), "{}", stderr(&out));
}

#[test]
fn bounds_two_player() {
    let out = run(&["bounds", "--game", &data("concord.game"), "--scenario", "two-player-external", "--extorted", "Row"]);
    assert!(out.status.success());
    let report = ReportFile::parse_str(&stdout(&out)).unwrap();
    assert!(report.feasible);
    assert_eq!(report.bounds.c1_max.value, Rational::integer(4));
    assert_eq!(report.bounds.c2_min.value, Rational::integer(2));
    assert_eq!(report.decision, None);
}

#[test]
fn bounds_reports_failed_restriction() {
    let out = run(&["bounds", "--game", &data("concord.game"), "--scenario", "one-player-external", "--extorted", "Row"]);
    assert!(out.status.success());
    let report = ReportFile::parse_str(&stdout(&out)).unwrap();
    assert!(!report.feasible);
    let failed = report.diagnostics.iter().find(|d| !d.holds).unwrap();
    assert_eq!(failed.condition.label(), "restriction-I");
    assert!(failed.detail.contains("co-player has dominant strategy"));
    assert!(stderr(&out).contains("first failed condition: restriction-I"));
}

#[test]
fn bounds_with_fixed_payment() {
    let out = run(&[
        "bounds", "--game", &data("asym_concord.game"), "--scenario", "one-player-external",
        "--extorted", "Row", "--c2", "3",
    ]);
    assert!(out.status.success());
    let report = ReportFile::parse_str(&stdout(&out)).unwrap();
    assert_eq!(report.bounds.c1_max.value, Rational::integer(3));
}

#[test]
fn bounds_rejects_both_parameters() {
    let out = run(&[
        "bounds", "--game", &data("asym_concord.game"), "--scenario", "one-player-external",
        "--extorted", "Row", "--c1", "1", "--c2", "3",
    ]);
    assert!(!out.status.success());
}

#[test]
fn demo_reports_round_trip_and_are_deterministic() {
    for name in ["concord", "asym-concord", "internal"] {
        let first = run(&["demo", name]);
        let second = run(&["demo", name]);
        assert!(first.status.success());
        assert_eq!(first.stdout, second.stdout, "{name}");
        let text = stdout(&first);
        let report = ReportFile::parse_str(&text).unwrap();
        assert_eq!(report.to_json(), text);
        assert_eq!(ReportFile::parse_str(&report.to_json()).unwrap(), report);
    }
}

#[test]
fn unknown_demo_fails() {
    assert!(!run(&["demo", "prisoners"]).status.success());
}

#[test]
fn scan_writes_csv_and_svg() {
    let dir = std::env::temp_dir().join(format!("extortion-scan-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let csv = dir.join("two.csv");
    let svg = dir.join("two.svg");
    let out = run(&["scan", "--scheme", "two-player", "--csv", csv.to_str().unwrap(), "--svg", svg.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 145);
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
    std::fs::remove_dir_all(&dir).ok();
}
