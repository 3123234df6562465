use std::process::{Command, Output};

use symbranch_cli::report::{BranchReport, OrbitsReport, SelftestReport, VerifyReport};

fn symbranch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symbranch")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn branch_json(args: &[&str]) -> BranchReport {
    let mut full = vec!["branch", "--format", "json"];
    full.extend_from_slice(args);
    let out = symbranch(&full);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_str(&stdout(&out)).unwrap()
}

fn totals(r: &BranchReport) -> Vec<(String, i64)> {
    r.entries.iter().map(|e| (e.mu.clone(), e.total)).collect()
}

#[test]
fn branch_su2_torus() {
    let r = branch_json(&["--pair", "su2-torus", "--lambda", "2"]);
    assert_eq!(totals(&r), vec![("-2".into(), 1), ("0".into(), 1), ("2".into(), 1)]);
    for e in &r.entries {
        let cosets: Vec<_> = e.per_orbit.iter().map(|o| o.coset.as_str()).collect();
        assert_eq!(cosets, ["N", "S", "E"]);
        assert_eq!(e.per_orbit.iter().map(|o| o.value).sum::<i64>(), e.total);
    }
}

#[test]
fn branch_clebsch_gordan_and_defining() {
    let r = branch_json(&["--pair", "diag:su2", "--lambda", "1,1"]);
    assert_eq!(totals(&r), vec![("0".into(), 1), ("2".into(), 1)]);
    let r = branch_json(&["--pair", "upq:1,1", "--lambda", "1,0"]);
    assert_eq!(totals(&r), vec![("((0),(1))".into(), 1), ("((1),(0))".into(), 1)]);
    let r = branch_json(&["--pair", "upq:2,1", "--lambda", "2,1,0", "--verify"]);
    assert_eq!(r.verdict.as_deref(), Some("ok"));
    assert_eq!(r.entries.len(), 4);
}

#[test]
fn zero_entries_on_request() {
    let r = branch_json(&["--pair", "su2-torus", "--lambda", "3", "--all"]);
    let zeros: Vec<_> = r.entries.iter().filter(|e| e.total == 0).map(|e| e.mu.as_str()).collect();
    assert_eq!(zeros, ["-5", "5"]);
}

#[test]
fn json_round_trips() {
    for args in [
        vec!["branch", "--pair", "upq:2,1", "--lambda", "2,1,0", "--verify", "--format", "json"],
        vec!["branch", "--pair", "diag:u2", "--lambda", "1,0;1,-1", "--format", "json"],
    ] {
        let text = stdout(&symbranch(&args));
        let r: BranchReport = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string_pretty(&r).unwrap() + "\n", text);
    }
    let text = stdout(&symbranch(&["verify", "--pair", "diag:su2", "--lambda-box", "2", "--format", "json"]));
    let r: VerifyReport = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&r).unwrap() + "\n", text);
    let text = stdout(&symbranch(&["orbits", "--pair", "upq:2,2", "--format", "json"]));
    let r: OrbitsReport = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&r).unwrap() + "\n", text);
}

#[test]
fn verify_sweeps() {
    for (pair, b) in [("upq:2,1", "3"), ("diag:u2", "2"), ("su2-torus", "10")] {
        let out = symbranch(&["verify", "--pair", pair, "--lambda-box", b, "--format", "json", "--jobs", "2"]);
        assert_eq!(out.status.code(), Some(0), "{pair}");
        let r: VerifyReport = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(r.verdict, "ok");
        assert!(r.entries_checked > 0 && r.route_checks > 0);
    }
}

#[test]
fn selftests() {
    for pair in ["upq:2,2", "diag:u3", "su2-torus"] {
        let out = symbranch(&["selftest", "--pair", pair, "--format", "json"]);
        assert_eq!(out.status.code(), Some(0), "{pair}");
        let r: SelftestReport = serde_json::from_str(&stdout(&out)).unwrap();
        assert!(r.properties.iter().all(|p| p.passed), "{pair}");
        if pair == "upq:2,2" {
            // three classes times 24 Weyl elements
            assert_eq!(r.properties[0].checked, 72);
        }
    }
}

#[test]
fn orbit_summaries() {
    let out = symbranch(&["orbits", "--pair", "upq:2,1", "--format", "json"]);
    let r: OrbitsReport = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(r.classes.len(), 2);
    assert!(r.classes.iter().all(|c| c.wxh_order == 2 && c.cosets.len() == 3));
    let text = stdout(&symbranch(&["orbits", "--pair", "su2-torus"]));
    assert!(text.contains("pole") && text.contains("equator") && text.contains("Z/2"));
}

#[test]
fn exit_codes() {
    for args in [
        vec!["branch", "--pair", "so:3", "--lambda", "1"],
        vec!["branch", "--pair", "upq:2,1", "--lambda", "0,1,0"],
        vec!["branch", "--pair", "upq:2,1", "--lambda", "1,0"],
        vec!["branch", "--pair", "upq:2,1", "--lambda", "x"],
        vec!["branch", "--pair", "upq:2,1"],
        vec!["branch", "--pair", "upq:3,1", "--lambda", "1,0,0,0", "--max-weyl", "6"],
        vec!["branch", "--pair", "upq:2,1", "--lambda", "4,0,0", "--max-dim", "3"],
        vec!["frobnicate"],
    ] {
        assert_eq!(symbranch(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn table_format_lists_orbit_columns() {
    let text = stdout(&symbranch(&["branch", "--pair", "su2-torus", "--lambda", "2"]));
    let header = text.lines().nth(1).unwrap();
    assert!(header.contains("pole/N") && header.contains("pole/S") && header.contains("equator/E"));
    assert_eq!(text.lines().count(), 5);
}
