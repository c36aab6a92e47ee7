use std::path::Path;
use std::process::{Command, Output};

fn cosetlab(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cosetlab"))
        .args(args)
        .arg("--cache-dir")
        .arg(cache)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn verify_s4_k3_to_k4_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = cosetlab(&["verify", "--group", "S4", "--k", "3..4"], dir.path());
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc = json(&out);
    assert_eq!(doc["format"], "cosetlab-report-v1");
    let reports = doc["verification"].as_array().unwrap();
    assert_eq!(reports.len(), 2);
    for r in reports {
        assert_eq!(r["violations"], serde_json::json!([]));
        assert_eq!(r["outcome"], "confirmed");
    }
}

#[test]
fn malformed_spec_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("bad.json");
    std::fs::write(&spec, "{\"kind\": \"cayley\", \"order\": ").unwrap();
    let out = cosetlab(&["verify", "--group", spec.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["verify", "--group", "S4", "--k", "1..4"][..],
        &["verify", "--group", "Z9"],
        &["verify"],
        &["verify", "--group", "S4", "--max-cliques", "0"],
        &["verify", "--group", "S4", "--k", "x"],
    ] {
        let out = cosetlab(args, dir.path());
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn clique_cap_exits_three() {
    // A5 has no candidate cliques for k <= 4, so the cap is hit from k = 5.
    let dir = tempfile::tempdir().unwrap();
    let out = cosetlab(
        &[
            "verify",
            "--group",
            "A5",
            "--k",
            "2..6",
            "--max-cliques",
            "1",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3));
    let out = cosetlab(&["verify", "--group", "S4", "--max-order", "6"], dir.path());
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn catalog_lists_orders_and_subgroup_counts() {
    let dir = tempfile::tempdir().unwrap();
    let out = cosetlab(&["catalog"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for line in [
        "S4, order 24, 30 subgroups",
        "C6, order 6, 4 subgroups",
        "Q8, order 8, 6 subgroups",
    ] {
        assert!(text.lines().any(|l| l == line), "missing {line:?}");
    }
    assert_eq!(text.lines().count(), 43);
}

#[test]
fn report_file_round_trips_without_unknown_fields() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = cosetlab(
        &[
            "verify",
            "--group",
            "D4",
            "--k",
            "2..5",
            "--report",
            path.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.ends_with("}\n"));
    let doc = cosetlab::report::ReportDocument::from_json(&text).unwrap();
    assert_eq!(doc.verification.len(), 4);
    assert_eq!(doc.to_canonical_json(), text.trim_end());
    let k5 = &doc.verification[3];
    assert!(k5.note.as_deref().unwrap().contains("conjecture open"));
}

#[test]
fn spec_file_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("s3.json");
    std::fs::write(
        &spec,
        r#"{"format":"groupspec-v1","kind":"perm","degree":3,"generators":[[1,0,2],[1,2,0]]}"#,
    )
    .unwrap();
    let out = cosetlab(
        &["subgroups", "--group", spec.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["group"]["order"], 6);
    assert_eq!(doc["subgroups"].as_array().unwrap().len(), 6);
}

#[test]
fn lemmas_and_census_commands() {
    let dir = tempfile::tempdir().unwrap();
    let out = cosetlab(&["lemmas", "--group", "C12"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["lemmas"]["pairs"], 36);
    let ids: Vec<&str> = doc["lemmas"]["lemmas"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["id"].as_str().unwrap())
        .collect();
    assert_eq!(ids.len(), 11);

    let out = cosetlab(
        &["census", "--group", "C2xC2", "--triple", "1,2,3"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let block = &doc["census"][0];
    assert_eq!(block["census"]["meet_all"], 4);
    assert_eq!(block["diagnostics"]["r_triple"], 2);
}

#[test]
fn cold_and_warm_cache_reports_agree() {
    let dir = tempfile::tempdir().unwrap();
    let strip = |out: &Output| {
        let mut v = json(out);
        v.as_object_mut().unwrap().remove("execution");
        for r in v["verification"].as_array_mut().unwrap() {
            r.as_object_mut().unwrap().remove("execution");
        }
        v
    };
    let cold = cosetlab(&["verify", "--group", "S4"], dir.path());
    let warm = cosetlab(&["verify", "--group", "S4", "--jobs", "4"], dir.path());
    assert_eq!(json(&cold)["execution"]["cache"], "cold");
    assert_eq!(json(&warm)["execution"]["cache"], "warm");
    assert_eq!(strip(&cold), strip(&warm));
}
