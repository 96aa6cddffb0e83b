mod common;

use serde_json::Value;

use common::*;

fn text(out: &std::process::Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn gen_odd_nine_writes_fifteen_arcs() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["gen-odd", "--n", "9"], dir.path());
    assert!(out.status.success());
    let (n, arcs) = read_ograph(&dir.path().join("dcoc-9.ograph"));
    assert_eq!((n, arcs.len()), (9, 15));
    assert!(is_dcoc(n, &arcs));
}

#[test]
fn gen_odd_rejects_impossible_and_even_orders() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["gen-odd", "--n", "7"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("NoSuchOrder"));
    let out = run(&["gen-odd", "--n", "8", "--json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_str(text(&out).trim()).unwrap();
    assert_eq!(v["error"], "EvenOrder");
}

#[test]
fn circulant_check_reports_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["circulant", "check", "--n", "5", "--set", "1"],
        dir.path(),
    );
    assert!(out.status.success());
    assert!(text(&out).contains("deeply critical clique: true"));
    let out = run(
        &["circulant", "check", "--n", "7", "--set", "1,2"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out).contains("deeply critical clique: false"));
    let out = run(
        &["circulant", "check", "--n", "5", "--set", "1,4"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn written_graphs_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(run(&["gen-odd", "--n", "11", "--json"], d).status.success());
    let file = d.join("dcoc-11.ograph");
    let (n, arcs) = read_ograph(&file);
    let parsed =
        dcoc_core::OrientedGraph::parse_ograph(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(parsed.to_ograph(), std::fs::read_to_string(&file).unwrap());
    assert_eq!(parsed.order(), n);
    assert_eq!(parsed.arc_count(), arcs.len());

    let nine = write_ograph(d, "nine.ograph", 9, &dcoc_core::extension::NINE_VERTEX_ARCS);
    let out = run(
        &[
            "extend",
            nine.to_str().unwrap(),
            "--k",
            "6",
            "--partition",
            "6,2,7/1,5,0/4,8,3",
            "--json",
        ],
        d,
    );
    assert!(out.status.success(), "{}", text(&out));
    let v: Value = serde_json::from_str(text(&out).trim()).unwrap();
    let written = std::fs::read_to_string(d.join("extend-6-15.ograph")).unwrap();
    let from_file = dcoc_core::OrientedGraph::parse_ograph(&written).unwrap();
    let from_json = dcoc_core::OrientedGraph::from_compact(v["graph"].as_str().unwrap()).unwrap();
    assert_eq!(from_file, from_json);
    assert_eq!(from_file.to_ograph(), written);
}

#[test]
fn extend_searches_for_a_partition_when_none_given() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let nine = write_ograph(d, "nine.ograph", 9, &dcoc_core::extension::NINE_VERTEX_ARCS);
    for k in ["2", "4"] {
        let out = run(&["extend", nine.to_str().unwrap(), "--k", k], d);
        assert!(out.status.success());
    }
    let (n, arcs) = read_ograph(&d.join("extend-4-13.ograph"));
    assert!(is_dcoc(n, &arcs));
    let c5 = write_ograph(d, "c5.ograph", 5, &cycle(5));
    let out = run(&["extend", c5.to_str().unwrap(), "--k", "6"], d);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["extend", nine.to_str().unwrap(), "--k", "3"], d);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_input_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let bad = d.join("bad.ograph");
    std::fs::write(&bad, "3 2\n0 1\n1 0\n").unwrap();
    assert_eq!(
        run(&["chi", bad.to_str().unwrap()], d).status.code(),
        Some(2)
    );
    assert_eq!(run(&["chi", "missing.ograph"], d).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"], d).status.code(), Some(2));
    assert_eq!(
        run(&["scan", "--n", "5", "--probe", "10"], d).status.code(),
        Some(2)
    );
}

#[test]
fn chi_and_check_json() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let file = write_ograph(d, "c6.ograph", 6, &cycle(6));
    let out = run(&["chi", file.to_str().unwrap(), "--json"], d);
    let v: Value = serde_json::from_str(text(&out).trim()).unwrap();
    assert_eq!(v["chi"], 3);
    assert_eq!(v["certificate"]["colours"], 3);
    let out = run(&["check", file.to_str().unwrap(), "--json"], d);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_str(text(&out).lines().next().unwrap()).unwrap();
    assert_eq!(v["dcoc"], false);
}

#[test]
fn scan_writes_witnesses_and_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = run(&["scan", "--n", "5", "--json"], d);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(text(&out).trim()).unwrap();
    assert_eq!(
        (v["generated"].as_u64(), v["dcoc"].as_u64()),
        (Some(582), Some(1))
    );
    assert!(d.join("scan-5.ckpt").exists());
    let (n, arcs) = read_ograph(&d.join("scan-5-0.ograph"));
    assert!(isomorphic(n, &arcs, 5, &cycle(5)));

    // A rerun resumes from the finished checkpoint with the same answer.
    let again: Value =
        serde_json::from_str(text(&run(&["scan", "--n", "5", "--json"], d)).trim()).unwrap();
    assert_eq!(again["dcoc"], v["dcoc"]);
    assert_eq!(again["generated"], v["generated"]);
}

#[test]
fn probe_is_reproducible_from_seed() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let args = [
        "scan", "--n", "6", "--probe", "2000", "--seed", "17", "--json",
    ];
    let a: Value = serde_json::from_str(text(&run(&args, d)).trim()).unwrap();
    let b: Value = serde_json::from_str(text(&run(&args, d)).trim()).unwrap();
    assert_eq!(a["cliques"], b["cliques"]);
    assert_eq!(a["parameters"]["seed"], 17);
}

#[test]
fn circulant_scan_streams_classes_and_resumes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let args = ["circulant", "scan", "--n", "37", "--mode", "exhaustive"];
    let first = text(&run(&args, d));
    assert!(d.join("circulant-scan-37.ckpt").exists());
    let second = text(&run(&args, d));
    let classes = |s: &str| -> Vec<Value> {
        s.lines()
            .map(|l| serde_json::from_str::<Value>(l).unwrap())
            .filter(|v| v.get("class_size").is_some())
            .collect()
    };
    assert_eq!(classes(&first).len(), 5);
    assert_eq!(classes(&first), classes(&second));
    for c in classes(&first) {
        let set: Vec<usize> = c["set"]
            .as_array()
            .unwrap()
            .iter()
            .map(|x| x.as_u64().unwrap() as usize)
            .collect();
        assert!(is_clique(37, &circulant_arcs(37, &set)));
    }
}

#[test]
fn out_flag_overrides_environment() {
    let env_dir = tempfile::tempdir().unwrap();
    let flag_dir = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "gen-odd",
            "--n",
            "5",
            "--out",
            flag_dir.path().to_str().unwrap(),
        ],
        env_dir.path(),
    );
    assert!(out.status.success());
    assert!(flag_dir.path().join("dcoc-5.ograph").exists());
    assert!(!env_dir.path().join("dcoc-5.ograph").exists());
}

#[test]
fn verify_suite_quick_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["verify-paper", "--quick"], dir.path());
    assert!(out.status.success(), "{}", text(&out));
    assert_eq!(
        text(&out).lines().filter(|l| l.starts_with("PASS")).count(),
        10
    );
}
