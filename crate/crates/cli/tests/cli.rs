use serde_json::Value;

fn run(args: &[&str]) -> (u8, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = matchlab_cli::run(std::iter::once("matchlab").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn count_bipartite() {
    let (code, out, _) = run(&["count", "--shape", "4,4"]);
    assert_eq!((code, out.trim()), (0, "24"));
}

#[test]
fn strata_of_the_desk_instance() {
    let (code, out, _) = run(&["strata", "--shape", "2,2,2", "--perfect-m"]);
    assert_eq!((code, out.trim()), (0, "[4,3,0,1]"));
}

#[test]
fn odd_vertex_count_is_a_domain_error() {
    let (code, _, err) = run(&["count", "--shape", "3,3,3"]);
    assert_eq!(code, 1);
    assert!(err.contains("odd vertex count"), "{err}");
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let (code, out, err) = run(&["count", "--shape", "2,2", "--bogus"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("Usage"), "{err}");
}

#[test]
fn missing_host_is_a_usage_error() {
    assert_eq!(run(&["count"]).0, 2);
}

#[test]
fn help_goes_to_stdout() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("audit-concentration"));
}

#[test]
fn unwritable_output_path_exits_one() {
    let (code, _, err) = run(&["count", "--shape", "2,2", "--format", "json", "--out", "/nonexistent/dir/x.json"]);
    assert_eq!(code, 1);
    assert!(err.contains("i/o"), "{err}");
}

#[test]
fn json_envelope_carries_config_and_version() {
    let (code, out, _) = run(&["tv", "--shape", "4,4,4", "--format", "json", "--seed", "7"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!(v["engine"].as_str().unwrap().starts_with("matchlab "));
    assert_eq!(v["config"]["subcommand"], "tv");
    assert_eq!(v["config"]["seed"], 7);
    assert_eq!(v["result"]["lambda"], "3/4");
}

#[test]
fn csv_and_json_agree() {
    let dir = tempfile::tempdir().unwrap();
    let base = dir.path().join("conv");
    let base = base.to_str().unwrap();
    let args = ["converge", "--shape", "2,2,2", "--shape", "10,10,10", "--shape", "50,50,50", "--shape", "100,100,100"];
    let mut full = args.to_vec();
    full.extend(["--format", "csv,json", "--out", base]);
    assert_eq!(run(&full).0, 0);

    let csv_text = std::fs::read_to_string(format!("{base}.csv")).unwrap();
    let mut lines = csv_text.lines();
    assert!(lines.next().unwrap().starts_with("# {"));
    let body = lines.collect::<Vec<_>>().join("\n");
    let mut reader = csv::Reader::from_reader(body.as_bytes());
    assert_eq!(
        reader.headers().unwrap().iter().collect::<Vec<_>>(),
        ["shape", "r", "part_size", "p0_exact", "p0_limit", "tv", "runtime_ms"]
    );
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 4);

    let json: Value = serde_json::from_str(&std::fs::read_to_string(format!("{base}.json")).unwrap()).unwrap();
    for (row, j) in rows.iter().zip(json["result"]["rows"].as_array().unwrap()) {
        let p0: f64 = row[3].parse().unwrap();
        assert!((p0 - j["p0_exact"].as_f64().unwrap()).abs() < 1e-11);
        assert_eq!(row[0], *j["shape"].as_str().unwrap());
    }
}

#[test]
fn force_generic_agrees_with_closed_forms() {
    for shape in ["6,6", "4,4,4", "3,3,3,3", "2,2,2,2,2"] {
        let (code, _, err) = run(&["strata", "--shape", shape, "--force-generic"]);
        assert_eq!(code, 0, "{shape}: {err}");
    }
    assert_eq!(run(&["count", "--shape", "5,5,4", "--force-generic"]).0, 0);
    assert_eq!(run(&["converge", "--shape", "3,3,3,3", "--force-generic"]).0, 0);
}

#[test]
fn explicit_profile_matches_oracle() {
    let exact = run(&["strata", "--shape", "2,2,2", "--profile", "0:1:1"]);
    let brute = run(&["oracle", "--shape", "2,2,2", "--profile", "0:1:1"]);
    assert_eq!(exact.0, 0);
    assert!(brute.1.contains(exact.1.trim()), "{} vs {}", exact.1, brute.1);
}

#[test]
fn bound_checker_rejects_invalid_instances() {
    let (code, _, err) = run(&["check-bound", "--x", "3,3", "--y", "2,4"]);
    assert_eq!(code, 1);
    assert!(err.contains("nonincreasing"), "{err}");
    assert_eq!(run(&["check-bound", "--random", "50"]).0, 0);
}

#[test]
fn census_cells_refuses_outside_the_regime_unless_allowed() {
    assert_eq!(run(&["census-cells", "--shape", "8,8,8,8"]).0, 1);
    assert_eq!(run(&["census-cells", "--shape", "8,8,8,8", "--allow-regime-violation"]).0, 0);
}

#[test]
fn graph_hosts_load_from_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c6.json");
    std::fs::write(&path, r#"{"n": 6, "edges": [[0,1],[1,2],[2,3],[3,4],[4,5],[5,0]]}"#).unwrap();
    let (code, out, _) = run(&["count", "--graph", path.to_str().unwrap()]);
    assert_eq!((code, out.trim()), (0, "2"));
    let (code, out, _) = run(&["audit-edge", "--graph", path.to_str().unwrap(), "--edge", "0,1"]);
    assert_eq!(code, 0);
    assert!(out.contains("probability=1/2"), "{out}");
}

#[test]
fn seeds_change_samples() {
    let a = run(&["sample", "--shape", "5,5,4", "--samples", "50", "--format", "csv", "--seed", "1"]).1;
    let b = run(&["sample", "--shape", "5,5,4", "--samples", "50", "--format", "csv", "--seed", "2"]).1;
    let body = |s: &str| s.lines().skip(1).collect::<Vec<_>>().join("\n");
    assert_ne!(body(&a), body(&b));
}

#[test]
fn conditional_sampling_respects_the_fixed_pairs() {
    let (code, out, _) =
        run(&["sample", "--shape", "4,4,4", "--samples", "100", "--method", "conditional", "--m-star", "2", "--format", "csv"]);
    assert_eq!(code, 0);
    for line in out.lines().skip(2) {
        assert_eq!(line.split(',').nth(1), Some("2"), "{line}");
    }
}
