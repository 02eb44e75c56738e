use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn praag(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_praag"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Drops the `#` header lines and parses the rest as JSON.
fn json_body(o: &Output) -> Value {
    let body: String = stdout(o).lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>().join("\n");
    serde_json::from_str(&body).unwrap()
}

#[test]
fn log_check_poly() {
    let o = praag(&["log", "check", "--preset", "poly:2"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("# praag "));
    let v = json_body(&o);
    assert_eq!(v["girth"], 4);
    assert_eq!(v["verdict"], "npc");
    assert_eq!(v["asc_tree"], true);
    assert_eq!(v["desc_tree"], true);
}

#[test]
fn log_check_exp_reports_the_girth_gap() {
    let o = praag(&["log", "check", "--preset", "exp"]);
    assert!(o.status.success());
    let v = json_body(&o);
    assert_eq!(v["girth"], 4);
    assert_eq!(v["hyperbolic_checks"]["dist_src_dst"], 2);
    assert!(v["endpoint_four_cycle"].is_array());
}

#[test]
fn rim_table_matches_closed_form() {
    let o = praag(&["rims", "--preset", "poly:3", "--max-n", "20"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(lines.next(), Some("i,j,n,f_constructed,f_closed_form,match"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 6 * 21);
    assert!(rows.iter().all(|r| r.ends_with(",true")));
}

#[test]
fn dehn_exponential_fit() {
    let o = praag(&["dehn", "--d", "inf", "--max-n", "18", "--diagram", "R", "--fit", "exp"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let fit = text.lines().find_map(|l| l.strip_prefix("# fit ")).expect("fit line");
    let fit: Value = serde_json::from_str(fit).unwrap();
    assert!(fit["value"].as_f64().unwrap() > 1.0);
    assert!(fit["r_squared"].as_f64().unwrap() >= 0.99);
}

#[test]
fn dehn_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("stats.csv");
    let svg = dir.path().join("plot.svg");
    let o = praag(&[
        "dehn", "--d", "2", "--max-n", "12", "--diagram", "Q",
        "--out", csv.to_str().unwrap(), "--svg", svg.to_str().unwrap(), "--fit", "power",
    ]);
    assert!(o.status.success());
    let fit = json_body(&o);
    assert_eq!(fit["model"], "power");
    let stats = praag_core::dehn::read_csv(fs::File::open(&csv).unwrap()).unwrap();
    assert_eq!(stats.len(), 12);
    assert!(stats.iter().all(|s| s.fans + s.corridors == s.area && s.perimeter == 6 * s.n - 2));
    let svg = fs::read_to_string(&svg).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg.matches("<polyline").count(), 1);
}

#[test]
fn outputs_are_deterministic() {
    for args in [
        &["dehn", "--d", "3", "--max-n", "12", "--diagram", "R", "--fit", "power"][..],
        &["build", "--preset", "sigma", "--d", "inf", "--report", "link"][..],
        &["present", "--preset", "delta", "--d", "2"][..],
    ] {
        let a = praag(args);
        let b = praag(args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn homology_of_the_double() {
    for which in ["desc", "asc", "flag"] {
        let o = praag(&["homology", "--preset", "sigma", "--d", "3", "--which", which]);
        assert!(o.status.success());
        let v = json_body(&o);
        assert_eq!(v["betti"][0], 1);
        assert_eq!(v["betti"][1], 0);
        assert_eq!(v["betti"][2], 1);
        assert_eq!(v["euler"], 2);
    }
}

#[test]
fn build_reports() {
    let o = praag(&["build", "--preset", "delta", "--d", "2", "--report", "morse"]);
    assert!(o.status.success());
    let v = json_body(&o);
    assert_eq!(v["descending"]["homology"]["betti"][0], 1);
    assert_eq!(v["base"]["reduced_betti"][0], 0);

    let o = praag(&["present", "--preset", "delta", "--d", "2"]);
    let text = stdout(&o);
    assert!(text.lines().nth(1).unwrap().starts_with("generators:"));
}

#[test]
fn fan_output() {
    let o = praag(&["fan", "--preset", "poly:2", "--u", "s s s", "--v", "a2 a2 a2", "--emit", "stats"]);
    assert!(o.status.success());
    let v = json_body(&o);
    assert_eq!(v["height"], 3);
    assert_eq!(v["erim_length"], v["layers"][2]);
    let o = praag(&["fan", "--preset", "poly:2", "--u", "s s", "--v", "a2", "--emit", "rim"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn inadmissible_marking_has_a_witness() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.json");
    let m = dir.path().join("m.json");
    fs::write(
        &g,
        r#"{"vertices":["a","b","c","d"],"edges":[{"from":"a","to":"b"},{"from":"b","to":"c"},{"from":"a","to":"c"},{"from":"c","to":"d"}]}"#,
    )
    .unwrap();
    fs::write(&m, r#"{"marks":[{"from":"a","to":"b","d":2},{"from":"b","to":"c","d":"inf"}]}"#).unwrap();
    let o = praag(&["build", "--graph", g.to_str().unwrap(), "--marking", m.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let w: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(w["error"], "inadmissible_marking");
    assert!(w["shared"].is_array());
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["dehn", "--d", "1", "--max-n", "4", "--diagram", "P"][..],
        &["dehn", "--d", "2", "--max-n", "4", "--diagram", "X"][..],
        &["log", "check", "--preset", "poly:x"][..],
        &["log", "check"][..],
        &["rims", "--preset", "exp", "--max-n", "3"][..],
        &["homology", "--graph", "g.json", "--preset", "delta"][..],
    ] {
        assert_eq!(praag(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn search_reports_absence() {
    let o = praag(&["log", "search-exp", "--vertices", "4"]);
    assert!(o.status.success());
    assert!(json_body(&o)["found"].is_null());
}
