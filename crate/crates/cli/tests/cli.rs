use std::io::Write;
use std::process::{Command, Output, Stdio};

fn corpus(name: &str) -> String {
    format!("{}/../../corpus/{name}.pcv", env!("CARGO_MANIFEST_DIR"))
}

fn pcurv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcurv")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let o = pcurv(&all);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_pcurv"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

#[test]
fn log_generic_is_dense_with_reduced_degeneracy() {
    let v = json(&["analyze", &corpus("log_generic")]);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["p_closed"], false);
    assert_eq!(v["reduced"], true);
    assert_eq!(v["degeneracy"]["text"], "{x} + {y} + {z}");
    assert_eq!(v["passed"], true);
}

#[test]
fn plane_degree_one_has_three_invariant_lines() {
    let v = json(&["analyze", &corpus("plane_degree_one")]);
    assert_eq!(v["degeneracy"]["degree"], 3);
    let inv: Vec<&str> = v["candidates"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["invariant"] == true)
        .map(|c| c["hypersurface"].as_str().unwrap())
        .collect();
    assert_eq!(inv, ["x", "y", "z"]);
    for p in ["3", "7"] {
        let field = format!("Fq:{p}^2");
        let v = json(&["--field", &field, "degeneracy", &corpus("plane_degree_one")]);
        assert_eq!(v["degeneracy"]["text"], "{x} + {y} + {z}");
    }
}

#[test]
fn gaussian_scan_csv() {
    let o = pcurv(&["scan", "--pmax", "13", &corpus("gaussian_log")]);
    assert!(o.status.success());
    let expected = "\
p,factor,k,p_closed,deg_degeneracy,squarefree,cartier_integrable
2,t+1,1,true,,,
3,t^2+1,2,false,3,true,true
5,t+2,1,true,,,
5,t+3,1,true,,,
7,t^2+1,2,false,3,true,true
11,t^2+1,2,false,3,true,true
13,t+5,1,true,,,
13,t+8,1,true,,,
";
    assert_eq!(stdout(&o), expected);
    let via_flag = pcurv(&["scan", "--model-file", &corpus("gaussian_log")]);
    assert_eq!(via_flag.stdout, o.stdout);
}

#[test]
fn scan_marks_bad_primes() {
    let o = pcurv(&["scan", "--minpoly", "a^2-2", &corpus("gaussian_log")]);
    let out = stdout(&o);
    assert!(out.lines().nth(1).unwrap().starts_with("2,t,1,bad:"), "{out}");
    let v = json(&["scan", "--pmax", "7", &corpus("rational_log")]);
    let rows = v["rows"].as_array().unwrap();
    assert!(rows.iter().filter(|r| r["status"] == "good").all(|r| r["p_closed"] == true));
    assert!(rows.iter().any(|r| r["status"] == "bad"));
}

#[test]
fn output_is_deterministic() {
    for args in [vec!["analyze"], vec!["--json", "analyze"], vec!["--json", "distmin2"]] {
        let name = if args.contains(&"distmin2") { "distmin_three_components" } else { "restrict_plane" };
        let doc = corpus(name);
        let mut a = args.clone();
        a.push(&doc);
        assert_eq!(pcurv(&a).stdout, pcurv(&a).stdout);
    }
}

#[test]
fn cover_table_and_restriction_checks_pass() {
    for name in ["cover_neither", "cover_kernel_only", "cover_both"] {
        let v = json(&["pullback", &corpus(name)]);
        assert_eq!(v["checks"]["pullback_formula"], true, "{name}");
    }
    let v = json(&["pullback", "--field", "Fq:5^2", &corpus("cover_both")]);
    assert_eq!(v["checks"]["pullback_formula"], true);
    let v = json(&["restrict", &corpus("restrict_plane")]);
    assert_eq!(v["checks"]["restriction_formula"], true);
}

#[test]
fn distmin_values_and_witness_file() {
    let dir = std::env::temp_dir().join(format!("pcurv-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("witness.txt");
    for (name, field, expect) in [
        ("distmin_two_quadrics", "Fp:101", 2),
        ("distmin_three_components", "Q", 1),
        ("distmin_linear_pullback", "Fp:101", 0),
    ] {
        let v = json(&["--field", field, "distmin2", &corpus(name), "--witness-out", out.to_str().unwrap()]);
        assert_eq!(v["delta_star"], expect, "{name}");
        let text = std::fs::read_to_string(&out).unwrap();
        assert_eq!(text.trim_end(), v["witness"].as_str().unwrap());
    }
    let v = json(&["distmin2", "--delta-max", "0", &corpus("distmin_two_quadrics")]);
    assert!(v["delta_star"].is_null());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn integer_defect_sign() {
    let v = json(&["defect", &corpus("integer_defect")]);
    assert_eq!(v["defect"], "-3*x^2*y^2*z^2*dx /\\ dy /\\ dz");
    assert_eq!(v["sign"], -1);
    let v = json(&["--field", "Fp:3", "defect", &corpus("integer_defect")]);
    assert_eq!(v["integrable"], true);
}

#[test]
fn cartier_golden_value() {
    let v = json(&["cartier", &corpus("cartier_example")]);
    assert_eq!(v["cartier_of_form"], "z*dx + dy");
    assert_eq!(v["cartier_of_form_integrable"], false);
}

#[test]
fn reads_standard_input() {
    let doc = "field Fp:3\nspace A3\nform x^(p-1)*dx + z^p*y^(p-1)*dy\n";
    let o = with_stdin(&["--json", "defect"], doc);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["integrable"], true);
    let o = with_stdin(&["--field", "Z", "defect"], doc);
    assert_eq!(o.status.code(), Some(2), "`p` has no value over Z");
    let o = with_stdin(&["--field", "Z", "defect"], "field Fp:3\nspace A3\nform x^2*dx + z^3*y^2*dy\n");
    assert!(stdout(&o).contains("-3*x^2*y^2*z^2*dx /\\ dy /\\ dz"));
}

#[test]
fn errors_carry_positions_and_exit_two() {
    let o = with_stdin(&["analyze"], "field Fp:5\nspace A2\nform x*dq\n");
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("unknown variable `q` at 3:9"), "{err}");
    let o = with_stdin(&["defect"], "field Q\nspace A2\nform x^p*dy\n");
    assert_eq!(o.status.code(), Some(2));
    let o = with_stdin(&["analyze"], "field Fp:5\nprime 7\nspace A2\nform x*dy\n");
    assert!(String::from_utf8(o.stderr).unwrap().contains("inconsistent prime"));
    let o = with_stdin(&["--field", "Fp:5", "analyze"], "field Fp:7\nprime 7\nspace A2\nform x*dy\n");
    assert_eq!(o.status.code(), Some(2));
    let o = with_stdin(&["scan"], "field Fp:7\nspace A2\nform x*dy\n");
    assert_eq!(o.status.code(), Some(2));
}
