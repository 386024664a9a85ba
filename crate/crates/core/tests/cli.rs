use std::io::Write;
use std::process::{Command, Output, Stdio};

use approx::assert_abs_diff_eq;
use locmom::solvers::solve_stieltjes;
use locmom::{MomentSequence, DEFAULT_TOL};
use serde_json::Value;

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_locmom"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8(bytes.to_vec()).expect("utf-8 output")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

#[test]
fn bernoulli_from_stdin() {
    let out = run(&["solve-hausdorff", "-"], Some(r#"{"moments":[1,0.5,0.5],"lambda":1,"tau":0}"#));
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let v = json(&out);
    let (atoms, masses) = (floats(&v["atoms"]), floats(&v["masses"]));
    assert_eq!(atoms.len(), 2);
    for (got, want) in atoms.iter().zip([0.0, 1.0]) {
        assert_abs_diff_eq!(*got, want, epsilon = 1e-10);
    }
    for m in masses {
        assert_abs_diff_eq!(m, 0.5, epsilon = 1e-10);
    }
    assert_eq!(v["unique"], Value::Bool(true));
    assert_eq!(v["flagged"], Value::Bool(false));
}

#[test]
fn worked_alpha_interval() {
    let out = run(&["alpha-range", "-"], Some(r#"{"moments":[1,0.5,2.5],"lambda":1}"#));
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_abs_diff_eq!(v["lo"].as_f64().unwrap(), -3.5, epsilon = 1e-9);
    assert_abs_diff_eq!(v["hi"].as_f64().unwrap(), 4.5, epsilon = 1e-9);
}

#[test]
fn point_mass_inside_gap_is_unsolvable() {
    let out = run(&["check-gap", "--moments", "1,0.5,0.25,0.125,0.0625", "--lambda", "1"], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(text(&out.stderr).contains("Γ(2)−ΛΓ(1) PSD"), "{}", text(&out.stderr));
    let v = json(&out);
    assert_eq!(v["verdict"], Value::Bool(false));
    let cond = v["conditions"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "Γ(2)−ΛΓ(1) PSD")
        .expect("condition reported");
    assert_eq!(cond["passed"], Value::Bool(false));
    assert!(cond["witness"]["min_eigenvalue"].as_f64().unwrap() < 0.0);
}

#[test]
fn every_condition_is_reported_on_success() {
    let out = run(&["check-hausdorff", "--moments", "1,0.5,0.5", "--lambda", "1"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"], Value::Bool(true));
    let conds = v["conditions"].as_array().unwrap();
    assert!(conds.len() >= 2);
    assert!(conds.iter().all(|c| c["passed"] == Value::Bool(true) && c.get("witness").is_some()));
}

#[test]
fn malformed_json_reports_position() {
    let out = run(&["check-stieltjes", "-"], Some("{\"moments\": [1,\n  0.5,]}"));
    assert_eq!(out.status.code(), Some(1));
    let err = text(&out.stderr);
    assert!(err.contains("line 2, column 7"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn unknown_fields_are_rejected() {
    let out = run(&["check-stieltjes", "-"], Some(r#"{"moments":[1,0.5,0.5],"lamda":1}"#));
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out.stderr).contains("lamda"));
}

#[test]
fn usage_errors_exit_one() {
    let cases: &[&[&str]] = &[
        &["no-such-command"],
        &["check-stieltjes"],
        &["check-hausdorff", "--moments", "1,0.5,0.5"],
        &["check-stieltjes", "--moments", "1,0.5"],
        &["solve-stieltjes", "--moments", "1,0.5,0.5", "--sweep", "0:1:1"],
        &["solve-stieltjes", "--moments", "1,0.5,0.5", "--format", "xml"],
        &["check-stieltjes", "/nonexistent/input.json"],
    ];
    for args in cases {
        let out = run(args, None);
        assert_eq!(out.status.code(), Some(1), "{args:?}: {}", text(&out.stderr));
    }
}

#[test]
fn out_of_range_parameter_exits_two() {
    let out = run(&["solve-hausdorff", "--moments", "1,0.5,0.5", "--lambda", "1", "--tau", "0.25"], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(text(&out.stderr).starts_with("unsolvable"));
}

#[test]
fn sweep_keeps_flagged_rows_in_order() {
    let args = ["solve-hausdorff", "--moments", "1,0.5,0.5", "--lambda", "1", "--sweep", "0:1:3"];
    let out = run(&args, None);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    let rows = v["rows"].as_array().unwrap();
    let taus: Vec<f64> = rows.iter().map(|r| r["tau"].as_f64().unwrap()).collect();
    assert_eq!(taus, [0.0, 0.5, 1.0]);
    let flags: Vec<bool> = rows.iter().map(|r| r["flagged"].as_bool().unwrap()).collect();
    assert_eq!(flags, [false, true, true]);
    assert!(rows[1].get("error").is_some());
    assert!(text(&out.stderr).contains("2 of 3"));
}

#[test]
fn clean_sweep_has_one_row_per_step() {
    let out = run(&["solve-stieltjes", "--moments", "1,0.5,0.5", "--sweep", "0:2:9"], None);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let v = json(&out);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 9);
    for (k, r) in rows.iter().enumerate() {
        assert_abs_diff_eq!(r["tau"].as_f64().unwrap(), 0.25 * k as f64, epsilon = 1e-15);
        assert!(r["max_residual"].as_f64().unwrap() <= DEFAULT_TOL);
        assert_eq!(r["flagged"], Value::Bool(false));
    }
}

#[test]
fn csv_columns_and_exact_decimals() {
    let out = run(&["solve-stieltjes", "--moments", "1,0.5,0.5", "--tau", "0.5", "--format", "csv"], None);
    assert_eq!(out.status.code(), Some(0));
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, ["index", "atom", "mass", "cumulative_mass"]);

    let seq = MomentSequence::new(vec![1.0, 0.5, 0.5]).unwrap();
    let mu = solve_stieltjes(&seq, 0.5, DEFAULT_TOL).unwrap();
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), mu.atoms().len());
    let mut cum = 0.0;
    for (k, row) in rows.iter().enumerate() {
        cum += mu.masses()[k];
        assert_eq!(&row[0], k.to_string());
        // shortest round-trip formatting reproduces the exact double
        assert_eq!(row[1].parse::<f64>().unwrap().to_bits(), mu.atoms()[k].to_bits());
        assert_eq!(&row[1], format!("{:?}", mu.atoms()[k]));
        assert_eq!(row[2].parse::<f64>().unwrap().to_bits(), mu.masses()[k].to_bits());
        assert_eq!(row[3].parse::<f64>().unwrap().to_bits(), cum.to_bits());
    }
}

#[test]
fn range_csv() {
    let out = run(&["tau-range", "--moments", "1,0.5,0.5", "--lambda", "1", "--format", "csv"], None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(text(&out.stdout), "kind,shape,lo,hi,unique\ntau,segment,0.0,0.0,true\n");
}

#[test]
fn output_is_deterministic_and_round_trips() {
    let jobs: &[&[&str]] = &[
        &["solve-gap", "--moments", "1,0.5,2.5", "--lambda", "1", "--sweep", "-3:4:15"],
        &["oracle-roundtrip", "--seed", "7", "--count", "4"],
        &["check-gap", "--moments", "1,0.5,0.25,0.125,0.0625", "--lambda", "1"],
    ];
    for args in jobs {
        let a = run(args, None);
        let b = run(args, None);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), b.status.code());
        let v = json(&a);
        let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert_eq!(v, again);
    }
}

#[test]
fn local_problem_from_file() {
    let dir = std::env::temp_dir().join(format!("locmom-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("local.json");
    // ½(δ₀ + δ₁) seen globally and through the window [0, 1]
    std::fs::write(&path, r#"{"lambda":1,"local":{"a":[1,0.5,0.5],"b":[1,0.5,0.5]},"tau":0,"alpha":0}"#).unwrap();
    let out = run(&["solve-local", path.to_str().unwrap()], None);
    let _ = std::fs::remove_dir_all(&dir);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let v = json(&out);
    let atoms = floats(&v["atoms"]);
    assert_abs_diff_eq!(atoms[0], 0.0, epsilon = 1e-10);
    assert_abs_diff_eq!(*atoms.last().unwrap(), 1.0, epsilon = 1e-10);
}

#[test]
fn oracle_roundtrip_rows() {
    let out = run(&["oracle-roundtrip", "--count", "5", "--format", "csv"], None);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 15);
    assert!(rows.iter().all(|r| &r[5] == "false" && r[4].parse::<f64>().unwrap() <= 1e-8));
}
