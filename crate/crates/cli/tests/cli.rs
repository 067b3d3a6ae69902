use std::process::Command;

use qphase_cli::run;
use serde_json::Value;

fn run_args(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("qphase").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn run_line(line: &str) -> (i32, String, String) {
    let words: Vec<&str> = line.split_whitespace().collect();
    assert_eq!(words[0], "qphase");
    run_args(&words[1..])
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = run_args(args);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out} {err}"));
    (code, v)
}

fn schema() -> Value {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/schema/run_record.schema.json");
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn assert_valid(record: &Value) {
    let validator = jsonschema::validator_for(&schema()).unwrap();
    let errors: Vec<String> = validator
        .iter_errors(record)
        .map(|e| e.to_string())
        .collect();
    assert!(errors.is_empty(), "{errors:?}");
}

#[test]
fn echoed_command_reproduces_record() {
    let cases: &[&[&str]] = &[
        &["analytic", "--eta", "pi/3", "--delta", "pi/3"],
        &["qpev", "--eta", "pi/3"],
        &["qpev", "--eta", "-pi/3", "--exact", "--n", "8"],
        &["qpeh", "--eta", "pi/3", "--delta", "pi/3", "--seed", "11"],
        &["pipeline", "--eta", "pi/3", "--delta", "pi/3"],
        &[
            "pipeline", "--eta", "0.4", "--delta", "1.1", "--shots", "2000", "--seed", "5",
        ],
        &[
            "qpev",
            "--eta",
            "pi/3",
            "--aux",
            "0.3",
            "--allow-leakage",
            "--window",
            "3",
        ],
        &[
            "sweep",
            "--eta-range",
            "0.2:0.4",
            "--delta-range",
            "0.2:0.4",
            "--steps",
            "2",
            "--format",
            "json",
        ],
    ];
    for args in cases {
        let (code, first, _) = run_args(args);
        assert_eq!(code, 0, "{args:?}");
        let v: Value = serde_json::from_str(&first).unwrap();
        let echoed = v["command"].as_str().unwrap();
        let (code2, second, _) = run_line(echoed);
        assert_eq!(code2, 0, "{echoed}");
        // the sweep echo omits --format, so its rerun defaults to CSV
        if args[0] == "sweep" {
            let (_, again, _) = run_line(&format!("{echoed} --format json"));
            assert_eq!(first, again);
        } else {
            assert_eq!(first, second, "{echoed}");
        }
    }
}

#[test]
fn records_validate_against_schema() {
    for args in [
        &["analytic", "--eta", "pi/3", "--delta", "pi/3"][..],
        &["qpev", "--eta", "pi/3"],
        &["qpeh", "--eta", "pi/3", "--delta", "pi/3", "--exact"],
        &[
            "pipeline", "--eta", "pi/3", "--delta", "pi/3", "--shots", "10000", "--seed", "7",
        ],
        &["pipeline", "--eta", "pi/2", "--delta", "pi/3"],
    ] {
        let (_, v) = json(args);
        assert_valid(&v);
    }
}

#[test]
fn schema_rejects_malformed_record() {
    let (_, mut v) = json(&["analytic", "--eta", "pi/3", "--delta", "pi/3"]);
    v.as_object_mut().unwrap().remove("residuals");
    let validator = jsonschema::validator_for(&schema()).unwrap();
    assert!(!validator.is_valid(&v));
}

#[test]
fn analytic_examples() {
    let (_, v) = json(&["analytic", "--eta", "pi/3", "--delta", "pi/3"]);
    let a = &v["analytic"];
    assert!((a["C2"].as_f64().unwrap() - 0.9330).abs() < 1e-4);
    assert!((a["half_absA2"].as_f64().unwrap() - 0.7165).abs() < 1e-4);
    assert!((a["theta"].as_f64().unwrap() - (-1.0f64 / 3.0).atan()).abs() < 1e-12);

    let (_, v) = json(&["analytic", "--eta", "0", "--delta", "pi/2"]);
    assert!(v["analytic"]["theta"].as_f64().unwrap().abs() < 1e-15);

    let (_, v) = json(&["analytic", "--eta", "pi/3", "--delta", "0"]);
    assert!(v["analytic"]["theta"].as_f64().unwrap().abs() < 1e-15);
    assert!((v["analytic"]["absA"].as_f64().unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn trivial_register_examples() {
    let (_, v) = json(&["qpev", "--eta", "0", "--exact"]);
    assert!((v["decoded"]["qpev"]["p_plus"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!((v["decoded"]["qpev"]["p_minus"].as_f64().unwrap() - 0.5).abs() < 1e-12);

    let (_, v) = json(&["qpeh", "--eta", "pi/3", "--delta", "0", "--exact"]);
    assert!((v["decoded"]["qpeh"]["p_plus"].as_f64().unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn sampled_histograms_omit_empty_bins() {
    let (_, v) = json(&["qpev", "--eta", "pi/3", "--shots", "500", "--seed", "3"]);
    let bins = v["histograms"]["qpev"]["bins"].as_array().unwrap();
    assert!(!bins.is_empty() && bins.len() <= 2);
    let total: u64 = bins.iter().map(|b| b["count"].as_u64().unwrap()).sum();
    assert_eq!(total, 500);
    assert!(bins.iter().all(|b| b["count"].as_u64().unwrap() > 0));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["qpev", "--eta", "pi/x"][..],
        &["qpev", "--eta", "pi/3", "--exact", "--shots", "10"],
        &["pipeline", "--eta", "pi/3"],
        &["sweep", "--eta-range", "0:2", "--delta-range", "0:1"],
        &["sweep", "--eta-range", "0.5:0.2", "--delta-range", "0:1"],
        &["qpev", "--eta", "pi/3", "--n", "40"],
        &["bogus"],
    ] {
        let (code, _, err) = run_args(args);
        assert_eq!(code, 2, "{args:?}: {err}");
        assert!(!err.is_empty());
    }
}

#[test]
fn parse_error_reports_position() {
    let (_, _, err) = run_args(&["analytic", "--eta", "2pi3", "--delta", "0"]);
    assert!(err.contains("position 3"), "{err}");
}

#[test]
fn non_dyadic_aux_refused_without_flag() {
    let (code, v) = json(&["qpev", "--eta", "pi/3", "--aux", "0.3", "--exact"]);
    assert_eq!(code, 3);
    assert_eq!(v["error"]["code"], "non_dyadic_aux");

    let (code, v) = json(&[
        "qpev",
        "--eta",
        "pi/3",
        "--aux",
        "0.3",
        "--exact",
        "--allow-leakage",
    ]);
    assert_eq!(code, 0);
    assert!(v["error"].is_null());
    assert_eq!(v["decoded"]["qpev"]["dyadic_exact"], false);
}

#[test]
fn singular_pipeline_exit_3_with_error_record() {
    let (code, v) = json(&["pipeline", "--eta", "pi/2", "--delta", "pi/3"]);
    assert_eq!(code, 3);
    assert_eq!(v["error"]["code"], "singular_configuration");
    assert!(v["estimates"]["theta"].is_null());
}

#[test]
fn unwritable_output_exit_4() {
    let (code, _, err) = run_args(&[
        "analytic",
        "--eta",
        "0",
        "--delta",
        "0",
        "--out",
        "/nonexistent-dir/x.json",
    ]);
    assert_eq!(code, 4, "{err}");
}

#[test]
fn out_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("qphase-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("rec.json");
    let p = path.to_str().unwrap();
    let (code, stdout, _) = run_args(&["qpev", "--eta", "pi/3", "--exact", "--out", p]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let (_, direct, _) = run_args(&["qpev", "--eta", "pi/3", "--exact"]);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), direct);
    std::fs::remove_dir_all(dir).unwrap();
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

#[test]
fn csv_layouts() {
    let (_, out, _) = run_args(&["qpev", "--eta", "pi/3", "--exact", "--format", "csv"]);
    let (header, rows) = csv_rows(&out);
    assert_eq!(header, qphase_cli::record::HISTOGRAM_COLUMNS);
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1][2], "0.1111000000");

    let (_, out, _) = run_args(&[
        "pipeline", "--eta", "pi/3", "--delta", "pi/3", "--format", "csv",
    ]);
    let (header, rows) = csv_rows(&out);
    assert_eq!(header, qphase_cli::record::SUMMARY_COLUMNS);
    assert_eq!(rows.len(), 1);

    let (_, out, _) = run_args(&[
        "sweep",
        "--eta-range",
        "0.2:0.3",
        "--delta-range",
        "0.2:0.3",
        "--steps",
        "3",
    ]);
    let (header, rows) = csv_rows(&out);
    assert_eq!(header, qphase_cli::record::SWEEP_COLUMNS);
    assert_eq!(rows.len(), 9);
}

#[test]
fn degenerate_sweep_range_gives_one_row() {
    let (code, out, _) = run_args(&[
        "sweep",
        "--eta-range",
        "0.5:0.5",
        "--delta-range",
        "pi/3:pi/3",
    ]);
    assert_eq!(code, 0);
    assert_eq!(csv_rows(&out).1.len(), 1);
}

#[test]
fn single_point_sweep_matches_pipeline() {
    for readout in [&[][..], &["--shots", "10000", "--seed", "9"]] {
        let mut sweep = vec![
            "sweep",
            "--eta-range",
            "pi/3:pi/3",
            "--delta-range",
            "pi/3:pi/3",
            "--format",
            "json",
        ];
        sweep.extend_from_slice(readout);
        let mut pipe = vec!["pipeline", "--eta", "pi/3", "--delta", "pi/3"];
        pipe.extend_from_slice(readout);
        let (_, s) = json(&sweep);
        let (_, p) = json(&pipe);
        let row = &s["rows"][0];
        assert_eq!(s["rows"].as_array().unwrap().len(), 1);
        assert_eq!(row["theta_est"], p["estimates"]["theta"]);
        assert_eq!(row["residual"], p["residuals"]["theta"]);
        assert_eq!(row["c2"], p["estimates"]["C2"]);
        assert_eq!(row["half_abs_a2"], p["estimates"]["half_absA2"]);
    }
}

#[test]
fn sampled_pipeline_example_within_bound() {
    let (code, v) = json(&[
        "pipeline", "--eta", "pi/3", "--delta", "pi/3", "--shots", "10000", "--seed", "7",
    ]);
    assert_eq!(code, 0);
    assert!(v["residuals"]["theta"].as_f64().unwrap().abs() <= 0.03);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_qphase");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let ok = status(&["qpev", "--eta", "pi/3", "--exact"]);
    assert_eq!(ok.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["histograms"]["qpev"]["bins"].as_array().unwrap().len(), 2);
    assert_eq!(status(&["--help"]).status.code(), Some(0));
    assert_eq!(status(&["qpev"]).status.code(), Some(2));
    assert_eq!(
        status(&["pipeline", "--eta", "pi/2", "--delta", "0.3"])
            .status
            .code(),
        Some(3)
    );
}
