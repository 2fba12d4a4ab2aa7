use lacunary_cli::{
    execute, parse_artifact_config, parse_exponent, parse_n_grid, parse_spectrum, EXIT_NUMERIC, EXIT_OK,
    EXIT_VALIDATION,
};
use serde_json::Value;

struct Run {
    status: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("lacunary").chain(args.iter().copied());
    let status = execute(argv, &mut out, &mut err);
    Run { status, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

fn ok(args: &[&str]) -> String {
    let r = run(args);
    assert_eq!(r.status, EXIT_OK, "{args:?}: {}", r.stderr);
    r.stdout
}

fn error_json(r: &Run) -> Value {
    assert!(r.stdout.is_empty());
    let v: Value = serde_json::from_str(r.stderr.trim()).expect("stderr is one JSON object");
    for key in ["code", "message", "context"] {
        assert!(v.get(key).is_some(), "missing {key} in {v}");
    }
    v
}

/// Data rows of a CSV artifact, without the comment line and header.
fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let body = text.split_once('\n').unwrap().1;
    let mut reader = csv::Reader::from_reader(body.as_bytes());
    let header = reader.headers().unwrap().iter().map(str::to_owned).collect();
    let rows = reader.records().map(|r| r.unwrap().iter().map(str::to_owned).collect()).collect();
    (header, rows)
}

#[test]
fn reproduce_example() {
    let text = ok(&["reproduce", "--d", "3", "--l", "1", "--spectrum", "0,3,6", "--seed", "7", "--format", "json"]);
    let doc: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["tool"], "lacunary");
    assert!(doc["result"]["coefficient_residual"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn reproduce_s2_runs_both_routes() {
    let (_, rows) = csv_rows(&ok(&["reproduce", "--d", "2", "--l", "1", "--spectrum", "1,4,9", "--seed", "3"]));
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1][0], "convolution");
    assert!(rows.iter().all(|r| r[4].parse::<f64>().unwrap() <= 1e-8));
}

#[test]
fn bounds_example() {
    let text = ok(&["bounds", "--d", "3", "--l", "1", "--n", "4:256:dyadic", "--format", "json"]);
    let doc: Value = serde_json::from_str(&text).unwrap();
    let result = &doc["result"];
    assert!(result["pointwise_spread"].as_f64().unwrap() <= 5.0);
    assert!(result["uniform_spread"].as_f64().unwrap() <= 5.0);
    assert_eq!(result["report"]["per_degree"].as_array().unwrap().len(), 7);
}

#[test]
fn ratio_example() {
    let (header, rows) = csv_rows(&ok(&["ratio", "--d", "2", "--p", "1", "--q", "inf", "--spectrum", "100"]));
    assert_eq!(header.join(","), lacunary_core::search::SWEEP_CSV_HEADER);
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][col("theorem_bound")].parse::<f64>().unwrap(), 10.0);
    assert_eq!(rows[0][col("l0")], "0.5");
    assert_eq!(rows[0][col("q")], "inf");
}

#[test]
fn every_command_round_trips_in_both_formats() {
    let cases: [&[&str]; 7] = [
        &["kernel", "--d", "2", "--l", "2", "--spectrum", "0,5,11"],
        &["bounds", "--d", "2", "--n", "4,8"],
        &["reproduce", "--d", "4", "--spectrum", "2,5"],
        &["ratio", "--d", "3", "--p", "1", "--q", "2", "--spectrum", "0,3,6", "--seed", "9"],
        &["sweep", "--d", "2", "--n", "8:32:dyadic", "--family", "lacunary-random", "--m", "2", "--q", "4"],
        &["search", "--d", "2", "--q", "2", "--spectrum", "0,3", "--restarts", "2", "--budget", "40"],
        &["quad-check", "--d", "3", "--n", "1:5"],
    ];
    for case in cases {
        for format in ["csv", "json"] {
            let mut args = case.to_vec();
            args.extend(["--format", format]);
            let text = ok(&args);
            let config = parse_artifact_config(&text).unwrap();
            assert_eq!(config.command.as_str(), case[0]);
            assert_eq!(serde_json::to_value(config.format).unwrap(), format);
            // re-running the recovered config reproduces the artifact
            assert_eq!(lacunary_cli::run_to_string(&config).unwrap(), text, "{args:?}");
        }
    }
}

#[test]
fn gap_violation_is_a_validation_error() {
    let r = run(&["kernel", "--d", "2", "--spectrum", "0,2"]);
    assert_eq!(r.status, EXIT_VALIDATION);
    let v = error_json(&r);
    assert_eq!(v["code"], "gap_violation");
    assert_eq!(v["context"]["required"], 3);
}

#[test]
fn unreachable_tolerance_is_a_numeric_error() {
    let r = run(&["ratio", "--d", "2", "--p", "1", "--q", "2", "--spectrum", "0,3,6", "--tol", "1e-300"]);
    assert_eq!(r.status, EXIT_NUMERIC);
    assert_eq!(error_json(&r)["code"], "non_convergence");
}

#[test]
fn usage_errors() {
    for args in [
        &["bogus"][..],
        &["ratio", "--spectrum", "4"],
        &["ratio", "--d", "2"],
        &["ratio", "--d", "2", "--spectrum", "4", "--n", "4:8"],
        &["ratio", "--d", "2", "--spectrum", "4,x"],
        &["sweep", "--d", "2", "--n", "8:4"],
        &["ratio", "--d", "2", "--spectrum", "4", "--p", "0"],
    ] {
        let r = run(args);
        assert_eq!(r.status, EXIT_VALIDATION, "{args:?}");
        error_json(&r);
    }
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = std::env::temp_dir().join(format!("lacunary-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("defaults.json");
    std::fs::write(&path, r#"{"d": 3, "spectrum": [0, 3, 6], "q": 2.0, "seed": 5}"#).unwrap();
    let path = path.to_str().unwrap();

    let from_file = parse_artifact_config(&ok(&["ratio", "--config", path])).unwrap();
    assert_eq!((from_file.d, from_file.seed), (3, 5));
    assert_eq!(from_file.spectrum.as_deref(), Some(&[0, 3, 6][..]));

    let overridden = parse_artifact_config(&ok(&["ratio", "--config", path, "--seed", "11", "--d", "2"])).unwrap();
    assert_eq!((overridden.d, overridden.seed), (2, 11));
    assert_eq!(overridden.q, from_file.q);

    std::fs::write(dir.join("bad.json"), r#"{"d": 3, "colour": 1}"#).unwrap();
    let r = run(&["ratio", "--config", dir.join("bad.json").to_str().unwrap(), "--spectrum", "4"]);
    assert_eq!(r.status, EXIT_VALIDATION);
    error_json(&r);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn output_file_matches_stdout() {
    let args = ["kernel", "--d", "3", "--l", "1", "--spectrum", "2,5,8"];
    let printed = ok(&args);
    let path = std::env::temp_dir().join(format!("lacunary-out-{}.csv", std::process::id()));
    let mut with_file = args.to_vec();
    with_file.extend(["--output", path.to_str().unwrap()]);
    assert!(ok(&with_file).is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), printed);
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn help_and_version_succeed() {
    assert!(ok(&["--help"]).contains("quad-check"));
    assert!(ok(&["--version"]).contains(env!("CARGO_PKG_VERSION")));
}

#[test]
fn binary_reports_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_lacunary");
    let good = std::process::Command::new(bin).args(["quad-check", "--d", "2", "--n", "4"]).output().unwrap();
    assert_eq!(good.status.code(), Some(EXIT_OK));
    assert!(String::from_utf8(good.stdout).unwrap().starts_with("# lacunary "));
    let bad = std::process::Command::new(bin).args(["kernel", "--d", "2", "--spectrum", "0,1"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_VALIDATION));
}

fn corpus(target: &str) -> Vec<Vec<u8>> {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut seeds: Vec<_> =
        std::fs::read_dir(dir).unwrap().map(|e| std::fs::read(e.unwrap().path()).unwrap()).collect();
    assert!(!seeds.is_empty(), "no seeds for {target}");
    seeds.sort();
    seeds
}

#[test]
fn fuzz_seeds_are_valid_inputs() {
    use lacunary_cli::config::{parse_family, parse_m_rule};
    use lacunary_core::operator::kernel_from_json;
    use lacunary_core::polyspace::polynomial_from_json;
    use lacunary_core::quadrature::QuadratureRule;

    let text = |seed: &[u8]| String::from_utf8(seed.to_vec()).unwrap();
    for seed in corpus("polynomial_json") {
        polynomial_from_json(&text(&seed)).unwrap();
    }
    for seed in corpus("kernel_json") {
        kernel_from_json(&text(&seed)).unwrap();
    }
    for seed in corpus("rule_csv") {
        let alpha = [0.0, 0.5, 1.0, 1.5][seed[0] as usize % 4];
        QuadratureRule::from_csv(alpha, &text(&seed[1..])).unwrap();
    }
    for seed in corpus("cli_grammar") {
        let s = text(&seed);
        let accepted = parse_spectrum(&s).is_ok() as u8
            + parse_n_grid(&s).is_ok() as u8
            + parse_exponent(&s).is_ok() as u8
            + parse_family(&s).is_ok() as u8
            + parse_m_rule(&s).is_ok() as u8;
        assert!(accepted > 0, "{s:?} matches no grammar");
    }
    for seed in corpus("artifact_header") {
        parse_artifact_config(&text(&seed)).unwrap();
    }
    for seed in corpus("config_json") {
        lacunary_cli::PartialConfig::from_json(&text(&seed)).unwrap();
    }
}
