use std::fs;
use std::path::PathBuf;

use multiwinner::{fixtures, parse_election};
use multiwinner_cli::{run, EXIT_CHECK_FAILED, EXIT_LIMIT, EXIT_OK, EXIT_USAGE};

struct Output {
    code: i32,
    out: String,
    err: String,
}

fn cli_with_input(args: &[&str], input: &str) -> Output {
    let mut argv = vec!["multiwinner"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut input.as_bytes(), &mut out, &mut err);
    Output {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn cli(args: &[&str]) -> Output {
    cli_with_input(args, "")
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Golden files are rewritten instead of compared when UPDATE_GOLDEN is set.
fn golden(name: &str, args: &[&str], code: i32) {
    let o = cli(args);
    assert_eq!(o.code, code, "{args:?}: {}", o.err);
    let path = golden_path(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&path, &o.out).unwrap();
    }
    let want = fs::read_to_string(&path).unwrap();
    assert_eq!(o.out, want, "{name} differs from the golden file");
}

#[test]
fn golden_tally() {
    golden("tally_e1894.txt", &["tally", "fixtures:E1894"], EXIT_OK);
    golden("tally_e1894_trace.txt", &["tally", "--trace", "fixtures:E1894"], EXIT_OK);
    golden("tally_e1894.json", &["tally", "--format", "json", "fixtures:E1894"], EXIT_OK);
    golden(
        "tally_eth12_all.txt",
        &["tally", "--method", "thiele-add", "--tie", "all:16", "fixtures:ETh12"],
        EXIT_OK,
    );
}

#[test]
fn golden_compare() {
    golden(
        "compare_e1913_5.txt",
        &["compare", "--methods", "phragmen,thiele-add", "fixtures:E1913.5"],
        EXIT_OK,
    );
    golden(
        "compare_ephragmen_stv.txt",
        &["compare", "--methods", "phragmen,stv:ig:order=surplus", "fixtures:EPhragmen-stv"],
        EXIT_OK,
    );
    golden(
        "compare_eth.txt",
        &["compare", "--methods", "thiele-opt,thiele-add,thiele-elim,phragmen", "fixtures:ETh"],
        EXIT_OK,
    );
}

#[test]
fn golden_audit() {
    golden(
        "audit_phpc.json",
        &[
            "audit", "--check", "phpc:1", "--method", "thiele-ordered", "--format", "json", "fixtures:Etactic-o-split",
        ],
        EXIT_CHECK_FAILED,
    );
}

#[test]
fn exact_figures_in_output() {
    let o = cli(&["tally", "--format", "json", "fixtures:E1894"]);
    assert!(o.out.contains(r#"{"num":192044,"den":327}"#), "{}", o.out);
    assert!(o.out.contains(r#"{"num":107928728,"den":195525}"#));
    let o = cli(&["compare", "--methods", "phragmen,thiele-add", "fixtures:E1913.5"]);
    assert!(o.out.contains("first divergence: seat 2 = B vs D"));
    let o = cli(&["compare", "--methods", "phragmen,stv:ig:order=surplus", "fixtures:EPhragmen-stv"]);
    assert!(o.out.contains("elected sets differ: E vs D"));
}

#[test]
fn usage_errors_exit_2() {
    let o = cli(&["tally", "--rounding", "law2dec", "fixtures:E1894"]);
    assert_eq!(o.code, EXIT_USAGE);
    assert!(o.err.contains("does not accept unordered ballots"), "{}", o.err);
    assert_eq!(cli(&["tally", "--bogus", "fixtures:E1894"]).code, EXIT_USAGE);
    assert_eq!(cli(&["tally", "--method", "borda", "fixtures:E1894"]).code, EXIT_USAGE);
    assert_eq!(cli(&["tally", "fixtures:nope"]).code, EXIT_USAGE);
    assert_eq!(cli(&["tally", "--tie", "coin", "fixtures:E1894"]).code, EXIT_USAGE);
    assert_eq!(cli(&["compare", "--methods", "phragmen", "fixtures:E1894"]).code, EXIT_USAGE);
    assert_eq!(cli(&["tally", "--max-names", "2", "fixtures:E1894"]).code, EXIT_USAGE);
    assert_eq!(cli(&["tally", "-"]).code, EXIT_USAGE);
    let bad = cli_with_input(&["tally", "-"], "seats: 2\n3 A B\n");
    assert_eq!(bad.code, EXIT_USAGE);
    assert!(bad.out.is_empty());
}

#[test]
fn tie_overflow_exits_3() {
    let o = cli(&["tally", "--method", "thiele-add", "--tie", "all:1", "fixtures:ETh12"]);
    assert_eq!(o.code, EXIT_LIMIT, "{}", o.err);
    assert!(o.out.is_empty());
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(cli(&["--help"]).code, EXIT_OK);
    assert_eq!(cli(&["--version"]).code, EXIT_OK);
}

#[test]
fn repeated_runs_are_identical() {
    for args in [
        &["tally", "--trace", "--format", "json", "fixtures:ECassel"][..],
        &["tally", "--method", "thiele-opt", "--tie", "all:64", "fixtures:ETh12"],
        &["audit", "--check", "random-monotonicity:50", "--seed", "5"],
        &["compare", "--methods", "phragmen,thiele-ordered,stv", "fixtures:E1913.17"],
    ] {
        let a = cli(args);
        let b = cli(args);
        assert_eq!(a.code, b.code);
        assert_eq!(a.out, b.out, "{args:?}");
    }
}

#[test]
fn stdin_input() {
    let text = fixtures::get("E1894").unwrap().text;
    let a = cli_with_input(&["tally", "-"], text);
    let b = cli(&["tally", "fixtures:E1894"]);
    assert_eq!(a.code, EXIT_OK);
    assert_eq!(a.out, b.out);
}

/// Exporting a fixture and counting the export gives the fixture's result.
#[test]
fn export_round_trip() {
    for name in fixtures::names() {
        let source = format!("fixtures:{name}");
        let direct = cli(&["tally", &source]);
        for format in ["text", "json"] {
            let exported = cli(&["fixtures", "export", name, "--format", format]);
            assert_eq!(exported.code, EXIT_OK, "{name}");
            if format == "text" {
                let e = parse_election(&exported.out).unwrap();
                assert_eq!(e, fixtures::election(name).unwrap(), "{name}");
            }
            let counted = cli_with_input(&["tally", "-"], &exported.out);
            assert_eq!(counted.code, direct.code, "{name} {format}");
            assert_eq!(counted.out, direct.out, "{name} {format}");
        }
    }
}

#[test]
fn fixtures_check_passes() {
    let o = cli(&["fixtures", "check"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.out);
    assert!(o.out.ends_with("0 failed\n"));
    assert!(!o.out.contains("FAIL"));
    let one = cli(&["fixtures", "check", "ETh12"]);
    assert_eq!(one.code, EXIT_OK);
    assert!(one.out.contains("PASS ETh12"));
}

#[test]
fn audits_from_the_command_line() {
    let o = cli(&["audit", "--check", "ejr", "--method", "thiele-opt", "fixtures:ETh"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.out);
    assert!(o.out.starts_with("PASS"));
    let o = cli(&["audit", "--check", "monotonicity", "--method", "thiele-ordered", "fixtures:E-monoTh"]);
    assert_eq!(o.code, EXIT_CHECK_FAILED, "{}", o.out);
    let o = cli(&["audit", "--check", "house:5", "--method", "thiele-opt", "fixtures:ETh12"]);
    assert_eq!(o.code, EXIT_CHECK_FAILED, "{}", o.out);
    let o = cli(&["audit", "--check", "house:5", "--method", "phragmen", "fixtures:ETh12"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.out);
}
