mod common;

use common::{check_case, run_binary, CASES};

#[test]
fn golden_reports() {
    let failures: Vec<String> = CASES.iter().filter_map(|c| check_case(c).err()).collect();
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn reports_are_deterministic() {
    for case in CASES.iter().filter(|c| c.exit != 2) {
        let a = run_binary(case.args);
        let b = run_binary(case.args);
        assert_eq!(a.stdout, b.stdout, "{}", case.name);
    }
}

#[test]
fn diagnostics_name_line_and_field() {
    let r = run_binary(&["check-flat", "crates/cli/tests/fixtures/bad_variable.toml"]);
    assert_eq!(r.exit, 2);
    assert!(r.stderr.contains("line 11"));
    assert!(r.stderr.contains("connection.c.1.2.1"));
    let r = run_binary(&["check-flat", "crates/cli/tests/fixtures/bad_syntax.toml"]);
    assert_eq!(r.exit, 2);
    assert!(r.stderr.contains("line 4"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run_binary(&["bogus"]).exit, 2);
    assert_eq!(
        run_binary(&["eval-jet", "charts/legendre.toml", "--jet", "t"]).exit,
        2
    );
    assert_eq!(run_binary(&["--help"]).exit, 0);
}
