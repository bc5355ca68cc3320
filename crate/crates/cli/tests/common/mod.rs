#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;

/// A pinned invocation of the binary with its expected exit code.
pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub exit: i32,
}

pub const CASES: &[Case] = &[
    Case {
        name: "legendre_check_flat",
        args: &["check-flat", "charts/legendre.toml"],
        exit: 0,
    },
    Case {
        name: "curved_check_flat",
        args: &["check-flat", "charts/curved.toml"],
        exit: 1,
    },
    Case {
        name: "legendre_solve_limp",
        args: &["solve-limp", "charts/legendre.toml", "--order", "3"],
        exit: 0,
    },
    Case {
        name: "legendre_eval_jet",
        args: &[
            "eval-jet",
            "charts/legendre.toml",
            "--point",
            "λ=2",
            "--jet",
            "t",
            "--order",
            "3",
            "--frame",
            "identity",
        ],
        exit: 0,
    },
    Case {
        name: "legendre_eval_jet_f7",
        args: &[
            "eval-jet",
            "charts/legendre.toml",
            "--jet",
            "2+t",
            "--order",
            "3",
            "--prime",
            "7",
        ],
        exit: 0,
    },
    Case {
        name: "legendre_report",
        args: &["report", "charts/legendre.toml"],
        exit: 0,
    },
    Case {
        name: "legendre_report_f5",
        args: &["report", "charts/legendre.toml", "--prime", "5"],
        exit: 0,
    },
    Case {
        name: "sp4_check_flat",
        args: &["check-flat", "charts/sp4.toml"],
        exit: 0,
    },
    Case {
        name: "sp4_flag_analyze",
        args: &["flag-analyze", "charts/sp4.toml"],
        exit: 0,
    },
    Case {
        name: "sp4_report",
        args: &["report", "charts/sp4.toml"],
        exit: 0,
    },
    Case {
        name: "sp4_report_json",
        args: &["report", "charts/sp4.toml", "--json"],
        exit: 0,
    },
    Case {
        name: "frobenius_mazur",
        args: &["mazur", "charts/frobenius.toml"],
        exit: 0,
    },
    Case {
        name: "frobenius_ordinary",
        args: &["ordinary", "charts/frobenius.toml"],
        exit: 1,
    },
    Case {
        name: "frobenius_report",
        args: &["report", "charts/frobenius.toml"],
        exit: 0,
    },
    Case {
        name: "criteria_exceptional",
        args: &[
            "criteria", "--pbar", "4", "--e", "1", "--dim-s", "1", "--d", "1", "--codim", "3,2,2",
        ],
        exit: 0,
    },
    Case {
        name: "criteria_not_exceptional",
        args: &[
            "criteria", "--pbar", "1", "--e", "1", "--dim-s", "1", "--d", "1",
        ],
        exit: 1,
    },
    Case {
        name: "bad_variable",
        args: &["check-flat", "crates/cli/tests/fixtures/bad_variable.toml"],
        exit: 2,
    },
    Case {
        name: "bad_syntax",
        args: &["check-flat", "crates/cli/tests/fixtures/bad_syntax.toml"],
        exit: 2,
    },
    Case {
        name: "missing_frobenius",
        args: &["mazur", "charts/legendre.toml"],
        exit: 2,
    },
    Case {
        name: "constant_term_with_point",
        args: &[
            "eval-jet",
            "charts/legendre.toml",
            "--point",
            "λ=2",
            "--jet",
            "1+t",
            "--order",
            "2",
        ],
        exit: 2,
    },
];

pub fn workspace_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .canonicalize()
        .unwrap()
}

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub struct Run {
    pub stdout: String,
    pub stderr: String,
    pub exit: i32,
}

pub fn run_binary(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_perjet"))
        .args(args)
        .current_dir(workspace_root())
        .output()
        .expect("spawn perjet");
    Run {
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
        exit: out.status.code().unwrap_or(-1),
    }
}

/// The golden text for a run: stdout, then stderr under a marker line.
pub fn transcript(run: &Run) -> String {
    let mut s = run.stdout.clone();
    if !run.stderr.is_empty() {
        s.push_str("--- stderr\n");
        s.push_str(&run.stderr);
    }
    s
}

/// Compares a case against its golden file, rewriting it when
/// `PERJET_BLESS` is set.
pub fn check_case(case: &Case) -> Result<(), String> {
    let run = run_binary(case.args);
    if run.exit != case.exit {
        return Err(format!(
            "{}: exit {} (expected {})\n{}",
            case.name, run.exit, case.exit, run.stderr
        ));
    }
    let path = golden_dir().join(format!("{}.txt", case.name));
    let text = transcript(&run);
    if std::env::var_os("PERJET_BLESS").is_some() {
        std::fs::write(&path, &text).unwrap();
        return Ok(());
    }
    let expected =
        std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if expected != text {
        return Err(format!("{}: output differs from golden\n{text}", case.name));
    }
    Ok(())
}
