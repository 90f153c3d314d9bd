//! Golden cases and helpers shared by the integration targets.

#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use serde::Deserialize;

#[derive(Debug, Deserialize)]
pub struct Case {
    pub name: String,
    pub code: i32,
    pub args: Vec<String>,
}

pub fn crate_dir() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

pub fn golden_dir() -> PathBuf {
    crate_dir().join("tests/golden")
}

pub fn cases() -> Vec<Case> {
    let text = std::fs::read_to_string(golden_dir().join("cases.json")).expect("golden manifest");
    serde_json::from_str(&text).expect("golden manifest parses")
}

pub fn expected(case: &Case) -> Vec<u8> {
    std::fs::read(golden_dir().join(format!("{}.out", case.name))).expect("golden output")
}

pub fn bundled_scenarios() -> Vec<PathBuf> {
    ["investigator_min", "investigator_max", "panel"]
        .iter()
        .map(|n| crate_dir().join("scenarios").join(format!("{n}.json")))
        .collect()
}

pub struct Run {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: String,
}

/// Runs the built binary from the crate directory.
pub fn belief<S: AsRef<str>>(args: &[S]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_belief"))
        .args(args.iter().map(AsRef::as_ref))
        .current_dir(crate_dir())
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: out.stdout,
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

/// Golden cases whose output or exit code differs from the frozen file.
pub fn golden_mismatches() -> Vec<String> {
    let mut bad = Vec::new();
    for case in cases() {
        let run = belief(&case.args);
        if run.code != case.code {
            bad.push(format!("{}: exit {} instead of {} ({})", case.name, run.code, case.code, run.stderr.trim()));
        } else if run.stdout != expected(&case) {
            bad.push(format!("{}: output differs from the golden file", case.name));
        }
    }
    bad
}
