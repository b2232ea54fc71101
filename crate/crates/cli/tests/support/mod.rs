#![allow(dead_code)]

#[path = "../../../core/tests/support/oracle.rs"]
pub mod oracle;
pub mod planted;

use std::path::PathBuf;
use std::process::{Command, Output};

pub fn pmiir(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pmiir"))
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

pub fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// Files shipped in the workspace `data/` directory.
pub fn data_file(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}
