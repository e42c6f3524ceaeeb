#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn project() -> PathBuf {
    fixtures().join("project.json")
}

pub fn kansei(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kansei"))
        .args(args)
        .env_remove("KANSEI_LOG")
        .output()
        .expect("kansei binary runs")
}

pub fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

/// Copies the fixture project into `dir` so single files can be altered.
pub fn copy_fixtures(dir: &Path) -> PathBuf {
    for name in [
        "project.json",
        "lexicon.json",
        "responses.csv",
        "catalog.csv",
        "colors.csv",
    ] {
        std::fs::copy(fixtures().join(name), dir.join(name)).unwrap();
    }
    dir.join("project.json")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}
