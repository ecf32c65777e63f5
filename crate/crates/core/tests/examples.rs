//! Runs every example end to end. `cargo test` builds examples before
//! integration tests, so the binaries sit next to this test's directory.

use std::path::PathBuf;
use std::process::Command;

fn examples_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().join("examples")
}

#[test]
fn every_example_runs() {
    let names = [
        "membership",
        "game",
        "spreading_map",
        "embedding",
        "dichotomy",
        "example_family",
        "cantor_bendixson",
    ];
    for name in names {
        let path = examples_dir().join(format!("{name}{}", std::env::consts::EXE_SUFFIX));
        assert!(path.exists(), "{} not built", path.display());
        let out = Command::new(&path).output().unwrap();
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stdout.is_empty(), "{name} printed nothing");
    }
}
