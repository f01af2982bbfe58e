use std::path::PathBuf;
use std::process::Command;

const EXAMPLES: &[(&str, &[&str])] = &[
    ("parse_print", &[]),
    ("hprocess_trace", &[]),
    ("ordinals", &[]),
    ("series", &[]),
    ("bound", &[]),
    ("verify_corpus", &["1", "5"]),
    ("gen_corpus", &[]),
];

/// `cargo test` builds examples next to the test binaries.
fn examples_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().join("examples")
}

#[test]
fn examples_run() {
    let dir = examples_dir();
    let mut missing = Vec::new();
    for (name, args) in EXAMPLES {
        let path = dir.join(format!("{name}{}", std::env::consts::EXE_SUFFIX));
        if !path.exists() {
            missing.push(*name);
            continue;
        }
        let out = Command::new(&path).args(*args).output().unwrap();
        assert!(
            out.status.success(),
            "{name} failed:\n{}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(!out.stdout.is_empty(), "{name} printed nothing");
    }
    if !missing.is_empty() {
        eprintln!("examples not built, skipped: {missing:?}");
    }
}
