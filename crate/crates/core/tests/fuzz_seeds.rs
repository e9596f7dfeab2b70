//! Replays the checked-in fuzz seeds through the same parser entry points.

use biprox::catalog::{lookup, parse_generator_file, parse_group_spec, parse_subgroup_spec};
use biprox::fusionring::parse_fusion_text;
use biprox::permgroup::parse_cycle_notation;
use std::path::PathBuf;

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<_> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|f| {
            let path = f.unwrap().path();
            let name = path.file_name().unwrap().to_string_lossy().into_owned();
            (name, std::fs::read_to_string(&path).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty());
    out
}

#[test]
fn cycle_seeds() {
    for (name, text) in seeds("parse_cycles") {
        let parsed = parse_cycle_notation(&text, None);
        assert_eq!(parsed.is_ok(), name != "unterminated", "{name}");
    }
}

#[test]
fn group_spec_seeds() {
    for (name, text) in seeds("parse_group_spec") {
        let bad = matches!(name.as_str(), "unterminated" | "unknown");
        assert_eq!(parse_group_spec(&text).is_ok(), !bad, "{name}");
    }
}

#[test]
fn subgroup_spec_seeds() {
    let s4 = lookup("S4").unwrap().build().unwrap();
    for (name, text) in seeds("parse_subgroup_spec") {
        assert!(parse_subgroup_spec(&s4, &text).is_ok(), "{name}");
    }
}

#[test]
fn fusion_seeds() {
    for (name, text) in seeds("parse_fusion") {
        let ring = parse_fusion_text(&text).and_then(|r| r.verify_axioms().map(|_| r));
        assert_eq!(ring.is_ok(), name != "bad_token", "{name}");
    }
}

#[test]
fn generator_file_seeds() {
    for (name, text) in seeds("parse_generator_file") {
        assert_eq!(parse_generator_file(&text).is_ok(), name != "comments_only", "{name}");
    }
}
