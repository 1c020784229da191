use std::path::{Path, PathBuf};

use permoptics_cli::config::ExperimentConfig;

fn book() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../book/src")
}

/// Fenced blocks of the given language in a chapter.
fn blocks(chapter: &str, lang: &str) -> Vec<String> {
    let text = std::fs::read_to_string(book().join(chapter)).unwrap();
    let mut out = Vec::new();
    let mut current: Option<String> = None;
    for line in text.lines() {
        match (&mut current, line.trim_start().strip_prefix("```")) {
            (None, Some(tag)) if tag.trim() == lang => current = Some(String::new()),
            (Some(_), Some("")) => out.push(current.take().unwrap()),
            (Some(buf), _) => {
                buf.push_str(line);
                buf.push('\n');
            }
            _ => {}
        }
    }
    out
}

#[test]
fn every_chapter_is_listed_and_compiled() {
    let summary = std::fs::read_to_string(book().join("SUMMARY.md")).unwrap();
    let lib = include_str!("../src/lib.rs");
    for entry in std::fs::read_dir(book()).unwrap() {
        let name = entry.unwrap().file_name().into_string().unwrap();
        if name == "SUMMARY.md" || !name.ends_with(".md") {
            continue;
        }
        assert!(summary.contains(&format!("({name})")), "{name} missing from SUMMARY.md");
        assert!(lib.contains(&format!("book/src/{name}")), "{name} not included in the guide crate");
    }
}

#[test]
fn experiment_example_validates() {
    let json = blocks("cli.md", "json");
    assert_eq!(json.len(), 1);
    let config = ExperimentConfig::from_json(&json[0]).unwrap();
    let v = config.validate(None, None).unwrap();
    assert_eq!(v.plan.n_samples, 1_600_000_000);
    assert_eq!(v.plan.partitions, 4);
}

#[test]
fn bundled_names_in_cli_chapter_exist() {
    let text = std::fs::read_to_string(book().join("cli.md")).unwrap();
    for name in ["table1_row1", "table1_row4", "hom_single_photon"] {
        assert!(text.contains(name));
        assert!(permoptics_cli::config::bundled(name).is_some(), "{name}");
    }
}
