//! Runs the checked-in fuzz seeds through the parsers.

use std::fs;
use std::path::PathBuf;

use multicover::geometry;
use multicover::io;
use multicover::RationalLambda;

fn seeds(target: &str) -> Vec<(PathBuf, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<(PathBuf, String)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|entry| {
            let path = entry.unwrap().path();
            let text = fs::read_to_string(&path).unwrap();
            (path, text)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn hypergraph_seeds() {
    let mut parsed = 0;
    for (path, text) in seeds("parse_hypergraph") {
        if let Ok(h) = io::parse_hypergraph(&text) {
            parsed += 1;
            assert_eq!(
                io::parse_hypergraph(&io::serialize_hypergraph(&h)).unwrap(),
                h,
                "{}",
                path.display()
            );
        }
    }
    assert!(parsed >= 3);
}

#[test]
fn multiset_seeds() {
    for (_, text) in seeds("parse_multiset") {
        if let Ok(set) = io::parse_multiset(&text) {
            assert_eq!(
                io::parse_multiset(&io::serialize_multiset(&set)).unwrap(),
                set
            );
        }
    }
}

#[test]
fn instance_seeds() {
    let ok: Vec<bool> = seeds("parse_instance")
        .iter()
        .map(|(_, text)| geometry::parse_instance(text).is_ok())
        .collect();
    assert!(ok.iter().any(|&b| b) && ok.iter().any(|&b| !b));
}

#[test]
fn lambda_seeds() {
    for (_, text) in seeds("parse_lambda") {
        if let Ok(l) = text.parse::<RationalLambda>() {
            assert_eq!(l.to_string().parse::<RationalLambda>().unwrap(), l);
        }
    }
}
