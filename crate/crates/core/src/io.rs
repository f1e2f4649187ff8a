//! JSON file formats.
//!
//! Hypergraph: `{"n": 7, "edges": [[0,1,2], ...]}`.
//! Multiset: `{"picks": [[vertex, multiplicity], ...]}`.
//! Solution: `{"picks", "multiset", "size", "groups", "lambda", "f", ...}`.
//!
//! Serialization is compact and canonical: edges keep their order, vertex
//! lists are ascending, multiset entries are ascending by vertex.

use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use crate::error::{Error, ParseError, Result};
use crate::greedy::GreedyTrace;
use crate::hypergraph::{Hypergraph, Multiset};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HypergraphFile {
    n: usize,
    edges: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MultisetFile {
    picks: Vec<(usize, u64)>,
}

pub fn parse_hypergraph(text: &str) -> Result<Hypergraph> {
    let file: HypergraphFile =
        serde_json::from_str(text).map_err(|e| ParseError::from_json("hypergraph", &e))?;
    let n = file.n;
    for (i, edge) in file.edges.iter().enumerate() {
        if edge.is_empty() {
            return Err(ParseError::new(format!("edges[{i}]"), "edge is empty").into());
        }
        if let Some(pos) = edge.iter().position(|&v| v >= n) {
            return Err(ParseError::new(
                format!("edges[{i}][{pos}]"),
                format!("vertex id {} is out of range for n = {n}", edge[pos]),
            )
            .into());
        }
        let mut sorted = edge.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(ParseError::new(
                format!("edges[{i}]"),
                format!("vertex {} appears twice", w[0]),
            )
            .into());
        }
    }
    Hypergraph::new(n, file.edges)
}

pub fn serialize_hypergraph(h: &Hypergraph) -> String {
    let file = HypergraphFile {
        n: h.vertex_count(),
        edges: h.edges().to_vec(),
    };
    serde_json::to_string(&file).expect("hypergraph serializes")
}

pub fn parse_multiset(text: &str) -> Result<Multiset> {
    let file: MultisetFile =
        serde_json::from_str(text).map_err(|e| ParseError::from_json("multiset", &e))?;
    let mut set = Multiset::new();
    for (i, &(v, count)) in file.picks.iter().enumerate() {
        if count == 0 {
            return Err(
                ParseError::new(format!("picks[{i}]"), "multiplicity must be at least 1").into(),
            );
        }
        if set.multiplicity(v) > 0 {
            return Err(
                ParseError::new(format!("picks[{i}]"), format!("vertex {v} listed twice")).into(),
            );
        }
        if set.size().checked_add(count).is_none() {
            return Err(ParseError::new(format!("picks[{i}]"), "total size overflows").into());
        }
        set.add(v, count);
    }
    Ok(set)
}

/// Parses a multiset and checks its ids against `h`.
pub fn parse_multiset_for(text: &str, h: &Hypergraph) -> Result<Multiset> {
    let set = parse_multiset(text)?;
    match set.max_vertex() {
        Some(v) if v >= h.vertex_count() => Err(ParseError::new(
            "picks",
            format!("vertex id {v} is out of range for n = {}", h.vertex_count()),
        )
        .into()),
        _ => Ok(set),
    }
}

pub fn serialize_multiset(set: &Multiset) -> String {
    let file = MultisetFile {
        picks: set.iter().collect(),
    };
    serde_json::to_string(&file).expect("multiset serializes")
}

fn raw_number(n: &impl ToString) -> Box<RawValue> {
    RawValue::from_string(n.to_string()).expect("integers are valid JSON")
}

#[derive(Serialize)]
struct SolutionFile {
    picks: Vec<usize>,
    multiset: Vec<(usize, u64)>,
    size: u64,
    /// `[j, z_j, t_j]` for every group with at least one pick.
    groups: Vec<(Box<RawValue>, Box<RawValue>, usize)>,
    lambda: String,
    f: u32,
    delta: usize,
    #[serde(rename = "N")]
    group_count: Box<RawValue>,
    scale: Box<RawValue>,
}

/// Solution JSON. Big integers are written as plain JSON numbers of any
/// length; groups with `t_j = 0` are omitted and `N` gives the full count.
pub fn solution_json(set: &Multiset, trace: &GreedyTrace) -> String {
    let file = SolutionFile {
        picks: trace.picks.clone(),
        multiset: set.iter().collect(),
        size: set.size(),
        groups: trace
            .groups
            .iter()
            .map(|g| {
                (
                    raw_number(&g.index),
                    raw_number(g.value.as_biguint()),
                    g.picks,
                )
            })
            .collect(),
        lambda: trace.lambda.to_string(),
        f: trace.f,
        delta: trace.delta,
        group_count: raw_number(&trace.group_count),
        scale: raw_number(&trace.scale()),
    };
    serde_json::to_string(&file).expect("solution serializes")
}

pub fn read_to_string(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(Error::from)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::greedy::greedy_solve;
    use crate::lambda::RationalLambda;

    const FANO_FIXTURE: &str = include_str!("../tests/fixtures/fano.json");
    const THREE_EDGE_FIXTURE: &str = include_str!("../tests/fixtures/three_edge.json");

    #[test]
    fn canonical_round_trip() {
        let s = r#"{"n":3,"edges":[[0,1],[1,2],[0,2]]}"#;
        assert_eq!(serialize_hypergraph(&parse_hypergraph(s).unwrap()), s);
        let m = r#"{"picks":[[0,2],[4,1]]}"#;
        assert_eq!(serialize_multiset(&parse_multiset(m).unwrap()), m);
    }

    #[test]
    fn fano_fixture() {
        let h = parse_hypergraph(FANO_FIXTURE).unwrap();
        assert_eq!((h.vertex_count(), h.edge_count()), (7, 7));
        assert_eq!(h, generate::fano());
        assert_eq!(
            parse_hypergraph(THREE_EDGE_FIXTURE).unwrap(),
            generate::three_edge()
        );
    }

    #[test]
    fn out_of_range_id_names_the_field() {
        let err = parse_hypergraph(r#"{"n":2,"edges":[[0,1],[1,2]]}"#).unwrap_err();
        match err {
            Error::Parse(p) => {
                assert_eq!(p.context, "edges[1][1]");
                assert!(p.message.contains("out of range"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_json_reports_position() {
        let err = parse_hypergraph("{\"n\": 2,\n \"edges\": [[0,]]}").unwrap_err();
        match err {
            Error::Parse(p) => assert!(p.context.contains("line 2"), "{}", p.context),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_hypergraph(r#"{"n":2,"edges":[[]]}"#).is_err());
        assert!(parse_hypergraph(r#"{"n":2,"edges":[[1,1]]}"#).is_err());
        assert!(parse_hypergraph(r#"{"n":2,"edges":[],"x":1}"#).is_err());
        assert!(parse_multiset(r#"{"picks":[[0,0]]}"#).is_err());
        assert!(parse_multiset(r#"{"picks":[[0,1],[0,2]]}"#).is_err());
    }

    #[test]
    fn multiset_ids_checked_against_hypergraph() {
        let h = generate::triangle();
        assert!(parse_multiset_for(r#"{"picks":[[2,1]]}"#, &h).is_ok());
        assert!(parse_multiset_for(r#"{"picks":[[3,1]]}"#, &h).is_err());
    }

    #[test]
    fn solution_layout() {
        let h = generate::three_edge();
        let (set, trace) = greedy_solve(&h, 2, RationalLambda::new(1, 2).unwrap()).unwrap();
        let json = solution_json(&set, &trace);
        assert_eq!(
            json,
            r#"{"picks":[0,1,0,1],"multiset":[[0,2],[1,2]],"size":4,"groups":[[1,4,1],[2,3,1],[4,1,2]],"lambda":"1/2","f":2,"delta":2,"N":4,"scale":2}"#
        );
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn hypergraph_round_trip(seed in 0u64..1000, n in 1usize..30, m in 1usize..40) {
                let h = generate::random(n, m, 1, 6, seed).unwrap();
                let text = serialize_hypergraph(&h);
                let back = parse_hypergraph(&text).unwrap();
                prop_assert_eq!(serialize_hypergraph(&back), text);
                prop_assert_eq!(back, h);
            }

            #[test]
            fn parser_never_panics(s in "\\PC*") {
                let _ = parse_hypergraph(&s);
                let _ = parse_multiset(&s);
            }
        }
    }
}
