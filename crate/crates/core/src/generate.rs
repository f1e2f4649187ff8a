//! Instance generators. All randomness comes from a single `u64` seed fed to
//! ChaCha8, so output is stable across platforms.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

/// Lines of the Fano plane on points 0..7.
pub const FANO_LINES: [[usize; 3]; 7] = [
    [0, 1, 2],
    [0, 3, 4],
    [0, 5, 6],
    [1, 3, 5],
    [1, 4, 6],
    [2, 3, 6],
    [2, 4, 5],
];

pub fn fano() -> Hypergraph {
    Hypergraph::new(7, FANO_LINES.iter().map(|l| l.to_vec()).collect()).expect("valid fixture")
}

pub fn triangle() -> Hypergraph {
    Hypergraph::new(3, vec![vec![0, 1], vec![1, 2], vec![2, 0]]).expect("valid fixture")
}

/// Edges `{0,1}, {0}, {1}`: each singleton forces two copies at f = 2.
pub fn three_edge() -> Hypergraph {
    Hypergraph::new(2, vec![vec![0, 1], vec![0], vec![1]]).expect("valid fixture")
}

pub fn complete_graph(n: usize) -> Result<Hypergraph> {
    if n < 2 {
        return Err(Error::Domain("complete graph needs n >= 2".into()));
    }
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for a in 0..n {
        for b in a + 1..n {
            edges.push(vec![a, b]);
        }
    }
    Hypergraph::new(n, edges)
}

pub fn cycle(n: usize) -> Result<Hypergraph> {
    if n < 3 {
        return Err(Error::Domain("cycle needs n >= 3".into()));
    }
    Hypergraph::new(n, (0..n).map(|i| vec![i, (i + 1) % n]).collect())
}

/// `m` edges, each of size uniform in `[s_min, min(s_max, n)]`, with
/// vertices drawn uniformly without replacement.
pub fn random(n: usize, m: usize, s_min: usize, s_max: usize, seed: u64) -> Result<Hypergraph> {
    if n == 0 || m == 0 {
        return Err(Error::Domain(
            "random hypergraph needs n >= 1 and m >= 1".into(),
        ));
    }
    if s_min == 0 || s_min > s_max {
        return Err(Error::Domain(format!(
            "edge size range [{s_min}, {s_max}] must satisfy 1 <= s_min <= s_max"
        )));
    }
    if s_min > n {
        return Err(Error::Domain(format!("s_min = {s_min} exceeds n = {n}")));
    }
    let hi = s_max.min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = (0..m)
        .map(|_| {
            let size = rng.gen_range(s_min..=hi);
            index::sample(&mut rng, n, size).into_vec()
        })
        .collect();
    Hypergraph::new(n, edges)
}

/// Size class of a suite instance; see [`suite_instance`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SizeClass {
    Tiny,
    Small,
    Large,
}

/// Instance `i` of the seeded random test suite: sizes cycle through
/// tiny (n ≤ 20, m ≤ 40), small (n ≤ 60, m ≤ 150) and large (n ≤ 200,
/// m ≤ 500), with edge sizes 1–8.
pub fn suite_instance(i: u64, seed: u64) -> Hypergraph {
    let class = match i % 3 {
        0 => SizeClass::Tiny,
        1 => SizeClass::Small,
        _ => SizeClass::Large,
    };
    let (n_max, m_max) = match class {
        SizeClass::Tiny => (20, 40),
        SizeClass::Small => (60, 150),
        SizeClass::Large => (200, 500),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ i.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let n = rng.gen_range(2..=n_max);
    let m = rng.gen_range(1..=m_max);
    random(n, m, 1, 8, rng.gen()).expect("suite parameters are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_is_deterministic() {
        let a = random(30, 50, 1, 8, 1).unwrap();
        let b = random(30, 50, 1, 8, 1).unwrap();
        assert_eq!(a, b);
        let c = random(30, 50, 1, 8, 2).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn random_respects_size_range() {
        let h = random(10, 200, 2, 4, 9).unwrap();
        assert!(h.edges().iter().all(|e| (2..=4).contains(&e.len())));
        let clipped = random(3, 20, 1, 8, 9).unwrap();
        assert!(clipped.edges().iter().all(|e| e.len() <= 3));
    }

    #[test]
    fn complete_graph_edge_count() {
        let k5 = complete_graph(5).unwrap();
        assert_eq!(k5.edge_count(), 10);
        assert!(k5.edges().iter().all(|e| e.len() == 2));
    }

    #[test]
    fn fano_shape() {
        let h = fano();
        assert_eq!((h.vertex_count(), h.edge_count()), (7, 7));
    }
}
