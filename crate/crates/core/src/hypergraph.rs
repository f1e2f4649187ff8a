//! Finite hypergraphs over dense vertex ids, and vertex multisets.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// A hypergraph on vertices `0..n` with a list of edges.
///
/// Edges are stored as sorted vertex lists. Duplicate edges are kept.
/// A per-vertex incidence index is built at construction time.
///
/// The type itself admits empty edges so that [`Hypergraph::dualize`] can
/// represent isolated vertices; the solvers reject them up front.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    edges: Vec<Vec<usize>>,
    incidence: Vec<Vec<usize>>,
}

impl Hypergraph {
    /// Builds a hypergraph, sorting each edge. Fails on out-of-range ids and
    /// on a vertex repeated inside one edge.
    pub fn new(n: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        let mut sorted = Vec::with_capacity(edges.len());
        for (i, mut edge) in edges.into_iter().enumerate() {
            if let Some(&bad) = edge.iter().find(|&&v| v >= n) {
                return Err(Error::InvalidHypergraph(format!(
                    "edge {i} contains vertex {bad}, outside 0..{n}"
                )));
            }
            edge.sort_unstable();
            if let Some(w) = edge.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::InvalidHypergraph(format!(
                    "edge {i} repeats vertex {}",
                    w[0]
                )));
            }
            sorted.push(edge);
        }
        let mut incidence = vec![Vec::new(); n];
        for (i, edge) in sorted.iter().enumerate() {
            for &v in edge {
                incidence[v].push(i);
            }
        }
        Ok(Hypergraph {
            n,
            edges: sorted,
            incidence,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> &[usize] {
        &self.edges[i]
    }

    /// Edge indices containing vertex `x`, ascending.
    pub fn incident_edges(&self, x: usize) -> &[usize] {
        &self.incidence[x]
    }

    pub fn degree(&self, x: usize) -> usize {
        self.incidence[x].len()
    }

    /// Number of (vertex, edge) incidence pairs.
    pub fn incidence_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    /// Maximum vertex degree Δ.
    pub fn max_degree(&self) -> Result<usize> {
        if self.edges.is_empty() {
            return Err(Error::NoEdges);
        }
        Ok(self.incidence.iter().map(Vec::len).max().unwrap_or(0))
    }

    /// Checks the preconditions shared by every solver: at least one edge and
    /// no empty edge.
    pub fn check_solvable(&self) -> Result<()> {
        if self.edges.is_empty() {
            return Err(Error::NoEdges);
        }
        match self.edges.iter().position(Vec::is_empty) {
            Some(i) => Err(Error::UncoverableEdge(i)),
            None => Ok(()),
        }
    }

    /// True iff every edge holds at least `f` elements of `picks`, counted
    /// with multiplicity.
    pub fn is_f_fold_transversal(&self, picks: &Multiset, f: u32) -> bool {
        self.first_undercovered(picks, f).is_none()
    }

    /// The first edge covered fewer than `f` times, with its coverage.
    pub fn first_undercovered(&self, picks: &Multiset, f: u32) -> Option<(usize, u64)> {
        self.edges.iter().enumerate().find_map(|(i, edge)| {
            let covered: u64 = edge.iter().map(|&v| picks.multiplicity(v)).sum();
            (covered < u64::from(f)).then_some((i, covered))
        })
    }

    /// The combinatorial dual: one vertex per edge, one edge per vertex.
    /// Edge `j` of the result lists the edges of `self` that contain `j`.
    pub fn dualize(&self) -> Hypergraph {
        Hypergraph {
            n: self.edges.len(),
            edges: self.incidence.clone(),
            incidence: self.edges.clone(),
        }
    }

    /// Drops vertices of degree zero and renumbers the rest in order.
    pub fn without_isolated(&self) -> Hypergraph {
        let mut remap = vec![usize::MAX; self.n];
        let mut next = 0;
        for (x, inc) in self.incidence.iter().enumerate() {
            if !inc.is_empty() {
                remap[x] = next;
                next += 1;
            }
        }
        let edges = self
            .edges
            .iter()
            .map(|e| e.iter().map(|&v| remap[v]).collect())
            .collect();
        Hypergraph::new(next, edges).expect("renumbering preserves validity")
    }
}

/// A multiset of vertex ids. Only multiplicities of at least one are stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Multiset {
    counts: BTreeMap<usize, u64>,
    size: u64,
}

impl Multiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_picks<I: IntoIterator<Item = usize>>(picks: I) -> Self {
        let mut set = Multiset::new();
        for v in picks {
            set.add(v, 1);
        }
        set
    }

    pub fn add(&mut self, v: usize, times: u64) {
        if times == 0 {
            return;
        }
        *self.counts.entry(v).or_insert(0) += times;
        self.size += times;
    }

    pub fn multiplicity(&self, v: usize) -> u64 {
        self.counts.get(&v).copied().unwrap_or(0)
    }

    /// Total number of elements, with multiplicity.
    pub fn size(&self) -> u64 {
        self.size
    }

    /// Number of distinct vertices.
    pub fn support_len(&self) -> usize {
        self.counts.len()
    }

    pub fn max_vertex(&self) -> Option<usize> {
        self.counts.keys().next_back().copied()
    }

    /// `(vertex, multiplicity)` pairs in ascending vertex order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.counts.iter().map(|(&v, &c)| (v, c))
    }
}

impl FromIterator<(usize, u64)> for Multiset {
    fn from_iter<I: IntoIterator<Item = (usize, u64)>>(iter: I) -> Self {
        let mut set = Multiset::new();
        for (v, c) in iter {
            set.add(v, c);
        }
        set
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    fn triangle() -> Hypergraph {
        Hypergraph::new(3, vec![vec![0, 1], vec![1, 2], vec![2, 0]]).unwrap()
    }

    #[test]
    fn max_degree_examples() {
        let single = Hypergraph::new(1, vec![vec![0]]).unwrap();
        assert_eq!(single.max_degree().unwrap(), 1);
        assert_eq!(triangle().max_degree().unwrap(), 2);
        assert_eq!(generate::fano().max_degree().unwrap(), 3);
    }

    #[test]
    fn max_degree_without_edges_is_an_error() {
        let h = Hypergraph::new(3, vec![]).unwrap();
        assert!(matches!(h.max_degree(), Err(Error::NoEdges)));
    }

    #[test]
    fn fano_degrees_by_direct_count() {
        let fano = generate::fano();
        for x in 0..7 {
            let count = fano.edges().iter().filter(|e| e.contains(&x)).count();
            assert_eq!(count, 3);
            assert_eq!(fano.degree(x), 3);
        }
    }

    #[test]
    fn rejects_out_of_range_and_repeats() {
        assert!(Hypergraph::new(2, vec![vec![0, 2]]).is_err());
        assert!(Hypergraph::new(3, vec![vec![1, 1]]).is_err());
    }

    #[test]
    fn transversal_examples() {
        let single = Hypergraph::new(1, vec![vec![0]]).unwrap();
        assert!(single.is_f_fold_transversal(&Multiset::from_iter([(0, 2)]), 2));
        let pair = Hypergraph::new(2, vec![vec![0, 1]]).unwrap();
        assert!(!pair.is_f_fold_transversal(&Multiset::from_iter([(0, 1)]), 2));
    }

    #[test]
    fn fano_line_is_a_transversal() {
        let fano = generate::fano();
        // Any two lines meet.
        for a in fano.edges() {
            for b in fano.edges() {
                assert!(a.iter().any(|v| b.contains(v)));
            }
        }
        for line in fano.edges() {
            let picks = Multiset::from_picks(line.iter().copied());
            assert!(fano.is_f_fold_transversal(&picks, 1));
        }
    }

    #[test]
    fn dualize_examples() {
        let single = Hypergraph::new(1, vec![vec![0]]).unwrap();
        assert_eq!(single.dualize(), single);

        let pair = Hypergraph::new(2, vec![vec![0, 1]]).unwrap();
        let dual = pair.dualize();
        assert_eq!(dual.vertex_count(), 1);
        assert_eq!(dual.edges(), &[vec![0], vec![0]]);
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }

    fn isomorphic(a: &Hypergraph, b: &Hypergraph) -> bool {
        if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
            return false;
        }
        let mut target: Vec<Vec<usize>> = b.edges().to_vec();
        target.sort();
        permutations(a.vertex_count()).into_iter().any(|perm| {
            let mut mapped: Vec<Vec<usize>> = a
                .edges()
                .iter()
                .map(|e| {
                    let mut m: Vec<usize> = e.iter().map(|&v| perm[v]).collect();
                    m.sort_unstable();
                    m
                })
                .collect();
            mapped.sort();
            mapped == target
        })
    }

    #[test]
    fn fano_is_self_dual() {
        let fano = generate::fano();
        assert!(isomorphic(&fano, &fano.dualize()));
    }

    #[test]
    fn double_dual_drops_isolated_vertices() {
        let h = Hypergraph::new(5, vec![vec![0, 1], vec![1, 3]]).unwrap();
        let back = h.dualize().dualize();
        assert!(isomorphic(&back.without_isolated(), &h.without_isolated()));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_hypergraph() -> impl Strategy<Value = Hypergraph> {
            (1usize..12).prop_flat_map(|n| {
                prop::collection::vec(prop::collection::btree_set(0..n, 1..=n.min(4)), 1..15)
                    .prop_map(move |edges| {
                        Hypergraph::new(
                            n,
                            edges.into_iter().map(|e| e.into_iter().collect()).collect(),
                        )
                        .unwrap()
                    })
            })
        }

        proptest! {
            #[test]
            fn degree_sum_matches_edge_sizes(h in arb_hypergraph()) {
                let degree_sum: usize = (0..h.vertex_count()).map(|x| h.degree(x)).sum();
                prop_assert_eq!(degree_sum, h.incidence_count());
                let naive = (0..h.vertex_count())
                    .map(|x| h.edges().iter().filter(|e| e.contains(&x)).count())
                    .max()
                    .unwrap();
                prop_assert_eq!(h.max_degree().unwrap(), naive);
            }

            #[test]
            fn dual_swaps_counts(h in arb_hypergraph()) {
                let d = h.dualize();
                prop_assert_eq!(d.vertex_count(), h.edge_count());
                prop_assert_eq!(d.edge_count(), h.vertex_count());
                prop_assert_eq!(d.incidence_count(), h.incidence_count());
            }

            #[test]
            fn adding_a_vertex_keeps_transversals(
                h in arb_hypergraph(),
                picks in prop::collection::vec(0usize..12, 0..20),
                extra in 0usize..12,
                f in 1u32..4,
            ) {
                let n = h.vertex_count();
                let mut set = Multiset::from_picks(picks.into_iter().map(|v| v % n));
                let before = h.is_f_fold_transversal(&set, f);
                set.add(extra % n, 1);
                prop_assert!(!before || h.is_f_fold_transversal(&set, f));
            }
        }
    }
}
