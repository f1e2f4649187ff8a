//! Exhaustive branch-and-bound for τ_f on small instances.

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::greedy::greedy_solve;
use crate::hypergraph::{Hypergraph, Multiset};
use crate::lambda::RationalLambda;
use crate::lp;

pub const DEFAULT_NODE_BUDGET: u64 = 20_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactSolution {
    pub size: u64,
    pub witness: Multiset,
    pub nodes: u64,
}

struct Search<'a> {
    h: &'a Hypergraph,
    f: u32,
    mult: Vec<u32>,
    frozen: Vec<bool>,
    cover: Vec<u32>,
    size: u64,
    best: u64,
    best_mult: Vec<u32>,
    global_lb: u64,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

impl Search<'_> {
    fn capacity(&self, x: usize) -> u32 {
        if self.frozen[x] {
            0
        } else {
            self.f - self.mult[x]
        }
    }

    /// Cheap bound on picks still needed, or `None` if some edge can no
    /// longer be satisfied.
    fn remaining_lower_bound(&self) -> Option<u64> {
        let mut max_deficit = 0u64;
        let mut total_deficit = 0u64;
        for (e, edge) in self.h.edges().iter().enumerate() {
            let deficit = self.f.saturating_sub(self.cover[e]);
            if deficit == 0 {
                continue;
            }
            let cap: u32 = edge.iter().map(|&x| self.capacity(x)).sum();
            if cap < deficit {
                return None;
            }
            max_deficit = max_deficit.max(u64::from(deficit));
            total_deficit += u64::from(deficit);
        }
        if total_deficit == 0 {
            return Some(0);
        }
        let best_gain = (0..self.h.vertex_count())
            .filter(|&x| self.capacity(x) > 0)
            .map(|x| {
                self.h
                    .incident_edges(x)
                    .iter()
                    .filter(|&&e| self.cover[e] < self.f)
                    .count() as u64
            })
            .max()
            .unwrap_or(0);
        if best_gain == 0 {
            return None;
        }
        Some(max_deficit.max(total_deficit.div_ceil(best_gain)))
    }

    /// Unsatisfied edge with the least room to spare.
    fn branch_edge(&self) -> Option<usize> {
        let mut best: Option<(i64, usize)> = None;
        for (e, edge) in self.h.edges().iter().enumerate() {
            let deficit = self.f.saturating_sub(self.cover[e]);
            if deficit == 0 {
                continue;
            }
            let cap: u32 = edge.iter().map(|&x| self.capacity(x)).sum();
            let slack = i64::from(cap) - i64::from(deficit);
            if best.is_none_or(|(s, _)| slack < s) {
                best = Some((slack, e));
            }
        }
        best.map(|(_, e)| e)
    }

    fn set_pick(&mut self, x: usize, add: bool) {
        for &e in self.h.incident_edges(x) {
            if add {
                self.cover[e] += 1;
            } else {
                self.cover[e] -= 1;
            }
        }
        if add {
            self.mult[x] += 1;
            self.size += 1;
        } else {
            self.mult[x] -= 1;
            self.size -= 1;
        }
    }

    fn dfs(&mut self) {
        if self.exhausted || self.best == self.global_lb {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        let Some(needed) = self.remaining_lower_bound() else {
            return;
        };
        if self.size + needed >= self.best {
            return;
        }
        let Some(e) = self.branch_edge() else {
            self.best = self.size;
            self.best_mult = self.mult.clone();
            return;
        };
        let Some(&x) = self.h.edge(e).iter().find(|&&x| self.capacity(x) > 0) else {
            return;
        };
        self.set_pick(x, true);
        self.dfs();
        self.set_pick(x, false);

        self.frozen[x] = true;
        self.dfs();
        self.frozen[x] = false;
    }
}

fn multiset_from(mult: &[u32]) -> Multiset {
    mult.iter()
        .enumerate()
        .map(|(x, &c)| (x, u64::from(c)))
        .collect()
}

/// `⌈f τ*⌉`, using the exact LP when the instance is small enough.
pub fn lp_lower_bound(h: &Hypergraph, f: u32) -> Result<u64> {
    let bound = if lp::Mode::auto(h) == lp::Mode::Exact {
        let tau = lp::fractional_transversal_exact(h)?.objective;
        (tau * BigRational::from_integer(f.into()))
            .ceil()
            .to_integer()
            .to_u64()
            .unwrap_or(u64::MAX)
    } else {
        let tau = lp::fractional_pair_float(h)?.0.objective;
        (tau * f64::from(f) - 1e-7).ceil().max(0.0) as u64
    };
    Ok(bound)
}

/// The minimum size of an f-fold transversal, with one witness.
pub fn exact_tau_f(h: &Hypergraph, f: u32, budget: u64) -> Result<ExactSolution> {
    if f == 0 {
        return Err(Error::Domain("f must be positive".into()));
    }
    h.check_solvable()?;
    let (incumbent, _) = greedy_solve(h, f, RationalLambda::default())?;
    let global_lb = lp_lower_bound(h, f)?;
    let mut best_mult = vec![0u32; h.vertex_count()];
    for (x, c) in incumbent.iter() {
        // Greedy never needs more than f copies, but cap anyway.
        best_mult[x] = c.min(u64::from(f)) as u32;
    }
    let mut search = Search {
        h,
        f,
        mult: vec![0; h.vertex_count()],
        frozen: vec![false; h.vertex_count()],
        cover: vec![0; h.edge_count()],
        size: 0,
        best: best_mult.iter().map(|&c| u64::from(c)).sum(),
        best_mult,
        global_lb,
        nodes: 0,
        budget,
        exhausted: false,
    };
    search.dfs();
    if search.exhausted {
        return Err(Error::BudgetExceeded {
            budget,
            incumbent: search.best,
            lower_bound: global_lb,
        });
    }
    let witness = multiset_from(&search.best_mult);
    debug_assert!(h.is_f_fold_transversal(&witness, f));
    Ok(ExactSolution {
        size: search.best,
        witness,
        nodes: search.nodes,
    })
}

/// `f·τ* ≤ τ_f ≤ |greedy|` on one instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SandwichReport {
    #[serde(serialize_with = "serialize_rational")]
    pub f_tau_star: BigRational,
    pub tau_f: u64,
    pub greedy: u64,
}

fn serialize_rational<S: serde::Serializer>(
    r: &BigRational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&lp::format_rational(r))
}

pub fn sandwich_check(h: &Hypergraph, f: u32, lambda: RationalLambda) -> Result<SandwichReport> {
    let tau = lp::fractional_transversal_exact(h)?.objective;
    let f_tau_star = tau * BigRational::from_integer(f.into());
    let exact = exact_tau_f(h, f, DEFAULT_NODE_BUDGET)?;
    let (greedy, _) = greedy_solve(h, f, lambda)?;
    let report = SandwichReport {
        f_tau_star,
        tau_f: exact.size,
        greedy: greedy.size(),
    };
    if report.f_tau_star > BigRational::from_integer(report.tau_f.into()) {
        return Err(Error::Sandwich(format!(
            "f·τ* = {} exceeds τ_f = {}",
            lp::format_rational(&report.f_tau_star),
            report.tau_f
        )));
    }
    if report.tau_f > report.greedy {
        return Err(Error::Sandwich(format!(
            "τ_f = {} exceeds greedy size {}",
            report.tau_f, report.greedy
        )));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    /// Enumerates every multiplicity vector in `[0, f]^n`.
    fn brute_force(h: &Hypergraph, f: u32) -> u64 {
        let n = h.vertex_count();
        let mut mult = vec![0u64; n];
        let mut best = u64::MAX;
        loop {
            let set: Multiset = mult.iter().enumerate().map(|(x, &c)| (x, c)).collect();
            if h.is_f_fold_transversal(&set, f) {
                best = best.min(set.size());
            }
            let mut i = 0;
            while i < n && mult[i] == u64::from(f) {
                mult[i] = 0;
                i += 1;
            }
            if i == n {
                return best;
            }
            mult[i] += 1;
        }
    }

    #[test]
    fn single_vertex() {
        let h = Hypergraph::new(1, vec![vec![0]]).unwrap();
        let sol = exact_tau_f(&h, 5, 1000).unwrap();
        assert_eq!(sol.size, 5);
        assert_eq!(sol.witness.multiplicity(0), 5);
    }

    #[test]
    fn triangle_needs_two() {
        assert_eq!(exact_tau_f(&generate::triangle(), 1, 1000).unwrap().size, 2);
    }

    #[test]
    fn fano_values() {
        // Frozen from exhaustive enumeration over [0, f]^7.
        let fano = generate::fano();
        assert_eq!(exact_tau_f(&fano, 1, 100_000).unwrap().size, 3);
        assert_eq!(exact_tau_f(&fano, 2, 100_000).unwrap().size, 6);
        assert_eq!(exact_tau_f(&fano, 3, 100_000).unwrap().size, 7);
        assert_eq!(brute_force(&fano, 2), 6);
    }

    #[test]
    fn matches_brute_force() {
        for seed in 0..25 {
            let h = generate::random(6, 9, 1, 3, seed).unwrap();
            for f in 1..=3 {
                let sol = exact_tau_f(&h, f, 1_000_000).unwrap();
                assert!(h.is_f_fold_transversal(&sol.witness, f));
                assert_eq!(sol.size, sol.witness.size());
                assert_eq!(sol.size, brute_force(&h, f), "seed {seed} f {f}");
            }
        }
    }

    #[test]
    fn budget_exhaustion_reports_bounds() {
        let h = generate::random(15, 25, 2, 4, 3).unwrap();
        match exact_tau_f(&h, 3, 2) {
            Err(Error::BudgetExceeded {
                incumbent,
                lower_bound,
                ..
            }) => {
                assert!(lower_bound <= incumbent);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn monotone_in_f() {
        for seed in 0..10 {
            let h = generate::random(8, 10, 1, 4, seed).unwrap();
            let t: Vec<u64> = (1..=4)
                .map(|f| exact_tau_f(&h, f, 1_000_000).unwrap().size)
                .collect();
            for f in 1..4 {
                assert!(t[f] > t[f - 1]);
            }
            for (f, &tf) in t.iter().enumerate() {
                assert!(tf <= (f as u64 + 1) * t[0]);
            }
        }
    }

    #[test]
    fn sandwich_examples() {
        let single = Hypergraph::new(1, vec![vec![0]]).unwrap();
        let half = RationalLambda::new(1, 2).unwrap();
        let r = sandwich_check(&single, 2, half).unwrap();
        assert_eq!(r.f_tau_star, BigRational::from_integer(2.into()));
        assert_eq!((r.tau_f, r.greedy), (2, 2));

        let r = sandwich_check(&generate::three_edge(), 2, half).unwrap();
        assert_eq!(r.f_tau_star, BigRational::from_integer(4.into()));
        assert_eq!((r.tau_f, r.greedy), (4, 4));
    }
}
