//! The weighted greedy for f-fold transversals.
//!
//! Every edge holds `f` bank notes worth `1, λ, …, λ^(f-1)`. Each pick pays
//! out, from every edge containing the picked vertex, the largest note that
//! edge still has. The greedy always picks a vertex with the largest payout
//! and stops once every edge has been hit `f` times.
//!
//! Payouts are tracked as integers scaled by `q^(f-1)` (see [`crate::scaled`]).
//! Ties go to the lowest vertex id.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Multiset};
use crate::lambda::RationalLambda;
use crate::scaled::{big_notes, fits_u128, scale, NoteTable, Payout, ScaledValue};

/// Per-edge hit counts, with multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoverState {
    counts: Vec<u32>,
}

impl CoverState {
    pub fn zero(edges: usize) -> Self {
        CoverState {
            counts: vec![0; edges],
        }
    }

    pub fn from_counts(counts: Vec<u32>) -> Self {
        CoverState { counts }
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn get(&self, edge: usize) -> u32 {
        self.counts[edge]
    }

    /// Records one pick of `x`.
    pub fn apply_pick(&mut self, h: &Hypergraph, x: usize) {
        for &e in h.incident_edges(x) {
            self.counts[e] += 1;
        }
    }

    pub fn is_complete(&self, f: u32) -> bool {
        self.counts.iter().all(|&k| k >= f)
    }
}

/// Scaled truncated exponential: `p^k q^(f-1-k)` for `k < f`, else zero.
pub fn texp(lambda: RationalLambda, k: u32, f: u32) -> ScaledValue {
    if k >= f {
        return ScaledValue::zero();
    }
    let p = num_traits::pow(BigUint::from(lambda.numer()), k as usize);
    let q = num_traits::pow(BigUint::from(lambda.denom()), (f - 1 - k) as usize);
    ScaledValue::new(p * q)
}

/// Scaled payout of picking `x` at `state`.
pub fn vertex_value(
    h: &Hypergraph,
    state: &CoverState,
    x: usize,
    lambda: RationalLambda,
    f: u32,
) -> ScaledValue {
    let table: NoteTable<BigUint> = NoteTable::new(lambda, f);
    ScaledValue::new(value_at(h, state, x, &table))
}

/// Scaled payout still to be collected from every edge.
pub fn total_remaining_value(state: &CoverState, lambda: RationalLambda, f: u32) -> ScaledValue {
    let table: NoteTable<BigUint> = NoteTable::new(lambda, f);
    ScaledValue::new(remaining_at(state, &table))
}

fn value_at<W: Payout>(h: &Hypergraph, state: &CoverState, x: usize, table: &NoteTable<W>) -> W {
    let mut v = W::nothing();
    for &e in h.incident_edges(x) {
        v.add_in(&table.note(state.get(e)));
    }
    v
}

fn remaining_at<W: Payout>(state: &CoverState, table: &NoteTable<W>) -> W {
    let mut v = W::nothing();
    for &k in state.counts() {
        v.add_in(table.tail(k));
    }
    v
}

/// A maximal run of picks sharing the value `z_j = Δ q^(f-1) - (j-1)`
/// (scaled), together with the remaining value once the run is over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepGroup {
    /// Group number `j`, starting at 1.
    pub index: BigUint,
    /// Scaled `z_j`.
    pub value: ScaledValue,
    /// Number of picks `t_j`.
    pub picks: usize,
    /// Scaled `v(k_j)`.
    pub remaining_after: ScaledValue,
}

/// The pick sequence of a greedy run and its step-group ledger.
///
/// Groups `1..=N` are all part of the ledger, but only those with at least
/// one pick are stored: `N` grows like `q^(f-1) Δ`. Use [`GreedyTrace::group`]
/// to read any `j`, empty ones included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyTrace {
    pub picks: Vec<usize>,
    pub groups: Vec<StepGroup>,
    pub group_count: BigUint,
    pub f: u32,
    pub lambda: RationalLambda,
    pub delta: usize,
    /// Scaled `v(k_0)`.
    pub initial_remaining: ScaledValue,
}

impl GreedyTrace {
    /// `q^(f-1)`.
    pub fn scale(&self) -> BigUint {
        scale(self.lambda, self.f)
    }

    /// Scaled `z_j`. `j` must lie in `1..=N`.
    pub fn z(&self, j: &BigUint) -> BigUint {
        BigUint::from(self.delta as u64) * self.scale() + BigUint::one() - j
    }

    /// Group `j` including empty ones; `None` outside `1..=N`.
    pub fn group(&self, j: &BigUint) -> Option<StepGroup> {
        if j.is_zero() || *j > self.group_count {
            return None;
        }
        match self.groups.binary_search_by(|g| g.index.cmp(j)) {
            Ok(pos) => Some(self.groups[pos].clone()),
            Err(pos) => {
                let remaining_after = match pos {
                    0 => self.initial_remaining.clone(),
                    _ => self.groups[pos - 1].remaining_after.clone(),
                };
                Some(StepGroup {
                    index: j.clone(),
                    value: ScaledValue::new(self.z(j)),
                    picks: 0,
                    remaining_after,
                })
            }
        }
    }

    /// `t_j` for every group, empty ones included. Only sensible when `N`
    /// is small.
    pub fn all_group_sizes(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut j = BigUint::one();
        while j <= self.group_count {
            out.push(self.group(&j).map_or(0, |g| g.picks));
            j += 1u32;
        }
        out
    }
}

/// Expected group count `N = q^(f-1) Δ - p^(f-1) + 1`.
pub fn group_count(lambda: RationalLambda, f: u32, delta: usize) -> BigUint {
    let p_pow = num_traits::pow(BigUint::from(lambda.numer()), (f - 1) as usize);
    scale(lambda, f) * BigUint::from(delta as u64) + BigUint::one() - p_pow
}

/// Runs the greedy and returns the f-fold transversal with its trace.
pub fn greedy_solve(
    h: &Hypergraph,
    f: u32,
    lambda: RationalLambda,
) -> Result<(Multiset, GreedyTrace)> {
    if f == 0 {
        return Err(Error::Domain("f must be positive".into()));
    }
    h.check_solvable()?;
    let delta = h.max_degree()?;
    let notes = big_notes(lambda, f);
    let (picks, values) = if fits_u128(h.edge_count(), delta, f, lambda) {
        let table: NoteTable<u128> = NoteTable::from_big_notes(&notes);
        let (picks, values) = run(h, &table)?;
        (picks, values.iter().map(Payout::to_big).collect())
    } else {
        let table: NoteTable<BigUint> = NoteTable::from_big_notes(&notes);
        run(h, &table)?
    };
    let trace = build_trace(h, f, lambda, delta, &notes, picks, values);
    let multiset = Multiset::from_picks(trace.picks.iter().copied());
    Ok((multiset, trace))
}

/// Pick sequence for arbitrary scaled notes. Exposed to tests so that
/// rescaled payouts can be compared against the regular run.
pub(crate) fn run<W: Payout>(h: &Hypergraph, table: &NoteTable<W>) -> Result<(Vec<usize>, Vec<W>)> {
    h.check_solvable()?;
    let f = table.f();
    let n = h.vertex_count();
    let mut counts = vec![0u32; h.edge_count()];
    let mut values: Vec<W> = (0..n)
        .map(|x| {
            let mut v = W::nothing();
            for _ in h.incident_edges(x) {
                v.add_in(&table.notes[0]);
            }
            v
        })
        .collect();
    // Payout drop when an edge goes from k to k+1 hits.
    let drops: Vec<W> = (0..f)
        .map(|k| {
            let mut d = table.note(k);
            d.sub_in(&table.note(k + 1));
            d
        })
        .collect();

    let mut open_edges = h.edge_count();
    let mut picks = Vec::new();
    let mut picked_values = Vec::new();
    while open_edges > 0 {
        let mut best = 0;
        for x in 1..n {
            if values[x] > values[best] {
                best = x;
            }
        }
        if values[best].is_nil() {
            let edge = counts.iter().position(|&k| k < f).unwrap_or(0);
            return Err(Error::UncoverableEdge(edge));
        }
        picked_values.push(values[best].clone());
        picks.push(best);
        for &e in h.incident_edges(best) {
            let k = counts[e];
            counts[e] += 1;
            if k < f {
                let d = &drops[k as usize];
                for &y in h.edge(e) {
                    values[y].sub_in(d);
                }
                if k + 1 == f {
                    open_edges -= 1;
                }
            }
        }
    }
    Ok((picks, picked_values))
}

fn build_trace(
    h: &Hypergraph,
    f: u32,
    lambda: RationalLambda,
    delta: usize,
    notes: &[BigUint],
    picks: Vec<usize>,
    values: Vec<BigUint>,
) -> GreedyTrace {
    let top = BigUint::from(delta as u64) * &notes[0];
    let full: BigUint = notes.iter().sum();
    let initial = full * BigUint::from(h.edge_count() as u64);
    let mut remaining = initial.clone();
    let mut groups: Vec<StepGroup> = Vec::new();
    for v in values {
        remaining -= &v;
        match groups.last_mut() {
            Some(g) if *g.value.as_biguint() == v => {
                g.picks += 1;
                g.remaining_after = ScaledValue::new(remaining.clone());
            }
            _ => groups.push(StepGroup {
                index: &top - &v + BigUint::one(),
                value: ScaledValue::new(v),
                picks: 1,
                remaining_after: ScaledValue::new(remaining.clone()),
            }),
        }
    }
    GreedyTrace {
        picks,
        groups,
        group_count: group_count(lambda, f, delta),
        f,
        lambda,
        delta,
        initial_remaining: ScaledValue::new(initial),
    }
}

/// The state at one group boundary, recomputed from the pick sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Boundary {
    /// Boundary `j`: the state after groups `1..=j`.
    pub index: BigUint,
    pub state: CoverState,
    /// `v(k_j)`, recomputed from `state`.
    pub remaining: ScaledValue,
}

/// Group-boundary states `k_0, …, k_N` of a replayed trace.
///
/// Only boundaries that follow a nonempty group are stored (plus `k_0`);
/// `k_j` for the others equals the latest stored boundary before `j`.
#[derive(Debug, Clone)]
pub struct Boundaries {
    pub entries: Vec<Boundary>,
    pub group_count: BigUint,
}

impl Boundaries {
    pub fn state_at(&self, j: &BigUint) -> Option<&Boundary> {
        if *j > self.group_count {
            return None;
        }
        let pos = self.entries.partition_point(|b| b.index <= *j);
        self.entries.get(pos.wrapping_sub(1))
    }
}

/// Replays `trace` on `h`, recomputing the value of every pick and the total
/// remaining value at every group boundary.
pub fn replay_trace(
    h: &Hypergraph,
    f: u32,
    lambda: RationalLambda,
    trace: &GreedyTrace,
) -> Result<Boundaries> {
    let mismatch = |index: usize, reason: String| Error::TraceMismatch { index, reason };
    if trace.f != f || trace.lambda != lambda {
        return Err(mismatch(
            0,
            "trace was produced with different f or λ".into(),
        ));
    }
    let delta = h.max_degree()?;
    if trace.delta != delta {
        return Err(mismatch(
            0,
            format!("trace Δ {} but hypergraph Δ {delta}", trace.delta),
        ));
    }
    let expected_n = group_count(lambda, f, delta);
    if trace.group_count != expected_n {
        return Err(mismatch(
            0,
            format!(
                "group count {} but expected {expected_n}",
                trace.group_count
            ),
        ));
    }
    let total_t: usize = trace.groups.iter().map(|g| g.picks).sum();
    if total_t != trace.picks.len() {
        return Err(mismatch(
            trace.picks.len().min(total_t),
            format!(
                "group sizes sum to {total_t} but there are {} picks",
                trace.picks.len()
            ),
        ));
    }
    if let Some(&x) = trace.picks.iter().find(|&&x| x >= h.vertex_count()) {
        let idx = trace.picks.iter().position(|&y| y == x).unwrap_or(0);
        return Err(mismatch(
            idx,
            format!("vertex {x} is not in the hypergraph"),
        ));
    }
    if fits_u128(h.edge_count(), delta, f, lambda) {
        replay_with::<u128>(h, f, lambda, trace)
    } else {
        replay_with::<BigUint>(h, f, lambda, trace)
    }
}

fn replay_with<W: Payout>(
    h: &Hypergraph,
    f: u32,
    lambda: RationalLambda,
    trace: &GreedyTrace,
) -> Result<Boundaries> {
    let table: NoteTable<W> = NoteTable::new(lambda, f);
    let mut state = CoverState::zero(h.edge_count());
    let mut entries = vec![Boundary {
        index: BigUint::zero(),
        state: state.clone(),
        remaining: ScaledValue::new(remaining_at(&state, &table).to_big()),
    }];
    let mut pick = 0;
    let mut last_index = BigUint::zero();
    for group in &trace.groups {
        if group.index <= last_index || group.index > trace.group_count {
            return Err(Error::TraceMismatch {
                index: pick,
                reason: format!("group index {} out of order or beyond N", group.index),
            });
        }
        let z = trace.z(&group.index);
        if *group.value.as_biguint() != z {
            return Err(Error::TraceMismatch {
                index: pick,
                reason: format!(
                    "group {} records z = {} but z_j = {z}",
                    group.index, group.value
                ),
            });
        }
        let z = W::from_big(&z);
        for _ in 0..group.picks {
            let x = trace.picks[pick];
            let v = value_at(h, &state, x, &table);
            if v != z {
                return Err(Error::TraceMismatch {
                    index: pick,
                    reason: format!(
                        "vertex {x} has value {} but group {} needs {}",
                        v.to_big(),
                        group.index,
                        z.to_big()
                    ),
                });
            }
            state.apply_pick(h, x);
            pick += 1;
        }
        entries.push(Boundary {
            index: group.index.clone(),
            state: state.clone(),
            remaining: ScaledValue::new(remaining_at(&state, &table).to_big()),
        });
        last_index = group.index.clone();
    }
    if !state.is_complete(f) {
        return Err(Error::TraceMismatch {
            index: pick,
            reason: "trace ends before every edge is covered f times".into(),
        });
    }
    Ok(Boundaries {
        entries,
        group_count: trace.group_count.clone(),
    })
}

/// Checks `v(k_j) = Σ_{i>j} t_i z_i` at every boundary of a replayed trace.
///
/// Between stored boundaries both sides are constant (empty groups add
/// nothing and leave the state alone), so checking the stored ones covers
/// all `j` in `0..N`.
pub fn check_telescoping(trace: &GreedyTrace, boundaries: &Boundaries) -> Result<()> {
    if boundaries.entries.len() != trace.groups.len() + 1 {
        return Err(Error::TraceMismatch {
            index: 0,
            reason: "boundary list does not match the trace".into(),
        });
    }
    let mut suffix = BigUint::zero();
    let mut suffixes = vec![BigUint::zero(); trace.groups.len() + 1];
    for (i, g) in trace.groups.iter().enumerate().rev() {
        suffix += g.value.as_biguint() * BigUint::from(g.picks as u64);
        suffixes[i] = suffix.clone();
    }
    for (b, expected) in boundaries.entries.iter().zip(&suffixes) {
        if *b.remaining.as_biguint() != *expected {
            return Err(Error::TraceMismatch {
                index: 0,
                reason: format!(
                    "at boundary {}: v(k_j) = {} but Σ t_i z_i = {expected}",
                    b.index, b.remaining
                ),
            });
        }
    }
    Ok(())
}
