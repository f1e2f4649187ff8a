//! Closed-form bounds on τ_f and the certificates behind them.
//!
//! [`theorem1_bound`] is the size guarantee of the weighted greedy for a
//! given λ; [`corollary_bound`] is its λ = 0.287643 specialization with the
//! constant 3.153. [`matching_certificate`] builds the fractional matching
//! that bounds the remaining value at any state whose vertex values are all
//! at most `z`.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::greedy::{check_telescoping, greedy_solve, replay_trace, CoverState};
use crate::hypergraph::{Hypergraph, Multiset};
use crate::lambda::RationalLambda;
use crate::lp::{self, FractionalSolution, Mode, Side};
use crate::scaled::{fits_u128, scale, NoteTable, Payout, ScaledValue};

pub const COROLLARY_CONSTANT: f64 = 3.153;
pub const COROLLARY_LAMBDA: f64 = 0.287643;
/// Absolute slack added to the bound side of every float comparison.
pub const BOUND_SLACK: f64 = 1e-9;

/// Largest denominator of the rounded λ in [`convergence_schedule`].
pub const SCHEDULE_MAX_DENOMINATOR: u64 = 64;

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("λ = {lambda} is outside (0, 1)")))
    }
}

/// `((1-λ^f)/(1-λ)) · τ* · (1 + ln Δ - (f-1) ln λ)`.
pub fn theorem1_bound(tau_star: f64, delta: usize, f: u32, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    if tau_star.is_nan() || tau_star <= 0.0 {
        return Err(Error::Domain(format!("τ* = {tau_star} must be positive")));
    }
    if delta == 0 || f == 0 {
        return Err(Error::Domain("Δ and f must be at least 1".into()));
    }
    let geometric = (1.0 - lambda.powi(f as i32)) / (1.0 - lambda);
    let log_term = 1.0 + (delta as f64).ln() - f64::from(f - 1) * lambda.ln();
    Ok(geometric * tau_star * log_term)
}

/// `3.153 · τ* · max{ln Δ, f}`.
pub fn corollary_bound(tau_star: f64, delta: usize, f: u32) -> f64 {
    COROLLARY_CONSTANT * tau_star * (delta.max(1) as f64).ln().max(f64::from(f))
}

/// Theorem-1 factor over the corollary factor, at τ* = 1.
pub fn corollary_ratio(f: u32, ln_delta: f64, lambda: f64) -> f64 {
    let geometric = (1.0 - lambda.powi(f as i32)) / (1.0 - lambda);
    let log_term = 1.0 + ln_delta - f64::from(f - 1) * lambda.ln();
    geometric * log_term / (COROLLARY_CONSTANT * ln_delta.max(f64::from(f)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantScan {
    pub points: usize,
    pub max_ratio: f64,
    pub argmax_f: u32,
    pub argmax_ln_delta: f64,
    /// `(f, ln Δ, ratio)` for every grid point with ratio ≥ 1.
    pub violations: Vec<(u32, f64, f64)>,
}

/// Scans f ∈ 1..=100 and ln Δ ∈ [0, 100] in steps of 0.01, comparing the
/// λ = 0.287643 instance of the theorem-1 factor with `3.153 max{ln Δ, f}`.
pub fn scan_corollary_constant() -> ConstantScan {
    let mut scan = ConstantScan {
        points: 0,
        max_ratio: f64::NEG_INFINITY,
        argmax_f: 0,
        argmax_ln_delta: 0.0,
        violations: Vec::new(),
    };
    for f in 1..=100u32 {
        for step in 0..=10_000u32 {
            let ln_delta = f64::from(step) / 100.0;
            let ratio = corollary_ratio(f, ln_delta, COROLLARY_LAMBDA);
            scan.points += 1;
            if ratio > scan.max_ratio {
                scan.max_ratio = ratio;
                scan.argmax_f = f;
                scan.argmax_ln_delta = ln_delta;
            }
            if ratio >= 1.0 {
                scan.violations.push((f, ln_delta, ratio));
            }
        }
    }
    scan
}

/// [`scan_corollary_constant`], failing on any grid violation.
pub fn verify_corollary_constant() -> Result<ConstantScan> {
    let scan = scan_corollary_constant();
    if let Some(&(f, l, r)) = scan.violations.first() {
        return Err(Error::Domain(format!(
            "{} grid violations of the 3.153 constant, first at f = {f}, ln Δ = {l}: ratio {r}",
            scan.violations.len()
        )));
    }
    Ok(scan)
}

/// `-ln λ / (1 - λ)`; decreasing on (0, 1) towards 1.
pub fn schedule_constraint(lambda: f64) -> f64 {
    -lambda.ln() / (1.0 - lambda)
}

/// `⌈2(1 + ln Δ) / (ε(1-λ))⌉`.
pub fn schedule_fold(epsilon: f64, ln_delta: f64, lambda: f64) -> u32 {
    (2.0 * (1.0 + ln_delta) / (epsilon * (1.0 - lambda))).ceil() as u32
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Schedule {
    pub f: u32,
    #[serde(serialize_with = "serialize_display")]
    pub lambda: RationalLambda,
    /// Unrounded bisection root.
    pub lambda_root: f64,
}

fn serialize_display<S: serde::Serializer, T: std::fmt::Display>(
    v: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Parameters making `|greedy| / f ≤ (1+ε) τ*`: the smallest λ with
/// `-ln λ/(1-λ) ≤ 1 + ε/2`, rounded up to a fraction with denominator at
/// most 64, and the matching fold count.
pub fn convergence_schedule(epsilon: f64, delta: usize) -> Result<Schedule> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::Domain(format!("ε = {epsilon} is outside (0, 1]")));
    }
    if delta == 0 {
        return Err(Error::Domain("Δ must be at least 1".into()));
    }
    let target = 1.0 + epsilon / 2.0;
    let (mut lo, mut hi) = (f64::MIN_POSITIVE, 1.0 - 1e-15);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if schedule_constraint(mid) <= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let root = hi;
    let lambda = (1..=SCHEDULE_MAX_DENOMINATOR)
        .filter_map(|q| {
            let p = (root * q as f64).ceil() as u64;
            (p > 0 && p < q)
                .then(|| RationalLambda::new(p, q).ok())
                .flatten()
        })
        .filter(|l| schedule_constraint(l.to_f64()) <= target)
        .min_by(|a, b| (a.numer() * b.denom()).cmp(&(b.numer() * a.denom())))
        .ok_or_else(|| Error::Domain(format!("no λ with denominator ≤ 64 meets ε = {epsilon}")))?;
    let f = schedule_fold(epsilon, (delta as f64).ln(), lambda.to_f64());
    Ok(Schedule {
        f,
        lambda,
        lambda_root: root,
    })
}

/// Weights `multiplicity / f`, clipped at 1.
pub fn to_fractional(
    h: &Hypergraph,
    picks: &Multiset,
    f: u32,
) -> Result<FractionalSolution<BigRational>> {
    if let Some((edge, covered)) = h.first_undercovered(picks, f) {
        return Err(Error::NotTransversal { edge, covered, f });
    }
    let one = BigRational::from_integer(1.into());
    let weights: Vec<BigRational> = (0..h.vertex_count())
        .map(|x| {
            let w = BigRational::new(picks.multiplicity(x).into(), f.into());
            if w > one {
                one.clone()
            } else {
                w
            }
        })
        .collect();
    let objective = weights.iter().sum();
    Ok(FractionalSolution {
        side: Side::VertexWeights,
        weights,
        objective,
    })
}

fn check_hypothesis<W: Payout>(
    h: &Hypergraph,
    state: &CoverState,
    z: &W,
    table: &NoteTable<W>,
) -> Result<()> {
    for x in 0..h.vertex_count() {
        let mut v = W::nothing();
        for &e in h.incident_edges(x) {
            v.add_in(&table.note(state.get(e)));
        }
        if v > *z {
            return Err(Error::CertificateHypothesis { vertex: x });
        }
    }
    Ok(())
}

fn validate_certificate_input(
    h: &Hypergraph,
    state: &CoverState,
    z: &ScaledValue,
    f: u32,
) -> Result<()> {
    if f == 0 {
        return Err(Error::Domain("f must be positive".into()));
    }
    if z.is_zero() {
        return Err(Error::Domain("z must be positive".into()));
    }
    if state.counts().len() != h.edge_count() {
        return Err(Error::Domain(
            "state length differs from the edge count".into(),
        ));
    }
    Ok(())
}

/// Edge weights `w(F) = (Σ_{i ≥ ℓ(F)} λ^i) / (z (1 + λ + … + λ^(f-1)))`,
/// where `z` and the state come in scaled units. Requires every vertex value
/// at `state` to be at most `z`.
pub fn matching_certificate(
    h: &Hypergraph,
    state: &CoverState,
    z: &ScaledValue,
    lambda: RationalLambda,
    f: u32,
) -> Result<FractionalSolution<BigRational>> {
    validate_certificate_input(h, state, z, f)?;
    let table: NoteTable<BigUint> = NoteTable::new(lambda, f);
    check_hypothesis(h, state, z.as_biguint(), &table)?;
    // In scaled units w(F) = tail(ℓ(F)) · q^(f-1) / (z · tails[0]).
    let s = scale(lambda, f);
    let denom = z.as_biguint() * &table.tails[0];
    let weights: Vec<BigRational> = state
        .counts()
        .iter()
        .map(|&k| BigRational::new((table.tail(k) * &s).into(), denom.clone().into()))
        .collect();
    let objective = weights.iter().sum();
    Ok(FractionalSolution {
        side: Side::EdgeWeights,
        weights,
        objective,
    })
}

/// `v(ℓ) / (z (1 + λ + … + λ^(f-1)))` from a scaled remaining value.
pub fn certificate_total(
    remaining: &ScaledValue,
    z: &ScaledValue,
    lambda: RationalLambda,
    f: u32,
) -> BigRational {
    let table: NoteTable<BigUint> = NoteTable::new(lambda, f);
    let s = scale(lambda, f);
    BigRational::new(
        (remaining.as_biguint() * s).into(),
        (z.as_biguint() * &table.tails[0]).into(),
    )
}

/// Outcome of [`check_certificate`].
#[derive(Debug, Clone, PartialEq)]
pub struct CertificateSummary {
    /// Σ_F w(F), exact.
    pub total: BigRational,
    /// Largest Σ_{F∋x} w(F) over vertices, exact.
    pub max_load: BigRational,
}

/// Builds the [`matching_certificate`] weights over their common denominator
/// and checks the matching constraints in integers, without materializing
/// one rational per edge.
pub fn check_certificate(
    h: &Hypergraph,
    state: &CoverState,
    z: &ScaledValue,
    lambda: RationalLambda,
    f: u32,
) -> Result<CertificateSummary> {
    validate_certificate_input(h, state, z, f)?;
    let delta = h.max_degree()?;
    let z_in_range = *z.as_biguint() <= BigUint::from(delta as u64 + 1) * scale(lambda, f);
    if fits_u128(h.edge_count(), delta, f, lambda) && z_in_range {
        certify::<u128>(h, state, z, lambda, f)
    } else {
        certify::<BigUint>(h, state, z, lambda, f)
    }
}

fn certify<W: Payout>(
    h: &Hypergraph,
    state: &CoverState,
    z: &ScaledValue,
    lambda: RationalLambda,
    f: u32,
) -> Result<CertificateSummary> {
    let table: NoteTable<W> = NoteTable::new(lambda, f);
    let z_w = W::from_big(z.as_biguint());
    check_hypothesis(h, state, &z_w, &table)?;
    let s = W::from_big(&scale(lambda, f));
    let denom = z_w.times(&table.tails[0]);
    let mut total = W::nothing();
    for &k in state.counts() {
        let numer = table.tail(k).times(&s);
        if numer > denom {
            return Err(Error::Domain("certificate weight exceeds 1".into()));
        }
        total.add_in(table.tail(k));
    }
    let mut max_load = W::nothing();
    for x in 0..h.vertex_count() {
        let mut load = W::nothing();
        for &e in h.incident_edges(x) {
            load.add_in(table.tail(state.get(e)));
        }
        if load > max_load {
            max_load = load;
        }
    }
    let max_load = max_load.times(&s);
    if max_load > denom {
        let vertex = (0..h.vertex_count())
            .find(|&x| {
                let mut load = W::nothing();
                for &e in h.incident_edges(x) {
                    load.add_in(table.tail(state.get(e)));
                }
                load.times(&s) > denom
            })
            .unwrap_or(0);
        return Err(Error::CertificateHypothesis { vertex });
    }
    let denom = denom.to_big();
    Ok(CertificateSummary {
        total: BigRational::new(total.times(&s).to_big().into(), denom.clone().into()),
        max_load: BigRational::new(max_load.to_big().into(), denom.into()),
    })
}

/// Everything `verify` checks on one instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub tau_star: f64,
    /// `"num/den"` when τ* came from the exact LP.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau_star_exact: Option<String>,
    pub delta: usize,
    pub f: u32,
    pub lambda: String,
    pub bound_value: f64,
    pub greedy_size: u64,
    /// The greedy output meets every edge f times.
    pub transversal: bool,
    /// `greedy_size ≤ bound_value + 1e-9`.
    pub satisfied: bool,
    /// `f τ* ≤ greedy_size`.
    pub lower_bound_holds: bool,
    /// The λ = 0.287643 closed form, for reference.
    pub corollary_bound: f64,
    pub telescoping_holds: bool,
    pub certificates_hold: bool,
    /// Step-group boundaries whose certificate was checked.
    pub boundaries_checked: usize,
    pub all_hold: bool,
}

/// τ* and ν* of one instance, as used by [`verify_with`].
#[derive(Debug, Clone, PartialEq)]
pub struct LpValues {
    pub tau_star: f64,
    /// `"num/den"` in exact mode.
    pub tau_star_exact: Option<String>,
    pub nu_star: f64,
}

pub fn lp_values(h: &Hypergraph, mode: Mode) -> Result<LpValues> {
    Ok(match mode {
        Mode::Exact => {
            let t = lp::fractional_transversal_exact(h)?.objective;
            let nu = lp::fractional_matching_exact(h)?.objective;
            LpValues {
                tau_star: t.to_f64().unwrap_or(f64::NAN),
                tau_star_exact: Some(lp::format_rational(&t)),
                nu_star: nu.to_f64().unwrap_or(f64::NAN),
            }
        }
        Mode::Float => {
            let (t, m) = lp::fractional_pair_float(h)?;
            LpValues {
                tau_star: t.objective,
                tau_star_exact: None,
                nu_star: m.objective,
            }
        }
    })
}

/// Solves with the greedy and checks its bound, its trace identities and
/// every boundary certificate against ν*.
pub fn verify(h: &Hypergraph, f: u32, lambda: RationalLambda, mode: Mode) -> Result<BoundReport> {
    verify_with(h, f, lambda, &lp_values(h, mode)?)
}

/// [`verify`] with τ* and ν* already known.
pub fn verify_with(
    h: &Hypergraph,
    f: u32,
    lambda: RationalLambda,
    lp: &LpValues,
) -> Result<BoundReport> {
    let delta = h.max_degree()?;
    let tau_star = lp.tau_star;
    let nu_star = lp.nu_star;
    let (picks, trace) = greedy_solve(h, f, lambda)?;
    let bound_value = theorem1_bound(tau_star, delta, f, lambda.to_f64())?;
    let greedy_size = picks.size();
    let transversal = h.is_f_fold_transversal(&picks, f);
    let satisfied = (greedy_size as f64) <= bound_value + BOUND_SLACK;
    let lower_bound_holds = f64::from(f) * tau_star <= greedy_size as f64 + BOUND_SLACK;

    let boundaries = replay_trace(h, f, lambda, &trace)?;
    let telescoping_holds = check_telescoping(&trace, &boundaries).is_ok();
    let mut certificates_hold = true;
    let mut boundaries_checked = 0;
    for (b, next) in boundaries.entries.iter().zip(&trace.groups) {
        // Boundaries b.index ..= next.index - 1 share the state k_j; the
        // certificate loads grow as z_{j+1} shrinks, so the last of them,
        // with z = z_{next}, is the tightest.
        let z = next.value.clone();
        boundaries_checked += 1;
        match check_certificate(h, &b.state, &z, lambda, f) {
            Ok(summary) => {
                let expected = certificate_total(&b.remaining, &z, lambda, f);
                if summary.total != expected
                    || summary.total.to_f64().unwrap_or(f64::INFINITY) > nu_star + 1e-6
                {
                    certificates_hold = false;
                }
            }
            Err(_) => certificates_hold = false,
        }
    }
    let all_hold =
        transversal && satisfied && lower_bound_holds && telescoping_holds && certificates_hold;
    Ok(BoundReport {
        tau_star,
        tau_star_exact: lp.tau_star_exact.clone(),
        delta,
        f,
        lambda: lambda.to_string(),
        bound_value,
        greedy_size,
        transversal,
        satisfied,
        lower_bound_holds,
        corollary_bound: corollary_bound(tau_star, delta, f),
        telescoping_holds,
        certificates_hold,
        boundaries_checked,
        all_hold,
    })
}
