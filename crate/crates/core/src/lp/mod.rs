//! Fractional transversal (τ*) and fractional matching (ν*) numbers.
//!
//! Exact mode solves the two LPs independently over rationals, with the
//! `w ≤ 1` bounds as explicit rows. Float mode hands both LPs to `microlp`,
//! rescales the returned vectors into feasibility and re-verifies them by
//! direct constraint evaluation; the duality gap is the difference of the
//! two evaluated objectives.

mod simplex;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use simplex::{maximize, Constraint, Problem, Sense, SimplexError};

/// Feasibility slack allowed when re-checking float solutions.
pub const FLOAT_FEASIBILITY_TOL: f64 = 1e-7;

/// Exact mode is the default up to this many vertices plus edges.
pub const EXACT_SIZE_LIMIT: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl Mode {
    pub fn auto(h: &Hypergraph) -> Mode {
        if h.vertex_count() + h.edge_count() <= EXACT_SIZE_LIMIT {
            Mode::Exact
        } else {
            Mode::Float
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(Error::Domain(format!("unknown LP mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    /// Weights on vertices: a fractional transversal.
    VertexWeights,
    /// Weights on edges: a fractional matching.
    EdgeWeights,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FractionalSolution<T> {
    pub side: Side,
    pub weights: Vec<T>,
    pub objective: T,
}

/// A number from either LP backend.
#[derive(Debug, Clone, PartialEq)]
pub enum LpNumber {
    Exact(BigRational),
    Float(f64),
}

impl LpNumber {
    pub fn to_f64(&self) -> f64 {
        match self {
            LpNumber::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            LpNumber::Float(x) => *x,
        }
    }

    /// `"num/den"` for exact values, a JSON number for floats.
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            LpNumber::Exact(r) => serde_json::Value::String(format_rational(r)),
            LpNumber::Float(x) => serde_json::json!(x),
        }
    }
}

pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpSolution {
    Exact(FractionalSolution<BigRational>),
    Float(FractionalSolution<f64>),
}

impl LpSolution {
    pub fn objective(&self) -> LpNumber {
        match self {
            LpSolution::Exact(s) => LpNumber::Exact(s.objective.clone()),
            LpSolution::Float(s) => LpNumber::Float(s.objective),
        }
    }

    pub fn weights_f64(&self) -> Vec<f64> {
        match self {
            LpSolution::Exact(s) => s
                .weights
                .iter()
                .map(|w| w.to_f64().unwrap_or(f64::NAN))
                .collect(),
            LpSolution::Float(s) => s.weights.clone(),
        }
    }

    /// `{"objective": ..., "weights": [...]}` with rationals as `"num/den"`.
    pub fn to_json(&self) -> serde_json::Value {
        let weights: Vec<serde_json::Value> = match self {
            LpSolution::Exact(s) => s
                .weights
                .iter()
                .map(|w| serde_json::Value::String(format_rational(w)))
                .collect(),
            LpSolution::Float(s) => s.weights.iter().map(|w| serde_json::json!(w)).collect(),
        };
        serde_json::json!({ "objective": self.objective().to_json(), "weights": weights })
    }
}

fn simplex_error(e: SimplexError) -> Error {
    match e {
        SimplexError::IterationLimit(iterations) => Error::LpNonConvergence { iterations },
        // Both LPs are feasible (w ≡ 1 and y ≡ 0) and bounded (by n and m).
        SimplexError::Infeasible | SimplexError::Unbounded => {
            unreachable!("covering and packing LPs are feasible and bounded")
        }
    }
}

fn one() -> BigRational {
    BigRational::one()
}

/// τ* as an exact rational: minimize Σ w subject to Σ_{x∈F} w(x) ≥ 1 for
/// every edge and 0 ≤ w ≤ 1.
pub fn fractional_transversal_exact(h: &Hypergraph) -> Result<FractionalSolution<BigRational>> {
    h.check_solvable()?;
    let n = h.vertex_count();
    let mut constraints: Vec<Constraint<BigRational>> = h
        .edges()
        .iter()
        .map(|e| Constraint {
            coeffs: e.iter().map(|&v| (v, one())).collect(),
            sense: Sense::Ge,
            rhs: one(),
        })
        .collect();
    constraints.extend((0..n).map(|x| Constraint {
        coeffs: vec![(x, one())],
        sense: Sense::Le,
        rhs: one(),
    }));
    let problem = Problem {
        vars: n,
        objective: vec![-one(); n],
        constraints,
    };
    let opt = maximize(&problem).map_err(simplex_error)?;
    Ok(FractionalSolution {
        side: Side::VertexWeights,
        weights: opt.x,
        objective: -opt.value,
    })
}

/// ν* as an exact rational: maximize Σ y subject to Σ_{F∋x} y(F) ≤ 1 for
/// every vertex and 0 ≤ y ≤ 1.
pub fn fractional_matching_exact(h: &Hypergraph) -> Result<FractionalSolution<BigRational>> {
    h.check_solvable()?;
    let m = h.edge_count();
    let mut constraints: Vec<Constraint<BigRational>> = (0..h.vertex_count())
        .map(|x| Constraint {
            coeffs: h.incident_edges(x).iter().map(|&e| (e, one())).collect(),
            sense: Sense::Le,
            rhs: one(),
        })
        .collect();
    constraints.extend((0..m).map(|e| Constraint {
        coeffs: vec![(e, one())],
        sense: Sense::Le,
        rhs: one(),
    }));
    let problem = Problem {
        vars: m,
        objective: vec![one(); m],
        constraints,
    };
    let opt = maximize(&problem).map_err(simplex_error)?;
    Ok(FractionalSolution {
        side: Side::EdgeWeights,
        weights: opt.x,
        objective: opt.value,
    })
}

fn microlp_values(problem: &microlp::Problem, vars: &[microlp::Variable]) -> Result<Vec<f64>> {
    let outcome = problem
        .solve()
        .map_err(|_| Error::LpNonConvergence { iterations: 0 })?;
    let iterations = outcome.stats().lp_iterations as usize;
    let solution = outcome
        .into_solution()
        .map_err(|_| Error::LpNonConvergence { iterations })?;
    Ok(vars
        .iter()
        .map(|&v| solution.var_value(v).clamp(0.0, 1.0))
        .collect())
}

/// Optimal fractional transversal and matching in floating point.
///
/// Both vectors are rescaled into exact feasibility before their totals are
/// taken, so `ν(y) ≤ ν* = τ* ≤ τ(w)` holds up to summation rounding.
pub fn fractional_pair_float(
    h: &Hypergraph,
) -> Result<(FractionalSolution<f64>, FractionalSolution<f64>)> {
    use microlp::{ComparisonOp, LinearExpr, OptimizationDirection, Problem};

    h.check_solvable()?;
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let w_vars: Vec<_> = (0..h.vertex_count())
        .map(|_| lp.add_var(1.0, (0.0, 1.0)))
        .collect();
    for edge in h.edges() {
        let mut row = LinearExpr::empty();
        for &x in edge {
            row.add(w_vars[x], 1.0);
        }
        lp.add_constraint(row, ComparisonOp::Ge, 1.0);
    }
    let mut transversal = microlp_values(&lp, &w_vars)?;

    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let y_vars: Vec<_> = (0..h.edge_count())
        .map(|_| lp.add_var(1.0, (0.0, 1.0)))
        .collect();
    for x in 0..h.vertex_count() {
        let mut row = LinearExpr::empty();
        for &e in h.incident_edges(x) {
            row.add(y_vars[e], 1.0);
        }
        lp.add_constraint(row, ComparisonOp::Le, 1.0);
    }
    let mut matching = microlp_values(&lp, &y_vars)?;

    let min_cover = h
        .edges()
        .iter()
        .map(|e| e.iter().map(|&x| transversal[x]).sum::<f64>())
        .fold(f64::INFINITY, f64::min);
    if min_cover.is_nan() || min_cover <= 0.5 {
        return Err(Error::LpNonConvergence { iterations: 0 });
    }
    if min_cover < 1.0 {
        for w in &mut transversal {
            *w = (*w / min_cover).min(1.0);
        }
    }
    let max_load = (0..h.vertex_count())
        .map(|x| {
            h.incident_edges(x)
                .iter()
                .map(|&e| matching[e])
                .sum::<f64>()
        })
        .fold(0.0, f64::max);
    if max_load > 1.0 {
        for y in &mut matching {
            *y /= max_load;
        }
    }
    if !is_fractional_matching_f64(h, &matching, FLOAT_FEASIBILITY_TOL)
        || !is_fractional_transversal_f64(h, &transversal, FLOAT_FEASIBILITY_TOL)
    {
        return Err(Error::LpNonConvergence { iterations: 0 });
    }
    let tau = transversal.iter().sum();
    let nu = matching.iter().sum();
    Ok((
        FractionalSolution {
            side: Side::VertexWeights,
            weights: transversal,
            objective: tau,
        },
        FractionalSolution {
            side: Side::EdgeWeights,
            weights: matching,
            objective: nu,
        },
    ))
}

pub fn fractional_transversal(h: &Hypergraph, mode: Mode) -> Result<LpSolution> {
    match mode {
        Mode::Exact => fractional_transversal_exact(h).map(LpSolution::Exact),
        Mode::Float => fractional_pair_float(h).map(|(t, _)| LpSolution::Float(t)),
    }
}

pub fn fractional_matching(h: &Hypergraph, mode: Mode) -> Result<LpSolution> {
    match mode {
        Mode::Exact => fractional_matching_exact(h).map(LpSolution::Exact),
        Mode::Float => fractional_pair_float(h).map(|(_, m)| LpSolution::Float(m)),
    }
}

/// τ* − ν*. Zero in exact mode; float mode reports the absolute gap.
pub fn duality_gap(h: &Hypergraph, mode: Mode) -> Result<LpNumber> {
    match mode {
        Mode::Exact => {
            let tau = fractional_transversal_exact(h)?.objective;
            let nu = fractional_matching_exact(h)?.objective;
            Ok(LpNumber::Exact(tau - nu))
        }
        Mode::Float => {
            let (t, m) = fractional_pair_float(h)?;
            Ok(LpNumber::Float((t.objective - m.objective).abs()))
        }
    }
}

/// τ* as a float, exact below [`EXACT_SIZE_LIMIT`].
pub fn tau_star(h: &Hypergraph) -> Result<f64> {
    Ok(fractional_transversal(h, Mode::auto(h))?
        .objective()
        .to_f64())
}

pub fn is_fractional_transversal(h: &Hypergraph, w: &[BigRational]) -> bool {
    w.len() == h.vertex_count()
        && w.iter().all(|x| !x.is_negative() && *x <= one())
        && h.edges()
            .iter()
            .all(|e| e.iter().map(|&v| &w[v]).sum::<BigRational>() >= one())
}

pub fn is_fractional_matching(h: &Hypergraph, y: &[BigRational]) -> bool {
    y.len() == h.edge_count()
        && y.iter().all(|x| !x.is_negative() && *x <= one())
        && (0..h.vertex_count()).all(|x| {
            h.incident_edges(x)
                .iter()
                .map(|&e| &y[e])
                .sum::<BigRational>()
                <= one()
        })
}

pub fn is_fractional_transversal_f64(h: &Hypergraph, w: &[f64], tol: f64) -> bool {
    w.len() == h.vertex_count()
        && w.iter().all(|&x| (-tol..=1.0 + tol).contains(&x))
        && h.edges()
            .iter()
            .all(|e| e.iter().map(|&v| w[v]).sum::<f64>() >= 1.0 - tol)
}

pub fn is_fractional_matching_f64(h: &Hypergraph, y: &[f64], tol: f64) -> bool {
    y.len() == h.edge_count()
        && y.iter().all(|&x| (-tol..=1.0 + tol).contains(&x))
        && (0..h.vertex_count())
            .all(|x| h.incident_edges(x).iter().map(|&e| y[e]).sum::<f64>() <= 1.0 + tol)
}

/// Zero check that reads naturally at call sites holding an [`LpNumber`].
pub fn is_zero_gap(gap: &LpNumber, tol: f64) -> bool {
    match gap {
        LpNumber::Exact(r) => r.is_zero(),
        LpNumber::Float(x) => x.abs() <= tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn single_edge() {
        let h = Hypergraph::new(2, vec![vec![0, 1]]).unwrap();
        let t = fractional_transversal_exact(&h).unwrap();
        assert_eq!(t.objective, r(1, 1));
        assert!(is_fractional_transversal(&h, &t.weights));
        assert_eq!(fractional_matching_exact(&h).unwrap().objective, r(1, 1));
    }

    #[test]
    fn triangle_with_dual_certificate() {
        let h = generate::triangle();
        let t = fractional_transversal_exact(&h).unwrap();
        let m = fractional_matching_exact(&h).unwrap();
        assert_eq!(t.objective, r(3, 2));
        assert_eq!(m.objective, r(3, 2));
        // Certificate: uniform 1/2 on both sides is feasible with value 3/2.
        let half = vec![r(1, 2); 3];
        assert!(is_fractional_transversal(&h, &half));
        assert!(is_fractional_matching(&h, &half));
    }

    #[test]
    fn fano_with_dual_certificate() {
        let h = generate::fano();
        let t = fractional_transversal_exact(&h).unwrap();
        let m = fractional_matching_exact(&h).unwrap();
        assert_eq!(t.objective, r(7, 3));
        assert_eq!(m.objective, r(7, 3));
        let third = vec![r(1, 3); 7];
        assert!(is_fractional_transversal(&h, &third));
        assert!(is_fractional_matching(&h, &third));
        assert!(is_fractional_transversal(&h, &t.weights));
        assert!(is_fractional_matching(&h, &m.weights));
    }

    #[test]
    fn duality_gap_examples() {
        let single = Hypergraph::new(1, vec![vec![0]]).unwrap();
        assert_eq!(
            duality_gap(&single, Mode::Exact).unwrap(),
            LpNumber::Exact(r(0, 1))
        );
        assert!(is_zero_gap(
            &duality_gap(&generate::triangle(), Mode::Exact).unwrap(),
            0.0
        ));
        let h = generate::random(30, 50, 1, 8, 1).unwrap();
        let gap = duality_gap(&h, Mode::Float).unwrap().to_f64();
        assert!(gap <= 1e-6, "gap {gap}");
    }

    #[test]
    fn float_matches_exact_on_random_instances() {
        for seed in 0..20 {
            let h = generate::random(15, 25, 1, 5, seed).unwrap();
            let exact = fractional_transversal_exact(&h)
                .unwrap()
                .objective
                .to_f64()
                .unwrap();
            let (t, m) = fractional_pair_float(&h).unwrap();
            assert!((t.objective - exact).abs() < 1e-9, "seed {seed}");
            assert!((m.objective - exact).abs() < 1e-9, "seed {seed}");
        }
    }

    #[test]
    fn dual_hypergraph_lp_is_the_set_cover_lp() {
        // τ*(dual H) is the fractional set cover of H's vertices by its edges,
        // which is ν*-like: check it against a direct formulation.
        for seed in 0..10 {
            let h = generate::random(8, 12, 1, 4, seed)
                .unwrap()
                .without_isolated();
            let dual = h.dualize();
            let via_dual = fractional_transversal_exact(&dual).unwrap().objective;
            // Direct set-cover LP: min Σ y(F) s.t. Σ_{F∋x} y(F) ≥ 1.
            let problem = Problem {
                vars: h.edge_count(),
                objective: vec![-one(); h.edge_count()],
                constraints: (0..h.vertex_count())
                    .map(|x| Constraint {
                        coeffs: h.incident_edges(x).iter().map(|&e| (e, one())).collect(),
                        sense: Sense::Ge,
                        rhs: one(),
                    })
                    .collect(),
            };
            let direct = -maximize(&problem).unwrap().value;
            assert_eq!(via_dual, direct, "seed {seed}");
        }
    }

    #[test]
    fn rejects_unsolvable_input() {
        let empty = Hypergraph::new(2, vec![]).unwrap();
        assert!(matches!(
            fractional_transversal_exact(&empty),
            Err(Error::NoEdges)
        ));
    }
}
