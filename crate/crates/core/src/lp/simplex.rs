//! Dense two-phase tableau simplex, generic over the scalar type.
//!
//! Maximizes `c·x` subject to rows `a·x (≤|≥|=) b` with `b ≥ 0` and `x ≥ 0`.
//! Exact solves always use Bland's rule. The `f64` instance uses Dantzig's
//! rule, dropping to Bland's rule after a run of degenerate pivots; the
//! library's float mode goes through `microlp` instead.

use std::fmt::Debug;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

const FLOAT_EPS: f64 = 1e-9;
const FLOAT_FLUSH: f64 = 1e-13;
const DEGENERATE_STREAK: usize = 64;

pub(crate) trait LpScalar: Clone + Debug + PartialOrd {
    const EXACT: bool;
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    /// Exactly zero, with no tolerance.
    fn is_nil(&self) -> bool;
    fn is_positive(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `self -= factor * other`, flushing float noise to zero.
    fn sub_scaled(&mut self, factor: &Self, other: &Self);
}

impl LpScalar for BigRational {
    const EXACT: bool = true;
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(v.into())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn sub_scaled(&mut self, factor: &Self, other: &Self) {
        *self -= factor * other;
    }
}

impl LpScalar for f64 {
    const EXACT: bool = false;
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn is_zero(&self) -> bool {
        self.abs() <= FLOAT_EPS
    }
    fn is_nil(&self) -> bool {
        *self == 0.0
    }
    fn is_positive(&self) -> bool {
        *self > FLOAT_EPS
    }
    fn is_negative(&self) -> bool {
        *self < -FLOAT_EPS
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn sub_scaled(&mut self, factor: &Self, other: &Self) {
        *self -= factor * other;
        if self.abs() < FLOAT_FLUSH {
            *self = 0.0;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Sense {
    Le,
    Ge,
    #[cfg_attr(not(test), allow(dead_code))]
    Eq,
}

#[derive(Debug, Clone)]
pub(crate) struct Constraint<T> {
    pub coeffs: Vec<(usize, T)>,
    pub sense: Sense,
    pub rhs: T,
}

#[derive(Debug, Clone)]
pub(crate) struct Problem<T> {
    pub vars: usize,
    pub objective: Vec<T>,
    pub constraints: Vec<Constraint<T>>,
}

#[derive(Debug, Clone)]
pub(crate) struct Optimum<T> {
    pub x: Vec<T>,
    pub value: T,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum SimplexError {
    Infeasible,
    Unbounded,
    IterationLimit(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ColumnKind {
    Structural,
    Slack(usize),
    Surplus,
    Artificial,
}

struct Tableau<T> {
    rows: usize,
    cols: usize,
    /// Row-major `rows × cols` coefficients.
    a: Vec<T>,
    rhs: Vec<T>,
    /// Reduced costs `c_B B⁻¹ A_j - c_j`; entering columns have negative cost.
    cost: Vec<T>,
    value: T,
    basis: Vec<usize>,
    live: Vec<bool>,
    row_live: Vec<bool>,
    pivots: usize,
    limit: usize,
}

impl<T: LpScalar> Tableau<T> {
    fn at(&self, r: usize, c: usize) -> &T {
        &self.a[r * self.cols + c]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let cols = self.cols;
        let inv = T::one().div(self.at(row, col));
        let base = row * cols;
        let mut nz = Vec::new();
        for c in 0..cols {
            let v = &mut self.a[base + c];
            if !v.is_nil() {
                *v = v.mul(&inv);
                nz.push(c);
            }
        }
        self.rhs[row] = self.rhs[row].mul(&inv);
        let pivot_row: Vec<(usize, T)> =
            nz.iter().map(|&c| (c, self.a[base + c].clone())).collect();
        let pivot_rhs = self.rhs[row].clone();
        for r in 0..self.rows {
            if r == row || !self.row_live[r] {
                continue;
            }
            let factor = self.a[r * cols + col].clone();
            if factor.is_nil() {
                continue;
            }
            let rb = r * cols;
            for (c, v) in &pivot_row {
                self.a[rb + c].sub_scaled(&factor, v);
            }
            self.a[rb + col] = T::zero();
            self.rhs[r].sub_scaled(&factor, &pivot_rhs);
            if !T::EXACT && self.rhs[r] < T::zero() {
                self.rhs[r] = T::zero();
            }
        }
        let factor = self.cost[col].clone();
        if !factor.is_nil() {
            for (c, v) in &pivot_row {
                self.cost[*c].sub_scaled(&factor, v);
            }
            self.cost[col] = T::zero();
            self.value.sub_scaled(&factor, &pivot_rhs);
        }
        self.basis[row] = col;
        self.pivots += 1;
    }

    fn entering(&self, bland: bool) -> Option<usize> {
        let mut best: Option<usize> = None;
        for c in 0..self.cols {
            if !self.live[c] || !self.cost[c].is_negative() {
                continue;
            }
            if bland {
                return Some(c);
            }
            match best {
                Some(b) if self.cost[c] >= self.cost[b] => {}
                _ => best = Some(c),
            }
        }
        best
    }

    fn leaving(&self, col: usize) -> Option<usize> {
        let mut best: Option<(usize, T)> = None;
        for r in 0..self.rows {
            if !self.row_live[r] {
                continue;
            }
            let a = self.at(r, col);
            if !a.is_positive() {
                continue;
            }
            let ratio = self.rhs[r].div(a);
            let better = match &best {
                None => true,
                Some((br, bv)) => {
                    if T::EXACT {
                        ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br])
                    } else {
                        let d = ratio.sub(bv);
                        d.is_negative() || (d.is_zero() && self.basis[r] < self.basis[*br])
                    }
                }
            };
            if better {
                best = Some((r, ratio));
            }
        }
        best.map(|(r, _)| r)
    }

    fn optimize(&mut self) -> Result<(), SimplexError> {
        let mut degenerate = 0usize;
        loop {
            if self.pivots > self.limit {
                return Err(SimplexError::IterationLimit(self.pivots));
            }
            let bland = T::EXACT || degenerate >= DEGENERATE_STREAK;
            let Some(col) = self.entering(bland) else {
                return Ok(());
            };
            let Some(row) = self.leaving(col) else {
                return Err(SimplexError::Unbounded);
            };
            if self.rhs[row].is_zero() {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            self.pivot(row, col);
        }
    }

    fn set_cost(&mut self, c: &[T]) {
        // cost_j = Σ_i c_{B_i} a_ij - c_j
        self.cost = c.iter().map(LpScalar::neg).collect();
        self.value = T::zero();
        for r in 0..self.rows {
            if !self.row_live[r] {
                continue;
            }
            let cb = &c[self.basis[r]];
            if cb.is_nil() {
                continue;
            }
            for j in 0..self.cols {
                let v = &self.a[r * self.cols + j];
                if !v.is_nil() {
                    self.cost[j] = self.cost[j].add(&cb.mul(v));
                }
            }
            self.value = self.value.add(&cb.mul(&self.rhs[r]));
        }
        for &b in &self.basis {
            self.cost[b] = T::zero();
        }
    }
}

pub(crate) fn maximize<T: LpScalar>(problem: &Problem<T>) -> Result<Optimum<T>, SimplexError> {
    let rows = problem.constraints.len();
    let mut kinds: Vec<ColumnKind> = vec![ColumnKind::Structural; problem.vars];
    let mut row_cols = Vec::with_capacity(rows);
    for (i, con) in problem.constraints.iter().enumerate() {
        match con.sense {
            Sense::Le => {
                row_cols.push((Some(kinds.len()), None));
                kinds.push(ColumnKind::Slack(i));
            }
            Sense::Ge => {
                let s = kinds.len();
                kinds.push(ColumnKind::Surplus);
                row_cols.push((Some(s), Some(kinds.len())));
                kinds.push(ColumnKind::Artificial);
            }
            Sense::Eq => {
                row_cols.push((None, Some(kinds.len())));
                kinds.push(ColumnKind::Artificial);
            }
        }
    }
    let cols = kinds.len();
    let mut a = vec![T::zero(); rows * cols];
    let mut rhs = Vec::with_capacity(rows);
    let mut basis = Vec::with_capacity(rows);
    for (i, con) in problem.constraints.iter().enumerate() {
        for (j, v) in &con.coeffs {
            let cell = &mut a[i * cols + j];
            *cell = cell.add(v);
        }
        let (extra, art) = row_cols[i];
        match con.sense {
            Sense::Le => {
                let s = extra.expect("slack column");
                a[i * cols + s] = T::one();
                basis.push(s);
            }
            Sense::Ge => {
                a[i * cols + extra.expect("surplus column")] = T::from_i64(-1);
                let r = art.expect("artificial column");
                a[i * cols + r] = T::one();
                basis.push(r);
            }
            Sense::Eq => {
                let r = art.expect("artificial column");
                a[i * cols + r] = T::one();
                basis.push(r);
            }
        }
        rhs.push(con.rhs.clone());
    }
    let mut t = Tableau {
        rows,
        cols,
        a,
        rhs,
        cost: vec![T::zero(); cols],
        value: T::zero(),
        basis,
        live: vec![true; cols],
        row_live: vec![true; rows],
        pivots: 0,
        limit: if T::EXACT {
            usize::MAX
        } else {
            50 * (rows + cols) + 1000
        },
    };

    let has_artificial = kinds.contains(&ColumnKind::Artificial);
    if has_artificial {
        let phase1: Vec<T> = kinds
            .iter()
            .map(|k| match k {
                ColumnKind::Artificial => T::from_i64(-1),
                _ => T::zero(),
            })
            .collect();
        t.set_cost(&phase1);
        t.optimize()?;
        if t.value.is_negative() {
            return Err(SimplexError::Infeasible);
        }
        // Drive zero-level artificials out of the basis.
        for r in 0..rows {
            if kinds[t.basis[r]] != ColumnKind::Artificial {
                continue;
            }
            let replacement = (0..cols)
                .find(|&c| kinds[c] != ColumnKind::Artificial && !LpScalar::is_zero(t.at(r, c)));
            match replacement {
                Some(c) => t.pivot(r, c),
                None => t.row_live[r] = false,
            }
        }
        for (c, k) in kinds.iter().enumerate() {
            if *k == ColumnKind::Artificial {
                t.live[c] = false;
            }
        }
    }

    let mut phase2 = vec![T::zero(); cols];
    phase2[..problem.vars].clone_from_slice(&problem.objective);
    t.set_cost(&phase2);
    t.optimize()?;

    let mut x = vec![T::zero(); problem.vars];
    for r in 0..rows {
        if t.row_live[r] && t.basis[r] < problem.vars {
            x[t.basis[r]] = t.rhs[r].clone();
        }
    }
    Ok(Optimum {
        x,
        value: t.value.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn le<T: LpScalar>(coeffs: Vec<(usize, T)>, rhs: T) -> Constraint<T> {
        Constraint {
            coeffs,
            sense: Sense::Le,
            rhs,
        }
    }

    #[test]
    fn textbook_max() {
        // max 3x + 5y s.t. x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18  → 36 at (2, 6)
        let p = Problem {
            vars: 2,
            objective: vec![r(3, 1), r(5, 1)],
            constraints: vec![
                le(vec![(0, r(1, 1))], r(4, 1)),
                le(vec![(1, r(2, 1))], r(12, 1)),
                le(vec![(0, r(3, 1)), (1, r(2, 1))], r(18, 1)),
            ],
        };
        let opt = maximize(&p).unwrap();
        assert_eq!(opt.value, r(36, 1));
        assert_eq!(opt.x, vec![r(2, 1), r(6, 1)]);
    }

    #[test]
    fn two_phase_min() {
        // min x + y s.t. x + 2y ≥ 2, 3x + y ≥ 3 → 7/5 at (4/5, 3/5)
        let p = Problem {
            vars: 2,
            objective: vec![r(-1, 1), r(-1, 1)],
            constraints: vec![
                Constraint {
                    coeffs: vec![(0, r(1, 1)), (1, r(2, 1))],
                    sense: Sense::Ge,
                    rhs: r(2, 1),
                },
                Constraint {
                    coeffs: vec![(0, r(3, 1)), (1, r(1, 1))],
                    sense: Sense::Ge,
                    rhs: r(3, 1),
                },
            ],
        };
        let opt = maximize(&p).unwrap();
        assert_eq!(opt.value, r(-7, 5));
        assert_eq!(opt.x, vec![r(4, 5), r(3, 5)]);

        let pf = Problem {
            vars: 2,
            objective: vec![-1.0, -1.0],
            constraints: vec![
                Constraint {
                    coeffs: vec![(0, 1.0), (1, 2.0)],
                    sense: Sense::Ge,
                    rhs: 2.0,
                },
                Constraint {
                    coeffs: vec![(0, 3.0), (1, 1.0)],
                    sense: Sense::Ge,
                    rhs: 3.0,
                },
            ],
        };
        let opt = maximize(&pf).unwrap();
        assert!((opt.value + 1.4).abs() < 1e-12);
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let infeasible = Problem {
            vars: 1,
            objective: vec![r(1, 1)],
            constraints: vec![
                le(vec![(0, r(1, 1))], r(1, 1)),
                Constraint {
                    coeffs: vec![(0, r(1, 1))],
                    sense: Sense::Ge,
                    rhs: r(2, 1),
                },
            ],
        };
        assert_eq!(maximize(&infeasible).unwrap_err(), SimplexError::Infeasible);
        let unbounded = Problem {
            vars: 2,
            objective: vec![r(1, 1), r(0, 1)],
            constraints: vec![le(vec![(1, r(1, 1))], r(1, 1))],
        };
        assert_eq!(maximize(&unbounded).unwrap_err(), SimplexError::Unbounded);
    }

    #[test]
    fn equality_rows() {
        // max x s.t. x + y = 1 → 1
        let p = Problem {
            vars: 2,
            objective: vec![r(1, 1), r(0, 1)],
            constraints: vec![Constraint {
                coeffs: vec![(0, r(1, 1)), (1, r(1, 1))],
                sense: Sense::Eq,
                rhs: r(1, 1),
            }],
        };
        assert_eq!(maximize(&p).unwrap().value, r(1, 1));
    }
}
