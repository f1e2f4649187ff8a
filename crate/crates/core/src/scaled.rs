//! Payout arithmetic in integers scaled by `q^(f-1)`.
//!
//! With `λ = p/q` every payout `λ^k` (for `k < f`) becomes the integer
//! `p^k · q^(f-1-k)` after scaling, so all comparisons in the greedy are
//! exact. Runs whose magnitudes fit comfortably in `u128` use it; everything
//! else falls back to `BigUint`.

use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::lambda::RationalLambda;

/// A nonnegative payout amount multiplied by `q^(f-1)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ScaledValue(BigUint);

impl ScaledValue {
    pub fn new(v: BigUint) -> Self {
        ScaledValue(v)
    }

    pub fn zero() -> Self {
        ScaledValue(BigUint::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    pub fn into_biguint(self) -> BigUint {
        self.0
    }

    /// The unscaled value, `self / scale`.
    pub fn unscaled(&self, scale: &BigUint) -> BigRational {
        BigRational::new(self.0.clone().into(), scale.clone().into())
    }
}

impl From<u64> for ScaledValue {
    fn from(v: u64) -> Self {
        ScaledValue(BigUint::from(v))
    }
}

impl fmt::Display for ScaledValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for ScaledValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

/// `q^(f-1)`, the common denominator of all payouts.
pub fn scale(lambda: RationalLambda, f: u32) -> BigUint {
    num_traits::pow(BigUint::from(lambda.denom()), (f - 1) as usize)
}

/// Integer arithmetic backend for payout bookkeeping.
pub(crate) trait Payout: Clone + Ord + fmt::Debug + Send + Sync {
    fn nothing() -> Self;
    fn from_big(v: &BigUint) -> Self;
    fn to_big(&self) -> BigUint;
    fn add_in(&mut self, other: &Self);
    fn sub_in(&mut self, other: &Self);
    fn times(&self, other: &Self) -> Self;
    fn is_nil(&self) -> bool;
}

impl Payout for u128 {
    fn nothing() -> Self {
        0
    }
    fn from_big(v: &BigUint) -> Self {
        v.to_u128().expect("value was checked to fit in u128")
    }
    fn to_big(&self) -> BigUint {
        BigUint::from(*self)
    }
    fn add_in(&mut self, other: &Self) {
        *self += *other;
    }
    fn sub_in(&mut self, other: &Self) {
        *self -= *other;
    }
    fn times(&self, other: &Self) -> Self {
        *self * *other
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
}

impl Payout for BigUint {
    fn nothing() -> Self {
        Zero::zero()
    }
    fn from_big(v: &BigUint) -> Self {
        v.clone()
    }
    fn to_big(&self) -> BigUint {
        self.clone()
    }
    fn add_in(&mut self, other: &Self) {
        *self += other;
    }
    fn sub_in(&mut self, other: &Self) {
        *self -= other;
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
}

/// Scaled bank notes `notes[k] = p^k q^(f-1-k)` and their tail sums
/// `tails[k] = Σ_{i=k}^{f-1} notes[i]`, with `tails[f] = 0`.
#[derive(Debug, Clone)]
pub(crate) struct NoteTable<W> {
    pub notes: Vec<W>,
    pub tails: Vec<W>,
}

impl<W: Payout> NoteTable<W> {
    pub fn new(lambda: RationalLambda, f: u32) -> Self {
        let big = big_notes(lambda, f);
        Self::from_big_notes(&big)
    }

    pub fn from_big_notes(big: &[BigUint]) -> Self {
        let notes: Vec<W> = big.iter().map(W::from_big).collect();
        let mut tails = vec![W::nothing(); notes.len() + 1];
        for k in (0..notes.len()).rev() {
            let mut t = tails[k + 1].clone();
            t.add_in(&notes[k]);
            tails[k] = t;
        }
        NoteTable { notes, tails }
    }

    /// Scaled payout of an edge already hit `k` times.
    pub fn note(&self, k: u32) -> W {
        self.notes
            .get(k as usize)
            .cloned()
            .unwrap_or_else(W::nothing)
    }

    /// Scaled payout still to be collected from an edge hit `k` times.
    pub fn tail(&self, k: u32) -> &W {
        let idx = (k as usize).min(self.notes.len());
        &self.tails[idx]
    }

    pub fn f(&self) -> u32 {
        self.notes.len() as u32
    }
}

pub(crate) fn big_notes(lambda: RationalLambda, f: u32) -> Vec<BigUint> {
    let p = BigUint::from(lambda.numer());
    let q = BigUint::from(lambda.denom());
    let f = f as usize;
    let mut q_pows = vec![BigUint::one(); f];
    for i in 1..f {
        q_pows[i] = &q_pows[i - 1] * &q;
    }
    let mut notes = Vec::with_capacity(f);
    let mut p_pow = BigUint::one();
    for k in 0..f {
        notes.push(&p_pow * &q_pows[f - 1 - k]);
        p_pow *= &p;
    }
    notes
}

/// Whether every product appearing in a run or its certificates stays well
/// inside `u128`: bounded by `(m+1)(Δ+1)(f+1) q^(2(f-1))`.
pub(crate) fn fits_u128(edges: usize, delta: usize, f: u32, lambda: RationalLambda) -> bool {
    let s = scale(lambda, f);
    let bound = BigUint::from(edges as u64 + 1)
        * BigUint::from(delta as u64 + 1)
        * BigUint::from(u64::from(f) + 1)
        * &s
        * &s;
    bound.bits() < 120
}
