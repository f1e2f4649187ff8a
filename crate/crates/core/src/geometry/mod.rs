//! Planar f-fold coverings by translates of a centrally symmetric convex
//! polygon `K`, built through a finite cover hypergraph.
//!
//! The square `C = [-a, a]²` is discretized by a packing `Λ` whose
//! `δK`-translates cover `C`. Every `u ∈ Λ` becomes an edge holding the
//! candidate centers `c` with `u ∈ c + (1−δ)K`; an f-fold transversal of that
//! hypergraph gives centers whose `K`-translates cover `C` f times.
//! Coverage is checked on a sample grid only.

mod body;

pub use body::{minkowski_difference, ConvexBody, Point, GEOMETRY_EPS};

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::bounds::{theorem1_bound, COROLLARY_CONSTANT};
use crate::error::{Error, ParseError, Result};
use crate::greedy::greedy_solve;
use crate::hypergraph::Hypergraph;
use crate::lambda::RationalLambda;
use crate::lp;

pub const DEFAULT_DELTA: f64 = 0.25;
pub const DEFAULT_EPSILON: f64 = 0.1;

/// Above this many vertices plus edges the uniform-weight estimate of τ*
/// stands in for the LP.
pub const LP_SIZE_LIMIT: usize = 400;

/// Refuse grids with more points than this.
const MAX_GRID_POINTS: usize = 50_000_000;

/// Bucketed point set for box queries.
struct PointIndex<'a> {
    cell: f64,
    points: &'a [Point],
    buckets: HashMap<(i64, i64), Vec<usize>>,
}

impl<'a> PointIndex<'a> {
    fn new(points: &'a [Point], cell: f64) -> Self {
        let mut index = PointIndex {
            cell,
            points,
            buckets: HashMap::new(),
        };
        for i in 0..points.len() {
            index.insert(i);
        }
        index
    }

    fn empty(points: &'a [Point], cell: f64) -> Self {
        PointIndex {
            cell,
            points,
            buckets: HashMap::new(),
        }
    }

    fn key(&self, p: Point) -> (i64, i64) {
        (
            (p[0] / self.cell).floor() as i64,
            (p[1] / self.cell).floor() as i64,
        )
    }

    fn insert(&mut self, i: usize) {
        let key = self.key(self.points[i]);
        self.buckets.entry(key).or_default().push(i);
    }

    /// Indices of points inside `center + [lo, hi]`, ascending.
    fn query(&self, center: Point, lo: Point, hi: Point) -> Vec<usize> {
        let a = self.key([
            center[0] + lo[0] - GEOMETRY_EPS,
            center[1] + lo[1] - GEOMETRY_EPS,
        ]);
        let b = self.key([
            center[0] + hi[0] + GEOMETRY_EPS,
            center[1] + hi[1] + GEOMETRY_EPS,
        ]);
        let mut out = Vec::new();
        for kx in a.0..=b.0 {
            for ky in a.1..=b.1 {
                if let Some(bucket) = self.buckets.get(&(kx, ky)) {
                    out.extend_from_slice(bucket);
                }
            }
        }
        out.sort_unstable();
        out
    }
}

fn scaled_box(k: &ConvexBody, r: f64) -> (Point, Point) {
    let (lo, hi) = k.bounding_box();
    ([lo[0] * r, lo[1] * r], [hi[0] * r, hi[1] * r])
}

/// Box of `-r·K`.
fn reflected_box(k: &ConvexBody, r: f64) -> (Point, Point) {
    let (lo, hi) = scaled_box(k, r);
    ([-hi[0], -hi[1]], [-lo[0], -lo[1]])
}

fn axis(a: f64, pitch: f64) -> Result<Vec<f64>> {
    if !(pitch > 0.0 && pitch.is_finite()) {
        return Err(Error::Domain(format!(
            "grid pitch {pitch} must be positive"
        )));
    }
    let steps = (2.0 * a / pitch + 1e-9).floor();
    if steps + 1.0 > (MAX_GRID_POINTS as f64).sqrt() {
        return Err(Error::Domain(format!(
            "grid pitch {pitch} is too fine for a = {a}"
        )));
    }
    let mut coords: Vec<f64> = (0..=steps as usize)
        .map(|i| -a + i as f64 * pitch)
        .collect();
    if a - coords[coords.len() - 1] > GEOMETRY_EPS {
        coords.push(a);
    }
    Ok(coords)
}

/// Grid points of `[-a, a]²` at the given pitch, x-major. The far edge `a`
/// is always included.
pub fn sample_grid(a: f64, pitch: f64) -> Result<Vec<Point>> {
    let coords = axis(a, pitch)?;
    Ok(coords
        .iter()
        .flat_map(|&x| coords.iter().map(move |&y| [x, y]))
        .collect())
}

fn check_body(k: &ConvexBody) -> Result<()> {
    if !k.is_symmetric() {
        return Err(Error::Geometry(
            "K must be centrally symmetric (K = -K)".into(),
        ));
    }
    Ok(())
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain(format!("delta = {delta} must lie in (0, 1)")));
    }
    Ok(())
}

/// Greedy packing of `(δ/2)K` translates with centers in `C = [-a, a]²`,
/// saturated over a candidate grid of pitch `δ·inradius/2`, then checked to
/// satisfy `Λ + δK ⊇ C` at every sample of pitch `grid_h`.
pub fn saturated_packing(a: f64, k: &ConvexBody, delta: f64, grid_h: f64) -> Result<Vec<Point>> {
    check_body(k)?;
    check_delta(delta)?;
    let pitch = delta * k.inradius() / 2.0;
    let coords = axis(a, pitch)?;
    let (lo, hi) = scaled_box(k, delta);
    let cell = (hi[0] - lo[0]).max(hi[1] - lo[1]);

    let grid: Vec<Point> = coords
        .iter()
        .flat_map(|&x| coords.iter().map(move |&y| [x, y]))
        .collect();
    let mut accepted = Vec::new();
    {
        let mut index = PointIndex::empty(&grid, cell);
        for (i, &p) in grid.iter().enumerate() {
            // Translates of (δ/2)K at p and u overlap iff p - u lies in the
            // interior of δK.
            let clash = index
                .query(p, lo, hi)
                .into_iter()
                .any(|j| k.gauge([p[0] - grid[j][0], p[1] - grid[j][1]]) < delta - GEOMETRY_EPS);
            if !clash {
                index.insert(i);
                accepted.push(p);
            }
        }
    }

    let index = PointIndex::new(&accepted, cell);
    for x in sample_grid(a, grid_h)? {
        let covered = index
            .query(x, lo, hi)
            .into_iter()
            .any(|j| k.contains_scaled(accepted[j], delta, x));
        if !covered {
            return Err(Error::Geometry(format!(
                "packing leaves ({}, {}) outside Λ + δK; refine the grid",
                x[0], x[1]
            )));
        }
    }
    Ok(accepted)
}

/// Largest `|Λ ∩ (x + (1−δ)K)|` over the sample grid.
pub fn max_cap(points: &[Point], k: &ConvexBody, delta: f64, a: f64, grid_h: f64) -> Result<usize> {
    let r = 1.0 - delta;
    let (lo, hi) = scaled_box(k, r);
    let index = PointIndex::new(points, (hi[0] - lo[0]).max(hi[1] - lo[1]));
    let samples = sample_grid(a, grid_h)?;
    Ok(samples
        .par_iter()
        .map(|&x| {
            index
                .query(x, lo, hi)
                .into_iter()
                .filter(|&j| k.contains_scaled(x, r, points[j]))
                .count()
        })
        .max()
        .unwrap_or(0))
}

/// Vertices are `candidates`; edge `i` holds the candidates `c` with
/// `points[i] ∈ c + (1−δ)K`.
pub fn build_cover_hypergraph(
    k: &ConvexBody,
    delta: f64,
    points: &[Point],
    candidates: &[Point],
) -> Result<Hypergraph> {
    check_body(k)?;
    check_delta(delta)?;
    let r = 1.0 - delta;
    let (lo, hi) = reflected_box(k, r);
    let index = PointIndex::new(candidates, (hi[0] - lo[0]).max(hi[1] - lo[1]));
    let edges: Vec<Vec<usize>> = points
        .par_iter()
        .map(|&u| {
            index
                .query(u, lo, hi)
                .into_iter()
                .filter(|&c| k.contains_scaled(candidates[c], r, u))
                .collect()
        })
        .collect();
    if let Some(i) = edges.iter().position(Vec::is_empty) {
        return Err(Error::Geometry(format!(
            "no candidate center reaches u = ({}, {}); the candidate set is too sparse",
            points[i][0], points[i][1]
        )));
    }
    Hypergraph::new(candidates.len(), edges)
}

#[derive(Debug, Clone)]
pub struct GeometricInstance {
    pub body: ConvexBody,
    pub a: f64,
    pub delta: f64,
    pub f: u32,
    pub epsilon: f64,
    pub grid_h: f64,
    pub points: Vec<Point>,
    pub candidates: Vec<Point>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    #[serde(rename = "K")]
    pub k: Vec<Point>,
    pub a: f64,
    #[serde(default = "default_delta")]
    pub delta: f64,
    pub f: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_h: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    /// Use a grid of this pitch over `C` as candidate centers instead of `Λ`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidate_pitch: Option<f64>,
}

fn default_delta() -> f64 {
    DEFAULT_DELTA
}

impl InstanceFile {
    pub fn square(a: f64, delta: f64, f: u32, grid_h: f64) -> Self {
        InstanceFile {
            k: vec![[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]],
            a,
            delta,
            f,
            grid_h: Some(grid_h),
            epsilon: None,
            candidate_pitch: None,
        }
    }
}

pub fn parse_instance(text: &str) -> Result<InstanceFile> {
    let file: InstanceFile =
        serde_json::from_str(text).map_err(|e| ParseError::from_json("instance", &e))?;
    let positive = |name: &str, v: f64| -> Result<()> {
        if v > 0.0 && v.is_finite() {
            Ok(())
        } else {
            Err(ParseError::new(name, format!("{v} must be a positive number")).into())
        }
    };
    positive("a", file.a)?;
    if !(file.delta > 0.0 && file.delta < 1.0) {
        return Err(ParseError::new("delta", format!("{} must lie in (0, 1)", file.delta)).into());
    }
    if file.f == 0 {
        return Err(ParseError::new("f", "must be at least 1").into());
    }
    if let Some(h) = file.grid_h {
        positive("grid_h", h)?;
    }
    if let Some(p) = file.candidate_pitch {
        positive("candidate_pitch", p)?;
    }
    if let Some(e) = file.epsilon {
        if !(e >= 0.0 && e.is_finite()) {
            return Err(ParseError::new("epsilon", format!("{e} must be non-negative")).into());
        }
    }
    ConvexBody::new(file.k.clone()).map_err(|e| ParseError::new("K", e.to_string()))?;
    Ok(file)
}

impl GeometricInstance {
    pub fn build(file: &InstanceFile) -> Result<Self> {
        let body = ConvexBody::new(file.k.clone())?;
        check_body(&body)?;
        check_delta(file.delta)?;
        if !(file.a > 0.0 && file.a.is_finite()) {
            return Err(Error::Domain(format!("a = {} must be positive", file.a)));
        }
        if file.f == 0 {
            return Err(Error::Domain("f must be positive".into()));
        }
        let grid_h = file.grid_h.unwrap_or(file.delta * body.inradius() / 4.0);
        let points = saturated_packing(file.a, &body, file.delta, grid_h)?;
        let candidates = match file.candidate_pitch {
            Some(p) => sample_grid(file.a, p)?,
            None => points.clone(),
        };
        Ok(GeometricInstance {
            body,
            a: file.a,
            delta: file.delta,
            f: file.f,
            epsilon: file.epsilon.unwrap_or(DEFAULT_EPSILON),
            grid_h,
            points,
            candidates,
        })
    }

    pub fn area(&self) -> f64 {
        4.0 * self.a * self.a
    }

    /// `(1+ε) vol C / ((1−δ)² vol K)`: total weight of the uniform
    /// fractional cover of `C` by `(1−δ)K` translates.
    pub fn uniform_tau_bound(&self) -> f64 {
        (1.0 + self.epsilon) * self.area() / ((1.0 - self.delta).powi(2) * self.body.area())
    }

    /// `⌈3.153 (1+ε)/(1−δ)² · max{2 ln(2/δ), f}⌉`.
    pub fn density_bound(&self) -> f64 {
        let lead = COROLLARY_CONSTANT * (1.0 + self.epsilon) / (1.0 - self.delta).powi(2);
        (lead * (2.0 * (2.0 / self.delta).ln()).max(f64::from(self.f))).ceil()
    }

    /// `(2/δ)²`.
    pub fn cap_limit(&self) -> f64 {
        (2.0 / self.delta).powi(2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverCenter {
    pub point: Point,
    pub multiplicity: u64,
}

impl Serialize for CoverCenter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (self.point[0], self.point[1], self.multiplicity).serialize(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TauSource {
    Lp,
    Uniform,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoverResult {
    pub centers: Vec<CoverCenter>,
    #[serde(rename = "N_f")]
    pub n_f: u64,
    pub density: f64,
    /// Every sample of pitch `grid_h` is covered at least f times.
    pub verified: bool,
    /// `⌈theorem1_bound(τ*, Δ, f, λ)⌉`.
    pub bound: f64,
    pub bound_holds: bool,
    pub tau_star: f64,
    pub tau_source: TauSource,
    pub delta_max: usize,
    pub f: u32,
    pub lambda: String,
    pub density_bound: f64,
    pub density_bound_holds: bool,
    pub max_cap: usize,
    pub cap_limit: f64,
    pub cap_holds: bool,
    pub samples: usize,
    pub min_coverage: u64,
    pub grid_h: f64,
    pub packing_size: usize,
}

impl CoverResult {
    pub fn all_hold(&self) -> bool {
        self.verified && self.bound_holds && self.density_bound_holds && self.cap_holds
    }
}

/// `N_f · area(K) / area(C)` for `C = [-a, a]²`.
pub fn density(centers: &[CoverCenter], k: &ConvexBody, a: f64) -> f64 {
    let n: u64 = centers.iter().map(|c| c.multiplicity).sum();
    n as f64 * k.area() / (4.0 * a * a)
}

/// Least number of times any sample is covered by the `K`-translates, or
/// the first sample covered fewer than `f` times.
pub fn count_coverage(
    centers: &[CoverCenter],
    k: &ConvexBody,
    samples: &[Point],
    f: u32,
) -> std::result::Result<u64, (Point, u64)> {
    let points: Vec<Point> = centers.iter().map(|c| c.point).collect();
    let (lo, hi) = reflected_box(k, 1.0);
    let index = PointIndex::new(&points, (hi[0] - lo[0]).max(hi[1] - lo[1]));
    let counts: Vec<u64> = samples
        .par_iter()
        .map(|&x| {
            // x ∈ c + K iff c ∈ x - K.
            index
                .query(x, lo, hi)
                .into_iter()
                .filter(|&i| k.contains_scaled(points[i], 1.0, x))
                .map(|i| centers[i].multiplicity)
                .sum()
        })
        .collect();
    match counts.iter().position(|&c| c < u64::from(f)) {
        Some(i) => Err((samples[i], counts[i])),
        None => Ok(counts.into_iter().min().unwrap_or(0)),
    }
}

pub fn f_fold_cover(inst: &GeometricInstance, lambda: RationalLambda) -> Result<CoverResult> {
    let h = build_cover_hypergraph(&inst.body, inst.delta, &inst.points, &inst.candidates)?;
    let (picks, _) = greedy_solve(&h, inst.f, lambda)?;
    let centers: Vec<CoverCenter> = picks
        .iter()
        .map(|(c, multiplicity)| CoverCenter {
            point: inst.candidates[c],
            multiplicity,
        })
        .collect();

    let samples = sample_grid(inst.a, inst.grid_h)?;
    let min_coverage =
        count_coverage(&centers, &inst.body, &samples, inst.f).map_err(|(x, count)| {
            Error::CoverageFailed {
                x: x[0],
                y: x[1],
                count: count.min(u64::from(u32::MAX)) as u32,
                f: inst.f,
            }
        })?;

    let delta_max = h.max_degree()?;
    let (tau_star, tau_source) = if h.vertex_count() + h.edge_count() <= LP_SIZE_LIMIT {
        (lp::tau_star(&h)?, TauSource::Lp)
    } else {
        (inst.uniform_tau_bound(), TauSource::Uniform)
    };
    let bound = theorem1_bound(tau_star, delta_max, inst.f, lambda.to_f64())?.ceil();
    let n_f = picks.size();
    let density = density(&centers, &inst.body, inst.a);
    let density_bound = inst.density_bound();
    let max_cap = max_cap(&inst.points, &inst.body, inst.delta, inst.a, inst.grid_h)?;
    let cap_limit = inst.cap_limit();
    Ok(CoverResult {
        centers,
        n_f,
        density,
        verified: true,
        bound,
        bound_holds: n_f as f64 <= bound,
        tau_star,
        tau_source,
        delta_max,
        f: inst.f,
        lambda: lambda.to_string(),
        density_bound,
        density_bound_holds: density <= density_bound,
        max_cap,
        cap_limit,
        cap_holds: max_cap as f64 <= cap_limit,
        samples: samples.len(),
        min_coverage,
        grid_h: inst.grid_h,
        packing_size: inst.points.len(),
    })
}
