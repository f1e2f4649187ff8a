use serde::Serialize;

use crate::error::{Error, Result};

pub type Point = [f64; 2];

/// Geometric comparisons on coordinates use this absolute tolerance.
pub const GEOMETRY_EPS: f64 = 1e-9;

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// One supporting line `normal · y = offset` per polygon side, `offset > 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
struct Side {
    normal: Point,
    offset: f64,
}

/// A convex polygon with the origin in its interior, vertices counterclockwise.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexBody {
    vertices: Vec<Point>,
    #[serde(skip)]
    sides: Vec<Side>,
    symmetric: bool,
}

impl ConvexBody {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::Geometry(format!(
                "a polygon needs at least 3 vertices, got {n}"
            )));
        }
        if vertices.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::Geometry("vertex coordinates must be finite".into()));
        }
        for i in 0..n {
            let (a, b, c) = (vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]);
            if cross(a, b, c) <= GEOMETRY_EPS {
                return Err(Error::Geometry(format!(
                    "vertices are not strictly convex and counterclockwise at vertex {}",
                    (i + 1) % n
                )));
            }
        }
        let mut sides = Vec::with_capacity(n);
        for i in 0..n {
            let (a, b) = (vertices[i], vertices[(i + 1) % n]);
            let normal = [b[1] - a[1], a[0] - b[0]];
            let offset = normal[0] * a[0] + normal[1] * a[1];
            let len = normal[0].hypot(normal[1]);
            if offset <= GEOMETRY_EPS * len {
                return Err(Error::Geometry(
                    "the origin must lie in the interior".into(),
                ));
            }
            sides.push(Side { normal, offset });
        }
        let symmetric = vertices.iter().all(|v| {
            vertices
                .iter()
                .any(|w| (v[0] + w[0]).abs() <= GEOMETRY_EPS && (v[1] + w[1]).abs() <= GEOMETRY_EPS)
        });
        Ok(ConvexBody {
            vertices,
            sides,
            symmetric,
        })
    }

    /// `[-r, r]²`.
    pub fn square(r: f64) -> Result<Self> {
        ConvexBody::new(vec![[-r, -r], [r, -r], [r, r], [-r, r]])
    }

    pub fn regular_polygon(sides: usize, circumradius: f64) -> Result<Self> {
        let vertices = (0..sides)
            .map(|k| {
                let t = std::f64::consts::TAU * k as f64 / sides as f64;
                [circumradius * t.cos(), circumradius * t.sin()]
            })
            .collect();
        ConvexBody::new(vertices)
    }

    pub fn dimension(&self) -> usize {
        2
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn area(&self) -> f64 {
        let n = self.vertices.len();
        let twice: f64 = (0..n)
            .map(|i| {
                let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
                a[0] * b[1] - a[1] * b[0]
            })
            .sum();
        twice / 2.0
    }

    /// Distance from the origin to the boundary.
    pub fn inradius(&self) -> f64 {
        self.sides
            .iter()
            .map(|s| s.offset / s.normal[0].hypot(s.normal[1]))
            .fold(f64::INFINITY, f64::min)
    }

    /// Smallest box `[x0, x1] × [y0, y1]` holding the body.
    pub fn bounding_box(&self) -> (Point, Point) {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for v in &self.vertices {
            for i in 0..2 {
                lo[i] = lo[i].min(v[i]);
                hi[i] = hi[i].max(v[i]);
            }
        }
        (lo, hi)
    }

    /// Minkowski gauge: the least `r ≥ 0` with `x ∈ rK`.
    pub fn gauge(&self, x: Point) -> f64 {
        self.sides
            .iter()
            .map(|s| (s.normal[0] * x[0] + s.normal[1] * x[1]) / s.offset)
            .fold(0.0, f64::max)
    }

    /// Whether `x ∈ center + r·K`, boundary included.
    pub fn contains_scaled(&self, center: Point, r: f64, x: Point) -> bool {
        self.gauge([x[0] - center[0], x[1] - center[1]]) <= r + GEOMETRY_EPS
    }

    pub fn contains(&self, x: Point) -> bool {
        self.contains_scaled([0.0, 0.0], 1.0, x)
    }

    pub fn scaled(&self, factor: f64) -> Result<ConvexBody> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::Domain(format!(
                "scale factor {factor} must be positive"
            )));
        }
        ConvexBody::new(
            self.vertices
                .iter()
                .map(|v| [v[0] * factor, v[1] * factor])
                .collect(),
        )
    }
}

/// `K ∼ δK`, which equals `(1−δ)K` for convex `K`. At `δ = 0` this is `K`.
pub fn minkowski_difference(k: &ConvexBody, delta: f64) -> Result<ConvexBody> {
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::Domain(format!("delta = {delta} must lie in [0, 1)")));
    }
    if delta == 0.0 {
        return Ok(k.clone());
    }
    k.scaled(1.0 - delta)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Point, b: Point) -> bool {
        (a[0] - b[0]).abs() < 1e-12 && (a[1] - b[1]).abs() < 1e-12
    }

    #[test]
    fn square_basics() {
        let k = ConvexBody::square(1.0).unwrap();
        assert_eq!(k.area(), 4.0);
        assert_eq!(k.inradius(), 1.0);
        assert!(k.is_symmetric());
        assert_eq!(k.gauge([0.5, -0.75]), 0.75);
        assert!(k.contains([1.0, 1.0]));
        assert!(!k.contains([1.01, 0.0]));
    }

    #[test]
    fn rejects_bad_polygons() {
        // clockwise
        assert!(ConvexBody::new(vec![[-1.0, -1.0], [-1.0, 1.0], [1.0, 1.0], [1.0, -1.0]]).is_err());
        // origin outside
        assert!(ConvexBody::new(vec![[1.0, 1.0], [2.0, 1.0], [2.0, 2.0]]).is_err());
        // collinear vertex
        assert!(ConvexBody::new(vec![[-1.0, -1.0], [0.0, -1.0], [1.0, -1.0], [0.0, 1.0]]).is_err());
        let tri = ConvexBody::new(vec![[-1.0, -1.0], [1.0, -1.0], [0.0, 1.0]]).unwrap();
        assert!(!tri.is_symmetric());
    }

    #[test]
    fn difference_of_square() {
        let k = ConvexBody::square(1.0).unwrap();
        let d = minkowski_difference(&k, 0.5).unwrap();
        assert_eq!(d, ConvexBody::square(0.5).unwrap());
        assert_eq!(minkowski_difference(&k, 0.0).unwrap(), k);
        assert!(minkowski_difference(&k, 1.0).is_err());
        assert!(minkowski_difference(&k, -0.1).is_err());
    }

    #[test]
    fn difference_of_hexagon() {
        let hex = ConvexBody::regular_polygon(6, 1.0).unwrap();
        assert!(hex.is_symmetric());
        let d = minkowski_difference(&hex, 0.25).unwrap();
        let expect = ConvexBody::regular_polygon(6, 0.75).unwrap();
        for (a, b) in d.vertices().iter().zip(expect.vertices()) {
            assert!(close(*a, *b));
        }
        // T + x ⊆ K for every x in the difference: check at the vertices.
        let t = hex.scaled(0.25).unwrap();
        for x in d.vertices() {
            for v in t.vertices() {
                assert!(hex.contains([x[0] + v[0], x[1] + v[1]]));
            }
        }
    }
}
