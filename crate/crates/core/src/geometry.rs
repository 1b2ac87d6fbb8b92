//! Planar primitives used by the boundary walks.
//!
//! All degeneracy decisions (tangency, collinearity, perimeter membership)
//! are made against an absolute tolerance supplied by the caller, normally
//! [`Domain::tolerance`].

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative factor applied to the domain scale to get the geometric tolerance.
pub const GEOMETRIC_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("circle centres coincide at ({x}, {y})")]
    CoincidentCenters { x: f64, y: f64 },
    #[error("no intersection candidate lies strictly ahead of the walk")]
    NoForwardCandidate,
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
}

/// A location in the parameter plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    /// z-component of the planar cross product `self × other`.
    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn midpoint(self, other: Point2) -> Point2 {
        Point2::new((self.x + other.x) / 2.0, (self.y + other.y) / 2.0)
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, rhs: f64) -> Point2 {
        Point2::new(self.x * rhs, self.y * rhs)
    }
}

impl std::fmt::Display for Point2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

pub fn distance(a: Point2, b: Point2) -> f64 {
    (a - b).norm()
}

/// Axis-aligned rectangular domain.
///
/// The perimeter is parameterized by arclength `s ∈ [0, P)`, counterclockwise
/// starting from the lower-left corner: bottom edge, right edge, top edge,
/// left edge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Domain {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self, GeometryError> {
        let all_finite = [x_min, x_max, y_min, y_max].iter().all(|v| v.is_finite());
        if !all_finite {
            return Err(GeometryError::InvalidDomain("non-finite bound".into()));
        }
        if x_min >= x_max || y_min >= y_max {
            return Err(GeometryError::InvalidDomain(format!(
                "[{x_min}, {x_max}] x [{y_min}, {y_max}] is empty"
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            y_min,
            y_max,
        })
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn perimeter(&self) -> f64 {
        2.0 * self.width() + 2.0 * self.height()
    }

    pub fn diagonal(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn center(&self) -> Point2 {
        Point2::new(
            (self.x_min + self.x_max) / 2.0,
            (self.y_min + self.y_max) / 2.0,
        )
    }

    /// Absolute tolerance for degeneracy tests in this domain.
    pub fn tolerance(&self) -> f64 {
        GEOMETRIC_TOLERANCE * self.diagonal().max(1.0)
    }

    /// Closed-set membership: perimeter points are inside.
    pub fn contains(&self, p: Point2) -> bool {
        self.x_min <= p.x && p.x <= self.x_max && self.y_min <= p.y && p.y <= self.y_max
    }

    /// `p` clamped into the domain if it lies within `tol` of it. Absorbs
    /// round-off on points constructed to sit on the perimeter.
    pub fn snap(&self, p: Point2, tol: f64) -> Option<Point2> {
        let inside = self.x_min - tol <= p.x
            && p.x <= self.x_max + tol
            && self.y_min - tol <= p.y
            && p.y <= self.y_max + tol;
        inside.then(|| {
            Point2::new(
                p.x.clamp(self.x_min, self.x_max),
                p.y.clamp(self.y_min, self.y_max),
            )
        })
    }

    /// Corners in perimeter order, starting at the lower-left.
    pub fn corners(&self) -> [Point2; 4] {
        [
            Point2::new(self.x_min, self.y_min),
            Point2::new(self.x_max, self.y_min),
            Point2::new(self.x_max, self.y_max),
            Point2::new(self.x_min, self.y_max),
        ]
    }

    /// Wraps any real arclength into `[0, P)`.
    pub fn wrap_arclength(&self, s: f64) -> f64 {
        let p = self.perimeter();
        let w = s.rem_euclid(p);
        if w >= p {
            0.0
        } else {
            w
        }
    }

    /// Point on the perimeter at arclength `s` (wrapped into `[0, P)`).
    pub fn point_at(&self, s: f64) -> Point2 {
        let (w, h) = (self.width(), self.height());
        let s = self.wrap_arclength(s);
        if s < w {
            Point2::new(self.x_min + s, self.y_min)
        } else if s < w + h {
            Point2::new(self.x_max, self.y_min + (s - w))
        } else if s < 2.0 * w + h {
            Point2::new(self.x_max - (s - w - h), self.y_max)
        } else {
            Point2::new(self.x_min, self.y_max - (s - 2.0 * w - h))
        }
    }

    /// Arclength of the perimeter point nearest to `p`.
    ///
    /// For points on the perimeter this inverts [`Domain::point_at`].
    pub fn arclength_of(&self, p: Point2) -> f64 {
        let (w, h) = (self.width(), self.height());
        let q = Point2::new(
            p.x.clamp(self.x_min, self.x_max),
            p.y.clamp(self.y_min, self.y_max),
        );
        // Distance to each edge line; ties resolve to the earlier edge so that
        // corners map to the start of the edge they open.
        let d_bottom = q.y - self.y_min;
        let d_right = self.x_max - q.x;
        let d_top = self.y_max - q.y;
        let d_left = q.x - self.x_min;
        let min = d_bottom.min(d_right).min(d_top).min(d_left);
        let s = if min == d_bottom && q.x < self.x_max {
            q.x - self.x_min
        } else if min == d_right && q.y < self.y_max {
            w + (q.y - self.y_min)
        } else if min == d_top && q.x > self.x_min {
            w + h + (self.x_max - q.x)
        } else if min == d_left && q.y > self.y_min {
            2.0 * w + h + (self.y_max - q.y)
        } else if min == d_bottom {
            // q.x == x_max on the bottom edge: the lower-right corner.
            w
        } else if min == d_right {
            w + h
        } else if min == d_top {
            2.0 * w + h
        } else {
            0.0
        };
        self.wrap_arclength(s)
    }

    /// True when `p` lies on the perimeter within `tol`.
    pub fn on_perimeter(&self, p: Point2, tol: f64) -> bool {
        let inside = self.x_min - tol <= p.x
            && p.x <= self.x_max + tol
            && self.y_min - tol <= p.y
            && p.y <= self.y_max + tol;
        inside
            && ((p.x - self.x_min).abs() <= tol
                || (p.x - self.x_max).abs() <= tol
                || (p.y - self.y_min).abs() <= tol
                || (p.y - self.y_max).abs() <= tol)
    }
}

/// Intersection of two radius-`r` circles centred at `c1` and `c2`.
///
/// Returns no point when the circles are disjoint, the midpoint on
/// tangency (within `tol`) and otherwise two points, the first to the left
/// of `c1 → c2`.
pub fn circle_circle_intersection(
    c1: Point2,
    c2: Point2,
    r: f64,
    tol: f64,
) -> Result<Vec<Point2>, GeometryError> {
    let delta = c2 - c1;
    let d = delta.norm();
    if d < tol {
        return Err(GeometryError::CoincidentCenters { x: c1.x, y: c1.y });
    }
    let mid = c1.midpoint(c2);
    if (d - 2.0 * r).abs() <= tol {
        return Ok(vec![mid]);
    }
    if d > 2.0 * r {
        return Ok(Vec::new());
    }
    let half = d / 2.0;
    let h = ((r - half) * (r + half)).max(0.0).sqrt();
    let normal = Point2::new(-delta.y / d, delta.x / d);
    Ok(vec![mid + normal * h, mid - normal * h])
}

/// Picks the candidate strictly to the left of `inner_end → outer_end`.
pub fn select_forward(
    inner_end: Point2,
    outer_end: Point2,
    candidates: &[Point2],
    tol: f64,
) -> Result<Point2, GeometryError> {
    let axis = outer_end - inner_end;
    let scale = axis.norm().max(1.0);
    candidates
        .iter()
        .copied()
        .map(|c| (c, axis.cross(c - inner_end)))
        .filter(|&(_, cross)| cross > tol * scale)
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(c, _)| c)
        .ok_or(GeometryError::NoForwardCandidate)
}

/// A perimeter point paired with its arclength parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerimeterPoint {
    pub point: Point2,
    pub s: f64,
}

/// All perimeter points at Euclidean distance `r` from `center`, sorted by
/// arclength. Points closer than the domain tolerance are merged, so a
/// circle passing exactly through a corner yields that corner once.
pub fn perimeter_circle_intersection(
    domain: &Domain,
    center: Point2,
    r: f64,
) -> Vec<PerimeterPoint> {
    let tol = domain.tolerance();
    let mut hits: Vec<Point2> = Vec::with_capacity(4);

    // Horizontal edges: y fixed, solve for x.
    for y in [domain.y_min, domain.y_max] {
        let dy = y - center.y;
        let disc = r * r - dy * dy;
        if disc < -tol * r {
            continue;
        }
        let dx = disc.max(0.0).sqrt();
        for x in [center.x - dx, center.x + dx] {
            if x >= domain.x_min - tol && x <= domain.x_max + tol {
                hits.push(Point2::new(x.clamp(domain.x_min, domain.x_max), y));
            }
        }
    }
    // Vertical edges: x fixed, solve for y.
    for x in [domain.x_min, domain.x_max] {
        let dx = x - center.x;
        let disc = r * r - dx * dx;
        if disc < -tol * r {
            continue;
        }
        let dy = disc.max(0.0).sqrt();
        for y in [center.y - dy, center.y + dy] {
            if y >= domain.y_min - tol && y <= domain.y_max + tol {
                hits.push(Point2::new(x, y.clamp(domain.y_min, domain.y_max)));
            }
        }
    }

    let mut out: Vec<PerimeterPoint> = Vec::with_capacity(hits.len());
    for p in hits {
        if out.iter().any(|q| distance(q.point, p) <= tol) {
            continue;
        }
        out.push(PerimeterPoint {
            point: p,
            s: domain.arclength_of(p),
        });
    }
    out.sort_by(|a, b| a.s.total_cmp(&b.s));
    out
}
