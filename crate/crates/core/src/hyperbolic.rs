//! Beltrami–Klein disk model of the hyperbolic plane.
//!
//! Lines are chords of the unit circle and carry their ideal endpoints
//! explicitly, so limiting parallelism is a representation-level test.
//! Distance is the half-log of a cross-ratio along the chord; angles need the
//! metric tensor because the model is not conformal. Perpendiculars go through
//! the pole of the chord (the meet of the boundary tangents at its ideal
//! endpoints), and the circle/segment solver is plain bisection on a sign
//! change, mirroring the elementary continuity principle it implements.

use crate::euclidean::{EuPoint, Tolerance, Vec2};
use thiserror::Error;

/// Points closer than this to the boundary are rejected at construction.
pub const INTERIOR_MARGIN: f64 = 1e-12;
/// How far off the unit circle an ideal point may sit.
pub const IDEAL_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HyperbolicError {
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
    #[error("point is not strictly interior to the disk: ({x}, {y})")]
    OutsideDisk { x: f64, y: f64 },
    #[error("point is not on the boundary circle: ({x}, {y})")]
    NotOnBoundary { x: f64, y: f64 },
    #[error("no sign change over the segment: endpoints at signed offsets {start} and {end}")]
    NoSignChange { start: f64, end: f64 },
}

type Result<T> = std::result::Result<T, HyperbolicError>;

/// A point strictly inside the unit disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HPoint {
    pub x: f64,
    pub y: f64,
}

impl HPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite()) {
            return Err(HyperbolicError::DegenerateInput("non-finite coordinate"));
        }
        if x * x + y * y >= 1.0 - INTERIOR_MARGIN {
            return Err(HyperbolicError::OutsideDisk { x, y });
        }
        Ok(HPoint { x, y })
    }

    pub fn to_euclidean(&self) -> EuPoint {
        EuPoint {
            x: self.x,
            y: self.y,
        }
    }

    fn norm_sq(&self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn euclid_dist(&self, other: &HPoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// A point of the boundary circle, where chords end and limiting parallels meet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdealPoint {
    pub x: f64,
    pub y: f64,
}

impl IdealPoint {
    /// Accepts a point within [`IDEAL_TOL`] of the circle and snaps it onto it.
    pub fn new(x: f64, y: f64) -> Result<Self> {
        let r = x.hypot(y);
        if !r.is_finite() || (r * r - 1.0).abs() > IDEAL_TOL {
            return Err(HyperbolicError::NotOnBoundary { x, y });
        }
        Ok(IdealPoint { x: x / r, y: y / r })
    }

    pub fn euclid_dist_to(&self, p: &HPoint) -> f64 {
        (self.x - p.x).hypot(self.y - p.y)
    }

    pub fn euclid_dist(&self, other: &IdealPoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// A hyperbolic line: the open chord between two ideal endpoints.
///
/// Endpoints are stored in canonical (lexicographic) order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HChord {
    i1: IdealPoint,
    i2: IdealPoint,
}

impl HChord {
    pub fn new(a: IdealPoint, b: IdealPoint) -> Result<Self> {
        if a.euclid_dist(&b) <= IDEAL_TOL {
            return Err(HyperbolicError::DegenerateInput("chord endpoints coincide"));
        }
        if (a.x, a.y) <= (b.x, b.y) {
            Ok(HChord { i1: a, i2: b })
        } else {
            Ok(HChord { i1: b, i2: a })
        }
    }

    pub fn endpoints(&self) -> (IdealPoint, IdealPoint) {
        (self.i1, self.i2)
    }

    /// Unit direction from the first stored endpoint toward the second.
    pub fn direction(&self) -> Vec2 {
        Vec2::new(self.i2.x - self.i1.x, self.i2.y - self.i1.y)
            .normalized()
            .expect("endpoints are separated")
    }

    /// Signed Euclidean distance of `p` from the chord's supporting line.
    pub fn signed_offset(&self, p: &EuPoint) -> f64 {
        let d = self.direction();
        let n = d.perp();
        n.x * (p.x - self.i1.x) + n.y * (p.y - self.i1.y)
    }

    pub fn contains(&self, p: &HPoint, tol: f64) -> bool {
        self.signed_offset(&p.to_euclidean()).abs() <= tol
    }

    /// True when the chord passes through the disk center.
    pub fn is_diameter(&self, tol: f64) -> bool {
        self.signed_offset(&EuPoint { x: 0.0, y: 0.0 }).abs() <= tol
    }

    /// Euclidean parameter of `p` along the chord, `0` at `i1`, `1` at `i2`.
    pub fn param_of(&self, p: &EuPoint) -> f64 {
        let d = Vec2::new(self.i2.x - self.i1.x, self.i2.y - self.i1.y);
        let v = Vec2::new(p.x - self.i1.x, p.y - self.i1.y);
        v.dot(&d) / d.dot(&d)
    }

    pub fn point_at(&self, t: f64) -> EuPoint {
        EuPoint {
            x: self.i1.x + t * (self.i2.x - self.i1.x),
            y: self.i1.y + t * (self.i2.y - self.i1.y),
        }
    }
}

/// A ray from an interior origin toward an ideal point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HRay {
    pub origin: HPoint,
    pub toward: IdealPoint,
}

impl HRay {
    pub fn new(origin: HPoint, toward: IdealPoint) -> Self {
        HRay { origin, toward }
    }
}

/// A segment between two distinct interior points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HSegment {
    pub start: HPoint,
    pub end: HPoint,
}

impl HSegment {
    pub fn new(start: HPoint, end: HPoint) -> Result<Self> {
        if start.euclid_dist(&end) <= INTERIOR_MARGIN {
            return Err(HyperbolicError::DegenerateInput("segment endpoints coincide"));
        }
        Ok(HSegment { start, end })
    }

    pub fn point_at(&self, t: f64) -> EuPoint {
        EuPoint {
            x: self.start.x + t * (self.end.x - self.start.x),
            y: self.start.y + t * (self.end.y - self.start.y),
        }
    }
}

/// Pole of a chord: where the boundary tangents at its endpoints meet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Pole {
    /// A finite pole, always strictly outside the closed disk.
    Point(EuPoint),
    /// The chord is a diameter; the tangents are parallel with this direction.
    AtInfinity(Vec2),
}

/// Klein-model operations under a shared tolerance context.
#[derive(Debug, Clone, Copy, Default)]
pub struct KleinKernel {
    pub tol: Tolerance,
}

/// Bisection iteration cap for the circle/segment solver.
const BISECTION_MAX_ITERS: u32 = 200;
/// Parameter-width stop for the circle/segment solver.
const BISECTION_WIDTH: f64 = 1e-14;

impl KleinKernel {
    pub fn new(tol: Tolerance) -> Self {
        KleinKernel { tol }
    }

    /// Both intersections of the Euclidean line through `p` with direction
    /// `dir` and the unit circle, ordered by the line parameter.
    fn circle_hits(&self, p: &EuPoint, dir: &Vec2) -> Result<(IdealPoint, IdealPoint)> {
        let dir = dir
            .normalized()
            .ok_or(HyperbolicError::DegenerateInput("zero chord direction"))?;
        // |p + t d|^2 = 1 with |d| = 1
        let b = p.x * dir.x + p.y * dir.y;
        let c = p.x * p.x + p.y * p.y - 1.0;
        let disc = b * b - c;
        if disc <= 0.0 {
            return Err(HyperbolicError::DegenerateInput("line misses the disk"));
        }
        let root = disc.sqrt();
        let t1 = -b - root;
        let t2 = -b + root;
        let mk = |t: f64| IdealPoint::new(p.x + t * dir.x, p.y + t * dir.y);
        Ok((mk(t1)?, mk(t2)?))
    }

    /// The chord through two distinct interior points.
    pub fn h_line_through(&self, a: &HPoint, b: &HPoint) -> Result<HChord> {
        if a.euclid_dist(b) <= self.tol.degeneracy {
            return Err(HyperbolicError::DegenerateInput("coincident points"));
        }
        let dir = Vec2::new(b.x - a.x, b.y - a.y);
        let (i1, i2) = self.circle_hits(&a.to_euclidean(), &dir)?;
        HChord::new(i1, i2)
    }

    /// The chord through an interior point and an ideal point.
    pub fn chord_toward(&self, a: &HPoint, toward: &IdealPoint) -> Result<HChord> {
        let dir = Vec2::new(toward.x - a.x, toward.y - a.y);
        let (i1, i2) = self.circle_hits(&a.to_euclidean(), &dir)?;
        HChord::new(i1, i2)
    }

    /// Hyperbolic distance as the half-log cross-ratio along the chord.
    pub fn h_distance(&self, a: &HPoint, b: &HPoint) -> f64 {
        if a.euclid_dist(b) <= self.tol.degeneracy {
            return 0.0;
        }
        let chord = self.h_line_through(a, b).expect("separation checked above");
        let (i1, i2) = chord.endpoints();
        let ae = a.to_euclidean();
        let be = b.to_euclidean();
        let d = |p: &EuPoint, q: &IdealPoint| (p.x - q.x).hypot(p.y - q.y);
        let ratio = (d(&ae, &i2) * d(&be, &i1)) / (d(&ae, &i1) * d(&be, &i2));
        0.5 * ratio.ln().abs()
    }

    /// Angle at `v` between the chords toward `a` and `b`, measured by the
    /// Klein metric tensor at `v`.
    pub fn h_angle_at(&self, a: &HPoint, v: &HPoint, b: &HPoint) -> Result<f64> {
        let u = Vec2::new(a.x - v.x, a.y - v.y);
        let w = Vec2::new(b.x - v.x, b.y - v.y);
        if u.norm() <= self.tol.degeneracy || w.norm() <= self.tol.degeneracy {
            return Err(HyperbolicError::DegenerateInput("angle ray undefined"));
        }
        let s = 1.0 - v.norm_sq();
        let vv = Vec2::new(v.x, v.y);
        let inner = |p: &Vec2, q: &Vec2| p.dot(q) / s + (vv.dot(p) * vv.dot(q)) / (s * s);
        let cos = inner(&u, &w) / (inner(&u, &u) * inner(&w, &w)).sqrt();
        Ok(cos.clamp(-1.0, 1.0).acos())
    }

    /// Pole of a chord; diameters report the common tangent direction instead.
    pub fn pole_of(&self, c: &HChord) -> Pole {
        let (i1, i2) = c.endpoints();
        // tangent at p on the unit circle: { q : p . q = 1 }
        let det = i1.x * i2.y - i1.y * i2.x;
        if det.abs() <= self.tol.degeneracy {
            // antipodal endpoints; tangents are parallel with direction perp(i1)
            return Pole::AtInfinity(Vec2::new(-i1.y, i1.x));
        }
        Pole::Point(EuPoint {
            x: (i2.y - i1.y) / det,
            y: (i1.x - i2.x) / det,
        })
    }

    /// The unique chord through `p` perpendicular to `c` (through the pole of
    /// `c`). Well-defined even when `p` lies on `c`.
    pub fn h_perpendicular(&self, p: &HPoint, c: &HChord) -> Result<HChord> {
        let dir = match self.pole_of(c) {
            Pole::Point(pole) => Vec2::new(pole.x - p.x, pole.y - p.y),
            Pole::AtInfinity(t) => t,
        };
        let (i1, i2) = self.circle_hits(&p.to_euclidean(), &dir)?;
        HChord::new(i1, i2)
    }

    /// Interior intersection of two chords, if any.
    pub fn intersect_chords(&self, c1: &HChord, c2: &HChord) -> Option<HPoint> {
        let d1 = c1.direction();
        let d2 = c2.direction();
        let det = d1.cross(&d2);
        if det.abs() <= self.tol.degeneracy {
            return None;
        }
        let (a1, _) = c1.endpoints();
        let (a2, _) = c2.endpoints();
        let dx = a2.x - a1.x;
        let dy = a2.y - a1.y;
        let t = (dx * d2.y - dy * d2.x) / det;
        let p = EuPoint {
            x: a1.x + t * d1.x,
            y: a1.y + t * d1.y,
        };
        HPoint::new(p.x, p.y).ok()
    }

    /// Point of `s` at hyperbolic distance `radius` from `center`, found by
    /// bisection on the segment parameter. Requires a sign change of
    /// `distance - radius` between the endpoints.
    pub fn solve_circle_segment(
        &self,
        center: &HPoint,
        radius: f64,
        s: &HSegment,
    ) -> Result<HPoint> {
        let f = |t: f64| -> f64 {
            let p = s.point_at(t);
            let hp = HPoint { x: p.x, y: p.y };
            self.h_distance(center, &hp) - radius
        };
        let f0 = f(0.0);
        let f1 = f(1.0);
        if f0.abs() <= self.tol.degeneracy
            || f1.abs() <= self.tol.degeneracy
            || (f0 > 0.0) == (f1 > 0.0)
        {
            return Err(HyperbolicError::NoSignChange { start: f0, end: f1 });
        }
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        let mut flo = f0;
        let mut mid = 0.5;
        for _ in 0..BISECTION_MAX_ITERS {
            mid = 0.5 * (lo + hi);
            let fm = f(mid);
            if (fm > 0.0) == (flo > 0.0) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
            if hi - lo < BISECTION_WIDTH {
                break;
            }
        }
        let p = s.point_at(mid);
        HPoint::new(p.x, p.y)
    }

    /// True when the ray heads to an ideal endpoint of `c` without crossing
    /// `c` in the interior.
    pub fn is_limiting_parallel(&self, r: &HRay, c: &HChord) -> bool {
        let (i1, i2) = c.endpoints();
        let shared = r.toward.euclid_dist(&i1).min(r.toward.euclid_dist(&i2));
        if shared > 1e-6 {
            return false;
        }
        match self.chord_toward(&r.origin, &r.toward) {
            Ok(ray_chord) => self.intersect_chords(&ray_chord, c).is_none(),
            Err(_) => false,
        }
    }

    /// The standard isometry onto the Poincaré disk.
    pub fn klein_to_poincare(&self, a: &HPoint) -> EuPoint {
        let s = 1.0 + (1.0 - a.norm_sq()).sqrt();
        EuPoint {
            x: a.x / s,
            y: a.y / s,
        }
    }
}
