//! Euclidean plane primitives and predicates.
//!
//! Lines are stored in canonical normal form `{ p : normal . p = offset }`
//! with a unit normal, so parallelism and coincidence are representation-level
//! tests. All operations are pure functions of their inputs plus the kernel
//! tolerance context; every type is an immutable value.

use thiserror::Error;

/// Module-wide default for degeneracy tests (coincident points, parallel normals).
pub const DEGENERACY_TOL: f64 = 1e-12;
/// Module-wide default for post-condition residuals (point-on-object checks).
pub const RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EuclideanError {
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
    #[error("coincident circles")]
    CoincidentCircles,
    #[error("not a transversal: {0}")]
    NotATransversal(&'static str),
    #[error("value outside the representable range: {0}")]
    OutOfRange(&'static str),
}

type Result<T> = std::result::Result<T, EuclideanError>;

/// Absolute tolerances shared by a kernel instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Threshold below which inputs count as degenerate.
    pub degeneracy: f64,
    /// Allowed residual when checking a post-condition such as incidence.
    pub residual: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            degeneracy: DEGENERACY_TOL,
            residual: RESIDUAL_TOL,
        }
    }
}

/// A point of the Euclidean plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EuPoint {
    pub x: f64,
    pub y: f64,
}

impl EuPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite()) {
            return Err(EuclideanError::DegenerateInput("non-finite coordinate"));
        }
        Ok(EuPoint { x, y })
    }

    pub fn dist(&self, other: &EuPoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// A 2-vector; used for directions and normals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn between(from: &EuPoint, to: &EuPoint) -> Self {
        Vec2::new(to.x - from.x, to.y - from.y)
    }

    pub fn dot(&self, other: &Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(&self, other: &Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Counter-clockwise quarter turn.
    pub fn perp(&self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn neg(&self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }

    pub fn scaled(&self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }

    pub fn normalized(&self) -> Option<Vec2> {
        let n = self.norm();
        if n <= DEGENERACY_TOL {
            None
        } else {
            Some(self.scaled(1.0 / n))
        }
    }
}

impl EuPoint {
    pub fn offset(&self, v: &Vec2, t: f64) -> EuPoint {
        EuPoint {
            x: self.x + v.x * t,
            y: self.y + v.y * t,
        }
    }
}

/// A line in canonical normal form: `{ p : normal . p = offset }`.
///
/// Of the two equivalent representations `(n, d)` and `(-n, -d)` the one with
/// the lexicographically larger normal is stored, so equal lines compare equal
/// component-wise and `line_through(A, B) == line_through(B, A)` exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EuLine {
    normal: Vec2,
    offset: f64,
}

impl EuLine {
    /// Builds a line from any non-degenerate normal and offset, normalizing
    /// and canonicalizing the representation.
    pub fn from_normal_offset(normal: Vec2, offset: f64) -> Result<Self> {
        let n = normal.norm();
        if n <= DEGENERACY_TOL || !n.is_finite() || !offset.is_finite() {
            return Err(EuclideanError::DegenerateInput("zero or non-finite normal"));
        }
        let mut normal = normal.scaled(1.0 / n);
        let mut offset = offset / n;
        // lexicographic canonical sign
        if (normal.x, normal.y) < (-normal.x, -normal.y) {
            normal = normal.neg();
            offset = -offset;
        }
        Ok(EuLine { normal, offset })
    }

    pub fn normal(&self) -> Vec2 {
        self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Canonical direction along the line (the normal turned a quarter left).
    pub fn direction(&self) -> Vec2 {
        self.normal.perp()
    }

    /// Signed distance from `p` to the line (positive on the normal side).
    pub fn signed_distance(&self, p: &EuPoint) -> f64 {
        self.normal.x * p.x + self.normal.y * p.y - self.offset
    }

    pub fn contains(&self, p: &EuPoint, tol: f64) -> bool {
        self.signed_distance(p).abs() <= tol
    }

    /// Foot of the Euclidean perpendicular from `p`.
    pub fn project(&self, p: &EuPoint) -> EuPoint {
        let s = self.signed_distance(p);
        EuPoint {
            x: p.x - s * self.normal.x,
            y: p.y - s * self.normal.y,
        }
    }
}

/// A ray: origin plus unit direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EuRay {
    pub origin: EuPoint,
    direction: Vec2,
}

impl EuRay {
    pub fn new(origin: EuPoint, direction: Vec2) -> Result<Self> {
        let direction = direction
            .normalized()
            .ok_or(EuclideanError::DegenerateInput("zero ray direction"))?;
        Ok(EuRay { origin, direction })
    }

    pub fn through(origin: EuPoint, toward: EuPoint) -> Result<Self> {
        EuRay::new(origin, Vec2::between(&origin, &toward))
    }

    pub fn direction(&self) -> Vec2 {
        self.direction
    }

    pub fn point_at(&self, t: f64) -> EuPoint {
        self.origin.offset(&self.direction, t)
    }
}

/// A segment with distinct endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EuSegment {
    pub start: EuPoint,
    pub end: EuPoint,
}

impl EuSegment {
    pub fn new(start: EuPoint, end: EuPoint) -> Result<Self> {
        if start.dist(&end) <= DEGENERACY_TOL {
            return Err(EuclideanError::DegenerateInput("segment endpoints coincide"));
        }
        Ok(EuSegment { start, end })
    }
}

/// A circle with strictly positive radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EuCircle {
    pub center: EuPoint,
    radius: f64,
}

impl EuCircle {
    pub fn new(center: EuPoint, radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > DEGENERACY_TOL) {
            return Err(EuclideanError::DegenerateInput("circle radius too small"));
        }
        Ok(EuCircle { center, radius })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

/// An undirected angle in `[0, pi]`, in radians.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct AngleValue {
    radians: f64,
}

impl AngleValue {
    /// A right angle.
    pub const RIGHT: AngleValue = AngleValue {
        radians: std::f64::consts::FRAC_PI_2,
    };
    /// A straight angle (two right angles).
    pub const STRAIGHT: AngleValue = AngleValue {
        radians: std::f64::consts::PI,
    };

    pub fn from_radians(radians: f64) -> Result<Self> {
        if !radians.is_finite() {
            return Err(EuclideanError::OutOfRange("non-finite angle"));
        }
        // absorb floating-point dust just outside the range
        let clamped = radians.clamp(0.0, std::f64::consts::PI);
        if (radians - clamped).abs() > 1e-9 {
            return Err(EuclideanError::OutOfRange("angle outside [0, pi]"));
        }
        Ok(AngleValue { radians: clamped })
    }

    pub fn radians(&self) -> f64 {
        self.radians
    }
}

/// Result of intersecting two lines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LineMeet {
    Point(EuPoint),
    /// Distinct lines with parallel normals.
    Parallel,
    /// The same line twice.
    Coincident,
}

impl LineMeet {
    pub fn point(&self) -> Option<EuPoint> {
        match self {
            LineMeet::Point(p) => Some(*p),
            _ => None,
        }
    }

    pub fn is_coincident(&self) -> bool {
        matches!(self, LineMeet::Coincident)
    }
}

/// Zero, one, or two intersection points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Meet {
    Zero,
    One(EuPoint),
    Two(EuPoint, EuPoint),
}

impl Meet {
    pub fn count(&self) -> usize {
        match self {
            Meet::Zero => 0,
            Meet::One(_) => 1,
            Meet::Two(..) => 2,
        }
    }

    pub fn points(&self) -> Vec<EuPoint> {
        match self {
            Meet::Zero => vec![],
            Meet::One(p) => vec![*p],
            Meet::Two(p, q) => vec![*p, *q],
        }
    }
}

fn lex_pair(a: EuPoint, b: EuPoint) -> (EuPoint, EuPoint) {
    if (a.x, a.y) <= (b.x, b.y) {
        (a, b)
    } else {
        (b, a)
    }
}

/// Euclidean operations under a shared tolerance context.
#[derive(Debug, Clone, Copy, Default)]
pub struct EuclideanKernel {
    pub tol: Tolerance,
}

impl EuclideanKernel {
    pub fn new(tol: Tolerance) -> Self {
        EuclideanKernel { tol }
    }

    /// The line through two distinct points.
    pub fn line_through(&self, a: &EuPoint, b: &EuPoint) -> Result<EuLine> {
        let dir = Vec2::between(a, b);
        if dir.norm() <= self.tol.degeneracy {
            return Err(EuclideanError::DegenerateInput("coincident points"));
        }
        let mut normal = dir.perp().normalized().expect("separation checked above");
        if (normal.x, normal.y) < (-normal.x, -normal.y) {
            normal = normal.neg();
        }
        // offset from the midpoint, after the canonical flip, so swapping the
        // arguments yields a bit-identical line
        let mid = EuPoint {
            x: (a.x + b.x) / 2.0,
            y: (a.y + b.y) / 2.0,
        };
        let offset = normal.x * mid.x + normal.y * mid.y;
        Ok(EuLine { normal, offset })
    }

    /// The circle centered at `center` passing through `through`.
    pub fn circle_from(&self, center: &EuPoint, through: &EuPoint) -> Result<EuCircle> {
        let r = center.dist(through);
        if r <= self.tol.degeneracy {
            return Err(EuclideanError::DegenerateInput("circle through its center"));
        }
        EuCircle::new(*center, r)
    }

    /// Intersection of two lines; parallel and coincident pairs are
    /// distinguished in the return value.
    pub fn intersect_lines(&self, l1: &EuLine, l2: &EuLine) -> LineMeet {
        let n1 = l1.normal();
        let n2 = l2.normal();
        let det = n1.cross(&n2);
        if det.abs() <= self.tol.degeneracy {
            // same or opposite normals; compare offsets in a sign-robust way
            let aligned = n1.dot(&n2) > 0.0;
            let offset_gap = if aligned {
                (l1.offset() - l2.offset()).abs()
            } else {
                (l1.offset() + l2.offset()).abs()
            };
            if offset_gap <= self.tol.degeneracy {
                LineMeet::Coincident
            } else {
                LineMeet::Parallel
            }
        } else {
            let x = (l1.offset() * n2.y - l2.offset() * n1.y) / det;
            let y = (l2.offset() * n1.x - l1.offset() * n2.x) / det;
            LineMeet::Point(EuPoint { x, y })
        }
    }

    /// Intersection of a line and a circle; tangency yields one point.
    pub fn intersect_line_circle(&self, l: &EuLine, c: &EuCircle) -> Meet {
        let s = l.signed_distance(&c.center);
        let r = c.radius();
        let foot = l.project(&c.center);
        if (s.abs() - r).abs() <= self.tol.degeneracy {
            return Meet::One(foot);
        }
        if s.abs() > r {
            return Meet::Zero;
        }
        let h = (r * r - s * s).sqrt();
        let t = l.direction();
        let (p, q) = lex_pair(foot.offset(&t, -h), foot.offset(&t, h));
        Meet::Two(p, q)
    }

    /// Intersection of two distinct circles.
    pub fn intersect_circles(&self, c1: &EuCircle, c2: &EuCircle) -> Result<Meet> {
        let d = c1.center.dist(&c2.center);
        let (r1, r2) = (c1.radius(), c2.radius());
        if d <= self.tol.degeneracy && (r1 - r2).abs() <= self.tol.degeneracy {
            return Err(EuclideanError::CoincidentCircles);
        }
        if d <= self.tol.degeneracy {
            return Ok(Meet::Zero); // concentric, different radii
        }
        let outer = d - (r1 + r2);
        let inner = (r1 - r2).abs() - d;
        let axis = Vec2::between(&c1.center, &c2.center).scaled(1.0 / d);
        let a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
        let mid = c1.center.offset(&axis, a);
        if outer.abs() <= self.tol.degeneracy || inner.abs() <= self.tol.degeneracy {
            return Ok(Meet::One(mid)); // externally or internally tangent
        }
        if outer > 0.0 || inner > 0.0 {
            return Ok(Meet::Zero);
        }
        let h2 = r1 * r1 - a * a;
        if h2 <= 0.0 {
            return Ok(Meet::One(mid));
        }
        let h = h2.sqrt();
        let t = axis.perp();
        let (p, q) = lex_pair(mid.offset(&t, -h), mid.offset(&t, h));
        Ok(Meet::Two(p, q))
    }

    /// Undirected angle at vertex `v` between the rays toward `a` and `b`.
    pub fn angle_at(&self, a: &EuPoint, v: &EuPoint, b: &EuPoint) -> Result<AngleValue> {
        let u = Vec2::between(v, a);
        let w = Vec2::between(v, b);
        if u.norm() <= self.tol.degeneracy || w.norm() <= self.tol.degeneracy {
            return Err(EuclideanError::DegenerateInput("angle ray undefined"));
        }
        AngleValue::from_radians(u.cross(&w).abs().atan2(u.dot(&w)))
    }

    fn angle_between(&self, u: &Vec2, w: &Vec2) -> AngleValue {
        AngleValue {
            radians: u.cross(w).abs().atan2(u.dot(w)),
        }
    }

    /// The pair of alternate angles cut from lines `a` and `b` by the
    /// transversal `c`.
    ///
    /// The two crossings are ordered along `c`'s canonical direction; the
    /// returned pair is (angle on the left at the first crossing, angle on
    /// the right at the second), both measured against the transversal.
    pub fn alternate_angles(
        &self,
        a: &EuLine,
        b: &EuLine,
        c: &EuLine,
    ) -> Result<(AngleValue, AngleValue)> {
        let xa = match self.intersect_lines(c, a) {
            LineMeet::Point(p) => p,
            _ => return Err(EuclideanError::NotATransversal("transversal misses a line")),
        };
        let xb = match self.intersect_lines(c, b) {
            LineMeet::Point(p) => p,
            _ => return Err(EuclideanError::NotATransversal("transversal misses a line")),
        };
        if xa.dist(&xb) <= self.tol.degeneracy {
            return Err(EuclideanError::NotATransversal(
                "crossings coincide at a single point",
            ));
        }
        let t = c.direction();
        let sa = t.x * xa.x + t.y * xa.y;
        let sb = t.x * xb.x + t.y * xb.y;
        let (first_line, second_line) = if sa <= sb { (a, b) } else { (b, a) };
        // an arm points left of c when it heads into the negative-normal half-plane
        let arm_toward = |line: &EuLine, want_positive: bool| -> Vec2 {
            let u = line.direction();
            let side = c.normal().dot(&u);
            if (side > 0.0) == want_positive {
                u
            } else {
                u.neg()
            }
        };
        let left_arm = arm_toward(first_line, false);
        let right_arm = arm_toward(second_line, true);
        let first = self.angle_between(&t.neg(), &left_arm);
        let second = self.angle_between(&t, &right_arm);
        Ok((first, second))
    }

    /// Distinct lines that never meet. Coincident lines are not parallel.
    pub fn is_parallel(&self, a: &EuLine, b: &EuLine) -> bool {
        matches!(self.intersect_lines(a, b), LineMeet::Parallel)
    }
}
