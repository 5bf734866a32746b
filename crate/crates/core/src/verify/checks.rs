//! Per-proposition checks.
//!
//! Every check reports a signed margin next to its boolean outcome: the
//! distance to the decision boundary at the check's tolerance, positive on
//! the passing side. Margins make tolerance tuning evidence-based and give
//! reports a worst-case summary beyond pass/fail counts.

use super::VerifyError;
use crate::construction::{run_bolyai, BolyaiScene, Engine};
use crate::euclidean::{EuLine, EuPoint, EuclideanKernel, Vec2};
use crate::hyperbolic::{HChord, HPoint, HRay, KleinKernel};
use std::f64::consts::{FRAC_PI_2, PI};

type Result<T> = std::result::Result<T, VerifyError>;

/// Outcome of one boolean check with its signed margin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOutcome {
    pub passed: bool,
    pub margin: f64,
}

impl CheckOutcome {
    fn from_margin(margin: f64) -> Self {
        CheckOutcome {
            passed: margin > 0.0,
            margin,
        }
    }
}

/// Three lines with the transversal `c` crossing `a` and `b` at distinct
/// points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransversalScene {
    pub a: EuLine,
    pub b: EuLine,
    pub c: EuLine,
    crossing_a: EuPoint,
    crossing_b: EuPoint,
}

impl TransversalScene {
    pub fn new(kernel: &EuclideanKernel, a: EuLine, b: EuLine, c: EuLine) -> Result<Self> {
        let crossing_a = kernel
            .intersect_lines(&c, &a)
            .point()
            .ok_or(VerifyError::NotATransversal)?;
        let crossing_b = kernel
            .intersect_lines(&c, &b)
            .point()
            .ok_or(VerifyError::NotATransversal)?;
        if crossing_a.dist(&crossing_b) <= kernel.tol.degeneracy {
            return Err(VerifyError::NotATransversal);
        }
        Ok(TransversalScene {
            a,
            b,
            c,
            crossing_a,
            crossing_b,
        })
    }

    pub fn crossings(&self) -> (EuPoint, EuPoint) {
        (self.crossing_a, self.crossing_b)
    }
}

/// The parallelism criterion as a biconditional: alternate angles agree
/// within `tol` exactly when the lines are parallel.
pub fn check_alternate_angle_criterion(
    kernel: &EuclideanKernel,
    scene: &TransversalScene,
    tol: f64,
) -> Result<CheckOutcome> {
    let (first, second) = kernel
        .alternate_angles(&scene.a, &scene.b, &scene.c)
        .map_err(|_| VerifyError::NotATransversal)?;
    let gap = (first.radians() - second.radians()).abs();
    let parallel = kernel.is_parallel(&scene.a, &scene.b);
    let margin = if parallel { tol - gap } else { gap - tol };
    Ok(CheckOutcome::from_margin(margin))
}

/// Interior angle sum of the scene on the given side of `c` (`+1` is the
/// positive-normal side).
fn interior_angle_sum(scene: &TransversalScene, side: f64) -> f64 {
    let (xa, xb) = scene.crossings();
    let along = Vec2::between(&xa, &xb);
    let arm = |line: &EuLine| -> Vec2 {
        let u = line.direction();
        if scene.c.normal().dot(&u) * side > 0.0 {
            u
        } else {
            u.neg()
        }
    };
    let angle = |u: &Vec2, w: &Vec2| u.cross(w).abs().atan2(u.dot(w));
    angle(&along, &arm(&scene.a)) + angle(&along.neg(), &arm(&scene.b))
}

/// Lines cut by a transversal with interior angles summing below two right
/// angles meet on that deficient side.
pub fn check_fp_meeting_side(
    kernel: &EuclideanKernel,
    scene: &TransversalScene,
    tol: f64,
) -> Result<CheckOutcome> {
    let sum_pos = interior_angle_sum(scene, 1.0);
    let sum_neg = interior_angle_sum(scene, -1.0);
    let (deficient_side, sum) = if sum_pos < sum_neg {
        (1.0, sum_pos)
    } else {
        (-1.0, sum_neg)
    };
    if (sum - PI).abs() <= tol {
        return Err(VerifyError::Inconclusive);
    }
    if sum >= PI {
        return Err(VerifyError::PreconditionUnmet("no deficient side"));
    }
    let meet = kernel
        .intersect_lines(&scene.a, &scene.b)
        .point()
        .ok_or(VerifyError::PreconditionUnmet("lines are parallel"))?;
    let margin = scene.c.signed_distance(&meet) * deficient_side;
    Ok(CheckOutcome::from_margin(margin))
}

/// Two lines parallel to the same line are parallel to one another.
pub fn check_parallel_transitivity(
    kernel: &EuclideanKernel,
    a: &EuLine,
    b: &EuLine,
    c: &EuLine,
) -> Result<CheckOutcome> {
    if !kernel.is_parallel(a, b) || !kernel.is_parallel(c, b) {
        return Err(VerifyError::PreconditionUnmet(
            "both outer lines must be parallel to the middle one",
        ));
    }
    if a == c {
        return Err(VerifyError::PreconditionUnmet("outer lines must be distinct"));
    }
    let passed = kernel.is_parallel(a, c);
    // parallels share a canonical normal, so the offset gap is their distance
    let margin = if passed {
        (a.offset() - c.offset()).abs()
    } else {
        -1.0
    };
    Ok(CheckOutcome { passed, margin })
}

/// Angle-sum defect of a hyperbolic triangle: `pi` minus the three vertex
/// angles. Positive for every non-degenerate triangle.
pub fn check_hyperbolic_angle_sum(
    kernel: &KleinKernel,
    a: &HPoint,
    b: &HPoint,
    c: &HPoint,
) -> Result<f64> {
    let min_sep = 1e-6;
    if kernel.h_distance(a, b) <= min_sep
        || kernel.h_distance(b, c) <= min_sep
        || kernel.h_distance(a, c) <= min_sep
    {
        return Err(VerifyError::DegenerateTriangle);
    }
    let ab = Vec2::new(b.x - a.x, b.y - a.y);
    let ac = Vec2::new(c.x - a.x, c.y - a.y);
    if ab.cross(&ac).abs() <= 1e-9 {
        return Err(VerifyError::DegenerateTriangle);
    }
    let alpha = kernel.h_angle_at(b, a, c).map_err(|_| VerifyError::DegenerateTriangle)?;
    let beta = kernel.h_angle_at(a, b, c).map_err(|_| VerifyError::DegenerateTriangle)?;
    let gamma = kernel.h_angle_at(a, c, b).map_err(|_| VerifyError::DegenerateTriangle)?;
    Ok(PI - (alpha + beta + gamma))
}

/// A quadrilateral with right angles at `p`, `q`, and `s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambertScene {
    pub p: HPoint,
    pub q: HPoint,
    pub r: HPoint,
    pub s: HPoint,
}

/// The fourth angle of a Lambert quadrilateral is acute and each side
/// adjacent to it exceeds its opposite side.
pub fn check_lambert(kernel: &KleinKernel, scene: &LambertScene, tol: f64) -> Result<CheckOutcome> {
    let right = |a: &HPoint, v: &HPoint, b: &HPoint| -> Result<()> {
        let angle = kernel
            .h_angle_at(a, v, b)
            .map_err(|_| VerifyError::NotLambert("degenerate corner"))?;
        if (angle - FRAC_PI_2).abs() > tol {
            Err(VerifyError::NotLambert("corner angle is not right"))
        } else {
            Ok(())
        }
    };
    right(&scene.q, &scene.p, &scene.s)?;
    right(&scene.p, &scene.q, &scene.r)?;
    right(&scene.p, &scene.s, &scene.r)?;
    let fourth = kernel
        .h_angle_at(&scene.q, &scene.r, &scene.s)
        .map_err(|_| VerifyError::NotLambert("degenerate fourth corner"))?;
    let acute_gap = (FRAC_PI_2 - tol) - fourth;
    let qr = kernel.h_distance(&scene.q, &scene.r);
    let ps = kernel.h_distance(&scene.p, &scene.s);
    let sr = kernel.h_distance(&scene.s, &scene.r);
    let pq = kernel.h_distance(&scene.p, &scene.q);
    let side_gap_1 = qr - ps - 1e-12;
    let side_gap_2 = sr - pq - 1e-12;
    Ok(CheckOutcome::from_margin(
        acute_gap.min(side_gap_1).min(side_gap_2),
    ))
}

/// Builds the limiting-parallel scene in the hypothesis direction: the ray
/// from `p` to the ideal endpoint of `a` on `r`'s side is taken as given, and
/// `x` is where it crosses the segment from `r` to its projection on the
/// second perpendicular.
pub fn hypothesis_bolyai_scene(
    engine: &Engine,
    a: &HChord,
    p: &HPoint,
    r: &HPoint,
) -> Result<BolyaiScene> {
    let klein = &engine.klein;
    let pq = klein
        .h_perpendicular(p, a)
        .map_err(|e| VerifyError::DegenerateScene(e.to_string()))?;
    let q = klein
        .intersect_chords(&pq, a)
        .ok_or_else(|| VerifyError::DegenerateScene("perpendicular misses its chord".into()))?;
    if q.euclid_dist(r) <= 1e-9 {
        return Err(VerifyError::DegenerateScene(
            "base point coincides with the foot".into(),
        ));
    }
    let m = klein
        .h_perpendicular(p, &pq)
        .map_err(|e| VerifyError::DegenerateScene(e.to_string()))?;
    let rs = klein
        .h_perpendicular(r, &m)
        .map_err(|e| VerifyError::DegenerateScene(e.to_string()))?;
    let s = klein
        .intersect_chords(&rs, &m)
        .ok_or_else(|| VerifyError::DegenerateScene("projection misses the base chord".into()))?;
    // ideal endpoint of `a` on r's side of the foot
    let (i1, i2) = a.endpoints();
    let toward = if a.param_of(&r.to_euclidean()) > a.param_of(&q.to_euclidean()) {
        i2
    } else {
        i1
    };
    let limit = klein
        .chord_toward(p, &toward)
        .map_err(|e| VerifyError::DegenerateScene(e.to_string()))?;
    let x = klein
        .intersect_chords(&limit, &rs)
        .ok_or_else(|| VerifyError::DegenerateScene("limiting ray misses the segment".into()))?;
    // x must lie between r and s
    let span = s.euclid_dist(r);
    let along = ((x.x - r.x) * (s.x - r.x) + (x.y - r.y) * (s.y - r.y)) / (span * span);
    if !(-1e-9..=1.0 + 1e-9).contains(&along) {
        return Err(VerifyError::DegenerateScene(
            "limiting ray crosses outside the segment".into(),
        ));
    }
    Ok(BolyaiScene {
        a: *a,
        p: *p,
        q,
        m,
        r: *r,
        s,
        x,
        result: HRay::new(*p, toward),
    })
}

/// In the hypothesis direction, the segment cut by the limiting ray sits at
/// compass distance: `PX = QR` within a relative tolerance.
pub fn check_px_equals_qr(kernel: &KleinKernel, scene: &BolyaiScene, tol: f64) -> CheckOutcome {
    let px = kernel.h_distance(&scene.p, &scene.x);
    let qr = kernel.h_distance(&scene.q, &scene.r);
    let allowance = tol * qr.max(1.0);
    CheckOutcome::from_margin(allowance - (px - qr).abs())
}

/// Runs the construction and verifies the result ray is limiting parallel to
/// `a`: shared ideal endpoint within `endpoint_tol`, no interior crossing.
pub fn check_bolyai(
    engine: &Engine,
    a: &HChord,
    p: &HPoint,
    r: &HPoint,
    endpoint_tol: f64,
) -> Result<CheckOutcome> {
    let (scene, _) = run_bolyai(engine, a, p, r)
        .map_err(|e| VerifyError::DegenerateScene(e.to_string()))?;
    let (i1, i2) = a.endpoints();
    let endpoint_gap = scene
        .result
        .toward
        .euclid_dist(&i1)
        .min(scene.result.toward.euclid_dist(&i2));
    let crosses = engine
        .klein
        .chord_toward(&scene.result.origin, &scene.result.toward)
        .ok()
        .and_then(|chord| engine.klein.intersect_chords(&chord, a))
        .is_some();
    let margin = if crosses {
        -1.0
    } else {
        endpoint_tol - endpoint_gap
    };
    Ok(CheckOutcome::from_margin(margin))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::IdealPoint;
    use approx::assert_abs_diff_eq;

    fn eu() -> EuclideanKernel {
        EuclideanKernel::default()
    }

    fn hy() -> KleinKernel {
        KleinKernel::default()
    }

    fn pt(x: f64, y: f64) -> EuPoint {
        EuPoint::new(x, y).unwrap()
    }

    fn hp(x: f64, y: f64) -> HPoint {
        HPoint::new(x, y).unwrap()
    }

    fn line(p1: (f64, f64), p2: (f64, f64)) -> EuLine {
        eu().line_through(&pt(p1.0, p1.1), &pt(p2.0, p2.1)).unwrap()
    }

    #[test]
    fn alternate_angle_criterion_both_directions() {
        let k = eu();
        // parallel pair, diagonal transversal: equal angles and parallel
        let s = TransversalScene::new(
            &k,
            line((0.0, 1.0), (1.0, 1.0)),
            line((0.0, 0.0), (1.0, 0.0)),
            line((0.0, 0.0), (1.0, 1.0)),
        )
        .unwrap();
        let out = check_alternate_angle_criterion(&k, &s, 1e-9).unwrap();
        assert!(out.passed);
        // skew pair: unequal angles and not parallel, biconditional holds
        let s = TransversalScene::new(
            &k,
            line((0.0, 0.0), (1.0, 1.0)),
            line((0.0, 0.0), (1.0, 0.0)),
            line((1.0, 0.0), (1.0, 5.0)),
        )
        .unwrap();
        let out = check_alternate_angle_criterion(&k, &s, 1e-9).unwrap();
        assert!(out.passed);
    }

    #[test]
    fn fp_meeting_side_analytic_case() {
        let k = eu();
        // a: y = 1 - x/10 meets b: y = 0 at x = 10, right of c: x = 0
        let s = TransversalScene::new(
            &k,
            line((0.0, 1.0), (10.0, 0.0)),
            line((0.0, 0.0), (1.0, 0.0)),
            line((0.0, 0.0), (0.0, 1.0)),
        )
        .unwrap();
        let out = check_fp_meeting_side(&k, &s, 1e-9).unwrap();
        assert!(out.passed);
        assert_abs_diff_eq!(out.margin, 10.0, epsilon = 1e-9);
    }

    #[test]
    fn fp_parallel_is_inconclusive() {
        let k = eu();
        let s = TransversalScene::new(
            &k,
            line((0.0, 1.0), (1.0, 1.0)),
            line((0.0, 0.0), (1.0, 0.0)),
            line((0.0, 0.0), (1.0, 1.0)),
        )
        .unwrap();
        assert_eq!(
            check_fp_meeting_side(&k, &s, 1e-9).unwrap_err(),
            VerifyError::Inconclusive
        );
    }

    #[test]
    fn transitivity_cases() {
        let k = eu();
        let y0 = line((0.0, 0.0), (1.0, 0.0));
        let y1 = line((0.0, 1.0), (1.0, 1.0));
        let y2 = line((0.0, 2.0), (1.0, 2.0));
        let out = check_parallel_transitivity(&k, &y0, &y1, &y2).unwrap();
        assert!(out.passed);
        assert_abs_diff_eq!(out.margin, 2.0, epsilon = 1e-12);
        assert_eq!(
            check_parallel_transitivity(&k, &y0, &y1, &y0).unwrap_err(),
            VerifyError::PreconditionUnmet("outer lines must be distinct")
        );
    }

    #[test]
    fn triangle_defect_matches_law_of_cosines_oracle() {
        // frozen from the law-of-cosines oracle for (0,0), (0.5,0), (0,0.5)
        let defect =
            check_hyperbolic_angle_sum(&hy(), &hp(0.0, 0.0), &hp(0.5, 0.0), &hp(0.0, 0.5)).unwrap();
        assert_abs_diff_eq!(defect, 0.14334756890536536, epsilon = 1e-12);
        assert!(defect > 1e-9);
    }

    #[test]
    fn tiny_triangle_is_nearly_euclidean() {
        let s = 1e-3;
        let defect = check_hyperbolic_angle_sum(
            &hy(),
            &hp(0.0, 0.0),
            &hp(0.5 * s, 0.0),
            &hp(0.0, 0.5 * s),
        )
        .unwrap();
        assert!(defect > 0.0);
        assert!(defect < 1e-5);
    }

    #[test]
    fn degenerate_triangle_is_rejected() {
        assert_eq!(
            check_hyperbolic_angle_sum(&hy(), &hp(0.0, 0.0), &hp(0.5, 0.0), &hp(0.25, 0.0))
                .unwrap_err(),
            VerifyError::DegenerateTriangle
        );
    }

    #[test]
    fn lambert_axis_scene() {
        // frozen quadrilateral: base at the origin, feet on the axes
        let scene = LambertScene {
            p: hp(0.0, 0.0),
            q: hp(0.4, 0.0),
            r: hp(0.4, 0.3),
            s: hp(0.0, 0.3),
        };
        let k = hy();
        let out = check_lambert(&k, &scene, 1e-9).unwrap();
        assert!(out.passed);
        // frozen side lengths from the arccosh oracle
        assert_abs_diff_eq!(
            k.h_distance(&scene.p, &scene.q),
            0.42364893019360184,
            epsilon = 1e-13
        );
        assert_abs_diff_eq!(
            k.h_distance(&scene.q, &scene.r),
            0.3398313641010904,
            epsilon = 1e-13
        );
        assert_abs_diff_eq!(
            k.h_distance(&scene.s, &scene.r),
            0.44685930676611195,
            epsilon = 1e-13
        );
        // frozen fourth angle from the law-of-cosines oracle
        let fourth = k.h_angle_at(&scene.q, &scene.r, &scene.s).unwrap();
        assert_abs_diff_eq!(fourth, 1.4331089941974484, epsilon = 1e-12);
    }

    #[test]
    fn lambert_rejects_bent_corner() {
        let scene = LambertScene {
            p: hp(0.0, 0.0),
            q: hp(0.4, 0.0),
            r: hp(0.4, 0.3),
            s: hp(0.1, 0.3), // not the foot of a perpendicular
        };
        assert!(matches!(
            check_lambert(&hy(), &scene, 1e-9),
            Err(VerifyError::NotLambert(_))
        ));
    }

    fn diameter_givens() -> (HChord, HPoint, HPoint) {
        let a = HChord::new(
            IdealPoint::new(-1.0, 0.0).unwrap(),
            IdealPoint::new(1.0, 0.0).unwrap(),
        )
        .unwrap();
        (a, hp(0.0, 0.5), hp(0.6, 0.0))
    }

    #[test]
    fn px_equals_qr_on_diameter_scene() {
        let engine = Engine::default();
        let (a, p, r) = diameter_givens();
        let scene = hypothesis_bolyai_scene(&engine, &a, &p, &r).unwrap();
        // frozen: hypothesis crossing at (9/17, 4/17)
        assert_abs_diff_eq!(scene.x.x, 9.0 / 17.0, epsilon = 1e-12);
        assert_abs_diff_eq!(scene.x.y, 4.0 / 17.0, epsilon = 1e-12);
        let out = check_px_equals_qr(&engine.klein, &scene, 1e-7);
        assert!(out.passed);
        assert_eq!(
            hypothesis_bolyai_scene(&engine, &a, &p, &hp(0.0, 0.0)).unwrap_err(),
            VerifyError::DegenerateScene("base point coincides with the foot".into())
        );
    }

    #[test]
    fn bolyai_check_on_diameter_scene() {
        let engine = Engine::default();
        let (a, p, r) = diameter_givens();
        let out = check_bolyai(&engine, &a, &p, &r, 1e-6).unwrap();
        assert!(out.passed);
    }
}
