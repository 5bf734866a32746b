//! Independent oracles for the acceptance suite.
//!
//! Nothing here goes through the library's cross-ratio or metric-tensor
//! paths: distances use the arccosh form, Poincaré-model quantities use
//! Möbius gyrovector arithmetic, and angles can be recovered from side
//! lengths alone via the law of cosines.

use postulatum_core::hyperbolic::HPoint;

/// `cosh d = (1 - a.b) / sqrt((1 - |a|^2)(1 - |b|^2))` on the Klein disk.
pub fn arccosh_distance(a: &HPoint, b: &HPoint) -> f64 {
    let dot = a.x * b.x + a.y * b.y;
    let na = 1.0 - (a.x * a.x + a.y * a.y);
    let nb = 1.0 - (b.x * b.x + b.y * b.y);
    let arg = ((1.0 - dot) / (na * nb).sqrt()).max(1.0);
    arg.acosh()
}

/// Möbius addition on the Poincaré disk.
pub fn mobius_add(x: (f64, f64), y: (f64, f64)) -> (f64, f64) {
    let xy = x.0 * y.0 + x.1 * y.1;
    let nx = x.0 * x.0 + x.1 * x.1;
    let ny = y.0 * y.0 + y.1 * y.1;
    let den = 1.0 + 2.0 * xy + nx * ny;
    let cx = (1.0 + 2.0 * xy + ny) / den;
    let cy = (1.0 - nx) / den;
    (cx * x.0 + cy * y.0, cx * x.1 + cy * y.1)
}

/// Geodesic distance on the Poincaré disk via the gyrodistance.
pub fn poincare_distance(u: (f64, f64), v: (f64, f64)) -> f64 {
    let w = mobius_add((-u.0, -u.1), v);
    2.0 * (w.0.hypot(w.1)).atanh()
}

/// Angle between the geodesics from `v` toward `a` and `b` on the Poincaré
/// disk: the model is conformal, so this is the Euclidean angle between the
/// gyro-translated directions.
pub fn poincare_angle(v: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let wa = mobius_add((-v.0, -v.1), a);
    let wb = mobius_add((-v.0, -v.1), b);
    let dot = wa.0 * wb.0 + wa.1 * wb.1;
    let cos = dot / (wa.0.hypot(wa.1) * wb.0.hypot(wb.1));
    cos.clamp(-1.0, 1.0).acos()
}

/// Vertex angle from the three side lengths via the hyperbolic law of
/// cosines: the angle between the sides of lengths `adj1` and `adj2`.
pub fn law_of_cosines_angle(adj1: f64, adj2: f64, opposite: f64) -> f64 {
    let cos = (adj1.cosh() * adj2.cosh() - opposite.cosh()) / (adj1.sinh() * adj2.sinh());
    cos.clamp(-1.0, 1.0).acos()
}

/// Runs one acceptance criterion, printing a single pass/fail line.
pub fn criterion(label: &str, body: impl FnOnce() + std::panic::UnwindSafe) {
    match std::panic::catch_unwind(body) {
        Ok(()) => println!("{label}: PASS"),
        Err(cause) => {
            println!("{label}: FAIL");
            std::panic::resume_unwind(cause);
        }
    }
}
