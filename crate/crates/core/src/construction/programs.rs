//! The shipped construction programs.
//!
//! `prog_copy_angle` transfers a rectilinear angle onto a base ray using only
//! circle and line intersections. `prog_parallel_i31` builds the parallel to a
//! line through an outside point by copying the alternate angle across the
//! transversal and certifies both the alternate-angle equality and the
//! parallelism. `prog_bolyai` performs the limiting-parallel construction in
//! the Klein disk: drop a perpendicular, erect a second one, project a chosen
//! base point onto it, and cut the connecting segment with a compass circle.

use super::{
    AssertionKind, ConstructionError, ConstructionProgram, ConstructionStep, Engine, Model,
    Object, ObjectKind, Scene, SidePick, StepOp, Trace,
};
use crate::euclidean::{EuLine, EuPoint};
use crate::hyperbolic::{HChord, HPoint, HRay};

type Result<T> = std::result::Result<T, ConstructionError>;

/// Copies the angle given by three points onto a base ray.
///
/// Givens: `O`, `T` (the base ray runs from `O` through `T`) and `A`, `V`,
/// `B` (the model angle at vertex `V`). The result ray leaves `O` on the left
/// of the base ray making the model angle with it.
pub fn prog_copy_angle() -> ConstructionProgram {
    let givens = vec![
        ("O".to_string(), ObjectKind::Point),
        ("T".to_string(), ObjectKind::Point),
        ("A".to_string(), ObjectKind::Point),
        ("V".to_string(), ObjectKind::Point),
        ("B".to_string(), ObjectKind::Point),
    ];
    let steps = vec![
        ConstructionStep::op(StepOp::RayThrough, &["O", "T"], &["base"]),
        ConstructionStep::op(StepOp::CircleFrom, &["V", "A"], &["circ_model"]),
        ConstructionStep::op(StepOp::RayThrough, &["V", "B"], &["arm_b"]),
        ConstructionStep::op(StepOp::IntersectRayCircle, &["arm_b", "circ_model"], &["E"]),
        ConstructionStep::op(StepOp::CircleCarry, &["O", "V", "A"], &["circ_base"]),
        ConstructionStep::op(StepOp::IntersectRayCircle, &["base", "circ_base"], &["D"]),
        ConstructionStep::op(StepOp::CircleCarry, &["D", "A", "E"], &["circ_span"]),
        ConstructionStep::op(
            StepOp::IntersectCircles(SidePick::Left),
            &["circ_base", "circ_span"],
            &["E2"],
        ),
        ConstructionStep::op(StepOp::RayThrough, &["O", "E2"], &["result"]),
        ConstructionStep::check(AssertionKind::AnglesEqual, &["D", "O", "E2", "A", "V", "B"]),
    ];
    ConstructionProgram::new("copy_angle", givens, steps, "result").expect("valid program")
}

/// Builds the parallel to line `b` through point `A` by copying the alternate
/// angle over the transversal through the foot of the perpendicular from `A`.
pub fn prog_parallel_i31() -> ConstructionProgram {
    let givens = vec![
        ("b".to_string(), ObjectKind::Line),
        ("A".to_string(), ObjectKind::Point),
    ];
    let steps = vec![
        ConstructionStep::check(AssertionKind::NotOnLine, &["A", "b"]),
        ConstructionStep::op(StepOp::PerpFoot, &["A", "b"], &["D"]),
        ConstructionStep::op(StepOp::LineThrough, &["A", "D"], &["c"]),
        ConstructionStep::op(StepOp::CircleFrom, &["D", "A"], &["circ_d"]),
        ConstructionStep::op(StepOp::IntersectLineCircle, &["b", "circ_d"], &["u1", "u2"]),
        ConstructionStep::op(StepOp::CircleFrom, &["A", "D"], &["circ_arm"]),
        ConstructionStep::op(StepOp::CircleCarry, &["D", "u1", "A"], &["circ_span"]),
        ConstructionStep::op(
            StepOp::IntersectCircles(SidePick::OppositeOf),
            &["circ_arm", "circ_span", "u1"],
            &["E"],
        ),
        ConstructionStep::op(StepOp::LineThrough, &["A", "E"], &["a"]),
        ConstructionStep::check(AssertionKind::AnglesEqual, &["u1", "D", "A", "D", "A", "E"]),
        ConstructionStep::check(AssertionKind::AlternateAnglesEqual, &["a", "b", "c"]),
        ConstructionStep::check(AssertionKind::Parallel, &["a", "b"]),
    ];
    ConstructionProgram::new("parallel_i31", givens, steps, "a").expect("valid program")
}

/// The limiting-parallel construction over the Klein disk.
///
/// Givens: chord `a`, point `P` off `a`, point `R` on `a` distinct from the
/// foot of the perpendicular from `P`. The sign-change hypothesis for the
/// final compass cut is asserted before solving.
pub fn prog_bolyai() -> ConstructionProgram {
    let givens = vec![
        ("a".to_string(), ObjectKind::Chord),
        ("P".to_string(), ObjectKind::HPoint),
        ("R".to_string(), ObjectKind::HPoint),
    ];
    let steps = vec![
        ConstructionStep::check(AssertionKind::OnChord, &["R", "a"]),
        ConstructionStep::check(AssertionKind::NotOnChord, &["P", "a"]),
        ConstructionStep::op(StepOp::HPerpendicular, &["P", "a"], &["pq"]),
        ConstructionStep::op(StepOp::MeetChords, &["pq", "a"], &["Q"]),
        ConstructionStep::check(AssertionKind::Distinct, &["Q", "R"]),
        ConstructionStep::op(StepOp::HPerpendicular, &["P", "pq"], &["m"]),
        ConstructionStep::op(StepOp::HPerpendicular, &["R", "m"], &["rs"]),
        ConstructionStep::op(StepOp::MeetChords, &["rs", "m"], &["S"]),
        ConstructionStep::check(AssertionKind::CircleSeparates, &["P", "Q", "R", "S", "R"]),
        ConstructionStep::op(StepOp::HCircleSegmentMeet, &["P", "Q", "R", "R", "S"], &["X"]),
        ConstructionStep::op(StepOp::HRayThrough, &["P", "X"], &["result"]),
    ];
    ConstructionProgram::new("bolyai", givens, steps, "result").expect("valid program")
}

/// All named objects of a completed limiting-parallel construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BolyaiScene {
    pub a: HChord,
    pub p: HPoint,
    pub q: HPoint,
    pub m: HChord,
    pub r: HPoint,
    pub s: HPoint,
    pub x: HPoint,
    pub result: HRay,
}

fn extract<T>(trace: &Trace, name: &str, pick: impl Fn(&Object) -> Option<T>) -> Result<T> {
    trace
        .givens
        .iter()
        .chain(trace.records.iter().flat_map(|r| r.outputs.iter()))
        .find(|(n, _)| n == name)
        .and_then(|(_, o)| pick(o))
        .ok_or_else(|| ConstructionError::UnresolvedReference {
            step: 0,
            name: name.to_string(),
        })
}

/// Runs the parallel construction on typed inputs.
///
/// A failure of the standing-off check surfaces as [`ConstructionError::PointOnLine`].
pub fn run_parallel_i31(engine: &Engine, b: &EuLine, a_pt: &EuPoint) -> Result<(EuLine, Trace)> {
    let mut scene = Scene::new(Model::Euclidean);
    scene.insert("b", Object::Line(*b))?;
    scene.insert("A", Object::Point(*a_pt))?;
    let trace = engine.run_program(&prog_parallel_i31(), &scene)?;
    if let Some((step, err)) = &trace.failure {
        if *step == 0 {
            return Err(ConstructionError::PointOnLine);
        }
        return Err(err.clone());
    }
    let line = extract(&trace, "a", |o| match o {
        Object::Line(l) => Some(*l),
        _ => None,
    })?;
    Ok((line, trace))
}

/// Runs the limiting-parallel construction on typed inputs and collects the
/// named objects of the finished scene.
///
/// `R` coinciding with the foot of the perpendicular surfaces as
/// [`ConstructionError::DegenerateScene`].
pub fn run_bolyai(engine: &Engine, a: &HChord, p: &HPoint, r: &HPoint) -> Result<(BolyaiScene, Trace)> {
    let mut scene = Scene::new(Model::Klein);
    scene.insert("a", Object::Chord(*a))?;
    scene.insert("P", Object::HPoint(*p))?;
    scene.insert("R", Object::HPoint(*r))?;
    let trace = engine.run_program(&prog_bolyai(), &scene)?;
    if let Some((_, err)) = &trace.failure {
        if let ConstructionError::AssertionFailed { assertion, .. } = err {
            if assertion.starts_with(AssertionKind::Distinct.name()) {
                return Err(ConstructionError::DegenerateScene(
                    "R coincides with the foot of the perpendicular".to_string(),
                ));
            }
        }
        return Err(err.clone());
    }
    let scene = BolyaiScene {
        a: *a,
        p: *p,
        r: *r,
        q: extract(&trace, "Q", |o| match o {
            Object::HPoint(p) => Some(*p),
            _ => None,
        })?,
        m: extract(&trace, "m", |o| match o {
            Object::Chord(c) => Some(*c),
            _ => None,
        })?,
        s: extract(&trace, "S", |o| match o {
            Object::HPoint(p) => Some(*p),
            _ => None,
        })?,
        x: extract(&trace, "X", |o| match o {
            Object::HPoint(p) => Some(*p),
            _ => None,
        })?,
        result: extract(&trace, "result", |o| match o {
            Object::HRay(r) => Some(*r),
            _ => None,
        })?,
    };
    Ok((scene, trace))
}
