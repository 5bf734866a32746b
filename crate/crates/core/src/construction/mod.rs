//! An interpreter for straightedge-and-compass construction programs.
//!
//! A program is an ordered list of primitive steps over named scene objects.
//! Step inputs must refer to givens or to outputs of earlier steps; this is
//! checked when the program is built, so a well-formed program has no
//! constructive gaps. Executing a program yields a [`Trace`] that records the
//! value of every input and output per step together with every assertion
//! outcome, making a run self-certifying and replayable.

mod programs;
mod scene_text;

pub use programs::{prog_bolyai, prog_copy_angle, prog_parallel_i31, run_bolyai, run_parallel_i31, BolyaiScene};
pub use scene_text::{parse_scene, render_scene};

use crate::euclidean::{EuCircle, EuLine, EuPoint, EuRay, EuSegment, EuclideanKernel, LineMeet, Meet, Vec2};
use crate::hyperbolic::{HChord, HPoint, HRay, HSegment, KleinKernel};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Tolerance for in-program assertions.
pub const ASSERT_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstructionError {
    #[error("step {step}: unresolved reference to '{name}'")]
    UnresolvedReference { step: usize, name: String },
    #[error("'{name}' has kind {found}, expected {expected}")]
    KindMismatch {
        name: String,
        expected: ObjectKind,
        found: ObjectKind,
    },
    #[error("step {step} ({op}) failed: {reason}")]
    StepFailed {
        step: usize,
        op: String,
        reason: String,
    },
    #[error("step {step}: assertion failed: {assertion}")]
    AssertionFailed { step: usize, assertion: String },
    #[error("point lies on the given line")]
    PointOnLine,
    #[error("degenerate scene: {0}")]
    DegenerateScene(String),
    #[error("invalid program: {0}")]
    InvalidProgram(String),
    #[error("duplicate scene name '{0}'")]
    DuplicateName(String),
    #[error("line {line}: {reason}")]
    SceneParse { line: usize, reason: String },
}

type Result<T> = std::result::Result<T, ConstructionError>;

/// Which plane model a scene lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Euclidean,
    Klein,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::Euclidean => write!(f, "euclidean"),
            Model::Klein => write!(f, "klein"),
        }
    }
}

/// A named geometric object.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Object {
    Point(EuPoint),
    Line(EuLine),
    Ray(EuRay),
    Segment(EuSegment),
    Circle(EuCircle),
    HPoint(HPoint),
    Chord(HChord),
    HRay(HRay),
    HSegment(HSegment),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjectKind {
    Point,
    Line,
    Ray,
    Segment,
    Circle,
    HPoint,
    Chord,
    HRay,
    HSegment,
}

impl fmt::Display for ObjectKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ObjectKind::Point => "point",
            ObjectKind::Line => "line",
            ObjectKind::Ray => "ray",
            ObjectKind::Segment => "segment",
            ObjectKind::Circle => "circle",
            ObjectKind::HPoint => "hpoint",
            ObjectKind::Chord => "chord",
            ObjectKind::HRay => "hray",
            ObjectKind::HSegment => "hsegment",
        };
        write!(f, "{s}")
    }
}

impl Object {
    pub fn kind(&self) -> ObjectKind {
        match self {
            Object::Point(_) => ObjectKind::Point,
            Object::Line(_) => ObjectKind::Line,
            Object::Ray(_) => ObjectKind::Ray,
            Object::Segment(_) => ObjectKind::Segment,
            Object::Circle(_) => ObjectKind::Circle,
            Object::HPoint(_) => ObjectKind::HPoint,
            Object::Chord(_) => ObjectKind::Chord,
            Object::HRay(_) => ObjectKind::HRay,
            Object::HSegment(_) => ObjectKind::HSegment,
        }
    }

    pub fn model(&self) -> Model {
        match self {
            Object::Point(_) | Object::Line(_) | Object::Ray(_) | Object::Segment(_) | Object::Circle(_) => {
                Model::Euclidean
            }
            _ => Model::Klein,
        }
    }
}

impl fmt::Display for Object {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Object::Point(p) => write!(f, "point({}, {})", p.x, p.y),
            Object::Line(l) => {
                let n = l.normal();
                write!(f, "line({}, {}, {})", n.x, n.y, l.offset())
            }
            Object::Ray(r) => write!(
                f,
                "ray(({}, {}) -> ({}, {}))",
                r.origin.x,
                r.origin.y,
                r.direction().x,
                r.direction().y
            ),
            Object::Segment(s) => write!(
                f,
                "segment(({}, {}) - ({}, {}))",
                s.start.x, s.start.y, s.end.x, s.end.y
            ),
            Object::Circle(c) => write!(f, "circle(({}, {}), {})", c.center.x, c.center.y, c.radius()),
            Object::HPoint(p) => write!(f, "hpoint({}, {})", p.x, p.y),
            Object::Chord(c) => {
                let (i1, i2) = c.endpoints();
                write!(f, "chord(({}, {}), ({}, {}))", i1.x, i1.y, i2.x, i2.y)
            }
            Object::HRay(r) => write!(
                f,
                "hray(({}, {}) -> ({}, {}))",
                r.origin.x, r.origin.y, r.toward.x, r.toward.y
            ),
            Object::HSegment(s) => write!(
                f,
                "hsegment(({}, {}) - ({}, {}))",
                s.start.x, s.start.y, s.end.x, s.end.y
            ),
        }
    }
}

/// Named objects of one model.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    model: Model,
    objects: BTreeMap<String, Object>,
}

impl Scene {
    pub fn new(model: Model) -> Self {
        Scene {
            model,
            objects: BTreeMap::new(),
        }
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn insert(&mut self, name: impl Into<String>, object: Object) -> Result<()> {
        let name = name.into();
        if object.model() != self.model {
            return Err(ConstructionError::KindMismatch {
                name,
                expected: if self.model == Model::Euclidean {
                    ObjectKind::Point
                } else {
                    ObjectKind::HPoint
                },
                found: object.kind(),
            });
        }
        if self.objects.contains_key(&name) {
            return Err(ConstructionError::DuplicateName(name));
        }
        self.objects.insert(name, object);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Object> {
        self.objects.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Object)> {
        self.objects.iter()
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }
}

/// Which of two symmetric circle intersections a step selects, relative to
/// the directed line between the circle centers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SidePick {
    /// The candidate on the left of the center line.
    Left,
    /// The candidate on the opposite side from a reference point, supplied as
    /// an extra trailing input.
    OppositeOf,
}

/// Primitive step vocabulary; exactly what the shipped programs need.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepOp {
    /// `[point, point] -> [line]`
    LineThrough,
    /// `[point, point] -> [ray]` (origin, toward)
    RayThrough,
    /// `[center, through] -> [circle]`
    CircleFrom,
    /// `[center, from, to] -> [circle]` with radius `|from - to|`
    CircleCarry,
    /// `[line, line] -> [point]`
    IntersectLines,
    /// `[ray, circle] -> [point]`, the first hit along the ray
    IntersectRayCircle,
    /// `[line, circle] -> [point, point]` in canonical order
    IntersectLineCircle,
    /// `[circle, circle(, ref)] -> [point]`
    IntersectCircles(SidePick),
    /// `[point, line] -> [point]`, foot of the Euclidean perpendicular
    PerpFoot,
    /// `[hpoint, hpoint] -> [chord]`
    HLineThrough,
    /// `[hpoint, chord] -> [chord]`
    HPerpendicular,
    /// `[chord, chord] -> [hpoint]`
    MeetChords,
    /// `[hpoint, hpoint] -> [hray]` toward the ideal endpoint beyond the second point
    HRayThrough,
    /// `[center, rad_from, rad_to, seg_start, seg_end] -> [hpoint]`
    HCircleSegmentMeet,
    /// no outputs; carries an assertion
    Check,
}

impl StepOp {
    pub fn name(&self) -> &'static str {
        match self {
            StepOp::LineThrough => "line_through",
            StepOp::RayThrough => "ray_through",
            StepOp::CircleFrom => "circle_from",
            StepOp::CircleCarry => "circle_carry",
            StepOp::IntersectLines => "intersect_lines",
            StepOp::IntersectRayCircle => "intersect_ray_circle",
            StepOp::IntersectLineCircle => "intersect_line_circle",
            StepOp::IntersectCircles(_) => "intersect_circles",
            StepOp::PerpFoot => "perp_foot",
            StepOp::HLineThrough => "h_line_through",
            StepOp::HPerpendicular => "h_perpendicular",
            StepOp::MeetChords => "meet_chords",
            StepOp::HRayThrough => "h_ray_through",
            StepOp::HCircleSegmentMeet => "h_circle_segment_meet",
            StepOp::Check => "check",
        }
    }

    fn arity(&self) -> (usize, usize) {
        match self {
            StepOp::LineThrough => (2, 1),
            StepOp::RayThrough => (2, 1),
            StepOp::CircleFrom => (2, 1),
            StepOp::CircleCarry => (3, 1),
            StepOp::IntersectLines => (2, 1),
            StepOp::IntersectRayCircle => (2, 1),
            StepOp::IntersectLineCircle => (2, 2),
            StepOp::IntersectCircles(SidePick::Left) => (2, 1),
            StepOp::IntersectCircles(SidePick::OppositeOf) => (3, 1),
            StepOp::PerpFoot => (2, 1),
            StepOp::HLineThrough => (2, 1),
            StepOp::HPerpendicular => (2, 1),
            StepOp::MeetChords => (2, 1),
            StepOp::HRayThrough => (2, 1),
            StepOp::HCircleSegmentMeet => (5, 1),
            StepOp::Check => (0, 0),
        }
    }
}

/// Assertion predicates available inside programs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssertionKind {
    /// `[a, b]`: points separated by more than the assertion tolerance
    Distinct,
    /// `[point, line]`
    NotOnLine,
    /// `[hpoint, chord]`
    OnChord,
    /// `[hpoint, chord]`
    NotOnChord,
    /// `[a, v, b, a2, v2, b2]`: two Euclidean angles agree
    AnglesEqual,
    /// `[a, b, c]`: alternate angles cut by transversal `c` agree
    AlternateAnglesEqual,
    /// `[a, b]`: lines are parallel
    Parallel,
    /// `[center, rad_from, rad_to, inside, outside]`: the circle of radius
    /// `d(rad_from, rad_to)` around `center` strictly separates the two points
    CircleSeparates,
}

impl AssertionKind {
    pub fn name(&self) -> &'static str {
        match self {
            AssertionKind::Distinct => "distinct",
            AssertionKind::NotOnLine => "not_on_line",
            AssertionKind::OnChord => "on_chord",
            AssertionKind::NotOnChord => "not_on_chord",
            AssertionKind::AnglesEqual => "angles_equal",
            AssertionKind::AlternateAnglesEqual => "alternate_angles_equal",
            AssertionKind::Parallel => "parallel",
            AssertionKind::CircleSeparates => "circle_separates",
        }
    }

    fn arity(&self) -> usize {
        match self {
            AssertionKind::Distinct | AssertionKind::NotOnLine | AssertionKind::Parallel => 2,
            AssertionKind::OnChord | AssertionKind::NotOnChord => 2,
            AssertionKind::AlternateAnglesEqual => 3,
            AssertionKind::CircleSeparates => 5,
            AssertionKind::AnglesEqual => 6,
        }
    }
}

/// A named predicate over scene objects, evaluated as part of a step.
#[derive(Debug, Clone, PartialEq)]
pub struct Assertion {
    pub kind: AssertionKind,
    pub args: Vec<String>,
}

impl Assertion {
    pub fn new(kind: AssertionKind, args: &[&str]) -> Self {
        Assertion {
            kind,
            args: args.iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl fmt::Display for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.kind.name(), self.args.join(", "))
    }
}

/// One primitive step of a program.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstructionStep {
    pub op: StepOp,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub assertion: Option<Assertion>,
}

impl ConstructionStep {
    pub fn op(op: StepOp, inputs: &[&str], outputs: &[&str]) -> Self {
        ConstructionStep {
            op,
            inputs: inputs.iter().map(|s| s.to_string()).collect(),
            outputs: outputs.iter().map(|s| s.to_string()).collect(),
            assertion: None,
        }
    }

    pub fn check(kind: AssertionKind, args: &[&str]) -> Self {
        ConstructionStep {
            op: StepOp::Check,
            inputs: vec![],
            outputs: vec![],
            assertion: Some(Assertion::new(kind, args)),
        }
    }
}

/// An ordered, referentially valid list of steps with declared givens.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstructionProgram {
    name: String,
    givens: Vec<(String, ObjectKind)>,
    steps: Vec<ConstructionStep>,
    result: String,
}

impl ConstructionProgram {
    /// Validates that every step input (and assertion argument) refers to a
    /// given or an earlier output, that names are not redefined, and that the
    /// designated result exists.
    pub fn new(
        name: impl Into<String>,
        givens: Vec<(String, ObjectKind)>,
        steps: Vec<ConstructionStep>,
        result: impl Into<String>,
    ) -> Result<Self> {
        let name = name.into();
        let result = result.into();
        let mut defined: Vec<String> = Vec::new();
        for (g, _) in &givens {
            if defined.contains(g) {
                return Err(ConstructionError::InvalidProgram(format!(
                    "given '{g}' declared twice"
                )));
            }
            defined.push(g.clone());
        }
        for (idx, step) in steps.iter().enumerate() {
            let (n_in, n_out) = step.op.arity();
            if step.inputs.len() != n_in || step.outputs.len() != n_out {
                return Err(ConstructionError::InvalidProgram(format!(
                    "step {} ({}) has arity {}→{}, expected {}→{}",
                    idx + 1,
                    step.op.name(),
                    step.inputs.len(),
                    step.outputs.len(),
                    n_in,
                    n_out
                )));
            }
            for input in &step.inputs {
                if !defined.contains(input) {
                    return Err(ConstructionError::InvalidProgram(format!(
                        "step {} reads '{}' before it is constructed",
                        idx + 1,
                        input
                    )));
                }
            }
            if let Some(assertion) = &step.assertion {
                if assertion.args.len() != assertion.kind.arity() {
                    return Err(ConstructionError::InvalidProgram(format!(
                        "step {} assertion {} has {} arguments, expected {}",
                        idx + 1,
                        assertion.kind.name(),
                        assertion.args.len(),
                        assertion.kind.arity()
                    )));
                }
                for arg in &assertion.args {
                    if !defined.contains(arg) {
                        return Err(ConstructionError::InvalidProgram(format!(
                            "step {} asserts over '{}' before it is constructed",
                            idx + 1,
                            arg
                        )));
                    }
                }
            }
            for output in &step.outputs {
                if defined.contains(output) {
                    return Err(ConstructionError::InvalidProgram(format!(
                        "step {} redefines '{}'",
                        idx + 1,
                        output
                    )));
                }
                defined.push(output.clone());
            }
        }
        if !steps.is_empty() && !defined.contains(&result) {
            return Err(ConstructionError::InvalidProgram(format!(
                "result '{result}' is never constructed"
            )));
        }
        Ok(ConstructionProgram {
            name,
            givens,
            steps,
            result,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn givens(&self) -> &[(String, ObjectKind)] {
        &self.givens
    }

    pub fn steps(&self) -> &[ConstructionStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn result_name(&self) -> &str {
        &self.result
    }
}

/// Outcome of one assertion inside a trace.
#[derive(Debug, Clone, PartialEq)]
pub struct AssertionOutcome {
    pub assertion: Assertion,
    pub passed: bool,
    /// Signed distance to the decision boundary; positive passes.
    pub margin: f64,
}

/// Everything one executed step touched.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub index: usize,
    pub op: StepOp,
    pub inputs: Vec<(String, Object)>,
    pub outputs: Vec<(String, Object)>,
    pub assertion: Option<AssertionOutcome>,
}

/// Replayable record of one program execution.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub program: String,
    pub givens: Vec<(String, Object)>,
    pub records: Vec<StepRecord>,
    pub result: Option<(String, Object)>,
    pub failure: Option<(usize, ConstructionError)>,
}

impl Trace {
    pub fn succeeded(&self) -> bool {
        self.failure.is_none()
    }

    /// Number of steps actually executed.
    pub fn step_count(&self) -> usize {
        self.records.len()
    }

    /// Deterministic plain-text rendering.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("program: {}\n", self.program));
        for (name, obj) in &self.givens {
            out.push_str(&format!("given {name} = {obj}\n"));
        }
        for rec in &self.records {
            out.push_str(&format!("step {}: {}", rec.index + 1, rec.op.name()));
            if !rec.inputs.is_empty() {
                let names: Vec<&str> = rec.inputs.iter().map(|(n, _)| n.as_str()).collect();
                out.push_str(&format!(" {}", names.join(" ")));
            }
            out.push('\n');
            for (name, obj) in &rec.outputs {
                out.push_str(&format!("  {name} = {obj}\n"));
            }
            if let Some(outcome) = &rec.assertion {
                out.push_str(&format!(
                    "  assert {}: {} (margin {})\n",
                    outcome.assertion,
                    if outcome.passed { "pass" } else { "fail" },
                    outcome.margin
                ));
            }
        }
        match (&self.failure, &self.result) {
            (Some((step, err)), _) => {
                out.push_str(&format!("status: failed at step {}: {err}\n", step + 1));
            }
            (None, Some((name, obj))) => {
                out.push_str(&format!("result: {name} = {obj}\n"));
                out.push_str("status: ok\n");
            }
            (None, None) => out.push_str("status: ok\n"),
        }
        out
    }
}

/// Executes programs against scenes with a fixed pair of kernels.
#[derive(Debug, Clone, Copy, Default)]
pub struct Engine {
    pub euclidean: EuclideanKernel,
    pub klein: KleinKernel,
}

impl Engine {
    /// Runs `program` against `givens`. Structural errors (missing or
    /// mis-kinded givens) are returned as `Err`; runtime failures (a failed
    /// assertion or a kernel error inside a step) halt execution and are
    /// recorded in the returned trace.
    pub fn run_program(&self, program: &ConstructionProgram, givens: &Scene) -> Result<Trace> {
        let mut env: BTreeMap<String, Object> = BTreeMap::new();
        let mut given_values = Vec::new();
        for (name, kind) in program.givens() {
            let obj = givens
                .get(name)
                .ok_or_else(|| ConstructionError::UnresolvedReference {
                    step: 0,
                    name: name.clone(),
                })?;
            if obj.kind() != *kind {
                return Err(ConstructionError::KindMismatch {
                    name: name.clone(),
                    expected: *kind,
                    found: obj.kind(),
                });
            }
            env.insert(name.clone(), *obj);
            given_values.push((name.clone(), *obj));
        }

        let mut trace = Trace {
            program: program.name().to_string(),
            givens: given_values,
            records: Vec::new(),
            result: None,
            failure: None,
        };

        for (idx, step) in program.steps().iter().enumerate() {
            let inputs: Vec<(String, Object)> = step
                .inputs
                .iter()
                .map(|n| (n.clone(), env[n.as_str()]))
                .collect();
            let values: Vec<Object> = inputs.iter().map(|(_, o)| *o).collect();
            let mut record = StepRecord {
                index: idx,
                op: step.op,
                inputs,
                outputs: Vec::new(),
                assertion: None,
            };
            match self.eval_step(step.op, &values) {
                Ok(outputs) => {
                    for (name, value) in step.outputs.iter().zip(outputs) {
                        env.insert(name.clone(), value);
                        record.outputs.push((name.clone(), value));
                    }
                }
                Err(reason) => {
                    record.assertion = None;
                    trace.records.push(record);
                    trace.failure = Some((
                        idx,
                        ConstructionError::StepFailed {
                            step: idx + 1,
                            op: step.op.name().to_string(),
                            reason,
                        },
                    ));
                    return Ok(trace);
                }
            }
            if let Some(assertion) = &step.assertion {
                let outcome = self.eval_assertion(assertion, &env);
                let passed = outcome.passed;
                record.assertion = Some(outcome);
                if !passed {
                    trace.records.push(record);
                    trace.failure = Some((
                        idx,
                        ConstructionError::AssertionFailed {
                            step: idx + 1,
                            assertion: assertion.to_string(),
                        },
                    ));
                    return Ok(trace);
                }
            }
            trace.records.push(record);
        }
        if !program.is_empty() {
            let name = program.result_name().to_string();
            let value = env[name.as_str()];
            trace.result = Some((name, value));
        }
        Ok(trace)
    }

    /// Re-executes every recorded step from its recorded inputs and compares
    /// the outputs bit-for-bit.
    pub fn replay_matches(&self, trace: &Trace) -> bool {
        for rec in &trace.records {
            let values: Vec<Object> = rec.inputs.iter().map(|(_, o)| *o).collect();
            match self.eval_step(rec.op, &values) {
                Ok(outputs) => {
                    if outputs.len() != rec.outputs.len() {
                        return false;
                    }
                    for ((_, recorded), replayed) in rec.outputs.iter().zip(outputs) {
                        if *recorded != replayed {
                            return false;
                        }
                    }
                }
                Err(_) => {
                    // a recorded failing step has no outputs to compare
                    if !rec.outputs.is_empty() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Pure evaluation of one step; errors are rendered as reasons.
    fn eval_step(&self, op: StepOp, inputs: &[Object]) -> std::result::Result<Vec<Object>, String> {
        use Object::*;
        let eu = &self.euclidean;
        let hy = &self.klein;
        let want = |o: &Object, k: ObjectKind| -> std::result::Result<(), String> {
            if o.kind() == k {
                Ok(())
            } else {
                Err(format!("expected {k}, found {}", o.kind()))
            }
        };
        match op {
            StepOp::LineThrough => {
                let (Point(a), Point(b)) = (&inputs[0], &inputs[1]) else {
                    return Err("expected two points".into());
                };
                Ok(vec![Line(eu.line_through(a, b).map_err(|e| e.to_string())?)])
            }
            StepOp::RayThrough => {
                let (Point(a), Point(b)) = (&inputs[0], &inputs[1]) else {
                    return Err("expected two points".into());
                };
                Ok(vec![Ray(EuRay::through(*a, *b).map_err(|e| e.to_string())?)])
            }
            StepOp::CircleFrom => {
                let (Point(c), Point(t)) = (&inputs[0], &inputs[1]) else {
                    return Err("expected two points".into());
                };
                Ok(vec![Circle(eu.circle_from(c, t).map_err(|e| e.to_string())?)])
            }
            StepOp::CircleCarry => {
                let (Point(c), Point(from), Point(to)) = (&inputs[0], &inputs[1], &inputs[2]) else {
                    return Err("expected three points".into());
                };
                let circle = EuCircle::new(*c, from.dist(to)).map_err(|e| e.to_string())?;
                Ok(vec![Circle(circle)])
            }
            StepOp::IntersectLines => {
                let (Line(a), Line(b)) = (&inputs[0], &inputs[1]) else {
                    return Err("expected two lines".into());
                };
                match eu.intersect_lines(a, b) {
                    LineMeet::Point(p) => Ok(vec![Point(p)]),
                    LineMeet::Parallel => Err("lines are parallel".into()),
                    LineMeet::Coincident => Err("lines are coincident".into()),
                }
            }
            StepOp::IntersectRayCircle => {
                let (Ray(r), Circle(c)) = (&inputs[0], &inputs[1]) else {
                    return Err("expected a ray and a circle".into());
                };
                let d = r.direction();
                let oc = Vec2::between(&c.center, &r.origin);
                let b = d.dot(&oc);
                let q = oc.dot(&oc) - c.radius() * c.radius();
                let disc = b * b - q;
                if disc < 0.0 {
                    return Err("ray misses the circle".into());
                }
                let root = disc.sqrt();
                let t = [-b - root, -b + root]
                    .into_iter()
                    .find(|t| *t > eu.tol.degeneracy)
                    .ok_or_else(|| "circle is behind the ray".to_string())?;
                Ok(vec![Point(r.point_at(t))])
            }
            StepOp::IntersectLineCircle => {
                let (Line(l), Circle(c)) = (&inputs[0], &inputs[1]) else {
                    return Err("expected a line and a circle".into());
                };
                match eu.intersect_line_circle(l, c) {
                    Meet::Two(p, q) => Ok(vec![Point(p), Point(q)]),
                    Meet::One(_) => Err("line is tangent, two crossings required".into()),
                    Meet::Zero => Err("line misses the circle".into()),
                }
            }
            StepOp::IntersectCircles(pick) => {
                let (Circle(c1), Circle(c2)) = (&inputs[0], &inputs[1]) else {
                    return Err("expected two circles".into());
                };
                let axis = Vec2::between(&c1.center, &c2.center);
                let side = |p: &EuPoint| axis.cross(&Vec2::between(&c1.center, p));
                let candidates = eu.intersect_circles(c1, c2).map_err(|e| e.to_string())?;
                match candidates {
                    Meet::Zero => Err("circles do not meet".into()),
                    Meet::One(p) => Ok(vec![Point(p)]),
                    Meet::Two(p, q) => {
                        let chosen = match pick {
                            SidePick::Left => {
                                if side(&p) > 0.0 {
                                    p
                                } else {
                                    q
                                }
                            }
                            SidePick::OppositeOf => {
                                let Point(reference) = &inputs[2] else {
                                    return Err("expected a reference point".into());
                                };
                                let ref_side = side(reference);
                                if side(&p) * ref_side < 0.0 {
                                    p
                                } else {
                                    q
                                }
                            }
                        };
                        Ok(vec![Point(chosen)])
                    }
                }
            }
            StepOp::PerpFoot => {
                let (Point(p), Line(l)) = (&inputs[0], &inputs[1]) else {
                    return Err("expected a point and a line".into());
                };
                Ok(vec![Point(l.project(p))])
            }
            StepOp::HLineThrough => {
                let (HPoint(a), HPoint(b)) = (&inputs[0], &inputs[1]) else {
                    return Err("expected two interior points".into());
                };
                Ok(vec![Chord(hy.h_line_through(a, b).map_err(|e| e.to_string())?)])
            }
            StepOp::HPerpendicular => {
                let (HPoint(p), Chord(c)) = (&inputs[0], &inputs[1]) else {
                    return Err("expected a point and a chord".into());
                };
                Ok(vec![Chord(hy.h_perpendicular(p, c).map_err(|e| e.to_string())?)])
            }
            StepOp::MeetChords => {
                let (Chord(a), Chord(b)) = (&inputs[0], &inputs[1]) else {
                    return Err("expected two chords".into());
                };
                match hy.intersect_chords(a, b) {
                    Some(p) => Ok(vec![HPoint(p)]),
                    None => Err("chords do not meet in the interior".into()),
                }
            }
            StepOp::HRayThrough => {
                let (HPoint(a), HPoint(x)) = (&inputs[0], &inputs[1]) else {
                    return Err("expected two interior points".into());
                };
                let chord = hy.h_line_through(a, x).map_err(|e| e.to_string())?;
                let (i1, i2) = chord.endpoints();
                let dir = Vec2::new(x.x - a.x, x.y - a.y);
                let toward = if dir.dot(&Vec2::new(i1.x - a.x, i1.y - a.y)) > 0.0 {
                    i1
                } else {
                    i2
                };
                Ok(vec![HRay(crate::hyperbolic::HRay::new(*a, toward))])
            }
            StepOp::HCircleSegmentMeet => {
                for (i, kind) in [
                    ObjectKind::HPoint,
                    ObjectKind::HPoint,
                    ObjectKind::HPoint,
                    ObjectKind::HPoint,
                    ObjectKind::HPoint,
                ]
                .iter()
                .enumerate()
                {
                    want(&inputs[i], *kind)?;
                }
                let (HPoint(center), HPoint(rf), HPoint(rt), HPoint(s0), HPoint(s1)) =
                    (&inputs[0], &inputs[1], &inputs[2], &inputs[3], &inputs[4])
                else {
                    unreachable!("kinds checked above")
                };
                let radius = hy.h_distance(rf, rt);
                let seg =
                    crate::hyperbolic::HSegment::new(*s0, *s1).map_err(|e| e.to_string())?;
                let x = hy
                    .solve_circle_segment(center, radius, &seg)
                    .map_err(|e| e.to_string())?;
                Ok(vec![HPoint(x)])
            }
            StepOp::Check => Ok(vec![]),
        }
    }

    fn eval_assertion(&self, assertion: &Assertion, env: &BTreeMap<String, Object>) -> AssertionOutcome {
        let margin = self.assertion_margin(assertion, env);
        AssertionOutcome {
            assertion: assertion.clone(),
            passed: margin > 0.0,
            margin,
        }
    }

    /// Positive margins pass; the magnitude is the distance to the decision
    /// boundary at the assertion tolerance.
    fn assertion_margin(&self, assertion: &Assertion, env: &BTreeMap<String, Object>) -> f64 {
        use Object::*;
        let get = |i: usize| env[assertion.args[i].as_str()];
        match assertion.kind {
            AssertionKind::Distinct => match (get(0), get(1)) {
                (Point(a), Point(b)) => a.dist(&b) - ASSERT_TOL,
                (HPoint(a), HPoint(b)) => a.euclid_dist(&b) - ASSERT_TOL,
                _ => f64::NEG_INFINITY,
            },
            AssertionKind::NotOnLine => match (get(0), get(1)) {
                (Point(p), Line(l)) => l.signed_distance(&p).abs() - ASSERT_TOL,
                _ => f64::NEG_INFINITY,
            },
            AssertionKind::OnChord => match (get(0), get(1)) {
                (HPoint(p), Chord(c)) => ASSERT_TOL - c.signed_offset(&p.to_euclidean()).abs(),
                _ => f64::NEG_INFINITY,
            },
            AssertionKind::NotOnChord => match (get(0), get(1)) {
                (HPoint(p), Chord(c)) => c.signed_offset(&p.to_euclidean()).abs() - ASSERT_TOL,
                _ => f64::NEG_INFINITY,
            },
            AssertionKind::AnglesEqual => {
                let pts: Vec<EuPoint> = (0..6)
                    .map(|i| match get(i) {
                        Point(p) => Some(p),
                        _ => None,
                    })
                    .collect::<Option<_>>()
                    .unwrap_or_default();
                if pts.len() != 6 {
                    return f64::NEG_INFINITY;
                }
                let left = self.euclidean.angle_at(&pts[0], &pts[1], &pts[2]);
                let right = self.euclidean.angle_at(&pts[3], &pts[4], &pts[5]);
                match (left, right) {
                    (Ok(l), Ok(r)) => ASSERT_TOL - (l.radians() - r.radians()).abs(),
                    _ => f64::NEG_INFINITY,
                }
            }
            AssertionKind::AlternateAnglesEqual => match (get(0), get(1), get(2)) {
                (Line(a), Line(b), Line(c)) => match self.euclidean.alternate_angles(&a, &b, &c) {
                    Ok((first, second)) => ASSERT_TOL - (first.radians() - second.radians()).abs(),
                    Err(_) => f64::NEG_INFINITY,
                },
                _ => f64::NEG_INFINITY,
            },
            AssertionKind::Parallel => match (get(0), get(1)) {
                (Line(a), Line(b)) => {
                    if self.euclidean.is_parallel(&a, &b) {
                        1.0
                    } else {
                        -1.0
                    }
                }
                _ => f64::NEG_INFINITY,
            },
            AssertionKind::CircleSeparates => {
                let pts: Vec<crate::hyperbolic::HPoint> = (0..5)
                    .map(|i| match get(i) {
                        HPoint(p) => Some(p),
                        _ => None,
                    })
                    .collect::<Option<_>>()
                    .unwrap_or_default();
                if pts.len() != 5 {
                    return f64::NEG_INFINITY;
                }
                let radius = self.klein.h_distance(&pts[1], &pts[2]);
                let inside_gap = radius - self.klein.h_distance(&pts[0], &pts[3]) - ASSERT_TOL;
                let outside_gap = self.klein.h_distance(&pts[0], &pts[4]) - radius - ASSERT_TOL;
                inside_gap.min(outside_gap)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: f64, y: f64) -> Object {
        Object::Point(EuPoint::new(x, y).unwrap())
    }

    #[test]
    fn empty_program_runs_to_empty_trace() {
        let prog = ConstructionProgram::new("empty", vec![], vec![], "none").unwrap();
        let scene = Scene::new(Model::Euclidean);
        let trace = Engine::default().run_program(&prog, &scene).unwrap();
        assert!(trace.succeeded());
        assert_eq!(trace.step_count(), 0);
        assert!(trace.result.is_none());
    }

    #[test]
    fn program_rejects_forward_references() {
        let steps = vec![ConstructionStep::op(
            StepOp::LineThrough,
            &["nowhere", "also_nowhere"],
            &["l"],
        )];
        let err = ConstructionProgram::new("bad", vec![], steps, "l").unwrap_err();
        assert!(matches!(err, ConstructionError::InvalidProgram(_)));
    }

    #[test]
    fn missing_given_is_unresolved() {
        let prog = ConstructionProgram::new(
            "needs_points",
            vec![("A".into(), ObjectKind::Point), ("B".into(), ObjectKind::Point)],
            vec![ConstructionStep::op(StepOp::LineThrough, &["A", "B"], &["l"])],
            "l",
        )
        .unwrap();
        let mut scene = Scene::new(Model::Euclidean);
        scene.insert("A", pt(0.0, 0.0)).unwrap();
        let err = Engine::default().run_program(&prog, &scene).unwrap_err();
        assert!(matches!(err, ConstructionError::UnresolvedReference { .. }));
    }

    #[test]
    fn kind_mismatch_on_given() {
        let prog = ConstructionProgram::new(
            "wants_line",
            vec![("l".into(), ObjectKind::Line)],
            vec![],
            "l",
        )
        .unwrap();
        let mut scene = Scene::new(Model::Euclidean);
        scene.insert("l", pt(0.0, 0.0)).unwrap();
        let err = Engine::default().run_program(&prog, &scene).unwrap_err();
        assert!(matches!(err, ConstructionError::KindMismatch { .. }));
    }

    #[test]
    fn failed_step_is_recorded_in_trace() {
        let prog = ConstructionProgram::new(
            "degenerate",
            vec![("A".into(), ObjectKind::Point)],
            vec![ConstructionStep::op(StepOp::LineThrough, &["A", "A"], &["l"])],
            "l",
        )
        .unwrap();
        let mut scene = Scene::new(Model::Euclidean);
        scene.insert("A", pt(1.0, 2.0)).unwrap();
        let trace = Engine::default().run_program(&prog, &scene).unwrap();
        assert!(!trace.succeeded());
        let (step, err) = trace.failure.as_ref().unwrap();
        assert_eq!(*step, 0);
        assert!(matches!(err, ConstructionError::StepFailed { .. }));
    }

    #[test]
    fn scene_rejects_cross_model_objects() {
        let mut scene = Scene::new(Model::Klein);
        let err = scene.insert("p", pt(0.0, 0.0)).unwrap_err();
        assert!(matches!(err, ConstructionError::KindMismatch { .. }));
    }

    #[test]
    fn scene_rejects_duplicate_names() {
        let mut scene = Scene::new(Model::Euclidean);
        scene.insert("p", pt(0.0, 0.0)).unwrap();
        assert!(matches!(
            scene.insert("p", pt(1.0, 0.0)),
            Err(ConstructionError::DuplicateName(_))
        ));
    }
}
