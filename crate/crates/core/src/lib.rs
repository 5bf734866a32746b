//! Geometric construction engine over two plane models.
//!
//! The crate is organized around five subsystems:
//!
//! - [`euclidean`] — tolerance-aware 2D primitives: points, lines in normal
//!   form, circles, and the angle/parallelism predicates built on them.
//! - [`hyperbolic`] — the Klein disk model: chords as lines, cross-ratio
//!   distance, metric-tensor angles, poles and perpendiculars, and a
//!   continuity-based circle/segment solver.
//! - [`construction`] — a small interpreter for straightedge-and-compass
//!   programs plus the shipped programs (angle copying, the parallel
//!   construction, and the limiting-parallel construction).
//! - [`verify`] — a seeded randomized trial harness producing deterministic
//!   plain-text reports for each supported proposition.
//! - [`kcheck`] — a parser and rule engine for proof/construction dependency
//!   graphs with ordering and licensing rules.

pub mod construction;
pub mod euclidean;
pub mod hyperbolic;
pub mod kcheck;
pub mod verify;

pub use euclidean::{AngleValue, EuCircle, EuLine, EuPoint, EuRay, EuSegment, EuclideanKernel};
pub use hyperbolic::{HChord, HPoint, HRay, HSegment, IdealPoint, KleinKernel};
