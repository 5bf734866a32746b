//! Deterministic SVG figures for scenes and traces.
//!
//! Klein scenes are drawn inside the unit circle; Euclidean scenes are
//! auto-fitted with a 10% margin. Identical inputs produce byte-identical
//! documents: objects are emitted in sorted order and coordinates are
//! formatted with a fixed precision.

use postulatum_core::construction::{Object, Scene, Trace};
use postulatum_core::euclidean::{EuLine, EuPoint};
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderError {
    EmptyScene,
    CanvasTooSmall,
}

impl std::fmt::Display for RenderError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RenderError::EmptyScene => write!(f, "nothing to draw"),
            RenderError::CanvasTooSmall => write!(f, "canvas must be at least 64 px"),
        }
    }
}

impl std::error::Error for RenderError {}

/// Figure styling knobs.
#[derive(Debug, Clone, Copy)]
pub struct RenderStyle {
    /// Square canvas edge in pixels, at least 64.
    pub canvas: u32,
    pub stroke_width: f64,
    pub marker_radius: f64,
    /// Draw the disk boundary on Klein scenes.
    pub disk_boundary: bool,
    pub labels: bool,
}

impl Default for RenderStyle {
    fn default() -> Self {
        RenderStyle {
            canvas: 512,
            stroke_width: 1.5,
            marker_radius: 3.0,
            disk_boundary: true,
            labels: true,
        }
    }
}

impl RenderStyle {
    pub fn validate(&self) -> Result<(), RenderError> {
        if self.canvas < 64 {
            return Err(RenderError::CanvasTooSmall);
        }
        Ok(())
    }
}

/// Which role an object plays in the figure; also its draw color.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Role {
    Given,
    Step,
    Result,
}

impl Role {
    fn color(&self) -> &'static str {
        match self {
            Role::Given => "#333333",
            Role::Step => "#4878a8",
            Role::Result => "#c03028",
        }
    }
}

struct Mapper {
    scale: f64,
    min_x: f64,
    max_y: f64,
    canvas: f64,
}

impl Mapper {
    fn new(min: (f64, f64), max: (f64, f64), canvas: u32) -> Self {
        let span = (max.0 - min.0).max(max.1 - min.1).max(1e-9);
        Mapper {
            scale: canvas as f64 / span,
            min_x: min.0,
            max_y: max.1,
            canvas: canvas as f64,
        }
    }

    fn map(&self, p: (f64, f64)) -> (f64, f64) {
        ((p.0 - self.min_x) * self.scale, (self.max_y - p.1) * self.scale)
    }

    fn world_bounds(&self) -> ((f64, f64), (f64, f64)) {
        (
            (self.min_x, self.max_y - self.canvas / self.scale),
            (self.min_x + self.canvas / self.scale, self.max_y),
        )
    }
}

fn fnum(x: f64) -> String {
    // normalize negative zero so formatting is stable
    format!("{:.4}", x + 0.0)
}

/// Clips an infinite line to the world box, returning segment endpoints.
fn clip_line(line: &EuLine, min: (f64, f64), max: (f64, f64)) -> Option<((f64, f64), (f64, f64))> {
    let d = line.direction();
    let n = line.normal();
    let anchor = EuPoint {
        x: n.x * line.offset(),
        y: n.y * line.offset(),
    };
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    // param range against each slab
    for (origin, dir, lo_bound, hi_bound) in [
        (anchor.x, d.x, min.0, max.0),
        (anchor.y, d.y, min.1, max.1),
    ] {
        if dir.abs() < 1e-15 {
            if origin < lo_bound || origin > hi_bound {
                return None;
            }
        } else {
            let t1 = (lo_bound - origin) / dir;
            let t2 = (hi_bound - origin) / dir;
            let (t1, t2) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
            lo = lo.max(t1);
            hi = hi.min(t2);
        }
    }
    if lo >= hi {
        return None;
    }
    let at = |t: f64| (anchor.x + t * d.x, anchor.y + t * d.y);
    Some((at(lo), at(hi)))
}

fn object_bounds(objects: &[(String, Object, Role)]) -> ((f64, f64), (f64, f64)) {
    let mut min = (f64::INFINITY, f64::INFINITY);
    let mut max = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut grow = |x: f64, y: f64| {
        min.0 = min.0.min(x);
        min.1 = min.1.min(y);
        max.0 = max.0.max(x);
        max.1 = max.1.max(y);
    };
    for (_, object, _) in objects {
        match object {
            Object::Point(p) => grow(p.x, p.y),
            Object::Segment(s) => {
                grow(s.start.x, s.start.y);
                grow(s.end.x, s.end.y);
            }
            Object::Circle(c) => {
                grow(c.center.x - c.radius(), c.center.y - c.radius());
                grow(c.center.x + c.radius(), c.center.y + c.radius());
            }
            Object::Ray(r) => grow(r.origin.x, r.origin.y),
            // lines do not constrain the fit; Klein objects use the fixed disk
            _ => {}
        }
    }
    if !min.0.is_finite() {
        (( -1.0, -1.0), (1.0, 1.0))
    } else {
        let pad_x = ((max.0 - min.0) * 0.1).max(0.5);
        let pad_y = ((max.1 - min.1) * 0.1).max(0.5);
        let pad = pad_x.max(pad_y);
        ((min.0 - pad, min.1 - pad), (max.0 + pad, max.1 + pad))
    }
}

fn collect_trace_objects(trace: &Trace) -> Vec<(String, Object, Role)> {
    let mut objects: Vec<(String, Object, Role)> = Vec::new();
    for (name, object) in &trace.givens {
        objects.push((name.clone(), *object, Role::Given));
    }
    for record in &trace.records {
        for (name, object) in &record.outputs {
            objects.push((name.clone(), *object, Role::Step));
        }
    }
    if let Some((name, object)) = &trace.result {
        objects.retain(|(n, _, _)| n != name);
        objects.push((name.clone(), *object, Role::Result));
    }
    objects
}

fn render_objects(
    mut objects: Vec<(String, Object, Role)>,
    klein: bool,
    style: &RenderStyle,
) -> Result<String, RenderError> {
    style.validate()?;
    if objects.is_empty() {
        return Err(RenderError::EmptyScene);
    }
    // stable draw order: strokes under markers, givens under results
    objects.sort_by(|(na, oa, ra), (nb, ob, rb)| {
        let weight = |o: &Object| match o {
            Object::Point(_) | Object::HPoint(_) => 1,
            _ => 0,
        };
        (weight(oa), *ra, na.clone()).cmp(&(weight(ob), *rb, nb.clone()))
    });

    let mapper = if klein {
        Mapper::new((-1.08, -1.08), (1.08, 1.08), style.canvas)
    } else {
        let (min, max) = object_bounds(&objects);
        Mapper::new(min, max, style.canvas)
    };
    let (wmin, wmax) = mapper.world_bounds();

    let mut out = String::new();
    let canvas = style.canvas;
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{canvas}" height="{canvas}" viewBox="0 0 {canvas} {canvas}">"#
    );
    let _ = writeln!(
        out,
        r##"<rect width="{canvas}" height="{canvas}" fill="#ffffff"/>"##
    );
    if klein && style.disk_boundary {
        let center = mapper.map((0.0, 0.0));
        let edge = mapper.map((1.0, 0.0));
        let radius = edge.0 - center.0;
        let _ = writeln!(
            out,
            r##"<circle cx="{}" cy="{}" r="{}" fill="none" stroke="#888888" stroke-width="{}"/>"##,
            fnum(center.0),
            fnum(center.1),
            fnum(radius),
            fnum(style.stroke_width)
        );
    }

    let mut labels = String::new();
    let stroke_segment = |out: &mut String, a: (f64, f64), b: (f64, f64), color: &str, dashed: bool| {
        let (x1, y1) = mapper.map(a);
        let (x2, y2) = mapper.map(b);
        let dash = if dashed { r#" stroke-dasharray="6 4""# } else { "" };
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}" stroke-width="{}"{}/>"#,
            fnum(x1),
            fnum(y1),
            fnum(x2),
            fnum(y2),
            color,
            fnum(style.stroke_width),
            dash
        );
    };
    let draw_point = |out: &mut String, labels: &mut String, name: &str, x: f64, y: f64, color: &str| {
        let (cx, cy) = mapper.map((x, y));
        let _ = writeln!(
            out,
            r#"<circle cx="{}" cy="{}" r="{}" fill="{}"/>"#,
            fnum(cx),
            fnum(cy),
            fnum(style.marker_radius),
            color
        );
        if style.labels {
            let _ = writeln!(
                labels,
                r#"<text x="{}" y="{}" font-family="monospace" font-size="14" fill="{}">{}</text>"#,
                fnum(cx + 6.0),
                fnum(cy - 6.0),
                color,
                name
            );
        }
    };

    for (name, object, role) in &objects {
        let color = role.color();
        match object {
            Object::Point(p) => draw_point(&mut out, &mut labels, name, p.x, p.y, color),
            Object::HPoint(p) => draw_point(&mut out, &mut labels, name, p.x, p.y, color),
            Object::Line(l) => {
                if let Some((a, b)) = clip_line(l, wmin, wmax) {
                    stroke_segment(&mut out, a, b, color, false);
                }
            }
            Object::Segment(s) => {
                stroke_segment(&mut out, (s.start.x, s.start.y), (s.end.x, s.end.y), color, false)
            }
            Object::Ray(r) => {
                let d = r.direction();
                let far = 4.0 * (wmax.0 - wmin.0);
                let tip = (r.origin.x + far * d.x, r.origin.y + far * d.y);
                stroke_segment(&mut out, (r.origin.x, r.origin.y), tip, color, false);
            }
            Object::Circle(c) => {
                let (cx, cy) = mapper.map((c.center.x, c.center.y));
                let _ = writeln!(
                    out,
                    r#"<circle cx="{}" cy="{}" r="{}" fill="none" stroke="{}" stroke-width="{}"/>"#,
                    fnum(cx),
                    fnum(cy),
                    fnum(c.radius() * mapper.scale),
                    color,
                    fnum(style.stroke_width)
                );
            }
            Object::Chord(c) => {
                let (i1, i2) = c.endpoints();
                stroke_segment(&mut out, (i1.x, i1.y), (i2.x, i2.y), color, false);
            }
            Object::HRay(r) => {
                stroke_segment(
                    &mut out,
                    (r.origin.x, r.origin.y),
                    (r.toward.x, r.toward.y),
                    color,
                    true,
                );
            }
            Object::HSegment(s) => {
                stroke_segment(&mut out, (s.start.x, s.start.y), (s.end.x, s.end.y), color, false)
            }
        }
    }
    out.push_str(&labels);
    out.push_str("</svg>\n");
    Ok(out)
}

/// Renders the givens of a scene.
#[allow(dead_code)]
pub fn render_scene_svg(scene: &Scene, style: &RenderStyle) -> Result<String, RenderError> {
    let objects: Vec<(String, Object, Role)> = scene
        .iter()
        .map(|(name, object)| (name.clone(), *object, Role::Given))
        .collect();
    let klein = scene.model() == postulatum_core::construction::Model::Klein;
    render_objects(objects, klein, style)
}

/// Renders everything a trace touched: givens, intermediate objects, and the
/// result.
pub fn render_trace_svg(trace: &Trace, style: &RenderStyle) -> Result<String, RenderError> {
    let objects = collect_trace_objects(trace);
    let klein = objects.iter().any(|(_, o, _)| {
        matches!(
            o,
            Object::HPoint(_) | Object::Chord(_) | Object::HRay(_) | Object::HSegment(_)
        )
    });
    render_objects(objects, klein, style)
}

#[cfg(test)]
mod tests {
    use super::*;
    use postulatum_core::construction::{parse_scene, Model, Scene};
    use postulatum_core::euclidean::EuPoint;

    #[test]
    fn empty_scene_is_an_error() {
        let scene = Scene::new(Model::Euclidean);
        assert_eq!(
            render_scene_svg(&scene, &RenderStyle::default()).unwrap_err(),
            RenderError::EmptyScene
        );
    }

    #[test]
    fn single_point_is_byte_stable() {
        let mut scene = Scene::new(Model::Euclidean);
        scene
            .insert("A", Object::Point(EuPoint::new(0.25, -1.5).unwrap()))
            .unwrap();
        let style = RenderStyle::default();
        let first = render_scene_svg(&scene, &style).unwrap();
        let second = render_scene_svg(&scene, &style).unwrap();
        assert_eq!(first, second);
        assert!(first.starts_with("<?xml"));
        assert!(first.contains("<circle"));
        assert!(first.contains(">A</text>"));
    }

    #[test]
    fn klein_scene_gets_the_boundary_circle() {
        let scene = parse_scene("model klein\nchord a -1 0 1 0\npoint P 0 0.5\n").unwrap();
        let svg = render_scene_svg(&scene, &RenderStyle::default()).unwrap();
        assert!(svg.contains(r##"stroke="#888888""##));
        let no_boundary = RenderStyle {
            disk_boundary: false,
            ..RenderStyle::default()
        };
        let svg = render_scene_svg(&scene, &no_boundary).unwrap();
        assert!(!svg.contains(r##"stroke="#888888""##));
    }

    #[test]
    fn small_canvas_is_rejected() {
        let style = RenderStyle {
            canvas: 32,
            ..RenderStyle::default()
        };
        let mut scene = Scene::new(Model::Euclidean);
        scene
            .insert("A", Object::Point(EuPoint::new(0.0, 0.0).unwrap()))
            .unwrap();
        assert_eq!(
            render_scene_svg(&scene, &style).unwrap_err(),
            RenderError::CanvasTooSmall
        );
    }
}
