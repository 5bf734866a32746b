//! Line-oriented scene files.
//!
//! One object per line:
//!
//! ```text
//! model euclidean|klein
//! point <name> <x> <y>
//! line <name> <nx> <ny> <d>
//! chord <name> <x1> <y1> <x2> <y2>
//! ```
//!
//! Blank lines and `#` comments are ignored. Numbers are decimal with an
//! optional exponent. The model tag applies to the whole file; `point` lines
//! produce interior disk points in Klein scenes.

use super::{ConstructionError, Model, Object, Scene};
use crate::euclidean::{EuLine, EuPoint, Vec2};
use crate::hyperbolic::{HChord, HPoint, IdealPoint};

type Result<T> = std::result::Result<T, ConstructionError>;

fn err(line: usize, reason: impl Into<String>) -> ConstructionError {
    ConstructionError::SceneParse {
        line,
        reason: reason.into(),
    }
}

fn number(line: usize, token: &str, what: &str) -> Result<f64> {
    token
        .parse::<f64>()
        .map_err(|_| err(line, format!("invalid {what} '{token}'")))
}

enum Entry {
    Point(String, f64, f64),
    Line(String, f64, f64, f64),
    Chord(String, f64, f64, f64, f64),
}

/// Parses the scene text format.
pub fn parse_scene(text: &str) -> Result<Scene> {
    let mut model: Option<(usize, Model)> = None;
    let mut entries: Vec<(usize, Entry)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens[0] {
            "model" => {
                if tokens.len() != 2 {
                    return Err(err(lineno, "model takes one value"));
                }
                let m = match tokens[1] {
                    "euclidean" => Model::Euclidean,
                    "klein" => Model::Klein,
                    other => return Err(err(lineno, format!("unknown model '{other}'"))),
                };
                if model.is_some() {
                    return Err(err(lineno, "model declared twice"));
                }
                model = Some((lineno, m));
            }
            "point" => {
                if tokens.len() != 4 {
                    return Err(err(lineno, "point takes a name and two coordinates"));
                }
                entries.push((
                    lineno,
                    Entry::Point(
                        tokens[1].to_string(),
                        number(lineno, tokens[2], "coordinate")?,
                        number(lineno, tokens[3], "coordinate")?,
                    ),
                ));
            }
            "line" => {
                if tokens.len() != 5 {
                    return Err(err(lineno, "line takes a name, a normal, and an offset"));
                }
                entries.push((
                    lineno,
                    Entry::Line(
                        tokens[1].to_string(),
                        number(lineno, tokens[2], "normal component")?,
                        number(lineno, tokens[3], "normal component")?,
                        number(lineno, tokens[4], "offset")?,
                    ),
                ));
            }
            "chord" => {
                if tokens.len() != 6 {
                    return Err(err(lineno, "chord takes a name and two ideal endpoints"));
                }
                entries.push((
                    lineno,
                    Entry::Chord(
                        tokens[1].to_string(),
                        number(lineno, tokens[2], "coordinate")?,
                        number(lineno, tokens[3], "coordinate")?,
                        number(lineno, tokens[4], "coordinate")?,
                        number(lineno, tokens[5], "coordinate")?,
                    ),
                ));
            }
            other => return Err(err(lineno, format!("unknown directive '{other}'"))),
        }
    }
    let model = model.map(|(_, m)| m).ok_or_else(|| err(0, "missing model line"))?;
    let mut scene = Scene::new(model);
    for (lineno, entry) in entries {
        let (name, object) = match entry {
            Entry::Point(name, x, y) => {
                let object = match model {
                    Model::Euclidean => Object::Point(
                        EuPoint::new(x, y).map_err(|e| err(lineno, e.to_string()))?,
                    ),
                    Model::Klein => Object::HPoint(
                        HPoint::new(x, y).map_err(|e| err(lineno, e.to_string()))?,
                    ),
                };
                (name, object)
            }
            Entry::Line(name, nx, ny, d) => {
                if model != Model::Euclidean {
                    return Err(err(lineno, "lines belong to euclidean scenes"));
                }
                let line = EuLine::from_normal_offset(Vec2::new(nx, ny), d)
                    .map_err(|e| err(lineno, e.to_string()))?;
                (name, Object::Line(line))
            }
            Entry::Chord(name, x1, y1, x2, y2) => {
                if model != Model::Klein {
                    return Err(err(lineno, "chords belong to klein scenes"));
                }
                let i1 = IdealPoint::new(x1, y1).map_err(|e| err(lineno, e.to_string()))?;
                let i2 = IdealPoint::new(x2, y2).map_err(|e| err(lineno, e.to_string()))?;
                let chord = HChord::new(i1, i2).map_err(|e| err(lineno, e.to_string()))?;
                (name, Object::Chord(chord))
            }
        };
        scene
            .insert(name, object)
            .map_err(|e| err(lineno, e.to_string()))?;
    }
    Ok(scene)
}

/// Writes a scene back out in the same line format. Only objects expressible
/// in the format (points, lines, chords) are emitted.
pub fn render_scene(scene: &Scene) -> String {
    let mut out = format!("model {}\n", scene.model());
    for (name, object) in scene.iter() {
        match object {
            Object::Point(p) => out.push_str(&format!("point {name} {} {}\n", p.x, p.y)),
            Object::HPoint(p) => out.push_str(&format!("point {name} {} {}\n", p.x, p.y)),
            Object::Line(l) => {
                let n = l.normal();
                out.push_str(&format!("line {name} {} {} {}\n", n.x, n.y, l.offset()));
            }
            Object::Chord(c) => {
                let (i1, i2) = c.endpoints();
                out.push_str(&format!(
                    "chord {name} {} {} {} {}\n",
                    i1.x, i1.y, i2.x, i2.y
                ));
            }
            _ => {}
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::ObjectKind;
    use super::*;

    #[test]
    fn parses_euclidean_scene() {
        let text = "\
# the symmetric parallel scene
model euclidean
line b 0 1 0
point A 0 1
";
        let scene = parse_scene(text).unwrap();
        assert_eq!(scene.model(), Model::Euclidean);
        assert_eq!(scene.get("b").unwrap().kind(), ObjectKind::Line);
        assert_eq!(scene.get("A").unwrap().kind(), ObjectKind::Point);
    }

    #[test]
    fn parses_klein_scene_with_exponents() {
        let text = "\
model klein
chord a -1 0 1 0
point P 0 5e-1
point R 0.6 0   # on the chord
";
        let scene = parse_scene(text).unwrap();
        assert_eq!(scene.model(), Model::Klein);
        assert_eq!(scene.get("P").unwrap().kind(), ObjectKind::HPoint);
        assert_eq!(scene.get("a").unwrap().kind(), ObjectKind::Chord);
    }

    #[test]
    fn rejects_unknown_directive_with_position() {
        let text = "model euclidean\nwidget w 1 2\n";
        match parse_scene(text) {
            Err(ConstructionError::SceneParse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_missing_model_and_misplaced_kinds() {
        assert!(parse_scene("point A 0 0\n").is_err());
        assert!(parse_scene("model klein\nline l 0 1 0\n").is_err());
        assert!(parse_scene("model euclidean\nchord c -1 0 1 0\n").is_err());
        // an off-circle chord endpoint is rejected
        assert!(parse_scene("model klein\nchord c -0.5 0 1 0\n").is_err());
    }

    #[test]
    fn roundtrips_through_render() {
        let text = "model klein\nchord a -1 0 1 0\npoint P 0 0.5\npoint R 0.6 0\n";
        let scene = parse_scene(text).unwrap();
        let rendered = render_scene(&scene);
        let reparsed = parse_scene(&rendered).unwrap();
        assert_eq!(scene, reparsed);
    }
}
