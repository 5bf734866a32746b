//! Parser for the line-oriented `.kg` graph format.
//!
//! ```text
//! node <id> kind=<postulate|definition|proposition|construction|axiom> [asserts-existence-of=<prop>]
//! property <id> <finite|infinite>
//! uses <node> <node>
//! implies <propA> <propB> by=<node>
//! builds <construction-node> target=<prop> via=<prop>
//! note <free text>
//! ```
//!
//! `#` starts a comment. Declaration order of `node` lines is the total order
//! the rules run against. References may point forward in the file (that is
//! what the ordering rule detects); references to ids that never appear are
//! rejected here.

use super::{
    BuildRecord, DepGraph, Finiteness, ImplicationRecord, Node, NodeKind, PropertyRecord, UsesEdge,
};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("line {line}: {reason}")]
pub struct ParseError {
    pub line: usize,
    pub reason: String,
}

fn err(line: usize, reason: impl Into<String>) -> ParseError {
    ParseError {
        line,
        reason: reason.into(),
    }
}

fn attr<'a>(line: usize, token: &'a str, key: &str) -> Result<&'a str, ParseError> {
    match token.split_once('=') {
        Some((k, v)) if k == key && !v.is_empty() => Ok(v),
        _ => Err(err(line, format!("expected {key}=<value>, found '{token}'"))),
    }
}

/// Parses the `.kg` format into a [`DepGraph`], rejecting unknown directives,
/// duplicate ids, and dangling references with positioned errors.
pub fn parse_graph(text: &str) -> Result<DepGraph, ParseError> {
    let mut nodes: Vec<Node> = Vec::new();
    let mut node_position: BTreeMap<String, usize> = BTreeMap::new();
    let mut properties: Vec<PropertyRecord> = Vec::new();
    let mut uses: Vec<(usize, UsesEdge)> = Vec::new();
    let mut implications: Vec<(usize, ImplicationRecord)> = Vec::new();
    let mut builds: Vec<(usize, BuildRecord)> = Vec::new();
    let mut existence_refs: Vec<(usize, String)> = Vec::new();
    let mut notes: Vec<String> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens[0] {
            "node" => {
                if tokens.len() < 3 || tokens.len() > 4 {
                    return Err(err(lineno, "node takes an id, a kind, and at most one assertion"));
                }
                let id = tokens[1].to_string();
                if node_position.contains_key(&id) {
                    return Err(err(lineno, format!("duplicate node id '{id}'")));
                }
                let kind_value = attr(lineno, tokens[2], "kind")?;
                let kind = NodeKind::parse(kind_value)
                    .ok_or_else(|| err(lineno, format!("unknown kind '{kind_value}'")))?;
                let asserts_existence_of = if tokens.len() == 4 {
                    let target = attr(lineno, tokens[3], "asserts-existence-of")?;
                    if !matches!(kind, NodeKind::Axiom | NodeKind::Postulate) {
                        return Err(err(
                            lineno,
                            "asserts-existence-of is only valid on axioms and postulates",
                        ));
                    }
                    existence_refs.push((lineno, target.to_string()));
                    Some(target.to_string())
                } else {
                    None
                };
                node_position.insert(id.clone(), nodes.len());
                nodes.push(Node {
                    id,
                    kind,
                    asserts_existence_of,
                });
            }
            "property" => {
                if tokens.len() != 3 {
                    return Err(err(lineno, "property takes an id and a finiteness"));
                }
                let id = tokens[1].to_string();
                if properties.iter().any(|p| p.id == id) {
                    return Err(err(lineno, format!("duplicate property '{id}'")));
                }
                let finiteness = match tokens[2] {
                    "finite" => Finiteness::Finite,
                    "infinite" => Finiteness::Infinite,
                    other => return Err(err(lineno, format!("unknown finiteness '{other}'"))),
                };
                properties.push(PropertyRecord { id, finiteness });
            }
            "uses" => {
                if tokens.len() != 3 {
                    return Err(err(lineno, "uses takes two node ids"));
                }
                uses.push((
                    lineno,
                    UsesEdge {
                        user: tokens[1].to_string(),
                        used: tokens[2].to_string(),
                    },
                ));
            }
            "implies" => {
                if tokens.len() != 4 {
                    return Err(err(lineno, "implies takes two properties and by=<node>"));
                }
                let from = tokens[1].to_string();
                let to = tokens[2].to_string();
                if from == to {
                    return Err(err(lineno, "an implication must relate distinct properties"));
                }
                let proved_by = attr(lineno, tokens[3], "by")?.to_string();
                implications.push((lineno, ImplicationRecord { from, to, proved_by }));
            }
            "builds" => {
                if tokens.len() != 4 {
                    return Err(err(lineno, "builds takes a node, target=<prop>, via=<prop>"));
                }
                let construction = tokens[1].to_string();
                let target = attr(lineno, tokens[2], "target")?.to_string();
                let via = attr(lineno, tokens[3], "via")?.to_string();
                if builds.iter().any(|(_, b)| b.construction == construction) {
                    return Err(err(
                        lineno,
                        format!("construction '{construction}' already has a build record"),
                    ));
                }
                builds.push((
                    lineno,
                    BuildRecord {
                        construction,
                        target,
                        via,
                    },
                ));
            }
            "note" => {
                notes.push(tokens[1..].join(" "));
            }
            other => return Err(err(lineno, format!("unknown directive '{other}'"))),
        }
    }

    // resolve references now that every declaration is known
    let has_node = |id: &str| node_position.contains_key(id);
    let has_property = |id: &str| properties.iter().any(|p| p.id == id);
    for (lineno, edge) in &uses {
        for id in [&edge.user, &edge.used] {
            if !has_node(id) {
                return Err(err(*lineno, format!("uses references undeclared node '{id}'")));
            }
        }
    }
    for (lineno, imp) in &implications {
        for prop in [&imp.from, &imp.to] {
            if !has_property(prop) {
                return Err(err(
                    *lineno,
                    format!("implies references undeclared property '{prop}'"),
                ));
            }
        }
        if !has_node(&imp.proved_by) {
            return Err(err(
                *lineno,
                format!("implies references undeclared node '{}'", imp.proved_by),
            ));
        }
    }
    for (lineno, build) in &builds {
        let Some(&pos) = node_position.get(&build.construction) else {
            return Err(err(
                *lineno,
                format!("builds references undeclared node '{}'", build.construction),
            ));
        };
        if nodes[pos].kind != NodeKind::Construction {
            return Err(err(
                *lineno,
                format!("'{}' has a build record but is not a construction", build.construction),
            ));
        }
        for prop in [&build.target, &build.via] {
            if !has_property(prop) {
                return Err(err(
                    *lineno,
                    format!("builds references undeclared property '{prop}'"),
                ));
            }
        }
    }
    for (lineno, prop) in &existence_refs {
        if !has_property(prop) {
            return Err(err(
                *lineno,
                format!("asserts-existence-of references undeclared property '{prop}'"),
            ));
        }
    }

    Ok(DepGraph {
        nodes,
        node_position,
        properties,
        uses: uses.into_iter().map(|(_, e)| e).collect(),
        implications: implications.into_iter().map(|(_, i)| i).collect(),
        builds: builds.into_iter().map(|(_, b)| b).collect(),
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_input_is_an_empty_graph() {
        let g = parse_graph("").unwrap();
        assert!(g.nodes().is_empty());
        assert!(g.properties().is_empty());
        let g = parse_graph("# only a comment\n\n").unwrap();
        assert!(g.nodes().is_empty());
    }

    #[test]
    fn undeclared_uses_target_is_rejected() {
        let text = "node Y kind=proposition\nuses X Y\n";
        let e = parse_graph(text).unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.reason.contains("undeclared node 'X'"));
    }

    #[test]
    fn forward_references_parse_cleanly() {
        let text = "node A kind=proposition\nuses A B\nnode B kind=postulate\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(g.uses().len(), 1);
        assert_eq!(g.position("A"), Some(0));
        assert_eq!(g.position("B"), Some(1));
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        assert!(parse_graph("node A kind=axiom\nnode A kind=axiom\n").is_err());
        assert!(parse_graph("property p finite\nproperty p infinite\n").is_err());
    }

    #[test]
    fn existence_assertion_needs_axiomatic_kind() {
        let bad = "property p infinite\nnode C kind=construction asserts-existence-of=p\n";
        assert!(parse_graph(bad).is_err());
        let good = "property p infinite\nnode L kind=axiom asserts-existence-of=p\n";
        let g = parse_graph(good).unwrap();
        assert_eq!(g.node("L").unwrap().asserts_existence_of.as_deref(), Some("p"));
    }

    #[test]
    fn builds_must_point_at_constructions() {
        let text = "\
property p finite
node P kind=proposition
builds P target=p via=p
";
        let e = parse_graph(text).unwrap_err();
        assert!(e.reason.contains("not a construction"));
    }

    #[test]
    fn implication_must_relate_distinct_properties() {
        let text = "property p finite\nnode N kind=proposition\nimplies p p by=N\n";
        assert!(parse_graph(text).is_err());
    }

    #[test]
    fn shipped_book1_parses_with_expected_contents() {
        let g = parse_graph(super::super::datasets::ELEMENTS_BOOK1).unwrap();
        let ids: Vec<&str> = g.nodes().iter().map(|n| n.id.as_str()).collect();
        for expected in [
            "post_1", "post_2", "post_3", "post_4", "post_5", "I.16", "I.23", "I.27", "I.28",
            "I.29", "I.30", "I.31",
        ] {
            assert!(ids.contains(&expected), "missing node {expected}");
        }
        assert!(g.property("P_bc").is_some());
        assert!(g.property("Q_b").is_some());
        assert_eq!(g.builds().len(), 1);
    }
}
