//! Dependency-graph checker for proof/construction orderings.
//!
//! A graph declares nodes (postulates, definitions, propositions,
//! constructions, axioms) in a total order, `uses` edges between them,
//! directed implications between properties (each carrying the node that
//! proves it), and build records stating which property a construction
//! establishes and through which property it does so.
//!
//! Two ordering rules and a licensing discipline run over this data:
//!
//! - a `uses` edge must point backward in declaration order;
//! - a construction must not depend, transitively, on an axiom asserting the
//!   existence of the very property it builds;
//! - an indirect build (target differs from the working property) is licensed
//!   only when both implication directions between the two properties are
//!   proved by nodes declared before the construction; otherwise it is
//!   flagged. Direct builds of properties declared infinite are flagged too.

mod parse;
mod rules;

pub use parse::{parse_graph, ParseError};
pub use rules::{analyze, check_k2, check_licensing, AnalysisReport, LicenseRow, LicenseStatus};

use std::collections::BTreeMap;
use std::fmt;

/// The shipped dependency graphs.
pub mod datasets {
    /// The parallel construction in its transmitted order.
    pub const ELEMENTS_BOOK1: &str = include_str!("../../../../data/graphs/elements_book1.kg");
    /// The same graph with the parallel construction moved before the
    /// converse criterion.
    pub const ELEMENTS_MISPLACED: &str =
        include_str!("../../../../data/graphs/elements_misplaced.kg");
    /// The limiting-parallel construction and its proof chain.
    pub const BOLYAI: &str = include_str!("../../../../data/graphs/bolyai.kg");
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Postulate,
    Definition,
    Proposition,
    Construction,
    Axiom,
}

impl NodeKind {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "postulate" => Some(NodeKind::Postulate),
            "definition" => Some(NodeKind::Definition),
            "proposition" => Some(NodeKind::Proposition),
            "construction" => Some(NodeKind::Construction),
            "axiom" => Some(NodeKind::Axiom),
            _ => None,
        }
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            NodeKind::Postulate => "postulate",
            NodeKind::Definition => "definition",
            NodeKind::Proposition => "proposition",
            NodeKind::Construction => "construction",
            NodeKind::Axiom => "axiom",
        };
        write!(f, "{s}")
    }
}

/// Whether a property admits a direct construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Finiteness {
    Finite,
    Infinite,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub id: String,
    pub kind: NodeKind,
    /// Set on axioms and postulates that assert a property's extension is
    /// non-empty without constructing it.
    pub asserts_existence_of: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyRecord {
    pub id: String,
    pub finiteness: Finiteness,
}

/// `user` depends on `used`.
#[derive(Debug, Clone, PartialEq)]
pub struct UsesEdge {
    pub user: String,
    pub used: String,
}

/// `from` implies `to`, proved by a node.
#[derive(Debug, Clone, PartialEq)]
pub struct ImplicationRecord {
    pub from: String,
    pub to: String,
    pub proved_by: String,
}

/// A construction establishing `target`, working through `via` (equal to
/// `target` for direct builds).
#[derive(Debug, Clone, PartialEq)]
pub struct BuildRecord {
    pub construction: String,
    pub target: String,
    pub via: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Rule {
    K2Order,
    K2Existence,
    K3,
    DirectInfinite,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::K2Order => "K2-order",
            Rule::K2Existence => "K2-existence",
            Rule::K3 => "K3",
            Rule::DirectInfinite => "direct-infinite",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub rule: Rule,
    pub node: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}: {}", self.rule, self.node, self.message)
    }
}

/// A parsed dependency graph with a total declaration order on nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct DepGraph {
    nodes: Vec<Node>,
    node_position: BTreeMap<String, usize>,
    properties: Vec<PropertyRecord>,
    uses: Vec<UsesEdge>,
    implications: Vec<ImplicationRecord>,
    builds: Vec<BuildRecord>,
    notes: Vec<String>,
}

impl DepGraph {
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn properties(&self) -> &[PropertyRecord] {
        &self.properties
    }

    pub fn uses(&self) -> &[UsesEdge] {
        &self.uses
    }

    pub fn implications(&self) -> &[ImplicationRecord] {
        &self.implications
    }

    pub fn builds(&self) -> &[BuildRecord] {
        &self.builds
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    pub fn node(&self, id: &str) -> Option<&Node> {
        self.node_position.get(id).map(|&i| &self.nodes[i])
    }

    /// Declaration position of a node.
    pub fn position(&self, id: &str) -> Option<usize> {
        self.node_position.get(id).copied()
    }

    pub fn property(&self, id: &str) -> Option<&PropertyRecord> {
        self.properties.iter().find(|p| p.id == id)
    }

    /// Direct dependencies of a node, in record order.
    pub fn used_by(&self, id: &str) -> Vec<&str> {
        self.uses
            .iter()
            .filter(|e| e.user == id)
            .map(|e| e.used.as_str())
            .collect()
    }

    /// Properties never referenced by an implication, build, or existence
    /// assertion, in declaration order.
    pub fn unused_properties(&self) -> Vec<&str> {
        self.properties
            .iter()
            .filter(|p| {
                let id = &p.id;
                !self
                    .implications
                    .iter()
                    .any(|i| &i.from == id || &i.to == id)
                    && !self.builds.iter().any(|b| &b.target == id || &b.via == id)
                    && !self
                        .nodes
                        .iter()
                        .any(|n| n.asserts_existence_of.as_ref() == Some(id))
            })
            .map(|p| p.id.as_str())
            .collect()
    }
}
