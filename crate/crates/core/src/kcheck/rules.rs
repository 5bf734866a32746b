//! The ordering and licensing rules.

use super::{DepGraph, Finiteness, Rule, Violation};
use std::collections::BTreeSet;
use std::fmt::Write as _;

/// Ordering rules: every dependency must already be in place, and a
/// construction must not lean on an axiom granting existence of the very
/// property it builds.
pub fn check_k2(graph: &DepGraph) -> Vec<Violation> {
    let mut violations = Vec::new();
    for edge in graph.uses() {
        let user_pos = graph.position(&edge.user).expect("validated by parser");
        let used_pos = graph.position(&edge.used).expect("validated by parser");
        if used_pos > user_pos {
            violations.push(Violation {
                rule: Rule::K2Order,
                node: edge.user.clone(),
                message: format!(
                    "'{}' uses '{}', which is only declared later",
                    edge.user, edge.used
                ),
            });
        }
    }
    for build in graph.builds() {
        // breadth-first over uses edges, recording one witness path
        let mut queue = vec![build.construction.clone()];
        let mut parents: Vec<(String, String)> = Vec::new();
        let mut seen: BTreeSet<String> = BTreeSet::new();
        seen.insert(build.construction.clone());
        let mut offender: Option<String> = None;
        'search: while let Some(current) = queue.pop() {
            for used in graph.used_by(&current) {
                if seen.insert(used.to_string()) {
                    parents.push((used.to_string(), current.clone()));
                    let node = graph.node(used).expect("validated by parser");
                    if node.asserts_existence_of.as_deref() == Some(build.target.as_str()) {
                        offender = Some(used.to_string());
                        break 'search;
                    }
                    queue.insert(0, used.to_string());
                }
            }
        }
        if let Some(asserting) = offender {
            let mut chain = vec![asserting.clone()];
            while let Some((_, parent)) = parents.iter().find(|(child, _)| *child == chain[chain.len() - 1]) {
                chain.push(parent.clone());
            }
            chain.reverse();
            violations.push(Violation {
                rule: Rule::K2Existence,
                node: build.construction.clone(),
                message: format!(
                    "build target '{}' is asserted to exist by '{}', reached via uses chain {}",
                    build.target,
                    asserting,
                    chain.join(" -> ")
                ),
            });
        }
    }
    violations
}

/// How a build record fares under the licensing discipline.
#[derive(Debug, Clone, PartialEq)]
pub enum LicenseStatus {
    /// The build reproduces its target property directly.
    Direct,
    /// A direct build of a property declared infinite.
    DirectInfinite,
    /// Both implication directions are proved before the construction.
    LicensedK4 { forward_by: String, converse_by: String },
    /// At least one direction is missing at the construction's position.
    K3 {
        forward_by: Option<String>,
        converse_by: Option<String>,
    },
}

/// One row of the license table.
#[derive(Debug, Clone, PartialEq)]
pub struct LicenseRow {
    pub construction: String,
    pub target: String,
    pub via: String,
    pub status: LicenseStatus,
}

/// Licensing: an indirect build counts as a build of its target only when the
/// equivalence of the two properties is fully proved first.
pub fn check_licensing(graph: &DepGraph) -> (Vec<Violation>, Vec<LicenseRow>) {
    let mut violations = Vec::new();
    let mut rows = Vec::new();
    for build in graph.builds() {
        let build_pos = graph.position(&build.construction).expect("validated");
        let proved_before = |from: &str, to: &str| -> Option<String> {
            graph
                .implications()
                .iter()
                .find(|imp| {
                    imp.from == from
                        && imp.to == to
                        && graph.position(&imp.proved_by).expect("validated") < build_pos
                })
                .map(|imp| imp.proved_by.clone())
        };
        let status = if build.via == build.target {
            let finiteness = graph
                .property(&build.target)
                .expect("validated by parser")
                .finiteness;
            if finiteness == Finiteness::Infinite {
                violations.push(Violation {
                    rule: Rule::DirectInfinite,
                    node: build.construction.clone(),
                    message: format!(
                        "'{}' builds '{}' directly, but that property is declared infinite",
                        build.construction, build.target
                    ),
                });
                LicenseStatus::DirectInfinite
            } else {
                LicenseStatus::Direct
            }
        } else {
            let forward = proved_before(&build.via, &build.target);
            let converse = proved_before(&build.target, &build.via);
            match (forward, converse) {
                (Some(forward_by), Some(converse_by)) => LicenseStatus::LicensedK4 {
                    forward_by,
                    converse_by,
                },
                (forward_by, converse_by) => {
                    let mut missing = Vec::new();
                    if forward_by.is_none() {
                        missing.push(format!("{} -> {}", build.via, build.target));
                    }
                    if converse_by.is_none() {
                        missing.push(format!("{} -> {}", build.target, build.via));
                    }
                    let available = match (&forward_by, &converse_by) {
                        (Some(by), _) => {
                            format!("; {} -> {} is proved by '{by}'", build.via, build.target)
                        }
                        (_, Some(by)) => {
                            format!("; {} -> {} is proved by '{by}'", build.target, build.via)
                        }
                        _ => String::new(),
                    };
                    violations.push(Violation {
                        rule: Rule::K3,
                        node: build.construction.clone(),
                        message: format!(
                            "'{}' builds '{}' via '{}' without a prior proof of {}{}",
                            build.construction,
                            build.target,
                            build.via,
                            missing.join(" and "),
                            available
                        ),
                    });
                    LicenseStatus::K3 {
                        forward_by,
                        converse_by,
                    }
                }
            }
        };
        rows.push(LicenseRow {
            construction: build.construction.clone(),
            target: build.target.clone(),
            via: build.via.clone(),
            status,
        });
    }
    (violations, rows)
}

/// Violations in declaration order plus the license table.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisReport {
    pub violations: Vec<Violation>,
    pub licenses: Vec<LicenseRow>,
}

impl AnalysisReport {
    pub fn has_violations(&self) -> bool {
        !self.violations.is_empty()
    }

    /// Deterministic, byte-stable plain-text rendering.
    pub fn render(&self, graph: &DepGraph) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "violations: {}", self.violations.len());
        for v in &self.violations {
            let _ = writeln!(out, "{v}");
        }
        let _ = writeln!(out, "licenses: {}", self.licenses.len());
        for row in &self.licenses {
            match &row.status {
                LicenseStatus::Direct => {
                    let _ = writeln!(out, "{}: direct ({})", row.construction, row.target);
                }
                LicenseStatus::DirectInfinite => {
                    let _ = writeln!(
                        out,
                        "{}: direct-infinite ({})",
                        row.construction, row.target
                    );
                }
                LicenseStatus::LicensedK4 {
                    forward_by,
                    converse_by,
                } => {
                    let _ = writeln!(
                        out,
                        "{}: licensed-by-K4({forward_by}, {converse_by}) (target {} via {})",
                        row.construction, row.target, row.via
                    );
                    let uses_of = |id: &str| {
                        let used = graph.used_by(id);
                        if used.is_empty() {
                            String::new()
                        } else {
                            format!(" (uses: {})", used.join(", "))
                        }
                    };
                    let _ = writeln!(
                        out,
                        "  forward {} -> {} by {forward_by}{}",
                        row.via,
                        row.target,
                        uses_of(forward_by)
                    );
                    let _ = writeln!(
                        out,
                        "  converse {} -> {} by {converse_by}{}",
                        row.target,
                        row.via,
                        uses_of(converse_by)
                    );
                }
                LicenseStatus::K3 { .. } => {
                    let _ = writeln!(
                        out,
                        "{}: K3 (target {} via {})",
                        row.construction, row.target, row.via
                    );
                }
            }
        }
        out
    }
}

/// Runs the ordering rules, then licensing; violations are sorted by the
/// offending node's declaration position, then by rule.
pub fn analyze(graph: &DepGraph) -> AnalysisReport {
    let mut violations = check_k2(graph);
    let (license_violations, licenses) = check_licensing(graph);
    violations.extend(license_violations);
    violations.sort_by_key(|v| (graph.position(&v.node).unwrap_or(usize::MAX), v.rule));
    AnalysisReport {
        violations,
        licenses,
    }
}

#[cfg(test)]
mod tests {
    use super::super::{datasets, parse_graph, Rule};
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn book1_is_clean_and_licensed() {
        let g = parse_graph(datasets::ELEMENTS_BOOK1).unwrap();
        let report = analyze(&g);
        assert!(report.violations.is_empty(), "{:?}", report.violations);
        assert_eq!(report.licenses.len(), 1);
        let row = &report.licenses[0];
        assert_eq!(row.construction, "I.31");
        assert_eq!(
            row.status,
            LicenseStatus::LicensedK4 {
                forward_by: "I.27".into(),
                converse_by: "I.29".into()
            }
        );
        let text = report.render(&g);
        assert!(text.contains("violations: 0"));
        assert!(text.contains("I.31: licensed-by-K4(I.27, I.29)"));
        // the license chain shows where the fifth postulate enters
        assert!(text.contains("converse Q_b -> P_bc by I.29 (uses: post_5)"));
    }

    #[test]
    fn misplaced_book1_earns_exactly_one_k3() {
        let g = parse_graph(datasets::ELEMENTS_MISPLACED).unwrap();
        let report = analyze(&g);
        assert_eq!(report.violations.len(), 1, "{:?}", report.violations);
        let v = &report.violations[0];
        assert_eq!(v.rule, Rule::K3);
        assert_eq!(v.node, "I.31");
        assert!(v.message.contains("Q_b -> P_bc"));
    }

    #[test]
    fn bolyai_earns_k2_existence_and_k3() {
        let g = parse_graph(datasets::BOLYAI).unwrap();
        let report = analyze(&g);
        assert_eq!(report.violations.len(), 2, "{:?}", report.violations);
        assert_eq!(report.violations[0].rule, Rule::K2Existence);
        assert_eq!(report.violations[0].node, "bolyai");
        assert!(report.violations[0]
            .message
            .contains("bolyai -> prop_4.3 -> axiom_L"));
        assert_eq!(report.violations[1].rule, Rule::K3);
        assert_eq!(report.violations[1].node, "bolyai");
        // the missing converse is called out, the proved direction cited
        assert!(report.violations[1].message.contains("PX_eq_QR -> limiting_parallel"));
        assert!(report.violations[1].message.contains("prop_4.3"));
    }

    #[test]
    fn forward_reference_is_a_k2_order_violation() {
        let text = "\
node A kind=proposition
node B kind=proposition
uses A B
";
        let g = parse_graph(text).unwrap();
        let violations = check_k2(&g);
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].rule, Rule::K2Order);
        assert_eq!(violations[0].node, "A");
    }

    #[test]
    fn removing_the_converse_downgrades_the_license() {
        // book1 without I.29 (and without the records referring to it)
        let text: String = datasets::ELEMENTS_BOOK1
            .lines()
            .filter(|l| !l.contains("I.29"))
            .map(|l| format!("{l}\n"))
            .collect();
        let g = parse_graph(&text).unwrap();
        let report = analyze(&g);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].rule, Rule::K3);
        assert_eq!(report.violations[0].node, "I.31");
        assert!(matches!(
            report.licenses[0].status,
            LicenseStatus::K3 {
                forward_by: Some(_),
                converse_by: None
            }
        ));
    }

    #[test]
    fn direct_infinite_fires_only_on_infinite_properties() {
        let text = "\
property fin finite
property inf infinite
node C kind=construction
node D kind=construction
builds C target=inf via=inf
builds D target=fin via=fin
";
        let g = parse_graph(text).unwrap();
        let (violations, rows) = check_licensing(&g);
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].rule, Rule::DirectInfinite);
        assert_eq!(violations[0].node, "C");
        assert_eq!(rows[1].status, LicenseStatus::Direct);
    }

    #[test]
    fn license_requires_proofs_before_the_construction() {
        // both implications exist, but the converse is proved after the build
        let text = "\
property p finite
property q infinite
node F kind=proposition
node C kind=construction
node R kind=proposition
uses C F
implies p q by=F
implies q p by=R
builds C target=q via=p
";
        let g = parse_graph(text).unwrap();
        let (violations, rows) = check_licensing(&g);
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].rule, Rule::K3);
        assert!(matches!(rows[0].status, LicenseStatus::K3 { .. }));
    }

    #[test]
    fn every_violation_names_a_declared_node() {
        for text in [datasets::ELEMENTS_BOOK1, datasets::ELEMENTS_MISPLACED, datasets::BOLYAI] {
            let g = parse_graph(text).unwrap();
            for v in analyze(&g).violations {
                assert!(g.node(&v.node).is_some(), "violation at unknown node {}", v.node);
            }
        }
    }

    proptest! {
        /// Permuting comment and blank lines never changes the report.
        #[test]
        fn report_ignores_comments_and_whitespace(positions in prop::collection::vec(0usize..40, 0..8)) {
            let base = datasets::BOLYAI;
            let mut lines: Vec<String> = base.lines().map(|l| l.to_string()).collect();
            for (i, pos) in positions.iter().enumerate() {
                let insert_at = pos % (lines.len() + 1);
                let filler = if i % 2 == 0 { format!("# comment {i}") } else { String::new() };
                lines.insert(insert_at, filler);
            }
            let noisy = lines.join("\n");
            let g1 = parse_graph(base).unwrap();
            let g2 = parse_graph(&noisy).unwrap();
            prop_assert_eq!(analyze(&g1).render(&g1), analyze(&g2).render(&g2));
        }
    }
}
