use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Rational};

/// A directed arc; the parameter runs t=0 at `from` to t=1 at `to`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arc {
    pub id: u32,
    pub from: String,
    pub to: String,
}

/// A connected finite graph: nodes joined by arcs indexed 1..=r.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGraph {
    nodes: Vec<String>,
    arcs: Vec<Arc>,
}

/// A pattern: a graph, a one-point continuum, or an ordered cluster of
/// child patterns (the disjoint union of the children).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pattern {
    Graph(FiniteGraph),
    Cluster(Vec<Pattern>),
    Point(String),
}

/// Where a query point sits: on an arc at parameter t, or at a node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointTarget {
    Arc { arc: u32, t: Rational },
    Node { node: String },
}

/// A point of a pattern: a cluster path (child indices, 1-based) leading to
/// a graph or one-point leaf, then the target within that leaf.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternPoint {
    pub path: Vec<u32>,
    pub target: PointTarget,
}

impl FiniteGraph {
    /// Validates the graph invariants: arc indices 1..=r with no gaps,
    /// declared endpoints, no isolated nodes, connectivity.
    pub fn new(nodes: Vec<String>, mut arcs: Vec<Arc>) -> Result<Self> {
        if arcs.is_empty() {
            return Err(Error::NoArcs);
        }
        let mut declared: HashSet<&str> = HashSet::new();
        for node in &nodes {
            if node.is_empty() {
                return Err(Error::PatternSchema("empty node identifier".into()));
            }
            if !declared.insert(node) {
                return Err(Error::PatternSchema(format!("duplicate node `{node}`")));
            }
        }
        for arc in &arcs {
            for end in [&arc.from, &arc.to] {
                if !declared.contains(end.as_str()) {
                    return Err(Error::DanglingNode { arc: arc.id, node: end.clone() });
                }
            }
        }
        arcs.sort_by_key(|a| a.id);
        let r = arcs.len() as u32;
        for (k, arc) in arcs.iter().enumerate() {
            let expected = k as u32 + 1;
            if arc.id == expected {
                continue;
            }
            if arcs[..k].iter().any(|prior| prior.id == arc.id) {
                return Err(Error::DuplicateArcIndex(arc.id));
            }
            return Err(Error::ArcIndexGap { r, missing: expected });
        }
        let graph = FiniteGraph { nodes, arcs };
        for node in &graph.nodes {
            if graph.incidences(node)?.is_empty() {
                return Err(Error::IsolatedNode(node.clone()));
            }
        }
        if !graph.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(graph)
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    /// Arcs sorted by index; `arcs()[i]` has id `i+1`.
    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc_count(&self) -> u32 {
        self.arcs.len() as u32
    }

    pub fn arc(&self, id: u32) -> Result<&Arc> {
        if id >= 1 && (id as usize) <= self.arcs.len() {
            Ok(&self.arcs[id as usize - 1])
        } else {
            Err(Error::UnknownArc(id))
        }
    }

    /// All (arc index, endpoint parameter) pairs meeting the node, ordered
    /// by arc index then parameter; a loop arc contributes both ends.
    pub fn incidences(&self, node: &str) -> Result<Vec<(u32, u8)>> {
        if !self.nodes.iter().any(|n| n == node) {
            return Err(Error::UnknownNode(node.to_string()));
        }
        let mut list = Vec::new();
        for arc in &self.arcs {
            if arc.from == node {
                list.push((arc.id, 0));
            }
            if arc.to == node {
                list.push((arc.id, 1));
            }
        }
        Ok(list)
    }

    fn is_connected(&self) -> bool {
        let index: HashMap<&str, usize> =
            self.nodes.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let mut adjacency = vec![Vec::new(); self.nodes.len()];
        for arc in &self.arcs {
            let (a, b) = (index[arc.from.as_str()], index[arc.to.as_str()]);
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for &j in &adjacency[i] {
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// A tree is a connected graph with r = |nodes| − 1.
    pub fn is_tree(&self) -> bool {
        self.arcs.len() + 1 == self.nodes.len()
    }

    /// Cycle search by arc-aware depth-first traversal: a loop arc, a
    /// parallel arc, or a back edge each close a simple closed curve.
    pub fn has_cycle(&self) -> bool {
        let index: HashMap<&str, usize> =
            self.nodes.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let mut adjacency: Vec<Vec<(usize, u32)>> = vec![Vec::new(); self.nodes.len()];
        for arc in &self.arcs {
            let (a, b) = (index[arc.from.as_str()], index[arc.to.as_str()]);
            if a == b {
                return true;
            }
            adjacency[a].push((b, arc.id));
            adjacency[b].push((a, arc.id));
        }
        let mut seen = vec![false; self.nodes.len()];
        let mut stack: Vec<(usize, u32)> = vec![(0, 0)];
        seen[0] = true;
        while let Some((i, via)) = stack.pop() {
            for &(j, arc_id) in &adjacency[i] {
                if arc_id == via {
                    continue;
                }
                if seen[j] {
                    return true;
                }
                seen[j] = true;
                stack.push((j, arc_id));
            }
        }
        false
    }
}

impl Pattern {
    /// Follows a cluster path (1-based child indices) to the sub-pattern it
    /// names; the empty path names the pattern itself.
    pub fn resolve_path(&self, path: &[u32]) -> Result<&Pattern> {
        let mut current = self;
        for (depth, &step) in path.iter().enumerate() {
            match current {
                Pattern::Cluster(children) => {
                    if step == 0 || step as usize > children.len() {
                        return Err(Error::UnresolvablePath(path[..=depth].to_vec()));
                    }
                    current = &children[step as usize - 1];
                }
                _ => return Err(Error::UnresolvablePath(path[..=depth].to_vec())),
            }
        }
        Ok(current)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum PatternDoc {
    Graph { nodes: Vec<String>, arcs: Vec<ArcDoc> },
    Cluster { children: Vec<PatternDoc> },
    Point { node: String },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArcDoc {
    id: u32,
    from: String,
    to: String,
}

/// Serialized form of a query point or an address-row point.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointDoc {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub path: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arc: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node: Option<String>,
}

fn pattern_from_doc(doc: PatternDoc) -> Result<Pattern> {
    match doc {
        PatternDoc::Graph { nodes, arcs } => {
            let arcs = arcs
                .into_iter()
                .map(|a| Arc { id: a.id, from: a.from, to: a.to })
                .collect();
            Ok(Pattern::Graph(FiniteGraph::new(nodes, arcs)?))
        }
        PatternDoc::Cluster { children } => {
            if children.is_empty() {
                return Err(Error::EmptyCluster);
            }
            Ok(Pattern::Cluster(
                children.into_iter().map(pattern_from_doc).collect::<Result<_>>()?,
            ))
        }
        PatternDoc::Point { node } => {
            if node.is_empty() {
                return Err(Error::PatternSchema("empty node identifier".into()));
            }
            Ok(Pattern::Point(node))
        }
    }
}

fn pattern_to_doc(pattern: &Pattern) -> PatternDoc {
    match pattern {
        Pattern::Graph(g) => PatternDoc::Graph {
            nodes: g.nodes.clone(),
            arcs: g
                .arcs
                .iter()
                .map(|a| ArcDoc { id: a.id, from: a.from.clone(), to: a.to.clone() })
                .collect(),
        },
        Pattern::Cluster(children) => {
            PatternDoc::Cluster { children: children.iter().map(pattern_to_doc).collect() }
        }
        Pattern::Point(node) => PatternDoc::Point { node: node.clone() },
    }
}

/// Parses and validates a pattern document (JSON, schema in the crate docs).
pub fn parse_pattern(text: &str) -> Result<Pattern> {
    let doc: PatternDoc = serde_json::from_str(text)?;
    pattern_from_doc(doc)
}

/// Renders a pattern back to its document form; inverse of `parse_pattern`.
pub fn serialize_pattern(pattern: &Pattern) -> String {
    serde_json::to_string_pretty(&pattern_to_doc(pattern)).expect("document serialization")
}

impl PatternPoint {
    pub fn from_doc(doc: &PointDoc) -> Result<Self> {
        let target = match (&doc.arc, &doc.t, &doc.node) {
            (Some(arc), Some(t), None) => {
                PointTarget::Arc { arc: *arc, t: parse_rational(t)? }
            }
            (None, None, Some(node)) => PointTarget::Node { node: node.clone() },
            _ => {
                return Err(Error::PatternSchema(
                    "a point document needs either `arc` and `t`, or `node`".into(),
                ))
            }
        };
        Ok(PatternPoint { path: doc.path.clone(), target })
    }

    pub fn to_doc(&self) -> PointDoc {
        match &self.target {
            PointTarget::Arc { arc, t } => PointDoc {
                path: self.path.clone(),
                arc: Some(*arc),
                t: Some(format_rational(t)),
                node: None,
            },
            PointTarget::Node { node } => PointDoc {
                path: self.path.clone(),
                arc: None,
                t: None,
                node: Some(node.clone()),
            },
        }
    }
}

/// Parses a query-points document: a JSON array of point documents.
pub fn parse_points(text: &str) -> Result<Vec<PatternPoint>> {
    let docs: Vec<PointDoc> = serde_json::from_str(text)?;
    docs.iter().map(PatternPoint::from_doc).collect()
}

impl fmt::Display for PatternPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.path.is_empty() {
            let steps: Vec<String> = self.path.iter().map(u32::to_string).collect();
            write!(f, "path [{}] ", steps.join(","))?;
        }
        match &self.target {
            PointTarget::Arc { arc, t } => write!(f, "arc {arc} t={}", format_rational(t)),
            PointTarget::Node { node } => write!(f, "node {node}"),
        }
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    /// Simple 3-od: three arcs fanning out of a shared center `c`.
    pub const THREE_OD: &str = r#"{
        "type": "graph",
        "nodes": ["c", "l1", "l2", "l3"],
        "arcs": [
            {"id": 1, "from": "c", "to": "l1"},
            {"id": 2, "from": "c", "to": "l2"},
            {"id": 3, "from": "c", "to": "l3"}
        ]
    }"#;

    pub const SINGLE_ARC: &str = r#"{
        "type": "graph",
        "nodes": ["a", "b"],
        "arcs": [{"id": 1, "from": "a", "to": "b"}]
    }"#;

    pub const CIRCLE: &str = r#"{
        "type": "graph",
        "nodes": ["n"],
        "arcs": [{"id": 1, "from": "n", "to": "n"}]
    }"#;

    pub const THREE_POINTS: &str = r#"{
        "type": "cluster",
        "children": [
            {"type": "point", "node": "p1"},
            {"type": "point", "node": "p2"},
            {"type": "point", "node": "p3"}
        ]
    }"#;
}
