use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fiber::Fiber;
use crate::interval::{decode_fiber, fiber_unit_interval};
use crate::pattern::{FiniteGraph, Pattern, PatternPoint, PointDoc, PointTarget};
use crate::rational::{format_rational, Rational};
use crate::seq::BinSeq;
use crate::word::Word;

/// One compiled row: a pattern point, its fiber of Cantor addresses, and
/// the arc words that produced the fiber (audit trail). `redirected` marks
/// an arc-endpoint query that was answered by the owning node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AddressEntry {
    pub point: PatternPoint,
    pub fiber: Fiber,
    pub words: Vec<Word>,
    pub redirected: bool,
}

/// Which decoding rule matched a fiber: exact equality with the compiled
/// representation, or a singleton lying inside a one-point child's cone.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatchRule {
    Representative,
    ConeMember,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoded {
    pub point: PatternPoint,
    pub rule: MatchRule,
}

/// The prefix partition of the whole space into `r` cones, one per arc:
/// word i is `1^(i−1)·0` for i < r and `1^(r−1)` for i = r. For r = 1 the
/// single word is empty (the whole space); for r = 2 this is {0, 1}.
pub fn partition_words(r: u32) -> Result<Vec<Word>> {
    if r < 1 {
        return Err(Error::InvalidConfig("a partition needs at least one arc".into()));
    }
    let mut words = Vec::with_capacity(r as usize);
    for i in 1..=r {
        let ones = (if i < r { i - 1 } else { r - 1 }) as usize;
        let mut bits = vec![1u8; ones];
        if i < r {
            bits.push(0);
        }
        words.push(Word::new(bits).expect("bits are binary"));
    }
    Ok(words)
}

/// The fiber of an arc-interior point: the unit-interval fiber of t carried
/// into arc i's cone. Endpoints belong to nodes and are rejected here.
pub fn represent_arc_point(words: &[Word], i: u32, t: &Rational) -> Result<Fiber> {
    if i < 1 || i as usize > words.len() {
        return Err(Error::UnknownArc(i));
    }
    if t.is_negative() || *t > Rational::one() {
        return Err(Error::ValueOutOfRange(format_rational(t)));
    }
    if t.is_zero() || t.is_one() {
        return Err(Error::EndpointIsNode(format_rational(t)));
    }
    let word = &words[i as usize - 1];
    let carried: Vec<BinSeq> =
        fiber_unit_interval(t)?.iter().map(|e| word.apply(e)).collect();
    Fiber::new(carried)
}

/// The fiber of a node: for each incidence (arc t_j, endpoint p) one
/// address, the arc word applied to the all-zeros (p = 0) or all-ones
/// (p = 1) sequence. One element per incidence.
pub fn represent_node(words: &[Word], incidences: &[(u32, u8)]) -> Result<Fiber> {
    if incidences.is_empty() {
        return Err(Error::EmptyIncidenceList);
    }
    let mut elements = Vec::with_capacity(incidences.len());
    for &(arc, p) in incidences {
        if arc < 1 || arc as usize > words.len() {
            return Err(Error::UnknownArc(arc));
        }
        let end = if p == 0 { BinSeq::zeros() } else { BinSeq::ones() };
        elements.push(words[arc as usize - 1].apply(&end));
    }
    let fiber = Fiber::new(elements)?;
    debug_assert_eq!(fiber.len(), incidences.len());
    Ok(fiber)
}

struct ResolvedLeaf<'p> {
    prefix: Word,
    leaf: &'p Pattern,
}

fn resolve_leaf<'p>(pattern: &'p Pattern, path: &[u32]) -> Result<ResolvedLeaf<'p>> {
    let mut prefix = Word::empty();
    let mut current = pattern;
    for (depth, &step) in path.iter().enumerate() {
        let Pattern::Cluster(children) = current else {
            return Err(Error::UnresolvablePath(path[..=depth].to_vec()));
        };
        if step == 0 || step as usize > children.len() {
            return Err(Error::UnresolvablePath(path[..=depth].to_vec()));
        }
        let words = partition_words(children.len() as u32)?;
        prefix = prefix.join(&words[step as usize - 1]);
        current = &children[step as usize - 1];
    }
    if matches!(current, Pattern::Cluster(_)) {
        return Err(Error::UnresolvablePath(path.to_vec()));
    }
    Ok(ResolvedLeaf { prefix, leaf: current })
}

/// The accumulated cluster cone word along `path`: the prefix every address
/// under that leaf carries. Empty when the pattern is its own single leaf.
pub fn cluster_prefix(pattern: &Pattern, path: &[u32]) -> Result<Word> {
    Ok(resolve_leaf(pattern, path)?.prefix)
}

/// Compiles one pattern point to its fiber. Cluster steps contribute prefix
/// words from the sibling partition; the leaf contributes the arc-point or
/// node fiber; a one-point leaf is addressed by its cluster cone, realized
/// as the cone word applied to the all-zeros sequence. Queries for an arc
/// endpoint (t = 0 or 1) are answered with the owning node's fiber and
/// flagged `redirected`.
pub fn represent_point(pattern: &Pattern, query: &PatternPoint) -> Result<AddressEntry> {
    let ResolvedLeaf { prefix, leaf } = resolve_leaf(pattern, &query.path)?;
    match leaf {
        Pattern::Point(id) => {
            let PointTarget::Node { node } = &query.target else {
                return Err(Error::PointMismatch(format!(
                    "`{query}` targets an arc, but the leaf is the one-point continuum `{id}`"
                )));
            };
            if node != id {
                return Err(Error::UnknownNode(node.clone()));
            }
            Ok(AddressEntry {
                point: query.clone(),
                fiber: Fiber::singleton(prefix.apply(&BinSeq::zeros())),
                words: vec![prefix],
                redirected: false,
            })
        }
        Pattern::Graph(g) => {
            let words = partition_words(g.arc_count())?;
            let (target, redirected) = match &query.target {
                PointTarget::Arc { arc, t } => {
                    let arc_ref = g.arc(*arc)?;
                    if t.is_zero() {
                        (PointTarget::Node { node: arc_ref.from.clone() }, true)
                    } else if t.is_one() {
                        (PointTarget::Node { node: arc_ref.to.clone() }, true)
                    } else {
                        (query.target.clone(), false)
                    }
                }
                node => (node.clone(), false),
            };
            let (fiber, used) = match &target {
                PointTarget::Arc { arc, t } => {
                    let fiber = represent_arc_point(&words, *arc, t)?;
                    (fiber, vec![words[*arc as usize - 1].clone()])
                }
                PointTarget::Node { node } => {
                    let incidences = g.incidences(node)?;
                    let fiber = represent_node(&words, &incidences)?;
                    let mut used: Vec<Word> = incidences
                        .iter()
                        .map(|&(arc, _)| words[arc as usize - 1].clone())
                        .collect();
                    used.dedup();
                    (fiber, used)
                }
            };
            let carried = Fiber::new(fiber.iter().map(|e| prefix.apply(e)).collect())?;
            Ok(AddressEntry {
                point: PatternPoint { path: query.path.clone(), target },
                fiber: carried,
                words: used.iter().map(|w| prefix.join(w)).collect(),
                redirected,
            })
        }
        Pattern::Cluster(_) => unreachable!("resolve_leaf rejects cluster leaves"),
    }
}

/// Recovers the pattern point whose compiled representation is `fiber`.
/// One-point children additionally accept any singleton inside their cone,
/// reported via `MatchRule::ConeMember`.
pub fn decode_representation(pattern: &Pattern, fiber: &Fiber) -> Result<Decoded> {
    decode_at(pattern, fiber.elements().to_vec())
}

fn no_match(detail: impl Into<String>) -> Error {
    Error::NoMatch(detail.into())
}

fn decode_at(pattern: &Pattern, elements: Vec<BinSeq>) -> Result<Decoded> {
    match pattern {
        Pattern::Point(id) => {
            if elements.len() != 1 {
                return Err(no_match(format!(
                    "a one-point continuum has singleton fibers, got {} elements",
                    elements.len()
                )));
            }
            let rule = if elements[0] == BinSeq::zeros() {
                MatchRule::Representative
            } else {
                MatchRule::ConeMember
            };
            Ok(Decoded {
                point: PatternPoint {
                    path: vec![],
                    target: PointTarget::Node { node: id.clone() },
                },
                rule,
            })
        }
        Pattern::Cluster(children) => {
            let words = partition_words(children.len() as u32)?;
            let child = locate(&words, &elements[0])?;
            for e in &elements[1..] {
                if locate(&words, e)? != child {
                    return Err(no_match("fiber spans multiple cluster children"));
                }
            }
            let word = &words[child - 1];
            let stripped = elements.iter().map(|e| e.skip(word.len())).collect();
            let mut decoded = decode_at(&children[child - 1], stripped)?;
            decoded.point.path.insert(0, child as u32);
            Ok(decoded)
        }
        Pattern::Graph(g) => decode_graph(g, elements),
    }
}

fn decode_graph(g: &FiniteGraph, elements: Vec<BinSeq>) -> Result<Decoded> {
    let words = partition_words(g.arc_count())?;
    let mut located: Vec<(u32, BinSeq)> = Vec::with_capacity(elements.len());
    for e in &elements {
        let arc = locate(&words, e)?;
        located.push((arc as u32, e.skip(words[arc - 1].len())));
    }
    let constant = |e: &BinSeq| *e == BinSeq::zeros() || *e == BinSeq::ones();
    let point = if located.iter().all(|(_, residual)| constant(residual)) {
        let mut incidences: Vec<(u32, u8)> = located
            .iter()
            .map(|(arc, residual)| (*arc, u8::from(*residual == BinSeq::ones())))
            .collect();
        incidences.sort_unstable();
        let &(arc, p) = incidences.first().expect("fibers are nonempty");
        let arc_ref = g.arc(arc)?;
        let node = if p == 0 { &arc_ref.from } else { &arc_ref.to };
        if g.incidences(node)? != incidences {
            return Err(no_match(format!(
                "endpoint set does not cover every incidence of node `{node}`"
            )));
        }
        PointTarget::Node { node: node.clone() }
    } else {
        let arc = located[0].0;
        if located.iter().any(|(a, _)| *a != arc) {
            return Err(no_match("fiber spans multiple arcs without naming a node"));
        }
        let residuals = Fiber::new(located.into_iter().map(|(_, r)| r).collect())?;
        let t = decode_fiber(&residuals)
            .map_err(|_| no_match("residual values disagree within one arc"))?;
        if fiber_unit_interval(&t)? != residuals {
            return Err(no_match(format!(
                "residuals are not the full fiber of t={}",
                format_rational(&t)
            )));
        }
        PointTarget::Arc { arc, t }
    };
    Ok(Decoded {
        point: PatternPoint { path: vec![], target: point },
        rule: MatchRule::Representative,
    })
}

/// Index (1-based) of the unique partition word prefixing `x`.
fn locate(words: &[Word], x: &BinSeq) -> Result<usize> {
    words
        .iter()
        .position(|w| w.cone_contains(x))
        .map(|i| i + 1)
        .ok_or_else(|| no_match(format!("{x} lies in no arc cone of this level")))
}

/// All nodes plus all arc points t = k/d of every leaf, in deterministic
/// order: depth-first over cluster children, then nodes in document order,
/// then arcs by index with t ascending.
pub fn enumerate_table(pattern: &Pattern, denominator: u64) -> Result<Vec<AddressEntry>> {
    if denominator < 2 {
        return Err(Error::InvalidConfig(format!(
            "sample denominator {denominator} must be at least 2"
        )));
    }
    let mut rows = Vec::new();
    collect_rows(pattern, pattern, &mut Vec::new(), denominator, &mut rows)?;
    Ok(rows)
}

fn collect_rows(
    root: &Pattern,
    current: &Pattern,
    path: &mut Vec<u32>,
    denominator: u64,
    rows: &mut Vec<AddressEntry>,
) -> Result<()> {
    match current {
        Pattern::Cluster(children) => {
            for (i, child) in children.iter().enumerate() {
                path.push(i as u32 + 1);
                collect_rows(root, child, path, denominator, rows)?;
                path.pop();
            }
            Ok(())
        }
        Pattern::Point(id) => {
            let query = PatternPoint {
                path: path.clone(),
                target: PointTarget::Node { node: id.clone() },
            };
            rows.push(represent_point(root, &query)?);
            Ok(())
        }
        Pattern::Graph(g) => {
            for node in g.nodes() {
                let query = PatternPoint {
                    path: path.clone(),
                    target: PointTarget::Node { node: node.clone() },
                };
                rows.push(represent_point(root, &query)?);
            }
            for arc in g.arcs() {
                for k in 1..denominator {
                    let query = PatternPoint {
                        path: path.clone(),
                        target: PointTarget::Arc {
                            arc: arc.id,
                            t: crate::rational::ratio(k as i64, denominator as i64),
                        },
                    };
                    rows.push(represent_point(root, &query)?);
                }
            }
            Ok(())
        }
    }
}

/// Serialized address row: the shared text notations for each field.
#[derive(Serialize, Deserialize)]
pub struct AddressRow {
    pub point: PointDoc,
    pub fiber: Vec<String>,
    pub words: Vec<String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub redirected: bool,
}

impl AddressEntry {
    pub fn to_row(&self) -> AddressRow {
        AddressRow {
            point: self.point.to_doc(),
            fiber: self.fiber.iter().map(BinSeq::to_string).collect(),
            words: self.words.iter().map(Word::to_string).collect(),
            redirected: self.redirected,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::{fixtures, parse_pattern};
    use crate::rational::ratio;
    use crate::seq::seq;

    fn words_of(r: u32) -> Vec<String> {
        partition_words(r).unwrap().iter().map(Word::to_string).collect()
    }

    fn node_query(path: &[u32], node: &str) -> PatternPoint {
        PatternPoint {
            path: path.to_vec(),
            target: PointTarget::Node { node: node.into() },
        }
    }

    fn arc_query(path: &[u32], arc: u32, t: Rational) -> PatternPoint {
        PatternPoint { path: path.to_vec(), target: PointTarget::Arc { arc, t } }
    }

    #[test]
    fn partition_word_families() {
        assert_eq!(words_of(1), vec![""]);
        assert_eq!(words_of(2), vec!["0", "1"]);
        assert_eq!(words_of(3), vec!["0", "10", "11"]);
        assert_eq!(words_of(5), vec!["0", "10", "110", "1110", "1111"]);
        assert!(partition_words(0).is_err());
    }

    #[test]
    fn arc_point_fibers() {
        let words = partition_words(3).unwrap();
        let fiber = represent_arc_point(&words, 2, &ratio(1, 2)).unwrap();
        assert_eq!(fiber.elements(), &[seq("100(1)"), seq("101(0)")]);
        let whole = partition_words(1).unwrap();
        let fiber = represent_arc_point(&whole, 1, &ratio(1, 3)).unwrap();
        assert_eq!(fiber.elements(), &[seq("(01)")]);
        assert!(matches!(
            represent_arc_point(&words, 2, &ratio(0, 1)),
            Err(Error::EndpointIsNode(_))
        ));
        assert!(matches!(
            represent_arc_point(&words, 4, &ratio(1, 2)),
            Err(Error::UnknownArc(4))
        ));
        assert!(represent_arc_point(&words, 2, &ratio(3, 2)).is_err());
    }

    #[test]
    fn node_fibers() {
        let words = partition_words(3).unwrap();
        let center = represent_node(&words, &[(1, 0), (2, 0), (3, 0)]).unwrap();
        assert_eq!(center.elements(), &[seq("(0)"), seq("1(0)"), seq("11(0)")]);
        let leaf = represent_node(&words, &[(2, 1)]).unwrap();
        assert_eq!(leaf.elements(), &[seq("10(1)")]);
        let circle = represent_node(&partition_words(1).unwrap(), &[(1, 0), (1, 1)]).unwrap();
        assert_eq!(circle.elements(), &[BinSeq::zeros(), BinSeq::ones()]);
        assert!(matches!(represent_node(&words, &[]), Err(Error::EmptyIncidenceList)));
    }

    #[test]
    fn point_cluster_addresses() {
        let pattern = parse_pattern(fixtures::THREE_POINTS).unwrap();
        let entry = represent_point(&pattern, &node_query(&[2], "p2")).unwrap();
        assert_eq!(entry.fiber.elements(), &[seq("1(0)")]);
        assert_eq!(entry.words, vec!["10".parse().unwrap()]);
        assert!(!entry.redirected);
        assert!(matches!(
            represent_point(&pattern, &node_query(&[5], "p5")),
            Err(Error::UnresolvablePath(p)) if p == vec![5]
        ));
        assert!(matches!(
            represent_point(&pattern, &node_query(&[2], "p1")),
            Err(Error::UnknownNode(_))
        ));
        assert!(matches!(
            represent_point(&pattern, &arc_query(&[2], 1, ratio(1, 2))),
            Err(Error::PointMismatch(_))
        ));
    }

    #[test]
    fn endpoint_queries_redirect_to_the_owning_node() {
        let pattern = parse_pattern(fixtures::THREE_OD).unwrap();
        let entry = represent_point(&pattern, &arc_query(&[], 2, ratio(0, 1))).unwrap();
        assert!(entry.redirected);
        assert_eq!(entry.point, node_query(&[], "c"));
        assert_eq!(
            entry.fiber.elements(),
            &[seq("(0)"), seq("1(0)"), seq("11(0)")]
        );
        let entry = represent_point(&pattern, &arc_query(&[], 2, ratio(1, 1))).unwrap();
        assert!(entry.redirected);
        assert_eq!(entry.point, node_query(&[], "l2"));
        assert_eq!(entry.fiber.elements(), &[seq("10(1)")]);
    }

    #[test]
    fn polycrystal_prefixing() {
        let polycrystal = format!(
            r#"{{"type":"cluster","children":[{},{}]}}"#,
            fixtures::THREE_OD,
            fixtures::SINGLE_ARC
        );
        let pattern = parse_pattern(&polycrystal).unwrap();
        let entry = represent_point(&pattern, &node_query(&[1], "c")).unwrap();
        assert_eq!(
            entry.fiber.elements(),
            &[seq("(0)"), seq("01(0)"), seq("011(0)")]
        );
        assert_eq!(
            entry.words,
            vec!["00".parse().unwrap(), "010".parse().unwrap(), "011".parse().unwrap()]
        );
    }

    #[test]
    fn decode_inverts_representation() {
        let pattern = parse_pattern(fixtures::THREE_OD).unwrap();
        let center = Fiber::new(vec![seq("(0)"), seq("1(0)"), seq("11(0)")]).unwrap();
        let decoded = decode_representation(&pattern, &center).unwrap();
        assert_eq!(decoded.point, node_query(&[], "c"));
        assert_eq!(decoded.rule, MatchRule::Representative);
        let arc_fiber = Fiber::new(vec![seq("100(1)"), seq("101(0)")]).unwrap();
        let decoded = decode_representation(&pattern, &arc_fiber).unwrap();
        assert_eq!(decoded.point, arc_query(&[], 2, ratio(1, 2)));
    }

    #[test]
    fn decode_accepts_cone_members_of_point_children() {
        let pattern = parse_pattern(fixtures::THREE_POINTS).unwrap();
        let decoded =
            decode_representation(&pattern, &Fiber::singleton(BinSeq::ones())).unwrap();
        assert_eq!(decoded.point, node_query(&[3], "p3"));
        assert_eq!(decoded.rule, MatchRule::ConeMember);
        let decoded =
            decode_representation(&pattern, &Fiber::singleton(seq("1(0)"))).unwrap();
        assert_eq!(decoded.point, node_query(&[2], "p2"));
        assert_eq!(decoded.rule, MatchRule::Representative);
    }

    #[test]
    fn decode_rejects_partial_and_mixed_fibers() {
        let pattern = parse_pattern(fixtures::THREE_OD).unwrap();
        // Two of the center's three incidences: not a decomposition point.
        let partial = Fiber::new(vec![seq("(0)"), seq("1(0)")]).unwrap();
        assert!(matches!(decode_representation(&pattern, &partial), Err(Error::NoMatch(_))));
        // Half of the dyadic fiber of t=1/2 on arc 1.
        let half = Fiber::singleton(seq("00(1)"));
        assert!(matches!(decode_representation(&pattern, &half), Err(Error::NoMatch(_))));
        // Spans two cluster children.
        let cluster = parse_pattern(fixtures::THREE_POINTS).unwrap();
        let spanning = Fiber::new(vec![BinSeq::zeros(), BinSeq::ones()]).unwrap();
        assert!(matches!(decode_representation(&cluster, &spanning), Err(Error::NoMatch(_))));
    }

    #[test]
    fn table_row_counts() {
        let three_od = parse_pattern(fixtures::THREE_OD).unwrap();
        assert_eq!(enumerate_table(&three_od, 2).unwrap().len(), 7);
        let arc = parse_pattern(fixtures::SINGLE_ARC).unwrap();
        assert_eq!(enumerate_table(&arc, 4).unwrap().len(), 5);
        let pair = format!(
            r#"{{"type":"cluster","children":[{0},{0}]}}"#,
            fixtures::SINGLE_ARC
        );
        let cluster = parse_pattern(&pair).unwrap();
        let rows = enumerate_table(&cluster, 2).unwrap();
        assert_eq!(rows.len(), 6);
        for (i, a) in rows.iter().enumerate() {
            for b in &rows[..i] {
                assert!(a.fiber.disjoint_from(&b.fiber), "{} vs {}", a.point, b.point);
            }
        }
        assert!(enumerate_table(&arc, 1).is_err());
    }

    #[test]
    fn table_round_trips_through_decode() {
        let polycrystal = format!(
            r#"{{"type":"cluster","children":[{},{}]}}"#,
            fixtures::THREE_OD,
            fixtures::CIRCLE
        );
        for text in
            [fixtures::THREE_OD, fixtures::CIRCLE, fixtures::THREE_POINTS, &polycrystal]
        {
            let pattern = parse_pattern(text).unwrap();
            for row in enumerate_table(&pattern, 4).unwrap() {
                let decoded = decode_representation(&pattern, &row.fiber).unwrap();
                assert_eq!(decoded.point, row.point, "{}", row.point);
                assert_eq!(decoded.rule, MatchRule::Representative);
            }
        }
    }

    #[test]
    fn every_fiber_element_starts_with_an_audit_word() {
        let pattern = parse_pattern(fixtures::THREE_OD).unwrap();
        for row in enumerate_table(&pattern, 3).unwrap() {
            for e in &row.fiber {
                assert!(
                    row.words.iter().any(|w| w.cone_contains(e)),
                    "{e} misses all of {:?}",
                    row.words
                );
            }
        }
    }
}
