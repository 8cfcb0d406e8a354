use std::collections::HashMap;
use std::time::Instant;

use num_integer::Integer;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bits::{bits_string, primitive_root};
use crate::cmts::{cmts_expansion, cmts_value};
use crate::compiler::{
    cluster_prefix, decode_representation, enumerate_table, partition_words, MatchRule,
};
use crate::error::{Error, Result};
use crate::interval::{classify, decode_fiber, fiber_unit_interval, DyadicClass};
use crate::pattern::{parse_pattern, serialize_pattern, Pattern, PatternPoint, PointTarget};
use crate::rational::{format_rational, half_pow, ratio, Rational};
use crate::seq::{binary_value, metric, BinSeq};
use crate::word::{cone_relation, ConeRelation, Word};

/// The finite stand-in for the whole sequence space: all 2^N bit strings of
/// length N, enumerated lexicographically.
pub struct TruncatedSpace {
    depth: usize,
}

impl TruncatedSpace {
    pub fn new(depth: usize) -> Result<Self> {
        if !(1..=30).contains(&depth) {
            return Err(Error::InvalidConfig(format!(
                "truncation depth {depth} must lie in 1..=30"
            )));
        }
        Ok(TruncatedSpace { depth })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn len(&self) -> u64 {
        1 << self.depth
    }

    /// All member strings in lexicographic order.
    pub fn strings(&self) -> impl Iterator<Item = Vec<u8>> + '_ {
        let depth = self.depth;
        (0..self.len()).map(move |v| {
            (0..depth).map(|i| ((v >> (depth - 1 - i)) & 1) as u8).collect()
        })
    }
}

#[derive(Clone, Debug)]
pub struct PartitionWitness {
    /// Lexicographically least violating string.
    pub string: String,
    /// How many family words prefix it (anything but 1 violates).
    pub matches: usize,
}

#[derive(Clone, Debug)]
pub struct PartitionReport {
    pub checked: u64,
    pub violations: u64,
    pub witness: Option<PartitionWitness>,
}

impl PartitionReport {
    pub fn pass(&self) -> bool {
        self.violations == 0
    }
}

/// Verifies that every depth-N string has exactly one family word as a
/// prefix. Enumeration is lexicographic, so the recorded witness is the
/// least violating string.
pub fn check_partition(words: &[Word], depth: usize) -> Result<PartitionReport> {
    if words.is_empty() {
        return Err(Error::EmptyWordFamily);
    }
    let longest = words.iter().map(Word::len).max().unwrap_or(0);
    if longest > depth {
        return Err(Error::DepthTooSmall { depth, word_len: longest });
    }
    let space = TruncatedSpace::new(depth)?;
    let mut violations = 0;
    let mut witness = None;
    for s in space.strings() {
        let matches = words.iter().filter(|w| s.starts_with(w.bits())).count();
        if matches != 1 {
            violations += 1;
            witness.get_or_insert_with(|| PartitionWitness {
                string: bits_string(&s),
                matches,
            });
        }
    }
    Ok(PartitionReport { checked: space.len(), violations, witness })
}

#[derive(Clone, Debug)]
pub struct TruncationCheck {
    pub exact: Rational,
    pub truncated: Rational,
    pub bound: Rational,
    pub ok: bool,
}

/// Independent route to the metric: plain summation of the first N terms,
/// which must sit within the geometric tail bound 2^(−N) of the exact value.
pub fn check_metric_truncation(x: &BinSeq, y: &BinSeq, depth: usize) -> TruncationCheck {
    let exact = metric(x, y);
    let truncated = truncated_metric(x, y, depth);
    let bound = half_pow(depth);
    let ok = (&exact - &truncated).abs() <= bound;
    TruncationCheck { exact, truncated, bound, ok }
}

pub fn truncated_metric(x: &BinSeq, y: &BinSeq, depth: usize) -> Rational {
    let mut sum = ratio(0, 1);
    for i in 1..=depth {
        if x.bit(i) != y.bit(i) {
            sum += half_pow(i);
        }
    }
    sum
}

pub fn truncated_binary(x: &BinSeq, depth: usize) -> Rational {
    let mut sum = ratio(0, 1);
    for i in 1..=depth {
        if x.bit(i) == 1 {
            sum += half_pow(i);
        }
    }
    sum
}

pub fn truncated_cmts(x: &BinSeq, depth: usize) -> Rational {
    let mut sum = ratio(0, 1);
    let mut weight = ratio(1, 3);
    for i in 1..=depth {
        if x.bit(i) == 1 {
            sum += ratio(2, 1) * &weight;
        }
        weight *= ratio(1, 3);
    }
    sum
}

/// The second-level cone family as literally printed in the source
/// construction: relative words `0`, `1^(j−1)·0^j` for 1 < j < n, and
/// `1^(n−1)`. For n ≥ 3 the repeated-zero block leaves gaps, so this family
/// fails to partition; the corrected sub-decomposition reuses the
/// first-level pattern instead.
pub fn literal_second_level_words(n: u32) -> Result<Vec<Word>> {
    if n < 2 {
        return Err(Error::InvalidConfig(format!(
            "second-level family needs n ≥ 2, got {n}"
        )));
    }
    let mut words = Vec::with_capacity(n as usize);
    for j in 1..=n {
        let bits = if j == 1 {
            vec![0]
        } else if j < n {
            let mut b = vec![1u8; j as usize - 1];
            b.extend(std::iter::repeat(0).take(j as usize));
            b
        } else {
            vec![1u8; n as usize - 1]
        };
        words.push(Word::new(bits).expect("bits are binary"));
    }
    Ok(words)
}

/// Every eventually periodic sequence whose canonical form satisfies
/// |preamble| + |period| ≤ `max_total`.
pub fn all_canonical(max_total: usize) -> Vec<BinSeq> {
    fn bitstrings(len: usize) -> Vec<Vec<u8>> {
        (0..1u32 << len)
            .map(|v| (0..len).map(|i| ((v >> (len - 1 - i)) & 1) as u8).collect())
            .collect()
    }
    let mut out = Vec::new();
    for p in 1..=max_total {
        for per in bitstrings(p) {
            if primitive_root(&per).len() != p {
                continue;
            }
            for m in 0..=max_total - p {
                for pre in bitstrings(m) {
                    if m > 0 && pre[m - 1] == per[p - 1] {
                        continue;
                    }
                    let x = BinSeq::new(pre.clone(), per.clone()).expect("valid bits");
                    debug_assert_eq!((x.preamble(), x.period()), (&pre[..], &per[..]));
                    out.push(x);
                }
            }
        }
    }
    out
}

/// Suite configuration; `Default` matches the bundled acceptance run.
#[derive(Clone)]
pub struct SuiteConfig {
    /// Exhaustive truncation depth N for partition checks.
    pub depth: usize,
    /// Sample count for randomized identities.
    pub samples: usize,
    /// Exhaustive bound for interval-fiber checks (all reduced a/b, b ≤ this).
    pub max_denominator: i64,
    /// Sample denominator for enumerate_table checks.
    pub table_denominator: u64,
    /// Named patterns to compile; empty means the bundled corpus.
    pub corpus: Vec<(String, Pattern)>,
    /// Adds a deliberately false assertion (the literal second-level family
    /// claimed as a partition) so failure reporting can be exercised.
    pub inject_fault: bool,
    /// Base seed for the fixed-seed samplers.
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            depth: 12,
            samples: 200,
            max_denominator: 1024,
            table_denominator: 8,
            corpus: Vec::new(),
            inject_fault: false,
            seed: 0x5EED,
        }
    }
}

/// One executed invariant: machine-readable line of the suite report.
#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub millis: u128,
}

impl CheckRecord {
    pub fn pass(&self) -> bool {
        self.status == "pass"
    }
}

#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub records: Vec<CheckRecord>,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        self.records.iter().all(CheckRecord::pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.pass())
    }
}

struct Suite<'c> {
    config: &'c SuiteConfig,
    corpus: Vec<(String, Pattern)>,
    records: Vec<CheckRecord>,
}

/// Runs every module invariant at desk scale and reports one record per
/// check. A failing record carries the first (for enumerations: least)
/// witness found.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    if config.samples < 1 {
        return Err(Error::InvalidConfig("sample count must be at least 1".into()));
    }
    if config.max_denominator < 1 {
        return Err(Error::InvalidConfig("max denominator must be at least 1".into()));
    }
    if config.table_denominator < 2 {
        return Err(Error::InvalidConfig("table denominator must be at least 2".into()));
    }
    TruncatedSpace::new(config.depth)?;
    let corpus = if config.corpus.is_empty() {
        crate::corpus::bundled()
    } else {
        config.corpus.clone()
    };
    let mut suite = Suite { config, corpus, records: Vec::new() };
    suite.run_all()?;
    Ok(SuiteReport { records: suite.records })
}

fn seed_for(base: u64, name: &str) -> u64 {
    name.bytes().fold(base ^ 0x9E37_79B9_7F4A_7C15, |acc, b| {
        (acc ^ b as u64).wrapping_mul(0x100_0000_01B3)
    })
}

fn random_seq(rng: &mut ChaCha8Rng) -> BinSeq {
    let m = rng.gen_range(0..=6);
    let p = rng.gen_range(1..=6);
    let pre = (0..m).map(|_| rng.gen_range(0..=1u8)).collect();
    let per = (0..p).map(|_| rng.gen_range(0..=1u8)).collect();
    BinSeq::new(pre, per).expect("valid bits")
}

fn random_word(rng: &mut ChaCha8Rng, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    Word::new((0..len).map(|_| rng.gen_range(0..=1u8)).collect()).expect("valid bits")
}

impl Suite<'_> {
    fn run_all(&mut self) -> Result<()> {
        self.check("contraction-halves-metric", Self::contraction_halves_metric)?;
        self.check("self-similar-cover", Self::self_similar_cover)?;
        self.check("metric-axioms", Self::metric_axioms)?;
        self.check("word-composition", Self::word_composition)?;
        self.check("quotient-lipschitz", Self::quotient_lipschitz)?;
        self.check("cmts-digit-property", Self::cmts_digit_property)?;
        self.check("cmts-distortion-bound", Self::cmts_distortion_bound)?;
        self.check("canonical-form-stable", Self::canonical_form_stable)?;
        self.check("interval-round-trip", Self::interval_round_trip)?;
        self.check("interval-cardinality-law", Self::interval_cardinality_law)?;
        self.check("interval-fiber-partition", Self::interval_fiber_partition)?;
        self.check("interval-surjectivity", Self::interval_surjectivity)?;
        self.check("incidence-degree-sum", Self::incidence_degree_sum)?;
        self.check("pattern-serialization-round-trip", Self::pattern_round_trip)?;
        self.check("tree-detection", Self::tree_detection)?;
        self.check("partition-words-partition", Self::partition_words_partition)?;
        self.check("table-fibers-disjoint", Self::table_fibers_disjoint)?;
        self.check("representation-round-trip", Self::representation_round_trip)?;
        self.check("node-fiber-shape", Self::node_fiber_shape)?;
        self.check("arc-fiber-dyadic-law", Self::arc_fiber_dyadic_law)?;
        self.check("cluster-prefix-similarity", Self::cluster_prefix_similarity)?;
        self.check("truncation-agreement", Self::truncation_agreement)?;
        self.check("nested-cones-shrink", Self::nested_cones_shrink)?;
        self.check("second-level-anomaly", Self::second_level_anomaly)?;
        if self.config.inject_fault {
            self.check("injected-fault", Self::injected_fault)?;
        }
        Ok(())
    }

    fn check(
        &mut self,
        name: &str,
        body: impl Fn(&Self, &mut ChaCha8Rng) -> Result<Option<String>>,
    ) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed_for(self.config.seed, name));
        let started = Instant::now();
        let witness = body(self, &mut rng)?;
        self.records.push(CheckRecord {
            name: name.to_string(),
            status: if witness.is_none() { "pass" } else { "fail" },
            witness,
            millis: started.elapsed().as_millis(),
        });
        Ok(())
    }

    fn sample_pairs(&self, rng: &mut ChaCha8Rng) -> Vec<(BinSeq, BinSeq)> {
        (0..self.config.samples)
            .map(|_| (random_seq(rng), random_seq(rng)))
            .collect()
    }

    fn graphs(&self) -> Vec<(String, &crate::pattern::FiniteGraph)> {
        fn walk<'p>(
            name: &str,
            pattern: &'p Pattern,
            out: &mut Vec<(String, &'p crate::pattern::FiniteGraph)>,
        ) {
            match pattern {
                Pattern::Graph(g) => out.push((name.to_string(), g)),
                Pattern::Cluster(children) => {
                    for (i, child) in children.iter().enumerate() {
                        walk(&format!("{name}[{}]", i + 1), child, out);
                    }
                }
                Pattern::Point(_) => {}
            }
        }
        let mut out = Vec::new();
        for (name, pattern) in &self.corpus {
            walk(name, pattern, &mut out);
        }
        out
    }

    fn contraction_halves_metric(&self, rng: &mut ChaCha8Rng) -> Result<Option<String>> {
        for (x, y) in self.sample_pairs(rng) {
            let d = metric(&x, &y);
            for k in [0u8, 1] {
                let w = Word::new(vec![k])?;
                let contracted = metric(&w.apply(&x), &w.apply(&y));
                if contracted != &d / ratio(2, 1) {
                    return Ok(Some(format!(
                        "k={k} x={x} y={y}: {} != {}/2",
                        format_rational(&contracted),
                        format_rational(&d)
                    )));
                }
            }
        }
        Ok(None)
    }

    fn self_similar_cover(&self, rng: &mut ChaCha8Rng) -> Result<Option<String>> {
        let report = check_partition(&[Word::new(vec![0])?, Word::new(vec![1])?], self.config.depth)?;
        if let Some(w) = report.witness {
            return Ok(Some(format!("{} matched {} of {{0,1}}", w.string, w.matches)));
        }
        for _ in 0..self.config.samples {
            let x = random_seq(rng);
            let in_zero = Word::new(vec![0])?.cone_contains(&x);
            let in_one = Word::new(vec![1])?.cone_contains(&x);
            if in_zero == in_one {
                return Ok(Some(format!("{x} lies in {} of the two half-cones", 2 * u8::from(in_zero))));
            }
        }
        Ok(None)
    }

    fn metric_axioms(&self, rng: &mut ChaCha8Rng) -> Result<Option<String>> {
        let zero = ratio(0, 1);
        for _ in 0..self.config.samples {
            let (x, y, z) = (random_seq(rng), random_seq(rng), random_seq(rng));
            if metric(&x, &y) != metric(&y, &x) {
                return Ok(Some(format!("symmetry fails for {x}, {y}")));
            }
            let d_xy = metric(&x, &y);
            if (d_xy == zero) != (x == y) {
                return Ok(Some(format!("identity fails for {x}, {y}")));
            }
            if metric(&x, &z) > &d_xy + metric(&y, &z) {
                return Ok(Some(format!("triangle fails for {x}, {y}, {z}")));
            }
        }
        Ok(None)
    }

    fn word_composition(&self, rng: &mut ChaCha8Rng) -> Result<Option<String>> {
        for _ in 0..self.config.samples {
            let (w1, w2) = (random_word(rng, 6), random_word(rng, 6));
            let x = random_seq(rng);
            if w1.apply(&w2.apply(&x)) != w1.join(&w2).apply(&x) {
                return Ok(Some(format!("w1={w1} w2={w2} x={x}")));
            }
        }
        Ok(None)
    }

    fn quotient_lipschitz(&self, rng: &mut ChaCha8Rng) -> Result<Option<String>> {
        for (x, y) in self.sample_pairs(rng) {
            if (binary_value(&x) - binary_value(&y)).abs() > metric(&x, &y) {
                return Ok(Some(format!("x={x} y={y}")));
            }
        }
        Ok(None)
    }

    fn cmts_digit_property(&self, rng: &mut ChaCha8Rng) -> Result<Option<String>> {
        for _ in 0..self.config.samples {
            let x = random_seq(rng);
            let value = cmts_value(&x);
            let Some((pre, per)) = cmts_expansion(&value) else {
                return Ok(Some(format!(
                    "h({x}) = {} has no digit-{{0,2}} expansion",
                    format_rational(&value)
                )));
            };
            let doubled = crate::bits::canonical_digits(
                &x.preamble().iter().map(|&b| 2 * b).collect::<Vec<_>>(),
                &x.period().iter().map(|&b| 2 * b).collect::<Vec<_>>(),
            );
            if x != BinSeq::ones() && (pre, per) != doubled {
                return Ok(Some(format!("digits of h({x}) differ from the doubled bits")));
            }
            let y = random_seq(rng);
            if x != y && cmts_value(&x) == cmts_value(&y) {
                return Ok(Some(format!("h collides on {x} and {y}")));
            }
        }
        Ok(None)
    }

    fn cmts_distortion_bound(&self, rng: &mut ChaCha8Rng) -> Result<Option<String>> {
        for (x, y) in self.sample_pairs(rng) {
            if (cmts_value(&x) - cmts_value(&y)).abs() > ratio(2, 1) * metric(&x, &y) {
                return Ok(Some(format!("x={x} y={y}")));
            }
        }
        Ok(None)
    }

    fn canonical_form_stable(&self, rng: &mut ChaCha8Rng) -> Result<Option<String>> {
        for _ in 0..self.config.samples {
            let m = rng.gen_range(0..=5);
            let p = rng.gen_range(1..=5);
            let pre: Vec<u8> = (0..m).map(|_| rng.gen_range(0..=1)).collect();
            let per: Vec<u8> = (0..p).map(|_| rng.gen_range(0..=1)).collect();
            let x = BinSeq::new(pre.clone(), per.clone())?;
            let again = BinSeq::new(x.preamble().to_vec(), x.period().to_vec())?;
            if again != x {
                return Ok(Some(format!("canonical form of {x} is unstable")));
            }
            for i in 1..=3 * (m + p) {
                let raw = if i - 1 < m { pre[i - 1] } else { per[(i - 1 - m) % p] };
                if x.bit(i) != raw {
                    return Ok(Some(format!(
                        "bit {i} of {}({}) changed under canonicalization",
                        bits_string(&pre),
                        bits_string(&per)
                    )));
                }
            }
        }
        Ok(None)
    }

    fn reduced_unit_rationals(&self) -> Vec<Rational> {
        let mut out = Vec::new();
        for b in 1..=self.config.max_denominator {
            for a in 0..=b {
                if a.gcd(&b) == 1 {
                    out.push(ratio(a, b));
                }
            }
        }
        out
    }

    fn interval_round_trip(&self, _rng: &mut ChaCha8Rng) -> Result<Option<String>> {
        for y in self.reduced_unit_rationals() {
            let fiber = fiber_unit_interval(&y)?;
            let back = decode_fiber(&fiber)?;
            if back != y {
                return Ok(Some(format!(
                    "decode(fiber({})) = {}",
                    format_rational(&y),
                    format_rational(&back)
                )));
            }
        }
        Ok(None)
    }

    fn interval_cardinality_law(&self, _rng: &mut ChaCha8Rng) -> Result<Option<String>> {
        for y in self.reduced_unit_rationals() {
            let fiber = fiber_unit_interval(&y)?;
            let dyadic = matches!(classify(&y)?, DyadicClass::DyadicInterior { .. });
            if (fiber.len() == 2) != dyadic || fiber.len() > 2 {
                return Ok(Some(format!(
                    "|fiber({})| = {}",
                    format_rational(&y),
                    fiber.len()
                )));
            }
        }
        Ok(None)
    }

    fn interval_fiber_partition(&self, _rng: &mut ChaCha8Rng) -> Result<Option<String>> {
        let bound = self.config.max_denominator.min(128);
        let mut owner: HashMap<BinSeq, Rational> = HashMap::new();
        for b in 1..=bound {
            for a in 0..=b {
                if a.gcd(&b) != 1 {
                    continue;
                }
                let y = ratio(a, b);
                let fiber = fiber_unit_interval(&y)?;
                for e in &fiber {
                    if let Some(prior) = owner.insert(e.clone(), y.clone()) {
                        if prior != y {
                            return Ok(Some(format!(
                                "{e} lies in the fibers of {} and {}",
                                format_rational(&prior),
                                format_rational(&y)
                            )));
                        }
                    }
                }
            }
        }
        Ok(None)
    }

    fn interval_surjectivity(&self, _rng: &mut ChaCha8Rng) -> Result<Option<String>> {
        for x in all_canonical(10) {
            let fiber = fiber_unit_interval(&binary_value(&x))?;
            if !fiber.contains(&x) {
                return Ok(Some(format!("{x} missing from the fiber of its own value")));
            }
        }
        Ok(None)
    }

    fn incidence_degree_sum(&self, _rng: &mut ChaCha8Rng) -> Result<Option<String>> {
        for (name, g) in self.graphs() {
            let total: usize = g
                .nodes()
                .iter()
                .map(|n| g.incidences(n).map(|v| v.len()))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .sum();
            if total != 2 * g.arc_count() as usize {
                return Ok(Some(format!(
                    "{name}: Σ|incidences| = {total}, expected {}",
                    2 * g.arc_count()
                )));
            }
        }
        Ok(None)
    }

    fn pattern_round_trip(&self, _rng: &mut ChaCha8Rng) -> Result<Option<String>> {
        for (name, pattern) in &self.corpus {
            let round = parse_pattern(&serialize_pattern(pattern))?;
            if &round != pattern {
                return Ok(Some(format!("{name} changed under serialization")));
            }
        }
        Ok(None)
    }

    fn tree_detection(&self, _rng: &mut ChaCha8Rng) -> Result<Option<String>> {
        for (name, g) in self.graphs() {
            if g.is_tree() == g.has_cycle() {
                return Ok(Some(format!(
                    "{name}: is_tree={} but has_cycle={}",
                    g.is_tree(),
                    g.has_cycle()
                )));
            }
        }
        Ok(None)
    }

    fn partition_words_partition(&self, _rng: &mut ChaCha8Rng) -> Result<Option<String>> {
        let desk = all_canonical(10);
        for r in 1..=8 {
            let words = partition_words(r)?;
            let report = check_partition(&words, self.config.depth)?;
            if let Some(w) = report.witness {
                return Ok(Some(format!("r={r}: {} matched {}", w.string, w.matches)));
            }
            for (i, a) in words.iter().enumerate() {
                for b in &words[..i] {
                    if cone_relation(a, b) != ConeRelation::Disjoint {
                        return Ok(Some(format!("r={r}: words {a} and {b} overlap")));
                    }
                }
            }
            for x in &desk {
                let count = words.iter().filter(|w| w.cone_contains(x)).count();
                if count != 1 {
                    return Ok(Some(format!("r={r}: {x} has {count} covering words")));
                }
            }
        }
        Ok(None)
    }

    fn table_fibers_disjoint(&self, _rng: &mut ChaCha8Rng) -> Result<Option<String>> {
        for (name, pattern) in &self.corpus {
            let rows = enumerate_table(pattern, self.config.table_denominator)?;
            let mut owner: HashMap<&BinSeq, &PatternPoint> = HashMap::new();
            for row in &rows {
                for e in &row.fiber {
                    if let Some(prior) = owner.insert(e, &row.point) {
                        return Ok(Some(format!(
                            "{name}: {e} appears for {} and {}",
                            prior, row.point
                        )));
                    }
                }
            }
        }
        Ok(None)
    }

    fn representation_round_trip(&self, _rng: &mut ChaCha8Rng) -> Result<Option<String>> {
        for (name, pattern) in &self.corpus {
            for row in enumerate_table(pattern, self.config.table_denominator)? {
                let decoded = decode_representation(pattern, &row.fiber)?;
                if decoded.point != row.point || decoded.rule != MatchRule::Representative {
                    return Ok(Some(format!(
                        "{name}: {} decoded to {}",
                        row.point, decoded.point
                    )));
                }
            }
        }
        Ok(None)
    }

    fn node_fiber_shape(&self, _rng: &mut ChaCha8Rng) -> Result<Option<String>> {
        for (name, pattern) in &self.corpus {
            for row in enumerate_table(pattern, self.config.table_denominator)? {
                let PointTarget::Node { node } = &row.point.target else {
                    continue;
                };
                let Pattern::Graph(g) = pattern.resolve_path(&row.point.path)? else {
                    // One-point leaf: its fiber is the single cone address.
                    if row.fiber.len() != 1 {
                        return Ok(Some(format!(
                            "{name}: one-point leaf {} has {} addresses",
                            row.point,
                            row.fiber.len()
                        )));
                    }
                    continue;
                };
                let incidences = g.incidences(node)?;
                if row.fiber.len() != incidences.len() {
                    return Ok(Some(format!(
                        "{name}: node {} has {} incidences but {} addresses",
                        row.point,
                        incidences.len(),
                        row.fiber.len()
                    )));
                }
                let prefix = cluster_prefix(pattern, &row.point.path)?;
                let words = partition_words(g.arc_count())?;
                for &(arc, _) in &incidences {
                    let cone = prefix.join(&words[arc as usize - 1]);
                    let inside =
                        row.fiber.iter().filter(|e| cone.cone_contains(e)).count();
                    let expected =
                        incidences.iter().filter(|(a, _)| *a == arc).count();
                    if inside != expected {
                        return Ok(Some(format!(
                            "{name}: node {} has {inside} addresses in arc {arc}'s cone, \
                             expected {expected}",
                            row.point
                        )));
                    }
                }
            }
        }
        Ok(None)
    }

    fn arc_fiber_dyadic_law(&self, _rng: &mut ChaCha8Rng) -> Result<Option<String>> {
        for (name, pattern) in &self.corpus {
            for row in enumerate_table(pattern, self.config.table_denominator)? {
                let PointTarget::Arc { t, .. } = &row.point.target else {
                    continue;
                };
                let dyadic = matches!(classify(t)?, DyadicClass::DyadicInterior { .. });
                if (row.fiber.len() == 2) != dyadic || row.fiber.len() > 2 {
                    return Ok(Some(format!(
                        "{name}: arc point {} has fiber size {}",
                        row.point,
                        row.fiber.len()
                    )));
                }
            }
        }
        Ok(None)
    }

    fn cluster_prefix_similarity(&self, rng: &mut ChaCha8Rng) -> Result<Option<String>> {
        for _ in 0..self.config.samples {
            let w = random_word(rng, 8);
            let (x, y) = (random_seq(rng), random_seq(rng));
            let scaled = metric(&w.apply(&x), &w.apply(&y));
            if scaled != half_pow(w.len()) * metric(&x, &y) {
                return Ok(Some(format!("w={w} x={x} y={y}")));
            }
        }
        Ok(None)
    }

    fn truncation_agreement(&self, rng: &mut ChaCha8Rng) -> Result<Option<String>> {
        let per_depth = (self.config.samples / 13).max(10);
        for depth in 8..=20 {
            for _ in 0..per_depth {
                let (x, y) = (random_seq(rng), random_seq(rng));
                let check = check_metric_truncation(&x, &y, depth);
                if !check.ok {
                    return Ok(Some(format!("metric N={depth} x={x} y={y}")));
                }
                let tail = half_pow(depth);
                if (binary_value(&x) - truncated_binary(&x, depth)).abs() > tail {
                    return Ok(Some(format!("binary N={depth} x={x}")));
                }
                let cmts_tail = (0..depth).fold(ratio(1, 1), |acc, _| acc * ratio(1, 3));
                if (cmts_value(&x) - truncated_cmts(&x, depth)).abs() > cmts_tail {
                    return Ok(Some(format!("cmts N={depth} x={x}")));
                }
            }
        }
        Ok(None)
    }

    fn nested_cones_shrink(&self, rng: &mut ChaCha8Rng) -> Result<Option<String>> {
        let space = TruncatedSpace::new(self.config.depth)?;
        for _ in 0..8 {
            let chain: Vec<u8> =
                (0..self.config.depth).map(|_| rng.gen_range(0..=1)).collect();
            let mut previous = Word::empty().cone_diameter();
            for k in 1..=self.config.depth {
                let w = Word::new(chain[..k].to_vec())?;
                let diameter = w.cone_diameter();
                if diameter != &previous / ratio(2, 1) {
                    return Ok(Some(format!("diameter did not halve at {w}")));
                }
                let members =
                    space.strings().filter(|s| s.starts_with(w.bits())).count() as u64;
                if members != space.len() >> k {
                    return Ok(Some(format!(
                        "cone {w} holds {members} depth-{} strings",
                        space.depth()
                    )));
                }
                previous = diameter;
            }
        }
        Ok(None)
    }

    fn second_level_anomaly(&self, _rng: &mut ChaCha8Rng) -> Result<Option<String>> {
        for n in 3..=6 {
            let literal = check_partition(&literal_second_level_words(n)?, self.config.depth)?;
            if literal.pass() {
                return Ok(Some(format!(
                    "literal family n={n} unexpectedly partitions the space"
                )));
            }
            let corrected = check_partition(&partition_words(n)?, self.config.depth)?;
            if let Some(w) = corrected.witness {
                return Ok(Some(format!(
                    "corrected family n={n} fails at {}",
                    w.string
                )));
            }
        }
        Ok(None)
    }

    fn injected_fault(&self, _rng: &mut ChaCha8Rng) -> Result<Option<String>> {
        // Deliberately asserts the uncorrected family partitions; it does
        // not, so this check fails with the least uncovered witness.
        let report = check_partition(&literal_second_level_words(3)?, self.config.depth)?;
        Ok(report
            .witness
            .map(|w| format!("string {} has {} covering words", w.string, w.matches)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::seq;

    #[test]
    fn truncated_space_enumerates_lexicographically() {
        let space = TruncatedSpace::new(3).unwrap();
        let all: Vec<String> = space.strings().map(|s| bits_string(&s)).collect();
        assert_eq!(all.len(), 8);
        assert_eq!(all[0], "000");
        assert_eq!(all[7], "111");
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
        assert!(TruncatedSpace::new(0).is_err());
        assert!(TruncatedSpace::new(31).is_err());
    }

    #[test]
    fn partition_checks() {
        let cover = [Word::new(vec![0]).unwrap(), Word::new(vec![1]).unwrap()];
        assert!(check_partition(&cover, 6).unwrap().pass());
        let three = partition_words(3).unwrap();
        assert!(check_partition(&three, 6).unwrap().pass());
        let gap = [Word::new(vec![0]).unwrap(), Word::new(vec![1, 0]).unwrap()];
        let report = check_partition(&gap, 6).unwrap();
        assert!(!report.pass());
        let witness = report.witness.unwrap();
        assert_eq!(witness.string, "110000");
        assert_eq!(witness.matches, 0);
        assert!(matches!(
            check_partition(&gap, 1),
            Err(Error::DepthTooSmall { depth: 1, word_len: 2 })
        ));
        assert!(check_partition(&[], 6).is_err());
    }

    #[test]
    fn metric_truncation_bounds() {
        let check = check_metric_truncation(&BinSeq::zeros(), &BinSeq::ones(), 10);
        assert!(check.ok);
        assert_eq!(check.truncated, ratio(1023, 1024));
        assert_eq!(check.exact, ratio(1, 1));
        let same = check_metric_truncation(&seq("(01)"), &seq("(01)"), 5);
        assert!(same.ok);
        assert_eq!(same.exact, ratio(0, 1));
        assert_eq!(same.truncated, ratio(0, 1));
    }

    #[test]
    fn literal_family_misses_strings() {
        let words = literal_second_level_words(3).unwrap();
        let spelled: Vec<String> = words.iter().map(Word::to_string).collect();
        assert_eq!(spelled, vec!["0", "100", "11"]);
        let report = check_partition(&words, 8).unwrap();
        assert!(!report.pass());
        assert_eq!(report.witness.unwrap().string, "10100000");
        assert!(literal_second_level_words(1).is_err());
    }

    #[test]
    fn canonical_enumeration_is_canonical_and_complete() {
        let all = all_canonical(5);
        for x in &all {
            assert!(x.preamble().len() + x.period().len() <= 5);
        }
        let mut unique: Vec<String> = all.iter().map(|x| x.to_string()).collect();
        unique.sort();
        unique.dedup();
        assert_eq!(unique.len(), all.len());
        // Every short spelling canonicalizes into the enumerated set.
        for pre_len in 0..=2usize {
            for per_len in 1..=2usize {
                for pre_v in 0..1u8 << pre_len {
                    for per_v in 0..1u8 << per_len {
                        let pre: Vec<u8> =
                            (0..pre_len).map(|i| (pre_v >> (pre_len - 1 - i)) & 1).collect();
                        let per: Vec<u8> =
                            (0..per_len).map(|i| (per_v >> (per_len - 1 - i)) & 1).collect();
                        let x = BinSeq::new(pre, per).unwrap();
                        assert!(all.contains(&x), "{x} missing");
                    }
                }
            }
        }
    }

    #[test]
    fn default_suite_passes() {
        let config = SuiteConfig {
            samples: 40,
            max_denominator: 128,
            table_denominator: 4,
            ..SuiteConfig::default()
        };
        let report = run_suite(&config).unwrap();
        assert!(
            report.pass(),
            "failures: {:?}",
            report.failures().collect::<Vec<_>>()
        );
        assert_eq!(report.records.len(), 24);
    }

    #[test]
    fn injected_fault_fails_the_suite() {
        let config = SuiteConfig {
            samples: 10,
            max_denominator: 32,
            table_denominator: 2,
            inject_fault: true,
            ..SuiteConfig::default()
        };
        let report = run_suite(&config).unwrap();
        assert!(!report.pass());
        let failing: Vec<_> = report.failures().collect();
        assert_eq!(failing.len(), 1);
        assert_eq!(failing[0].name, "injected-fault");
        assert!(failing[0].witness.as_deref().unwrap().contains("101"));
    }

    #[test]
    fn suite_rejects_bad_config() {
        assert!(run_suite(&SuiteConfig { depth: 0, ..SuiteConfig::default() }).is_err());
        assert!(run_suite(&SuiteConfig { samples: 0, ..SuiteConfig::default() }).is_err());
        assert!(
            run_suite(&SuiteConfig { table_denominator: 1, ..SuiteConfig::default() }).is_err()
        );
    }
}
