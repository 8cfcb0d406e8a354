//! Exact symbolic computation in the space of infinite binary sequences,
//! and a compiler from finite geometric patterns to addresses in that space.
//!
//! The space is `{0,1}^N` under the metric `d(x,y) = Σ |x_i − y_i| / 2^i`.
//! Eventually periodic sequences are stored exactly as a preamble plus a
//! repeating period in a unique canonical form ([`BinSeq`]), so equality,
//! ordering, and every series value (binary value, metric, middle-thirds
//! image) come out as exact rationals with no rounding anywhere.
//!
//! On top of the sequence space sit three layers:
//!
//! - **Interval quotient** ([`fiber_unit_interval`], [`decode_fiber`]):
//!   the value map `x ↦ Σ x_i/2^i` onto `[0,1]`, with exact fibers. A
//!   non-dyadic rational has one address, an interior dyadic rational has
//!   exactly two, and the endpoints have one each.
//! - **Patterns** ([`Pattern`]): finite graphs (nodes and indexed arcs),
//!   clusters of sub-patterns, and one-point components, read from and
//!   written to a small JSON schema.
//! - **Representation compiler** ([`represent_point`], [`enumerate_table`],
//!   [`decode_representation`]): maps each pattern point to its finite set
//!   of sequence addresses, using one cone word per arc and per cluster
//!   child, and decodes such sets back to the points they represent.
//!
//! The [`oracle`] layer re-derives every identity by brute force over
//! truncated spaces ([`TruncatedSpace`]) and plain summation, and
//! [`run_suite`] packages those checks into a machine-readable report.
//!
//! Sequences print as `pre(per)`: `01(10)` is `0,1,1,0,1,0,1,0,…` and `(0)`
//! is the zero sequence. Rationals print as `p/q` or a bare integer.

mod bits;
mod cmts;
mod compiler;
pub mod corpus;
mod error;
mod fiber;
mod interval;
mod oracle;
mod pattern;
mod rational;
mod seq;
mod word;

pub use cmts::{cmts_expansion, cmts_value, in_cmts};
pub use compiler::{
    cluster_prefix, decode_representation, enumerate_table, partition_words,
    represent_arc_point, represent_node, represent_point, AddressEntry, AddressRow, Decoded,
    MatchRule,
};
pub use error::{Error, Result};
pub use fiber::Fiber;
pub use interval::{classify, decode_fiber, fiber_unit_interval, DyadicClass};
pub use pattern::{
    parse_pattern, parse_points, serialize_pattern, Arc, FiniteGraph, Pattern, PatternPoint,
    PointDoc, PointTarget,
};
pub use rational::{
    decimal_string, digit_series, format_rational, half_pow, parse_rational, radix_expansion,
    ratio, Rational,
};
pub use oracle::{
    all_canonical, check_metric_truncation, check_partition, literal_second_level_words,
    run_suite, truncated_binary, truncated_cmts, truncated_metric, CheckRecord, PartitionReport,
    PartitionWitness, SuiteConfig, SuiteReport, TruncatedSpace, TruncationCheck,
};
pub use seq::{binary_value, metric, BinSeq};
pub use word::{cone_relation, ConeRelation, Word};
