//! Process event logs as labeled property graphs, with timed order
//! compliance checking.
//!
//! The crate turns a CSV event log into one of three interchangeable graph
//! encodings and evaluates order anti-patterns (`RESPONSE`, `PRECEDES`,
//! `EXCLUDE`) against the encoded log:
//!
//! * [`event_log`] parses CSV logs into per-case traces with stable
//!   timestamp ordering and 1-based positions.
//! * [`lpg`] is the in-memory labeled property multigraph with label and
//!   property indexes.
//! * [`encoders`] builds the three encodings: the multi-dimensional
//!   baseline (`BM`), the explicit-position variant (`EP`) and the
//!   unique-activities variant (`UA`).
//! * [`rules`] models the anti-pattern language and its text syntax.
//! * [`engine`] checks rules with an encoding-specific strategy.
//! * [`oracle`] is the deliberately naive reference checker used to validate
//!   every strategy.
//!
//! All three encodings and the oracle are required to produce identical
//! violation reports for the same log and rule; the test suite enforces this
//! equivalence property.

pub mod encoders;
pub mod engine;
pub mod event_log;
pub mod lpg;
pub mod oracle;
pub mod rules;

pub use encoders::{
    encode, encode_with_report, expected_sizes, loading_report, EncodedLog, EncodingKind,
    LoadingReport, SizeForecast,
};
pub use engine::{check, check_all, check_with, EventRef, ViolationReport, Witness};
pub use event_log::{
    log_summary, parse_event_log, ColumnConfig, Event, EventLog, EventRow, LogSummary,
    TimeAuthority, Trace,
};
pub use lpg::{EdgeId, Graph, GraphStats, NodeId, PropertyValue};
pub use oracle::oracle_check;
pub use rules::{
    parse_rule, parse_rules, theta_satisfied, Rule, RuleKind, Theta, TimeDelta, TimeWindow,
};
