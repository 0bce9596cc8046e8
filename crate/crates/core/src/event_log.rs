//! CSV event logs: parsing, per-case ordering and positions, summaries.
//!
//! An event log is a set of events, each belonging to exactly one case.
//! Within a case, events are ordered by their authoritative timestamp;
//! events with equal timestamps keep their input order (stable tie-break).
//! The 1-based rank of an event in that order is its *position*. Positions,
//! not timestamps, define the ordering used by rule checking; timestamps
//! supply the elapsed times compared against rule windows.
//!
//! Timestamps are integer seconds since the Unix epoch. Input cells may be
//! epoch seconds or ISO-8601 datetimes (a datetime without an offset is read
//! as UTC; sub-second precision is discarded).

use std::collections::{BTreeMap, BTreeSet};
use std::io;

use serde::Serialize;
use thiserror::Error;

/// One event after ordering: position 1..n within its trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Event {
    pub case_id: String,
    pub activity: String,
    /// Authoritative time in seconds since the Unix epoch.
    pub timestamp: i64,
    /// 1-based rank within the trace, assigned by the log builder.
    pub position: u32,
    pub resource: Option<String>,
    pub lifecycle: Option<String>,
    /// Unrecognized input columns, preserved verbatim.
    pub extra: BTreeMap<String, String>,
}

/// Raw event data before ordering; input to [`EventLog::from_rows`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventRow {
    pub case_id: String,
    pub activity: String,
    pub timestamp: i64,
    pub resource: Option<String>,
    pub lifecycle: Option<String>,
    pub extra: BTreeMap<String, String>,
}

impl EventRow {
    pub fn new(case_id: impl Into<String>, activity: impl Into<String>, timestamp: i64) -> Self {
        EventRow {
            case_id: case_id.into(),
            activity: activity.into(),
            timestamp,
            resource: None,
            lifecycle: None,
            extra: BTreeMap::new(),
        }
    }
}

/// All events of one case, ordered by position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub case_id: String,
    pub events: Vec<Event>,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }
}

/// An event log grouped into traces. Construction establishes the ordering
/// invariants: positions are 1..n per trace and timestamps are nondecreasing
/// along positions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EventLog {
    traces: BTreeMap<String, Trace>,
    activities: BTreeSet<String>,
    num_events: usize,
}

/// Errors from building a log out of raw rows.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum LogError {
    #[error("row {row}: empty case id")]
    EmptyCaseId { row: usize },
    #[error("row {row}: empty activity")]
    EmptyActivity { row: usize },
}

impl EventLog {
    /// Group rows by case, order each case by timestamp (stable, so equal
    /// timestamps keep input order) and assign 1-based positions.
    pub fn from_rows(rows: impl IntoIterator<Item = EventRow>) -> Result<Self, LogError> {
        let mut grouped: BTreeMap<String, Vec<EventRow>> = BTreeMap::new();
        for (idx, row) in rows.into_iter().enumerate() {
            if row.case_id.is_empty() {
                return Err(LogError::EmptyCaseId { row: idx + 1 });
            }
            if row.activity.is_empty() {
                return Err(LogError::EmptyActivity { row: idx + 1 });
            }
            grouped.entry(row.case_id.clone()).or_default().push(row);
        }

        let mut traces = BTreeMap::new();
        let mut activities = BTreeSet::new();
        let mut num_events = 0;
        for (case_id, mut case_rows) in grouped {
            case_rows.sort_by_key(|r| r.timestamp);
            let events: Vec<Event> = case_rows
                .into_iter()
                .enumerate()
                .map(|(i, r)| {
                    activities.insert(r.activity.clone());
                    Event {
                        case_id: r.case_id,
                        activity: r.activity,
                        timestamp: r.timestamp,
                        position: (i + 1) as u32,
                        resource: r.resource,
                        lifecycle: r.lifecycle,
                        extra: r.extra,
                    }
                })
                .collect();
            num_events += events.len();
            traces.insert(case_id.clone(), Trace { case_id, events });
        }
        Ok(EventLog { traces, activities, num_events })
    }

    /// Traces in case-id order.
    pub fn traces(&self) -> impl Iterator<Item = &Trace> {
        self.traces.values()
    }

    pub fn trace(&self, case_id: &str) -> Option<&Trace> {
        self.traces.get(case_id)
    }

    pub fn case_ids(&self) -> impl Iterator<Item = &str> {
        self.traces.keys().map(String::as_str)
    }

    /// Distinct activity labels in sorted order.
    pub fn activities(&self) -> impl Iterator<Item = &str> {
        self.activities.iter().map(String::as_str)
    }

    /// All events, trace by trace in position order.
    pub fn events(&self) -> impl Iterator<Item = &Event> {
        self.traces.values().flat_map(|t| t.events.iter())
    }

    pub fn num_cases(&self) -> usize {
        self.traces.len()
    }

    pub fn num_events(&self) -> usize {
        self.num_events
    }

    pub fn num_activities(&self) -> usize {
        self.activities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.num_events == 0
    }

    pub fn summary(&self) -> LogSummary {
        let mut min = usize::MAX;
        let mut max = 0;
        for t in self.traces.values() {
            min = min.min(t.len());
            max = max.max(t.len());
        }
        let num_cases = self.num_cases();
        LogSummary {
            num_cases,
            num_events: self.num_events,
            num_activities: self.num_activities(),
            min_trace_len: if num_cases == 0 { 0 } else { min },
            max_trace_len: max,
            mean_trace_len: if num_cases == 0 {
                0.0
            } else {
                self.num_events as f64 / num_cases as f64
            },
        }
    }
}

/// Aggregate counts of a log.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogSummary {
    pub num_cases: usize,
    pub num_events: usize,
    pub num_activities: usize,
    pub min_trace_len: usize,
    pub max_trace_len: usize,
    pub mean_trace_len: f64,
}

/// Count cases, events, activities and trace-length spread.
pub fn log_summary(log: &EventLog) -> LogSummary {
    log.summary()
}

/// Which timestamp column is authoritative when a log carries both a start
/// and a complete time and no explicit choice was made.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum TimeAuthority {
    #[default]
    Complete,
    Start,
}

/// Column selection for [`parse_event_log`].
///
/// The timestamp column is resolved in order: the explicit `time_col` if set,
/// a column named `timestamp`, then a recognized complete-time or start-time
/// column per `time_authority`. Recognized but non-authoritative time columns
/// are preserved as extra attributes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnConfig {
    pub case_col: String,
    pub activity_col: String,
    pub time_col: Option<String>,
    pub time_authority: TimeAuthority,
}

impl Default for ColumnConfig {
    fn default() -> Self {
        ColumnConfig {
            case_col: "case".to_string(),
            activity_col: "activity".to_string(),
            time_col: None,
            time_authority: TimeAuthority::Complete,
        }
    }
}

/// Errors from reading a CSV log.
#[derive(Debug, Error)]
pub enum ParseError {
    #[error("missing required column `{0}`")]
    MissingColumn(String),
    #[error("line {line}: empty `{column}` field")]
    EmptyField { line: u64, column: String },
    #[error("line {line}: unparseable timestamp `{value}` (expected epoch seconds or ISO-8601)")]
    BadTimestamp { line: u64, value: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Log(#[from] LogError),
}

struct ColumnMap {
    case: usize,
    activity: usize,
    time: usize,
    resource: Option<usize>,
    lifecycle: Option<usize>,
    extras: Vec<(usize, String)>,
}

fn is_complete_like(header: &str) -> bool {
    matches!(header.to_ascii_lowercase().as_str(), "completetime" | "complete_time" | "complete")
}

fn is_start_like(header: &str) -> bool {
    matches!(header.to_ascii_lowercase().as_str(), "starttime" | "start_time" | "start")
}

fn resolve_columns(headers: &csv::StringRecord, config: &ColumnConfig) -> Result<ColumnMap, ParseError> {
    let find = |name: &str| headers.iter().position(|h| h == name);

    let case = find(&config.case_col)
        .ok_or_else(|| ParseError::MissingColumn(config.case_col.clone()))?;
    let activity = find(&config.activity_col)
        .ok_or_else(|| ParseError::MissingColumn(config.activity_col.clone()))?;

    let time = match &config.time_col {
        Some(name) => find(name).ok_or_else(|| ParseError::MissingColumn(name.clone()))?,
        None => {
            let complete = headers.iter().position(is_complete_like);
            let start = headers.iter().position(is_start_like);
            let fallback = match config.time_authority {
                TimeAuthority::Complete => complete.or(start),
                TimeAuthority::Start => start.or(complete),
            };
            find("timestamp")
                .or(fallback)
                .ok_or_else(|| ParseError::MissingColumn("timestamp".to_string()))?
        }
    };

    let taken = |i: usize| i == case || i == activity || i == time;
    let resource = headers
        .iter()
        .position(|h| h.eq_ignore_ascii_case("resource"))
        .filter(|&i| !taken(i));
    let lifecycle = headers
        .iter()
        .position(|h| h.eq_ignore_ascii_case("lifecycle"))
        .filter(|&i| !taken(i));

    let extras = headers
        .iter()
        .enumerate()
        .filter(|&(i, h)| {
            !taken(i)
                && Some(i) != resource
                && Some(i) != lifecycle
                // `position` is this module's own output column; positions are
                // always recomputed, never read back.
                && h != "position"
        })
        .map(|(i, h)| (i, h.to_string()))
        .collect();

    Ok(ColumnMap { case, activity, time, resource, lifecycle, extras })
}

fn parse_timestamp(raw: &str) -> Option<i64> {
    let raw = raw.trim();
    if let Ok(secs) = raw.parse::<i64>() {
        return Some(secs);
    }
    if let Ok(dt) = chrono::DateTime::parse_from_rfc3339(raw) {
        return Some(dt.timestamp());
    }
    for fmt in ["%Y-%m-%dT%H:%M:%S%.f", "%Y-%m-%d %H:%M:%S%.f"] {
        if let Ok(dt) = chrono::NaiveDateTime::parse_from_str(raw, fmt) {
            return Some(dt.and_utc().timestamp());
        }
    }
    None
}

/// Read a CSV event log.
///
/// The first record is the header. Every row must carry a non-empty case id,
/// a non-empty activity and a parseable timestamp; anything else is an error
/// naming the offending line.
pub fn parse_event_log<R: io::Read>(reader: R, config: &ColumnConfig) -> Result<EventLog, ParseError> {
    let mut rdr = csv::Reader::from_reader(reader);
    let headers = rdr.headers()?.clone();
    let map = resolve_columns(&headers, config)?;

    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let get = |i: usize| record.get(i).unwrap_or("");

        let case_id = get(map.case);
        if case_id.is_empty() {
            return Err(ParseError::EmptyField { line, column: headers[map.case].to_string() });
        }
        let activity = get(map.activity);
        if activity.is_empty() {
            return Err(ParseError::EmptyField { line, column: headers[map.activity].to_string() });
        }
        let raw_time = get(map.time);
        if raw_time.trim().is_empty() {
            return Err(ParseError::EmptyField { line, column: headers[map.time].to_string() });
        }
        let timestamp = parse_timestamp(raw_time)
            .ok_or_else(|| ParseError::BadTimestamp { line, value: raw_time.to_string() })?;

        let pick = |idx: Option<usize>| {
            idx.map(get).filter(|v| !v.is_empty()).map(str::to_string)
        };
        let extra = map
            .extras
            .iter()
            .filter_map(|(i, name)| {
                let v = get(*i);
                (!v.is_empty()).then(|| (name.clone(), v.to_string()))
            })
            .collect();

        rows.push(EventRow {
            case_id: case_id.to_string(),
            activity: activity.to_string(),
            timestamp,
            resource: pick(map.resource),
            lifecycle: pick(map.lifecycle),
            extra,
        });
    }
    Ok(EventLog::from_rows(rows)?)
}

/// Write the canonical CSV form: `case,activity,timestamp,position`, then
/// `resource`/`lifecycle` when any event carries them, then the sorted union
/// of extra columns. Parsing the output with the default [`ColumnConfig`]
/// reproduces the log exactly.
pub fn write_csv<W: io::Write>(log: &EventLog, writer: W) -> Result<(), csv::Error> {
    let mut wtr = csv::Writer::from_writer(writer);

    let has_resource = log.events().any(|e| e.resource.is_some());
    let has_lifecycle = log.events().any(|e| e.lifecycle.is_some());
    let extra_keys: BTreeSet<&str> =
        log.events().flat_map(|e| e.extra.keys().map(String::as_str)).collect();

    let mut header = vec!["case", "activity", "timestamp", "position"];
    if has_resource {
        header.push("resource");
    }
    if has_lifecycle {
        header.push("lifecycle");
    }
    header.extend(extra_keys.iter().copied());
    wtr.write_record(&header)?;

    for event in log.events() {
        let mut record = vec![
            event.case_id.clone(),
            event.activity.clone(),
            event.timestamp.to_string(),
            event.position.to_string(),
        ];
        if has_resource {
            record.push(event.resource.clone().unwrap_or_default());
        }
        if has_lifecycle {
            record.push(event.lifecycle.clone().unwrap_or_default());
        }
        for key in &extra_keys {
            record.push(event.extra.get(*key).cloned().unwrap_or_default());
        }
        wtr.write_record(&record)?;
    }
    wtr.flush()?;
    Ok(())
}

/// [`write_csv`] into a `String`.
pub fn to_csv_string(log: &EventLog) -> String {
    let mut buf = Vec::new();
    write_csv(log, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("canonical CSV is UTF-8")
}
