//! `complog` — load CSV event logs, encode them as property graphs, check
//! timed order rules, and benchmark the encodings against each other.

use std::fs;
use std::io;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use complog_cli::bench::{rows_to_csv, rows_to_json, run_bench, BenchConfig};
use complog_cli::genlog::{gen_log, GenParams};
use complog_core::encoders::{encode, encode_with_report, EncodingKind, LoadingReport};
use complog_core::engine::{check_with, reports_to_csv, reports_to_json};
use complog_core::event_log::{
    log_summary, parse_event_log, ColumnConfig, EventLog, TimeAuthority,
};
use complog_core::rules::{parse_rule, parse_rules, Rule};

#[derive(Parser)]
#[command(name = "complog", version, about = "Compliance checking over graph-encoded event logs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a log and print its summary
    Load(LogArgs),
    /// Build encodings and print their loading reports
    Encode {
        #[command(flatten)]
        log: LogArgs,
        /// bm, ep, ua, all, or a comma-separated subset
        #[arg(long, default_value = "all")]
        encoding: EncodingSet,
        #[arg(long, value_enum, default_value = "json")]
        out: OutputFormat,
    },
    /// Check rules against one encoding and print the violation reports
    Check {
        #[command(flatten)]
        log: LogArgs,
        /// bm, ep or ua
        #[arg(long, default_value = "bm")]
        encoding: EncodingKind,
        #[command(flatten)]
        rules: RuleArgs,
        /// Evaluate cases in parallel
        #[arg(long)]
        parallel: bool,
        #[arg(long, value_enum, default_value = "json")]
        out: OutputFormat,
    },
    /// Time every rule against every selected encoding
    Bench {
        #[command(flatten)]
        log: LogArgs,
        /// bm, ep, ua, all, or a comma-separated subset
        #[arg(long, default_value = "all")]
        encoding: EncodingSet,
        #[command(flatten)]
        rules: RuleArgs,
        /// Timed repetitions per rule (one extra warm-up run is discarded)
        #[arg(long, default_value_t = 5)]
        reps: usize,
        /// Add rows measuring case-partitioned evaluation
        #[arg(long)]
        parallel: bool,
        #[arg(long, value_enum, default_value = "csv")]
        out: OutputFormat,
    },
}

#[derive(Args)]
struct LogArgs {
    /// CSV event log to load
    #[arg(long, conflicts_with = "gen")]
    log: Option<PathBuf>,
    /// Generate a log instead: "cases=100,len=5..15,acts=8,seed=42"
    #[arg(long, value_name = "SPEC")]
    gen: Option<String>,
    /// Column holding the case identifier
    #[arg(long, default_value = "case")]
    case_col: String,
    /// Column holding the activity label
    #[arg(long, default_value = "activity")]
    activity_col: String,
    /// Column holding the ordering timestamp (auto-detected when omitted)
    #[arg(long)]
    time_col: Option<String>,
    /// Which lifecycle timestamp orders events when a log carries both
    #[arg(long, default_value = "complete", value_parser = parse_authority)]
    time_authority: TimeAuthority,
}

impl LogArgs {
    fn load(&self) -> Result<(EventLog, String)> {
        if let Some(path) = &self.log {
            let file = fs::File::open(path)
                .with_context(|| format!("opening {}", path.display()))?;
            let config = ColumnConfig {
                case_col: self.case_col.clone(),
                activity_col: self.activity_col.clone(),
                time_col: self.time_col.clone(),
                time_authority: self.time_authority,
            };
            let log = parse_event_log(io::BufReader::new(file), &config)
                .with_context(|| format!("parsing {}", path.display()))?;
            let name = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string());
            Ok((log, name))
        } else if let Some(spec) = &self.gen {
            let params = parse_gen_spec(spec)?;
            Ok((gen_log(&params)?, format!("gen:{spec}")))
        } else {
            bail!("one of --log or --gen is required");
        }
    }
}

#[derive(Args)]
struct RuleArgs {
    /// Inline rule text, e.g. "RESPONSE(A, B) TIME <= 3600s"; repeatable
    #[arg(long = "rule", value_name = "TEXT")]
    rule: Vec<String>,
    /// File with one rule per line; '#' starts a comment
    #[arg(long = "rules", value_name = "FILE")]
    rules: Option<PathBuf>,
}

impl RuleArgs {
    fn load(&self) -> Result<Vec<Rule>> {
        let mut out = Vec::new();
        if let Some(path) = &self.rules {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            out.extend(
                parse_rules(&text)
                    .with_context(|| format!("parsing rules in {}", path.display()))?,
            );
        }
        for text in &self.rule {
            out.push(parse_rule(text).with_context(|| format!("parsing rule {text:?}"))?);
        }
        if out.is_empty() {
            bail!("no rules given; use --rule or --rules");
        }
        Ok(out)
    }
}

/// One or more encodings, or `all`.
#[derive(Debug, Clone)]
struct EncodingSet(Vec<EncodingKind>);

impl FromStr for EncodingSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("all") {
            return Ok(EncodingSet(EncodingKind::ALL.to_vec()));
        }
        let mut kinds = Vec::new();
        for part in s.split(',') {
            let kind: EncodingKind = part.trim().parse().map_err(|e| format!("{e}"))?;
            if !kinds.contains(&kind) {
                kinds.push(kind);
            }
        }
        if kinds.is_empty() {
            return Err("no encodings given".into());
        }
        Ok(EncodingSet(kinds))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

fn parse_authority(s: &str) -> Result<TimeAuthority, String> {
    match s.to_ascii_lowercase().as_str() {
        "complete" => Ok(TimeAuthority::Complete),
        "start" => Ok(TimeAuthority::Start),
        other => Err(format!("unknown time authority {other:?}; expected start or complete")),
    }
}

fn parse_gen_spec(spec: &str) -> Result<GenParams> {
    let (mut cases, mut len, mut acts) = (None, None, None);
    let mut seed = 0u64;
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, value) = part
            .split_once('=')
            .with_context(|| format!("expected key=value in generator spec, got {part:?}"))?;
        match key {
            "cases" => {
                cases = Some(value.parse().with_context(|| format!("bad cases {value:?}"))?);
            }
            "len" => {
                let bound = |s: &str| {
                    s.parse::<usize>().with_context(|| format!("bad trace length {value:?}"))
                };
                len = Some(match value.split_once("..") {
                    Some((lo, hi)) => (bound(lo)?, bound(hi)?),
                    None => {
                        let n = bound(value)?;
                        (n, n)
                    }
                });
            }
            "acts" => {
                acts = Some(value.parse().with_context(|| format!("bad acts {value:?}"))?);
            }
            "seed" => seed = value.parse().with_context(|| format!("bad seed {value:?}"))?,
            other => bail!("unknown generator key {other:?}; expected cases, len, acts or seed"),
        }
    }
    let cases = cases.context("generator spec needs cases=N")?;
    let (min_len, max_len) = len.context("generator spec needs len=N or len=LO..HI")?;
    let activities = acts.context("generator spec needs acts=N")?;
    Ok(GenParams { cases, min_len, max_len, activities, seed })
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Load(args) => cmd_load(&args),
        Command::Encode { log, encoding, out } => cmd_encode(&log, &encoding.0, out),
        Command::Check { log, encoding, rules, parallel, out } => {
            cmd_check(&log, encoding, &rules, parallel, out)
        }
        Command::Bench { log, encoding, rules, reps, parallel, out } => {
            cmd_bench(&log, &encoding.0, &rules, reps, parallel, out)
        }
    }
}

fn cmd_load(args: &LogArgs) -> Result<()> {
    let (log, name) = args.load()?;
    let mut value = serde_json::to_value(log_summary(&log))?;
    value["log"] = name.into();
    println!("{}", serde_json::to_string_pretty(&value)?);
    Ok(())
}

fn cmd_encode(args: &LogArgs, encodings: &[EncodingKind], out: OutputFormat) -> Result<()> {
    let (log, _) = args.load()?;
    let mut reports = Vec::with_capacity(encodings.len());
    for &kind in encodings {
        let (_, report) = encode_with_report(&log, kind)?;
        reports.push(report);
    }
    match out {
        OutputFormat::Csv => {
            println!("{}", LoadingReport::csv_header());
            for report in &reports {
                println!("{}", report.csv_row());
            }
        }
        OutputFormat::Json => println!("{}", serde_json::to_string_pretty(&reports)?),
    }
    Ok(())
}

fn cmd_check(
    args: &LogArgs,
    encoding: EncodingKind,
    rules: &RuleArgs,
    parallel: bool,
    out: OutputFormat,
) -> Result<()> {
    let (log, _) = args.load()?;
    let rules = rules.load()?;
    let encoded = encode(&log, encoding)?;
    let mut reports = Vec::with_capacity(rules.len());
    for rule in &rules {
        reports.push(check_with(&encoded, rule, parallel)?);
    }
    match out {
        OutputFormat::Csv => print!("{}", reports_to_csv(&reports)),
        OutputFormat::Json => println!("{}", reports_to_json(&reports)),
    }
    Ok(())
}

fn cmd_bench(
    args: &LogArgs,
    encodings: &[EncodingKind],
    rules: &RuleArgs,
    reps: usize,
    parallel: bool,
    out: OutputFormat,
) -> Result<()> {
    let (log, name) = args.load()?;
    let config = BenchConfig {
        encodings: encodings.to_vec(),
        rules: rules.load()?,
        repetitions: reps,
        parallel,
    };
    let rows = run_bench(&log, &name, &config)?;
    match out {
        OutputFormat::Csv => print!("{}", rows_to_csv(&rows)),
        OutputFormat::Json => println!("{}", rows_to_json(&rows)),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gen_spec_round_trips() {
        let params = parse_gen_spec("cases=100,len=5..15,acts=8,seed=42").unwrap();
        assert_eq!(
            params,
            GenParams { cases: 100, min_len: 5, max_len: 15, activities: 8, seed: 42 }
        );
        // single length, default seed, spaces tolerated
        let params = parse_gen_spec("cases=3, len=4, acts=2").unwrap();
        assert_eq!(
            params,
            GenParams { cases: 3, min_len: 4, max_len: 4, activities: 2, seed: 0 }
        );
    }

    #[test]
    fn gen_spec_rejects_junk() {
        assert!(parse_gen_spec("cases=3,len=4").is_err()); // acts missing
        assert!(parse_gen_spec("cases=3,len=x,acts=2").is_err());
        assert!(parse_gen_spec("bogus=1").is_err());
        assert!(parse_gen_spec("cases 3").is_err());
    }

    #[test]
    fn encoding_sets_parse() {
        assert_eq!("all".parse::<EncodingSet>().unwrap().0, EncodingKind::ALL.to_vec());
        assert_eq!(
            "ua,bm".parse::<EncodingSet>().unwrap().0,
            vec![EncodingKind::Ua, EncodingKind::Bm]
        );
        assert_eq!("ep,ep".parse::<EncodingSet>().unwrap().0, vec![EncodingKind::Ep]);
        assert!("neo4j".parse::<EncodingSet>().is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
