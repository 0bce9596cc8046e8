//! Order anti-pattern rules and their text syntax.
//!
//! A rule names two activities and an optional time window:
//!
//! ```text
//! RESPONSE(A, B)                    every A is eventually followed by a B
//! PRECEDES(A, B) TIME <= 2h         every B has an A at most two hours earlier
//! EXCLUDE(A, D, [E, F]) TIME < 30m  no E or F strictly between an A and a D
//!                                   completing within half an hour
//! ```
//!
//! The grammar is one rule per string:
//!
//! ```text
//! KIND '(' A ',' B [ ',' '[' C1 (',' Ck)* ']' ] ')' [ 'TIME' THETA INTEGER UNIT ]
//! KIND  = RESPONSE | PRECEDES | EXCLUDE
//! THETA = < | = | > | <= | >=
//! UNIT  = s | m | h | d
//! ```
//!
//! Activity labels are bare tokens or double-quoted strings (quotes allow
//! commas, spaces, brackets; `\"` and `\\` are the only escapes). A missing
//! `TIME` clause means the unrestricted window `(INFINITE, <=)`, which any
//! elapsed time satisfies. `PRECEDES(a, b)` reads "every `b` must be preceded
//! by an `a`": `a` is the earlier activity, `b` the later one.

use std::fmt;

use serde::ser::{Serialize, SerializeStruct, Serializer};
use thiserror::Error;

/// The three anti-pattern families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleKind {
    /// Every `a` must eventually be followed by a `b`.
    Response,
    /// Every `b` must be preceded by an `a`.
    Precedes,
    /// No excluded activity may occur strictly between an `a` and a later
    /// `b` whose elapsed time satisfies the window.
    Exclude,
}

impl RuleKind {
    pub fn keyword(self) -> &'static str {
        match self {
            RuleKind::Response => "RESPONSE",
            RuleKind::Precedes => "PRECEDES",
            RuleKind::Exclude => "EXCLUDE",
        }
    }
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// Comparison operator between elapsed seconds and the window bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Theta {
    Lt,
    Eq,
    Gt,
    Le,
    Ge,
}

impl Theta {
    pub const ALL: [Theta; 5] = [Theta::Lt, Theta::Eq, Theta::Gt, Theta::Le, Theta::Ge];

    pub fn symbol(self) -> &'static str {
        match self {
            Theta::Lt => "<",
            Theta::Eq => "=",
            Theta::Gt => ">",
            Theta::Le => "<=",
            Theta::Ge => ">=",
        }
    }
}

impl fmt::Display for Theta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// A window bound: a finite number of seconds or unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TimeDelta {
    Finite(i64),
    Infinite,
}

/// A timed window `(delta_t, theta)` restricting the elapsed seconds between
/// two matched events.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TimeWindow {
    pub delta_t: TimeDelta,
    pub theta: Theta,
}

impl TimeWindow {
    pub fn new(delta_t: TimeDelta, theta: Theta) -> Self {
        TimeWindow { delta_t, theta }
    }

    /// The window of a rule without a `TIME` clause: `(INFINITE, <=)`.
    /// Every nonnegative elapsed time satisfies it, so the rule degenerates
    /// to a pure ordering check.
    pub fn unrestricted() -> Self {
        TimeWindow { delta_t: TimeDelta::Infinite, theta: Theta::Le }
    }

    pub fn is_unrestricted(self) -> bool {
        self == Self::unrestricted()
    }
}

impl Default for TimeWindow {
    fn default() -> Self {
        Self::unrestricted()
    }
}

/// Errors from rule construction and window evaluation.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum RuleError {
    /// Elapsed time is always the later timestamp minus the earlier one;
    /// a negative value is a caller bug, not a rule violation.
    #[error("elapsed seconds must be nonnegative, got {0}")]
    NegativeElapsed(i64),
    #[error("activity label must not be empty")]
    EmptyLabel,
    #[error("an excluded-activity list is only valid for EXCLUDE rules")]
    UnexpectedExcluded,
    #[error("EXCLUDE rules need at least one excluded activity")]
    MissingExcluded,
    #[error("time bound must be nonnegative, got {0}")]
    NegativeDelta(i64),
}

/// Does `elapsed_seconds θ delta_t` hold?
///
/// With an infinite bound the lower-bound operators (`<`, `<=`) are satisfied
/// by any elapsed time and the others by none. `elapsed_seconds` must be
/// nonnegative: callers compare the later event against the earlier one.
pub fn theta_satisfied(
    theta: Theta,
    elapsed_seconds: i64,
    delta_t: TimeDelta,
) -> Result<bool, RuleError> {
    if elapsed_seconds < 0 {
        return Err(RuleError::NegativeElapsed(elapsed_seconds));
    }
    Ok(match delta_t {
        TimeDelta::Finite(bound) => match theta {
            Theta::Lt => elapsed_seconds < bound,
            Theta::Eq => elapsed_seconds == bound,
            Theta::Gt => elapsed_seconds > bound,
            Theta::Le => elapsed_seconds <= bound,
            Theta::Ge => elapsed_seconds >= bound,
        },
        TimeDelta::Infinite => matches!(theta, Theta::Lt | Theta::Le),
    })
}

/// A timed order anti-pattern over two activities.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub kind: RuleKind,
    /// The earlier activity.
    pub a: String,
    /// The later activity.
    pub b: String,
    /// Activities that must not occur between `a` and `b`; non-empty exactly
    /// for [`RuleKind::Exclude`].
    pub excluded: Vec<String>,
    pub window: TimeWindow,
}

impl Rule {
    pub fn new(
        kind: RuleKind,
        a: impl Into<String>,
        b: impl Into<String>,
        excluded: Vec<String>,
        window: TimeWindow,
    ) -> Result<Self, RuleError> {
        let a = a.into();
        let b = b.into();
        if a.is_empty() || b.is_empty() || excluded.iter().any(String::is_empty) {
            return Err(RuleError::EmptyLabel);
        }
        match kind {
            RuleKind::Exclude if excluded.is_empty() => return Err(RuleError::MissingExcluded),
            RuleKind::Response | RuleKind::Precedes if !excluded.is_empty() => {
                return Err(RuleError::UnexpectedExcluded)
            }
            _ => {}
        }
        if let TimeDelta::Finite(d) = window.delta_t {
            if d < 0 {
                return Err(RuleError::NegativeDelta(d));
            }
        }
        Ok(Rule { kind, a, b, excluded, window })
    }

    pub fn response(
        a: impl Into<String>,
        b: impl Into<String>,
        window: TimeWindow,
    ) -> Result<Self, RuleError> {
        Self::new(RuleKind::Response, a, b, Vec::new(), window)
    }

    pub fn precedes(
        a: impl Into<String>,
        b: impl Into<String>,
        window: TimeWindow,
    ) -> Result<Self, RuleError> {
        Self::new(RuleKind::Precedes, a, b, Vec::new(), window)
    }

    pub fn exclude(
        a: impl Into<String>,
        b: impl Into<String>,
        excluded: Vec<String>,
        window: TimeWindow,
    ) -> Result<Self, RuleError> {
        Self::new(RuleKind::Exclude, a, b, excluded, window)
    }
}

fn needs_quoting(label: &str) -> bool {
    label.is_empty()
        || label
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, ',' | '(' | ')' | '[' | ']' | '"' | '\\' | '#'))
}

fn write_label(f: &mut fmt::Formatter<'_>, label: &str) -> fmt::Result {
    if !needs_quoting(label) {
        return f.write_str(label);
    }
    f.write_str("\"")?;
    for c in label.chars() {
        if c == '"' || c == '\\' {
            f.write_str("\\")?;
        }
        write!(f, "{c}")?;
    }
    f.write_str("\"")
}

/// Canonical printing. `parse ∘ print` is the identity on parsed rules: the
/// bound is normalized to seconds and an unrestricted window is omitted.
/// Infinite windows with an operator other than `<`/`<=` cannot arise from
/// the parser and print a non-parseable `TIME θ INFINITE` marker.
impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.kind.keyword())?;
        write_label(f, &self.a)?;
        f.write_str(", ")?;
        write_label(f, &self.b)?;
        if !self.excluded.is_empty() {
            f.write_str(", [")?;
            for (i, c) in self.excluded.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write_label(f, c)?;
            }
            f.write_str("]")?;
        }
        f.write_str(")")?;
        match self.window.delta_t {
            TimeDelta::Finite(d) => write!(f, " TIME {} {}s", self.window.theta, d)?,
            TimeDelta::Infinite => {
                if !matches!(self.window.theta, Theta::Lt | Theta::Le) {
                    write!(f, " TIME {} INFINITE", self.window.theta)?;
                }
            }
        }
        Ok(())
    }
}

impl Serialize for Rule {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Rule", 7)?;
        st.serialize_field("kind", self.kind.keyword())?;
        st.serialize_field("a", &self.a)?;
        st.serialize_field("b", &self.b)?;
        st.serialize_field("excluded", &self.excluded)?;
        st.serialize_field("theta", self.window.theta.symbol())?;
        let delta = match self.window.delta_t {
            TimeDelta::Finite(d) => Some(d),
            TimeDelta::Infinite => None,
        };
        st.serialize_field("delta_t_seconds", &delta)?;
        st.serialize_field("text", &self.to_string())?;
        st.end()
    }
}

/// A rule syntax error with the byte offset of the offending input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRuleError {
    /// 0-based byte offset into the rule text.
    pub pos: usize,
    /// 1-based line number when parsing a rule file.
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ParseRuleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}, byte {}: {}", self.pos, self.message),
            None => write!(f, "byte {}: {}", self.pos, self.message),
        }
    }
}

impl std::error::Error for ParseRuleError {}

struct Scanner<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn new(src: &'a str) -> Self {
        Scanner { src, pos: 0 }
    }

    fn err(&self, message: impl Into<String>) -> ParseRuleError {
        self.err_at(self.pos, message)
    }

    fn err_at(&self, pos: usize, message: impl Into<String>) -> ParseRuleError {
        ParseRuleError { pos, line: None, message: message.into() }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn eat(&mut self, want: char) -> bool {
        if self.peek() == Some(want) {
            self.pos += want.len_utf8();
            true
        } else {
            false
        }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.src.len()
    }

    fn expect(&mut self, want: char) -> Result<(), ParseRuleError> {
        self.skip_ws();
        if self.eat(want) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{want}`")))
        }
    }

    /// An ASCII keyword: `[A-Za-z_]+`.
    fn ident(&mut self) -> &'a str {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_alphabetic() || c == '_') {
            self.bump();
        }
        &self.src[start..self.pos]
    }

    fn label(&mut self) -> Result<String, ParseRuleError> {
        self.skip_ws();
        let start = self.pos;
        if self.eat('"') {
            let mut out = String::new();
            loop {
                match self.bump() {
                    None => return Err(self.err_at(start, "unterminated quoted label")),
                    Some('"') => break,
                    Some('\\') => match self.bump() {
                        Some(c @ ('"' | '\\')) => out.push(c),
                        _ => {
                            return Err(self.err_at(
                                self.pos.saturating_sub(1),
                                "unsupported escape; only \\\" and \\\\ are recognized",
                            ))
                        }
                    },
                    Some(c) => out.push(c),
                }
            }
            if out.is_empty() {
                return Err(self.err_at(start, "activity label must not be empty"));
            }
            Ok(out)
        } else {
            let mut out = String::new();
            while let Some(c) = self.peek() {
                if c.is_whitespace() || matches!(c, ',' | '(' | ')' | '[' | ']' | '"') {
                    break;
                }
                out.push(c);
                self.bump();
            }
            if out.is_empty() {
                Err(self.err("expected an activity label"))
            } else {
                Ok(out)
            }
        }
    }

    fn integer(&mut self) -> Result<i64, ParseRuleError> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some('-') {
            self.bump();
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        self.src[start..self.pos]
            .parse::<i64>()
            .map_err(|_| self.err_at(start, "expected an integer"))
    }

    fn theta(&mut self) -> Result<Theta, ParseRuleError> {
        self.skip_ws();
        let at = self.pos;
        match self.bump() {
            Some('<') => Ok(if self.eat('=') { Theta::Le } else { Theta::Lt }),
            Some('>') => Ok(if self.eat('=') { Theta::Ge } else { Theta::Gt }),
            Some('=') => Ok(Theta::Eq),
            _ => Err(self.err_at(at, "expected a comparison operator (<, =, >, <=, >=)")),
        }
    }

    fn unit_seconds(&mut self) -> Result<i64, ParseRuleError> {
        self.skip_ws();
        let at = self.pos;
        match self.bump() {
            Some('s') => Ok(1),
            Some('m') => Ok(60),
            Some('h') => Ok(3600),
            Some('d') => Ok(86400),
            _ => Err(self.err_at(at, "expected a time unit (s, m, h, d)")),
        }
    }
}

/// Parse one rule from its text form.
pub fn parse_rule(src: &str) -> Result<Rule, ParseRuleError> {
    let mut s = Scanner::new(src);
    s.skip_ws();
    let kind_pos = s.pos;
    let kw = s.ident();
    if kw.is_empty() {
        return Err(s.err("expected a rule kind (RESPONSE, PRECEDES, EXCLUDE)"));
    }
    let kind = match kw.to_ascii_uppercase().as_str() {
        "RESPONSE" => RuleKind::Response,
        "PRECEDES" => RuleKind::Precedes,
        "EXCLUDE" => RuleKind::Exclude,
        _ => return Err(s.err_at(kind_pos, format!("unknown rule kind `{kw}`"))),
    };

    s.expect('(')?;
    let a = s.label()?;
    s.expect(',')?;
    let b = s.label()?;
    s.skip_ws();

    let mut excluded = Vec::new();
    let mut has_list = false;
    if s.eat(',') {
        s.expect('[')?;
        has_list = true;
        s.skip_ws();
        if s.peek() == Some(']') {
            return Err(s.err("excluded-activity list must not be empty"));
        }
        loop {
            excluded.push(s.label()?);
            s.skip_ws();
            if s.eat(',') {
                continue;
            }
            s.expect(']')?;
            break;
        }
    }
    s.expect(')')?;

    let list_pos = s.pos;
    let window = if s.at_end() {
        TimeWindow::unrestricted()
    } else {
        let kw_pos = s.pos;
        let kw = s.ident();
        if !kw.eq_ignore_ascii_case("TIME") {
            return Err(s.err_at(kw_pos, format!("expected TIME clause or end of rule, found `{kw}`")));
        }
        let theta = s.theta()?;
        let value_pos = {
            s.skip_ws();
            s.pos
        };
        let value = s.integer()?;
        if value < 0 {
            return Err(s.err_at(value_pos, "time bound must be nonnegative"));
        }
        let unit = s.unit_seconds()?;
        let seconds = value
            .checked_mul(unit)
            .ok_or_else(|| s.err_at(value_pos, "time bound overflows seconds"))?;
        TimeWindow::new(TimeDelta::Finite(seconds), theta)
    };

    if !s.at_end() {
        return Err(s.err("unexpected trailing input"));
    }

    Rule::new(kind, a, b, excluded, window).map_err(|e| {
        let pos = if has_list || matches!(e, RuleError::MissingExcluded) { list_pos } else { 0 };
        ParseRuleError { pos, line: None, message: e.to_string() }
    })
}

/// Parse a rule file: one rule per line, blank lines and lines starting with
/// `#` are ignored. Errors carry the 1-based line number.
pub fn parse_rules(src: &str) -> Result<Vec<Rule>, ParseRuleError> {
    let mut rules = Vec::new();
    for (idx, line) in src.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        match parse_rule(line) {
            Ok(rule) => rules.push(rule),
            Err(mut e) => {
                e.line = Some(idx + 1);
                return Err(e);
            }
        }
    }
    Ok(rules)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_table() {
        let fin = TimeDelta::Finite(10);
        assert_eq!(theta_satisfied(Theta::Lt, 5, fin), Ok(true));
        assert_eq!(theta_satisfied(Theta::Eq, 10, fin), Ok(true));
        assert_eq!(theta_satisfied(Theta::Gt, 5, fin), Ok(false));
        assert_eq!(theta_satisfied(Theta::Le, 999_999, TimeDelta::Infinite), Ok(true));
        assert_eq!(theta_satisfied(Theta::Lt, 0, TimeDelta::Infinite), Ok(true));
        assert_eq!(theta_satisfied(Theta::Eq, 0, TimeDelta::Infinite), Ok(false));
        assert_eq!(theta_satisfied(Theta::Gt, i64::MAX, TimeDelta::Infinite), Ok(false));
        assert_eq!(theta_satisfied(Theta::Ge, 7, TimeDelta::Infinite), Ok(false));
    }

    #[test]
    fn theta_rejects_negative_elapsed() {
        assert_eq!(
            theta_satisfied(Theta::Le, -1, TimeDelta::Finite(10)),
            Err(RuleError::NegativeElapsed(-1))
        );
        assert_eq!(
            theta_satisfied(Theta::Lt, -5, TimeDelta::Infinite),
            Err(RuleError::NegativeElapsed(-5))
        );
    }

    #[test]
    fn parse_plain_precedes() {
        let rule = parse_rule("PRECEDES(B, E)").unwrap();
        assert_eq!(rule.kind, RuleKind::Precedes);
        assert_eq!(rule.a, "B");
        assert_eq!(rule.b, "E");
        assert!(rule.excluded.is_empty());
        assert!(rule.window.is_unrestricted());
    }

    #[test]
    fn parse_response_with_window() {
        let rule = parse_rule("RESPONSE(A, B) TIME < 3h").unwrap();
        assert_eq!(rule.kind, RuleKind::Response);
        assert_eq!(rule.window, TimeWindow::new(TimeDelta::Finite(10_800), Theta::Lt));
    }

    #[test]
    fn parse_exclude_with_window() {
        let rule = parse_rule("EXCLUDE(A, D, [E]) TIME <= 7200s").unwrap();
        assert_eq!(rule.kind, RuleKind::Exclude);
        assert_eq!(rule.excluded, vec!["E".to_string()]);
        assert_eq!(rule.window, TimeWindow::new(TimeDelta::Finite(7200), Theta::Le));
    }

    #[test]
    fn parse_quoted_labels() {
        let rule = parse_rule("RESPONSE(\"sign off, final\", \"ship it\") TIME >= 2d").unwrap();
        assert_eq!(rule.a, "sign off, final");
        assert_eq!(rule.b, "ship it");
        assert_eq!(rule.window, TimeWindow::new(TimeDelta::Finite(172_800), Theta::Ge));
    }

    #[test]
    fn parse_quoted_escapes() {
        let rule = parse_rule(r#"RESPONSE("say \"hi\"", "back\\slash")"#).unwrap();
        assert_eq!(rule.a, "say \"hi\"");
        assert_eq!(rule.b, "back\\slash");
    }

    #[test]
    fn parse_errors_carry_positions() {
        let e = parse_rule("RESPOND(A, B)").unwrap_err();
        assert_eq!(e.pos, 0);
        assert!(e.message.contains("RESPOND"));

        let e = parse_rule("RESPONSE(A B)").unwrap_err();
        assert!(e.message.contains("expected `,`"));

        let e = parse_rule("RESPONSE(A, B) TIME < 10").unwrap_err();
        assert!(e.message.contains("time unit"));

        let e = parse_rule("RESPONSE(A, B) TIME < -10s").unwrap_err();
        assert!(e.message.contains("nonnegative"));

        let e = parse_rule("RESPONSE(A, B) garbage").unwrap_err();
        assert!(e.message.contains("TIME clause"));

        let e = parse_rule("RESPONSE(A, B) TIME < 10s extra").unwrap_err();
        assert!(e.message.contains("trailing"));
    }

    #[test]
    fn exclude_list_arity_is_checked() {
        let e = parse_rule("EXCLUDE(A, B)").unwrap_err();
        assert!(e.message.contains("at least one excluded"));

        let e = parse_rule("EXCLUDE(A, B, [])").unwrap_err();
        assert!(e.message.contains("must not be empty"));

        let e = parse_rule("RESPONSE(A, B, [C])").unwrap_err();
        assert!(e.message.contains("only valid for EXCLUDE"));
    }

    #[test]
    fn canonical_print_normalizes_units() {
        let rule = parse_rule("precedes( B ,E )  time <= 2h").unwrap();
        assert_eq!(rule.to_string(), "PRECEDES(B, E) TIME <= 7200s");
        let again = parse_rule(&rule.to_string()).unwrap();
        assert_eq!(rule, again);
    }

    #[test]
    fn canonical_print_quotes_when_needed() {
        let rule = Rule::exclude(
            "a,b",
            "plain",
            vec!["with space".into(), "q\"uote".into()],
            TimeWindow::unrestricted(),
        )
        .unwrap();
        let text = rule.to_string();
        assert_eq!(text, r#"EXCLUDE("a,b", plain, ["with space", "q\"uote"])"#);
        assert_eq!(parse_rule(&text).unwrap(), rule);
    }

    #[test]
    fn unrestricted_window_prints_nothing() {
        let rule = Rule::response("A", "B", TimeWindow::unrestricted()).unwrap();
        assert_eq!(rule.to_string(), "RESPONSE(A, B)");
    }

    #[test]
    fn rule_file_skips_comments_and_blanks() {
        let text = "\n# suite\nPRECEDES(B, E)\n\n  # indented comment\nRESPONSE(A, E) TIME > 1m\n";
        let rules = parse_rules(text).unwrap();
        assert_eq!(rules.len(), 2);
        assert_eq!(rules[1].window, TimeWindow::new(TimeDelta::Finite(60), Theta::Gt));
    }

    #[test]
    fn rule_file_errors_name_the_line() {
        let text = "PRECEDES(B, E)\nRESPONSE(A)\n";
        let e = parse_rules(text).unwrap_err();
        assert_eq!(e.line, Some(2));
    }

    #[test]
    fn constructors_validate() {
        assert_eq!(
            Rule::response("", "B", TimeWindow::unrestricted()),
            Err(RuleError::EmptyLabel)
        );
        assert_eq!(
            Rule::exclude("A", "B", vec![], TimeWindow::unrestricted()),
            Err(RuleError::MissingExcluded)
        );
        assert_eq!(
            Rule::new(
                RuleKind::Precedes,
                "A",
                "B",
                vec!["C".into()],
                TimeWindow::unrestricted()
            ),
            Err(RuleError::UnexpectedExcluded)
        );
        assert_eq!(
            Rule::response("A", "B", TimeWindow::new(TimeDelta::Finite(-1), Theta::Le)),
            Err(RuleError::NegativeDelta(-1))
        );
    }
}
