//! Structured pass/fail reports emitted by every verification routine.
//!
//! A [`Report`] is deterministic: its JSON body contains no timestamps or
//! machine-dependent data, so two runs with the same inputs serialize to
//! identical bytes. Wall-clock timing is rendered separately as a footer
//! comment line that callers append *after* the JSON body.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

/// Schema version stamped into every report.
pub const REPORT_SCHEMA_VERSION: &str = "1";

/// The closed vocabulary of claim anchors a report may cite.
pub const ANCHORS: &[&str] = &[
    "super-jacobi",
    "witt-realization",
    "module-axiom",
    "twist-automorphism",
    "embedding-homomorphism",
    "restriction-consistency",
    "k-identity",
    "submodule-closure",
    "orbit-fill",
    "restricted-contrast",
    "intertwiner-map",
    "intertwiner-space",
    "parity-witness",
    "mutation-sensitivity",
];

/// Outcome of one verification routine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    /// Every checked instance held exactly.
    Pass,
    /// At least one instance produced a nonzero residual.
    Fail,
    /// The check could not be decided inside the window.
    SkippedLeakage,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Pass => write!(f, "pass"),
            Status::Fail => write!(f, "fail"),
            Status::SkippedLeakage => write!(f, "skipped-leakage"),
        }
    }
}

/// One failing instance with its exact nonzero residual, rendered as text.
#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    pub instance: String,
    pub residual: String,
}

/// Deterministic record of one verification run.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub schema_version: String,
    /// Which CLI check produced this report.
    pub check: String,
    /// Claim anchor (one of [`ANCHORS`]).
    pub anchor: String,
    /// Instance descriptors (algebra, family, parameter values, window …).
    pub instance: BTreeMap<String, String>,
    pub status: Status,
    /// Named instance counters (triples checked, basis vectors probed, …).
    pub counts: BTreeMap<String, u64>,
    /// Failing instances; empty on pass. Truncated lists note the fact in
    /// `counts["failures-total"]`.
    pub failures: Vec<Failure>,
}

/// Cap on stored failures so a broken run stays readable.
const MAX_STORED_FAILURES: usize = 16;

impl Report {
    /// Creates an empty passing report; `anchor` must come from [`ANCHORS`].
    pub fn new(check: &str, anchor: &str) -> Report {
        assert!(
            ANCHORS.contains(&anchor),
            "unknown report anchor {anchor:?}; extend ANCHORS deliberately"
        );
        Report {
            schema_version: REPORT_SCHEMA_VERSION.to_string(),
            check: check.to_string(),
            anchor: anchor.to_string(),
            instance: BTreeMap::new(),
            status: Status::Pass,
            counts: BTreeMap::new(),
            failures: Vec::new(),
        }
    }

    /// Records an instance descriptor.
    pub fn describe(&mut self, key: &str, value: impl fmt::Display) -> &mut Self {
        self.instance.insert(key.to_string(), value.to_string());
        self
    }

    /// Adds to a named counter.
    pub fn add_count(&mut self, key: &str, n: u64) -> &mut Self {
        *self.counts.entry(key.to_string()).or_insert(0) += n;
        self
    }

    /// Increments a named counter by one.
    pub fn bump(&mut self, key: &str) -> &mut Self {
        self.add_count(key, 1)
    }

    /// Records one failing instance and flips the status to `Fail`.
    pub fn fail(&mut self, instance: impl fmt::Display, residual: impl fmt::Display) -> &mut Self {
        self.status = Status::Fail;
        self.bump("failures-total");
        if self.failures.len() < MAX_STORED_FAILURES {
            self.failures.push(Failure {
                instance: instance.to_string(),
                residual: residual.to_string(),
            });
        }
        self
    }

    /// Marks the report undecidable inside the window (never downgrades a
    /// `Fail`).
    pub fn skip_leakage(&mut self) -> &mut Self {
        if self.status == Status::Pass {
            self.status = Status::SkippedLeakage;
        }
        self.bump("skipped-leakage");
        self
    }

    /// True iff the status is `Pass`.
    pub fn is_pass(&self) -> bool {
        self.status == Status::Pass
    }

    /// Deterministic JSON body (pretty, trailing newline, no timing data).
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One-line human summary.
    pub fn summary_line(&self) -> String {
        let counts: Vec<String> =
            self.counts.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("{}: {} [{}] {}", self.check, self.status, self.anchor, counts.join(" "))
    }
}

/// Serializes several reports as one deterministic JSON array.
pub fn reports_to_json(reports: &[Report]) -> String {
    let mut s = serde_json::to_string_pretty(reports).expect("reports serialize");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct Section<'a> {
    anchor: &'a str,
    reports: Vec<&'a Report>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Aggregate<'a> {
    schema_version: &'static str,
    sections: Vec<Section<'a>>,
}

/// Serializes reports as one aggregate document with per-anchor sections,
/// in [`ANCHORS`] order. Anchors with no reports are omitted.
pub fn aggregate_to_json(reports: &[Report]) -> String {
    let sections = ANCHORS
        .iter()
        .filter_map(|anchor| {
            let rs: Vec<&Report> = reports.iter().filter(|r| r.anchor == *anchor).collect();
            if rs.is_empty() {
                None
            } else {
                Some(Section { anchor, reports: rs })
            }
        })
        .collect();
    let doc = Aggregate { schema_version: REPORT_SCHEMA_VERSION, sections };
    let mut s = serde_json::to_string_pretty(&doc).expect("aggregate serializes");
    s.push('\n');
    s
}

/// Non-checksummed footer carrying wall-clock timing; printed after the
/// JSON body, never inside it.
pub fn timing_footer(wall_ms: u128) -> String {
    format!("# wall-time-ms: {wall_ms}\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_body_is_deterministic_and_footer_is_separate() {
        let mut r = Report::new("verify-algebra", "super-jacobi");
        r.describe("algebra", "R").add_count("triples", 6859);
        let a = r.to_json();
        let b = r.to_json();
        assert_eq!(a, b);
        assert!(a.contains("\"schemaVersion\": \"1\""));
        assert!(a.contains("\"status\": \"pass\""));
        assert!(!a.contains("wall-time"));
        assert!(timing_footer(12).starts_with("# wall-time-ms:"));
    }

    #[test]
    fn failure_flips_status_and_caps_storage() {
        let mut r = Report::new("verify-module", "module-axiom");
        for i in 0..40 {
            r.fail(format!("case {i}"), "1");
        }
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.failures.len(), 16);
        assert_eq!(r.counts["failures-total"], 40);
        assert!(!r.is_pass());
    }

    #[test]
    #[should_panic(expected = "unknown report anchor")]
    fn unknown_anchor_is_rejected() {
        let _ = Report::new("verify-algebra", "not-a-real-anchor");
    }
}
