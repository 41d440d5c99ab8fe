//! Three-valued check reports with replayable witnesses.
//!
//! `Verified` is reserved for claims whose whole domain was enumerated (or
//! that hold by construction); grid passes of claims quantified over all of
//! ℝ stay `Unknown` with a "no counterexample found" note. A `Refuted`
//! report always carries the first failing tuple in enumeration order,
//! together with both evaluated sides, so the refutation can be replayed.

use serde::Serialize;

use crate::grid::GridSummary;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Verified,
    Refuted,
    Unknown,
}

/// A concrete failing tuple: variable bindings plus the two evaluated sides.
/// Membership-style refutations have a single side; `rhs` is absent there.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub vars: Vec<(String, Rational)>,
    pub lhs: Rational,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<Rational>,
}

impl Witness {
    pub fn equation(vars: Vec<(&str, Rational)>, lhs: Rational, rhs: Rational) -> Self {
        Witness {
            vars: vars.into_iter().map(|(n, v)| (n.to_string(), v)).collect(),
            lhs,
            rhs: Some(rhs),
        }
    }

    pub fn membership(vars: Vec<(&str, Rational)>, value: Rational) -> Self {
        Witness {
            vars: vars.into_iter().map(|(n, v)| (n.to_string(), v)).collect(),
            lhs: value,
            rhs: None,
        }
    }
}

/// Outcome of one check: what was checked, over which grid, and the verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    /// The equation or named condition that was checked.
    #[serde(rename = "equation")]
    pub condition: String,
    /// Description of the function or set under check.
    #[serde(rename = "function")]
    pub subject: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSummary>,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub points_checked: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckReport {
    pub fn new(condition: impl Into<String>, subject: impl Into<String>) -> Self {
        CheckReport {
            condition: condition.into(),
            subject: subject.into(),
            grid: None,
            verdict: Verdict::Unknown,
            witness: None,
            points_checked: 0,
            note: None,
        }
    }

    pub fn with_grid(mut self, grid: GridSummary) -> Self {
        self.grid = Some(grid);
        self
    }

    pub fn refuted(mut self, witness: Witness, points_checked: u64) -> Self {
        self.verdict = Verdict::Refuted;
        self.witness = Some(witness);
        self.points_checked = points_checked;
        self
    }

    pub fn no_counterexample(mut self, points_checked: u64) -> Self {
        self.verdict = Verdict::Unknown;
        self.points_checked = points_checked;
        self.note = Some("no counterexample found".to_string());
        self
    }

    pub fn verified(mut self, points_checked: u64) -> Self {
        self.verdict = Verdict::Verified;
        self.points_checked = points_checked;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn is_refuted(&self) -> bool {
        self.verdict == Verdict::Refuted
    }

    /// Human-readable rendering; stable, used by the CLI and golden tests.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("condition: {}\n", self.condition));
        out.push_str(&format!("subject:   {}\n", self.subject));
        if let Some(grid) = &self.grid {
            let seed = match grid.seed {
                Some(s) => format!(" seed={s}"),
                None => String::new(),
            };
            out.push_str(&format!(
                "grid:      {} R={} D={} ({} points){}\n",
                grid.mode, grid.range, grid.denom, grid.count, seed
            ));
        }
        let verdict = match self.verdict {
            Verdict::Verified => "verified",
            Verdict::Refuted => "REFUTED",
            Verdict::Unknown => "unknown",
        };
        out.push_str(&format!("verdict:   {verdict}\n"));
        if let Some(w) = &self.witness {
            let vars = w
                .vars
                .iter()
                .map(|(n, v)| format!("{n}={v}"))
                .collect::<Vec<_>>()
                .join(", ");
            out.push_str(&format!("witness:   {vars}\n"));
            match &w.rhs {
                Some(rhs) => {
                    out.push_str(&format!("  lhs:     {}\n", w.lhs));
                    out.push_str(&format!("  rhs:     {rhs}\n"));
                }
                None => out.push_str(&format!("  value:   {}\n", w.lhs)),
            }
        }
        out.push_str(&format!("checked:   {} tuples\n", self.points_checked));
        if let Some(note) = &self.note {
            out.push_str(&format!("note:      {note}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use crate::rational::{int, rat};

    #[test]
    fn refuted_report_carries_witness() {
        let w = Witness::equation(vec![("x", int(2)), ("y", int(0))], rat(1, 2), int(0));
        let report = CheckReport::new("decomposer", "linear(1/2)")
            .with_grid(GridSpec::default_exhaustive().summary())
            .refuted(w, 17);
        assert!(report.is_refuted());
        assert!(report.witness.is_some());
        let text = report.render_text();
        assert!(text.contains("REFUTED"));
        assert!(text.contains("x=2, y=0"));
    }

    #[test]
    fn json_shape_matches_contract() {
        let report = CheckReport::new("decomposer", "floor")
            .with_grid(GridSpec::exhaustive(int(1), 2).unwrap().summary())
            .no_counterexample(25);
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["equation"], "decomposer");
        assert_eq!(json["function"], "floor");
        assert_eq!(json["grid"]["mode"], "exhaustive");
        assert_eq!(json["grid"]["R"], "1");
        assert_eq!(json["grid"]["D"], 2);
        assert_eq!(json["grid"]["count"], 5);
        assert_eq!(json["verdict"], "unknown");
        assert_eq!(json["points_checked"], 25);
        assert!(json["witness"].is_null());
    }
}
