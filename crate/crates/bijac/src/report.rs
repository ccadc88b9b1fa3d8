//! Report data structures: one record per check, with a four-valued
//! verdict, serialized to byte-stable JSON.
//!
//! Reports are machine-diffable: running the same configuration twice
//! produces identical bytes, so golden files can drive regression tests.
//! Every numeric claim carries the bidegrees, field, and seeds needed to
//! recompute it.

use serde::Serialize;
use serde_json::Value;

use crate::config::RunConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    Undecided,
    /// The check had nothing to decide (empty kernel, inapplicable
    /// degree); counts as a pass.
    VacuousPass,
}

impl Verdict {
    pub fn is_passing(&self) -> bool {
        matches!(self, Verdict::Pass | Verdict::VacuousPass)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Undecided => "undecided",
            Verdict::VacuousPass => "vacuous-pass",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub inputs: Value,
    pub outputs: Value,
    pub verdict: Verdict,
    /// One-line human summary for the table renderer; not part of the
    /// JSON schema.
    #[serde(skip)]
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CurveInfo {
    pub d: i64,
    pub e: i64,
    pub field: String,
    pub polynomial: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub config: RunConfig,
    pub curve: CurveInfo,
    pub checks: Vec<Check>,
    pub verdict: Verdict,
}

impl Report {
    /// Worst verdict of the checks: fail beats undecided beats pass.
    pub fn aggregate(checks: &[Check]) -> Verdict {
        let mut out = Verdict::Pass;
        for c in checks {
            match c.verdict {
                Verdict::Fail => return Verdict::Fail,
                Verdict::Undecided => out = Verdict::Undecided,
                _ => {}
            }
        }
        out
    }

    /// Process exit code: 0 pass, 1 fail, 3 undecided (2 is reserved for
    /// input errors, raised before a report exists).
    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Verdict::Pass | Verdict::VacuousPass => 0,
            Verdict::Fail => 1,
            Verdict::Undecided => 3,
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }

    /// Plain-text table for the terminal.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "bijac {} — curve of bidegree ({},{}) over {}\n",
            self.config.command, self.curve.d, self.curve.e, self.curve.field
        ));
        if self.config.verbose || self.curve.polynomial.len() <= 100 {
            out.push_str(&format!("curve: {}\n", self.curve.polynomial));
        }
        out.push('\n');
        let name_w = self
            .checks
            .iter()
            .map(|c| c.name.len())
            .max()
            .unwrap_or(5)
            .max(5);
        out.push_str(&format!("{:name_w$}  {:12}  detail\n", "CHECK", "VERDICT"));
        for c in &self.checks {
            out.push_str(&format!(
                "{:name_w$}  {:12}  {}\n",
                c.name,
                c.verdict.as_str(),
                c.detail
            ));
        }
        out.push_str(&format!("\noverall: {}\n", self.verdict));
        out
    }
}
