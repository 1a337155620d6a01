//! The report emitted by every command, with text and JSON renderings.

use std::fmt::Write as _;

use serde::Serialize;

use crate::document::Diagnostic;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub target: String,
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// Dimensions per degree, starting in degree 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Table {
    pub target: String,
    pub label: String,
    pub dims: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub file: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub object: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<usize>,
    pub checks: Vec<Check>,
    pub betti: Vec<Table>,
    /// Highest degree in which the reported homology is exact.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reliable_up_to: Option<usize>,
    pub notes: Vec<String>,
    pub diagnostics: Vec<Diagnostic>,
    pub elapsed_ms: f64,
    pub status: Status,
    pub exit_code: i32,
}

impl Report {
    pub fn new(command: &str, file: &str, object: Option<&str>) -> Self {
        Report {
            command: command.to_string(),
            file: file.to_string(),
            object: object.map(str::to_string),
            field: None,
            max_degree: None,
            checks: Vec::new(),
            betti: Vec::new(),
            reliable_up_to: None,
            notes: Vec::new(),
            diagnostics: Vec::new(),
            elapsed_ms: 0.0,
            status: Status::Pass,
            exit_code: 0,
        }
    }

    pub fn check(&mut self, target: &str, name: &str, verdict: Result<(), String>) {
        let (passed, detail) = match verdict {
            Ok(()) => (true, None),
            Err(d) => (false, Some(d)),
        };
        self.checks.push(Check {
            target: target.to_string(),
            name: name.to_string(),
            passed,
            detail,
        });
    }

    pub fn table(&mut self, target: &str, label: &str, dims: Vec<usize>) {
        self.betti.push(Table {
            target: target.to_string(),
            label: label.to_string(),
            dims,
        });
    }

    /// Lower the reliability bound to `r` if it is tighter.
    pub fn reliable(&mut self, r: usize) {
        self.reliable_up_to = Some(self.reliable_up_to.map_or(r, |s| s.min(r)));
    }

    /// Fix status and exit code from the diagnostics and verdicts.
    pub fn finish(&mut self) {
        let mut seen = std::collections::HashSet::new();
        self.notes.retain(|n| seen.insert(n.clone()));
        let mut seen = std::collections::HashSet::new();
        self.diagnostics.retain(|d| seen.insert(d.to_string()));
        self.status = if !self.diagnostics.is_empty() {
            Status::Error
        } else if self.checks.iter().any(|c| !c.passed) {
            Status::Fail
        } else {
            Status::Pass
        };
        self.exit_code = match self.status {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Error => 2,
        };
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = write!(s, "hgx {} {}", self.command, self.file);
        if let Some(o) = &self.object {
            let _ = write!(s, " --object {o}");
        }
        s.push('\n');
        if let (Some(f), Some(n)) = (&self.field, self.max_degree) {
            let _ = writeln!(s, "field {f}, max_degree {n}");
        }
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            let _ = write!(s, "{tag}  {}: {}", c.target, c.name);
            if let Some(d) = &c.detail {
                let _ = write!(s, " ({d})");
            }
            s.push('\n');
        }
        for t in &self.betti {
            let dims: Vec<String> = t.dims.iter().map(usize::to_string).collect();
            let _ = writeln!(
                s,
                "{}  {}: [{}] in degrees 0..{}",
                t.target,
                t.label,
                dims.join(", "),
                t.dims.len().saturating_sub(1)
            );
        }
        if let Some(r) = self.reliable_up_to {
            let _ = writeln!(s, "reliable up to degree {r}");
        }
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        for d in &self.diagnostics {
            let _ = writeln!(s, "error: {d}");
        }
        let status = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
        };
        let _ = writeln!(s, "{status} (exit {}) in {:.1} ms", self.exit_code, self.elapsed_ms);
        s
    }
}
