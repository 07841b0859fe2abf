//! Per-degree verdict tables shared by every check.

use std::fmt::Write as _;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeEntry {
    pub degree: i32,
    pub verdict: Verdict,
    pub invariants: Vec<String>,
    pub cap_tainted: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl DegreeEntry {
    pub fn new(degree: i32, ok: bool) -> Self {
        DegreeEntry {
            degree,
            verdict: Verdict::from_bool(ok),
            invariants: Vec::new(),
            cap_tainted: false,
            detail: None,
        }
    }

    pub fn invariant(mut self, s: impl Into<String>) -> Self {
        self.invariants.push(s.into());
        self
    }

    pub fn tainted(mut self, t: bool) -> Self {
        self.cap_tainted = t;
        self
    }

    pub fn detail(mut self, s: impl Into<String>) -> Self {
        self.detail = Some(s.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// One named check evaluated degree by degree.
///
/// A report passes when every entry that is not cap-tainted passes; tainted
/// entries keep their computed verdict but do not count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeReport {
    pub check: String,
    pub entries: Vec<DegreeEntry>,
}

impl DegreeReport {
    pub fn new(check: impl Into<String>) -> Self {
        DegreeReport {
            check: check.into(),
            entries: Vec::new(),
        }
    }

    pub fn push(&mut self, e: DegreeEntry) {
        self.entries.push(e);
    }

    pub fn passed(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn failures(&self) -> impl Iterator<Item = &DegreeEntry> {
        self.entries
            .iter()
            .filter(|e| !e.passed() && !e.cap_tainted)
    }

    pub fn first_failure(&self) -> Option<&DegreeEntry> {
        self.failures().next()
    }

    pub fn entry(&self, degree: i32) -> Option<&DegreeEntry> {
        self.entries.iter().find(|e| e.degree == degree)
    }

    pub fn tainted_degrees(&self) -> Vec<i32> {
        self.entries
            .iter()
            .filter(|e| e.cap_tainted)
            .map(|e| e.degree)
            .collect()
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{}: {}",
            self.check,
            if self.passed() { "PASS" } else { "FAIL" }
        );
        for e in &self.entries {
            let _ = write!(
                s,
                "  {:>4}  {}",
                e.degree,
                if e.passed() { "pass" } else { "FAIL" }
            );
            if e.cap_tainted {
                s.push_str("  [cap-tainted]");
            }
            if !e.invariants.is_empty() {
                let _ = write!(s, "  {}", e.invariants.join(", "));
            }
            if let Some(d) = &e.detail {
                let _ = write!(s, "  ({d})");
            }
            s.push('\n');
        }
        s
    }
}

impl Serialize for DegreeReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("DegreeReport", 3)?;
        st.serialize_field("check", &self.check)?;
        st.serialize_field("passed", &self.passed())?;
        st.serialize_field("entries", &self.entries)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tainted_failures_do_not_count() {
        let mut r = DegreeReport::new("x");
        r.push(DegreeEntry::new(0, true));
        r.push(DegreeEntry::new(-1, false).tainted(true));
        assert!(r.passed());
        r.push(DegreeEntry::new(-2, false));
        assert!(!r.passed());
        assert_eq!(r.first_failure().unwrap().degree, -2);
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["passed"], false);
        assert_eq!(json["entries"][1]["cap_tainted"], true);
    }
}
