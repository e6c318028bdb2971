//! Check reports: one verdict per named check, rendered as JSON or aligned text.

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub detail: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub config: Value,
    pub checks: Vec<Check>,
    /// Wall-clock time; kept out of the JSON so reports are reproducible.
    #[serde(skip)]
    pub elapsed_ms: Option<u128>,
}

impl Report {
    pub fn new(command: impl Into<String>, config: Value) -> Self {
        Report { schema: 1, command: command.into(), config, checks: Vec::new(), elapsed_ms: None }
    }

    pub fn push(&mut self, name: impl Into<String>, ok: bool, detail: Value) {
        self.checks.push(Check {
            name: name.into(),
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
            detail,
            witness: None,
        });
    }

    pub fn push_witness(&mut self, name: impl Into<String>, ok: bool, detail: Value, witness: Option<Value>) {
        self.checks.push(Check {
            name: name.into(),
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
            detail,
            witness: if ok { None } else { witness },
        });
    }

    pub fn skip(&mut self, name: impl Into<String>, reason: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            verdict: Verdict::Skipped,
            detail: Value::String(reason.into()),
            witness: None,
        });
    }

    pub fn extend(&mut self, prefix: &str, other: Report) {
        for mut c in other.checks {
            c.name = format!("{prefix}{}", c.name);
            self.checks.push(c);
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.verdict != Verdict::Fail)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        let mut out = format!("{}\n", self.command);
        for c in &self.checks {
            let v = match c.verdict {
                Verdict::Pass => "pass",
                Verdict::Fail => "FAIL",
                Verdict::Skipped => "skip",
            };
            let detail = match &c.detail {
                Value::Null => String::new(),
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("  {:width$}  {v}  {detail}\n", c.name));
        }
        if let Some(ms) = self.elapsed_ms {
            out.push_str(&format!("  ({ms} ms)\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn verdicts_and_rendering() {
        let mut r = Report::new("check demo", json!({"n": 2}));
        r.push("a", true, json!(1));
        r.skip("b", "too large");
        assert!(r.passed());
        r.push_witness("c", false, Value::Null, Some(json!([1, 2])));
        assert!(!r.passed());
        let j: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(j["schema"], 1);
        assert_eq!(j["checks"][2]["verdict"], "fail");
        assert_eq!(j["checks"][2]["witness"], json!([1, 2]));
        assert!(r.to_text().contains("FAIL"));
    }
}
