//! Pass/fail reports shared by the verification suites.

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckItem {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub suite: String,
    pub items: Vec<CheckItem>,
    /// Informational entries that do not affect the verdict.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(suite: impl Into<String>) -> Self {
        Self { suite: suite.into(), items: Vec::new(), notes: Vec::new() }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        let detail = detail.into();
        self.items.push(CheckItem { name: name.into(), passed, detail });
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn merge(&mut self, other: CheckReport) {
        for mut item in other.items {
            item.name = format!("{}/{}", other.suite, item.name);
            self.items.push(item);
        }
        self.notes.extend(other.notes);
    }

    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }

    pub fn failures(&self) -> Vec<&CheckItem> {
        self.items.iter().filter(|i| !i.passed).collect()
    }

    pub fn item(&self, name: &str) -> Option<&CheckItem> {
        self.items.iter().find(|i| i.name == name)
    }

    pub fn render(&self) -> String {
        let mut out = format!("{}\n", self.suite);
        for i in &self.items {
            let mark = if i.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("  [{mark}] {}", i.name));
            if !i.detail.is_empty() {
                out.push_str(&format!(" :: {}", i.detail));
            }
            out.push('\n');
        }
        for n in &self.notes {
            out.push_str(&format!("  note: {n}\n"));
        }
        out
    }
}
