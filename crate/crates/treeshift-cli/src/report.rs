use serde::Serialize;
use serde_json::{Map, Value};

use treeshift::mixing::Record;

pub const HEADER: &str = "treeshift-report v1";

/// Machine-readable output: a version line, then one JSON object with sorted keys.
#[derive(Debug, Serialize)]
pub struct Report {
    command: &'static str,
    records: Vec<Record>,
    #[serde(flatten)]
    fields: Map<String, Value>,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report {
            command,
            records: Vec::new(),
            fields: Map::new(),
        }
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("report values serialize");
        self.fields.insert(key.to_string(), v);
    }

    pub fn push(&mut self, r: Record) {
        self.records.push(r);
    }

    pub fn render(&self) -> String {
        let body = serde_json::to_string_pretty(self).expect("report serializes");
        format!("{HEADER}\n{body}\n")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use treeshift::mixing::Verdict;

    #[test]
    fn header_then_sorted_json() {
        let mut r = Report::new("decide");
        r.set("zeta", 1);
        r.set("alpha", "a");
        r.push(Record::new("ir", Verdict::DecidedTrue));
        let text = r.render();
        let (head, body) = text.split_once('\n').unwrap();
        assert_eq!(head, HEADER);
        assert!(body.find("\"alpha\"").unwrap() < body.find("\"zeta\"").unwrap());
        let v: Value = serde_json::from_str(body).unwrap();
        assert_eq!(v["records"][0]["verdict"]["kind"], "decided_true");
    }
}
