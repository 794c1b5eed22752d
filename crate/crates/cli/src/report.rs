use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Debug, Serialize)]
pub struct Section {
    pub verified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_deviation: Option<f64>,
    pub detail: String,
}

impl Section {
    pub fn exact(verified: bool, detail: impl Into<String>) -> Section {
        Section { verified, max_deviation: None, detail: detail.into() }
    }

    pub fn within(deviation: f64, tol: f64, detail: impl Into<String>) -> Section {
        Section { verified: deviation <= tol, max_deviation: Some(deviation), detail: detail.into() }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Verification {
    pub verified: bool,
    pub sections: BTreeMap<String, Section>,
}

impl Verification {
    pub fn new(sections: impl IntoIterator<Item = (&'static str, Section)>) -> Verification {
        let sections: BTreeMap<String, Section> = sections.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
        Verification { verified: sections.values().all(|s| s.verified), sections }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub seed: u64,
    /// Human-readable tables; text mode shows these first.
    pub display: Vec<String>,
    pub data: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<Verification>,
}

impl Report {
    pub fn failed_verification(&self) -> bool {
        self.verification.as_ref().is_some_and(|v| !v.verified)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// The display block, then every scalar of the JSON form as `path = value`.
    pub fn to_text(&self) -> String {
        let mut out = format!("# dh {} (seed {})\n", self.command, self.seed);
        for line in &self.display {
            out.push_str(line);
            out.push('\n');
        }
        out.push_str("\n## data\n");
        flatten(&self.data, "", &mut out);
        if let Some(v) = &self.verification {
            out.push_str("\n## verification\n");
            let value = serde_json::to_value(v).expect("verification serializes");
            flatten(&value, "", &mut out);
        }
        out
    }
}

fn flatten(v: &Value, path: &str, out: &mut String) {
    let join = |k: &str| if path.is_empty() { k.to_string() } else { format!("{path}.{k}") };
    match v {
        Value::Object(map) => {
            if map.is_empty() {
                let _ = writeln!(out, "{path} = {{}}");
            }
            for (k, x) in map {
                flatten(x, &join(k), out);
            }
        }
        Value::Array(items) => {
            if items.is_empty() {
                let _ = writeln!(out, "{path} = []");
            }
            for (i, x) in items.iter().enumerate() {
                flatten(x, &join(&i.to_string()), out);
            }
        }
        Value::String(s) => {
            let _ = writeln!(out, "{path} = {s}");
        }
        other => {
            let _ = writeln!(out, "{path} = {other}");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn text_flattens_every_scalar() {
        let r = Report {
            command: "run",
            seed: 3,
            display: vec!["q1 = (Z, -Y, X)".into()],
            data: json!({"a": {"b": [1, "x"]}, "c": true, "e": []}),
            verification: Some(Verification::new([("s", Section::exact(true, "ok"))])),
        };
        let t = r.to_text();
        assert!(t.contains("a.b.0 = 1\na.b.1 = x\nc = true\ne = []\n"));
        assert!(t.contains("sections.s.verified = true"));
        assert!(!r.failed_verification());
    }
}
