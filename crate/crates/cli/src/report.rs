use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Fail,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Fail => 1,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Fail => "fail",
        }
    }
}

/// Outcome of one command: a status, ordered key/value findings, and an
/// optional block of text (a table, a word list) shown before them.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub status: Status,
    details: Vec<(String, Value)>,
    body: Option<String>,
}

impl Report {
    pub fn new(command: &'static str, status: Status) -> Self {
        Self { command, status, details: Vec::new(), body: None }
    }

    pub fn ok(command: &'static str) -> Self {
        Self::new(command, Status::Ok)
    }

    pub fn fail(command: &'static str) -> Self {
        Self::new(command, Status::Fail)
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.details.push((key.to_owned(), value.into()));
        self
    }

    pub fn body(mut self, text: String) -> Self {
        self.body = Some(text);
        self
    }

    pub fn to_json(&self) -> Value {
        let details: Map<String, Value> = self.details.iter().cloned().collect();
        let mut out = Map::new();
        out.insert("command".into(), self.command.into());
        out.insert("status".into(), self.status.as_str().into());
        out.insert("details".into(), Value::Object(details));
        if let Some(body) = &self.body {
            out.insert("output".into(), body.clone().into());
        }
        Value::Object(out)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(body) = &self.body {
            out.push_str(body);
            if !body.ends_with('\n') {
                out.push('\n');
            }
        }
        out.push_str(&format!("status: {}\n", self.status.as_str()));
        for (k, v) in &self.details {
            match v {
                Value::String(s) => out.push_str(&format!("{k}: {s}\n")),
                Value::Array(items)
                    if items.iter().all(|i| i.as_str().is_some_and(|s| s.contains(char::is_whitespace))) =>
                {
                    out.push_str(&format!("{k}:\n"));
                    for item in items {
                        out.push_str(&format!("  {}\n", item.as_str().unwrap_or_default()));
                    }
                }
                other => out.push_str(&format!("{k}: {other}\n")),
            }
        }
        out
    }
}
