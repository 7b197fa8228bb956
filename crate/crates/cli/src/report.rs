//! Uniform result records: named items carrying a verdict and its evidence
//! (a certificate, measurements, or the note "sampled"), rendered as text or
//! as one stable JSON document.

use serde_json::{json, Value};

pub struct Report {
    title: String,
    items: Vec<Item>,
}

struct Item {
    name: String,
    /// None for purely informational items.
    pass: Option<bool>,
    detail: Value,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Report {
        Report { title: title.into(), items: Vec::new() }
    }

    pub fn info(&mut self, name: impl Into<String>, detail: Value) {
        self.items.push(Item { name: name.into(), pass: None, detail });
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool, detail: Value) {
        self.items.push(Item { name: name.into(), pass: Some(pass), detail });
    }

    /// True when no checked item failed; informational items do not count.
    pub fn all_pass(&self) -> bool {
        self.items.iter().all(|i| i.pass != Some(false))
    }

    pub fn to_json(&self) -> Value {
        let items: Vec<Value> = self
            .items
            .iter()
            .map(|i| json!({ "name": i.name, "pass": i.pass, "detail": i.detail }))
            .collect();
        json!({ "title": self.title, "pass": self.all_pass(), "items": items })
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("# {}\n", self.title);
        for item in &self.items {
            let tag = match item.pass {
                Some(true) => "ok  ",
                Some(false) => "FAIL",
                None => "    ",
            };
            out.push_str(&format!("{tag} {}\n", item.name));
            if !item.detail.is_null() {
                let pretty = serde_json::to_string_pretty(&item.detail).expect("detail is JSON");
                for line in pretty.lines() {
                    out.push_str("       ");
                    out.push_str(line);
                    out.push('\n');
                }
            }
        }
        out
    }
}
