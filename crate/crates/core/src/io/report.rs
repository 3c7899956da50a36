use std::fmt::Write;

/// Output style for reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Rows,
}

/// Human-readable lines plus machine-readable `key=value` rows, kept in emission order.
#[derive(Clone, Debug, Default)]
pub struct Report {
    text: Vec<String>,
    rows: Vec<Vec<(String, String)>>,
}

fn quote(v: &str) -> String {
    if v.is_empty() || v.chars().any(|c| c.is_whitespace() || c == '=' || c == '"') {
        format!("{v:?}")
    } else {
        v.to_string()
    }
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.text.push(s.into());
    }

    pub fn row<K: AsRef<str>, V: ToString>(&mut self, pairs: &[(K, V)]) {
        self.rows.push(pairs.iter().map(|(k, v)| (k.as_ref().to_string(), v.to_string())).collect());
    }

    pub fn rows(&self) -> &[Vec<(String, String)>] {
        &self.rows
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Text => {
                for l in &self.text {
                    let _ = writeln!(out, "{l}");
                }
            }
            Format::Rows => {
                for r in &self.rows {
                    let cells: Vec<String> = r.iter().map(|(k, v)| format!("{k}={}", quote(v))).collect();
                    let _ = writeln!(out, "{}", cells.join(" "));
                }
            }
        }
        out
    }
}
