//! Report records: one `key=value` line in machine format, an indented
//! block in human format.

use std::fmt::Display;

use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Machine,
    Human,
}

#[derive(Debug, Clone)]
pub struct Record {
    kind: &'static str,
    fields: Vec<(&'static str, String)>,
}

impl Record {
    pub fn new(kind: &'static str) -> Record {
        Record {
            kind,
            fields: Vec::new(),
        }
    }

    pub fn field(mut self, key: &'static str, value: impl Display) -> Record {
        self.fields.push((key, value.to_string()));
        self
    }

    pub fn render(&self, fmt: Format) -> String {
        match fmt {
            Format::Machine => {
                let mut line = format!("record={}", self.kind);
                for (k, v) in &self.fields {
                    if v.contains(char::is_whitespace) || v.is_empty() {
                        line.push_str(&format!(" {k}=\"{v}\""));
                    } else {
                        line.push_str(&format!(" {k}={v}"));
                    }
                }
                line
            }
            Format::Human => {
                let mut out = self.kind.to_string();
                for (k, v) in &self.fields {
                    out.push_str(&format!("\n  {k}: {v}"));
                }
                out
            }
        }
    }

    pub fn print(&self, fmt: Format) {
        println!("{}", self.render(fmt));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn machine_and_human() {
        let r = Record::new("verify").field("pass", true).field("failure", "two words");
        assert_eq!(r.render(Format::Machine), "record=verify pass=true failure=\"two words\"");
        assert_eq!(r.render(Format::Human), "verify\n  pass: true\n  failure: two words");
    }
}
