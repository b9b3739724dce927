//! Command output in two renderings: an aligned plain table for people and a
//! sectioned text form, like the circuit format, for scripts and golden files.

use std::fmt::Write;

use clap::ValueEnum;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Plain,
    Machine,
}

#[derive(Clone, Debug)]
pub enum Value {
    Int(u128),
    Real(f64),
    Text(String),
}

impl Value {
    fn render(&self, format: Format) -> String {
        match (self, format) {
            (Value::Int(n), _) => n.to_string(),
            (Value::Real(x), Format::Machine) => format!("{x:.16e}"),
            (Value::Real(x), Format::Plain) => format!("{x:.6e}"),
            (Value::Text(s), _) => s.clone(),
        }
    }
}

impl From<usize> for Value {
    fn from(n: usize) -> Self {
        Value::Int(n as u128)
    }
}

impl From<u32> for Value {
    fn from(n: u32) -> Self {
        Value::Int(n.into())
    }
}

impl From<u64> for Value {
    fn from(n: u64) -> Self {
        Value::Int(n.into())
    }
}

impl From<u128> for Value {
    fn from(n: u128) -> Self {
        Value::Int(n)
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Real(x)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Text(if b { "yes" } else { "no" }.into())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Text(s)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.into())
    }
}

enum Entry {
    Field(String, Value),
    /// A row of values, as in a table or sample list.
    Row(Vec<Value>),
}

struct Section {
    name: String,
    entries: Vec<Entry>,
}

pub struct Report {
    title: &'static str,
    sections: Vec<Section>,
}

impl Report {
    pub fn new(title: &'static str) -> Self {
        Self {
            title,
            sections: Vec::new(),
        }
    }

    pub fn section(&mut self, name: &str) -> &mut Self {
        self.sections.push(Section {
            name: name.into(),
            entries: Vec::new(),
        });
        self
    }

    fn current(&mut self) -> &mut Section {
        self.sections.last_mut().expect("a section is open")
    }

    pub fn field(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.current().entries.push(Entry::Field(key.into(), value.into()));
        self
    }

    pub fn row(&mut self, values: Vec<Value>) -> &mut Self {
        self.current().entries.push(Entry::Row(values));
        self
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Machine => {
                writeln!(out, "# cdbs {} report", self.title).unwrap();
                for s in &self.sections {
                    writeln!(out, "[{}]", s.name).unwrap();
                    for e in &s.entries {
                        let line = match e {
                            Entry::Field(k, v) => format!("{k} {}", v.render(format)),
                            Entry::Row(vs) => join(vs, format),
                        };
                        writeln!(out, "{line}").unwrap();
                    }
                }
            }
            Format::Plain => {
                for (i, s) in self.sections.iter().enumerate() {
                    if i > 0 {
                        out.push('\n');
                    }
                    writeln!(out, "{}:", s.name).unwrap();
                    let width = s
                        .entries
                        .iter()
                        .filter_map(|e| match e {
                            Entry::Field(k, _) => Some(k.len()),
                            Entry::Row(_) => None,
                        })
                        .max()
                        .unwrap_or(0);
                    for e in &s.entries {
                        match e {
                            Entry::Field(k, v) => writeln!(out, "  {k:<width$}  {}", v.render(format)).unwrap(),
                            Entry::Row(vs) => writeln!(out, "  {}", join(vs, format)).unwrap(),
                        }
                    }
                }
            }
        }
        out
    }
}

fn join(values: &[Value], format: Format) -> String {
    values.iter().map(|v| v.render(format)).collect::<Vec<_>>().join(" ")
}
