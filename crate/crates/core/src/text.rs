//! Shared conventions of the plain-text file formats: UTF-8, LF line endings,
//! `#` comment lines, `[section]` headers, whitespace-separated fields and
//! reals written with 17 significant digits.

use std::str::FromStr;

use crate::error::{Error, Result};

/// 17 significant digits: enough for an exact `f64` round trip.
pub(crate) fn real(x: f64) -> String {
    format!("{x:.16e}")
}

pub(crate) struct Section<'a> {
    pub name: &'a str,
    pub header_line: usize,
    /// `(1-based line number, trimmed content)` of every non-comment line.
    pub lines: Vec<(usize, &'a str)>,
}

pub(crate) struct Document<'a> {
    sections: Vec<Section<'a>>,
    last_line: usize,
}

impl<'a> Document<'a> {
    pub fn parse(text: &'a str, known: &[&str]) -> Result<Self> {
        let mut sections: Vec<Section<'a>> = Vec::new();
        let mut last_line = 0;
        for (i, raw) in text.split('\n').enumerate() {
            let line_no = i + 1;
            let line = raw.trim_matches(|c| c == ' ' || c == '\t');
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            last_line = line_no;
            if let Some(name) = line.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| Error::parse(line_no, format!("malformed section header `{line}`")))?;
                if !known.contains(&name) {
                    return Err(Error::parse(line_no, format!("unknown section `{name}`")));
                }
                if sections.iter().any(|s| s.name == name) {
                    return Err(Error::parse(line_no, format!("section `{name}` appears twice")));
                }
                sections.push(Section {
                    name,
                    header_line: line_no,
                    lines: Vec::new(),
                });
                continue;
            }
            match sections.last_mut() {
                Some(s) => s.lines.push((line_no, line)),
                None => return Err(Error::parse(line_no, "content before the first section")),
            }
        }
        Ok(Self { sections, last_line })
    }

    pub fn take(&mut self, name: &str) -> Result<Section<'a>> {
        match self.sections.iter().position(|s| s.name == name) {
            Some(i) => Ok(self.sections.remove(i)),
            None => Err(Error::parse(
                self.last_line + 1,
                format!("missing section `[{name}]` (truncated file?)"),
            )),
        }
    }
}

impl Section<'_> {
    /// The single line of a one-line section.
    pub fn single(&self) -> Result<(usize, &str)> {
        match self.lines.as_slice() {
            [one] => Ok(*one),
            [] => Err(Error::parse(
                self.header_line,
                format!("section `[{}]` is empty", self.name),
            )),
            [_, (line, _), ..] => Err(Error::parse(
                *line,
                format!("section `[{}]` takes a single line", self.name),
            )),
        }
    }
}

pub(crate) fn field<T: FromStr>(token: Option<&str>, line: usize, what: &str) -> Result<T> {
    let token = token.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    token
        .parse()
        .map_err(|_| Error::parse(line, format!("invalid {what} `{token}`")))
}

pub(crate) fn finish<'a>(mut tokens: impl Iterator<Item = &'a str>, line: usize) -> Result<()> {
    match tokens.next() {
        None => Ok(()),
        Some(t) => Err(Error::parse(line, format!("unexpected trailing field `{t}`"))),
    }
}

pub(crate) fn list<T: FromStr>(text: &str, line: usize, what: &str) -> Result<Vec<T>> {
    text.split_whitespace()
        .map(|t| field(Some(t), line, what))
        .collect()
}
