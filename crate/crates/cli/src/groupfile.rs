//! The plain-text group file: `degree N` followed by `gen <cycles>` lines.
//!
//! ```text
//! # comments run to end of line
//! degree 6
//! gen (1,2,3)
//! gen (4,5)
//! ```

use std::fmt::Write as _;
use std::path::Path;

use ddpd_core::{format_cycles, parse_cycles, GroupHandle, Permutation};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupFile {
    pub degree: usize,
    pub generators: Vec<Permutation>,
}

impl GroupFile {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Self {
        Self { degree, generators }
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let mut degree = None;
        let mut generators = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| CliError::Parse {
                line: line_no,
                message,
            };
            let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            match (keyword, degree) {
                ("degree", None) => {
                    let d = rest
                        .parse::<usize>()
                        .map_err(|_| err(format!("invalid degree {rest:?}")))?;
                    degree = Some(d);
                }
                ("degree", Some(_)) => return Err(err("duplicate degree line".into())),
                ("gen", Some(d)) => {
                    let g = parse_cycles(rest, d).map_err(|e| err(e.to_string()))?;
                    generators.push(g);
                }
                ("gen", None) => return Err(err("`gen` before `degree`".into())),
                _ => return Err(err(format!("unknown keyword {keyword:?}"))),
            }
        }
        let degree = degree.ok_or(CliError::Parse {
            line: 1,
            message: "missing `degree` line".into(),
        })?;
        Ok(Self { degree, generators })
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        Self::parse(&crate::read_text(path)?)
    }

    /// Canonical text with LF line endings.
    pub fn to_text(&self) -> String {
        let mut out = format!("degree {}\n", self.degree);
        for g in &self.generators {
            writeln!(out, "gen {}", format_cycles(g)).unwrap();
        }
        out
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        crate::write_text(path, &self.to_text())
    }

    pub fn handle(&self) -> CliResult<GroupHandle> {
        Ok(GroupHandle::new(&self.generators, self.degree)?)
    }
}
