//! The plain-text vertex-set format.
//!
//! ```text
//! # n=6 r=2
//! 010101
//! 010110
//! ```
//!
//! The header is optional. Each remaining line is one vertex written as an
//! `n`-character 0–1 string with coordinate 1 leftmost. Blank lines and other
//! `#` lines are ignored.

use std::fmt::Write as _;

use crate::cube::{Vertex, VertexSet};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Header {
    pub n: u32,
    pub r: Option<u32>,
}

#[derive(Debug, Clone)]
pub struct ParsedSet {
    pub set: VertexSet,
    pub header: Option<Header>,
}

fn parse_header(line: &str) -> Option<Header> {
    let body = line.strip_prefix('#')?.trim();
    let mut n = None;
    let mut r = None;
    for tok in body.split_whitespace() {
        if let Some(v) = tok.strip_prefix("n=") {
            n = Some(v.parse().ok()?);
        } else {
            let v = tok.strip_prefix("r=")?;
            r = Some(v.parse().ok()?);
        }
    }
    Some(Header { n: n?, r })
}

/// Parses the text format. The dimension comes from `expected_n`, else the
/// header, else the first vertex line; every line must agree with it.
/// Duplicate vertices are rejected.
pub fn parse_vertex_set(text: &str, expected_n: Option<u32>) -> Result<ParsedSet> {
    let mut header = None;
    let mut n = expected_n;
    let mut members = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('#') {
            if header.is_none() && members.is_empty() {
                if let Some(h) = parse_header(line) {
                    if let Some(exp) = expected_n {
                        if exp != h.n {
                            return Err(Error::Parse {
                                line: line_no,
                                message: format!("header says n={} but n={exp} was requested", h.n),
                            });
                        }
                    }
                    n = Some(h.n);
                    header = Some(h);
                }
            }
            continue;
        }
        let width = *n.get_or_insert(line.len() as u32);
        if line.len() as u32 != width {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected {width} characters, found {}", line.len()),
            });
        }
        let v: Vertex = line.parse().map_err(|e| match e {
            Error::Parse { message, .. } => Error::Parse {
                line: line_no,
                message,
            },
            other => Error::Parse {
                line: line_no,
                message: other.to_string(),
            },
        })?;
        members.push((line_no, v));
    }
    let n = match n {
        Some(n) => n,
        None => {
            return Err(Error::Parse {
                line: 0,
                message: "empty input without an `# n=<n>` header".into(),
            })
        }
    };
    let mut sorted: Vec<(Vertex, usize)> = members.iter().map(|&(l, v)| (v, l)).collect();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(Error::Parse {
            line: w[0].1.max(w[1].1),
            message: format!("duplicate vertex {}", w[0].0),
        });
    }
    let set = VertexSet::from_vertices(n, sorted.into_iter().map(|(v, _)| v).collect())?;
    Ok(ParsedSet { set, header })
}

/// Renders a set with its header, one vertex per line, ascending.
pub fn write_vertex_set(set: &VertexSet, r: Option<u32>) -> String {
    let mut out = String::with_capacity((set.len() + 1) * (set.dim() as usize + 1));
    match r {
        Some(r) => writeln!(out, "# n={} r={r}", set.dim()),
        None => writeln!(out, "# n={}", set.dim()),
    }
    .unwrap();
    for v in set {
        writeln!(out, "{v}").unwrap();
    }
    out
}
