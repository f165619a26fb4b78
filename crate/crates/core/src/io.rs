//! Text formats for graphs, partitions and signals.
//!
//! Edge list:
//! ```text
//! n=4
//! 0<TAB>1<TAB>1
//! 1<TAB>2<TAB>0.5
//! ```
//! One undirected edge per line, `u < v`, positive weight. Blank lines and
//! lines starting with `#` are ignored.
//!
//! Partition: one cluster per line, space-separated vertex indices.
//!
//! Signal: one decimal per line.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{GraphSignal, WeightedGraph};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Lines that carry content, with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn parse_edge_list(text: &str) -> Result<WeightedGraph> {
    let mut lines = content_lines(text);
    let (line_no, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "missing `n=<int>` header"))?;
    let n: usize = header
        .strip_prefix("n=")
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| parse_err(line_no, format!("expected `n=<int>`, found `{header}`")))?;

    let mut seen = BTreeSet::new();
    let mut edges = Vec::new();
    for (line_no, line) in lines {
        let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(parse_err(line_no, "expected `u<TAB>v<TAB>w`"));
        }
        let index = |s: &str| -> Result<usize> {
            s.parse()
                .map_err(|_| parse_err(line_no, format!("bad vertex index `{s}`")))
        };
        let (u, v) = (index(fields[0])?, index(fields[1])?);
        let w: f64 = fields[2]
            .parse()
            .map_err(|_| parse_err(line_no, format!("bad weight `{}`", fields[2])))?;
        if u >= v {
            return Err(parse_err(
                line_no,
                format!("edge ({u}, {v}) must have u < v"),
            ));
        }
        if v >= n {
            return Err(parse_err(
                line_no,
                format!("vertex {v} out of range for n={n}"),
            ));
        }
        if !(w > 0.0 && w.is_finite()) {
            return Err(parse_err(
                line_no,
                format!("weight {w} must be positive and finite"),
            ));
        }
        if !seen.insert((u, v)) {
            return Err(parse_err(line_no, format!("duplicate edge ({u}, {v})")));
        }
        edges.push((u, v, w));
    }
    WeightedGraph::from_edges(n, edges)
}

pub fn format_edge_list(graph: &WeightedGraph) -> String {
    let mut out = format!("n={}\n", graph.n());
    for (u, v, w) in graph.edges() {
        let _ = writeln!(out, "{u}\t{v}\t{w}");
    }
    out
}

pub fn parse_partition(text: &str) -> Result<Vec<Vec<usize>>> {
    content_lines(text)
        .map(|(line_no, line)| {
            line.split_whitespace()
                .map(|s| {
                    s.parse()
                        .map_err(|_| parse_err(line_no, format!("bad vertex index `{s}`")))
                })
                .collect()
        })
        .collect()
}

pub fn format_partition(clusters: &[Vec<usize>]) -> String {
    let mut out = String::new();
    for c in clusters {
        let line: Vec<String> = c.iter().map(ToString::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// Parses a signal; when `n` is given the line count must match.
pub fn parse_signal(text: &str, n: Option<usize>) -> Result<GraphSignal> {
    let values = content_lines(text)
        .map(|(line_no, line)| {
            let x: f64 = line
                .parse()
                .map_err(|_| parse_err(line_no, format!("bad value `{line}`")))?;
            if !x.is_finite() {
                return Err(parse_err(line_no, "non-finite value"));
            }
            Ok(x)
        })
        .collect::<Result<Vec<f64>>>()?;
    if let Some(n) = n {
        if values.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: values.len(),
            });
        }
    }
    GraphSignal::new(values)
}

pub fn format_signal(f: &GraphSignal) -> String {
    let mut out = String::new();
    for x in f.as_slice() {
        let _ = writeln!(out, "{x}");
    }
    out
}

pub fn read_edge_list(path: &Path) -> Result<WeightedGraph> {
    parse_edge_list(&std::fs::read_to_string(path)?)
}

pub fn read_partition(path: &Path) -> Result<Vec<Vec<usize>>> {
    parse_partition(&std::fs::read_to_string(path)?)
}

pub fn read_signal(path: &Path, n: Option<usize>) -> Result<GraphSignal> {
    parse_signal(&std::fs::read_to_string(path)?, n)
}

/// `%.15g`-style formatting: 15 significant digits, trailing zeros trimmed.
pub fn format_sig15(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let sci = format!("{x:.14e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..15).contains(&exp) {
        let decimals = (14 - exp).max(0) as usize;
        let fixed = format!("{x:.decimals$}");
        trim_zeros(&fixed)
    } else {
        format!(
            "{}e{}{:02}",
            trim_zeros(mantissa),
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}
