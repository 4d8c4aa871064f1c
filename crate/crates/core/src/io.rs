//! Line-oriented `.qbaf` text format and trajectory CSV output.
//!
//! ```text
//! # comment
//! arg <id> <base_score>
//! edge <src> <dst> <weight>
//! ```
//!
//! Ids are tokens of ASCII letters, digits and `_`; they are numbered in the
//! order of their `arg` lines. Floats are written in the shortest form that
//! parses back to the same `f64`.

use std::io::Write;

use crate::error::{Error, Result};
use crate::model::{Qbaf, QbafBuilder, SolveReport};

/// Splits a line into `(1-based column, token)` pairs, dropping any comment.
pub(crate) fn tokenize(line: &str) -> Vec<(usize, &str)> {
    let code = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in code.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s + 1, &code[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &code[s..]));
    }
    out
}

pub(crate) fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

pub(crate) fn parse_id(line: usize, (col, tok): (usize, &str)) -> Result<String> {
    if tok.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        Ok(tok.to_string())
    } else {
        Err(syntax(line, col, format!("invalid identifier `{tok}`")))
    }
}

pub(crate) fn parse_float(line: usize, (col, tok): (usize, &str)) -> Result<f64> {
    tok.parse::<f64>()
        .map_err(|_| syntax(line, col, format!("invalid number `{tok}`")))
}

pub(crate) fn expect_arity(line: usize, tokens: &[(usize, &str)], arity: usize, usage: &str) -> Result<()> {
    if tokens.len() == arity {
        Ok(())
    } else {
        let col = tokens.get(arity).map_or(tokens[0].0, |t| t.0);
        Err(syntax(line, col, format!("expected `{usage}`")))
    }
}

/// Shortest round-trip decimal form of `x`.
pub fn format_float(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && !(1e-5..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

/// Parses and validates a `.qbaf` document.
pub fn parse_qbaf(text: &str) -> Result<Qbaf> {
    let mut b = QbafBuilder::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let toks = tokenize(raw);
        let Some(&(col, keyword)) = toks.first() else {
            continue;
        };
        match keyword {
            "arg" => {
                expect_arity(line, &toks, 3, "arg <id> <base_score>")?;
                let id = parse_id(line, toks[1])?;
                b.argument(id, parse_float(line, toks[2])?);
            }
            "edge" => {
                expect_arity(line, &toks, 4, "edge <src> <dst> <weight>")?;
                let src = parse_id(line, toks[1])?;
                let dst = parse_id(line, toks[2])?;
                b.edge(src, dst, parse_float(line, toks[3])?);
            }
            other => return Err(syntax(line, col, format!("unknown record `{other}`"))),
        }
    }
    b.build()
}

/// Canonical text form: arguments in id order, then edges by `(src, dst)`.
pub fn serialize_qbaf(qbaf: &Qbaf) -> String {
    let mut out = String::new();
    for a in qbaf.ids() {
        out.push_str(&format!("arg {} {}\n", qbaf.label(a), format_float(qbaf.base_score(a))));
    }
    for e in qbaf.edges() {
        out.push_str(&format!(
            "edge {} {} {}\n",
            qbaf.label(e.src),
            qbaf.label(e.dst),
            format_float(e.weight)
        ));
    }
    out
}

/// Writes the recorded trajectory as CSV with header `step,<ids...>`.
pub fn write_trajectory<W: Write>(qbaf: &Qbaf, report: &SolveReport, sink: &mut W) -> Result<()> {
    let trajectory = report.trajectory.as_ref().ok_or(Error::MissingTrajectory)?;
    let mut line = String::from("step");
    for l in qbaf.labels() {
        line.push(',');
        line.push_str(l);
    }
    line.push('\n');
    sink.write_all(line.as_bytes()).map_err(Error::SinkUnavailable)?;
    for (k, point) in trajectory.points.iter().enumerate() {
        line.clear();
        line.push_str(&k.to_string());
        for &v in point.as_slice() {
            line.push(',');
            line.push_str(&format_float(v));
        }
        line.push('\n');
        sink.write_all(line.as_bytes()).map_err(Error::SinkUnavailable)?;
    }
    sink.flush().map_err(Error::SinkUnavailable)
}
