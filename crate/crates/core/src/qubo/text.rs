//! Plain-text QUBO interchange.
//!
//! ```text
//! n 1 offset 10
//! 0 0 -1
//! ```
//!
//! The header gives the variable count and constant offset. Each following
//! line is `i i c` for a linear coefficient or `i j c` (`i < j`) for a
//! quadratic one, in row-major order. The registry companion file has one
//! `index label` line per variable.

use std::fmt::Write as _;

use super::{Qubo, VariableRegistry};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub fn to_text<S: Scalar>(q: &Qubo<S>) -> String {
    let mut out = String::new();
    writeln!(out, "n {} offset {}", q.num_vars(), q.offset()).unwrap();
    for i in 0..q.num_vars() {
        let lin = q.linear(i);
        if !lin.is_negligible() {
            writeln!(out, "{i} {i} {lin}").unwrap();
        }
        for (j, c) in q.neighbors(i).filter(|(j, _)| *j > i) {
            writeln!(out, "{i} {j} {c}").unwrap();
        }
    }
    out
}

pub fn registry_to_text(reg: &VariableRegistry) -> String {
    let mut out = String::new();
    for (i, label) in reg.iter() {
        writeln!(out, "{i} {label}").unwrap();
    }
    out
}

fn bad(line: usize, msg: &str) -> Error {
    Error::Format(format!("line {}: {msg}", line + 1))
}

pub fn parse_qubo_text(text: &str) -> Result<Qubo<f64>> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (hl, header) = lines.next().ok_or_else(|| Error::Format("empty QUBO file".into()))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 4 || parts[0] != "n" || parts[2] != "offset" {
        return Err(bad(hl, "expected `n <count> offset <value>`"));
    }
    let n: usize = parts[1].parse().map_err(|_| bad(hl, "bad variable count"))?;
    let offset: f64 = parts[3].parse().map_err(|_| bad(hl, "bad offset"))?;
    let mut q = Qubo::new(n);
    q.add_offset(offset);
    for (ln, line) in lines {
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 3 {
            return Err(bad(ln, "expected `i j c`"));
        }
        let i: usize = f[0].parse().map_err(|_| bad(ln, "bad index"))?;
        let j: usize = f[1].parse().map_err(|_| bad(ln, "bad index"))?;
        let c: f64 = f[2].parse().map_err(|_| bad(ln, "bad coefficient"))?;
        if i >= n || j >= n || i > j {
            return Err(bad(ln, "index out of range or not upper-triangular"));
        }
        q.add_quadratic(i, j, c);
    }
    Ok(q)
}

/// Reads back `index label` lines as plain strings.
pub fn parse_registry_text(text: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let (idx, label) = line.split_once(' ').ok_or_else(|| bad(ln, "expected `index label`"))?;
        let idx: usize = idx.parse().map_err(|_| bad(ln, "bad index"))?;
        if idx != out.len() {
            return Err(bad(ln, "indices must be consecutive from 0"));
        }
        out.push(label.to_string());
    }
    Ok(out)
}
