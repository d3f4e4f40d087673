//! MacKay alist text format.
//!
//! ```text
//! N M
//! max_col_weight max_row_weight
//! <N column weights>
//! <M row weights>
//! <N lines: 1-based row indices per column, zero padded>
//! <M lines: 1-based column indices per row, zero padded>
//! ```

use std::fmt::Write as _;

use super::sparse::SparseMatrix;
use crate::error::{Error, Result};

fn alist_err(msg: impl Into<String>) -> Error {
    Error::Alist(msg.into())
}

struct Tokens<'a> {
    lines: std::iter::Peekable<std::str::Lines<'a>>,
}

impl<'a> Tokens<'a> {
    fn next_line(&mut self, what: &str) -> Result<Vec<usize>> {
        loop {
            let line = self
                .lines
                .next()
                .ok_or_else(|| alist_err(format!("unexpected end of input reading {what}")))?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            return line
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| alist_err(format!("bad integer {t:?} in {what}")))
                })
                .collect();
        }
    }

    fn exact(&mut self, n: usize, what: &str) -> Result<Vec<usize>> {
        let v = self.next_line(what)?;
        if v.len() != n {
            return Err(alist_err(format!(
                "{what}: expected {n} values, found {}",
                v.len()
            )));
        }
        Ok(v)
    }
}

/// Parses alist text into a parity-check matrix, cross-checking the column
/// and row adjacency sections.
pub fn parse_alist(text: &str) -> Result<SparseMatrix> {
    let mut t = Tokens {
        lines: text.lines().peekable(),
    };
    let dims = t.exact(2, "dimensions")?;
    let (n, m) = (dims[0], dims[1]);
    if n == 0 || m == 0 {
        return Err(alist_err("empty matrix"));
    }
    let maxw = t.exact(2, "maximum weights")?;
    let col_w = t.exact(n, "column weights")?;
    let row_w = t.exact(m, "row weights")?;
    if col_w.iter().copied().max() != Some(maxw[0]) {
        return Err(alist_err("maximum column weight disagrees with weights"));
    }
    if row_w.iter().copied().max() != Some(maxw[1]) {
        return Err(alist_err("maximum row weight disagrees with weights"));
    }

    let mut read_lists = |count: usize, bound: usize, weights: &[usize], what: &str| {
        let mut lists = Vec::with_capacity(count);
        for (i, &w) in weights.iter().enumerate() {
            let entries = t.next_line(what)?;
            let (body, pad) = entries.split_at(w.min(entries.len()));
            if body.len() != w || body.iter().any(|&x| x == 0 || x > bound) {
                return Err(alist_err(format!("{what} {}: bad entries", i + 1)));
            }
            if pad.iter().any(|&x| x != 0) {
                return Err(alist_err(format!("{what} {}: weight mismatch", i + 1)));
            }
            let mut l: Vec<usize> = body.iter().map(|&x| x - 1).collect();
            l.sort_unstable();
            if l.windows(2).any(|w| w[0] == w[1]) {
                return Err(alist_err(format!("{what} {}: duplicate entry", i + 1)));
            }
            lists.push(l);
        }
        Ok::<_, Error>(lists)
    };
    let cols = read_lists(n, m, &col_w, "column")?;
    let rows = read_lists(m, n, &row_w, "row")?;

    let h = SparseMatrix::from_rows(n, rows);
    for (c, list) in cols.iter().enumerate() {
        if h.col(c) != list.as_slice() {
            return Err(alist_err(format!(
                "column {} disagrees with row lists",
                c + 1
            )));
        }
    }
    Ok(h)
}

/// Serializes `h` in alist form, zero padding to the maximum weights.
pub fn write_alist(h: &SparseMatrix) -> String {
    let (n, m) = (h.num_cols(), h.num_rows());
    let col_w: Vec<usize> = (0..n).map(|c| h.col_weight(c)).collect();
    let row_w: Vec<usize> = (0..m).map(|r| h.row_weight(r)).collect();
    let max_c = col_w.iter().copied().max().unwrap_or(0);
    let max_r = row_w.iter().copied().max().unwrap_or(0);
    let join = |v: &mut dyn Iterator<Item = usize>| {
        v.map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
    };
    let mut out = String::new();
    let _ = writeln!(out, "{n} {m}");
    let _ = writeln!(out, "{max_c} {max_r}");
    let _ = writeln!(out, "{}", join(&mut col_w.iter().copied()));
    let _ = writeln!(out, "{}", join(&mut row_w.iter().copied()));
    for c in 0..n {
        let mut it = h
            .col(c)
            .iter()
            .map(|&r| r + 1)
            .chain(std::iter::repeat(0))
            .take(max_c);
        let _ = writeln!(out, "{}", join(&mut it));
    }
    for r in 0..m {
        let mut it = h
            .row(r)
            .iter()
            .map(|&c| c + 1)
            .chain(std::iter::repeat(0))
            .take(max_r);
        let _ = writeln!(out, "{}", join(&mut it));
    }
    out
}
