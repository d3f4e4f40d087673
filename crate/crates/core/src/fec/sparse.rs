//! Sparse binary matrix in adjacency-list form.

use serde::{Deserialize, Serialize};

/// Binary matrix storing, for every row, the sorted column indices holding a
/// one, and the transpose view for every column.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "SparseRepr", into = "SparseRepr")]
pub struct SparseMatrix {
    rows: Vec<Vec<usize>>,
    cols: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct SparseRepr {
    num_rows: usize,
    num_cols: usize,
    rows: Vec<Vec<usize>>,
}

impl From<SparseRepr> for SparseMatrix {
    fn from(r: SparseRepr) -> Self {
        SparseMatrix::from_rows(r.num_cols, r.rows)
    }
}

impl From<SparseMatrix> for SparseRepr {
    fn from(m: SparseMatrix) -> Self {
        SparseRepr {
            num_rows: m.num_rows(),
            num_cols: m.num_cols(),
            rows: m.rows,
        }
    }
}

impl SparseMatrix {
    pub fn new(num_rows: usize, num_cols: usize) -> Self {
        SparseMatrix {
            rows: vec![Vec::new(); num_rows],
            cols: vec![Vec::new(); num_cols],
        }
    }

    /// Builds from per-row column lists. Duplicate entries cancel (GF(2)).
    pub fn from_rows(num_cols: usize, rows: Vec<Vec<usize>>) -> Self {
        let mut m = SparseMatrix::new(rows.len(), num_cols);
        for (r, row) in rows.into_iter().enumerate() {
            for c in row {
                m.toggle(r, c);
            }
        }
        m
    }

    pub fn from_dense(dense: &[Vec<u8>]) -> Self {
        let num_cols = dense.first().map_or(0, Vec::len);
        let rows = dense
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0)
                    .map(|(c, _)| c)
                    .collect()
            })
            .collect();
        SparseMatrix::from_rows(num_cols, rows)
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols.len()
    }

    pub fn num_ones(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn contains(&self, r: usize, c: usize) -> bool {
        self.rows[r].binary_search(&c).is_ok()
    }

    pub fn insert(&mut self, r: usize, c: usize) {
        if let Err(pos) = self.rows[r].binary_search(&c) {
            self.rows[r].insert(pos, c);
            let cpos = self.cols[c].binary_search(&r).unwrap_err();
            self.cols[c].insert(cpos, r);
        }
    }

    pub fn toggle(&mut self, r: usize, c: usize) {
        match self.rows[r].binary_search(&c) {
            Ok(pos) => {
                self.rows[r].remove(pos);
                let cpos = self.cols[c].binary_search(&r).unwrap();
                self.cols[c].remove(cpos);
            }
            Err(_) => self.insert(r, c),
        }
    }

    pub fn row(&self, r: usize) -> &[usize] {
        &self.rows[r]
    }

    pub fn col(&self, c: usize) -> &[usize] {
        &self.cols[c]
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.rows[r].len()
    }

    pub fn col_weight(&self, c: usize) -> usize {
        self.cols[c].len()
    }

    /// `H · x^T` over GF(2).
    pub fn syndrome(&self, x: &[u8]) -> Vec<u8> {
        self.rows
            .iter()
            .map(|row| row.iter().fold(0u8, |acc, &c| acc ^ (x[c] & 1)))
            .collect()
    }

    pub fn is_codeword(&self, x: &[u8]) -> bool {
        self.rows
            .iter()
            .all(|row| row.iter().fold(0u8, |acc, &c| acc ^ (x[c] & 1)) == 0)
    }

    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        self.rows
            .iter()
            .map(|row| {
                let mut d = vec![0u8; self.num_cols()];
                for &c in row {
                    d[c] = 1;
                }
                d
            })
            .collect()
    }
}
