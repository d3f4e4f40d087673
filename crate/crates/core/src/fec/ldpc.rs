//! LDPC codes: progressive-edge-growth construction, systematic encoding by
//! GF(2) elimination, and flooding sum-product decoding.
//!
//! Generated codes use an IRA-style layout. Columns `0..K` carry the payload;
//! columns `K..N` form a dual-diagonal parity staircase whose last column has
//! weight 3, so the parity part is always full rank and the payload lands on
//! the first K columns in order. The payload columns follow
//! [`DegreeProfile`]; with the default profile the first tenth of them have
//! weight 8 and the rest weight 3.

use std::collections::VecDeque;

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::alist::{parse_alist, write_alist};
use super::sparse::SparseMatrix;
use crate::bits::{Bits, Llrs};
use crate::error::{Error, Result};

/// Default BP iteration cap.
pub const DEFAULT_MAX_ITERS: usize = 25;
/// Messages and posteriors are clamped to this magnitude.
pub const LLR_CLAMP: f64 = 30.0;

/// Column weights for the payload columns of a generated code.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeProfile {
    /// Fraction of payload columns (taken from the front) with `head_degree`.
    pub head_fraction: f64,
    pub head_degree: usize,
    pub body_degree: usize,
}

impl Default for DegreeProfile {
    fn default() -> Self {
        DegreeProfile {
            head_fraction: 0.2,
            head_degree: 16,
            body_degree: 3,
        }
    }
}

impl DegreeProfile {
    pub fn column_degrees(&self, k: usize) -> Vec<usize> {
        let head = (self.head_fraction * k as f64).round() as usize;
        (0..k)
            .map(|c| if c < head { self.head_degree } else { self.body_degree })
            .collect()
    }
}

/// Systematic encoder derived from a parity-check matrix.
#[derive(Debug, Clone, PartialEq)]
struct Encoder {
    /// Non-pivot columns, ascending; these carry the payload.
    info_cols: Vec<usize>,
    /// Pivot column of each independent reduced row.
    pivot_cols: Vec<usize>,
    /// For each pivot, the payload bits (packed) whose xor gives its value.
    parity_masks: Vec<Vec<u64>>,
}

fn pack(bits: &[u8]) -> Vec<u64> {
    let mut w = vec![0u64; bits.len().div_ceil(64)];
    for (i, &b) in bits.iter().enumerate() {
        if b & 1 == 1 {
            w[i / 64] |= 1 << (i % 64);
        }
    }
    w
}

impl Encoder {
    /// Reduces `h` choosing pivots from the rightmost columns first.
    fn from_parity_check(h: &SparseMatrix) -> Encoder {
        let n = h.num_cols();
        let words = n.div_ceil(64);
        let mut rows: Vec<Vec<u64>> = (0..h.num_rows())
            .map(|r| {
                let mut w = vec![0u64; words];
                for &c in h.row(r) {
                    w[c / 64] |= 1 << (c % 64);
                }
                w
            })
            .collect();
        let bit = |row: &[u64], c: usize| (row[c / 64] >> (c % 64)) & 1 == 1;

        let mut pivot_cols = Vec::new();
        let mut rank = 0;
        for c in (0..n).rev() {
            let Some(found) = (rank..rows.len()).find(|&r| bit(&rows[r], c)) else {
                continue;
            };
            rows.swap(rank, found);
            let pivot = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && bit(row, c) {
                    row.iter_mut().zip(&pivot).for_each(|(a, b)| *a ^= b);
                }
            }
            pivot_cols.push(c);
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        let mut is_pivot = vec![false; n];
        for &c in &pivot_cols {
            is_pivot[c] = true;
        }
        let info_cols: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        let parity_masks = rows[..rank]
            .iter()
            .map(|row| {
                let sel: Vec<u8> = info_cols.iter().map(|&c| bit(row, c) as u8).collect();
                pack(&sel)
            })
            .collect();
        Encoder {
            info_cols,
            pivot_cols,
            parity_masks,
        }
    }

    fn encode(&self, n: usize, payload: &[u8]) -> Bits {
        let mut cw = vec![0u8; n];
        for (&c, &b) in self.info_cols.iter().zip(payload) {
            cw[c] = b & 1;
        }
        let packed = pack(payload);
        for (&c, mask) in self.pivot_cols.iter().zip(&self.parity_masks) {
            let ones: u32 = mask
                .iter()
                .zip(&packed)
                .map(|(m, p)| (m & p).count_ones())
                .sum();
            cw[c] = (ones & 1) as u8;
        }
        Bits(cw)
    }
}

/// An LDPC code defined by its parity-check matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LdpcRepr", into = "LdpcRepr")]
pub struct LdpcCodeSpec {
    pub n_total: usize,
    pub k_info: usize,
    pub parity_check: SparseMatrix,
    encoder: Encoder,
}

#[derive(Serialize, Deserialize)]
struct LdpcRepr {
    n_total: usize,
    k_info: usize,
    parity_check: SparseMatrix,
}

impl TryFrom<LdpcRepr> for LdpcCodeSpec {
    type Error = Error;
    fn try_from(r: LdpcRepr) -> Result<Self> {
        let spec = LdpcCodeSpec::from_parity_check(r.parity_check)?;
        if spec.n_total != r.n_total || spec.k_info != r.k_info {
            return Err(Error::InvalidCode(format!(
                "declared ({}, {}) disagrees with matrix ({}, {})",
                r.n_total, r.k_info, spec.n_total, spec.k_info
            )));
        }
        Ok(spec)
    }
}

impl From<LdpcCodeSpec> for LdpcRepr {
    fn from(s: LdpcCodeSpec) -> Self {
        LdpcRepr {
            n_total: s.n_total,
            k_info: s.k_info,
            parity_check: s.parity_check,
        }
    }
}

/// Output of BP decoding.
#[derive(Debug, Clone, PartialEq)]
pub struct LdpcDecoded {
    pub payload: Bits,
    pub converged: bool,
    pub iterations: usize,
}

impl LdpcCodeSpec {
    /// Derives K and the encoder from `h`. Dependent rows are tolerated;
    /// K = N - rank(H).
    pub fn from_parity_check(h: SparseMatrix) -> Result<Self> {
        if h.num_cols() == 0 || h.num_rows() == 0 {
            return Err(Error::InvalidCode("empty parity-check matrix".into()));
        }
        let encoder = Encoder::from_parity_check(&h);
        let k = encoder.info_cols.len();
        if k == 0 {
            return Err(Error::InvalidCode("parity-check matrix has full column rank".into()));
        }
        Ok(LdpcCodeSpec {
            n_total: h.num_cols(),
            k_info: k,
            parity_check: h,
            encoder,
        })
    }

    /// Codeword columns carrying the payload, ascending.
    pub fn info_columns(&self) -> &[usize] {
        &self.encoder.info_cols
    }

    pub fn rank(&self) -> usize {
        self.encoder.pivot_cols.len()
    }

    pub fn to_alist(&self) -> String {
        write_alist(&self.parity_check)
    }

    pub fn encode(&self, payload: &[u8]) -> Result<Bits> {
        if payload.len() != self.k_info {
            return Err(Error::LengthMismatch {
                expected: self.k_info,
                actual: payload.len(),
            });
        }
        Ok(self.encoder.encode(self.n_total, payload))
    }

    pub fn decode(&self, llrs: &Llrs, max_iters: usize) -> Result<LdpcDecoded> {
        if llrs.len() != self.n_total {
            return Err(Error::LengthMismatch {
                expected: self.n_total,
                actual: llrs.len(),
            });
        }
        let mut bp = BeliefPropagation::new(&self.parity_check);
        let (codeword, converged, iterations) = bp.run(llrs, max_iters);
        let payload = Bits(self.encoder.info_cols.iter().map(|&c| codeword[c]).collect());
        Ok(LdpcDecoded {
            payload,
            converged,
            iterations,
        })
    }
}

/// Flooding sum-product decoder over the Tanner graph of `H`.
struct BeliefPropagation<'a> {
    h: &'a SparseMatrix,
    /// Edge ids grouped by check node: edges of row r are
    /// `row_start[r]..row_start[r+1]`.
    row_start: Vec<usize>,
    edge_var: Vec<usize>,
    /// Edge ids grouped by variable node.
    var_edges: Vec<Vec<usize>>,
    v2c: Vec<f64>,
    c2v: Vec<f64>,
    post: Vec<f64>,
    scratch: Vec<f64>,
}

impl<'a> BeliefPropagation<'a> {
    fn new(h: &'a SparseMatrix) -> Self {
        let mut row_start = Vec::with_capacity(h.num_rows() + 1);
        let mut edge_var = Vec::with_capacity(h.num_ones());
        let mut var_edges = vec![Vec::new(); h.num_cols()];
        row_start.push(0);
        for r in 0..h.num_rows() {
            for &c in h.row(r) {
                var_edges[c].push(edge_var.len());
                edge_var.push(c);
            }
            row_start.push(edge_var.len());
        }
        let e = edge_var.len();
        BeliefPropagation {
            h,
            row_start,
            edge_var,
            var_edges,
            v2c: vec![0.0; e],
            c2v: vec![0.0; e],
            post: vec![0.0; h.num_cols()],
            scratch: Vec::new(),
        }
    }

    /// Syndrome check on the posteriors; a zero LLR counts as undecided.
    fn decided_codeword(&self) -> Option<Vec<u8>> {
        if self.post.iter().any(|&l| l == 0.0) {
            return None;
        }
        let x: Vec<u8> = self.post.iter().map(|&l| (l < 0.0) as u8).collect();
        self.h.is_codeword(&x).then_some(x)
    }

    fn run(&mut self, llrs: &[f64], max_iters: usize) -> (Vec<u8>, bool, usize) {
        for (p, &l) in self.post.iter_mut().zip(llrs) {
            *p = l.clamp(-LLR_CLAMP, LLR_CLAMP);
        }
        if let Some(x) = self.decided_codeword() {
            return (x, true, 0);
        }
        self.c2v.iter_mut().for_each(|m| *m = 0.0);
        for it in 1..=max_iters {
            // variable -> check
            for (e, &v) in self.edge_var.iter().enumerate() {
                self.v2c[e] = (self.post[v] - self.c2v[e]).clamp(-LLR_CLAMP, LLR_CLAMP);
            }
            // check -> variable via the tanh rule with prefix/suffix products
            for r in 0..self.h.num_rows() {
                let (lo, hi) = (self.row_start[r], self.row_start[r + 1]);
                let deg = hi - lo;
                self.scratch.clear();
                self.scratch
                    .extend(self.v2c[lo..hi].iter().map(|&m| (0.5 * m).tanh()));
                let mut prefix = 1.0;
                for i in 0..deg {
                    let t = self.scratch[i];
                    self.c2v[lo + i] = prefix;
                    prefix *= t;
                }
                let mut suffix = 1.0;
                for i in (0..deg).rev() {
                    let prod = (self.c2v[lo + i] * suffix).clamp(-0.999_999_999_999, 0.999_999_999_999);
                    suffix *= self.scratch[i];
                    self.c2v[lo + i] = (2.0 * prod.atanh()).clamp(-LLR_CLAMP, LLR_CLAMP);
                }
            }
            for (v, edges) in self.var_edges.iter().enumerate() {
                let total: f64 = llrs[v] + edges.iter().map(|&e| self.c2v[e]).sum::<f64>();
                self.post[v] = total.clamp(-LLR_CLAMP, LLR_CLAMP);
            }
            if let Some(x) = self.decided_codeword() {
                return (x, true, it);
            }
        }
        let x = self.post.iter().map(|&l| (l < 0.0) as u8).collect();
        (x, false, max_iters)
    }
}

/// Progressive-edge-growth construction with the default degree profile.
pub fn generate_ldpc_code(n_total: usize, k_info: usize, seed: u64) -> Result<LdpcCodeSpec> {
    generate_ldpc_code_with(n_total, k_info, seed, &DegreeProfile::default())
}

pub fn generate_ldpc_code_with(
    n_total: usize,
    k_info: usize,
    seed: u64,
    profile: &DegreeProfile,
) -> Result<LdpcCodeSpec> {
    if k_info == 0 || k_info >= n_total {
        return Err(Error::InvalidCode(format!(
            "need 0 < K < N, got K={k_info}, N={n_total}"
        )));
    }
    let m = n_total - k_info;
    if m < 3 {
        return Err(Error::DegreeProfile(format!(
            "{m} parity checks cannot host a weight-3 closing column"
        )));
    }
    let degrees = profile.column_degrees(k_info);
    if let Some(&d) = degrees.iter().find(|&&d| d < 2 || d > m) {
        return Err(Error::DegreeProfile(format!(
            "column weight {d} outside 2..={m}"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut h = SparseMatrix::new(m, n_total);
    // Parity staircase.
    for j in 0..m - 1 {
        h.insert(j, k_info + j);
        h.insert(j + 1, k_info + j);
    }
    h.insert(m - 1, n_total - 1);
    for _ in 0..2 {
        let r = peg_pick(&h, n_total - 1, &mut rng);
        h.insert(r, n_total - 1);
    }
    // Payload columns in non-decreasing degree order.
    let mut order: Vec<usize> = (0..k_info).collect();
    order.sort_by_key(|&c| (degrees[c], c));
    for c in order {
        for _ in 0..degrees[c] {
            let r = peg_pick(&h, c, &mut rng);
            h.insert(r, c);
        }
    }
    let spec = LdpcCodeSpec::from_parity_check(h)?;
    debug_assert_eq!(spec.k_info, k_info);
    Ok(spec)
}

/// Chooses the next check for variable `v`: the least-loaded check that is
/// unreachable from `v`, or failing that the least-loaded among the checks
/// reached last by breadth-first expansion.
fn peg_pick(h: &SparseMatrix, v: usize, rng: &mut ChaCha8Rng) -> usize {
    let m = h.num_rows();
    let least_loaded = |cands: &[usize], rng: &mut ChaCha8Rng| -> usize {
        let min = cands.iter().map(|&r| h.row_weight(r)).min().unwrap();
        let best: Vec<usize> = cands
            .iter()
            .copied()
            .filter(|&r| h.row_weight(r) == min)
            .collect();
        *best.choose(rng).unwrap()
    };
    if h.col_weight(v) == 0 {
        let all: Vec<usize> = (0..m).collect();
        return least_loaded(&all, rng);
    }

    let mut check_seen = vec![false; m];
    let mut var_seen = vec![false; h.num_cols()];
    var_seen[v] = true;
    let mut frontier: VecDeque<usize> = VecDeque::new();
    let mut reached = 0;
    for &r in h.col(v) {
        check_seen[r] = true;
        frontier.push_back(r);
        reached += 1;
    }
    loop {
        let before: Vec<bool> = check_seen.clone();
        let mut next = VecDeque::new();
        while let Some(r) = frontier.pop_front() {
            for &u in h.row(r) {
                if var_seen[u] {
                    continue;
                }
                var_seen[u] = true;
                for &r2 in h.col(u) {
                    if !check_seen[r2] {
                        check_seen[r2] = true;
                        reached += 1;
                        next.push_back(r2);
                    }
                }
            }
        }
        if next.is_empty() {
            let unreached: Vec<usize> = (0..m).filter(|&r| !check_seen[r]).collect();
            return least_loaded(&unreached, rng);
        }
        if reached == m {
            let last: Vec<usize> = (0..m).filter(|&r| !before[r]).collect();
            return least_loaded(&last, rng);
        }
        frontier = next;
    }
}

/// Loads a code from alist text.
pub fn load_ldpc_matrix(alist_text: &str) -> Result<LdpcCodeSpec> {
    LdpcCodeSpec::from_parity_check(parse_alist(alist_text)?)
}

pub fn ldpc_encode(spec: &LdpcCodeSpec, payload: &[u8]) -> Result<Bits> {
    spec.encode(payload)
}

pub fn ldpc_decode_bp(spec: &LdpcCodeSpec, llrs: &Llrs, max_iters: usize) -> Result<(Bits, bool)> {
    let d = spec.decode(llrs, max_iters)?;
    Ok((d.payload, d.converged))
}
