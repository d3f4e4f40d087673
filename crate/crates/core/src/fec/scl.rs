//! Successive-cancellation list decoder with CRC selection.
//!
//! Stage buffers are reference counted per list path. Cloning a path only
//! bumps counts; a shared buffer is swapped for a private one right before it
//! is overwritten, so no buffer contents are ever copied.

use super::polar::{PolarCodeSpec, PolarDecoded};
use crate::bits::{Bits, Llrs};

struct Pool<T> {
    data: Vec<T>,
    width: usize,
    refs: Vec<u32>,
    free: Vec<usize>,
}

impl<T: Copy + Default> Pool<T> {
    fn new(width: usize, slots: usize) -> Self {
        Pool {
            data: vec![T::default(); width * slots],
            width,
            refs: vec![0; slots],
            free: (0..slots).rev().collect(),
        }
    }

    fn reset(&mut self) {
        self.refs.iter_mut().for_each(|r| *r = 0);
        self.free.clear();
        self.free.extend((0..self.refs.len()).rev());
    }

    fn alloc(&mut self) -> usize {
        let idx = self.free.pop().expect("stage pool exhausted");
        self.refs[idx] = 1;
        idx
    }

    fn retain(&mut self, idx: usize) {
        self.refs[idx] += 1;
    }

    fn release(&mut self, idx: usize) {
        self.refs[idx] -= 1;
        if self.refs[idx] == 0 {
            self.free.push(idx);
        }
    }

    /// Returns a slot that only `*idx` points at, reallocating if shared.
    fn private(&mut self, idx: &mut usize) -> usize {
        if self.refs[*idx] > 1 {
            self.release(*idx);
            *idx = self.alloc();
        }
        *idx
    }

    fn slot(&self, idx: usize) -> &[T] {
        &self.data[idx * self.width..(idx + 1) * self.width]
    }

    fn slot_mut(&mut self, idx: usize) -> &mut [T] {
        &mut self.data[idx * self.width..(idx + 1) * self.width]
    }
}

#[derive(Clone)]
struct Path {
    /// LLR buffer per stage `0..m` (stage `s` holds `2^s` values).
    llr: Vec<usize>,
    /// Left-child partial sums per stage `1..=m` (index `s - 1`, `2^(s-1)` bits).
    sums: Vec<usize>,
    metric: f64,
    /// Decided information bits so far.
    info: Vec<u8>,
}

pub(crate) struct ListDecoder<'a> {
    spec: &'a PolarCodeSpec,
    list_size: usize,
    m: usize,
    frozen: Vec<bool>,
    llr: Vec<Pool<f64>>,
    sums: Vec<Pool<u8>>,
    paths: Vec<Option<Path>>,
}

#[inline]
fn f_min_sum(a: f64, b: f64) -> f64 {
    let mag = a.abs().min(b.abs());
    if (a < 0.0) != (b < 0.0) {
        -mag
    } else {
        mag
    }
}

#[inline]
fn g_combine(a: f64, b: f64, u: u8) -> f64 {
    if u == 0 {
        b + a
    } else {
        b - a
    }
}

#[inline]
fn penalty(llr: f64, bit: u8) -> f64 {
    if (llr < 0.0) != (bit == 1) {
        llr.abs()
    } else {
        0.0
    }
}

impl<'a> ListDecoder<'a> {
    pub(crate) fn new(spec: &'a PolarCodeSpec, list_size: usize) -> Self {
        let m = spec.n_total.trailing_zeros() as usize;
        ListDecoder {
            spec,
            list_size,
            m,
            frozen: spec.frozen_mask(),
            llr: (0..m).map(|s| Pool::new(1 << s, list_size)).collect(),
            sums: (1..=m).map(|s| Pool::new(1 << (s - 1), list_size)).collect(),
            paths: vec![None; list_size],
        }
    }

    fn init(&mut self) {
        self.llr.iter_mut().for_each(Pool::reset);
        self.sums.iter_mut().for_each(Pool::reset);
        self.paths.iter_mut().for_each(|p| *p = None);
        let path = Path {
            llr: self.llr.iter_mut().map(Pool::alloc).collect(),
            sums: self.sums.iter_mut().map(Pool::alloc).collect(),
            metric: 0.0,
            info: Vec::with_capacity(self.spec.k_info),
        };
        self.paths[0] = Some(path);
    }

    /// Computes the stage-0 LLR of bit `i` for path slot `p`.
    fn descend(&mut self, p: usize, i: usize, channel: &[f64]) -> f64 {
        let m = self.m;
        let path = self.paths[p].as_mut().expect("live path");
        let top = if i == 0 { m } else { i.trailing_zeros() as usize + 1 };
        for s in (0..top).rev() {
            let half = 1usize << s;
            let dst = self.llr[s].private(&mut path.llr[s]);
            let (lower, upper) = self.llr.split_at_mut(s + 1);
            let src: &[f64] = if s + 1 == m {
                channel
            } else {
                upper[0].slot(path.llr[s + 1])
            };
            let out = lower[s].slot_mut(dst);
            if s + 1 == top && i != 0 {
                let left = self.sums[s].slot(path.sums[s]);
                for j in 0..half {
                    out[j] = g_combine(src[j], src[j + half], left[j]);
                }
            } else {
                for j in 0..half {
                    out[j] = f_min_sum(src[j], src[j + half]);
                }
            }
        }
        self.llr[0].slot(path.llr[0])[0]
    }

    /// Folds decision `bit` at index `i` into the partial sums of slot `p`.
    fn ascend(&mut self, p: usize, i: usize, bit: u8) {
        let ones = (!i).trailing_zeros() as usize;
        if ones >= self.m {
            return;
        }
        let path = self.paths[p].as_mut().expect("live path");
        let width = 1usize << ones;
        let dst = self.sums[ones].private(&mut path.sums[ones]);
        let (lower, upper) = self.sums.split_at_mut(ones);
        let out = upper[0].slot_mut(dst);
        out[width - 1] = bit;
        for s in 1..=ones {
            let half = 1usize << (s - 1);
            let base = width - 2 * half;
            let left = lower[s - 1].slot(path.sums[s - 1]);
            for j in 0..half {
                out[base + j] = left[j] ^ out[base + half + j];
            }
        }
    }

    fn kill(&mut self, p: usize) {
        if let Some(path) = self.paths[p].take() {
            for (s, &idx) in path.llr.iter().enumerate() {
                self.llr[s].release(idx);
            }
            for (s, &idx) in path.sums.iter().enumerate() {
                self.sums[s].release(idx);
            }
        }
    }

    fn clone_into(&mut self, from: usize, to: usize) {
        let path = self.paths[from].clone().expect("live path");
        for (s, &idx) in path.llr.iter().enumerate() {
            self.llr[s].retain(idx);
        }
        for (s, &idx) in path.sums.iter().enumerate() {
            self.sums[s].retain(idx);
        }
        self.paths[to] = Some(path);
    }

    pub(crate) fn decode(mut self, channel: &Llrs) -> PolarDecoded {
        self.init();
        let n = self.spec.n_total;
        let mut leaf = vec![0.0f64; self.list_size];
        let mut candidates: Vec<(f64, usize, u8)> = Vec::with_capacity(2 * self.list_size);
        for i in 0..n {
            for p in 0..self.list_size {
                if self.paths[p].is_some() {
                    leaf[p] = self.descend(p, i, channel);
                }
            }
            if self.frozen[i] {
                for p in 0..self.list_size {
                    if let Some(path) = self.paths[p].as_mut() {
                        path.metric += penalty(leaf[p], 0);
                    }
                }
                for p in 0..self.list_size {
                    if self.paths[p].is_some() {
                        self.ascend(p, i, 0);
                    }
                }
                continue;
            }

            candidates.clear();
            for (p, path) in self.paths.iter().enumerate() {
                if let Some(path) = path {
                    for bit in [0u8, 1] {
                        candidates.push((path.metric + penalty(leaf[p], bit), p, bit));
                    }
                }
            }
            candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
            candidates.truncate(self.list_size);

            let mut keep = vec![[false; 2]; self.list_size];
            for &(_, p, bit) in &candidates {
                keep[p][bit as usize] = true;
            }
            for (p, k) in keep.iter().enumerate() {
                if self.paths[p].is_some() && !k[0] && !k[1] {
                    self.kill(p);
                }
            }
            for p in 0..self.list_size {
                if self.paths[p].is_none() || !(keep[p][0] && keep[p][1]) {
                    continue;
                }
                let slot = (0..self.list_size)
                    .find(|&q| self.paths[q].is_none())
                    .expect("free list slot");
                self.clone_into(p, slot);
                self.commit(slot, i, 1, leaf[p]);
                self.commit(p, i, 0, leaf[p]);
                // The fresh clone sits in a slot we may visit later in this
                // loop; mark it handled.
                keep[slot] = [false, false];
            }
            for p in 0..self.list_size {
                if self.paths[p].is_some() && keep[p][0] != keep[p][1] {
                    let bit = keep[p][1] as u8;
                    self.commit(p, i, bit, leaf[p]);
                }
            }
        }

        let crc = self.spec.crc();
        let mut live: Vec<&Path> = self.paths.iter().flatten().collect();
        live.sort_by(|a, b| a.metric.total_cmp(&b.metric));
        if let Some(best) = live.iter().find(|p| crc.check(&p.info)) {
            return PolarDecoded {
                info: Bits(best.info.clone()),
                crc_pass: true,
            };
        }
        PolarDecoded {
            info: Bits(live[0].info.clone()),
            crc_pass: false,
        }
    }

    fn commit(&mut self, p: usize, i: usize, bit: u8, llr: f64) {
        let path = self.paths[p].as_mut().expect("live path");
        path.metric += penalty(llr, bit);
        path.info.push(bit);
        self.ascend(p, i, bit);
    }
}
