//! Block-sparse contextual attention, computed deterministically.
//!
//! The face sequence is cut into fixed-size blocks. At query step `t` a
//! block is usable only if none of its faces lies after `t`. Three
//! branches read the past:
//!
//! - compressed: attention over one mean-pooled key/value per usable block
//! - selected: the `top_k` usable blocks by `q · compressed key` (ties go
//!   to the lower block id), attended token by token
//! - local: a sliding window of at most `local_kernel` faces strictly
//!   before `t`, advanced every `local_stride` steps
//!
//! and are mixed with fixed gate weights.

use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::matrix::{dot, Matrix};
use super::reference::attend;
use crate::error::{Error, Result};
use crate::tokenizer::{TokenSequence, TOKENS_PER_FACE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NscaParams {
    pub block_size: usize,
    pub top_k: usize,
    pub local_kernel: usize,
    pub local_stride: usize,
}

impl Default for NscaParams {
    fn default() -> Self {
        NscaParams {
            block_size: 64,
            top_k: 16,
            local_kernel: 32,
            local_stride: 16,
        }
    }
}

impl NscaParams {
    pub fn validate(&self) -> Result<()> {
        if self.block_size == 0 || self.top_k == 0 || self.local_kernel == 0 || self.local_stride == 0 {
            return Err(Error::InvalidConfig("NSCA parameters must be positive".into()));
        }
        if self.local_stride > self.local_kernel {
            return Err(Error::InvalidConfig(format!(
                "local stride {} exceeds kernel {}",
                self.local_stride, self.local_kernel
            )));
        }
        Ok(())
    }
}

/// Block boundaries and per-step causal structure for one sequence length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NscaLayout {
    params: NscaParams,
    seq_len: usize,
}

pub fn nsca_plan(seq_len: usize, params: NscaParams) -> Result<NscaLayout> {
    params.validate()?;
    if seq_len == 0 {
        return Err(Error::InvalidConfig("sequence length must be positive".into()));
    }
    Ok(NscaLayout { params, seq_len })
}

impl NscaLayout {
    pub fn params(&self) -> NscaParams {
        self.params
    }

    pub fn seq_len(&self) -> usize {
        self.seq_len
    }

    pub fn block_count(&self) -> usize {
        self.seq_len.div_ceil(self.params.block_size)
    }

    pub fn block(&self, b: usize) -> Range<usize> {
        let bs = self.params.block_size;
        b * bs..((b + 1) * bs).min(self.seq_len)
    }

    pub fn blocks(&self) -> impl Iterator<Item = Range<usize>> + '_ {
        (0..self.block_count()).map(|b| self.block(b))
    }

    /// Number of usable blocks at step `t`. Usable blocks always form a
    /// prefix, so this is also the first unusable block id.
    pub fn valid_block_count(&self, t: usize) -> usize {
        assert!(t < self.seq_len, "step {t} outside sequence of {}", self.seq_len);
        if t + 1 == self.seq_len {
            self.block_count()
        } else {
            (t + 1) / self.params.block_size
        }
    }

    pub fn is_block_valid(&self, b: usize, t: usize) -> bool {
        b < self.valid_block_count(t)
    }

    /// Additive block-level logits at step `t`.
    pub fn block_mask(&self, t: usize) -> Vec<f64> {
        let v = self.valid_block_count(t);
        (0..self.block_count())
            .map(|b| if b < v { 0.0 } else { f64::NEG_INFINITY })
            .collect()
    }

    /// Faces read by the local branch at step `t`.
    pub fn local_window(&self, t: usize) -> Range<usize> {
        let s = self.params.local_stride;
        let edge = t.div_ceil(s) * s;
        edge.saturating_sub(self.params.local_kernel)..t
    }

    /// `top_k` usable blocks by descending score, lower id first on ties.
    /// Returned in ascending block order.
    pub fn select_blocks(&self, t: usize, scores: &[f64]) -> Vec<u32> {
        let v = self.valid_block_count(t);
        let mut ids: Vec<usize> = (0..v).collect();
        ids.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
        ids.truncate(self.params.top_k);
        ids.sort_unstable();
        ids.into_iter().map(|b| b as u32).collect()
    }
}

/// Fixed branch weights `(compressed, selected, local)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gate([f64; 3]);

impl Gate {
    pub fn new(weights: [f64; 3]) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) || (weights.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidConfig(format!(
                "gate weights {weights:?} must be non-negative and sum to 1"
            )));
        }
        Ok(Gate(weights))
    }

    pub fn weights(&self) -> [f64; 3] {
        self.0
    }
}

impl Default for Gate {
    fn default() -> Self {
        Gate([1.0 / 3.0; 3])
    }
}

/// What one query step looked at.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NscaStep {
    pub step: usize,
    pub valid_blocks: usize,
    pub selected: Vec<u32>,
    pub local: Range<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NscaOutput {
    /// Gate-weighted sum, one row per query.
    pub output: Matrix,
    pub compressed: Matrix,
    pub selected: Matrix,
    pub local: Matrix,
    pub steps: Vec<NscaStep>,
}

/// Mean-pooled rows per block.
pub fn compress(layout: &NscaLayout, m: &Matrix) -> Matrix {
    let mut out = Matrix::zeros(layout.block_count(), m.cols());
    for (b, range) in layout.blocks().enumerate() {
        let n = range.len() as f64;
        let row = out.row_mut(b);
        for r in range {
            for (o, x) in row.iter_mut().zip(m.row(r)) {
                *o += x;
            }
        }
        row.iter_mut().for_each(|o| *o /= n);
    }
    out
}

/// Runs all three branches for queries at absolute steps `steps`.
///
/// `keys` and `values` cover the whole sequence (`layout.seq_len()` rows);
/// row `k` of `queries` is the query at step `steps.start + k`.
pub fn nsca_reference(
    keys: &Matrix,
    values: &Matrix,
    queries: &Matrix,
    steps: Range<usize>,
    layout: &NscaLayout,
    gate: Gate,
) -> Result<NscaOutput> {
    if keys.rows() != layout.seq_len() || values.rows() != layout.seq_len() {
        return Err(Error::ShapeError(format!(
            "{} keys and {} values for a sequence of {}",
            keys.rows(),
            values.rows(),
            layout.seq_len()
        )));
    }
    if queries.cols() != keys.cols() {
        return Err(Error::ShapeError(format!(
            "query width {} != key width {}",
            queries.cols(),
            keys.cols()
        )));
    }
    if queries.rows() != steps.len() || steps.end > layout.seq_len() {
        return Err(Error::ShapeError(format!(
            "{} queries for steps {steps:?} of {}",
            queries.rows(),
            layout.seq_len()
        )));
    }

    let ck = compress(layout, keys);
    let cv = compress(layout, values);
    let d = values.cols();
    let [wc, ws, wl] = gate.weights();

    let rows: Vec<_> = steps
        .clone()
        .into_par_iter()
        .map(|t| {
            let q = queries.row(t - steps.start);
            let valid = layout.valid_block_count(t);
            let block_ids: Vec<usize> = (0..valid).collect();
            let compressed = attend(q, &ck, &cv, &block_ids);

            let scores: Vec<f64> = (0..valid).map(|b| dot(q, ck.row(b))).collect();
            let chosen = layout.select_blocks(t, &scores);
            let tokens: Vec<usize> = chosen.iter().flat_map(|&b| layout.block(b as usize)).collect();
            let selected = attend(q, keys, values, &tokens);

            let local_range = layout.local_window(t);
            let local_ids: Vec<usize> = local_range.clone().collect();
            let local = attend(q, keys, values, &local_ids);

            let out: Vec<f64> = (0..d)
                .map(|c| wc * compressed[c] + ws * selected[c] + wl * local[c])
                .collect();
            let step = NscaStep {
                step: t,
                valid_blocks: valid,
                selected: chosen,
                local: local_range,
            };
            (out, compressed, selected, local, step)
        })
        .collect();

    let n = steps.len();
    let mut output = Vec::with_capacity(n * d);
    let mut compressed = Vec::with_capacity(n * d);
    let mut selected = Vec::with_capacity(n * d);
    let mut local = Vec::with_capacity(n * d);
    let mut plan = Vec::with_capacity(n);
    for (o, c, s, l, st) in rows {
        output.extend(o);
        compressed.extend(c);
        selected.extend(s);
        local.extend(l);
        plan.push(st);
    }
    Ok(NscaOutput {
        output: Matrix::from_vec(n, d, output),
        compressed: Matrix::from_vec(n, d, compressed),
        selected: Matrix::from_vec(n, d, selected),
        local: Matrix::from_vec(n, d, local),
        steps: plan,
    })
}

/// Face embeddings: the nine coordinate tokens, centred in `[-0.5, 0.5)`,
/// through a fixed random `9 × dim` projection drawn from `seed`.
pub fn face_embeddings(seq: &TokenSequence, dim: usize, seed: u64) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = 1.0 / (TOKENS_PER_FACE as f64).sqrt();
    let proj: Vec<f64> = (0..TOKENS_PER_FACE * dim)
        .map(|_| rng.random_range(-1.0..1.0) * scale)
        .collect();
    let bins = seq.bins() as f64;
    let mut out = Matrix::zeros(seq.face_count(), dim);
    for i in 0..seq.face_count() {
        let row = out.row_mut(i);
        for (k, &t) in seq.face_tokens(i).iter().enumerate() {
            let x = (t as f64 + 0.5) / bins - 0.5;
            for (c, o) in row.iter_mut().enumerate() {
                *o += x * proj[k * dim + c];
            }
        }
    }
    out
}
