use std::collections::BTreeMap;
use std::ops::Range;

use serde::Serialize;

use super::sequence::{TokenSequence, TOKENS_PER_FACE};

pub const DEFAULT_WINDOW_FACES: usize = 1000;

/// Per-slot record of a window. Ordinals are absolute, so frontier
/// intervals stay resolvable across window boundaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SlotMeta {
    pub face: u32,
    pub root: Option<u32>,
    pub delta: Option<u32>,
    pub frontier_head: u32,
    /// Separator token that opened the component, for seed faces.
    pub separator: Option<u16>,
}

/// A fixed-length training window of `window_faces` face slots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    pub faces: Range<usize>,
    /// `9 · window_faces` tokens; empty slots hold PAD.
    pub tokens: Vec<u16>,
    /// One entry per slot; `None` for padding.
    pub slots: Vec<Option<SlotMeta>>,
}

impl Window {
    pub fn real_faces(&self) -> usize {
        self.faces.len()
    }
}

/// Splits the face stream into consecutive windows. The last window is
/// padded; no window is entirely padding.
pub fn window(seq: &TokenSequence, window_faces: usize) -> Vec<Window> {
    assert!(window_faces >= 1, "window must hold at least one face");
    let n = seq.face_count();
    let pad = seq.vocab().pad();
    (0..n)
        .step_by(window_faces)
        .map(|start| {
            let end = (start + window_faces).min(n);
            let mut tokens = Vec::with_capacity(window_faces * TOKENS_PER_FACE);
            let mut slots = Vec::with_capacity(window_faces);
            for i in start..end {
                tokens.extend_from_slice(seq.face_tokens(i));
                slots.push(Some(SlotMeta {
                    face: i as u32,
                    root: seq.root(i).map(|r| r as u32),
                    delta: seq.delta(i),
                    frontier_head: seq.frontier(i).head,
                    separator: seq.separator_before(i),
                }));
            }
            tokens.resize(window_faces * TOKENS_PER_FACE, pad);
            slots.resize(window_faces, None);
            Window {
                faces: start..end,
                tokens,
                slots,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompressionStats {
    pub faces: usize,
    pub tokens: usize,
    pub control_tokens: usize,
    pub tokens_per_face: f64,
    pub components: usize,
    /// Largest root-pointer advance.
    pub max_delta: u32,
    /// Largest `i - r_i`.
    pub max_root_distance: u32,
    /// Frontier length -> number of faces emitted with that frontier.
    pub frontier_histogram: BTreeMap<usize, usize>,
}

pub fn compression_stats(seq: &TokenSequence) -> CompressionStats {
    let n = seq.face_count();
    let mut hist = BTreeMap::new();
    let mut max_delta = 0;
    let mut max_dist = 0;
    for i in 0..n {
        *hist.entry(seq.frontier(i).len()).or_insert(0) += 1;
        if let Some(r) = seq.root(i) {
            max_dist = max_dist.max((i - r) as u32);
        }
        if let Some(d) = seq.delta(i) {
            max_delta = max_delta.max(d);
        }
    }
    CompressionStats {
        faces: n,
        tokens: seq.tokens().len(),
        control_tokens: seq.control_count(),
        tokens_per_face: if n == 0 {
            0.0
        } else {
            seq.tokens().len() as f64 / n as f64
        },
        components: seq.component_count(),
        max_delta,
        max_root_distance: max_dist,
        frontier_histogram: hist,
    }
}
