use std::ops::Range;

use super::matrix::Matrix;
use crate::tokenizer::{FrontierSnapshot, TokenSequence};

/// Frontier attention mask over the faces of one window.
///
/// Row `i` may attend to the faces still queued when face `i` was emitted,
/// plus face `i` itself. FIFO order makes that support one contiguous
/// interval `[head_i, i]`, so rows are stored as ranges rather than as a
/// dense matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrontierMask {
    window: Range<usize>,
    /// Absolute ordinals `[max(head_i, window.start), i + 1)` per row.
    supports: Vec<Range<usize>>,
    clipped_entries: usize,
    clipped_rows: usize,
}

impl FrontierMask {
    pub fn window(&self) -> Range<usize> {
        self.window.clone()
    }

    pub fn len(&self) -> usize {
        self.supports.len()
    }

    pub fn is_empty(&self) -> bool {
        self.supports.is_empty()
    }

    /// Attendable columns of row `r`, as window-local indices.
    pub fn row_support(&self, r: usize) -> Range<usize> {
        let s = &self.supports[r];
        s.start - self.window.start..s.end - self.window.start
    }

    /// Attendable faces of row `r`, as absolute ordinals.
    pub fn row_support_absolute(&self, r: usize) -> Range<usize> {
        self.supports[r].clone()
    }

    pub fn is_attendable(&self, r: usize, c: usize) -> bool {
        self.row_support(r).contains(&c)
    }

    /// Frontier entries that fell before the window start and were dropped.
    pub fn clipped_entries(&self) -> usize {
        self.clipped_entries
    }

    /// Rows that lost at least one frontier entry.
    pub fn clipped_rows(&self) -> usize {
        self.clipped_rows
    }

    /// Additive logits: `0` where attendable, `-inf` elsewhere.
    pub fn to_dense(&self) -> Matrix {
        let n = self.len();
        let mut m = Matrix::filled(n, n, f64::NEG_INFINITY);
        for r in 0..n {
            for c in self.row_support(r) {
                m[(r, c)] = 0.0;
            }
        }
        m
    }

    /// Row-major `i8` matrix, `0` attendable and `-1` masked.
    pub fn to_i8(&self) -> Vec<i8> {
        let n = self.len();
        let mut out = vec![-1i8; n * n];
        for r in 0..n {
            let s = self.row_support(r);
            out[r * n + s.start..r * n + s.end].fill(0);
        }
        out
    }
}

/// Builds the mask for `window` from per-face frontier snapshots.
///
/// `snapshots[i]` must describe absolute face `i`; only the window's
/// rows are read.
pub fn frontier_mask(snapshots: &[FrontierSnapshot], window: Range<usize>) -> FrontierMask {
    assert!(window.end <= snapshots.len(), "window past end of sequence");
    let mut clipped_entries = 0;
    let mut clipped_rows = 0;
    let supports = window
        .clone()
        .map(|i| {
            let snap = snapshots[i];
            debug_assert_eq!(snap.face as usize, i);
            let head = snap.head as usize;
            if head < window.start {
                clipped_entries += window.start - head;
                clipped_rows += 1;
            }
            head.max(window.start)..i + 1
        })
        .collect();
    FrontierMask {
        window,
        supports,
        clipped_entries,
        clipped_rows,
    }
}

/// Snapshots of every face in `seq`.
pub fn snapshots(seq: &TokenSequence) -> Vec<FrontierSnapshot> {
    (0..seq.face_count()).map(|i| seq.frontier(i)).collect()
}

/// One mask per training window of `window_faces` faces.
pub fn window_masks(seq: &TokenSequence, window_faces: usize) -> Vec<FrontierMask> {
    assert!(window_faces >= 1, "window must hold at least one face");
    let snaps = snapshots(seq);
    (0..snaps.len())
        .step_by(window_faces)
        .map(|s| frontier_mask(&snaps, s..(s + window_faces).min(snaps.len())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snap(head: u32, face: u32) -> FrontierSnapshot {
        FrontierSnapshot { head, face }
    }

    #[test]
    fn row_matches_queue_contents() {
        // faces 0..6 with B_5 = {2, 3, 4}
        let s = vec![snap(0, 0), snap(0, 1), snap(0, 2), snap(1, 3), snap(1, 4), snap(2, 5)];
        let m = frontier_mask(&s, 0..6);
        let dense = m.to_dense();
        let zeros: Vec<usize> = (0..6).filter(|&c| dense[(5, c)] == 0.0).collect();
        assert_eq!(zeros, vec![2, 3, 4, 5]);
        // seed row only sees itself
        assert_eq!(m.row_support(0), 0..1);
        assert_eq!(m.clipped_entries(), 0);
    }

    #[test]
    fn window_clips_old_frontier() {
        let s = vec![snap(0, 0), snap(0, 1), snap(0, 2), snap(1, 3), snap(1, 4), snap(2, 5)];
        let m = frontier_mask(&s, 3..6);
        assert_eq!(m.row_support(0), 0..1);
        assert_eq!(m.row_support_absolute(2), 3..6);
        // rows 3, 4 lose face 1 and 2; row 5 loses 2
        assert_eq!(m.clipped_entries(), 2 + 2 + 1);
        assert_eq!(m.clipped_rows(), 3);
    }

    #[test]
    fn i8_export_agrees_with_dense() {
        let s = vec![snap(0, 0), snap(0, 1), snap(1, 2), snap(1, 3)];
        let m = frontier_mask(&s, 0..4);
        let d = m.to_dense();
        for (k, v) in m.to_i8().into_iter().enumerate() {
            assert_eq!(v == 0, d.as_slice()[k] == 0.0);
        }
    }
}
