use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::state::DecodeState;
use crate::mesh::QVertex;
use crate::tokenizer::{TokenKind, TokenSequence};

/// One decoding decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Proposal {
    /// Open a new component with separator `index`.
    Separator(usize),
    /// Advance the root by `delta` (ignored for seeds), then emit `face`.
    Face {
        delta: u32,
        face: [QVertex; 3],
    },
    Eos,
}

/// Source of decisions for the harness; stands in for a model.
pub trait FaceProposer {
    fn propose(&mut self, state: &DecodeState) -> Proposal;
}

/// Replays a tokenizer stream verbatim.
#[derive(Debug, Clone)]
pub struct ReplayProposer<'a> {
    seq: &'a TokenSequence,
    pos: usize,
    face: usize,
}

impl<'a> ReplayProposer<'a> {
    pub fn new(seq: &'a TokenSequence) -> Self {
        ReplayProposer { seq, pos: 0, face: 0 }
    }
}

impl FaceProposer for ReplayProposer<'_> {
    fn propose(&mut self, _state: &DecodeState) -> Proposal {
        let tokens = self.seq.tokens();
        let vocab = self.seq.vocab();
        while self.pos < tokens.len() {
            match vocab.kind(tokens[self.pos]) {
                Some(TokenKind::Separator(s)) => {
                    self.pos += 1;
                    return Proposal::Separator(s);
                }
                Some(TokenKind::Coord(_)) => {
                    let i = self.face;
                    self.face += 1;
                    self.pos += 9;
                    return Proposal::Face {
                        delta: self.seq.delta(i).unwrap_or(0),
                        face: self.seq.face_vertices(i),
                    };
                }
                Some(TokenKind::Bos) => self.pos += 1,
                _ => break,
            }
        }
        self.pos = tokens.len();
        Proposal::Eos
    }
}

/// Random policy that only proposes faces the constraint accepts.
///
/// Δ is drawn from `0..=max_jump`, clamped to the queue and pushed past
/// roots with no open edge. A face is grown outward from a random open
/// root edge with a new vertex near its midpoint. When the whole queue is
/// exhausted, or after `faces_per_component` faces, a new component
/// starts; after `components` components it stops.
#[derive(Debug, Clone)]
pub struct RandomValidProposer {
    rng: ChaCha8Rng,
    pub max_jump: u32,
    pub faces_per_component: usize,
    pub components: usize,
    in_component: usize,
}

impl RandomValidProposer {
    pub fn new(seed: u64, faces_per_component: usize, components: usize) -> Self {
        RandomValidProposer {
            rng: ChaCha8Rng::seed_from_u64(seed),
            max_jump: 2,
            faces_per_component,
            components,
            in_component: 0,
        }
    }

    fn point(&mut self, bins: u32) -> QVertex {
        [0; 3].map(|_| self.rng.random_range(0..bins) as u16)
    }

    fn near(&mut self, at: [f64; 3], bins: u32) -> QVertex {
        at.map(|c| {
            let x = c + self.rng.random_range(-6.0..=6.0);
            x.round().clamp(0.0, (bins - 1) as f64) as u16
        })
    }

    fn next_component(&mut self, state: &DecodeState) -> Proposal {
        self.in_component = 0;
        if state.components() >= self.components {
            Proposal::Eos
        } else {
            Proposal::Separator(0)
        }
    }
}

impl FaceProposer for RandomValidProposer {
    fn propose(&mut self, state: &DecodeState) -> Proposal {
        let bins = state.vocab().bins();
        if state.awaiting_seed() {
            loop {
                let face = [self.point(bins), self.point(bins), self.point(bins)];
                if face[0] != face[1] && face[1] != face[2] && face[0] != face[2] && !state.contains_face(face) {
                    self.in_component = 1;
                    return Proposal::Face { delta: 0, face };
                }
            }
        }
        if state.queue_len() == 0 || self.in_component >= self.faces_per_component {
            return self.next_component(state);
        }

        let jump = self.rng.random_range(0..=self.max_jump) as usize;
        let mut d = jump.min(state.queue_len() - 1);
        while d < state.queue_len() {
            let root = state.queued(d).unwrap();
            let open: Vec<usize> = (0..3).filter(|&k| state.open_edges(root)[k]).collect();
            if !open.is_empty() {
                let k = open[self.rng.random_range(0..open.len())];
                let r = state.faces()[root];
                let (a, b) = (r[k], r[(k + 1) % 3]);
                let far = r[(k + 2) % 3];
                // mirror the opposite vertex across the edge midpoint
                let mid = [0, 1, 2].map(|c| (a[c] as f64 + b[c] as f64) / 2.0);
                let target = [0, 1, 2].map(|c| 2.0 * mid[c] - far[c] as f64);
                for _ in 0..32 {
                    let p = self.near(target, bins);
                    let face = [b, a, p];
                    if p != a && p != b && !state.contains_face(face) {
                        self.in_component += 1;
                        return Proposal::Face { delta: d as u32, face };
                    }
                }
            }
            d += 1;
        }
        self.next_component(state)
    }
}
