use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::mesh::QVertex;
use crate::tokenizer::{ControlVocab, FrontierSnapshot, TokenSequence, SEED_DELTA};

/// Which candidate edges may attach a face to its root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AttachMode {
    /// Only the first written edge `v0 -> v1`, as the tokenizer writes it.
    #[default]
    FirstEdge,
    /// Any of the three edges.
    AnyEdge,
}

/// Inference-time decoding state at whole-face granularity.
///
/// The frontier queue holds emission ordinals, root at the front. A face
/// is accepted when one of its edges runs opposite to an edge of the
/// root; a separator lifts that constraint for exactly one face, which
/// then seeds a new component.
#[derive(Debug, Clone)]
pub struct DecodeState {
    vocab: ControlVocab,
    attach: AttachMode,
    tokens: Vec<u16>,
    faces: Vec<[QVertex; 3]>,
    roots: Vec<u32>,
    deltas: Vec<i32>,
    heads: Vec<u32>,
    /// Per face, edges `k -> k+1` nothing has attached across yet.
    open: Vec<[bool; 3]>,
    keys: HashSet<[QVertex; 3]>,
    queue: VecDeque<u32>,
    pending_delta: u32,
    awaiting_seed: bool,
    components: usize,
    closed: bool,
}

fn face_key(f: [QVertex; 3]) -> [QVertex; 3] {
    let k = (0..3).min_by_key(|&k| f[k]).unwrap();
    [f[k], f[(k + 1) % 3], f[(k + 2) % 3]]
}

impl DecodeState {
    pub fn new(vocab: ControlVocab, attach: AttachMode) -> Self {
        let bos = vocab.bos();
        DecodeState {
            vocab,
            attach,
            tokens: vec![bos],
            faces: Vec::new(),
            roots: Vec::new(),
            deltas: Vec::new(),
            heads: Vec::new(),
            open: Vec::new(),
            keys: HashSet::new(),
            queue: VecDeque::new(),
            pending_delta: 0,
            awaiting_seed: false,
            components: 0,
            closed: false,
        }
    }

    pub fn vocab(&self) -> &ControlVocab {
        &self.vocab
    }

    pub fn tokens(&self) -> &[u16] {
        &self.tokens
    }

    pub fn faces(&self) -> &[[QVertex; 3]] {
        &self.faces
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// True between a separator and the seed face that follows it.
    pub fn awaiting_seed(&self) -> bool {
        self.awaiting_seed
    }

    pub fn root(&self) -> Option<usize> {
        self.queue.front().map(|&r| r as usize)
    }

    pub fn queue_len(&self) -> usize {
        self.queue.len()
    }

    /// Ordinal at queue position `k` (0 is the root).
    pub fn queued(&self, k: usize) -> Option<usize> {
        self.queue.get(k).map(|&r| r as usize)
    }

    pub fn open_edges(&self, face: usize) -> [bool; 3] {
        self.open[face]
    }

    pub fn contains_face(&self, f: [QVertex; 3]) -> bool {
        self.keys.contains(&face_key(f))
    }

    /// Frontier of the most recent face of ordinal `i`.
    pub fn snapshot(&self, i: usize) -> FrontierSnapshot {
        FrontierSnapshot {
            head: self.heads[i],
            face: i as u32,
        }
    }

    /// Moves the root `delta` places along the queue, popping everything
    /// before it.
    pub fn advance_root(&mut self, delta: usize) -> Result<()> {
        if self.closed {
            return Err(Error::SequenceClosed);
        }
        if delta >= self.queue.len() {
            return Err(Error::RootOutOfRange {
                delta,
                queue_len: self.queue.len(),
            });
        }
        self.queue.drain(..delta);
        self.pending_delta += delta as u32;
        Ok(())
    }

    pub fn push_separator(&mut self, index: usize) -> Result<()> {
        if self.closed {
            return Err(Error::SequenceClosed);
        }
        if index >= self.vocab.separator_labels().len() {
            return Err(Error::InvalidVocab(format!("no separator with index {index}")));
        }
        self.tokens.push(self.vocab.separator(index));
        self.queue.clear();
        self.pending_delta = 0;
        self.awaiting_seed = true;
        Ok(())
    }

    /// The attaching edge index of `face` against the current root, if any.
    fn attachment(&self, face: [QVertex; 3]) -> Option<(usize, usize)> {
        let root = self.faces[self.root()?];
        let candidates = match self.attach {
            AttachMode::FirstEdge => 0..1,
            AttachMode::AnyEdge => 0..3,
        };
        for m in candidates {
            let (a, b) = (face[m], face[(m + 1) % 3]);
            if let Some(k) = (0..3).find(|&k| root[k] == b && root[(k + 1) % 3] == a) {
                return Some((m, k));
            }
        }
        None
    }

    /// Appends a face and returns its ordinal.
    pub fn push_face(&mut self, face: [QVertex; 3]) -> Result<usize> {
        if self.closed {
            return Err(Error::SequenceClosed);
        }
        let ord = self.faces.len();
        let violation = || Error::ConstraintViolation {
            position: ord,
            root: self.root(),
            edge: [face[0], face[1]],
        };
        let bins = self.vocab.bins();
        if face.iter().flatten().any(|&c| c as u32 >= bins) {
            return Err(Error::InvalidMesh(format!(
                "face {ord} has a coordinate outside {bins} bins"
            )));
        }
        if face[0] == face[1] || face[1] == face[2] || face[2] == face[0] || self.contains_face(face) {
            return Err(violation());
        }

        let mut open = [true; 3];
        if self.awaiting_seed {
            self.awaiting_seed = false;
            self.components += 1;
            self.roots.push(ord as u32);
            self.heads.push(ord as u32);
            self.deltas.push(SEED_DELTA);
        } else {
            let Some((m, k)) = self.attachment(face) else {
                return Err(violation());
            };
            let root = self.root().unwrap();
            self.open[root][k] = false;
            open[m] = false;
            self.roots.push(root as u32);
            self.heads.push(root as u32);
            self.deltas.push(self.pending_delta as i32);
        }
        self.pending_delta = 0;
        self.keys.insert(face_key(face));
        self.faces.push(face);
        self.open.push(open);
        self.queue.push_back(ord as u32);
        self.tokens.extend(face.iter().flatten());
        Ok(ord)
    }

    pub fn push_eos(&mut self) -> Result<()> {
        if self.closed {
            return Err(Error::SequenceClosed);
        }
        self.tokens.push(self.vocab.eos());
        self.closed = true;
        Ok(())
    }

    /// The decoded stream as a token sequence, closing it if needed.
    pub fn into_sequence(mut self) -> TokenSequence {
        if !self.closed {
            self.tokens.push(self.vocab.eos());
        }
        TokenSequence::from_parts(self.vocab, self.tokens, self.roots, self.deltas)
    }
}
