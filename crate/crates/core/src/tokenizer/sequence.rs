use std::ops::Range;

use super::vocab::ControlVocab;

/// Coordinate tokens per face: three vertices, x/y/z each.
pub const TOKENS_PER_FACE: usize = 9;

/// Stored in place of Δ for the first face of a component.
pub const SEED_DELTA: i32 = -1;

/// A tokenized mesh plus its per-face traversal records.
///
/// For face `i` (emission ordinal): `root(i)` is the face it was grown
/// from (`None` for component seeds), `delta(i)` the root-pointer advance
/// since face `i - 1`, and `frontier(i)` the FIFO queue contents at the
/// moment it was emitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenSequence {
    pub(crate) vocab: ControlVocab,
    pub(crate) tokens: Vec<u16>,
    /// Seeds store their own ordinal.
    pub(crate) roots: Vec<u32>,
    pub(crate) deltas: Vec<i32>,
    /// Seeds store their own ordinal (empty interval).
    pub(crate) heads: Vec<u32>,
    /// Token position of each face's first coordinate.
    pub(crate) face_starts: Vec<u32>,
}

/// The frontier queue for one face, as the half-open ordinal interval
/// `[head, face)`. FIFO order makes it contiguous.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FrontierSnapshot {
    pub head: u32,
    pub face: u32,
}

impl FrontierSnapshot {
    pub fn range(&self) -> Range<usize> {
        self.head as usize..self.face as usize
    }

    pub fn len(&self) -> usize {
        (self.face - self.head) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.head == self.face
    }

    pub fn contains(&self, j: usize) -> bool {
        self.range().contains(&j)
    }
}

impl TokenSequence {
    /// Assembles a sequence from stored parts (e.g. a RIPL file). Frontier
    /// heads are taken from the roots; face positions are recomputed.
    pub(crate) fn from_parts(vocab: ControlVocab, tokens: Vec<u16>, roots: Vec<u32>, deltas: Vec<i32>) -> Self {
        let face_starts = locate_faces(&vocab, &tokens);
        TokenSequence {
            vocab,
            tokens,
            heads: roots.clone(),
            roots,
            deltas,
            face_starts,
        }
    }

    pub fn vocab(&self) -> &ControlVocab {
        &self.vocab
    }

    pub fn bins(&self) -> u32 {
        self.vocab.bins()
    }

    pub fn tokens(&self) -> &[u16] {
        &self.tokens
    }

    pub fn face_count(&self) -> usize {
        self.roots.len()
    }

    pub fn control_count(&self) -> usize {
        self.tokens.len() - TOKENS_PER_FACE * self.face_count()
    }

    /// Raw root ordinals; seeds hold their own ordinal.
    pub fn root_ordinals(&self) -> &[u32] {
        &self.roots
    }

    /// Raw Δ values; seeds hold [`SEED_DELTA`].
    pub fn delta_values(&self) -> &[i32] {
        &self.deltas
    }

    pub fn frontier_heads(&self) -> &[u32] {
        &self.heads
    }

    pub fn is_seed(&self, i: usize) -> bool {
        self.deltas[i] == SEED_DELTA
    }

    pub fn root(&self, i: usize) -> Option<usize> {
        (!self.is_seed(i)).then(|| self.roots[i] as usize)
    }

    pub fn delta(&self, i: usize) -> Option<u32> {
        (!self.is_seed(i)).then(|| self.deltas[i] as u32)
    }

    pub fn frontier(&self, i: usize) -> FrontierSnapshot {
        FrontierSnapshot {
            head: self.heads[i],
            face: i as u32,
        }
    }

    /// The nine coordinate tokens of face `i`.
    pub fn face_tokens(&self, i: usize) -> &[u16] {
        let s = self.face_starts[i] as usize;
        &self.tokens[s..s + TOKENS_PER_FACE]
    }

    pub fn face_vertices(&self, i: usize) -> [[u16; 3]; 3] {
        let t = self.face_tokens(i);
        [0, 1, 2].map(|v| [t[3 * v], t[3 * v + 1], t[3 * v + 2]])
    }

    /// Face ordinal owning the token at `pos`; `None` for control tokens.
    pub fn face_of_token(&self, pos: usize) -> Option<usize> {
        let i = self.face_starts.partition_point(|&s| s as usize <= pos);
        let i = i.checked_sub(1)?;
        (pos < self.face_starts[i] as usize + TOKENS_PER_FACE).then_some(i)
    }

    /// Ordinals of component seeds.
    pub fn seeds(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.face_count()).filter(|&i| self.is_seed(i))
    }

    pub fn component_count(&self) -> usize {
        self.seeds().count()
    }

    /// Separator token written just before seed `i`.
    pub fn separator_before(&self, i: usize) -> Option<u16> {
        let s = self.face_starts[i] as usize;
        (s > 0 && self.vocab.is_separator(self.tokens[s - 1])).then(|| self.tokens[s - 1])
    }
}

fn locate_faces(vocab: &ControlVocab, tokens: &[u16]) -> Vec<u32> {
    let mut starts = Vec::new();
    let mut pos = 0;
    while pos < tokens.len() {
        if tokens[pos] < vocab.bins() as u16 {
            starts.push(pos as u32);
            pos += TOKENS_PER_FACE;
        } else {
            pos += 1;
        }
    }
    starts
}
