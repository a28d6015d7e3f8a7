//! Breadth-first face serialization with explicit frontier tracking.
//!
//! A prepared mesh is written as `BOS`, then per connected component a
//! separator followed by 9 coordinate tokens per face, then `EOS`.
//! Alongside the tokens every face records its root (the face it was
//! grown from), the root-pointer advance Δ and its frontier queue.

mod detokenize;
pub mod format;
mod sequence;
mod tokenize;
mod vocab;
mod window;

pub use detokenize::{detokenize, retokenize, Detokenized};
pub use sequence::{FrontierSnapshot, TokenSequence, SEED_DELTA, TOKENS_PER_FACE};
pub use tokenize::{tokenize, tokenize_with};
pub use vocab::{ControlVocab, TokenKind, COMPONENT_LABEL};
pub use window::{compression_stats, window, CompressionStats, SlotMeta, Window, DEFAULT_WINDOW_FACES};

use crate::error::Result;
use crate::mesh::{prepare, HalfEdgeStructure, PrepareReport, RawMesh};

/// Prepares and tokenizes a raw mesh with the default vocabulary for `bins`.
pub fn tokenize_raw(raw: &RawMesh, bins: u32) -> Result<(TokenSequence, PrepareReport)> {
    let vocab = ControlVocab::new(bins)?;
    let (mesh, report) = prepare(raw, bins)?;
    Ok((tokenize(&HalfEdgeStructure::build(&mesh), &vocab), report))
}
