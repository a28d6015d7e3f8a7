//! Constrained decoding at whole-face granularity.
//!
//! A [`DecodeState`] keeps the frontier queue a model would maintain at
//! inference time: each step advances the root by a predicted Δ, then
//! accepts a face only if it attaches to the root through an opposite
//! edge. Separators start a new component and lift the constraint for
//! its seed. Proposers stand in for the model: [`ReplayProposer`] feeds
//! back a tokenizer stream, [`RandomValidProposer`] grows random surfaces.

mod proposer;
mod run;
mod state;

pub use proposer::{FaceProposer, Proposal, RandomValidProposer, ReplayProposer};
pub use run::{run, write_trace, Action, DecodeRun, Decoder, Limits, TraceEntry};
pub use state::{AttachMode, DecodeState};
