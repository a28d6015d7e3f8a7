//! Attention structure derived from the traversal.
//!
//! [`frontier_mask`] restricts every face to the faces still queued when it
//! was emitted (plus itself). [`nsca_plan`] and [`nsca_reference`] give the
//! block-causal sparse context with compressed, selected and local
//! branches. [`reference_attention`] is the plain-arithmetic evaluator both
//! are checked against.

pub mod export;
mod frontier;
mod matrix;
mod nsca;
mod reference;

pub use frontier::{frontier_mask, snapshots, window_masks, FrontierMask};
pub use matrix::Matrix;
pub use nsca::{
    compress, face_embeddings, nsca_plan, nsca_reference, Gate, NscaLayout, NscaOutput, NscaParams, NscaStep,
};
pub use reference::reference_attention;
