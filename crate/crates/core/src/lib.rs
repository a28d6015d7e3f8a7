//! Topology-aligned triangle mesh tokenization.
//!
//! The crate turns triangle meshes into token streams by breadth-first
//! traversal over half-edges, recording for every face the frontier face
//! it grew from. Around that core it provides:
//!
//! - [`mesh`]: OBJ/PLY loading, quantization, cleanup, canonical ordering,
//!   winding repair and non-manifold half-edge connectivity
//! - [`tokenizer`]: tokenization, detokenization, training windows and the
//!   RIPL binary format
//! - [`attention`]: frontier masks, block-sparse context plans and a plain
//!   reference attention to check them against
//! - [`decode`]: the constrained decoding state machine with replay and
//!   random proposers
//! - [`analysis`]: dataset filters and CD/HD/NC surface metrics
//! - [`corpus`]: procedural meshes for tests and examples
//!
//! Runnable walkthroughs live in `examples/`:
//!
//! ```bash
//! cargo run --release -p ripple-mesh --example tokenize_mesh
//! cargo run --release -p ripple-mesh --example roundtrip
//! cargo run --release -p ripple-mesh --example frontier_masks
//! cargo run --release -p ripple-mesh --example nsca_attention
//! cargo run --release -p ripple-mesh --example decode_replay
//! cargo run --release -p ripple-mesh --example random_decode
//! cargo run --release -p ripple-mesh --example semantic_scene
//! cargo run --release -p ripple-mesh --example filter_corpus
//! cargo run --release -p ripple-mesh --example evaluate_metrics
//! ```

pub mod analysis;
pub mod attention;
pub mod cli;
pub mod corpus;
pub mod decode;
pub mod error;
pub mod mesh;
pub mod tokenizer;

pub use error::{Error, Result};
pub use mesh::{prepare, HalfEdgeStructure, QuantizedMesh, RawMesh};
pub use tokenizer::{detokenize, tokenize, ControlVocab, TokenSequence};
