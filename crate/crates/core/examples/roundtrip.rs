//! Checks that tokenize, detokenize, re-sort and tokenize again gives back
//! the same RIPL bytes for every mesh in the procedural corpus.
//!
//! ```bash
//! cargo run --release --example roundtrip
//! ```

use std::time::Instant;

use ripple_mesh::mesh::canonical_sort;
use ripple_mesh::tokenizer::format::{from_ripl_bytes, to_ripl_bytes};
use ripple_mesh::tokenizer::tokenize_raw;
use ripple_mesh::{corpus, detokenize, tokenize, HalfEdgeStructure};

fn main() -> anyhow::Result<()> {
    let start = Instant::now();
    let mut same = 0;
    let corpus = corpus::procedural_corpus();
    for (name, raw) in &corpus {
        let (seq, _) = tokenize_raw(raw, 256)?;
        let bytes = to_ripl_bytes(&seq);
        assert_eq!(from_ripl_bytes(&bytes)?, seq);

        let back = detokenize(seq.tokens(), seq.vocab())?;
        let again = tokenize(&HalfEdgeStructure::build(&canonical_sort(&back.mesh)), seq.vocab());
        let ok = to_ripl_bytes(&again) == bytes;
        same += ok as usize;
        println!(
            "{name:<16} {:>6} faces {:>7} bytes  {}",
            seq.face_count(),
            bytes.len(),
            if ok { "ok" } else { "DIFFERS" }
        );
    }
    println!("\n{same}/{} identical in {:.2?}", corpus.len(), start.elapsed());
    Ok(())
}
