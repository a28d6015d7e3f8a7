//! Replays a tokenized mesh through the constrained decoder and prints the
//! action trace, then shows a corrupted face being rejected.
//!
//! ```bash
//! cargo run --release --example decode_replay
//! ```

use ripple_mesh::corpus;
use ripple_mesh::decode::{AttachMode, DecodeState, Decoder, FaceProposer, Limits, Proposal, ReplayProposer};
use ripple_mesh::tokenizer::tokenize_raw;

/// Shifts the first corner of face `at` by a grid step, breaking the edge
/// it shares with its root.
struct Nudge<'a> {
    inner: ReplayProposer<'a>,
    at: usize,
}

impl FaceProposer for Nudge<'_> {
    fn propose(&mut self, state: &DecodeState) -> Proposal {
        match self.inner.propose(state) {
            Proposal::Face { delta, mut face } if state.face_count() == self.at => {
                face[0][1] = face[0][1].saturating_add(1);
                Proposal::Face { delta, face }
            }
            p => p,
        }
    }
}

fn main() -> anyhow::Result<()> {
    let (seq, _) = tokenize_raw(&corpus::double_cone(8), 256)?;
    let mut dec = Decoder::new(seq.vocab().clone(), AttachMode::FirstEdge, Limits::default());
    dec.run(&mut ReplayProposer::new(&seq))?;
    for e in dec.trace() {
        println!(
            "step {:>3} {:<10} root={:<5} delta={:<5} queue={}",
            e.step,
            format!("{:?}", e.action),
            e.root.map_or("-".into(), |r| r.to_string()),
            e.delta.map_or("-".into(), |d| d.to_string()),
            e.queue_len
        );
    }
    let out = dec.finish()?;
    println!(
        "replayed {} faces, identical stream: {}",
        out.decoded.mesh.faces.len(),
        out.sequence == seq
    );

    let mut dec = Decoder::new(seq.vocab().clone(), AttachMode::FirstEdge, Limits::default());
    let err = dec
        .run(&mut Nudge {
            inner: ReplayProposer::new(&seq),
            at: 5,
        })
        .unwrap_err();
    println!(
        "\ncorrupted replay: {err} after {} accepted faces",
        dec.state().face_count()
    );
    Ok(())
}
