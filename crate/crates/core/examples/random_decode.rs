//! Generates meshes with the seeded random policy. Every face it proposes
//! must pass the same attachment checks a trained model would face.
//!
//! ```bash
//! cargo run --release --example random_decode -- 3 out.obj
//! ```

use ripple_mesh::decode::{run, Limits, RandomValidProposer};
use ripple_mesh::mesh::io::save_obj;
use ripple_mesh::ControlVocab;

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1);
    let out_path = args.next();

    let vocab = ControlVocab::new(256)?;
    let mut proposer = RandomValidProposer::new(seed, 80, 3);
    let out = run(&mut proposer, Limits::default(), &vocab)?;
    println!(
        "seed {seed}: {} faces in {} components, {} tokens, {} trace entries",
        out.sequence.face_count(),
        out.decoded.components.len(),
        out.sequence.tokens().len(),
        out.trace.len()
    );
    for (c, r) in out.decoded.components.iter().enumerate() {
        println!("  component {c}: faces {r:?}");
    }
    if let Some(p) = out_path {
        save_obj(&out.decoded.mesh.to_raw(), &p)?;
        println!("wrote {p}");
    }
    Ok(())
}
