//! Tokenizes one mesh and shows what the stream looks like.
//!
//! ```bash
//! cargo run --release --example tokenize_mesh              # built-in torus
//! cargo run --release --example tokenize_mesh -- model.obj
//! ```

use ripple_mesh::corpus;
use ripple_mesh::mesh::io;
use ripple_mesh::tokenizer::{compression_stats, tokenize_raw, window, TokenKind};

fn main() -> anyhow::Result<()> {
    let raw = match std::env::args().nth(1) {
        Some(path) => io::load(path)?,
        None => corpus::torus(24, 12, 1.0, 0.35),
    };
    let (seq, report) = tokenize_raw(&raw, 256)?;
    println!("prepared: {report:?}");

    let vocab = seq.vocab();
    println!("\nface  root  delta  frontier     tokens");
    for i in 0..seq.face_count().min(12) {
        let f = seq.frontier(i);
        let root = seq.root(i).map_or("seed".into(), |r| r.to_string());
        let delta = seq.delta(i).map_or("-".into(), |d| d.to_string());
        println!(
            "{i:>4}  {root:>4}  {delta:>5}  [{:>3}, {:>3})  {:?}",
            f.head,
            f.face,
            seq.face_tokens(i)
        );
    }

    let controls: Vec<String> = seq
        .tokens()
        .iter()
        .filter_map(|&t| match vocab.kind(t)? {
            TokenKind::Coord(_) => None,
            k => Some(format!("{t}={k:?}")),
        })
        .collect();
    println!("\ncontrol tokens: {}", controls.join(" "));

    let stats = compression_stats(&seq);
    println!(
        "\n{} faces, {} tokens ({:.3} per face), {} components, max delta {}",
        stats.faces, stats.tokens, stats.tokens_per_face, stats.components, stats.max_delta
    );
    println!("frontier size histogram: {:?}", stats.frontier_histogram);

    for w in window(&seq, 200) {
        println!(
            "window faces {:?}: {} real slots, {} tokens",
            w.faces,
            w.real_faces(),
            w.tokens.len()
        );
    }
    Ok(())
}
