//! Runs the block-sparse context reference on face embeddings and checks
//! the compressed branch against plain masked attention.
//!
//! ```bash
//! cargo run --release --example nsca_attention
//! ```

use ripple_mesh::attention::{
    compress, face_embeddings, nsca_plan, nsca_reference, reference_attention, Gate, Matrix, NscaParams,
};
use ripple_mesh::corpus;
use ripple_mesh::tokenizer::tokenize_raw;

fn main() -> anyhow::Result<()> {
    let (seq, _) = tokenize_raw(&corpus::icosphere(3), 256)?;
    let n = seq.face_count();
    let emb = face_embeddings(&seq, 16, 7);
    let params = NscaParams::default();
    let layout = nsca_plan(n, params)?;
    println!(
        "{n} faces, {} blocks of {}, {params:?}",
        layout.block_count(),
        params.block_size
    );

    let out = nsca_reference(&emb, &emb, &emb, 0..n, &layout, Gate::new([0.4, 0.3, 0.3])?)?;
    for s in out.steps.iter().step_by(n / 8) {
        println!(
            "step {:>5}: {:>2} valid blocks, selected {:?}, local {:?}",
            s.step, s.valid_blocks, s.selected, s.local
        );
    }

    // the compressed branch is ordinary attention over pooled blocks
    let (kc, vc) = (compress(&layout, &emb), compress(&layout, &emb));
    let rows: Vec<Vec<f64>> = (0..n).map(|t| layout.block_mask(t)).collect();
    let mask = Matrix::from_rows(&rows);
    let plain = reference_attention(&emb, &kc, &vc, &mask)?;
    let worst = (0..n)
        .flat_map(|t| {
            plain
                .row(t)
                .iter()
                .zip(out.compressed.row(t))
                .map(|(a, b)| (a - b).abs())
        })
        .fold(0.0, f64::max);
    println!("compressed branch vs masked attention: max |diff| = {worst:.2e}");
    Ok(())
}
