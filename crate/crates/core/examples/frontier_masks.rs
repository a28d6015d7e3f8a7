//! Builds frontier attention masks for a small grid and prints one as a
//! character grid, then shows how window boundaries clip larger meshes.
//!
//! ```bash
//! cargo run --release --example frontier_masks
//! ```

use ripple_mesh::attention::{export, frontier_mask, snapshots, window_masks};
use ripple_mesh::corpus;
use ripple_mesh::tokenizer::tokenize_raw;

fn main() -> anyhow::Result<()> {
    let (seq, _) = tokenize_raw(&corpus::grid_patch(4, 3), 256)?;
    let mask = frontier_mask(&snapshots(&seq), 0..seq.face_count());
    println!("{} faces, '#' = attendable\n", mask.len());
    for r in 0..mask.len() {
        let row: String = (0..mask.len())
            .map(|c| if mask.is_attendable(r, c) { '#' } else { '.' })
            .collect();
        println!("{r:>3} {row}  B = {:?}", mask.row_support(r));
    }

    // 2·60·30 = 3600 faces, four windows of 1000
    let (big, _) = tokenize_raw(&corpus::torus(60, 30, 1.0, 0.3), 256)?;
    println!();
    for m in window_masks(&big, 1000) {
        println!(
            "window {:?}: {} clipped rows, {} clipped entries, dense sidecar {} bytes",
            m.window(),
            m.clipped_rows(),
            m.clipped_entries(),
            export::dense_bytes(&m).len()
        );
    }
    Ok(())
}
