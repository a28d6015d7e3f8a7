//! Runs the curation filter over the procedural corpus plus a few larger
//! meshes and prints one line per mesh and a CSV summary.
//!
//! ```bash
//! cargo run --release --example filter_corpus
//! ```

use rayon::prelude::*;
use ripple_mesh::analysis::{filter_mesh, write_summary, FilterConfig, SummaryRow};
use ripple_mesh::corpus;

fn main() -> anyhow::Result<()> {
    let mut meshes = corpus::procedural_corpus();
    meshes.push(("torus_5k".into(), corpus::torus(50, 50, 1.0, 0.3)));
    meshes.push(("sphere_l4".into(), corpus::icosphere(4)));
    meshes.push(("assembly_big".into(), corpus::assembly(16, 7)));

    let cfg = FilterConfig::default();
    let reports: Vec<_> = meshes
        .par_iter()
        .map(|(name, raw)| filter_mesh(raw, &cfg).map(|r| (name.clone(), r)))
        .collect::<Result<_, _>>()?;

    let mut rows = Vec::new();
    for (name, r) in &reports {
        let failed: Vec<&str> = r.failures().map(|c| c.name.as_str()).collect();
        println!(
            "{name:<20} {:<4} faces={:<6} max_delta={:<4} {:>7.1} ms  {}",
            if r.passed { "pass" } else { "fail" },
            r.check("face_count").unwrap().value,
            r.check("bfs_displacement").unwrap().value,
            r.elapsed_ms,
            failed.join(",")
        );
        rows.push(SummaryRow::new(name.clone(), r));
    }
    let passed = reports.iter().filter(|(_, r)| r.passed).count();
    println!("\n{passed}/{} meshes pass\n", reports.len());
    write_summary(&rows, std::io::stdout())?;
    Ok(())
}
