//! Compares a few distorted copies of a sphere against the original with
//! Chamfer distance, Hausdorff distance and normal consistency.
//!
//! ```bash
//! cargo run --release --example evaluate_metrics
//! ```

use ripple_mesh::analysis::{evaluate, ChamferMode, EvalConfig};
use ripple_mesh::{corpus, RawMesh};

fn main() -> anyhow::Result<()> {
    let gt = corpus::icosphere(3);
    let mut bumpy = gt.clone();
    for v in &mut bumpy.vertices {
        let s = 1.0 + 0.05 * (7.0 * v[0]).sin();
        *v = v.map(|x| x * s);
    }
    let cases: [(&str, RawMesh); 5] = [
        ("identical", gt.clone()),
        ("shifted 0.05", gt.translated([0.05, 0.0, 0.0])),
        ("bumpy", bumpy),
        ("coarser", corpus::icosphere(1)),
        ("flipped", gt.flipped()),
    ];
    let sq = EvalConfig::default();
    let eu = EvalConfig {
        chamfer: ChamferMode::Euclidean,
        ..Default::default()
    };
    println!(
        "{:<14} {:>10} {:>10} {:>8} {:>7}",
        "case", "CD (sq)", "CD (eu)", "HD", "NC"
    );
    for (name, pred) in &cases {
        let a = evaluate(pred, &gt, &sq)?;
        let b = evaluate(pred, &gt, &eu)?;
        println!("{name:<14} {:>10.4} {:>10.4} {:>8.4} {:>7.3}", a.cd, b.cd, a.hd, a.nc);
    }
    Ok(())
}
