use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mesh::RawMesh;

pub const DEFAULT_SAMPLES: usize = 1024;

/// Distance used inside the Chamfer mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChamferMode {
    #[default]
    Squared,
    Euclidean,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub samples: usize,
    pub seed: u64,
    pub chamfer: ChamferMode,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            samples: DEFAULT_SAMPLES,
            seed: 0,
            chamfer: ChamferMode::Squared,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    /// Chamfer distance ×10³.
    pub cd: f64,
    pub hd: f64,
    pub nc: f64,
}

/// Surface points with the unit normal of the face they came from.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceSamples {
    pub points: Vec<[f64; 3]>,
    pub normals: Vec<[f64; 3]>,
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Corner indices in ascending order, and whether that reverses the winding.
fn sorted_corners(f: [u32; 3]) -> ([u32; 3], bool) {
    let mut s = f;
    s.sort_unstable();
    let k = (0..3).min_by_key(|&k| f[k]).unwrap();
    (s, f[(k + 1) % 3] != s[1])
}

/// Area-weighted uniform samples.
///
/// Corners are visited in ascending vertex-index order, so a face and its
/// reversed copy yield the same points with exactly opposite normals.
pub fn sample_surface(mesh: &RawMesh, count: usize, seed: u64) -> Result<SurfaceSamples> {
    if mesh.vertices.is_empty() || mesh.faces.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut cumulative = Vec::with_capacity(mesh.faces.len());
    let mut normals = Vec::with_capacity(mesh.faces.len());
    let mut total = 0.0;
    for f in 0..mesh.faces.len() {
        let (sorted, odd) = sorted_corners(mesh.faces[f]);
        let [a, b, c] = sorted.map(|i| mesh.vertices[i as usize]);
        let n = cross(sub(b, a), sub(c, a));
        let len = dot(n, n).sqrt();
        total += len / 2.0;
        cumulative.push(total);
        let sign = if odd { -1.0 } else { 1.0 };
        normals.push(if len > 0.0 { n.map(|x| sign * x / len) } else { [0.0; 3] });
    }
    if total.is_nan() || total <= 0.0 {
        return Err(Error::DegenerateGeometry("surface has zero area"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = SurfaceSamples {
        points: Vec::with_capacity(count),
        normals: Vec::with_capacity(count),
    };
    for _ in 0..count {
        let x = rng.random::<f64>() * total;
        let f = cumulative.partition_point(|&c| c <= x).min(mesh.faces.len() - 1);
        let (r1, r2): (f64, f64) = (rng.random(), rng.random());
        let [a, b, c] = sorted_corners(mesh.faces[f]).0.map(|i| mesh.vertices[i as usize]);
        let s = r1.sqrt();
        let (wa, wb, wc) = (1.0 - s, s * (1.0 - r2), s * r2);
        out.points.push([0, 1, 2].map(|k| wa * a[k] + wb * b[k] + wc * c[k]));
        out.normals.push(normals[f]);
    }
    Ok(out)
}

/// Index and squared distance of the nearest point of `set` to `p`.
fn nearest(p: [f64; 3], set: &[[f64; 3]]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (i, q) in set.iter().enumerate() {
        let d = sub(p, *q);
        let d2 = dot(d, d);
        if d2 < best.1 {
            best = (i, d2);
        }
    }
    best
}

fn cosine(a: [f64; 3], b: [f64; 3]) -> f64 {
    let denom = (dot(a, a) * dot(b, b)).sqrt();
    if denom == 0.0 {
        0.0
    } else {
        dot(a, b) / denom
    }
}

/// Chamfer, Hausdorff and normal consistency between two surfaces, in
/// model units.
///
/// Both meshes are sampled with the same seed. CD is the mean of the two
/// directional means (of squared distances by default), scaled by 10³;
/// HD is the larger directional maximum; NC is the mean cosine between
/// each sample's normal and that of its nearest counterpart, over both
/// directions.
pub fn evaluate(pred: &RawMesh, gt: &RawMesh, cfg: &EvalConfig) -> Result<Metrics> {
    if cfg.samples == 0 {
        return Err(Error::InvalidConfig("sample count must be positive".into()));
    }
    let a = sample_surface(pred, cfg.samples, cfg.seed)?;
    let b = sample_surface(gt, cfg.samples, cfg.seed)?;

    let mut cd = 0.0;
    let mut hd: f64 = 0.0;
    let mut nc = 0.0;
    for (from, to) in [(&a, &b), (&b, &a)] {
        let mut sum = 0.0;
        for (p, n) in from.points.iter().zip(&from.normals) {
            let (j, d2) = nearest(*p, &to.points);
            sum += match cfg.chamfer {
                ChamferMode::Squared => d2,
                ChamferMode::Euclidean => d2.sqrt(),
            };
            hd = hd.max(d2.sqrt());
            nc += cosine(*n, to.normals[j]);
        }
        cd += sum / from.points.len() as f64;
    }
    Ok(Metrics {
        cd: cd / 2.0 * 1e3,
        hd,
        nc: nc / (a.points.len() + b.points.len()) as f64,
    })
}
