use serde::{Deserialize, Serialize};

use super::{QVertex, QuantizedMesh, RawMesh};
use crate::error::{Error, Result};

/// Uniform transform from model units into the unit cube centered at the
/// origin: `normalized = (p - center) / scale`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    pub center: [f64; 3],
    pub scale: f64,
}

impl Normalization {
    pub const IDENTITY: Normalization = Normalization {
        center: [0.0; 3],
        scale: 1.0,
    };

    pub fn to_normalized(&self, p: [f64; 3]) -> [f64; 3] {
        [0, 1, 2].map(|a| (p[a] - self.center[a]) / self.scale)
    }

    pub fn to_model(&self, p: [f64; 3]) -> [f64; 3] {
        [0, 1, 2].map(|a| p[a] * self.scale + self.center[a])
    }
}

impl Default for Normalization {
    fn default() -> Self {
        Self::IDENTITY
    }
}

/// Bin of a normalized coordinate in `[-0.5, 0.5]`; floor with clamping.
pub fn quantize_coord(x: f64, bins: u32) -> u16 {
    let b = ((x + 0.5) * bins as f64).floor();
    b.clamp(0.0, (bins - 1) as f64) as u16
}

/// Center of bin `q`, in normalized units.
pub fn dequantize_coord(q: u16, bins: u32) -> f64 {
    (q as f64 + 0.5) / bins as f64 - 0.5
}

/// Bin centers of a grid point, in normalized units.
pub fn dequantize_normalized(q: QVertex, bins: u32) -> [f64; 3] {
    q.map(|c| dequantize_coord(c, bins))
}

/// Scales the mesh so the longest side of its bounding box spans the unit
/// cube, then snaps every coordinate to `bins` uniform bins.
///
/// Flat axes land in the center bin. No merging or cleanup happens here.
pub fn normalize_and_quantize(mesh: &RawMesh, bins: u32) -> Result<QuantizedMesh> {
    if !(2..=u16::MAX as u32).contains(&bins) {
        return Err(Error::InvalidConfig(format!(
            "bins must be in [2, {}], got {bins}",
            u16::MAX
        )));
    }
    if mesh.vertices.is_empty() {
        return Err(Error::EmptyInput);
    }
    mesh.validate()?;

    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for p in &mesh.vertices {
        for a in 0..3 {
            lo[a] = lo[a].min(p[a]);
            hi[a] = hi[a].max(p[a]);
        }
    }
    let scale = (0..3).map(|a| hi[a] - lo[a]).fold(0.0, f64::max);
    if scale <= 0.0 {
        return Err(Error::DegenerateGeometry("bounding box has zero extent"));
    }
    let normalization = Normalization {
        center: [0, 1, 2].map(|a| 0.5 * (lo[a] + hi[a])),
        scale,
    };

    let vertices = mesh
        .vertices
        .iter()
        .map(|&p| normalization.to_normalized(p).map(|x| quantize_coord(x, bins)))
        .collect();

    Ok(QuantizedMesh {
        bins,
        vertices,
        faces: mesh.faces.clone(),
        normalization,
    })
}
