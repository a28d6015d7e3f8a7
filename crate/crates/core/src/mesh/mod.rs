//! Mesh loading, quantization, cleanup, canonical ordering and half-edge
//! connectivity.
//!
//! The usual entry point is [`prepare`], which runs the whole chain:
//! quantize, merge/clean, sort, repair winding, sort again. The result is
//! what the tokenizer consumes through [`HalfEdgeStructure::build`].

mod half_edge;
pub mod io;
mod orient;
mod quantize;
mod sanitize;
mod sort;

pub use half_edge::{HalfEdge, HalfEdgeStructure};
pub use orient::{orient_faces, OrientStats};
pub use quantize::{dequantize_coord, dequantize_normalized, normalize_and_quantize, quantize_coord, Normalization};
pub use sanitize::{sanitize, SanitizeStats};
pub use sort::{canonical_sort, zyx_key};

use crate::error::{Error, Result};

/// Default quantization resolution.
pub const DEFAULT_BINS: u32 = 256;

/// Integer coordinate triple in `[0, bins)`.
pub type QVertex = [u16; 3];

/// A triangle soup as read from disk, in model units.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawMesh {
    pub vertices: Vec<[f64; 3]>,
    pub faces: Vec<[u32; 3]>,
}

impl RawMesh {
    /// Builds a mesh, rejecting out-of-range face indices.
    pub fn new(vertices: Vec<[f64; 3]>, faces: Vec<[u32; 3]>) -> Result<Self> {
        let mesh = RawMesh { vertices, faces };
        mesh.validate()?;
        Ok(mesh)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.vertices.len();
        for (f, face) in self.faces.iter().enumerate() {
            if let Some(&bad) = face.iter().find(|&&v| v as usize >= n) {
                return Err(Error::InvalidMesh(format!(
                    "face {f} references vertex {bad} but only {n} vertices exist"
                )));
            }
        }
        if self.vertices.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::InvalidMesh("non-finite vertex coordinate".into()));
        }
        Ok(())
    }

    pub fn triangle(&self, f: usize) -> [[f64; 3]; 3] {
        self.faces[f].map(|v| self.vertices[v as usize])
    }

    /// Appends another mesh, offsetting its indices.
    pub fn append(&mut self, other: &RawMesh) {
        let base = self.vertices.len() as u32;
        self.vertices.extend_from_slice(&other.vertices);
        self.faces.extend(other.faces.iter().map(|f| f.map(|v| v + base)));
    }

    pub fn translated(&self, t: [f64; 3]) -> RawMesh {
        RawMesh {
            vertices: self
                .vertices
                .iter()
                .map(|p| [p[0] + t[0], p[1] + t[1], p[2] + t[2]])
                .collect(),
            faces: self.faces.clone(),
        }
    }

    /// Same geometry with every face wound the other way.
    pub fn flipped(&self) -> RawMesh {
        RawMesh {
            vertices: self.vertices.clone(),
            faces: self.faces.iter().map(|f| [f[0], f[2], f[1]]).collect(),
        }
    }
}

/// A mesh on the integer grid.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantizedMesh {
    pub bins: u32,
    pub vertices: Vec<QVertex>,
    pub faces: Vec<[u32; 3]>,
    /// Maps bin centers back to model units.
    pub normalization: Normalization,
}

impl QuantizedMesh {
    pub fn face_vertices(&self, f: usize) -> [QVertex; 3] {
        self.faces[f].map(|v| self.vertices[v as usize])
    }

    /// Vertex positions in the normalized unit cube centered at the origin.
    pub fn normalized_vertices(&self) -> Vec<[f64; 3]> {
        self.vertices
            .iter()
            .map(|q| quantize::dequantize_normalized(*q, self.bins))
            .collect()
    }

    /// Converts back to model units.
    pub fn to_raw(&self) -> RawMesh {
        RawMesh {
            vertices: self
                .vertices
                .iter()
                .map(|q| {
                    self.normalization
                        .to_model(quantize::dequantize_normalized(*q, self.bins))
                })
                .collect(),
            faces: self.faces.clone(),
        }
    }

    /// Faces as coordinate triples; independent of vertex numbering.
    pub fn face_coords(&self) -> Vec<[QVertex; 3]> {
        (0..self.faces.len()).map(|f| self.face_vertices(f)).collect()
    }
}

/// Everything [`prepare`] learned along the way.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PrepareReport {
    pub sanitize: SanitizeStats,
    pub orient: OrientStats,
}

/// Quantize, sanitize, sort, orient and re-sort.
///
/// Orientation repair may flip faces, which changes their sort key, so the
/// canonical order is re-established afterwards.
pub fn prepare(raw: &RawMesh, bins: u32) -> Result<(QuantizedMesh, PrepareReport)> {
    let quantized = normalize_and_quantize(raw, bins)?;
    let (clean, sanitize_stats) = sanitize(&quantized)?;
    let sorted = canonical_sort(&clean);
    let (oriented, orient_stats) = orient_faces(&sorted);
    let mesh = if orient_stats.flipped_faces > 0 {
        canonical_sort(&oriented)
    } else {
        oriented
    };
    Ok((
        mesh,
        PrepareReport {
            sanitize: sanitize_stats,
            orient: orient_stats,
        },
    ))
}
