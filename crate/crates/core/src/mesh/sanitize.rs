use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{QVertex, QuantizedMesh};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SanitizeStats {
    pub vertices_before: usize,
    pub vertices_after: usize,
    pub faces_before: usize,
    pub faces_after: usize,
    pub degenerate_faces: usize,
    pub duplicate_faces: usize,
    /// `(before - after) / before` over vertex counts.
    pub vertex_drop_ratio: f64,
}

impl SanitizeStats {
    pub fn merged_vertices(&self) -> usize {
        self.vertices_before - self.vertices_after
    }

    pub fn dropped_faces(&self) -> usize {
        self.degenerate_faces + self.duplicate_faces
    }
}

/// Rotation that puts the smallest index first; orientation is kept, so a
/// face and its reversed copy stay distinct.
pub(crate) fn oriented_key(f: [u32; 3]) -> [u32; 3] {
    let k = (0..3).min_by_key(|&k| f[k]).unwrap();
    [f[k], f[(k + 1) % 3], f[(k + 2) % 3]]
}

/// Merges vertices sharing a grid cell, then drops degenerate and duplicate
/// faces.
///
/// The first vertex to occupy a cell represents it; surviving vertices keep
/// their relative order.
pub fn sanitize(mesh: &QuantizedMesh) -> Result<(QuantizedMesh, SanitizeStats)> {
    let mut cell_to_new: HashMap<QVertex, u32> = HashMap::with_capacity(mesh.vertices.len());
    let mut vertices = Vec::with_capacity(mesh.vertices.len());
    let remap: Vec<u32> = mesh
        .vertices
        .iter()
        .map(|&q| {
            *cell_to_new.entry(q).or_insert_with(|| {
                vertices.push(q);
                (vertices.len() - 1) as u32
            })
        })
        .collect();

    let mut degenerate = 0;
    let mut duplicate = 0;
    let mut seen = HashSet::with_capacity(mesh.faces.len());
    let mut faces = Vec::with_capacity(mesh.faces.len());
    for face in &mesh.faces {
        let f = face.map(|v| remap[v as usize]);
        if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
            degenerate += 1;
        } else if !seen.insert(oriented_key(f)) {
            duplicate += 1;
        } else {
            faces.push(f);
        }
    }
    if faces.is_empty() {
        return Err(Error::EmptyAfterSanitize);
    }

    let before = mesh.vertices.len();
    let stats = SanitizeStats {
        vertices_before: before,
        vertices_after: vertices.len(),
        faces_before: mesh.faces.len(),
        faces_after: faces.len(),
        degenerate_faces: degenerate,
        duplicate_faces: duplicate,
        vertex_drop_ratio: if before == 0 {
            0.0
        } else {
            (before - vertices.len()) as f64 / before as f64
        },
    };
    Ok((
        QuantizedMesh {
            bins: mesh.bins,
            vertices,
            faces,
            normalization: mesh.normalization,
        },
        stats,
    ))
}
