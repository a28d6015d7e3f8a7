use std::collections::HashMap;

use super::QuantizedMesh;

/// One directed edge of one face.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HalfEdge {
    pub origin: u32,
    pub face: u32,
    pub next: u32,
    pub prev: u32,
}

/// Half-edge connectivity that tolerates non-manifold edges.
///
/// Half-edge `3f + k` runs from corner `k` to corner `k + 1` of face `f`.
/// Twins of `h` are all half-edges running the opposite way over the same
/// vertex pair, ordered by owning face. Co-directional half-edges on the
/// same pair are never twins.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfEdgeStructure {
    mesh: QuantizedMesh,
    half_edges: Vec<HalfEdge>,
    twin_offsets: Vec<u32>,
    twin_list: Vec<u32>,
}

impl HalfEdgeStructure {
    /// Expects a sanitized, oriented, canonically sorted mesh.
    pub fn build(mesh: &QuantizedMesh) -> Self {
        let n = mesh.faces.len() * 3;
        let mut half_edges = Vec::with_capacity(n);
        let mut by_pair: HashMap<(u32, u32), Vec<u32>> = HashMap::with_capacity(n);
        for (f, face) in mesh.faces.iter().enumerate() {
            let base = 3 * f as u32;
            for k in 0..3u32 {
                let h = base + k;
                half_edges.push(HalfEdge {
                    origin: face[k as usize],
                    face: f as u32,
                    next: base + (k + 1) % 3,
                    prev: base + (k + 2) % 3,
                });
                by_pair
                    .entry((face[k as usize], face[((k + 1) % 3) as usize]))
                    .or_default()
                    .push(h);
            }
        }

        // Half-edges were pushed in face order, so each list is already
        // sorted by owning face.
        let mut twin_offsets = Vec::with_capacity(n + 1);
        let mut twin_list = Vec::new();
        twin_offsets.push(0);
        for h in 0..n {
            let he = half_edges[h];
            let dest = half_edges[he.next as usize].origin;
            if let Some(opposite) = by_pair.get(&(dest, he.origin)) {
                twin_list.extend(opposite.iter().copied().filter(|&t| t as usize != h));
            }
            twin_offsets.push(twin_list.len() as u32);
        }

        HalfEdgeStructure {
            mesh: mesh.clone(),
            half_edges,
            twin_offsets,
            twin_list,
        }
    }

    pub fn mesh(&self) -> &QuantizedMesh {
        &self.mesh
    }

    pub fn face_count(&self) -> usize {
        self.mesh.faces.len()
    }

    pub fn half_edges(&self) -> &[HalfEdge] {
        &self.half_edges
    }

    #[inline]
    pub fn get(&self, h: u32) -> HalfEdge {
        self.half_edges[h as usize]
    }

    #[inline]
    pub fn twins(&self, h: u32) -> &[u32] {
        let lo = self.twin_offsets[h as usize] as usize;
        let hi = self.twin_offsets[h as usize + 1] as usize;
        &self.twin_list[lo..hi]
    }

    #[inline]
    pub fn destination(&self, h: u32) -> u32 {
        self.half_edges[self.half_edges[h as usize].next as usize].origin
    }

    /// Entry half-edge of a face: the one leaving its first corner.
    #[inline]
    pub fn face_entry(&self, f: u32) -> u32 {
        3 * f
    }

    /// Half-edges with no twin.
    pub fn boundary_half_edges(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.half_edges.len() as u32).filter(|&h| self.twins(h).is_empty())
    }
}
