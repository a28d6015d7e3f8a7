use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::QuantizedMesh;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct OrientStats {
    /// Components linked through edges shared by exactly two faces.
    pub components: usize,
    pub flipped_faces: usize,
    /// Components left untouched because no consistent winding exists.
    pub unorientable_components: usize,
}

impl OrientStats {
    pub fn has_warning(&self) -> bool {
        self.unorientable_components > 0
    }
}

/// Makes winding consistent across manifold edges.
///
/// Winding is propagated breadth-first from the first face of each
/// component; if that would flip most of the component the whole
/// assignment is inverted, so a single stray face is the one re-wound.
/// Edges with more than two incident faces never propagate. Components
/// with no consistent winding (Möbius-like) are returned as they came.
pub fn orient_faces(mesh: &QuantizedMesh) -> (QuantizedMesh, OrientStats) {
    let n = mesh.faces.len();
    // undirected edge -> (face, edge runs low-to-high)
    let mut edges: HashMap<(u32, u32), Vec<(u32, bool)>> = HashMap::with_capacity(n * 2);
    for (f, face) in mesh.faces.iter().enumerate() {
        for k in 0..3 {
            let (a, b) = (face[k], face[(k + 1) % 3]);
            edges.entry((a.min(b), a.max(b))).or_default().push((f as u32, a < b));
        }
    }

    let mut stats = OrientStats::default();
    let mut flip = vec![false; n];
    let mut visited = vec![false; n];
    let mut queue = VecDeque::new();
    let mut members = Vec::new();

    for seed in 0..n {
        if visited[seed] {
            continue;
        }
        stats.components += 1;
        visited[seed] = true;
        queue.push_back(seed);
        members.clear();
        let mut conflict = false;

        while let Some(f) = queue.pop_front() {
            members.push(f);
            let face = mesh.faces[f];
            for k in 0..3 {
                let (a, b) = (face[k], face[(k + 1) % 3]);
                let incident = &edges[&(a.min(b), a.max(b))];
                if incident.len() != 2 {
                    continue;
                }
                let dir_f = a < b;
                let (g, dir_g) = if incident[0].0 as usize == f {
                    incident[1]
                } else {
                    incident[0]
                };
                let g = g as usize;
                let want = flip[f] ^ (dir_f == dir_g);
                if !visited[g] {
                    visited[g] = true;
                    flip[g] = want;
                    queue.push_back(g);
                } else if flip[g] != want {
                    conflict = true;
                }
            }
        }

        if conflict {
            stats.unorientable_components += 1;
            for &f in &members {
                flip[f] = false;
            }
            continue;
        }
        let flipped = members.iter().filter(|&&f| flip[f]).count();
        if 2 * flipped > members.len() {
            for &f in &members {
                flip[f] = !flip[f];
            }
        }
    }

    if stats.unorientable_components > 0 {
        log::warn!(
            "{} component(s) have no consistent winding; left unchanged",
            stats.unorientable_components
        );
    }

    let faces = mesh
        .faces
        .iter()
        .zip(&flip)
        .map(|(&f, &fl)| if fl { [f[0], f[2], f[1]] } else { f })
        .collect();
    stats.flipped_faces = flip.iter().filter(|&&f| f).count();
    (
        QuantizedMesh {
            bins: mesh.bins,
            vertices: mesh.vertices.clone(),
            faces,
            normalization: mesh.normalization,
        },
        stats,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::mesh::{canonical_sort, normalize_and_quantize, sanitize};

    fn quantized(raw: &crate::mesh::RawMesh) -> QuantizedMesh {
        let q = normalize_and_quantize(raw, 256).unwrap();
        canonical_sort(&sanitize(&q).unwrap().0)
    }

    /// Greedy winding propagation written directly over face pairs; used
    /// as the oracle for the single-flip fixture.
    fn oracle_consistent(mesh: &QuantizedMesh) -> bool {
        for (i, fi) in mesh.faces.iter().enumerate() {
            for fj in mesh.faces.iter().skip(i + 1) {
                for k in 0..3 {
                    let e = (fi[k], fi[(k + 1) % 3]);
                    for l in 0..3 {
                        if (fj[l], fj[(l + 1) % 3]) == e {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    #[test]
    fn consistent_icosphere_is_untouched() {
        let m = quantized(&corpus::icosphere(2));
        let (out, stats) = orient_faces(&m);
        assert_eq!(out, m);
        assert_eq!(stats.flipped_faces, 0);
        assert!(!stats.has_warning());
    }

    #[test]
    fn single_flipped_face_in_strip_is_rewound() {
        let mut raw = corpus::grid_patch(6, 1);
        raw.faces[0] = [raw.faces[0][0], raw.faces[0][2], raw.faces[0][1]];
        let m = quantized(&raw);
        assert!(!oracle_consistent(&m));
        let (out, stats) = orient_faces(&m);
        assert_eq!(stats.flipped_faces, 1);
        assert!(oracle_consistent(&out));
        let changed = out.faces.iter().zip(&m.faces).filter(|(a, b)| a != b).count();
        assert_eq!(changed, 1);
    }

    #[test]
    fn mobius_strip_is_left_alone() {
        let m = quantized(&corpus::mobius_strip(12));
        let (out, stats) = orient_faces(&m);
        assert!(stats.has_warning());
        assert_eq!(out, m);
    }

    #[test]
    fn non_manifold_book_keeps_its_winding() {
        let m = quantized(&corpus::book(3));
        let (out, _) = orient_faces(&m);
        assert_eq!(out.faces, m.faces);
    }
}
