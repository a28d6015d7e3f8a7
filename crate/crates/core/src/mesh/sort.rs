use super::{QVertex, QuantizedMesh};

/// Sort key for vertices: z first, then y, then x.
#[inline]
pub fn zyx_key(q: QVertex) -> (u16, u16, u16) {
    (q[2], q[1], q[0])
}

/// Renumbers vertices in z-y-x order, rotates every face so its smallest
/// vertex leads (winding untouched) and sorts faces by their vertex keys.
pub fn canonical_sort(mesh: &QuantizedMesh) -> QuantizedMesh {
    let mut order: Vec<u32> = (0..mesh.vertices.len() as u32).collect();
    order.sort_by_key(|&v| (zyx_key(mesh.vertices[v as usize]), v));
    let mut rank = vec![0u32; order.len()];
    for (new, &old) in order.iter().enumerate() {
        rank[old as usize] = new as u32;
    }
    let vertices: Vec<QVertex> = order.iter().map(|&v| mesh.vertices[v as usize]).collect();

    // Vertex ranks now follow z-y-x order, so comparing indices compares keys.
    let mut faces: Vec<[u32; 3]> = mesh
        .faces
        .iter()
        .map(|f| {
            let f = f.map(|v| rank[v as usize]);
            let k = (0..3).min_by_key(|&k| f[k]).unwrap();
            [f[k], f[(k + 1) % 3], f[(k + 2) % 3]]
        })
        .collect();
    faces.sort_unstable();

    QuantizedMesh {
        bins: mesh.bins,
        vertices,
        faces,
        normalization: mesh.normalization,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::Normalization;

    fn tetra() -> QuantizedMesh {
        QuantizedMesh {
            bins: 256,
            vertices: vec![[10, 0, 0], [0, 10, 0], [0, 0, 10], [0, 0, 0]],
            faces: vec![[0, 1, 2], [3, 1, 0], [3, 2, 1], [3, 0, 2]],
            normalization: Normalization::IDENTITY,
        }
    }

    /// Independent oracle: rotate by explicit coordinate comparison and
    /// sort with a hand-written insertion sort over coordinate tuples.
    fn oracle(mesh: &QuantizedMesh) -> Vec<[QVertex; 3]> {
        let key = |q: QVertex| [q[2], q[1], q[0]];
        let mut tris: Vec<[QVertex; 3]> = mesh
            .faces
            .iter()
            .map(|f| {
                let t = f.map(|v| mesh.vertices[v as usize]);
                let mut best = 0;
                for k in 1..3 {
                    if key(t[k]) < key(t[best]) {
                        best = k;
                    }
                }
                [t[best], t[(best + 1) % 3], t[(best + 2) % 3]]
            })
            .collect();
        for i in 1..tris.len() {
            let mut j = i;
            while j > 0 && tris[j].map(key) < tris[j - 1].map(key) {
                tris.swap(j, j - 1);
                j -= 1;
            }
        }
        tris
    }

    #[test]
    fn tetrahedron_matches_oracle() {
        let m = tetra();
        let sorted = canonical_sort(&m);
        assert_eq!(sorted.face_coords(), oracle(&m));
        // frozen: the origin leads; x is the least significant key, so
        // (10,0,0) sorts before (0,10,0) and (0,0,10)
        assert_eq!(sorted.face_coords()[0], [[0, 0, 0], [10, 0, 0], [0, 0, 10]]);
    }

    #[test]
    fn idempotent_and_order_independent() {
        let m = tetra();
        let once = canonical_sort(&m);
        assert_eq!(canonical_sort(&once), once);
        let mut permuted = m.clone();
        permuted.faces.reverse();
        assert_eq!(canonical_sort(&permuted).face_coords(), once.face_coords());
    }
}
