use std::collections::VecDeque;

use super::sequence::{TokenSequence, SEED_DELTA};
use super::vocab::ControlVocab;
use crate::mesh::{HalfEdgeStructure, QuantizedMesh};

const UNVISITED: u32 = u32::MAX;

/// Serializes every face with the default component separator.
pub fn tokenize(structure: &HalfEdgeStructure, vocab: &ControlVocab) -> TokenSequence {
    tokenize_with(structure, vocab, |_, _| 0)
}

/// Breadth-first face serialization with frontier and root registration.
///
/// Components are seeded in canonical face order. Each seed is preceded by
/// the separator `labeler(mesh, seed_face)` picks (an index into the
/// vocabulary's separator table). From a dequeued half-edge `h` the
/// neighbors across `prev(h)`, `next(h)` and `h` are visited in that
/// order, every twin of each in stored order. A new face is written
/// starting at the origin of the half-edge it was entered through, so its
/// first edge is the one shared with its root.
pub fn tokenize_with<L>(structure: &HalfEdgeStructure, vocab: &ControlVocab, mut labeler: L) -> TokenSequence
where
    L: FnMut(&QuantizedMesh, u32) -> usize,
{
    let mesh = structure.mesh();
    assert_eq!(
        mesh.bins,
        vocab.bins(),
        "vocabulary bins must match the mesh quantization"
    );
    let n = structure.face_count();

    let mut seq = TokenSequence {
        vocab: vocab.clone(),
        tokens: Vec::with_capacity(9 * n + 2 + n / 8),
        roots: Vec::with_capacity(n),
        deltas: Vec::with_capacity(n),
        heads: Vec::with_capacity(n),
        face_starts: Vec::with_capacity(n),
    };
    let mut ordinal_of = vec![UNVISITED; n];
    // (entering half-edge, emission ordinal of its face)
    let mut queue: VecDeque<(u32, u32)> = VecDeque::new();

    let emit = |seq: &mut TokenSequence, entry: u32| {
        let e = structure.get(entry);
        seq.face_starts.push(seq.tokens.len() as u32);
        for h in [entry, e.next, e.prev] {
            let v = mesh.vertices[structure.get(h).origin as usize];
            seq.tokens.extend_from_slice(&v);
        }
    };

    seq.tokens.push(vocab.bos());
    for seed in 0..n as u32 {
        if ordinal_of[seed as usize] != UNVISITED {
            continue;
        }
        let sep = labeler(mesh, seed);
        seq.tokens.push(vocab.separator(sep));

        let ord = seq.roots.len() as u32;
        ordinal_of[seed as usize] = ord;
        let entry = structure.face_entry(seed);
        emit(&mut seq, entry);
        seq.roots.push(ord);
        seq.heads.push(ord);
        seq.deltas.push(SEED_DELTA);
        queue.push_back((entry, ord));

        while let Some((h, front)) = queue.pop_front() {
            let he = structure.get(h);
            let root = ordinal_of[he.face as usize];
            for side in [he.prev, he.next, h] {
                for &t in structure.twins(side) {
                    let g = structure.get(t).face as usize;
                    if ordinal_of[g] != UNVISITED {
                        continue;
                    }
                    let ord = seq.roots.len() as u32;
                    ordinal_of[g] = ord;
                    emit(&mut seq, t);
                    let prev_root = seq.roots[ord as usize - 1];
                    seq.deltas.push((root - prev_root) as i32);
                    seq.roots.push(root);
                    seq.heads.push(front);
                    queue.push_back((t, ord));
                }
            }
        }
    }
    seq.tokens.push(vocab.eos());
    seq
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{Normalization, QuantizedMesh};

    fn he(vertices: Vec<[u16; 3]>, faces: Vec<[u32; 3]>) -> HalfEdgeStructure {
        HalfEdgeStructure::build(&QuantizedMesh {
            bins: 256,
            vertices,
            faces,
            normalization: Normalization::IDENTITY,
        })
    }

    #[test]
    fn single_triangle() {
        let v = ControlVocab::new(256).unwrap();
        let s = tokenize(&he(vec![[0, 0, 0], [5, 0, 0], [0, 5, 0]], vec![[0, 1, 2]]), &v);
        assert_eq!(s.tokens(), &[256, 259, 0, 0, 0, 5, 0, 0, 0, 5, 0, 257]);
        assert_eq!(s.root(0), None);
        assert_eq!(s.delta_values(), &[SEED_DELTA]);
    }

    #[test]
    fn two_triangles_hand_trace() {
        // face 0 = (a, b, c), face 1 = (a, c, d); shared edge c->a / a->c
        let v = ControlVocab::new(256).unwrap();
        let s = tokenize(
            &he(
                vec![[0, 0, 0], [9, 0, 0], [9, 9, 0], [0, 9, 0]],
                vec![[0, 1, 2], [0, 2, 3]],
            ),
            &v,
        );
        assert_eq!(s.face_count(), 2);
        assert_eq!(s.delta_values(), &[SEED_DELTA, 0]);
        assert_eq!(s.root(1), Some(0));
        assert_eq!(s.frontier(1).range(), 0..1);
        // face 1 entered through a->c, so it is written a, c, d
        assert_eq!(s.face_vertices(1), [[0, 0, 0], [9, 9, 0], [0, 9, 0]]);
        assert_eq!(s.tokens().len(), 9 * 2 + 3);
    }

    #[test]
    fn co_directional_edges_block_direct_traversal() {
        // Three faces on edge (a, b): F0 and F2 both run a->b, F1 runs b->a.
        let (a, b, c, d, e) = (0, 1, 2, 3, 4);
        let v = ControlVocab::new(256).unwrap();
        let structure = he(
            vec![[0, 0, 0], [0, 0, 9], [9, 0, 4], [0, 9, 4], [5, 5, 4]],
            vec![[a, b, c], [b, a, d], [a, b, e]],
        );
        assert!(structure.twins(0).iter().all(|&t| structure.get(t).face != 2));
        let s = tokenize(&structure, &v);
        assert_eq!(s.component_count(), 1);
        assert_eq!(s.root(1), Some(0));
        // F2 hangs off F1, never F0
        assert_eq!(s.root(2), Some(1));
        assert_eq!(s.face_vertices(2)[0], [0, 0, 0]);
        assert_eq!(s.delta_values(), &[SEED_DELTA, 0, 1]);
    }

    #[test]
    fn fully_co_directional_face_becomes_its_own_component() {
        let v = ControlVocab::new(256).unwrap();
        let structure = he(
            vec![[0, 0, 0], [0, 0, 9], [9, 0, 4], [0, 9, 4]],
            vec![[0, 1, 2], [0, 1, 3]],
        );
        let s = tokenize(&structure, &v);
        assert_eq!(s.component_count(), 2);
        assert_eq!(s.tokens().len(), 9 * 2 + 4);
    }

    #[test]
    fn semantic_labels_choose_the_separator() {
        let v = ControlVocab::with_separators(256, vec!["floor".into(), "chair".into()]).unwrap();
        let structure = he(
            vec![[0, 0, 0], [5, 0, 0], [0, 5, 0], [0, 0, 9], [5, 0, 9], [0, 5, 9]],
            vec![[0, 1, 2], [3, 4, 5]],
        );
        let s = tokenize_with(&structure, &v, |m, f| {
            if m.face_vertices(f as usize)[0][2] > 0 {
                1
            } else {
                0
            }
        });
        assert_eq!(s.separator_before(0), Some(v.separator(0)));
        assert_eq!(s.separator_before(1), Some(v.separator(1)));
    }
}
