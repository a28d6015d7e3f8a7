//! Exact triangle contact tests on the integer grid.
//!
//! Inputs are grid triangles with coordinates below 2¹⁶; every predicate
//! is evaluated in `i128` without rounding. Two triangles are in contact
//! when their relative interiors share a point. Shared edges, shared
//! vertices and a vertex resting on the other face do not count.

use std::collections::HashMap;

use crate::mesh::{QVertex, QuantizedMesh};

pub type GridTriangle = [QVertex; 3];

type V = [i128; 3];

fn v(p: QVertex) -> V {
    p.map(i128::from)
}

fn sub(a: V, b: V) -> V {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: V, b: V) -> V {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: V, b: V) -> i128 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn normal(t: &GridTriangle) -> [i128; 3] {
    let [a, b, c] = t.map(v);
    cross(sub(b, a), sub(c, a))
}

fn argmax_abs(n: V) -> usize {
    (0..3).max_by_key(|&k| n[k].abs()).unwrap()
}

/// How two triangles touch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Contact {
    None,
    /// Coplanar with overlapping interiors.
    Overlap,
    /// Non-coplanar with crossing interiors.
    Intersect,
}

/// Separating-axis test for two coplanar triangles. True when their
/// interiors overlap; touching along an edge or at a point is separation.
///
/// Callers must ensure the triangles are coplanar; degenerate triangles
/// never overlap.
pub fn coplanar_overlap(a: &GridTriangle, b: &GridTriangle) -> bool {
    let n = normal(a);
    if n == [0; 3] || normal(b) == [0; 3] {
        return false;
    }
    let drop = argmax_abs(n);
    let (i, j) = ((drop + 1) % 3, (drop + 2) % 3);
    let pa = a.map(|p| [p[i] as i128, p[j] as i128]);
    let pb = b.map(|p| [p[i] as i128, p[j] as i128]);
    for tri in [&pa, &pb] {
        for k in 0..3 {
            let (p, q) = (tri[k], tri[(k + 1) % 3]);
            let axis = [p[1] - q[1], q[0] - p[0]];
            let proj = |s: &[[i128; 2]; 3]| {
                let d = s.map(|x| x[0] * axis[0] + x[1] * axis[1]);
                (*d.iter().min().unwrap(), *d.iter().max().unwrap())
            };
            let (amin, amax) = proj(&pa);
            let (bmin, bmax) = proj(&pb);
            if amax <= bmin || bmax <= amin {
                return false;
            }
        }
    }
    true
}

/// A rational `num / den` with `den > 0`.
#[derive(Debug, Clone, Copy)]
struct Frac(i128, i128);

impl Frac {
    fn lt(self, o: Frac) -> bool {
        self.0 * o.1 < o.0 * self.1
    }
}

/// The open chord of `t` on the other triangle's plane, projected onto
/// coordinate `axis`. `s` are the signed plane distances of t's corners;
/// the caller guarantees both signs occur.
fn chord(t: &GridTriangle, s: [i128; 3], axis: usize) -> (Frac, Frac) {
    let mut ends = Vec::with_capacity(2);
    for k in 0..3 {
        let (si, sj) = (s[k], s[(k + 1) % 3]);
        let (xi, xj) = (t[k][axis] as i128, t[(k + 1) % 3][axis] as i128);
        if si == 0 {
            ends.push(Frac(xi, 1));
        } else if (si > 0) != (sj > 0) && sj != 0 {
            // crossing point xi + (xj - xi) · si / (si - sj)
            let (num, den) = (xj * si - xi * sj, si - sj);
            ends.push(if den < 0 { Frac(-num, -den) } else { Frac(num, den) });
        }
    }
    debug_assert_eq!(ends.len(), 2);
    if ends[1].lt(ends[0]) {
        (ends[1], ends[0])
    } else {
        (ends[0], ends[1])
    }
}

fn both_sides(s: [i128; 3]) -> bool {
    s.iter().any(|&x| x > 0) && s.iter().any(|&x| x < 0)
}

/// Classifies the contact between two grid triangles.
pub fn triangle_contact(a: &GridTriangle, b: &GridTriangle) -> Contact {
    let na = normal(a);
    let nb = normal(b);
    if na == [0; 3] || nb == [0; 3] {
        return Contact::None;
    }
    let a0 = v(a[0]);
    let sb = b.map(|p| dot(na, sub(v(p), a0)));
    if sb == [0; 3] {
        return if coplanar_overlap(a, b) {
            Contact::Overlap
        } else {
            Contact::None
        };
    }
    if !both_sides(sb) {
        return Contact::None;
    }
    let b0 = v(b[0]);
    let sa = a.map(|p| dot(nb, sub(v(p), b0)));
    if !both_sides(sa) {
        return Contact::None;
    }
    let axis = argmax_abs(cross(na, nb));
    let (alo, ahi) = chord(a, sa, axis);
    let (blo, bhi) = chord(b, sb, axis);
    let lo = if alo.lt(blo) { blo } else { alo };
    let hi = if ahi.lt(bhi) { ahi } else { bhi };
    if lo.lt(hi) {
        Contact::Intersect
    } else {
        Contact::None
    }
}

/// Triangle-triangle intersection under the open-interior convention.
pub fn triangles_intersect(a: &GridTriangle, b: &GridTriangle) -> bool {
    triangle_contact(a, b) != Contact::None
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
pub struct ContactStats {
    /// Faces overlapping a coplanar neighbour.
    pub overlapping: usize,
    /// Faces crossing a non-coplanar face.
    pub intersecting: usize,
    /// Faces in either set.
    pub bad: usize,
    pub candidate_pairs: usize,
}

/// Faces of `mesh` in contact with another face.
///
/// Candidate pairs come from a uniform spatial hash over face bounding
/// boxes; each pair is tested once, in the lowest cell both boxes cover.
pub fn contact_faces(mesh: &QuantizedMesh) -> ContactStats {
    let tris: Vec<GridTriangle> = mesh.face_coords();
    let n = tris.len();
    if n < 2 {
        return ContactStats::default();
    }
    let boxes: Vec<([i64; 3], [i64; 3])> = tris
        .iter()
        .map(|t| {
            let lo = [0, 1, 2].map(|k| t.iter().map(|p| p[k] as i64).min().unwrap());
            let hi = [0, 1, 2].map(|k| t.iter().map(|p| p[k] as i64).max().unwrap());
            (lo, hi)
        })
        .collect();
    let mean_extent = boxes
        .iter()
        .map(|(lo, hi)| (0..3).map(|k| hi[k] - lo[k]).max().unwrap() as f64)
        .sum::<f64>()
        / n as f64;
    let cell = (mean_extent.ceil() as i64).max(1);
    let cells_of = |b: &([i64; 3], [i64; 3])| (b.0.map(|x| x / cell), b.1.map(|x| x / cell));

    let mut grid: HashMap<[i64; 3], Vec<u32>> = HashMap::new();
    for (f, b) in boxes.iter().enumerate() {
        let (lo, hi) = cells_of(b);
        for x in lo[0]..=hi[0] {
            for y in lo[1]..=hi[1] {
                for z in lo[2]..=hi[2] {
                    grid.entry([x, y, z]).or_default().push(f as u32);
                }
            }
        }
    }

    let mut overlap = vec![false; n];
    let mut intersect = vec![false; n];
    let mut pairs = 0;
    for (key, members) in &grid {
        for (ii, &i) in members.iter().enumerate() {
            let (bi, (ci, _)) = (&boxes[i as usize], cells_of(&boxes[i as usize]));
            for &j in &members[ii + 1..] {
                let bj = &boxes[j as usize];
                if (0..3).any(|k| bi.1[k] < bj.0[k] || bj.1[k] < bi.0[k]) {
                    continue;
                }
                let cj = cells_of(bj).0;
                if [0, 1, 2].map(|k| ci[k].max(cj[k])) != *key {
                    continue;
                }
                pairs += 1;
                match triangle_contact(&tris[i as usize], &tris[j as usize]) {
                    Contact::None => {}
                    Contact::Overlap => {
                        overlap[i as usize] = true;
                        overlap[j as usize] = true;
                    }
                    Contact::Intersect => {
                        intersect[i as usize] = true;
                        intersect[j as usize] = true;
                    }
                }
            }
        }
    }
    ContactStats {
        overlapping: overlap.iter().filter(|&&x| x).count(),
        intersecting: intersect.iter().filter(|&&x| x).count(),
        bad: (0..n).filter(|&f| overlap[f] || intersect[f]).count(),
        candidate_pairs: pairs,
    }
}
