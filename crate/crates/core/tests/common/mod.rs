//! Independent oracles shared by the integration tests.
//!
//! Nothing here calls into the code under test beyond plain data types.

#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};

use num::{BigInt, BigRational, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use ripple_mesh::mesh::QuantizedMesh;

pub type Tri = [[u16; 3]; 3];

/// One emitted face in the queue simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct SimFace {
    /// Corner coordinates in emission order.
    pub corners: [[u16; 3]; 3],
    pub root: Option<usize>,
    /// Literal queue contents when the face was emitted: the dequeued
    /// root followed by everything still waiting behind it.
    pub queue: Vec<usize>,
}

/// Literal FIFO traversal over a prepared mesh, written against the face
/// list only. Faces are identified by their index in `mesh.faces`.
pub fn queue_simulation(mesh: &QuantizedMesh) -> Vec<SimFace> {
    // directed edge -> faces owning it, ascending
    let mut owners: HashMap<(u32, u32), Vec<usize>> = HashMap::new();
    for (f, t) in mesh.faces.iter().enumerate() {
        for k in 0..3 {
            owners.entry((t[k], t[(k + 1) % 3])).or_default().push(f);
        }
    }
    let key = |v: u32| {
        let p = mesh.vertices[v as usize];
        (p[2], p[1], p[0])
    };
    let rotate = |f: usize, start: u32| {
        let t = mesh.faces[f];
        let k = (0..3).find(|&k| t[k] == start).unwrap();
        [t[k], t[(k + 1) % 3], t[(k + 2) % 3]]
    };

    let mut out: Vec<SimFace> = Vec::new();
    let mut seen = vec![false; mesh.faces.len()];
    // (face ordinal, its corners as emitted)
    let mut queue: VecDeque<(usize, [u32; 3])> = VecDeque::new();
    let coords = |c: [u32; 3]| c.map(|v| mesh.vertices[v as usize]);

    for seed in 0..mesh.faces.len() {
        if seen[seed] {
            continue;
        }
        seen[seed] = true;
        let t = mesh.faces[seed];
        let start = *t.iter().min_by_key(|&&v| key(v)).unwrap();
        let corners = rotate(seed, start);
        queue.push_back((out.len(), corners));
        out.push(SimFace {
            corners: coords(corners),
            root: None,
            queue: Vec::new(),
        });

        while let Some((ord, [a, b, c])) = queue.pop_front() {
            // edges c->a, b->c, a->b; a neighbour owns the reversed edge
            for (x, y) in [(c, a), (b, c), (a, b)] {
                for &g in owners.get(&(y, x)).map(Vec::as_slice).unwrap_or(&[]) {
                    if seen[g] {
                        continue;
                    }
                    seen[g] = true;
                    let mut snapshot = vec![ord];
                    snapshot.extend(queue.iter().map(|e| e.0));
                    let corners = rotate(g, y);
                    queue.push_back((out.len(), corners));
                    out.push(SimFace {
                        corners: coords(corners),
                        root: Some(ord),
                        queue: snapshot,
                    });
                }
            }
        }
    }
    out
}

fn q(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

type P3 = [BigRational; 3];

fn p3(p: [u16; 3]) -> P3 {
    p.map(|x| q(x as i64))
}

fn sub(a: &P3, b: &P3) -> P3 {
    [&a[0] - &b[0], &a[1] - &b[1], &a[2] - &b[2]]
}

fn cross(a: &P3, b: &P3) -> P3 {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

fn dot(a: &P3, b: &P3) -> BigRational {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

fn is_zero(v: &P3) -> bool {
    v.iter().all(Zero::is_zero)
}

/// True when `p`, known to lie in the triangle's plane, is strictly
/// inside it.
fn strictly_inside(t: &[P3; 3], p: &P3) -> bool {
    let n = cross(&sub(&t[1], &t[0]), &sub(&t[2], &t[0]));
    (0..3).all(|k| {
        let u = sub(&t[(k + 1) % 3], p);
        let w = sub(&t[(k + 2) % 3], p);
        dot(&n, &cross(&u, &w)).is_positive()
    })
}

/// Points of the closed triangle `t` on the plane `(n, o)`.
fn closed_chord(t: &[P3; 3], n: &P3, o: &P3) -> Vec<P3> {
    let s: Vec<BigRational> = t.iter().map(|p| dot(n, &sub(p, o))).collect();
    let mut pts = Vec::new();
    for k in 0..3 {
        let j = (k + 1) % 3;
        if s[k].is_zero() {
            pts.push(t[k].clone());
        } else if (s[k].is_positive() && s[j].is_negative()) || (s[k].is_negative() && s[j].is_positive()) {
            let w = &s[k] / (&s[k] - &s[j]);
            let d = sub(&t[j], &t[k]);
            pts.push([0, 1, 2].map(|i| &t[k][i] + &w * &d[i]));
        }
    }
    pts
}

/// Whether the relative interiors of two triangles share a point, by exact
/// rational geometry: clip both planes' chords along the common line and
/// test the midpoint of their overlap with strict barycentric signs.
/// Coplanar pairs go to [`coplanar_overlap_area`].
pub fn interiors_meet(a: &Tri, b: &Tri) -> bool {
    let ta = a.map(p3);
    let tb = b.map(p3);
    let na = cross(&sub(&ta[1], &ta[0]), &sub(&ta[2], &ta[0]));
    let nb = cross(&sub(&tb[1], &tb[0]), &sub(&tb[2], &tb[0]));
    if is_zero(&na) || is_zero(&nb) {
        return false;
    }
    if tb.iter().all(|p| dot(&na, &sub(p, &ta[0])).is_zero()) {
        return coplanar_overlap_area(a, b).is_positive();
    }
    let dir = cross(&na, &nb);
    if is_zero(&dir) {
        return false; // parallel planes
    }
    let ca = closed_chord(&ta, &nb, &tb[0]);
    let cb = closed_chord(&tb, &na, &ta[0]);
    if ca.is_empty() || cb.is_empty() {
        return false;
    }
    let span = |c: &[P3]| {
        let mut v: Vec<(BigRational, P3)> = c.iter().map(|p| (dot(p, &dir), p.clone())).collect();
        v.sort_by(|x, y| x.0.cmp(&y.0));
        (v[0].clone(), v[v.len() - 1].clone())
    };
    let ((alo, alo_p), (ahi, ahi_p)) = span(&ca);
    let ((blo, blo_p), (bhi, bhi_p)) = span(&cb);
    let (lo, lo_p) = if alo >= blo { (alo, alo_p) } else { (blo, blo_p) };
    let (hi, hi_p) = if ahi <= bhi { (ahi, ahi_p) } else { (bhi, bhi_p) };
    if lo > hi {
        return false;
    }
    let two = q(2);
    let mid: P3 = [0, 1, 2].map(|i| (&lo_p[i] + &hi_p[i]) / &two);
    strictly_inside(&ta, &mid) && strictly_inside(&tb, &mid)
}

type P2 = [BigRational; 2];

fn cross2(o: &P2, a: &P2, b: &P2) -> BigRational {
    (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
}

fn shoelace(poly: &[P2]) -> BigRational {
    let mut s = q(0);
    for k in 0..poly.len() {
        let (p, r) = (&poly[k], &poly[(k + 1) % poly.len()]);
        s += &p[0] * &r[1] - &r[0] * &p[1];
    }
    s / q(2)
}

/// Area of the intersection of two coplanar triangles, by
/// Sutherland-Hodgman clipping in the dominant projection plane. Zero for
/// degenerate input.
pub fn coplanar_overlap_area(a: &Tri, b: &Tri) -> BigRational {
    let n = {
        let t = a.map(|p| p.map(|x| x as i64));
        let u = [0, 1, 2].map(|k| t[1][k] - t[0][k]);
        let v = [0, 1, 2].map(|k| t[2][k] - t[0][k]);
        [
            u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        ]
    };
    let drop = (0..3).max_by_key(|&k| n[k].abs()).unwrap();
    let (i, j) = ((drop + 1) % 3, (drop + 2) % 3);
    let proj = |t: &Tri| -> Vec<P2> {
        let mut v: Vec<P2> = t.iter().map(|p| [q(p[i] as i64), q(p[j] as i64)]).collect();
        if shoelace(&v).is_negative() {
            v.reverse();
        }
        v
    };
    let subject = proj(a);
    let clip = proj(b);
    if shoelace(&subject).is_zero() || shoelace(&clip).is_zero() {
        return q(0);
    }
    let mut poly = subject;
    for k in 0..3 {
        let (e0, e1) = (&clip[k], &clip[(k + 1) % 3]);
        let input = std::mem::take(&mut poly);
        for m in 0..input.len() {
            let (cur, nxt) = (&input[m], &input[(m + 1) % input.len()]);
            let (sc, sn) = (cross2(e0, e1, cur), cross2(e0, e1, nxt));
            if !sc.is_negative() {
                poly.push(cur.clone());
            }
            if (sc.is_positive() && sn.is_negative()) || (sc.is_negative() && sn.is_positive()) {
                let w = &sc / (&sc - &sn);
                poly.push([0, 1].map(|c| &cur[c] + &w * (&nxt[c] - &cur[c])));
            }
        }
        if poly.is_empty() {
            return q(0);
        }
    }
    shoelace(&poly).abs()
}

/// Random coplanar pair: both triangles on `z = a·x + b·y + c`.
pub fn coplanar_pair(rng: &mut ChaCha8Rng) -> (Tri, Tri) {
    let (a, b) = (rng.random_range(0..3u16), rng.random_range(0..3u16));
    let c = rng.random_range(0..4u16);
    let mut tri = || {
        [0; 3].map(|_| {
            let (x, y) = (rng.random_range(0..7u16), rng.random_range(0..7u16));
            [x, y, a * x + b * y + c]
        })
    };
    (tri(), tri())
}

/// Random pair on a tiny grid, so touching and coplanar cases are common.
pub fn small_pair(rng: &mut ChaCha8Rng) -> (Tri, Tri) {
    let mut p = || [0; 3].map(|_| rng.random_range(0..4u16));
    let a: Tri = [p(), p(), p()];
    let mut b: Tri = [p(), p(), p()];
    // share a corner or an edge half the time
    match rng.random_range(0..4) {
        0 => b[0] = a[1],
        1 => {
            b[0] = a[1];
            b[1] = a[0];
        }
        _ => {}
    }
    (a, b)
}
