//! Procedural meshes: closed surfaces, open patches, non-manifold and
//! multi-component assemblies. All surfaces are wound counterclockwise
//! seen from outside.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::mesh::RawMesh;

fn normalize(p: [f64; 3]) -> [f64; 3] {
    let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    p.map(|c| c / n)
}

/// Unit icosphere; `level` subdivisions of the icosahedron (20·4^level faces).
pub fn icosphere(level: u32) -> RawMesh {
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let mut vertices: Vec<[f64; 3]> = [
        [-1.0, t, 0.0],
        [1.0, t, 0.0],
        [-1.0, -t, 0.0],
        [1.0, -t, 0.0],
        [0.0, -1.0, t],
        [0.0, 1.0, t],
        [0.0, -1.0, -t],
        [0.0, 1.0, -t],
        [t, 0.0, -1.0],
        [t, 0.0, 1.0],
        [-t, 0.0, -1.0],
        [-t, 0.0, 1.0],
    ]
    .into_iter()
    .map(normalize)
    .collect();
    let mut faces: Vec<[u32; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..level {
        let mut mid: HashMap<(u32, u32), u32> = HashMap::new();
        let mut midpoint = |a: u32, b: u32, vertices: &mut Vec<[f64; 3]>| -> u32 {
            *mid.entry((a.min(b), a.max(b))).or_insert_with(|| {
                let (p, q) = (vertices[a as usize], vertices[b as usize]);
                vertices.push(normalize([0, 1, 2].map(|i| 0.5 * (p[i] + q[i]))));
                (vertices.len() - 1) as u32
            })
        };
        let mut next = Vec::with_capacity(faces.len() * 4);
        for [a, b, c] in faces {
            let ab = midpoint(a, b, &mut vertices);
            let bc = midpoint(b, c, &mut vertices);
            let ca = midpoint(c, a, &mut vertices);
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }
    RawMesh { vertices, faces }
}

/// Torus around the z axis with `2·major·minor` faces.
pub fn torus(major: u32, minor: u32, radius: f64, tube: f64) -> RawMesh {
    let mut vertices = Vec::with_capacity((major * minor) as usize);
    for i in 0..major {
        let u = TAU * i as f64 / major as f64;
        for j in 0..minor {
            let v = TAU * j as f64 / minor as f64;
            let r = radius + tube * v.cos();
            vertices.push([r * u.cos(), r * u.sin(), tube * v.sin()]);
        }
    }
    let idx = |i: u32, j: u32| (i % major) * minor + (j % minor);
    let mut faces = Vec::with_capacity((2 * major * minor) as usize);
    for i in 0..major {
        for j in 0..minor {
            let (a, b, c, d) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
            faces.push([a, b, c]);
            faces.push([a, c, d]);
        }
    }
    RawMesh { vertices, faces }
}

/// Flat `nx × ny` quad grid in the z = 0 plane, split into triangles.
pub fn grid_patch(nx: u32, ny: u32) -> RawMesh {
    let mut vertices = Vec::new();
    for j in 0..=ny {
        for i in 0..=nx {
            vertices.push([i as f64, j as f64, 0.0]);
        }
    }
    let idx = |i: u32, j: u32| j * (nx + 1) + i;
    let mut faces = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            let (a, b, c, d) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
            faces.push([a, b, c]);
            faces.push([a, c, d]);
        }
    }
    RawMesh { vertices, faces }
}

/// Grid patch with a gentle height field, so it is not coplanar.
pub fn wavy_patch(nx: u32, ny: u32, amplitude: f64) -> RawMesh {
    let mut m = grid_patch(nx, ny);
    for v in &mut m.vertices {
        v[2] = amplitude * (0.7 * v[0]).sin() * (0.5 * v[1]).cos();
    }
    m
}

/// Open cylinder (no caps) with `2·segments·rings` faces.
pub fn open_cylinder(segments: u32, rings: u32, height: f64) -> RawMesh {
    let mut vertices = Vec::new();
    for r in 0..=rings {
        let z = height * r as f64 / rings as f64;
        for s in 0..segments {
            let a = TAU * s as f64 / segments as f64;
            vertices.push([a.cos(), a.sin(), z]);
        }
    }
    let idx = |s: u32, r: u32| r * segments + s % segments;
    let mut faces = Vec::new();
    for r in 0..rings {
        for s in 0..segments {
            let (a, b, c, d) = (idx(s, r), idx(s + 1, r), idx(s + 1, r + 1), idx(s, r + 1));
            faces.push([a, b, c]);
            faces.push([a, c, d]);
        }
    }
    RawMesh { vertices, faces }
}

/// `pages` quads hinged on the spine from (0,0,0) to (0,0,1), with
/// alternating winding so the spine edge carries several opposite pairs.
pub fn book(pages: u32) -> RawMesh {
    let mut vertices = vec![[0.0, 0.0, 0.0], [0.0, 0.0, 1.0]];
    let mut faces = Vec::new();
    for p in 0..pages {
        let a = PI * (p as f64 + 0.5) / pages as f64;
        let (x, y) = (a.cos(), a.sin());
        let base = vertices.len() as u32;
        vertices.push([x, y, 0.0]);
        vertices.push([x, y, 1.0]);
        let page = [[0, base, base + 1], [0, base + 1, 1]];
        for f in page {
            faces.push(if p % 2 == 0 { f } else { [f[0], f[2], f[1]] });
        }
    }
    RawMesh { vertices, faces }
}

/// Two cones touching apex to apex; the shared vertex is the only link.
pub fn double_cone(segments: u32) -> RawMesh {
    let mut vertices = vec![[0.0, 0.0, 0.0]];
    let mut faces = Vec::new();
    for (side, z) in [(0u32, 1.0), (1, -1.0)] {
        let base = vertices.len() as u32;
        for s in 0..segments {
            let a = TAU * s as f64 / segments as f64;
            vertices.push([a.cos(), a.sin(), z]);
        }
        for s in 0..segments {
            let (b, c) = (base + s, base + (s + 1) % segments);
            faces.push(if side == 0 { [0, c, b] } else { [0, b, c] });
        }
    }
    RawMesh { vertices, faces }
}

/// Möbius strip; no consistent winding exists.
pub fn mobius_strip(segments: u32) -> RawMesh {
    let mut vertices = Vec::new();
    for s in 0..segments {
        let u = TAU * s as f64 / segments as f64;
        for w in [-0.3, 0.3] {
            let r = 1.0 + w * (u / 2.0).cos();
            vertices.push([r * u.cos(), r * u.sin(), w * (u / 2.0).sin()]);
        }
    }
    let mut faces = Vec::new();
    for s in 0..segments {
        let (a, b) = (2 * s, 2 * s + 1);
        let (c, d) = if s + 1 == segments {
            (1, 0) // half twist
        } else {
            (2 * s + 2, 2 * s + 3)
        };
        faces.push([a, c, d]);
        faces.push([a, d, b]);
    }
    RawMesh { vertices, faces }
}

pub fn tetrahedron() -> RawMesh {
    RawMesh {
        vertices: vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        faces: vec![[0, 2, 1], [0, 1, 3], [0, 3, 2], [1, 2, 3]],
    }
}

/// `n` separate small shapes scattered on a jittered grid.
pub fn assembly(n: u32, seed: u64) -> RawMesh {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let side = (n as f64).sqrt().ceil() as u32;
    let mut out = RawMesh::default();
    for k in 0..n {
        let part = match rng.random_range(0..3) {
            0 => icosphere(1),
            1 => torus(8, 5, 1.0, 0.35),
            _ => tetrahedron(),
        };
        let s = rng.random_range(0.5..0.9);
        let offset = [
            3.0 * (k % side) as f64 + rng.random_range(-0.3..0.3),
            3.0 * (k / side) as f64 + rng.random_range(-0.3..0.3),
            rng.random_range(-0.5..0.5),
        ];
        let placed = RawMesh {
            vertices: part
                .vertices
                .iter()
                .map(|p| [0, 1, 2].map(|a| p[a] * s + offset[a]))
                .collect(),
            faces: part.faces,
        };
        out.append(&placed);
    }
    out
}

/// Named procedural test corpus (more than 50 meshes).
pub fn procedural_corpus() -> Vec<(String, RawMesh)> {
    let mut out = Vec::new();
    for level in 1..=3 {
        out.push((format!("icosphere_l{level}"), icosphere(level)));
    }
    for (i, &(maj, min, r)) in [
        (8, 6, 0.3),
        (12, 8, 0.35),
        (16, 8, 0.25),
        (24, 12, 0.4),
        (32, 16, 0.3),
        (20, 10, 0.45),
        (40, 12, 0.2),
        (48, 24, 0.3),
    ]
    .iter()
    .enumerate()
    {
        out.push((format!("torus_{i}"), torus(maj, min, 1.0, r)));
    }
    for &(nx, ny) in &[(1, 1), (2, 3), (5, 5), (10, 10), (16, 4), (20, 20), (30, 12)] {
        out.push((format!("grid_{nx}x{ny}"), grid_patch(nx, ny)));
    }
    for &(nx, ny) in &[(8, 8), (25, 15)] {
        out.push((format!("wavy_{nx}x{ny}"), wavy_patch(nx, ny, 0.8)));
    }
    for &(s, r) in &[(6, 1), (12, 4), (24, 8), (32, 20), (48, 6)] {
        out.push((format!("cylinder_{s}x{r}"), open_cylinder(s, r, 1.5)));
    }
    for pages in [3, 4, 5] {
        out.push((format!("book_{pages}"), book(pages)));
    }
    for s in [6, 16] {
        out.push((format!("double_cone_{s}"), double_cone(s)));
    }
    out.push(("mobius_24".into(), mobius_strip(24)));
    out.push(("tetrahedron".into(), tetrahedron()));
    for (i, n) in [2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 14, 16, 18, 20].into_iter().enumerate() {
        out.push((format!("assembly_{n}"), assembly(n, 1000 + i as u64)));
    }
    for seed in 0..6 {
        out.push((
            format!("assembly_mixed_{seed}"),
            assembly(2 + (seed as u32 * 3) % 19, seed),
        ));
    }
    out
}
