use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::intersect::{contact_faces, ContactStats};
use crate::error::{Error, Result};
use crate::mesh::{prepare, HalfEdgeStructure, QuantizedMesh, RawMesh};
use crate::tokenizer::{compression_stats, tokenize, ControlVocab, TokenSequence};

/// Grid resolution standing in for the unquantized mesh when counting
/// contacts that quantization introduced.
pub const REFERENCE_BINS: u32 = 65535;

/// Thresholds of the curation filter. Every limit is inclusive except
/// `bfs_displacement_max`, which Δ must stay strictly below.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FilterConfig {
    pub face_count_range: [usize; 2],
    pub vertex_face_ratio_max: f64,
    pub narrow_angle_deg: f64,
    pub narrow_face_frac_max: f64,
    pub bfs_displacement_max: u32,
    pub boundary_len_max: usize,
    pub components_max: usize,
    pub prune_cluster_faces: usize,
    pub prune_distance: f64,
    pub merge_vertex_drop_max: f64,
    pub bad_face_frac_max: f64,
    pub bins: u32,
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig {
            face_count_range: [500, 20_000],
            vertex_face_ratio_max: 0.8,
            narrow_angle_deg: 5.0,
            narrow_face_frac_max: 0.20,
            bfs_displacement_max: 100,
            boundary_len_max: 500,
            components_max: 20,
            prune_cluster_faces: 10,
            prune_distance: 0.05,
            merge_vertex_drop_max: 0.50,
            bad_face_frac_max: 0.10,
            bins: 256,
        }
    }
}

impl FilterConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            self.vertex_face_ratio_max,
            self.narrow_angle_deg,
            self.narrow_face_frac_max,
            self.prune_distance,
            self.merge_vertex_drop_max,
            self.bad_face_frac_max,
        ]
        .iter()
        .all(|&x| x > 0.0 && x.is_finite())
            && self.bfs_displacement_max > 0
            && self.boundary_len_max > 0
            && self.components_max > 0
            && self.prune_cluster_faces > 0;
        if !positive {
            return Err(Error::InvalidConfig("filter thresholds must be positive".into()));
        }
        if self.face_count_range[0] > self.face_count_range[1] {
            return Err(Error::InvalidConfig("face count range is reversed".into()));
        }
        if !(2..=u16::MAX as u32).contains(&self.bins) {
            return Err(Error::InvalidConfig(format!("bins {} out of range", self.bins)));
        }
        Ok(())
    }

    /// Reads a JSON file; missing keys keep their defaults.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let cfg: FilterConfig = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: String,
    pub passed: bool,
}

/// Supporting measurements that are not themselves checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterDetails {
    pub faces_after_sanitize: usize,
    pub vertices_after_sanitize: usize,
    pub components_before_pruning: usize,
    pub pruned_clusters: usize,
    /// Total length of boundary edges, in normalized units.
    pub boundary_length: f64,
    pub max_root_distance: u32,
    pub overlapping_faces: usize,
    pub intersecting_faces: usize,
    pub bad_faces: usize,
    /// Bad faces already present at the reference resolution.
    pub reference_bad_faces: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterReport {
    pub passed: bool,
    pub checks: Vec<Check>,
    pub details: FilterDetails,
    pub elapsed_ms: f64,
}

impl FilterReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// The checks that failed.
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn at_most(name: &str, value: f64, max: f64) -> Check {
    Check {
        name: name.into(),
        value,
        threshold: format!("<= {max}"),
        passed: value <= max,
    }
}

/// Smallest interior angle, in degrees.
pub fn min_angle_deg(t: [[f64; 3]; 3]) -> f64 {
    (0..3)
        .map(|k| {
            let (p, q, r) = (t[k], t[(k + 1) % 3], t[(k + 2) % 3]);
            let u = [0, 1, 2].map(|c| q[c] - p[c]);
            let w = [0, 1, 2].map(|c| r[c] - p[c]);
            let d = u[0] * w[0] + u[1] * w[1] + u[2] * w[2];
            let c = [
                u[1] * w[2] - u[2] * w[1],
                u[2] * w[0] - u[0] * w[2],
                u[0] * w[1] - u[1] * w[0],
            ];
            let s = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
            s.atan2(d).to_degrees()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Faces whose smallest angle is below `deg`, measured on the grid.
pub fn narrow_faces(mesh: &QuantizedMesh, deg: f64) -> usize {
    (0..mesh.faces.len())
        .filter(|&f| min_angle_deg(mesh.face_vertices(f).map(|p| p.map(f64::from))) < deg)
        .count()
}

/// Components after discarding small clusters that sit close to a large one.
///
/// Components are the tokenizer's. A cluster with fewer than
/// `min_faces` faces is pruned when its centroid lies within `distance`
/// (normalized units) of the bounding box of a component that has at
/// least `min_faces` faces. Returns `(count, pruned)`.
pub fn pruned_component_count(seq: &TokenSequence, min_faces: usize, distance: f64) -> (usize, usize) {
    let bins = seq.bins() as f64;
    let n = seq.face_count();
    let seeds: Vec<usize> = seq.seeds().chain([n]).collect();
    let ranges: Vec<_> = seeds.windows(2).map(|w| w[0]..w[1]).collect();
    let grid = |p: [u16; 3]| p.map(|c| (c as f64 + 0.5) / bins);

    let mut large = Vec::new();
    let mut small = Vec::new();
    for r in ranges {
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        let mut sum = [0.0; 3];
        for i in r.clone() {
            for p in seq.face_vertices(i).map(grid) {
                for k in 0..3 {
                    lo[k] = lo[k].min(p[k]);
                    hi[k] = hi[k].max(p[k]);
                    sum[k] += p[k] / 3.0;
                }
            }
        }
        if r.len() >= min_faces {
            large.push((lo, hi));
        } else {
            small.push(sum.map(|s| s / r.len() as f64));
        }
    }
    let pruned = small
        .iter()
        .filter(|c| {
            large.iter().any(|(lo, hi)| {
                let d2: f64 = (0..3)
                    .map(|k| {
                        let e = (lo[k] - c[k]).max(c[k] - hi[k]).max(0.0);
                        e * e
                    })
                    .sum();
                d2.sqrt() <= distance
            })
        })
        .count();
    (large.len() + small.len() - pruned, pruned)
}

/// Runs every check on one mesh. The verdict is their conjunction.
pub fn filter_mesh(raw: &RawMesh, cfg: &FilterConfig) -> Result<FilterReport> {
    cfg.validate()?;
    let start = Instant::now();
    let (mesh, report) = prepare(raw, cfg.bins)?;
    let structure = HalfEdgeStructure::build(&mesh);
    let seq = tokenize(&structure, &ControlVocab::new(cfg.bins)?);
    let stats = compression_stats(&seq);
    let faces = mesh.faces.len();
    let mut checks = Vec::with_capacity(8);

    let [lo, hi] = cfg.face_count_range;
    let raw_faces = raw.faces.len();
    checks.push(Check {
        name: "face_count".into(),
        value: raw_faces as f64,
        threshold: format!("in [{lo}, {hi}]"),
        passed: (lo..=hi).contains(&raw_faces),
    });

    checks.push(at_most(
        "vertex_face_ratio",
        mesh.vertices.len() as f64 / faces as f64,
        cfg.vertex_face_ratio_max,
    ));

    checks.push(at_most(
        "narrow_face_fraction",
        narrow_faces(&mesh, cfg.narrow_angle_deg) as f64 / faces as f64,
        cfg.narrow_face_frac_max,
    ));

    let (components, pruned) = pruned_component_count(&seq, cfg.prune_cluster_faces, cfg.prune_distance);
    checks.push(at_most("components", components as f64, cfg.components_max as f64));

    let boundary: Vec<u32> = structure.boundary_half_edges().collect();
    let boundary_length = boundary
        .iter()
        .map(|&h| {
            let a = mesh.vertices[structure.get(h).origin as usize];
            let b = mesh.vertices[structure.destination(h) as usize];
            let d2: f64 = (0..3).map(|k| (a[k] as f64 - b[k] as f64).powi(2)).sum();
            d2.sqrt() / cfg.bins as f64
        })
        .sum();
    checks.push(at_most(
        "boundary_length",
        boundary.len() as f64,
        cfg.boundary_len_max as f64,
    ));

    checks.push(Check {
        name: "bfs_displacement".into(),
        value: stats.max_delta as f64,
        threshold: format!("< {}", cfg.bfs_displacement_max),
        passed: stats.max_delta < cfg.bfs_displacement_max,
    });

    checks.push(at_most(
        "vertex_merge_drop",
        report.sanitize.vertex_drop_ratio,
        cfg.merge_vertex_drop_max,
    ));

    let contacts = contact_faces(&mesh);
    let reference = match prepare(raw, REFERENCE_BINS) {
        Ok((fine, _)) => contact_faces(&fine),
        Err(_) => ContactStats::default(),
    };
    let new_bad = contacts.bad.saturating_sub(reference.bad);
    checks.push(at_most(
        "bad_face_fraction",
        new_bad as f64 / faces as f64,
        cfg.bad_face_frac_max,
    ));

    Ok(FilterReport {
        passed: checks.iter().all(|c| c.passed),
        checks,
        details: FilterDetails {
            faces_after_sanitize: faces,
            vertices_after_sanitize: mesh.vertices.len(),
            components_before_pruning: stats.components,
            pruned_clusters: pruned,
            boundary_length,
            max_root_distance: stats.max_root_distance,
            overlapping_faces: contacts.overlapping,
            intersecting_faces: contacts.intersecting,
            bad_faces: contacts.bad,
            reference_bad_faces: reference.bad,
        },
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// One CSV row of a corpus summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub mesh: String,
    pub passed: bool,
    pub face_count: f64,
    pub vertex_face_ratio: f64,
    pub narrow_face_fraction: f64,
    pub components: f64,
    pub boundary_length: f64,
    pub bfs_displacement: f64,
    pub vertex_merge_drop: f64,
    pub bad_face_fraction: f64,
}

impl SummaryRow {
    pub fn new(mesh: impl Into<String>, report: &FilterReport) -> Self {
        let v = |name: &str| report.check(name).map_or(f64::NAN, |c| c.value);
        SummaryRow {
            mesh: mesh.into(),
            passed: report.passed,
            face_count: v("face_count"),
            vertex_face_ratio: v("vertex_face_ratio"),
            narrow_face_fraction: v("narrow_face_fraction"),
            components: v("components"),
            boundary_length: v("boundary_length"),
            bfs_displacement: v("bfs_displacement"),
            vertex_merge_drop: v("vertex_merge_drop"),
            bad_face_fraction: v("bad_face_fraction"),
        }
    }
}

pub fn write_summary(rows: &[SummaryRow], out: impl std::io::Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(|e| Error::Format(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}
