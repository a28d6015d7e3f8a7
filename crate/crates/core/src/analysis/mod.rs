//! Dataset curation filters and surface comparison metrics.

mod filter;
pub mod intersect;
mod metrics;

pub use filter::{
    filter_mesh, min_angle_deg, narrow_faces, pruned_component_count, write_summary, Check, FilterConfig,
    FilterDetails, FilterReport, SummaryRow, REFERENCE_BINS,
};
pub use intersect::{contact_faces, coplanar_overlap, triangle_contact, triangles_intersect, Contact, ContactStats};
pub use metrics::{evaluate, sample_surface, ChamferMode, EvalConfig, Metrics, SurfaceSamples, DEFAULT_SAMPLES};
