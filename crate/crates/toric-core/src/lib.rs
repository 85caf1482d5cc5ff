//! Scalar-flat toric Kahler metric families built from labeled polygons.
//!
//! The crate is organized as a pipeline:
//!
//! * [`polygon`] — labeled polygon data, validation, classification;
//! * [`momentum`] — closed-form momentum maps and exact Jacobians on the
//!   upper half-plane;
//! * [`geometry`] — reduced metric blocks, Christoffel symbols, scalar and
//!   Gaussian curvature, conformal cross-checks;
//! * [`potentials`] — closed-form potentials (unit disk, quadratic),
//!   Legendre transforms, geodesic-length bounds;
//! * [`asymptotics`] — model-comparison quotients, decay fits, Killing-field
//!   norms, and completeness criteria.
//!
//! Everything evaluates pointwise and is reentrant; grid sweeps can be
//! partitioned across threads arbitrarily without changing results.

pub mod asymptotics;
pub mod geometry;
pub mod linalg;
pub mod momentum;
pub mod polygon;
pub mod potentials;

pub use asymptotics::{
    closedness_criteria, comparison_quotient, fit_decay, killing_norm_polar, leading_coefficient,
    ClosednessVerdict, DecayFit, PolarBranch, PolarProfile,
};
pub use geometry::{
    reduced_metric, sample_grid, scalar_curvature_4d, FieldSample, GeometryError, GridSpec,
    MetricBlocks,
};
pub use linalg::Mat2;
pub use momentum::{h2s2_forward, h2s2_inverse, taubnut_det_closed_form, MomentumMap};
pub use potentials::{
    disk_example, hodograph_check, legendre_transform, segment_length_bound, DiskPotential,
    QuadraticPotential, SymplecticPotential,
};
pub use polygon::{
    boundary_image, classify_asymptotic_family, classify_polygon, validate_polygon,
    AsymptoticFamily, FamilyTag, LabeledPolygon, PolygonClass, PolygonError, PolygonKind,
    ValidationReport,
};
