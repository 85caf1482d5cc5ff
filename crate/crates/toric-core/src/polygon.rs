//! Labeled polygons: the combinatorial data from which every metric family
//! in this crate is built.
//!
//! A labeled polygon consists of strictly increasing boundary parameters
//! `x_1 < ... < x_d` (the Lipschitz points of the boundary map), one vertex
//! `p_i = (m_i, n_i)` per parameter, two positive ray labels `s_0`, `s_d`,
//! and free parameters `alpha, beta >= 0`. The boundary polyline is the left
//! ray, the vertex chain, and the right ray; convexity of that polyline is
//! what makes the associated potential convex.

use crate::linalg::{cross, norm};
use crate::momentum::MomentumMap;
use thiserror::Error;

/// Which closed-form momentum family the polygon data feeds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyTag {
    General,
    ParallelRay,
    TaubNut,
    R2S2Model,
}

impl FamilyTag {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyTag::General => "general",
            FamilyTag::ParallelRay => "parallel_ray",
            FamilyTag::TaubNut => "taub_nut",
            FamilyTag::R2S2Model => "r2s2_model",
        }
    }

    pub fn from_name(s: &str) -> Option<FamilyTag> {
        match s {
            "general" => Some(FamilyTag::General),
            "parallel_ray" => Some(FamilyTag::ParallelRay),
            "taub_nut" => Some(FamilyTag::TaubNut),
            "r2s2_model" => Some(FamilyTag::R2S2Model),
            _ => None,
        }
    }

    pub const ALL_NAMES: [&'static str; 4] =
        ["general", "parallel_ray", "taub_nut", "r2s2_model"];
}

#[derive(Clone, Debug)]
pub struct LabeledPolygon {
    /// Strictly increasing boundary parameters x_1..x_d.
    pub lipschitz_points: Vec<f64>,
    /// Vertices p_i = (m_i, n_i), one per Lipschitz point.
    pub vertices: Vec<[f64; 2]>,
    /// Left ray label, > 0.
    pub s0: f64,
    /// Right ray label, > 0.
    pub sd: f64,
    pub alpha: f64,
    pub beta: f64,
    pub family: FamilyTag,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolygonError {
    #[error("lipschitz_points[{index}] must exceed lipschitz_points[{}]", index - 1)]
    OrderingViolation { index: usize },
    #[error("vertices[{index}] and vertices[{}] coincide", index + 1)]
    CoincidentVertices { index: usize },
    #[error("ray label {name} must be positive, got {value}")]
    NonPositiveRayLabel { name: &'static str, value: f64 },
    #[error("free parameter {name} must be non-negative, got {value}")]
    NegativeFreeParameter { name: &'static str, value: f64 },
    #[error("vertex count {vertices} does not match lipschitz point count {points}")]
    VertexCountMismatch { vertices: usize, points: usize },
    #[error("non-finite value in {field}[{index}]")]
    NonFinite { field: &'static str, index: usize },
    #[error("family {family} requires {requirement}")]
    FamilyMismatch {
        family: &'static str,
        requirement: &'static str,
    },
    #[error("compact polygons admit no scalar-flat family")]
    CompactRejected,
}

/// Everything `validate_polygon` learned. Validation is total: problems are
/// collected in `errors` rather than short-circuiting.
#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    /// Derived edge labels s_i = |p_{i+1} - p_i| / (x_{i+1} - x_i).
    pub edge_labels: Vec<f64>,
    pub convex: bool,
    pub warnings: Vec<String>,
    pub errors: Vec<PolygonError>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.errors.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolygonKind {
    General,
    ParallelRay,
    HalfPlane,
    Strip,
    Plane,
    Compact,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AsymptoticFamily {
    Ale,
    Alf,
    AlfLike,
    Exceptional,
    R2xS2,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PolygonClass {
    pub kind: PolygonKind,
    pub asymptotic_family: AsymptoticFamily,
}

/// Collects every invariant violation in the polygon data, derives the edge
/// labels, and decides convexity of the boundary polyline (rays included).
pub fn validate_polygon(poly: &LabeledPolygon) -> ValidationReport {
    let mut rep = ValidationReport::default();
    let d = poly.lipschitz_points.len();

    if poly.vertices.len() != d {
        rep.errors.push(PolygonError::VertexCountMismatch {
            vertices: poly.vertices.len(),
            points: d,
        });
    }
    for (i, x) in poly.lipschitz_points.iter().enumerate() {
        if !x.is_finite() {
            rep.errors.push(PolygonError::NonFinite {
                field: "lipschitz_points",
                index: i,
            });
        }
    }
    for (i, p) in poly.vertices.iter().enumerate() {
        if !p[0].is_finite() || !p[1].is_finite() {
            rep.errors.push(PolygonError::NonFinite {
                field: "vertices",
                index: i,
            });
        }
    }
    for i in 1..d {
        if poly.lipschitz_points[i] <= poly.lipschitz_points[i - 1] {
            rep.errors.push(PolygonError::OrderingViolation { index: i });
        }
    }
    if !(poly.s0 > 0.0) {
        rep.errors.push(PolygonError::NonPositiveRayLabel {
            name: "s0",
            value: poly.s0,
        });
    }
    if !(poly.sd > 0.0) {
        rep.errors.push(PolygonError::NonPositiveRayLabel {
            name: "sd",
            value: poly.sd,
        });
    }
    if !(poly.alpha >= 0.0) {
        rep.errors.push(PolygonError::NegativeFreeParameter {
            name: "alpha",
            value: poly.alpha,
        });
    }
    if !(poly.beta >= 0.0) {
        rep.errors.push(PolygonError::NegativeFreeParameter {
            name: "beta",
            value: poly.beta,
        });
    }

    if let Err(e) = family_requirements(poly) {
        rep.errors.push(e);
    }
    if poly.family == FamilyTag::ParallelRay && poly.beta != 0.0 {
        rep.warnings
            .push("beta is ignored by the parallel_ray family".to_string());
    }

    // Edge labels and coincidence checks only make sense on well-shaped data.
    let shaped = poly.vertices.len() == d && rep.errors.iter().all(|e| {
        !matches!(
            e,
            PolygonError::OrderingViolation { .. } | PolygonError::NonFinite { .. }
        )
    });
    if shaped {
        for i in 0..d.saturating_sub(1) {
            let dx = poly.lipschitz_points[i + 1] - poly.lipschitz_points[i];
            let dp = [
                poly.vertices[i + 1][0] - poly.vertices[i][0],
                poly.vertices[i + 1][1] - poly.vertices[i][1],
            ];
            let len = norm(dp);
            if len == 0.0 {
                rep.errors.push(PolygonError::CoincidentVertices { index: i });
            }
            rep.edge_labels.push(len / dx);
        }
        rep.convex = convexity_verdict(poly, &mut rep.warnings);
    }
    rep
}

fn family_requirements(poly: &LabeledPolygon) -> Result<(), PolygonError> {
    let d = poly.lipschitz_points.len();
    match poly.family {
        FamilyTag::TaubNut => {
            let ok = d == 1
                && poly.lipschitz_points[0] == 0.0
                && poly.vertices.len() == 1
                && poly.vertices[0] == [0.0, 0.0];
            if !ok {
                return Err(PolygonError::FamilyMismatch {
                    family: "taub_nut",
                    requirement: "exactly one Lipschitz point x=0 with vertex (0,0)",
                });
            }
        }
        FamilyTag::R2S2Model => {
            if d != 2 {
                return Err(PolygonError::FamilyMismatch {
                    family: "r2s2_model",
                    requirement: "exactly two Lipschitz points and two vertices",
                });
            }
        }
        FamilyTag::General | FamilyTag::ParallelRay => {
            if d == 0 {
                return Err(PolygonError::FamilyMismatch {
                    family: poly.family.name(),
                    requirement: "at least one Lipschitz point",
                });
            }
        }
    }
    Ok(())
}

/// Signs of consecutive turning cross products along
/// left ray -> edges -> right ray must agree. Zero crosses are collinear
/// edges: accepted, with a warning that they merge.
fn convexity_verdict(poly: &LabeledPolygon, warnings: &mut Vec<String>) -> bool {
    let d = poly.lipschitz_points.len();
    if d == 0 {
        return true;
    }
    let map = match MomentumMap::from_polygon(poly) {
        Ok(m) => m,
        Err(_) => return false,
    };
    let x1 = poly.lipschitz_points[0];
    let xd = poly.lipschitz_points[d - 1];
    let p1 = map.eval_boundary(x1);
    let pd = map.eval_boundary(xd);
    let out_left = sub2(map.eval_boundary(x1 - 1.0), p1);
    let out_right = sub2(map.eval_boundary(xd + 1.0), pd);

    let mut dirs: Vec<[f64; 2]> = Vec::with_capacity(d + 1);
    dirs.push(normalize([-out_left[0], -out_left[1]]));
    for i in 0..d - 1 {
        let e = sub2(poly.vertices[i + 1], poly.vertices[i]);
        let len = norm(e);
        if len == 0.0 {
            return false;
        }
        dirs.push([e[0] / len, e[1] / len]);
    }
    dirs.push(normalize(out_right));

    let mut sign = 0.0_f64;
    for w in dirs.windows(2) {
        let c = cross(w[0], w[1]);
        if c.abs() <= 1e-10 {
            warnings.push("collinear consecutive edges merge into one".to_string());
            continue;
        }
        if sign == 0.0 {
            sign = c.signum();
        } else if c.signum() != sign {
            return false;
        }
    }
    true
}

fn sub2(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

fn normalize(v: [f64; 2]) -> [f64; 2] {
    let n = norm(v);
    if n == 0.0 {
        [0.0, 0.0]
    } else {
        [v[0] / n, v[1] / n]
    }
}

/// Decide the boundary shape from the two ray directions: non-parallel rays
/// give a genuine corner (general), parallel distinct rays a half-strip.
/// Degenerate data collapse to half-plane / strip / plane.
pub fn classify_polygon(poly: &LabeledPolygon) -> PolygonClass {
    let d = poly.lipschitz_points.len();
    if d == 0 {
        return PolygonClass {
            kind: PolygonKind::Plane,
            asymptotic_family: AsymptoticFamily::None,
        };
    }
    let map = match MomentumMap::from_polygon(poly) {
        Ok(m) => m,
        Err(_) => {
            return PolygonClass {
                kind: PolygonKind::Plane,
                asymptotic_family: AsymptoticFamily::None,
            };
        }
    };
    let x1 = poly.lipschitz_points[0];
    let xd = poly.lipschitz_points[d - 1];
    let u_left = sub2(map.eval_boundary(x1 - 1.0), map.eval_boundary(x1));
    let u_right = sub2(map.eval_boundary(xd + 1.0), map.eval_boundary(xd));

    let c = cross(normalize(u_left), normalize(u_right));
    if c.abs() > 1e-10 {
        let fam = classify_asymptotic_family(poly.alpha, poly.beta)
            .unwrap_or(AsymptoticFamily::None);
        return PolygonClass {
            kind: PolygonKind::General,
            asymptotic_family: fam,
        };
    }

    // Parallel rays. Same direction: a half-strip. Opposite directions on one
    // line: the boundary degenerates to a full line (half-plane); on distinct
    // lines it bounds a strip.
    let same_direction = crate::linalg::dot(normalize(u_left), normalize(u_right)) > 0.0;
    if same_direction {
        return PolygonClass {
            kind: PolygonKind::ParallelRay,
            asymptotic_family: AsymptoticFamily::R2xS2,
        };
    }
    let p1 = map.eval_boundary(x1);
    let pd = map.eval_boundary(xd);
    let offset = cross(normalize(u_right), sub2(pd, p1));
    let collinear_vertices = poly
        .vertices
        .iter()
        .all(|p| cross(normalize(u_right), sub2(*p, p1)).abs() <= 1e-10);
    if offset.abs() <= 1e-10 && collinear_vertices {
        PolygonClass {
            kind: PolygonKind::HalfPlane,
            asymptotic_family: AsymptoticFamily::None,
        }
    } else {
        PolygonClass {
            kind: PolygonKind::Strip,
            asymptotic_family: AsymptoticFamily::None,
        }
    }
}

/// (0,0) -> ALE, alpha=beta>0 -> ALF, exactly one zero -> Exceptional,
/// distinct positives -> ALF-like.
pub fn classify_asymptotic_family(
    alpha: f64,
    beta: f64,
) -> Result<AsymptoticFamily, PolygonError> {
    if alpha < 0.0 {
        return Err(PolygonError::NegativeFreeParameter {
            name: "alpha",
            value: alpha,
        });
    }
    if beta < 0.0 {
        return Err(PolygonError::NegativeFreeParameter {
            name: "beta",
            value: beta,
        });
    }
    Ok(if alpha == 0.0 && beta == 0.0 {
        AsymptoticFamily::Ale
    } else if alpha == 0.0 || beta == 0.0 {
        AsymptoticFamily::Exceptional
    } else if alpha == beta {
        AsymptoticFamily::Alf
    } else {
        AsymptoticFamily::AlfLike
    })
}

/// Image of a boundary parameter under the momentum map restricted to y=0:
/// affine on each [x_i, x_{i+1}], hitting p_i and p_{i+1} at the endpoints,
/// ray-linear beyond x_1 and x_d.
pub fn boundary_image(poly: &LabeledPolygon, x: f64) -> Result<[f64; 2], PolygonError> {
    let map = MomentumMap::from_polygon(poly)?;
    Ok(map.eval_boundary(x))
}
