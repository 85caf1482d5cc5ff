//! Closed-form momentum maps on the upper half-plane and their exact
//! Jacobians.
//!
//! Each labeled polygon feeds one of four families. Evaluation is exact
//! (no finite differencing); the Jacobian `A^{i1} = dphi^i/dx`,
//! `A^{i2} = dphi^i/dy` is likewise closed-form and is the single source
//! from which all metric data downstream is assembled. Square roots go
//! through `hypot` so decay fits can probe radii ~1e8 without overflow.

use crate::linalg::Mat2;
use crate::polygon::{FamilyTag, LabeledPolygon, PolygonError};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MomentumError {
    #[error("momentum Jacobian is singular at the boundary kink x={x}, y=0")]
    SingularPoint { x: f64 },
    #[error("non-finite evaluation point ({x}, {y})")]
    NonFiniteInput { x: f64, y: f64 },
}

/// One momentum family with its parameters baked in. Construction goes
/// through [`MomentumMap::from_polygon`], which enforces the per-family
/// shape requirements.
#[derive(Clone, Debug)]
pub enum MomentumMap {
    General {
        xs: Vec<f64>,
        ms: Vec<f64>,
        ns: Vec<f64>,
        s0: f64,
        sd: f64,
        alpha: f64,
        beta: f64,
    },
    ParallelRay {
        xs: Vec<f64>,
        ms: Vec<f64>,
        ns: Vec<f64>,
        s0: f64,
        sd: f64,
        alpha: f64,
    },
    TaubNut {
        s0: f64,
        sd: f64,
        alpha: f64,
        beta: f64,
    },
    R2S2Model {
        x1: f64,
        xd: f64,
        m1: f64,
        n1: f64,
        md: f64,
        nd: f64,
        s0: f64,
        sd: f64,
        alpha: f64,
    },
}

fn hyp(a: f64, b: f64) -> f64 {
    a.hypot(b)
}

impl MomentumMap {
    pub fn from_polygon(poly: &LabeledPolygon) -> Result<MomentumMap, PolygonError> {
        let d = poly.lipschitz_points.len();
        if poly.vertices.len() != d {
            return Err(PolygonError::VertexCountMismatch {
                vertices: poly.vertices.len(),
                points: d,
            });
        }
        let xs = poly.lipschitz_points.clone();
        let ms: Vec<f64> = poly.vertices.iter().map(|p| p[0]).collect();
        let ns: Vec<f64> = poly.vertices.iter().map(|p| p[1]).collect();
        match poly.family {
            FamilyTag::General => {
                if d == 0 {
                    return Err(PolygonError::FamilyMismatch {
                        family: "general",
                        requirement: "at least one Lipschitz point",
                    });
                }
                Ok(MomentumMap::General {
                    xs,
                    ms,
                    ns,
                    s0: poly.s0,
                    sd: poly.sd,
                    alpha: poly.alpha,
                    beta: poly.beta,
                })
            }
            FamilyTag::ParallelRay => {
                if d == 0 {
                    return Err(PolygonError::FamilyMismatch {
                        family: "parallel_ray",
                        requirement: "at least one Lipschitz point",
                    });
                }
                Ok(MomentumMap::ParallelRay {
                    xs,
                    ms,
                    ns,
                    s0: poly.s0,
                    sd: poly.sd,
                    alpha: poly.alpha,
                })
            }
            FamilyTag::TaubNut => {
                if d != 1 || xs[0] != 0.0 || ms[0] != 0.0 || ns[0] != 0.0 {
                    return Err(PolygonError::FamilyMismatch {
                        family: "taub_nut",
                        requirement: "exactly one Lipschitz point x=0 with vertex (0,0)",
                    });
                }
                Ok(MomentumMap::TaubNut {
                    s0: poly.s0,
                    sd: poly.sd,
                    alpha: poly.alpha,
                    beta: poly.beta,
                })
            }
            FamilyTag::R2S2Model => {
                if d != 2 {
                    return Err(PolygonError::FamilyMismatch {
                        family: "r2s2_model",
                        requirement: "exactly two Lipschitz points and two vertices",
                    });
                }
                Ok(MomentumMap::R2S2Model {
                    x1: xs[0],
                    xd: xs[1],
                    m1: ms[0],
                    n1: ns[0],
                    md: ms[1],
                    nd: ns[1],
                    s0: poly.s0,
                    sd: poly.sd,
                    alpha: poly.alpha,
                })
            }
        }
    }

    pub fn family_tag(&self) -> FamilyTag {
        match self {
            MomentumMap::General { .. } => FamilyTag::General,
            MomentumMap::ParallelRay { .. } => FamilyTag::ParallelRay,
            MomentumMap::TaubNut { .. } => FamilyTag::TaubNut,
            MomentumMap::R2S2Model { .. } => FamilyTag::R2S2Model,
        }
    }

    /// Boundary parameters where the momentum map is merely Lipschitz;
    /// the Jacobian is singular exactly at these (x_i, 0).
    pub fn lipschitz_points(&self) -> Vec<f64> {
        match self {
            MomentumMap::General { xs, .. } | MomentumMap::ParallelRay { xs, .. } => xs.clone(),
            MomentumMap::TaubNut { .. } => vec![0.0],
            MomentumMap::R2S2Model { x1, xd, .. } => vec![*x1, *xd],
        }
    }

    /// The asymptotic model this family is compared against: the one-vertex
    /// family for genuinely cornered boundaries, the two-vertex model for
    /// parallel rays. The models themselves have no further model.
    pub fn comparison_model(&self) -> Option<MomentumMap> {
        match self {
            MomentumMap::General {
                s0,
                sd,
                alpha,
                beta,
                ..
            } => Some(MomentumMap::TaubNut {
                s0: *s0,
                sd: *sd,
                alpha: *alpha,
                beta: *beta,
            }),
            MomentumMap::ParallelRay {
                xs,
                ms,
                ns,
                s0,
                sd,
                alpha,
            } => Some(MomentumMap::R2S2Model {
                x1: xs[0],
                xd: *xs.last().unwrap(),
                m1: ms[0],
                n1: ns[0],
                md: *ms.last().unwrap(),
                nd: *ns.last().unwrap(),
                s0: *s0,
                sd: *sd,
                alpha: *alpha,
            }),
            MomentumMap::TaubNut { .. } | MomentumMap::R2S2Model { .. } => None,
        }
    }

    /// phi = (phi^1, phi^2) at an interior or boundary point (y >= 0).
    /// Continuous up to y = 0, where it traces the boundary polyline.
    pub fn eval(&self, x: f64, y: f64) -> Result<[f64; 2], MomentumError> {
        if !x.is_finite() || !y.is_finite() {
            return Err(MomentumError::NonFiniteInput { x, y });
        }
        Ok(self.eval_raw(x, y))
    }

    /// `eval` at y = 0: the piecewise-affine boundary image.
    pub fn eval_boundary(&self, x: f64) -> [f64; 2] {
        self.eval_raw(x, 0.0)
    }

    fn eval_raw(&self, x: f64, y: f64) -> [f64; 2] {
        match self {
            MomentumMap::General {
                xs,
                ms,
                ns,
                s0,
                sd,
                alpha,
                beta,
            } => {
                let (x1, xd) = (xs[0], *xs.last().unwrap());
                let mut p1 = ms[0] + alpha / 2.0 * y * y + sd / 2.0 * ((x - xd) + hyp(x - xd, y));
                let mut p2 = ns[0] + beta / 2.0 * y * y + s0 / 2.0 * (-(x - x1) + hyp(x - x1, y));
                for i in 0..xs.len() - 1 {
                    let c = xs[i + 1] - hyp(x - xs[i + 1], y) - xs[i] + hyp(x - xs[i], y);
                    let w = 2.0 * (xs[i + 1] - xs[i]);
                    p1 += (ms[i + 1] - ms[i]) / w * c;
                    p2 += (ns[i + 1] - ns[i]) / w * c;
                }
                [p1, p2]
            }
            MomentumMap::ParallelRay {
                xs,
                ms,
                ns,
                s0,
                sd,
                alpha,
            } => {
                let (x1, xd) = (xs[0], *xs.last().unwrap());
                let mut p1 = ms[0]
                    + s0 / 2.0 * (-(x - x1) + hyp(x - x1, y))
                    + sd / 2.0 * ((x - xd) + hyp(x - xd, y))
                    + alpha / 2.0 * y * y;
                let mut p2 = ns[0];
                for i in 0..xs.len() - 1 {
                    let c = xs[i + 1] - xs[i] + hyp(x - xs[i], y) - hyp(x - xs[i + 1], y);
                    let w = 2.0 * (xs[i + 1] - xs[i]);
                    p1 += (ms[i + 1] - ms[i]) / w * c;
                    p2 += (ns[i + 1] - ns[i]) / w * c;
                }
                [p1, p2]
            }
            MomentumMap::TaubNut {
                s0,
                sd,
                alpha,
                beta,
            } => {
                let r = hyp(x, y);
                [
                    alpha / 2.0 * y * y + sd / 2.0 * (x + r),
                    beta / 2.0 * y * y + s0 / 2.0 * (-x + r),
                ]
            }
            MomentumMap::R2S2Model {
                x1,
                xd,
                m1,
                n1,
                md,
                nd,
                s0,
                sd,
                alpha,
            } => {
                let r1 = hyp(x - x1, y);
                let rd = hyp(x - xd, y);
                let cm = (md - m1) / (2.0 * (xd - x1));
                let cn = (nd - n1) / (2.0 * (xd - x1));
                [
                    0.5 * (m1 + md) - s0 / 2.0 * (x - x1) + sd / 2.0 * (x - xd)
                        + (s0 / 2.0 + cm) * r1
                        + (sd / 2.0 - cm) * rd
                        + alpha / 2.0 * y * y,
                    0.5 * (n1 + nd) + cn * r1 - cn * rd,
                ]
            }
        }
    }

    /// Exact Jacobian A with A^{i1} = dphi^i/dx, A^{i2} = dphi^i/dy.
    /// Valid on y > 0 and, as one-sided limits, on the boundary away from
    /// the Lipschitz points.
    pub fn jacobian(&self, x: f64, y: f64) -> Result<Mat2, MomentumError> {
        if !x.is_finite() || !y.is_finite() {
            return Err(MomentumError::NonFiniteInput { x, y });
        }
        for xi in self.lipschitz_points() {
            if hyp(x - xi, y) == 0.0 {
                return Err(MomentumError::SingularPoint { x: xi });
            }
        }
        Ok(self.jacobian_raw(x, y))
    }

    fn jacobian_raw(&self, x: f64, y: f64) -> Mat2 {
        match self {
            MomentumMap::General {
                xs,
                ms,
                ns,
                s0,
                sd,
                alpha,
                beta,
            } => {
                let (x1, xd) = (xs[0], *xs.last().unwrap());
                let r1 = hyp(x - x1, y);
                let rd = hyp(x - xd, y);
                let mut a11 = sd / 2.0 * (1.0 + (x - xd) / rd);
                let mut a12 = alpha * y + sd / 2.0 * (y / rd);
                let mut a21 = s0 / 2.0 * (-1.0 + (x - x1) / r1);
                let mut a22 = beta * y + s0 / 2.0 * (y / r1);
                for i in 0..xs.len() - 1 {
                    let ri = hyp(x - xs[i], y);
                    let ri1 = hyp(x - xs[i + 1], y);
                    let cx = (x - xs[i]) / ri - (x - xs[i + 1]) / ri1;
                    let cy = y / ri - y / ri1;
                    let w = 2.0 * (xs[i + 1] - xs[i]);
                    a11 += (ms[i + 1] - ms[i]) / w * cx;
                    a12 += (ms[i + 1] - ms[i]) / w * cy;
                    a21 += (ns[i + 1] - ns[i]) / w * cx;
                    a22 += (ns[i + 1] - ns[i]) / w * cy;
                }
                Mat2::new(a11, a12, a21, a22)
            }
            MomentumMap::ParallelRay {
                xs,
                ms,
                ns,
                s0,
                sd,
                alpha,
            } => {
                let (x1, xd) = (xs[0], *xs.last().unwrap());
                let r1 = hyp(x - x1, y);
                let rd = hyp(x - xd, y);
                let mut a11 = s0 / 2.0 * (-1.0 + (x - x1) / r1) + sd / 2.0 * (1.0 + (x - xd) / rd);
                let mut a12 = s0 / 2.0 * (y / r1) + sd / 2.0 * (y / rd) + alpha * y;
                let mut a21 = 0.0;
                let mut a22 = 0.0;
                for i in 0..xs.len() - 1 {
                    let ri = hyp(x - xs[i], y);
                    let ri1 = hyp(x - xs[i + 1], y);
                    let cx = (x - xs[i]) / ri - (x - xs[i + 1]) / ri1;
                    let cy = y / ri - y / ri1;
                    let w = 2.0 * (xs[i + 1] - xs[i]);
                    a11 += (ms[i + 1] - ms[i]) / w * cx;
                    a12 += (ms[i + 1] - ms[i]) / w * cy;
                    a21 += (ns[i + 1] - ns[i]) / w * cx;
                    a22 += (ns[i + 1] - ns[i]) / w * cy;
                }
                Mat2::new(a11, a12, a21, a22)
            }
            MomentumMap::TaubNut {
                s0,
                sd,
                alpha,
                beta,
            } => {
                let r = hyp(x, y);
                let ct = x / r;
                let st = y / r;
                Mat2::new(
                    sd / 2.0 * (1.0 + ct),
                    (alpha * r + sd / 2.0) * st,
                    s0 / 2.0 * (-1.0 + ct),
                    (beta * r + s0 / 2.0) * st,
                )
            }
            MomentumMap::R2S2Model {
                x1,
                xd,
                m1,
                n1,
                md,
                nd,
                s0,
                sd,
                alpha,
            } => {
                let r1 = hyp(x - x1, y);
                let rd = hyp(x - xd, y);
                let cm = (md - m1) / (2.0 * (xd - x1));
                let cn = (nd - n1) / (2.0 * (xd - x1));
                Mat2::new(
                    -s0 / 2.0 + sd / 2.0
                        + (s0 / 2.0 + cm) * (x - x1) / r1
                        + (sd / 2.0 - cm) * (x - xd) / rd,
                    (s0 / 2.0 + cm) * y / r1 + (sd / 2.0 - cm) * y / rd + alpha * y,
                    cn * (x - x1) / r1 - cn * (x - xd) / rd,
                    cn * y / r1 - cn * y / rd,
                )
            }
        }
    }
}

/// det A for the one-vertex family without assembling the matrix:
/// (1/2)(alpha s0 + beta sd - (alpha s0 - beta sd) cos(theta)) y
/// + (1/2) s0 sd sin(theta).
pub fn taubnut_det_closed_form(s0: f64, sd: f64, alpha: f64, beta: f64, x: f64, y: f64) -> f64 {
    let r = hyp(x, y);
    if r == 0.0 {
        return 0.0;
    }
    let ct = x / r;
    let st = y / r;
    0.5 * (alpha * s0 + beta * sd - (alpha * s0 - beta * sd) * ct) * y + 0.5 * s0 * sd * st
}

/// The hyperbolic-plane x sphere product metric in its natural coordinates
/// (r1 >= 0, r2 in [0, pi]): momenta phi^1 = cosh r1, phi^2 = -cos r2, and
/// the half-plane chart y = sqrt(((phi^1)^2-1)(1-(phi^2)^2)), x = phi^1 phi^2.
pub fn h2s2_forward(r1: f64, r2: f64) -> ([f64; 2], [f64; 2]) {
    let p1 = r1.cosh();
    let p2 = -r2.cos();
    let y = ((p1 * p1 - 1.0) * (1.0 - p2 * p2)).max(0.0).sqrt();
    let x = p1 * p2;
    ([p1, p2], [x, y])
}

/// Inverse of the half-plane chart of `h2s2_forward`:
/// phi^1 = (r_- + r_+)/2, phi^2 = (-r_- + r_+)/2 with
/// r_∓ = sqrt((x∓1)^2 + y^2). Round-trips with the forward map.
pub fn h2s2_inverse(x: f64, y: f64) -> [f64; 2] {
    let rm = hyp(x - 1.0, y);
    let rp = hyp(x + 1.0, y);
    [0.5 * (rm + rp), 0.5 * (-rm + rp)]
}
