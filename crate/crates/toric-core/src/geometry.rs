//! Reduced-space metric data and curvature, assembled from exact momentum
//! Jacobians.
//!
//! Two charts are in play. In the half-plane chart (x, y) everything is
//! closed-form: the reduced metric is conformal, `lambda (dx^2 + dy^2)` with
//! `lambda = |det A|/y`, and `G^{ij} = (y/|det A|) (A A^T)_{ij}`. In momentum
//! coordinates phi the metric is Hessian, `G_ij dphi^i dphi^j`; derivative
//! quantities there use central finite differences, reaching back to the
//! half-plane through Newton inversion of the momentum map when the metric
//! comes from a family rather than a closed-form potential.
//!
//! The scalar curvature of the 4-manifold is computed in divergence form,
//! `s_div = -d_i (G^{ij} d_j log V)` with `V = det(G^{ij})`. For family
//! metrics the inner gradient is exact — `V = y^2` identically, so
//! `d_j log V = (2/y) (A^{-1})_{2j}` — and only the outer divergence is
//! differenced, which keeps the residual of the scalar-flat families at
//! truncation level instead of compounding two FD layers. The standard-
//! normalization scalar (the one the disk example prints as R) is half the
//! divergence form; both are exposed, together with the independent
//! fourth-order Hessian form for cross-checking.

use crate::linalg::Mat2;
use crate::momentum::{MomentumError, MomentumMap};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("point ({x}, {y}) is not interior (y > 0 required)")]
    BoundaryPoint { x: f64, y: f64 },
    #[error("Jacobian is singular at ({x}, {y})")]
    SingularJacobian { x: f64, y: f64 },
    #[error("metric degenerates at phi = ({phi1}, {phi2})")]
    DegenerateMetric { phi1: f64, phi2: f64 },
    #[error("FD step {h} needs clearance 2h but the point has y = {y}")]
    StepTooLarge { h: f64, y: f64 },
    #[error("phi = ({phi1}, {phi2}) lies outside the potential's domain")]
    OutsideDomain { phi1: f64, phi2: f64 },
    #[error("momentum inversion did not converge near phi = ({phi1}, {phi2})")]
    InversionFailed { phi1: f64, phi2: f64 },
    #[error("invalid grid: {reason}")]
    BadGrid { reason: String },
    #[error(transparent)]
    Momentum(#[from] MomentumError),
}

/// Pointwise metric data in both charts.
#[derive(Clone, Copy, Debug)]
pub struct MetricBlocks {
    /// Reduced metric G_ij in phi coordinates.
    pub g_dn: Mat2,
    /// Inverse metric G^{ij} = <grad phi^i, grad phi^j>.
    pub g_up: Mat2,
    /// V = det(G^{ij}); equals y^2 identically for the closed-form families.
    pub v: f64,
    /// Conformal factor |det A|/y of the reduced metric in (x, y).
    pub lambda: f64,
}

pub fn reduced_metric(map: &MomentumMap, x: f64, y: f64) -> Result<MetricBlocks, GeometryError> {
    if !(y > 0.0) {
        return Err(GeometryError::BoundaryPoint { x, y });
    }
    let a = map.jacobian(x, y)?;
    blocks_from_jacobian(&a, x, y)
}

fn blocks_from_jacobian(a: &Mat2, x: f64, y: f64) -> Result<MetricBlocks, GeometryError> {
    let det = a.det();
    if det == 0.0 || !det.is_finite() {
        return Err(GeometryError::SingularJacobian { x, y });
    }
    let g_up = a.aat().scale(y / det.abs());
    let g_dn = g_up
        .inverse()
        .ok_or(GeometryError::SingularJacobian { x, y })?;
    // det(G^ij) = (y/|det A|)^2 det(A A^T), with det(A A^T) = (det A)^2 by
    // Binet-Cauchy. The reassociated form is exact algebra; taking the
    // cross-form determinant of the assembled Gram matrix instead would
    // lose cond(A)^2 digits where the metric degenerates.
    let signed_y = (y / det.abs()) * det;
    Ok(MetricBlocks {
        g_dn,
        g_up,
        v: signed_y * signed_y,
        lambda: det.abs() / y,
    })
}

/// Newton inversion of the momentum map: find (x, y) with phi(x, y) = target,
/// starting from `seed` and damped to keep y positive.
pub fn invert_momentum(
    map: &MomentumMap,
    target: [f64; 2],
    seed: [f64; 2],
) -> Result<[f64; 2], GeometryError> {
    let mut x = seed[0];
    let mut y = seed[1].max(1e-12);
    for _ in 0..80 {
        let f = map.eval(x, y)?;
        let j = map.jacobian(x, y)?;
        let jinv = j
            .inverse()
            .ok_or(GeometryError::SingularJacobian { x, y })?;
        let d = jinv.mul_vec([f[0] - target[0], f[1] - target[1]]);
        x -= d[0];
        y -= d[1];
        if y <= 0.0 {
            y = 1e-12;
        }
        if d[0].abs().max(d[1].abs()) < 1e-14 {
            break;
        }
    }
    let f = map.eval(x, y)?;
    let scale = 1.0 + target[0].abs() + target[1].abs();
    if (f[0] - target[0]).abs() + (f[1] - target[1]).abs() > 1e-8 * scale {
        return Err(GeometryError::InversionFailed {
            phi1: target[0],
            phi2: target[1],
        });
    }
    Ok([x, y])
}

/// A reduced metric accessed in phi coordinates. Families implement this by
/// inverting the momentum map; closed-form potentials by differentiating.
pub trait PhiMetric {
    fn g_dn(&self, phi: [f64; 2]) -> Result<Mat2, GeometryError>;

    /// V = det(G^{ij}) = 1/det(G_ij).
    fn volume(&self, phi: [f64; 2]) -> Result<f64, GeometryError> {
        let g = self.g_dn(phi)?;
        let d = g.det();
        if !(d > 0.0) {
            return Err(GeometryError::DegenerateMetric {
                phi1: phi[0],
                phi2: phi[1],
            });
        }
        Ok(1.0 / d)
    }
}

/// Phi-coordinate view of a family metric, Newton-backed. The seed is the
/// half-plane point whose image the phi stencil surrounds.
pub struct FamilyPhiMetric<'a> {
    pub map: &'a MomentumMap,
    pub seed: [f64; 2],
}

impl PhiMetric for FamilyPhiMetric<'_> {
    fn g_dn(&self, phi: [f64; 2]) -> Result<Mat2, GeometryError> {
        let xy = invert_momentum(self.map, phi, self.seed)?;
        Ok(reduced_metric(self.map, xy[0], xy[1])?.g_dn)
    }
}

fn g_up_at(map: &MomentumMap, x: f64, y: f64) -> Result<Mat2, GeometryError> {
    let a = map.jacobian(x, y)?;
    let det = a.det();
    if det == 0.0 || !det.is_finite() {
        return Err(GeometryError::SingularJacobian { x, y });
    }
    Ok(a.aat().scale(y / det.abs()))
}

/// w^i = G^{ij} d_j log V with the gradient taken in closed form:
/// log V = 2 log y, so d_j log V = (2/y) (A^{-1})_{2j}.
fn w_vector(map: &MomentumMap, x: f64, y: f64) -> Result<[f64; 2], GeometryError> {
    let a = map.jacobian(x, y)?;
    let det = a.det();
    if det == 0.0 || !det.is_finite() {
        return Err(GeometryError::SingularJacobian { x, y });
    }
    let ainv = a
        .inverse()
        .ok_or(GeometryError::SingularJacobian { x, y })?;
    let g_up = a.aat().scale(y / det.abs());
    let grad_log_v = [2.0 / y * ainv.m[1][0], 2.0 / y * ainv.m[1][1]];
    Ok(g_up.mul_vec(grad_log_v))
}

/// Divergence-form scalar -d_i(G^{ij} d_j log V) for a family metric:
/// exact inner gradient, one central-difference layer for the outer
/// divergence, chained through A^{-1} to convert (x, y) derivatives into
/// phi derivatives.
pub fn divergence_scalar(
    map: &MomentumMap,
    x: f64,
    y: f64,
    h: f64,
) -> Result<f64, GeometryError> {
    if !(y > 0.0) {
        return Err(GeometryError::BoundaryPoint { x, y });
    }
    if y < 2.0 * h {
        return Err(GeometryError::StepTooLarge { h, y });
    }
    let a = map.jacobian(x, y)?;
    let ainv = a
        .inverse()
        .ok_or(GeometryError::SingularJacobian { x, y })?;
    let wxp = w_vector(map, x + h, y)?;
    let wxm = w_vector(map, x - h, y)?;
    let wyp = w_vector(map, x, y + h)?;
    let wym = w_vector(map, x, y - h)?;
    // Rows: component i of w; columns: derivative direction (x then y).
    let dw_du = Mat2::new(
        (wxp[0] - wxm[0]) / (2.0 * h),
        (wyp[0] - wym[0]) / (2.0 * h),
        (wxp[1] - wxm[1]) / (2.0 * h),
        (wyp[1] - wym[1]) / (2.0 * h),
    );
    // sum_i d w^i/d phi^i = tr(dw_du . A^{-1}).
    Ok(-dw_du.mul(&ainv).trace())
}

/// Fourth-order Hessian form -(1/2) d^2 G^{ij} / dphi^i dphi^j on a 3x3 phi
/// stencil, reaching G^{ij} values through Newton inversion.
fn abreu_scalar_family(
    map: &MomentumMap,
    x: f64,
    y: f64,
    h: f64,
) -> Result<f64, GeometryError> {
    let phi0 = map.eval(x, y)?;
    let gup = |dp1: f64, dp2: f64| -> Result<Mat2, GeometryError> {
        let xy = invert_momentum(map, [phi0[0] + dp1, phi0[1] + dp2], [x, y])?;
        g_up_at(map, xy[0], xy[1])
    };
    let c = gup(0.0, 0.0)?;
    let pp = gup(h, 0.0)?;
    let pm = gup(-h, 0.0)?;
    let qp = gup(0.0, h)?;
    let qm = gup(0.0, -h)?;
    let epp = gup(h, h)?;
    let epm = gup(h, -h)?;
    let emp = gup(-h, h)?;
    let emm = gup(-h, -h)?;
    let d11 = (pp.m[0][0] - 2.0 * c.m[0][0] + pm.m[0][0]) / (h * h);
    let d22 = (qp.m[1][1] - 2.0 * c.m[1][1] + qm.m[1][1]) / (h * h);
    let d12 = (epp.m[0][1] - epm.m[0][1] - emp.m[0][1] + emm.m[0][1]) / (4.0 * h * h);
    Ok(-0.5 * (d11 + 2.0 * d12 + d22))
}

/// Scalar curvature of the 4-manifold: the divergence-form value, the
/// standard normalization (its half), the independent fourth-order form,
/// and their empirical ratio.
#[derive(Clone, Copy, Debug)]
pub struct ScalarCurvature {
    /// Standard-normalization scalar curvature (the disk example's R).
    pub s: f64,
    /// Raw divergence form -d_i(G^{ij} d_j log V) = 2 s.
    pub s_div: f64,
    /// -(1/2) d^2 G^{ij}/dphi^i dphi^j, computed on an independent stencil.
    pub s_abreu: f64,
    /// s_div / s_abreu; NaN where the denominator is at noise level.
    pub ratio: f64,
}

// Below this the fourth-order form is indistinguishable from its own
// truncation error at the default step, so the quotient carries no
// information; report NaN instead of noise divided by noise.
const ABREU_NOISE_FLOOR: f64 = 1e-6;

fn curvature_ratio(s_div: f64, s_abreu: f64) -> f64 {
    if s_abreu.abs() > ABREU_NOISE_FLOOR {
        s_div / s_abreu
    } else {
        f64::NAN
    }
}

pub fn scalar_curvature_4d(
    map: &MomentumMap,
    x: f64,
    y: f64,
    h: f64,
) -> Result<ScalarCurvature, GeometryError> {
    let s_div = divergence_scalar(map, x, y, h)?;
    let s_abreu = abreu_scalar_family(map, x, y, h)?;
    Ok(ScalarCurvature {
        s: s_div / 2.0,
        s_div,
        s_abreu,
        ratio: curvature_ratio(s_div, s_abreu),
    })
}

/// Same two pipelines for a metric given directly in phi coordinates
/// (closed-form potentials): both layers are central differences there.
pub fn scalar_curvature_phi<F: PhiMetric + ?Sized>(
    field: &F,
    phi: [f64; 2],
    h: f64,
) -> Result<ScalarCurvature, GeometryError> {
    let g_up = |q: [f64; 2]| -> Result<Mat2, GeometryError> {
        let g = field.g_dn(q)?;
        g.inverse().ok_or(GeometryError::DegenerateMetric {
            phi1: q[0],
            phi2: q[1],
        })
    };
    let w = |q: [f64; 2]| -> Result<[f64; 2], GeometryError> {
        let gu = g_up(q)?;
        let mut grad = [0.0; 2];
        for j in 0..2 {
            let mut qp = q;
            let mut qm = q;
            qp[j] += h;
            qm[j] -= h;
            grad[j] = (field.volume(qp)?.ln() - field.volume(qm)?.ln()) / (2.0 * h);
        }
        Ok(gu.mul_vec(grad))
    };
    let mut s_div = 0.0;
    for i in 0..2 {
        let mut qp = phi;
        let mut qm = phi;
        qp[i] += h;
        qm[i] -= h;
        s_div -= (w(qp)?[i] - w(qm)?[i]) / (2.0 * h);
    }

    let c = g_up(phi)?;
    let pp = g_up([phi[0] + h, phi[1]])?;
    let pm = g_up([phi[0] - h, phi[1]])?;
    let qp = g_up([phi[0], phi[1] + h])?;
    let qm = g_up([phi[0], phi[1] - h])?;
    let epp = g_up([phi[0] + h, phi[1] + h])?;
    let epm = g_up([phi[0] + h, phi[1] - h])?;
    let emp = g_up([phi[0] - h, phi[1] + h])?;
    let emm = g_up([phi[0] - h, phi[1] - h])?;
    let d11 = (pp.m[0][0] - 2.0 * c.m[0][0] + pm.m[0][0]) / (h * h);
    let d22 = (qp.m[1][1] - 2.0 * c.m[1][1] + qm.m[1][1]) / (h * h);
    let d12 = (epp.m[0][1] - epm.m[0][1] - emp.m[0][1] + emm.m[0][1]) / (4.0 * h * h);
    let s_abreu = -0.5 * (d11 + 2.0 * d12 + d22);

    Ok(ScalarCurvature {
        s: s_div / 2.0,
        s_div,
        s_abreu,
        ratio: curvature_ratio(s_div, s_abreu),
    })
}

/// Christoffel symbols of a Hessian metric and the contracted identity
/// Gamma^k = -G^{ks} d_s log V^{1/2}.
#[derive(Clone, Copy, Debug)]
pub struct Christoffels {
    /// gamma[k][i][j] = Gamma^k_ij = (1/2) (dG_ij/dphi^s) G^{sk}.
    pub gamma: [[[f64; 2]; 2]; 2],
    /// Gamma^k = G^{ij} Gamma^k_ij.
    pub contracted: [f64; 2],
    /// max_k |Gamma^k + G^{ks} d_s log V^{1/2}|.
    pub identity_residual: f64,
}

struct StencilData {
    g0: Mat2,
    gi: Mat2,
    /// dg[s] = dG_ij/dphi^s by central differences.
    dg: [Mat2; 2],
    /// d_s log V^{1/2} by central differences.
    dlog_sqrt_v: [f64; 2],
}

fn stencil<F: PhiMetric + ?Sized>(
    field: &F,
    phi: [f64; 2],
    h: f64,
) -> Result<StencilData, GeometryError> {
    let g0 = field.g_dn(phi)?;
    let gi = g0.inverse().ok_or(GeometryError::DegenerateMetric {
        phi1: phi[0],
        phi2: phi[1],
    })?;
    let mut dg = [Mat2::identity(); 2];
    let mut dlog_sqrt_v = [0.0; 2];
    for s in 0..2 {
        let mut qp = phi;
        let mut qm = phi;
        qp[s] += h;
        qm[s] -= h;
        let gp = field.g_dn(qp)?;
        let gm = field.g_dn(qm)?;
        if !(gp.det() > 0.0 && gm.det() > 0.0) {
            return Err(GeometryError::DegenerateMetric {
                phi1: phi[0],
                phi2: phi[1],
            });
        }
        dg[s] = gp.sub(&gm).scale(1.0 / (2.0 * h));
        // V = 1/det(G_dn), so d_s log sqrt(V) = -(1/2) tr(G_up d_s G_dn) by
        // Jacobi's formula, taken over the same sampled derivatives as the
        // Christoffel symbols; differencing log det separately would inject
        // an O(h^2) mismatch between two views of the same data.
        dlog_sqrt_v[s] = -0.5 * gi.mul(&dg[s]).trace();
    }
    Ok(StencilData {
        g0,
        gi,
        dg,
        dlog_sqrt_v,
    })
}

fn gamma_from_stencil(st: &StencilData) -> [[[f64; 2]; 2]; 2] {
    let mut gamma = [[[0.0; 2]; 2]; 2];
    for k in 0..2 {
        for i in 0..2 {
            for j in 0..2 {
                let mut v = 0.0;
                for s in 0..2 {
                    v += st.dg[s].m[i][j] * st.gi.m[s][k];
                }
                gamma[k][i][j] = 0.5 * v;
            }
        }
    }
    gamma
}

pub fn christoffels<F: PhiMetric + ?Sized>(
    field: &F,
    phi: [f64; 2],
    h: f64,
) -> Result<Christoffels, GeometryError> {
    let st = stencil(field, phi, h)?;
    let gamma = gamma_from_stencil(&st);
    let mut contracted = [0.0; 2];
    for k in 0..2 {
        for i in 0..2 {
            for j in 0..2 {
                contracted[k] += st.gi.m[i][j] * gamma[k][i][j];
            }
        }
    }
    let mut identity_residual = 0.0_f64;
    for k in 0..2 {
        let mut rhs = 0.0;
        for s in 0..2 {
            rhs -= st.gi.m[k][s] * st.dlog_sqrt_v[s];
        }
        identity_residual = identity_residual.max((contracted[k] - rhs).abs());
    }
    Ok(Christoffels {
        gamma,
        contracted,
        identity_residual,
    })
}

/// |Gamma|^2 = G^{is} G^{jt} G_{kl} Gamma^k_ij Gamma^l_st.
fn gamma_norm_sq(st: &StencilData, gamma: &[[[f64; 2]; 2]; 2]) -> f64 {
    let mut n2 = 0.0;
    for i in 0..2 {
        for s in 0..2 {
            for j in 0..2 {
                for t in 0..2 {
                    for k in 0..2 {
                        for l in 0..2 {
                            n2 += st.gi.m[i][s]
                                * st.gi.m[j][t]
                                * st.g0.m[k][l]
                                * gamma[k][i][j]
                                * gamma[l][s][t];
                        }
                    }
                }
            }
        }
    }
    n2
}

/// Scalar curvature of the reduced surface from the Hessian-metric formula
/// s_Sigma = |Gamma|^2 - |grad log V^{1/2}|^2, with K_Sigma = s_Sigma/2.
#[derive(Clone, Copy, Debug)]
pub struct SigmaScalar {
    pub s_sigma: f64,
    pub k_sigma: f64,
}

pub fn sigma_scalar<F: PhiMetric + ?Sized>(
    field: &F,
    phi: [f64; 2],
    h: f64,
) -> Result<SigmaScalar, GeometryError> {
    let st = stencil(field, phi, h)?;
    let gamma = gamma_from_stencil(&st);
    let n2 = gamma_norm_sq(&st, &gamma);
    let mut grad2 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            grad2 += st.gi.m[i][j] * st.dlog_sqrt_v[i] * st.dlog_sqrt_v[j];
        }
    }
    let s_sigma = n2 - grad2;
    Ok(SigmaScalar {
        s_sigma,
        k_sigma: s_sigma / 2.0,
    })
}

/// Gaussian curvature of the reduced surface in the (x, y) chart:
/// K = -(1/(2 lambda)) Delta_flat log lambda with lambda = |det A|/y.
/// The log y part of the Laplacian is differenced on the same stencil.
pub fn gaussian_curvature(
    map: &MomentumMap,
    x: f64,
    y: f64,
    h: f64,
) -> Result<f64, GeometryError> {
    if !(y > 0.0) {
        return Err(GeometryError::BoundaryPoint { x, y });
    }
    if y < 2.0 * h {
        return Err(GeometryError::StepTooLarge { h, y });
    }
    let log_abs_det = |xx: f64, yy: f64| -> Result<f64, GeometryError> {
        let d = map.jacobian(xx, yy)?.det();
        if d == 0.0 || !d.is_finite() {
            return Err(GeometryError::SingularJacobian { x: xx, y: yy });
        }
        Ok(d.abs().ln())
    };
    let f0 = log_abs_det(x, y)?;
    let lap_det = (log_abs_det(x + h, y)?
        + log_abs_det(x - h, y)?
        + log_abs_det(x, y + h)?
        + log_abs_det(x, y - h)?
        - 4.0 * f0)
        / (h * h);
    let lap_log_y = ((y + h).ln() + (y - h).ln() - 2.0 * y.ln()) / (h * h);
    let lambda = f0.exp() / y;
    Ok(-(lap_det - lap_log_y) / (2.0 * lambda))
}

/// Scalar curvature of the conformally rescaled surface metric
/// V^{1/2} g_Sigma, computed two independent ways.
#[derive(Clone, Copy, Debug)]
pub struct ConformalScalar {
    /// Pipeline (a): V^{-1/2} (|Gamma|^2 + s_div/2) in phi coordinates.
    pub a: f64,
    /// Pipeline (b): doubled Gaussian curvature of the rescaled metric.
    pub b: f64,
    pub residual: f64,
}

pub fn conformal_scalar(
    map: &MomentumMap,
    x: f64,
    y: f64,
    h: f64,
) -> Result<ConformalScalar, GeometryError> {
    if !(y > 0.0) {
        return Err(GeometryError::BoundaryPoint { x, y });
    }
    if y < 2.0 * h {
        return Err(GeometryError::StepTooLarge { h, y });
    }
    // (a) in phi coordinates; V^{1/2} = y for families.
    let phi0 = map.eval(x, y)?;
    let field = FamilyPhiMetric { map, seed: [x, y] };
    let st = stencil(&field, phi0, h)?;
    let gamma = gamma_from_stencil(&st);
    let n2 = gamma_norm_sq(&st, &gamma);
    let s_div = divergence_scalar(map, x, y, h)?;
    let a = (n2 + s_div / 2.0) / y;

    // (b): for V = y^2 the rescaled metric is |det A| (dx^2 + dy^2), so its
    // Gaussian curvature is -Delta_flat log|det A| / (2 |det A|).
    let log_abs_det = |xx: f64, yy: f64| -> Result<f64, GeometryError> {
        let d = map.jacobian(xx, yy)?.det();
        if d == 0.0 || !d.is_finite() {
            return Err(GeometryError::SingularJacobian { x: xx, y: yy });
        }
        Ok(d.abs().ln())
    };
    let f0 = log_abs_det(x, y)?;
    let lap = (log_abs_det(x + h, y)?
        + log_abs_det(x - h, y)?
        + log_abs_det(x, y + h)?
        + log_abs_det(x, y - h)?
        - 4.0 * f0)
        / (h * h);
    let b = -lap / f0.exp();

    Ok(ConformalScalar {
        a,
        b,
        residual: (a - b).abs(),
    })
}

/// Conformal scalar for a metric given directly in phi coordinates.
/// Pipeline (b) uses the Brioschi formula on the rescaled metric
/// h_ij = V^{1/2} G_ij, all derivatives by central differences.
pub fn conformal_scalar_phi<F: PhiMetric + ?Sized>(
    field: &F,
    phi: [f64; 2],
    h: f64,
) -> Result<ConformalScalar, GeometryError> {
    let st = stencil(field, phi, h)?;
    let gamma = gamma_from_stencil(&st);
    let n2 = gamma_norm_sq(&st, &gamma);
    let s_div = scalar_curvature_phi(field, phi, h)?.s_div;
    let v0 = field.volume(phi)?;
    let a = (n2 + s_div / 2.0) / v0.sqrt();
    let b = 2.0 * brioschi_gauss(field, phi, h)?;
    Ok(ConformalScalar {
        a,
        b,
        residual: (a - b).abs(),
    })
}

/// Gaussian curvature of h_ij = V^{1/2} G_ij via the Brioschi formula, with
/// E, F, G and their first/second derivatives from central differences on a
/// 3x3 stencil of step h.
fn brioschi_gauss<F: PhiMetric + ?Sized>(
    field: &F,
    phi: [f64; 2],
    h: f64,
) -> Result<f64, GeometryError> {
    let h_at = |du: f64, dv: f64| -> Result<Mat2, GeometryError> {
        let q = [phi[0] + du, phi[1] + dv];
        let g = field.g_dn(q)?;
        let v = field.volume(q)?;
        Ok(g.scale(v.sqrt()))
    };
    let c = h_at(0.0, 0.0)?;
    let up = h_at(h, 0.0)?;
    let um = h_at(-h, 0.0)?;
    let vp = h_at(0.0, h)?;
    let vm = h_at(0.0, -h)?;
    let upvp = h_at(h, h)?;
    let upvm = h_at(h, -h)?;
    let umvp = h_at(-h, h)?;
    let umvm = h_at(-h, -h)?;

    let d_u = |f: fn(&Mat2) -> f64| (f(&up) - f(&um)) / (2.0 * h);
    let d_v = |f: fn(&Mat2) -> f64| (f(&vp) - f(&vm)) / (2.0 * h);
    let d_uu = |f: fn(&Mat2) -> f64| (f(&up) - 2.0 * f(&c) + f(&um)) / (h * h);
    let d_vv = |f: fn(&Mat2) -> f64| (f(&vp) - 2.0 * f(&c) + f(&vm)) / (h * h);
    let d_uv = |f: fn(&Mat2) -> f64| {
        (f(&upvp) - f(&upvm) - f(&umvp) + f(&umvm)) / (4.0 * h * h)
    };
    let fe = |m: &Mat2| m.m[0][0];
    let ff = |m: &Mat2| m.m[0][1];
    let fg = |m: &Mat2| m.m[1][1];

    let (e, f, g) = (fe(&c), ff(&c), fg(&c));
    let (e_u, e_v) = (d_u(fe), d_v(fe));
    let (f_u, f_v) = (d_u(ff), d_v(ff));
    let (g_u, g_v) = (d_u(fg), d_v(fg));
    let e_vv = d_vv(fe);
    let g_uu = d_uu(fg);
    let f_uv = d_uv(ff);

    let det3 = |m: [[f64; 3]; 3]| -> f64 {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let m1 = [
        [
            -0.5 * e_vv + f_uv - 0.5 * g_uu,
            0.5 * e_u,
            f_u - 0.5 * e_v,
        ],
        [f_v - 0.5 * g_u, e, f],
        [0.5 * g_v, f, g],
    ];
    let m2 = [
        [0.0, 0.5 * e_v, 0.5 * g_u],
        [0.5 * e_v, e, f],
        [0.5 * g_u, f, g],
    ];
    let w = e * g - f * f;
    if !(w > 0.0) {
        return Err(GeometryError::DegenerateMetric {
            phi1: phi[0],
            phi2: phi[1],
        });
    }
    Ok((det3(m1) - det3(m2)) / (w * w))
}

/// Rectangular sampling grid in the half-plane chart.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    /// Grid must clear the boundary by 2h so every FD stencil stays interior.
    pub fn validate(&self, h: f64) -> Result<(), GeometryError> {
        let bad = |reason: &str| {
            Err(GeometryError::BadGrid {
                reason: reason.to_string(),
            })
        };
        if !(self.x_min < self.x_max) {
            return bad("x_min must be < x_max");
        }
        if !(self.y_min < self.y_max) {
            return bad("y_min must be < y_max");
        }
        if self.nx < 3 || self.ny < 3 {
            return bad("grid needs at least 3 points per axis");
        }
        if !(self.y_min >= 2.0 * h) {
            return bad("y_min must be at least 2h to clear the boundary");
        }
        Ok(())
    }

    pub fn x_at(&self, ix: usize) -> f64 {
        self.x_min + (self.x_max - self.x_min) * ix as f64 / (self.nx - 1) as f64
    }

    pub fn y_at(&self, iy: usize) -> f64 {
        self.y_min + (self.y_max - self.y_min) * iy as f64 / (self.ny - 1) as f64
    }

    /// Row-major enumeration: y outer, x inner.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..self.ny).flat_map(move |iy| (0..self.nx).map(move |ix| (self.x_at(ix), self.y_at(iy))))
    }
}

/// Everything the suites and the CSV emitter need at one grid point.
#[derive(Clone, Copy, Debug)]
pub struct FieldSample {
    pub x: f64,
    pub y: f64,
    pub r: f64,
    pub theta: f64,
    pub phi: [f64; 2],
    pub a: Mat2,
    pub det_a: f64,
    pub blocks: MetricBlocks,
    pub k_sigma: f64,
    /// Standard-normalization 4-manifold scalar (divergence form halved).
    pub s4: f64,
    pub s_sigma: f64,
    pub s_tilde: f64,
    pub wminus_sq: f64,
}

pub fn field_sample(
    map: &MomentumMap,
    x: f64,
    y: f64,
    h: f64,
) -> Result<FieldSample, GeometryError> {
    if !(y > 0.0) {
        return Err(GeometryError::BoundaryPoint { x, y });
    }
    if y < 2.0 * h {
        return Err(GeometryError::StepTooLarge { h, y });
    }
    let a = map.jacobian(x, y)?;
    let blocks = blocks_from_jacobian(&a, x, y)?;
    let phi = map.eval(x, y)?;
    let k_sigma = gaussian_curvature(map, x, y, h)?;
    let s_div = divergence_scalar(map, x, y, h)?;

    // Conformal pipeline (b) shares the Jacobian stencil with K.
    let log_abs_det = |xx: f64, yy: f64| -> Result<f64, GeometryError> {
        let d = map.jacobian(xx, yy)?.det();
        if d == 0.0 || !d.is_finite() {
            return Err(GeometryError::SingularJacobian { x: xx, y: yy });
        }
        Ok(d.abs().ln())
    };
    let f0 = log_abs_det(x, y)?;
    let lap = (log_abs_det(x + h, y)?
        + log_abs_det(x - h, y)?
        + log_abs_det(x, y + h)?
        + log_abs_det(x, y - h)?
        - 4.0 * f0)
        / (h * h);
    let s_tilde = -lap / f0.exp();

    Ok(FieldSample {
        x,
        y,
        r: x.hypot(y),
        theta: y.atan2(x),
        phi,
        a,
        det_a: a.det(),
        blocks,
        k_sigma,
        s4: s_div / 2.0,
        s_sigma: 2.0 * k_sigma,
        s_tilde,
        wminus_sq: 24.0 * k_sigma * k_sigma,
    })
}

/// Sample a full grid, row-major (y outer, x inner). Pure per point, so the
/// caller may parallelize over indices without changing results.
pub fn sample_grid(
    map: &MomentumMap,
    grid: &GridSpec,
    h: f64,
) -> Result<Vec<FieldSample>, GeometryError> {
    grid.validate(h)?;
    grid.points()
        .map(|(x, y)| field_sample(map, x, y, h))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tn(alpha: f64, beta: f64) -> MomentumMap {
        MomentumMap::TaubNut {
            s0: 1.0,
            sd: 1.0,
            alpha,
            beta,
        }
    }

    #[test]
    fn flat_model_blocks_at_unit_height() {
        let b = reduced_metric(&tn(0.0, 0.0), 0.0, 1.0).unwrap();
        assert!(b.g_up.max_abs_diff(&Mat2::identity()) < 1e-15);
        assert!((b.v - 1.0).abs() < 1e-15);
        assert!((b.lambda - 0.5).abs() < 1e-15);
    }

    #[test]
    fn volume_equals_height_squared() {
        for (x, y) in [(0.3, 0.7), (-2.0, 1.5), (4.0, 0.2)] {
            let b = reduced_metric(&tn(1.0, 2.0), x, y).unwrap();
            assert!((b.v - y * y).abs() <= 1e-12 * y * y);
        }
    }

    #[test]
    fn newton_inversion_round_trips() {
        let map = tn(1.0, 0.0);
        let phi = map.eval(0.7, 1.3).unwrap();
        let xy = invert_momentum(&map, phi, [0.5, 1.0]).unwrap();
        assert!((xy[0] - 0.7).abs() < 1e-9 && (xy[1] - 1.3).abs() < 1e-9);
    }

    #[test]
    fn family_scalar_curvature_vanishes() {
        let s = divergence_scalar(&tn(1.0, 2.0), 0.4, 1.3, 1e-3).unwrap();
        assert!(s.abs() < 1e-6, "expected scalar-flat, got {s}");
    }

    #[test]
    fn flat_model_has_zero_gauss_curvature() {
        let k = gaussian_curvature(&tn(0.0, 0.0), 0.7, 1.1, 1e-3).unwrap();
        assert!(k.abs() < 2e-6, "got {k}");
    }
}
