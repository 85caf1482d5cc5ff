//! Quantitative comparison of a family against its asymptotic model:
//! Jacobian-determinant quotients, decay-rate fits along rays, closed-form
//! leading coefficients, Killing-field norms on the polar submanifolds, and
//! the closedness criteria for reductions.
//!
//! Radial decay is measured in the half-plane coordinate radius r (not a
//! manifold distance function): fits report exponents in r and the caller
//! should treat r as a proxy for the exhaustion parameter.

use crate::geometry::reduced_metric;
use crate::momentum::{MomentumError, MomentumMap};
use crate::polygon::{classify_polygon, LabeledPolygon, PolygonKind};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AsymptoticsError {
    #[error("model Jacobian determinant vanishes at ({x}, {y})")]
    ModelDetZero { x: f64, y: f64 },
    #[error("zero signal: the two families are identical along the sampled ray")]
    ZeroSignal,
    #[error("theta = {theta} outside the open interval (0, pi)")]
    ThetaOutOfRange { theta: f64 },
    #[error("leading-coefficient denominator vanishes at theta = {theta}")]
    DenominatorVanishes { theta: f64 },
    #[error("leading coefficients are defined for polygons of general kind")]
    NotGeneralKind,
    #[error("decay fits need at least 8 radii, got {n}")]
    TooFewRadii { n: usize },
    #[error("x = {x} lies inside the edge region; polar norms need x beyond the outermost boundary kink")]
    EdgeRegion { x: f64 },
    #[error("Killing-norm limit degenerates at x = {x} (vanishing y-coefficient)")]
    DegenerateLimit { x: f64 },
    #[error("polar profile needs at least 3 tail samples, got {n}")]
    EmptyTail { n: usize },
    #[error("polar profile radii must be strictly increasing and norms non-negative")]
    BadProfile,
    #[error(transparent)]
    Momentum(#[from] MomentumError),
    #[error("geometry failure: {0}")]
    Geometry(String),
}

/// |1 - det A / det A~| without the sqrt(2) frame factor; the raw signal the
/// decay fits regress on.
pub fn det_quotient(
    family: &MomentumMap,
    model: &MomentumMap,
    x: f64,
    y: f64,
) -> Result<f64, AsymptoticsError> {
    let da = family.jacobian(x, y)?.det();
    let db = model.jacobian(x, y)?.det();
    if db == 0.0 {
        return Err(AsymptoticsError::ModelDetZero { x, y });
    }
    Ok((1.0 - da / db).abs())
}

/// Frame-comparison quotient sqrt(2) |1 - det A / det A~|.
pub fn comparison_quotient(
    family: &MomentumMap,
    model: &MomentumMap,
    x: f64,
    y: f64,
) -> Result<f64, AsymptoticsError> {
    Ok(std::f64::consts::SQRT_2 * det_quotient(family, model, x, y)?)
}

/// Sharper frame-level quotient used where the determinant-only bound is too
/// coarse (the parallel-ray/two-vertex pair): combines the conformal
/// mismatch with the trace-norm of the inverse-metric difference,
/// sqrt(2 (1 - det A/det A~)^2 + tr((G~_dn M)^2)), M = G_up - G~_up.
pub fn comparison_quotient_full(
    family: &MomentumMap,
    model: &MomentumMap,
    x: f64,
    y: f64,
) -> Result<f64, AsymptoticsError> {
    let da = family.jacobian(x, y)?.det();
    let db = model.jacobian(x, y)?.det();
    if db == 0.0 {
        return Err(AsymptoticsError::ModelDetZero { x, y });
    }
    let ba = reduced_metric(family, x, y).map_err(|e| AsymptoticsError::Geometry(e.to_string()))?;
    let bb = reduced_metric(model, x, y).map_err(|e| AsymptoticsError::Geometry(e.to_string()))?;
    let m = ba.g_up.sub(&bb.g_up);
    let gm = bb.g_dn.mul(&m);
    let perp_sq = gm.mul(&gm).trace();
    let sig = 1.0 - da / db;
    Ok((2.0 * sig * sig + perp_sq).max(0.0).sqrt())
}

/// Closed-form 1/r coefficient of 1 - det A/det A~ along the ray at angle
/// theta, for general-kind polygons against their one-vertex model. The
/// branch is selected by which free parameters vanish. The returned value is
/// signed; decay fits recover its magnitude.
pub fn leading_coefficient(poly: &LabeledPolygon, theta: f64) -> Result<f64, AsymptoticsError> {
    if classify_polygon(poly).kind != PolygonKind::General {
        return Err(AsymptoticsError::NotGeneralKind);
    }
    if !(theta > 0.0 && theta < std::f64::consts::PI) {
        return Err(AsymptoticsError::ThetaOutOfRange { theta });
    }
    let (alpha, beta, s0, sd) = (poly.alpha, poly.beta, poly.s0, poly.sd);
    let x1 = poly.lipschitz_points[0];
    let xd = *poly.lipschitz_points.last().unwrap();
    let m1 = poly.vertices[0][0];
    let n1 = poly.vertices[0][1];
    let md = poly.vertices.last().unwrap()[0];
    let nd = poly.vertices.last().unwrap()[1];
    let c = theta.cos();
    let s2 = theta.sin() * theta.sin();
    if alpha > 0.0 && beta > 0.0 {
        let num = (alpha * (n1 - nd + s0 * x1) + beta * (md - m1 - sd * xd)) * s2;
        let den = -(alpha * s0 + beta * sd) + (alpha * s0 - beta * sd) * c;
        if den == 0.0 {
            return Err(AsymptoticsError::DenominatorVanishes { theta });
        }
        return Ok(num / den);
    }
    if alpha > 0.0 {
        return Ok(-(n1 - nd + s0 * x1) * (1.0 + c) / s0);
    }
    if beta > 0.0 {
        return Ok(-(md - m1 - sd * xd) * (1.0 - c) / sd);
    }
    let p = md - m1 - sd * xd;
    let q = nd - n1 - s0 * x1;
    Ok(-(s0 * p * (1.0 - c) - sd * q * (1.0 + c)) / (2.0 * s0 * sd))
}

/// Log-log regression of the determinant quotient along a fixed-theta ray.
#[derive(Clone, Copy, Debug)]
pub struct DecayFit {
    /// Slope of log q against log r.
    pub exponent: f64,
    /// 1/r coefficient, recovered with the intercept constrained to slope
    /// -1: exp(mean(log q) + mean(log r)). A free intercept overestimates
    /// the coefficient when the residual has an r^-2 tail.
    pub coefficient: f64,
    /// RMS residual of the free regression line in log space.
    pub rms_residual: f64,
    pub r_min: f64,
    pub r_max: f64,
}

pub fn fit_decay(
    family: &MomentumMap,
    model: &MomentumMap,
    theta: f64,
    r_min: f64,
    r_max: f64,
    n: usize,
) -> Result<DecayFit, AsymptoticsError> {
    if n < 8 {
        return Err(AsymptoticsError::TooFewRadii { n });
    }
    if !(theta > 0.0 && theta < std::f64::consts::PI) {
        return Err(AsymptoticsError::ThetaOutOfRange { theta });
    }
    let ratio = (r_max / r_min).ln();
    let mut log_r = Vec::with_capacity(n);
    let mut log_q = Vec::with_capacity(n);
    for k in 0..n {
        let r = r_min * (ratio * k as f64 / (n - 1) as f64).exp();
        let q = det_quotient(family, model, r * theta.cos(), r * theta.sin())?;
        if q == 0.0 {
            return Err(AsymptoticsError::ZeroSignal);
        }
        log_r.push(r.ln());
        log_q.push(q.ln());
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let mr = mean(&log_r);
    let mq = mean(&log_q);
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for k in 0..n {
        sxx += (log_r[k] - mr) * (log_r[k] - mr);
        sxy += (log_r[k] - mr) * (log_q[k] - mq);
    }
    let exponent = sxy / sxx;
    let intercept = mq - exponent * mr;
    let mut ss = 0.0;
    for k in 0..n {
        let resid = log_q[k] - (exponent * log_r[k] + intercept);
        ss += resid * resid;
    }
    Ok(DecayFit {
        exponent,
        coefficient: (mq + mr).exp(),
        rms_residual: (ss / n as f64).sqrt(),
        r_min,
        r_max,
    })
}

/// Which side of the polygon's edge region the polar submanifold sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolarBranch {
    Left,
    Right,
}

/// Squared norm of the surviving Killing field on the polar submanifold
/// (the boundary ray beyond the outermost kink), as the exact y -> 0+ limit
/// of (y/|det A|) (A^{i1}^2 + A^{i2}^2). The surviving field is X^1 on the
/// right ray and X^2 on the left for cornered families; the parallel-ray and
/// two-vertex families keep X^1 on both rays.
pub fn killing_norm_polar(
    map: &MomentumMap,
    branch: PolarBranch,
    x: f64,
) -> Result<f64, AsymptoticsError> {
    let lp = map.lipschitz_points();
    let x1 = lp[0];
    let xd = *lp.last().unwrap();
    match branch {
        PolarBranch::Left if x >= x1 => return Err(AsymptoticsError::EdgeRegion { x }),
        PolarBranch::Right if x <= xd => return Err(AsymptoticsError::EdgeRegion { x }),
        _ => {}
    }

    // y-linear coefficients of the Jacobian's second column at y = 0.
    // c_m carries the m-segment sums (plus alpha and the right-ray label),
    // c_n the n-segment sums (plus beta and the left-ray label).
    let seg_sum = |xs: &[f64], vs: &[f64]| -> f64 {
        let mut c = 0.0;
        for i in 0..xs.len() - 1 {
            c += (vs[i + 1] - vs[i]) / (2.0 * (xs[i + 1] - xs[i]))
                * (1.0 / (x - xs[i]) - 1.0 / (x - xs[i + 1]));
        }
        c
    };

    match map {
        MomentumMap::General {
            xs,
            ms,
            ns,
            s0,
            sd,
            alpha,
            beta,
        } => match branch {
            PolarBranch::Right => {
                let c22 = beta + s0 / (2.0 * (x - x1)) + seg_sum(xs, ns);
                finite_ratio(*sd, c22, x)
            }
            PolarBranch::Left => {
                let c12 = alpha + sd / (2.0 * (xd - x)) - seg_sum(xs, ms);
                finite_ratio(*s0, c12, x)
            }
        },
        MomentumMap::TaubNut {
            s0,
            sd,
            alpha,
            beta,
        } => match branch {
            PolarBranch::Right => finite_ratio(*sd, beta + s0 / (2.0 * x), x),
            PolarBranch::Left => finite_ratio(*s0, alpha + sd / (2.0 * -x), x),
        },
        MomentumMap::ParallelRay { xs, ns, s0, sd, .. } => {
            let c22 = seg_sum(xs, ns);
            let label = match branch {
                PolarBranch::Right => *sd,
                PolarBranch::Left => *s0,
            };
            finite_ratio(label, c22, x)
        }
        MomentumMap::R2S2Model {
            x1,
            xd,
            n1,
            nd,
            s0,
            sd,
            ..
        } => {
            let cn = (nd - n1) / (2.0 * (xd - x1));
            let c22 = cn * (1.0 / (x - x1) - 1.0 / (x - xd));
            let label = match branch {
                PolarBranch::Right => *sd,
                PolarBranch::Left => *s0,
            };
            finite_ratio(label, c22, x)
        }
    }
}

fn finite_ratio(label: f64, coeff: f64, x: f64) -> Result<f64, AsymptoticsError> {
    if coeff == 0.0 || !coeff.is_finite() {
        return Err(AsymptoticsError::DegenerateLimit { x });
    }
    Ok(label / coeff.abs())
}

/// Radial samples of a Killing norm (and optionally the polar Gaussian
/// curvature) along one boundary ray.
#[derive(Clone, Debug)]
pub struct PolarProfile {
    /// Strictly increasing radial parameter values.
    pub radii: Vec<f64>,
    /// |X|(r), non-negative.
    pub norms: Vec<f64>,
    pub curvatures: Option<Vec<f64>>,
}

/// Outcome of the closedness criteria on a sampled tail. Finite data cannot
/// certify an asymptotic statement, so the decision threshold and the tail
/// range are part of the verdict.
#[derive(Clone, Copy, Debug)]
pub struct ClosednessVerdict {
    /// Criterion (i): |X| >= C_1/r on the tail, decided as inf(|X| r) above
    /// the threshold.
    pub slow_decay: bool,
    pub inf_norm_times_r: f64,
    pub threshold: f64,
    /// Criterion (ii): K >= -2/r^2 pointwise; None when the profile carries
    /// no curvature samples.
    pub curvature_ok: Option<bool>,
    pub tail: (f64, f64),
}

pub const CLOSEDNESS_THRESHOLD: f64 = 1e-8;

pub fn closedness_criteria(profile: &PolarProfile) -> Result<ClosednessVerdict, AsymptoticsError> {
    let n = profile.radii.len();
    if n < 3 {
        return Err(AsymptoticsError::EmptyTail { n });
    }
    if profile.norms.len() != n {
        return Err(AsymptoticsError::BadProfile);
    }
    for k in 0..n {
        if profile.norms[k] < 0.0 || (k > 0 && profile.radii[k] <= profile.radii[k - 1]) {
            return Err(AsymptoticsError::BadProfile);
        }
    }
    if let Some(ks) = &profile.curvatures {
        if ks.len() != n {
            return Err(AsymptoticsError::BadProfile);
        }
    }
    let mut inf = f64::INFINITY;
    for k in 0..n {
        inf = inf.min(profile.norms[k] * profile.radii[k].abs());
    }
    let curvature_ok = profile.curvatures.as_ref().map(|ks| {
        ks.iter()
            .zip(&profile.radii)
            .all(|(&k, &r)| k >= -2.0 / (r * r))
    });
    Ok(ClosednessVerdict {
        slow_decay: inf > CLOSEDNESS_THRESHOLD,
        inf_norm_times_r: inf,
        threshold: CLOSEDNESS_THRESHOLD,
        curvature_ok,
        tail: (profile.radii[0], profile.radii[n - 1]),
    })
}
