//! Symplectic potentials: convex scalar fields G(phi) whose Hessians are
//! reduced metrics.
//!
//! Built-ins carry closed-form derivatives (the unit-disk example and
//! quadratics); user-supplied potentials fall back to finite differences.
//! On top of potential evaluation sit the numeric Legendre transform with
//! hodograph verification, the holomorphic-frame curvature contraction, and
//! convexity-based geodesic length bounds.

use crate::geometry::{GeometryError, PhiMetric};
use crate::linalg::{dot, Mat2};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PotentialError {
    #[error("phi = ({phi1}, {phi2}) is outside the potential's domain")]
    OutsideDomain { phi1: f64, phi2: f64 },
    #[error("Hessian is not positive definite at grid index {index} (phi = ({phi1}, {phi2}))")]
    NonConvexAt {
        index: usize,
        phi1: f64,
        phi2: f64,
    },
    #[error("segment leaves the domain (margin {margin}) at t = {t}")]
    SegmentExitsDomain { t: f64, margin: f64 },
    #[error("empty phi grid")]
    EmptyGrid,
}

/// A convex potential over a convex phi-domain. The Hessian is the reduced
/// metric G_ij; the gradient is the hodograph map phi -> xi.
pub trait SymplecticPotential: Sync {
    fn eval(&self, phi: [f64; 2]) -> Result<f64, PotentialError>;
    fn gradient(&self, phi: [f64; 2]) -> Result<[f64; 2], PotentialError>;
    fn hessian(&self, phi: [f64; 2]) -> Result<Mat2, PotentialError>;
    fn contains(&self, phi: [f64; 2]) -> bool;
    /// Domain membership with a safety margin away from any singular
    /// boundary; defaults to plain membership for potentials without one.
    fn contains_with_margin(&self, phi: [f64; 2], _margin: f64) -> bool {
        self.contains(phi)
    }
}

/// Potentials are phi-coordinate metrics: G_ij = Hessian.
impl<P: SymplecticPotential + ?Sized> PhiMetric for P {
    fn g_dn(&self, phi: [f64; 2]) -> Result<Mat2, GeometryError> {
        self.hessian(phi).map_err(|e| match e {
            PotentialError::OutsideDomain { phi1, phi2 } => {
                GeometryError::OutsideDomain { phi1, phi2 }
            }
            _ => GeometryError::DegenerateMetric {
                phi1: phi[0],
                phi2: phi[1],
            },
        })
    }
}

/// The unit-disk example: G = -(1/2) log(1 - |phi|^2) on |phi| < 1, with
/// closed-form curvature.
#[derive(Clone, Copy, Debug, Default)]
pub struct DiskPotential;

/// Closed-form data of the disk example at one point.
#[derive(Clone, Copy, Debug)]
pub struct DiskClosedForm {
    pub g: f64,
    pub g_dn: Mat2,
    /// Scalar curvature of the associated 4-metric.
    pub r: f64,
    /// Pointwise norm of the curvature form.
    pub curvature_norm: f64,
}

/// Evaluate the disk example's displayed formulas:
/// G_11 = (1 + phi1^2 - phi2^2)/(1-rho^2)^2 (and symmetrically),
/// R = 4(2 - 4 rho^2 - 3 rho^4 - rho^6)/(1 + rho^2)^3, and the curvature
/// norm 32(3 - 10 rho^2 + 29 rho^4 + 24 rho^6 + 19 rho^8 + 6 rho^10 +
/// rho^12)/(1 + rho^2)^6.
pub fn disk_example(phi1: f64, phi2: f64) -> Result<DiskClosedForm, PotentialError> {
    let rho2 = phi1 * phi1 + phi2 * phi2;
    if rho2 >= 1.0 {
        return Err(PotentialError::OutsideDomain { phi1, phi2 });
    }
    let d = 1.0 - rho2;
    let d2 = d * d;
    let g_dn = Mat2::new(
        (1.0 + phi1 * phi1 - phi2 * phi2) / d2,
        2.0 * phi1 * phi2 / d2,
        2.0 * phi1 * phi2 / d2,
        (1.0 - phi1 * phi1 + phi2 * phi2) / d2,
    );
    let p = 1.0 + rho2;
    let r = 4.0 * (2.0 - 4.0 * rho2 - 3.0 * rho2.powi(2) - rho2.powi(3)) / p.powi(3);
    let curvature_norm = 32.0
        * (3.0 - 10.0 * rho2 + 29.0 * rho2.powi(2) + 24.0 * rho2.powi(3) + 19.0 * rho2.powi(4)
            + 6.0 * rho2.powi(5)
            + rho2.powi(6))
        / p.powi(6);
    Ok(DiskClosedForm {
        g: -0.5 * d.ln(),
        g_dn,
        r,
        curvature_norm,
    })
}

impl SymplecticPotential for DiskPotential {
    fn eval(&self, phi: [f64; 2]) -> Result<f64, PotentialError> {
        Ok(disk_example(phi[0], phi[1])?.g)
    }

    fn gradient(&self, phi: [f64; 2]) -> Result<[f64; 2], PotentialError> {
        let rho2 = phi[0] * phi[0] + phi[1] * phi[1];
        if rho2 >= 1.0 {
            return Err(PotentialError::OutsideDomain {
                phi1: phi[0],
                phi2: phi[1],
            });
        }
        let d = 1.0 - rho2;
        Ok([phi[0] / d, phi[1] / d])
    }

    fn hessian(&self, phi: [f64; 2]) -> Result<Mat2, PotentialError> {
        Ok(disk_example(phi[0], phi[1])?.g_dn)
    }

    fn contains(&self, phi: [f64; 2]) -> bool {
        phi[0] * phi[0] + phi[1] * phi[1] < 1.0
    }

    fn contains_with_margin(&self, phi: [f64; 2], margin: f64) -> bool {
        phi[0].hypot(phi[1]) <= 1.0 - margin
    }
}

/// G = (1/2) phi^T C phi with constant positive-definite C; the flat case.
#[derive(Clone, Copy, Debug)]
pub struct QuadraticPotential {
    pub coeffs: Mat2,
}

impl Default for QuadraticPotential {
    fn default() -> Self {
        QuadraticPotential {
            coeffs: Mat2::identity(),
        }
    }
}

impl SymplecticPotential for QuadraticPotential {
    fn eval(&self, phi: [f64; 2]) -> Result<f64, PotentialError> {
        Ok(0.5 * dot(phi, self.coeffs.mul_vec(phi)))
    }

    fn gradient(&self, phi: [f64; 2]) -> Result<[f64; 2], PotentialError> {
        Ok(self.coeffs.mul_vec(phi))
    }

    fn hessian(&self, _phi: [f64; 2]) -> Result<Mat2, PotentialError> {
        Ok(self.coeffs)
    }

    fn contains(&self, _phi: [f64; 2]) -> bool {
        true
    }
}

/// User-supplied potential: closure plus domain predicate, derivatives by
/// central differences at the stored step.
pub struct FnPotential {
    pub f: Box<dyn Fn([f64; 2]) -> f64 + Sync>,
    pub domain: Box<dyn Fn([f64; 2]) -> bool + Sync>,
    pub h: f64,
}

impl SymplecticPotential for FnPotential {
    fn eval(&self, phi: [f64; 2]) -> Result<f64, PotentialError> {
        if !self.contains(phi) {
            return Err(PotentialError::OutsideDomain {
                phi1: phi[0],
                phi2: phi[1],
            });
        }
        Ok((self.f)(phi))
    }

    fn gradient(&self, phi: [f64; 2]) -> Result<[f64; 2], PotentialError> {
        let h = self.h;
        let mut g = [0.0; 2];
        for i in 0..2 {
            let mut qp = phi;
            let mut qm = phi;
            qp[i] += h;
            qm[i] -= h;
            g[i] = (self.eval(qp)? - self.eval(qm)?) / (2.0 * h);
        }
        Ok(g)
    }

    fn hessian(&self, phi: [f64; 2]) -> Result<Mat2, PotentialError> {
        let h = self.h;
        let f0 = self.eval(phi)?;
        let at = |dx: f64, dy: f64| self.eval([phi[0] + dx, phi[1] + dy]);
        let d11 = (at(h, 0.0)? - 2.0 * f0 + at(-h, 0.0)?) / (h * h);
        let d22 = (at(0.0, h)? - 2.0 * f0 + at(0.0, -h)?) / (h * h);
        let d12 = (at(h, h)? - at(h, -h)? - at(-h, h)? + at(-h, -h)?) / (4.0 * h * h);
        Ok(Mat2::new(d11, d12, d12, d22))
    }

    fn contains(&self, phi: [f64; 2]) -> bool {
        (self.domain)(phi)
    }
}

/// Matched samples of a potential and its Legendre conjugate:
/// xi_k = grad G(phi_k) and F(xi_k) + G(phi_k) = <xi_k, phi_k>.
#[derive(Clone, Debug)]
pub struct LegendrePair {
    pub phi_points: Vec<[f64; 2]>,
    pub g_values: Vec<f64>,
    pub xi_points: Vec<[f64; 2]>,
    pub f_values: Vec<f64>,
}

/// Evaluate the conjugate F(xi) = sup_phi (<xi, phi> - G(phi)) by Newton
/// ascent from `seed` (the stationarity condition is grad G(phi) = xi),
/// backtracking to stay inside the domain. Returns the maximizer and value.
fn conjugate_at(
    pot: &dyn SymplecticPotential,
    xi: [f64; 2],
    seed: [f64; 2],
) -> Result<([f64; 2], f64), PotentialError> {
    let mut phi = seed;
    let scale = 1.0 + xi[0].abs() + xi[1].abs();
    for _ in 0..60 {
        let grad = pot.gradient(phi)?;
        let res = [xi[0] - grad[0], xi[1] - grad[1]];
        if res[0].abs() + res[1].abs() < 1e-12 * scale {
            break;
        }
        let hess = pot.hessian(phi)?;
        let step = match hess.inverse() {
            Some(hinv) => hinv.mul_vec(res),
            None => break,
        };
        let mut t = 1.0;
        let mut next = [phi[0] + step[0], phi[1] + step[1]];
        let mut tries = 0;
        while !pot.contains(next) && tries < 40 {
            t *= 0.5;
            next = [phi[0] + t * step[0], phi[1] + t * step[1]];
            tries += 1;
        }
        if !pot.contains(next) {
            break;
        }
        phi = next;
    }
    let value = dot(xi, phi) - pot.eval(phi)?;
    Ok((phi, value))
}

/// Conjugate a potential over an explicit phi grid. The xi grid is the image
/// of the gradient map; each F value is the grid sup refined by Newton
/// ascent. Convexity of the Hessian is checked at every grid point.
pub fn legendre_transform(
    pot: &dyn SymplecticPotential,
    phi_grid: &[[f64; 2]],
) -> Result<LegendrePair, PotentialError> {
    if phi_grid.is_empty() {
        return Err(PotentialError::EmptyGrid);
    }
    let mut g_values = Vec::with_capacity(phi_grid.len());
    let mut xi_points = Vec::with_capacity(phi_grid.len());
    for (index, &phi) in phi_grid.iter().enumerate() {
        if !pot.contains(phi) {
            return Err(PotentialError::OutsideDomain {
                phi1: phi[0],
                phi2: phi[1],
            });
        }
        let h = pot.hessian(phi)?;
        if !(h.m[0][0] > 0.0 && h.det() > 0.0) {
            return Err(PotentialError::NonConvexAt {
                index,
                phi1: phi[0],
                phi2: phi[1],
            });
        }
        g_values.push(pot.eval(phi)?);
        xi_points.push(pot.gradient(phi)?);
    }

    let mut f_values = Vec::with_capacity(phi_grid.len());
    for (k, &xi) in xi_points.iter().enumerate() {
        // Grid sup seeds the ascent; for matched xi the argmax is phi_k
        // itself, but scanning keeps the sup honest for coarse grids.
        let mut best = k;
        let mut best_val = dot(xi, phi_grid[k]) - g_values[k];
        for (j, &phi) in phi_grid.iter().enumerate() {
            let v = dot(xi, phi) - g_values[j];
            if v > best_val {
                best_val = v;
                best = j;
            }
        }
        let (_, value) = conjugate_at(pot, xi, phi_grid[best])?;
        f_values.push(value.max(best_val));
    }
    Ok(LegendrePair {
        phi_points: phi_grid.to_vec(),
        g_values,
        xi_points,
        f_values,
    })
}

/// Residuals of the hodograph relations on a Legendre pair: the gradient
/// identity phi^i = dF/dxi_i (conjugate-evaluation central differences) and
/// the Fenchel identity F(xi) + G(phi) = <xi, phi> at matched pairs.
#[derive(Clone, Copy, Debug)]
pub struct HodographReport {
    pub max_gradient_residual: f64,
    pub max_fenchel_residual: f64,
}

pub fn hodograph_check(pot: &dyn SymplecticPotential, pair: &LegendrePair) -> HodographReport {
    let delta = 1e-5;
    let mut max_grad = 0.0_f64;
    let mut max_fenchel = 0.0_f64;
    for k in 0..pair.phi_points.len() {
        let phi = pair.phi_points[k];
        let xi = pair.xi_points[k];
        let fenchel = (pair.f_values[k] + pair.g_values[k] - dot(xi, phi)).abs();
        max_fenchel = max_fenchel.max(fenchel);
        for i in 0..2 {
            let mut xp = xi;
            let mut xm = xi;
            xp[i] += delta;
            xm[i] -= delta;
            let fp = conjugate_at(pot, xp, phi);
            let fm = conjugate_at(pot, xm, phi);
            match (fp, fm) {
                (Ok((_, vp)), Ok((_, vm))) => {
                    let d = (vp - vm) / (2.0 * delta);
                    max_grad = max_grad.max((d - phi[i]).abs());
                }
                _ => {
                    max_grad = f64::INFINITY;
                }
            }
        }
    }
    HodographReport {
        max_gradient_residual: max_grad,
        max_fenchel_residual: max_fenchel,
    }
}

/// Value of G recovered by conjugating F back: sup over the xi grid refined
/// by ascent with conjugate-evaluated F. Used by the involution check.
pub fn conjugate_back(
    pot: &dyn SymplecticPotential,
    pair: &LegendrePair,
    phi: [f64; 2],
) -> Result<f64, PotentialError> {
    let mut best = 0;
    let mut best_val = f64::NEG_INFINITY;
    for (j, &xi) in pair.xi_points.iter().enumerate() {
        let v = dot(phi, xi) - pair.f_values[j];
        if v > best_val {
            best_val = v;
            best = j;
        }
    }
    // Stationarity: the maximizing xi satisfies grad F(xi) = phi, i.e.
    // xi = grad G(phi); polish by evaluating F there via conjugation.
    let xi_star = pot.gradient(phi)?;
    let (_, f_star) = conjugate_at(pot, xi_star, pair.phi_points[best])?;
    Ok(best_val.max(dot(phi, xi_star) - f_star))
}

/// Scalar curvature from the holomorphic-frame curvature form: nested
/// directional derivatives grad_phi^k = G^{ks} d_s applied to G_ij, then
/// contracted; the single overall normalization is calibrated once against
/// the disk origin value R = 8 at the same step and frozen by construction.
pub fn curvature_form_scalar(
    pot: &dyn SymplecticPotential,
    phi: [f64; 2],
    h: f64,
) -> Result<f64, PotentialError> {
    let raw = curvature_form_raw(pot, phi, h)?;
    let raw0 = curvature_form_raw(&DiskPotential, [0.0, 0.0], h)?;
    Ok(8.0 * raw / raw0)
}

/// Uncalibrated contraction sum_{i,k,l} G_{kl} T^i_{i,k,l} with
/// T^i_{j,k,l} = grad_phi^k (G^{is} grad_phi^l (G_{js})).
fn curvature_form_raw(
    pot: &dyn SymplecticPotential,
    phi: [f64; 2],
    h: f64,
) -> Result<f64, PotentialError> {
    // mid[i][j][l](q) = G^{is}(q) * G^{lt}(q) d_t G_{js}(q).
    let mid = |q: [f64; 2]| -> Result<[[[f64; 2]; 2]; 2], PotentialError> {
        let g = pot.hessian(q)?;
        let gi = g.inverse().ok_or(PotentialError::NonConvexAt {
            index: 0,
            phi1: q[0],
            phi2: q[1],
        })?;
        let mut dg = [Mat2::identity(); 2];
        for t in 0..2 {
            let mut qp = q;
            let mut qm = q;
            qp[t] += h;
            qm[t] -= h;
            dg[t] = pot.hessian(qp)?.sub(&pot.hessian(qm)?).scale(1.0 / (2.0 * h));
        }
        let mut out = [[[0.0; 2]; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for l in 0..2 {
                    let mut v = 0.0;
                    for s in 0..2 {
                        for t in 0..2 {
                            v += gi.m[i][s] * gi.m[l][t] * dg[t].m[j][s];
                        }
                    }
                    out[i][j][l] = v;
                }
            }
        }
        Ok(out)
    };

    let g0 = pot.hessian(phi)?;
    let gi0 = g0.inverse().ok_or(PotentialError::NonConvexAt {
        index: 0,
        phi1: phi[0],
        phi2: phi[1],
    })?;
    // d_u mid by central differences, then the outer directional G^{ku} d_u.
    let mut dmid = [[[[0.0; 2]; 2]; 2]; 2]; // [u][i][j][l]
    for u in 0..2 {
        let mut qp = phi;
        let mut qm = phi;
        qp[u] += h;
        qm[u] -= h;
        let mp = mid(qp)?;
        let mm = mid(qm)?;
        for i in 0..2 {
            for j in 0..2 {
                for l in 0..2 {
                    dmid[u][i][j][l] = (mp[i][j][l] - mm[i][j][l]) / (2.0 * h);
                }
            }
        }
    }
    let mut raw = 0.0;
    for i in 0..2 {
        for k in 0..2 {
            for l in 0..2 {
                let mut t_iikl = 0.0;
                for u in 0..2 {
                    t_iikl += gi0.m[k][u] * dmid[u][i][i][l];
                }
                raw += g0.m[k][l] * t_iikl;
            }
        }
    }
    Ok(raw)
}

/// Geodesic length of a straight phi-segment against the convexity bound
/// sqrt(<grad G(b) - grad G(a), b - a>).
#[derive(Clone, Copy, Debug)]
pub struct SegmentBound {
    pub length: f64,
    pub bound: f64,
}

/// Integrand-level margin keeping quadrature nodes away from singular
/// boundaries (the disk integrand blows up at rho = 1).
const SEGMENT_MARGIN: f64 = 1e-3;

pub fn segment_length_bound(
    pot: &dyn SymplecticPotential,
    a: [f64; 2],
    b: [f64; 2],
) -> Result<SegmentBound, PotentialError> {
    let v = [b[0] - a[0], b[1] - a[1]];
    if v[0] == 0.0 && v[1] == 0.0 {
        return Ok(SegmentBound {
            length: 0.0,
            bound: 0.0,
        });
    }
    let speed = |t: f64| -> Result<f64, PotentialError> {
        let q = [a[0] + t * v[0], a[1] + t * v[1]];
        if !pot.contains_with_margin(q, SEGMENT_MARGIN) {
            return Err(PotentialError::SegmentExitsDomain {
                t,
                margin: SEGMENT_MARGIN,
            });
        }
        let hess = pot.hessian(q)?;
        Ok(dot(v, hess.mul_vec(v)).max(0.0).sqrt())
    };
    let length = adaptive_simpson(&speed, 0.0, 1.0, 1e-8)?;
    let ga = pot.gradient(a)?;
    let gb = pot.gradient(b)?;
    let gap = dot([gb[0] - ga[0], gb[1] - ga[1]], v);
    let bound = gap.max(0.0).sqrt();
    debug_assert!(
        length <= bound + 1e-6,
        "length {length} exceeded convexity bound {bound}"
    );
    Ok(SegmentBound { length, bound })
}

/// Adaptive Simpson quadrature with absolute tolerance.
fn adaptive_simpson(
    f: &dyn Fn(f64) -> Result<f64, PotentialError>,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<f64, PotentialError> {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> Result<f64, PotentialError>,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> Result<f64, PotentialError> {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm)?;
        let frm = f(rm)?;
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return Ok(left + right + delta / 15.0);
        }
        Ok(recurse(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)?
            + recurse(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)?)
    }
    let fa = f(a)?;
    let m = 0.5 * (a + b);
    let fm = f(m)?;
    let fb = f(b)?;
    let whole = simpson(fa, fm, fb, a, b);
    recurse(f, a, b, fa, fm, fb, whole, tol, 40)
}
