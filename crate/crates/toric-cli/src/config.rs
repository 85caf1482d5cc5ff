//! TOML config schema and its resolution into a fully-defaulted run setup.
//!
//! A config names a family and its labels; everything else (grid extents,
//! finite-difference step, tolerances, ray angles) has defaults and can be
//! overridden per-run by command-line flags. Schema problems and polygon
//! violations are reported with the offending field's name.

use serde::Deserialize;
use std::f64::consts::PI;
use std::path::Path;

use toric_core::geometry::GridSpec;
use toric_core::momentum::MomentumMap;
use toric_core::polygon::{validate_polygon, FamilyTag, LabeledPolygon};

use crate::{Failure, Flags};

pub const DEFAULT_FD_STEP: f64 = 1e-3;
pub const DEFAULT_TOL: f64 = 1e-6;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    family: String,
    alpha: Option<f64>,
    beta: Option<f64>,
    s0: Option<f64>,
    sd: Option<f64>,
    lipschitz_points: Option<Vec<f64>>,
    vertices: Option<Vec<[f64; 2]>>,
    grid: Option<RawGrid>,
    fd_step: Option<f64>,
    tol: Option<f64>,
    rays: Option<RawRays>,
}

#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    x_min: Option<f64>,
    x_max: Option<f64>,
    y_min: Option<f64>,
    y_max: Option<f64>,
    nx: Option<usize>,
    ny: Option<usize>,
}

#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRays {
    thetas: Option<Vec<f64>>,
    r_min: Option<f64>,
    r_max: Option<f64>,
    n: Option<usize>,
}

/// A config with every default filled in and every flag override applied.
pub struct Setup {
    pub polygon: LabeledPolygon,
    pub grid: GridSpec,
    pub fd_step: f64,
    pub tol: f64,
    pub thetas: Vec<f64>,
    pub r_min: f64,
    pub r_max: f64,
    pub rsamples: usize,
}

impl Setup {
    pub fn load(flags: &Flags) -> Result<Setup, Failure> {
        let path = flags.config.as_ref().ok_or_else(|| {
            Failure::Validation("--config PATH is required for this subcommand".into())
        })?;
        let mut setup = Setup::from_file(path)?;
        setup.apply_flags(flags)?;
        Ok(setup)
    }

    pub fn from_file(path: &Path) -> Result<Setup, Failure> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Failure::Io(format!("cannot read config {}: {e}", path.display()))
        })?;
        let raw: RawConfig = toml::from_str(&text).map_err(|e| {
            Failure::Validation(format!("config {}: {e}", path.display()))
        })?;
        Setup::from_raw(raw)
    }

    fn from_raw(raw: RawConfig) -> Result<Setup, Failure> {
        let family = FamilyTag::from_name(&raw.family).ok_or_else(|| {
            Failure::Validation(format!(
                "family: unknown family '{}'; valid names: {}",
                raw.family,
                FamilyTag::ALL_NAMES.join(", ")
            ))
        })?;
        let s0 = raw
            .s0
            .ok_or_else(|| Failure::Validation("s0: required".into()))?;
        let sd = raw
            .sd
            .ok_or_else(|| Failure::Validation("sd: required".into()))?;
        // Free parameters default to zero; the one-vertex family defaults to
        // its fixed combinatorial data so {family, alpha, beta, s0, sd} is a
        // complete config for it.
        let alpha = raw.alpha.unwrap_or(0.0);
        let beta = raw.beta.unwrap_or(0.0);
        let (lipschitz_points, vertices) = match family {
            FamilyTag::TaubNut => (
                raw.lipschitz_points.unwrap_or_else(|| vec![0.0]),
                raw.vertices.unwrap_or_else(|| vec![[0.0, 0.0]]),
            ),
            _ => (
                raw.lipschitz_points.ok_or_else(|| {
                    Failure::Validation(format!(
                        "lipschitz_points: required for family '{}'",
                        family.name()
                    ))
                })?,
                raw.vertices.ok_or_else(|| {
                    Failure::Validation(format!(
                        "vertices: required for family '{}'",
                        family.name()
                    ))
                })?,
            ),
        };
        let g = raw.grid.unwrap_or_default();
        let rays = raw.rays.unwrap_or_default();
        Ok(Setup {
            polygon: LabeledPolygon {
                lipschitz_points,
                vertices,
                s0,
                sd,
                alpha,
                beta,
                family,
            },
            grid: GridSpec {
                x_min: g.x_min.unwrap_or(-5.0),
                x_max: g.x_max.unwrap_or(5.0),
                y_min: g.y_min.unwrap_or(0.1),
                y_max: g.y_max.unwrap_or(10.0),
                nx: g.nx.unwrap_or(50),
                ny: g.ny.unwrap_or(50),
            },
            fd_step: raw.fd_step.unwrap_or(DEFAULT_FD_STEP),
            tol: raw.tol.unwrap_or(DEFAULT_TOL),
            thetas: rays
                .thetas
                .unwrap_or_else(|| vec![PI / 4.0, PI / 2.0, 3.0 * PI / 4.0]),
            r_min: rays.r_min.unwrap_or(1e2),
            r_max: rays.r_max.unwrap_or(1e4),
            rsamples: rays.n.unwrap_or(24),
        })
    }

    fn apply_flags(&mut self, flags: &Flags) -> Result<(), Failure> {
        if let Some(spec) = &flags.grid {
            let parts: Vec<Option<usize>> = spec
                .split(',')
                .map(|s| s.trim().parse::<usize>().ok())
                .collect();
            match parts.as_slice() {
                [Some(nx), Some(ny)] => {
                    self.grid.nx = *nx;
                    self.grid.ny = *ny;
                }
                _ => {
                    return Err(Failure::Validation(format!(
                        "--grid: expected NX,NY, got '{spec}'"
                    )))
                }
            }
        }
        if let Some(h) = flags.fd_step {
            if !(h > 0.0) {
                return Err(Failure::Validation("--fd-step must be positive".into()));
            }
            self.fd_step = h;
        }
        if let Some(t) = flags.tol {
            if !(t >= 0.0) {
                return Err(Failure::Validation("--tol must be non-negative".into()));
            }
            self.tol = t;
        }
        if let Some(list) = &flags.theta {
            let thetas: Option<Vec<f64>> = list
                .split(',')
                .map(|s| s.trim().parse::<f64>().ok())
                .collect();
            self.thetas = thetas.filter(|v| !v.is_empty()).ok_or_else(|| {
                Failure::Validation(format!(
                    "--theta: expected a comma-separated list of angles, got '{list}'"
                ))
            })?;
        }
        if let Some(r) = flags.rmin {
            self.r_min = r;
        }
        if let Some(r) = flags.rmax {
            self.r_max = r;
        }
        if let Some(n) = flags.rsamples {
            self.rsamples = n;
        }
        Ok(())
    }

    /// The momentum map of a polygon that passed validation; the first
    /// violation otherwise, named by its field.
    pub fn checked_map(&self) -> Result<MomentumMap, Failure> {
        let rep = validate_polygon(&self.polygon);
        if let Some(e) = rep.errors.first() {
            return Err(Failure::Validation(e.to_string()));
        }
        MomentumMap::from_polygon(&self.polygon).map_err(|e| Failure::Validation(e.to_string()))
    }
}
