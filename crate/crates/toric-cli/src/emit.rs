//! Grid export: one row of derived quantities per grid point, in CSV or
//! JSON, with a fixed column order and full-precision floats so that output
//! is byte-identical regardless of how many worker threads sample the grid.

use rayon::prelude::*;
use serde::Serialize;
use std::fmt::Write as _;

use toric_core::asymptotics::det_quotient;
use toric_core::geometry::{field_sample, FieldSample};
use toric_core::momentum::MomentumMap;

use crate::config::Setup;
use crate::report::write_output;
use crate::{Failure, Flags, Format};

pub const CSV_HEADER: &str =
    "x,y,r,theta,phi1,phi2,A11,A12,A21,A22,detA,V,lambda,K_sigma,s4,q_model";

struct Row {
    sample: FieldSample,
    q_model: Option<f64>,
}

pub fn run(
    setup: &Setup,
    map: &MomentumMap,
    model: Option<&MomentumMap>,
    flags: &Flags,
) -> Result<(), Failure> {
    setup
        .grid
        .validate(setup.fd_step)
        .map_err(|e| Failure::Validation(e.to_string()))?;
    let pts: Vec<(f64, f64)> = setup.grid.points().collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(flags.jobs.unwrap_or(0))
        .build()
        .map_err(|e| Failure::Validation(format!("--jobs: {e}")))?;

    // Sampling is pure per point and the collect preserves index order, so
    // the row sequence does not depend on the thread count.
    let rows: Result<Vec<Row>, String> = pool.install(|| {
        pts.par_iter()
            .map(|&(x, y)| {
                let sample = field_sample(map, x, y, setup.fd_step).map_err(|e| e.to_string())?;
                let q_model = match model {
                    Some(m) => Some(det_quotient(map, m, x, y).map_err(|e| e.to_string())?),
                    None => None,
                };
                Ok(Row { sample, q_model })
            })
            .collect()
    });
    let rows = rows.map_err(Failure::Validation)?;

    let text = match flags.format {
        Some(Format::Json) => render_json(&rows),
        _ => render_csv(&rows),
    };
    write_output(&text, flags.out.as_deref())
}

fn render_csv(rows: &[Row]) -> String {
    let mut out = String::with_capacity(rows.len() * 420 + CSV_HEADER.len() + 1);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let s = &row.sample;
        for (i, v) in numeric_fields(s).into_iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "{v:.16e}");
        }
        out.push(',');
        if let Some(q) = row.q_model {
            let _ = write!(out, "{q:.16e}");
        }
        out.push('\n');
    }
    out
}

fn numeric_fields(s: &FieldSample) -> [f64; 15] {
    [
        s.x,
        s.y,
        s.r,
        s.theta,
        s.phi[0],
        s.phi[1],
        s.a.m[0][0],
        s.a.m[0][1],
        s.a.m[1][0],
        s.a.m[1][1],
        s.det_a,
        s.blocks.v,
        s.blocks.lambda,
        s.k_sigma,
        s.s4,
    ]
}

#[derive(Serialize)]
struct JsonRow {
    x: f64,
    y: f64,
    r: f64,
    theta: f64,
    phi1: f64,
    phi2: f64,
    #[serde(rename = "A11")]
    a11: f64,
    #[serde(rename = "A12")]
    a12: f64,
    #[serde(rename = "A21")]
    a21: f64,
    #[serde(rename = "A22")]
    a22: f64,
    #[serde(rename = "detA")]
    det_a: f64,
    #[serde(rename = "V")]
    v: f64,
    lambda: f64,
    #[serde(rename = "K_sigma")]
    k_sigma: f64,
    s4: f64,
    q_model: Option<f64>,
}

fn render_json(rows: &[Row]) -> String {
    let json_rows: Vec<JsonRow> = rows
        .iter()
        .map(|row| {
            let f = numeric_fields(&row.sample);
            JsonRow {
                x: f[0],
                y: f[1],
                r: f[2],
                theta: f[3],
                phi1: f[4],
                phi2: f[5],
                a11: f[6],
                a12: f[7],
                a21: f[8],
                a22: f[9],
                det_a: f[10],
                v: f[11],
                lambda: f[12],
                k_sigma: f[13],
                s4: f[14],
                q_model: row.q_model,
            }
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&json_rows).expect("rows serialize");
    s.push('\n');
    s
}
