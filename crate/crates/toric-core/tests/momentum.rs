use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use toric_core::momentum::{h2s2_forward, h2s2_inverse, taubnut_det_closed_form, MomentumMap};
use toric_core::polygon::{FamilyTag, LabeledPolygon};

const PI: f64 = std::f64::consts::PI;

fn taub_nut(s0: f64, sd: f64, alpha: f64, beta: f64) -> MomentumMap {
    MomentumMap::TaubNut { s0, sd, alpha, beta }
}

fn general_d1() -> MomentumMap {
    MomentumMap::General {
        xs: vec![0.0],
        ms: vec![0.0],
        ns: vec![0.0],
        s0: 1.0,
        sd: 1.0,
        alpha: 0.7,
        beta: 0.3,
    }
}

/// Two-vertex model matching the product-geometry charts: parameters
/// x = (-1, 1), p = ((1,-1), (1,1)), unit ray labels, alpha = 0.
fn strip_model() -> MomentumMap {
    MomentumMap::R2S2Model {
        x1: -1.0,
        xd: 1.0,
        m1: 1.0,
        n1: -1.0,
        md: 1.0,
        nd: 1.0,
        s0: 1.0,
        sd: 1.0,
        alpha: 0.0,
    }
}

#[test]
fn one_vertex_jacobian_goldens() {
    let a = taub_nut(1.0, 1.0, 0.0, 0.0).jacobian(0.0, 1.0).unwrap();
    assert!((a.m[0][0] - 0.5).abs() < 1e-15);
    assert!((a.m[0][1] - 0.5).abs() < 1e-15);
    assert!((a.m[1][0] + 0.5).abs() < 1e-15);
    assert!((a.m[1][1] - 0.5).abs() < 1e-15);
    assert!((a.det() - 0.5).abs() < 1e-15);

    let det = taub_nut(1.0, 1.0, 2.0, 0.0).jacobian(0.0, 1.0).unwrap().det();
    assert!((det - 1.5).abs() < 1e-15);
}

#[test]
fn one_vertex_determinant_closed_form_goldens() {
    // theta = pi/2, y = 1, no free parameters -> 1/2.
    assert!((taubnut_det_closed_form(1.0, 1.0, 0.0, 0.0, 0.0, 1.0) - 0.5).abs() < 1e-15);
    // alpha = beta = 1 on the vertical ray -> y + 1/2.
    for y in [0.5, 1.0, 2.5] {
        let d = taubnut_det_closed_form(1.0, 1.0, 1.0, 1.0, 0.0, y);
        assert!((d - (y + 0.5)).abs() < 1e-14);
    }
    // On the boundary sin(theta) = 0, so the determinant vanishes.
    assert_eq!(taubnut_det_closed_form(2.0, 3.0, 1.0, 4.0, 1.5, 0.0), 0.0);
    assert_eq!(taubnut_det_closed_form(2.0, 3.0, 1.0, 4.0, 0.0, 0.0), 0.0);
}

#[test]
fn closed_form_determinant_matches_jacobian_everywhere() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let (s0, sd) = (rng.gen_range(0.2..3.0), rng.gen_range(0.2..3.0));
        let (alpha, beta) = (rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0));
        let map = taub_nut(s0, sd, alpha, beta);
        let x = rng.gen_range(-5.0..5.0);
        let y = rng.gen_range(0.01..5.0);
        let det = map.jacobian(x, y).unwrap().det();
        let closed = taubnut_det_closed_form(s0, sd, alpha, beta, x, y);
        assert!(
            (det - closed).abs() <= 1e-13 * closed.abs(),
            "det {det} vs closed {closed} at ({x}, {y})"
        );
    }
}

#[test]
fn product_chart_forward_goldens() {
    let (phi, xy) = h2s2_forward(0.0, PI / 2.0);
    assert!((phi[0] - 1.0).abs() < 1e-15 && phi[1].abs() < 1e-15);
    assert!(xy[0].abs() < 1e-15 && xy[1].abs() < 1e-15);

    let (phi, xy) = h2s2_forward(2.0f64.sqrt().acosh(), PI / 2.0);
    assert!((phi[0] - 2.0f64.sqrt()).abs() < 1e-12 && phi[1].abs() < 1e-15);
    assert!(xy[0].abs() < 1e-12 && (xy[1] - 1.0).abs() < 1e-12);

    // phi = (2, 1/2) corresponds to (x, y) = (1, 3/2).
    let (phi, xy) = h2s2_forward(2.0f64.acosh(), (-0.5f64).acos());
    assert!((phi[0] - 2.0).abs() < 1e-12 && (phi[1] - 0.5).abs() < 1e-12);
    assert!((xy[0] - 1.0).abs() < 1e-12 && (xy[1] - 1.5).abs() < 1e-12);
}

#[test]
fn product_chart_inverse_goldens() {
    let phi = h2s2_inverse(0.0, 1.0);
    assert!((phi[0] - 2.0f64.sqrt()).abs() < 1e-15 && phi[1].abs() < 1e-15);

    let phi = h2s2_inverse(1.0, 1.5);
    assert!((phi[0] - 2.0).abs() < 1e-15 && (phi[1] - 0.5).abs() < 1e-15);

    for x in [1.1, 2.0, 7.5] {
        let phi = h2s2_inverse(x, 0.0);
        assert!((phi[0] - x).abs() < 1e-12 && (phi[1] - 1.0).abs() < 1e-12);
    }
}

#[test]
fn product_chart_round_trips_thousand_points() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(19);
    for _ in 0..1000 {
        let r1 = rng.gen_range(0.01..3.0);
        let r2 = rng.gen_range(0.01..PI - 0.01);
        let (phi, xy) = h2s2_forward(r1, r2);
        let back = h2s2_inverse(xy[0], xy[1]);
        assert!(
            (back[0] - phi[0]).abs() < 1e-12 && (back[1] - phi[1]).abs() < 1e-12,
            "round trip drifted at r = ({r1}, {r2})"
        );
    }
}

#[test]
fn inverse_chart_is_the_two_vertex_model() {
    let model = strip_model();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
    for _ in 0..500 {
        let x = rng.gen_range(-6.0..6.0);
        let y = rng.gen_range(0.0..4.0);
        let direct = h2s2_inverse(x, y);
        let phi = model.eval(x, y).unwrap();
        assert!(
            (direct[0] - phi[0]).abs() < 1e-12 && (direct[1] - phi[1]).abs() < 1e-12,
            "charts disagree at ({x}, {y}): {direct:?} vs {phi:?}"
        );
    }
}

#[test]
fn strip_boundary_hits_vertices_under_the_orientation_convention() {
    // Left Lipschitz point carries (1,-1), right carries (1,+1).
    let p = strip_model().eval_boundary(-1.0);
    assert!((p[0] - 1.0).abs() < 1e-12 && (p[1] + 1.0).abs() < 1e-12);
    let p = strip_model().eval_boundary(1.0);
    assert!((p[0] - 1.0).abs() < 1e-12 && (p[1] - 1.0).abs() < 1e-12);
}

#[test]
fn one_vertex_general_case_is_the_taub_nut_family() {
    let gen = general_d1();
    let model = taub_nut(1.0, 1.0, 0.7, 0.3);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(29);
    for _ in 0..1000 {
        let x = rng.gen_range(-3.0..3.0);
        let y = rng.gen_range(1e-6..3.0);
        let a = gen.eval(x, y).unwrap();
        let b = model.eval(x, y).unwrap();
        assert!((a[0] - b[0]).abs() < 1e-14 && (a[1] - b[1]).abs() < 1e-14);
        let ja = gen.jacobian(x, y).unwrap();
        let jb = model.jacobian(x, y).unwrap();
        assert!(ja.max_abs_diff(&jb) < 1e-14);
    }
}

#[test]
fn equal_m_two_vertex_data_reduces_parallel_rays_to_the_model() {
    let parallel = MomentumMap::ParallelRay {
        xs: vec![-1.0, 1.0],
        ms: vec![1.0, 1.0],
        ns: vec![-1.0, 1.0],
        s0: 1.0,
        sd: 1.0,
        alpha: 0.5,
    };
    let model = MomentumMap::R2S2Model {
        x1: -1.0,
        xd: 1.0,
        m1: 1.0,
        n1: -1.0,
        md: 1.0,
        nd: 1.0,
        s0: 1.0,
        sd: 1.0,
        alpha: 0.5,
    };
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
    for _ in 0..500 {
        let x = rng.gen_range(-5.0..5.0);
        let y = rng.gen_range(1e-6..5.0);
        let a = parallel.eval(x, y).unwrap();
        let b = model.eval(x, y).unwrap();
        assert!((a[0] - b[0]).abs() < 1e-12 && (a[1] - b[1]).abs() < 1e-12);
        let ja = parallel.jacobian(x, y).unwrap();
        let jb = model.jacobian(x, y).unwrap();
        assert!(ja.max_abs_diff(&jb) < 1e-12);
    }
}

fn fd_jacobian_error(map: &MomentumMap, x: f64, y: f64, h: f64) -> f64 {
    let a = map.jacobian(x, y).unwrap();
    let px = map.eval(x + h, y).unwrap();
    let mx = map.eval(x - h, y).unwrap();
    let py = map.eval(x, y + h).unwrap();
    let my = map.eval(x, y - h).unwrap();
    let mut worst: f64 = 0.0;
    for i in 0..2 {
        worst = worst.max(((px[i] - mx[i]) / (2.0 * h) - a.m[i][0]).abs());
        worst = worst.max(((py[i] - my[i]) / (2.0 * h) - a.m[i][1]).abs());
    }
    worst
}

#[test]
fn jacobians_match_finite_differences_at_second_order() {
    let maps: Vec<MomentumMap> = vec![
        MomentumMap::General {
            xs: vec![-1.0, 0.5, 1.0],
            ms: vec![0.0, 0.4, 1.0],
            ns: vec![0.0, 0.3, 0.5],
            s0: 1.0,
            sd: 2.0,
            alpha: 1.0,
            beta: 0.5,
        },
        MomentumMap::ParallelRay {
            xs: vec![-1.0, 0.0, 1.0],
            ms: vec![1.0, 0.3, 1.2],
            ns: vec![-1.0, 0.0, 1.0],
            s0: 1.0,
            sd: 1.0,
            alpha: 0.5,
        },
        taub_nut(1.0, 2.0, 1.0, 0.5),
        strip_model(),
    ];
    for map in &maps {
        let e1 = fd_jacobian_error(map, 0.3, 0.7, 1e-3);
        let e2 = fd_jacobian_error(map, 0.3, 0.7, 5e-4);
        assert!(e1 < 1e-5, "FD mismatch {e1} for {map:?}");
        let order = (e1 / e2).log2();
        assert!(
            (order - 2.0).abs() < 0.1,
            "observed convergence order {order} for {map:?}"
        );
    }
}

/// Three-term ray expansions of the two kernel functions behind every
/// Jacobian entry. The remainder after the displayed terms is O(r^-3).
fn x_kernel_series(xi: f64, r: f64, th: f64) -> f64 {
    let (s, c) = th.sin_cos();
    c - xi * s * s / r - 1.5 * xi * xi * c * s * s / (r * r)
}

fn y_kernel_series(xi: f64, r: f64, th: f64) -> f64 {
    let (s, c) = th.sin_cos();
    s + xi * s * c / r + 0.25 * xi * xi * (1.0 + 3.0 * (2.0 * th).cos()) * s / (r * r)
}

fn loglog_slope(samples: &[(f64, f64)]) -> f64 {
    let n = samples.len() as f64;
    let (mut mx, mut my) = (0.0, 0.0);
    for (x, y) in samples {
        mx += x.ln();
        my += y.ln();
    }
    mx /= n;
    my /= n;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (x, y) in samples {
        sxx += (x.ln() - mx) * (x.ln() - mx);
        sxy += (x.ln() - mx) * (y.ln() - my);
    }
    sxy / sxx
}

#[test]
fn ray_expansion_remainders_decay_at_third_order() {
    let xi = 5.0;
    for th in [PI / 6.0, PI / 2.0, 5.0 * PI / 6.0] {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for k in 0..16 {
            let r = 1e2 * (1e4f64 / 1e2).powf(k as f64 / 15.0);
            let (x, y) = (r * th.cos(), r * th.sin());
            let rr = (x - xi).hypot(y);
            xs.push((r, ((x - xi) / rr - x_kernel_series(xi, r, th)).abs()));
            ys.push((r, (y / rr - y_kernel_series(xi, r, th)).abs()));
        }
        let sx = loglog_slope(&xs);
        assert!((sx + 3.0).abs() < 0.1, "x-kernel slope {sx} at theta {th}");
        let sy = loglog_slope(&ys);
        if (th - PI / 2.0).abs() < 1e-12 {
            // The cubic coefficient carries cos(theta) and vanishes on the
            // vertical ray; the remainder falls off one order faster there.
            assert!(sy <= -2.9, "y-kernel slope {sy} at theta {th}");
        } else {
            assert!((sy + 3.0).abs() < 0.1, "y-kernel slope {sy} at theta {th}");
        }
    }
}

#[test]
fn boundary_trace_is_piecewise_affine_with_vertices_attained() {
    let poly = LabeledPolygon {
        lipschitz_points: vec![-1.0, 0.5, 1.0],
        vertices: vec![[0.0, 0.0], [0.4, 0.3], [1.0, 0.5]],
        s0: 1.0,
        sd: 2.0,
        alpha: 1.0,
        beta: 0.5,
        family: FamilyTag::General,
    };
    let map = MomentumMap::from_polygon(&poly).unwrap();
    for (i, &x) in poly.lipschitz_points.iter().enumerate() {
        let p = map.eval_boundary(x);
        assert!((p[0] - poly.vertices[i][0]).abs() < 1e-12);
        assert!((p[1] - poly.vertices[i][1]).abs() < 1e-12);
    }
    // Midpoint affinity inside each segment and along both rays.
    let knots = [-3.0, -1.0, 0.5, 1.0, 4.0];
    for w in knots.windows(2) {
        let (a, b) = (w[0], w[1]);
        let pa = map.eval_boundary(a);
        let pb = map.eval_boundary(b);
        let pm = map.eval_boundary(0.5 * (a + b));
        for j in 0..2 {
            assert!(
                (pm[j] - 0.5 * (pa[j] + pb[j])).abs() < 1e-12,
                "kink inside [{a}, {b}]"
            );
        }
    }
}

proptest! {
    /// The boundary trace of every family is affine between consecutive
    /// Lipschitz points (and along the rays); kinks happen only at the
    /// Lipschitz points themselves.
    #[test]
    fn boundary_affinity_between_lipschitz_points(
        x_mid in -0.9f64..0.9,
        m_mid in -1.0f64..1.0,
        n_mid in -1.0f64..1.0,
        t in 0.01f64..0.99,
    ) {
        let map = MomentumMap::General {
            xs: vec![-1.0, x_mid, 1.0],
            ms: vec![0.0, m_mid, 1.0],
            ns: vec![0.0, n_mid, 0.5],
            s0: 1.0,
            sd: 1.0,
            alpha: 0.5,
            beta: 0.5,
        };
        // Interpolate inside the left segment [-1, x_mid].
        let a = map.eval_boundary(-1.0);
        let b = map.eval_boundary(x_mid);
        let p = map.eval_boundary(-1.0 + t * (x_mid + 1.0));
        for j in 0..2 {
            let lin = a[j] + t * (b[j] - a[j]);
            prop_assert!((p[j] - lin).abs() < 1e-10);
        }
    }

    /// eval is continuous up to the boundary: values at tiny y approach the
    /// boundary trace.
    #[test]
    fn continuous_up_to_the_boundary(x in -3.0f64..3.0) {
        let map = general_d1();
        let deep = map.eval(x, 1e-7).unwrap();
        let edge = map.eval_boundary(x);
        prop_assert!((deep[0] - edge[0]).abs() < 1e-6);
        prop_assert!((deep[1] - edge[1]).abs() < 1e-6);
    }
}
