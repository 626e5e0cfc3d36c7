//! Scaling positivity-preserving limiter for Euler density and pressure.
//!
//! Per cell, two conservative scalings toward the cell average: first the
//! density deviations are scaled by theta1 so rho >= eps at every limiter
//! point, then all components are scaled by theta2 so p >= eps there. Both
//! stages keep the cell averages exactly (the mean coefficient is never
//! touched), and the admissible set is convex, so scaled states stay
//! admissible. The limiter points are the (k+1) Gauss-Lobatto nodes in 1D and
//! the union (Gauss_x x Lobatto_y) u (Lobatto_x x Gauss_y) in 2D.

use crate::basis::Basis;
use crate::equation::Euler;
use crate::error::{Error, Result};

/// The positivity floor for density and pressure.
pub const PP_EPS: f64 = 1e-13;

/// Outcome of limiting one cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaPair {
    pub theta1: f64,
    pub theta2: f64,
}

impl ThetaPair {
    pub fn limited(&self) -> bool {
        self.theta1 < 1.0 || self.theta2 < 1.0
    }
}

/// Solve p((1-t) ubar + t utilde) = eps for the smallest root in [0, 1].
///
/// All components are affine in t, so (gamma-1)(E(t) rho(t) - |m(t)|^2/2)
/// - eps rho(t) is an exact quadratic in t; a bisection fallback covers the
/// near-degenerate discriminant.
fn pressure_scale_root(eu: &Euler, ubar: &[f64], upt: &[f64], eps: f64) -> f64 {
    let p = ubar.len();
    let gm1 = eu.gamma - 1.0;
    // q(t) = gm1 (E(t) rho(t) - 0.5 |m(t)|^2) - eps rho(t); q(0) > 0 > q(1)
    let q = |t: f64| -> f64 {
        let mut s = [0.0; crate::MAX_P];
        for i in 0..p {
            s[i] = (1.0 - t) * ubar[i] + t * upt[i];
        }
        let msq = Euler::momentum_sq(&s[..p]);
        gm1 * (s[p - 1] * s[0] - 0.5 * msq) - eps * s[0]
    };
    // quadratic coefficients via exact evaluation at t = 0, 1/2, 1
    let q0 = q(0.0);
    let qh = q(0.5);
    let q1 = q(1.0);
    let c = q0;
    let a = 2.0 * (q1 + q0) - 4.0 * qh;
    let b = q1 - q0 - a;
    let disc = b * b - 4.0 * a * c;
    let root = if a.abs() < 1e-14 * (b.abs() + c.abs()).max(1.0) {
        // effectively linear
        if b.abs() > 0.0 {
            Some(-c / b)
        } else {
            None
        }
    } else if disc >= 1e-12 * (b * b).max(4.0 * (a * c).abs()) {
        let sq = disc.sqrt();
        // citardauq form picks stable roots; take the smallest in [0,1]
        let r1 = (-b - b.signum() * sq) / (2.0 * a);
        let r2 = c / (a * r1);
        let mut best = None;
        for r in [r1, r2] {
            if (0.0..=1.0).contains(&r) {
                best = Some(best.map_or(r, |bst: f64| bst.min(r)));
            }
        }
        best
    } else {
        None
    };
    match root {
        Some(t) if (0.0..=1.0).contains(&t) && q(t).abs() <= 1e-9 * q0.abs().max(1.0) => t,
        _ => {
            // bisection on q: q(0) > 0, q(1) < 0
            let mut lo = 0.0;
            let mut hi = 1.0;
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if q(mid) > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            lo
        }
    }
}

/// Limit one cell given its modal blocks and the point-evaluation table.
///
/// `blocks` holds p mutable mode slices (length nm each); `point_values`
/// evaluates all components at every limiter point into a scratch row.
/// Returns the scaling pair.
pub fn limit_cell_with_points(
    eu: &Euler,
    eps: f64,
    means: &[f64],
    point_states: &mut [f64], // n_pts x p, prefilled with values at limiter points
    n_pts: usize,
    apply: &mut dyn FnMut(usize, f64), // scale component deviations: (comp, theta)
    cell_label: &dyn Fn() -> String,
) -> Result<ThetaPair> {
    let p = means.len();
    let rho_bar = means[0];
    let p_bar = eu.pressure(means);
    if !(rho_bar > eps) || !(p_bar > eps) || !rho_bar.is_finite() || !p_bar.is_finite() {
        return Err(Error::InadmissibleAverage {
            cell: cell_label(),
            stage: String::new(),
            what: format!("mean rho = {rho_bar}, mean p = {p_bar}"),
        });
    }
    // stage 1: density
    let mut rho_min = f64::INFINITY;
    for q in 0..n_pts {
        rho_min = rho_min.min(point_states[q * p]);
    }
    let theta1 = if rho_min < eps {
        ((rho_bar - eps) / (rho_bar - rho_min)).min(1.0)
    } else {
        1.0
    };
    if theta1 < 1.0 {
        apply(0, theta1);
        for q in 0..n_pts {
            point_states[q * p] = (1.0 - theta1) * rho_bar + theta1 * point_states[q * p];
        }
    }
    // stage 2: pressure
    let mut theta2 = 1.0f64;
    for q in 0..n_pts {
        let s = &point_states[q * p..(q + 1) * p];
        let pr = eu.pressure(s);
        if pr < eps {
            theta2 = theta2.min(pressure_scale_root(eu, means, s, eps));
        }
    }
    if theta2 < 1.0 {
        for comp in 0..p {
            apply(comp, theta2);
        }
    }
    Ok(ThetaPair { theta1, theta2 })
}

/// 2D limiter point set: (Gauss_x x Lobatto_y) union (Lobatto_x x Gauss_y),
/// 2 (k+1)^2 points. Returns reference coordinates.
pub fn limiter_points_2d(basis: &Basis) -> Vec<(f64, f64)> {
    let mut pts = Vec::with_capacity(2 * (basis.k + 1) * (basis.k + 1));
    for &xg in &basis.gauss_k1.nodes {
        for &yl in &basis.lobatto.nodes {
            pts.push((xg, yl));
        }
    }
    for &xl in &basis.lobatto.nodes {
        for &yg in &basis.gauss_k1.nodes {
            pts.push((xl, yg));
        }
    }
    pts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::Basis;

    fn eu() -> Euler {
        Euler { gamma: 1.4 }
    }

    #[test]
    fn theta1_formula() {
        // k=1 cell, rho_bar = 0.5, nodal min -0.1: theta1 = (0.5 - eps)/0.6
        let means = [0.5, 0.0, 1.0];
        let mut pts = vec![
            -0.1, 0.0, 1.0, // node with negative density
            1.1, 0.0, 1.0,
        ];
        let mut scaled: Vec<(usize, f64)> = Vec::new();
        let r = limit_cell_with_points(
            &eu(),
            PP_EPS,
            &means,
            &mut pts,
            2,
            &mut |c, t| scaled.push((c, t)),
            &|| "test".into(),
        )
        .unwrap();
        let want = (0.5 - PP_EPS) / 0.6;
        assert!((r.theta1 - want).abs() < 1e-14);
        assert!((r.theta1 - 0.8333333333331945).abs() < 1e-10);
        // after stage 1 the node states here stay pressure-admissible
        assert_eq!(scaled.len(), 1);
    }

    #[test]
    fn untouched_when_admissible() {
        let means = [1.0, 0.2, 2.0];
        let mut pts = vec![0.9, 0.2, 2.0, 1.1, 0.2, 2.0];
        let mut n_calls = 0;
        let r = limit_cell_with_points(
            &eu(),
            PP_EPS,
            &means,
            &mut pts,
            2,
            &mut |_, _| n_calls += 1,
            &|| "test".into(),
        )
        .unwrap();
        assert_eq!(r, ThetaPair { theta1: 1.0, theta2: 1.0 });
        assert_eq!(n_calls, 0);
    }

    #[test]
    fn pressure_quadratic_vs_bisection_oracle() {
        // constructed k=1 cell: mean (1,0,1), node at X=1 is (1,2,1) with
        // negative pressure; the exact quadratic root must match bisection
        // and yield p = eps at the limited node.
        let means = [1.0, 0.0, 1.0];
        let node = [1.0, 2.0, 1.0];
        let t = pressure_scale_root(&eu(), &means, &node, PP_EPS);
        // bisection oracle
        let q = |t: f64| {
            let s = [
                (1.0 - t) * means[0] + t * node[0],
                (1.0 - t) * means[1] + t * node[1],
                (1.0 - t) * means[2] + t * node[2],
            ];
            eu().pressure(&s) - PP_EPS
        };
        let mut lo = 0.0;
        let mut hi = 1.0;
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if q(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((t - lo).abs() < 1e-12, "quadratic {t} vs bisection {lo}");
        // analytic: p(t) = 0.4 (1 - 2 t^2) = eps
        let want = ((1.0 - PP_EPS / 0.4) / 2.0).sqrt();
        assert!((t - want).abs() < 1e-12);
        // p at the limited node equals eps to 1e-10
        let s = [1.0, 2.0 * t, 1.0];
        assert!((eu().pressure(&s) - PP_EPS).abs() < 1e-10);
    }

    #[test]
    fn inadmissible_mean_is_hard_error() {
        let means = [1.0, 10.0, 1.0]; // negative pressure mean
        let mut pts = vec![1.0, 10.0, 1.0];
        let err = limit_cell_with_points(
            &eu(),
            PP_EPS,
            &means,
            &mut pts,
            1,
            &mut |_, _| {},
            &|| "cell 7".into(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::InadmissibleAverage { .. }));
    }

    #[test]
    fn limiter_point_set_2d_counts() {
        for k in 1..=3 {
            let b = Basis::new(k).unwrap();
            let pts = limiter_points_2d(&b);
            assert_eq!(pts.len(), 2 * (k + 1) * (k + 1));
            for (x, y) in pts {
                assert!((-1.0..=1.0).contains(&x) && (-1.0..=1.0).contains(&y));
            }
        }
    }
}
