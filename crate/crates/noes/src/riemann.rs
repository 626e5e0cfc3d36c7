//! Exact Riemann solver for the 1D compressible Euler equations.
//!
//! Newton iteration on the star-region pressure function, two-rarefaction
//! initial guess, vacuum detection, and self-similar sampling at xi = x/t.
//! Used to generate reference solutions for the shock-tube benchmarks.

use crate::error::{Error, Result};

/// Primitive state (rho, u, p).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimState {
    pub rho: f64,
    pub u: f64,
    pub p: f64,
}

impl PrimState {
    pub fn new(rho: f64, u: f64, p: f64) -> PrimState {
        PrimState { rho, u, p }
    }

    pub fn sound_speed(&self, gamma: f64) -> f64 {
        (gamma * self.p / self.rho).sqrt()
    }
}

/// Star-region pressure/velocity and the sampler.
#[derive(Debug, Clone)]
pub struct RiemannSolution {
    pub left: PrimState,
    pub right: PrimState,
    pub gamma: f64,
    pub p_star: f64,
    pub u_star: f64,
}

/// Pressure function f_K(p) and its derivative for one side.
fn side_fn(p: f64, s: &PrimState, gamma: f64) -> (f64, f64) {
    let a = 2.0 / ((gamma + 1.0) * s.rho);
    let b = (gamma - 1.0) / (gamma + 1.0) * s.p;
    let c = s.sound_speed(gamma);
    if p > s.p {
        // shock branch
        let q = (a / (p + b)).sqrt();
        let f = (p - s.p) * q;
        let df = q * (1.0 - 0.5 * (p - s.p) / (p + b));
        (f, df)
    } else {
        // rarefaction branch
        let pr = p / s.p;
        let f = 2.0 * c / (gamma - 1.0) * (pr.powf(0.5 * (gamma - 1.0) / gamma) - 1.0);
        let df = 1.0 / (s.rho * c) * pr.powf(-0.5 * (gamma + 1.0) / gamma);
        (f, df)
    }
}

pub fn solve(left: PrimState, right: PrimState, gamma: f64) -> Result<RiemannSolution> {
    for (tag, s) in [("left", &left), ("right", &right)] {
        if !(s.rho > 0.0) || !(s.p > 0.0) {
            return Err(Error::inadmissible(
                format!("rho = {}, p = {}", s.rho, s.p),
                format!("{tag} Riemann state"),
            ));
        }
    }
    let cl = left.sound_speed(gamma);
    let cr = right.sound_speed(gamma);
    let du = right.u - left.u;
    if 2.0 * (cl + cr) / (gamma - 1.0) <= du {
        return Err(Error::Unsupported(
            "Riemann data generate vacuum (pressure positivity fails)".into(),
        ));
    }
    // two-rarefaction initial guess, robust for strong rarefactions; clamped
    // away from zero for strong shocks
    let z = 0.5 * (gamma - 1.0) / gamma;
    let guess = ((cl + cr - 0.5 * (gamma - 1.0) * du)
        / (cl / left.p.powf(z) + cr / right.p.powf(z)))
    .powf(1.0 / z);
    let mut p = guess.max(1e-12 * left.p.max(right.p));
    let mut converged = false;
    for _ in 0..200 {
        let (fl, dfl) = side_fn(p, &left, gamma);
        let (fr, dfr) = side_fn(p, &right, gamma);
        let g = fl + fr + du;
        let dg = dfl + dfr;
        let mut step = g / dg;
        if p - step <= 0.0 {
            step = 0.5 * p;
        }
        p -= step;
        if (step / p).abs() < 1e-12 {
            converged = true;
            break;
        }
    }
    if !converged {
        // bisection fallback on the monotone pressure function
        let mut lo = 1e-14 * left.p.max(right.p);
        let mut hi = 10.0 * (left.p.max(right.p) + 1.0);
        let g_at = |p: f64| side_fn(p, &left, gamma).0 + side_fn(p, &right, gamma).0 + du;
        while g_at(hi) < 0.0 {
            hi *= 10.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g_at(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        p = 0.5 * (lo + hi);
    }
    let (fl, _) = side_fn(p, &left, gamma);
    let (fr, _) = side_fn(p, &right, gamma);
    let u_star = 0.5 * (left.u + right.u) + 0.5 * (fr - fl);
    Ok(RiemannSolution {
        left,
        right,
        gamma,
        p_star: p,
        u_star,
    })
}

impl RiemannSolution {
    /// Sample the self-similar solution at xi = x/t.
    pub fn sample(&self, xi: f64) -> PrimState {
        let g = self.gamma;
        let gm1 = g - 1.0;
        let gp1 = g + 1.0;
        if xi <= self.u_star {
            let s = &self.left;
            let c = s.sound_speed(g);
            if self.p_star > s.p {
                // left shock
                let pr = self.p_star / s.p;
                let sl = s.u - c * (0.5 * gp1 / g * pr + 0.5 * gm1 / g).sqrt();
                if xi <= sl {
                    *s
                } else {
                    let rho = s.rho * (pr + gm1 / gp1) / (gm1 / gp1 * pr + 1.0);
                    PrimState::new(rho, self.u_star, self.p_star)
                }
            } else {
                // left rarefaction
                let c_star = c * (self.p_star / s.p).powf(0.5 * gm1 / g);
                let head = s.u - c;
                let tail = self.u_star - c_star;
                if xi <= head {
                    *s
                } else if xi >= tail {
                    let rho = s.rho * (self.p_star / s.p).powf(1.0 / g);
                    PrimState::new(rho, self.u_star, self.p_star)
                } else {
                    let u = (2.0 / gp1) * (c + 0.5 * gm1 * s.u + xi);
                    let cf = (2.0 / gp1) * (c + 0.5 * gm1 * (s.u - xi));
                    let rho = s.rho * (cf / c).powf(2.0 / gm1);
                    let p = s.p * (cf / c).powf(2.0 * g / gm1);
                    PrimState::new(rho, u, p)
                }
            }
        } else {
            let s = &self.right;
            let c = s.sound_speed(g);
            if self.p_star > s.p {
                // right shock
                let pr = self.p_star / s.p;
                let sr = s.u + c * (0.5 * gp1 / g * pr + 0.5 * gm1 / g).sqrt();
                if xi >= sr {
                    *s
                } else {
                    let rho = s.rho * (pr + gm1 / gp1) / (gm1 / gp1 * pr + 1.0);
                    PrimState::new(rho, self.u_star, self.p_star)
                }
            } else {
                // right rarefaction
                let c_star = c * (self.p_star / s.p).powf(0.5 * gm1 / g);
                let head = s.u + c;
                let tail = self.u_star + c_star;
                if xi >= head {
                    *s
                } else if xi <= tail {
                    let rho = s.rho * (self.p_star / s.p).powf(1.0 / g);
                    PrimState::new(rho, self.u_star, self.p_star)
                } else {
                    let u = (2.0 / gp1) * (-c + 0.5 * gm1 * s.u + xi);
                    let cf = (2.0 / gp1) * (c - 0.5 * gm1 * (s.u - xi));
                    let rho = s.rho * (cf / c).powf(2.0 / gm1);
                    let p = s.p * (cf / c).powf(2.0 * g / gm1);
                    PrimState::new(rho, u, p)
                }
            }
        }
    }

    /// Conserved state at xi.
    pub fn sample_conserved(&self, xi: f64) -> [f64; 3] {
        let s = self.sample(xi);
        [
            s.rho,
            s.rho * s.u,
            s.p / (self.gamma - 1.0) + 0.5 * s.rho * s.u * s.u,
        ]
    }

    /// Shock speeds (left wave, right wave) where the wave is a shock.
    pub fn shock_speeds(&self) -> (Option<f64>, Option<f64>) {
        let g = self.gamma;
        let gm1 = g - 1.0;
        let gp1 = g + 1.0;
        let left = if self.p_star > self.left.p {
            let c = self.left.sound_speed(g);
            let pr = self.p_star / self.left.p;
            Some(self.left.u - c * (0.5 * gp1 / g * pr + 0.5 * gm1 / g).sqrt())
        } else {
            None
        };
        let right = if self.p_star > self.right.p {
            let c = self.right.sound_speed(g);
            let pr = self.p_star / self.right.p;
            Some(self.right.u + c * (0.5 * gp1 / g * pr + 0.5 * gm1 / g).sqrt())
        } else {
            None
        };
        (left, right)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const GAMMA: f64 = 1.4;

    #[test]
    fn equal_states_are_identity() {
        let s = PrimState::new(1.3, 0.7, 2.0);
        let sol = solve(s, s, GAMMA).unwrap();
        assert!((sol.p_star - 2.0).abs() < 1e-10);
        assert!((sol.u_star - 0.7).abs() < 1e-10);
        for &xi in &[-5.0, -0.2, 0.7, 3.0] {
            let v = sol.sample(xi);
            assert!((v.rho - 1.3).abs() < 1e-10);
            assert!((v.u - 0.7).abs() < 1e-10);
            assert!((v.p - 2.0).abs() < 1e-10);
        }
    }

    #[test]
    fn sod_star_values() {
        // classical Sod tube star region: p* ~ 0.30313, u* ~ 0.92745
        let sol = solve(
            PrimState::new(1.0, 0.0, 1.0),
            PrimState::new(0.125, 0.0, 0.1),
            GAMMA,
        )
        .unwrap();
        assert!((sol.p_star - 0.30313).abs() < 5e-6, "p* = {}", sol.p_star);
        assert!((sol.u_star - 0.92745).abs() < 5e-6, "u* = {}", sol.u_star);
        // bisection oracle to 1e-12
        let g_at = |p: f64| {
            side_fn(p, &sol.left, GAMMA).0 + side_fn(p, &sol.right, GAMMA).0
                + (sol.right.u - sol.left.u)
        };
        let mut lo = 1e-10;
        let mut hi = 2.0;
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if g_at(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        assert!((sol.p_star - lo).abs() < 1e-10);
        // sampling on the contact gives the star region
        let v = sol.sample(sol.u_star - 1e-9);
        assert!((v.p - sol.p_star).abs() < 1e-9);
        assert!((v.u - sol.u_star).abs() < 1e-9);
    }

    #[test]
    fn rankine_hugoniot_across_detected_shocks() {
        let cases = [
            (PrimState::new(1.0, 0.0, 1.0), PrimState::new(0.125, 0.0, 0.1)),
            (PrimState::new(2.0, 0.0, 1e9), PrimState::new(0.001, 0.0, 1.0)),
            (PrimState::new(1.0, 3.0, 1.0), PrimState::new(1.0, -3.0, 1.0)),
        ];
        for (l, r) in cases {
            let sol = solve(l, r, GAMMA).unwrap();
            let (sl, sr) = sol.shock_speeds();
            let eps = 1e-9;
            for (s, side) in [(sl, 0), (sr, 1)] {
                let Some(speed) = s else { continue };
                let ua = sol.sample_conserved(speed - eps * (1.0 + speed.abs()));
                let ub = sol.sample_conserved(speed + eps * (1.0 + speed.abs()));
                let flux = |u: &[f64; 3]| {
                    let p = (GAMMA - 1.0) * (u[2] - 0.5 * u[1] * u[1] / u[0]);
                    [u[1], u[1] * u[1] / u[0] + p, u[1] / u[0] * (u[2] + p)]
                };
                let fa = flux(&ua);
                let fb = flux(&ub);
                let scale = fa
                    .iter()
                    .chain(fb.iter())
                    .fold(1.0f64, |a, &b| a.max(b.abs()));
                for m in 0..3 {
                    let lhs = fb[m] - fa[m];
                    let rhs = speed * (ub[m] - ua[m]);
                    assert!(
                        (lhs - rhs).abs() < 1e-8 * scale * (1.0 + speed.abs()),
                        "side {side} comp {m}: {lhs} vs {rhs}"
                    );
                }
            }
        }
    }

    #[test]
    fn leblanc_converges() {
        let sol = solve(
            PrimState::new(2.0, 0.0, 1e9),
            PrimState::new(0.001, 0.0, 1.0),
            GAMMA,
        )
        .unwrap();
        assert!(sol.p_star > 1.0 && sol.p_star < 1e9);
        assert!(sol.u_star > 0.0);
        // plateau density between contact and shock is finite and positive
        let (_, sr) = sol.shock_speeds();
        let sr = sr.expect("right shock");
        let mid = 0.5 * (sol.u_star + sr);
        let v = sol.sample(mid);
        assert!(v.rho > 0.0 && v.rho.is_finite());
    }

    #[test]
    fn vacuum_is_detected() {
        let err = solve(
            PrimState::new(1.0, -10.0, 0.01),
            PrimState::new(1.0, 10.0, 0.01),
            GAMMA,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Unsupported(_)));
    }
}
