//! Monotone numerical fluxes with an explicit central/diffusive split
//! `fhat = fhat_C + fhat_D`, and the central numerical entropy flux.
//!
//! The split matters because the entropy budget F_i uses only the central
//! part: the diffusive part is what provides interface entropy dissipation in
//! the stability argument, so it must not be charged against the cell budget.

use crate::entropy::EntropyOps;
use crate::equation::{Equation, Euler, ScalarFlux};
use crate::error::{Error, Result};

/// Numerical flux selection. Scalar equations always use the local
/// Lax-Friedrichs flux; `Hll`/`Hllc` apply to Euler only.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FluxKind {
    Llf,
    Hll,
    Hllc,
}

impl FluxKind {
    pub fn from_id(id: &str) -> Result<FluxKind> {
        Ok(match id {
            "llf" => FluxKind::Llf,
            "hll" => FluxKind::Hll,
            "hllc" => FluxKind::Hllc,
            _ => {
                return Err(Error::invalid(format!(
                    "unknown flux '{id}' (expected llf, hll, or hllc)"
                )))
            }
        })
    }

    pub fn id(&self) -> &'static str {
        match self {
            FluxKind::Llf => "llf",
            FluxKind::Hll => "hll",
            FluxKind::Hllc => "hllc",
        }
    }
}

/// How the Lax-Friedrichs dissipation speed is chosen: from the two interface
/// states (sharper) or a single global bound per residual evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaMode {
    Local,
    Global,
}

/// Scalar local Lax-Friedrichs split:
/// `fc = (f(u+) + f(u-))/2`, `fd = -alpha (u+ - u-)/2` with
/// `alpha = max |f'|` over the interval between the traces.
#[inline]
pub fn scalar_lf(sf: ScalarFlux, dir: usize, um: f64, up: f64, alpha_global: Option<f64>) -> (f64, f64, f64) {
    let alpha = alpha_global.unwrap_or_else(|| sf.max_abs_df(dir, um, up));
    let fc = 0.5 * (sf.f(dir, up) + sf.f(dir, um));
    let fd = -0.5 * alpha * (up - um);
    (fc + fd, fc, fd)
}

/// Euler flux split in direction `dir`. Writes `fhat`, `fc`, `fd`
/// (`fhat = fc + fd` exactly in every branch). `alpha_global` overrides the
/// local two-state bound for the LF flux.
pub fn euler_split(
    kind: FluxKind,
    eu: &Euler,
    dir: usize,
    um: &[f64],
    up: &[f64],
    alpha_global: Option<f64>,
    fhat: &mut [f64],
    fc: &mut [f64],
    fd: &mut [f64],
) -> Result<()> {
    let p = um.len();
    let mut fl = [0.0; crate::MAX_P];
    let mut fr = [0.0; crate::MAX_P];
    let fl = &mut fl[..p];
    let fr = &mut fr[..p];
    eu.flux(dir, um, fl);
    eu.flux(dir, up, fr);
    match kind {
        FluxKind::Llf => {
            let alpha = alpha_global
                .unwrap_or_else(|| eu.wave_speed(dir, um).max(eu.wave_speed(dir, up)));
            for m in 0..p {
                fc[m] = 0.5 * (fl[m] + fr[m]);
                fd[m] = -0.5 * alpha * (up[m] - um[m]);
                fhat[m] = fc[m] + fd[m];
            }
        }
        FluxKind::Hll => {
            let (sl, sr) = davis_speeds(eu, dir, um, up)?;
            if sl >= 0.0 {
                for m in 0..p {
                    fhat[m] = fl[m];
                    fc[m] = fl[m];
                    fd[m] = 0.0;
                }
            } else if sr <= 0.0 {
                for m in 0..p {
                    fhat[m] = fr[m];
                    fc[m] = fr[m];
                    fd[m] = 0.0;
                }
            } else {
                let inv = 1.0 / (sr - sl);
                for m in 0..p {
                    fc[m] = (sr * fl[m] - sl * fr[m]) * inv;
                    fd[m] = sr * sl * (up[m] - um[m]) * inv;
                    fhat[m] = fc[m] + fd[m];
                }
            }
        }
        FluxKind::Hllc => {
            let (sl, sr) = davis_speeds(eu, dir, um, up)?;
            let rho_l = um[0];
            let rho_r = up[0];
            let vl = um[1 + dir] / rho_l;
            let vr = up[1 + dir] / rho_r;
            let pl = eu.pressure(um);
            let pr = eu.pressure(up);
            let denom = rho_l * (sl - vl) - rho_r * (sr - vr);
            let s_star = if denom.abs() < 1e-300 {
                0.5 * (vl + vr)
            } else {
                (pr - pl + rho_l * vl * (sl - vl) - rho_r * vr * (sr - vr)) / denom
            };
            // total flux via the star states, diffusive part via the
            // contact-bounded wave-speed products
            if sl >= 0.0 {
                for m in 0..p {
                    fhat[m] = fl[m];
                    fd[m] = 0.0;
                }
            } else if sl < 0.0 && s_star >= 0.0 {
                star_flux(eu, dir, um, fl, sl, s_star, pl, fhat);
                let coeff = s_star * sl / (s_star - sl);
                for m in 0..p {
                    fd[m] = coeff * (up[m] - um[m]);
                }
            } else if s_star < 0.0 && sr > 0.0 {
                star_flux(eu, dir, up, fr, sr, s_star, pr, fhat);
                let coeff = sr * s_star / (sr - s_star);
                for m in 0..p {
                    fd[m] = coeff * (up[m] - um[m]);
                }
            } else {
                for m in 0..p {
                    fhat[m] = fr[m];
                    fd[m] = 0.0;
                }
            }
            for m in 0..p {
                fc[m] = fhat[m] - fd[m];
            }
        }
    }
    Ok(())
}

/// Davis wave-speed estimates.
fn davis_speeds(eu: &Euler, dir: usize, um: &[f64], up: &[f64]) -> Result<(f64, f64)> {
    eu.check_admissible(um)?;
    eu.check_admissible(up)?;
    let cl = eu.sound_speed(um);
    let cr = eu.sound_speed(up);
    let vl = um[1 + dir] / um[0];
    let vr = up[1 + dir] / up[0];
    let sl = (vl - cl).min(vr - cr);
    let sr = (vl + cl).max(vr + cr);
    if sr <= sl {
        return Err(Error::Internal(format!(
            "wave-speed ordering violated: S_L = {sl} >= S_R = {sr}"
        )));
    }
    Ok((sl, sr))
}

/// HLLC star-region flux f_K + S_K (U*_K - U_K) for the side with speed `s`.
fn star_flux(
    eu: &Euler,
    dir: usize,
    u: &[f64],
    f: &[f64],
    s: f64,
    s_star: f64,
    pres: f64,
    out: &mut [f64],
) {
    let p = u.len();
    let rho = u[0];
    let v = u[1 + dir] / rho;
    let factor = rho * (s - v) / (s - s_star);
    let mut ustar = [0.0; crate::MAX_P];
    ustar[0] = factor;
    for d in 0..p - 2 {
        ustar[1 + d] = factor * (u[1 + d] / rho);
    }
    ustar[1 + dir] = factor * s_star;
    ustar[p - 1] =
        factor * (u[p - 1] / rho + (s_star - v) * (s_star + pres / (rho * (s - v))));
    for m in 0..p {
        out[m] = f[m] + s * (ustar[m] - u[m]);
    }
}

/// Central numerical entropy flux `Fhat = (F(u+) + F(u-))/2` in direction
/// `dir`; consistent with F by construction.
pub fn central_entropy_flux(
    ops: &EntropyOps,
    eq: &Equation,
    dir: usize,
    um: &[f64],
    up: &[f64],
) -> Result<f64> {
    Ok(0.5 * (ops.flux(eq, dir, up)? + ops.flux(eq, dir, um)?))
}
