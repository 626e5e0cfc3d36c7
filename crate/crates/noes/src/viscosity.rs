//! Per-cell artificial-viscosity coefficients.
//!
//! `sigma = max(sigma_jump, sigma_entropy)` where `sigma_jump` measures
//! discontinuity strength through inter-cell jumps of the solution and its
//! derivatives, and `sigma_entropy = min(max(F/E, 0), C * sigma_jump)`
//! balances the cell's entropy production F against the dissipation capacity
//! E of the bubble-viscosity term. The cap matters because E can vanish
//! faster than F; saturating at `C * sigma_jump` is the configured remedy.

/// Which terms feed the final sigma. `Both` is the production scheme; the
/// single-term modes exist to reproduce the Buckley-Leverett wave-selection
/// comparison (entropy-only picks the wrong wave there).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SigmaMode {
    Both,
    JumpOnly,
    EntropyOnly,
}

impl SigmaMode {
    pub fn from_id(id: &str) -> crate::Result<SigmaMode> {
        Ok(match id {
            "both" => SigmaMode::Both,
            "jump" => SigmaMode::JumpOnly,
            "entropy" => SigmaMode::EntropyOnly,
            _ => {
                return Err(crate::Error::invalid(format!(
                    "unknown sigma mode '{id}' (expected both, jump, or entropy)"
                )))
            }
        })
    }

    pub fn id(&self) -> &'static str {
        match self {
            SigmaMode::Both => "both",
            SigmaMode::JumpOnly => "jump",
            SigmaMode::EntropyOnly => "entropy",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ViscosityConfig {
    /// The c_0 constant in c_f (problem-dependent, order 0.1..10).
    pub c0: f64,
    /// Cap constant C > 1 multiplying sigma_jump in the entropy coefficient.
    pub cap_c: f64,
    pub mode: SigmaMode,
}

impl Default for ViscosityConfig {
    fn default() -> Self {
        ViscosityConfig {
            c0: 1.0,
            cap_c: 50.0,
            mode: SigmaMode::Both,
        }
    }
}

/// Per-cell viscosity decomposition, kept for diagnostics output.
#[derive(Debug, Clone, Copy, Default)]
pub struct CellViscosity {
    pub sigma_jump: f64,
    pub e: f64,
    pub f: f64,
    pub sigma_entropy: f64,
    pub sigma: f64,
    /// Whether the C * sigma_jump cap (or the E ~ 0 convention) truncated F/E.
    pub cap_active: bool,
}

/// E is treated as zero when it cannot distinguish F/E from the cap.
const EPS_E_REL: f64 = 1e-14;

/// Guard for the uncapped entropy-only mode: keeps sigma finite so the
/// integrating-factor exponentials underflow cleanly instead of producing
/// 0 * inf.
const SIGMA_MAX: f64 = 1e30;

/// Combine the budgets and the jump coefficient into the final sigma.
pub fn sigma_cell(e: f64, f: f64, sigma_jump: f64, cfg: &ViscosityConfig) -> CellViscosity {
    debug_assert!(e >= 0.0);
    debug_assert!(sigma_jump >= 0.0);
    let eps_e = EPS_E_REL * f.abs().max(1.0);
    let (sigma_entropy, cap_active) = match cfg.mode {
        SigmaMode::JumpOnly => (0.0, false),
        SigmaMode::EntropyOnly => {
            if f <= 0.0 {
                (0.0, false)
            } else {
                ((f / e.max(f64::MIN_POSITIVE)).min(SIGMA_MAX), false)
            }
        }
        SigmaMode::Both => {
            if f <= 0.0 {
                (0.0, false)
            } else if e <= eps_e {
                (cfg.cap_c * sigma_jump, true)
            } else {
                let ratio = f / e;
                let cap = cfg.cap_c * sigma_jump;
                if ratio >= cap {
                    (cap, true)
                } else {
                    (ratio, false)
                }
            }
        }
    };
    let sigma = match cfg.mode {
        SigmaMode::JumpOnly => sigma_jump,
        SigmaMode::EntropyOnly => sigma_entropy,
        SigmaMode::Both => sigma_jump.max(sigma_entropy),
    };
    CellViscosity {
        sigma_jump,
        e,
        f,
        sigma_entropy,
        sigma,
        cap_active,
    }
}

/// Weight of a derivative order in the jump indicator:
/// order 0 contributes `h * ||[[u]]||`, order l >= 1 contributes
/// `l(l+1) h^{l+1} ||[[d^l u]]||`. In 2D, `l` is the total order |l| of the
/// multi-index.
#[inline]
pub fn jump_weight(order: usize, h: f64) -> f64 {
    if order == 0 {
        h
    } else {
        (order * (order + 1)) as f64 * h.powi(order as i32 + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> ViscosityConfig {
        ViscosityConfig {
            c0: 1.0,
            cap_c: 50.0,
            mode: SigmaMode::Both,
        }
    }

    #[test]
    fn sigma_cell_cases() {
        // F <= 0: entropy part is zero
        let v = sigma_cell(1.0, -1.0, 0.3, &cfg());
        assert_eq!(v.sigma_entropy, 0.0);
        assert_eq!(v.sigma, 0.3);
        assert!(!v.cap_active);

        // F = 2, E = 1, sj = 0.1, C = 50: min(2, 5) = 2
        let v = sigma_cell(1.0, 2.0, 0.1, &cfg());
        assert!((v.sigma_entropy - 2.0).abs() < 1e-15);
        assert!((v.sigma - 2.0).abs() < 1e-15);
        assert!(!v.cap_active);

        // E ~ 0 with F > 0 saturates at the cap
        let v = sigma_cell(1e-30, 2.0, 0.1, &cfg());
        assert!((v.sigma_entropy - 5.0).abs() < 1e-15);
        assert!((v.sigma - 5.0).abs() < 1e-15);
        assert!(v.cap_active);

        // jump = 0 forces sigma = 0 in Both mode (cap pins entropy at 0)
        let v = sigma_cell(1e-30, 2.0, 0.0, &cfg());
        assert_eq!(v.sigma, 0.0);
    }

    #[test]
    fn entropy_only_mode_is_uncapped_but_finite() {
        let mut c = cfg();
        c.mode = SigmaMode::EntropyOnly;
        let v = sigma_cell(1e-300, 2.0, 0.1, &c);
        assert!(v.sigma.is_finite());
        assert!(v.sigma > 1e20);
        let v = sigma_cell(1.0, 2.0, 0.0, &c);
        assert!((v.sigma - 2.0).abs() < 1e-15);
    }

    #[test]
    fn jump_weights() {
        let h = 0.5;
        assert_eq!(jump_weight(0, h), 0.5);
        // l = 1: 1*2*h^2
        assert!((jump_weight(1, h) - 2.0 * 0.25).abs() < 1e-15);
        // l = 2: 2*3*h^3
        assert!((jump_weight(2, h) - 6.0 * 0.125).abs() < 1e-15);
    }
}
