//! Boundary conditions and ghost-state construction.
//!
//! Periodic boundaries wrap to full modal neighbor data. Every other kind
//! synthesizes ghost *traces* only: the interface flux and the order-0 jump
//! use the ghost trace, while derivative jumps at physical boundaries are set
//! to zero (the jump indicator is defined through traces; higher derivative
//! jumps have no prescribed value at a wall and zeroing them avoids
//! fictitious viscosity there).

use crate::MAX_P;

/// Side order: 1D [left, right]; 2D [west, east, south, north].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    West = 0,
    East = 1,
    South = 2,
    North = 3,
}

/// Pointwise resolution of a boundary rule (for space/time-dependent sides).
#[derive(Debug, Clone, Copy)]
pub enum BcPoint {
    /// Prescribed conserved state.
    State([f64; MAX_P]),
    /// Copy the interior trace.
    Outflow,
    /// Mirror the normal momentum, keep density/energy/tangential momentum.
    Reflective,
}

/// One side's boundary condition.
#[derive(Clone, Copy)]
pub enum Bc {
    Periodic,
    Outflow,
    Reflective,
    /// Fixed conserved state (supersonic inflow etc.).
    Dirichlet([f64; MAX_P]),
    /// Position- and time-dependent rule; `pos` is the coordinate along the
    /// side (x for south/north, y for west/east; the cell-center coordinate
    /// in 1D).
    Custom(fn(pos: f64, t: f64) -> BcPoint),
}

impl std::fmt::Debug for Bc {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Bc::Periodic => write!(f, "Periodic"),
            Bc::Outflow => write!(f, "Outflow"),
            Bc::Reflective => write!(f, "Reflective"),
            Bc::Dirichlet(s) => write!(f, "Dirichlet({s:?})"),
            Bc::Custom(_) => write!(f, "Custom(fn)"),
        }
    }
}

impl Bc {
    pub fn is_periodic(&self) -> bool {
        matches!(self, Bc::Periodic)
    }

    /// Ghost trace for an interior trace at this side. `normal_comp` is the
    /// index of the normal momentum component (1 in 1D/x, 2 for y), `p` the
    /// component count.
    pub fn ghost(
        &self,
        interior: &[f64],
        pos: f64,
        t: f64,
        normal_comp: usize,
        ghost: &mut [f64],
    ) {
        match self {
            Bc::Periodic => unreachable!("periodic sides wrap modal data directly"),
            Bc::Outflow => ghost.copy_from_slice(interior),
            Bc::Reflective => {
                ghost.copy_from_slice(interior);
                ghost[normal_comp] = -interior[normal_comp];
            }
            Bc::Dirichlet(state) => ghost.copy_from_slice(&state[..interior.len()]),
            Bc::Custom(f) => match f(pos, t) {
                BcPoint::State(s) => ghost.copy_from_slice(&s[..interior.len()]),
                BcPoint::Outflow => ghost.copy_from_slice(interior),
                BcPoint::Reflective => {
                    ghost.copy_from_slice(interior);
                    ghost[normal_comp] = -interior[normal_comp];
                }
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reflective_mirrors_normal_momentum() {
        let interior = [1.0, 2.0, 10.0];
        let mut ghost = [0.0; 3];
        Bc::Reflective.ghost(&interior, 0.0, 0.0, 1, &mut ghost);
        assert_eq!(ghost, [1.0, -2.0, 10.0]);
        // 2D, y-normal
        let interior = [1.0, 2.0, 3.0, 10.0];
        let mut ghost = [0.0; 4];
        Bc::Reflective.ghost(&interior, 0.0, 0.0, 2, &mut ghost);
        assert_eq!(ghost, [1.0, 2.0, -3.0, 10.0]);
    }

    #[test]
    fn outflow_copies() {
        let interior = [0.4, -1.0, 3.0];
        let mut ghost = [0.0; 3];
        Bc::Outflow.ghost(&interior, 0.0, 0.0, 1, &mut ghost);
        assert_eq!(ghost, interior);
    }

    #[test]
    fn custom_rule_switches_by_position() {
        fn rule(pos: f64, _t: f64) -> BcPoint {
            if pos < 0.5 {
                BcPoint::State([9.0, 0.0, 0.0, 9.0])
            } else {
                BcPoint::Reflective
            }
        }
        let bc = Bc::Custom(rule);
        let interior = [1.0, 2.0, 3.0, 4.0];
        let mut ghost = [0.0; 4];
        bc.ghost(&interior, 0.2, 0.0, 2, &mut ghost);
        assert_eq!(ghost, [9.0, 0.0, 0.0, 9.0]);
        bc.ghost(&interior, 0.7, 0.0, 2, &mut ghost);
        assert_eq!(ghost, [1.0, 2.0, -3.0, 4.0]);
    }
}
