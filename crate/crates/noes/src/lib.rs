//! Non-oscillatory entropy-stable discontinuous Galerkin (NOES-DG) solvers for
//! scalar conservation laws and the compressible Euler equations in 1D and 2D.
//!
//! The semi-discrete scheme is a modal Legendre DG discretization augmented with
//! a per-cell artificial viscosity term
//!
//! ```text
//!     sigma_i * int_K nu_i(x) (v_h)_x A(u_h) w_x dx,
//! ```
//!
//! where `v_h` is the Gauss-Lobatto interpolant of the entropy variable
//! `v = U'(u_h)`, `A = (U'')^{-1}`, and `nu_i` is the quadratic bubble that
//! vanishes on the cell boundary. The coefficient `sigma_i` combines a jump
//! indicator (measuring discontinuity strength through inter-cell jumps of the
//! solution and its derivatives) with an entropy-balance coefficient `F_i/E_i`
//! capped by `C * sigma_i^jump`. The construction keeps the scheme conservative
//! and entropy stable while suppressing spurious oscillations near shocks.
//!
//! Time stepping is the third-order integrating-factor SSP-RK method: the
//! diagonal modal damping induced by the bubble viscosity is integrated exactly
//! through elementwise exponentials, which removes the stiffness the viscosity
//! would otherwise impose on the explicit CFL restriction. A scaling
//! positivity-preserving limiter keeps Euler density and pressure positive in
//! extreme regimes.
//!
//! The crate ships a benchmark registry ([`problems`]), an exact Riemann solver
//! for reference solutions ([`riemann`]), error-norm and convergence-table
//! helpers ([`diagnostics`]), and the run orchestration used by the `noes`
//! command-line binary ([`run`]).

pub mod basis;
pub mod boundary;
pub mod config;
pub mod dg1d;
pub mod dg2d;
pub mod diagnostics;
pub mod entropy;
pub mod equation;
pub mod error;
pub mod field;
pub mod flux;
pub mod mesh;
pub mod pp_limiter;
pub mod problems;
pub mod riemann;
pub mod run;
pub mod time;
pub mod viscosity;

pub use error::{Error, Result};

/// Maximum number of state components (2D Euler).
pub const MAX_P: usize = 4;
