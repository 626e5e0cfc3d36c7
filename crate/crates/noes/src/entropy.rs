//! Entropy pairs (U, F), entropy-variable maps v(u), the matrices
//! A(u) = (U'')^{-1}, and construction of the entropy-variable interpolant
//! v_h.
//!
//! v_h is the per-cell Gauss-Lobatto interpolant of v(u_h): because the
//! Lobatto nodes include the cell endpoints, the interface traces of v_h agree
//! exactly with v evaluated at the one-sided traces of u_h, which is the
//! condition the entropy-stability proof needs. Interpolating at any other
//! node set can produce interface entropy *production* (see the Remark-1
//! regression test in the dg1d module).

use crate::basis::Basis;
use crate::equation::{Equation, Euler, ScalarFlux};
use crate::error::{Error, Result};
use crate::field::{Field1D, Field2D};

/// Registered entropy functions. Scalar kinds apply to scalar equations; the
/// Euler kind is the physical pair U = -rho s / (gamma - 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairKind {
    /// U = u^2 / 2.
    Square,
    /// U = e^u.
    Exp,
    /// U = cosh u.
    Cosh,
    /// U = int arctan(20u) du. A steepened Kruzhkov entropy |u|.
    Kruzhkov20,
    /// U = int arctan(u - 1) du. A shifted Kruzhkov entropy |u - 1|.
    KruzhkovShift1,
    /// U = -ln u (admissible u > 0). Not in the string registry; used by
    /// the interface-interpolation regression tests.
    NegLog,
    /// U = -rho s / (gamma - 1) with s = ln(p rho^-gamma).
    Euler,
}

impl PairKind {
    pub fn from_id(id: &str) -> Result<PairKind> {
        Ok(match id {
            "square" => PairKind::Square,
            "exp" => PairKind::Exp,
            "cosh" => PairKind::Cosh,
            "kruzhkov20" => PairKind::Kruzhkov20,
            "kruzhkov_shift1" => PairKind::KruzhkovShift1,
            "euler" => PairKind::Euler,
            _ => {
                return Err(Error::invalid(format!(
                    "unknown entropy pair '{id}' (expected one of square, exp, cosh, kruzhkov20, kruzhkov_shift1, euler)"
                )))
            }
        })
    }

    pub fn id(&self) -> &'static str {
        match self {
            PairKind::Square => "square",
            PairKind::Exp => "exp",
            PairKind::Cosh => "cosh",
            PairKind::Kruzhkov20 => "kruzhkov20",
            PairKind::KruzhkovShift1 => "kruzhkov_shift1",
            PairKind::NegLog => "neglog",
            PairKind::Euler => "euler",
        }
    }
}

/// Entropy operations for one pair. For Euler pairs `gamma` must match the
/// equation's.
#[derive(Debug, Clone, Copy)]
pub struct EntropyOps {
    pub kind: PairKind,
    pub gamma: f64,
}

impl EntropyOps {
    pub fn new(kind: PairKind, gamma: f64) -> EntropyOps {
        EntropyOps { kind, gamma }
    }

    fn scalar_admissible(&self, u: f64) -> Result<()> {
        if self.kind == PairKind::NegLog && !(u > 0.0) {
            return Err(Error::inadmissible(format!("u = {u} <= 0"), "scalar state"));
        }
        Ok(())
    }

    /// Entropy U(u).
    pub fn entropy(&self, u: &[f64]) -> Result<f64> {
        match self.kind {
            PairKind::Square => Ok(0.5 * u[0] * u[0]),
            PairKind::Exp => Ok(u[0].exp()),
            PairKind::Cosh => Ok(u[0].cosh()),
            PairKind::Kruzhkov20 => {
                let x = u[0];
                Ok(x * (20.0 * x).atan() - (1.0 + 400.0 * x * x).ln() / 40.0)
            }
            PairKind::KruzhkovShift1 => {
                let w = u[0] - 1.0;
                Ok(w * w.atan() - 0.5 * (1.0 + w * w).ln() - std::f64::consts::FRAC_PI_4
                    + 0.5 * std::f64::consts::LN_2)
            }
            PairKind::NegLog => {
                self.scalar_admissible(u[0])?;
                Ok(-u[0].ln())
            }
            PairKind::Euler => {
                let (rho, p) = self.euler_rho_p(u)?;
                let s = p.ln() - self.gamma * rho.ln();
                Ok(-rho * s / (self.gamma - 1.0))
            }
        }
    }

    fn euler_rho_p(&self, u: &[f64]) -> Result<(f64, f64)> {
        let eu = Euler { gamma: self.gamma };
        let rho = u[0];
        let p = eu.pressure(u);
        if !(rho > Euler::ADMISSIBLE_FLOOR) || !(p > Euler::ADMISSIBLE_FLOOR) {
            return Err(Error::inadmissible(
                format!("rho = {rho}, p = {p}"),
                "euler state",
            ));
        }
        Ok((rho, p))
    }

    /// Entropy variable v(u) = U'(u) (a length-p covector).
    pub fn var(&self, u: &[f64], v: &mut [f64]) -> Result<()> {
        match self.kind {
            PairKind::Square => v[0] = u[0],
            PairKind::Exp => v[0] = u[0].exp(),
            PairKind::Cosh => v[0] = u[0].sinh(),
            PairKind::Kruzhkov20 => v[0] = (20.0 * u[0]).atan(),
            PairKind::KruzhkovShift1 => v[0] = (u[0] - 1.0).atan(),
            PairKind::NegLog => {
                self.scalar_admissible(u[0])?;
                v[0] = -1.0 / u[0];
            }
            PairKind::Euler => {
                let (rho, p) = self.euler_rho_p(u)?;
                let g = self.gamma;
                let s = p.ln() - g * rho.ln();
                let msq = Euler::momentum_sq(u);
                v[0] = (g - s) / (g - 1.0) - 0.5 * msq / (rho * p);
                let n = u.len();
                for d in 0..n - 2 {
                    v[1 + d] = u[1 + d] / p;
                }
                v[n - 1] = -rho / p;
            }
        }
        Ok(())
    }

    /// A(u) = (U'')^{-1}, written row-major into `a` (p x p).
    pub fn matrix(&self, u: &[f64], a: &mut [f64]) -> Result<()> {
        match self.kind {
            PairKind::Square => a[0] = 1.0,
            PairKind::Exp => a[0] = (-u[0]).exp(),
            PairKind::Cosh => a[0] = 1.0 / u[0].cosh(),
            PairKind::Kruzhkov20 => a[0] = (1.0 + 400.0 * u[0] * u[0]) / 20.0,
            PairKind::KruzhkovShift1 => {
                let w = u[0] - 1.0;
                a[0] = 1.0 + w * w;
            }
            PairKind::NegLog => {
                self.scalar_admissible(u[0])?;
                a[0] = u[0] * u[0];
            }
            PairKind::Euler => {
                let (rho, p) = self.euler_rho_p(u)?;
                let g = self.gamma;
                let gm1 = g - 1.0;
                let msq = Euler::momentum_sq(u);
                let p_gm1 = p / gm1;
                match u.len() {
                    3 => {
                        let m = u[1];
                        a[0] = rho;
                        a[1] = m;
                        a[2] = p_gm1 + 0.5 * msq / rho;
                        a[3] = m;
                        a[4] = p + m * m / rho;
                        a[5] = 0.5 * m / (rho * rho) * (msq + 2.0 * g * rho * p / gm1);
                        a[6] = a[2];
                        a[7] = a[5];
                        a[8] = 0.25 / (rho * rho * rho)
                            * (msq * msq
                                + 4.0 * g * msq * rho * p / gm1
                                + 4.0 * g * rho * rho * p * p / (gm1 * gm1));
                    }
                    4 => {
                        let m1 = u[1];
                        let m2 = u[2];
                        let big_m = msq;
                        let corr = 0.5 / (rho * rho) * (big_m + 2.0 * g * rho * p / gm1);
                        a[0] = rho;
                        a[1] = m1;
                        a[2] = m2;
                        a[3] = p_gm1 + 0.5 * big_m / rho;
                        a[4] = m1;
                        a[5] = p + m1 * m1 / rho;
                        a[6] = m1 * m2 / rho;
                        a[7] = m1 * corr;
                        a[8] = m2;
                        a[9] = m1 * m2 / rho;
                        a[10] = p + m2 * m2 / rho;
                        a[11] = m2 * corr;
                        a[12] = a[3];
                        a[13] = a[7];
                        a[14] = a[11];
                        a[15] = 0.25 / (rho * rho * rho)
                            * (big_m * big_m
                                + 4.0 * g * big_m * rho * p / gm1
                                + 4.0 * g * rho * rho * p * p / (gm1 * gm1));
                    }
                    _ => return Err(Error::invalid("Euler entropy needs 3 or 4 components")),
                }
            }
        }
        Ok(())
    }

    /// Entropy flux F_dir(u), normalized to F_dir(0) = 0 for scalar pairs.
    ///
    /// Closed forms are used for every pair/flux combination the benchmark
    /// registry exercises; anything else falls back to composite 16-point
    /// Gauss quadrature of `int_0^u U'(s) f'(s) ds` on panels of width <= 0.1
    /// (small panels keep the steep arctan kernels at machine accuracy).
    pub fn flux(&self, eq: &Equation, dir: usize, u: &[f64]) -> Result<f64> {
        match (self.kind, eq) {
            (PairKind::Euler, Equation::Euler(_)) => {
                let (rho, p) = self.euler_rho_p(u)?;
                let s = p.ln() - self.gamma * rho.ln();
                Ok(-u[1 + dir] * s / (self.gamma - 1.0))
            }
            (PairKind::Euler, _) | (_, Equation::Euler(_)) => Err(Error::invalid(
                "entropy pair and equation kinds do not match",
            )),
            (kind, Equation::Scalar(sf)) => self.scalar_flux(kind, *sf, dir, u[0]),
        }
    }

    fn scalar_flux(&self, kind: PairKind, sf: ScalarFlux, dir: usize, u: f64) -> Result<f64> {
        use PairKind::*;
        use ScalarFlux::*;
        let val = match (kind, sf, dir) {
            // linear advection: F' = U' f' = U', so F = U(u) - U(0)
            (_, Linear, 0) => self.entropy(&[u])? - self.entropy(&[0.0])?,
            (_, Linear, _) => 0.0,
            (Square, Burgers, _) => u * u * u / 3.0,
            (Exp, Burgers, _) => (u - 1.0) * u.exp() + 1.0,
            (Cosh, Burgers, _) => u * u.cosh() - u.sinh(),
            (Cosh, Kpp, 0) => 0.5 * (u.cosh() * u.cos() + u.sinh() * u.sin() - 1.0),
            (Cosh, Kpp, 1) => -0.5 * (u.cosh() * u.sin() - u.sinh() * u.cos()),
            (NegLog, _, _) => {
                return Err(Error::Unsupported(
                    "entropy flux for the -ln u pair is not defined at u = 0".into(),
                ))
            }
            _ => self.scalar_flux_quadrature(sf, dir, u),
        };
        Ok(val)
    }

    /// Composite Gauss quadrature of int_0^u U'(s) f'(s) ds.
    fn scalar_flux_quadrature(&self, sf: ScalarFlux, dir: usize, u: f64) -> f64 {
        if u == 0.0 {
            return 0.0;
        }
        let panels = ((u.abs() / 0.1).ceil() as usize).max(1);
        let mut acc = 0.0;
        let mut vbuf = [0.0];
        for i in 0..panels {
            let a = u * i as f64 / panels as f64;
            let b = u * (i + 1) as f64 / panels as f64;
            let c = 0.5 * (a + b);
            let r = 0.5 * (b - a);
            for (&x, &w) in GAUSS16_NODES.iter().zip(GAUSS16_WEIGHTS.iter()) {
                let s = c + r * x;
                self.var(&[s], &mut vbuf).expect("scalar pair admissible");
                acc += w * r * vbuf[0] * sf.df(dir, s);
            }
        }
        acc
    }
}

// 16-point Gauss-Legendre nodes/weights on [-1, 1] (positive half mirrored).
const GAUSS16_NODES: [f64; 16] = [
    -0.9894009349916499,
    -0.9445750230732326,
    -0.8656312023878318,
    -0.7554044083550030,
    -0.6178762444026438,
    -0.4580167776572274,
    -0.2816035507792589,
    -0.0950125098376374,
    0.0950125098376374,
    0.2816035507792589,
    0.4580167776572274,
    0.6178762444026438,
    0.7554044083550030,
    0.8656312023878318,
    0.9445750230732326,
    0.9894009349916499,
];
const GAUSS16_WEIGHTS: [f64; 16] = [
    0.0271524594117541,
    0.0622535239386479,
    0.0951585116824928,
    0.1246289712555339,
    0.1495959888165767,
    0.1691565193950025,
    0.1826034150449236,
    0.1894506104550685,
    0.1894506104550685,
    0.1826034150449236,
    0.1691565193950025,
    0.1495959888165767,
    0.1246289712555339,
    0.0951585116824928,
    0.0622535239386479,
    0.0271524594117541,
];

/// Build the entropy-variable field v_h: per cell and component, the
/// Gauss-Lobatto interpolant of v(u_h). Errors carry the offending cell.
pub fn build_entropy_field_1d(
    ops: &EntropyOps,
    basis: &Basis,
    u: &Field1D,
    out: &mut Field1D,
) -> Result<()> {
    let kp1 = basis.k + 1;
    let p = u.p;
    let mut state = vec![0.0; p];
    let mut vval = vec![0.0; p];
    let mut nodal = vec![0.0; kp1 * p];
    for cell in 0..u.n {
        for (q, _) in basis.lobatto.nodes.iter().enumerate() {
            for comp in 0..p {
                let block = u.block(cell, comp);
                let mut acc = 0.0;
                for l in 0..kp1 {
                    acc += block[l] * basis.phi_lob[q * kp1 + l];
                }
                state[comp] = acc;
            }
            ops.var(&state, &mut vval).map_err(|e| {
                Error::inadmissible(e.to_string(), format!("cell {cell}, Lobatto node {q}"))
            })?;
            for comp in 0..p {
                nodal[comp * kp1 + q] = vval[comp];
            }
        }
        for comp in 0..p {
            basis.nodal_to_modal(&nodal[comp * kp1..(comp + 1) * kp1], out.block_mut(cell, comp));
        }
    }
    Ok(())
}

/// 2D tensor-Lobatto interpolation of v(u_h), per cell and component.
pub fn build_entropy_field_2d(
    ops: &EntropyOps,
    basis: &Basis,
    u: &Field2D,
    out: &mut Field2D,
) -> Result<()> {
    let kp1 = basis.k + 1;
    let nm = kp1 * kp1;
    let p = u.p;
    let mut state = vec![0.0; p];
    let mut vval = vec![0.0; p];
    // nodal values of v at the tensor Lobatto grid, per component
    let mut nodal = vec![0.0; nm * p];
    let mut tmp = vec![0.0; nm];
    let mut tmp2 = vec![0.0; nm];
    let n_cells = u.nx * u.ny;
    for cell in 0..n_cells {
        for qx in 0..kp1 {
            for qy in 0..kp1 {
                for comp in 0..p {
                    let block = u.block(cell, comp);
                    let mut acc = 0.0;
                    for lx in 0..kp1 {
                        let px = basis.phi_lob[qx * kp1 + lx];
                        let row = &block[lx * kp1..(lx + 1) * kp1];
                        let mut inner = 0.0;
                        for ly in 0..kp1 {
                            inner += row[ly] * basis.phi_lob[qy * kp1 + ly];
                        }
                        acc += px * inner;
                    }
                    state[comp] = acc;
                }
                ops.var(&state, &mut vval).map_err(|e| {
                    Error::inadmissible(
                        e.to_string(),
                        format!("cell {cell}, Lobatto node ({qx},{qy})"),
                    )
                })?;
                for comp in 0..p {
                    nodal[comp * nm + qx * kp1 + qy] = vval[comp];
                }
            }
        }
        for comp in 0..p {
            // apply 1D nodal->modal along each direction
            let nd = &nodal[comp * nm..(comp + 1) * nm];
            // x-direction: tmp[lx][qy] = sum_qx n2m[lx][qx] nd[qx][qy]
            for lx in 0..kp1 {
                for qy in 0..kp1 {
                    let mut acc = 0.0;
                    for qx in 0..kp1 {
                        acc += basis.n2m[lx * kp1 + qx] * nd[qx * kp1 + qy];
                    }
                    tmp[lx * kp1 + qy] = acc;
                }
            }
            // y-direction: tmp2[lx][ly] = sum_qy n2m[ly][qy] tmp[lx][qy]
            for lx in 0..kp1 {
                for ly in 0..kp1 {
                    let mut acc = 0.0;
                    for qy in 0..kp1 {
                        acc += basis.n2m[ly * kp1 + qy] * tmp[lx * kp1 + qy];
                    }
                    tmp2[lx * kp1 + ly] = acc;
                }
            }
            out.block_mut(cell, comp).copy_from_slice(&tmp2);
        }
    }
    Ok(())
}
