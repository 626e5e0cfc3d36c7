//! Modal coefficient storage for DG solutions.
//!
//! 1D layout: `data[(cell * p + comp) * (k+1) + l]`.
//! 2D layout: `data[(cell * p + comp) * (k+1)^2 + (lx * (k+1) + ly)]` with
//! `cell = j * nx + i`. Per-cell, per-component mode blocks are contiguous so
//! the assembly kernels stream through memory.

use crate::basis::Basis;
use crate::mesh::{Mesh1D, Mesh2D};

#[derive(Debug, Clone)]
pub struct Field1D {
    pub n: usize,
    pub p: usize,
    pub k: usize,
    pub data: Vec<f64>,
}

impl Field1D {
    pub fn zeros(n: usize, p: usize, k: usize) -> Field1D {
        Field1D {
            n,
            p,
            k,
            data: vec![0.0; n * p * (k + 1)],
        }
    }

    #[inline]
    pub fn nm(&self) -> usize {
        self.k + 1
    }

    #[inline]
    pub fn block(&self, cell: usize, comp: usize) -> &[f64] {
        let s = self.nm();
        let off = (cell * self.p + comp) * s;
        &self.data[off..off + s]
    }

    #[inline]
    pub fn block_mut(&mut self, cell: usize, comp: usize) -> &mut [f64] {
        let s = self.nm();
        let off = (cell * self.p + comp) * s;
        &mut self.data[off..off + s]
    }

    /// Pointwise value of component `comp` at reference coordinate X in `cell`.
    pub fn eval(&self, basis: &Basis, cell: usize, comp: usize, x: f64) -> f64 {
        basis.eval_modal(self.block(cell, comp), x)
    }

    /// Physical-space derivative (chain-rule factor 2/h applied).
    pub fn eval_deriv(&self, basis: &Basis, mesh: &Mesh1D, cell: usize, comp: usize, x: f64) -> f64 {
        basis.eval_modal_deriv(self.block(cell, comp), x) * 2.0 / mesh.h
    }

    /// Cell average of component `comp` (the P_0 coefficient).
    #[inline]
    pub fn mean(&self, cell: usize, comp: usize) -> f64 {
        self.data[(cell * self.p + comp) * self.nm()]
    }

    /// L2 projection of a pointwise initial condition. `ic(x, out)` fills the
    /// `p` components at physical coordinate x.
    pub fn project(mesh: &Mesh1D, basis: &Basis, p: usize, mut ic: impl FnMut(f64, &mut [f64])) -> Field1D {
        let k = basis.k;
        let mut f = Field1D::zeros(mesh.n, p, k);
        let nq = basis.proj.len();
        let mut vals = vec![0.0; nq * p];
        let mut state = vec![0.0; p];
        for cell in 0..mesh.n {
            for q in 0..nq {
                let x = mesh.x_of(cell, basis.proj.nodes[q]);
                ic(x, &mut state);
                vals[q * p..(q + 1) * p].copy_from_slice(&state);
            }
            for comp in 0..p {
                let block = f.block_mut(cell, comp);
                for l in 0..=k {
                    let mut acc = 0.0;
                    for q in 0..nq {
                        acc += basis.proj.weights[q]
                            * vals[q * p + comp]
                            * basis.phi_proj[q * (k + 1) + l];
                    }
                    block[l] = acc / basis.m[l];
                }
            }
        }
        f
    }
}

#[derive(Debug, Clone)]
pub struct Field2D {
    pub nx: usize,
    pub ny: usize,
    pub p: usize,
    pub k: usize,
    pub data: Vec<f64>,
}

impl Field2D {
    pub fn zeros(nx: usize, ny: usize, p: usize, k: usize) -> Field2D {
        let nm = (k + 1) * (k + 1);
        Field2D {
            nx,
            ny,
            p,
            k,
            data: vec![0.0; nx * ny * p * nm],
        }
    }

    #[inline]
    pub fn nm(&self) -> usize {
        (self.k + 1) * (self.k + 1)
    }

    #[inline]
    pub fn block(&self, cell: usize, comp: usize) -> &[f64] {
        let s = self.nm();
        let off = (cell * self.p + comp) * s;
        &self.data[off..off + s]
    }

    #[inline]
    pub fn block_mut(&mut self, cell: usize, comp: usize) -> &mut [f64] {
        let s = self.nm();
        let off = (cell * self.p + comp) * s;
        &mut self.data[off..off + s]
    }

    /// Cell average of component `comp` (the (0,0) coefficient).
    #[inline]
    pub fn mean(&self, cell: usize, comp: usize) -> f64 {
        self.data[(cell * self.p + comp) * self.nm()]
    }

    /// Pointwise value at reference (X, Y): tensor contraction over modes.
    pub fn eval(&self, cell: usize, comp: usize, x: f64, y: f64) -> f64 {
        let kp1 = self.k + 1;
        let mut px = [0.0; crate::basis::MAX_DEGREE + 1];
        let mut py = [0.0; crate::basis::MAX_DEGREE + 1];
        crate::basis::legendre_eval_all(self.k, x, &mut px[..kp1]);
        crate::basis::legendre_eval_all(self.k, y, &mut py[..kp1]);
        let block = self.block(cell, comp);
        let mut acc = 0.0;
        for lx in 0..kp1 {
            let row = &block[lx * kp1..(lx + 1) * kp1];
            let s: f64 = row.iter().zip(&py[..kp1]).map(|(&c, &v)| c * v).sum();
            acc += px[lx] * s;
        }
        acc
    }

    /// L2 projection of a pointwise initial condition `ic(x, y, out)`.
    pub fn project(
        mesh: &Mesh2D,
        basis: &Basis,
        p: usize,
        mut ic: impl FnMut(f64, f64, &mut [f64]),
    ) -> Field2D {
        let k = basis.k;
        let kp1 = k + 1;
        let nq = basis.proj.len();
        let mut f = Field2D::zeros(mesh.nx, mesh.ny, p, k);
        let mut vals = vec![0.0; nq * nq * p];
        let mut state = vec![0.0; p];
        for j in 0..mesh.ny {
            for i in 0..mesh.nx {
                let cell = mesh.idx(i, j);
                let (cx, cy) = mesh.center(i, j);
                for qx in 0..nq {
                    let x = cx + 0.5 * mesh.hx * basis.proj.nodes[qx];
                    for qy in 0..nq {
                        let y = cy + 0.5 * mesh.hy * basis.proj.nodes[qy];
                        ic(x, y, &mut state);
                        vals[(qx * nq + qy) * p..(qx * nq + qy + 1) * p].copy_from_slice(&state);
                    }
                }
                for comp in 0..p {
                    let block = f.block_mut(cell, comp);
                    for lx in 0..kp1 {
                        for ly in 0..kp1 {
                            let mut acc = 0.0;
                            for qx in 0..nq {
                                let wx = basis.proj.weights[qx] * basis.phi_proj[qx * kp1 + lx];
                                let mut inner = 0.0;
                                for qy in 0..nq {
                                    inner += basis.proj.weights[qy]
                                        * basis.phi_proj[qy * kp1 + ly]
                                        * vals[(qx * nq + qy) * p + comp];
                                }
                                acc += wx * inner;
                            }
                            block[lx * kp1 + ly] = acc / (basis.m[lx] * basis.m[ly]);
                        }
                    }
                }
            }
        }
        f
    }
}
