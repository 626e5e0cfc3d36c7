//! Uniform 1D interval meshes and 2D Cartesian meshes.

use crate::error::{Error, Result};

/// Uniform partition of [a, b] into `n` cells of width `h`.
#[derive(Debug, Clone)]
pub struct Mesh1D {
    pub a: f64,
    pub b: f64,
    pub n: usize,
    pub h: f64,
}

impl Mesh1D {
    pub fn new(a: f64, b: f64, n: usize) -> Result<Mesh1D> {
        if n < 1 {
            return Err(Error::invalid("mesh needs at least one cell"));
        }
        if !(b > a) {
            return Err(Error::invalid(format!("empty domain [{a}, {b}]")));
        }
        Ok(Mesh1D {
            a,
            b,
            n,
            h: (b - a) / n as f64,
        })
    }

    /// Center of cell `i`.
    pub fn center(&self, i: usize) -> f64 {
        self.a + (i as f64 + 0.5) * self.h
    }

    /// Left face x_{i-1/2} of cell `i`.
    pub fn left_face(&self, i: usize) -> f64 {
        self.a + i as f64 * self.h
    }

    /// Physical coordinate of reference point X in cell `i`.
    pub fn x_of(&self, i: usize, xref: f64) -> f64 {
        self.center(i) + 0.5 * self.h * xref
    }
}

/// Uniform Cartesian mesh of [ax, bx] x [ay, by]; cell (i, j) is
/// `[x_{i-1/2}, x_{i+1/2}] x [y_{j-1/2}, y_{j+1/2}]`, flattened as
/// `idx = j * nx + i`.
#[derive(Debug, Clone)]
pub struct Mesh2D {
    pub ax: f64,
    pub bx: f64,
    pub ay: f64,
    pub by: f64,
    pub nx: usize,
    pub ny: usize,
    pub hx: f64,
    pub hy: f64,
}

impl Mesh2D {
    pub fn new(ax: f64, bx: f64, ay: f64, by: f64, nx: usize, ny: usize) -> Result<Mesh2D> {
        if nx < 1 || ny < 1 {
            return Err(Error::invalid("mesh needs at least one cell per direction"));
        }
        if !(bx > ax) || !(by > ay) {
            return Err(Error::invalid("empty 2D domain"));
        }
        Ok(Mesh2D {
            ax,
            bx,
            ay,
            by,
            nx,
            ny,
            hx: (bx - ax) / nx as f64,
            hy: (by - ay) / ny as f64,
        })
    }

    pub fn n_cells(&self) -> usize {
        self.nx * self.ny
    }

    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn center(&self, i: usize, j: usize) -> (f64, f64) {
        (
            self.ax + (i as f64 + 0.5) * self.hx,
            self.ay + (j as f64 + 0.5) * self.hy,
        )
    }

    /// Cell length scale used by the 2D jump indicator weights.
    pub fn h_cell(&self) -> f64 {
        (self.hx * self.hy).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn faces_tile_exactly() {
        let m = Mesh1D::new(-2.0, 3.0, 7).unwrap();
        assert!((m.h - 5.0 / 7.0).abs() < 1e-15);
        for i in 0..m.n {
            assert!((m.left_face(i + 1) - m.left_face(i) - m.h).abs() < 1e-14);
        }
        assert!((m.left_face(m.n) - m.b).abs() < 1e-13);
        assert!(Mesh1D::new(0.0, 1.0, 0).is_err());
        assert!(Mesh1D::new(1.0, 1.0, 4).is_err());
    }

    #[test]
    fn mesh2d_indexing() {
        let m = Mesh2D::new(0.0, 4.0, 0.0, 1.0, 480, 120).unwrap();
        assert!((m.hx - m.hy).abs() < 1e-15);
        assert_eq!(m.idx(0, 1), 480);
        let (x, y) = m.center(0, 0);
        assert!((x - m.hx / 2.0).abs() < 1e-15);
        assert!((y - m.hy / 2.0).abs() < 1e-15);
    }
}
