//! Legendre modal bases, Gauss/Gauss-Lobatto quadrature, and modal<->nodal
//! transforms on the reference interval [-1, 1].
//!
//! The basis is the standard Legendre family `P_l` normalized by `P_l(1) = 1`,
//! so the reference-cell norms are `m_l = 2/(2l+1)`. With the bubble weight
//! `nu(X) = 1 - X^2` the basis satisfies, on a physical cell of width `h`,
//!
//! ```text
//!     int_K nu (phi_l)_x (phi_q)_x dx = delta_lq * (2/h) * l(l+1) * m_l,
//! ```
//!
//! which is what makes the viscous stiffness block diagonal in modal space.

use crate::error::{Error, Result};

/// Hard cap on the polynomial degree (scratch sizing; far above the tested
/// k = 1..3 range).
pub const MAX_DEGREE: usize = 8;

/// Evaluate the Legendre polynomial `P_l` at `x` by the three-term recurrence
/// `(l+1) P_{l+1} = (2l+1) x P_l - l P_{l-1}`.
pub fn legendre_eval(l: usize, x: f64) -> Result<f64> {
    if l > MAX_DEGREE {
        return Err(Error::invalid(format!(
            "Legendre degree {l} exceeds maximum {MAX_DEGREE}"
        )));
    }
    Ok(legendre_eval_unchecked(l, x))
}

pub(crate) fn legendre_eval_unchecked(l: usize, x: f64) -> f64 {
    let mut pm = 1.0; // P_0
    if l == 0 {
        return pm;
    }
    let mut p = x; // P_1
    for n in 1..l {
        let pn = ((2 * n + 1) as f64 * x * p - n as f64 * pm) / (n + 1) as f64;
        pm = p;
        p = pn;
    }
    p
}

/// Fill `out[0..=lmax]` with `P_l(x)`.
pub fn legendre_eval_all(lmax: usize, x: f64, out: &mut [f64]) {
    out[0] = 1.0;
    if lmax == 0 {
        return;
    }
    out[1] = x;
    for n in 1..lmax {
        out[n + 1] = ((2 * n + 1) as f64 * x * out[n] - n as f64 * out[n - 1]) / (n + 1) as f64;
    }
}

/// First derivative `P_l'(x)`.
pub fn legendre_deriv(l: usize, x: f64) -> Result<f64> {
    if l > MAX_DEGREE {
        return Err(Error::invalid(format!(
            "Legendre degree {l} exceeds maximum {MAX_DEGREE}"
        )));
    }
    let mut table = vec![0.0; 2 * (l + 1)];
    legendre_derivs_all(l, 1, x, &mut table);
    Ok(table[l + 1 + l])
}

/// All derivatives `P_l^{(d)}(x)` for `l <= lmax`, `d <= dmax`.
///
/// `out` is row-major `[d][l]` with stride `lmax + 1`; differentiating the
/// three-term recurrence `d` times gives
/// `(l+1) P_{l+1}^{(d)} = (2l+1)(x P_l^{(d)} + d P_l^{(d-1)}) - l P_{l-1}^{(d)}`.
pub fn legendre_derivs_all(lmax: usize, dmax: usize, x: f64, out: &mut [f64]) {
    let s = lmax + 1;
    assert!(out.len() >= s * (dmax + 1));
    out[..s * (dmax + 1)].fill(0.0);
    out[0] = 1.0; // P_0
    if lmax == 0 {
        return;
    }
    out[1] = x; // P_1
    if dmax >= 1 {
        out[s + 1] = 1.0; // P_1'
    }
    for l in 1..lmax {
        let a = (2 * l + 1) as f64;
        let b = l as f64;
        let c = (l + 1) as f64;
        for d in 0..=dmax {
            let lower = if d == 0 { 0.0 } else { out[(d - 1) * s + l] };
            out[d * s + l + 1] =
                (a * (x * out[d * s + l] + d as f64 * lower) - b * out[d * s + l - 1]) / c;
        }
    }
}

/// A quadrature rule on the reference interval [-1, 1].
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integrate `f` over [-1, 1].
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

const NEWTON_TOL: f64 = 1e-15;
const NEWTON_MAX_ITER: usize = 100;

/// n-point Gauss-Legendre rule; exact for polynomials of degree <= 2n-1.
///
/// Nodes are the roots of `P_n`, found by Newton iteration from the Chebyshev
/// initial guess; weights are `2 / ((1 - x^2) P_n'(x)^2)`.
pub fn gauss_rule(n: usize) -> Result<QuadratureRule> {
    if n < 1 {
        return Err(Error::invalid("Gauss rule needs at least 1 point"));
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let mut derivs = vec![0.0; 2 * (n + 1)];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        // exploit symmetry: solve left half, mirror below
        let mut converged = false;
        for _ in 0..NEWTON_MAX_ITER {
            legendre_derivs_all(n, 1, x, &mut derivs);
            let p = derivs[n];
            let dp = derivs[n + 1 + n];
            let dx = p / dp;
            x -= dx;
            if dx.abs() < NEWTON_TOL && p.abs() < 1e-14 {
                converged = true;
                break;
            }
        }
        if !converged {
            // one more residual check; the iteration is safe for all n we use
            legendre_derivs_all(n, 1, x, &mut derivs);
            if derivs[n].abs() > 1e-12 {
                return Err(Error::Internal(format!(
                    "Gauss-Legendre Newton iteration stalled for n={n}"
                )));
            }
        }
        legendre_derivs_all(n, 1, x, &mut derivs);
        let dp = derivs[n + 1 + n];
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    // sort ascending and symmetrize against roundoff
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| nodes[a].partial_cmp(&nodes[b]).unwrap());
    let nodes: Vec<f64> = idx.iter().map(|&i| nodes[i]).collect();
    let weights: Vec<f64> = idx.iter().map(|&i| weights[i]).collect();
    let mut rule = QuadratureRule { nodes, weights };
    for i in 0..n / 2 {
        let j = n - 1 - i;
        let a = 0.5 * (rule.nodes[j] - rule.nodes[i]);
        rule.nodes[i] = -a;
        rule.nodes[j] = a;
        let w = 0.5 * (rule.weights[i] + rule.weights[j]);
        rule.weights[i] = w;
        rule.weights[j] = w;
    }
    if n % 2 == 1 {
        rule.nodes[n / 2] = 0.0;
    }
    Ok(rule)
}

/// n-point Gauss-Lobatto rule (includes the endpoints); exact for polynomials
/// of degree <= 2n-3.
///
/// Interior nodes are the roots of `P_{n-1}'`; weights are
/// `2 / (n(n-1) P_{n-1}(x)^2)`.
pub fn lobatto_rule(n: usize) -> Result<QuadratureRule> {
    if n < 2 {
        return Err(Error::invalid("Gauss-Lobatto rule needs at least 2 points"));
    }
    let m = n - 1;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    nodes[0] = -1.0;
    nodes[m] = 1.0;
    let mut derivs = vec![0.0; 3 * (m + 1)];
    for i in 1..m {
        // interior roots of P_m'; Chebyshev-Lobatto initial guess
        let mut x = (std::f64::consts::PI * i as f64 / m as f64).cos();
        for _ in 0..NEWTON_MAX_ITER {
            legendre_derivs_all(m, 2, x, &mut derivs);
            let dp = derivs[m + 1 + m];
            let ddp = derivs[2 * (m + 1) + m];
            let dx = dp / ddp;
            x -= dx;
            if dx.abs() < NEWTON_TOL {
                break;
            }
        }
        nodes[n - 1 - i] = x;
    }
    nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let endpoint_w = 2.0 / (n as f64 * m as f64);
    for i in 0..n {
        let p = legendre_eval_unchecked(m, nodes[i]);
        weights[i] = endpoint_w / (p * p);
    }
    weights[0] = endpoint_w;
    weights[m] = endpoint_w;
    // symmetrize
    for i in 0..n / 2 {
        let j = n - 1 - i;
        let a = 0.5 * (nodes[j] - nodes[i]);
        nodes[i] = -a;
        nodes[j] = a;
        let w = 0.5 * (weights[i] + weights[j]);
        weights[i] = w;
        weights[j] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok(QuadratureRule { nodes, weights })
}

/// Invert a small dense matrix (row-major) by Gauss-Jordan with partial
/// pivoting. Sizes here are at most (MAX_DEGREE+1)^2.
pub(crate) fn invert_dense(n: usize, a: &[f64]) -> Result<Vec<f64>> {
    let mut m = a.to_vec();
    let mut inv = vec![0.0; n * n];
    for i in 0..n {
        inv[i * n + i] = 1.0;
    }
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if m[r * n + col].abs() > m[piv * n + col].abs() {
                piv = r;
            }
        }
        if m[piv * n + col].abs() < 1e-300 {
            return Err(Error::Internal("singular interpolation matrix".into()));
        }
        if piv != col {
            for c in 0..n {
                m.swap(col * n + c, piv * n + c);
                inv.swap(col * n + c, piv * n + c);
            }
        }
        let d = m[col * n + col];
        for c in 0..n {
            m[col * n + c] /= d;
            inv[col * n + c] /= d;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = m[r * n + col];
            if f != 0.0 {
                for c in 0..n {
                    m[r * n + c] -= f * m[col * n + c];
                    inv[r * n + c] -= f * inv[col * n + c];
                }
            }
        }
    }
    Ok(inv)
}

/// Precomputed tables for a degree-k modal Legendre basis.
///
/// All hot-path evaluations (residual assembly, budgets, jump indicators,
/// limiting) read from these tables; nothing recomputes Legendre recurrences
/// per quadrature point.
#[derive(Debug, Clone)]
pub struct Basis {
    pub k: usize,
    /// Reference-cell norms m_l = 2/(2l+1).
    pub m: Vec<f64>,
    /// Volume quadrature: (k+2)-point Gauss. This same rule is used for the
    /// residual integrals and for the E/F entropy budgets, and (per face) for
    /// 2D face integrals and jump seminorms.
    pub vol: QuadratureRule,
    /// `phi_vol[q*(k+1)+l] = P_l(X_q)` at volume nodes.
    pub phi_vol: Vec<f64>,
    /// `dphi_vol[q*(k+1)+l] = P_l'(X_q)` at volume nodes.
    pub dphi_vol: Vec<f64>,
    /// Bubble `1 - X_q^2` at volume nodes.
    pub nu_vol: Vec<f64>,
    /// (k+1)-point Gauss-Lobatto rule (entropy-variable interpolation nodes
    /// and 1D limiter points).
    pub lobatto: QuadratureRule,
    /// `phi_lob[q*(k+1)+l] = P_l(Xlob_q)`.
    pub phi_lob: Vec<f64>,
    /// Nodal -> modal map for the Lobatto nodes, row-major (k+1)x(k+1):
    /// `modal[l] = sum_q n2m[l*(k+1)+q] * nodal[q]`.
    pub n2m: Vec<f64>,
    /// `phi_end[s][l] = P_l(-1)` for s=0, `P_l(+1)` for s=1.
    pub phi_end: [Vec<f64>; 2],
    /// `dphi_end[s][d*(k+1)+l] = P_l^{(d)}(-1 or +1)` for d = 0..=k.
    pub dphi_end: [Vec<f64>; 2],
    /// (k+1)-point Gauss rule (2D limiter point set).
    pub gauss_k1: QuadratureRule,
    /// `phi_gauss_k1[q*(k+1)+l]`.
    pub phi_gauss_k1: Vec<f64>,
    /// (k+3)-point Gauss rule for error norms, with value table.
    pub err: QuadratureRule,
    pub phi_err: Vec<f64>,
    /// (k+4)-point Gauss rule for initial L2 projection, with value table.
    pub proj: QuadratureRule,
    pub phi_proj: Vec<f64>,
}

fn value_table(rule: &QuadratureRule, k: usize) -> Vec<f64> {
    let mut t = vec![0.0; rule.len() * (k + 1)];
    for (q, &x) in rule.nodes.iter().enumerate() {
        legendre_eval_all(k, x, &mut t[q * (k + 1)..(q + 1) * (k + 1)]);
    }
    t
}

impl Basis {
    pub fn new(k: usize) -> Result<Basis> {
        if k < 1 || k > MAX_DEGREE {
            return Err(Error::invalid(format!(
                "polynomial degree k={k} outside supported range 1..={MAX_DEGREE}"
            )));
        }
        let kp1 = k + 1;
        let m: Vec<f64> = (0..=k).map(|l| 2.0 / (2 * l + 1) as f64).collect();

        let vol = gauss_rule(k + 2)?;
        let phi_vol = value_table(&vol, k);
        let mut dphi_vol = vec![0.0; vol.len() * kp1];
        let mut scratch = vec![0.0; 2 * kp1];
        for (q, &x) in vol.nodes.iter().enumerate() {
            legendre_derivs_all(k, 1, x, &mut scratch);
            dphi_vol[q * kp1..(q + 1) * kp1].copy_from_slice(&scratch[kp1..2 * kp1]);
        }
        let nu_vol: Vec<f64> = vol.nodes.iter().map(|&x| 1.0 - x * x).collect();

        let lobatto = lobatto_rule(kp1)?;
        let phi_lob = value_table(&lobatto, k);
        // Vandermonde V[q][l] = P_l(Xlob_q); n2m = V^{-1}
        let n2m = invert_dense(kp1, &phi_lob)?;

        let mut phi_end = [vec![0.0; kp1], vec![0.0; kp1]];
        let mut dphi_end = [vec![0.0; kp1 * kp1], vec![0.0; kp1 * kp1]];
        let mut dscratch = vec![0.0; kp1 * kp1];
        for (s, &x) in [-1.0f64, 1.0].iter().enumerate() {
            legendre_eval_all(k, x, &mut phi_end[s]);
            legendre_derivs_all(k, k, x, &mut dscratch);
            dphi_end[s].copy_from_slice(&dscratch);
        }

        let gauss_k1 = gauss_rule(kp1)?;
        let phi_gauss_k1 = value_table(&gauss_k1, k);
        let err = gauss_rule(k + 3)?;
        let phi_err = value_table(&err, k);
        let proj = gauss_rule(k + 4)?;
        let phi_proj = value_table(&proj, k);

        Ok(Basis {
            k,
            m,
            vol,
            phi_vol,
            dphi_vol,
            nu_vol,
            lobatto,
            phi_lob,
            n2m,
            phi_end,
            dphi_end,
            gauss_k1,
            phi_gauss_k1,
            err,
            phi_err,
            proj,
            phi_proj,
        })
    }

    pub fn n_modes(&self) -> usize {
        self.k + 1
    }

    /// Interpolate: modal coefficients of the unique degree-k polynomial
    /// matching `nodal` at the Lobatto nodes.
    pub fn nodal_to_modal(&self, nodal: &[f64], modal: &mut [f64]) {
        let n = self.k + 1;
        debug_assert_eq!(nodal.len(), n);
        for l in 0..n {
            let row = &self.n2m[l * n..(l + 1) * n];
            modal[l] = row.iter().zip(nodal).map(|(&a, &b)| a * b).sum();
        }
    }

    /// Evaluate a modal coefficient slice at reference coordinate X.
    pub fn eval_modal(&self, coeffs: &[f64], x: f64) -> f64 {
        let mut phi = [0.0; MAX_DEGREE + 1];
        legendre_eval_all(self.k, x, &mut phi[..=self.k]);
        coeffs.iter().zip(&phi).map(|(&c, &p)| c * p).sum()
    }

    /// d/dX of a modal coefficient slice at reference coordinate X (callers
    /// apply the physical chain-rule factor 2/h).
    pub fn eval_modal_deriv(&self, coeffs: &[f64], x: f64) -> f64 {
        let kp1 = self.k + 1;
        let mut tbl = [0.0; 2 * (MAX_DEGREE + 1)];
        legendre_derivs_all(self.k, 1, x, &mut tbl[..2 * kp1]);
        coeffs
            .iter()
            .zip(&tbl[kp1..2 * kp1])
            .map(|(&c, &d)| c * d)
            .sum()
    }
}
