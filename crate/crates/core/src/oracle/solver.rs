//! Smallest Dirichlet eigenpair of the 5-point Laplacian by inverse
//! iteration, each step solved with conjugate gradients.
//!
//! Vectors live on the full `nx × ny` grid with conductor nodes pinned to
//! zero, so the operator is a plain stencil sweep. All reductions are
//! serial and in index order, which keeps results bit-reproducible.

use super::raster::DiscretizedCavity;

/// Operator `4·v[i] − Σ v[neighbours]` (the Laplacian scaled by `h²`).
pub(crate) struct Stencil<'a> {
    nx: usize,
    ny: usize,
    mask: &'a [bool],
}

impl<'a> Stencil<'a> {
    pub fn new(cavity: &'a DiscretizedCavity) -> Self {
        Self { nx: cavity.nx(), ny: cavity.ny(), mask: cavity.mask() }
    }

    pub fn apply(&self, v: &[f64], out: &mut [f64]) {
        let nx = self.nx;
        out.fill(0.0);
        // the outer ring is always masked, so interior rows see valid neighbours
        for j in 1..self.ny - 1 {
            let row = j * nx;
            for i in row + 1..row + nx - 1 {
                if !self.mask[i] {
                    out[i] = 4.0 * v[i] - v[i - 1] - v[i + 1] - v[i - nx] - v[i + nx];
                }
            }
        }
    }

    pub fn ones(&self) -> Vec<f64> {
        self.mask.iter().map(|&m| if m { 0.0 } else { 1.0 }).collect()
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Solves `A x = b` in place from the initial guess in `x`. Returns the
/// number of iterations and the final relative residual.
pub(crate) fn conjugate_gradient(
    op: &Stencil<'_>,
    b: &[f64],
    x: &mut [f64],
    rtol: f64,
    max_iter: usize,
) -> (usize, f64) {
    let n = b.len();
    let b_norm = norm(b).max(f64::MIN_POSITIVE);
    let mut ap = vec![0.0; n];
    op.apply(x, &mut ap);
    let mut r: Vec<f64> = b.iter().zip(&ap).map(|(bi, ai)| bi - ai).collect();
    let mut p = r.clone();
    let mut rr = dot(&r, &r);
    let target = (rtol * b_norm).powi(2);
    let mut it = 0;
    while rr > target && it < max_iter {
        op.apply(&p, &mut ap);
        let alpha = rr / dot(&p, &ap);
        axpy(alpha, &p, x);
        axpy(-alpha, &ap, &mut r);
        let rr_new = dot(&r, &r);
        let beta = rr_new / rr;
        for (pi, ri) in p.iter_mut().zip(&r) {
            *pi = ri + beta * *pi;
        }
        rr = rr_new;
        it += 1;
    }
    (it, rr.sqrt() / b_norm)
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct InverseIterationOutcome {
    /// Eigenvalue of the `h²`-scaled operator.
    pub mu: f64,
    pub iterations: usize,
    pub cg_iterations: usize,
    /// `‖A v − μ v‖ / (μ ‖v‖)`.
    pub residual: f64,
    pub converged: bool,
}

pub(crate) fn inverse_iteration(
    op: &Stencil<'_>,
    tol: f64,
    max_outer: usize,
    max_cg: usize,
) -> (Vec<f64>, InverseIterationOutcome) {
    let mut v = op.ones();
    let scale = norm(&v);
    v.iter_mut().for_each(|x| *x /= scale);
    let mut av = vec![0.0; v.len()];
    op.apply(&v, &mut av);
    let mut mu = dot(&v, &av);
    let mut residual = f64::INFINITY;
    let mut cg_total = 0;
    let mut y = vec![0.0; v.len()];

    for outer in 1..=max_outer {
        // warm start from the current eigenvalue estimate; inner accuracy
        // tracks the outer residual
        for (yi, vi) in y.iter_mut().zip(&v) {
            *yi = vi / mu;
        }
        let inner_tol = (0.05 * residual).clamp(tol * 1e-3, 1e-3);
        let (its, _) = conjugate_gradient(op, &v, &mut y, inner_tol, max_cg);
        cg_total += its;
        let y_norm = norm(&y);
        for (vi, yi) in v.iter_mut().zip(&y) {
            *vi = yi / y_norm;
        }
        op.apply(&v, &mut av);
        mu = dot(&v, &av);
        residual = av.iter().zip(&v).map(|(a, x)| (a - mu * x).powi(2)).sum::<f64>().sqrt() / mu;
        if residual <= tol {
            return (
                v,
                InverseIterationOutcome {
                    mu,
                    iterations: outer,
                    cg_iterations: cg_total,
                    residual,
                    converged: true,
                },
            );
        }
    }
    (
        v,
        InverseIterationOutcome {
            mu,
            iterations: max_outer,
            cg_iterations: cg_total,
            residual,
            converged: false,
        },
    )
}
