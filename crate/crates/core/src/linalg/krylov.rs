//! Right-preconditioned (flexible) GMRES.

use super::operator::{axpy, dot, norm2, LinearOperator};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct KrylovResult {
    pub x: Vec<f64>,
    pub iterations: usize,
    /// Residual 2-norms: the initial one, then one per iteration.
    pub residual_history: Vec<f64>,
    pub converged: bool,
}

struct Givens {
    c: f64,
    s: f64,
}

/// Runs up to `m` flexible Arnoldi steps from residual `r0`, updates `x`
/// and returns `(steps, estimated residual per step, breakdown)`.
/// `stop` is checked against the estimated residual after each step.
fn flexible_cycle<A, M>(
    op: &A,
    precond: &M,
    r0: &[f64],
    x: &mut [f64],
    m: usize,
    stop: f64,
) -> (usize, Vec<f64>, bool)
where
    A: LinearOperator + ?Sized,
    M: LinearOperator + ?Sized,
{
    let n = r0.len();
    let beta = norm2(r0);
    let mut estimates = Vec::with_capacity(m);
    if beta == 0.0 || m == 0 {
        return (0, estimates, beta == 0.0);
    }
    let mut v: Vec<Vec<f64>> = vec![r0.iter().map(|r| r / beta).collect()];
    let mut z: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut h: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut rot: Vec<Givens> = Vec::with_capacity(m);
    let mut g = vec![beta];
    let mut w = vec![0.0; n];
    let mut breakdown = false;
    let mut steps = 0;
    for j in 0..m {
        let mut zj = vec![0.0; n];
        precond.apply(&v[j], &mut zj);
        op.apply(&zj, &mut w);
        z.push(zj);
        // modified Gram-Schmidt, two passes for robustness
        let mut hj = vec![0.0; j + 2];
        for _ in 0..2 {
            for (i, vi) in v.iter().enumerate() {
                let d = dot(&w, vi);
                hj[i] += d;
                axpy(-d, vi, &mut w);
            }
        }
        let wn = norm2(&w);
        hj[j + 1] = wn;
        for (i, gv) in rot.iter().enumerate() {
            let (a, b) = (hj[i], hj[i + 1]);
            hj[i] = gv.c * a + gv.s * b;
            hj[i + 1] = -gv.s * a + gv.c * b;
        }
        let (a, b) = (hj[j], hj[j + 1]);
        let r = a.hypot(b);
        let (c, s) = if r == 0.0 { (1.0, 0.0) } else { (a / r, b / r) };
        hj[j] = r;
        hj[j + 1] = 0.0;
        rot.push(Givens { c, s });
        let gj = g[j];
        g[j] = c * gj;
        g.push(-s * gj);
        h.push(hj);
        steps = j + 1;
        estimates.push(g[j + 1].abs());
        if wn <= 1e-14 * beta {
            breakdown = true;
            break;
        }
        if g[j + 1].abs() <= stop {
            break;
        }
        v.push(w.iter().map(|x| x / wn).collect());
    }
    // back substitution on the triangular factor
    let mut y = vec![0.0; steps];
    for i in (0..steps).rev() {
        let mut s = g[i];
        for k in i + 1..steps {
            s -= h[k][i] * y[k];
        }
        y[i] = if h[i][i] != 0.0 { s / h[i][i] } else { 0.0 };
    }
    for (yi, zi) in y.iter().zip(&z) {
        axpy(*yi, zi, x);
    }
    (steps, estimates, breakdown)
}

fn check_dims(n: usize, b: &[f64], precond_dim: usize) -> Result<()> {
    if b.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: b.len() });
    }
    if precond_dim != n {
        return Err(Error::DimensionMismatch { expected: n, got: precond_dim });
    }
    Ok(())
}

fn true_residual<A: LinearOperator + ?Sized>(op: &A, b: &[f64], x: &[f64]) -> Vec<f64> {
    let mut r = vec![0.0; b.len()];
    op.apply(x, &mut r);
    for (ri, bi) in r.iter_mut().zip(b) {
        *ri = bi - *ri;
    }
    r
}

/// FGMRES from `x0` (zero if `None`) until the true residual norm drops to
/// `tol_abs` or `max_it` preconditioner applications were spent. `restart`
/// of `None` means full (unrestarted) GMRES.
pub fn fgmres<A, M>(
    op: &A,
    precond: &M,
    b: &[f64],
    x0: Option<&[f64]>,
    tol_abs: f64,
    max_it: usize,
    restart: Option<usize>,
) -> Result<KrylovResult>
where
    A: LinearOperator + ?Sized,
    M: LinearOperator + ?Sized,
{
    let n = op.dim();
    check_dims(n, b, precond.dim())?;
    let mut x = match x0 {
        Some(x0) if x0.len() != n => {
            return Err(Error::DimensionMismatch { expected: n, got: x0.len() })
        }
        Some(x0) => x0.to_vec(),
        None => vec![0.0; n],
    };
    let mut r = true_residual(op, b, &x);
    let mut rnorm = norm2(&r);
    let mut history = vec![rnorm];
    let mut iterations = 0;
    while rnorm > tol_abs && iterations < max_it {
        let m = restart.unwrap_or(max_it).min(max_it - iterations);
        let (steps, est, _) = flexible_cycle(op, precond, &r, &mut x, m, tol_abs);
        iterations += steps;
        r = true_residual(op, b, &x);
        rnorm = norm2(&r);
        if let Some((_, head)) = est.split_last() {
            history.extend_from_slice(head);
        }
        history.push(rnorm);
        if steps == 0 {
            break;
        }
        log::trace!("fgmres: {iterations} iterations, residual {rnorm:.3e}");
    }
    Ok(KrylovResult {
        x,
        iterations,
        residual_history: history,
        converged: rnorm <= tol_abs,
    })
}

/// Exactly `steps` right-preconditioned GMRES iterations starting from `x`
/// (fewer on breakdown); used as a smoother.
pub fn gmres_steps<A, M>(op: &A, precond: &M, b: &[f64], x: &mut [f64], steps: usize)
where
    A: LinearOperator + ?Sized,
    M: LinearOperator + ?Sized,
{
    let r = true_residual(op, b, x);
    flexible_cycle(op, precond, &r, x, steps, 0.0);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::operator::Identity;
    use crate::linalg::CsrMatrix;

    #[test]
    fn identity_converges_in_one_step() {
        let a = CsrMatrix::identity(4);
        let b = [1.0, -2.0, 3.0, 0.5];
        let res = fgmres(&a, &Identity(4), &b, None, 1e-12, 10, None).unwrap();
        assert_eq!(res.iterations, 1);
        assert!(res.converged);
        assert_eq!(res.x, b.to_vec());
    }

    #[test]
    fn krylov_exactness_on_diagonal() {
        let a = CsrMatrix::from_dense(&[vec![1.0, 0.0], vec![0.0, 2.0]]).unwrap();
        let res = fgmres(&a, &Identity(2), &[1.0, 2.0], None, 1e-12, 10, None).unwrap();
        assert!(res.iterations <= 2 && res.converged);
        assert!((res.x[0] - 1.0).abs() < 1e-12 && (res.x[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn loose_tolerance_takes_zero_iterations() {
        let a = CsrMatrix::identity(3);
        let res = fgmres(&a, &Identity(3), &[1.0, 1.0, 1.0], None, 2.0, 10, None).unwrap();
        assert_eq!(res.iterations, 0);
        assert!(res.converged);
        assert_eq!(res.x, vec![0.0; 3]);
    }

    #[test]
    fn unconverged_is_flagged() {
        let d: Vec<Vec<f64>> = (0..6)
            .map(|i| (0..6).map(|j| if i == j { (i + 1) as f64 } else { 0.0 }).collect())
            .collect();
        let a = CsrMatrix::from_dense(&d).unwrap();
        let res = fgmres(&a, &Identity(6), &[1.0; 6], None, 1e-14, 2, None).unwrap();
        assert!(!res.converged);
        assert_eq!(res.iterations, 2);
    }

    #[test]
    fn restarted_run_converges() {
        let n = 20;
        let d: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| match i as i64 - j as i64 {
                        0 => 3.0,
                        1 => -1.0,
                        -1 => -1.5,
                        _ => 0.0,
                    })
                    .collect()
            })
            .collect();
        let a = CsrMatrix::from_dense(&d).unwrap();
        let b = vec![1.0; n];
        let res = fgmres(&a, &Identity(n), &b, None, 1e-10, 200, Some(5)).unwrap();
        assert!(res.converged);
        assert!(norm2(&a.residual(&b, &res.x).unwrap()) <= 1e-10);
    }
}
