//! Largest-eigenvalue estimate of a preconditioned operator by Arnoldi.

use faer::Mat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::operator::{axpy, dot, norm2, LinearOperator};
use crate::error::{Error, Result};

pub const DEFAULT_ARNOLDI_STEPS: usize = 10;

/// Real part of the largest-modulus Ritz value of `precond * op` after `k`
/// Arnoldi steps from a uniform `[0, 1)` start vector. Entries where
/// `mask` is true are zeroed in the start vector.
pub fn estimate_max_eig<A, M>(
    op: &A,
    precond: &M,
    k: usize,
    seed: u64,
    mask: Option<&[bool]>,
) -> Result<f64>
where
    A: LinearOperator + ?Sized,
    M: LinearOperator + ?Sized,
{
    let n = op.dim();
    if precond.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: precond.dim() });
    }
    if k == 0 || n == 0 {
        return Err(Error::InvalidArgument("Arnoldi needs k >= 1 on a nonempty operator".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v0: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    if let Some(mask) = mask {
        for (vi, &m) in v0.iter_mut().zip(mask) {
            if m {
                *vi = 0.0;
            }
        }
    }
    let beta = norm2(&v0);
    if beta == 0.0 {
        return Err(Error::InvalidArgument("start vector vanishes".into()));
    }
    let k = k.min(n);
    let mut v = vec![v0.iter().map(|x| x / beta).collect::<Vec<f64>>()];
    let mut h = vec![vec![0.0; k]; k + 1];
    let mut t = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut size = k;
    for j in 0..k {
        op.apply(&v[j], &mut t);
        precond.apply(&t, &mut w);
        let scale = norm2(&w);
        for _ in 0..2 {
            for (i, vi) in v.iter().enumerate() {
                let d = dot(&w, vi);
                h[i][j] += d;
                axpy(-d, vi, &mut w);
            }
        }
        let wn = norm2(&w);
        h[j + 1][j] = wn;
        if wn <= 1e-12 * scale.max(f64::MIN_POSITIVE) {
            size = j + 1;
            break;
        }
        v.push(w.iter().map(|x| x / wn).collect());
    }
    let hm = Mat::<f64>::from_fn(size, size, |i, j| h[i][j]);
    let eigs = hm
        .eigenvalues()
        .map_err(|e| Error::Factorization(format!("Hessenberg eigenvalues: {e:?}")))?;
    let best = eigs
        .iter()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .ok_or_else(|| Error::Factorization("no Ritz values".into()))?;
    Ok(best.re)
}
