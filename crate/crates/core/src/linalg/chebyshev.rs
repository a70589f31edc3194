//! Preconditioned Chebyshev iteration.

use super::operator::LinearOperator;
use crate::error::{invalid, Result};

/// `[1.1 M / 4, 1.1 M]`: damps the upper three quarters of the spectrum
/// and tolerates an underestimated `M`.
pub fn chebyshev_interval(max_eig: f64) -> [f64; 2] {
    [1.1 * max_eig / 4.0, 1.1 * max_eig]
}

/// Applies `degree` Chebyshev steps for `op x = b` preconditioned by
/// `precond`, with eigenvalue bounds `interval` of `precond * op`.
pub fn chebyshev_apply<A, M>(
    op: &A,
    precond: &M,
    interval: [f64; 2],
    degree: usize,
    b: &[f64],
    x: &mut [f64],
) -> Result<()>
where
    A: LinearOperator + ?Sized,
    M: LinearOperator + ?Sized,
{
    let [lo, hi] = interval;
    if !(lo > 0.0 && lo < hi && hi.is_finite()) {
        return invalid(format!("invalid Chebyshev interval [{lo}, {hi}]"));
    }
    if degree == 0 {
        return invalid("Chebyshev degree must be at least 1");
    }
    let n = b.len();
    let theta = 0.5 * (hi + lo);
    let delta = 0.5 * (hi - lo);
    let sigma = theta / delta;
    let mut rho_prev = 1.0 / sigma;
    let mut r = vec![0.0; n];
    let mut z = vec![0.0; n];
    let mut d = vec![0.0; n];
    for k in 0..degree {
        op.apply(x, &mut r);
        for (ri, bi) in r.iter_mut().zip(b) {
            *ri = bi - *ri;
        }
        precond.apply(&r, &mut z);
        if k == 0 {
            for (di, zi) in d.iter_mut().zip(&z) {
                *di = zi / theta;
            }
        } else {
            let rho = 1.0 / (2.0 * sigma - rho_prev);
            let (c1, c2) = (rho * rho_prev, 2.0 * rho / delta);
            for (di, zi) in d.iter_mut().zip(&z) {
                *di = c1 * *di + c2 * zi;
            }
            rho_prev = rho;
        }
        for (xi, di) in x.iter_mut().zip(&d) {
            *xi += di;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::operator::{norm2, Identity};
    use crate::linalg::CsrMatrix;

    #[test]
    fn interval_rule() {
        let [a, b] = chebyshev_interval(4.0);
        assert!((a - 1.1).abs() < 1e-15 && (b - 4.4).abs() < 1e-15);
    }

    #[test]
    fn identity_narrow_interval() {
        let b = [1.0, -2.0, 0.5];
        let mut x = [0.0; 3];
        chebyshev_apply(&Identity(3), &Identity(3), [0.99, 1.01], 1, &b, &mut x).unwrap();
        let r: Vec<f64> = b.iter().zip(&x).map(|(b, x)| b - x).collect();
        assert!(norm2(&r) * 100.0 <= norm2(&b));
    }

    #[test]
    fn degree_one_is_weighted_richardson() {
        let a = CsrMatrix::from_dense(&[vec![2.0, -1.0], vec![-1.0, 3.0]]).unwrap();
        let b = [1.0, 2.0];
        let x0 = [0.3, -0.2];
        let mut x = x0;
        chebyshev_apply(&a, &Identity(2), [0.5, 3.5], 1, &b, &mut x).unwrap();
        let r = a.residual(&b, &x0).unwrap();
        for i in 0..2 {
            assert!((x[i] - (x0[i] + 2.0 / 4.0 * r[i])).abs() < 1e-15);
        }
    }

    #[test]
    fn residual_polynomial_fixes_null_component() {
        // scalar system a = 0 (null space), b = 0: x must stay put
        let a = CsrMatrix::from_dense(&[vec![0.0]]).unwrap();
        let mut x = [0.7];
        chebyshev_apply(&a, &Identity(1), [0.5, 2.0], 3, &[0.0], &mut x).unwrap();
        assert_eq!(x, [0.7]);
        // scalar a = lambda: error multiplies by the scaled Chebyshev polynomial
        let lambda = 1.3;
        let a = CsrMatrix::from_dense(&[vec![lambda]]).unwrap();
        let mut x = [1.0];
        chebyshev_apply(&a, &Identity(1), [0.5, 2.0], 2, &[0.0], &mut x).unwrap();
        // p_2(t) = T_2((theta - t)/delta) / T_2(theta/delta)
        let (theta, delta) = (1.25, 0.75);
        let t2 = |s: f64| 2.0 * s * s - 1.0;
        let p = t2((theta - lambda) / delta) / t2(theta / delta);
        assert!((x[0] - p).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_interval() {
        let mut x = [0.0];
        assert!(chebyshev_apply(&Identity(1), &Identity(1), [1.0, 0.5], 1, &[1.0], &mut x).is_err());
        assert!(chebyshev_apply(&Identity(1), &Identity(1), [0.0, 0.5], 1, &[1.0], &mut x).is_err());
    }
}
