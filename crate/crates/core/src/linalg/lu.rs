//! Dense, banded and sparse LU with partial pivoting.

use faer::linalg::solvers::Solve;
use faer::sparse::{SparseColMat, Triplet};
use faer::Mat;

use super::csr::CsrMatrix;
use crate::error::{Error, Result};

/// Pivots at or below this fraction of the largest entry count as zero.
const PIVOT_TOL: f64 = 1e-14;

#[derive(Debug, Clone)]
pub struct DenseLu {
    n: usize,
    /// Row-major `L \ U` with unit lower diagonal.
    lu: Vec<f64>,
    perm: Vec<usize>,
}

impl DenseLu {
    pub fn factor(a: &[Vec<f64>]) -> Result<Self> {
        let n = a.len();
        let mut lu = Vec::with_capacity(n * n);
        for row in a {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: row.len() });
            }
            lu.extend_from_slice(row);
        }
        let scale = lu.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| lu[i * n + k].abs().total_cmp(&lu[j * n + k].abs()))
                .unwrap();
            let piv = lu[p * n + k];
            if !(piv.abs() > PIVOT_TOL * scale) {
                return Err(Error::SingularMatrix { pivot: k });
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            for i in k + 1..n {
                let m = lu[i * n + k] / piv;
                lu[i * n + k] = m;
                if m != 0.0 {
                    for j in k + 1..n {
                        lu[i * n + j] -= m * lu[k * n + j];
                    }
                }
            }
        }
        Ok(Self { n, lu, perm })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.lu[i * n + j] * x[j]).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| self.lu[i * n + j] * x[j]).sum();
            x[i] = (x[i] - s) / self.lu[i * n + i];
        }
        b.copy_from_slice(&x);
    }
}

/// Band LU in the style of LAPACK `gbtrf`: row interchanges widen the upper
/// band to `kl + ku`.
#[derive(Debug, Clone)]
pub struct BandedLu {
    n: usize,
    kl: usize,
    /// Stored upper bandwidth `kl + ku`.
    ku: usize,
    /// Row `i` holds columns `i - kl ..= i + ku` at offsets `0 ..= kl + ku`.
    band: Vec<f64>,
    ipiv: Vec<usize>,
}

impl BandedLu {
    fn width(&self) -> usize {
        self.kl + self.ku + 1
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        i * self.width() + (j + self.kl - i)
    }

    /// Lower and upper bandwidth of a dense matrix.
    pub fn bandwidths(a: &[Vec<f64>]) -> (usize, usize) {
        let (mut kl, mut ku) = (0, 0);
        for (i, row) in a.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v != 0.0 {
                    if j < i {
                        kl = kl.max(i - j);
                    } else {
                        ku = ku.max(j - i);
                    }
                }
            }
        }
        (kl, ku)
    }

    pub fn factor(a: &[Vec<f64>]) -> Result<Self> {
        let n = a.len();
        let mut t = Vec::new();
        for (i, row) in a.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: row.len() });
            }
            t.extend(row.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(j, &v)| (i, j, v)));
        }
        Self::factor_triplets(n, &t)
    }

    /// Factors an `n x n` matrix given as `(row, col, value)` entries.
    pub fn factor_triplets(n: usize, t: &[(usize, usize, f64)]) -> Result<Self> {
        let (mut kl, mut ku0) = (0, 0);
        for &(i, j, v) in t {
            if i >= n || j >= n {
                return Err(Error::DimensionMismatch { expected: n, got: i.max(j) + 1 });
            }
            if v != 0.0 {
                if j < i {
                    kl = kl.max(i - j);
                } else {
                    ku0 = ku0.max(j - i);
                }
            }
        }
        let mut f = Self {
            n,
            kl,
            ku: kl + ku0,
            band: Vec::new(),
            ipiv: vec![0; n],
        };
        f.band = vec![0.0; n * f.width()];
        let mut scale = 0.0f64;
        for &(i, j, v) in t {
            if v != 0.0 {
                let k = f.idx(i, j);
                f.band[k] += v;
                scale = scale.max(f.band[k].abs());
            }
        }
        for k in 0..n {
            let last = (k + kl).min(n - 1);
            let p = (k..=last)
                .max_by(|&i, &j| {
                    f.band[f.idx(i, k)].abs().total_cmp(&f.band[f.idx(j, k)].abs())
                })
                .unwrap();
            f.ipiv[k] = p;
            let jmax = (k + f.ku).min(n - 1);
            if p != k {
                for j in k..=jmax {
                    let (a, b) = (f.idx(k, j), f.idx(p, j));
                    f.band.swap(a, b);
                }
            }
            let piv = f.band[f.idx(k, k)];
            if !(piv.abs() > PIVOT_TOL * scale) {
                return Err(Error::SingularMatrix { pivot: k });
            }
            for i in k + 1..=last {
                let ik = f.idx(i, k);
                let m = f.band[ik] / piv;
                f.band[ik] = m;
                if m != 0.0 {
                    for j in k + 1..=jmax {
                        let (ij, kj) = (f.idx(i, j), f.idx(k, j));
                        f.band[ij] -= m * f.band[kj];
                    }
                }
            }
        }
        Ok(f)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn lower_bandwidth(&self) -> usize {
        self.kl
    }

    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.n;
        for k in 0..n {
            b.swap(k, self.ipiv[k]);
            let bk = b[k];
            if bk != 0.0 {
                for i in k + 1..=(k + self.kl).min(n.saturating_sub(1)) {
                    b[i] -= self.band[self.idx(i, k)] * bk;
                }
            }
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            for j in i + 1..=(i + self.ku).min(n - 1) {
                s -= self.band[self.idx(i, j)] * b[j];
            }
            b[i] = s / self.band[self.idx(i, i)];
        }
    }
}

/// Sparse LU of a CSR matrix.
pub struct SparseLu {
    n: usize,
    lu: faer::sparse::linalg::solvers::Lu<usize, f64>,
}

impl std::fmt::Debug for SparseLu {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SparseLu").field("n", &self.n).finish_non_exhaustive()
    }
}

impl SparseLu {
    pub fn factor(a: &CsrMatrix) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: a.ncols() });
        }
        let triplets: Vec<Triplet<usize, usize, f64>> = a
            .triplets()
            .filter(|t| t.2 != 0.0)
            .map(|(i, j, v)| Triplet::new(i, j, v))
            .collect();
        let m = SparseColMat::<usize, f64>::try_new_from_triplets(n, n, &triplets)
            .map_err(|e| Error::Factorization(format!("{e:?}")))?;
        let lu = m.sp_lu().map_err(|e| Error::Factorization(format!("{e:?}")))?;
        let f = Self { n, lu };
        // a numerically singular matrix shows up as non-finite output
        let mut probe = vec![1.0; n];
        f.solve_in_place(&mut probe);
        if let Some(k) = probe.iter().position(|v| !v.is_finite()) {
            return Err(Error::SingularMatrix { pivot: k });
        }
        Ok(f)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve_in_place(&self, b: &mut [f64]) {
        let mut rhs = Mat::<f64>::from_fn(self.n, 1, |i, _| b[i]);
        self.lu.solve_in_place(rhs.as_mut());
        for (i, bi) in b.iter_mut().enumerate() {
            *bi = rhs[(i, 0)];
        }
    }
}

#[derive(Debug)]
pub enum LuFactorization {
    Dense(DenseLu),
    Banded(BandedLu),
    Sparse(SparseLu),
}

impl LuFactorization {
    pub fn dim(&self) -> usize {
        match self {
            LuFactorization::Dense(f) => f.dim(),
            LuFactorization::Banded(f) => f.dim(),
            LuFactorization::Sparse(f) => f.dim(),
        }
    }

    pub fn variant(&self) -> &'static str {
        match self {
            LuFactorization::Dense(_) => "dense",
            LuFactorization::Banded(_) => "banded",
            LuFactorization::Sparse(_) => "sparse",
        }
    }

    pub fn solve_in_place(&self, b: &mut [f64]) {
        match self {
            LuFactorization::Dense(f) => f.solve_in_place(b),
            LuFactorization::Banded(f) => f.solve_in_place(b),
            LuFactorization::Sparse(f) => f.solve_in_place(b),
        }
    }

    /// Banded when the band is narrow relative to `n`, dense otherwise.
    pub fn factor_small(a: &[Vec<f64>]) -> Result<Self> {
        let n = a.len();
        let mut t = Vec::new();
        for (i, row) in a.iter().enumerate() {
            t.extend(row.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(j, &v)| (i, j, v)));
        }
        Self::factor_local(n, &t)
    }

    /// Same choice as [`factor_small`](Self::factor_small) from entries.
    pub fn factor_local(n: usize, t: &[(usize, usize, f64)]) -> Result<Self> {
        let (mut kl, mut ku) = (0, 0);
        for &(i, j, v) in t {
            if v != 0.0 {
                if j < i {
                    kl = kl.max(i - j);
                } else {
                    ku = ku.max(j - i);
                }
            }
        }
        if 2 * kl + ku + 1 < n {
            BandedLu::factor_triplets(n, t).map(Self::Banded)
        } else {
            let mut d = vec![vec![0.0; n]; n];
            for &(i, j, v) in t {
                d[i][j] += v;
            }
            DenseLu::factor(&d).map(Self::Dense)
        }
    }
}

pub fn lu_solve(f: &LuFactorization, b: &[f64]) -> Result<Vec<f64>> {
    if b.len() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), got: b.len() });
    }
    let mut x = b.to_vec();
    f.solve_in_place(&mut x);
    Ok(x)
}
