//! Additive (optionally multiplicative) block relaxation.

use std::collections::{HashMap, VecDeque};

use super::blocks::BlockSet;
use crate::error::{Error, Result};
use crate::linalg::{CsrMatrix, LinearOperator, LuFactorization};

/// Factored diagonal blocks of a matrix.
#[derive(Debug)]
pub struct BlockRelaxer {
    n: usize,
    /// Block DoFs in factorization order.
    blocks: Vec<Vec<usize>>,
    factors: Vec<LuFactorization>,
    /// Present when sweeps are multiplicative.
    matrix: Option<CsrMatrix>,
}

/// Cuthill-McKee order of the block's DoFs in the graph of `A(block, block)`.
fn cuthill_mckee(a: &CsrMatrix, block: &[usize]) -> Vec<usize> {
    let local: HashMap<usize, usize> = block.iter().enumerate().map(|(k, &g)| (g, k)).collect();
    let adj: Vec<Vec<usize>> = block
        .iter()
        .map(|&g| {
            let (cols, vals) = a.row(g);
            cols.iter()
                .zip(vals)
                .filter(|(c, v)| **c != g && **v != 0.0)
                .filter_map(|(c, _)| local.get(c).copied())
                .collect()
        })
        .collect();
    let m = block.len();
    let mut order = Vec::with_capacity(m);
    let mut seen = vec![false; m];
    while order.len() < m {
        // start each component from a minimum-degree vertex
        let start = (0..m)
            .filter(|&k| !seen[k])
            .min_by_key(|&k| (adj[k].len(), k))
            .unwrap();
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(k) = queue.pop_front() {
            order.push(k);
            let mut next: Vec<usize> = adj[k].iter().copied().filter(|&j| !seen[j]).collect();
            next.sort_by_key(|&j| (adj[j].len(), j));
            next.dedup();
            for j in next {
                if !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
    }
    order.into_iter().map(|k| block[k]).collect()
}

impl BlockRelaxer {
    /// Extracts and factors `A(block, block)` for every block.
    pub fn setup(a: &CsrMatrix, bs: &BlockSet) -> Result<Self> {
        let n = a.nrows();
        bs.validate(n)?;
        let mut blocks = Vec::with_capacity(bs.len());
        let mut factors = Vec::with_capacity(bs.len());
        for (k, block) in bs.blocks.iter().enumerate() {
            let ordered = cuthill_mckee(a, block);
            let local: HashMap<usize, usize> =
                ordered.iter().enumerate().map(|(p, &g)| (g, p)).collect();
            let mut t = Vec::new();
            for (p, &g) in ordered.iter().enumerate() {
                let (cols, vals) = a.row(g);
                for (c, v) in cols.iter().zip(vals) {
                    if let Some(&q) = local.get(c) {
                        t.push((p, q, *v));
                    }
                }
            }
            let f = LuFactorization::factor_local(ordered.len(), &t).map_err(|e| match e {
                Error::SingularMatrix { .. } => Error::SingularBlock { block: k },
                other => other,
            })?;
            blocks.push(ordered);
            factors.push(f);
        }
        Ok(Self {
            n,
            blocks,
            factors,
            matrix: None,
        })
    }

    /// Same blocks, swept multiplicatively (residual refreshed per block).
    pub fn setup_multiplicative(a: &CsrMatrix, bs: &BlockSet) -> Result<Self> {
        let mut r = Self::setup(a, bs)?;
        r.matrix = Some(a.clone());
        Ok(r)
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block(&self, k: usize) -> &[usize] {
        &self.blocks[k]
    }

    pub fn factor(&self, k: usize) -> &LuFactorization {
        &self.factors[k]
    }

    pub fn is_multiplicative(&self) -> bool {
        self.matrix.is_some()
    }

    /// Correction `z` for residual `r`: `sum_j E_j A_j^{-1} E_j^T r` when
    /// additive.
    pub fn apply(&self, r: &[f64]) -> Result<Vec<f64>> {
        if r.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: r.len() });
        }
        let mut z = vec![0.0; self.n];
        self.apply_into(r, &mut z);
        Ok(z)
    }

    fn apply_into(&self, r: &[f64], z: &mut [f64]) {
        z.iter_mut().for_each(|v| *v = 0.0);
        let mut buf = Vec::new();
        for (block, f) in self.blocks.iter().zip(&self.factors) {
            buf.clear();
            match &self.matrix {
                None => buf.extend(block.iter().map(|&i| r[i])),
                Some(a) => buf.extend(block.iter().map(|&i| {
                    let (cols, vals) = a.row(i);
                    let az: f64 = cols.iter().zip(vals).map(|(&c, &v)| v * z[c]).sum();
                    r[i] - az
                })),
            }
            f.solve_in_place(&mut buf);
            for (&i, v) in block.iter().zip(&buf) {
                z[i] += v;
            }
        }
    }
}

impl LinearOperator for BlockRelaxer {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.apply_into(x, y);
    }
}

pub fn blkrelax_setup(a: &CsrMatrix, bs: &BlockSet) -> Result<BlockRelaxer> {
    BlockRelaxer::setup(a, bs)
}

pub fn blkrelax_apply(rel: &BlockRelaxer, r: &[f64]) -> Result<Vec<f64>> {
    rel.apply(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::lu_solve;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dense(d: &[&[f64]]) -> CsrMatrix {
        CsrMatrix::from_dense(&d.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn jacobi_on_diagonal() {
        let a = dense(&[&[2.0, 0.0], &[0.0, 4.0]]);
        let r = BlockRelaxer::setup(&a, &BlockSet::new(vec![vec![0], vec![1]], "pts")).unwrap();
        assert_eq!(r.apply(&[2.0, 4.0]).unwrap(), vec![1.0, 1.0]);
        let d = dense(&[&[2.0, 0.0], &[0.0, 3.0]]);
        let r = BlockRelaxer::setup(&d, &BlockSet::new(vec![vec![0], vec![1]], "pts")).unwrap();
        assert_eq!(lu_solve(r.factor(0), &[2.0]).unwrap(), vec![1.0]);
        assert_eq!(lu_solve(r.factor(1), &[3.0]).unwrap(), vec![1.0]);
    }

    #[test]
    fn single_block_is_direct_solve_and_overlap_doubles() {
        let a = dense(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let one = BlockRelaxer::setup(&a, &BlockSet::new(vec![vec![0, 1]], "all")).unwrap();
        let z = one.apply(&[3.0, 3.0]).unwrap();
        assert!((z[0] - 1.0).abs() < 1e-15 && (z[1] - 1.0).abs() < 1e-15);
        let two = BlockRelaxer::setup(&a, &BlockSet::new(vec![vec![0, 1], vec![0, 1]], "dup")).unwrap();
        let z = two.apply(&[3.0, 3.0]).unwrap();
        assert!((z[0] - 2.0).abs() < 1e-15 && (z[1] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn singular_block_is_named() {
        let a = dense(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 1.0], &[0.0, 1.0, 1.0]]);
        let err = BlockRelaxer::setup(&a, &BlockSet::new(vec![vec![0], vec![1, 2]], "b"));
        assert!(matches!(err, Err(Error::SingularBlock { block: 1 })));
    }

    #[test]
    fn multiplicative_sweep_is_block_gauss_seidel() {
        let a = dense(&[&[4.0, -1.0, 0.0], &[-1.0, 4.0, -1.0], &[0.0, -1.0, 4.0]]);
        let bs = BlockSet::new(vec![vec![0], vec![1], vec![2]], "pts");
        let gs = BlockRelaxer::setup_multiplicative(&a, &bs).unwrap();
        let z = gs.apply(&[4.0, 4.0, 4.0]).unwrap();
        let z0 = 1.0;
        let z1 = (4.0 + z0) / 4.0;
        let z2 = (4.0 + z1) / 4.0;
        assert!((z[0] - z0).abs() < 1e-15 && (z[1] - z1).abs() < 1e-15 && (z[2] - z2).abs() < 1e-15);
    }

    #[test]
    fn cuthill_mckee_orders_a_scrambled_chain() {
        // path 3 - 0 - 4 - 1 - 2 stored in scrambled order
        let mut d = vec![vec![0.0; 5]; 5];
        for (i, j) in [(3, 0), (0, 4), (4, 1), (1, 2)] {
            d[i][j] = -1.0;
            d[j][i] = -1.0;
        }
        for (i, row) in d.iter_mut().enumerate() {
            row[i] = 3.0;
        }
        let a = CsrMatrix::from_dense(&d).unwrap();
        let order = cuthill_mckee(&a, &[0, 1, 2, 3, 4]);
        assert!(order == vec![2, 1, 4, 0, 3] || order == vec![3, 0, 4, 1, 2]);
        let r = BlockRelaxer::setup(&a, &BlockSet::new(vec![vec![0, 1, 2, 3, 4]], "chain")).unwrap();
        assert_eq!(r.factor(0).variant(), "banded");
    }

    #[test]
    fn random_block_jacobi_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 12;
        let d: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| rng.gen_range(-1.0..1.0) + if i == j { 6.0 } else { 0.0 }).collect())
            .collect();
        let a = CsrMatrix::from_dense(&d).unwrap();
        let blocks = vec![vec![0, 3, 6, 9], vec![1, 4, 7, 10], vec![2, 5, 8, 11]];
        let rel = BlockRelaxer::setup(&a, &BlockSet::new(blocks.clone(), "3")).unwrap();
        let r: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let z = rel.apply(&r).unwrap();
        for b in &blocks {
            let sub: Vec<Vec<f64>> = b.iter().map(|&i| b.iter().map(|&j| d[i][j]).collect()).collect();
            let f = LuFactorization::Dense(crate::linalg::DenseLu::factor(&sub).unwrap());
            let y = lu_solve(&f, &b.iter().map(|&i| r[i]).collect::<Vec<_>>()).unwrap();
            for (k, &i) in b.iter().enumerate() {
                assert!((z[i] - y[k]).abs() < 1e-12);
            }
        }
    }
}
