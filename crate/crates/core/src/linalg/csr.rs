use crate::error::{invalid, Error, Result};

/// Compressed sparse row matrix with sorted, unique column indices per row.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    nrows: usize,
    ncols: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Validates raw CSR arrays.
    pub fn new(
        nrows: usize,
        ncols: usize,
        row_offsets: Vec<usize>,
        col_indices: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if row_offsets.len() != nrows + 1 || row_offsets[0] != 0 {
            return invalid("row offsets must have n_rows + 1 entries starting at 0");
        }
        if row_offsets.windows(2).any(|w| w[0] > w[1]) {
            return invalid("row offsets must be nondecreasing");
        }
        let nnz = row_offsets[nrows];
        if col_indices.len() != nnz || values.len() != nnz {
            return invalid("column/value arrays do not match row offsets");
        }
        for i in 0..nrows {
            let cols = &col_indices[row_offsets[i]..row_offsets[i + 1]];
            if cols.windows(2).any(|w| w[0] >= w[1]) || cols.iter().any(|&c| c >= ncols) {
                return invalid(format!("row {i}: columns must be sorted, unique and < {ncols}"));
            }
        }
        Ok(Self {
            nrows,
            ncols,
            row_offsets,
            col_indices,
            values,
        })
    }

    /// Sums duplicate entries; explicit zeros are kept as structural entries.
    pub fn from_triplets(nrows: usize, ncols: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        let mut counts = vec![0usize; nrows + 1];
        for &(i, j, _) in triplets {
            if i >= nrows || j >= ncols {
                return invalid(format!("entry ({i}, {j}) outside {nrows}x{ncols}"));
            }
            counts[i + 1] += 1;
        }
        for i in 0..nrows {
            counts[i + 1] += counts[i];
        }
        // bucket by row, then sort and merge each row
        let mut next = counts.clone();
        let mut buf = vec![(0usize, 0.0f64); triplets.len()];
        for &(i, j, v) in triplets {
            buf[next[i]] = (j, v);
            next[i] += 1;
        }
        let mut row_offsets = Vec::with_capacity(nrows + 1);
        let mut col_indices = Vec::with_capacity(triplets.len());
        let mut values = Vec::with_capacity(triplets.len());
        row_offsets.push(0);
        for i in 0..nrows {
            let row = &mut buf[counts[i]..counts[i + 1]];
            row.sort_by_key(|e| e.0);
            for &(j, v) in row.iter() {
                if col_indices.len() > row_offsets[i] && *col_indices.last().unwrap() == j {
                    *values.last_mut().unwrap() += v;
                } else {
                    col_indices.push(j);
                    values.push(v);
                }
            }
            row_offsets.push(col_indices.len());
        }
        Ok(Self {
            nrows,
            ncols,
            row_offsets,
            col_indices,
            values,
        })
    }

    /// Keeps exact nonzeros of a row-major dense matrix.
    pub fn from_dense(rows: &[Vec<f64>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut t = Vec::new();
        for (i, r) in rows.iter().enumerate() {
            if r.len() != ncols {
                return Err(Error::DimensionMismatch { expected: ncols, got: r.len() });
            }
            t.extend(r.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(j, &v)| (i, j, v)));
        }
        Self::from_triplets(nrows, ncols, &t)
    }

    pub fn identity(n: usize) -> Self {
        Self {
            nrows: n,
            ncols: n,
            row_offsets: (0..=n).collect(),
            col_indices: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.col_indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let r = self.row_offsets[i]..self.row_offsets[i + 1];
        (&self.col_indices[r.clone()], &self.values[r])
    }

    pub fn row_mut(&mut self, i: usize) -> (&[usize], &mut [f64]) {
        let r = self.row_offsets[i]..self.row_offsets[i + 1];
        (&self.col_indices[r.clone()], &mut self.values[r])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        cols.binary_search(&j).map_or(0.0, |k| vals[k])
    }

    pub fn spmv(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut y = vec![0.0; self.nrows];
        self.spmv_into(x, &mut y)?;
        Ok(y)
    }

    pub fn spmv_into(&self, x: &[f64], y: &mut [f64]) -> Result<()> {
        if x.len() != self.ncols {
            return Err(Error::DimensionMismatch { expected: self.ncols, got: x.len() });
        }
        if y.len() != self.nrows {
            return Err(Error::DimensionMismatch { expected: self.nrows, got: y.len() });
        }
        self.mul_unchecked(x, y);
        Ok(())
    }

    /// `y = A x` without dimension checks; callers guarantee sizes.
    pub(crate) fn mul_unchecked(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let r = self.row_offsets[i]..self.row_offsets[i + 1];
            *yi = self.col_indices[r.clone()]
                .iter()
                .zip(&self.values[r])
                .map(|(&j, &v)| v * x[j])
                .sum();
        }
    }

    /// `b - A x`.
    pub fn residual(&self, b: &[f64], x: &[f64]) -> Result<Vec<f64>> {
        let mut r = self.spmv(x)?;
        if b.len() != self.nrows {
            return Err(Error::DimensionMismatch { expected: self.nrows, got: b.len() });
        }
        for (ri, bi) in r.iter_mut().zip(b) {
            *ri = bi - *ri;
        }
        Ok(r)
    }

    /// `y += A^T x`.
    pub fn transpose_mul_add(&self, x: &[f64], y: &mut [f64]) -> Result<()> {
        if x.len() != self.nrows || y.len() != self.ncols {
            return Err(Error::DimensionMismatch { expected: self.nrows, got: x.len() });
        }
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                y[j] += v * xi;
            }
        }
        Ok(())
    }

    pub fn transpose(&self) -> Self {
        let mut counts = vec![0usize; self.ncols + 1];
        for &j in &self.col_indices {
            counts[j + 1] += 1;
        }
        for j in 0..self.ncols {
            counts[j + 1] += counts[j];
        }
        let mut next = counts.clone();
        let mut cols = vec![0; self.nnz()];
        let mut vals = vec![0.0; self.nnz()];
        for i in 0..self.nrows {
            let (c, v) = self.row(i);
            for (&j, &x) in c.iter().zip(v) {
                cols[next[j]] = i;
                vals[next[j]] = x;
                next[j] += 1;
            }
        }
        Self {
            nrows: self.ncols,
            ncols: self.nrows,
            row_offsets: counts,
            col_indices: cols,
            values: vals,
        }
    }

    /// Dense row-major copy of `A(rows, cols)`; `cols` need not be sorted.
    pub fn submatrix_dense(&self, rows: &[usize], cols: &[usize]) -> Vec<Vec<f64>> {
        let mut pos = std::collections::HashMap::with_capacity(cols.len());
        for (k, &c) in cols.iter().enumerate() {
            pos.insert(c, k);
        }
        rows.iter()
            .map(|&i| {
                let mut out = vec![0.0; cols.len()];
                let (c, v) = self.row(i);
                for (j, x) in c.iter().zip(v) {
                    if let Some(&k) = pos.get(j) {
                        out[k] = *x;
                    }
                }
                out
            })
            .collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.ncols]; self.nrows];
        for (i, row) in d.iter_mut().enumerate() {
            let (c, v) = self.row(i);
            for (&j, &x) in c.iter().zip(v) {
                row[j] = x;
            }
        }
        d
    }

    /// Sets row `i` to the identity row (diagonal must be structurally present or is inserted).
    pub fn set_identity_row(&mut self, i: usize) {
        let (cols, vals) = self.row_mut(i);
        let mut has_diag = false;
        for (c, v) in cols.iter().zip(vals.iter_mut()) {
            *v = if *c == i {
                has_diag = true;
                1.0
            } else {
                0.0
            };
        }
        if !has_diag {
            self.insert_entry(i, i, 1.0);
        }
    }

    fn insert_entry(&mut self, i: usize, j: usize, v: f64) {
        let (cols, _) = self.row(i);
        let k = self.row_offsets[i] + cols.partition_point(|&c| c < j);
        self.col_indices.insert(k, j);
        self.values.insert(k, v);
        for off in &mut self.row_offsets[i + 1..] {
            *off += 1;
        }
    }

    /// Drops stored zeros.
    pub fn pruned(&self) -> Self {
        let mut t = Vec::with_capacity(self.nnz());
        for i in 0..self.nrows {
            let (c, v) = self.row(i);
            t.extend(c.iter().zip(v).filter(|(_, x)| **x != 0.0).map(|(&j, &x)| (i, j, x)));
        }
        Self::from_triplets(self.nrows, self.ncols, &t).expect("indices already validated")
    }

    pub fn scale_columns(&mut self, keep: impl Fn(usize) -> bool) {
        for (c, v) in self.col_indices.iter().zip(self.values.iter_mut()) {
            if !keep(*c) {
                *v = 0.0;
            }
        }
    }

    /// Triplet view in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.nrows).flat_map(move |i| {
            let (c, v) = self.row(i);
            c.iter().zip(v).map(move |(&j, &x)| (i, j, x))
        })
    }
}
