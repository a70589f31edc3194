//! Matrix Market coordinate I/O and residual-history CSV.

use std::fmt::Write as _;
use std::path::Path;

use super::csr::CsrMatrix;
use crate::error::{Error, Result};

pub fn to_matrix_market(a: &CsrMatrix) -> String {
    let mut s = String::from("%%MatrixMarket matrix coordinate real general\n");
    let _ = writeln!(s, "{} {} {}", a.nrows(), a.ncols(), a.nnz());
    for (i, j, v) in a.triplets() {
        let _ = writeln!(s, "{} {} {:.17e}", i + 1, j + 1, v);
    }
    s
}

pub fn parse_matrix_market(text: &str) -> Result<CsrMatrix> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty file".into()))?;
    let h = header.to_ascii_lowercase();
    if !h.starts_with("%%matrixmarket matrix coordinate") {
        return Err(Error::Parse(format!("unsupported header {header:?}")));
    }
    let symmetric = h.contains("symmetric");
    if h.contains("complex") || h.contains("pattern") {
        return Err(Error::Parse("only real matrices are supported".into()));
    }
    let mut body = lines.filter(|l| !l.trim().is_empty() && !l.starts_with('%'));
    let size = body.next().ok_or_else(|| Error::Parse("missing size line".into()))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad size line {size:?}"))))
        .collect::<Result<_>>()?;
    let [nrows, ncols, nnz] = dims[..] else {
        return Err(Error::Parse(format!("bad size line {size:?}")));
    };
    let mut t = Vec::with_capacity(nnz);
    for line in body {
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 3 {
            return Err(Error::Parse(format!("bad entry {line:?}")));
        }
        let idx = |s: &str| -> Result<usize> {
            let k: usize = s.parse().map_err(|_| Error::Parse(format!("bad index {s:?}")))?;
            k.checked_sub(1).ok_or_else(|| Error::Parse("indices are 1-based".into()))
        };
        let (i, j) = (idx(f[0])?, idx(f[1])?);
        let v: f64 = f[2].parse().map_err(|_| Error::Parse(format!("bad value {:?}", f[2])))?;
        t.push((i, j, v));
        if symmetric && i != j {
            t.push((j, i, v));
        }
    }
    if t.len() != nnz && !symmetric {
        return Err(Error::Parse(format!("expected {nnz} entries, found {}", t.len())));
    }
    CsrMatrix::from_triplets(nrows, ncols, &t)
}

pub fn write_matrix_market(path: &Path, a: &CsrMatrix) -> Result<()> {
    std::fs::write(path, to_matrix_market(a))?;
    Ok(())
}

pub fn read_matrix_market(path: &Path) -> Result<CsrMatrix> {
    parse_matrix_market(&std::fs::read_to_string(path)?)
}

/// `iteration,residual` rows.
pub fn residual_history_csv(history: &[f64]) -> String {
    let mut s = String::from("iteration,residual\n");
    for (k, r) in history.iter().enumerate() {
        let _ = writeln!(s, "{k},{r:.5e}");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let a = CsrMatrix::from_dense(&[vec![1.5, 0.0, -2.0], vec![0.0, 3.25, 0.0]]).unwrap();
        let text = to_matrix_market(&a);
        assert_eq!(parse_matrix_market(&text).unwrap(), a);
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.mtx");
        write_matrix_market(&p, &a).unwrap();
        assert_eq!(read_matrix_market(&p).unwrap(), a);
    }

    #[test]
    fn symmetric_and_errors() {
        let text = "%%MatrixMarket matrix coordinate real symmetric\n% c\n2 2 2\n1 1 2.0\n2 1 -1.0\n";
        let a = parse_matrix_market(text).unwrap();
        assert_eq!(a.to_dense(), vec![vec![2.0, -1.0], vec![-1.0, 0.0]]);
        assert!(parse_matrix_market("garbage").is_err());
        assert!(parse_matrix_market("%%MatrixMarket matrix coordinate real general\n1 1 1\n0 1 1.0\n").is_err());
    }

    #[test]
    fn history_csv() {
        assert_eq!(residual_history_csv(&[1.0, 0.5]), "iteration,residual\n0,1.00000e0\n1,5.00000e-1\n");
    }
}
