//! Relaxation blocks from a key function and a divisions array.

use std::fmt::Write as _;

use crate::error::{invalid, Error, Result};

/// Ordered collection of DoF index sets; each block is sorted.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockSet {
    pub blocks: Vec<Vec<usize>>,
    pub source: String,
}

/// How the sorted key values are cut into bins.
#[derive(Debug, Clone, PartialEq)]
pub enum Divisions {
    /// Strictly increasing cut values; `len + 1` bins.
    Explicit(Vec<f64>),
    /// `count` equal bins over the observed key range.
    Uniform(usize),
}

impl BlockSet {
    pub fn new(blocks: Vec<Vec<usize>>, source: impl Into<String>) -> Self {
        let blocks = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        Self { blocks, source: source.into() }
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Checks indices against `n` and rejects empty blocks.
    pub fn validate(&self, n: usize) -> Result<()> {
        for (k, b) in self.blocks.iter().enumerate() {
            if b.is_empty() {
                return Err(Error::EmptyBin { bin: k });
            }
            if let Some(&i) = b.iter().find(|&&i| i >= n) {
                return invalid(format!("block {k} holds index {i} >= {n}"));
            }
        }
        Ok(())
    }

    /// Blocks of `self` followed by those of `other`.
    pub fn concat(mut self, other: BlockSet) -> BlockSet {
        self.blocks.extend(other.blocks);
        self.source = format!("{} + {}", self.source, other.source);
        self
    }

    /// Merges even- and odd-numbered blocks into two colours.
    pub fn zebra(&self) -> BlockSet {
        let mut red = Vec::new();
        let mut black = Vec::new();
        for (k, b) in self.blocks.iter().enumerate() {
            if k % 2 == 0 { &mut red } else { &mut black }.extend_from_slice(b);
        }
        BlockSet::new(vec![red, black], format!("zebra({})", self.source))
    }

    /// One line of space-separated indices per block.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for b in &self.blocks {
            let line: Vec<String> = b.iter().map(usize::to_string).collect();
            let _ = writeln!(s, "{}", line.join(" "));
        }
        s
    }
}

/// Groups the DoFs with `candidates[i] == true` (all when `None`) by the
/// bin their key falls in. Blocks are ordered by bin, indices ascending.
pub fn build_line_blocks(
    coords: &[[f64; 2]],
    candidates: Option<&[bool]>,
    key: impl Fn(f64, f64) -> f64,
    divisions: &Divisions,
    source: impl Into<String>,
) -> Result<BlockSet> {
    let idx: Vec<usize> = (0..coords.len())
        .filter(|&i| candidates.map_or(true, |c| c[i]))
        .collect();
    let keys: Vec<f64> = idx.iter().map(|&i| key(coords[i][0], coords[i][1])).collect();
    if let Some(k) = keys.iter().position(|k| !k.is_finite()) {
        return invalid(format!("key is not finite at DoF {}", idx[k]));
    }
    let cuts: Vec<f64> = match divisions {
        Divisions::Explicit(d) => {
            if d.windows(2).any(|w| !(w[0] < w[1])) {
                return invalid("divisions must be strictly increasing");
            }
            d.clone()
        }
        Divisions::Uniform(count) => {
            if *count == 0 {
                return invalid("uniform divisions need at least one bin");
            }
            let lo = keys.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = keys.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            (1..*count).map(|k| lo + (hi - lo) * k as f64 / *count as f64).collect()
        }
    };
    let mut blocks = vec![Vec::new(); cuts.len() + 1];
    for (&i, &k) in idx.iter().zip(&keys) {
        blocks[cuts.partition_point(|&c| c < k)].push(i);
    }
    if let Some(bin) = blocks.iter().position(Vec::is_empty) {
        return Err(Error::EmptyBin { bin });
    }
    Ok(BlockSet::new(blocks, source))
}

/// Midpoints between consecutive interior breakpoints: one bin per interior
/// mesh line, boundary lines excluded.
pub fn divisions_from_breakpoints(breakpoints: &[f64]) -> Vec<f64> {
    let n = breakpoints.len();
    if n < 3 {
        return Vec::new();
    }
    breakpoints[1..n - 1].windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
}

/// Midpoints between distinct key values, treating values within
/// `rel_tol * max(1, |key|)` of each other as one line.
pub fn divisions_from_keys(keys: &[f64], rel_tol: f64) -> Vec<f64> {
    let mut k: Vec<f64> = keys.to_vec();
    k.sort_by(f64::total_cmp);
    let mut groups: Vec<(f64, f64)> = Vec::new();
    for v in k {
        match groups.last_mut() {
            Some((_, hi)) if v - *hi <= rel_tol * v.abs().max(1.0) => *hi = v,
            _ => groups.push((v, v)),
        }
    }
    groups.windows(2).map(|w| 0.5 * (w[0].1 + w[1].0)).collect()
}

/// Line blocks where lines are identified by clustering the key values
/// of the candidate DoFs themselves.
pub fn blocks_from_key_clusters(
    coords: &[[f64; 2]],
    candidates: &[bool],
    key: impl Fn(f64, f64) -> f64 + Copy,
    rel_tol: f64,
    source: impl Into<String>,
) -> Result<BlockSet> {
    let keys: Vec<f64> = (0..coords.len())
        .filter(|&i| candidates[i])
        .map(|i| key(coords[i][0], coords[i][1]))
        .collect();
    let cuts = divisions_from_keys(&keys, rel_tol);
    build_line_blocks(coords, Some(candidates), key, &Divisions::Explicit(cuts), source)
}
