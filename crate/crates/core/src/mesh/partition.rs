//! Piecewise-uniform one-dimensional partitions.
//!
//! A partition is a strictly increasing list of breakpoints split into
//! pieces at transition points; each piece is subdivided uniformly. The
//! Shishkin constructors place the transition points so that the layer
//! pieces resolve an exponential (width `O(eps)`) or parabolic
//! (width `O(sqrt(eps))`) boundary layer.

use crate::error::{invalid, Result};

/// Default mesh parameter for bilinear elements on the unit square.
pub const DEFAULT_SIGMA: f64 = 2.5;

#[derive(Debug, Clone, PartialEq)]
pub struct Partition1D {
    breakpoints: Vec<f64>,
    transition_indices: Vec<usize>,
    layer_pieces: Vec<bool>,
}

impl Partition1D {
    /// Builds a partition of `[a, b]` from interior transition coordinates,
    /// the number of cells per piece, and which pieces are layer pieces.
    ///
    /// Breakpoint `k` of a piece `[p, q]` with `m` cells is `p + ((q - p) k) / m`,
    /// so bisecting every piece reproduces the coarse breakpoints bitwise.
    pub fn piecewise_uniform(
        a: f64,
        b: f64,
        transitions: &[f64],
        counts: &[usize],
        layer_pieces: &[bool],
    ) -> Result<Self> {
        if counts.len() != transitions.len() + 1 || layer_pieces.len() != counts.len() {
            return invalid("piece counts must match transitions + 1");
        }
        if counts.iter().any(|&m| m == 0) {
            return invalid("every piece needs at least one cell");
        }
        let mut ends = Vec::with_capacity(counts.len() + 1);
        ends.push(a);
        ends.extend_from_slice(transitions);
        ends.push(b);
        if ends.windows(2).any(|w| !(w[0] < w[1])) {
            return invalid(format!("transition points not strictly increasing: {ends:?}"));
        }

        let total: usize = counts.iter().sum();
        let mut breakpoints = Vec::with_capacity(total + 1);
        let mut transition_indices = Vec::with_capacity(transitions.len());
        breakpoints.push(a);
        for (piece, &m) in counts.iter().enumerate() {
            let (p, q) = (ends[piece], ends[piece + 1]);
            let width = q - p;
            for k in 1..m {
                breakpoints.push(p + (width * k as f64) / m as f64);
            }
            breakpoints.push(q);
            if piece + 1 < counts.len() {
                transition_indices.push(breakpoints.len() - 1);
            }
        }
        Ok(Self {
            breakpoints,
            transition_indices,
            layer_pieces: layer_pieces.to_vec(),
        })
    }

    pub fn uniform(n: usize, a: f64, b: f64) -> Result<Self> {
        if n == 0 {
            return invalid("uniform partition needs at least one cell");
        }
        Self::piecewise_uniform(a, b, &[], &[n], &[false])
    }

    /// Exponential-layer partition of `[0, 1]` with the layer at `x = 0`.
    pub fn exponential(n: usize, eps: f64, sigma: f64) -> Result<Self> {
        check_eps_sigma(eps, sigma)?;
        check_exp_n(n)?;
        Self::exponential_with_transition(n, exp_transition(n, eps, sigma))
    }

    /// Same layout as [`Partition1D::exponential`] but with a prescribed
    /// transition point (used on coarse levels of a hierarchy).
    pub fn exponential_with_transition(n: usize, lambda: f64) -> Result<Self> {
        check_exp_n(n)?;
        if !(lambda > 0.0 && lambda <= 0.5) {
            return invalid(format!("transition point {lambda} outside (0, 1/2]"));
        }
        Self::piecewise_uniform(0.0, 1.0, &[lambda], &[n / 2, n / 2], &[true, false])
    }

    /// Parabolic-layer partition of `[0, 1]` with layers at both ends.
    pub fn parabolic(n: usize, eps: f64, sigma: f64) -> Result<Self> {
        check_eps_sigma(eps, sigma)?;
        check_parab_n(n)?;
        Self::parabolic_with_transition(n, parab_transition(n, eps, sigma))
    }

    pub fn parabolic_with_transition(n: usize, lambda: f64) -> Result<Self> {
        check_parab_n(n)?;
        if !(lambda > 0.0 && lambda <= 0.25) {
            return invalid(format!("transition point {lambda} outside (0, 1/4]"));
        }
        Self::piecewise_uniform(
            0.0,
            1.0,
            &[lambda, 1.0 - lambda],
            &[n / 4, n / 2, n / 4],
            &[true, false, true],
        )
    }

    /// Bisects every interval; transition points are preserved exactly.
    pub fn refined(&self) -> Self {
        let ends = self.piece_ends();
        let counts: Vec<usize> = self.piece_counts().iter().map(|m| 2 * m).collect();
        Self::piecewise_uniform(
            ends[0],
            *ends.last().unwrap(),
            &ends[1..ends.len() - 1],
            &counts,
            &self.layer_pieces,
        )
        .expect("refining a valid partition")
    }

    /// Same transition points with every piece count divided by two.
    pub fn coarsened(&self) -> Result<Self> {
        let counts = self.piece_counts();
        if counts.iter().any(|m| m % 2 != 0) {
            return invalid("cannot coarsen a piece with an odd cell count");
        }
        let ends = self.piece_ends();
        let halved: Vec<usize> = counts.iter().map(|m| m / 2).collect();
        Self::piecewise_uniform(
            ends[0],
            *ends.last().unwrap(),
            &ends[1..ends.len() - 1],
            &halved,
            &self.layer_pieces,
        )
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn transition_indices(&self) -> &[usize] {
        &self.transition_indices
    }

    pub fn transition_points(&self) -> Vec<f64> {
        self.transition_indices
            .iter()
            .map(|&i| self.breakpoints[i])
            .collect()
    }

    pub fn num_cells(&self) -> usize {
        self.breakpoints.len() - 1
    }

    pub fn len(&self) -> f64 {
        self.breakpoints[self.breakpoints.len() - 1] - self.breakpoints[0]
    }

    /// Index of the piece that contains cell `i`.
    pub fn piece_of_cell(&self, i: usize) -> usize {
        self.transition_indices.iter().filter(|&&t| t <= i).count()
    }

    pub fn is_layer_piece(&self, piece: usize) -> bool {
        self.layer_pieces[piece]
    }

    pub fn num_pieces(&self) -> usize {
        self.layer_pieces.len()
    }

    pub fn piece_counts(&self) -> Vec<usize> {
        let mut bounds = vec![0];
        bounds.extend_from_slice(&self.transition_indices);
        bounds.push(self.num_cells());
        bounds.windows(2).map(|w| w[1] - w[0]).collect()
    }

    fn piece_ends(&self) -> Vec<f64> {
        let mut ends = vec![self.breakpoints[0]];
        ends.extend(self.transition_points());
        ends.push(*self.breakpoints.last().unwrap());
        ends
    }

    /// One breakpoint per line.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for x in &self.breakpoints {
            s.push_str(&format!("{x:.17e}\n"));
        }
        s
    }
}

/// `min{1/2, sigma eps ln N}`.
pub fn exp_transition(n: usize, eps: f64, sigma: f64) -> f64 {
    (sigma * eps * (n as f64).ln()).min(0.5)
}

/// `min{1/4, sigma sqrt(eps) ln N}`.
pub fn parab_transition(n: usize, eps: f64, sigma: f64) -> f64 {
    (sigma * eps.sqrt() * (n as f64).ln()).min(0.25)
}

pub(crate) fn check_eps_sigma(eps: f64, sigma: f64) -> Result<()> {
    if !(eps > 0.0 && eps <= 1.0) {
        return invalid(format!("eps = {eps} outside (0, 1]"));
    }
    if !(sigma > 0.0) {
        return invalid(format!("sigma = {sigma} must be positive"));
    }
    Ok(())
}

fn check_exp_n(n: usize) -> Result<()> {
    if n < 4 || n % 2 != 0 {
        return invalid(format!("exponential partition needs even N >= 4, got {n}"));
    }
    Ok(())
}

fn check_parab_n(n: usize) -> Result<()> {
    if n < 8 || n % 4 != 0 {
        return invalid(format!("parabolic partition needs N >= 8 divisible by 4, got {n}"));
    }
    Ok(())
}
