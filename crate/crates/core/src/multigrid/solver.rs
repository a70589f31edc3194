//! Multigrid cycles with block relaxation, used as an FGMRES preconditioner.

use serde::{Deserialize, Serialize};

use super::prolongation::{build_prolongation, mask_prolongation};
use crate::error::{invalid, Error, Result};
use crate::fem::{discretize, DiscreteSystem, ProblemSpec, DEFAULT_QUADRATURE};
use crate::linalg::operator::norm2;
use crate::linalg::{
    chebyshev_apply, chebyshev_interval, estimate_max_eig, fgmres, gmres_steps, CsrMatrix,
    KrylovResult, LinearOperator, LuFactorization, SparseLu, DEFAULT_ARNOLDI_STEPS,
};
use crate::mesh::{Geometry, MeshHierarchy};
use crate::relax::{hemker_line_blocks, square_line_blocks, BlockRelaxer, BlockSet, LineScheme};

/// How block corrections are weighted inside one relaxation call.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RelaxMode {
    /// One Chebyshev application of degree `nu` on `[1.1M/4, 1.1M]`.
    Chebyshev,
    /// `nu` right-preconditioned GMRES steps.
    Gmres,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MgConfig {
    pub nu1: usize,
    pub nu2: usize,
    pub gamma1: usize,
    pub gamma2: usize,
    pub relax: RelaxMode,
    pub arnoldi_steps: usize,
    pub seed: u64,
    /// Refresh the residual between blocks (block Gauss-Seidel).
    pub multiplicative: bool,
}

impl Default for MgConfig {
    fn default() -> Self {
        Self {
            nu1: 2,
            nu2: 2,
            gamma1: 1,
            gamma2: 1,
            relax: RelaxMode::Chebyshev,
            arnoldi_steps: DEFAULT_ARNOLDI_STEPS,
            seed: 0x5EED,
            multiplicative: false,
        }
    }
}

impl MgConfig {
    pub fn validate(&self) -> Result<()> {
        if self.gamma1 == 0 || self.gamma2 == 0 {
            return invalid("gamma1 and gamma2 must be at least 1");
        }
        if self.relax == RelaxMode::Chebyshev && self.arnoldi_steps == 0 {
            return invalid("Chebyshev relaxation needs at least one Arnoldi step");
        }
        Ok(())
    }
}

#[derive(Debug)]
pub struct MgLevel {
    pub matrix: CsrMatrix,
    pub dirichlet: Vec<bool>,
    /// Absent on the coarsest level of a multilevel solver.
    pub relaxer: Option<BlockRelaxer>,
    pub max_eig: Option<f64>,
}

/// One entry per call of the cycle routine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CycleCall {
    pub level: usize,
    pub gamma1: usize,
    pub gamma2: usize,
}

/// Immutable multigrid hierarchy; level 0 is the finest.
#[derive(Debug)]
pub struct MgSolver {
    levels: Vec<MgLevel>,
    /// `prolongations[l]` maps level `l + 1` to level `l`.
    prolongations: Vec<CsrMatrix>,
    restrictions: Vec<CsrMatrix>,
    coarse: LuFactorization,
    config: MgConfig,
}

/// Blocks of one level according to the scheme and the hierarchy geometry.
pub fn level_blocks(h: &MeshHierarchy, level: usize, free: &[bool], scheme: LineScheme) -> Result<BlockSet> {
    let mesh = &h.levels[level];
    match (&h.geometry, scheme) {
        (_, LineScheme::RadialVertical) => hemker_line_blocks(mesh, free),
        (Geometry::UnitSquare { partitions, .. }, s) => {
            let (px, py) = &partitions[level];
            square_line_blocks(mesh, px, py, free, s)
        }
        (Geometry::Hemker { .. }, s) => invalid(format!("line scheme {s:?} needs a tensor-product mesh")),
    }
}

pub fn discretize_hierarchy(h: &MeshHierarchy, spec: &ProblemSpec) -> Result<Vec<DiscreteSystem>> {
    h.levels.iter().map(|m| discretize(m, spec, DEFAULT_QUADRATURE)).collect()
}

/// Rediscretizes on every level, builds blocks and transfer operators and
/// factors the coarsest operator.
pub fn mg_setup(h: &MeshHierarchy, spec: &ProblemSpec, scheme: LineScheme, config: MgConfig) -> Result<MgSolver> {
    let systems = discretize_hierarchy(h, spec)?;
    MgSolver::from_hierarchy(h, &systems, scheme, config)
}

impl MgSolver {
    pub fn from_hierarchy(
        h: &MeshHierarchy,
        systems: &[DiscreteSystem],
        scheme: LineScheme,
        config: MgConfig,
    ) -> Result<Self> {
        if systems.len() != h.num_levels() {
            return Err(Error::DimensionMismatch { expected: h.num_levels(), got: systems.len() });
        }
        let nl = h.num_levels();
        let mut block_sets = Vec::with_capacity(nl.saturating_sub(1));
        for l in 0..nl.saturating_sub(1) {
            let free: Vec<bool> = systems[l].dirichlet.iter().map(|d| !d).collect();
            block_sets.push(level_blocks(h, l, &free, scheme)?);
        }
        let mut prolongations = Vec::with_capacity(nl - 1);
        for l in 0..nl - 1 {
            prolongations.push(build_prolongation(&h.levels[l + 1], &h.levels[l], &h.parents[l])?);
        }
        Self::from_parts(
            systems.iter().map(|s| (s.matrix.clone(), s.dirichlet.clone())).collect(),
            prolongations,
            block_sets,
            config,
        )
    }

    /// Generic constructor: per-level `(A_l, Dirichlet mask)`, unmasked
    /// prolongations `P_l` (level `l + 1` to `l`) and block sets for every
    /// level but the coarsest.
    pub fn from_parts(
        operators: Vec<(CsrMatrix, Vec<bool>)>,
        prolongations: Vec<CsrMatrix>,
        block_sets: Vec<BlockSet>,
        config: MgConfig,
    ) -> Result<Self> {
        config.validate()?;
        let nl = operators.len();
        if nl == 0 {
            return invalid("multigrid needs at least one level");
        }
        if prolongations.len() != nl - 1 || block_sets.len() != nl - 1 {
            return invalid(format!(
                "{nl} levels need {} prolongations and block sets, got {} and {}",
                nl - 1,
                prolongations.len(),
                block_sets.len()
            ));
        }
        let mut masked = Vec::with_capacity(nl - 1);
        for (l, p) in prolongations.iter().enumerate() {
            let (nf, nc) = (operators[l].0.nrows(), operators[l + 1].0.nrows());
            if p.nrows() != nf || p.ncols() != nc {
                return Err(Error::DimensionMismatch { expected: nf * nc, got: p.nrows() * p.ncols() });
            }
            masked.push(mask_prolongation(p, &operators[l].1, &operators[l + 1].1));
        }
        let restrictions = masked.iter().map(CsrMatrix::transpose).collect();
        let coarse = LuFactorization::Sparse(SparseLu::factor(&operators[nl - 1].0)?);

        let mut levels = Vec::with_capacity(nl);
        let mut block_sets = block_sets.into_iter();
        for (l, (matrix, dirichlet)) in operators.into_iter().enumerate() {
            let (relaxer, max_eig) = if l + 1 < nl {
                let bs = block_sets.next().unwrap();
                let rel = if config.multiplicative {
                    BlockRelaxer::setup_multiplicative(&matrix, &bs)?
                } else {
                    BlockRelaxer::setup(&matrix, &bs)?
                };
                let m = match config.relax {
                    RelaxMode::Chebyshev => {
                        let m = estimate_max_eig(
                            &matrix,
                            &rel,
                            config.arnoldi_steps,
                            config.seed.wrapping_add(l as u64),
                            Some(&dirichlet),
                        )?;
                        if !(m > 0.0 && m.is_finite()) {
                            return Err(Error::Factorization(format!(
                                "level {l}: eigenvalue estimate {m} unusable for Chebyshev"
                            )));
                        }
                        log::debug!("level {l}: M = {m:.4}, {} blocks", rel.num_blocks());
                        Some(m)
                    }
                    RelaxMode::Gmres => None,
                };
                (Some(rel), m)
            } else {
                (None, None)
            };
            levels.push(MgLevel { matrix, dirichlet, relaxer, max_eig });
        }
        Ok(Self {
            levels,
            prolongations: masked,
            restrictions,
            coarse,
            config,
        })
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, l: usize) -> &MgLevel {
        &self.levels[l]
    }

    pub fn config(&self) -> &MgConfig {
        &self.config
    }

    /// Masked prolongation from level `l + 1` to level `l`.
    pub fn prolongation(&self, l: usize) -> &CsrMatrix {
        &self.prolongations[l]
    }

    pub fn coarse_solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.coarse.solve_in_place(&mut x);
        x
    }

    pub fn operator_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.matrix.nrows()).collect()
    }

    /// `nu` relaxation steps on level `l` (no-op on the coarsest level).
    pub fn relax(&self, l: usize, u: &mut [f64], b: &[f64], nu: usize) {
        if nu == 0 {
            return;
        }
        let lv = &self.levels[l];
        let Some(rel) = &lv.relaxer else { return };
        match self.config.relax {
            RelaxMode::Chebyshev => {
                let interval = chebyshev_interval(lv.max_eig.expect("estimated at setup"));
                chebyshev_apply(&lv.matrix, rel, interval, nu, b, u)
                    .expect("interval validated at setup");
            }
            RelaxMode::Gmres => gmres_steps(&lv.matrix, rel, b, u, nu),
        }
    }

    /// One cycle on level `l` updating `u` for `A_l u = b`.
    pub fn cycle(&self, l: usize, u: &mut [f64], b: &[f64]) {
        self.cycle_inner(l, u, b, self.config.gamma1, self.config.gamma2, &mut None);
    }

    /// As [`cycle`](Self::cycle), recording every recursive call.
    pub fn cycle_traced(&self, l: usize, u: &mut [f64], b: &[f64]) -> Vec<CycleCall> {
        let mut trace = Some(Vec::new());
        self.cycle_inner(l, u, b, self.config.gamma1, self.config.gamma2, &mut trace);
        trace.unwrap()
    }

    fn cycle_inner(
        &self,
        l: usize,
        u: &mut [f64],
        b: &[f64],
        g1: usize,
        g2: usize,
        trace: &mut Option<Vec<CycleCall>>,
    ) {
        if let Some(t) = trace.as_mut() {
            t.push(CycleCall { level: l, gamma1: g1, gamma2: g2 });
        }
        let last = self.levels.len() - 1;
        if l == last {
            u.copy_from_slice(&self.coarse_solve(b));
            return;
        }
        let a = &self.levels[l].matrix;
        self.relax(l, u, b, self.config.nu1);
        let r = a.residual(b, u).expect("sizes fixed at setup");
        let rc = self.restrictions[l].spmv(&r).expect("sizes fixed at setup");
        let ec = if l + 1 == last {
            self.coarse_solve(&rc)
        } else {
            let mut e = vec![0.0; rc.len()];
            for i in 1..=g2 {
                let (a1, a2) = if i == 1 { (g1, g2) } else { (g2, g1) };
                self.cycle_inner(l + 1, &mut e, &rc, a1, a2, trace);
            }
            e
        };
        let ef = self.prolongations[l].spmv(&ec).expect("sizes fixed at setup");
        for (ui, ei) in u.iter_mut().zip(&ef) {
            *ui += ei;
        }
        self.relax(l, u, b, self.config.nu2);
        if log::log_enabled!(log::Level::Debug) {
            let post = norm2(&a.residual(b, u).expect("sizes fixed at setup"));
            log::debug!("level {l}: residual {:.3e} -> {:.3e}", norm2(&r), post);
        }
    }

    /// Preconditioner application: one cycle from the guess that carries
    /// `r` on constrained nodes and zero elsewhere.
    pub fn precondition(&self, r: &[f64], z: &mut [f64]) {
        let d = &self.levels[0].dirichlet;
        for ((zi, ri), &di) in z.iter_mut().zip(r).zip(d) {
            *zi = if di { *ri } else { 0.0 };
        }
        self.cycle(0, z, r);
    }

    /// FGMRES on the finest operator preconditioned by one cycle.
    pub fn solve(&self, b: &[f64], tol_abs: f64, max_it: usize) -> Result<KrylovResult> {
        fgmres(&self.levels[0].matrix, self, b, None, tol_abs, max_it, None)
    }
}

impl LinearOperator for MgSolver {
    fn dim(&self) -> usize {
        self.levels[0].matrix.nrows()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.precondition(x, y);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::TauRule;
    use crate::mesh::{square_hierarchy, SquareLayout};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn laplace(n: usize, levels: usize, config: MgConfig) -> (MeshHierarchy, Vec<DiscreteSystem>, MgSolver) {
        // eps = 1 clamps every transition point, giving a uniform mesh
        let h = square_hierarchy(n, 1.0, SquareLayout::ExpAndParab, levels).unwrap();
        let spec = ProblemSpec::constant(1.0, [0.0, 0.0], 0.0, 1.0, TauRule::Zero);
        let sys = discretize_hierarchy(&h, &spec).unwrap();
        let mg = MgSolver::from_hierarchy(&h, &sys, LineScheme::BothDirections, config).unwrap();
        (h, sys, mg)
    }

    fn random(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
    }

    #[test]
    fn sizes_and_zero_fixed_point() {
        let (_, _, mg) = laplace(64, 4, MgConfig::default());
        assert_eq!(mg.operator_sizes(), vec![65 * 65, 33 * 33, 17 * 17, 81]);
        let mut u = vec![0.0; 65 * 65];
        mg.cycle(0, &mut u, &vec![0.0; 65 * 65]);
        assert!(u.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn single_level_is_direct() {
        let (_, sys, mg) = laplace(16, 1, MgConfig::default());
        let res = mg.solve(&sys[0].rhs, 1e-10, 10).unwrap();
        assert_eq!(res.iterations, 1);
        assert!(res.converged);
    }

    #[test]
    fn two_grid_matches_scripted_composition() {
        let (_, sys, mg) = laplace(16, 2, MgConfig::default());
        let b = random(17 * 17, 5);
        let mut u = vec![0.0; b.len()];
        mg.cycle(0, &mut u, &b);

        let a = &sys[0].matrix;
        let mut v = vec![0.0; b.len()];
        mg.relax(0, &mut v, &b, 2);
        let r = a.residual(&b, &v).unwrap();
        let p = mg.prolongation(0);
        let mut rc = vec![0.0; p.ncols()];
        p.transpose_mul_add(&r, &mut rc).unwrap();
        let ec = mg.coarse_solve(&rc);
        let e = p.spmv(&ec).unwrap();
        for (vi, ei) in v.iter_mut().zip(&e) {
            *vi += ei;
        }
        mg.relax(0, &mut v, &b, 2);
        for (x, y) in u.iter().zip(&v) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn w_cycle_call_counts() {
        let cfg = MgConfig { gamma1: 2, gamma2: 2, ..MgConfig::default() };
        let (_, _, mg) = laplace(32, 3, cfg);
        let b = random(33 * 33, 1);
        let mut u = vec![0.0; b.len()];
        let trace = mg.cycle_traced(0, &mut u, &b);
        assert_eq!(trace.iter().filter(|c| c.level == 1).count(), 2);
        assert_eq!(trace.iter().filter(|c| c.level == 2).count(), 0);
    }

    #[test]
    fn f_cycle_follows_the_printed_swap() {
        let cfg = MgConfig { gamma1: 1, gamma2: 2, ..MgConfig::default() };
        let (_, _, mg) = laplace(64, 4, cfg);
        let b = random(65 * 65, 1);
        let mut u = vec![0.0; b.len()];
        let trace = mg.cycle_traced(0, &mut u, &b);
        let at1: Vec<_> = trace.iter().filter(|c| c.level == 1).map(|c| (c.gamma1, c.gamma2)).collect();
        assert_eq!(at1, vec![(1, 2), (2, 1)]);
        // level 2 calls: (1,2) recurses twice, (2,1) once
        assert_eq!(trace.iter().filter(|c| c.level == 2).count(), 3);
    }

    #[test]
    fn linear_and_fixed_point() {
        let (_, sys, mg) = laplace(32, 3, MgConfig::default());
        let n = 33 * 33;
        let (b1, b2) = (random(n, 2), random(n, 3));
        let (al, be) = (0.7, -1.3);
        let run = |b: &[f64]| {
            let mut u = vec![0.0; n];
            mg.cycle(0, &mut u, b);
            u
        };
        let mixed: Vec<f64> = b1.iter().zip(&b2).map(|(x, y)| al * x + be * y).collect();
        let (u1, u2, um) = (run(&b1), run(&b2), run(&mixed));
        for i in 0..n {
            assert!((um[i] - (al * u1[i] + be * u2[i])).abs() < 1e-10);
        }
        let a = &sys[0].matrix;
        let exact = mg.solve(&sys[0].rhs, 1e-13, 50).unwrap().x;
        let b = a.spmv(&exact).unwrap();
        let mut u = exact.clone();
        mg.cycle(0, &mut u, &b);
        for i in 0..n {
            assert!((u[i] - exact[i]).abs() < 1e-10);
        }
    }

    #[test]
    fn two_grid_energy_reduction() {
        let (_, sys, mg) = laplace(16, 2, MgConfig::default());
        let a = &sys[0].matrix;
        let n = a.nrows();
        let free: Vec<bool> = sys[0].dirichlet.iter().map(|d| !d).collect();
        let mut e: Vec<f64> = random(n, 8);
        for (ei, f) in e.iter_mut().zip(&free) {
            if !f {
                *ei = 0.0;
            }
        }
        let energy = |v: &[f64]| {
            let av = a.spmv(v).unwrap();
            v.iter().zip(&av).zip(&free).filter(|(_, f)| **f).map(|((x, y), _)| x * y).sum::<f64>().sqrt()
        };
        // error propagation: cycle with b = 0 acting on u = e
        let mut u = e.clone();
        mg.cycle(0, &mut u, &vec![0.0; n]);
        assert!(energy(&e) >= 5.0 * energy(&u), "{} vs {}", energy(&e), energy(&u));
    }

    #[test]
    fn precondition_keeps_constrained_values() {
        let (_, sys, mg) = laplace(16, 2, MgConfig::default());
        let r = random(17 * 17, 4);
        let mut z = vec![0.0; r.len()];
        mg.precondition(&r, &mut z);
        for (i, &d) in sys[0].dirichlet.iter().enumerate() {
            if d {
                assert_eq!(z[i], r[i]);
            }
        }
    }

    #[test]
    fn gmres_relaxation_runs() {
        let cfg = MgConfig { nu1: 3, nu2: 3, relax: RelaxMode::Gmres, ..MgConfig::default() };
        let (_, sys, mg) = laplace(32, 3, cfg);
        let res = mg.solve(&sys[0].rhs, 1e-10, 30).unwrap();
        assert!(res.converged && res.iterations <= 10, "{}", res.iterations);
    }
}
