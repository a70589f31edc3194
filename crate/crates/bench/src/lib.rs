//! Fixtures shared by the criterion benchmarks.

use shishkin_mg::benchmarks::Case;
use shishkin_mg::fem::assembly::DiscreteSystem;
use shishkin_mg::multigrid::discretize_hierarchy;
use shishkin_mg::{MeshHierarchy, MgSolver, Result, RunConfig};

/// A discretized problem with its multigrid solver, set up with the case
/// defaults.
pub struct Fixture {
    pub config: RunConfig,
    pub hierarchy: MeshHierarchy,
    pub systems: Vec<DiscreteSystem>,
    pub solver: MgSolver,
}

impl Fixture {
    pub fn new(case: Case, n: usize, eps: f64) -> Result<Self> {
        let config = RunConfig::for_case(case);
        let hierarchy = case.hierarchy(n, eps, config.levels.resolve(case, n))?;
        let systems = discretize_hierarchy(&hierarchy, &case.problem(eps))?;
        let solver = MgSolver::from_hierarchy(&hierarchy, &systems, case.line_scheme(), config.mg.clone())?;
        Ok(Self { config, hierarchy, systems, solver })
    }

    pub fn rhs(&self) -> &[f64] {
        &self.systems[0].rhs
    }

    pub fn tolerance(&self, n: usize, eps: f64) -> f64 {
        self.config.tol_form.tolerance(n, eps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_solves() {
        let f = Fixture::new(Case::SquareExp, 32, 1e-6).unwrap();
        let res = f.solver.solve(f.rhs(), f.tolerance(32, 1e-6), 50).unwrap();
        assert!(res.converged);
    }
}
