//! Radial one-electron Hamiltonian in a B-spline basis.
//!
//! With `u(r) = r R(r)` expanded as `sum_a c_a B_a(r)`, the matrices are
//!
//! ```text
//! S_ab = int B_a B_b dr
//! H_ab = 1/2 int B_a' B_b' dr + int B_a V_l(r) B_b dr
//! ```
//!
//! where `V_l` already carries the centrifugal term. The first and last
//! splines are dropped so that `u(0) = u(r_max) = 0`.

use serde::{Deserialize, Serialize};

use crate::banded::{cholesky_banded, eigs_lowest, SymmetricBandMatrix};
use crate::bspline::{BSplineBasis, GridLaw, KnotSequence};
use crate::error::{Error, Result};
use crate::pseudopotential::PotentialModel;
use crate::quadrature::QuadratureRule;

/// Width of the first knot interval used by the default grid.
pub const DEFAULT_FIRST_INTERVAL: f64 = 1e-4;

/// Eigenvalues at or above this energy are treated as box continuum.
pub const BOUND_CUTOFF: f64 = -1e-6;

/// Discretization parameters of the radial box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub splines: usize,
    pub r_max: f64,
    pub order: usize,
    pub grid: GridLaw,
    pub quadrature_nodes: usize,
}

impl SolverConfig {
    /// Exponential grid whose first interval is [`DEFAULT_FIRST_INTERVAL`].
    pub fn with_auto_grid(splines: usize, r_max: f64, order: usize) -> Result<Self> {
        if order == 0 || splines < 2 * order {
            return Err(Error::InvalidSize {
                splines,
                order,
                min: 2 * order.max(1),
            });
        }
        let grid = GridLaw::exponential_with_first_interval(
            splines - order + 1,
            r_max,
            DEFAULT_FIRST_INTERVAL,
        )?;
        Ok(Self {
            splines,
            r_max,
            order,
            grid,
            quadrature_nodes: order,
        })
    }
}

impl Default for SolverConfig {
    /// 600 splines of order 10 on a 200 bohr box.
    fn default() -> Self {
        Self::with_auto_grid(600, 200.0, 10).expect("default grid is valid")
    }
}

/// Basis, quadrature and the tabulated spline values shared by every solve.
#[derive(Debug, Clone)]
pub struct RadialSolver {
    config: SolverConfig,
    basis: BSplineBasis,
    quadrature: QuadratureRule,
    // per quadrature point: k values then k derivatives of splines interval..interval+k
    values: Vec<f64>,
    derivs: Vec<f64>,
    overlap: SymmetricBandMatrix,
}

impl RadialSolver {
    pub fn new(config: SolverConfig) -> Result<Self> {
        let knots = KnotSequence::build(config.splines, config.r_max, config.order, config.grid)?;
        let quadrature = QuadratureRule::build(&knots, config.quadrature_nodes)?;
        let basis = BSplineBasis::bound_state(knots);
        let k = config.order;
        let npts = quadrature.points().len();
        let mut values = vec![0.0; npts * k];
        let mut derivs = vec![0.0; npts * k];
        let m = quadrature.nodes_per_interval();
        for interval in 0..quadrature.n_intervals() {
            let (pts, _) = quadrature.interval(interval);
            for (q, &r) in pts.iter().enumerate() {
                let at = (interval * m + q) * k;
                basis.values_and_derivatives_in_interval(
                    interval,
                    r,
                    &mut values[at..at + k],
                    &mut derivs[at..at + k],
                );
            }
        }
        let mut solver = Self {
            config,
            basis,
            quadrature,
            values,
            derivs,
            overlap: SymmetricBandMatrix::zeros(0, 0),
        };
        solver.overlap = solver.assemble_with(|_| 0.0, false);
        cholesky_banded(&solver.overlap)
            .map_err(|e| Error::AssemblySingular(format!("overlap matrix: {e}")))?;
        Ok(solver)
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn basis(&self) -> &BSplineBasis {
        &self.basis
    }

    pub fn quadrature(&self) -> &QuadratureRule {
        &self.quadrature
    }

    /// Dimension of the radial problem.
    pub fn dimension(&self) -> usize {
        self.basis.dimension()
    }

    pub fn overlap(&self) -> &SymmetricBandMatrix {
        &self.overlap
    }

    /// Band matrices `(H, S)` for `model` in partial wave `l`.
    pub fn assemble(
        &self,
        model: &PotentialModel,
        l: u32,
    ) -> Result<(SymmetricBandMatrix, SymmetricBandMatrix)> {
        let h = self.assemble_with(|r| model.value_unchecked(l, r), true);
        Ok((h, self.overlap.clone()))
    }

    /// `kinetic`: add `1/2 B_a' B_b'`; `potential(r)` multiplies `B_a B_b`.
    fn assemble_with(&self, potential: impl Fn(f64) -> f64, kinetic: bool) -> SymmetricBandMatrix {
        let k = self.config.order;
        let dim = self.dimension();
        let mut out = SymmetricBandMatrix::zeros(dim, k - 1);
        let m = self.quadrature.nodes_per_interval();
        let points = self.quadrature.points();
        let weights = self.quadrature.weights();
        for interval in 0..self.quadrature.n_intervals() {
            for q in 0..m {
                let idx = interval * m + q;
                let (r, w) = (points[idx], weights[idx]);
                let pot = if kinetic { potential(r) } else { 1.0 };
                let vals = &self.values[idx * k..idx * k + k];
                let ders = &self.derivs[idx * k..idx * k + k];
                for p in 0..k {
                    let Some(a) = self.basis.active_index(interval + p) else {
                        continue;
                    };
                    for s in p..k {
                        let Some(b) = self.basis.active_index(interval + s) else {
                            continue;
                        };
                        let mut v = pot * vals[p] * vals[s];
                        if kinetic {
                            v += 0.5 * ders[p] * ders[s];
                        }
                        out.add(a, b, w * v);
                    }
                }
            }
        }
        out
    }

    /// `u(r)` at every quadrature point for coefficients in basis order.
    pub fn radial_function_on_grid(&self, coefficients: &[f64]) -> Vec<f64> {
        let k = self.config.order;
        let m = self.quadrature.nodes_per_interval();
        let mut u = Vec::with_capacity(self.quadrature.points().len());
        for interval in 0..self.quadrature.n_intervals() {
            for q in 0..m {
                let idx = interval * m + q;
                let vals = &self.values[idx * k..idx * k + k];
                let sum = (0..k)
                    .filter_map(|p| {
                        self.basis
                            .active_index(interval + p)
                            .map(|a| coefficients[a] * vals[p])
                    })
                    .sum();
                u.push(sum);
            }
        }
        u
    }

    /// `u(r)` at an arbitrary radius inside the box.
    pub fn radial_function(&self, coefficients: &[f64], r: f64) -> Result<f64> {
        Ok(self
            .basis
            .eval(r)?
            .into_iter()
            .map(|(a, v)| coefficients[a] * v)
            .sum())
    }

    /// Lowest `count` bound states of `model` with angular momentum `l`.
    ///
    /// States at or above [`BOUND_CUTOFF`] are dropped, so fewer than
    /// `count` states may come back.
    pub fn solve_spectrum(
        &self,
        model: &PotentialModel,
        l: u32,
        count: usize,
    ) -> Result<Vec<BoundState>> {
        if count == 0 {
            return Err(Error::InvalidParameter {
                name: "count",
                reason: "at least one state must be requested".into(),
            });
        }
        let (h, s) = self.assemble(model, l)?;
        let solution = eigs_lowest(&h, &s, count.min(self.dimension()))?;
        let mut states = Vec::with_capacity(count);
        for (index, (energy, coefficients)) in solution
            .eigenvalues
            .into_iter()
            .zip(solution.eigenvectors)
            .enumerate()
        {
            if energy >= BOUND_CUTOFF {
                break;
            }
            let nodes = count_nodes(&self.radial_function_on_grid(&coefficients));
            if nodes != index {
                return Err(Error::LabelInconsistency { l, index, nodes });
            }
            let sc = s.matvec(&coefficients);
            let norm: f64 = coefficients.iter().zip(&sc).map(|(a, b)| a * b).sum();
            states.push(BoundState {
                principal_n: nodes as u32 + l + 1,
                l,
                energy_raw: energy,
                nodes: nodes as u32,
                norm_check: (norm - 1.0).abs(),
                coefficients,
            });
        }
        Ok(states)
    }

    /// Bound states for every `l <= l_max` with principal number up to `n_max`.
    pub fn solve_levels(
        &self,
        model: &PotentialModel,
        n_max: u32,
        l_max: u32,
    ) -> Result<Spectrum> {
        if n_max == 0 {
            return Err(Error::InvalidParameter {
                name: "n_max",
                reason: "principal number starts at 1".into(),
            });
        }
        let mut states = Vec::new();
        for l in 0..=l_max.min(n_max - 1) {
            let count = (n_max - l) as usize;
            states.extend(self.solve_spectrum(model, l, count)?);
        }
        Ok(Spectrum {
            model: *model,
            config: self.config,
            states,
        })
    }
}

/// Sign changes of `u` ignoring samples below `1e-6 max|u|`.
pub fn count_nodes(u: &[f64]) -> usize {
    let max = u.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let threshold = 1e-6 * max;
    let mut last = 0.0_f64;
    let mut nodes = 0;
    for &v in u.iter().filter(|v| v.abs() > threshold) {
        if last != 0.0 && v.signum() != last.signum() {
            nodes += 1;
        }
        last = v;
    }
    nodes
}

/// An eigenstate of the radial Hamiltonian.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundState {
    pub principal_n: u32,
    pub l: u32,
    /// Unscaled eigenvalue, hartree.
    pub energy_raw: f64,
    pub nodes: u32,
    /// `|c^T S c - 1|`
    pub norm_check: f64,
    pub coefficients: Vec<f64>,
}

impl BoundState {
    /// Spectroscopic label such as `2p`.
    pub fn label(&self) -> String {
        orbital_label(self.principal_n, self.l)
    }
}

pub fn orbital_label(principal_n: u32, l: u32) -> String {
    const LETTERS: &[u8] = b"spdfghiklmnoqrtuv";
    let letter = LETTERS.get(l as usize).map_or('?', |&c| c as char);
    format!("{principal_n}{letter}")
}

/// Bound states of one model, keyed by `(principal_n, l)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Spectrum {
    pub model: PotentialModel,
    pub config: SolverConfig,
    pub states: Vec<BoundState>,
}

impl Spectrum {
    pub fn get(&self, principal_n: u32, l: u32) -> Option<&BoundState> {
        self.states
            .iter()
            .find(|s| s.principal_n == principal_n && s.l == l)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pseudopotential::ModelKind;

    fn small() -> RadialSolver {
        RadialSolver::new(SolverConfig::with_auto_grid(200, 60.0, 8).unwrap()).unwrap()
    }

    #[test]
    fn labels() {
        assert_eq!(orbital_label(2, 1), "2p");
        assert_eq!(orbital_label(4, 3), "4f");
        assert_eq!(orbital_label(1, 0), "1s");
    }

    #[test]
    fn node_counting() {
        assert_eq!(count_nodes(&[0.0, 1.0, 2.0, 1.0, 0.0]), 0);
        assert_eq!(count_nodes(&[0.0, 1.0, -1.0, 1e-12, -1e-12, -0.5]), 1);
        assert_eq!(count_nodes(&[1.0, -1.0, 1.0, -1.0]), 3);
    }

    #[test]
    fn hydrogen_ground_state_small_box() {
        let solver = small();
        let model = PotentialModel::new(ModelKind::BareCoulomb, 1, 1).unwrap();
        let states = solver.solve_spectrum(&model, 0, 3).unwrap();
        for (i, s) in states.iter().enumerate() {
            let n = (i + 1) as f64;
            assert!((s.energy_raw + 0.5 / (n * n)).abs() < 1e-8, "{s:?}");
            assert_eq!(s.nodes as usize, i);
            assert!(s.norm_check < 1e-10);
        }
    }

    #[test]
    fn continuum_states_are_dropped() {
        let solver = RadialSolver::new(SolverConfig::with_auto_grid(80, 30.0, 6).unwrap()).unwrap();
        let model = PotentialModel::new(ModelKind::BareCoulomb, 1, 1).unwrap();
        let states = solver.solve_spectrum(&model, 0, 30).unwrap();
        assert!(states.len() < 30);
        assert!(states.iter().all(|s| s.energy_raw < BOUND_CUTOFF));
    }

    #[test]
    fn assembled_matrices_are_banded() {
        let solver = small();
        let model = PotentialModel::new(ModelKind::VaryingScreening, 3, 3).unwrap();
        let (h, s) = solver.assemble(&model, 1).unwrap();
        assert_eq!(h.bandwidth(), 7);
        assert_eq!(s.bandwidth(), 7);
        assert_eq!(h.dim(), 198);
        assert!(cholesky_banded(&s).is_ok());
    }
}
