//! Mourre symbol `G_κ^E = Σ_q ρ_{j_qκ} g_{j_qκ}^E` for an index set `Σ`, the
//! interpolation system `Mρ = 0`, and the positivity test that classifies `Σ`.
//!
//! The building block is
//! `g_{jκ}^E(x) = (1 − x²) U_{jκ−1}(x) + (1 − y²) U_{jκ−1}(y)` with `y = E − x`,
//! symmetric under `x ↦ E − x`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::band::{check_kappa, solve_band_endpoint, ChainSolution};
use crate::chebyshev::{cheb_u, cheb_u_table};
use crate::error::{Error, Result};

/// Singular values below `NULLITY_RTOL · s_1` (after column equilibration) count as zero.
pub const NULLITY_RTOL: f64 = 1e-13;

/// Rows whose norm (after column equilibration) is below this fraction of the largest
/// row are analytically zero (midpoint derivatives, values on the `E_0` chain) and are
/// dropped before the decomposition: their rounding noise would otherwise sit above
/// [`NULLITY_RTOL`] once `jκ` is large.
pub const TRIVIAL_ROW_RTOL: f64 = 1e-10;

/// Tolerance used for the band endpoints that feed the constraint rows.
const ENDPOINT_TOL: f64 = 1e-12;

pub const DEFAULT_E_GRID: usize = 101;
pub const DEFAULT_X_GRID: usize = 2001;

/// An index set `Σ = [j_1κ, …, j_Nκ]` attached to band `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaPlan {
    pub kappa: u32,
    pub band: u32,
    pub indices: Vec<u32>,
}

impl SigmaPlan {
    pub fn new(kappa: u32, band: u32, indices: Vec<u32>) -> Result<Self> {
        check_kappa(kappa)?;
        if band == 0 {
            return Err(Error::InvalidArgument("band must be >= 1".into()));
        }
        if indices.is_empty() {
            return Err(Error::InvalidArgument("sigma must be nonempty".into()));
        }
        if let Some(bad) = indices.iter().find(|&&i| i == 0 || i % kappa != 0) {
            return Err(Error::InvalidArgument(format!(
                "sigma entry {bad} is not a positive multiple of kappa={kappa}"
            )));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("sigma must be strictly increasing".into()));
        }
        Ok(Self { kappa, band, indices })
    }

    /// `j_q = index_q / κ`.
    pub fn multipliers(&self) -> Vec<u32> {
        self.indices.iter().map(|i| i / self.kappa).collect()
    }
}

/// `g_{jκ}^E(x)`.
pub fn g_symbol(kappa: u32, j: u32, energy: f64, x: f64) -> f64 {
    let m = j * kappa - 1;
    let y = energy - x;
    (1.0 - x * x) * cheb_u(m, x) + (1.0 - y * y) * cheb_u(m, y)
}

/// `d/dx g_{jκ}^E(x)`.
///
/// With `N = jκ`, `d/dx[(1 − x²) U_{N−1}(x)] = N U_{N−2}(x) − (N+1) x U_{N−1}(x)`, which
/// has no removable singularity at `±1`.
pub fn g_symbol_deriv(kappa: u32, j: u32, energy: f64, x: f64) -> f64 {
    let n = j * kappa;
    let h = |t: f64| f64::from(n) * cheb_u(n - 2, t) - f64::from(n + 1) * t * cheb_u(n - 1, t);
    h(x) - h(energy - x)
}

/// The matrix `M` together with the two chains it was built from.
#[derive(Debug, Clone)]
pub struct ConstraintSystem {
    pub matrix: DMatrix<f64>,
    /// Chain at `E_n`.
    pub lower: ChainSolution,
    /// Chain at `E_{n−1}`.
    pub upper: ChainSolution,
}

/// Rows of `M`: for each endpoint `b ∈ {E_n, E_{n−1}}`, the values
/// `[g_{j_q}^b(X_i)]_q` at every chain point followed by the derivatives at the
/// interior chain points.
pub fn assemble_constraints(plan: &SigmaPlan) -> Result<ConstraintSystem> {
    let lower = solve_band_endpoint(plan.kappa, plan.band, ENDPOINT_TOL)?;
    let upper = solve_band_endpoint(plan.kappa, plan.band - 1, ENDPOINT_TOL)?;
    let js = plan.multipliers();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for chain in [&lower, &upper] {
        let e = chain.energy;
        for &x in &chain.points {
            rows.push(js.iter().map(|&j| g_symbol(plan.kappa, j, e, x)).collect());
        }
        for &x in chain.interior() {
            rows.push(js.iter().map(|&j| g_symbol_deriv(plan.kappa, j, e, x)).collect());
        }
    }
    let matrix = DMatrix::from_fn(rows.len(), js.len(), |r, c| rows[r][c]);
    Ok(ConstraintSystem { matrix, lower, upper })
}

/// Solved coefficient vector for a [`SigmaPlan`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSolution {
    pub kappa: u32,
    pub band: u32,
    pub indices: Vec<u32>,
    /// `ρ`, aligned with `indices`, `rho[0] = 1`.
    pub rho: Vec<f64>,
    /// Singular values of the column-equilibrated `M`, descending, relative to `s_1`.
    pub singular_values: Vec<f64>,
    pub nullity: usize,
    /// Analytically zero rows dropped from `M`.
    pub trivial_rows: usize,
    /// `E_n`.
    pub lower_energy: f64,
    /// `E_{n−1}`.
    pub upper_energy: f64,
}

impl CoefficientSolution {
    pub fn rho_map(&self) -> BTreeMap<u32, f64> {
        self.indices.iter().copied().zip(self.rho.iter().copied()).collect()
    }
}

/// Numerical nullspace of `M`, normalized so the first coefficient is 1.
pub fn solve_coefficients(plan: &SigmaPlan) -> Result<CoefficientSolution> {
    let system = assemble_constraints(plan)?;
    let null = nullspace_vector(&system.matrix)?;
    Ok(CoefficientSolution {
        kappa: plan.kappa,
        band: plan.band,
        indices: plan.indices.clone(),
        rho: null.rho,
        singular_values: null.singular_values,
        nullity: null.nullity,
        trivial_rows: null.trivial_rows,
        lower_energy: system.lower.energy,
        upper_energy: system.upper.energy,
    })
}

/// Result of [`nullspace_vector`].
#[derive(Debug, Clone, PartialEq)]
pub struct NullVector {
    pub rho: Vec<f64>,
    pub singular_values: Vec<f64>,
    pub nullity: usize,
    pub trivial_rows: usize,
}

/// Null vector of a matrix whose nullspace should be a line, normalized so the first
/// coefficient is 1.
pub fn nullspace_vector(matrix: &DMatrix<f64>) -> Result<NullVector> {
    let cols = matrix.ncols();
    let mut m = matrix.clone();
    let scales: Vec<f64> = (0..cols)
        .map(|c| {
            let norm = m.column(c).norm();
            if norm > 0.0 {
                norm
            } else {
                1.0
            }
        })
        .collect();
    for (c, s) in scales.iter().enumerate() {
        m.column_mut(c).unscale_mut(*s);
    }
    let row_norms: Vec<f64> = m.row_iter().map(|r| r.norm()).collect();
    let largest = row_norms.iter().copied().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..m.nrows()).filter(|&r| row_norms[r] > TRIVIAL_ROW_RTOL * largest).collect();
    let trivial_rows = m.nrows() - keep.len();
    let mut m = m.select_rows(keep.iter());
    if m.nrows() < cols {
        m = m.resize_vertically(cols, 0.0);
    }
    let svd = m.svd(false, true);
    let v_t = svd
        .v_t
        .ok_or_else(|| Error::DegenerateInput("singular value decomposition failed".into()))?;
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let s1 = svd.singular_values[order[0]];
    if !(s1 > 0.0) {
        return Err(Error::AmbiguousNullspace { nullity: cols });
    }
    let singular_values: Vec<f64> = order.iter().map(|&k| svd.singular_values[k] / s1).collect();
    let nullity = singular_values.iter().filter(|&&s| s < NULLITY_RTOL).count();
    if nullity != 1 {
        return Err(Error::AmbiguousNullspace { nullity });
    }
    let smallest = order[cols - 1];
    let v: Vec<f64> = (0..cols).map(|c| v_t[(smallest, c)] / scales[c]).collect();
    if v[0].abs() < f64::EPSILON * v.iter().fold(0.0f64, |a, b| a.max(b.abs())) {
        return Err(Error::DegenerateInput("first coefficient of the null vector vanishes".into()));
    }
    Ok(NullVector {
        rho: v.iter().map(|x| x / v[0]).collect(),
        singular_values,
        nullity,
        trivial_rows,
    })
}

/// `G_κ^E(x) = Σ_q ρ_q g_{j_qκ}^E(x)`, with one `U` table per point.
pub fn evaluate_g(kappa: u32, indices: &[u32], rho: &[f64], energy: f64, x: f64) -> f64 {
    debug_assert!(indices.iter().all(|i| i % kappa == 0));
    let top = indices.iter().copied().max().unwrap_or(1).max(1);
    let y = energy - x;
    let ux = cheb_u_table(top - 1, x);
    let uy = cheb_u_table(top - 1, y);
    let (wx, wy) = (1.0 - x * x, 1.0 - y * y);
    indices
        .iter()
        .zip(rho)
        .map(|(&idx, r)| {
            let m = (idx - 1) as usize;
            r * (wx * ux[m] + wy * uy[m])
        })
        .sum()
}

/// Where a sampled minimum of `G` was found.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub energy: f64,
    pub x: f64,
    pub value: f64,
}

/// Which part of `[E − 1, 1]` is sampled. `G` is symmetric about `E/2`, so the lower
/// half carries the same information.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum XRange {
    #[default]
    Full,
    LowerHalf,
}

/// Sampling parameters for [`validate_sigma_with`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidationGrid {
    pub e_grid: usize,
    pub x_grid: usize,
    pub margin: f64,
    pub x_range: XRange,
}

impl Default for ValidationGrid {
    fn default() -> Self {
        Self {
            e_grid: DEFAULT_E_GRID,
            x_grid: DEFAULT_X_GRID,
            margin: 0.0,
            x_range: XRange::Full,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidityVerdict {
    pub valid: bool,
    pub min_value: f64,
    pub witness: Witness,
    pub grid: ValidationGrid,
    pub solution: CoefficientSolution,
}

/// `x_grid` equispaced samples of `[E − 1, 1]` (or of `[E − 1, E/2]`).
pub fn x_samples(energy: f64, x_grid: usize, range: XRange) -> impl Iterator<Item = f64> {
    let a = energy - 1.0;
    let b = match range {
        XRange::Full => 1.0,
        XRange::LowerHalf => energy / 2.0,
    };
    let steps = (x_grid.max(2) - 1) as f64;
    (0..x_grid.max(2)).map(move |i| a + (b - a) * i as f64 / steps)
}

/// Smallest sampled `G` at one energy; ties keep the smallest `x`.
pub fn minimum_at_energy<I>(kappa: u32, indices: &[u32], rho: &[f64], energy: f64, xs: I) -> Witness
where
    I: IntoIterator<Item = f64>,
{
    let mut best = Witness {
        energy,
        x: f64::NAN,
        value: f64::INFINITY,
    };
    for x in xs {
        let value = evaluate_g(kappa, indices, rho, energy, x);
        if value < best.value || best.x.is_nan() {
            best = Witness { energy, x, value };
        }
    }
    best
}

/// Minimum of `G` over `x_grid` samples plus the chain points at a band endpoint.
pub fn endpoint_minimum(solution: &CoefficientSolution, chain: &ChainSolution, x_grid: usize) -> Witness {
    let xs = x_samples(chain.energy, x_grid, XRange::Full).chain(chain.points.iter().copied());
    minimum_at_energy(solution.kappa, &solution.indices, &solution.rho, chain.energy, xs)
}

/// Sampled minimum of `G` over interior energies of `(E_n, E_{n−1})`.
pub fn scan_positivity(solution: &CoefficientSolution, grid: &ValidationGrid) -> Witness {
    let (lo, hi) = (solution.lower_energy, solution.upper_energy);
    let per_energy: Vec<Witness> = (0..grid.e_grid)
        .into_par_iter()
        .map(|k| {
            let e = lo + (hi - lo) * (k + 1) as f64 / (grid.e_grid + 1) as f64;
            minimum_at_energy(
                solution.kappa,
                &solution.indices,
                &solution.rho,
                e,
                x_samples(e, grid.x_grid, grid.x_range),
            )
        })
        .collect();
    per_energy
        .into_iter()
        .reduce(|best, w| if w.value < best.value { w } else { best })
        .expect("e_grid >= 1")
}

/// Classifies `Σ` with the default grid sizes.
pub fn validate_sigma(plan: &SigmaPlan, e_grid: usize, x_grid: usize, margin: f64) -> Result<ValidityVerdict> {
    validate_sigma_with(
        plan,
        &ValidationGrid {
            e_grid,
            x_grid,
            margin,
            x_range: XRange::Full,
        },
    )
}

/// `Σ` is valid iff every sample of `G` on the interior grid exceeds `margin`.
pub fn validate_sigma_with(plan: &SigmaPlan, grid: &ValidationGrid) -> Result<ValidityVerdict> {
    if grid.e_grid < 3 || grid.x_grid < 3 {
        return Err(Error::InvalidArgument("e_grid and x_grid must be >= 3".into()));
    }
    if !grid.margin.is_finite() {
        return Err(Error::InvalidArgument("margin must be finite".into()));
    }
    let solution = solve_coefficients(plan)?;
    let witness = scan_positivity(&solution, grid);
    Ok(ValidityVerdict {
        valid: witness.value > grid.margin,
        min_value: witness.value,
        witness,
        grid: *grid,
        solution,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plan(kappa: u32, band: u32, indices: &[u32]) -> SigmaPlan {
        SigmaPlan::new(kappa, band, indices.to_vec()).unwrap()
    }

    fn fd(f: impl Fn(f64) -> f64, x: f64) -> f64 {
        let h = 1e-6;
        (f(x + h) - f(x - h)) / (2.0 * h)
    }

    #[test]
    fn plan_validation() {
        assert!(SigmaPlan::new(4, 2, vec![4, 8, 12]).is_ok());
        assert!(SigmaPlan::new(4, 2, vec![4, 10]).is_err());
        assert!(SigmaPlan::new(4, 2, vec![8, 4]).is_err());
        assert!(SigmaPlan::new(4, 2, vec![]).is_err());
        assert!(SigmaPlan::new(4, 0, vec![4]).is_err());
        assert!(SigmaPlan::new(1, 1, vec![1]).is_err());
    }

    #[test]
    fn published_two_term_ratios() {
        let r = -g_symbol(2, 1, 2.0 / 3.0, -1.0 / 3.0) / g_symbol(2, 2, 2.0 / 3.0, -1.0 / 3.0);
        assert!((r - 9.0 / 14.0).abs() < 1e-13, "{r}");
        let r = -g_symbol(4, 1, 1.6, 0.6) / g_symbol(4, 2, 1.6, 0.6);
        assert!((r - 625.0 / 1054.0).abs() < 1e-13, "{r}");
    }

    #[test]
    fn g_vanishes_at_top_of_window() {
        for kappa in 2..10 {
            let c = (std::f64::consts::PI / f64::from(kappa)).cos();
            for j in 1..5 {
                assert!(g_symbol(kappa, j, 1.0 + c, c).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn derivative_matches_finite_differences() {
        for (kappa, j, e, x) in [(2, 1, 2.0 / 3.0, 0.1), (4, 1, 1.6, 0.7), (3, 4, 1.2, 0.35), (5, 2, 1.7, 0.95)] {
            let d = g_symbol_deriv(kappa, j, e, x);
            let f = fd(|t| g_symbol(kappa, j, e, t), x);
            assert!((d - f).abs() <= 1e-5 * f.abs().max(1.0), "{d} vs {f}");
        }
        for kappa in 2..7 {
            assert!(g_symbol_deriv(kappa, 3, 1.4, 0.7).abs() < 1e-12);
        }
    }

    #[test]
    fn first_band_ratio() {
        let s = solve_coefficients(&plan(2, 1, &[2, 4])).unwrap();
        assert!((s.rho[1] - 9.0 / 14.0).abs() < 1e-12);
        assert_eq!(s.nullity, 1);
        let s = solve_coefficients(&plan(4, 1, &[4, 8])).unwrap();
        assert!((s.rho[1] - 625.0 / 1054.0).abs() < 1e-10);
    }

    #[test]
    fn system_shape() {
        let sys = assemble_constraints(&plan(4, 1, &[4, 8])).unwrap();
        // values at X_0, X_1, X_2, derivative at X_1, values at the two points of E_0's chain
        assert_eq!(sys.matrix.shape(), (6, 2));
        for c in 0..2 {
            assert!(sys.matrix[(4, c)].abs() < 1e-12 && sys.matrix[(5, c)].abs() < 1e-12);
        }
    }

    #[test]
    fn kappa_three_band_five_vector() {
        let s = solve_coefficients(&plan(3, 5, &[3, 6, 9, 12, 15, 18, 21, 24, 27, 30])).unwrap();
        let expected = [1.0, 1.599931, 1.645307, 1.27734, 0.77838, 0.37292, 0.13741, 0.03703, 0.00657, 0.00058];
        for (r, e) in s.rho.iter().zip(expected) {
            assert!((r - e).abs() < 1e-4, "{r} vs {e}");
        }
    }

    #[test]
    fn too_many_unknowns_is_ambiguous() {
        let err = solve_coefficients(&plan(4, 1, &[4, 8, 12, 16, 20, 24, 28, 32, 36])).unwrap_err();
        assert!(matches!(err, Error::AmbiguousNullspace { .. }), "{err:?}");
    }

    #[test]
    fn g_linear_and_symmetric() {
        let idx = [4, 8, 12];
        let rho = [1.0, 0.5, -0.25];
        for (e, t) in [(1.6, 0.1), (1.5, 0.3), (1.45, 0.05)] {
            let a = evaluate_g(4, &idx, &rho, e, e / 2.0 + t);
            let b = evaluate_g(4, &idx, &rho, e, e / 2.0 - t);
            assert!((a - b).abs() < 1e-12);
            let direct: f64 = idx.iter().zip(rho).map(|(i, r)| r * g_symbol(4, i / 4, e, e / 2.0 + t)).sum();
            assert!((a - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn first_band_verdicts() {
        let p = plan(4, 1, &[4, 8]);
        let v = validate_sigma(&p, 41, 401, 0.0).unwrap();
        assert!(v.valid, "{v:?}");
        let sys = assemble_constraints(&p).unwrap();
        let w = endpoint_minimum(&v.solution, &sys.lower, 401);
        assert!(w.value <= 1e-8);
        assert!(validate_sigma(&p, 2, 401, 0.0).is_err());
    }
}
