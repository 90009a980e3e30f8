//! Band endpoints `E_n ∈ J_2(κ)` from the chain system
//! `E − 1 = X_0 < X_1 < … < X_{n+1} = 1`, `T_κ(X_i) = T_κ(E − X_{i+1})`.
//!
//! The chain is walked from `X_0 = E − 1` with [`branch_step`]; the energy is pinned by
//! the closure condition at the middle of the chain (`X_{(n+1)/2} = E/2` for odd `n`,
//! `X_{n/2} = cos(π/κ)` for even `n`).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chebyshev::branch_step_with;
use crate::error::{Error, Result};
use crate::real::Real;

/// Number of uniform samples used to bracket the closure root on `J_2(κ)`.
pub const SCAN_SAMPLES: usize = 4096;

/// `J_2(κ) = (2cos(π/κ), 1 + cos(π/κ))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandWindow {
    pub kappa: u32,
    pub lower: f64,
    pub upper: f64,
}

impl BandWindow {
    pub fn new(kappa: u32) -> Result<Self> {
        check_kappa(kappa)?;
        let c = 1.0f64.cos_pi_over(kappa);
        Ok(Self {
            kappa,
            lower: 2.0 * c,
            upper: 1.0 + c,
        })
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    /// Membership in the closed window, with a little slack for rounding.
    pub fn contains_closed(&self, energy: f64) -> bool {
        energy >= self.lower - 1e-12 && energy <= self.upper + 1e-12
    }
}

/// A band endpoint with its full chain `X_0 … X_{n+1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainSolution {
    pub kappa: u32,
    pub n: u32,
    pub energy: f64,
    pub points: Vec<f64>,
}

impl ChainSolution {
    /// `max_i |X_{n+1−i} − (E − X_i)|`.
    pub fn symmetry_defect(&self) -> f64 {
        let last = self.points.len() - 1;
        self.points
            .iter()
            .enumerate()
            .map(|(i, x)| (self.points[last - i] - (self.energy - x)).abs())
            .fold(0.0, f64::max)
    }

    /// `X_1 … X_n`.
    pub fn interior(&self) -> &[f64] {
        &self.points[1..self.points.len() - 1]
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.points.windows(2).all(|w| w[0] < w[1])
    }
}

pub(crate) fn check_kappa(kappa: u32) -> Result<()> {
    if kappa < 2 {
        return Err(Error::InvalidArgument(format!("kappa must be >= 2, got {kappa}")));
    }
    Ok(())
}

/// Index of the chain point constrained by the closure condition.
fn closure_index(n: u32) -> usize {
    if n % 2 == 1 {
        (n as usize + 1) / 2
    } else {
        n as usize / 2
    }
}

/// Walks `steps` branch steps from `X_0 = E − 1`.
fn walk<R: Real>(kappa: u32, energy: &R, steps: usize) -> Result<Vec<R>> {
    let (c, s) = energy.level_angle(kappa);
    let mut points = Vec::with_capacity(steps + 1);
    let mut x = energy.clone() - energy.lift(1.0);
    points.push(x.clone());
    for _ in 0..steps {
        x = branch_step_with(kappa, &c, &s, energy.clone(), x)?;
        points.push(x.clone());
    }
    Ok(points)
}

/// Lower half `X_0 … X_{⌈(n+1)/2⌉}` of the chain at energy `E`.
///
/// The upper half follows from `X_{n+1−i} = E − X_i`.
pub fn chain_points<R: Real>(kappa: u32, n: u32, energy: R) -> Result<Vec<R>> {
    check_kappa(kappa)?;
    walk(kappa, &energy, (n as usize + 2) / 2)
}

/// Signed closure residual; zero exactly at `E = E_n`.
///
/// Odd `n`: `X_{(n+1)/2} − E/2`. Even `n ≥ 2`: `X_{n/2} − cos(π/κ)`. For `n = 0` the
/// chain is a single step and the residual is `X_1 − 1`.
pub fn closure_residual<R: Real>(kappa: u32, n: u32, energy: R) -> Result<R> {
    check_kappa(kappa)?;
    if n == 0 {
        let points = walk(kappa, &energy, 1)?;
        return Ok(points[1].clone() - energy.lift(1.0));
    }
    let idx = closure_index(n);
    let points = walk(kappa, &energy, idx)?;
    let x = points[idx].clone();
    Ok(if n % 2 == 1 {
        let half = energy.lift(2.0);
        x - energy / half
    } else {
        x.clone() - x.cos_pi_over(kappa)
    })
}

/// Residual with chain overshoot (`X` leaving `[cos(2π/κ), 1]`) mapped to `+∞`.
///
/// The residual is increasing in `E`: every step has `∂Y/∂E = 1` and `∂Y/∂x ≥ 0`, so an
/// overshooting chain only happens above the root.
pub(crate) fn signed_residual<R: Real>(kappa: u32, n: u32, energy: R) -> Option<R> {
    closure_residual(kappa, n, energy).ok()
}

/// Largest `a` with residual `< 0` and smallest `b` with residual `≥ 0` (or overshoot)
/// among the uniform scan samples.
pub(crate) fn bracket_root(kappa: u32, n: u32) -> Result<(f64, f64)> {
    let window = BandWindow::new(kappa)?;
    let mut prev: Option<f64> = None;
    for k in 0..=SCAN_SAMPLES {
        let e = window.lower + window.width() * k as f64 / SCAN_SAMPLES as f64;
        let negative = matches!(signed_residual(kappa, n, e), Some(r) if r < 0.0);
        if negative {
            prev = Some(e);
        } else if let Some(a) = prev {
            return Ok((a, e));
        }
    }
    Err(Error::NoRoot { kappa, n })
}

/// Solves the chain system for `E_n` to `|closure_residual| < tol`.
pub fn solve_band_endpoint(kappa: u32, n: u32, tol: f64) -> Result<ChainSolution> {
    check_kappa(kappa)?;
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    if n == 0 {
        let energy = BandWindow::new(kappa)?.upper;
        return Ok(ChainSolution {
            kappa,
            n,
            energy,
            points: vec![energy - 1.0, 1.0],
        });
    }

    let (mut lo, mut hi) = bracket_root(kappa, n)?;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match signed_residual(kappa, n, mid) {
            Some(r) if r < 0.0 => lo = mid,
            _ => hi = mid,
        }
    }

    let candidates = [lo, hi];
    let (energy, residual) = candidates
        .iter()
        .filter_map(|&e| signed_residual(kappa, n, e).map(|r: f64| (e, r.abs())))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or(Error::NoRoot { kappa, n })?;
    if residual >= tol {
        return Err(Error::NonConvergence {
            kappa,
            n,
            iterations: 200,
        });
    }
    let solution = complete_chain(kappa, n, energy)?;
    if !solution.is_strictly_increasing() {
        return Err(Error::NoRoot { kappa, n });
    }
    Ok(solution)
}

/// Builds the full chain `X_0 … X_{n+1}` at a solved energy.
pub fn complete_chain(kappa: u32, n: u32, energy: f64) -> Result<ChainSolution> {
    let len = n as usize + 2;
    let half = chain_points(kappa, n, energy)?;
    let mut points = vec![0.0; len];
    let lower_count = closure_index(n).max(1) + 1;
    for i in 0..len {
        points[i] = if i < lower_count.min(half.len()) {
            half[i]
        } else {
            energy - points[len - 1 - i]
        };
    }
    points[len - 1] = 1.0;
    Ok(ChainSolution {
        kappa,
        n,
        energy,
        points,
    })
}

/// `E_0, …, E_{n_max}`, solved in parallel.
pub fn band_sequence(kappa: u32, n_max: u32) -> Result<Vec<ChainSolution>> {
    check_kappa(kappa)?;
    (0..=n_max)
        .into_par_iter()
        .map(|n| solve_band_endpoint(kappa, n, 1e-12))
        .collect()
}
