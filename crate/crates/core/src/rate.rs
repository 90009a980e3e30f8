//! Log-log regression of the gap `E_{2n} − 2cos(π/κ)` against `n`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::band::{check_kappa, solve_band_endpoint};
use crate::error::{Error, Result};
use crate::highprec::refine_from_seed;
use crate::real::{HpReal, Real};

/// Band indices above this are refined in extended precision.
pub const EXTENDED_FROM_BAND: u32 = 2000;
pub const EXTENDED_BITS: usize = 128;

/// Tolerance for the double-precision seed of long chains.
const SEED_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateOptions {
    pub extended_from_band: u32,
    pub extended_bits: usize,
}

impl Default for RateOptions {
    fn default() -> Self {
        Self {
            extended_from_band: EXTENDED_FROM_BAND,
            extended_bits: EXTENDED_BITS,
        }
    }
}

/// One regression sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePoint {
    pub n: u32,
    /// `E_{2n}`.
    pub energy: f64,
    /// `E_{2n} − 2cos(π/κ)`.
    pub gap: f64,
    pub extended: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub kappa: u32,
    pub slope: f64,
    pub intercept: f64,
    /// Euclidean norm of the regression residuals in log space.
    pub residual_norm: f64,
    pub points: Vec<RatePoint>,
}

/// `E_{2n}` and its gap to the bottom of `J_2(κ)`.
pub fn gap_point(kappa: u32, n: u32, options: &RateOptions) -> Result<RatePoint> {
    let band = n
        .checked_mul(2)
        .ok_or_else(|| Error::InvalidArgument(format!("index {n} too large")))?;
    let seed = solve_band_endpoint(kappa, band, SEED_TOL)?.energy;
    if band <= options.extended_from_band {
        let floor = 2.0 * 1.0f64.cos_pi_over(kappa);
        return Ok(RatePoint {
            n,
            energy: seed,
            gap: seed - floor,
            extended: false,
        });
    }
    let e = refine_from_seed(kappa, band, seed, options.extended_bits)?;
    let two = HpReal::from_i64(2, e.precision());
    let floor = two.clone() * two.cos_pi_over(kappa);
    Ok(RatePoint {
        n,
        energy: e.to_f64(),
        gap: (e - floor).to_f64(),
        extended: true,
    })
}

/// Least-squares fit of `ln(E_{2n} − 2cos(π/κ))` against `ln n`.
pub fn rate_fit(kappa: u32, indices: &[u32]) -> Result<RateFit> {
    rate_fit_with(kappa, indices, &RateOptions::default())
}

pub fn rate_fit_with(kappa: u32, indices: &[u32], options: &RateOptions) -> Result<RateFit> {
    check_kappa(kappa)?;
    if indices.is_empty() {
        return Err(Error::InvalidArgument("indices must be nonempty".into()));
    }
    if indices.contains(&0) {
        return Err(Error::InvalidArgument("indices must be >= 1".into()));
    }
    let points: Vec<RatePoint> = indices
        .par_iter()
        .map(|&n| gap_point(kappa, n, options))
        .collect::<Result<_>>()?;
    if let Some(p) = points.iter().find(|p| !(p.gap > 0.0)) {
        return Err(Error::DegenerateInput(format!(
            "gap E_{} - 2cos(pi/{kappa}) = {} is not positive",
            2 * p.n,
            p.gap
        )));
    }
    let xs: Vec<f64> = points.iter().map(|p| f64::from(p.n).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.gap.ln()).collect();
    let (slope, intercept, residual_norm) = least_squares(&xs, &ys)?;
    Ok(RateFit {
        kappa,
        slope,
        intercept,
        residual_norm,
        points,
    })
}

/// `(slope, intercept, ‖residual‖₂)` of the line through `(xs, ys)`.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64)> {
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if !(sxx > 0.0) {
        return Err(Error::DegenerateInput("need at least two distinct indices".into()));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual_norm = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum::<f64>()
        .sqrt();
    Ok((slope, intercept, residual_norm))
}

/// `a, a + step, …` up to and including `b`.
pub fn index_range(start: u32, end: u32, step: u32) -> Result<Vec<u32>> {
    if step == 0 || start == 0 || end < start {
        return Err(Error::InvalidArgument(format!("bad index range {start}:{end}:{step}")));
    }
    Ok((start..=end).step_by(step as usize).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let xs = [1.0, 2.0, 3.0];
        let ys = [1.0, -1.0, -3.0];
        let (s, i, r) = least_squares(&xs, &ys).unwrap();
        assert!((s + 2.0).abs() < 1e-15 && (i - 3.0).abs() < 1e-15 && r < 1e-15);
        assert!(least_squares(&[2.0, 2.0], &[1.0, 3.0]).is_err());
    }

    #[test]
    fn kappa_two_slope() {
        // E_{2n} = 1/(n+1)
        let fit = rate_fit(2, &[10, 20, 40, 80]).unwrap();
        assert!((fit.slope + 1.0).abs() < 0.05, "{fit:?}");
        for p in &fit.points {
            assert!((p.gap - 1.0 / f64::from(p.n + 1)).abs() < 1e-12);
        }
    }

    #[test]
    fn extended_and_double_agree() {
        let hp = gap_point(5, 1100, &RateOptions::default()).unwrap();
        let dp = gap_point(5, 1100, &RateOptions { extended_from_band: u32::MAX, ..Default::default() }).unwrap();
        assert!(hp.extended && !dp.extended);
        assert!((hp.gap - dp.gap).abs() < 1e-6 * hp.gap, "{hp:?} {dp:?}");
    }

    #[test]
    fn ranges() {
        assert_eq!(index_range(400, 1200, 400).unwrap(), vec![400, 800, 1200]);
        assert!(index_range(0, 10, 1).is_err());
        assert!(rate_fit(3, &[]).is_err());
        assert!(rate_fit(3, &[0, 5]).is_err());
    }
}
