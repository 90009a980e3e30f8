use crate::band::{check_kappa, signed_residual, solve_band_endpoint};
use crate::error::{Error, Result};
use crate::real::{HpReal, Real};

/// Guard bits carried on top of the requested precision.
pub const GUARD_BITS: usize = 64;

const MAX_ITERATIONS: usize = 400;

/// Sharpens `E_n` to `bits` bits.
///
/// The double-precision root seeds a bracket that is then closed with the Illinois
/// variant of regula falsi, falling back to bisection whenever the chain overshoots.
/// The returned value carries `bits + GUARD_BITS` bits of mantissa and its closure
/// residual (at that precision) is below `2^(8 − bits)`.
pub fn refine_endpoint(kappa: u32, n: u32, bits: usize) -> Result<HpReal> {
    check_kappa(kappa)?;
    if bits < 64 {
        return Err(Error::InvalidArgument(format!("refinement needs >= 64 bits, got {bits}")));
    }
    let working = bits + GUARD_BITS;
    if n == 0 {
        let one = HpReal::from_f64(1.0, working);
        let c = one.cos_pi_over(kappa);
        return Ok(one + c);
    }
    let seed = solve_band_endpoint(kappa, n, 1e-9)?.energy;
    refine_from_seed(kappa, n, seed, bits)
}

/// [`refine_endpoint`] from a caller-supplied double-precision root.
pub fn refine_from_seed(kappa: u32, n: u32, seed: f64, bits: usize) -> Result<HpReal> {
    let working = bits + GUARD_BITS;
    let residual = |e: &HpReal| signed_residual(kappa, n, e.clone());
    let target = HpReal::from_f64(2f64.powi(8 - bits as i32), working);
    let stall = NonConvergenceAt { kappa, n };

    // bracket: a with residual < 0, b with residual >= 0 or overshoot
    let seed_hp = HpReal::from_f64(seed, working);
    let zero = seed_hp.zero_like();
    let seed_negative = matches!(residual(&seed_hp), Some(ref r) if *r < zero);
    let mut step = HpReal::from_f64(seed.abs().max(1e-3) * 1e-14, working);
    let eight = HpReal::from_f64(8.0, working);
    let (mut a, mut fa, mut b, mut fb);
    if seed_negative {
        a = seed_hp.clone();
        fa = residual(&a).expect("negative residual is defined");
        loop {
            let candidate = seed_hp.clone() + step.clone();
            let f = residual(&candidate);
            if !matches!(f, Some(ref r) if *r < zero) {
                b = candidate;
                fb = f;
                break;
            }
            a = candidate;
            fa = f.expect("checked");
            step = step * eight.clone();
            if step.to_f64() > 1.0 {
                return Err(stall.error(0));
            }
        }
    } else {
        b = seed_hp.clone();
        fb = residual(&b);
        loop {
            let candidate = seed_hp.clone() - step.clone();
            match residual(&candidate) {
                Some(r) if r < zero => {
                    a = candidate;
                    fa = r;
                    break;
                }
                f => {
                    b = candidate;
                    fb = f;
                }
            }
            step = step * eight.clone();
            if step.to_f64() > 1.0 {
                return Err(stall.error(0));
            }
        }
    }

    // Illinois iteration on [a, b]
    let half = HpReal::from_f64(0.5, working);
    let mut side = 0i8;
    for iteration in 0..MAX_ITERATIONS {
        let width = b.clone() - a.clone();
        let c = match &fb {
            Some(fbv) => {
                let denom = fbv.clone() - fa.clone();
                let c = b.clone() - fbv.clone() * width.clone() / denom;
                if c > a && c < b {
                    c
                } else {
                    a.clone() + width.clone() * half.clone()
                }
            }
            None => a.clone() + width.clone() * half.clone(),
        };
        if !(c > a && c < b) {
            return finish(kappa, n, a, fa, b, fb, &target, iteration);
        }
        match residual(&c) {
            Some(fc) if fc < zero => {
                if fc.abs() < target {
                    return Ok(c);
                }
                a = c;
                fa = fc;
                if side == -1 {
                    fb = fb.map(|v| v * half.clone());
                }
                side = -1;
            }
            fc => {
                if let Some(v) = &fc {
                    if v.abs() < target {
                        return Ok(c);
                    }
                }
                b = c;
                fb = fc;
                if side == 1 {
                    fa = fa * half.clone();
                }
                side = 1;
            }
        }
    }
    finish(kappa, n, a, fa, b, fb, &target, MAX_ITERATIONS)
}

struct NonConvergenceAt {
    kappa: u32,
    n: u32,
}

impl NonConvergenceAt {
    fn error(&self, iterations: usize) -> Error {
        Error::NonConvergence {
            kappa: self.kappa,
            n: self.n,
            iterations,
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn finish(
    kappa: u32,
    n: u32,
    a: HpReal,
    fa: HpReal,
    b: HpReal,
    fb: Option<HpReal>,
    target: &HpReal,
    iterations: usize,
) -> Result<HpReal> {
    if fa.abs() < *target {
        return Ok(a);
    }
    if let Some(fb) = fb {
        if fb.abs() < *target {
            return Ok(b);
        }
    }
    Err(Error::NonConvergence { kappa, n, iterations })
}
