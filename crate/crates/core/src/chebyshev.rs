//! Chebyshev polynomials of both kinds, the level-set branch step of `T_κ`, and the
//! two-point Bezoutian bracket.
//!
//! Inside `(-1, 1)` away from the endpoints the polynomials are evaluated from their
//! trigonometric closed forms; within `1e-8` of `±1` (and outside the interval) the
//! three-term recurrence is used, which stays exact where `sin(arccos x) → 0`.

use crate::error::{Error, Result};
use crate::real::Real;

/// Degree `n` of `T_n` or `U_n`.
pub type ChebIndex = u32;

const ENDPOINT_WINDOW: f64 = 1.0 - 1e-8;

/// `T_n(x)`.
pub fn cheb_t(n: ChebIndex, x: f64) -> f64 {
    if x.abs() > ENDPOINT_WINDOW {
        t_recurrence(n, x)
    } else {
        (f64::from(n) * x.acos()).cos()
    }
}

/// `U_n(x)`.
pub fn cheb_u(n: ChebIndex, x: f64) -> f64 {
    if x.abs() > ENDPOINT_WINDOW {
        u_recurrence(n, x)
    } else {
        let theta = x.acos();
        (f64::from(n + 1) * theta).sin() / theta.sin()
    }
}

fn t_recurrence(n: ChebIndex, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, x);
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        (prev, cur) = (cur, 2.0 * x * cur - prev);
    }
    cur
}

fn u_recurrence(n: ChebIndex, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * x);
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        (prev, cur) = (cur, 2.0 * x * cur - prev);
    }
    cur
}

/// Values `U_0(x), …, U_{n}(x)` from a single recurrence pass.
pub fn cheb_u_table(n: ChebIndex, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n as usize + 1);
    out.push(1.0);
    if n >= 1 {
        out.push(2.0 * x);
    }
    for k in 2..=n as usize {
        let next = 2.0 * x * out[k - 1] - out[k - 2];
        out.push(next);
    }
    out
}

/// `dU_n/dx`.
///
/// Uses `((n+1)T_{n+1}(x) − x U_n(x)) / (x² − 1)` for `|x| < 0.9`. Closer to `±1` the
/// quotient loses digits to cancellation, so the derivative recurrence
/// `U'_{k+1} = 2U_k + 2x U'_k − U'_{k−1}` is run instead; at `x = ±1` it reproduces the
/// limit `(±1)^{n+1} n(n+1)(n+2)/3`.
pub fn cheb_u_deriv(n: ChebIndex, x: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    if x.abs() < 0.9 {
        let nf = f64::from(n);
        return ((nf + 1.0) * cheb_t(n + 1, x) - x * cheb_u(n, x)) / (x * x - 1.0);
    }
    let (mut u_prev, mut u_cur) = (1.0, 2.0 * x);
    let (mut d_prev, mut d_cur) = (0.0, 2.0);
    for _ in 1..n {
        let d_next = 2.0 * u_cur + 2.0 * x * d_cur - d_prev;
        let u_next = 2.0 * x * u_cur - u_prev;
        (u_prev, u_cur) = (u_cur, u_next);
        (d_prev, d_cur) = (d_cur, d_next);
    }
    d_cur
}

/// Closed-form value of `U'_n(±1)`.
pub fn cheb_u_deriv_endpoint(n: ChebIndex, positive: bool) -> f64 {
    let nf = f64::from(n);
    let magnitude = nf * (nf + 1.0) * (nf + 2.0) / 3.0;
    if positive || n % 2 == 1 {
        magnitude
    } else {
        -magnitude
    }
}

/// One step along the level set `T_κ(x) = T_κ(E − Y)`.
///
/// Returns `Y = E − cos(2π/κ − arccos x)`, evaluated as
/// `E − x·cos(2π/κ) − sin(2π/κ)·√(1 − x²)`. The branch requires the angle
/// `2π/κ − arccos x` to lie in `[0, π]`, i.e. `cos(2π/κ) ≤ x ≤ 1`; anything else is
/// [`Error::OutOfBranch`].
pub fn branch_step<R: Real>(kappa: u32, energy: R, x: R) -> Result<R> {
    let (c, s) = x.level_angle(kappa);
    branch_step_with(kappa, &c, &s, energy, x)
}

/// [`branch_step`] with `(cos(2π/κ), sin(2π/κ))` supplied by the caller.
pub(crate) fn branch_step_with<R: Real>(kappa: u32, c: &R, s: &R, energy: R, x: R) -> Result<R> {
    let one = x.lift(1.0);
    if x > one || x < *c {
        return Err(Error::OutOfBranch {
            kappa,
            energy: energy.to_f64(),
            x: x.to_f64(),
        });
    }
    let root = (one - x.clone() * x.clone()).sqrt();
    Ok(energy - x * c.clone() - s.clone() * root)
}

/// Two-point Bezoutian bracket `f(x)g(y) − f(y)g(x)`.
pub fn bezout_bracket<F, G>(f: F, g: G, x: f64, y: f64) -> f64
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    f(x) * g(y) - f(y) * g(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn t4_at_half() {
        // 8x⁴ − 8x² + 1 at 1/2
        assert!(close(cheb_t(4, 0.5), -0.5, 1e-15));
        assert!(close(cheb_t(3, (PI / 3.0).cos()), -1.0, 1e-14));
        for n in 0..50 {
            assert!(close(cheb_t(n, 1.0), 1.0, 0.0));
        }
    }

    #[test]
    fn u_known_values() {
        assert!(close(cheb_u(7, FRAC_1_SQRT_2), 0.0, 1e-14));
        for kappa in 2..10u32 {
            let x = (PI / f64::from(kappa)).cos();
            assert!(close(cheb_u(kappa - 1, x), 0.0, 1e-13), "kappa={kappa}");
        }
        // 8x³ − 4x at 0.6 = 1.728 − 2.4
        assert!(close(cheb_u(3, 0.6), -0.672, 1e-14));
        // U_n(1) = n + 1
        assert!(close(cheb_u(9, 1.0), 10.0, 0.0));
        assert!(close(cheb_u(9, -1.0), -10.0, 0.0));
    }

    #[test]
    fn trig_and_recurrence_agree() {
        for n in 0..60 {
            for i in 0..200 {
                let x = -0.999 + 1.998 * f64::from(i) / 199.0;
                assert!(close(cheb_u(n, x), u_recurrence(n, x), 1e-11));
                assert!(close(cheb_t(n, x), t_recurrence(n, x), 1e-12));
            }
        }
    }

    #[test]
    fn u_table_matches_single_evaluations() {
        let table = cheb_u_table(40, 0.3);
        for (k, v) in table.iter().enumerate() {
            assert!(close(*v, cheb_u(k as u32, 0.3), 1e-12));
        }
    }

    #[test]
    fn u_deriv_values() {
        for x in [-1.0, -0.95, -0.2, 0.0, 0.5, 0.93, 1.0] {
            assert!(close(cheb_u_deriv(1, x), 2.0, 1e-14));
        }
        assert!(close(cheb_u_deriv(3, 0.0), -4.0, 1e-14));
        for n in 0..20 {
            assert!(close(cheb_u_deriv(n, 1.0), cheb_u_deriv_endpoint(n, true), 1e-9));
            assert!(close(cheb_u_deriv(n, -1.0), cheb_u_deriv_endpoint(n, false), 1e-9));
        }
    }

    #[test]
    fn u_deriv_continuous_across_switch() {
        for n in [5, 12, 31] {
            let a = cheb_u_deriv(n, 0.9 - 1e-12);
            let b = cheb_u_deriv(n, 0.9 + 1e-12);
            assert!(close(a, b, 1e-7 * a.abs().max(1.0)), "n={n}: {a} vs {b}");
        }
    }

    #[test]
    fn branch_step_examples() {
        let y = branch_step(3, 1.11207, 0.11207).unwrap();
        assert!(close(y, 0.30753, 5e-5));
        let y = branch_step(4, 1.54532, 0.54532).unwrap();
        assert!(close(y, FRAC_1_SQRT_2, 5e-5));
        for (e, x) in [(0.4, -0.6), (2.0 / 3.0, -1.0 / 3.0), (0.1, 0.85)] {
            assert!(close(branch_step(2, e, x).unwrap(), e + x, 1e-15));
        }
    }

    #[test]
    fn branch_step_rejects_out_of_branch() {
        // κ=3: branch needs x ≥ cos(2π/3) = −1/2
        assert!(matches!(branch_step(3, 1.2, -0.6), Err(Error::OutOfBranch { .. })));
        assert!(matches!(branch_step(3, 1.2, 1.01), Err(Error::OutOfBranch { .. })));
        assert!(branch_step(3, 1.2, -0.4999).is_ok());
    }

    #[test]
    fn branch_step_matches_trig_form() {
        for kappa in 2..10u32 {
            let a = 2.0 * PI / f64::from(kappa);
            for i in 0..50 {
                let x = a.cos() + (1.0 - a.cos()) * f64::from(i) / 49.0;
                let trig = 1.3 - (a - x.acos()).cos();
                assert!(close(branch_step(kappa, 1.3, x).unwrap(), trig, 1e-13));
            }
        }
    }

    #[test]
    fn bezout_examples() {
        let u1 = |x| cheb_u(1, x);
        let u3 = |x| cheb_u(3, x);
        assert!(close(bezout_bracket(u1, u1, 0.2, 0.7), 0.0, 0.0));
        assert!(close(bezout_bracket(u1, u3, -1.0 / 3.0, 1.0 / 3.0), 0.0, 1e-15));
        for j in 1..6u32 {
            for l in 1..6u32 {
                // points (x, √(1−x²)) lie on the T_4 level set x² + y² = 1
                let f = |x: f64| cheb_u(4 * j - 1, x);
                let g = |x: f64| cheb_u(4 * l - 1, x);
                for i in 0..101 {
                    let x = f64::from(i) / 100.0;
                    let v = bezout_bracket(f, g, x, (1.0 - x * x).sqrt());
                    assert!(close(v, 0.0, 1e-10), "j={j} l={l} x={x}: {v}");
                }
            }
        }
    }

    #[test]
    fn u_relation_at_sqrt_two_thirds() {
        let a = (2.0f64 / 3.0).sqrt();
        let b = (1.0f64 / 3.0).sqrt();
        for j in 1..=10 {
            let lhs = cheb_u(4 * j - 1, a);
            let rhs = -(2.0f64).sqrt() * cheb_u(4 * j - 1, b);
            assert!(close(lhs, rhs, 1e-10), "j={j}");
        }
    }
}
