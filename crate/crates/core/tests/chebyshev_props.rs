use std::f64::consts::PI;

use proptest::prelude::*;
use threshold_lab::chebyshev::{branch_step, cheb_t, cheb_u, cheb_u_deriv, cheb_u_table};

/// Three-term recurrence, written out independently of the library.
fn u_ref(n: u32, x: f64) -> f64 {
    let (mut a, mut b) = (1.0, 2.0 * x);
    if n == 0 {
        return a;
    }
    for _ in 1..n {
        (a, b) = (b, 2.0 * x * b - a);
    }
    b
}

fn t_ref(n: u32, x: f64) -> f64 {
    let (mut a, mut b) = (1.0, x);
    if n == 0 {
        return a;
    }
    for _ in 1..n {
        (a, b) = (b, 2.0 * x * b - a);
    }
    b
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn pell_identity(n in 1u32..=40, x in -2.0f64..=2.0) {
        let t = cheb_t(n, x);
        let u = cheb_u(n - 1, x);
        let lhs = t * t - (x * x - 1.0) * u * u;
        let scale = (t * t).max(1.0);
        prop_assert!((lhs - 1.0).abs() <= 1e-9 * scale, "n={n} x={x}: {lhs}");
    }

    #[test]
    fn level_set_identity(kappa in 2u32..=12, u in 0.0f64..=1.0, energy in -2.0f64..=2.0) {
        let c = (2.0 * PI / f64::from(kappa)).cos();
        let x = c + u * (1.0 - c);
        let y = branch_step(kappa, energy, x).unwrap();
        let d = (cheb_t(kappa, x) - cheb_t(kappa, energy - y)).abs();
        prop_assert!(d < 1e-12, "kappa={kappa} E={energy} x={x}: {d}");
    }

    #[test]
    fn branch_rejects_outside(kappa in 3u32..=12, u in 0.001f64..=1.0) {
        let c = (2.0 * PI / f64::from(kappa)).cos();
        let below = c - u * (1.0 + c);
        prop_assume!(below < c - 1e-9);
        prop_assert!(branch_step(kappa, 1.0, below).is_err());
        prop_assert!(branch_step(kappa, 1.0, 1.0 + u).is_err());
    }

    #[test]
    fn t4_factorization(x in -1.0f64..=1.0, y in -1.0f64..=1.0) {
        let lhs = cheb_t(4, x) - cheb_t(4, y);
        let rhs = 8.0 * (x - y) * (x + y) * (x * x + y * y - 1.0);
        prop_assert!((lhs - rhs).abs() < 1e-10);
    }

    #[test]
    fn matches_recurrence(n in 0u32..=60, x in -1.2f64..=1.2) {
        let scale = u_ref(n, x).abs().max(1.0) * f64::from(n + 1).powi(2);
        prop_assert!((cheb_u(n, x) - u_ref(n, x)).abs() <= 1e-13 * scale);
        prop_assert!((cheb_t(n, x) - t_ref(n, x)).abs() <= 1e-13 * scale);
        let table = cheb_u_table(n, x);
        prop_assert_eq!(table.len(), n as usize + 1);
        prop_assert!((table[n as usize] - u_ref(n, x)).abs() <= 1e-13 * scale);
    }

    #[test]
    fn trigonometric_form(n in 0u32..=60, theta in 0.01f64..(PI - 0.01)) {
        let want = (f64::from(n + 1) * theta).sin() / theta.sin();
        prop_assert!((cheb_u(n, theta.cos()) - want).abs() <= 1e-11 * f64::from(n + 1));
        let want = (f64::from(n) * theta).cos();
        prop_assert!((cheb_t(n, theta.cos()) - want).abs() <= 1e-12 * f64::from(n + 1));
    }

    #[test]
    fn derivative_matches_difference(n in 1u32..=30, x in -0.99f64..=0.99) {
        let h = 1e-6;
        let fd = (u_ref(n, x + h) - u_ref(n, x - h)) / (2.0 * h);
        let d = cheb_u_deriv(n, x);
        prop_assert!((d - fd).abs() <= 1e-4 * d.abs().max(1.0) + 1e-12 * f64::from(n).powi(7), "{d} {fd}");
    }
}

#[test]
fn t4_factorization_grid() {
    for i in 0..100 {
        for k in 0..100 {
            let x = -1.0 + 2.0 * f64::from(i) / 99.0;
            let y = -1.0 + 2.0 * f64::from(k) / 99.0;
            let lhs = cheb_t(4, x) - cheb_t(4, y);
            let rhs = 8.0 * (x - y) * (x + y) * (x * x + y * y - 1.0);
            assert!((lhs - rhs).abs() < 1e-10, "x={x} y={y}");
        }
    }
}

#[test]
fn sqrt_two_thirds_relation() {
    let a = (2.0f64 / 3.0).sqrt();
    let b = (1.0f64 / 3.0).sqrt();
    for j in 1..=10 {
        let m = 4 * j - 1;
        let lhs = cheb_u(m, a);
        let rhs = -2f64.sqrt() * cheb_u(m, b);
        assert!((lhs - rhs).abs() < 1e-10, "j={j}: {lhs} vs {rhs}");
    }
}
