//! Exact integral LLL reduction (Cohen, Algorithm 2.6.7), all arithmetic over `BigInt`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Lovász parameter `δ = DELTA_NUM / DELTA_DEN`.
const DELTA_NUM: i64 = 99;
const DELTA_DEN: i64 = 100;

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Nearest integer to `num / den` for `den > 0`, ties rounded up.
fn round_div(num: &BigInt, den: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    (num * &two + den).div_floor(&(den * two))
}

/// Reduces the rows of `basis` in place. Rows must be linearly independent; returns
/// `false` if a dependency shows up (a zero Gram determinant).
pub fn lll_reduce(basis: &mut [Vec<BigInt>]) -> bool {
    let n = basis.len();
    if n < 2 {
        return true;
    }
    // d[0] = 1, d[i] = Gram determinant of the first i rows (1-based as in the algorithm)
    let mut d: Vec<BigInt> = vec![BigInt::zero(); n + 1];
    let mut lambda: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); n]; n];
    d[0] = BigInt::from(1);
    d[1] = dot(&basis[0], &basis[0]);
    if d[1].is_zero() {
        return false;
    }
    let mut k = 1usize; // 0-based index of the row being processed
    let mut k_max = 0usize;

    while k < n {
        if k > k_max {
            k_max = k;
            for j in 0..=k {
                let mut u = dot(&basis[k], &basis[j]);
                for i in 0..j {
                    u = (&d[i + 1] * &u - &lambda[k][i] * &lambda[j][i]) / &d[i];
                }
                if j < k {
                    lambda[k][j] = u;
                } else {
                    if u.is_zero() {
                        return false;
                    }
                    d[k + 1] = u;
                }
            }
        }
        reduce(basis, &mut lambda, &d, k, k - 1);
        let lhs = BigInt::from(DELTA_DEN) * &d[k + 1] * &d[k - 1];
        let rhs = BigInt::from(DELTA_NUM) * &d[k] * &d[k]
            - BigInt::from(DELTA_DEN) * &lambda[k][k - 1] * &lambda[k][k - 1];
        if lhs < rhs {
            swap(basis, &mut lambda, &mut d, k, k_max);
            k = (k - 1).max(1);
        } else {
            for l in (0..k - 1).rev() {
                reduce(basis, &mut lambda, &d, k, l);
            }
            k += 1;
        }
    }
    true
}

fn reduce(basis: &mut [Vec<BigInt>], lambda: &mut [Vec<BigInt>], d: &[BigInt], k: usize, l: usize) {
    let two_abs = lambda[k][l].abs() * 2;
    if two_abs <= d[l + 1] {
        return;
    }
    let q = round_div(&lambda[k][l], &d[l + 1]);
    let row_l = basis[l].clone();
    for (a, b) in basis[k].iter_mut().zip(&row_l) {
        *a -= &q * b;
    }
    lambda[k][l] -= &q * &d[l + 1];
    for i in 0..l {
        let t = &q * &lambda[l][i];
        lambda[k][i] -= t;
    }
}

fn swap(basis: &mut [Vec<BigInt>], lambda: &mut [Vec<BigInt>], d: &mut [BigInt], k: usize, k_max: usize) {
    basis.swap(k, k - 1);
    for j in 0..k - 1 {
        let t = lambda[k][j].clone();
        lambda[k][j] = lambda[k - 1][j].clone();
        lambda[k - 1][j] = t;
    }
    let lam = lambda[k][k - 1].clone();
    let b = (&d[k - 1] * &d[k + 1] + &lam * &lam) / &d[k];
    for i in k + 1..=k_max {
        let t = lambda[i][k].clone();
        lambda[i][k] = (&d[k + 1] * &lambda[i][k - 1] - &lam * &t) / &d[k];
        lambda[i][k - 1] = (&b * &t + &lam * &lambda[i][k]) / &d[k + 1];
    }
    d[k] = b;
}
