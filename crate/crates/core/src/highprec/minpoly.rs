use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::lll::lll_reduce;
use crate::error::{Error, Result};
use crate::real::HpReal;

/// Coefficient field of a polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NumberField {
    Rational,
    /// Coefficients `a + b√2`.
    QuadraticSqrt2,
}

/// A primitive integer polynomial annihilating a computed threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinPolyResult {
    /// Ascending degree.
    pub coefficients: Vec<i64>,
    pub degree: usize,
    /// `|mp(value)|`.
    pub residual: f64,
    /// Upper bound on `log2 |mp(value)|`; `None` when the evaluation is exactly zero.
    pub residual_log2: Option<i64>,
    pub field: NumberField,
    /// Rational roots found by trial division (empty for an irreducible polynomial of
    /// degree ≥ 2).
    pub rational_roots: Vec<(i64, i64)>,
}

/// Powers `1, v, …, v^d` at the precision of `v`.
fn powers(value: &HpReal, degree: usize) -> Vec<HpReal> {
    let mut out = Vec::with_capacity(degree + 1);
    out.push(HpReal::from_i64(1, value.precision()));
    for i in 1..=degree {
        let next = out[i - 1].clone() * value.clone();
        out.push(next);
    }
    out
}

/// Searches for the lowest-degree primitive integer polynomial with root `value`.
///
/// For each degree `d ≤ max_degree` the lattice spanned by the rows
/// `[e_i | round(2^bits · value^i)]` is LLL-reduced. A reduced row is accepted as a
/// relation only if `|p(value)|`, evaluated at the full precision of `value`, sits at
/// least `bits/2` binary digits below the lattice noise floor `2^−bits · max_i |c_i value^i|`.
/// Spurious lattice vectors sit right at that floor, so `value` must carry at least
/// `2·bits` bits.
pub fn find_min_poly(value: &HpReal, max_degree: usize, bits: usize) -> Result<MinPolyResult> {
    if value.precision() < 2 * bits {
        return Err(Error::InsufficientPrecision {
            have: value.precision(),
            need: 2 * bits,
        });
    }
    if max_degree == 0 {
        return Err(Error::InvalidArgument("max_degree must be >= 1".into()));
    }
    let pw = powers(value, max_degree);
    let required_drop = (bits + bits / 2) as i64;

    for degree in 1..=max_degree {
        let mut basis: Vec<Vec<BigInt>> = (0..=degree)
            .map(|i| {
                let mut row = vec![BigInt::zero(); degree + 2];
                row[i] = BigInt::one();
                row[degree + 1] = pw[i].scaled_round(bits);
                row
            })
            .collect();
        if !lll_reduce(&mut basis) {
            continue;
        }
        for row in &basis {
            let coeffs = &row[..=degree];
            if coeffs[degree].is_zero() {
                continue;
            }
            let Some(small) = coeffs.iter().map(|c| c.to_i64()).collect::<Option<Vec<i64>>>() else {
                continue;
            };
            let (residual, terms) = evaluate(&small, &pw);
            let accepted = match (residual.log2_magnitude(), terms) {
                (None, _) => true,
                (Some(r), Some(t)) => t - r >= required_drop,
                (Some(_), None) => false,
            };
            if accepted {
                let coefficients = normalize(small);
                let (residual, _) = evaluate(&coefficients, &pw);
                return Ok(MinPolyResult {
                    degree,
                    residual: crate::real::Real::to_f64(&residual),
                    residual_log2: residual.log2_magnitude(),
                    rational_roots: rational_roots(&coefficients),
                    coefficients,
                    field: NumberField::Rational,
                });
            }
        }
    }
    Err(Error::NoRelation { max_degree })
}

/// `(|p(v)|, log2 max_i |c_i v^i|)`.
fn evaluate(coeffs: &[i64], pw: &[HpReal]) -> (HpReal, Option<i64>) {
    let p = pw[0].precision();
    let mut acc = HpReal::from_i64(0, p);
    let mut largest: Option<i64> = None;
    for (c, x) in coeffs.iter().zip(pw) {
        if *c == 0 {
            continue;
        }
        let term = HpReal::from_i64(*c, p) * x.clone();
        largest = largest.max(term.log2_magnitude());
        acc = acc + term;
    }
    (acc.abs(), largest)
}

/// Divides out the content and makes the leading coefficient positive.
fn normalize(mut coeffs: Vec<i64>) -> Vec<i64> {
    while coeffs.len() > 1 && coeffs.last() == Some(&0) {
        coeffs.pop();
    }
    let g = coeffs.iter().fold(0i64, |g, c| g.gcd(c));
    let sign = if coeffs.last().copied().unwrap_or(1) < 0 { -1 } else { 1 };
    if g != 0 {
        for c in &mut coeffs {
            *c = *c / g * sign;
        }
    }
    coeffs
}

/// `|Σ c_i v^i|` for integer coefficients.
pub fn verify_poly_root(coefficients: &[i64], value: &HpReal) -> f64 {
    let pw = powers(value, coefficients.len().saturating_sub(1));
    crate::real::Real::to_f64(&evaluate(coefficients, &pw).0)
}

/// `|Σ (a_i + b_i√2) v^i|` for coefficients in `Z[√2]`.
pub fn verify_quadratic_root(coefficients: &[(i64, i64)], value: &HpReal) -> f64 {
    let p = value.precision();
    let sqrt2 = crate::real::Real::sqrt(&HpReal::from_i64(2, p));
    let pw = powers(value, coefficients.len().saturating_sub(1));
    let mut acc = HpReal::from_i64(0, p);
    for ((a, b), x) in coefficients.iter().zip(&pw) {
        let c = HpReal::from_i64(*a, p) + HpReal::from_i64(*b, p) * sqrt2.clone();
        acc = acc + c * x.clone();
    }
    crate::real::Real::to_f64(&acc.abs())
}

/// Norm from `Z[√2][x]` down to `Z[x]`: `p(x) · p̄(x)` with `√2 ↦ −√2`.
pub fn quadratic_norm(coefficients: &[(i64, i64)]) -> Vec<i64> {
    let d = coefficients.len();
    let mut out = vec![0i64; 2 * d - 1];
    for (i, (a, b)) in coefficients.iter().enumerate() {
        for (j, (c, e)) in coefficients.iter().enumerate() {
            // (a + b√2)(c − e√2) = ac − 2be + (bc − ae)√2; the √2 parts cancel in the sum
            out[i + j] += a * c - 2 * b * e;
        }
    }
    out
}

fn divisors(n: i64) -> Vec<i64> {
    let n = n.unsigned_abs();
    let mut out = Vec::new();
    let mut k = 1u64;
    while k * k <= n {
        if n % k == 0 {
            out.push(k as i64);
            if k * k != n {
                out.push((n / k) as i64);
            }
        }
        k += 1;
    }
    out
}

/// Rational roots `p/q` (lowest terms, `q > 0`) of an integer polynomial, by the
/// rational root test.
pub fn rational_roots(coefficients: &[i64]) -> Vec<(i64, i64)> {
    let mut coeffs = coefficients.to_vec();
    let mut roots = Vec::new();
    while coeffs.len() > 1 && coeffs[0] == 0 {
        coeffs.remove(0);
        if !roots.contains(&(0, 1)) {
            roots.push((0, 1));
        }
    }
    if coeffs.len() < 2 {
        return roots;
    }
    let lead = *coeffs.last().expect("nonempty");
    for p in divisors(coeffs[0]) {
        for q in divisors(lead) {
            if p.gcd(&q) != 1 {
                continue;
            }
            for p in [p, -p] {
                if eval_rational(&coeffs, p, q).is_zero() {
                    roots.push((p, q));
                }
            }
        }
    }
    roots.sort_unstable();
    roots.dedup();
    roots
}

/// `q^d · p(p/q)` in exact arithmetic.
fn eval_rational(coeffs: &[i64], p: i64, q: i64) -> BigInt {
    let d = coeffs.len() - 1;
    let (p, q) = (BigInt::from(p), BigInt::from(q));
    coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| BigInt::from(*c) * num_traits::pow(p.clone(), i) * num_traits::pow(q.clone(), d - i))
        .sum()
}

/// Whether `coefficients` divided by its content is still integral with positive lead.
pub fn is_primitive(coefficients: &[i64]) -> bool {
    let g = coefficients.iter().fold(0i64, |g, c| g.gcd(c));
    g == 1 && coefficients.last().is_some_and(|c| c.is_positive())
}
