//! Published verdicts, coefficient vectors and polynomials used as oracles.

use serde::{Deserialize, Serialize};

/// A published valid/invalid verdict for an index set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaVerdictRecord {
    pub kappa: u32,
    pub band: u32,
    pub indices: Vec<u32>,
    pub expected_valid: bool,
}

/// A published solution of `Mρ = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PublishedRho {
    pub kappa: u32,
    pub band: u32,
    pub indices: Vec<u32>,
    pub rho: Vec<f64>,
    /// Entries are exact fractions rather than rounded decimals.
    pub exact: bool,
}

/// Coefficients of a published annihilating polynomial, ascending degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolyCoefficients {
    Rational(Vec<i64>),
    /// `(a, b)` stands for `a + b√2`.
    QuadraticSqrt2(Vec<(i64, i64)>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublishedPolynomial {
    pub kappa: u32,
    pub band: u32,
    pub coefficients: PolyCoefficients,
    /// Factor applied to the printed polynomial to clear denominators.
    pub scale: i64,
}

fn multiples(kappa: u32, count: u32) -> Vec<u32> {
    (1..=count).map(|j| j * kappa).collect()
}

fn with_tail(mut base: Vec<u32>, tail: &[u32]) -> Vec<u32> {
    base.extend_from_slice(tail);
    base
}

/// Every published verdict.
pub fn sigma_verdicts() -> Vec<SigmaVerdictRecord> {
    let mut out = Vec::new();
    let mut push = |kappa, band, indices: Vec<u32>, expected_valid| {
        out.push(SigmaVerdictRecord {
            kappa,
            band,
            indices,
            expected_valid,
        })
    };

    // κ = 4, the index sets used band by band
    push(4, 1, vec![4, 8], true);
    for s in [[4, 8, 12, 24], [4, 8, 12, 28], [4, 8, 12, 32], [4, 8, 16, 24]] {
        push(4, 2, s.to_vec(), true);
    }
    for s in [[4, 8, 12, 16], [4, 8, 12, 20], [4, 8, 16, 20]] {
        push(4, 2, s.to_vec(), false);
    }
    push(4, 3, vec![4, 8, 12, 16, 24, 36], true);
    push(4, 3, vec![4, 8, 12, 16, 20, 24], true);
    push(4, 4, vec![4, 8, 12, 16, 20, 24, 28, 52], true);
    push(4, 5, multiples(4, 10), true);

    // κ = 3, band 5
    push(3, 5, multiples(3, 10), true);

    // κ = 2, bands 5–9: a fixed base plus a pair (α, β)
    let pairs: [(u32, u32, &[(u32, u32)], &[(u32, u32)]); 4] = [
        (
            5,
            8,
            &[(18, 20), (20, 24), (22, 24), (24, 28), (24, 32), (28, 32)],
            &[(18, 24), (18, 26), (18, 28)],
        ),
        (6, 10, &[(22, 28), (22, 30)], &[(22, 24), (22, 26)]),
        (7, 12, &[(26, 28)], &[(28, 36)]),
        (8, 14, &[(30, 38), (30, 40)], &[(30, 32), (30, 36)]),
    ];
    for (band, base_len, valid, invalid) in pairs {
        for (list, verdict) in [(valid, true), (invalid, false)] {
            for &(a, b) in list {
                push(2, band, with_tail(multiples(2, base_len), &[a, b]), verdict);
            }
        }
    }
    push(2, 9, multiples(2, 18), true);
    out
}

/// Published coefficient vectors, `ρ_first = 1`.
pub fn published_rho_vectors() -> Vec<PublishedRho> {
    let rec = |kappa, band, indices: Vec<u32>, rho: Vec<f64>, exact| PublishedRho {
        kappa,
        band,
        indices,
        rho,
        exact,
    };
    vec![
        rec(2, 1, vec![2, 4], vec![1.0, 9.0 / 14.0], true),
        rec(4, 1, vec![4, 8], vec![1.0, 625.0 / 1054.0], true),
        rec(
            3,
            5,
            multiples(3, 10),
            vec![1.0, 1.599931, 1.645307, 1.27734, 0.77838, 0.37292, 0.13741, 0.03703, 0.00657, 0.00058],
            false,
        ),
        rec(4, 2, vec![4, 8, 12, 24], vec![1.0, 0.81070, 0.21647, -0.06593], false),
        rec(
            4,
            3,
            vec![4, 8, 12, 16, 24, 36],
            vec![1.0, 1.18290, 0.68875, 0.18594, -0.00794, -0.00288],
            false,
        ),
        rec(
            4,
            3,
            vec![4, 8, 12, 16, 20, 24],
            vec![1.0, 1.37002, 1.06973, 0.53992, 0.16964, 0.02655],
            false,
        ),
        rec(
            4,
            4,
            vec![4, 8, 12, 16, 20, 24, 28, 52],
            vec![1.0, 1.46864, 1.29941, 0.80098, 0.34657, 0.09808, 0.01417, 0.000030],
            false,
        ),
        rec(
            4,
            5,
            multiples(4, 10),
            vec![1.0, 1.58691, 1.60962, 1.22543, 0.72779, 0.33759, 0.11956, 0.03071, 0.00514, 0.00042],
            false,
        ),
    ]
}

/// Published polynomials annihilating band endpoints.
pub fn published_polynomials() -> Vec<PublishedPolynomial> {
    use PolyCoefficients::*;
    vec![
        PublishedPolynomial {
            kappa: 3,
            band: 5,
            coefficients: Rational(vec![4, -220, 4333, -36442, 128593, -270784, 536359, -750010, 372775]),
            scale: 1,
        },
        PublishedPolynomial {
            kappa: 4,
            band: 3,
            coefficients: Rational(vec![16, -64, 56, -112, 65]),
            scale: 1,
        },
        PublishedPolynomial {
            kappa: 4,
            band: 4,
            // 5E⁴ − (2√2+4)E³ + (5 − 4√2)E² + (√2 − 2)E + 1/4, times 4
            coefficients: QuadraticSqrt2(vec![(1, 0), (-8, 4), (20, -16), (-16, -8), (20, 0)]),
            scale: 4,
        },
        PublishedPolynomial {
            kappa: 4,
            band: 5,
            coefficients: Rational(vec![-32768, 22784, -6048, 3825]),
            scale: 1,
        },
        PublishedPolynomial {
            kappa: 4,
            band: 6,
            // 384E⁶ − (448 + 224√2)E⁵ + … + 1/8, times 8
            coefficients: QuadraticSqrt2(vec![
                (1, 0),
                (-16, -8),
                (128, 96),
                (-576, -416),
                (1600, 1024),
                (-3584, -1792),
                (3072, 0),
            ]),
            scale: 8,
        },
    ]
}
