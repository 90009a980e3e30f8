//! Scalar abstraction shared by the double-precision and extended-precision chain solvers.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, RoundingMode, Sign, Word};
use num_bigint::{BigInt, BigUint};

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

/// Minimal real-number interface needed to walk a Chebyshev chain.
pub trait Real:
    Clone
    + fmt::Debug
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// A constant carrying the same precision as `self`.
    fn lift(&self, v: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn sqrt(&self) -> Self;
    /// `(cos(2π/κ), sin(2π/κ))` at the precision of `self`.
    fn level_angle(&self, kappa: u32) -> (Self, Self);
    /// `cos(π/κ)` at the precision of `self`.
    fn cos_pi_over(&self, kappa: u32) -> Self;

    fn zero_like(&self) -> Self {
        self.lift(0.0)
    }
}

impl Real for f64 {
    fn lift(&self, v: f64) -> Self {
        v
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }

    fn level_angle(&self, kappa: u32) -> (Self, Self) {
        // exact zeros where the angle is π or π/2
        match kappa {
            2 => (-1.0, 0.0),
            4 => (0.0, 1.0),
            _ => {
                let a = 2.0 * std::f64::consts::PI / f64::from(kappa);
                (a.cos(), a.sin())
            }
        }
    }

    fn cos_pi_over(&self, kappa: u32) -> Self {
        match kappa {
            2 => 0.0,
            _ => (std::f64::consts::PI / f64::from(kappa)).cos(),
        }
    }
}

/// Binary floating-point number with a fixed mantissa length, backed by `astro-float`.
#[derive(Clone)]
pub struct HpReal {
    value: BigFloat,
    precision: usize,
}

impl HpReal {
    pub fn from_f64(v: f64, precision: usize) -> Self {
        Self {
            value: BigFloat::from_f64(v, precision),
            precision,
        }
    }

    pub fn from_i64(v: i64, precision: usize) -> Self {
        Self {
            value: BigFloat::from_i64(v, precision),
            precision,
        }
    }

    pub fn from_bigint(v: &BigInt, precision: usize) -> Self {
        let (sign, digits) = v.to_u64_digits();
        if digits.is_empty() {
            return Self::from_i64(0, precision);
        }
        let words: Vec<Word> = digits.iter().map(|&d| d as Word).collect();
        let bits = (words.len() * Word::BITS as usize) as i32;
        let s = if sign == num_bigint::Sign::Minus {
            Sign::Neg
        } else {
            Sign::Pos
        };
        let exact = BigFloat::from_words(&words, s, bits);
        let mut value = exact.clone();
        value.set_precision(precision.max(exact.mantissa_max_bit_len().unwrap_or(0)), RM)
            .expect("precision");
        let mut out = Self { value, precision };
        out.round_to_precision();
        out
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn pi(precision: usize) -> Self {
        let value = CONSTS.with(|c| c.borrow_mut().pi(precision, RM));
        Self { value, precision }
    }

    pub fn cos(&self) -> Self {
        let value = CONSTS.with(|c| self.value.cos(self.precision, RM, &mut c.borrow_mut()));
        Self::wrap(value, self.precision)
    }

    pub fn sin(&self) -> Self {
        let value = CONSTS.with(|c| self.value.sin(self.precision, RM, &mut c.borrow_mut()));
        Self::wrap(value, self.precision)
    }

    pub fn cbrt(&self) -> Self {
        Self::wrap(self.value.cbrt(self.precision, RM), self.precision)
    }

    pub fn abs(&self) -> Self {
        Self::wrap(self.value.abs(), self.precision)
    }

    pub fn powi(&self, n: usize) -> Self {
        Self::wrap(self.value.powi(n, self.precision, RM), self.precision)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.value.is_negative()
    }

    /// Same value, rounded (or zero-extended) to `precision` bits.
    pub fn with_precision(&self, precision: usize) -> Self {
        let mut value = self.value.clone();
        value.set_precision(precision, RM).expect("precision");
        Self { value, precision }
    }

    /// Upper bound on `log2 |self|`; `None` for zero.
    pub fn log2_magnitude(&self) -> Option<i64> {
        if self.value.is_zero() {
            None
        } else {
            self.value.exponent().map(i64::from)
        }
    }

    /// `round(self · 2^shift)` as an exact integer.
    pub fn scaled_round(&self, shift: usize) -> BigInt {
        let Some((words, _, sign, exponent, _)) = self.value.as_raw_parts() else {
            return BigInt::from(0);
        };
        if self.value.is_zero() {
            return BigInt::from(0);
        }
        let digits: Vec<u64> = words.iter().map(|&w| w as u64).collect();
        let mantissa = BigUint::from_slice(
            &digits
                .iter()
                .flat_map(|d| [(*d & 0xffff_ffff) as u32, (*d >> 32) as u32])
                .collect::<Vec<_>>(),
        );
        // value = mantissa · 2^(exponent − 64·len)
        let e = i64::from(exponent) - 64 * digits.len() as i64 + shift as i64;
        let magnitude = if e >= 0 {
            mantissa << (e as usize)
        } else {
            let down = (-e) as usize;
            let half = BigUint::from(1u8) << (down - 1);
            (mantissa + half) >> down
        };
        let out = BigInt::from(magnitude);
        if sign == Sign::Neg {
            -out
        } else {
            out
        }
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        let s = self.value.to_string();
        // astro-float prints d.ddddde±x; trim the mantissa
        match s.split_once('e') {
            Some((mantissa, exp)) => {
                let keep: String = mantissa.chars().take(digits + 2).collect();
                format!("{keep}e{exp}")
            }
            None => s,
        }
    }

    fn wrap(value: BigFloat, precision: usize) -> Self {
        Self { value, precision }
    }

    fn round_to_precision(&mut self) {
        let _ = self.value.set_precision(self.precision, RM);
    }
}

impl fmt::Debug for HpReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HpReal({}, {} bits)", self.to_decimal(40), self.precision)
    }
}

impl fmt::Display for HpReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = (self.precision as f64 * std::f64::consts::LOG10_2) as usize;
        f.write_str(&self.to_decimal(digits))
    }
}

impl PartialEq for HpReal {
    fn eq(&self, other: &Self) -> bool {
        self.value.partial_cmp(&other.value) == Some(Ordering::Equal)
    }
}

impl PartialOrd for HpReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.partial_cmp(&other.value)
    }
}

macro_rules! hp_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for HpReal {
            type Output = HpReal;
            fn $method(self, rhs: HpReal) -> HpReal {
                let p = self.precision.max(rhs.precision);
                HpReal::wrap(self.value.$method(&rhs.value, p, RM), p)
            }
        }
    };
}

hp_binop!(Add, add);
hp_binop!(Sub, sub);
hp_binop!(Mul, mul);
hp_binop!(Div, div);

impl Neg for HpReal {
    type Output = HpReal;
    fn neg(self) -> HpReal {
        HpReal::wrap(self.value.neg(), self.precision)
    }
}

impl Real for HpReal {
    fn lift(&self, v: f64) -> Self {
        HpReal::from_f64(v, self.precision)
    }

    fn to_f64(&self) -> f64 {
        if self.value.is_zero() {
            return 0.0;
        }
        let Some((words, _, sign, exponent, _)) = self.value.as_raw_parts() else {
            return f64::NAN;
        };
        let top = words[words.len() - 1] as u64;
        let next = if words.len() > 1 {
            words[words.len() - 2] as u64
        } else {
            0
        };
        let e = i32::try_from(exponent).unwrap_or(i32::MAX);
        let m = top as f64 * 2f64.powi(-64) + next as f64 * 2f64.powi(-128);
        let v = m * 2f64.powi(e);
        if sign == Sign::Neg {
            -v
        } else {
            v
        }
    }

    fn sqrt(&self) -> Self {
        Self::wrap(self.value.sqrt(self.precision, RM), self.precision)
    }

    fn level_angle(&self, kappa: u32) -> (Self, Self) {
        let angle = HpReal::pi(self.precision) * self.lift(2.0) / self.lift(f64::from(kappa));
        (angle.cos(), angle.sin())
    }

    fn cos_pi_over(&self, kappa: u32) -> Self {
        (HpReal::pi(self.precision) / self.lift(f64::from(kappa))).cos()
    }
}
