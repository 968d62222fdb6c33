//! Binary fixed-point reals: a `BigInt` mantissa over `2^frac`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::lincomb::Q;

/// The value `m / 2^frac`. Arithmetic between two reals requires equal
/// `frac`; products and quotients are truncated toward negative infinity.
#[derive(Clone, PartialEq, Eq)]
pub struct Real {
    m: BigInt,
    frac: u32,
}

impl Real {
    pub fn zero(frac: u32) -> Self {
        Real { m: BigInt::zero(), frac }
    }

    pub fn one(frac: u32) -> Self {
        Real { m: BigInt::one() << frac, frac }
    }

    pub fn from_int(n: i64, frac: u32) -> Self {
        Real { m: BigInt::from(n) << frac, frac }
    }

    pub fn from_q(x: &Q, frac: u32) -> Self {
        let num: BigInt = x.numer().clone() << frac;
        Real { m: floor_div(&num, x.denom()), frac }
    }

    /// `2^e`, exact as long as `-e <= frac`.
    pub fn pow2(e: i64, frac: u32) -> Self {
        let shift = e + i64::from(frac);
        let m = if shift < 0 { BigInt::zero() } else { BigInt::one() << shift as u64 };
        Real { m, frac }
    }

    pub fn frac_bits(&self) -> u32 {
        self.frac
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.m
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn abs(&self) -> Real {
        Real { m: self.m.abs(), frac: self.frac }
    }

    /// Re-expresses the value with `frac` fractional bits.
    pub fn with_frac(&self, frac: u32) -> Real {
        let m = if frac >= self.frac {
            &self.m << (frac - self.frac)
        } else {
            &self.m >> (self.frac - frac)
        };
        Real { m, frac }
    }

    pub fn mul_int(&self, n: i64) -> Real {
        Real { m: &self.m * n, frac: self.frac }
    }

    pub fn mul_q(&self, c: &Q) -> Real {
        let num = &self.m * c.numer();
        Real { m: floor_div(&num, c.denom()), frac: self.frac }
    }

    pub fn div_int(&self, n: u64) -> Real {
        Real { m: floor_div(&self.m, &BigInt::from(n)), frac: self.frac }
    }

    pub fn half(&self) -> Real {
        Real { m: &self.m >> 1u32, frac: self.frac }
    }

    pub fn div(&self, other: &Real) -> Real {
        assert_eq!(self.frac, other.frac);
        let num: BigInt = &self.m << self.frac;
        Real { m: floor_div(&num, &other.m), frac: self.frac }
    }

    /// `|self| < 2^{-bits}`.
    pub fn abs_below_pow2(&self, bits: u32) -> bool {
        if bits >= self.frac {
            return self.m.is_zero();
        }
        let limit = BigInt::one() << (self.frac - bits);
        self.m.abs() < limit
    }

    /// `log2 |self|` rounded down, or `None` for zero.
    pub fn log2_abs(&self) -> Option<i64> {
        if self.m.is_zero() {
            None
        } else {
            Some(self.m.bits() as i64 - 1 - i64::from(self.frac))
        }
    }

    pub fn to_f64(&self) -> f64 {
        let bits = self.m.bits();
        if bits <= 1000 {
            self.m.to_f64().unwrap_or(f64::NAN) / 2f64.powi(self.frac as i32)
        } else {
            let drop = bits - 60;
            let top = (&self.m >> drop).to_f64().unwrap_or(f64::NAN);
            top * 2f64.powf(drop as f64 - f64::from(self.frac))
        }
    }

    /// Decimal expansion truncated to `digits` places after the point.
    pub fn to_decimal(&self, digits: usize) -> String {
        let neg = self.m.sign() == Sign::Minus;
        let scaled: BigInt = self.m.abs() * BigInt::from(10u32).pow(digits as u32);
        let v = scaled >> self.frac;
        let s = v.to_string();
        let s = if s.len() <= digits { format!("{}{}", "0".repeat(digits + 1 - s.len()), s) } else { s };
        let (int, frac) = s.split_at(s.len() - digits);
        let sign = if neg { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }

    pub fn scientific(&self) -> String {
        format!("{:e}", self.to_f64())
    }
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    num_integer::Integer::div_floor(a, b)
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({})", self.to_decimal(30))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = (f64::from(self.frac) * std::f64::consts::LOG10_2) as usize;
        f.write_str(&self.to_decimal(f.precision().unwrap_or(digits)))
    }
}

impl Add<&Real> for &Real {
    type Output = Real;
    fn add(self, rhs: &Real) -> Real {
        assert_eq!(self.frac, rhs.frac);
        Real { m: &self.m + &rhs.m, frac: self.frac }
    }
}

impl Sub<&Real> for &Real {
    type Output = Real;
    fn sub(self, rhs: &Real) -> Real {
        assert_eq!(self.frac, rhs.frac);
        Real { m: &self.m - &rhs.m, frac: self.frac }
    }
}

impl Mul<&Real> for &Real {
    type Output = Real;
    fn mul(self, rhs: &Real) -> Real {
        assert_eq!(self.frac, rhs.frac);
        Real { m: (&self.m * &rhs.m) >> self.frac, frac: self.frac }
    }
}

impl Add for Real {
    type Output = Real;
    fn add(self, rhs: Real) -> Real {
        &self + &rhs
    }
}

impl Sub for Real {
    type Output = Real;
    fn sub(self, rhs: Real) -> Real {
        &self - &rhs
    }
}

impl Mul for Real {
    type Output = Real;
    fn mul(self, rhs: Real) -> Real {
        &self * &rhs
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real { m: -self.m, frac: self.frac }
    }
}

impl AddAssign<&Real> for Real {
    fn add_assign(&mut self, rhs: &Real) {
        assert_eq!(self.frac, rhs.frac);
        self.m += &rhs.m;
    }
}

impl SubAssign<&Real> for Real {
    fn sub_assign(&mut self, rhs: &Real) {
        assert_eq!(self.frac, rhs.frac);
        self.m -= &rhs.m;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lincomb::q_frac;

    #[test]
    fn arithmetic() {
        let a = Real::from_q(&q_frac(3, 4), 64);
        let b = Real::from_int(2, 64);
        assert_eq!((&a * &b).to_decimal(3), "1.500");
        assert_eq!((&a - &b).to_decimal(2), "-1.25");
        assert_eq!(b.div(&Real::from_int(8, 64)).to_decimal(4), "0.2500");
        assert_eq!(Real::one(10).div_int(3).to_f64(), 341.0 / 1024.0);
        assert_eq!(a.mul_q(&q_frac(2, 3)).to_decimal(1), "0.5");
    }

    #[test]
    fn magnitude_checks() {
        let x = Real::pow2(-20, 64);
        assert!(x.abs_below_pow2(19));
        assert!(!x.abs_below_pow2(20));
        assert_eq!(x.log2_abs(), Some(-20));
        assert_eq!(Real::zero(8).log2_abs(), None);
        assert!(Real::zero(8).abs_below_pow2(100));
        assert_eq!(Real::from_int(5, 8).with_frac(16).to_f64(), 5.0);
    }

    #[test]
    fn decimal_formatting() {
        assert_eq!(Real::from_q(&q_frac(1, 8), 32).to_decimal(3), "0.125");
        assert_eq!(Real::from_int(-3, 8).to_decimal(0), "-3");
        assert_eq!(format!("{:.2}", Real::from_q(&q_frac(1, 3), 40)), "0.33");
    }
}
