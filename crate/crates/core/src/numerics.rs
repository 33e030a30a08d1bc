//! Numerical kernels shared by every module: exact fixed-point phases,
//! compensated summation and small regression helpers.

use std::f64::consts::TAU;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::Complex;

/// A point of the circle `ℝ/ℤ` stored as a 128-bit binary fraction.
///
/// Addition and integer multiplication wrap modulo `2^128`, which is exactly
/// reduction modulo one. Every finite `f64` with magnitude at least `2^-75`
/// converts without rounding, so phases such as `P(n)·α mod 1` are computed
/// exactly for any integer polynomial `P` and double `α`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Turns(pub u128);

const TWO_POW_128: f64 = 340_282_366_920_938_463_463_374_607_431_768_211_456.0;

impl Turns {
    pub const ZERO: Turns = Turns(0);
    pub const HALF: Turns = Turns(1 << 127);

    /// Reduces `x` modulo one. Non-finite input maps to zero; callers are
    /// expected to validate first.
    pub fn from_f64(x: f64) -> Turns {
        if !x.is_finite() || x == 0.0 {
            return Turns::ZERO;
        }
        let bits = x.to_bits();
        let negative = bits >> 63 == 1;
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let fraction = bits & ((1u64 << 52) - 1);
        let (mantissa, exponent) = if biased == 0 {
            (fraction, -1074)
        } else {
            (fraction | (1u64 << 52), biased - 1075)
        };
        // x = mantissa * 2^exponent; the fixed-point value is x * 2^128.
        let shift = exponent + 128;
        let raw = if shift >= 128 {
            0
        } else if shift >= 0 {
            (mantissa as u128) << shift
        } else if shift < -60 {
            0
        } else {
            let s = (-shift) as u32;
            ((mantissa as u128) + (1u128 << (s - 1))) >> s
        };
        let t = Turns(raw);
        if negative {
            -t
        } else {
            t
        }
    }

    /// `num/den mod 1`, rounded to the nearest multiple of `2^-128`.
    pub fn from_ratio(num: &BigInt, den: &BigInt) -> Turns {
        assert!(!den.is_zero(), "zero denominator");
        let (num, den) = if den.is_negative() {
            (-num, -den)
        } else {
            (num.clone(), den.clone())
        };
        let r = num.mod_floor(&den);
        let scaled: BigInt = (r << 128u32) + (&den >> 1u32);
        let q = scaled / &den;
        Turns(low_u128(&q))
    }

    pub fn from_integer_ratio(num: i128, den: u128) -> Turns {
        Turns::from_ratio(&BigInt::from(num), &BigInt::from(den))
    }

    /// Representative in `[0, 1)`.
    pub fn to_f64(self) -> f64 {
        (self.0 >> 75) as f64 * 2f64.powi(-53)
    }

    /// Representative in `[-1/2, 1/2)`.
    pub fn to_centered_f64(self) -> f64 {
        ((self.0 as i128) >> 75) as f64 * 2f64.powi(-53)
    }

    /// `e(self) = exp(2πi·self)`.
    pub fn expi(self) -> Complex {
        let (s, c) = (TAU * self.to_centered_f64()).sin_cos();
        Complex::new(c, s)
    }

    pub fn mul_int(self, k: i128) -> Turns {
        Turns(self.0.wrapping_mul(k as u128))
    }

    pub fn mul_u128(self, k: u128) -> Turns {
        Turns(self.0.wrapping_mul(k))
    }

    pub fn mul_big(self, k: &BigInt) -> Turns {
        Turns(self.0.wrapping_mul(low_u128(k)))
    }

    /// Distance to the nearest integer.
    pub fn dist_to_zero(self) -> f64 {
        self.to_centered_f64().abs()
    }

    /// Raw value as a fraction of `2^128`, for diagnostics.
    pub fn as_unit_f64(self) -> f64 {
        self.0 as f64 / TWO_POW_128
    }
}

/// `k mod 2^128` as an unsigned word (two's complement for negative `k`).
pub(crate) fn low_u128(k: &BigInt) -> u128 {
    let (sign, digits) = k.to_u64_digits();
    let lo = digits.first().copied().unwrap_or(0) as u128
        | (digits.get(1).copied().unwrap_or(0) as u128) << 64;
    if sign == Sign::Minus {
        lo.wrapping_neg()
    } else {
        lo
    }
}

impl Add for Turns {
    type Output = Turns;
    fn add(self, rhs: Turns) -> Turns {
        Turns(self.0.wrapping_add(rhs.0))
    }
}

impl AddAssign for Turns {
    fn add_assign(&mut self, rhs: Turns) {
        self.0 = self.0.wrapping_add(rhs.0);
    }
}

impl Sub for Turns {
    type Output = Turns;
    fn sub(self, rhs: Turns) -> Turns {
        Turns(self.0.wrapping_sub(rhs.0))
    }
}

impl SubAssign for Turns {
    fn sub_assign(&mut self, rhs: Turns) {
        self.0 = self.0.wrapping_sub(rhs.0);
    }
}

impl Neg for Turns {
    type Output = Turns;
    fn neg(self) -> Turns {
        Turns(self.0.wrapping_neg())
    }
}

/// `e(x) = exp(2πix)` for a real argument, reducing modulo one first.
pub fn expi(x: f64) -> Complex {
    let r = x - x.round();
    let (s, c) = (TAU * r).sin_cos();
    Complex::new(c, s)
}

/// Neumaier's compensated summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated accumulator for complex values, one [`NeumaierSum`] per part.
#[derive(Clone, Copy, Debug, Default)]
pub struct ComplexSum {
    re: NeumaierSum,
    im: NeumaierSum,
    terms: u64,
    abs_total: f64,
}

impl ComplexSum {
    pub fn add(&mut self, z: Complex) {
        self.re.add(z.re);
        self.im.add(z.im);
        self.terms += 1;
        self.abs_total += z.norm();
    }

    pub fn value(&self) -> Complex {
        Complex::new(self.re.value(), self.im.value())
    }

    pub fn terms(&self) -> u64 {
        self.terms
    }

    /// Bound on the summation error alone (excluding errors in the terms):
    /// `2ε|S| + 2nε²Σ|x|` per component, doubled for the complex modulus.
    pub fn rounding_bound(&self) -> f64 {
        let eps = f64::EPSILON / 2.0;
        let s = self.value().norm();
        2.0 * (2.0 * eps * s + 2.0 * self.terms as f64 * eps * eps * self.abs_total)
    }
}

impl AddAssign<Complex> for ComplexSum {
    fn add_assign(&mut self, z: Complex) {
        self.add(z);
    }
}

/// Deterministic pairwise (tree) sum, independent of thread scheduling.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        n if n <= 16 => {
            let mut s = NeumaierSum::default();
            values.iter().for_each(|&v| s.add(v));
            s.value()
        }
        n => pairwise_sum(&values[..n / 2]) + pairwise_sum(&values[n / 2..]),
    }
}

/// Ordinary least-squares line through `(x, y)` points.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual.
    pub residual: f64,
}

pub fn least_squares(xs: &[f64], ys: &[f64]) -> Option<LineFit> {
    let n = xs.len();
    if n < 2 || n != ys.len() {
        return None;
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - (slope * x + intercept);
            r * r
        })
        .sum();
    Some(LineFit {
        slope,
        intercept,
        residual: (ss / nf).sqrt(),
    })
}

/// Fit `log y = slope · log x + c`; non-positive values are skipped.
pub fn loglog_fit(xs: &[f64], ys: &[f64]) -> Option<LineFit> {
    let (lx, ly): (Vec<f64>, Vec<f64>) = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && **y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .unzip();
    least_squares(&lx, &ly)
}

/// The golden-ratio conjugate `(√5 − 1)/2`.
pub const GOLDEN: f64 = 0.618_033_988_749_894_9;

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::ToPrimitive;

    #[test]
    fn from_f64_is_exact_for_dyadics() {
        assert_eq!(Turns::from_f64(0.5), Turns::HALF);
        assert_eq!(Turns::from_f64(0.25).0, 1u128 << 126);
        assert_eq!(Turns::from_f64(3.75).0, 3u128 << 126);
        assert_eq!(Turns::from_f64(-0.25).0, 3u128 << 126);
        assert_eq!(Turns::from_f64(7.0), Turns::ZERO);
    }

    #[test]
    fn from_f64_matches_exact_rational_value() {
        for &x in &[GOLDEN, 0.1, 1e-20, 123.456, -0.3] {
            let exact = BigRational::from_float(x).unwrap();
            let frac = &exact - exact.floor();
            let want = (frac * BigRational::from_integer(BigInt::from(1) << 128u32))
                .round()
                .to_integer();
            let got = Turns::from_f64(x);
            assert_eq!(BigInt::from(got.0), want % (BigInt::from(1) << 128u32), "x = {x}");
        }
    }

    #[test]
    fn from_ratio_and_back() {
        let t = Turns::from_integer_ratio(1, 3);
        assert!((t.to_f64() - 1.0 / 3.0).abs() < 1e-16);
        let t = Turns::from_integer_ratio(-1, 3);
        assert!((t.to_f64() - 2.0 / 3.0).abs() < 1e-16);
        assert!((t.to_centered_f64() + 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn expi_quarter_turn() {
        let z = Turns::from_f64(0.25).expi();
        assert!((z - Complex::new(0.0, 1.0)).norm() < 1e-15);
        assert!((expi(2.5) + Complex::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn low_word_of_negative_bigint() {
        assert_eq!(low_u128(&BigInt::from(-1)), u128::MAX);
        let big = (BigInt::from(1) << 130u32) + 5;
        assert_eq!(low_u128(&big), 5);
    }

    #[test]
    fn neumaier_recovers_cancellation() {
        let mut s = NeumaierSum::default();
        for x in [1.0, 1e100, 1.0, -1e100] {
            s.add(x);
        }
        assert_eq!(s.value(), 2.0);
    }

    #[test]
    fn line_fit_recovers_slope() {
        let xs: Vec<f64> = (1..10).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x.powf(-0.5)).collect();
        let fit = loglog_fit(&xs, &ys).unwrap();
        assert!((fit.slope + 0.5).abs() < 1e-12);
        assert!((fit.intercept.exp() - 3.0).abs() < 1e-12);
        assert!(fit.residual < 1e-12);
        assert!(pairwise_sum(&ys).to_f64().is_some());
    }
}
