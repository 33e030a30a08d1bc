//! Globally adaptive Gauss-Kronrod (7/15) quadrature for complex integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::{Complex, Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
#[allow(clippy::approx_constant)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_94,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy, Debug)]
pub struct QuadResult {
    pub value: Complex,
    pub error: f64,
    pub intervals: usize,
}

#[derive(Clone, Copy, Debug)]
struct Piece {
    a: f64,
    b: f64,
    value: Complex,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: Fn(f64) -> Complex>(f: &F, a: f64, b: f64) -> Piece {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        k += s * WGK[i];
        if i % 2 == 1 {
            g += s * WG[i / 2];
        }
    }
    let value = k * h;
    let error = ((k - g) * h).norm();
    Piece { a, b, value, error }
}

/// Integrates `f` over `[a, b]` to absolute tolerance `abs_tol`.
///
/// The interval is first cut into `initial_pieces` equal parts, which should
/// be chosen from the known oscillation count of the integrand. Bisection of
/// the worst piece continues until the summed error estimate drops below the
/// tolerance or `max_pieces` is reached.
pub fn integrate<F: Fn(f64) -> Complex>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    initial_pieces: usize,
    max_pieces: usize,
) -> Result<QuadResult> {
    if !(a.is_finite() && b.is_finite()) || !(abs_tol > 0.0) {
        return Err(Error::invalid("integration limits must be finite and tolerance positive"));
    }
    let n0 = initial_pieces.max(1);
    let mut heap = BinaryHeap::with_capacity(n0 * 2);
    let width = (b - a) / n0 as f64;
    for i in 0..n0 {
        let lo = a + width * i as f64;
        let hi = if i + 1 == n0 { b } else { lo + width };
        heap.push(kronrod(&f, lo, hi));
    }
    loop {
        let total_err: f64 = heap.iter().map(|p| p.error).sum();
        if total_err <= abs_tol || heap.len() >= max_pieces.max(n0) {
            let mut pieces: Vec<Piece> = heap.into_vec();
            pieces.sort_by(|x, y| x.a.total_cmp(&y.a));
            let value = pieces.iter().fold(Complex::new(0.0, 0.0), |acc, p| acc + p.value);
            if total_err > abs_tol {
                return Err(Error::Quadrature {
                    achieved: total_err,
                    requested: abs_tol,
                });
            }
            return Ok(QuadResult {
                value,
                error: total_err,
                intervals: pieces.len(),
            });
        }
        let worst = heap.pop().expect("non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        heap.push(kronrod(&f, worst.a, mid));
        heap.push(kronrod(&f, mid, worst.b));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::expi;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x| Complex::new(x * x * x, 0.0), 0.0, 2.0, 1e-12, 1, 10).unwrap();
        assert!((r.value.re - 4.0).abs() < 1e-13);
    }

    #[test]
    fn oscillatory_exponential_matches_closed_form() {
        let g = 37.25;
        let r = integrate(|t| expi(g * t), 0.0, 1.0, 1e-11, 80, 10_000).unwrap();
        let exact = (expi(g) - 1.0) / Complex::new(0.0, std::f64::consts::TAU * g);
        assert!((r.value - exact).norm() < 1e-10);
    }

    #[test]
    fn reports_non_convergence() {
        let err = integrate(|t| expi(1e6 * t * t), 0.0, 1.0, 1e-14, 1, 4).unwrap_err();
        assert!(matches!(err, Error::Quadrature { .. }));
    }
}
