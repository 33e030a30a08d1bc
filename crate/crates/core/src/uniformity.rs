//! Gowers norms on `ℤ_N` and truncated Gowers-Host-Kra seminorms.
//!
//! With `Δ_h f(x) = f(x + h)·conj f(x)`, the cyclic norms satisfy
//! `‖f‖_{U^1} = |E f|` and `‖f‖_{U^m}^{2^m} = E_h ‖Δ_h f‖_{U^{m−1}}^{2^{m−1}}`.
//! The ergodic seminorms replace `E_h` by `limsup_N avg_{n≤N}` over
//! `T^n f·f̄`, which [`ghk_estimate`] truncates.

use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::dynamics::{SystemSpec, TrigPoly};
use crate::numerics::{pairwise_sum, ComplexSum};
use crate::{Complex, Error, Result};

/// A function on `ℤ_N`.
#[derive(Clone, Debug, PartialEq)]
pub struct CyclicSignal {
    values: Vec<Complex>,
}

impl CyclicSignal {
    pub fn new(values: Vec<Complex>) -> Result<CyclicSignal> {
        if values.is_empty() {
            return Err(Error::invalid("empty signal"));
        }
        if values.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::invalid("non-finite entry"));
        }
        Ok(CyclicSignal { values })
    }

    pub fn from_real(values: &[f64]) -> Result<CyclicSignal> {
        CyclicSignal::new(values.iter().map(|&v| Complex::new(v, 0.0)).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex] {
        &self.values
    }

    fn mean(&self) -> Complex {
        let mut acc = ComplexSum::default();
        self.values.iter().for_each(|&z| acc.add(z));
        acc.value() / self.values.len() as f64
    }

    fn derivative(&self, h: usize) -> CyclicSignal {
        let n = self.values.len();
        CyclicSignal {
            values: (0..n).map(|x| self.values[(x + h) % n] * self.values[x].conj()).collect(),
        }
    }
}

/// Work guard: `N^{m+1}` multiplications.
pub const GOWERS_BUDGET: f64 = 1e8;

// ‖f‖_{U^m}^{2^m}.
fn gowers_power(f: &CyclicSignal, m: u32) -> f64 {
    if m == 1 {
        return f.mean().norm_sqr();
    }
    let terms: Vec<f64> = (0..f.len()).map(|h| gowers_power(&f.derivative(h), m - 1)).collect();
    pairwise_sum(&terms) / f.len() as f64
}

/// `‖f‖_{U^m}` on `ℤ_N` for `m ∈ {1, 2, 3}`.
pub fn gowers_norm_cyclic(f: &CyclicSignal, m: u32) -> Result<f64> {
    if !(1..=3).contains(&m) {
        return Err(Error::invalid("m must be 1, 2 or 3"));
    }
    let work = (f.len() as f64).powi(m as i32 + 1);
    if work > GOWERS_BUDGET {
        return Err(Error::budget(format!("N^{} Gowers evaluation", m + 1), GOWERS_BUDGET));
    }
    let p = if m == 1 {
        f.mean().norm()
    } else {
        // Parallel over the outermost shift, summed in index order.
        let terms: Vec<f64> = (0..f.len())
            .into_par_iter()
            .map(|h| gowers_power(&f.derivative(h), m - 1))
            .collect();
        (pairwise_sum(&terms) / f.len() as f64).max(0.0).powf(1.0 / 2f64.powi(m as i32))
    };
    Ok(p)
}

/// `(Σ_ξ |f̂(ξ)|⁴)^{1/4}` with `f̂(ξ) = E_x f(x) e(−xξ/N)`; equals `‖f‖_{U^2}`.
pub fn u2_fourier(f: &CyclicSignal) -> f64 {
    let n = f.len();
    let mut buf = f.values.clone();
    FftPlanner::<f64>::new().plan_fft_forward(n).process(&mut buf);
    let fourth: Vec<f64> = buf.iter().map(|z| (z / n as f64).norm_sqr().powi(2)).collect();
    pairwise_sum(&fourth).powf(0.25)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LpCheck {
    pub u_norm: f64,
    pub lp_norm: f64,
    /// `p_m = 2^m/(m+1)`.
    pub p: f64,
    pub ok: bool,
}

/// Compares `‖f‖_{U^m}` with `‖f‖_{L^{p_m}}`, `p_m = 2^m/(m+1)`, under
/// normalized counting measure.
pub fn lp_bound_check(f: &CyclicSignal, m: u32) -> Result<LpCheck> {
    if !(2..=3).contains(&m) {
        return Err(Error::invalid("m must be 2 or 3"));
    }
    let u = gowers_norm_cyclic(f, m)?;
    let p = 2f64.powi(m as i32) / (m as f64 + 1.0);
    let moments: Vec<f64> = f.values.iter().map(|z| z.norm().powf(p)).collect();
    let lp = (pairwise_sum(&moments) / f.len() as f64).powf(1.0 / p);
    Ok(LpCheck {
        u_norm: u,
        lp_norm: lp,
        p,
        ok: u <= lp + 1e-10,
    })
}

/// Truncation parameters for [`ghk_estimate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GhkParams {
    /// Length of the outermost average.
    pub n_per_level: u64,
    /// Length of every inner average.
    pub h_per_level: u64,
    pub depth: u32,
}

impl Default for GhkParams {
    fn default() -> Self {
        GhkParams {
            n_per_level: 10_000,
            h_per_level: 100,
            depth: 2,
        }
    }
}

/// Largest number of terms an intermediate trigonometric polynomial may have.
pub const GHK_MAX_TERMS: usize = 4096;

// ‖g‖_{U^k}^{2^k} with the average at this level running over 1..=len.
fn ghk_power(system: &SystemSpec, g: &TrigPoly, k: u32, len: u64, inner: u64) -> Result<f64> {
    if k == 1 {
        return Ok(g.zero_coefficient().norm_sqr());
    }
    let gbar = g.conj();
    let terms: Vec<f64> = (1..=len)
        .into_par_iter()
        .map(|n| {
            let d = g.compose(system, n as i128)?.mul(&gbar)?;
            if d.terms().len() > GHK_MAX_TERMS {
                return Err(Error::budget("trigonometric polynomial size", GHK_MAX_TERMS));
            }
            ghk_power(system, &d, k - 1, inner, inner)
        })
        .collect::<Result<_>>()?;
    Ok(pairwise_sum(&terms) / len as f64)
}

/// Truncated `‖f‖_{U^m}`: `limsup_N avg_{n≤N}` becomes the average over
/// `n ≤ n_per_level` at the top level and `n ≤ h_per_level` below it, and
/// `∫ g dμ` is the exact zero-frequency coefficient.
pub fn ghk_estimate(system: &SystemSpec, f: &TrigPoly, params: GhkParams) -> Result<f64> {
    if !(1..=3).contains(&params.depth) {
        return Err(Error::invalid("depth must be 1, 2 or 3"));
    }
    if params.n_per_level == 0 || params.h_per_level == 0 {
        return Err(Error::invalid("averaging lengths must be positive"));
    }
    if f.dim() != system.dimension() {
        return Err(Error::invalid("f and the system have different dimensions"));
    }
    let m = params.depth;
    let p = ghk_power(system, f, m, params.n_per_level, params.h_per_level)?;
    Ok(p.max(0.0).powf(1.0 / 2f64.powi(m as i32)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{expi, GOLDEN};

    fn character(n: usize, k: usize) -> CyclicSignal {
        CyclicSignal::new((0..n).map(|x| expi((k * x) as f64 / n as f64)).collect()).unwrap()
    }

    #[test]
    fn constants_and_characters() {
        let one = CyclicSignal::from_real(&[1.0; 12]).unwrap();
        for m in 1..=3 {
            assert!((gowers_norm_cyclic(&one, m).unwrap() - 1.0).abs() < 1e-14);
        }
        let chi = character(32, 1);
        assert!((gowers_norm_cyclic(&chi, 2).unwrap() - 1.0).abs() < 1e-12);
        assert!(gowers_norm_cyclic(&chi, 1).unwrap() < 1e-14);
        assert!(gowers_norm_cyclic(&one, 4).is_err());
        let big = CyclicSignal::from_real(&vec![1.0; 1000]).unwrap();
        assert!(matches!(gowers_norm_cyclic(&big, 3), Err(Error::Budget { .. })));
    }

    #[test]
    fn u2_matches_fourier() {
        let signs: Vec<f64> = (0..64u64)
            .map(|x| if ((x * 2_654_435_761) >> 7) & 1 == 0 { 1.0 } else { -1.0 })
            .collect();
        let f = CyclicSignal::from_real(&signs).unwrap();
        let a = gowers_norm_cyclic(&f, 2).unwrap();
        assert!((a - u2_fourier(&f)).abs() < 1e-10);
    }

    #[test]
    fn lp_examples() {
        let one = CyclicSignal::from_real(&[1.0; 8]).unwrap();
        let c = lp_bound_check(&one, 2).unwrap();
        assert!(c.ok && (c.u_norm - 1.0).abs() < 1e-14 && (c.lp_norm - 1.0).abs() < 1e-14);
        let mut delta = vec![0.0; 16];
        delta[3] = 1.0;
        let c = lp_bound_check(&CyclicSignal::from_real(&delta).unwrap(), 2).unwrap();
        let want = 16f64.powf(-0.75);
        assert!((c.u_norm - want).abs() < 1e-14 && (c.lp_norm - want).abs() < 1e-14 && c.ok);
        assert!(lp_bound_check(&one, 1).is_err());
    }

    #[test]
    fn ghk_closed_forms() {
        let rot = SystemSpec::rotation(GOLDEN).unwrap();
        let chi = TrigPoly::character(&[1]).unwrap();
        let params = GhkParams {
            n_per_level: 200,
            h_per_level: 20,
            depth: 2,
        };
        for depth in 1..=3 {
            let one = TrigPoly::constant(1, Complex::new(1.0, 0.0));
            let p = GhkParams { depth, ..params };
            assert!((ghk_estimate(&rot, &one, p).unwrap() - 1.0).abs() < 1e-12);
        }
        for depth in 2..=3 {
            let p = GhkParams { depth, ..params };
            assert!((ghk_estimate(&rot, &chi, p).unwrap() - 1.0).abs() < 1e-12);
        }
        assert_eq!(ghk_estimate(&rot, &chi, GhkParams { depth: 1, ..params }).unwrap(), 0.0);
        assert_eq!(ghk_estimate(&SystemSpec::Doubling, &chi, params).unwrap(), 0.0);
        let skew_y = TrigPoly::character(&[0, 1]).unwrap();
        let skew = SystemSpec::skew(GOLDEN).unwrap();
        // e(y) is a generalized eigenfunction of order 2.
        assert!(ghk_estimate(&skew, &skew_y, params).unwrap() < 1e-12);
        let u3 = ghk_estimate(&skew, &skew_y, GhkParams { depth: 3, ..params }).unwrap();
        assert!((u3 - 1.0).abs() < 1e-12);
        assert!(ghk_estimate(&rot, &skew_y, params).is_err());
    }
}
