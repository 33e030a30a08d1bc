//! r-variation of sequences and of the twisted convolution averages
//! `K_N^θ * f(x) = (1/N) Σ_{n≤N} e(−nθ) f(x − P(n))` along lacunary `N`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::circle_method::lacunary_set;
use crate::numerics::{pairwise_sum, ComplexSum};
use crate::phase_sums::IntPoly;
use crate::{Complex, Error, Result, Turns};

/// `sup_{t_0 < … < t_J} (Σ_k |v_{t_{k+1}} − v_{t_k}|^r)^{1/r}`, exactly, by
/// `dp[i] = max_{j<i} dp[j] + |v_i − v_j|^r`. `r = ∞` gives the largest
/// pairwise difference.
pub fn r_variation(values: &[Complex], r: f64) -> Result<f64> {
    if r.is_nan() || r < 1.0 {
        return Err(Error::invalid(format!("r = {r}: the r-variation needs r ≥ 1")));
    }
    if values.is_empty() {
        return Err(Error::invalid("empty sequence"));
    }
    if r.is_infinite() {
        let mut best: f64 = 0.0;
        for (i, a) in values.iter().enumerate() {
            for b in &values[..i] {
                best = best.max((a - b).norm());
            }
        }
        return Ok(best);
    }
    let mut dp = vec![0.0f64; values.len()];
    for i in 1..values.len() {
        dp[i] = (0..i)
            .map(|j| dp[j] + (values[i] - values[j]).norm().powf(r))
            .fold(0.0, f64::max);
    }
    Ok(dp.iter().copied().fold(0.0, f64::max).powf(1.0 / r))
}

/// Largest sequence accepted by [`r_variation_exhaustive`].
pub const EXHAUSTIVE_MAX_LEN: usize = 20;

/// The same supremum by enumerating all `2^K` index subsets.
pub fn r_variation_exhaustive(values: &[Complex], r: f64) -> Result<f64> {
    if r.is_nan() || r < 1.0 || r.is_infinite() {
        return Err(Error::invalid("r must be finite and ≥ 1"));
    }
    if values.is_empty() || values.len() > EXHAUSTIVE_MAX_LEN {
        return Err(Error::budget("exhaustive variation length", EXHAUSTIVE_MAX_LEN));
    }
    let k = values.len();
    let mut best: f64 = 0.0;
    for mask in 1u32..(1 << k) {
        let mut prev: Option<usize> = None;
        let mut s = 0.0;
        for i in 0..k {
            if mask >> i & 1 == 1 {
                if let Some(p) = prev {
                    s += (values[i] - values[p]).norm().powf(r);
                }
                prev = Some(i);
            }
        }
        best = best.max(s);
    }
    Ok(best.powf(1.0 / r))
}

/// A finitely supported function on `ℤ`, stored by support point.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LatticeSignal {
    values: BTreeMap<i64, Complex>,
}

impl LatticeSignal {
    pub fn delta(x: i64) -> LatticeSignal {
        LatticeSignal {
            values: BTreeMap::from([(x, Complex::new(1.0, 0.0))]),
        }
    }

    /// Values on `start, start + 1, …`.
    pub fn from_interval(start: i64, values: &[Complex]) -> Result<LatticeSignal> {
        let mut out = BTreeMap::new();
        for (i, &v) in values.iter().enumerate() {
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::invalid("non-finite value"));
            }
            let x = start
                .checked_add(i as i64)
                .ok_or_else(|| Error::invalid("support overflows i64"))?;
            if v != Complex::new(0.0, 0.0) {
                out.insert(x, v);
            }
        }
        Ok(LatticeSignal { values: out })
    }

    pub fn get(&self, x: i64) -> Complex {
        self.values.get(&x).copied().unwrap_or_default()
    }

    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.values.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex)> + '_ {
        self.values.iter().map(|(&x, &v)| (x, v))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn l2_norm(&self) -> f64 {
        let sq: Vec<f64> = self.values.values().map(|z| z.norm_sqr()).collect();
        pairwise_sum(&sq).sqrt()
    }
}

/// Largest `N·|supp f|` accepted by [`twisted_convolution`].
pub const CONVOLUTION_BUDGET: u64 = 1 << 28;

/// `K_N^θ * f(x) = (1/N) Σ_{n=1}^{N} e(−nθ) f(x − P(n))`, so each mass of `f`
/// at `y` spreads to `y + P(n)`.
pub fn twisted_convolution(f: &LatticeSignal, theta: f64, p: &IntPoly, n: u64) -> Result<LatticeSignal> {
    if n == 0 {
        return Err(Error::invalid("N must be positive"));
    }
    if (n as u128) * (f.len() as u128) > CONVOLUTION_BUDGET as u128 {
        return Err(Error::budget("N·|supp f| convolution terms", CONVOLUTION_BUDGET));
    }
    let step = -Turns::from_f64(theta);
    let mut shifts = Vec::with_capacity(n as usize);
    for k in 1..=n {
        let off = p
            .eval_i128(k as i128)
            .and_then(|v| i64::try_from(v).ok())
            .ok_or_else(|| Error::budget("P(N) within i64", i64::MAX))?;
        shifts.push((off, step.mul_u128(k as u128).expi()));
    }
    let mut acc: BTreeMap<i64, ComplexSum> = BTreeMap::new();
    for (y, fy) in f.iter() {
        for &(off, w) in &shifts {
            let x = y
                .checked_add(off)
                .ok_or_else(|| Error::invalid("support overflows i64"))?;
            acc.entry(x).or_default().add(w * fy);
        }
    }
    let inv = 1.0 / n as f64;
    Ok(LatticeSignal {
        values: acc.into_iter().map(|(x, s)| (x, s.value() * inv)).collect(),
    })
}

/// `K_N * f` for each label, aligned on the union of supports.
#[derive(Clone, Debug, PartialEq)]
pub struct VariationSeries {
    pub index_labels: Vec<u64>,
    pub points: Vec<i64>,
    /// `values[k][i]` is the mean at `index_labels[k]` evaluated at `points[i]`.
    pub values: Vec<Vec<Complex>>,
}

impl VariationSeries {
    pub fn build(f: &LatticeSignal, theta: f64, p: &IntPoly, labels: &[u64]) -> Result<VariationSeries> {
        if labels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("index labels must be strictly increasing"));
        }
        let means: Vec<LatticeSignal> = labels
            .par_iter()
            .map(|&n| twisted_convolution(f, theta, p, n))
            .collect::<Result<_>>()?;
        let mut pts: Vec<i64> = means.iter().flat_map(|m| m.support()).collect();
        pts.sort_unstable();
        pts.dedup();
        let values = means
            .iter()
            .map(|m| pts.iter().map(|&x| m.get(x)).collect())
            .collect();
        Ok(VariationSeries {
            index_labels: labels.to_vec(),
            points: pts,
            values,
        })
    }

    pub fn column(&self, i: usize, rows: usize) -> Vec<Complex> {
        self.values[..rows].iter().map(|row| row[i]).collect()
    }

    /// `‖V^r(K_N * f : first `rows` labels)‖_{ℓ²}`.
    pub fn l2_variation(&self, r: f64, rows: usize) -> Result<f64> {
        let rows = rows.min(self.index_labels.len());
        if rows == 0 {
            return Ok(0.0);
        }
        let sq: Vec<f64> = (0..self.points.len())
            .into_par_iter()
            .map(|i| r_variation(&self.column(i, rows), r).map(|v| v * v))
            .collect::<Result<_>>()?;
        Ok(pairwise_sum(&sq).sqrt())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthRow {
    pub n_max: u64,
    pub ratio: f64,
}

/// `‖V^r(K_N^θ * f : N ∈ I_ρ, N ≤ N′)‖₂/‖f‖₂` for each `N′ ∈ I_ρ` up to `n_max`.
/// The constant bounding this ratio is not known explicitly; the table is a
/// diagnostic.
pub fn variation_growth(
    f: &LatticeSignal,
    theta: f64,
    p: &IntPoly,
    rho: f64,
    r: f64,
    n_max: u64,
) -> Result<Vec<GrowthRow>> {
    if r.is_nan() || r <= 2.0 {
        return Err(Error::invalid(format!(
            "r = {r}: the variational bound for these averages requires r > 2"
        )));
    }
    let norm = f.l2_norm();
    if norm == 0.0 {
        return Err(Error::invalid("f must be nonzero"));
    }
    let labels = lacunary_set(rho, n_max)?;
    if labels.is_empty() {
        return Err(Error::invalid("no lacunary scale lies below N_max"));
    }
    let series = VariationSeries::build(f, theta, p, &labels)?;
    (1..=labels.len())
        .map(|k| {
            Ok(GrowthRow {
                n_max: labels[k - 1],
                ratio: series.l2_variation(r, k)? / norm,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex {
        Complex::new(re, 0.0)
    }

    #[test]
    fn closed_forms() {
        assert_eq!(r_variation(&[c(2.0); 5], 3.0).unwrap(), 0.0);
        let mono: Vec<Complex> = [0.0, 0.5, 1.5, 4.0].map(c).to_vec();
        assert!((r_variation(&mono, 1.0).unwrap() - 4.0).abs() < 1e-15);
        for k in 2..30 {
            let alt: Vec<Complex> = (0..k).map(|i| c((i % 2) as f64)).collect();
            assert_eq!(r_variation(&alt, 2.0).unwrap(), ((k - 1) as f64).sqrt());
        }
        assert!(r_variation(&mono, 0.5).is_err());
        assert_eq!(r_variation(&mono, f64::INFINITY).unwrap(), 4.0);
    }

    #[test]
    fn dp_matches_exhaustive() {
        let v: Vec<Complex> = (0..10)
            .map(|i| Complex::new((i as f64 * 1.7).sin(), (i as f64 * 0.3).cos()))
            .collect();
        for r in [1.0, 2.0, 2.5, 7.0] {
            let a = r_variation(&v, r).unwrap();
            let b = r_variation_exhaustive(&v, r).unwrap();
            assert!((a - b).abs() <= 1e-12 * b.max(1.0));
        }
    }

    #[test]
    fn convolution_examples() {
        let d = LatticeSignal::delta(0);
        let k = twisted_convolution(&d, 0.0, &IntPoly::monomial(1), 4).unwrap();
        assert_eq!(k.support().collect::<Vec<_>>(), vec![1, 2, 3, 4]);
        assert!(k.iter().all(|(_, v)| (v - 0.25).norm() < 1e-16));
        let k = twisted_convolution(&d, 0.5, &IntPoly::monomial(2), 2).unwrap();
        assert!((k.get(1) + 0.5).norm() < 1e-15);
        assert!((k.get(4) - 0.5).norm() < 1e-15);
        assert_eq!(k.len(), 2);
    }

    #[test]
    fn growth_trivial() {
        let d = LatticeSignal::delta(0);
        let rows = variation_growth(&d, 0.0, &IntPoly::monomial(1), 2.0, 3.0, 3).unwrap();
        assert_eq!(rows, vec![GrowthRow { n_max: 2, ratio: 0.0 }]);
        assert!(variation_growth(&d, 0.0, &IntPoly::monomial(1), 2.0, 2.0, 8).is_err());
    }
}
