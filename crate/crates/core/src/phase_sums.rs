//! Polynomial exponential sums `(1/N) Σ_{n≤N} e(α_d n^d + … + α_1 n)`.
//!
//! Phases are carried as [`Turns`], so the finite-difference walk over `n`
//! reproduces `P(n)·α mod 1` bit for bit no matter how large `P(n)` gets.

use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::hardy::{class_check_m, ClassFamily, ClassVerdict, ClassWitness, HardyExpr};
use crate::numerics::ComplexSum;
use crate::{Complex, Error, Result, Turns};

/// Bound on `|e(φ)_computed − e(φ)|` for a single term: the phase is rounded
/// to 53 bits before `sin_cos`, each of which is accurate to about an ulp.
pub const TERM_ERROR: f64 = 8.0 * f64::EPSILON;

const CHUNK: u64 = 1 << 16;
const MAX_N: u64 = 1 << 31;

/// An integer polynomial `m_1 n + … + m_d n^d` without constant term.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct IntPoly {
    /// `coeffs[i]` multiplies `n^{i+1}`.
    coeffs: Vec<i64>,
}

impl IntPoly {
    /// From ascending coefficients `(m_1, …, m_d)`; requires `m_d ≥ 1`.
    pub fn new(ascending: Vec<i64>) -> Result<IntPoly> {
        match ascending.last() {
            Some(&m) if m >= 1 => Ok(IntPoly { coeffs: ascending }),
            _ => Err(Error::invalid("leading coefficient m_d must be ≥ 1")),
        }
    }

    /// From the skeleton order `(m_d, …, m_1)`.
    pub fn from_skeleton(descending: &[i64]) -> Result<IntPoly> {
        IntPoly::new(descending.iter().rev().copied().collect())
    }

    /// `n^d`.
    pub fn monomial(d: usize) -> IntPoly {
        let mut c = vec![0; d.max(1)];
        c[d.max(1) - 1] = 1;
        IntPoly { coeffs: c }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn leading(&self) -> i64 {
        *self.coeffs.last().expect("non-empty")
    }

    pub fn ascending(&self) -> &[i64] {
        &self.coeffs
    }

    /// `(m_d, …, m_1)`.
    pub fn skeleton(&self) -> Vec<i64> {
        self.coeffs.iter().rev().copied().collect()
    }

    /// `P(n)` if it fits in `i128`.
    pub fn eval_i128(&self, n: i128) -> Option<i128> {
        let mut acc: i128 = 0;
        for &m in self.coeffs.iter().rev() {
            acc = acc.checked_add(m as i128)?.checked_mul(n)?;
        }
        Some(acc)
    }

    pub fn eval_big(&self, n: &BigInt) -> BigInt {
        let mut acc = BigInt::from(0);
        for &m in self.coeffs.iter().rev() {
            acc = (acc + m) * n;
        }
        acc
    }

    /// `Σ_i |m_i|`.
    pub fn abs_coeff_sum(&self) -> i64 {
        self.coeffs.iter().map(|m| m.abs()).sum()
    }

    /// Parses `"2n^2+n"`, `"n^3 - 4n"`, `"n^2"`; `x` may replace `n`.
    pub fn parse(input: &str) -> Result<IntPoly> {
        let src: String = input
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| if c == 'x' { 'n' } else { c })
            .collect();
        if src.is_empty() {
            return Err(Error::parse("empty polynomial"));
        }
        let mut coeffs: Vec<i64> = Vec::new();
        let mut i = 0;
        let b = src.as_bytes();
        while i < b.len() {
            let mut sign = 1i64;
            if b[i] == b'+' || b[i] == b'-' {
                if b[i] == b'-' {
                    sign = -1;
                }
                i += 1;
            }
            let start = i;
            while i < b.len() && b[i] != b'+' && b[i] != b'-' {
                i += 1;
            }
            let term = &src[start..i];
            let (c, rest) = match term.find('n') {
                Some(pos) => (&term[..pos], &term[pos + 1..]),
                None => {
                    return Err(Error::parse(format!(
                        "term '{term}' has no n (constant terms are not allowed)"
                    )))
                }
            };
            let c = c.trim_end_matches('*');
            let coeff: i64 = if c.is_empty() {
                1
            } else {
                c.parse()
                    .map_err(|_| Error::parse(format!("bad coefficient '{c}'")))?
            };
            let power: usize = match rest.strip_prefix('^') {
                Some(p) => p
                    .parse()
                    .map_err(|_| Error::parse(format!("bad exponent '{p}'")))?,
                None if rest.is_empty() => 1,
                None => return Err(Error::parse(format!("unexpected '{rest}'"))),
            };
            if power == 0 {
                return Err(Error::parse("constant terms are not allowed"));
            }
            if coeffs.len() < power {
                coeffs.resize(power, 0);
            }
            coeffs[power - 1] += sign * coeff;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPoly::new(coeffs)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &m) in self.coeffs.iter().enumerate().rev() {
            if m == 0 {
                continue;
            }
            let p = i + 1;
            let sign = if m < 0 { "-" } else if first { "" } else { "+" };
            let mag = m.unsigned_abs();
            let c = if mag == 1 { String::new() } else { mag.to_string() };
            if p == 1 {
                write!(f, "{sign}{c}n")?;
            } else {
                write!(f, "{sign}{c}n^{p}")?;
            }
            first = false;
        }
        Ok(())
    }
}

impl std::str::FromStr for IntPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        IntPoly::parse(s)
    }
}

/// A phase polynomial `α_d n^d + … + α_1 n` taken mod 1.
#[derive(Clone, Debug, PartialEq)]
pub struct PhasePoly {
    /// `(α_d, …, α_1)` as supplied (diagnostic only).
    coeffs: Vec<f64>,
    skeleton: Option<IntPoly>,
    /// `turns[i]` multiplies `n^{i+1}`.
    turns: Vec<Turns>,
}

impl PhasePoly {
    /// From `(α_d, …, α_1)`.
    pub fn new(coeffs: &[f64]) -> Result<PhasePoly> {
        if coeffs.is_empty() {
            return Err(Error::invalid("degree must be at least 1"));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("coefficients must be finite"));
        }
        Ok(PhasePoly {
            coeffs: coeffs.to_vec(),
            skeleton: None,
            turns: coeffs.iter().rev().map(|&c| Turns::from_f64(c)).collect(),
        })
    }

    /// `P(n)·α` for an integer polynomial `P`; each `m_i α` is formed exactly
    /// mod 1.
    pub fn from_skeleton(alpha: f64, p: &IntPoly) -> Result<PhasePoly> {
        if !alpha.is_finite() {
            return Err(Error::invalid("α must be finite"));
        }
        let a = Turns::from_f64(alpha);
        Ok(PhasePoly {
            coeffs: p.skeleton().iter().map(|&m| m as f64 * alpha).collect(),
            skeleton: Some(p.clone()),
            turns: p.ascending().iter().map(|&m| a.mul_int(m as i128)).collect(),
        })
    }

    /// From exact rationals `(a_d/b_d, …, a_1/b_1)`, each rounded to the
    /// nearest multiple of `2^-128`.
    pub fn from_rationals(coeffs: &[(i64, i64)]) -> Result<PhasePoly> {
        if coeffs.is_empty() || coeffs.iter().any(|&(_, b)| b == 0) {
            return Err(Error::invalid("need d ≥ 1 and nonzero denominators"));
        }
        Ok(PhasePoly {
            coeffs: coeffs.iter().map(|&(a, b)| a as f64 / b as f64).collect(),
            skeleton: None,
            turns: coeffs
                .iter()
                .rev()
                .map(|&(a, b)| Turns::from_ratio(&BigInt::from(a), &BigInt::from(b)))
                .collect(),
        })
    }

    /// From raw phases, `turns[i]` multiplying `n^{i+1}`.
    pub fn from_turns(turns: Vec<Turns>) -> Result<PhasePoly> {
        if turns.is_empty() {
            return Err(Error::invalid("degree must be at least 1"));
        }
        Ok(PhasePoly {
            coeffs: turns.iter().rev().map(|t| t.to_f64()).collect(),
            skeleton: None,
            turns,
        })
    }

    /// Adds `sign·θ` to the linear coefficient.
    pub fn with_linear_twist(mut self, theta: f64, sign: TwistSign) -> Result<PhasePoly> {
        if !theta.is_finite() {
            return Err(Error::invalid("θ must be finite"));
        }
        let t = Turns::from_f64(theta);
        match sign {
            TwistSign::Plus => self.turns[0] += t,
            TwistSign::Minus => self.turns[0] -= t,
        }
        let d = self.coeffs.len();
        self.coeffs[d - 1] += sign.factor() * theta;
        Ok(self)
    }

    pub fn degree(&self) -> usize {
        self.turns.len()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn skeleton(&self) -> Option<&IntPoly> {
        self.skeleton.as_ref()
    }

    pub fn turns(&self) -> &[Turns] {
        &self.turns
    }

    /// `φ(n) mod 1` by Horner's rule with wrapping arithmetic.
    pub fn phase(&self, n: u64) -> Turns {
        let mut acc = Turns::ZERO;
        for &t in self.turns.iter().rev() {
            acc = (acc + t).mul_u128(n as u128);
        }
        acc
    }

    /// Iterator over `φ(start), φ(start+1), …` driven by a difference table.
    pub fn walk(&self, start: u64) -> PhaseWalker {
        let d = self.degree();
        let mut table: Vec<Turns> = (0..=d as u64).map(|k| self.phase(start + k)).collect();
        for order in 1..=d {
            for i in (order..=d).rev() {
                table[i] = table[i] - table[i - 1];
            }
        }
        PhaseWalker { table }
    }
}

/// Finite-difference walker; `table[k] = Δ^k φ` at the current index.
#[derive(Clone, Debug)]
pub struct PhaseWalker {
    table: Vec<Turns>,
}

impl Iterator for PhaseWalker {
    type Item = Turns;
    fn next(&mut self) -> Option<Turns> {
        let out = self.table[0];
        for i in 0..self.table.len() - 1 {
            let next = self.table[i + 1];
            self.table[i] += next;
        }
        Some(out)
    }
}

/// A normalized average with its error budget.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SumResult {
    #[serde(serialize_with = "ser_complex")]
    pub value: Complex,
    pub n_terms: u64,
    pub accumulated_error_bound: f64,
}

pub(crate) fn ser_complex<S: serde::Serializer>(z: &Complex, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&z.re)?;
    t.serialize_element(&z.im)?;
    t.end()
}

impl SumResult {
    /// Normalizes a compensated sum of `n` terms, each off by at most
    /// `term_error`.
    pub fn from_sum(acc: &ComplexSum, n: u64, term_error: f64) -> SumResult {
        let nf = n as f64;
        let value = acc.value() / nf;
        SumResult {
            value,
            n_terms: n,
            accumulated_error_bound: term_error + acc.rounding_bound() / nf + f64::EPSILON * value.norm(),
        }
    }

    pub fn abs(&self) -> f64 {
        self.value.norm()
    }
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("N must be at least 1"));
    }
    if n > MAX_N {
        return Err(Error::budget("N", MAX_N));
    }
    Ok(())
}

/// `Σ_{n≤N} e(φ(n))`, chunked for parallelism and combined in index order.
fn phase_sum(p: &PhasePoly, n: u64) -> (ComplexSum, f64) {
    let chunks = n.div_ceil(CHUNK);
    let parts: Vec<(Complex, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = 1 + c * CHUNK;
            let hi = (lo + CHUNK - 1).min(n);
            let mut acc = ComplexSum::default();
            for t in p.walk(lo).take((hi - lo + 1) as usize) {
                acc.add(t.expi());
            }
            (acc.value(), acc.rounding_bound())
        })
        .collect();
    let mut total = ComplexSum::default();
    let mut bound = 0.0;
    for (z, b) in parts {
        total.add(z);
        bound += b;
    }
    (total, bound)
}

/// `(1/N) Σ_{n=1}^{N} e(α_d n^d + … + α_1 n)`.
pub fn weyl_average(p: &PhasePoly, n: u64) -> Result<SumResult> {
    check_n(n)?;
    let (acc, chunk_bound) = phase_sum(p, n);
    let mut r = SumResult::from_sum(&acc, n, TERM_ERROR);
    r.accumulated_error_bound += chunk_bound / n as f64;
    Ok(r)
}

/// Orientation of the linear twist `±nθ`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum TwistSign {
    /// `e(nθ + P(n)α)`.
    #[default]
    Plus,
    /// `e(P(n)α − nθ)`.
    Minus,
}

impl TwistSign {
    pub fn factor(self) -> f64 {
        match self {
            TwistSign::Plus => 1.0,
            TwistSign::Minus => -1.0,
        }
    }
}

/// `(1/N) Σ e(P(n)α ± nθ)`.
pub fn twisted_average(theta: f64, alpha: f64, p: &IntPoly, n: u64, sign: TwistSign) -> Result<SumResult> {
    let phase = PhasePoly::from_skeleton(alpha, p)?.with_linear_twist(theta, sign)?;
    weyl_average(&phase, n)
}

/// `N^ε (1/q + 1/N + q/N^d)^{1/2^{d−1}}`, the shape of Weyl's bound.
pub fn weyl_bound_shape(q: u64, n: u64, d: usize, eps: f64) -> f64 {
    let (q, nf) = (q as f64, n as f64);
    let inner = 1.0 / q + 1.0 / nf + q / nf.powi(d as i32);
    nf.powf(eps) * inner.powf(1.0 / 2f64.powi(d as i32 - 1))
}

/// Result of [`sup_scan`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SupScan {
    pub sup_value: f64,
    pub argmax_alpha: f64,
    pub rigorous_upper: f64,
    /// Number of equispaced grid points in `[0, 1)`.
    pub grid_size: u64,
    /// Proven bound on `sup − max over grid`.
    pub certified_gap: f64,
}

/// Largest grid size [`sup_scan`] will use.
pub const MAX_GRID: u64 = 1 << 28;
const MAX_FFT: u64 = 1 << 20;

struct Spectrum {
    /// Frequencies `P(n) − c` and the twist weights `e(nθ)`.
    freqs: Vec<i128>,
    weights: Vec<Complex>,
    /// `max |P(n) − c|`.
    k: f64,
    /// `(2π/N) Σ |P(n) − c|`.
    lipschitz: f64,
}

impl Spectrum {
    fn new(theta: f64, p: &IntPoly, n: u64) -> Result<Spectrum> {
        let vals: Vec<i128> = (1..=n as i128)
            .map(|k| p.eval_i128(k))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::budget("P(N) overflows i128", "2^127"))?;
        let lo = *vals.iter().min().expect("N ≥ 1");
        let hi = *vals.iter().max().expect("N ≥ 1");
        let c = lo + (hi - lo) / 2;
        let freqs: Vec<i128> = vals.iter().map(|v| v - c).collect();
        let k = freqs.iter().map(|f| f.unsigned_abs()).max().unwrap_or(0) as f64;
        let lipschitz = std::f64::consts::TAU / n as f64 * freqs.iter().map(|f| f.unsigned_abs() as f64).sum::<f64>();
        let t = Turns::from_f64(theta);
        let weights = (1..=n).map(|k| t.mul_u128(k as u128).expi()).collect();
        Ok(Spectrum {
            freqs,
            weights,
            k,
            lipschitz,
        })
    }

    /// Gap bound for a grid of size `g` given the grid maximum `m`.
    fn gap(&self, g: u64, m: f64) -> f64 {
        let lip = self.lipschitz / (2.0 * g as f64);
        let r = std::f64::consts::PI * self.k / g as f64;
        let bern = if r < 1.0 { m * r / (1.0 - r) } else { f64::INFINITY };
        let fft_noise = 8.0 * f64::EPSILON * (g as f64).log2().max(1.0);
        lip.min(bern) + fft_noise
    }

    /// Smallest power-of-two grid whose gap bound, with grid max ≤ `m`, is
    /// at most `target`.
    fn required_grid(&self, m: f64, target: f64) -> Option<u64> {
        let lip = self.lipschitz / (2.0 * target);
        let bern = std::f64::consts::PI * self.k * (m + target) / target;
        let need = lip.min(bern).max(1.0);
        if need > (MAX_GRID as f64) {
            return None;
        }
        let g = (need.ceil() as u64).next_power_of_two();
        (g <= MAX_GRID).then_some(g)
    }

    /// `|f(j/G)|` maximized over `j`; ties go to the smallest `j`.
    fn grid_max(&self, g: u64) -> (f64, u64) {
        let g_hi = g.min(MAX_FFT);
        let g_lo = g / g_hi;
        let shift = 128 - g.trailing_zeros();
        let n = self.weights.len() as f64;
        let mut planner = FftPlanner::<f64>::new();
        let fft = planner.plan_fft_inverse(g_hi as usize);
        let best = (0..g_lo)
            .into_par_iter()
            .map(|j_lo| {
                let mut buf = vec![Complex::new(0.0, 0.0); g_hi as usize];
                for (&f, &w) in self.freqs.iter().zip(&self.weights) {
                    let r = f.rem_euclid(g as i128) as u128;
                    let tw = if j_lo == 0 {
                        Complex::new(1.0, 0.0)
                    } else {
                        Turns((r * j_lo as u128) << shift).expi()
                    };
                    buf[(r % g_hi as u128) as usize] += w * tw;
                }
                fft.process(&mut buf);
                let mut best = (f64::NEG_INFINITY, u64::MAX);
                for (l, z) in buf.iter().enumerate() {
                    let v = z.norm() / n;
                    let j = l as u64 * g_lo + j_lo;
                    if v > best.0 || (v == best.0 && j < best.1) {
                        best = (v, j);
                    }
                }
                best
            })
            .reduce(
                || (f64::NEG_INFINITY, u64::MAX),
                |a, b| {
                    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                        b
                    } else {
                        a
                    }
                },
            );
        best
    }
}

/// Direct evaluation of `|(1/N) Σ e(nθ + P(n)α)|`.
fn twisted_abs(theta: f64, alpha: f64, p: &IntPoly, n: u64) -> f64 {
    twisted_average(theta, alpha, p, n, TwistSign::Plus)
        .map(|r| r.abs())
        .unwrap_or(0.0)
}

/// Golden-section ascent of `h` on `[a, b]`; returns the best point seen.
fn golden_section_max(h: impl Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let r = crate::numerics::GOLDEN;
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (h(x1), h(x2));
    for _ in 0..iters {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = h(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = h(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Certified estimate of `sup_α |(1/N) Σ_{n≤N} e(nθ + P(n)α)|`.
///
/// The average is a trigonometric polynomial in `α` with integer frequencies
/// `P(n)`, so it has period one. After centering the frequencies at
/// `c ≈ (min P + max P)/2` its degree is `K = max |P(n) − c|`, and on a grid
/// of `G` points the maximum `m` satisfies
///
/// `sup ≤ m + min(L/(2G), m·r/(1−r))`, with `L = (2π/N) Σ|P(n) − c|` and
/// `r = πK/G`
///
/// (mean value theorem and Bernstein's inequality respectively). The grid is
/// doubled until that gap is below `target_abs_error`, then refined by a
/// golden-section ascent around the grid argmax.
pub fn sup_scan(theta: f64, p: &IntPoly, n: u64, target_abs_error: f64) -> Result<SupScan> {
    check_n(n)?;
    if !(target_abs_error > 0.0) || !theta.is_finite() {
        return Err(Error::invalid("target_abs_error must be positive and θ finite"));
    }
    let spec = Spectrum::new(theta, p, n)?;
    let mut g = ((4.0 * spec.k).max(1024.0) as u64).next_power_of_two().min(MAX_GRID);
    let (mut m, mut j) = spec.grid_max(g);
    loop {
        let gap = spec.gap(g, m);
        if gap <= target_abs_error {
            break;
        }
        let next = spec.required_grid(m, target_abs_error).map(|r| r.max(2 * g));
        match next {
            Some(ng) if ng <= MAX_GRID => {
                g = ng;
                (m, j) = spec.grid_max(g);
            }
            _ => {
                let reachable = spec.gap(MAX_GRID, m.max(spec.grid_max(MAX_GRID.min(g)).0));
                return Err(Error::Budget {
                    what: format!("sup_scan grid for N = {n}"),
                    limit: "G ≤ 2^28".into(),
                    hint: Some(format!("smallest reachable target_abs_error ≈ {reachable:.3e}")),
                });
            }
        }
    }
    let gap = spec.gap(g, m);
    let alpha0 = j as f64 / g as f64;
    let h = 1.0 / g as f64;
    let (a_ref, v_ref) = golden_section_max(|a| twisted_abs(theta, a, p, n), alpha0 - h, alpha0 + h, 48);
    let (sup_value, argmax) = if v_ref > m { (v_ref, a_ref.rem_euclid(1.0)) } else { (m, alpha0) };
    Ok(SupScan {
        sup_value,
        argmax_alpha: argmax,
        rigorous_upper: sup_value + target_abs_error,
        grid_size: g,
        certified_gap: gap,
    })
}

/// A `target_abs_error` that [`sup_scan`] can certify within [`MAX_GRID`].
///
/// On a coarse grid the maximum `m₀` and its gap give `sup ≤ m₀ + gap₀`;
/// the finest-grid gap with that bound on the grid maximum is returned.
pub fn reachable_abs_error(theta: f64, p: &IntPoly, n: u64) -> Result<f64> {
    check_n(n)?;
    if !theta.is_finite() {
        return Err(Error::invalid("θ must be finite"));
    }
    let spec = Spectrum::new(theta, p, n)?;
    let g = ((4.0 * spec.k).max(1024.0) as u64).next_power_of_two().min(MAX_GRID);
    let (m, _) = spec.grid_max(g);
    let upper = (m + spec.gap(g, m)).min(1.0);
    Ok(spec.gap(MAX_GRID, upper) * (1.0 + 1e-9))
}

/// Right-hand side of van der Corput's inequality
///
/// `2(N+H)/(N²(H+1)) Σ_{h=1}^{H} (1 − h/(H+1)) |Σ_{n=1}^{N−h} u_{n+h} ū_n| + (N+H)/(N(H+1))`.
pub fn vdc_rhs(u: &[Complex], h: usize) -> Result<f64> {
    let n = u.len();
    if h < 1 || h > n {
        return Err(Error::invalid(format!("H = {h} outside [1, N = {n}]")));
    }
    if let Some(z) = u.iter().find(|z| z.norm() > 1.0 + 1e-9) {
        return Err(Error::invalid(format!("|u_n| = {} exceeds 1", z.norm())));
    }
    let (nf, hf) = (n as f64, h as f64);
    let mut corr = 0.0;
    for k in 1..=h {
        let mut acc = ComplexSum::default();
        for i in 0..n - k {
            acc.add(u[i + k] * u[i].conj());
        }
        corr += (1.0 - k as f64 / (hf + 1.0)) * acc.value().norm();
    }
    let rhs = 2.0 * (nf + hf) / (nf * nf * (hf + 1.0)) * corr + (nf + hf) / (nf * (hf + 1.0));
    debug_assert!(
        vdc_lhs(u) <= rhs + 1e-12,
        "van der Corput violated: {} > {rhs}",
        vdc_lhs(u)
    );
    Ok(rhs)
}

/// [`vdc_rhs`] for every `H = 1..=N` at once, from the `N − 1` correlations.
pub fn vdc_rhs_all(u: &[Complex]) -> Result<Vec<f64>> {
    let n = u.len();
    if n == 0 {
        return Err(Error::invalid("empty sequence"));
    }
    if let Some(z) = u.iter().find(|z| z.norm() > 1.0 + 1e-9) {
        return Err(Error::invalid(format!("|u_n| = {} exceeds 1", z.norm())));
    }
    let corr: Vec<f64> = (1..n)
        .into_par_iter()
        .map(|k| {
            let mut acc = ComplexSum::default();
            for i in 0..n - k {
                acc.add(u[i + k] * u[i].conj());
            }
            acc.value().norm()
        })
        .collect();
    let nf = n as f64;
    let (mut s0, mut s1) = (0.0, 0.0);
    let mut out = Vec::with_capacity(n);
    for h in 1..=n {
        if h < n {
            s0 += corr[h - 1];
            s1 += h as f64 * corr[h - 1];
        }
        let hf = h as f64;
        let weighted = s0 - s1 / (hf + 1.0);
        out.push(2.0 * (nf + hf) / (nf * nf * (hf + 1.0)) * weighted + (nf + hf) / (nf * (hf + 1.0)));
    }
    Ok(out)
}

/// `|(1/N) Σ u_n|²`.
pub fn vdc_lhs(u: &[Complex]) -> f64 {
    let mut acc = ComplexSum::default();
    u.iter().for_each(|&z| acc.add(z));
    (acc.value() / u.len() as f64).norm_sqr()
}

/// Explicit majorant of `|(1/N) Σ_{n≤N} e(p(n))|` for `p ∈ M_{δ,M,0}`:
///
/// `(1/(2πN))(1/p'(N) + 1/p'(1)) + (M³/(2πN))∫_1^N t^{−δ}dt
///  + (2πM/N)∫_1^N t^{δ+ε−1}dt + 1/N`.
///
/// The witness is certified with [`class_check_m`] before use.
pub fn euler_decay_bound(p: &HardyExpr, w: &ClassWitness, n: u64) -> Result<f64> {
    if n < 2 {
        return Err(Error::invalid("N must be at least 2"));
    }
    if w.family != ClassFamily::M || w.k != 0 {
        return Err(Error::invalid("the witness must be an M-class witness with k = 0"));
    }
    let w = w.with_s_max(w.s_max.max(n as f64));
    match class_check_m(p, &w, 256)? {
        ClassVerdict::Certified(_) => {}
        ClassVerdict::Violated(v) => {
            return Err(Error::invalid(format!("p is not certified in the class: {v:?}")))
        }
    }
    let nf = n as f64;
    let dp = p.differentiate();
    let (d1, dn) = (dp.eval(1.0), dp.eval(nf));
    if !(d1 > 0.0 && dn > 0.0) {
        return Err(Error::invalid("p' must be positive on [1, N]"));
    }
    let tau = std::f64::consts::TAU;
    let (delta, eps, m) = (w.delta, w.epsilon, w.m_const);
    let int_neg_delta = (nf.powf(1.0 - delta) - 1.0) / (1.0 - delta);
    let int_de = (nf.powf(delta + eps) - 1.0) / (delta + eps);
    Ok((1.0 / dn + 1.0 / d1) / (tau * nf)
        + m.powi(3) / (tau * nf) * int_neg_delta
        + tau * m / nf * int_de
        + 1.0 / nf)
}
