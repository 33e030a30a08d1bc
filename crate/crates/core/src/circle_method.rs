//! Major-arc anatomy of the twisted multiplier
//! `K̂_N(α) = (1/N) Σ_{n≤N} e(P(n)α − nθ)`.
//!
//! Near `α ≡ (j + a/b)/m_d` the multiplier factors as a complete rational sum
//! `S_N^j(a/b)` times an oscillatory integral `V_N`, up to `O(N^{2δ−1})`.
//! This module enumerates those atoms exactly, evaluates both factors and
//! measures how well the model matches direct evaluation.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::diophantine::{n_theta_approximate, NThetaApprox, Rational};
use crate::numerics::{loglog_fit, ComplexSum, LineFit, GOLDEN};
use crate::phase_sums::{ser_complex, twisted_average, IntPoly, TwistSign};
use crate::quadrature::{integrate, QuadResult};
use crate::{Complex, Error, Result, Turns};

/// Largest `N^δ` for which atoms are enumerated.
pub const MAX_DENOMINATOR: f64 = (1u64 << 20) as f64;

/// `K̂_N(α) = (1/N) Σ e(P(n)α − nθ)`.
pub fn khat(theta: f64, p: &IntPoly, n: u64, alpha: f64) -> Result<Complex> {
    Ok(twisted_average(theta, alpha, p, n, TwistSign::Minus)?.value)
}

fn frac(r: &BigRational) -> BigRational {
    r - r.floor()
}

/// The rationals `â_i^j/b̂_i^j ≡ (m_i/m_d)(j + a/b)` for `d−1 ≥ i ≥ 2`,
/// `â_{1,N}^j/b̂_{1,N}^j ≡ (m_1/m_d)(j + a/b) − x_N/y_N`, all in `[0, 1)`,
/// and `b_N^j = lcm(b, b̂_{d−1}^j, …, b̂_{1,N}^j)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DerivedRationals {
    /// Ordered `i = d−1, …, 1`.
    pub rationals: Vec<Rational>,
    #[serde(serialize_with = "ser_bigint")]
    pub b_n_j: BigInt,
}

fn ser_bigint<S: serde::Serializer>(b: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(b)
}

pub fn derived_rationals(a_over_b: &Rational, j: u64, p: &IntPoly, x_over_y: &Rational) -> Result<DerivedRationals> {
    let d = p.degree();
    if d < 2 {
        return Err(Error::invalid("the major-arc decomposition needs deg P ≥ 2"));
    }
    let m_d = p.leading();
    if j >= m_d as u64 {
        return Err(Error::invalid(format!("j = {j} must be below m_d = {m_d}")));
    }
    let base = BigRational::from_integer(BigInt::from(j)) + a_over_b.as_big();
    let m = p.ascending();
    let mut rationals = Vec::with_capacity(d - 1);
    let mut l = a_over_b.den().clone();
    for i in (1..d).rev() {
        let mut r = BigRational::new(BigInt::from(m[i - 1]), BigInt::from(m_d)) * &base;
        if i == 1 {
            r -= x_over_y.as_big();
        }
        let r = frac(&r);
        l = l.lcm(r.denom());
        rationals.push(Rational::from_big(r));
    }
    Ok(DerivedRationals { rationals, b_n_j: l })
}

/// One major-box term `S_N^j(a/b)·V_N(α − center)` on its window.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultiplierAtom {
    pub n: u64,
    pub j: u64,
    pub a_over_b: Rational,
    /// `(i = d−1, …, 1)` companions of `a/b`.
    pub derived: Vec<Rational>,
    pub b_n_j: u64,
    /// `⌊log₂ b_N^j⌋`.
    pub t: u32,
    #[serde(serialize_with = "ser_complex")]
    pub s: Complex,
    pub gamma_n: f64,
    /// `(j + a/b)/m_d mod 1`.
    pub center: f64,
    /// `N^{δ−d}/m_d`.
    pub half_width: f64,
    /// True for the `S_N^0(0/1)` term.
    pub zero_branch: bool,
}

impl MultiplierAtom {
    pub fn csv_header() -> &'static str {
        "N,j,a,b,b_N_j,re_S,im_S,center,half_width"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{:.17e},{:.17e},{:.17e},{:.17e}",
            self.n,
            self.j,
            self.a_over_b.num(),
            self.a_over_b.den(),
            self.b_n_j,
            self.s.re,
            self.s.im,
            self.center,
            self.half_width
        )
    }

    /// Signed distance from the center, wrapped into `[−1/2, 1/2)`.
    pub fn offset(&self, alpha: f64) -> f64 {
        let x = alpha - self.center;
        x - x.round()
    }

    /// Window membership, with slack for the rounding of `α` near 1.
    pub fn contains(&self, alpha: f64) -> bool {
        self.offset(alpha).abs() <= self.half_width + 4.0 * f64::EPSILON
    }
}

/// `S = (1/B) Σ_{r=1}^{B} e(r^d a/b + r^{d−1} â_{d−1}/b̂_{d−1} + … + r â_1/b̂_1)`
/// with `B = b_N^j`, summed from exact residues mod `B`.
pub fn s_sum(a_over_b: &Rational, derived: &[Rational], b_n_j: u64) -> Result<Complex> {
    if b_n_j == 0 {
        return Err(Error::invalid("b_N^j must be positive"));
    }
    let big_b = BigInt::from(b_n_j);
    // Coefficients as residues A_i mod B, highest power first.
    let mut coeffs: Vec<u128> = Vec::with_capacity(derived.len() + 1);
    for r in std::iter::once(a_over_b).chain(derived) {
        let (q, rem) = big_b.div_rem(r.den());
        if !rem.is_zero() {
            return Err(Error::invalid(format!("{} does not divide b_N^j = {b_n_j}", r.den())));
        }
        let a = (r.num() * q).mod_floor(&big_b);
        coeffs.push(a.to_u128().expect("below B"));
    }
    let b = b_n_j as u128;
    let mut acc = ComplexSum::default();
    for r in 1..=b {
        let mut k: u128 = 0;
        for &c in &coeffs {
            k = ((k + c) * r) % b;
        }
        acc.add(Turns::from_integer_ratio(k as i128, b).expi());
    }
    Ok(acc.value() / b as f64)
}

/// `S_N^0(0/1) = (1/y_N) Σ_{r=1}^{y_N} e(−r x_N/y_N)`.
pub fn s_zero(x_over_y: &Rational) -> Result<Complex> {
    let y = x_over_y
        .den()
        .to_u64()
        .ok_or_else(|| Error::budget("y_N", u64::MAX))?;
    let neg = Rational::from_big(frac(&-x_over_y.as_big().clone()));
    s_sum(&neg, &[], y)
}

/// `ω_N = ∫_0^1 e(Ntγ) dt = (e(Nγ) − 1)/(2πiNγ)`, or 1 when `Nγ = 0`.
pub fn omega(n: u64, gamma: f64) -> Complex {
    let x = n as f64 * gamma;
    if x == 0.0 {
        return Complex::new(1.0, 0.0);
    }
    let (s, c) = (std::f64::consts::TAU * x).sin_cos();
    (Complex::new(c, s) - 1.0) / Complex::new(0.0, std::f64::consts::TAU * x)
}

pub const V_TOLERANCE: f64 = 1e-9;

/// `V_N(β) = ∫_0^1 e(N^d m_d t^d β + N t γ) dt` by adaptive Gauss-Kronrod.
pub fn v_integral(n: u64, d: usize, m_d: i64, beta: f64, gamma: f64) -> Result<QuadResult> {
    if !(beta.is_finite() && gamma.is_finite()) || d == 0 {
        return Err(Error::invalid("β and γ must be finite and d ≥ 1"));
    }
    let nf = n as f64;
    let a = nf.powi(d as i32) * m_d as f64 * beta;
    let g = nf * gamma;
    let oscillations = a.abs() + g.abs();
    if oscillations > 1e7 {
        return Err(Error::budget("oscillation count of V_N", "1e7"));
    }
    let pieces = (4.0 * oscillations).ceil() as usize + 1;
    let phase = |t: f64| {
        let ph = Turns::from_f64(a * t.powi(d as i32)) + Turns::from_f64(g * t);
        ph.expi()
    };
    integrate(phase, 0.0, 1.0, V_TOLERANCE, pieces, pieces.saturating_mul(64).max(1 << 12))
}

/// `2π N^d m_d |β|/(d+1)`: bound on `|V_N(β) − ω_N|` from `|e(x) − e(y)| ≤ 2π|x − y|`.
pub fn mean_value_bound(n: u64, d: usize, m_d: i64, beta: f64) -> f64 {
    std::f64::consts::TAU * (n as f64).powi(d as i32) * m_d as f64 * beta.abs() / (d as f64 + 1.0)
}

/// `C_d = (5·2^{d−1} − 2)/(2π d!)^{1/d}`, the van der Corput constant for
/// `|V_N(β)| ≤ C_d/(N m_d^{1/d} |β|^{1/d})` (valid for `d ≥ 2`).
pub fn envelope_constant(d: usize) -> f64 {
    let fact: f64 = (1..=d).map(|k| k as f64).product();
    (5.0 * 2f64.powi(d as i32 - 1) - 2.0) / (std::f64::consts::TAU * fact).powf(1.0 / d as f64)
}

pub fn envelope_bound(n: u64, d: usize, m_d: i64, beta: f64) -> f64 {
    envelope_constant(d) / (n as f64 * (m_d as f64).powf(1.0 / d as f64) * beta.abs().powf(1.0 / d as f64))
}

/// Window overlap found while building a model.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WindowOverlap {
    pub first: (u64, Rational),
    pub second: (u64, Rational),
    pub center_gap: f64,
    pub half_widths: f64,
}

/// All atoms at one `N`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Enumeration {
    pub n: u64,
    pub delta: f64,
    pub approximate: Option<NThetaApprox>,
    /// `A_N` atoms, excluding the `S_N^0(0/1)` branch.
    pub atoms: Vec<MultiplierAtom>,
    pub zero_atom: Option<MultiplierAtom>,
    /// `t ↦ |A_{N,t}|`.
    pub group_sizes: BTreeMap<u32, usize>,
    /// `max_t |A_{N,t}|/4^t`.
    pub max_density: f64,
    pub overlaps: Vec<WindowOverlap>,
}

impl Enumeration {
    /// Explicit constant in `|A_{N,t}| ≤ C·4^t`: `b_N^j < 2^{t+1}` and
    /// `b | b_N^j` leave fewer than `2·4^t` fractions for each `j`.
    pub fn density_constant(p: &IntPoly) -> f64 {
        2.0 * p.leading() as f64
    }

    pub fn all_atoms(&self) -> impl Iterator<Item = &MultiplierAtom> {
        self.zero_atom.iter().chain(self.atoms.iter())
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta <= 0.2 {
        Ok(())
    } else {
        Err(Error::invalid(format!("δ = {delta} must lie in (0, 0.2]")))
    }
}

fn log2_floor(b: u64) -> u32 {
    63 - b.leading_zeros()
}

/// Enumerates `A_N = ⋃_j A_N^j` together with the `S_N^0(0/1)` branch.
pub fn enumerate_a_n(theta: f64, p: &IntPoly, n: u64, delta: f64) -> Result<Enumeration> {
    check_delta(delta)?;
    if p.degree() < 2 {
        return Err(Error::invalid("the major-arc decomposition needs deg P ≥ 2"));
    }
    let nf = n as f64;
    let bound = nf.powf(delta);
    if bound > MAX_DENOMINATOR {
        return Err(Error::Budget {
            what: "major-box enumeration".into(),
            limit: "N^δ ≤ 2^20".into(),
            hint: Some(format!("N^δ = {bound:.3e}")),
        });
    }
    let m_d = p.leading();
    let d = p.degree();
    let half_width = nf.powf(delta - d as f64) / m_d as f64;
    let approximate = n_theta_approximate(theta, n, delta, m_d as u64)?;
    let mut out = Enumeration {
        n,
        delta,
        approximate: approximate.clone(),
        atoms: Vec::new(),
        zero_atom: None,
        group_sizes: BTreeMap::new(),
        max_density: 0.0,
        overlaps: Vec::new(),
    };
    let Some(apx) = approximate else {
        return Ok(out);
    };
    let xy = apx.x_over_y.clone();
    let b_max = bound.floor() as u64;
    let make = |j: u64, ab: Rational, zero_branch: bool| -> Result<Option<MultiplierAtom>> {
        let dr = derived_rationals(&ab, j, p, &xy)?;
        let b_n_j = match dr.b_n_j.to_u64() {
            Some(b) if zero_branch || (b as f64) <= bound => b,
            _ => return Ok(None),
        };
        let s = s_sum(&ab, &dr.rationals, b_n_j)?;
        let c = (j as f64 + ab.to_f64()) / m_d as f64;
        Ok(Some(MultiplierAtom {
            n,
            j,
            derived: dr.rationals,
            b_n_j,
            t: log2_floor(b_n_j),
            s,
            gamma_n: apx.gamma,
            center: c - c.floor(),
            half_width,
            zero_branch,
            a_over_b: ab,
        }))
    };
    out.zero_atom = make(0, Rational::integer(0), true)?;
    let pairs: Vec<(u64, u64, u64)> = (0..m_d as u64)
        .flat_map(|j| {
            (1..=b_max).flat_map(move |b| {
                (0..b)
                    .filter(move |&a| a.gcd(&b) == 1 && !(j == 0 && a == 0))
                    .map(move |a| (j, a, b))
            })
        })
        .collect();
    let atoms: Vec<Option<MultiplierAtom>> = pairs
        .par_iter()
        .map(|&(j, a, b)| make(j, Rational::new(a, b).expect("b ≥ 1"), false))
        .collect::<Result<_>>()?;
    out.atoms = atoms.into_iter().flatten().collect();
    for a in &out.atoms {
        *out.group_sizes.entry(a.t).or_default() += 1;
    }
    out.max_density = out
        .group_sizes
        .iter()
        .map(|(&t, &c)| c as f64 / 4f64.powi(t as i32))
        .fold(0.0, f64::max);
    out.overlaps = find_overlaps(out.all_atoms());
    Ok(out)
}

fn find_overlaps<'a>(atoms: impl Iterator<Item = &'a MultiplierAtom>) -> Vec<WindowOverlap> {
    let mut v: Vec<&MultiplierAtom> = atoms.collect();
    v.sort_by(|a, b| a.center.total_cmp(&b.center));
    let mut out = Vec::new();
    let k = v.len();
    if k < 2 {
        return out;
    }
    for i in 0..k {
        let (a, b) = (v[i], v[(i + 1) % k]);
        let gap = (b.center - a.center).rem_euclid(1.0);
        let gap = if i + 1 == k { gap } else { gap.min(1.0 - gap) };
        if gap <= a.half_width + b.half_width {
            out.push(WindowOverlap {
                first: (a.j, a.a_over_b.clone()),
                second: (b.j, b.a_over_b.clone()),
                center_gap: gap,
                half_widths: a.half_width + b.half_width,
            });
        }
        if k == 2 {
            break;
        }
    }
    out
}

/// `^0R̂_N + R̂_N` at one `N`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MajorArcModel {
    pub theta: f64,
    pub poly: IntPoly,
    pub enumeration: Enumeration,
}

impl MajorArcModel {
    pub fn build(theta: f64, p: &IntPoly, n: u64, delta: f64) -> Result<MajorArcModel> {
        Ok(MajorArcModel {
            theta,
            poly: p.clone(),
            enumeration: enumerate_a_n(theta, p, n, delta)?,
        })
    }

    pub fn n(&self) -> u64 {
        self.enumeration.n
    }

    /// Overlapping windows; nonempty means the atoms are not separated at
    /// this `N` and [`MajorArcModel::evaluate`] adds overlapping terms.
    pub fn warnings(&self) -> &[WindowOverlap] {
        &self.enumeration.overlaps
    }

    pub fn in_window(&self, alpha: f64) -> bool {
        self.enumeration.all_atoms().any(|a| a.contains(alpha))
    }

    /// `Σ S·V(α − center)` over the atoms whose window contains `α`.
    pub fn evaluate(&self, alpha: f64) -> Result<Complex> {
        let mut acc = Complex::new(0.0, 0.0);
        for a in self.enumeration.all_atoms() {
            if a.contains(alpha) {
                let v = v_integral(a.n, self.poly.degree(), self.poly.leading(), a.offset(alpha), a.gamma_n)?;
                acc += a.s * v.value;
            }
        }
        Ok(acc)
    }

    /// `count` equispaced points across each window.
    pub fn window_samples(&self, count: usize) -> Vec<f64> {
        let count = count.max(1);
        let mut out = Vec::new();
        for a in self.enumeration.all_atoms() {
            for k in 0..count {
                let u = if count == 1 { 0.0 } else { 2.0 * k as f64 / (count - 1) as f64 - 1.0 };
                out.push((a.center + u * a.half_width).rem_euclid(1.0));
            }
        }
        out
    }
}

/// Maximum residual `|K̂_N − (^0R̂_N + R̂_N)|` over window samples, per `N`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualRow {
    pub n: u64,
    pub samples: usize,
    pub max_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualReport {
    pub delta: f64,
    pub rows: Vec<ResidualRow>,
    /// Log-log fit over rows that have samples.
    pub fit: Option<LineFit>,
    /// `−slope`, to compare with `1 − 2δ`.
    pub exponent: Option<f64>,
}

pub fn multiplier_residual(
    theta: f64,
    p: &IntPoly,
    ns: &[u64],
    delta: f64,
    samples_per_window: usize,
) -> Result<ResidualReport> {
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let model = MajorArcModel::build(theta, p, n, delta)?;
        let pts = model.window_samples(samples_per_window);
        let res: Vec<f64> = if model.enumeration.all_atoms().next().is_none() {
            Vec::new()
        } else {
            pts.par_iter()
                .map(|&a| Ok((khat(theta, p, n, a)? - model.evaluate(a)?).norm()))
                .collect::<Result<_>>()?
        };
        rows.push(ResidualRow {
            n,
            samples: res.len(),
            max_residual: res.iter().copied().fold(0.0, f64::max),
        });
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = rows
        .iter()
        .filter(|r| r.samples > 0)
        .map(|r| (r.n as f64, r.max_residual))
        .unzip();
    let fit = loglog_fit(&xs, &ys);
    Ok(ResidualReport {
        delta,
        rows,
        exponent: fit.map(|f| -f.slope),
        fit,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinorArcRow {
    pub n: u64,
    pub samples: usize,
    pub max_minor: f64,
    /// Largest `|K̂_N|` over window samples (zero when no windows exist).
    pub max_major: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinorArcReport {
    pub rows: Vec<MinorArcRow>,
    /// Fitted `κ` in `max |K̂_N| ≈ C N^{−κ}` off the windows.
    pub kappa: Option<f64>,
    /// Fewer than two rows: no fit possible.
    pub degenerate: bool,
}

/// `max |K̂_N(α)|` over `α_i = frac(i·φ)` outside all windows.
pub fn minor_arc_decay(theta: f64, p: &IntPoly, ns: &[u64], delta: f64, samples: usize) -> Result<MinorArcReport> {
    if samples < 1000 {
        return Err(Error::invalid("at least 10^3 samples are required"));
    }
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let model = MajorArcModel::build(theta, p, n, delta)?;
        let pts: Vec<f64> = (1..=samples as u64)
            .map(|i| (Turns::from_f64(GOLDEN).mul_u128(i as u128)).to_f64())
            .filter(|&a| !model.in_window(a))
            .collect();
        let vals: Vec<f64> = pts
            .par_iter()
            .map(|&a| khat(theta, p, n, a).map(|z| z.norm()))
            .collect::<Result<_>>()?;
        let major: Vec<f64> = model
            .window_samples(5)
            .par_iter()
            .map(|&a| khat(theta, p, n, a).map(|z| z.norm()))
            .collect::<Result<_>>()?;
        rows.push(MinorArcRow {
            n,
            samples: vals.len(),
            max_minor: vals.iter().copied().fold(0.0, f64::max),
            max_major: major.iter().copied().fold(0.0, f64::max),
        });
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = rows.iter().map(|r| (r.n as f64, r.max_minor)).unzip();
    let fit = if rows.len() >= 2 { loglog_fit(&xs, &ys) } else { None };
    Ok(MinorArcReport {
        kappa: fit.map(|f| -f.slope),
        degenerate: rows.len() < 2,
        rows,
    })
}

/// `I_ρ = {⌊ρ^k⌋ : k ≥ 1}` up to `n_max`, deduplicated, keeping values ≥ 2.
pub fn lacunary_set(rho: f64, n_max: u64) -> Result<Vec<u64>> {
    if !(rho > 1.0) {
        return Err(Error::invalid("ρ must exceed 1"));
    }
    let mut out = Vec::new();
    let mut k = 1i32;
    loop {
        let v = rho.powi(k).floor();
        if v > n_max as f64 {
            break;
        }
        let v = v as u64;
        if v >= 2 && out.last() != Some(&v) {
            out.push(v);
        }
        k += 1;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubdivisionRow {
    pub n: u64,
    pub approximate: Option<Rational>,
    /// `t` values with `A_{N,t} ≠ ∅`.
    pub nonempty_t: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubdivisionViolation {
    pub t: u32,
    pub first: (u64, Option<Rational>),
    pub second: (u64, Option<Rational>),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubdivisionReport {
    pub rows: Vec<SubdivisionRow>,
    pub violations: Vec<SubdivisionViolation>,
    pub max_density: f64,
    pub passed: bool,
}

/// Checks that, for each `t`, every scale `N ∈ I_ρ` with `A_{N,t} ≠ ∅`
/// shares one `N`-`θ` approximate, i.e. lies in a single block
/// `[N_{l(t)}, N_{l(t)+1})`.
pub fn subdivision_check(theta: f64, p: &IntPoly, delta: f64, rho: f64, n_max: u64) -> Result<SubdivisionReport> {
    let scales = lacunary_set(rho, n_max)?;
    let mut rows = Vec::with_capacity(scales.len());
    let mut max_density: f64 = 0.0;
    for &n in &scales {
        let e = enumerate_a_n(theta, p, n, delta)?;
        max_density = max_density.max(e.max_density);
        rows.push(SubdivisionRow {
            n,
            approximate: e.approximate.map(|a| a.x_over_y),
            nonempty_t: e.group_sizes.keys().copied().collect(),
        });
    }
    let mut first_seen: BTreeMap<u32, (u64, Option<Rational>)> = BTreeMap::new();
    let mut violations = Vec::new();
    for row in &rows {
        for &t in &row.nonempty_t {
            match first_seen.get(&t) {
                None => {
                    first_seen.insert(t, (row.n, row.approximate.clone()));
                }
                Some((n0, a0)) if *a0 != row.approximate => violations.push(SubdivisionViolation {
                    t,
                    first: (*n0, a0.clone()),
                    second: (row.n, row.approximate.clone()),
                }),
                Some(_) => {}
            }
        }
    }
    Ok(SubdivisionReport {
        passed: violations.is_empty(),
        rows,
        violations,
        max_density,
    })
}

/// Fitted `ν` in `|S_N^j(a/b)| ≈ C (b_N^j)^{−ν}` over atoms with `b_N^j ≥ 2`.
pub fn hua_exponent_fit(atoms: &[MultiplierAtom]) -> Option<f64> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = atoms
        .iter()
        .filter(|a| a.b_n_j >= 2 && a.s.norm() > 0.0)
        .map(|a| (a.b_n_j as f64, a.s.norm()))
        .unzip();
    loglog_fit(&xs, &ys).map(|f| -f.slope)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn r(a: i64, b: i64) -> Rational {
        Rational::new(a, b).unwrap()
    }

    #[test]
    fn khat_trivial() {
        let p = IntPoly::monomial(2);
        assert!((khat(0.0, &p, 10, 0.0).unwrap() - 1.0).norm() < 1e-15);
        assert!(khat(1.0 / 3.0, &p, 3, 0.0).unwrap().norm() < 1e-15);
    }

    #[test]
    fn derived_examples() {
        let sq = IntPoly::monomial(2);
        let z = derived_rationals(&r(0, 1), 0, &sq, &r(0, 1)).unwrap();
        assert_eq!(z.rationals, vec![r(0, 1)]);
        assert_eq!(z.b_n_j, BigInt::one());
        let sq1 = IntPoly::parse("n^2+n").unwrap();
        let h = derived_rationals(&r(1, 2), 0, &sq1, &r(1, 3)).unwrap();
        assert_eq!(h.rationals, vec![r(1, 6)]);
        assert_eq!(h.b_n_j, BigInt::from(6));
        let p = IntPoly::parse("2n^2+n").unwrap();
        let g = derived_rationals(&r(1, 3), 1, &p, &r(0, 1)).unwrap();
        assert_eq!(g.rationals, vec![r(2, 3)]);
        assert_eq!(g.b_n_j, BigInt::from(3));
        let cubic = IntPoly::parse("3n^3+2n^2+n").unwrap();
        let c = derived_rationals(&r(1, 2), 2, &cubic, &r(1, 5)).unwrap();
        // (2/3)(5/2) = 5/3 ≡ 2/3; (1/3)(5/2) − 1/5 = 5/6 − 1/5 = 19/30.
        assert_eq!(c.rationals, vec![r(2, 3), r(19, 30)]);
        assert_eq!(c.b_n_j, BigInt::from(30));
        assert!(derived_rationals(&r(1, 2), 3, &cubic, &r(0, 1)).is_err());
    }

    #[test]
    fn s_examples() {
        assert!((s_zero(&r(0, 1)).unwrap() - 1.0).norm() < 1e-15);
        assert!(s_zero(&r(1, 2)).unwrap().norm() < 1e-15);
        for b in [3i64, 5, 7, 11, 13, 101, 199] {
            for a in [1, 2] {
                let s = s_sum(&r(a, b), &[r(0, 1)], b as u64).unwrap();
                assert!((s.norm() - 1.0 / (b as f64).sqrt()).abs() < 1e-12, "b = {b}");
            }
        }
        assert!(s_sum(&r(1, 3), &[], 4).is_err());
    }

    #[test]
    fn omega_and_v() {
        assert_eq!(omega(100, 0.0), Complex::new(1.0, 0.0));
        for &g in &[0.0, 0.013, -0.2] {
            let v = v_integral(64, 2, 1, 0.0, g).unwrap();
            assert!((v.value - omega(64, g)).norm() < 1e-9);
        }
        let n = 1u64 << 10;
        for k in 0..40 {
            let beta = 1e-9 * 10f64.powf(k as f64 * 6.0 / 39.0);
            let v = v_integral(n, 2, 1, beta, 0.0).unwrap().value;
            assert!((v - omega(n, 0.0)).norm() <= mean_value_bound(n, 2, 1, beta) + 1e-9);
            assert!(v.norm() <= envelope_bound(n, 2, 1, beta) + 1e-9);
        }
    }

    #[test]
    fn enumeration_theta_zero() {
        let sq = IntPoly::monomial(2);
        let e = enumerate_a_n(0.0, &sq, 1 << 10, 0.2).unwrap();
        let got: Vec<Rational> = e.atoms.iter().map(|a| a.a_over_b.clone()).collect();
        assert_eq!(got, vec![r(1, 2), r(1, 3), r(2, 3), r(1, 4), r(3, 4)]);
        let zero = e.zero_atom.as_ref().unwrap();
        assert!((zero.s - 1.0).norm() < 1e-15);
        assert_eq!(e.group_sizes.get(&1), Some(&3));
        assert_eq!(e.group_sizes.get(&2), Some(&2));
        assert!(e.max_density <= Enumeration::density_constant(&sq));
        assert!(e.overlaps.is_empty());
        // No approximate: nothing to enumerate.
        let none = enumerate_a_n(0.5, &sq, 1 << 12, 0.05).unwrap();
        assert!(none.approximate.is_none() && none.atoms.is_empty() && none.zero_atom.is_none());
        assert!(enumerate_a_n(0.0, &sq, 1 << 10, 0.3).is_err());
    }

    #[test]
    fn model_at_center_is_s_omega() {
        let sq = IntPoly::monomial(2);
        let m = MajorArcModel::build(0.0, &sq, 1 << 10, 0.2).unwrap();
        for a in m.enumeration.all_atoms() {
            let z = m.evaluate(a.center).unwrap();
            assert!((z - a.s * omega(a.n, a.gamma_n)).norm() < 1e-9);
        }
        assert_eq!(m.evaluate(0.1).unwrap(), Complex::new(0.0, 0.0));
    }

    #[test]
    fn lacunary() {
        assert_eq!(lacunary_set(2.0, 20).unwrap(), vec![2, 4, 8, 16]);
        assert_eq!(lacunary_set(1.5, 5).unwrap(), vec![2, 3, 5]);
        assert!(lacunary_set(1.0, 5).is_err());
    }

    #[test]
    fn subdivision_rational_theta() {
        let rep = subdivision_check(0.25, &IntPoly::monomial(2), 0.1, 2.0, 1 << 16).unwrap();
        assert!(rep.passed);
    }
}
