//! Continued fractions, Dirichlet approximation, badly approximable
//! constants, continued-fraction Cantor sets and `N`-`θ` rational
//! approximates.
//!
//! Real inputs are doubles. Where exactness matters the double is read as the
//! dyadic rational it actually stores, and all recurrences run on big
//! integers.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::numerics::{least_squares, LineFit};
use crate::{Error, Result};

/// A reduced fraction with positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Rational> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::invalid("zero denominator"));
        }
        Ok(Rational(BigRational::new(num.into(), den)))
    }

    pub fn from_big(r: BigRational) -> Rational {
        Rational(r)
    }

    pub fn integer(n: impl Into<BigInt>) -> Rational {
        Rational(BigRational::from_integer(n.into()))
    }

    /// The exact value stored in a finite double.
    pub fn from_f64(x: f64) -> Result<Rational> {
        BigRational::from_float(x)
            .map(Rational)
            .ok_or_else(|| Error::invalid("non-finite value"))
    }

    pub fn num(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn den(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// `(num, den)` when both fit in `i64`.
    pub fn to_i64_pair(&self) -> Option<(i64, i64)> {
        Some((self.num().to_i64()?, self.den().to_i64()?))
    }

    /// `|self − x|` for a double `x`, computed exactly then rounded.
    pub fn distance_to(&self, x: f64) -> f64 {
        match BigRational::from_float(x) {
            Some(r) => (&self.0 - r).abs().to_f64().unwrap_or(f64::INFINITY),
            None => f64::NAN,
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num(), self.den())
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl std::str::FromStr for Rational {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (n, d) = s.split_once('/').unwrap_or((s, "1"));
        let n: BigInt = n.trim().parse().map_err(|_| Error::parse(format!("bad numerator in '{s}'")))?;
        let d: BigInt = d.trim().parse().map_err(|_| Error::parse(format!("bad denominator in '{s}'")))?;
        Rational::new(n, d)
    }
}

/// Why a continued-fraction expansion stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CfStop {
    /// The input is rational with the returned digits.
    Terminated,
    /// The next convergent would no longer be determined by the double.
    ResolutionExhausted,
    /// `max_terms` digits were produced.
    MaxTerms,
    /// Generated from an exact periodic description.
    Periodic,
}

/// Digits `(a_1, a_2, …)` of `θ = [0; a_1, a_2, …]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CFExpansion {
    pub digits: Vec<u64>,
    pub value: f64,
    pub stop: CfStop,
}

const RESOLUTION_Q: u64 = 1 << 26;
const RATIONAL_HIT_Q: u64 = 1 << 13;

impl CFExpansion {
    /// `[0; a_1, …, a_k]` evaluated exactly.
    pub fn from_digits(digits: Vec<u64>) -> Result<CFExpansion> {
        if digits.is_empty() || digits.contains(&0) {
            return Err(Error::invalid("digits must be nonempty and ≥ 1"));
        }
        let value = convergent_pairs(&digits)
            .last()
            .map(|(p, q)| BigRational::new(p.clone(), q.clone()).to_f64().unwrap_or(f64::NAN))
            .unwrap_or(f64::NAN);
        Ok(CFExpansion {
            digits,
            value,
            stop: CfStop::Terminated,
        })
    }

    /// The quadratic irrational `[0; prefix, period, period, …]`, with
    /// `terms` digits listed.
    pub fn periodic(prefix: &[u64], period: &[u64], terms: usize) -> Result<CFExpansion> {
        if period.is_empty() || prefix.contains(&0) || period.contains(&0) {
            return Err(Error::invalid("period must be nonempty and all digits ≥ 1"));
        }
        // y = [a_1; a_2, …, a_m, y] solves q_{m−1}y² + (q_{m−2} − p_{m−1})y − p_{m−2} = 0,
        // with p/q the convergents of [a_1; …, a_m] written as Möbius coefficients.
        let (mut p0, mut q0, mut p1, mut q1) = (1.0f64, 0.0f64, period[0] as f64, 1.0f64);
        for &a in &period[1..] {
            let (p2, q2) = (a as f64 * p1 + p0, a as f64 * q1 + q0);
            (p0, q0, p1, q1) = (p1, q1, p2, q2);
        }
        let (a, b, c) = (q1, q0 - p1, -p0);
        let disc = (b * b - 4.0 * a * c).sqrt();
        let y = if b >= 0.0 { (-2.0 * c) / (b + disc) } else { (-b + disc) / (2.0 * a) };
        // θ = [0; prefix, y] = (P_k y + P_{k−1})/(Q_k y + Q_{k−1}).
        let (mut pp, mut qp, mut pc, mut qc) = (1.0f64, 0.0f64, 0.0f64, 1.0f64);
        for &a in prefix {
            let (p2, q2) = (a as f64 * pc + pp, a as f64 * qc + qp);
            (pp, qp, pc, qc) = (pc, qc, p2, q2);
        }
        let value = if prefix.is_empty() { 1.0 / y } else { (pc * y + pp) / (qc * y + qp) };
        let mut digits: Vec<u64> = prefix.to_vec();
        while digits.len() < terms.max(prefix.len() + period.len()) {
            digits.extend_from_slice(period);
        }
        digits.truncate(terms.max(1));
        Ok(CFExpansion {
            digits,
            value,
            stop: CfStop::Periodic,
        })
    }

    /// Largest digit.
    pub fn max_digit(&self) -> u64 {
        self.digits.iter().copied().max().unwrap_or(0)
    }

    pub fn min_digit(&self) -> u64 {
        self.digits.iter().copied().min().unwrap_or(0)
    }
}

/// `(p_k, q_k)` for `k = 1..=len`, from `p_0/q_0 = 0/1` and `p_{−1}/q_{−1} = 1/0`.
fn convergent_pairs(digits: &[u64]) -> Vec<(BigInt, BigInt)> {
    let (mut pm, mut qm) = (BigInt::one(), BigInt::zero());
    let (mut p, mut q) = (BigInt::zero(), BigInt::one());
    let mut out = Vec::with_capacity(digits.len());
    for &a in digits {
        let a = BigInt::from(a);
        let pn = &a * &p + &pm;
        let qn = &a * &q + &qm;
        (pm, qm) = (std::mem::replace(&mut p, pn), std::mem::replace(&mut q, qn));
        out.push((p.clone(), q.clone()));
    }
    out
}

/// Continued-fraction digits of the exact rational `r ∈ (0, 1)`, at most
/// `max_terms` of them. The second value is true when the expansion ended.
fn rational_digits(r: &BigRational, max_terms: usize) -> (Vec<u64>, bool) {
    let (mut n, mut d) = (r.numer().clone(), r.denom().clone());
    let mut digits = Vec::new();
    while !n.is_zero() && digits.len() < max_terms {
        let (a, rem) = d.div_rem(&n);
        digits.push(a.to_u64().unwrap_or(u64::MAX));
        d = std::mem::replace(&mut n, rem);
    }
    (digits, n.is_zero())
}

/// Leading continued-fraction digits of `θ ∈ (0, 1)`.
///
/// A digit is only emitted while its convergent denominator stays below
/// `2^26`, the point past which the double no longer pins convergents down.
/// A huge digit right after a small denominator is read as an exact rational
/// hit, so `1/3` returns `[3]`, terminated.
pub fn cf_expand(theta: f64, max_terms: usize) -> Result<CFExpansion> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::invalid(format!("θ = {theta} is not in (0, 1)")));
    }
    if max_terms == 0 {
        return Err(Error::invalid("max_terms must be at least 1"));
    }
    let exact = BigRational::from_float(theta).expect("finite");
    let (all, ended) = rational_digits(&exact, max_terms + 1);
    let (mut qm, mut q) = (0u128, 1u128);
    let mut digits = Vec::new();
    let mut stop = if ended && all.len() <= max_terms {
        CfStop::Terminated
    } else {
        CfStop::MaxTerms
    };
    for &a in all.iter().take(max_terms) {
        let qn = (a as u128).saturating_mul(q).saturating_add(qm);
        if qn > RESOLUTION_Q as u128 {
            stop = if q <= RATIONAL_HIT_Q as u128 {
                CfStop::Terminated
            } else {
                CfStop::ResolutionExhausted
            };
            break;
        }
        digits.push(a);
        (qm, q) = (q, qn);
    }
    if digits.is_empty() {
        // θ is smaller than 2^-26; the first digit alone is still meaningful.
        digits.push(all[0]);
        stop = CfStop::ResolutionExhausted;
    }
    Ok(CFExpansion {
        digits,
        value: theta,
        stop,
    })
}

/// Convergents `p_k/q_k` of `[0; a_1, …, a_k]`.
pub fn convergents(cf: &CFExpansion) -> Result<Vec<Rational>> {
    if cf.digits.is_empty() {
        return Err(Error::invalid("empty expansion"));
    }
    Ok(convergent_pairs(&cf.digits)
        .into_iter()
        .map(|(p, q)| Rational(BigRational::new(p, q)))
        .collect())
}

/// Integer part and exact fractional part of a double.
fn split_exact(alpha: f64) -> Result<(BigInt, BigRational)> {
    let r = BigRational::from_float(alpha).ok_or_else(|| Error::invalid("α must be finite"))?;
    let fl = r.floor();
    Ok((fl.to_integer(), r - fl))
}

/// Convergent pairs of the exact fraction `r ∈ [0, 1)` with `q ≤ q_max`,
/// preceded by `0/1`.
fn bounded_convergents(r: &BigRational, q_max: &BigInt) -> Vec<(BigInt, BigInt)> {
    let mut out = vec![(BigInt::zero(), BigInt::one())];
    if r.is_zero() {
        return out;
    }
    let (mut pm, mut qm) = (BigInt::one(), BigInt::zero());
    let (mut p, mut q) = (BigInt::zero(), BigInt::one());
    let (mut n, mut d) = (r.numer().clone(), r.denom().clone());
    while !n.is_zero() {
        let (a, rem) = d.div_rem(&n);
        let pn = &a * &p + &pm;
        let qn = &a * &q + &qm;
        if &qn > q_max {
            break;
        }
        (pm, qm) = (std::mem::replace(&mut p, pn), std::mem::replace(&mut q, qn));
        out.push((p.clone(), q.clone()));
        d = std::mem::replace(&mut n, rem);
    }
    out
}

/// `p/q` with `q ≤ Q` and `|α − p/q| ≤ 1/(qQ)`: the last convergent of the
/// exact value of `α` whose denominator does not exceed `Q`.
pub fn dirichlet_approx(alpha: f64, q_max: u64) -> Result<Rational> {
    if q_max == 0 {
        return Err(Error::invalid("Q must be at least 1"));
    }
    let (int, frac) = split_exact(alpha)?;
    let (p, q) = bounded_convergents(&frac, &BigInt::from(q_max))
        .pop()
        .expect("0/1 always present");
    Ok(Rational(BigRational::new(p + int * &q, q)))
}

/// `q·‖qθ‖` using a fused multiply-add for the product.
fn scaled_distance(q: f64, theta: f64) -> f64 {
    let r = (q * theta).round();
    q * q.mul_add(theta, -r).abs()
}

fn convergent_denominators(theta: f64, q_max: u64) -> Result<Vec<u64>> {
    let (_, frac) = split_exact(theta)?;
    Ok(bounded_convergents(&frac, &BigInt::from(q_max))
        .into_iter()
        .filter_map(|(_, q)| q.to_u64())
        .collect())
}

/// `c_Q(θ) = min_{1≤q≤Q} q·‖qθ‖`, scanned over convergent denominators
/// (which attain the minimum).
pub fn bad_approx_constant(theta: f64, q_max: u64) -> Result<f64> {
    if q_max == 0 {
        return Err(Error::invalid("Q must be at least 1"));
    }
    Ok(convergent_denominators(theta, q_max)?
        .into_iter()
        .map(|q| scaled_distance(q as f64, theta))
        .fold(f64::INFINITY, f64::min))
}

/// `min q·‖qθ‖` over convergent denominators in `[√Q, Q]`; for badly
/// approximable `θ` this tracks `liminf q·‖qθ‖` (the Hurwitz value `1/√5`
/// for the golden ratio) instead of the small-`q` minimum.
pub fn hurwitz_tail_constant(theta: f64, q_max: u64) -> Result<f64> {
    if q_max < 4 {
        return Err(Error::invalid("Q must be at least 4"));
    }
    let lo = (q_max as f64).sqrt();
    Ok(convergent_denominators(theta, q_max)?
        .into_iter()
        .filter(|&q| q as f64 >= lo)
        .map(|q| scaled_distance(q as f64, theta))
        .fold(f64::INFINITY, f64::min))
}

/// The measured constant next to the two sides of the printed digit bracket
/// `1/inf a_j ≤ c ≤ 1/((M+2)(M+1)²)`; the bracket is reported, not asserted.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BracketReport {
    pub c_measured: f64,
    pub min_digit: u64,
    pub max_digit: u64,
    pub printed_lower: f64,
    pub printed_upper: f64,
    pub printed_bracket_consistent: bool,
    pub measured_within_bracket: bool,
}

pub fn bracket_report(theta: f64, q_max: u64) -> Result<BracketReport> {
    let c = bad_approx_constant(theta, q_max)?;
    let cf = cf_expand(theta, 64)?;
    let (lo_d, hi_d) = (cf.min_digit(), cf.max_digit());
    let lower = 1.0 / lo_d as f64;
    let m = hi_d as f64;
    let upper = 1.0 / ((m + 2.0) * (m + 1.0) * (m + 1.0));
    Ok(BracketReport {
        c_measured: c,
        min_digit: lo_d,
        max_digit: hi_d,
        printed_lower: lower,
        printed_upper: upper,
        printed_bracket_consistent: lower <= upper,
        measured_within_bracket: lower <= c && c <= upper,
    })
}

/// A closed interval with exact endpoints.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64()
    }
    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64()
    }
    pub fn length(&self) -> f64 {
        (self.hi.as_big() - self.lo.as_big()).to_f64().unwrap_or(f64::NAN)
    }
}

pub const MAX_CANTOR_DEPTH: usize = 12;

/// Depth-`depth` cylinders of `E_A = {[0; a_1, a_2, …] : a_i ∈ A}`.
///
/// Each cylinder is `{(p_k + p_{k−1}t)/(q_k + q_{k−1}t)}` with the tail `t`
/// restricted to `[1/(max A + 1), 1/min A]`, which still contains every tail
/// `[0; a_{k+1}, …]` with digits in `A` and keeps the closed cylinders of one
/// depth pairwise disjoint.
pub fn cantor_net(digits: &[u64], depth: usize) -> Result<Vec<Interval>> {
    let mut a: Vec<u64> = digits.to_vec();
    a.sort_unstable();
    a.dedup();
    if a.is_empty() || a[0] == 0 {
        return Err(Error::invalid("A must be a nonempty set of positive integers"));
    }
    if depth == 0 || depth > MAX_CANTOR_DEPTH {
        return Err(Error::invalid(format!("depth must be in 1..={MAX_CANTOR_DEPTH}")));
    }
    let t_lo = BigRational::new(BigInt::one(), BigInt::from(*a.last().unwrap() + 1));
    let t_hi = BigRational::new(BigInt::one(), BigInt::from(a[0]));
    // State: (p_{k−1}, q_{k−1}, p_k, q_k).
    let mut states = vec![(BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one())];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(states.len() * a.len());
        for (pm, qm, p, q) in &states {
            for &d in &a {
                let d = BigInt::from(d);
                next.push((p.clone(), q.clone(), &d * p + pm, &d * q + qm));
            }
        }
        states = next;
    }
    let mobius = |pm: &BigInt, qm: &BigInt, p: &BigInt, q: &BigInt, t: &BigRational| {
        let pm = BigRational::from_integer(pm.clone());
        let qm = BigRational::from_integer(qm.clone());
        (BigRational::from_integer(p.clone()) + pm * t) / (BigRational::from_integer(q.clone()) + qm * t)
    };
    let mut out: Vec<Interval> = states
        .iter()
        .map(|(pm, qm, p, q)| {
            let x = mobius(pm, qm, p, q, &t_lo);
            let y = mobius(pm, qm, p, q, &t_hi);
            let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
            Interval {
                lo: Rational(lo),
                hi: Rational(hi),
            }
        })
        .collect();
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    Ok(out)
}

/// Input to [`box_dimension`].
#[derive(Clone, Copy, Debug)]
pub enum BoxSet<'a> {
    Points(&'a [f64]),
    /// Closed intervals `(lo, hi)`.
    Intervals(&'a [(f64, f64)]),
}

/// `count` geometrically spaced scales from `eps_max` down to `eps_min`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EpsRange {
    pub eps_min: f64,
    pub eps_max: f64,
    pub count: usize,
}

impl EpsRange {
    pub fn new(eps_min: f64, eps_max: f64, count: usize) -> EpsRange {
        EpsRange {
            eps_min,
            eps_max,
            count,
        }
    }

    pub fn scales(&self) -> Vec<f64> {
        let n = self.count;
        let r = (self.eps_min / self.eps_max).ln() / (n - 1) as f64;
        (0..n).map(|i| self.eps_max * (r * i as f64).exp()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoxDimension {
    pub slope: f64,
    pub fit_residual: f64,
    /// `(ε, N(ε))` pairs.
    pub counts: Vec<(f64, u64)>,
}

/// Number of half-open cells `[kε, (k+1)ε)` meeting the set.
pub fn cover_count(set: BoxSet<'_>, eps: f64) -> u64 {
    match set {
        BoxSet::Points(pts) => {
            let mut cells: Vec<i64> = pts.iter().map(|x| (x / eps).floor() as i64).collect();
            cells.sort_unstable();
            cells.dedup();
            cells.len() as u64
        }
        BoxSet::Intervals(ivs) => {
            let mut ivs = ivs.to_vec();
            ivs.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut count = 0u64;
            let mut last: Option<i64> = None;
            for (lo, hi) in ivs {
                let a = (lo / eps).floor() as i64;
                let b = (hi / eps).floor() as i64;
                let a = match last {
                    Some(l) if a <= l => l + 1,
                    _ => a,
                };
                if b >= a {
                    count += (b - a + 1) as u64;
                    last = Some(b);
                }
            }
            count
        }
    }
}

/// Least-squares slope of `log N(ε)` against `log(1/ε)`.
pub fn box_dimension(set: BoxSet<'_>, eps: EpsRange) -> Result<BoxDimension> {
    if eps.count < 4 {
        return Err(Error::invalid("at least 4 scales are required"));
    }
    if !(eps.eps_min > 0.0 && eps.eps_min < eps.eps_max) {
        return Err(Error::invalid("need 0 < eps_min < eps_max"));
    }
    let empty = match set {
        BoxSet::Points(p) => p.is_empty(),
        BoxSet::Intervals(i) => i.is_empty(),
    };
    if empty {
        return Err(Error::invalid("empty set"));
    }
    let counts: Vec<(f64, u64)> = eps.scales().into_iter().map(|e| (e, cover_count(set, e))).collect();
    let xs: Vec<f64> = counts.iter().map(|(e, _)| -e.ln()).collect();
    let ys: Vec<f64> = counts.iter().map(|(_, n)| (*n as f64).ln()).collect();
    let LineFit { slope, residual, .. } = least_squares(&xs, &ys).expect("distinct scales");
    Ok(BoxDimension {
        slope,
        fit_residual: residual,
        counts,
    })
}

/// The `N`-`θ` rational approximate `x_N/y_N`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NThetaApprox {
    pub n: u64,
    pub x_over_y: Rational,
    /// `x/y − θ`.
    pub gamma: f64,
    pub delta: f64,
    pub m_d: u64,
    /// Number of qualifying best approximations found.
    pub candidates: usize,
    /// True when `N` exceeds the threshold beyond which at most one
    /// qualifying fraction can exist.
    pub uniqueness_regime: bool,
}

/// `N_0 = (4 m_d²)^{1/(1−3δ)}`: two distinct fractions with denominators
/// `≤ m_d N^δ` are `≥ 1/(m_d N^δ)²` apart, while both lying within
/// `2N^{δ−1}` of `θ` forces a gap `≤ 4N^{δ−1}`. Infinite for `δ ≥ 1/3`.
pub fn uniqueness_threshold(delta: f64, m_d: u64) -> f64 {
    if delta >= 1.0 / 3.0 {
        f64::INFINITY
    } else {
        (4.0 * (m_d as f64).powi(2)).powf(1.0 / (1.0 - 3.0 * delta))
    }
}

/// Best approximations of the first kind of the exact value of `θ`:
/// convergents and intermediate fractions with denominator `≤ y_max`, plus
/// `0/1` and `1/1`. Returned as `(x, y)` with `x` relative to `floor θ`.
fn best_approximations(theta: f64, y_max: u64) -> Result<Vec<(BigInt, u64)>> {
    let (int, frac) = split_exact(theta)?;
    let mut out: Vec<(BigInt, u64)> = vec![(int.clone(), 1), (&int + 1, 1)];
    let (mut pm, mut qm) = (BigInt::one(), BigInt::zero());
    let (mut p, mut q) = (BigInt::zero(), BigInt::one());
    let (mut n, mut d) = (frac.numer().clone(), frac.denom().clone());
    let ymax = BigInt::from(y_max);
    while !n.is_zero() {
        let (a, rem) = d.div_rem(&n);
        // Intermediate fractions (p_{k−2} + j p_{k−1})/(q_{k−2} + j q_{k−1}), j = 1..a.
        let mut j = BigInt::one();
        let mut stop = false;
        while j <= a {
            let qj = &qm + &j * &q;
            if qj > ymax {
                stop = true;
                break;
            }
            let pj = &pm + &j * &p;
            out.push((pj + &int * &qj, qj.to_u64().expect("≤ y_max")));
            j += 1;
        }
        if stop {
            break;
        }
        let pn = &a * &p + &pm;
        let qn = &a * &q + &qm;
        (pm, qm) = (std::mem::replace(&mut p, pn), std::mem::replace(&mut q, qn));
        d = std::mem::replace(&mut n, rem);
    }
    out.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));
    out.dedup();
    Ok(out)
}

fn check_ntheta_args(delta: f64, n: u64, m_d: u64) -> Result<()> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::invalid(format!("δ = {delta} must lie in (0, 1/2)")));
    }
    if n < 2 || m_d == 0 {
        return Err(Error::invalid("need N ≥ 2 and m_d ≥ 1"));
    }
    Ok(())
}

/// The reduced `x/y` with `y ≤ m_d N^δ` and `|x/y − θ| ≤ 2N^{δ−1}`, or none.
///
/// The smallest qualifying `y` is a best approximation of the first kind, so
/// the search runs over convergents and intermediate fractions only. When
/// several qualify (possible below [`uniqueness_threshold`]) the one with the
/// smallest denominator is returned.
pub fn n_theta_approximate(theta: f64, n: u64, delta: f64, m_d: u64) -> Result<Option<NThetaApprox>> {
    check_ntheta_args(delta, n, m_d)?;
    if !theta.is_finite() {
        return Err(Error::invalid("θ must be finite"));
    }
    let nf = n as f64;
    let y_max = (m_d as f64 * nf.powf(delta)).floor() as u64;
    let tol = 2.0 * nf.powf(delta - 1.0);
    let exact_theta = BigRational::from_float(theta).expect("finite");
    let qualifying: Vec<(BigInt, u64, f64)> = best_approximations(theta, y_max.max(1))?
        .into_iter()
        .filter(|(_, y)| *y <= y_max)
        .map(|(x, y)| {
            let g = (BigRational::new(x.clone(), BigInt::from(y)) - &exact_theta).to_f64().unwrap_or(f64::INFINITY);
            (x, y, g)
        })
        .filter(|(_, _, g)| g.abs() <= tol)
        .collect();
    let Some((x, y, gamma)) = qualifying.first().cloned() else {
        return Ok(None);
    };
    Ok(Some(NThetaApprox {
        n,
        x_over_y: Rational(BigRational::new(x, BigInt::from(y))),
        gamma,
        delta,
        m_d,
        candidates: qualifying.len(),
        uniqueness_regime: nf > uniqueness_threshold(delta, m_d),
    }))
}

/// Every reduced `x/y` with `y ≤ m_d N^δ` and `|x/y − θ| ≤ 2N^{δ−1}`, by
/// direct scan over denominators; the reference for [`n_theta_approximate`].
pub fn n_theta_exhaustive(theta: f64, n: u64, delta: f64, m_d: u64) -> Result<Vec<Rational>> {
    check_ntheta_args(delta, n, m_d)?;
    let nf = n as f64;
    let y_max = (m_d as f64 * nf.powf(delta)).floor() as u64;
    if y_max > 1 << 22 {
        return Err(Error::budget("exhaustive denominator scan", 1u64 << 22));
    }
    let tol = BigRational::from_float(2.0 * nf.powf(delta - 1.0)).expect("finite");
    let th = BigRational::from_float(theta).ok_or_else(|| Error::invalid("θ must be finite"))?;
    let mut out = Vec::new();
    for y in 1..=y_max {
        let yb = BigInt::from(y);
        let center = (&th * BigRational::from_integer(yb.clone())).round().to_integer();
        for x in [&center - 1, center.clone(), &center + 1] {
            if x.gcd(&yb) != BigInt::one() && !(x.is_zero() && y == 1) {
                continue;
            }
            let r = BigRational::new(x, yb.clone());
            if (&r - &th).abs() <= tol {
                out.push(Rational(r));
            }
        }
    }
    out.sort_by(|a, b| a.den().cmp(b.den()).then(a.cmp(b)));
    out.dedup();
    Ok(out)
}

/// One row of an approximate table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ApproxRow {
    pub n: u64,
    pub approx: Option<NThetaApprox>,
}

pub fn approximate_table(theta: f64, ns: &[u64], delta: f64, m_d: u64) -> Result<Vec<ApproxRow>> {
    ns.iter()
        .map(|&n| {
            Ok(ApproxRow {
                n,
                approx: n_theta_approximate(theta, n, delta, m_d)?,
            })
        })
        .collect()
}

/// `max N_j^{1−2δ}/y_{N_j}` over the rows where a new approximate first
/// appears; sparsity of approximates means this stays bounded.
pub fn sparsity_constant(rows: &[ApproxRow]) -> Option<f64> {
    let mut prev: Option<&Rational> = None;
    let mut best: Option<f64> = None;
    for row in rows {
        if let Some(a) = &row.approx {
            if prev != Some(&a.x_over_y) {
                let y = a.x_over_y.den().to_f64().unwrap_or(f64::INFINITY);
                let v = (row.n as f64).powf(1.0 - 2.0 * a.delta) / y;
                best = Some(best.map_or(v, |b: f64| b.max(v)));
            }
            prev = Some(&a.x_over_y);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::GOLDEN;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn rational_basics() {
        assert_eq!(r(2, 4).to_string(), "1/2");
        assert_eq!(r(3, -6).to_string(), "-1/2");
        assert_eq!("6/8".parse::<Rational>().unwrap(), r(3, 4));
        assert!(Rational::new(1, 0).is_err());
        assert_eq!(serde_json::to_string(&r(2, 3)).unwrap(), "\"2/3\"");
    }

    #[test]
    fn expansions() {
        let third = cf_expand(1.0 / 3.0, 20).unwrap();
        assert_eq!(third.digits, vec![3]);
        assert_eq!(third.stop, CfStop::Terminated);
        let g = cf_expand(GOLDEN, 100).unwrap();
        assert!(g.digits.iter().all(|&a| a == 1) && g.digits.len() > 30);
        assert_eq!(g.stop, CfStop::ResolutionExhausted);
        let s = cf_expand(2f64.sqrt() - 1.0, 10).unwrap();
        assert_eq!(s.digits, vec![2; 10]);
        assert_eq!(s.stop, CfStop::MaxTerms);
        assert_eq!(cf_expand(0.25, 5).unwrap().digits, vec![4]);
        assert!(cf_expand(0.0, 5).is_err());
        assert!(cf_expand(1.0, 5).is_err());
    }

    #[test]
    fn periodic_constructor() {
        let g = CFExpansion::periodic(&[], &[1], 10).unwrap();
        assert!((g.value - GOLDEN).abs() < 1e-15);
        let s = CFExpansion::periodic(&[], &[2], 10).unwrap();
        assert!((s.value - (2f64.sqrt() - 1.0)).abs() < 1e-15);
        // [0; 3, 1, 2, 1, 2, …] against its own convergents.
        let p = CFExpansion::periodic(&[3], &[1, 2], 40).unwrap();
        let c = convergents(&p).unwrap();
        assert!((c.last().unwrap().to_f64() - p.value).abs() < 1e-15);
    }

    #[test]
    fn convergent_examples() {
        let c = convergents(&CFExpansion::from_digits(vec![1, 1, 1]).unwrap()).unwrap();
        assert_eq!(c, vec![r(1, 1), r(1, 2), r(2, 3)]);
        let c = convergents(&CFExpansion::from_digits(vec![3]).unwrap()).unwrap();
        assert_eq!(c, vec![r(1, 3)]);
        let c = convergents(&CFExpansion::from_digits(vec![2, 2]).unwrap()).unwrap();
        assert_eq!(c, vec![r(1, 2), r(2, 5)]);
        assert!(CFExpansion::from_digits(vec![]).is_err());
    }

    #[test]
    fn dirichlet_examples() {
        assert_eq!(dirichlet_approx(1.0 / 3.0, 10).unwrap(), r(1, 3));
        let pi_frac = std::f64::consts::PI - 3.0;
        let a = dirichlet_approx(pi_frac, 100).unwrap();
        assert_eq!(a, r(1, 7));
        assert!(a.distance_to(pi_frac) <= 1.0 / 700.0);
        assert_eq!(dirichlet_approx(std::f64::consts::PI, 100).unwrap(), r(22, 7));
        assert_eq!(dirichlet_approx(-0.5, 3).unwrap(), r(-1, 2));
    }

    #[test]
    fn bad_approx_examples() {
        assert_eq!(bad_approx_constant(0.5, 2).unwrap(), 0.0);
        let c = bad_approx_constant(GOLDEN, 100_000).unwrap();
        assert!((c - (1.0 - GOLDEN)).abs() < 1e-12);
        let h = hurwitz_tail_constant(GOLDEN, 100_000).unwrap();
        assert!((h - 1.0 / 5f64.sqrt()).abs() < 1e-4);
        let rep = bracket_report(GOLDEN, 1000).unwrap();
        assert!(!rep.printed_bracket_consistent);
    }

    #[test]
    fn bad_approx_matches_full_scan() {
        for &theta in &[GOLDEN, 2f64.sqrt() - 1.0, 0.123_456_789, std::f64::consts::E - 2.0] {
            let mut full = f64::INFINITY;
            for q in 1..=1000u64 {
                full = full.min(scaled_distance(q as f64, theta));
                let conv = bad_approx_constant(theta, q).unwrap();
                assert!((conv - full).abs() < 1e-15, "θ={theta} Q={q}: {conv} vs {full}");
            }
        }
    }

    #[test]
    fn cantor_examples() {
        let one = cantor_net(&[1], 10).unwrap();
        assert_eq!(one.len(), 1);
        assert!(one[0].lo_f64() <= GOLDEN && GOLDEN <= one[0].hi_f64());
        assert!(one[0].length() < 1e-3);
        let two = cantor_net(&[1, 2], 2).unwrap();
        assert_eq!(two.len(), 4);
        for w in two.windows(2) {
            assert!(w[0].hi < w[1].lo);
        }
        let total: f64 = cantor_net(&[2, 3], 8).unwrap().iter().map(|i| i.length()).sum();
        assert!(total < 0.01, "{total}");
        assert!(cantor_net(&[], 2).is_err());
        assert!(cantor_net(&[1], 13).is_err());
    }

    #[test]
    fn box_dimension_examples() {
        let eps = EpsRange::new(1e-3, 1e-1, 8);
        let pt = box_dimension(BoxSet::Points(&[0.3]), eps).unwrap();
        assert_eq!((pt.slope, pt.fit_residual), (0.0, 0.0));
        let pts: Vec<f64> = (0..10_000).map(|i| (i as f64 + 0.5) / 10_000.0).collect();
        let full = box_dimension(BoxSet::Points(&pts), eps).unwrap();
        assert!((full.slope - 1.0).abs() < 0.05);
        assert!(box_dimension(BoxSet::Points(&pts), EpsRange::new(1e-3, 1e-1, 3)).is_err());
    }

    #[test]
    fn interval_cover_counts_union() {
        let ivs = [(0.0, 0.25), (0.1, 0.35), (0.9, 0.95)];
        assert_eq!(cover_count(BoxSet::Intervals(&ivs), 0.1), 4 + 1);
    }

    #[test]
    fn n_theta_examples() {
        let a = n_theta_approximate(0.5, 1 << 10, 0.2, 1).unwrap().unwrap();
        assert_eq!(a.x_over_y, r(1, 2));
        assert_eq!(a.gamma, 0.0);
        assert!(n_theta_approximate(0.5, 100, 0.6, 1).is_err());
        for k in 4..30 {
            let n = 1u64 << k;
            let got = n_theta_approximate(GOLDEN, n, 0.1, 2).unwrap();
            let all = n_theta_exhaustive(GOLDEN, n, 0.1, 2).unwrap();
            assert_eq!(got.map(|a| a.x_over_y), all.first().cloned(), "N = 2^{k}");
        }
    }

    #[test]
    fn uniqueness_above_threshold() {
        let (delta, m_d) = (0.1, 1);
        let n0 = uniqueness_threshold(delta, m_d);
        for &theta in &[GOLDEN, 0.2957, 2f64.sqrt() - 1.0] {
            for n in (n0.ceil() as u64)..(n0.ceil() as u64 + 300) {
                assert!(n_theta_exhaustive(theta, n, delta, m_d).unwrap().len() <= 1);
            }
        }
    }
}
