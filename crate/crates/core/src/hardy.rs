//! Logarithmico-exponential weights `p(s) = Σ c·s^α·(log s)^k`.
//!
//! The term algebra is closed under differentiation, which is all the class
//! definitions `M_{δ,M,m}` and `L_{δ,M,m}` need: membership is a family of
//! two-sided (resp. one-sided) power bounds on `p^{(j)}`. Certificates combine
//! a geometric grid check on `[1, s_max]` with a leading-term comparison that
//! covers `s → ∞`.

use std::fmt;

use serde::Serialize;

use crate::numerics::ComplexSum;
use crate::phase_sums::SumResult;
use crate::{Complex, Error, Result};

/// One term `coeff · s^power · (log s)^log_power`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HardyTerm {
    pub coeff: f64,
    pub power: f64,
    pub log_power: u32,
}

/// A finite sum of [`HardyTerm`]s, evaluated at `s + shift`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HardyExpr {
    terms: Vec<HardyTerm>,
    shift: f64,
}

impl HardyExpr {
    pub fn new(terms: impl IntoIterator<Item = HardyTerm>) -> HardyExpr {
        let mut e = HardyExpr {
            terms: terms.into_iter().collect(),
            shift: 0.0,
        };
        e.normalize();
        e
    }

    pub fn zero() -> HardyExpr {
        HardyExpr::new([])
    }

    /// `coeff · s^power`.
    pub fn power(coeff: f64, power: f64) -> HardyExpr {
        HardyExpr::new([HardyTerm {
            coeff,
            power,
            log_power: 0,
        }])
    }

    /// Left translation `s ↦ s + shift`, applied at evaluation.
    pub fn with_shift(mut self, shift: f64) -> HardyExpr {
        self.shift = shift;
        self
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn terms(&self) -> &[HardyTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    // Terms are kept sorted by decreasing (power, log_power), merged, nonzero.
    fn normalize(&mut self) {
        self.terms.retain(|t| t.coeff != 0.0);
        self.terms.sort_by(|a, b| {
            b.power
                .total_cmp(&a.power)
                .then(b.log_power.cmp(&a.log_power))
        });
        let mut merged: Vec<HardyTerm> = Vec::with_capacity(self.terms.len());
        for t in self.terms.drain(..) {
            match merged.last_mut() {
                Some(last) if last.power == t.power && last.log_power == t.log_power => {
                    last.coeff += t.coeff
                }
                _ => merged.push(t),
            }
        }
        merged.retain(|t| t.coeff != 0.0);
        self.terms = merged;
    }

    pub fn eval(&self, s: f64) -> f64 {
        let x = s + self.shift;
        let lx = x.ln();
        self.terms
            .iter()
            .map(|t| t.coeff * x.powf(t.power) * lx.powi(t.log_power as i32))
            .sum()
    }

    /// `p(s) mod 1` with each term reduced separately before summation.
    pub fn eval_mod1(&self, s: f64) -> f64 {
        let x = s + self.shift;
        let lx = x.ln();
        let mut acc = 0.0;
        for t in &self.terms {
            let v = t.coeff * x.powf(t.power) * lx.powi(t.log_power as i32);
            acc += v - v.floor();
        }
        acc - acc.floor()
    }

    /// Exact symbolic derivative.
    pub fn differentiate(&self) -> HardyExpr {
        let mut out = Vec::with_capacity(2 * self.terms.len());
        for t in &self.terms {
            if t.power != 0.0 {
                out.push(HardyTerm {
                    coeff: t.coeff * t.power,
                    power: t.power - 1.0,
                    log_power: t.log_power,
                });
            }
            if t.log_power > 0 {
                out.push(HardyTerm {
                    coeff: t.coeff * t.log_power as f64,
                    power: t.power - 1.0,
                    log_power: t.log_power - 1,
                });
            }
        }
        let mut d = HardyExpr::new(out);
        d.shift = self.shift;
        d
    }

    pub fn derivative(&self, j: usize) -> HardyExpr {
        (0..j).fold(self.clone(), |e, _| e.differentiate())
    }

    /// The dominant term as `s → ∞`.
    pub fn leading_term(&self) -> Option<HardyTerm> {
        self.terms.first().copied()
    }

    /// Type `t(p) = inf{α : |p(s)| < s^α eventually}`; log factors do not
    /// change it.
    pub fn type_of(&self) -> Result<f64> {
        self.leading_term()
            .map(|t| t.power)
            .ok_or_else(|| Error::invalid("the zero expression has no type"))
    }

    /// Parses sums such as `"5*s^3.14159 + 1*s^1*log^1"`.
    ///
    /// Grammar: terms joined by `+`/`-`; a term is a `*`-separated product of
    /// numbers, `s`, `s^x`, `log`, `log^k` (also `log(s)` and `log(s)^k`).
    pub fn parse(input: &str) -> Result<HardyExpr> {
        let src: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if src.is_empty() {
            return Err(Error::parse("empty expression"));
        }
        let mut terms = Vec::new();
        let bytes = src.as_bytes();
        let mut start = 0;
        let mut sign = 1.0;
        let mut i = 0;
        if bytes[0] == b'+' || bytes[0] == b'-' {
            sign = if bytes[0] == b'-' { -1.0 } else { 1.0 };
            start = 1;
            i = 1;
        }
        while i <= bytes.len() {
            let at_end = i == bytes.len();
            let split = !at_end
                && (bytes[i] == b'+' || bytes[i] == b'-')
                && i > start
                && !matches!(bytes[i - 1], b'e' | b'E' | b'^' | b'*');
            if at_end || split {
                let mut t = parse_term(&src[start..i])?;
                t.coeff *= sign;
                terms.push(t);
                if !at_end {
                    sign = if bytes[i] == b'-' { -1.0 } else { 1.0 };
                }
                start = i + 1;
            }
            i += 1;
        }
        Ok(HardyExpr::new(terms))
    }
}

fn parse_term(src: &str) -> Result<HardyTerm> {
    if src.is_empty() {
        return Err(Error::parse("empty term"));
    }
    let mut term = HardyTerm {
        coeff: 1.0,
        power: 0.0,
        log_power: 0,
    };
    for factor in src.split('*') {
        let factor = factor.replace("log(s)", "log");
        if let Some(rest) = factor.strip_prefix("log") {
            let k = match rest.strip_prefix('^') {
                Some(k) => k
                    .parse::<u32>()
                    .map_err(|_| Error::parse(format!("bad log power in '{factor}'")))?,
                None if rest.is_empty() => 1,
                None => return Err(Error::parse(format!("unexpected '{factor}'"))),
            };
            term.log_power += k;
        } else if let Some(rest) = factor.strip_prefix('s') {
            let a = match rest.strip_prefix('^') {
                Some(a) => a
                    .trim_start_matches('(')
                    .trim_end_matches(')')
                    .parse::<f64>()
                    .map_err(|_| Error::parse(format!("bad exponent in '{factor}'")))?,
                None if rest.is_empty() => 1.0,
                None => return Err(Error::parse(format!("unexpected '{factor}'"))),
            };
            term.power += a;
        } else {
            let c = factor
                .parse::<f64>()
                .map_err(|_| Error::parse(format!("bad factor '{factor}'")))?;
            term.coeff *= c;
        }
    }
    Ok(term)
}

impl fmt::Display for HardyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", t.coeff)?;
            if t.power != 0.0 {
                write!(f, "*s^{}", t.power)?;
            }
            if t.log_power > 0 {
                write!(f, "*log^{}", t.log_power)?;
            }
        }
        if self.shift != 0.0 {
            write!(f, " @ s+{}", self.shift)?;
        }
        Ok(())
    }
}

impl std::str::FromStr for HardyExpr {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        HardyExpr::parse(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ClassFamily {
    /// Two-sided bounds `(1/M)s^{k+α−ε−j} ≤ p^{(j)} ≤ M s^{k+α+ε−j}`, `j ≤ k+1`.
    M,
    /// One-sided bounds `|p^{(j)}| ≤ M s^{k−δ−j}`, `j ≤ k`.
    L,
}

/// Parameters certifying membership in `M_{δ,M,m}` or `L_{δ,M,m}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClassWitness {
    pub family: ClassFamily,
    pub delta: f64,
    pub m_const: f64,
    pub m: u32,
    /// Fractional part of the type (family `M` only).
    pub alpha: f64,
    pub epsilon: f64,
    pub k: u32,
    /// Upper end of the verification grid.
    pub s_max: f64,
}

impl ClassWitness {
    pub fn m_class(delta: f64, m_const: f64, m: u32, k: u32, alpha: f64, epsilon: f64) -> Self {
        ClassWitness {
            family: ClassFamily::M,
            delta,
            m_const,
            m,
            alpha,
            epsilon,
            k,
            s_max: 1e6,
        }
    }

    pub fn l_class(delta: f64, m_const: f64, m: u32, k: u32) -> Self {
        ClassWitness {
            family: ClassFamily::L,
            delta,
            m_const,
            m,
            alpha: 0.0,
            epsilon: 0.0,
            k,
            s_max: 1e6,
        }
    }

    pub fn with_s_max(mut self, s_max: f64) -> Self {
        self.s_max = s_max;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.k > self.m {
            return Err(Error::invalid(format!("k = {} exceeds m = {}", self.k, self.m)));
        }
        if !(self.s_max > 1.0 && self.s_max.is_finite()) {
            return Err(Error::invalid("s_max must be finite and > 1"));
        }
        match self.family {
            ClassFamily::M => {
                if !(self.delta > 0.0 && self.delta < 0.5) {
                    return Err(Error::invalid("M-class needs δ ∈ (0, 1/2)"));
                }
                if !(self.m_const >= 1.0) {
                    return Err(Error::invalid("M-class needs M ≥ 1"));
                }
                if !(self.alpha >= self.delta && self.alpha <= 1.0 - self.delta) {
                    return Err(Error::invalid(format!(
                        "α = {} outside [δ, 1−δ] = [{}, {}]",
                        self.alpha,
                        self.delta,
                        1.0 - self.delta
                    )));
                }
                let cap = ((self.alpha - self.delta) / 3.0).min(1.0 - self.alpha - self.delta);
                if !(self.epsilon >= 0.0 && self.epsilon < cap) {
                    return Err(Error::invalid(format!(
                        "ε = {} must lie in [0, {cap})",
                        self.epsilon
                    )));
                }
            }
            ClassFamily::L => {
                if !(self.delta > 0.0) || !(self.m_const > 0.0) {
                    return Err(Error::invalid("L-class needs δ > 0 and M > 0"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BoundSide {
    Lower,
    Upper,
}

/// Result of the leading-term comparison for one derivative.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TailCheck {
    pub j: u32,
    pub side: BoundSide,
    pub leading_power: Option<f64>,
    pub bound_power: f64,
    /// True when exponents coincide and the coefficient decided the check.
    pub coefficient_decided: bool,
}

/// Evidence that an expression satisfies a class witness.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub family: ClassFamily,
    pub grid_points: usize,
    pub s_max: f64,
    /// Smallest `bound − value` margin (relative) seen on the grid.
    pub min_relative_margin: f64,
    pub tail_checks: Vec<TailCheck>,
    /// The grid stops at `s_max`; beyond it only the leading-term comparison
    /// applies, which is exact asymptotically but does not fix where "large
    /// s" begins.
    pub tail_note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum ClassViolation {
    Grid {
        j: u32,
        s: f64,
        side: BoundSide,
        value: f64,
        bound: f64,
    },
    Tail(TailCheck),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum ClassVerdict {
    Certified(Certificate),
    Violated(ClassViolation),
}

impl ClassVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, ClassVerdict::Certified(_))
    }
}

const GRID_SLACK: f64 = 1e-12;
const EXPONENT_TIE: f64 = 1e-12;

fn geometric_grid(s_max: f64, points: usize) -> impl Iterator<Item = f64> {
    let ratio = s_max.ln() / (points - 1) as f64;
    (0..points).map(move |i| {
        if i + 1 == points {
            s_max
        } else {
            (ratio * i as f64).exp()
        }
    })
}

// Eventual comparison of `d(s)` against `c_bound · s^e` on the given side.
fn tail_check(d: &HardyExpr, j: u32, side: BoundSide, e: f64, c_bound: f64, abs: bool) -> (bool, TailCheck) {
    let lead = d.leading_term();
    let mut check = TailCheck {
        j,
        side,
        leading_power: lead.map(|t| t.power),
        bound_power: e,
        coefficient_decided: false,
    };
    let Some(t) = lead else {
        // Identically zero derivative.
        return (side == BoundSide::Upper, check);
    };
    let c = if abs { t.coeff.abs() } else { t.coeff };
    let tie = (t.power - e).abs() <= EXPONENT_TIE;
    let ok = match side {
        BoundSide::Upper => {
            if tie {
                check.coefficient_decided = true;
                if t.log_power > 0 {
                    c < 0.0
                } else {
                    c <= c_bound
                }
            } else {
                t.power < e || c < 0.0
            }
        }
        BoundSide::Lower => {
            if c <= 0.0 {
                false
            } else if tie {
                check.coefficient_decided = true;
                t.log_power > 0 || c >= c_bound
            } else {
                t.power > e
            }
        }
    };
    (ok, check)
}

fn check_class(p: &HardyExpr, w: &ClassWitness, grid_points: usize) -> Result<ClassVerdict> {
    w.validate()?;
    if grid_points < 64 {
        return Err(Error::invalid("at least 64 grid points are required"));
    }
    let (j_max, two_sided) = match w.family {
        ClassFamily::M => (w.k + 1, true),
        ClassFamily::L => (w.k, false),
    };
    let mut min_margin = f64::INFINITY;
    let mut tail_checks = Vec::new();
    let mut d = p.clone();
    for j in 0..=j_max {
        let jf = j as f64;
        let (lo_exp, hi_exp) = match w.family {
            ClassFamily::M => (
                w.k as f64 + w.alpha - w.epsilon - jf,
                w.k as f64 + w.alpha + w.epsilon - jf,
            ),
            ClassFamily::L => (f64::NAN, w.k as f64 - w.delta - jf),
        };
        for s in geometric_grid(w.s_max, grid_points) {
            let v = d.eval(s);
            let upper = w.m_const * s.powf(hi_exp);
            let value = if two_sided { v } else { v.abs() };
            if value > upper * (1.0 + GRID_SLACK) {
                return Ok(ClassVerdict::Violated(ClassViolation::Grid {
                    j,
                    s,
                    side: BoundSide::Upper,
                    value,
                    bound: upper,
                }));
            }
            min_margin = min_margin.min((upper - value) / upper);
            if two_sided {
                let lower = s.powf(lo_exp) / w.m_const;
                if v < lower * (1.0 - GRID_SLACK) {
                    return Ok(ClassVerdict::Violated(ClassViolation::Grid {
                        j,
                        s,
                        side: BoundSide::Lower,
                        value: v,
                        bound: lower,
                    }));
                }
                min_margin = min_margin.min((v - lower) / lower);
            }
        }
        let (ok, check) = tail_check(&d, j, BoundSide::Upper, hi_exp, w.m_const, !two_sided);
        if !ok {
            return Ok(ClassVerdict::Violated(ClassViolation::Tail(check)));
        }
        tail_checks.push(check);
        if two_sided {
            let (ok, check) = tail_check(&d, j, BoundSide::Lower, lo_exp, 1.0 / w.m_const, false);
            if !ok {
                return Ok(ClassVerdict::Violated(ClassViolation::Tail(check)));
            }
            tail_checks.push(check);
        }
        d = d.differentiate();
    }
    Ok(ClassVerdict::Certified(Certificate {
        family: w.family,
        grid_points,
        s_max: w.s_max,
        min_relative_margin: min_margin.max(0.0),
        tail_checks,
        tail_note: format!(
            "grid verified on [1, {:e}]; beyond that only leading exponents and coefficients were compared",
            w.s_max
        ),
    }))
}

/// Certifies `p ∈ M_{δ,M,m}` with the witnessed `(α, ε, k)`.
pub fn class_check_m(p: &HardyExpr, w: &ClassWitness, grid_points: usize) -> Result<ClassVerdict> {
    if w.family != ClassFamily::M {
        return Err(Error::invalid("witness family must be M"));
    }
    check_class(p, w, grid_points)
}

/// Certifies `p ∈ L_{δ,M,m}` with the witnessed `k`.
pub fn class_check_l(p: &HardyExpr, w: &ClassWitness, grid_points: usize) -> Result<ClassVerdict> {
    if w.family != ClassFamily::L {
        return Err(Error::invalid("witness family must be L"));
    }
    check_class(p, w, grid_points)
}

/// The weights `(e(p(n)))_{n=1..N}`.
pub fn weight_sequence(p: &HardyExpr, n: usize) -> Vec<Complex> {
    (1..=n)
        .map(|k| crate::numerics::expi(p.eval_mod1(k as f64)))
        .collect()
}

/// `(1/N) Σ_{n≤N} e(p(n))` with compensated accumulation.
pub fn hardy_average(p: &HardyExpr, n: usize) -> Result<SumResult> {
    if n == 0 {
        return Err(Error::invalid("N must be at least 1"));
    }
    let mut acc = ComplexSum::default();
    for k in 1..=n {
        acc.add(crate::numerics::expi(p.eval_mod1(k as f64)));
    }
    Ok(SumResult::from_sum(&acc, n as u64, 4.0 * f64::EPSILON * evaluation_scale(p, n)))
}

// Magnitude of p on [1, N], used for the per-term phase error bound.
fn evaluation_scale(p: &HardyExpr, n: usize) -> f64 {
    p.terms
        .iter()
        .map(|t| {
            let x = n as f64 + p.shift;
            (t.coeff * x.powf(t.power.max(0.0)) * x.ln().max(1.0).powi(t.log_power as i32)).abs()
        })
        .sum::<f64>()
        .max(1.0)
        * std::f64::consts::TAU
}

/// Running averages at each of `checkpoints` (ascending) and the largest
/// pairwise gap between them; a non-convergence diagnostic.
pub fn running_average_gap(p: &HardyExpr, checkpoints: &[usize]) -> (Vec<Complex>, f64) {
    let mut acc = ComplexSum::default();
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut next = 0;
    let last = checkpoints.last().copied().unwrap_or(0);
    for k in 1..=last {
        acc.add(crate::numerics::expi(p.eval_mod1(k as f64)));
        while next < checkpoints.len() && checkpoints[next] == k {
            out.push(acc.value() / k as f64);
            next += 1;
        }
    }
    let mut gap: f64 = 0.0;
    for i in 0..out.len() {
        for j in i + 1..out.len() {
            gap = gap.max((out[i] - out[j]).norm());
        }
    }
    (out, gap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn term(coeff: f64, power: f64, log_power: u32) -> HardyTerm {
        HardyTerm {
            coeff,
            power,
            log_power,
        }
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(
            HardyExpr::power(1.0, 0.5).differentiate(),
            HardyExpr::power(0.5, -0.5)
        );
        let log = HardyExpr::new([term(1.0, 0.0, 1)]);
        assert_eq!(log.differentiate(), HardyExpr::power(1.0, -1.0));
        let slogs = HardyExpr::new([term(1.0, 1.0, 1)]);
        assert_eq!(
            slogs.differentiate(),
            HardyExpr::new([term(1.0, 0.0, 1), term(1.0, 0.0, 0)])
        );
    }

    #[test]
    fn types() {
        let p = HardyExpr::parse("5*s^3.141592653589793 + s*log").unwrap();
        assert_eq!(p.type_of().unwrap(), std::f64::consts::PI);
        assert_eq!(HardyExpr::power(1.0, 2.0).type_of().unwrap(), 2.0);
        assert_eq!(HardyExpr::new([term(1.0, 0.0, 1)]).type_of().unwrap(), 0.0);
        assert!(HardyExpr::zero().type_of().is_err());
    }

    #[test]
    fn parse_and_display() {
        let p = HardyExpr::parse("5*s^3.14159 + 1*s^1*log^1").unwrap();
        assert_eq!(p.terms().len(), 2);
        assert_eq!(p.to_string(), "5*s^3.14159 + 1*s^1*log^1");
        let q = HardyExpr::parse("-2*log(s)^2 + 3 - s^-0.5").unwrap();
        assert_eq!(q.terms()[1], term(3.0, 0.0, 0));
        assert_eq!(q.leading_term().unwrap(), term(-2.0, 0.0, 2));
        assert_eq!(HardyExpr::parse("1e-3*s^2").unwrap(), HardyExpr::power(1e-3, 2.0));
        assert!(HardyExpr::parse("5*x").is_err());
        assert!(HardyExpr::parse("").is_err());
    }

    #[test]
    fn merging_drops_cancelled_terms() {
        let p = HardyExpr::parse("s^2 + s - s^2").unwrap();
        assert_eq!(p, HardyExpr::power(1.0, 1.0));
    }

    #[test]
    fn sqrt_in_m_class() {
        let p = HardyExpr::power(1.0, 0.5);
        let w = ClassWitness::m_class(0.3, 2.0, 0, 0, 0.5, 0.01);
        assert!(class_check_m(&p, &w, 256).unwrap().is_certified());
        // M = 1.9 cannot accommodate p'(1) = 1/2.
        let w = ClassWitness::m_class(0.3, 1.9, 0, 0, 0.5, 0.01);
        assert!(!class_check_m(&p, &w, 256).unwrap().is_certified());
    }

    #[test]
    fn polynomial_is_not_in_m_class() {
        let p = HardyExpr::power(1.0, 2.0);
        let w = ClassWitness::m_class(0.05, 100.0, 1, 1, 0.9, 0.01);
        assert!(!class_check_m(&p, &w, 128).unwrap().is_certified());
    }

    #[test]
    fn rejects_bad_witnesses() {
        let p = HardyExpr::power(1.0, 0.5);
        let bad_alpha = ClassWitness::m_class(0.3, 2.0, 0, 0, 0.8, 0.01);
        assert!(class_check_m(&p, &bad_alpha, 128).is_err());
        let bad_eps = ClassWitness::m_class(0.3, 2.0, 0, 0, 0.5, 0.1);
        assert!(class_check_m(&p, &bad_eps, 128).is_err());
        let bad_k = ClassWitness::m_class(0.3, 2.0, 0, 1, 0.5, 0.01);
        assert!(class_check_m(&p, &bad_k, 128).is_err());
        let w = ClassWitness::m_class(0.3, 2.0, 0, 0, 0.5, 0.01);
        assert!(class_check_m(&p, &w, 10).is_err());
        assert!(class_check_l(&p, &w, 128).is_err());
    }

    #[test]
    fn mixed_type_example_is_certified() {
        let p = HardyExpr::parse("5*s^3.141592653589793 + s*log").unwrap().with_shift(1.0);
        let alpha = std::f64::consts::PI - 3.0;
        let w = ClassWitness::m_class(0.05, 100.0, 3, 3, alpha, 0.03);
        let verdict = class_check_m(&p, &w, 512).unwrap();
        assert!(verdict.is_certified(), "{verdict:?}");
    }

    #[test]
    fn l_class_examples() {
        let w = ClassWitness::l_class(0.4, 1.0, 1, 1);
        assert!(class_check_l(&HardyExpr::power(1.0, 0.5), &w, 128).unwrap().is_certified());
        let w = ClassWitness::l_class(0.5, 1.0, 0, 0);
        assert!(class_check_l(&HardyExpr::power(1.0, -1.0), &w, 128).unwrap().is_certified());
        let w = ClassWitness::l_class(0.4, 4.0, 3, 3);
        assert!(class_check_l(&HardyExpr::power(1.0, 2.5), &w, 128).unwrap().is_certified());
        let w = ClassWitness::l_class(0.4, 4.0, 3, 2);
        assert!(!class_check_l(&HardyExpr::power(1.0, 2.5), &w, 128).unwrap().is_certified());
    }

    #[test]
    fn weight_sequences() {
        assert!(weight_sequence(&HardyExpr::zero(), 5)
            .iter()
            .all(|z| (z - Complex::new(1.0, 0.0)).norm() < 1e-15));
        let half = HardyExpr::power(0.5, 1.0);
        for (i, z) in weight_sequence(&half, 6).iter().enumerate() {
            let want = if (i + 1) % 2 == 0 { 1.0 } else { -1.0 };
            assert!((z.re - want).abs() < 1e-12 && z.im.abs() < 1e-12);
        }
    }

    #[test]
    fn type_drops_by_one_per_derivative() {
        let p = HardyExpr::parse("2*s^2.5 + s^0.3*log").unwrap();
        let mut d = p.clone();
        let t0 = p.type_of().unwrap();
        for j in 1..4 {
            d = d.differentiate();
            assert!((d.type_of().unwrap() - (t0 - j as f64)).abs() < 1e-12);
        }
    }
}
