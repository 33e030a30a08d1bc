//! Rotations, the doubling map and the skew product `(x, y) ↦ (x + β, y + x)`
//! on the 2-torus, with closed-form orbits and ergodic averages.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::numerics::{expi, ComplexSum};
use crate::phase_sums::IntPoly;
use crate::{Complex, Error, Result, Turns};

/// A concrete measure-preserving system.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum SystemSpec {
    /// `x ↦ x + β` on the circle.
    Rotation { beta: f64 },
    /// `x ↦ 2x` on the circle.
    Doubling,
    /// `(x, y) ↦ (x + β, y + x)` on the 2-torus.
    Skew { beta: f64 },
}

impl SystemSpec {
    pub fn rotation(beta: f64) -> Result<SystemSpec> {
        check_beta(beta)?;
        Ok(SystemSpec::Rotation { beta })
    }

    pub fn skew(beta: f64) -> Result<SystemSpec> {
        check_beta(beta)?;
        Ok(SystemSpec::Skew { beta })
    }

    pub fn dimension(&self) -> usize {
        match self {
            SystemSpec::Skew { .. } => 2,
            _ => 1,
        }
    }

    pub fn is_invertible(&self) -> bool {
        !matches!(self, SystemSpec::Doubling)
    }

    fn beta_turns(&self) -> Turns {
        match *self {
            SystemSpec::Rotation { beta } | SystemSpec::Skew { beta } => Turns::from_f64(beta),
            SystemSpec::Doubling => Turns::ZERO,
        }
    }

    /// Parses `"rotation:0.618"`, `"skew:0.618"` or `"doubling"`.
    pub fn parse(s: &str) -> Result<SystemSpec> {
        let s = s.trim();
        let (kind, arg) = s.split_once(':').unwrap_or((s, ""));
        let beta = || -> Result<f64> {
            arg.trim()
                .parse::<f64>()
                .map_err(|_| Error::parse(format!("system '{s}' needs a numeric β")))
        };
        match kind.trim() {
            "rotation" => SystemSpec::rotation(beta()?),
            "skew" => SystemSpec::skew(beta()?),
            "doubling" if arg.is_empty() => Ok(SystemSpec::Doubling),
            _ => Err(Error::parse(format!("unknown system '{s}'"))),
        }
    }

    /// The default starting point: `√2 − 1`, `(√3 − 1)/2` on the torus, and a
    /// binary Champernowne expansion long enough for `max_iterate` doublings.
    pub fn default_point(&self, max_iterate: u64) -> Result<Point> {
        let x = Turns::from_f64(std::f64::consts::SQRT_2 - 1.0);
        Ok(match self {
            SystemSpec::Rotation { .. } => Point::Circle(x),
            SystemSpec::Skew { .. } => Point::Torus(x, Turns::from_f64((3f64.sqrt() - 1.0) / 2.0)),
            SystemSpec::Doubling => Point::Dyadic(DyadicPoint::champernowne(max_iterate + 64)?),
        })
    }
}

impl fmt::Display for SystemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SystemSpec::Rotation { beta } => write!(f, "rotation:{beta}"),
            SystemSpec::Skew { beta } => write!(f, "skew:{beta}"),
            SystemSpec::Doubling => write!(f, "doubling"),
        }
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("β = {beta} must lie in (0, 1)")))
    }
}

/// A point with an explicit binary expansion, for the doubling map.
///
/// `2^n x mod 1` is the expansion shifted by `n`; at least
/// [`DyadicPoint::GUARD_BITS`] bits must remain after the shift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DyadicPoint {
    bits: Arc<Vec<u64>>,
    len: u64,
    offset: u64,
}

impl DyadicPoint {
    pub const GUARD_BITS: u64 = 14;
    /// Longest expansion [`DyadicPoint::champernowne`] will build.
    pub const MAX_BITS: u64 = 1 << 32;

    /// The 64 leading bits of `x mod 1`; supports 50 doublings.
    pub fn from_f64(x: f64) -> DyadicPoint {
        let t = Turns::from_f64(x);
        let top = (t.0 >> 64) as u64;
        DyadicPoint {
            bits: Arc::new(vec![top]),
            len: 64,
            offset: 0,
        }
    }

    /// `0.1 10 11 100 101 …` in binary (normal in base 2), truncated to
    /// `len` bits.
    pub fn champernowne(len: u64) -> Result<DyadicPoint> {
        if len > Self::MAX_BITS {
            return Err(Error::budget("binary expansion length", Self::MAX_BITS));
        }
        let words = len.div_ceil(64) as usize;
        let mut bits = vec![0u64; words];
        let mut pos = 0u64;
        let mut k = 1u64;
        'outer: loop {
            let width = 64 - k.leading_zeros() as u64;
            for i in (0..width).rev() {
                if pos >= len {
                    break 'outer;
                }
                if (k >> i) & 1 == 1 {
                    bits[(pos / 64) as usize] |= 1u64 << (63 - pos % 64);
                }
                pos += 1;
            }
            k += 1;
        }
        Ok(DyadicPoint {
            bits: Arc::new(bits),
            len,
            offset: 0,
        })
    }

    /// Number of further doublings supported.
    pub fn remaining(&self) -> u64 {
        (self.len - self.offset).saturating_sub(Self::GUARD_BITS)
    }

    pub fn shift(&self, n: u64) -> Result<DyadicPoint> {
        if n > self.remaining() {
            return Err(Error::budget(
                "doubling iterate beyond the stored binary expansion",
                self.remaining(),
            ));
        }
        Ok(DyadicPoint {
            bits: Arc::clone(&self.bits),
            len: self.len,
            offset: self.offset + n,
        })
    }

    /// The next 128 bits as a phase (missing bits read as zero).
    pub fn turns(&self) -> Turns {
        let start = self.offset;
        let word = start / 64;
        let sh = start % 64;
        let get = |w: u64| -> u64 {
            if w * 64 >= self.len {
                0
            } else {
                self.bits[w as usize]
            }
        };
        let (a, b, c) = (get(word), get(word + 1), get(word + 2));
        let hi = if sh == 0 { a } else { (a << sh) | (b >> (64 - sh)) };
        let lo = if sh == 0 { b } else { (b << sh) | (c >> (64 - sh)) };
        let mut v = ((hi as u128) << 64) | lo as u128;
        // Clear bits beyond the stored expansion.
        let avail = self.len.saturating_sub(start);
        if avail < 128 {
            v &= if avail == 0 { 0 } else { u128::MAX << (128 - avail) };
        }
        Turns(v)
    }
}

/// A state of one of the systems.
#[derive(Clone, Debug, PartialEq)]
pub enum Point {
    Circle(Turns),
    Torus(Turns, Turns),
    Dyadic(DyadicPoint),
}

impl Point {
    /// Coordinates as phases.
    pub fn coords(&self) -> Vec<Turns> {
        match self {
            Point::Circle(x) => vec![*x],
            Point::Torus(x, y) => vec![*x, *y],
            Point::Dyadic(d) => vec![d.turns()],
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords().into_iter().map(Turns::to_f64).collect()
    }
}

/// `T^n(point)` in closed form.
pub fn iterate(system: &SystemSpec, point: &Point, n: i128) -> Result<Point> {
    let beta = system.beta_turns();
    match (system, point) {
        (SystemSpec::Rotation { .. }, Point::Circle(x)) => Ok(Point::Circle(*x + beta.mul_int(n))),
        (SystemSpec::Skew { .. }, Point::Torus(x, y)) => {
            let tri = triangular(n);
            Ok(Point::Torus(*x + beta.mul_int(n), *y + x.mul_int(n) + beta.mul_u128(tri)))
        }
        (SystemSpec::Doubling, Point::Dyadic(d)) => {
            if n < 0 {
                return Err(Error::invalid("the doubling map is not invertible"));
            }
            Ok(Point::Dyadic(d.shift(n as u64)?))
        }
        (SystemSpec::Doubling, Point::Circle(x)) => {
            if n < 0 {
                return Err(Error::invalid("the doubling map is not invertible"));
            }
            iterate(system, &Point::Dyadic(DyadicPoint::from_f64(x.to_f64())), n)
        }
        _ => Err(Error::invalid("point does not match the system")),
    }
}

/// `n(n−1)/2 mod 2^128`.
fn triangular(n: i128) -> u128 {
    let (a, b) = (n as u128, (n - 1) as u128);
    if n % 2 == 0 {
        ((n / 2) as u128).wrapping_mul(b)
    } else {
        a.wrapping_mul(((n - 1) / 2) as u128)
    }
}

/// A trigonometric polynomial `Σ c_k e(k·x)` on the circle or 2-torus.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigPoly {
    dim: usize,
    /// Sorted by frequency, merged, without zero coefficients.
    terms: Vec<(Vec<BigInt>, Complex)>,
}

impl TrigPoly {
    pub fn new(dim: usize, terms: impl IntoIterator<Item = (Vec<BigInt>, Complex)>) -> Result<TrigPoly> {
        if dim == 0 || dim > 2 {
            return Err(Error::invalid("dimension must be 1 or 2"));
        }
        let mut t: Vec<(Vec<BigInt>, Complex)> = terms.into_iter().collect();
        if t.iter().any(|(k, c)| k.len() != dim || !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::invalid("frequency dimension mismatch or non-finite coefficient"));
        }
        t.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Vec<BigInt>, Complex)> = Vec::with_capacity(t.len());
        for (k, c) in t {
            match out.last_mut() {
                Some(last) if last.0 == k => last.1 += c,
                _ => out.push((k, c)),
            }
        }
        out.retain(|(_, c)| *c != Complex::new(0.0, 0.0));
        Ok(TrigPoly { dim, terms: out })
    }

    pub fn constant(dim: usize, c: Complex) -> TrigPoly {
        TrigPoly::new(dim, [(vec![BigInt::zero(); dim], c)]).expect("valid")
    }

    /// `e(k·x)`.
    pub fn character(freq: &[i64]) -> Result<TrigPoly> {
        TrigPoly::new(
            freq.len(),
            [(freq.iter().map(|&k| BigInt::from(k)).collect(), Complex::new(1.0, 0.0))],
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[(Vec<BigInt>, Complex)] {
        &self.terms
    }

    /// The coefficient of frequency zero, i.e. `∫ f dμ`.
    pub fn zero_coefficient(&self) -> Complex {
        self.terms
            .iter()
            .find(|(k, _)| k.iter().all(Zero::is_zero))
            .map(|(_, c)| *c)
            .unwrap_or_default()
    }

    pub fn conj(&self) -> TrigPoly {
        TrigPoly::new(
            self.dim,
            self.terms.iter().map(|(k, c)| (k.iter().map(|v| -v).collect(), c.conj())),
        )
        .expect("valid")
    }

    pub fn mul(&self, other: &TrigPoly) -> Result<TrigPoly> {
        if self.dim != other.dim {
            return Err(Error::invalid("dimension mismatch"));
        }
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                out.push((k1.iter().zip(k2).map(|(a, b)| a + b).collect(), c1 * c2));
            }
        }
        TrigPoly::new(self.dim, out)
    }

    pub fn eval(&self, point: &Point) -> Result<Complex> {
        let x = point.coords();
        if x.len() != self.dim {
            return Err(Error::invalid("point dimension does not match f"));
        }
        Ok(self.eval_turns(&x))
    }

    fn eval_turns(&self, x: &[Turns]) -> Complex {
        let mut acc = ComplexSum::default();
        for (k, c) in &self.terms {
            let mut ph = Turns::ZERO;
            for (ki, xi) in k.iter().zip(x) {
                ph += xi.mul_big(ki);
            }
            acc.add(c * ph.expi());
        }
        acc.value()
    }

    /// `f ∘ T^n` as a trigonometric polynomial.
    pub fn compose(&self, system: &SystemSpec, n: i128) -> Result<TrigPoly> {
        if system.dimension() != self.dim {
            return Err(Error::invalid("f and the system have different dimensions"));
        }
        let beta = system.beta_turns();
        let terms: Vec<(Vec<BigInt>, Complex)> = match system {
            SystemSpec::Rotation { .. } => self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), c * beta.mul_big(&k[0]).mul_int(n).expi()))
                .collect(),
            SystemSpec::Skew { .. } => {
                let nb = BigInt::from(n);
                let tri = triangular(n);
                self.terms
                    .iter()
                    .map(|(k, c)| {
                        let ph = beta.mul_big(&k[0]).mul_int(n) + beta.mul_big(&k[1]).mul_u128(tri);
                        (vec![&k[0] + &nb * &k[1], k[1].clone()], c * ph.expi())
                    })
                    .collect()
            }
            SystemSpec::Doubling => {
                if n < 0 {
                    return Err(Error::invalid("the doubling map is not invertible"));
                }
                let factor = BigInt::one() << (n as usize);
                self.terms.iter().map(|(k, c)| (vec![&k[0] * &factor], *c)).collect()
            }
        };
        TrigPoly::new(self.dim, terms)
    }

    /// Parses `"e(x)"`, `"e(-2y)"`, `"0.5*e(x+y) + e(3x)"`, `"1"`; `dim` is 2
    /// when `y` appears and 1 otherwise, unless forced by `min_dim`.
    pub fn parse(s: &str, min_dim: usize) -> Result<TrigPoly> {
        let src: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let src = src.strip_prefix("f:").unwrap_or(&src).to_string();
        if src.is_empty() {
            return Err(Error::parse("empty function"));
        }
        let dim = if src.contains('y') { 2 } else { 1 }.max(min_dim);
        let mut terms = Vec::new();
        let mut depth = 0;
        let mut start = 0;
        let b = src.as_bytes();
        let mut pieces = Vec::new();
        for (i, &ch) in b.iter().enumerate() {
            match ch {
                b'(' => depth += 1,
                b')' => depth -= 1,
                b'+' | b'-' if depth == 0 && i > start && b[i - 1] != b'*' && b[i - 1] != b'e' => {
                    pieces.push(&src[start..i]);
                    start = i;
                }
                _ => {}
            }
        }
        pieces.push(&src[start..]);
        for piece in pieces {
            let piece = piece.strip_prefix('+').unwrap_or(piece);
            let (coeff, body) = match piece.find("e(") {
                Some(pos) => {
                    let c = piece[..pos].trim_end_matches('*');
                    let c = match c {
                        "" => 1.0,
                        "-" => -1.0,
                        c => c.parse().map_err(|_| Error::parse(format!("bad coefficient '{c}'")))?,
                    };
                    let inner = piece[pos + 2..]
                        .strip_suffix(')')
                        .ok_or_else(|| Error::parse(format!("unbalanced '{piece}'")))?;
                    (c, Some(inner))
                }
                None => (
                    piece
                        .parse::<f64>()
                        .map_err(|_| Error::parse(format!("bad term '{piece}'")))?,
                    None,
                ),
            };
            let mut freq = vec![BigInt::zero(); dim];
            if let Some(inner) = body {
                parse_linear_form(inner, &mut freq)?;
            }
            terms.push((freq, Complex::new(coeff, 0.0)));
        }
        TrigPoly::new(dim, terms)
    }
}

fn parse_linear_form(inner: &str, freq: &mut [BigInt]) -> Result<()> {
    let b = inner.as_bytes();
    let mut i = 0;
    while i < b.len() {
        let mut sign = 1i64;
        if b[i] == b'+' || b[i] == b'-' {
            sign = if b[i] == b'-' { -1 } else { 1 };
            i += 1;
        }
        let start = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        let k: i64 = if start == i {
            1
        } else {
            inner[start..i].parse().map_err(|_| Error::parse("bad frequency"))?
        };
        let i_var = match b.get(i) {
            Some(b'x') => 0,
            Some(b'y') if freq.len() == 2 => 1,
            _ => return Err(Error::parse(format!("bad linear form '{inner}'"))),
        };
        freq[i_var] += sign * k;
        i += 1;
        if i < b.len() && b[i] == b'*' {
            i += 1;
        }
    }
    Ok(())
}

impl fmt::Display for TrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let vars = ["x", "y"];
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({}{:+}i)*e(", c.re, c.im)?;
            let mut first = true;
            for (kv, v) in k.iter().zip(vars) {
                if kv.is_zero() {
                    continue;
                }
                if !first && kv.is_positive() {
                    write!(f, "+")?;
                }
                write!(f, "{kv}{v}")?;
                first = false;
            }
            if first {
                write!(f, "0")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

fn check_dims(system: &SystemSpec, f: &TrigPoly, x0: &Point) -> Result<()> {
    let pd = match x0 {
        Point::Circle(_) | Point::Dyadic(_) => 1,
        Point::Torus(..) => 2,
    };
    if f.dim() != system.dimension() || pd != system.dimension() {
        return Err(Error::invalid("dimension mismatch between f, x0 and the system"));
    }
    Ok(())
}

/// `(1/N) Σ_{n=1}^{N} a_n f(T^n x0)`.
pub fn weighted_average(
    system: &SystemSpec,
    f: &TrigPoly,
    x0: &Point,
    weights: &[Complex],
    n: usize,
) -> Result<Complex> {
    check_dims(system, f, x0)?;
    if n == 0 || n > weights.len() {
        return Err(Error::invalid("need 1 ≤ N ≤ number of weights"));
    }
    if weights[..n].iter().any(|w| w.norm() > 1.0 + 1e-12) {
        return Err(Error::invalid("weights must satisfy |a_n| ≤ 1"));
    }
    let mut acc = ComplexSum::default();
    match (system, x0) {
        (SystemSpec::Rotation { .. }, Point::Circle(x)) => {
            let beta = system.beta_turns();
            let mut cur = *x + beta;
            for w in &weights[..n] {
                acc.add(w * f.eval_turns(&[cur]));
                cur += beta;
            }
        }
        (SystemSpec::Skew { .. }, Point::Torus(x, y)) => {
            let beta = system.beta_turns();
            let (mut cx, mut cy) = (*x, *y);
            for w in &weights[..n] {
                // (x, y) ↦ (x + β, y + x)
                cy += cx;
                cx += beta;
                acc.add(w * f.eval_turns(&[cx, cy]));
            }
        }
        _ => {
            for (k, w) in weights[..n].iter().enumerate() {
                let p = iterate(system, x0, k as i128 + 1)?;
                acc.add(w * f.eval(&p)?);
            }
        }
    }
    Ok(acc.value() / n as f64)
}

/// `(1/N) Σ_{n=1}^{N} e(nθ) f(T^{P(n)} x0)`.
pub fn twisted_poly_average(
    system: &SystemSpec,
    f: &TrigPoly,
    x0: &Point,
    theta: f64,
    p: &IntPoly,
    n: u64,
) -> Result<Complex> {
    check_dims(system, f, x0)?;
    if n == 0 {
        return Err(Error::invalid("N must be at least 1"));
    }
    let th = Turns::from_f64(theta);
    let mut acc = ComplexSum::default();
    for k in 1..=n {
        let pk = p
            .eval_i128(k as i128)
            .ok_or_else(|| Error::budget("P(n) overflows i128", "2^127"))?;
        if !system.is_invertible() && pk < 0 {
            return Err(Error::invalid("negative iterate of the doubling map"));
        }
        let pt = iterate(system, x0, pk)?;
        acc.add(th.mul_u128(k as u128).expi() * f.eval(&pt)?);
    }
    Ok(acc.value() / n as f64)
}

/// One row of a Wiener-Wintner sup table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WwRow {
    pub n: u64,
    pub sup: f64,
    pub argmax_theta: f64,
    /// `2πN`: the Lipschitz constant in `θ` of the averages (Bernstein), so
    /// the sup over a `ρ`-neighbourhood of the net exceeds `sup` by at most
    /// `2πNρ·‖f‖_∞`.
    pub lipschitz: f64,
}

/// `max_{θ ∈ net} |(1/N) Σ e(nθ) f(T^{P(n)} x0)|` for each `N`.
pub fn ww_sup_experiment(
    system: &SystemSpec,
    f: &TrigPoly,
    x0: &Point,
    net: &[f64],
    p: &IntPoly,
    ns: &[u64],
) -> Result<Vec<WwRow>> {
    if net.is_empty() {
        return Err(Error::invalid("empty net"));
    }
    if ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("N list must be strictly increasing"));
    }
    ns.iter()
        .map(|&n| {
            let vals: Vec<f64> = net
                .par_iter()
                .map(|&t| twisted_poly_average(system, f, x0, t, p, n).map(|z| z.norm()))
                .collect::<Result<_>>()?;
            let (i, sup) = vals
                .iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |b, (i, &v)| if v > b.1 { (i, v) } else { b });
            Ok(WwRow {
                n,
                sup,
                argmax_theta: net[i],
                lipschitz: std::f64::consts::TAU * n as f64,
            })
        })
        .collect()
}

/// The 16 purely periodic quadratic irrationals `[0; \overline{a b c d}]`
/// with `a, b, c, d ∈ {1, 2}`: a net of `E_{1,2}`.
pub fn e12_quadratic_net() -> Vec<f64> {
    let mut out = Vec::with_capacity(16);
    for mask in 0..16u32 {
        let period: Vec<u64> = (0..4).map(|i| 1 + ((mask >> i) & 1) as u64).collect();
        out.push(
            crate::diophantine::CFExpansion::periodic(&[], &period, 8)
                .expect("valid period")
                .value,
        );
    }
    out
}

/// Weights `e(w(n))` for `n = 1..=N`.
pub fn phase_weights(n: usize, w: impl Fn(f64) -> f64) -> Vec<Complex> {
    (1..=n).map(|k| expi(w(k as f64))).collect()
}
