//! Seeded property suites, each checked against an independent oracle.
//! The report depends only on the seed.

use num_bigint::BigInt;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::circle_method::{derived_rationals, s_sum};
use crate::diophantine::{dirichlet_approx, n_theta_approximate, n_theta_exhaustive, CFExpansion, convergents, Rational};
use crate::dynamics::{iterate, Point, SystemSpec, TrigPoly};
use crate::hardy::{HardyExpr, HardyTerm};
use crate::numerics::{expi, GOLDEN};
use crate::phase_sums::{sup_scan, twisted_average, vdc_lhs, vdc_rhs_all, weyl_average, IntPoly, PhasePoly, TwistSign};
use crate::uniformity::{gowers_norm_cyclic, lp_bound_check, u2_fourier, CyclicSignal};
use crate::variation::{r_variation, r_variation_exhaustive, twisted_convolution, LatticeSignal};
use crate::{Complex, Turns};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    /// First failure, or a one-line summary.
    pub detail: String,
}

struct Suite {
    name: &'static str,
    cases: usize,
    failures: usize,
    first: Option<String>,
    worst: Option<f64>,
}

impl Suite {
    fn new(name: &'static str) -> Suite {
        Suite {
            name,
            cases: 0,
            failures: 0,
            first: None,
            worst: None,
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(what());
            }
        }
    }

    fn err(&mut self, v: f64) {
        self.worst = Some(self.worst.map_or(v, |w| w.max(v)));
    }

    fn finish(self) -> SuiteResult {
        SuiteResult {
            name: self.name,
            cases: self.cases,
            failures: self.failures,
            detail: self.first.unwrap_or_else(|| match self.worst {
                Some(w) => format!("worst deviation {w:e}"),
                None => "ok".into(),
            }),
        }
    }
}

pub fn run(seed: u64) -> Vec<SuiteResult> {
    let suites: [fn(&mut ChaCha8Rng) -> SuiteResult; 12] = [
        weyl, vdc, sup, cf, ntheta, hardy, gowers, dynamics, derived, gauss, variation, convolution,
    ];
    suites
        .iter()
        .enumerate()
        .map(|(i, f)| f(&mut ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64))))
        .collect()
}

pub fn all_passed(results: &[SuiteResult]) -> bool {
    results.iter().all(|r| r.failures == 0)
}

// Rational-coefficient Weyl sums against exact integer phases.
fn weyl(rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut s = Suite::new("weyl-average");
    for _ in 0..60 {
        let d = rng.gen_range(1..=4);
        let coeffs: Vec<(i64, i64)> = (0..d)
            .map(|_| {
                let b = rng.gen_range(1..=997i64);
                (rng.gen_range(-b..=b), b)
            })
            .collect();
        let n = rng.gen_range(1..=400u64);
        let l: i128 = coeffs.iter().fold(1i128, |acc, &(_, b)| acc.lcm(&(b as i128)));
        let mut acc = Complex::new(0.0, 0.0);
        for k in 1..=n as i128 {
            let mut num = 0i128;
            for (i, &(a, b)) in coeffs.iter().enumerate() {
                let pw = (d - i) as u32;
                num = (num + (a as i128 * (l / b as i128)).rem_euclid(l) * (k.pow(pw) % l)) % l;
            }
            acc += expi(num as f64 / l as f64);
        }
        let want = acc / n as f64;
        let got = PhasePoly::from_rationals(&coeffs).and_then(|p| weyl_average(&p, n));
        match got {
            Ok(g) => {
                let e = (g.value - want).norm();
                s.err(e);
                s.check(e < 1e-11, || format!("{coeffs:?}, N = {n}: deviation {e:e}"));
            }
            Err(e) => s.check(false, || e.to_string()),
        }
    }
    s.finish()
}

fn vdc(rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut s = Suite::new("van-der-corput");
    for _ in 0..100 {
        let n = rng.gen_range(1..=96);
        let u: Vec<Complex> = (0..n).map(|_| expi(rng.gen::<f64>()) * rng.gen_range(0.5..=1.0)).collect();
        let lhs = vdc_lhs(&u);
        match vdc_rhs_all(&u) {
            Ok(rhs) => {
                for (h, r) in rhs.iter().enumerate() {
                    s.check(lhs <= r + 1e-12, || format!("N = {n}, H = {}: {lhs} > {r}", h + 1));
                }
            }
            Err(e) => s.check(false, || e.to_string()),
        }
    }
    s.finish()
}

// Certified upper bounds against a fine direct grid.
fn sup(rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut s = Suite::new("sup-scan");
    let p = IntPoly::monomial(2);
    for _ in 0..4 {
        let theta = rng.gen::<f64>();
        let n = rng.gen_range(8..=48u64);
        let Ok(scan) = sup_scan(theta, &p, n, 1e-3) else {
            s.check(false, || "sup_scan failed".into());
            continue;
        };
        let grid = 8192;
        let brute = (0..grid)
            .map(|i| {
                twisted_average(theta, i as f64 / grid as f64, &p, n, TwistSign::Plus)
                    .map(|r| r.abs())
                    .unwrap_or(f64::INFINITY)
            })
            .fold(0.0, f64::max);
        s.check(brute <= scan.rigorous_upper + 1e-12, || {
            format!("θ = {theta}, N = {n}: grid max {brute} above {}", scan.rigorous_upper)
        });
        s.check(scan.sup_value <= scan.rigorous_upper, || "sup above its bound".into());
    }
    s.finish()
}

fn cf(rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut s = Suite::new("continued-fractions");
    for _ in 0..50 {
        let digits: Vec<u64> = (0..rng.gen_range(2..=12)).map(|_| rng.gen_range(1..=9)).collect();
        let Ok(cf) = CFExpansion::from_digits(digits.clone()) else {
            s.check(false, || format!("from_digits {digits:?}"));
            continue;
        };
        let theta = cf.value;
        if let Ok(cs) = convergents(&cf) {
            for c in &cs {
                let q = c.den().to_string().parse::<f64>().unwrap_or(f64::INFINITY);
                s.check(c.distance_to(theta) <= 1.0 / (q * q) + 1e-15, || format!("{c} vs {theta}"));
            }
        }
        let alpha = rng.gen::<f64>();
        let q_max = rng.gen_range(1..=100_000u64);
        match dirichlet_approx(alpha, q_max) {
            Ok(r) => {
                let q = r.to_i64_pair().map(|(_, q)| q).unwrap_or(i64::MAX);
                let ok = q >= 1 && q as u64 <= q_max && r.distance_to(alpha) <= 1.0 / (q as f64 * q_max as f64) * (1.0 + 1e-9);
                s.check(ok, || format!("α = {alpha}, Q = {q_max}: {r}"));
            }
            Err(e) => s.check(false, || e.to_string()),
        }
    }
    s.finish()
}

fn ntheta(rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut s = Suite::new("n-theta");
    for _ in 0..80 {
        let theta = if rng.gen_bool(0.3) {
            rng.gen_range(0..12) as f64 / 12.0
        } else {
            rng.gen::<f64>()
        };
        let n = rng.gen_range(2..=1u64 << 14);
        let delta = [0.05, 0.1, 0.2][rng.gen_range(0..3)];
        let md = rng.gen_range(1..=3);
        match (n_theta_approximate(theta, n, delta, md), n_theta_exhaustive(theta, n, delta, md)) {
            (Ok(a), Ok(all)) => {
                let ok = match (&a, all.first()) {
                    (None, None) => true,
                    (Some(a), Some(first)) => all.contains(&a.x_over_y) && a.x_over_y.den() == first.den(),
                    _ => false,
                };
                s.check(ok, || format!("θ = {theta}, N = {n}, δ = {delta}: {a:?} vs {all:?}"));
            }
            _ => s.check(false, || format!("θ = {theta}, N = {n}: error")),
        }
    }
    s.finish()
}

// Symbolic derivatives against central differences.
fn hardy(rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut s = Suite::new("hardy-derivative");
    for _ in 0..60 {
        let terms: Vec<HardyTerm> = (0..rng.gen_range(1..=3))
            .map(|_| HardyTerm {
                coeff: rng.gen_range(-3.0..3.0),
                power: rng.gen_range(-1.0..3.0),
                log_power: rng.gen_range(0..=2),
            })
            .collect();
        let p = HardyExpr::new(terms);
        let dp = p.differentiate();
        let x: f64 = rng.gen_range(2.0..50.0);
        let h = 1e-4 * x;
        let fd = (p.eval(x + h) - p.eval(x - h)) / (2.0 * h);
        let scale = p.eval(x).abs().max(1.0) / x;
        let e = (fd - dp.eval(x)).abs() / scale;
        s.err(e);
        s.check(e < 1e-6, || format!("{p} at {x}: {fd} vs {}", dp.eval(x)));
        let round = HardyExpr::parse(&p.to_string());
        s.check(round.as_ref().map(|q| (q.eval(x) - p.eval(x)).abs() <= 1e-9 * scale * x).unwrap_or(false), || {
            format!("display/parse round trip of {p}")
        });
    }
    s.finish()
}

fn gowers(rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut s = Suite::new("gowers");
    for _ in 0..40 {
        let n = rng.gen_range(1..=32);
        let f = CyclicSignal::new((0..n).map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect())
            .expect("finite");
        let u: Vec<f64> = (1..=3).map(|m| gowers_norm_cyclic(&f, m).unwrap_or(f64::NAN)).collect();
        let e = (u[1] - u2_fourier(&f)).abs();
        s.err(e);
        s.check(e < 1e-10, || format!("N = {n}: U² {} vs Fourier {}", u[1], u2_fourier(&f)));
        s.check(u[0] <= u[1] + 1e-12 && u[1] <= u[2] + 1e-12, || format!("N = {n}: not monotone {u:?}"));
        for m in 2..=3 {
            s.check(lp_bound_check(&f, m).map(|c| c.ok).unwrap_or(false), || format!("N = {n}: L^p bound, m = {m}"));
        }
    }
    s.finish()
}

// f(T^n x) two ways: composed polynomial vs iterated point.
fn dynamics(rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut s = Suite::new("composition");
    let beta = rng.gen::<f64>();
    let systems = [
        SystemSpec::rotation(beta).expect("valid"),
        SystemSpec::skew(beta).expect("valid"),
        SystemSpec::Doubling,
    ];
    for sys in &systems {
        let dim = sys.dimension();
        for _ in 0..15 {
            let terms: Vec<(Vec<BigInt>, Complex)> = (0..3)
                .map(|_| {
                    let freq = (0..dim).map(|_| BigInt::from(rng.gen_range(-3..=3))).collect();
                    (freq, Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                })
                .collect();
            let f = TrigPoly::new(dim, terms).expect("valid");
            let x = match dim {
                1 => Point::Circle(Turns::from_f64(rng.gen())),
                _ => Point::Torus(Turns::from_f64(rng.gen()), Turns::from_f64(rng.gen())),
            };
            let n = rng.gen_range(0..=40i128);
            let a = f.compose(sys, n).and_then(|g| g.eval(&x));
            let b = iterate(sys, &x, n).and_then(|y| f.eval(&y));
            let ok = matches!((&a, &b), (Ok(a), Ok(b)) if (a - b).norm() < 1e-12);
            s.check(ok, || format!("{sys}, n = {n}: {a:?} vs {b:?}"));
        }
    }
    s.finish()
}

// Companion rationals against integer arithmetic.
fn derived(rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut s = Suite::new("derived-rationals");
    for _ in 0..300 {
        let d = rng.gen_range(2..=4usize);
        let mut m: Vec<i64> = (0..d).map(|_| rng.gen_range(-9..=9)).collect();
        m[d - 1] = rng.gen_range(1..=6);
        let p = IntPoly::new(m.clone()).expect("leading ≥ 1");
        let b = rng.gen_range(1..=60i128);
        let a = rng.gen_range(0..b);
        let j = rng.gen_range(0..m[d - 1]) as i128;
        let y = rng.gen_range(1..=60i128);
        let x = rng.gen_range(-y..=2 * y);
        let md = m[d - 1] as i128;
        let reduce = |num: i128, den: i128| {
            let r = num.rem_euclid(den);
            let g = r.gcd(&den).max(1);
            (r / g, den / g)
        };
        let mut want = Vec::new();
        let mut l = b / a.gcd(&b);
        for i in (1..d).rev() {
            let (num, den) = if i == 1 {
                (m[0] as i128 * (j * b + a) * y - x * md * b, md * b * y)
            } else {
                (m[i - 1] as i128 * (j * b + a), md * b)
            };
            let (n2, d2) = reduce(num, den);
            l = l.lcm(&d2);
            want.push((n2, d2));
        }
        let ab = Rational::new(a as i64, b as i64).expect("b ≥ 1");
        let xy = Rational::new(x as i64, y as i64).expect("y ≥ 1");
        let got = derived_rationals(&ab, j as u64, &p, &xy);
        let ok = match &got {
            Ok(g) => {
                g.b_n_j == BigInt::from(l)
                    && g.rationals.len() == want.len()
                    && g.rationals.iter().zip(&want).all(|(r, &(n, dd))| *r.num() == BigInt::from(n) && *r.den() == BigInt::from(dd))
            }
            Err(_) => false,
        };
        s.check(ok, || format!("P = {p}, j = {j}, a/b = {a}/{b}, x/y = {x}/{y}: {got:?} vs {want:?}, lcm {l}"));
    }
    s.finish()
}

// Quadratic Gauss sums have modulus 1/√b for odd prime b.
fn gauss(_rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut s = Suite::new("gauss-sums");
    let primes = (3u64..200).filter(|&q| (2..q).take_while(|k| k * k <= q).all(|k| q % k != 0));
    for b in primes {
        for a in [1, b - 1] {
            let r = Rational::new(a as i64, b as i64).expect("b ≥ 1");
            let z = s_sum(&r, &[Rational::integer(0)], b).map(|z| z.norm()).unwrap_or(f64::NAN);
            let e = (z - 1.0 / (b as f64).sqrt()).abs();
            s.err(e);
            s.check(e < 1e-12, || format!("b = {b}: |S| = {z}"));
        }
    }
    s.finish()
}

fn variation(rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut s = Suite::new("r-variation");
    for _ in 0..60 {
        let k = rng.gen_range(1..=12);
        let v: Vec<Complex> = (0..k).map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let r = [1.0, 1.5, 2.0, 2.5, 3.0, 6.0][rng.gen_range(0..6)];
        let (a, b) = (r_variation(&v, r).unwrap_or(f64::NAN), r_variation_exhaustive(&v, r).unwrap_or(f64::NAN));
        let e = (a - b).abs() / b.max(1.0);
        s.err(e);
        s.check(e <= 1e-13, || format!("K = {k}, r = {r}: DP {a} vs exhaustive {b}"));
        let shift = Complex::new(rng.gen(), rng.gen());
        let rot = expi(rng.gen());
        let moved: Vec<Complex> = v.iter().map(|z| z * rot + shift).collect();
        let c = r_variation(&moved, r).unwrap_or(f64::NAN);
        s.check((c - a).abs() <= 1e-12 * a.max(1.0), || format!("invariance: {c} vs {a}"));
    }
    s.finish()
}

fn convolution(rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut s = Suite::new("convolution");
    for _ in 0..30 {
        let len = rng.gen_range(1..=20);
        let vals: Vec<Complex> = (0..len).map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let f = LatticeSignal::from_interval(rng.gen_range(-50..50), &vals).expect("finite");
        let theta = [0.0, 0.5, GOLDEN, rng.gen()][rng.gen_range(0..4)];
        let p = IntPoly::new(vec![rng.gen_range(-2..=2), 1]).expect("leading 1");
        let n = rng.gen_range(1..=64);
        match twisted_convolution(&f, theta, &p, n) {
            Ok(k) => s.check(k.l2_norm() <= f.l2_norm() * (1.0 + 1e-12), || {
                format!("‖K_N f‖ = {} > ‖f‖ = {}", k.l2_norm(), f.l2_norm())
            }),
            Err(e) => s.check(false, || e.to_string()),
        }
    }
    s.finish()
}
