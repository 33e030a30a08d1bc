use proptest::prelude::*;

use wiener_wintner::circle_method::derived_rationals;
use wiener_wintner::diophantine::{convergents, cf_expand, Rational};
use wiener_wintner::harness::{parse_int, parse_ints, parse_real};
use wiener_wintner::hardy::HardyExpr;
use wiener_wintner::numerics::expi;
use wiener_wintner::phase_sums::IntPoly;
use wiener_wintner::variation::{r_variation, r_variation_exhaustive, twisted_convolution, LatticeSignal};
use wiener_wintner::{Complex, Turns};

fn complex_vec(max_len: usize) -> impl Strategy<Value = Vec<Complex>> {
    prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), 1..max_len)
        .prop_map(|v| v.into_iter().map(|(re, im)| Complex::new(re, im)).collect())
}

proptest! {
    #[test]
    fn turns_multiplication_is_exact(raw in any::<u128>(), a in -1000i128..1000, b in -1000i128..1000) {
        let t = Turns(raw);
        prop_assert_eq!(t.mul_int(a).mul_int(b), t.mul_int(a * b));
        prop_assert_eq!(t.mul_int(a) + t.mul_int(b), t.mul_int(a + b));
        prop_assert_eq!(t - t, Turns(0));
    }

    #[test]
    fn turns_track_f64(x in -1e6..1e6f64, y in -1e6..1e6f64) {
        let s = (Turns::from_f64(x) + Turns::from_f64(y)).to_f64();
        let want = (x + y).rem_euclid(1.0);
        let d = (s - want).abs();
        prop_assert!(d.min(1.0 - d) < 1e-9);
    }

    #[test]
    fn integer_ratio_turns(num in -10_000i128..10_000, den in 1u128..10_000) {
        let t = Turns::from_integer_ratio(num, den);
        // den·(num/den) is an integer: the raw residue is at most den/2 units of 2^-128.
        let raw = t.mul_u128(den).0 as i128;
        prop_assert!(raw.unsigned_abs() <= den / 2 + 1);
    }

    #[test]
    fn variation_dp_is_exhaustive(v in complex_vec(11), r in 1.0..6.0f64) {
        let a = r_variation(&v, r).unwrap();
        let b = r_variation_exhaustive(&v, r).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * b.max(1.0));
    }

    #[test]
    fn variation_invariances(v in complex_vec(40), r in 1.0..8.0f64, shift in (-3.0..3.0f64, -3.0..3.0f64), phase in 0.0..1.0f64) {
        let base = r_variation(&v, r).unwrap();
        let tol = 1e-10 * base.max(1.0);
        let c = Complex::new(shift.0, shift.1);
        let shifted: Vec<Complex> = v.iter().map(|z| z + c).collect();
        prop_assert!((r_variation(&shifted, r).unwrap() - base).abs() <= tol);
        let rotated: Vec<Complex> = v.iter().map(|z| z * expi(phase)).collect();
        prop_assert!((r_variation(&rotated, r).unwrap() - base).abs() <= tol);
        let reversed: Vec<Complex> = v.iter().rev().copied().collect();
        prop_assert!((r_variation(&reversed, r).unwrap() - base).abs() <= tol);
        // V^r decreases in r.
        prop_assert!(r_variation(&v, r + 1.0).unwrap() <= base + tol);
        prop_assert!(r_variation(&v, f64::INFINITY).unwrap() <= base + tol);
    }

    #[test]
    fn convolution_contracts(
        vals in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..30),
        start in -100i64..100,
        theta in 0.0..1.0f64,
        d in 1usize..4,
        n in 1u64..200,
    ) {
        let v: Vec<Complex> = vals.into_iter().map(|(a, b)| Complex::new(a, b)).collect();
        let f = LatticeSignal::from_interval(start, &v).unwrap();
        let k = twisted_convolution(&f, theta, &IntPoly::monomial(d), n).unwrap();
        prop_assert!(k.l2_norm() <= f.l2_norm() * (1.0 + 1e-12) + 1e-15);
    }

    #[test]
    fn derived_rationals_are_reduced_residues(
        lower in prop::collection::vec(-30i64..30, 1..4),
        md in 1i64..6,
        j_raw in 0u64..100,
        b in 1i64..300,
        a_raw in 0i64..300,
        y in 1i64..300,
        x in -300i64..300,
    ) {
        let mut m = lower;
        m.push(md);
        let p = IntPoly::new(m).unwrap();
        let j = j_raw % md as u64;
        let ab = Rational::new(a_raw % b, b).unwrap();
        let xy = Rational::new(x, y).unwrap();
        let dr = derived_rationals(&ab, j, &p, &xy).unwrap();
        prop_assert_eq!(dr.rationals.len(), p.degree() - 1);
        for r in &dr.rationals {
            let v = r.to_f64();
            prop_assert!((0.0..1.0).contains(&v));
            prop_assert!((&dr.b_n_j % r.den()) == 0.into());
        }
        prop_assert!((&dr.b_n_j % ab.den()) == 0.into());
    }

    #[test]
    fn convergents_approach(theta in 0.001..0.999f64) {
        let cf = cf_expand(theta, 12).unwrap();
        let cs = convergents(&cf).unwrap();
        for c in &cs {
            let q = c.den().to_string().parse::<f64>().unwrap();
            // |θ − p/q| < 1/q² (up to the rounding of θ).
            prop_assert!(c.distance_to(theta) <= 1.0 / (q * q) + 1e-15);
        }
    }

    #[test]
    fn int_poly_round_trip(m in prop::collection::vec(-50i64..50, 0..4), md in 1i64..9) {
        let mut m = m;
        m.push(md);
        let p = IntPoly::new(m).unwrap();
        prop_assert_eq!(IntPoly::parse(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn hardy_round_trip(c in 0.1..5.0f64, e1 in 0.05..0.95f64, e2 in 0.05..0.95f64) {
        let text = format!("{c}*s^{e1} + s^{e2}");
        let p = HardyExpr::parse(&text).unwrap();
        let q = HardyExpr::parse(&p.to_string()).unwrap();
        for s in [1.0, 10.0, 1e4] {
            prop_assert!((p.eval(s) - q.eval(s)).abs() <= 1e-9 * p.eval(s).abs().max(1.0));
        }
    }

    #[test]
    fn numeric_parsers(k in 0u32..60, a in -1000i64..1000, b in 1i64..1000) {
        prop_assert_eq!(parse_int(&format!("2^{k}")).unwrap(), 1u64 << k);
        let v = parse_real(&format!("{a}/{b}")).unwrap();
        prop_assert!((v - a as f64 / b as f64).abs() < 1e-15);
        let list = parse_ints(&format!("{},{},{}", k + 1, k + 2, k + 3)).unwrap();
        prop_assert_eq!(list, vec![k as u64 + 1, k as u64 + 2, k as u64 + 3]);
    }
}
