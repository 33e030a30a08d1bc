//! Twisted polynomial averages along orbits, maximized over a net of
//! badly approximable θ, and a Hardy-weighted average on the skew product.

use wiener_wintner::dynamics::{e12_quadratic_net, phase_weights, weighted_average, ww_sup_experiment, SystemSpec, TrigPoly};
use wiener_wintner::numerics::GOLDEN;
use wiener_wintner::phase_sums::IntPoly;

fn main() -> wiener_wintner::Result<()> {
    let rot = SystemSpec::rotation(GOLDEN)?;
    let f = TrigPoly::parse("e(x)", 1)?;
    let p = IntPoly::parse("n^2")?;
    let ns: Vec<u64> = (8..=16).step_by(2).map(|k| 1 << k).collect();
    let x0 = rot.default_point(0)?;
    for row in ww_sup_experiment(&rot, &f, &x0, &e12_quadratic_net(), &p, &ns)? {
        println!("N = {:>6}: sup {:.4e} at θ = {:.6}", row.n, row.sup, row.argmax_theta);
    }

    let skew = SystemSpec::skew(GOLDEN)?;
    let g = TrigPoly::parse("e(y)", 2)?;
    let n = 1_000_000;
    let w = phase_weights(n, f64::sqrt);
    let avg = weighted_average(&skew, &g, &skew.default_point(0)?, &w, n)?;
    println!("skew, weights e(√n), N = {n}: |avg| = {:.3e}", avg.norm());
    Ok(())
}
