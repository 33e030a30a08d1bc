//! Averages of e(p(n)) for fractional powers against the Euler-summation
//! majorant, with a class certificate for each p.

use wiener_wintner::harness::fit_m_witness;
use wiener_wintner::hardy::{class_check_m, hardy_average, HardyExpr};
use wiener_wintner::phase_sums::euler_decay_bound;

fn main() -> wiener_wintner::Result<()> {
    for src in ["s^0.3", "s^0.5", "2*s^0.7"] {
        let p = HardyExpr::parse(src)?;
        let w = fit_m_witness(&p, 1e6, None, None, None)?;
        let cert = class_check_m(&p, &w, 256)?;
        println!("{p}: M = {:.3}, certified = {}", w.m_const, cert.is_certified());
        for n in [100u64, 10_000, 1_000_000] {
            let avg = hardy_average(&p, n as usize)?.abs();
            println!("  N = {n:>7}  |avg| = {avg:.3e}  bound = {:.3e}", euler_decay_bound(&p, &w, n)?);
        }
    }
    Ok(())
}
