//! Certified sup over α of |(1/N) Σ e(n²α + nθ)| for golden θ.
//!
//! Large N cannot reach a 1e-3 gap within the grid cap, so each N uses the
//! larger of 1e-3 and its reachable floor.

use wiener_wintner::numerics::GOLDEN;
use wiener_wintner::phase_sums::{reachable_abs_error, sup_scan, IntPoly};

fn main() -> wiener_wintner::Result<()> {
    let p = IntPoly::parse("n^2")?;
    println!("{:>6} {:>10} {:>10} {:>10} {:>10}", "N", "sup", "upper", "argmax", "gap");
    for k in 6..=12 {
        let n = 1u64 << k;
        let eps = reachable_abs_error(GOLDEN, &p, n)?.max(1e-3);
        let s = sup_scan(GOLDEN, &p, n, eps)?;
        println!(
            "{n:>6} {:>10.6} {:>10.6} {:>10.6} {:>10.2e}",
            s.sup_value, s.rigorous_upper, s.argmax_alpha, eps
        );
    }
    Ok(())
}
