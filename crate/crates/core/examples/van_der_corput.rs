use wiener_wintner::numerics::expi;
use wiener_wintner::phase_sums::{vdc_lhs, vdc_rhs, vdc_rhs_all};
use wiener_wintner::Complex;

fn main() -> wiener_wintner::Result<()> {
    // u_n = e(n² √2): equidistributed, so |avg|² is small and the
    // right-hand side shrinks as H grows.
    let u: Vec<Complex> = (1..=200).map(|n| expi((n * n) as f64 * std::f64::consts::SQRT_2)).collect();
    let lhs = vdc_lhs(&u);
    println!("|avg|^2 = {lhs:.3e}");
    for h in [1, 5, 20, 50, 200] {
        println!("H = {h:>3}: rhs = {:.4}", vdc_rhs(&u, h)?);
    }
    let best = vdc_rhs_all(&u)?.into_iter().fold(f64::INFINITY, f64::min);
    println!("best rhs over all H: {best:.4}");
    Ok(())
}
