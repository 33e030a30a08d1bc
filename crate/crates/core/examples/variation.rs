use wiener_wintner::numerics::GOLDEN;
use wiener_wintner::phase_sums::IntPoly;
use wiener_wintner::variation::{r_variation, variation_growth, LatticeSignal};
use wiener_wintner::Complex;

fn main() -> wiener_wintner::Result<()> {
    let alt: Vec<Complex> = (0..9).map(|i| Complex::new((i % 2) as f64, 0.0)).collect();
    println!("V^2 of 0,1,0,…: {} (√8 = {})", r_variation(&alt, 2.0)?, 8f64.sqrt());

    let rows = variation_growth(&LatticeSignal::delta(0), GOLDEN, &IntPoly::parse("n^2")?, 2.0, 2.5, 1 << 14)?;
    for r in &rows {
        println!("N_max = {:>5}: ‖V^2.5‖/‖f‖ = {:.5}", r.n_max, r.ratio);
    }
    Ok(())
}
