use wiener_wintner::dynamics::{SystemSpec, TrigPoly};
use wiener_wintner::numerics::{expi, GOLDEN};
use wiener_wintner::uniformity::{ghk_estimate, gowers_norm_cyclic, u2_fourier, CyclicSignal, GhkParams};

fn main() -> wiener_wintner::Result<()> {
    let n = 64;
    let linear = CyclicSignal::new((0..n).map(|x| expi(3.0 * x as f64 / n as f64)).collect())?;
    let quad = CyclicSignal::new((0..n).map(|x| expi((x * x) as f64 / n as f64)).collect())?;
    for (name, f) in [("e(3x/N)", &linear), ("e(x²/N)", &quad)] {
        let u: Vec<f64> = (1..=3).map(|m| gowers_norm_cyclic(f, m)).collect::<Result<_, _>>()?;
        println!("{name:>8}: U1 {:.4}  U2 {:.4} (Fourier {:.4})  U3 {:.4}", u[0], u[1], u2_fourier(f), u[2]);
    }

    // Ergodic seminorms of e(y) on the skew product: U² sees nothing, U³ sees it all.
    let skew = SystemSpec::skew(GOLDEN)?;
    let f = TrigPoly::parse("e(y)", 2)?;
    for depth in 2..=3 {
        let params = GhkParams { n_per_level: 2000, h_per_level: 50, depth };
        println!("skew, e(y), U{depth}: {:.4}", ghk_estimate(&skew, &f, params)?);
    }
    Ok(())
}
