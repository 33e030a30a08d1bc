//! Box-counting dimension of the continued-fraction Cantor set with digits
//! in {1, 2}, from its depth-12 cylinder intervals.

use wiener_wintner::diophantine::{box_dimension, cantor_net, BoxSet, EpsRange};

fn main() -> wiener_wintner::Result<()> {
    let net = cantor_net(&[1, 2], 12)?;
    let iv: Vec<(f64, f64)> = net.iter().map(|i| (i.lo_f64(), i.hi_f64())).collect();
    let d = box_dimension(BoxSet::Intervals(&iv), EpsRange::new(1e-4, 1e-2, 12))?;
    for (eps, count) in &d.counts {
        println!("{eps:>10.3e} {count:>6}");
    }
    println!("dimension ≈ {:.4} (residual {:.3})", d.slope, d.fit_residual);
    Ok(())
}
