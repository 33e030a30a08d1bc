use wiener_wintner::diophantine::{
    bad_approx_constant, cf_expand, convergents, dirichlet_approx, hurwitz_tail_constant, n_theta_approximate,
};
use wiener_wintner::numerics::GOLDEN;

fn main() -> wiener_wintner::Result<()> {
    let sqrt2m1 = std::f64::consts::SQRT_2 - 1.0;
    for (name, theta) in [("golden", GOLDEN), ("sqrt2-1", sqrt2m1), ("pi-3", std::f64::consts::PI - 3.0)] {
        let cf = cf_expand(theta, 20)?;
        let conv = convergents(&cf)?;
        println!("{name}: digits {:?} ({:?})", cf.digits, cf.stop);
        println!("  last convergents: {}", conv.iter().rev().take(3).map(|r| r.to_string()).collect::<Vec<_>>().join(", "));
        println!(
            "  inf q²|θ − p/q| = {:.4}, tail = {:.4}",
            bad_approx_constant(theta, 1_000_000)?,
            hurwitz_tail_constant(theta, 1_000_000)?
        );
        println!("  Dirichlet Q = 1000: {}", dirichlet_approx(theta, 1000)?);
    }

    for k in [4, 8, 12, 16] {
        let n = 1u64 << k;
        match n_theta_approximate(1.0 / 3.0 + 1e-6, n, 0.2, 1)? {
            Some(a) => println!("N = {n}: x/y = {}, γ = {:.2e}", a.x_over_y, a.gamma),
            None => println!("N = {n}: no approximate"),
        }
    }
    Ok(())
}
