use wiener_wintner::circle_method::{khat, multiplier_residual, MajorArcModel};
use wiener_wintner::phase_sums::IntPoly;

fn main() -> wiener_wintner::Result<()> {
    let p = IntPoly::parse("n^2")?;
    let n = 1 << 10;
    let model = MajorArcModel::build(0.0, &p, n, 0.2)?;
    println!("N = {n}, δ = 0.2: {} atoms", model.enumeration.all_atoms().count());
    for a in model.enumeration.all_atoms() {
        let direct = khat(0.0, &p, n, a.center)?;
        let approx = model.evaluate(a.center)?;
        println!(
            "  a/b = {:>4}  |S| = {:.4}  K̂ = {:.4}  model = {:.4}",
            a.a_over_b.to_string(),
            a.s.norm(),
            direct,
            approx
        );
    }

    let ns: Vec<u64> = (8..=14).map(|k| 1 << k).collect();
    let r = multiplier_residual(0.0, &p, &ns, 0.05, 41)?;
    for row in &r.rows {
        println!("N = {:>5}: max residual {:.3e}", row.n, row.max_residual);
    }
    println!("fitted exponent {:.3}", r.exponent.unwrap_or(f64::NAN));
    Ok(())
}
