//! Behaviour of the confocal rotation number and porism boundaries as the
//! caustic eccentricity approaches 1.
//!
//! Run with `cargo run --example singular_limits`.

use poncelet::billiard::{estimate_rotation_confocal, porism_f, rotation_confocal, EccPair};

fn main() -> poncelet::Result<()> {
    println!("rotation number at f = 0.5 as e -> 1");
    for k in 1..=9 {
        let e = 1.0 - 10f64.powi(-k);
        let rho = rotation_confocal(EccPair::new(e, 0.5)?);
        println!("  e = 1 - 1e-{k}: rho = {rho:.8}");
    }

    let near = EccPair::new(0.999_999, 0.5)?;
    println!(
        "  orbit average at e = 0.999999: {:.8} (closed form {:.8})",
        estimate_rotation_confocal(near, 100_000)?,
        rotation_confocal(near)
    );

    println!("porism boundary f(e, l) approaching e");
    for ell in [1.0 / 3.0, 0.25, 0.2, 0.1] {
        print!("  l = {ell:.4}:");
        for e in [0.9, 0.99, 0.999, 0.9999] {
            let f = porism_f(e, ell)?;
            print!("  e - f = {:.3e}", e - f);
        }
        println!();
    }
    Ok(())
}
