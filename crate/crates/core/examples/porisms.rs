//! Closed polygons of the confocal billiard.
//!
//! For each rotation number `l = p/q` the boundary `f = porism_f(e, l)` makes
//! every billiard orbit tangent to `E(e)` close after `q` bounces. The pairs
//! for small periods also satisfy explicit polynomial relations in `(e, f)`.
//!
//! Run with `cargo run --example porisms`.

use poncelet::billiard::{confocal_step, porism_f, rotation_confocal, EccPair};
use poncelet::cayley::{confocal_poristic_residual, PoristicSet};
use poncelet::conics::PlanePoint;

fn main() -> poncelet::Result<()> {
    let e = 0.8;
    for (p, q) in [(1, 3), (1, 4), (1, 5), (2, 7), (2, 5), (1, 6), (1, 10), (3, 10)] {
        let ell = p as f64 / q as f64;
        let f = porism_f(e, ell)?;
        let pair = EccPair::new(e, f)?;
        // Start at the top of the boundary E(f), whose semi-axes are 1/f and sqrt(1-f^2)/f.
        let z0 = PlanePoint::new(0.0, (1.0 - f * f).sqrt() / f);
        let mut z = z0;
        for _ in 0..q {
            z = confocal_step(pair, z)?;
        }
        println!(
            "l = {p}/{q:<2}  f = {f:.12}  rho = {:.12}  |z_q - z_0| = {:.1e}",
            rotation_confocal(pair),
            z.distance(z0)
        );
    }

    println!("polynomial relations on the poristic sets:");
    for set in PoristicSet::ALL {
        let mut worst = 0.0f64;
        for i in 1..20 {
            let e = i as f64 / 20.0;
            let pair = EccPair::new(e, porism_f(e, set.rotation())?)?;
            worst = worst.max(confocal_poristic_residual(pair, set).abs());
        }
        println!("  rho = {:.4}: max relative residual {worst:.1e}", set.rotation());
    }
    Ok(())
}
