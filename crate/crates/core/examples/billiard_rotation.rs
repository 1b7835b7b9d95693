//! Rotation numbers of the elliptic billiard with a confocal caustic.
//!
//! The billiard inside `E(f)` whose orbits are tangent to the caustic `E(e)`
//! has a closed-form rotation number. This compares it with the winding
//! average of the reflection map and prints a coarse sweep.
//!
//! Run with `cargo run --release --example billiard_rotation`.

use poncelet::billiard::{
    billiard_map, caustic_state, estimate_rotation_confocal, gauss_transform, half_rotation, invariant_h,
    rotation_confocal, sweep, EccPair,
};

fn main() -> poncelet::Result<()> {
    let p = EccPair::new(0.8, 0.572851)?;
    println!("(e, f) = (0.8, 0.572851): rho = {:.7} (2/7 = {:.7})", rotation_confocal(p), 2.0 / 7.0);
    println!("  orbit average over 1e5 bounces: {:.7}", estimate_rotation_confocal(p, 100_000)?);

    // The caustic level is conserved along the orbit.
    let mut s = caustic_state(p.e(), 1.0);
    let h0 = invariant_h(s);
    for _ in 0..1000 {
        s = billiard_map(p.f(), s)?;
    }
    println!("  drift of the invariant after 1000 bounces: {:.1e}", invariant_h(s) - h0);

    let (f1, f2) = half_rotation(p);
    println!(
        "  half rotation: f1 = {f1:.6} (rho {:.6}), f2 = {f2:.6} (rho {:.6})",
        rotation_confocal(EccPair::new(0.8, f1)?),
        rotation_confocal(EccPair::new(0.8, f2)?)
    );

    let q = EccPair::new(0.6, 0.503246)?;
    let g = gauss_transform(q)?;
    println!(
        "Gauss image of (0.6, 0.503246) = ({:.6}, {:.6}), rotation {:.7} -> {:.7}",
        g.e(),
        g.f(),
        rotation_confocal(q),
        rotation_confocal(g)
    );

    println!("sweep over a 4x4 grid, 1e4 bounces each:");
    println!("  {:>8} {:>8} {:>12} {:>12} {:>9}", "e", "f", "closed", "numeric", "residual");
    for r in sweep(4, 10_000)? {
        println!(
            "  {:>8.4} {:>8.4} {:>12.8} {:>12.8} {:>9.1e}",
            r.e, r.f, r.rho_closed_form, r.rho_numeric, r.residual
        );
    }
    Ok(())
}
