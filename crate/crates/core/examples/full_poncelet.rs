//! Compositions of Poncelet maps from one pencil.
//!
//! All Poncelet maps of a pencil commute, and a composition rotates the
//! covering parameter by the signed sum of the rotation numbers. A schedule
//! closes as soon as that sum is an integer.
//!
//! Run with `cargo run --release --example full_poncelet`.

use poncelet::pencil::Pencil;
use poncelet::poncelet::{covering, invert_rho, Composition};

fn main() -> poncelet::Result<()> {
    let p = Pencil::from_lambdas(0.2, 0.125, 1.0 / 9.0)?;

    // Rotation numbers 1/5 and 3/10: three forward and two backward steps sum to zero.
    let a = invert_rho(&p, 0.2)?;
    let b = invert_rho(&p, 0.3)?;
    let five = Composition::new(&p, &[(a, 1), (b, -1), (a, 1), (a, 1), (b, -1)])?;
    let run = five.run(covering(&p, 0.07))?;
    println!(
        "mixed schedule: rotation {:+.3e}, {} steps, closure residual {:.1e}",
        five.rotation_number(),
        run.steps,
        run.closure_residual
    );

    // Three maps with rotation numbers 3x^3, 2x^2, x where 21x^3 + 14x^2 + 7x = 8.
    let mut x: f64 = 0.45;
    for _ in 0..40 {
        x -= (((21.0 * x + 14.0) * x + 7.0) * x - 8.0) / ((63.0 * x + 28.0) * x + 7.0);
    }
    let ells = [3.0 * x.powi(3), 2.0 * x * x, x];
    let nus = ells.iter().map(|&l| invert_rho(&p, l)).collect::<poncelet::Result<Vec<_>>>()?;
    let triple = Composition::new(&p, &[(nus[0], 1), (nus[1], 1), (nus[2], 1)])?;
    let orbit = triple.orbit(covering(&p, 0.3), 50)?;
    println!(
        "cubic-field schedule: x = {x:.14}, triple rotation {:.12} (8/7 = {:.12}), closes after {} triples ({} steps), residual {:.1e}",
        triple.rotation_number(),
        8.0 / 7.0,
        orbit.steps,
        orbit.points.len() - 1,
        orbit.closure_residual
    );

    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let pair = Composition::new(&p, &[(nus[i], 1), (nus[j], 1)])?;
        let orbit = pair.orbit(covering(&p, 0.3), 10_000)?;
        println!("  maps {} and {} alone: closed = {} after {} passes", i + 1, j + 1, orbit.is_closed(), orbit.steps);
    }
    Ok(())
}
