//! Simultaneous diagonalization of a nested pair of ellipses.
//!
//! A diagonal pencil is moved by a projective change of coordinates; the
//! generalized eigenvalues are recovered from the transformed pair, and the
//! diagonalizer maps the standard pencil back onto it.
//!
//! Run with `cargo run --example pencil_diagonalization`.

use nalgebra::Matrix3;
use poncelet::pencil::{ParamKind, Pencil, PencilParam};
use poncelet::poncelet::covering;

fn main() -> poncelet::Result<()> {
    let reference = Pencil::from_lambdas(0.2, 0.125, 1.0 / 9.0)?;
    let s = Matrix3::new(1.3, 0.2, 0.1, -0.4, 0.9, -0.3, 0.05, -0.02, 1.0);
    let c1 = reference.outer().conic().congruent(&s);
    let c2 = reference.inner().conic().congruent(&s);
    let p = Pencil::new(c1, c2)?;

    let [l1, l2, l3] = p.spectrum().as_array();
    println!("eigenvalues: {l1:.15} {l2:.15} {l3:.15}");
    println!("eccentricity: {:.15} (sqrt(27/32) = {:.15})", p.eccentricity(), (27.0f64 / 32.0).sqrt());
    println!("diagonalizer:\n{:.6}", p.diagonalizer());

    // Points of the standard circle land on the outer conic.
    let mut worst = 0.0f64;
    for i in 0..8 {
        let z = covering(&p, i as f64 / 8.0);
        worst = worst.max(p.outer().relative_value(z).abs());
    }
    println!("covering points on the outer conic: max relative value {worst:.1e}");

    let lim = p.limiting_point()?;
    println!("limiting point: ({:.9}, {:.9})", lim.x, lim.y);

    for nu in [
        PencilParam::new(0.0, 1.0),
        PencilParam::new(1.0, 0.0),
        p.spectrum().limiting_param(),
        PencilParam::new(-1.0, 0.5),
    ] {
        print!("nu = ({:>8.5}, {:>8.5}): ", nu.nu1, nu.nu2);
        match p.classify(nu) {
            Ok(ParamKind::Interior) => {
                let d = p.dual(nu)?;
                println!("Interior, dual ({:.6}, {:.6}), f = {:.9}", d.nu1, d.nu2, p.standard_f(nu)?);
            }
            Ok(kind) => println!("{kind:?}"),
            Err(err) => println!("rejected: {err}"),
        }
    }
    Ok(())
}
