//! Finding the pencil member with a prescribed rotation number.
//!
//! `invert_rho` returns the member whose Poncelet polygons close after `q`
//! steps for `l = p/q`; the orbits are then closed from every starting point.
//!
//! Run with `cargo run --example inverse_problem`.

use poncelet::pencil::Pencil;
use poncelet::poncelet::{covering, invert_rho, polygon, rho_of_nu};

fn main() -> poncelet::Result<()> {
    let p = Pencil::from_lambdas(0.2, 0.125, 1.0 / 9.0)?;
    for (k, n) in [(1, 3), (1, 4), (2, 7), (2, 5), (3, 10)] {
        let ell = k as f64 / n as f64;
        let nu = invert_rho(&p, ell)?;
        let mut worst = 0.0f64;
        for s in 0..16 {
            let orbit = polygon(&p, nu, covering(&p, s as f64 / 16.0), n)?;
            worst = worst.max(orbit.closure_residual);
        }
        println!(
            "l = {k}/{n:<2}  nu = ({:+.12}, {:.12})  rho(nu) = {:.15}  worst closure over 16 starts {worst:.1e}",
            nu.nu1,
            nu.nu2,
            rho_of_nu(&p, nu)?
        );
    }

    // The dual member completes the rotation number to 1/2.
    let nu = invert_rho(&p, 0.15)?;
    let d = p.dual(nu)?;
    println!("rho(nu) + rho(dual nu) = {:.15}", rho_of_nu(&p, nu)? + rho_of_nu(&p, d)?);
    Ok(())
}
