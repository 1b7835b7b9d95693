//! Complete and incomplete elliptic integrals and the Jacobi functions.
//!
//! Run with `cargo run --example elliptic_functions`.

use std::f64::consts::FRAC_PI_2;

use poncelet::elliptic::Modulus;

fn main() -> poncelet::Result<()> {
    for e in [0.0, 0.5, 0.8, 0.99] {
        let m = Modulus::new(e)?;
        println!("e = {e:<4}  K = {:.15}  E = {:.15}  F(pi/2) = {:.15}", m.k(), m.complete_e(), m.f(FRAC_PI_2));
    }

    // Half-period values: cn^2 = e'/(1+e'), sn^2 = 1/(1+e'), dn^2 = e'.
    let m = Modulus::new(0.8)?;
    let j = m.jacobi(0.5 * m.k());
    println!("e = 0.8, u = K/2: sn^2 = {:.15}  cn^2 = {:.15}  dn^2 = {:.15}", j.sn * j.sn, j.cn * j.cn, j.dn * j.dn);

    // The amplitude inverts F on the real line, including beyond a quarter period.
    for u in [0.3, 1.5, 4.0, -7.2] {
        println!("u = {u:>5}: F(am(u)) - u = {:.1e}", m.f(m.am(u)) - u);
    }

    // Gauss transformation of the modulus doubles K up to the factor 1 + e.
    let e = 0.3;
    let g = Modulus::new(2.0 * f64::sqrt(e) / (1.0 + e))?;
    println!("K(g(0.3)) - 1.3 K(0.3) = {:.1e}", g.k() - 1.3 * Modulus::new(e)?.k());

    // Epsilon function and the derivatives used by monotonicity arguments.
    let m = Modulus::new(0.6)?;
    let k = m.k();
    println!("epsilon(K/2) - epsilon(K)/2 = {:.6} (positive)", m.epsilon(0.5 * k) - 0.5 * m.epsilon(k));
    println!("dK/de(0.6) = {:.12}, dcd/dt(0.4) = {:.12}", m.dk_de(), m.dcd_dt(0.4));
    Ok(())
}
