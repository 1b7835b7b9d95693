//! Cayley's closure criterion for pencils with a poristic inner conic.
//!
//! The square root of `det(l C1 - C2)` is expanded as a power series; a
//! Hankel determinant of its coefficients vanishes exactly when Poncelet
//! polygons close after `N` steps. The classical circle relations of Chapple,
//! Euler and Fuss are included for comparison.
//!
//! Run with `cargo run --example cayley_conditions`.

use poncelet::cayley::{bicentric_check, cayley_condition, cayley_report, BicentricKind};
use poncelet::pencil::Pencil;
use poncelet::poncelet::invert_rho;

fn poristic(p: &Pencil, ell: f64) -> poncelet::Result<Pencil> {
    let member = p.member(invert_rho(p, ell)?)?;
    Pencil::new(*p.outer().conic(), *member.conic())
}

fn main() -> poncelet::Result<()> {
    let p = Pencil::from_lambdas(3.0, 2.0, 1.0)?;
    println!("{:>3} {:>6} {:>14} {:>14}", "N", "k/N", "poristic", "control");
    for n in 3..=10u32 {
        for k in (1..n).filter(|&k| 2 * k < n && (1..=k).filter(|d| k % d == 0 && n % d == 0).count() == 1) {
            let hit = cayley_condition(&poristic(&p, k as f64 / n as f64)?, n as usize)?;
            let miss = cayley_condition(&poristic(&p, (k as f64 + 0.5) / n as f64 - 0.25 / n as f64)?, n as usize)?;
            println!("{n:>3} {:>6} {hit:>14.3e} {miss:>14.3e}", format!("{k}/{n}"));
        }
    }

    let report = cayley_report(&poristic(&p, 0.25)?, 4)?;
    println!("report: {}", serde_json::to_string(&report).expect("report serializes"));

    println!(
        "Chapple-Euler at (1, 1/2, 0): {:e}; Fuss at (1, 1/sqrt 2, 0): {:e}",
        bicentric_check(1.0, 0.5, 0.0, BicentricKind::Triangle)?,
        bicentric_check(1.0, 0.5f64.sqrt(), 0.0, BicentricKind::Quadrilateral)?
    );
    Ok(())
}
