//! Draws a pencil with a closed heptagon and writes it as SVG.
//!
//! Run with `cargo run --example render_svg -- out.svg`; without an argument
//! the document is printed.

use poncelet::billiard::{confocal_ellipse, porism_f, EccPair};
use poncelet::pencil::{Pencil, PencilParam};
use poncelet::poncelet::{covering, polygon};
use poncelet::svg::{ellipse_outline, outer_outline, Scene};

fn main() -> poncelet::Result<()> {
    let e = 0.8;
    let pair = EccPair::new(e, porism_f(e, 2.0 / 7.0)?)?;
    let p = Pencil::new(confocal_ellipse(pair.f()), confocal_ellipse(pair.e()))?;
    let orbit = polygon(&p, PencilParam::new(0.0, 1.0), covering(&p, 0.05), 7)?;

    let mut scene = Scene::new();
    scene
        .outline(outer_outline(&p), "black")
        .outline(ellipse_outline(p.inner()), "gray")
        .path(orbit.points.clone(), "red")
        .dot(orbit.points[0], "red");
    let doc = scene.render();

    match std::env::args().nth(1) {
        Some(path) => {
            std::fs::write(&path, doc).expect("output file is writable");
            eprintln!("wrote {path}: {} vertices, closure residual {:.1e}", orbit.points.len(), orbit.closure_residual);
        }
        None => print!("{doc}"),
    }
    Ok(())
}
