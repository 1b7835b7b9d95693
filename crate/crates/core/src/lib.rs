//! Rotation numbers, porisms and polygons of Poncelet maps.
//!
//! A pair of nested ellipses `C2` inside `C1` defines a circle map on `C1`:
//! follow the chord tangent to `C2` to its other end. This crate computes the
//! rotation number of that map in closed form from elliptic integrals, for the
//! confocal billiard and for every member of the pencil spanned by the pair.
//! It also solves the inverse problem, certifies porisms, composes maps of one
//! pencil and draws orbits.
//!
//! - [`elliptic`]: complete and incomplete integrals, Jacobi functions.
//! - [`conics`]: conic matrices, tangents and chord intersections.
//! - [`pencil`]: generalized eigenvalues, the diagonalizing chart, duality.
//! - [`billiard`]: the elliptic billiard, `rho(e, f)`, explicit porisms, the Gauss map.
//! - [`poncelet`]: Poncelet maps of a pencil, the covering, the inverse problem, compositions.
//! - [`cayley`]: Cayley determinants, eigenvalue conditions, bicentric relations.
//! - [`verify`]: the self-check suites behind `poncelet verify`.
//! - [`cli`] and [`svg`]: the command-line front end and its drawings.
//!
//! Runnable examples live in `examples/`:
//! `elliptic_functions`, `billiard_rotation`, `porisms`, `pencil_diagonalization`,
//! `inverse_problem`, `full_poncelet`, `cayley_conditions`, `singular_limits`
//! and `render_svg`.
//!
//! ```
//! use poncelet::billiard::{rotation_confocal, EccPair};
//!
//! let square = EccPair::new(0.8, 0.4f64.sqrt()).unwrap();
//! assert!((rotation_confocal(square) - 0.25).abs() < 1e-12);
//! ```

// Range checks are written `!(x > a)` on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod billiard;
pub mod cayley;
pub mod cli;
pub mod conics;
pub mod elliptic;
pub mod error;
pub mod pencil;
pub mod poncelet;
pub mod svg;
pub mod verify;

pub use error::{Error, Result};
