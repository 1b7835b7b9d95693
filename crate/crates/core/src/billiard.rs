//! Billiards in the ellipse `E(f)` with a confocal caustic `E(e)`.
//!
//! The boundary is parametrized as `gamma(phi) = (1/f) (cos phi, sqrt(1-f^2) sin phi)`
//! and a state `(phi, r)` records the boundary parameter and the tangential
//! momentum `r = d . gamma'(phi)` of the outgoing unit direction `d`. States with
//! `r > 0` and `H > 1/2` move counterclockwise and are tangent to a confocal
//! ellipse `E(e)` with `e = 1/sqrt(2H)`.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conics::{PlanePoint, SymmetricConic};
use crate::elliptic::Modulus;
use crate::error::{Error, Result};

/// A point of the phase annulus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub phi: f64,
    pub r: f64,
}

impl PhasePoint {
    pub fn new(phi: f64, r: f64) -> Self {
        PhasePoint { phi, r }
    }
}

/// Caustic and boundary eccentricities with `0 < f < e < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EccPair {
    e: Modulus,
    f: Modulus,
}

impl EccPair {
    pub fn new(e: f64, f: f64) -> Result<Self> {
        if !(f > 0.0 && f < e && e < 1.0) {
            return Err(Error::NotInDelta { e, f });
        }
        let em = Modulus::new(e).map_err(|_| Error::NotInDelta { e, f })?;
        let fm = Modulus::new(f).map_err(|_| Error::NotInDelta { e, f })?;
        Ok(EccPair { e: em, f: fm })
    }

    pub fn e(&self) -> f64 {
        self.e.value()
    }

    pub fn f(&self) -> f64 {
        self.f.value()
    }

    pub fn caustic(&self) -> Modulus {
        self.e
    }

    pub fn boundary(&self) -> Modulus {
        self.f
    }
}

/// Regions of the phase annulus distinguished by the invariant `H` and the sign of `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseRegion {
    /// `H < 1/2`: orbits tangent to confocal hyperbolas.
    Hyperbolic,
    /// `H = 1/2`: orbits through the foci.
    Separatrix,
    /// `H > 1/2`, `r > 0`: counterclockwise orbits with an elliptic caustic.
    UPlus,
    /// `H > 1/2`, `r < 0`: clockwise orbits with an elliptic caustic.
    UMinus,
}

pub fn classify_state(s: PhasePoint) -> PhaseRegion {
    let h = invariant_h(s);
    if (h - 0.5).abs() <= 1e-14 {
        PhaseRegion::Separatrix
    } else if h < 0.5 {
        PhaseRegion::Hyperbolic
    } else if s.r > 0.0 {
        PhaseRegion::UPlus
    } else {
        PhaseRegion::UMinus
    }
}

/// The confocal ellipse `E(eps)`: `eps^2 x^2 + eps^2/(1-eps^2) y^2 = 1`.
pub fn confocal_ellipse(eps: f64) -> SymmetricConic {
    let e2 = eps * eps;
    SymmetricConic::diagonal(e2, e2 / ((1.0 - eps) * (1.0 + eps)), -1.0)
}

/// Boundary point `gamma(phi)` of `E(f)`.
pub fn boundary_point(f: f64, phi: f64) -> PlanePoint {
    let (s, c) = phi.sin_cos();
    PlanePoint::new(c / f, complement(f) * s / f)
}

/// Velocity `gamma'(phi)` of the boundary parametrization.
pub fn boundary_velocity(f: f64, phi: f64) -> PlanePoint {
    let (s, c) = phi.sin_cos();
    PlanePoint::new(-s / f, complement(f) * c / f)
}

/// Boundary parameter of a point on `E(f)`.
pub fn boundary_parameter(f: f64, p: PlanePoint) -> f64 {
    (p.y * f / complement(f)).atan2(p.x * f)
}

fn complement(f: f64) -> f64 {
    ((1.0 - f) * (1.0 + f)).sqrt()
}

fn check_boundary(f: f64) -> Result<()> {
    if f > 0.0 && f < 1.0 {
        Ok(())
    } else {
        Err(Error::ModulusOutOfRange(f))
    }
}

/// `H(phi, r) = r^2/2 + cos^2(phi)/2`, conserved by the billiard map.
pub fn invariant_h(s: PhasePoint) -> f64 {
    let c = s.phi.cos();
    0.5 * s.r * s.r + 0.5 * c * c
}

/// Eccentricity `1/sqrt(2H)` of the caustic touched by a `U+` state.
pub fn caustic_of_state(s: PhasePoint) -> Result<Modulus> {
    let h = invariant_h(s);
    if !(s.r > 0.0) {
        return Err(Error::NotInUPlus(format!("r = {} is not positive", s.r)));
    }
    if !(h > 0.5) {
        return Err(Error::NotInUPlus(format!("H = {h} does not exceed 1/2")));
    }
    Modulus::new(1.0 / (2.0 * h).sqrt()).map_err(|_| Error::NotInUPlus(format!("H = {h}")))
}

/// One bounce of the billiard in `E(f)`.
///
/// The outgoing direction is rebuilt from `r` on the inner side of the
/// boundary and the next collision is the second root of the ray-ellipse
/// quadratic. The returned angle is reduced to `[0, 2 pi)`.
pub fn billiard_map(f: f64, s: PhasePoint) -> Result<PhasePoint> {
    check_boundary(f)?;
    let v = boundary_velocity(f, s.phi);
    let speed = v.norm();
    if !(s.r.abs() < speed) {
        return Err(Error::OutOfAnnulus { phi: s.phi, r: s.r });
    }
    let t = PlanePoint::new(v.x / speed, v.y / speed);
    let inward = PlanePoint::new(-t.y, t.x);
    let cos_a = s.r / speed;
    let sin_a = ((1.0 - cos_a) * (1.0 + cos_a)).sqrt();
    let d = PlanePoint::new(cos_a * t.x + sin_a * inward.x, cos_a * t.y + sin_a * inward.y);
    let p = boundary_point(f, s.phi);
    let ellipse = confocal_ellipse(f).validate()?;
    let q = ellipse.second_intersection(p, d)?;
    let phi1 = boundary_parameter(f, q).rem_euclid(TAU);
    let v1 = boundary_velocity(f, phi1);
    Ok(PhasePoint::new(phi1, d.x * v1.x + d.y * v1.y))
}

/// The `U+` state at `phi` tangent to the caustic `E(e)`.
pub fn caustic_state(e: f64, phi: f64) -> PhasePoint {
    let c = phi.cos();
    PhasePoint::new(phi, (1.0 / (e * e) - c * c).sqrt())
}

/// Confocal Poncelet map `B_e^f` acting on points of `E(f)`.
pub fn confocal_step(p: EccPair, z: PlanePoint) -> Result<PlanePoint> {
    let phi = boundary_parameter(p.f(), z);
    let next = billiard_map(p.f(), caustic_state(p.e(), phi))?;
    Ok(boundary_point(p.f(), next.phi))
}

/// Closed-form rotation number `F(w, e) / (2K(e))` of `B_e^f`,
/// with `sin^2 w = (e^2 - f^2) / (e^2 (1 - f^2))`.
pub fn rotation_confocal(p: EccPair) -> f64 {
    let (e, f) = (p.e(), p.f());
    let s2 = (e - f) * (e + f) / (e * e * (1.0 - f) * (1.0 + f));
    let omega = s2.sqrt().min(1.0).asin();
    p.e.f(omega) / (2.0 * p.e.k())
}

/// Boundary eccentricity `f = e cd(2 K(e) l, e)` for which the rotation number is `l`.
pub fn porism_f(e: f64, ell: f64) -> Result<f64> {
    let m = Modulus::new(e)?;
    if e == 0.0 {
        return Err(Error::ModulusOutOfRange(e));
    }
    if !(ell > 0.0 && ell < 0.5) {
        return Err(Error::InvalidRotation(ell));
    }
    Ok(e * m.cd(2.0 * m.k() * ell))
}

/// Boundaries `(f1, f2)` with rotation numbers `rho/2` and `1/2 - rho/2`,
/// where `rho` is the rotation number of `(e, f0)`.
pub fn half_rotation(p: EccPair) -> (f64, f64) {
    let (e, f0) = (p.e(), p.f());
    let s = (p.e.complement() * p.f.complement()).abs();
    let f1 = (e * (e + f0) / (1.0 + e * f0 + s)).sqrt();
    let f2 = (e * (e - f0) / (1.0 - e * f0 + s)).sqrt();
    (f1, f2)
}

/// The Gauss (Landen) transformation `G(e, f) = (2 sqrt(e)/(1+e), 2 sqrt(e) f/(f^2+e))`.
pub fn gauss_transform(p: EccPair) -> Result<EccPair> {
    let (e, f) = (p.e(), p.f());
    let r = 2.0 * e.sqrt();
    EccPair::new(r / (1.0 + e), r * f / (f * f + e))
}

/// Covering map `theta -> (1/f) (-sn(4K theta), sqrt(1-f^2) cn(4K theta))` of `E(f)`.
pub fn confocal_cover(theta: f64, p: EccPair) -> PlanePoint {
    let j = p.e.jacobi(4.0 * p.e.k() * theta);
    let f = p.f();
    PlanePoint::new(-j.sn / f, p.f.complement() * j.cn / f)
}

/// Winding average of `n` billiard bounces on the caustic level `H = 1/(2e^2)`.
pub fn estimate_rotation_confocal(p: EccPair, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one iterate".into()));
    }
    let f = p.f();
    let mut s = caustic_state(p.e(), 0.5 * PI);
    let mut total = 0.0;
    for _ in 0..n {
        let next = billiard_map(f, s)?;
        total += (next.phi - s.phi).rem_euclid(TAU);
        s = next;
    }
    Ok(total / (TAU * n as f64))
}

/// One row of a rotation-number sweep over `Delta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub e: f64,
    pub f: f64,
    pub rho_closed_form: f64,
    pub rho_numeric: f64,
    pub residual: f64,
}

/// Grid points `e_i = (i+1)/(g+1)`, `f_j = e_i (j+1)/(g+1)` covering the interior of `Delta`.
pub fn sweep_grid(g: usize) -> Vec<(f64, f64)> {
    let step = 1.0 / (g + 1) as f64;
    (0..g)
        .flat_map(|i| {
            let e = (i + 1) as f64 * step;
            (0..g).map(move |j| (e, e * (j + 1) as f64 * step))
        })
        .collect()
}

/// Closed-form versus orbit rotation numbers on a `g x g` grid, in grid order.
pub fn sweep(g: usize, steps: usize) -> Result<Vec<SweepRow>> {
    sweep_grid(g)
        .into_par_iter()
        .map(|(e, f)| {
            let p = EccPair::new(e, f)?;
            let closed = rotation_confocal(p);
            let numeric = estimate_rotation_confocal(p, steps)?;
            Ok(SweepRow { e, f, rho_closed_form: closed, rho_numeric: numeric, residual: (closed - numeric).abs() })
        })
        .collect()
}
