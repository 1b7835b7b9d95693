//! Poncelet maps of a pencil and their rotation numbers.
//!
//! For a member `C_nu` inside the outer conic `C1`, the Poncelet map sends a
//! point `z` of `C1` to the other end of the chord through `z` that touches
//! `C_nu` with `C_nu` on its left. Every such map is conjugate, through the
//! covering `theta -> M(cn(4K theta), sn(4K theta))`, to the rigid rotation
//! `theta -> theta + rho(nu)`.

use std::f64::consts::TAU;

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::conics::{Ellipse, PlanePoint};
use crate::elliptic::Modulus;
use crate::error::{Error, Result};
use crate::pencil::{require_on, ParamKind, Pencil, PencilParam, Spectrum};

/// Return distance, measured in the standard chart, that counts as closing an orbit.
pub const TOL_CLOSE: f64 = 1e-7;

/// Tolerance for a point to count as lying on the unit circle.
pub const ON_CIRCLE_TOL: f64 = 1e-9;

/// A finite orbit of Poncelet steps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonOrbit {
    /// Vertices `z_0, z_1, ...`, including the final point.
    #[serde(with = "point_list")]
    pub points: Vec<PlanePoint>,
    pub steps: usize,
    pub winding: i64,
    /// Distance between the final point and `z_0` in the standard chart.
    pub closure_residual: f64,
    pub rho: f64,
}

impl PolygonOrbit {
    pub fn is_closed(&self) -> bool {
        self.closure_residual < TOL_CLOSE
    }
}

mod point_list {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::conics::PlanePoint;

    pub fn serialize<S: Serializer>(pts: &[PlanePoint], s: S) -> Result<S::Ok, S::Error> {
        let raw: Vec<[f64; 2]> = pts.iter().map(|&p| p.into()).collect();
        raw.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<PlanePoint>, D::Error> {
        let raw: Vec<[f64; 2]> = Vec::deserialize(d)?;
        Ok(raw.into_iter().map(PlanePoint::from).collect())
    }
}

/// The explicit Poncelet map of the standard pencil on the unit circle.
///
/// `f` selects the inner conic `((1-f^2)/(1-e^2)) X^2 + Y^2 = f^2/e^2`;
/// `f = e` is the identity and `f = 0` the half turn.
pub fn standard_map(e: Modulus, f: f64, p: PlanePoint) -> Result<PlanePoint> {
    let ev = e.value();
    if !(f >= 0.0 && f <= ev) {
        return Err(Error::InvalidParameter(format!("f = {f} must satisfy 0 <= f <= e = {ev}")));
    }
    if (p.norm() - 1.0).abs() > ON_CIRCLE_TOL {
        return Err(Error::OffCircle(p));
    }
    let (x, y) = (p.x, p.y);
    let e2 = ev * ev;
    let f2 = f * f;
    let f4 = f2 * f2;
    let a1 = 2.0 * f * ((1.0 - f2) * (ev - f) * (ev + f)).sqrt();
    let a2 = e2 - f4;
    let a3 = e2 + f4 - 2.0 * f2;
    let a4 = e2 * (1.0 - 2.0 * f2) + f4;
    let ey = ev * y;
    let root = ((1.0 - ey) * (1.0 + ey)).max(0.0).sqrt();
    let den = a2 * a2 - a1 * a1 * e2 * y * y;
    Ok(PlanePoint::new(-(a1 * a4 * y * root + a2 * a3 * x) / den, (a1 * a2 * x * root - a3 * a4 * y) / den))
}

/// Closed-form rotation number of the Poncelet map of `nu`:
/// `0` for the outer conic, `1/2` for the limiting point and
/// `F(w, e) / (2K(e))` with `sin^2 w = (l1 - l3) nu2 / (l1 nu2 + nu1)` otherwise.
pub fn rho_for_spectrum(s: &Spectrum, nu: PencilParam) -> Result<f64> {
    match s.classify(nu)? {
        ParamKind::Outer => Ok(0.0),
        ParamKind::Limiting => Ok(0.5),
        ParamKind::Interior => {
            let m = s.modulus();
            let sin2 = (s.l1() - s.l3()) * nu.nu2 / (s.l1() * nu.nu2 + nu.nu1);
            let omega = sin2.clamp(0.0, 1.0).sqrt().asin();
            Ok(m.f(omega) / (2.0 * m.k()))
        }
    }
}

pub fn rho_of_nu(p: &Pencil, nu: PencilParam) -> Result<f64> {
    rho_for_spectrum(p.spectrum(), nu)
}

/// The member with rotation number `ell`, on the line `nu1 + l1 nu2 = l1 - l3`.
pub fn invert_rho_for_spectrum(s: &Spectrum, ell: f64) -> Result<PencilParam> {
    if !(ell > 0.0 && ell < 0.5) {
        return Err(Error::InvalidRotation(ell));
    }
    let m = s.modulus();
    let j = m.jacobi(2.0 * m.k() * ell);
    Ok(PencilParam::new(s.l1() * j.cn * j.cn - s.l3(), j.sn * j.sn))
}

pub fn invert_rho(p: &Pencil, ell: f64) -> Result<PencilParam> {
    invert_rho_for_spectrum(p.spectrum(), ell)
}

// Projective image without the singularity check; only used where the
// denominator is bounded away from zero (the closed unit disk).
fn project(m: &Matrix3<f64>, p: PlanePoint) -> PlanePoint {
    let u = m * p.homogeneous();
    PlanePoint::new(u[0] / u[2], u[1] / u[2])
}

/// Standard covering `theta -> M(cn(4K theta), sn(4K theta))` of the outer conic.
pub fn covering(p: &Pencil, theta: f64) -> PlanePoint {
    let m = p.modulus();
    let j = m.jacobi(4.0 * m.k() * theta);
    project(p.diagonalizer(), PlanePoint::new(j.cn, j.sn))
}

/// A lift of `z` under [`covering`], reduced to `[0, 1)`.
pub fn lift(p: &Pencil, z: PlanePoint) -> Result<f64> {
    require_on(p.outer(), z)?;
    let w = project(p.diagonalizer_inverse(), z);
    let m = p.modulus();
    let u = m.f(w.y.atan2(w.x));
    Ok((u / (4.0 * m.k())).rem_euclid(1.0))
}

/// The flow `covering(theta) -> covering(theta + t)` commuting with every Poncelet map.
pub fn symmetry_flow(p: &Pencil, t: f64, z: PlanePoint) -> Result<PlanePoint> {
    let theta = lift(p, z)?;
    Ok(covering(p, theta + t))
}

#[derive(Debug, Clone)]
enum Caustic {
    Member(Ellipse),
    Point(PlanePoint),
}

/// The Poncelet map of one member of a pencil.
#[derive(Debug, Clone)]
pub struct PonceletMap<'a> {
    pencil: &'a Pencil,
    nu: PencilParam,
    caustic: Caustic,
    f: f64,
    rho: f64,
}

impl<'a> PonceletMap<'a> {
    pub fn new(pencil: &'a Pencil, nu: PencilParam) -> Result<Self> {
        let caustic = match pencil.classify(nu)? {
            ParamKind::Outer => return Err(Error::InvalidParameter("the outer conic has no Poncelet dynamics".into())),
            ParamKind::Limiting => Caustic::Point(pencil.limiting_point()?),
            ParamKind::Interior => Caustic::Member(pencil.member(nu)?),
        };
        Ok(PonceletMap { pencil, nu, caustic, f: pencil.standard_f(nu)?, rho: rho_of_nu(pencil, nu)? })
    }

    pub fn pencil(&self) -> &Pencil {
        self.pencil
    }

    pub fn param(&self) -> PencilParam {
        self.nu
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Standard-pencil parameter of this map.
    pub fn standard_f(&self) -> f64 {
        self.f
    }

    /// One step with the caustic on the left of the chord.
    pub fn step(&self, z: PlanePoint) -> Result<PlanePoint> {
        self.geometric_step(z, true)
    }

    /// One step of the inverse map (caustic on the right).
    pub fn step_inverse(&self, z: PlanePoint) -> Result<PlanePoint> {
        self.geometric_step(z, false)
    }

    /// `k` steps, or `|k|` inverse steps when `k < 0`.
    pub fn power(&self, z: PlanePoint, k: i64) -> Result<PlanePoint> {
        let mut z = z;
        for _ in 0..k.unsigned_abs() {
            z = if k > 0 { self.step(z)? } else { self.step_inverse(z)? };
        }
        Ok(z)
    }

    /// The same step computed through the standard chart: `M o P_e^f o M^{-1}`.
    pub fn conjugated_step(&self, z: PlanePoint) -> Result<PlanePoint> {
        require_on(self.pencil.outer(), z)?;
        let w = self.pencil.to_standard(z)?;
        let w = PlanePoint::new(w.x / w.norm(), w.y / w.norm());
        let next = standard_map(self.pencil.modulus(), self.f, w)?;
        self.pencil.from_standard(next)
    }

    fn geometric_step(&self, z: PlanePoint, forward: bool) -> Result<PlanePoint> {
        let outer = self.pencil.outer();
        require_on(outer, z)?;
        match &self.caustic {
            Caustic::Point(l) => outer.second_intersection(z, l.sub(z)),
            Caustic::Member(c) => {
                let tangents = c
                    .tangent_lines_from(z)
                    .map_err(|_| Error::InvalidParameter("caustic does not lie inside the outer conic".into()))?;
                let zs = self.pencil.to_standard(z)?;
                let mut best: Option<(f64, PlanePoint)> = None;
                for t in tangents {
                    let next = outer.second_intersection(z, t.line.direction())?;
                    let ns = self.pencil.to_standard(next)?;
                    // Signed area of (z, z', origin) in the standard chart, where
                    // every caustic is centered at the origin.
                    let area = ns.sub(zs).cross(PlanePoint::ORIGIN.sub(zs));
                    let score = if forward { area } else { -area };
                    if best.is_none_or(|(b, _)| score > b) {
                        best = Some((score, next));
                    }
                }
                Ok(best.expect("two tangent lines").1)
            }
        }
    }
}

/// One step of the Poncelet map of `nu`.
pub fn poncelet_step(p: &Pencil, nu: PencilParam, z: PlanePoint) -> Result<PlanePoint> {
    PonceletMap::new(p, nu)?.step(z)
}

/// One step of the inverse Poncelet map of `nu`.
pub fn poncelet_step_inverse(p: &Pencil, nu: PencilParam, z: PlanePoint) -> Result<PlanePoint> {
    PonceletMap::new(p, nu)?.step_inverse(z)
}

/// Winding average of `n` Poncelet steps, measured by angles in the standard chart.
pub fn estimate_rotation(p: &Pencil, nu: PencilParam, n: usize) -> Result<f64> {
    if n < 100 {
        return Err(Error::InvalidParameter(format!("n = {n} is below 100")));
    }
    let map = PonceletMap::new(p, nu)?;
    let mut z = covering(p, 0.0);
    let mut angle = 0.0;
    let mut total = 0.0;
    for _ in 0..n {
        let next = map.step(z)?;
        let w = p.to_standard(next)?;
        let a = w.y.atan2(w.x);
        total += (a - angle).rem_euclid(TAU);
        angle = a;
        z = next;
    }
    Ok(total / (TAU * n as f64))
}

/// Iterates the Poncelet map of `nu` from `z0` until it returns within
/// [`TOL_CLOSE`] or `max_steps` steps have been taken.
pub fn polygon(p: &Pencil, nu: PencilParam, z0: PlanePoint, max_steps: usize) -> Result<PolygonOrbit> {
    Composition::new(p, &[(nu, 1)])?.orbit(z0, max_steps)
}

/// A composition of powers of Poncelet maps from the same pencil, applied left to right.
#[derive(Debug, Clone)]
pub struct Composition<'a> {
    pencil: &'a Pencil,
    factors: Vec<(PonceletMap<'a>, i64)>,
}

impl<'a> Composition<'a> {
    pub fn new(pencil: &'a Pencil, schedule: &[(PencilParam, i64)]) -> Result<Self> {
        let factors =
            schedule.iter().map(|&(nu, k)| Ok((PonceletMap::new(pencil, nu)?, k))).collect::<Result<Vec<_>>>()?;
        Ok(Composition { pencil, factors })
    }

    /// Sum of `k_i rho(nu_i)`.
    pub fn rotation_number(&self) -> f64 {
        self.factors.iter().map(|(m, k)| *k as f64 * m.rho()).sum()
    }

    pub fn apply(&self, z: PlanePoint) -> Result<PlanePoint> {
        self.factors.iter().try_fold(z, |z, (m, k)| m.power(z, *k))
    }

    /// One pass through the schedule, recording every intermediate vertex.
    pub fn run(&self, z0: PlanePoint) -> Result<PolygonOrbit> {
        require_on(self.pencil.outer(), z0)?;
        let mut points = vec![z0];
        let mut z = z0;
        for (m, k) in &self.factors {
            for _ in 0..k.unsigned_abs() {
                z = if *k > 0 { m.step(z)? } else { m.step_inverse(z)? };
                points.push(z);
            }
        }
        let rho = self.rotation_number();
        Ok(PolygonOrbit {
            steps: points.len() - 1,
            winding: rho.round() as i64,
            closure_residual: self.pencil.standard_distance(z, z0)?,
            rho,
            points,
        })
    }

    /// Repeats the whole composition until it returns within [`TOL_CLOSE`]
    /// of `z0`, or `max_passes` times. `steps` counts passes.
    pub fn orbit(&self, z0: PlanePoint, max_passes: usize) -> Result<PolygonOrbit> {
        require_on(self.pencil.outer(), z0)?;
        let w0 = self.pencil.to_standard(z0)?;
        let mut points = vec![z0];
        let mut z = z0;
        let mut residual = f64::INFINITY;
        let mut passes = 0;
        while passes < max_passes {
            for (m, k) in &self.factors {
                for _ in 0..k.unsigned_abs() {
                    z = if *k > 0 { m.step(z)? } else { m.step_inverse(z)? };
                    points.push(z);
                }
            }
            passes += 1;
            residual = self.pencil.to_standard(z)?.distance(w0);
            if residual < TOL_CLOSE {
                break;
            }
        }
        let rho = self.rotation_number();
        Ok(PolygonOrbit {
            steps: passes,
            winding: (passes as f64 * rho).round() as i64,
            closure_residual: residual,
            rho,
            points,
        })
    }
}

/// Applies a schedule of `(nu, k)` powers once, starting at `z0`.
pub fn run_composition(p: &Pencil, schedule: &[(PencilParam, i64)], z0: PlanePoint) -> Result<PolygonOrbit> {
    Composition::new(p, schedule)?.run(z0)
}

/// Smallest return distance to `z0`, in the standard chart, over `passes` repetitions.
pub fn min_return_distance(c: &Composition<'_>, z0: PlanePoint, passes: usize) -> Result<f64> {
    let w0 = c.pencil.to_standard(z0)?;
    let mut z = z0;
    let mut best = f64::INFINITY;
    for _ in 0..passes {
        z = c.apply(z)?;
        best = best.min(c.pencil.to_standard(z)?.distance(w0));
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference() -> Pencil {
        Pencil::from_lambdas(0.2, 0.125, 1.0 / 9.0).unwrap()
    }

    #[test]
    fn standard_map_limits() {
        let e = Modulus::new(0.7).unwrap();
        let p = PlanePoint::new(0.6, 0.8);
        let q = standard_map(e, 0.0, p).unwrap();
        assert!(q.distance(PlanePoint::new(-0.6, -0.8)) < 1e-15);
        let q = standard_map(e, 0.7, p).unwrap();
        assert!(q.distance(p) < 1e-15);
        assert!(matches!(standard_map(e, 0.8, p), Err(Error::InvalidParameter(_))));
        assert!(matches!(standard_map(e, 0.3, PlanePoint::new(2.0, 0.0)), Err(Error::OffCircle(_))));
    }

    #[test]
    fn standard_map_square() {
        let e = Modulus::new(0.8).unwrap();
        let mut z = PlanePoint::new(1.0, 0.0);
        for _ in 0..4 {
            z = standard_map(e, 0.4f64.sqrt(), z).unwrap();
            assert!((z.norm() - 1.0).abs() < 1e-14);
        }
        assert!(z.distance(PlanePoint::new(1.0, 0.0)) < 1e-9);
    }

    #[test]
    fn limiting_rotation_numbers() {
        let p = reference();
        assert_eq!(rho_of_nu(&p, PencilParam::OUTER).unwrap(), 0.0);
        assert_eq!(rho_of_nu(&p, PencilParam::new(-1.0 / 9.0, 1.0)).unwrap(), 0.5);
    }

    #[test]
    fn quarter_member() {
        let p = reference();
        let nu = PencilParam::new((1.0f64 / 810.0).sqrt() - 1.0 / 9.0, 1.0);
        assert!((rho_of_nu(&p, nu).unwrap() - 0.25).abs() < 1e-11);
        let inv = invert_rho(&p, 0.25).unwrap();
        assert!(inv.same_member(&nu, 1e-12));
    }

    #[test]
    fn geometric_and_conjugated_steps_agree() {
        let p = reference();
        let map = PonceletMap::new(&p, PencilParam::new(0.0, 1.0)).unwrap();
        for i in 0..16 {
            let z = covering(&p, i as f64 / 16.0 + 0.01);
            let a = map.step(z).unwrap();
            let b = map.conjugated_step(z).unwrap();
            let c = covering(&p, lift(&p, z).unwrap() + map.rho());
            assert!(a.distance(b) < 1e-9, "{i}: {a:?} {b:?}");
            assert!(a.distance(c) < 1e-9, "{i}: {a:?} {c:?}");
            assert!(map.step_inverse(a).unwrap().distance(z) < 1e-9);
        }
    }

    #[test]
    fn outer_has_no_map() {
        let p = reference();
        assert!(matches!(PonceletMap::new(&p, PencilParam::OUTER), Err(Error::InvalidParameter(_))));
        assert!(matches!(estimate_rotation(&p, PencilParam::OUTER, 1000), Err(Error::InvalidParameter(_))));
    }
}
