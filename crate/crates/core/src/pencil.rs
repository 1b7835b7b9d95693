//! Pencils `nu1 C1 + nu2 C2` spanned by two nested ellipses.
//!
//! The outer ellipse `C1` and the inner ellipse `C2` are simultaneously
//! diagonalized by a matrix `M` with `M^T C1 M = diag(1, 1, -1)` and
//! `M^T C2 M = diag(l1, l2, -l3)`. In those coordinates every member of the
//! pencil is centered at the origin, and the projective map `M` carries the
//! unit circle onto `C1`.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::conics::{Ellipse, PlanePoint, PointClass, SymmetricConic};
use crate::elliptic::Modulus;
use crate::error::{Error, Result};

/// Relative gap below which two generalized eigenvalues count as equal.
pub const SPECTRAL_GAP_TOL: f64 = 1e-9;

/// Number of sample points used to check that `C2` lies inside `C1`.
const NESTING_SAMPLES: usize = 64;

/// Generalized eigenvalues `l1 > l2 > l3 > 0` of a nested pair.
///
/// The circular case `l1 = l2` (modulus zero) only arises from
/// [`Spectrum::circular`]; it describes concentric circles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    l1: f64,
    l2: f64,
    l3: f64,
}

impl Spectrum {
    pub fn new(l1: f64, l2: f64, l3: f64) -> Result<Self> {
        if !(l1.is_finite() && l2.is_finite() && l3.is_finite()) {
            return Err(Error::DegenerateSpectrum("non-finite eigenvalue".into()));
        }
        if !(l3 > 0.0) {
            return Err(Error::DegenerateSpectrum(format!("l3 = {l3} is not positive")));
        }
        let tol = SPECTRAL_GAP_TOL * l1.abs();
        if !(l1 - l2 > tol && l2 - l3 > tol) {
            return Err(Error::DegenerateSpectrum(format!(
                "eigenvalues ({l1}, {l2}, {l3}) are not strictly decreasing"
            )));
        }
        Ok(Spectrum { l1, l2, l3 })
    }

    /// Spectrum of two concentric circles: `l1 = l2 > l3 > 0`.
    pub fn circular(l12: f64, l3: f64) -> Result<Self> {
        if !(l3 > 0.0 && l12 - l3 > SPECTRAL_GAP_TOL * l12 && l12.is_finite()) {
            return Err(Error::DegenerateSpectrum(format!(
                "circular spectrum ({l12}, {l12}, {l3}) needs l12 > l3 > 0"
            )));
        }
        Ok(Spectrum { l1: l12, l2: l12, l3 })
    }

    pub fn l1(&self) -> f64 {
        self.l1
    }

    pub fn l2(&self) -> f64 {
        self.l2
    }

    pub fn l3(&self) -> f64 {
        self.l3
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.l1, self.l2, self.l3]
    }

    /// Modulus `sqrt((l1 - l2) / (l1 - l3))` shared by every map of the pencil.
    pub fn modulus(&self) -> Modulus {
        let e = ((self.l1 - self.l2) / (self.l1 - self.l3)).sqrt();
        // l2 - l3 > 1e-9 l1 keeps e well below the modulus ceiling.
        Modulus::new(e).expect("ordered spectrum yields a valid modulus")
    }

    /// Parameter of the limiting point of the pencil.
    pub fn limiting_param(&self) -> PencilParam {
        PencilParam::new(-self.l3, 1.0)
    }

    /// Classifies `nu` against the closed cone `nu2 >= 0, nu1 + l3 nu2 >= 0`.
    pub fn classify(&self, nu: PencilParam) -> Result<ParamKind> {
        let [a, b] = [nu.nu1, nu.nu2];
        if !(a.is_finite() && b.is_finite()) || (a == 0.0 && b == 0.0) {
            return Err(Error::InvalidParameter(format!("({a}, {b}) is not a pencil member")));
        }
        let scale = a.hypot(b);
        let tol = 1e-12 * scale;
        let lim = a + self.l3 * b;
        let lim_tol = 1e-12 * scale * (1.0 + self.l3);
        if b.abs() <= tol && a > 0.0 {
            Ok(ParamKind::Outer)
        } else if b > 0.0 && lim.abs() <= lim_tol {
            Ok(ParamKind::Limiting)
        } else if b > 0.0 && lim > 0.0 {
            Ok(ParamKind::Interior)
        } else {
            Err(Error::InvalidParameter(format!("({a}, {b}) is outside the cone nu2 >= 0, nu1 + l3 nu2 >= 0")))
        }
    }

    /// Standard-pencil parameter `f(nu) = e sqrt((nu1 + l3 nu2) / (nu1 + l2 nu2))`.
    pub fn standard_f(&self, nu: PencilParam) -> Result<f64> {
        self.classify(nu)?;
        let e = self.modulus().value();
        let num = (nu.nu1 + self.l3 * nu.nu2).max(0.0);
        Ok(e * (num / (nu.nu1 + self.l2 * nu.nu2)).sqrt())
    }

    /// Dual parameter; an involution of the cone up to positive scale.
    pub fn dual(&self, nu: PencilParam) -> Result<PencilParam> {
        self.classify(nu)?;
        let (l1, l2, l3) = (self.l1, self.l2, self.l3);
        Ok(PencilParam::new(-l3 * nu.nu1 + (l1 * l2 - l1 * l3 - l2 * l3) * nu.nu2, nu.nu1 + l3 * nu.nu2))
    }

    /// `(l1 - l3)(l2 - l3)`: applying [`Spectrum::dual`] twice scales by this.
    pub fn dual_scale(&self) -> f64 {
        (self.l1 - self.l3) * (self.l2 - self.l3)
    }

    /// Modulus of the relative pair `(C_nu, C_mu)` with `C_mu` inside `C_nu`.
    pub fn relative_modulus(&self, nu: PencilParam, mu: PencilParam) -> Result<Modulus> {
        for p in [nu, mu] {
            if self.classify(p)? == ParamKind::Limiting {
                return Err(Error::LimitingPoint(PlanePoint::ORIGIN));
            }
        }
        let order = nesting_order(nu, mu);
        if !(order > 1e-12 * nu.norm() * mu.norm()) {
            return Err(Error::NotNested(format!("C_mu must lie strictly inside C_nu (nu x mu = {order})")));
        }
        let e = self.modulus().value();
        let r = (nu.nu1 + self.l3 * nu.nu2) / (nu.nu1 + self.l2 * nu.nu2);
        Modulus::new(r.sqrt() * e)
    }
}

/// Which part of the closed cone a parameter belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamKind {
    /// Positive multiple of `(1, 0)`: the outer conic itself.
    Outer,
    /// Strictly inside the cone: an ellipse between `C1` and the limiting point.
    Interior,
    /// Positive multiple of `(-l3, 1)`: the degenerate member, a single point.
    Limiting,
}

/// Projective coordinates `(nu1, nu2)` of the member `nu1 C1 + nu2 C2`.
///
/// Components are kept as given; [`PencilParam::canonical`] returns the
/// unit-norm representative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PencilParam {
    pub nu1: f64,
    pub nu2: f64,
}

impl PencilParam {
    pub const OUTER: PencilParam = PencilParam { nu1: 1.0, nu2: 0.0 };

    pub fn new(nu1: f64, nu2: f64) -> Self {
        PencilParam { nu1, nu2 }
    }

    pub fn norm(&self) -> f64 {
        self.nu1.hypot(self.nu2)
    }

    pub fn canonical(&self) -> PencilParam {
        let n = self.norm();
        PencilParam::new(self.nu1 / n, self.nu2 / n)
    }

    /// True when both represent the same member (positive proportionality).
    pub fn same_member(&self, other: &PencilParam, tol: f64) -> bool {
        let a = self.canonical();
        let b = other.canonical();
        (a.nu1 - b.nu1).hypot(a.nu2 - b.nu2) <= tol
    }
}

/// `nu x mu = nu1 mu2 - nu2 mu1`; positive exactly when `C_mu` lies inside `C_nu`.
pub fn nesting_order(nu: PencilParam, mu: PencilParam) -> f64 {
    nu.nu1 * mu.nu2 - nu.nu2 * mu.nu1
}

/// A nested pair of ellipses together with its simultaneous diagonalization.
#[derive(Debug, Clone)]
pub struct Pencil {
    c1: Ellipse,
    c2: Ellipse,
    spectrum: Spectrum,
    m: Matrix3<f64>,
    m_inv: Matrix3<f64>,
}

impl Pencil {
    /// Builds the pencil of an outer ellipse `c1` and an inner ellipse `c2`.
    pub fn new(c1: SymmetricConic, c2: SymmetricConic) -> Result<Self> {
        let e1 = c1.validate()?;
        let e2 = c2.validate()?;
        let spectrum = generalized_eigenvalues(&e1, &e2)?;
        check_inside(&e1, &e2)?;
        let m = diagonalizer(&e1, &e2, &spectrum)?;
        Self::assemble(e1, e2, spectrum, m)
    }

    /// The diagonal pencil `C1 = diag(1, 1, -1)`, `C2 = diag(l1, l2, -l3)`.
    pub fn from_spectrum(spectrum: Spectrum) -> Result<Self> {
        let c1 = SymmetricConic::diagonal(1.0, 1.0, -1.0).validate()?;
        let c2 = SymmetricConic::diagonal(spectrum.l1, spectrum.l2, -spectrum.l3).validate()?;
        Self::assemble(c1, c2, spectrum, Matrix3::identity())
    }

    /// Convenience wrapper around [`Pencil::from_spectrum`].
    pub fn from_lambdas(l1: f64, l2: f64, l3: f64) -> Result<Self> {
        Self::from_spectrum(Spectrum::new(l1, l2, l3)?)
    }

    fn assemble(c1: Ellipse, c2: Ellipse, spectrum: Spectrum, m: Matrix3<f64>) -> Result<Self> {
        let m_inv = m.try_inverse().ok_or_else(|| Error::DegenerateSpectrum("diagonalizer is singular".into()))?;
        Ok(Pencil { c1, c2, spectrum, m, m_inv })
    }

    pub fn outer(&self) -> &Ellipse {
        &self.c1
    }

    pub fn inner(&self) -> &Ellipse {
        &self.c2
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn modulus(&self) -> Modulus {
        self.spectrum.modulus()
    }

    /// Pencil eccentricity `e(C1, C2)`.
    pub fn eccentricity(&self) -> f64 {
        self.modulus().value()
    }

    /// The diagonalizing matrix `M`.
    pub fn diagonalizer(&self) -> &Matrix3<f64> {
        &self.m
    }

    pub fn diagonalizer_inverse(&self) -> &Matrix3<f64> {
        &self.m_inv
    }

    /// Maps a point of the standard chart into the plane of the pencil.
    pub fn from_standard(&self, p: PlanePoint) -> Result<PlanePoint> {
        apply_homography(&self.m, p)
    }

    /// Maps a point of the plane into the standard chart.
    pub fn to_standard(&self, p: PlanePoint) -> Result<PlanePoint> {
        apply_homography(&self.m_inv, p)
    }

    pub fn limiting_point(&self) -> Result<PlanePoint> {
        self.from_standard(PlanePoint::ORIGIN)
    }

    pub fn classify(&self, nu: PencilParam) -> Result<ParamKind> {
        self.spectrum.classify(nu)
    }

    /// The conic `nu1 C1 + nu2 C2`.
    pub fn member(&self, nu: PencilParam) -> Result<Ellipse> {
        match self.classify(nu)? {
            ParamKind::Limiting => Err(Error::LimitingPoint(self.limiting_point()?)),
            _ => self.c1.conic().combine(nu.nu1, self.c2.conic(), nu.nu2).validate(),
        }
    }

    pub fn dual(&self, nu: PencilParam) -> Result<PencilParam> {
        self.spectrum.dual(nu)
    }

    pub fn relative_modulus(&self, nu: PencilParam, mu: PencilParam) -> Result<Modulus> {
        self.spectrum.relative_modulus(nu, mu)
    }

    pub fn standard_f(&self, nu: PencilParam) -> Result<f64> {
        self.spectrum.standard_f(nu)
    }

    /// Distance between two points measured in the standard chart.
    pub fn standard_distance(&self, a: PlanePoint, b: PlanePoint) -> Result<f64> {
        Ok(self.to_standard(a)?.distance(self.to_standard(b)?))
    }
}

/// Solves `det(l C1 - C2) = 0` for a nested pair.
pub fn generalized_eigenvalues(c1: &Ellipse, c2: &Ellipse) -> Result<Spectrum> {
    let [b0, b1, b2, b3] = characteristic_coefficients(c1.conic(), c2.conic());
    let mut roots = cubic_real_roots(b0, b1, b2, b3)?;
    for r in roots.iter_mut() {
        *r = newton_polish([b0, b1, b2, b3], *r);
    }
    roots.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Spectrum::new(roots[0], roots[1], roots[2])
}

/// Coefficients `[b0, b1, b2, b3]` of `det(l A - B) = b0 l^3 + b1 l^2 + b2 l + b3`.
pub fn characteristic_coefficients(a: &SymmetricConic, b: &SymmetricConic) -> [f64; 4] {
    let am = a.matrix();
    let bm = b.matrix();
    let adj_a = a.adjugate().matrix();
    let adj_b = b.adjugate().matrix();
    [a.det(), -(adj_a * bm).trace(), (am * adj_b).trace(), -b.det()]
}

fn cubic_real_roots(b0: f64, b1: f64, b2: f64, b3: f64) -> Result<[f64; 3]> {
    if b0 == 0.0 || !b0.is_finite() {
        return Err(Error::DegenerateSpectrum("leading coefficient vanishes".into()));
    }
    let a = b1 / b0;
    let b = b2 / b0;
    let c = b3 / b0;
    let shift = a / 3.0;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let scale = 1.0 + a.abs() + b.abs().sqrt() + c.abs().cbrt();
    if p >= -1e-14 * scale * scale {
        if p.abs() <= 1e-14 * scale * scale && q.abs() <= 1e-14 * scale * scale * scale {
            return Ok([-shift; 3]);
        }
        return Err(Error::DegenerateSpectrum("characteristic cubic has complex roots".into()));
    }
    let m = 2.0 * (-p / 3.0).sqrt();
    let arg = 3.0 * q / (p * m);
    // Rounding can push a double root slightly past the discriminant boundary;
    // clamping merges such roots, which the gap check then rejects.
    if arg.abs() > 1.0 + 1e-9 {
        return Err(Error::DegenerateSpectrum("characteristic cubic has complex roots".into()));
    }
    let theta = arg.clamp(-1.0, 1.0).acos() / 3.0;
    let tau = std::f64::consts::TAU / 3.0;
    Ok([m * theta.cos() - shift, m * (theta - tau).cos() - shift, m * (theta - 2.0 * tau).cos() - shift])
}

fn newton_polish(beta: [f64; 4], x: f64) -> f64 {
    let p = ((beta[0] * x + beta[1]) * x + beta[2]) * x + beta[3];
    let dp = (3.0 * beta[0] * x + 2.0 * beta[1]) * x + beta[2];
    if dp == 0.0 || !dp.is_finite() {
        return x;
    }
    let next = x - p / dp;
    let pn = ((beta[0] * next + beta[1]) * next + beta[2]) * next + beta[3];
    if pn.abs() < p.abs() {
        next
    } else {
        x
    }
}

fn check_inside(c1: &Ellipse, c2: &Ellipse) -> Result<()> {
    for p in c2.sample(NESTING_SAMPLES) {
        if c1.relative_value(p) >= -1e-10 {
            return Err(Error::NotNested(format!(
                "point ({}, {}) of the inner conic is not inside the outer conic",
                p.x, p.y
            )));
        }
    }
    Ok(())
}

fn null_vector(n: &Matrix3<f64>) -> Vector3<f64> {
    let rows = [
        Vector3::new(n[(0, 0)], n[(0, 1)], n[(0, 2)]),
        Vector3::new(n[(1, 0)], n[(1, 1)], n[(1, 2)]),
        Vector3::new(n[(2, 0)], n[(2, 1)], n[(2, 2)]),
    ];
    let candidates = [rows[0].cross(&rows[1]), rows[0].cross(&rows[2]), rows[1].cross(&rows[2])];
    candidates.into_iter().max_by(|a, b| a.norm_squared().partial_cmp(&b.norm_squared()).unwrap()).unwrap()
}

fn diagonalizer(c1: &Ellipse, c2: &Ellipse, s: &Spectrum) -> Result<Matrix3<f64>> {
    let a = c1.conic().matrix();
    let b = c2.conic().matrix();
    let mut cols = [Vector3::zeros(); 3];
    for (i, (lambda, sign)) in [(s.l1, 1.0), (s.l2, 1.0), (s.l3, -1.0)].into_iter().enumerate() {
        let v = null_vector(&(a * lambda - b));
        let q = c1.conic().form(&v);
        if !(q * sign > 0.0) {
            return Err(Error::NotNested(format!("eigenvector {} has the wrong signature under C1", i + 1)));
        }
        cols[i] = v / q.abs().sqrt();
    }
    let mut m = Matrix3::from_columns(&cols);
    if m.determinant() * m[(2, 2)] < 0.0 {
        m.set_column(0, &(-cols[0]));
    }
    Ok(m)
}

/// Applies a projective map to an affine point.
pub fn apply_homography(m: &Matrix3<f64>, p: PlanePoint) -> Result<PlanePoint> {
    let u = m * p.homogeneous();
    if u[2].abs() < 1e-13 * m.norm() * p.homogeneous().norm() {
        return Err(Error::HomographySingularity(p));
    }
    Ok(PlanePoint::new(u[0] / u[2], u[1] / u[2]))
}

/// Member `diag((1 - f^2)/(1 - e^2), 1, -f^2/e^2)` of the standard pencil.
pub fn standard_pencil_member(e: f64, f: f64) -> Result<Ellipse> {
    let m = Modulus::new(e)?;
    if !(f >= 0.0 && f <= e) {
        return Err(Error::InvalidParameter(format!("f = {f} must satisfy 0 <= f <= e = {e}")));
    }
    if f == 0.0 {
        return Err(Error::LimitingPoint(PlanePoint::ORIGIN));
    }
    let ec2 = m.complement() * m.complement();
    SymmetricConic::diagonal((1.0 - f * f) / ec2, 1.0, -(f * f) / (e * e)).validate()
}

/// A linear map `(x, y) -> (a x + b y, c x + d y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearMap2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl LinearMap2 {
    pub fn apply(&self, p: PlanePoint) -> PlanePoint {
        PlanePoint::new(self.a * p.x + self.b * p.y, self.c * p.x + self.d * p.y)
    }

    pub fn inverse_apply(&self, p: PlanePoint) -> PlanePoint {
        let d = self.det();
        PlanePoint::new((self.d * p.x - self.b * p.y) / d, (self.a * p.y - self.c * p.x) / d)
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }
}

/// The map `(x, y) -> ((f/sqrt(1-f^2)) y, -f x)` sending the confocal ellipse
/// `E(f)` to the unit circle and `E(e)` to the standard member of parameter `f`.
pub fn confocal_to_standard(f: f64) -> Result<LinearMap2> {
    if !(f > 0.0 && f < 1.0) {
        return Err(Error::InvalidParameter(format!("f = {f} must lie in (0, 1)")));
    }
    let fc = ((1.0 - f) * (1.0 + f)).sqrt();
    Ok(LinearMap2 { a: 0.0, b: f / fc, c: -f, d: 0.0 })
}

/// Classification helper used by the orbit code.
pub(crate) fn require_on(e: &Ellipse, z: PlanePoint) -> Result<()> {
    if e.classify(z) == PointClass::On {
        Ok(())
    } else {
        Err(Error::OffOuterConic(z))
    }
}

/// How a pencil is described in JSON input files.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(untagged)]
pub enum PencilSpec {
    Conics {
        #[serde(rename = "C1")]
        c1: SymmetricConic,
        #[serde(rename = "C2")]
        c2: SymmetricConic,
    },
    Lambda {
        lambda: [f64; 3],
    },
}

impl PencilSpec {
    pub fn build(&self) -> Result<Pencil> {
        match self {
            PencilSpec::Conics { c1, c2 } => Pencil::new(*c1, *c2),
            PencilSpec::Lambda { lambda } => Pencil::from_lambdas(lambda[0], lambda[1], lambda[2]),
        }
    }
}
