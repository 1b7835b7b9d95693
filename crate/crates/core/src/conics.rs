//! Conics as symmetric 3x3 matrices acting on homogeneous points `(x, y, 1)`.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{EllipseDefect, Error, Result};

/// A point of the affine plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PlanePoint {
    pub x: f64,
    pub y: f64,
}

impl PlanePoint {
    pub const ORIGIN: PlanePoint = PlanePoint { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        PlanePoint { x, y }
    }

    pub fn homogeneous(&self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, 1.0)
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(&self, other: PlanePoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn sub(&self, other: PlanePoint) -> PlanePoint {
        PlanePoint::new(self.x - other.x, self.y - other.y)
    }

    /// z-component of the cross product `self x other`.
    pub fn cross(&self, other: PlanePoint) -> f64 {
        self.x * other.y - self.y * other.x
    }
}

impl From<[f64; 2]> for PlanePoint {
    fn from(p: [f64; 2]) -> Self {
        PlanePoint::new(p[0], p[1])
    }
}

impl From<PlanePoint> for [f64; 2] {
    fn from(p: PlanePoint) -> Self {
        [p.x, p.y]
    }
}

/// A real symmetric 3x3 matrix, stored by its upper triangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetricConic {
    pub c11: f64,
    pub c12: f64,
    pub c13: f64,
    pub c22: f64,
    pub c23: f64,
    pub c33: f64,
}

/// Where a point sits relative to an ellipse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointClass {
    Inside,
    On,
    Outside,
}

/// A line `a x + b y + c = 0` with `a^2 + b^2 = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Line {
    pub fn coefficients(&self) -> Vector3<f64> {
        Vector3::new(self.a, self.b, self.c)
    }

    /// Unit direction vector, the normal rotated by +90 degrees.
    pub fn direction(&self) -> PlanePoint {
        PlanePoint::new(-self.b, self.a)
    }
}

/// A tangent line together with its point of contact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tangent {
    pub line: Line,
    pub touch: PlanePoint,
}

/// Relative tolerance for deciding that a point lies on a conic.
pub const ON_CONIC_TOL: f64 = 1e-9;

impl SymmetricConic {
    pub fn new(c11: f64, c12: f64, c13: f64, c22: f64, c23: f64, c33: f64) -> Self {
        SymmetricConic { c11, c12, c13, c22, c23, c33 }
    }

    pub fn diagonal(a: f64, b: f64, c: f64) -> Self {
        SymmetricConic::new(a, 0.0, 0.0, b, 0.0, c)
    }

    /// Symmetric part of an arbitrary matrix.
    pub fn from_matrix(m: &Matrix3<f64>) -> Self {
        SymmetricConic::new(
            m[(0, 0)],
            0.5 * (m[(0, 1)] + m[(1, 0)]),
            0.5 * (m[(0, 2)] + m[(2, 0)]),
            m[(1, 1)],
            0.5 * (m[(1, 2)] + m[(2, 1)]),
            m[(2, 2)],
        )
    }

    pub fn matrix(&self) -> Matrix3<f64> {
        Matrix3::new(self.c11, self.c12, self.c13, self.c12, self.c22, self.c23, self.c13, self.c23, self.c33)
    }

    /// The quadratic form `u^T C u`.
    pub fn form(&self, u: &Vector3<f64>) -> f64 {
        self.bilinear(u, u)
    }

    pub fn bilinear(&self, u: &Vector3<f64>, v: &Vector3<f64>) -> f64 {
        u[0] * (self.c11 * v[0] + self.c12 * v[1] + self.c13 * v[2])
            + u[1] * (self.c12 * v[0] + self.c22 * v[1] + self.c23 * v[2])
            + u[2] * (self.c13 * v[0] + self.c23 * v[1] + self.c33 * v[2])
    }

    /// Value of the form at the affine point `(x, y, 1)`.
    pub fn eval(&self, p: PlanePoint) -> f64 {
        self.form(&p.homogeneous())
    }

    pub fn det(&self) -> f64 {
        self.c11 * (self.c22 * self.c33 - self.c23 * self.c23) - self.c12 * (self.c12 * self.c33 - self.c23 * self.c13)
            + self.c13 * (self.c12 * self.c23 - self.c22 * self.c13)
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        (self.c11 * self.c11
            + self.c22 * self.c22
            + self.c33 * self.c33
            + 2.0 * (self.c12 * self.c12 + self.c13 * self.c13 + self.c23 * self.c23))
            .sqrt()
    }

    /// Adjugate matrix, which is again symmetric.
    pub fn adjugate(&self) -> SymmetricConic {
        SymmetricConic::new(
            self.c22 * self.c33 - self.c23 * self.c23,
            self.c13 * self.c23 - self.c12 * self.c33,
            self.c12 * self.c23 - self.c13 * self.c22,
            self.c11 * self.c33 - self.c13 * self.c13,
            self.c12 * self.c13 - self.c11 * self.c23,
            self.c11 * self.c22 - self.c12 * self.c12,
        )
    }

    pub fn scaled(&self, s: f64) -> SymmetricConic {
        SymmetricConic::new(s * self.c11, s * self.c12, s * self.c13, s * self.c22, s * self.c23, s * self.c33)
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: f64, other: &SymmetricConic, b: f64) -> SymmetricConic {
        SymmetricConic::new(
            a * self.c11 + b * other.c11,
            a * self.c12 + b * other.c12,
            a * self.c13 + b * other.c13,
            a * self.c22 + b * other.c22,
            a * self.c23 + b * other.c23,
            a * self.c33 + b * other.c33,
        )
    }

    /// The congruent matrix `S^T C S`.
    pub fn congruent(&self, s: &Matrix3<f64>) -> SymmetricConic {
        SymmetricConic::from_matrix(&(s.transpose() * self.matrix() * s))
    }

    /// Checks that the matrix is a non-empty real ellipse with the interior
    /// on the negative side of the form.
    pub fn validate(self) -> Result<Ellipse> {
        let minor = self.c11 * self.c22 - self.c12 * self.c12;
        if !(self.c11 > 0.0 && minor > 0.0) {
            return Err(Error::NotAnEllipse(EllipseDefect::MinorNotPositiveDefinite));
        }
        if !(self.det() < 0.0) {
            return Err(Error::NotAnEllipse(EllipseDefect::DeterminantNonNegative));
        }
        Ok(Ellipse(self))
    }
}

/// Validates a symmetric matrix as an ellipse.
pub fn validate_ellipse(c: SymmetricConic) -> Result<Ellipse> {
    c.validate()
}

/// A symmetric matrix known to be a non-empty real ellipse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Ellipse(SymmetricConic);

impl Ellipse {
    pub fn conic(&self) -> &SymmetricConic {
        &self.0
    }

    /// Scale-free value of the form: `u^T C u / (|C| |u|^2)`.
    pub fn relative_value(&self, p: PlanePoint) -> f64 {
        let u = p.homogeneous();
        self.0.form(&u) / (self.0.norm() * u.norm_squared())
    }

    pub fn classify(&self, p: PlanePoint) -> PointClass {
        let v = self.relative_value(p);
        if v.abs() <= ON_CONIC_TOL {
            PointClass::On
        } else if v < 0.0 {
            PointClass::Inside
        } else {
            PointClass::Outside
        }
    }

    /// Center of the ellipse, `-A^{-1} b` for the block form `[[A, b], [b^T, c]]`.
    pub fn center(&self) -> PlanePoint {
        let c = &self.0;
        let minor = c.c11 * c.c22 - c.c12 * c.c12;
        PlanePoint::new(-(c.c22 * c.c13 - c.c12 * c.c23) / minor, -(c.c11 * c.c23 - c.c12 * c.c13) / minor)
    }

    /// Point at angle `t` of the affine parametrization `center + L^{-T} (cos t, sin t) sqrt(k)`.
    pub fn point_at(&self, t: f64) -> PlanePoint {
        let c = &self.0;
        let center = self.center();
        // k = -(value of the form at the center), positive for a real ellipse.
        let k = -c.eval(center);
        let l11 = c.c11.sqrt();
        let l21 = c.c12 / l11;
        let l22 = (c.c22 - l21 * l21).sqrt();
        let (s, co) = t.sin_cos();
        let r = k.sqrt();
        let wx = co * r;
        let wy = s * r;
        PlanePoint::new(center.x + wx / l11 - l21 * wy / (l11 * l22), center.y + wy / l22)
    }

    /// `n` points evenly spaced in the affine parameter.
    pub fn sample(&self, n: usize) -> Vec<PlanePoint> {
        (0..n).map(|i| self.point_at(std::f64::consts::TAU * i as f64 / n as f64)).collect()
    }

    /// The two tangent lines through a point strictly outside the ellipse.
    pub fn tangent_lines_from(&self, z: PlanePoint) -> Result<[Tangent; 2]> {
        if self.classify(z) != PointClass::Outside {
            return Err(Error::PointNotOutside(z));
        }
        let d = self.0.adjugate();
        // Lines through z are cos(psi) p + sin(psi) q.
        let p = Vector3::new(1.0, 0.0, -z.x);
        let q = Vector3::new(0.0, 1.0, -z.y);
        let a11 = d.form(&p);
        let a22 = d.form(&q);
        let a12 = d.bilinear(&p, &q);
        let alpha = 0.5 * (a11 + a22);
        let beta = 0.5 * (a11 - a22);
        let gamma = a12;
        let r = beta.hypot(gamma);
        if !(alpha.abs() < r) {
            return Err(Error::PointNotOutside(z));
        }
        let delta = gamma.atan2(beta);
        let spread = (-alpha / r).acos();
        let make = |two_psi: f64| {
            let (s, c) = (0.5 * two_psi).sin_cos();
            let line = Line { a: c, b: s, c: -(z.x * c + z.y * s) };
            let t = d.matrix() * line.coefficients();
            Tangent { line, touch: PlanePoint::new(t[0] / t[2], t[1] / t[2]) }
        };
        Ok([make(delta + spread), make(delta - spread)])
    }

    /// Second intersection of the line through `z` with direction `dir`.
    ///
    /// `z` is expected on (or numerically near) the ellipse; the returned
    /// point is the root of the restricted quadratic farther from `z`.
    pub fn second_intersection(&self, z: PlanePoint, dir: PlanePoint) -> Result<PlanePoint> {
        let u = z.homogeneous();
        let d = Vector3::new(dir.x, dir.y, 0.0);
        let a = self.0.form(&d);
        let b = self.0.bilinear(&d, &u);
        let c = self.0.form(&u);
        if a <= 0.0 {
            return Err(Error::NoIntersection);
        }
        let disc = b * b - a * c;
        if disc < 0.0 {
            return Err(Error::NoIntersection);
        }
        let q = -(b + b.signum() * disc.sqrt());
        if q == 0.0 {
            return Err(Error::NoIntersection);
        }
        let s = q / a;
        Ok(PlanePoint::new(z.x + s * dir.x, z.y + s * dir.y))
    }
}

/// Tangent lines from `z` to the conic `c`, validating `c` first.
pub fn tangent_lines_from_point(c: SymmetricConic, z: PlanePoint) -> Result<[Tangent; 2]> {
    c.validate()?.tangent_lines_from(z)
}
