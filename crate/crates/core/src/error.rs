use std::fmt;

use crate::conics::PlanePoint;

/// Why a symmetric matrix failed to describe a non-empty real ellipse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EllipseDefect {
    /// The leading 2x2 block is not positive definite.
    MinorNotPositiveDefinite,
    /// The full determinant is not negative.
    DeterminantNonNegative,
}

impl EllipseDefect {
    pub fn as_str(&self) -> &'static str {
        match self {
            EllipseDefect::MinorNotPositiveDefinite => "minor_not_pd",
            EllipseDefect::DeterminantNonNegative => "det_nonnegative",
        }
    }
}

impl fmt::Display for EllipseDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("modulus {0} is outside [0, 1)")]
    ModulusOutOfRange(f64),

    #[error("not an ellipse: {0}")]
    NotAnEllipse(EllipseDefect),

    #[error("point ({}, {}) is not strictly outside the ellipse", .0.x, .0.y)]
    PointNotOutside(PlanePoint),

    #[error("degenerate spectrum: {0}")]
    DegenerateSpectrum(String),

    #[error("conics are not nested: {0}")]
    NotNested(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parameter selects the limiting point ({}, {})", .0.x, .0.y)]
    LimitingPoint(PlanePoint),

    #[error("homography maps ({}, {}) to infinity", .0.x, .0.y)]
    HomographySingularity(PlanePoint),

    #[error("state (phi = {phi}, r = {r}) is outside the phase annulus")]
    OutOfAnnulus { phi: f64, r: f64 },

    #[error("line does not meet the conic a second time")]
    NoIntersection,

    #[error("state is not in U+: {0}")]
    NotInUPlus(String),

    #[error("(e, f) = ({e}, {f}) not in Delta: require 0 < f < e < 1")]
    NotInDelta { e: f64, f: f64 },

    #[error("rotation number {0} is outside (0, 1/2)")]
    InvalidRotation(f64),

    #[error("point ({}, {}) is not on the unit circle", .0.x, .0.y)]
    OffCircle(PlanePoint),

    #[error("point ({}, {}) is not on the outer conic", .0.x, .0.y)]
    OffOuterConic(PlanePoint),

    #[error("eigenvector signature is not (+, +, -)")]
    BadSignature,

    #[error("period {0} is below 3")]
    InvalidPeriod(usize),

    #[error("unknown poristic set {0:?}")]
    UnknownSet(String),
}

impl Error {
    /// Stable snake_case tag used in machine-readable output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ModulusOutOfRange(_) => "modulus_out_of_range",
            Error::NotAnEllipse(_) => "not_an_ellipse",
            Error::PointNotOutside(_) => "point_not_outside",
            Error::DegenerateSpectrum(_) => "degenerate_spectrum",
            Error::NotNested(_) => "not_nested",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::LimitingPoint(_) => "limiting_point",
            Error::HomographySingularity(_) => "homography_singularity",
            Error::OutOfAnnulus { .. } => "out_of_annulus",
            Error::NoIntersection => "no_intersection",
            Error::NotInUPlus(_) => "not_in_u_plus",
            Error::NotInDelta { .. } => "not_in_delta",
            Error::InvalidRotation(_) => "invalid_rotation",
            Error::OffCircle(_) => "off_circle",
            Error::OffOuterConic(_) => "off_outer_conic",
            Error::BadSignature => "bad_signature",
            Error::InvalidPeriod(_) => "invalid_period",
            Error::UnknownSet(_) => "unknown_set",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
