//! Porism tests that do not go through rotation numbers.
//!
//! Cayley's criterion expands `sqrt(det(l C1 - C2))` at `l = 0` and tests
//! Hankel determinants of the coefficients. Alongside it live the closed
//! conditions on the generalized eigenvalues for periods 3, 4 and 6, the
//! classical bicentric relations, and the poristic polynomials in `(e, f)`
//! for confocal pairs.

use serde::{Deserialize, Serialize};

use crate::billiard::EccPair;
use crate::error::{Error, Result};
use crate::pencil::{characteristic_coefficients, Pencil, PencilParam, Spectrum};
use crate::poncelet::rho_of_nu;

/// Normalized Cayley residuals below this classify a pencil as poristic.
pub const CAYLEY_PORISM_TOL: f64 = 1e-8;

/// Taylor coefficients of `sqrt(det(l C1 - C2))` at `l = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SqrtSeries {
    beta: [f64; 4],
    alpha: Vec<f64>,
}

impl SqrtSeries {
    /// Expands the square root of `b0 l^3 + b1 l^2 + b2 l + b3` up to `l^order`.
    pub fn from_coefficients(beta: [f64; 4], order: usize) -> Result<Self> {
        if order < 2 {
            return Err(Error::InvalidParameter(format!("series order {order} is below 2")));
        }
        if !(beta[3] > 0.0) {
            return Err(Error::BadSignature);
        }
        // c_n is the coefficient of l^n in the cubic.
        let c = |n: usize| match n {
            0 => beta[3],
            1 => beta[2],
            2 => beta[1],
            3 => beta[0],
            _ => 0.0,
        };
        let a0 = beta[3].sqrt();
        let mut alpha = vec![a0];
        for n in 1..=order {
            let mut sum = Neumaier::default();
            sum.add(c(n));
            for i in 1..n {
                sum.add(-alpha[i] * alpha[n - i]);
            }
            alpha.push(sum.total() / (2.0 * a0));
        }
        Ok(SqrtSeries { beta, alpha })
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn beta(&self) -> [f64; 4] {
        self.beta
    }

    pub fn order(&self) -> usize {
        self.alpha.len() - 1
    }

    /// Largest mismatch between the square of the truncated series and the
    /// cubic over degrees `0..=order`, relative to the size of the products
    /// summed at each degree.
    pub fn square_residual(&self) -> f64 {
        let target = [self.beta[3], self.beta[2], self.beta[1], self.beta[0]];
        (0..=self.order())
            .map(|n| {
                let mut sq = Neumaier::default();
                let mut size = 0.0;
                for i in 0..=n {
                    let t = self.alpha[i] * self.alpha[n - i];
                    sq.add(t);
                    size += t.abs();
                }
                let want = target.get(n).copied().unwrap_or(0.0);
                (sq.total() - want).abs() / size.max(want.abs())
            })
            .fold(0.0, f64::max)
    }

    /// Coefficients after dividing by `alpha_0` and substituting `l = s t`.
    pub fn rescaled(&self, s: f64) -> Vec<f64> {
        let a0 = self.alpha[0];
        let mut p = 1.0;
        self.alpha
            .iter()
            .map(|a| {
                let v = a * p / a0;
                p *= s;
                v
            })
            .collect()
    }
}

#[derive(Default)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Square-root series of the pencil's characteristic polynomial.
pub fn sqrt_series(p: &Pencil, order: usize) -> Result<SqrtSeries> {
    let beta = characteristic_coefficients(p.outer().conic(), p.inner().conic());
    SqrtSeries::from_coefficients(beta, order)
}

/// First Hankel index and size of the period-`n` Cayley determinant.
///
/// Odd `n = 2m + 1` uses `alpha_2 .. alpha_2m` (`m x m`); even `n = 2m` uses
/// `alpha_3 .. alpha_{2m-1}` (`(m-1) x (m-1)`).
pub fn cayley_shape(n: usize) -> Result<(usize, usize)> {
    if n < 3 {
        return Err(Error::InvalidPeriod(n));
    }
    Ok(if n % 2 == 1 { (2, (n - 1) / 2) } else { (3, n / 2 - 1) })
}

/// Raw period-`n` Cayley determinant of a coefficient sequence; the empty
/// determinant for `n = 2` is 1.
pub fn cayley_determinant(alpha: &[f64], n: usize) -> Result<f64> {
    if n == 2 {
        return Ok(1.0);
    }
    let (start, m) = cayley_shape(n)?;
    if alpha.len() < n {
        return Err(Error::InvalidParameter(format!("period {n} needs coefficients up to alpha_{}", n - 1)));
    }
    let h = nalgebra::DMatrix::from_fn(m, m, |i, j| alpha[start + i + j]);
    Ok(h.determinant())
}

/// Normalized period-`n` Cayley residual `|D_n| / sqrt(|D_{n-1} D_{n+1}|)`.
///
/// The determinants `D_2 = 1, D_3, D_4, ...` behave like an elliptic
/// divisibility sequence: their size falls off like `exp(-c n^2)` even far
/// from a porism, so a fixed threshold on `D_n` alone is meaningless for
/// larger `n`. Dividing by the geometric mean of the neighbours cancels that
/// factor (and any rescaling of the coefficients), leaving a quantity of
/// order one that vanishes exactly when `D_n` does.
pub fn normalized_cayley(series: &SqrtSeries, n: usize, s: f64) -> Result<f64> {
    cayley_shape(n)?;
    if series.order() < n {
        return Err(Error::InvalidParameter(format!("period {n} needs a series of order {n}")));
    }
    let a = series.rescaled(s);
    let d = cayley_determinant(&a, n)?;
    let den = (cayley_determinant(&a, n - 1)? * cayley_determinant(&a, n + 1)?).abs().sqrt();
    Ok(if den > 0.0 {
        d.abs() / den
    } else if d == 0.0 {
        0.0
    } else {
        f64::INFINITY
    })
}

/// Normalized Cayley residual of the pair `(C1, C2)` for period `n`.
///
/// Coefficients are normalized to `alpha_0 = 1` with the variable scaled by
/// the smallest generalized eigenvalue, the radius of convergence of the series.
pub fn cayley_condition(p: &Pencil, n: usize) -> Result<f64> {
    cayley_shape(n)?;
    let series = sqrt_series(p, n)?;
    normalized_cayley(&series, n, p.spectrum().l3())
}

/// Result of a Cayley classification, as emitted by the verification suite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CayleyReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub residual: f64,
    pub classified_poristic: bool,
    pub rho: f64,
}

pub fn cayley_report(p: &Pencil, n: usize) -> Result<CayleyReport> {
    let residual = cayley_condition(p, n)?;
    Ok(CayleyReport {
        n,
        residual,
        classified_poristic: residual < CAYLEY_PORISM_TOL,
        rho: rho_of_nu(p, PencilParam::new(0.0, 1.0))?,
    })
}

/// Rotation numbers with closed conditions on the generalized eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaPorism {
    Quarter,
    Third,
    Sixth,
}

/// Residual of the eigenvalue condition for `C2` to have the named rotation number.
pub fn lambda_porism(s: &Spectrum, which: LambdaPorism) -> f64 {
    let (l1, l2, l3) = (s.l1(), s.l2(), s.l3());
    match which {
        LambdaPorism::Quarter => l1 * l2 - l1 * l3 - l2 * l3,
        LambdaPorism::Third => 1.0 / l3.sqrt() - 1.0 / l1.sqrt() - 1.0 / l2.sqrt(),
        LambdaPorism::Sixth => (1.0 - l3 / l1).sqrt() + (1.0 - l3 / l2).sqrt() - 1.0,
    }
}

/// Bicentric polygon types with classical closure relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BicentricKind {
    Triangle,
    Quadrilateral,
}

/// Chapple-Euler (triangle) or Fuss (quadrilateral) residual for a circle of
/// radius `r` whose center is at distance `a` from the center of a circle of radius `big_r`.
pub fn bicentric_check(big_r: f64, r: f64, a: f64, kind: BicentricKind) -> Result<f64> {
    if !(r > 0.0 && big_r > r + a.abs()) {
        return Err(Error::NotNested(format!("circle of radius {r} at distance {a} is not inside radius {big_r}")));
    }
    let (p, m) = (big_r + a, big_r - a);
    Ok(match kind {
        BicentricKind::Triangle => 1.0 / m + 1.0 / p - 1.0 / r,
        BicentricKind::Quadrilateral => 1.0 / (m * m) + 1.0 / (p * p) - 1.0 / (r * r),
    })
}

/// Conic matrices of the circle `|z| = R` and the circle of radius `r` centered at `(a, 0)`.
pub fn circle_pencil(big_r: f64, r: f64, a: f64) -> (crate::conics::SymmetricConic, crate::conics::SymmetricConic) {
    use crate::conics::SymmetricConic;
    (SymmetricConic::diagonal(1.0, 1.0, -big_r * big_r), SymmetricConic::new(1.0, 0.0, -a, 1.0, 0.0, a * a - r * r))
}

/// Generalized eigenvalues of [`circle_pencil`]: `1` and the roots of
/// `R^2 l^2 - (R^2 + r^2 - a^2) l + r^2`. Concentric circles give the
/// circular spectrum with a double top eigenvalue.
pub fn circle_pencil_spectrum(big_r: f64, r: f64, a: f64) -> Result<Spectrum> {
    if !(r > 0.0 && big_r > r + a.abs()) {
        return Err(Error::NotNested(format!("circle of radius {r} at distance {a} is not inside radius {big_r}")));
    }
    let r2 = big_r * big_r;
    let b = r2 + r * r - a * a;
    let disc = (b * b - 4.0 * r * r * r2).max(0.0).sqrt();
    let hi = (b + disc) / (2.0 * r2);
    // Product of the two roots is r^2 / R^2; dividing avoids cancellation.
    let lo = r * r / (r2 * hi);
    if a == 0.0 {
        return Spectrum::circular(1.0, lo);
    }
    Spectrum::new(1.0, hi, lo)
}

/// Named poristic sets of confocal pairs `(e, f)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoristicSet {
    Third,
    Quarter,
    Fifth,
    TwoFifths,
    Sixth,
}

impl PoristicSet {
    pub const ALL: [PoristicSet; 5] =
        [PoristicSet::Third, PoristicSet::Quarter, PoristicSet::Fifth, PoristicSet::TwoFifths, PoristicSet::Sixth];

    pub fn rotation(&self) -> f64 {
        match self {
            PoristicSet::Third => 1.0 / 3.0,
            PoristicSet::Quarter => 0.25,
            PoristicSet::Fifth => 0.2,
            PoristicSet::TwoFifths => 0.4,
            PoristicSet::Sixth => 1.0 / 6.0,
        }
    }

    // Terms (coefficient, power of e, power of f).
    fn terms(&self) -> &'static [(f64, i32, i32)] {
        match self {
            PoristicSet::Third => &[(1.0, 2, 0), (2.0, 1, 3), (-2.0, 1, 1), (-1.0, 0, 4)],
            PoristicSet::Quarter => &[(1.0, 2, 0), (1.0, 0, 4), (-2.0, 0, 2)],
            PoristicSet::Sixth => &[(4.0, 4, 2), (-3.0, 4, 0), (-6.0, 2, 4), (4.0, 2, 2), (1.0, 0, 8)],
            PoristicSet::Fifth => &[
                (1.0, 6, 0),
                (8.0, 5, 5),
                (-10.0, 5, 3),
                (2.0, 5, 1),
                (-4.0, 4, 6),
                (5.0, 4, 4),
                (-4.0, 4, 2),
                (-12.0, 3, 7),
                (12.0, 3, 5),
                (4.0, 2, 10),
                (-5.0, 2, 8),
                (4.0, 2, 6),
                (-2.0, 1, 11),
                (10.0, 1, 9),
                (-8.0, 1, 7),
                (-1.0, 0, 12),
            ],
            PoristicSet::TwoFifths => &[
                (1.0, 6, 0),
                (-8.0, 5, 5),
                (10.0, 5, 3),
                (-2.0, 5, 1),
                (-4.0, 4, 6),
                (5.0, 4, 4),
                (-4.0, 4, 2),
                (12.0, 3, 7),
                (-12.0, 3, 5),
                (4.0, 2, 10),
                (-5.0, 2, 8),
                (4.0, 2, 6),
                (2.0, 1, 11),
                (-10.0, 1, 9),
                (8.0, 1, 7),
                (-1.0, 0, 12),
            ],
        }
    }
}

impl std::str::FromStr for PoristicSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1/3" => Ok(PoristicSet::Third),
            "1/4" => Ok(PoristicSet::Quarter),
            "1/5" => Ok(PoristicSet::Fifth),
            "2/5" => Ok(PoristicSet::TwoFifths),
            "1/6" => Ok(PoristicSet::Sixth),
            other => Err(Error::UnknownSet(other.to_string())),
        }
    }
}

/// Value of the poristic polynomial of `set` at `(e, f)`, divided by the sum
/// of the absolute values of its terms.
pub fn confocal_poristic_residual(p: EccPair, set: PoristicSet) -> f64 {
    let (e, f) = (p.e(), p.f());
    let mut value = Neumaier::default();
    let mut scale = 0.0;
    for &(c, pe, pf) in set.terms() {
        let t = c * e.powi(pe) * f.powi(pf);
        value.add(t);
        scale += t.abs();
    }
    value.total() / scale
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_of_diagonal_pencil() {
        let p = Pencil::from_lambdas(0.2, 0.125, 1.0 / 9.0).unwrap();
        let s = sqrt_series(&p, 8).unwrap();
        assert!((s.alpha()[0] - (1.0f64 / 360.0).sqrt()).abs() < 1e-16);
        assert!(s.square_residual() < 1e-14);
    }

    #[test]
    fn cay3_is_alpha2() {
        let beta = [-1.0, 0.7, -0.15, 0.01];
        let s = SqrtSeries::from_coefficients(beta, 2).unwrap();
        let direct = (beta[1] - beta[2] * beta[2] / (4.0 * beta[3])) / (2.0 * beta[3].sqrt());
        assert!((s.alpha()[2] - direct).abs() < 1e-15);
        assert!(matches!(SqrtSeries::from_coefficients(beta, 1), Err(Error::InvalidParameter(_))));
        assert!(matches!(cayley_shape(2), Err(Error::InvalidPeriod(2))));
    }

    #[test]
    fn lambda_conditions() {
        let s = Spectrum::new(0.5, 1.0 / 3.0, 0.2).unwrap();
        assert!(lambda_porism(&s, LambdaPorism::Quarter).abs() < 1e-16);
        let s = Spectrum::new(0.2, 0.125, 1.0 / 9.0).unwrap();
        let r = lambda_porism(&s, LambdaPorism::Third);
        assert!((r - (3.0 - 5f64.sqrt() - 8f64.sqrt())).abs() < 1e-14);
    }

    #[test]
    fn bicentric_symmetric() {
        assert_eq!(bicentric_check(1.0, 0.5, 0.0, BicentricKind::Triangle).unwrap(), 0.0);
        let q = bicentric_check(1.0, 0.5f64.sqrt(), 0.0, BicentricKind::Quadrilateral).unwrap();
        assert!(q.abs() < 1e-15);
        assert!(matches!(bicentric_check(1.0, 0.6, 0.5, BicentricKind::Triangle), Err(Error::NotNested(_))));
    }

    #[test]
    fn circle_spectrum_roots() {
        let s = circle_pencil_spectrum(1.0, 0.3, 0.2).unwrap();
        assert!((s.l2() - 0.955_842_198_490_352_2).abs() < 1e-15);
        assert!((s.l3() - 0.094_157_801_509_647_86).abs() < 1e-15);
    }

    #[test]
    fn quarter_set() {
        let p = EccPair::new(0.8, 0.4f64.sqrt()).unwrap();
        assert!(confocal_poristic_residual(p, PoristicSet::Quarter).abs() < 1e-16);
        assert!(matches!("3/7".parse::<PoristicSet>(), Err(Error::UnknownSet(_))));
    }
}
