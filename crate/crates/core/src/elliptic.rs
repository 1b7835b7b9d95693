//! Elliptic integrals and Jacobi elliptic functions in the modulus convention.
//!
//! Everything here is parametrized by the modulus `e` (not the parameter
//! `m = e^2`). Complete integrals use the arithmetic-geometric mean, the
//! incomplete integrals use Carlson's symmetric forms, and the Jacobi functions
//! use the descending Landen (AGM) scheme.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

/// Moduli closer to 1 than this are rejected: `K(e)` grows like `ln(4/e')`
/// and the Landen recursion loses all accuracy in the complementary modulus.
pub const MODULUS_CEILING: f64 = 1.0 - 1e-9;

/// A validated elliptic modulus `0 <= e <= 1 - 1e-9`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Modulus {
    e: f64,
    ec: f64,
}

/// Values of the Jacobi functions at one argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jacobi {
    pub am: f64,
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

impl Jacobi {
    pub fn cd(&self) -> f64 {
        self.cn / self.dn
    }
}

impl Modulus {
    pub fn new(e: f64) -> Result<Self> {
        if !(0.0..=MODULUS_CEILING).contains(&e) {
            return Err(Error::ModulusOutOfRange(e));
        }
        Ok(Modulus { e, ec: ((1.0 - e) * (1.0 + e)).sqrt() })
    }

    pub fn value(&self) -> f64 {
        self.e
    }

    /// The complementary modulus `e' = sqrt(1 - e^2)`.
    pub fn complement(&self) -> f64 {
        self.ec
    }

    /// Complete integral of the first kind `K(e)`.
    pub fn k(&self) -> f64 {
        FRAC_PI_2 / agm(1.0, self.ec)
    }

    /// Complete integral of the second kind `E(e)`.
    pub fn complete_e(&self) -> f64 {
        incomplete_e_reduced(1.0, 0.0, self.e)
    }

    /// Incomplete integral of the first kind `F(phi, e)` for any real `phi`.
    ///
    /// Extended by `F(phi + pi) = F(phi) + 2K` and oddness.
    pub fn f(&self, phi: f64) -> f64 {
        let n = (phi / PI).round();
        let r = phi - n * PI;
        let (s, c) = r.abs().sin_cos();
        let base = incomplete_f_reduced(s, c, self.e);
        2.0 * n * self.k() + r.signum() * base
    }

    /// Incomplete integral of the second kind `E(phi, e)` for any real `phi`.
    pub fn e_inc(&self, phi: f64) -> f64 {
        let n = (phi / PI).round();
        let r = phi - n * PI;
        let (s, c) = r.abs().sin_cos();
        let base = incomplete_e_reduced(s, c, self.e);
        2.0 * n * self.complete_e() + r.signum() * base
    }

    /// Jacobi amplitude and `sn`, `cn`, `dn` at `u`.
    pub fn jacobi(&self, u: f64) -> Jacobi {
        let am = self.am(u);
        let (sn, cn) = am.sin_cos();
        let es = self.e * sn;
        let dn = ((1.0 - es) * (1.0 + es)).sqrt();
        Jacobi { am, sn, cn, dn }
    }

    pub fn sn(&self, u: f64) -> f64 {
        self.jacobi(u).sn
    }

    pub fn cn(&self, u: f64) -> f64 {
        self.jacobi(u).cn
    }

    pub fn dn(&self, u: f64) -> f64 {
        self.jacobi(u).dn
    }

    pub fn cd(&self, u: f64) -> f64 {
        self.jacobi(u).cd()
    }

    /// Jacobi amplitude `am(u, e)` by descending Landen transformation.
    pub fn am(&self, u: f64) -> f64 {
        if self.e == 0.0 {
            return u;
        }
        const MAX_STEPS: usize = 16;
        let mut a = [0.0; MAX_STEPS + 1];
        let mut c = [0.0; MAX_STEPS + 1];
        a[0] = 1.0;
        c[0] = self.e;
        let mut b = self.ec;
        let mut n = 0;
        while c[n].abs() >= 1e-14 && n < MAX_STEPS {
            let (an, bn) = (a[n], b);
            a[n + 1] = 0.5 * (an + bn);
            c[n + 1] = 0.5 * (an - bn);
            b = (an * bn).sqrt();
            n += 1;
        }
        let mut phi = (1u64 << n) as f64 * a[n] * u;
        for k in (1..=n).rev() {
            phi = 0.5 * (phi + (c[k] / a[k] * phi.sin()).asin());
        }
        phi
    }

    /// Jacobi epsilon function `E(am(u, e), e)`.
    pub fn epsilon(&self, u: f64) -> f64 {
        self.e_inc(self.am(u))
    }

    /// `dK/de = (E - e'^2 K) / (e e'^2)`; tends to 0 as `e -> 0`.
    pub fn dk_de(&self) -> f64 {
        if self.e == 0.0 {
            return 0.0;
        }
        let ec2 = self.ec * self.ec;
        (self.complete_e() - ec2 * self.k()) / (self.e * ec2)
    }

    /// Partial derivative of `cd(t, e)` in `t`: `-(1 - e^2) sn / dn^2`.
    pub fn dcd_dt(&self, t: f64) -> f64 {
        let j = self.jacobi(t);
        -(self.ec * self.ec) * j.sn / (j.dn * j.dn)
    }

    /// Partial derivative of `cd(t, e)` in `e`:
    /// `sn / (e dn^2) * (epsilon(t) - (1 - e^2) t)`.
    pub fn dcd_de(&self, t: f64) -> f64 {
        let j = self.jacobi(t);
        if self.e == 0.0 {
            return 0.0;
        }
        j.sn / (self.e * j.dn * j.dn) * (self.epsilon(t) - self.ec * self.ec * t)
    }
}

/// Complete integral of the first kind for a raw modulus.
pub fn ellint_k(e: f64) -> Result<f64> {
    Ok(Modulus::new(e)?.k())
}

/// Incomplete integral of the first kind for a raw modulus.
pub fn ellint_f(phi: f64, e: f64) -> Result<f64> {
    Ok(Modulus::new(e)?.f(phi))
}

/// Incomplete integral of the second kind for a raw modulus.
pub fn ellint_e(phi: f64, e: f64) -> Result<f64> {
    Ok(Modulus::new(e)?.e_inc(phi))
}

/// `(sn, cn, dn)` for a raw modulus.
pub fn jacobi_sn_cn_dn(u: f64, e: f64) -> Result<(f64, f64, f64)> {
    let j = Modulus::new(e)?.jacobi(u);
    Ok((j.sn, j.cn, j.dn))
}

pub fn jacobi_cd(u: f64, e: f64) -> Result<f64> {
    Ok(Modulus::new(e)?.cd(u))
}

pub fn jacobi_am(u: f64, e: f64) -> Result<f64> {
    Ok(Modulus::new(e)?.am(u))
}

pub fn jacobi_epsilon(u: f64, e: f64) -> Result<f64> {
    Ok(Modulus::new(e)?.epsilon(u))
}

/// Arithmetic-geometric mean of two positive numbers.
pub fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        if (a - b).abs() <= 1e-16 * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    0.5 * (a + b)
}

// F(phi) on [0, pi/2] from sin and cos of phi.
fn incomplete_f_reduced(s: f64, c: f64, e: f64) -> f64 {
    if s == 0.0 {
        return 0.0;
    }
    let es = e * s;
    s * carlson_rf(c * c, (1.0 - es) * (1.0 + es), 1.0)
}

fn incomplete_e_reduced(s: f64, c: f64, e: f64) -> f64 {
    if s == 0.0 {
        return 0.0;
    }
    let es = e * s;
    let y = (1.0 - es) * (1.0 + es);
    s * carlson_rf(c * c, y, 1.0) - e * e * s * s * s / 3.0 * carlson_rd(c * c, y, 1.0)
}

/// Carlson's symmetric integral `R_F(x, y, z)`; at most one argument may be 0.
pub fn carlson_rf(x: f64, y: f64, z: f64) -> f64 {
    let (x0, y0) = (x, y);
    let (mut x, mut y, mut z) = (x, y, z);
    let a0 = (x + y + z) / 3.0;
    let q = (3.0 * f64::EPSILON).powf(-1.0 / 6.0) * (a0 - x).abs().max((a0 - y).abs()).max((a0 - z).abs());
    let mut a = a0;
    let mut scale = 1.0;
    while scale * q >= a.abs() {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * sy + sx * sz + sy * sz;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        a = 0.25 * (a + lambda);
        scale *= 0.25;
    }
    let dx = (a0 - x0) * scale / a;
    let dy = (a0 - y0) * scale / a;
    let dz = -dx - dy;
    let e2 = dx * dy - dz * dz;
    let e3 = dx * dy * dz;
    (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / a.sqrt()
}

/// Carlson's symmetric integral `R_D(x, y, z)`; `z > 0`, at most one of `x, y` is 0.
pub fn carlson_rd(x: f64, y: f64, z: f64) -> f64 {
    let (x0, y0) = (x, y);
    let (mut x, mut y, mut z) = (x, y, z);
    let a0 = (x + y + 3.0 * z) / 5.0;
    let q = (0.25 * f64::EPSILON).powf(-1.0 / 6.0) * (a0 - x).abs().max((a0 - y).abs()).max((a0 - z).abs());
    let mut a = a0;
    let mut scale = 1.0;
    let mut sum = 0.0;
    while scale * q >= a.abs() {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * sy + sx * sz + sy * sz;
        sum += scale / (sz * (z + lambda));
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        a = 0.25 * (a + lambda);
        scale *= 0.25;
    }
    let dx = (a0 - x0) * scale / a;
    let dy = (a0 - y0) * scale / a;
    let dz = -(dx + dy) / 3.0;
    let xy = dx * dy;
    let z2 = dz * dz;
    let e2 = xy - 6.0 * z2;
    let e3 = (3.0 * xy - 8.0 * z2) * dz;
    let e4 = 3.0 * (xy - z2) * z2;
    let e5 = xy * z2 * dz;
    let series = 1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0 - 3.0 * e4 / 22.0 - 9.0 * e2 * e3 / 52.0
        + 3.0 * e5 / 26.0;
    scale * series / (a * a.sqrt()) + 3.0 * sum
}
