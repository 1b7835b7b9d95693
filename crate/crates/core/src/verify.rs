//! Self-contained numerical verification suites.
//!
//! Each suite evaluates a list of named checks and records the worst residual
//! seen together with its bound, so a report can be read without rerunning.
//! Sampling is deterministic, so repeated runs give identical reports.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::billiard::{confocal_step, gauss_transform, half_rotation, porism_f, rotation_confocal, sweep, EccPair};
use crate::cayley::{
    bicentric_check, cayley_condition, circle_pencil_spectrum, confocal_poristic_residual, lambda_porism,
    BicentricKind, LambdaPorism, PoristicSet, CAYLEY_PORISM_TOL,
};
use crate::conics::PlanePoint;
use crate::elliptic::Modulus;
use crate::error::{Error, Result};
use crate::pencil::{characteristic_coefficients, confocal_to_standard, Pencil, PencilParam, Spectrum};
use crate::poncelet::{
    covering, invert_rho, polygon, rho_for_spectrum, rho_of_nu, standard_map, Composition, PonceletMap,
};

/// Named groups of checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Elliptic,
    Confocal,
    Pencil,
    Cayley,
    Composition,
    All,
}

impl Suite {
    pub const PARTS: [Suite; 5] = [Suite::Elliptic, Suite::Confocal, Suite::Pencil, Suite::Cayley, Suite::Composition];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Elliptic => "elliptic",
            Suite::Confocal => "confocal",
            Suite::Pencil => "pencil",
            Suite::Cayley => "cayley",
            Suite::Composition => "composition",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::PARTS
            .iter()
            .chain(std::iter::once(&Suite::All))
            .find(|p| p.name() == s)
            .copied()
            .ok_or_else(|| Error::UnknownSet(s.to_string()))
    }
}

/// Whether a check requires its residual to stay below or above the bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Below,
    Above,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub bound: f64,
    pub relation: Relation,
    pub passed: bool,
}

impl Check {
    pub fn below(name: impl Into<String>, residual: f64, bound: f64) -> Self {
        Check { name: name.into(), residual, bound, relation: Relation::Below, passed: residual < bound }
    }

    pub fn above(name: impl Into<String>, residual: f64, bound: f64) -> Self {
        Check { name: name.into(), residual, bound, relation: Relation::Above, passed: residual > bound }
    }

    /// A yes/no check, reported with residual 0 on success and 1 on failure.
    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Check::below(name, if ok { 0.0 } else { 1.0 }, 0.5)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Runs a suite. Errors raised by the library are reported as failed checks
/// rather than aborting the run.
pub fn run_suite(suite: Suite) -> SuiteReport {
    let checks = match suite {
        Suite::All => Suite::PARTS
            .iter()
            .flat_map(|s| {
                run_part(*s).into_iter().map(move |mut c| {
                    c.name = format!("{}/{}", s.name(), c.name);
                    c
                })
            })
            .collect(),
        s => run_part(s),
    };
    SuiteReport { suite: suite.name().to_string(), passed: checks.iter().all(|c| c.passed), checks }
}

fn run_part(suite: Suite) -> Vec<Check> {
    let run: fn() -> Result<Vec<Check>> = match suite {
        Suite::Elliptic => elliptic_checks,
        Suite::Confocal => confocal_checks,
        Suite::Pencil => pencil_checks,
        Suite::Cayley => cayley_checks,
        Suite::Composition => composition_checks,
        Suite::All => unreachable!("aggregate suite has no checks of its own"),
    };
    run().unwrap_or_else(|err| vec![Check::holds(format!("error: {err}"), false)])
}

/// Modulus grid `0.05, 0.10, ..., 0.95`.
pub fn modulus_grid() -> impl Iterator<Item = f64> {
    (1..=19).map(|i| i as f64 * 0.05)
}

/// Worst residual of the elliptic identities over the modulus grid.
pub fn elliptic_checks() -> Result<Vec<Check>> {
    let mut pyth = 0.0f64;
    let mut dn_id = 0.0f64;
    let mut round = 0.0f64;
    let mut k_vs_f = 0.0f64;
    let mut landen = 0.0f64;
    let mut dcd = 0.0f64;
    let mut dk = 0.0f64;
    let mut dbl = 0.0f64;
    for e in modulus_grid() {
        let m = Modulus::new(e)?;
        let k = m.k();
        for i in 0..=400 {
            let u = -8.0 * k + 16.0 * k * i as f64 / 400.0;
            let j = m.jacobi(u);
            pyth = pyth.max((j.sn * j.sn + j.cn * j.cn - 1.0).abs());
            dn_id = dn_id.max((j.dn * j.dn + e * e * j.sn * j.sn - 1.0).abs());
        }
        for i in 1..100 {
            let u = k * i as f64 / 100.0;
            round = round.max((m.f(m.am(u)) - u).abs());
            let v = 0.5 * u;
            let (c, s) = (m.cd(v), m.sn(v));
            let (uu, vv) = (c * c, s * s);
            dbl = dbl.max((m.cd(2.0 * v) - (uu - vv) / (1.0 - e * e * uu * vv)).abs());
            let h = 1e-5;
            let fd = (m.cd(u + h) - m.cd(u - h)) / (2.0 * h);
            dcd = dcd.max(relative(m.dcd_dt(u), fd));
        }
        k_vs_f = k_vs_f.max((k - m.f(0.5 * PI)).abs() / k);
        let g = Modulus::new(2.0 * e.sqrt() / (1.0 + e))?;
        landen = landen.max((g.k() - (1.0 + e) * k).abs() / g.k());
        let h = 1e-6;
        let fd = (Modulus::new(e + h)?.k() - Modulus::new(e - h)?.k()) / (2.0 * h);
        dk = dk.max(relative(m.dk_de(), fd));
    }
    Ok(vec![
        Check::below("sn2_plus_cn2", pyth, 1e-11),
        Check::below("dn2_plus_e2sn2", dn_id, 1e-11),
        Check::below("f_of_am_round_trip", round, 1e-10),
        Check::below("k_agrees_with_f", k_vs_f, 1e-13),
        Check::below("landen_k_relation", landen, 1e-11),
        Check::below("dcd_dt_finite_difference", dcd, 1e-6),
        Check::below("dk_de_finite_difference", dk, 1e-6),
        Check::below("cd_double_angle", dbl, 1e-10),
    ])
}

fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// Six-digit reference pairs, Gauss symmetry, poristic polynomials and a small sweep.
pub fn confocal_checks() -> Result<Vec<Check>> {
    // Reference pairs are known to six decimals.
    let six_digits = 5e-6;
    let mut out = Vec::new();
    let heptagon = EccPair::new(0.8, 0.572851)?;
    out.push(Check::below("heptagon_pair_rho", (rotation_confocal(heptagon) - 2.0 / 7.0).abs(), six_digits));
    let (_, f2) = half_rotation(heptagon);
    out.push(Check::below("half_rotation_boundary", (f2 - 0.419316).abs(), six_digits));
    let rho2 = rotation_confocal(EccPair::new(0.8, f2)?);
    out.push(Check::below("half_rotation_rho", (rho2 - 5.0 / 14.0).abs(), six_digits));

    let pentagon = EccPair::new(0.6, 0.503246)?;
    out.push(Check::below("pentagon_pair_rho", (rotation_confocal(pentagon) - 0.2).abs(), six_digits));
    let g = gauss_transform(pentagon)?;
    let dg = (g.e() - 0.968246).abs().max((g.f() - 0.913706).abs());
    out.push(Check::below("gauss_image", dg, six_digits));

    let mut gauss = 0.0f64;
    let mut poly = 0.0f64;
    for e in modulus_grid() {
        for j in 1..10 {
            let p = EccPair::new(e, e * j as f64 / 10.0)?;
            gauss = gauss.max((rotation_confocal(gauss_transform(p)?) - rotation_confocal(p)).abs());
        }
        for set in PoristicSet::ALL {
            let p = EccPair::new(e, porism_f(e, set.rotation())?)?;
            poly = poly.max(confocal_poristic_residual(p, set).abs());
        }
    }
    out.push(Check::below("gauss_preserves_rotation", gauss, 1e-10));
    out.push(Check::below("poristic_polynomials", poly, 1e-9));

    let rows = sweep(5, 10_000)?;
    let worst = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
    out.push(Check::below("sweep_5x5_closed_form_vs_orbit", worst, 2e-4));
    Ok(out)
}

/// The diagonal pencil with eigenvalues `(1/5, 1/8, 1/9)`.
pub fn reference_pencil() -> Result<Pencil> {
    Pencil::from_lambdas(0.2, 0.125, 1.0 / 9.0)
}

/// Interior members `(cos a, sin a)` for `a` spread strictly between the
/// outer conic and the limiting point.
pub fn interior_params(s: &Spectrum, n: usize) -> Vec<PencilParam> {
    let lim = s.limiting_param();
    let top = lim.nu2.atan2(lim.nu1);
    (0..n)
        .map(|i| {
            let a = top * (i as f64 + 0.5) / n as f64;
            PencilParam::new(a.cos(), a.sin())
        })
        .collect()
}

/// Rotation numbers whose porisms are checked throughout.
pub const PORISM_ELLS: [(u32, u32); 8] = [(1, 3), (1, 4), (1, 5), (2, 7), (2, 5), (1, 6), (1, 10), (3, 10)];

/// Conjugacies, duality, monotonicity and porism closure on the reference pencil.
pub fn pencil_checks() -> Result<Vec<Check>> {
    let p = reference_pencil()?;
    let nu = PencilParam::new(0.0, 1.0);
    let mut out = vec![
        Check::below("eccentricity", (p.eccentricity() - (27.0f64 / 32.0).sqrt()).abs(), 1e-12),
        Check::below("standard_f", (p.standard_f(nu)? - 0.75f64.sqrt()).abs(), 1e-12),
    ];

    let (e, f) = (p.eccentricity(), p.standard_f(nu)?);
    let pair = EccPair::new(e, f)?;
    let to_std = confocal_to_standard(f)?;
    let map = PonceletMap::new(&p, nu)?;
    let mut conj = 0.0f64;
    for i in 0..32 {
        let t = (i as f64 + 0.25) / 32.0;
        let w = PlanePoint::new((2.0 * PI * t).cos(), (2.0 * PI * t).sin());
        let z = to_std.inverse_apply(w);
        let billiard = to_std.apply(confocal_step(pair, z)?);
        let standard = standard_map(p.modulus(), f, w)?;
        let pencil = map.step(p.from_standard(w)?)?;
        conj = conj.max(billiard.distance(standard)).max(pencil.distance(standard));
    }
    out.push(Check::below("billiard_standard_pencil_conjugacy", conj, 1e-8));

    let params = interior_params(p.spectrum(), 100);
    let mut dual = 0.0f64;
    for &nu in &params {
        dual = dual.max((rho_of_nu(&p, nu)? + rho_of_nu(&p, p.dual(nu)?)? - 0.5).abs());
    }
    out.push(Check::below("duality", dual, 1e-10));

    let mut bad = 0usize;
    for (i, &a) in params.iter().enumerate().step_by(7) {
        for &b in params.iter().skip(i) {
            let cross = a.nu1 * b.nu2 - a.nu2 * b.nu1;
            let dr = rho_of_nu(&p, b)? - rho_of_nu(&p, a)?;
            let ok = if cross.abs() < 1e-12 { dr.abs() < 1e-12 } else { cross.signum() == dr.signum() };
            bad += usize::from(!ok);
        }
        let scaled = PencilParam::new(2.5 * a.nu1, 2.5 * a.nu2);
        bad += usize::from((rho_of_nu(&p, scaled)? - rho_of_nu(&p, a)?).abs() >= 1e-12);
    }
    out.push(Check::holds("monotonicity", bad == 0));

    let mut closure = 0.0f64;
    for (k, n) in PORISM_ELLS {
        let nu = invert_rho(&p, k as f64 / n as f64)?;
        for s in 0..16 {
            let z0 = covering(&p, (s as f64 + 0.3) / 16.0);
            let orbit = polygon(&p, nu, z0, n as usize)?;
            let r = if orbit.steps == n as usize { orbit.closure_residual } else { f64::INFINITY };
            closure = closure.max(r);
        }
    }
    out.push(Check::below("porism_closure_16_starts", closure, 1e-7));
    Ok(out)
}

/// Spectra on which the Cayley fixtures are built.
pub const CAYLEY_SPECTRA: [[f64; 3]; 3] = [[0.2, 0.125, 1.0 / 9.0], [3.0, 2.0, 1.0], [1.0, 0.3, 0.29]];

/// The pencil spanned by the outer conic of `p` and its member of rotation number `ell`.
pub fn poristic_pencil(p: &Pencil, ell: f64) -> Result<Pencil> {
    let member = p.member(invert_rho(p, ell)?)?;
    Pencil::new(*p.outer().conic(), *member.conic())
}

/// Reduced fractions `k/n` in `(0, 1/2)`.
pub fn reduced_fractions(n: u32) -> impl Iterator<Item = u32> {
    (1..n).filter(move |&k| 2 * k < n && gcd(k, n) == 1)
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Off-porism control for `k/n`: the rotation number shifted by 0.01.
pub fn control_ell(k: u32, n: u32) -> f64 {
    k as f64 / n as f64 + 0.01
}

/// Relative defect of `beta_2^2 = 4 beta_1 beta_3`.
pub fn cay3_beta_defect(p: &Pencil) -> f64 {
    let b = characteristic_coefficients(p.outer().conic(), p.inner().conic());
    (b[2] * b[2] - 4.0 * b[1] * b[3]) / (b[2] * b[2] + 4.0 * (b[1] * b[3]).abs())
}

/// Relative defect of the eigenvalue condition for rotation number 1/3.
pub fn cay3_lambda_defect(s: &Spectrum) -> f64 {
    lambda_porism(s, LambdaPorism::Third) * s.l3().sqrt()
}

/// Cayley classification, the period three criteria and bicentric relations.
pub fn cayley_checks() -> Result<Vec<Check>> {
    let mut poristic = 0.0f64;
    let mut control = f64::INFINITY;
    for l in CAYLEY_SPECTRA {
        let p = Pencil::from_lambdas(l[0], l[1], l[2])?;
        for n in 3..=10 {
            for k in reduced_fractions(n) {
                let q = poristic_pencil(&p, k as f64 / n as f64)?;
                poristic = poristic.max(cayley_condition(&q, n as usize)?);
                let c = poristic_pencil(&p, control_ell(k, n))?;
                control = control.min(cayley_condition(&c, n as usize)?);
            }
        }
    }
    let mut out = vec![
        Check::below("cayley_poristic_fixtures", poristic, CAYLEY_PORISM_TOL),
        Check::above("cayley_off_porism_controls", control, 1e-4),
    ];

    let mut agree = 0usize;
    let mut worst_zero = 0.0f64;
    for i in 0..50 {
        let s = sample_spectrum(i);
        let p = Pencil::from_spectrum(s)?;
        for (ell, poristic) in [(1.0 / 3.0, true), (0.3, false)] {
            let q = poristic_pencil(&p, ell)?;
            let a = cayley_condition(&q, 3)?;
            let b = cay3_beta_defect(&q).abs();
            let c = cay3_lambda_defect(q.spectrum()).abs();
            if poristic {
                worst_zero = worst_zero.max(a).max(b).max(c);
            }
            let verdicts = [a < 1e-8, b < 1e-8, c < 1e-8];
            agree += usize::from(verdicts.iter().all(|&v| v == poristic));
        }
    }
    out.push(Check::below("cay3_criteria_vanish_together", worst_zero, 1e-8));
    out.push(Check::holds("cay3_criteria_agree", agree == 100));

    let tri = bicentric_check(1.0, 0.5, 0.0, BicentricKind::Triangle)?;
    let quad = bicentric_check(1.0, 0.5f64.sqrt(), 0.0, BicentricKind::Quadrilateral)?;
    out.push(Check::below("chapple_euler", tri.abs(), 1e-15));
    out.push(Check::below("fuss", quad.abs(), 1e-15));
    let mut circles = 0.0f64;
    for (r, rho) in [(0.5, 1.0 / 3.0), (0.5f64.sqrt(), 0.25)] {
        let s = circle_pencil_spectrum(1.0, r, 0.0)?;
        circles = circles.max((rho_for_spectrum(&s, PencilParam::new(0.0, 1.0))? - rho).abs());
        let p = Pencil::from_spectrum(s)?;
        circles = circles.max((rho_of_nu(&p, PencilParam::new(0.0, 1.0))? - rho).abs());
    }
    out.push(Check::below("circle_pencil_rotation", circles, 1e-10));
    Ok(out)
}

/// Deterministic spectra `l1 > l2 > l3 > 0` spread over a box, from a
/// low-discrepancy sequence.
pub fn sample_spectrum(i: usize) -> Spectrum {
    let a = ((i as f64 + 1.0) * 0.618_033_988_749_894_9).fract();
    let b = ((i as f64 + 1.0) * 0.754_877_666_246_692_7).fract();
    let c = ((i as f64 + 1.0) * 0.569_840_290_998_053_2).fract();
    let l3 = 0.05 + 2.0 * c;
    let l2 = l3 * (1.05 + 2.0 * a);
    let l1 = l2 * (1.05 + 2.0 * b);
    Spectrum::new(l1, l2, l3).expect("sampled eigenvalues are distinct and positive")
}

/// Real root of `21 x^3 + 14 x^2 + 7 x - 8`.
pub fn cubic_field_root() -> f64 {
    let mut x = 0.45;
    for _ in 0..50 {
        let f = ((21.0 * x + 14.0) * x + 7.0) * x - 8.0;
        let d = (63.0 * x + 28.0) * x + 7.0;
        x -= f / d;
    }
    x
}

/// Rotation numbers `(3x^3, 2x^2, x)` of the cubic-field schedule.
pub fn cubic_field_ells() -> [f64; 3] {
    let x = cubic_field_root();
    [3.0 * x * x * x, 2.0 * x * x, x]
}

/// Mixed schedule `P1, P2^-1, P1, P1, P2^-1` with rotation numbers 1/5 and 3/10.
pub fn five_step_schedule(p: &Pencil) -> Result<Vec<(PencilParam, i64)>> {
    let a = invert_rho(p, 0.2)?;
    let b = invert_rho(p, 0.3)?;
    Ok(vec![(a, 1), (b, -1), (a, 1), (a, 1), (b, -1)])
}

/// Closure of mixed schedules from several pencils members.
pub fn composition_checks() -> Result<Vec<Check>> {
    let p = reference_pencil()?;
    let mut out = Vec::new();

    let five = Composition::new(&p, &five_step_schedule(&p)?)?;
    let mut worst = 0.0f64;
    for s in 0..8 {
        worst = worst.max(five.run(covering(&p, (s as f64 + 0.2) / 8.0))?.closure_residual);
    }
    out.push(Check::below("five_step_schedule_closes", worst, 1e-7));

    let ells = cubic_field_ells();
    let nus = ells.iter().map(|&l| invert_rho(&p, l)).collect::<Result<Vec<_>>>()?;
    let triple = Composition::new(&p, &[(nus[0], 1), (nus[1], 1), (nus[2], 1)])?;
    let mut worst = 0.0f64;
    for s in 0..8 {
        let z0 = covering(&p, (s as f64 + 0.4) / 8.0);
        let mut z = z0;
        for _ in 0..7 {
            z = triple.apply(z)?;
        }
        worst = worst.max(p.standard_distance(z, z0)?);
    }
    out.push(Check::below("cubic_field_z21_equals_z0", worst, 1e-6));

    let mut closed = 0usize;
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let pair = Composition::new(&p, &[(nus[i], 1), (nus[j], 1)])?;
        closed += usize::from(pair.orbit(covering(&p, 0.1), 10_000)?.is_closed());
    }
    out.push(Check::holds("two_map_subschedules_stay_open", closed == 0));
    Ok(out)
}
