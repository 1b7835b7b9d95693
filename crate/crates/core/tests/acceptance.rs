//! Acceptance criteria, one test each. Every test prints a single PASS/FAIL
//! line with its measured residuals and asserts both the numerical bound and
//! the runtime limit.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use poncelet::billiard::{
    confocal_step, estimate_rotation_confocal, gauss_transform, half_rotation, porism_f, rotation_confocal, sweep,
    EccPair,
};
use poncelet::cayley::{
    bicentric_check, cayley_condition, circle_pencil, circle_pencil_spectrum, confocal_poristic_residual,
    BicentricKind, PoristicSet,
};
use poncelet::conics::PlanePoint;
use poncelet::elliptic::Modulus;
use poncelet::pencil::{confocal_to_standard, Pencil, PencilParam, Spectrum};
use poncelet::poncelet::{
    covering, invert_rho, polygon, rho_of_nu, run_composition, standard_map, Composition, PonceletMap,
};
use poncelet::verify::{
    cay3_beta_defect, cay3_lambda_defect, control_ell, cubic_field_ells, five_step_schedule, poristic_pencil,
    reduced_fractions, reference_pencil, sample_spectrum, CAYLEY_SPECTRA, PORISM_ELLS,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(n: u32, pass: bool, elapsed: Duration, limit: f64, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("criterion {n:>2}: {verdict} [{:.3} s / {limit} s] {detail}", elapsed.as_secs_f64());
}

fn finish(n: u32, pass: bool, start: Instant, limit: f64, detail: &str) {
    let elapsed = start.elapsed();
    report(n, pass, elapsed, limit, detail);
    assert!(pass, "criterion {n}: {detail}");
    assert!(elapsed.as_secs_f64() < limit, "criterion {n} took {elapsed:?}");
}

#[test]
fn criterion_01_reference_pairs() {
    let t = Instant::now();
    let tol = 5e-6;
    let hept = EccPair::new(0.8, 0.572851).unwrap();
    let r1 = (rotation_confocal(hept) - 2.0 / 7.0).abs();
    let (_, f2) = half_rotation(hept);
    let r2 = (f2 - 0.419316).abs();
    let r3 = (rotation_confocal(EccPair::new(0.8, f2).unwrap()) - 5.0 / 14.0).abs();
    let pent = EccPair::new(0.6, 0.503246).unwrap();
    let r4 = (rotation_confocal(pent) - 0.2).abs();
    let g = gauss_transform(pent).unwrap();
    let r5 = (g.e() - 0.968246).abs().max((g.f() - 0.913706).abs());
    let worst = r1.max(r2).max(r3).max(r4).max(r5);
    let detail = format!("2/7 {r1:.1e}, f2 {r2:.1e}, 5/14 {r3:.1e}, 1/5 {r4:.1e}, G {r5:.1e} (tol {tol:e})");
    finish(1, worst < tol, t, 1.0, &detail);
}

#[test]
fn criterion_02_reference_pencil_conjugacy() {
    let t = Instant::now();
    let p = Pencil::from_lambdas(0.2, 0.125, 1.0 / 9.0).unwrap();
    let nu = PencilParam::new(0.0, 1.0);
    let de = (p.eccentricity() - (27.0f64 / 32.0).sqrt()).abs();
    let f = p.standard_f(nu).unwrap();
    let df = (f - 0.75f64.sqrt()).abs();
    let e = Modulus::new(p.eccentricity()).unwrap();
    let pair = EccPair::new(e.value(), f).unwrap();
    let chart = confocal_to_standard(f).unwrap();
    let map = PonceletMap::new(&p, nu).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut dev = 0.0f64;
    for _ in 0..32 {
        let a = rng.gen_range(0.0..2.0 * PI);
        let w = PlanePoint::new(a.cos(), a.sin());
        let standard = standard_map(e, f, w).unwrap();
        let billiard = chart.apply(confocal_step(pair, chart.inverse_apply(w)).unwrap());
        let pencil = p.to_standard(map.step(p.from_standard(w).unwrap()).unwrap()).unwrap();
        dev = dev.max(standard.distance(billiard)).max(standard.distance(pencil));
    }
    let pass = de < 1e-12 && df < 1e-12 && dev < 1e-8;
    finish(2, pass, t, 1.0, &format!("|e - e*| {de:.1e}, |f - f*| {df:.1e}, conjugacy {dev:.1e}"));
}

#[test]
fn criterion_03_closed_form_vs_dynamics() {
    let t = Instant::now();
    let rows = sweep(20, 10_000).unwrap();
    let worst = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
    let pass = rows.len() == 400 && worst < 2e-4;
    finish(3, pass, t, 30.0, &format!("{} grid points, max residual {worst:.2e} (tol 2e-4)", rows.len()));
}

#[test]
fn criterion_04_porism_closure() {
    let t = Instant::now();
    let p = reference_pencil().unwrap();
    let mut closure = 0.0f64;
    let mut wrong_period = 0;
    for (k, q) in PORISM_ELLS {
        let nu = invert_rho(&p, k as f64 / q as f64).unwrap();
        for i in 0..16 {
            let orbit = polygon(&p, nu, covering(&p, (i as f64 + 0.37) / 16.0), 4 * q as usize).unwrap();
            closure = closure.max(orbit.closure_residual);
            wrong_period += usize::from(orbit.steps != q as usize || orbit.winding != k as i64);
        }
    }
    let mut poly = 0.0f64;
    for set in PoristicSet::ALL {
        for i in 1..=19 {
            let e = 0.05 * i as f64;
            let pair = EccPair::new(e, porism_f(e, set.rotation()).unwrap()).unwrap();
            poly = poly.max(confocal_poristic_residual(pair, set).abs());
        }
    }
    let pass = closure < 1e-7 && wrong_period == 0 && poly < 1e-9;
    let detail = format!("closure {closure:.1e}, wrong periods {wrong_period}, polynomials {poly:.1e}");
    finish(4, pass, t, 10.0, &detail);
}

fn random_interior(rng: &mut ChaCha8Rng, s: &Spectrum) -> PencilParam {
    let lim = s.limiting_param();
    let top = lim.nu2.atan2(lim.nu1);
    let a = top * rng.gen_range(1e-6..1.0 - 1e-6);
    let r = rng.gen_range(0.2..5.0);
    PencilParam::new(r * a.cos(), r * a.sin())
}

#[test]
fn criterion_05_duality_and_monotonicity() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut dual = 0.0f64;
    let mut mismatches = 0;
    let mut parallel = 0;
    for i in 0..100 {
        let p = Pencil::from_spectrum(sample_spectrum(i)).unwrap();
        let s = *p.spectrum();
        let nu = random_interior(&mut rng, &s);
        let rn = rho_of_nu(&p, nu).unwrap();
        dual = dual.max((rn + rho_of_nu(&p, p.dual(nu).unwrap()).unwrap() - 0.5).abs());
        // Every fifth pair is parallel, the rest independent.
        let mu = if i % 5 == 0 {
            let c = rng.gen_range(0.2..5.0);
            PencilParam::new(c * nu.nu1, c * nu.nu2)
        } else {
            random_interior(&mut rng, &s)
        };
        let rm = rho_of_nu(&p, mu).unwrap();
        let (a, b) = (nu.canonical(), mu.canonical());
        let cross = a.nu1 * b.nu2 - a.nu2 * b.nu1;
        let sign_cross = if cross.abs() < 1e-12 { 0 } else { cross.signum() as i32 };
        let drho = rm - rn;
        let sign_rho = if drho.abs() < 1e-12 { 0 } else { drho.signum() as i32 };
        parallel += usize::from(sign_cross == 0);
        mismatches += usize::from(sign_cross != sign_rho);
    }
    let pass = dual < 1e-10 && mismatches == 0 && parallel == 20;
    let detail = format!("duality {dual:.1e}, sign mismatches {mismatches}/100, parallel pairs {parallel}");
    finish(5, pass, t, 5.0, &detail);
}

#[test]
fn criterion_06_cayley_cross_validation() {
    let t = Instant::now();
    let mut poristic = 0.0f64;
    let mut control = f64::INFINITY;
    for l in CAYLEY_SPECTRA {
        let p = Pencil::from_lambdas(l[0], l[1], l[2]).unwrap();
        for n in 3..=10 {
            for k in reduced_fractions(n) {
                let q = poristic_pencil(&p, k as f64 / n as f64).unwrap();
                poristic = poristic.max(cayley_condition(&q, n as usize).unwrap());
                let c = poristic_pencil(&p, control_ell(k, n)).unwrap();
                control = control.min(cayley_condition(&c, n as usize).unwrap());
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut disagree = 0;
    let mut zeros = 0;
    for i in 0..50 {
        let p = Pencil::from_spectrum(sample_spectrum(100 + i)).unwrap();
        let on = i % 2 == 0;
        let ell = if on { 1.0 / 3.0 } else { rng.gen_range(0.05..0.45) };
        let q = poristic_pencil(&p, ell).unwrap();
        let verdicts = [
            cayley_condition(&q, 3).unwrap() < 1e-8,
            cay3_beta_defect(&q).abs() < 1e-8,
            cay3_lambda_defect(q.spectrum()).abs() < 1e-8,
        ];
        disagree += usize::from(verdicts.iter().any(|&v| v != verdicts[0]));
        zeros += usize::from(verdicts[0]);
    }
    let pass = poristic < 1e-8 && control > 1e-4 && disagree == 0 && zeros == 25;
    let detail = format!(
        "poristic max {poristic:.1e}, control min {control:.1e}, Cay3 disagreements {disagree}/50 ({zeros} zeros)"
    );
    finish(6, pass, t, 10.0, &detail);
}

#[test]
fn criterion_07_full_poncelet_composition() {
    let t = Instant::now();
    let p = reference_pencil().unwrap();
    let five = five_step_schedule(&p).unwrap();
    let r5 = run_composition(&p, &five, covering(&p, 0.31)).unwrap().closure_residual;

    let nus: Vec<_> = cubic_field_ells().iter().map(|&l| invert_rho(&p, l).unwrap()).collect();
    let triple = Composition::new(&p, &[(nus[0], 1), (nus[1], 1), (nus[2], 1)]).unwrap();
    let mut z21 = 0.0f64;
    for s in 0..8 {
        let z0 = covering(&p, (s as f64 + 0.15) / 8.0);
        let mut z = z0;
        for _ in 0..7 {
            z = triple.apply(z).unwrap();
        }
        z21 = z21.max(p.standard_distance(z, z0).unwrap());
    }
    let mut closed_pairs = 0;
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let pair = Composition::new(&p, &[(nus[i], 1), (nus[j], 1)]).unwrap();
        closed_pairs += usize::from(pair.orbit(covering(&p, 0.15), 10_000).unwrap().is_closed());
    }
    let pass = r5 < 1e-7 && z21 < 1e-6 && closed_pairs == 0;
    let detail = format!("five-step {r5:.1e}, |z21 - z0| {z21:.1e}, closed two-map schedules {closed_pairs}/3");
    finish(7, pass, t, 10.0, &detail);
}

#[test]
fn criterion_08_bicentric_classics() {
    let t = Instant::now();
    let tri = bicentric_check(1.0, 0.5, 0.0, BicentricKind::Triangle).unwrap();
    let quad = bicentric_check(1.0, 0.5f64.sqrt(), 0.0, BicentricKind::Quadrilateral).unwrap();
    let mut rho = 0.0f64;
    for (r, want) in [(0.5, 1.0 / 3.0), (0.5f64.sqrt(), 0.25)] {
        let s = circle_pencil_spectrum(1.0, r, 0.0).unwrap();
        let p = Pencil::from_spectrum(s).unwrap();
        rho = rho.max((rho_of_nu(&p, PencilParam::new(0.0, 1.0)).unwrap() - want).abs());
    }
    // The same circles through their conic matrices, slightly off-center so the spectrum separates.
    let mut off = 0.0f64;
    for (kind, want) in [(BicentricKind::Triangle, 1.0 / 3.0), (BicentricKind::Quadrilateral, 0.25)] {
        let a: f64 = 0.2;
        let r = match kind {
            BicentricKind::Triangle => (1.0 - a * a) / 2.0,
            BicentricKind::Quadrilateral => (1.0 / (1.0 - a).powi(2) + 1.0 / (1.0 + a).powi(2)).powf(-0.5),
        };
        let (c1, c2) = circle_pencil(1.0, r, a);
        let p = Pencil::new(c1, c2).unwrap();
        off = off.max((rho_of_nu(&p, PencilParam::new(0.0, 1.0)).unwrap() - want).abs());
    }
    let pass = tri == 0.0 && quad.abs() < 1e-15 && rho < 1e-10 && off < 1e-10;
    let detail = format!("Chapple-Euler {tri:.1e}, Fuss {quad:.1e}, rho concentric {rho:.1e}, rho offset {off:.1e}");
    finish(8, pass, t, 1.0, &detail);
}

#[test]
fn criterion_09_special_functions() {
    let t = Instant::now();
    let (mut pyth, mut dn_id, mut round, mut landen, mut dcd) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for i in 1..=19 {
        let e = 0.05 * i as f64;
        let m = Modulus::new(e).unwrap();
        let k = m.k();
        for j in 0..=400 {
            let u = -4.0 * k + 8.0 * k * j as f64 / 400.0;
            let jf = m.jacobi(u);
            pyth = pyth.max((jf.sn * jf.sn + jf.cn * jf.cn - 1.0).abs());
            dn_id = dn_id.max((jf.dn * jf.dn + e * e * jf.sn * jf.sn - 1.0).abs());
        }
        for j in 1..100 {
            let u = k * j as f64 / 100.0;
            round = round.max((m.f(m.am(u)) - u).abs());
            let h = 1e-6;
            let (lo, hi) = (Modulus::new(e - h).unwrap(), Modulus::new(e + h).unwrap());
            let fd = (hi.cd(u) - lo.cd(u)) / (2.0 * h);
            dcd = dcd.max((m.dcd_de(u) - fd).abs() / fd.abs().max(1e-3));
        }
        let g = Modulus::new(2.0 * e.sqrt() / (1.0 + e)).unwrap();
        landen = landen.max((g.k() - (1.0 + e) * k).abs() / g.k());
    }
    let pass = pyth < 1e-12 && dn_id < 1e-12 && round < 1e-10 && landen < 1e-12 && dcd < 1e-6;
    let detail =
        format!("sn2+cn2 {pyth:.1e}, dn2+e2sn2 {dn_id:.1e}, F(am) {round:.1e}, Landen {landen:.1e}, dcd/de {dcd:.1e}");
    finish(9, pass, t, 5.0, &detail);
}

// The first half of this criterion is not met. The closed form and a direct
// 1e5-bounce orbit average agree at rho(0.999999, 0.5) ~ 0.46544, and along
// e = 1 - 10^-k the value creeps up only logarithmically (0.4759 at k = 9,
// where the modulus reaches its ceiling). The bound is kept as stated.
#[test]
fn criterion_10_singular_limits() {
    let t = Instant::now();
    let pair = EccPair::new(0.999999, 0.5).unwrap();
    let near = rotation_confocal(pair);
    // Independent dynamical value, to show the shortfall is not in the closed form.
    let orbit = estimate_rotation_confocal(pair, 100_000).unwrap();
    let es = [0.9, 0.99, 0.999, 0.9999];
    let mut gaps = Vec::new();
    for &e in &es {
        let mut row = Vec::new();
        for ell in [1.0 / 3.0, 0.25, 0.2, 0.1] {
            row.push(e - porism_f(e, ell).unwrap());
        }
        gaps.push(row);
    }
    let monotone = (0..4).all(|j| gaps.windows(2).all(|w| w[1][j] < w[0][j] && w[1][j] > 0.0));
    let pass = near >= 0.49 && monotone;
    let last: Vec<String> = gaps[3].iter().map(|g| format!("{g:.1e}")).collect();
    let detail = format!(
        "rho(0.999999, 0.5) = {near:.8}, orbit average {orbit:.8} (need >= 0.49), e - porism_f decreasing: {monotone} (at e = 0.9999: {})",
        last.join(", ")
    );
    finish(10, pass, t, 1.0, &detail);
}
