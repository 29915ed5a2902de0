//! Acceptance run: one line per criterion, non-zero exit if any fails.

use std::time::Instant;

use num_traits::Signed;
use plurilab::energy::cocycle_term;
use plurilab::envelope::{contact_leakage, contact_tolerance, i_model_from_lelong};
use plurilab::fixtures;
use plurilab::quantization::{approximant_window, bergman_with, h0_from_lelong, l2_norms, TwistData};
use plurilab::rational::{q, qi, to_f64};
use plurilab::toric::{h0_toric, singularity_body, R};
use plurilab::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Calibrated once against the committed fixtures (k = 200, K = X grid step
// 0.05, profile grid step 0.01); about 25% headroom over the observed value.
const KS_THRESHOLD_THIRDS: f64 = 0.02;
// The limit measure carries atoms σ(−1) at t = ±1 while β^k is absolutely
// continuous, so the sup-CDF distance cannot drop below σ(−1) ≈ 0.269.
const KS_THRESHOLD_ANNULUS: f64 = 0.30;
const TREND_SLACK: f64 = 1.10;
const SCHEDULE: [u32; 4] = [25, 50, 100, 200];

struct Line {
    pass: bool,
    detail: String,
}

fn line(pass: bool, detail: impl Into<String>) -> Line {
    Line { pass, detail: detail.into() }
}

fn nonincreasing(xs: &[f64], slack: f64) -> bool {
    xs.windows(2).all(|w| w[1] <= slack * w[0])
}

fn fmt(xs: &[f64]) -> String {
    xs.iter().map(|x| format!("{x:.4e}")).collect::<Vec<_>>().join(", ")
}

fn volume_n1() -> Line {
    let start = Instant::now();
    let mut worst = (0.0f64, 0u32, 0u32, 0i64);
    let mut failures = 0;
    for r in [1u32, 2] {
        for d in -1..=1i64 {
            let tw = TwistData { rank: r, degree_shift: d };
            for k in 1..=1000u32 {
                let h = h0_from_lelong(k, qi(1), q(1, 3), q(1, 4), &tw) as i64;
                // exact: |h/(rk) − 5/12|·k ≤ 3  ⇔  |12h − 5rk| ≤ 36r
                let gap = (12 * h - 5 * (r * k) as i64).abs();
                let scaled = gap as f64 / (12 * r) as f64;
                if gap > 36 * r as i64 {
                    failures += 1;
                }
                if scaled > worst.0 {
                    worst = (scaled, k, r, d);
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    line(
        failures == 0 && secs < 1.0,
        format!(
            "max k·|h0/(rk) − 5/12| = {:.4} (k={}, r={}, d={}), {} violations of 3/k, {:.3}s",
            worst.0, worst.1, worst.2, worst.3, failures, secs
        ),
    )
}

fn volume_n2() -> Line {
    let start = Instant::now();
    let mut ok = true;
    let mut worst = 0.0f64;
    for f in [fixtures::toric_simplex(), fixtures::toric_half_square()] {
        let body = singularity_body(&f);
        let (area, per) = (body.area(), body.perimeter_lower_bound());
        for r in [1u32, 2] {
            let tw = TwistData { rank: r, degree_shift: 0 };
            for k in 1..=400u32 {
                let kk = R::from_integer(k as i128);
                let h = R::new(h0_toric(k, &f, &tw) as i128, r as i128);
                let gap = (h / (kk * kk) - area).abs();
                ok &= gap * kk <= R::from_integer(4) * per;
                let ratio = to_f64_r(gap * kk / per);
                worst = worst.max(ratio);
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    line(ok && secs < 10.0, format!("max k·gap/perimeter = {worst:.4} (bound 4), {secs:.3}s"))
}

fn to_f64_r(x: R) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

fn bergman_mass() -> Line {
    let grid = fixtures::default_grid();
    let kgrid = uniform_grid(-40.0, 40.0, 1601);
    let x = fixtures::whole_line(&kgrid).unwrap();
    let (ann, area) = fixtures::annulus(41).unwrap();
    let circle = WeightedSet::interval(-1.0, 1.0, 41, |t| 0.2 * t).unwrap();
    let dirac = RadialMeasure::dirac(0.0).unwrap();
    let base = fixtures::base(&grid).unwrap();
    let thirds = fixtures::thirds_quarters(&grid).unwrap();
    let fs = RadialMeasure::fubini_study();
    let cases: Vec<(&ConvexProfile, &WeightedSet, &RadialMeasure, TwistData)> = vec![
        (&base, &x, &fs, TwistData::default()),
        (&thirds, &x, &fs, TwistData::default()),
        (&thirds, &x, &fs, TwistData { rank: 2, degree_shift: 1 }),
        (&base, &ann, &area, TwistData::default()),
        (&thirds, &ann, &area, TwistData { rank: 1, degree_shift: -1 }),
        (&thirds, &circle, &dirac, TwistData::default()),
    ];
    let mut worst = 0.0f64;
    for (u, k, nu, tw) in cases {
        for kk in [10u32, 50, 200] {
            let b = bergman_with(kk, u, &tw, k, nu, 32).unwrap();
            let target = b.h0 as f64 / kk as f64;
            worst = worst.max((b.total_mass / target - 1.0).abs());
            worst = worst.max((b.measure.total_mass() / target - 1.0).abs());
        }
    }
    line(worst <= 1e-8, format!("max relative |∫β^k − h0/k| = {worst:.3e} over 6 fixtures × k ∈ {{10, 50, 200}}"))
}

fn constant_kernel() -> Line {
    let grid = fixtures::default_grid();
    let base = fixtures::base(&grid).unwrap();
    let x = fixtures::whole_line(&uniform_grid(-40.0, 40.0, 1601)).unwrap();
    let mut worst = 0.0f64;
    for k in [10u32, 50, 200] {
        let b = bergman(k, &base, &x, &RadialMeasure::fubini_study()).unwrap();
        for v in &b.kernel {
            worst = worst.max((v / (k + 1) as f64 - 1.0).abs());
        }
    }
    line(worst <= 1e-6, format!("max |B^k/(k+1) − 1| = {worst:.3e}"))
}

fn weak_convergence() -> Line {
    let grid = fixtures::default_grid();
    let fs = RadialMeasure::fubini_study();
    let kx = fixtures::whole_line(&uniform_grid(-40.0, 40.0, 1601)).unwrap();

    let thirds = fixtures::thirds_quarters(&grid).unwrap();
    let target = ma_measure(&i_model_envelope(&thirds).unwrap());
    let d1: Vec<f64> = SCHEDULE
        .iter()
        .map(|&k| kolmogorov_distance(&bergman(k, &thirds, &kx, &fs).unwrap().measure, &target))
        .collect();

    let base = fixtures::base(&grid).unwrap();
    let (ann, area) = fixtures::annulus(201).unwrap();
    let env = weighted_envelope(&base, &ann, EnvelopeMode::IOrder).unwrap();
    let target = ma_measure(&env);
    let d2: Vec<f64> = SCHEDULE
        .iter()
        .map(|&k| kolmogorov_distance(&bergman(k, &base, &ann, &area).unwrap().measure, &target))
        .collect();
    let leak = contact_leakage(&env, &ann, contact_tolerance(&env, &ann));

    let pass = nonincreasing(&d1, TREND_SLACK)
        && nonincreasing(&d2, TREND_SLACK)
        && d1[3] < KS_THRESHOLD_THIRDS
        && d2[3] < KS_THRESHOLD_ANNULUS
        && leak < 1e-6;
    line(
        pass,
        format!(
            "KS (1/3,1/4): [{}] (k=200 threshold {KS_THRESHOLD_THIRDS}); KS annulus: [{}] (threshold {KS_THRESHOLD_ANNULUS}); leakage {leak:.1e}",
            fmt(&d1),
            fmt(&d2)
        ),
    )
}

/// Random convex PL profile on `grid` with kinks at grid nodes in [−5, 5].
fn random_pl(rng: &mut ChaCha8Rng, c: Q, grid: &[f64]) -> ConvexProfile {
    let den = 12i64;
    let cn = (c * Q::from_integer(den)).to_integer();
    let pieces = rng.gen_range(2..=5);
    let mut slopes: Vec<i64> = (0..pieces).map(|_| rng.gen_range(0..=cn)).collect();
    slopes.sort();
    slopes.dedup();
    let (lo, hi) = (grid.partition_point(|&t| t < -5.0), grid.partition_point(|&t| t <= 5.0));
    let mut kinks: Vec<usize> = (1..slopes.len()).map(|_| rng.gen_range(lo..hi)).collect();
    kinks.sort();
    kinks.dedup();
    slopes.truncate(kinks.len() + 1);
    let mut a = rng.gen_range(-1.0..0.0);
    let mut lines = vec![(Q::new(slopes[0], den), a)];
    for (i, &kn) in kinks.iter().enumerate() {
        let ds = to_f64(&Q::new(slopes[i + 1] - slopes[i], den));
        a -= ds * grid[kn];
        lines.push((Q::new(slopes[i + 1], den), a));
    }
    ConvexProfile::from_lines(c, grid.to_vec(), &lines).unwrap()
}

fn random_k(rng: &mut ChaCha8Rng) -> WeightedSet {
    let a = rng.gen_range(-3.0..0.0);
    let b = a + rng.gen_range(0.5..2.0);
    let c0 = b + rng.gen_range(0.5..2.0);
    let d0 = c0 + rng.gen_range(0.2..2.0);
    let (amp, freq) = (rng.gen_range(0.0..0.5), rng.gen_range(0.5..2.0));
    let v = move |t: f64| amp * (freq * t).sin();
    let i1 = WeightedSet::interval(a, b, 41, v).unwrap().components()[0].clone();
    let i2 = WeightedSet::interval(c0, d0, 41, v).unwrap().components()[0].clone();
    WeightedSet::new(vec![i1, i2]).unwrap()
}

fn max_gap(a: &ConvexProfile, b: &ConvexProfile, ts: &[f64]) -> f64 {
    ts.iter().map(|&t| (a.eval(t) - b.eval(t)).abs()).fold(0.0, f64::max)
}

fn envelope_algebra() -> Line {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let grid = uniform_grid(-40.0, 40.0, 1601);
    let mut worst = [0.0f64; 5];
    for _ in 0..20 {
        let c = [qi(1), q(3, 2), qi(2)][rng.gen_range(0..3)];
        let u0 = random_pl(&mut rng, c, &grid);
        let u1 = random_pl(&mut rng, c, &grid);
        let k = random_k(&mut rng);
        let ts: Vec<f64> = grid.clone();

        // biconjugacy round trip
        let bi = envelope_below_profile(&u0, &u0).unwrap();
        worst[0] = worst[0].max(max_gap(&bi, &u0, &ts) / u0.scale());

        // I-projection idempotency
        let p = i_model_envelope(&u0).unwrap();
        worst[1] = worst[1].max(max_gap(&i_model_envelope(&p).unwrap(), &p, &ts));

        // idempotency of the partial envelope, and dependence on the window only
        let e = weighted_envelope(&u0, &k, EnvelopeMode::IOrder).unwrap();
        let ee = weighted_envelope(&e, &k, EnvelopeMode::IOrder).unwrap();
        let ep = weighted_envelope(&p, &k, EnvelopeMode::FlatOrder).unwrap();
        worst[2] = worst[2].max(max_gap(&ee, &e, e.grid())).max(max_gap(&ep, &e, e.grid()));

        // composition through the base-window envelope
        let base = base_profile(c, grid.clone()).unwrap();
        let e0 = weighted_envelope(&base, &k, EnvelopeMode::IOrder).unwrap();
        let comp = envelope_below_profile(&u0, &e0).unwrap();
        worst[3] = worst[3].max(max_gap(&comp, &e, e.grid()));

        // concavity along mixtures
        let e1 = weighted_envelope(&u1, &k, EnvelopeMode::IOrder).unwrap();
        for lam in [qi(0), q(1, 4), q(1, 2), q(3, 4), qi(1)] {
            let mix = mix_profiles(lam, &u0, &u1).unwrap();
            let em = weighted_envelope(&mix, &k, EnvelopeMode::IOrder).unwrap();
            let l = to_f64(&lam);
            for &t in e.grid() {
                let lhs = (1.0 - l) * e.eval(t) + l * e1.eval(t);
                worst[4] = worst[4].max(lhs - em.eval(t));
            }
        }
    }
    let pass = worst[0] <= 1e-10 && worst[1..].iter().all(|&w| w <= 1e-8);
    line(
        pass,
        format!(
            "20 random PL fixtures: biconjugacy {:.1e}, projection {:.1e}, idempotency {:.1e}, composition {:.1e}, concavity excess {:.1e}",
            worst[0], worst[1], worst[2], worst[3], worst[4]
        ),
    )
}

fn approximants() -> Line {
    let grid = fixtures::default_grid();
    let u = fixtures::thirds_quarters(&grid).unwrap();
    let p = i_model_envelope(&u).unwrap();
    let mass_p = p.mass();
    let mut ok = true;
    for k in 1..=500u32 {
        let w = approximant_window(k, &u).unwrap();
        let kq = qi(k as i64);
        let (g0, g1) = ((w.lo - u.window().lo).abs(), (u.window().hi - w.hi).abs());
        let dm = w.width() - mass_p;
        ok &= g0 * kq <= qi(1) && g1 * kq <= qi(1) && !dm.is_negative() && dm * kq <= qi(2);
    }
    let doubling = [25u32, 50, 100, 200, 400];
    let masses: Vec<Q> = doubling.iter().map(|&k| approximant_window(k, &u).unwrap().width()).collect();
    ok &= masses.windows(2).all(|m| m[1] <= m[0]);
    // divergence measured on the actual approximant profiles
    let mut div = vec![];
    let mut lower_c: f64 = 0.0;
    for &k in &doubling[..4] {
        let a = plurilab::quantization::bergman_approximant(k, &u).unwrap();
        let d = divergence_exact(&a, &p).unwrap();
        ok &= d <= Q::from_integer(2) * (a.mass() - mass_p);
        div.push(to_f64(&d));
        lower_c = lower_c.max(plurilab::quantization::approximant_lower_constant(k, &u, &a));
    }
    ok &= div.windows(2).all(|d| d[1] <= d[0]) && div[3] < div[0];
    line(
        ok,
        format!(
            "Lelong gaps ≤ 1/k and 0 ≤ mass gap ≤ 2/k for k ≤ 500; divergence over 25..200: [{}]; lower-bound constant C = {lower_c:.3}",
            fmt(&div)
        ),
    )
}

fn energy() -> Line {
    let mut rng = ChaCha8Rng::seed_from_u64(0xe4e7);
    let grid = uniform_grid(-40.0, 40.0, 1601);
    let u = i_model_from_lelong(qi(1), q(1, 3), q(1, 4), &grid).unwrap();

    // cocycle on random same-type pairs, on a shared grid
    let mut cocycle: f64 = 0.0;
    for _ in 0..10 {
        let (k1, k2) = (random_k(&mut rng), random_k(&mut rng));
        let e1 = weighted_envelope(&u, &k1, EnvelopeMode::IOrder).unwrap();
        let e2 = weighted_envelope(&u, &k2, EnvelopeMode::IOrder).unwrap();
        let g = plurilab::profile::merge_grids(e1.grid(), e2.grid());
        let (f1, f2) = (e1.resample(g.clone()).unwrap(), e2.resample(g).unwrap());
        let lhs = ma_energy(&u, &f1).unwrap() - ma_energy(&u, &f2).unwrap();
        let rhs = cocycle_term(&f1, &f2).unwrap();
        cocycle = cocycle.max((lhs - rhs).abs());
    }

    // derivative formula, bump direction
    let (ann, _) = fixtures::annulus(81).unwrap();
    let bump = |t: f64| (1.0 - t * t).max(0.0).powi(2);
    let (fd, exact) = energy_derivative_check(&u, &ann, &bump, 0.0, 1e-3).unwrap();
    let deriv = (fd - exact).abs() / (1.0 + exact.abs());

    // Donaldson functional under a constant shift
    let x = fixtures::whole_line(&grid).unwrap();
    let fs = RadialMeasure::fubini_study();
    let mut shift: f64 = 0.0;
    for k in [25u32, 100] {
        let a = l2_norms(k, &u, &TwistData::default(), &x, &fs).unwrap();
        let b = l2_norms(k, &u, &TwistData::default(), &x.shifted(0.7).unwrap(), &fs).unwrap();
        shift = shift.max((donaldson(k, &b, &a).unwrap() - 0.7 * a.admissible.len() as f64 / k as f64).abs());
    }

    // quantized energy against the partial equilibrium energy
    let (ann, area) = fixtures::annulus(41).unwrap();
    let target = equilibrium_energy(&u, &ann).unwrap();
    let gaps: Vec<f64> = SCHEDULE
        .iter()
        .map(|&k| {
            let a = l2_norms(k, &u, &TwistData::default(), &ann, &area).unwrap();
            let r = l2_norms(k, &u, &TwistData::default(), &x, &fs).unwrap();
            (donaldson(k, &a, &r).unwrap() - target).abs()
        })
        .collect();
    let pass = cocycle <= 1e-8 && deriv <= 1e-3 && shift <= 1e-8 && gaps.windows(2).all(|g| g[1] < g[0]);
    line(
        pass,
        format!(
            "cocycle {cocycle:.1e}; derivative fd={fd:.6} exact={exact:.6} rel {deriv:.1e}; shift {shift:.1e}; |L_k − I| over 25..200: [{}]",
            fmt(&gaps)
        ),
    )
}

fn bernstein_markov() -> Line {
    let grid = fixtures::default_grid();
    let x = fixtures::whole_line(&grid).unwrap();
    let fs = RadialMeasure::fubini_study();
    let (ann, area) = fixtures::annulus(201).unwrap();
    let dirac = RadialMeasure::dirac(0.0).unwrap();
    let ks = [25u32, 50, 100, 200, 400];
    let rate = |k: &WeightedSet, nu: &RadialMeasure| -> Vec<f64> { ks.iter().map(|&kk| bm_rate(kk, k, nu).unwrap()).collect() };
    let (r_fs, r_area, r_atom) = (rate(&x, &fs), rate(&ann, &area), rate(&ann, &dirac));
    let decreasing = |r: &[f64]| r.windows(2).all(|w| w[1] < w[0]) && r[r.len() - 1] < 0.05;
    let floor = std::f64::consts::LN_2 - (1.0 + (-1.0f64).exp()).ln();
    let pass = decreasing(&r_fs) && decreasing(&r_area) && r_atom.iter().all(|&r| r > 0.5 * floor);
    line(
        pass,
        format!("FS: [{}]; area: [{}]; atom: [{}] (bounded below by {floor:.4})", fmt(&r_fs), fmt(&r_area), fmt(&r_atom)),
    )
}

fn main() {
    type Criterion = (&'static str, fn() -> Line);
    let criteria: [Criterion; 9] = [
        ("volume limit, n = 1", volume_n1),
        ("volume limit, n = 2", volume_n2),
        ("Bergman mass identity", bergman_mass),
        ("constant kernel", constant_kernel),
        ("weak convergence", weak_convergence),
        ("envelope algebra", envelope_algebra),
        ("approximants", approximants),
        ("energy", energy),
        ("Bernstein-Markov diagnostics", bernstein_markov),
    ];
    let mut failed = vec![];
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let l = f();
        let tag = if l.pass { "PASS" } else { "FAIL" };
        println!("criterion {} [{tag}] {name}: {} ({:.1}s)", i + 1, l.detail, start.elapsed().as_secs_f64());
        if !l.pass {
            failed.push(i + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
