//! Envelopes as restricted Legendre biconjugates.
//!
//! Every envelope here is "the largest convex function with slopes in a
//! window lying below an obstacle". For an obstacle sampled at finitely many
//! points this is the lower convex hull of the samples, continued by the
//! supporting lines of slope `lo` and `hi`: with candidate slopes
//! `{lo} ∪ {hull edge slopes in (lo, hi)} ∪ {hi}` and conjugate values
//! `c(s) = max_i (s·tᵢ − yᵢ)`, `G(t) = max_s (s·t − c(s))`. The hull vertices
//! touched by the slopes `lo` and `hi` are found by a monotone pointer, and
//! ties go to the smaller slope.
//!
//! When the obstacle extends to infinity as a line of slope `σ₋` (left) or
//! `σ₊` (right), only slopes in `[σ₋, σ₊]` can stay below it, so the window
//! is intersected with that range first.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fs::{f_fs, fs_conjugate, logit, sigma};
use crate::measure::RadialMeasure;
use crate::profile::{base_profile, ma_measure, merge_grids, ConvexProfile, Interpolation, SlopeWindow};
use crate::rational::{format_q, qmax, qmin, to_f64, Q};
use crate::weighted_set::WeightedSet;

/// Envelope flavours. With exact linear tails every model potential has
/// analytic singularities, so the 𝓘-model and the plain envelope agree; both
/// are kept so callers can state which one they mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnvelopeMode {
    IOrder,
    FlatOrder,
}

pub(crate) struct Obstacle {
    /// Sample points, ascending in `t`.
    pub pts: Vec<(f64, f64)>,
    pub left_slope: Option<Q>,
    pub right_slope: Option<Q>,
}

/// Lower convex hull of points sorted by `t` (monotone chain).
fn lower_hull(pts: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut h: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
    for &p in pts {
        if let Some(&(lt, ly)) = h.last() {
            if lt == p.0 {
                if p.1 < ly {
                    h.pop();
                } else {
                    continue;
                }
            }
        }
        while h.len() >= 2 {
            let (a, b) = (h[h.len() - 2], h[h.len() - 1]);
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross <= 0.0 {
                h.pop();
            } else {
                break;
            }
        }
        h.push(p);
    }
    h
}

/// `max_i (s·tᵢ − yᵢ)`: the Legendre transform of the sampled obstacle.
pub fn restricted_legendre(samples: &[(f64, f64)], s: f64) -> f64 {
    samples.iter().map(|&(t, y)| s * t - y).fold(f64::NEG_INFINITY, f64::max)
}

/// Evaluates the windowed biconjugate of a hull at ascending points.
fn hull_envelope(hull: &[(f64, f64)], lo: f64, hi: f64, ts: &[f64]) -> Vec<f64> {
    let n = hull.len();
    let edge = |v: usize| (hull[v + 1].1 - hull[v].1) / (hull[v + 1].0 - hull[v].0);
    // vertex supporting slope s: first v whose outgoing edge is at least s
    let support = |s: f64| {
        let mut v = 0;
        while v + 1 < n && edge(v) < s {
            v += 1;
        }
        v
    };
    let (vlo, vhi) = (support(lo), support(hi));
    let (tl, yl) = hull[vlo];
    let (th, yh) = hull[vhi];
    let mut out = Vec::with_capacity(ts.len());
    let mut v = vlo;
    for &t in ts {
        let g = if t <= tl {
            yl + lo * (t - tl)
        } else if t >= th {
            yh + hi * (t - th)
        } else {
            while hull[v + 1].0 < t {
                v += 1;
            }
            let (a, b) = (hull[v], hull[v + 1]);
            if t == b.0 {
                b.1
            } else {
                a.1 + (b.1 - a.1) * (t - a.0) / (b.0 - a.0)
            }
        };
        out.push(g);
    }
    out
}

pub(crate) fn biconjugate(obs: &Obstacle, window: SlopeWindow, c: Q, grid: Vec<f64>) -> Result<ConvexProfile> {
    if obs.pts.is_empty() {
        return Err(Error::input("obstacle has no samples"));
    }
    let lo = obs.left_slope.map_or(window.lo, |s| qmax(window.lo, s));
    let hi = obs.right_slope.map_or(window.hi, |s| qmin(window.hi, s));
    if lo > hi {
        return Err(Error::EmptyEnvelope { lo: format_q(&lo), hi: format_q(&hi) });
    }
    let hull = lower_hull(&obs.pts);
    let values = hull_envelope(&hull, to_f64(&lo), to_f64(&hi), &grid);
    Ok(ConvexProfile::new(c, grid, values, lo, hi)?.with_interpolation(Interpolation::Linear))
}

/// Closed-form values of the 𝓘-model envelope with the given window.
pub fn i_model_values(c: Q, w: SlopeWindow, ts: &[f64]) -> Vec<f64> {
    let cf = to_f64(&c);
    let (lo, hi) = (to_f64(&w.lo), to_f64(&w.hi));
    ts.iter()
        .map(|&t| {
            let s = cf * sigma(t);
            if s > lo && s < hi {
                cf * f_fs(t)
            } else {
                let s = s.clamp(lo, hi);
                s * t - fs_conjugate(cf, s)
            }
        })
        .collect()
}

/// The 𝓘-model envelope with a given window, on `grid` plus the two points
/// where the envelope leaves `c·f` (so its tails are exact).
pub fn i_model_from_window(c: Q, w: SlopeWindow, grid: &[f64]) -> Result<ConvexProfile> {
    SlopeWindow::new(w.lo, w.hi, c)?;
    let mut extra = vec![];
    if w.lo > Q::zero() && w.lo < c {
        extra.push(logit(to_f64(&(w.lo / c))));
    }
    if w.hi < c && w.hi > Q::zero() {
        extra.push(logit(to_f64(&(w.hi / c))));
    }
    let g = merge_grids(grid, &extra);
    let values = i_model_values(c, w, &g);
    ConvexProfile::new(c, g, values, w.lo, w.hi)
}

/// 𝓘-model envelope from Lelong data; infeasible when `ν₀ + ν_∞ > c`.
pub fn i_model_from_lelong(c: Q, nu0: Q, nu_inf: Q, grid: &[f64]) -> Result<ConvexProfile> {
    i_model_from_window(c, SlopeWindow::from_lelong(c, nu0, nu_inf)?, grid)
}

/// Largest convex `G ≤ c·f` with the slope window of `p`.
pub fn i_model_envelope(p: &ConvexProfile) -> Result<ConvexProfile> {
    i_model_from_window(p.class_mass(), p.window(), p.grid())
}

fn k_obstacle(c: Q, k: &WeightedSet) -> Obstacle {
    let cf = to_f64(&c);
    Obstacle {
        pts: k.samples().into_iter().map(|(t, v)| (t, cf * f_fs(t) + v)).collect(),
        // far out, c·f + v is a line of slope 0 (left) or c (right) to double precision
        left_slope: k.unbounded_left().then(Q::zero),
        right_slope: k.unbounded_right().then_some(c),
    }
}

/// Largest convex `G` with the window of `p` and `G ≤ c·f + v` on `K`; output
/// on `p`'s grid merged with the sample points of `K`.
pub fn weighted_envelope(p: &ConvexProfile, k: &WeightedSet, mode: EnvelopeMode) -> Result<ConvexProfile> {
    let _ = mode;
    let obs = k_obstacle(p.class_mass(), k);
    let ts: Vec<f64> = obs.pts.iter().map(|x| x.0).collect();
    biconjugate(&obs, p.window(), p.class_mass(), merge_grids(p.grid(), &ts))
}

/// Largest convex function with the window of `u` lying below the profile
/// `obstacle` on the whole line.
pub fn envelope_below_profile(u: &ConvexProfile, obstacle: &ConvexProfile) -> Result<ConvexProfile> {
    if u.class_mass() != obstacle.class_mass() {
        return Err(Error::input("class masses differ"));
    }
    let obs = Obstacle {
        pts: obstacle.grid().iter().copied().zip(obstacle.values().iter().copied()).collect(),
        left_slope: Some(obstacle.window().lo),
        right_slope: Some(obstacle.window().hi),
    };
    biconjugate(&obs, u.window(), u.class_mass(), merge_grids(u.grid(), obstacle.grid()))
}

/// Points where `F_p − F_q` changes sign, including tail crossings beyond
/// the grids, merged into both grids.
fn crossing_grid(p: &ConvexProfile, q: &ConvexProfile) -> Vec<f64> {
    let g = merge_grids(p.grid(), q.grid());
    let d = |t: f64| p.eval(t) - q.eval(t);
    let mut extra = vec![];
    for w in g.windows(2) {
        let (da, db) = (d(w[0]), d(w[1]));
        if da * db < 0.0 {
            let (mut a, mut b) = (w[0], w[1]);
            for _ in 0..80 {
                let m = 0.5 * (a + b);
                if d(m) * da > 0.0 {
                    a = m;
                } else {
                    b = m;
                }
            }
            extra.push(0.5 * (a + b));
        }
    }
    let cross = |s1: Q, a1: f64, s2: Q, a2: f64| (s1 != s2).then(|| (a2 - a1) / to_f64(&(s1 - s2)));
    let (t0, tn) = (g[0], g[g.len() - 1]);
    let (pm, qm) = (p.tail_minus(), q.tail_minus());
    if let Some(t) = cross(pm.slope, pm.intercept, qm.slope, qm.intercept) {
        if t < t0 {
            extra.push(t);
        }
    }
    let (pp, qp) = (p.tail_plus(), q.tail_plus());
    if let Some(t) = cross(pp.slope, pp.intercept, qp.slope, qp.intercept) {
        if t > tn {
            extra.push(t);
        }
    }
    merge_grids(&g, &extra)
}

/// Largest convex `G ≤ min(F_p, F_q)` with slopes in `[0, c]`.
///
/// Fails with [`Error::EmptyEnvelope`] when the minimum is steeper on the
/// left than on the right (e.g. two crossing lines), since then no line
/// fits below it.
pub fn rooftop(p: &ConvexProfile, q: &ConvexProfile) -> Result<ConvexProfile> {
    let c = p.class_mass();
    if c != q.class_mass() {
        return Err(Error::input("class masses differ"));
    }
    let g = crossing_grid(p, q);
    let obs = Obstacle {
        pts: g.iter().map(|&t| (t, p.eval(t).min(q.eval(t)))).collect(),
        left_slope: Some(qmax(p.window().lo, q.window().lo)),
        right_slope: Some(qmin(p.window().hi, q.window().hi)),
    };
    biconjugate(&obs, SlopeWindow { lo: Q::zero(), hi: c }, c, g)
}

/// `max(F_u, F_v)` as a profile (kinks at crossings are added to the grid).
pub fn pointwise_max(u: &ConvexProfile, v: &ConvexProfile) -> Result<ConvexProfile> {
    if u.class_mass() != v.class_mass() {
        return Err(Error::input("class masses differ"));
    }
    let g = crossing_grid(u, v);
    let values = g.iter().map(|&t| u.eval(t).max(v.eval(t))).collect();
    Ok(ConvexProfile::new(u.class_mass(), g, values, qmin(u.window().lo, v.window().lo), qmax(u.window().hi, v.window().hi))?
        .with_interpolation(u.interpolation().join(v.interpolation())))
}

/// `(1−λ)·F₀ + λ·F₁`; windows mix exactly.
pub fn mix_profiles(lambda: Q, u0: &ConvexProfile, u1: &ConvexProfile) -> Result<ConvexProfile> {
    if u0.class_mass() != u1.class_mass() {
        return Err(Error::input("class masses differ"));
    }
    if lambda < Q::zero() || lambda > Q::one() {
        return Err(Error::input("mixing parameter must lie in [0, 1]"));
    }
    let l = to_f64(&lambda);
    let g = merge_grids(u0.grid(), u1.grid());
    let values = g.iter().map(|&t| (1.0 - l) * u0.eval(t) + l * u1.eval(t)).collect();
    let w = u0.window().mix(lambda, &u1.window());
    Ok(ConvexProfile::new(u0.class_mass(), g, values, w.lo, w.hi)?.with_interpolation(u0.interpolation().join(u1.interpolation())))
}

/// Largest convex `H` with slopes in `[0, c]` such that
/// `H + (b−1)·F_v ≤ b·F_u` everywhere.
///
/// Requires `[u] ⪯ [v]` (nested windows) and `1 < b < m_v/(m_v − m_u)`;
/// outside that range the obstacle admits no such `H`.
pub fn p_shift(b: Q, u: &ConvexProfile, v: &ConvexProfile) -> Result<ConvexProfile> {
    let c = u.class_mass();
    if c != v.class_mass() {
        return Err(Error::input("class masses differ"));
    }
    if b <= Q::one() {
        return Err(Error::Feasibility(format!("b = {} must exceed 1", format_q(&b))));
    }
    let (wu, wv) = (u.window(), v.window());
    if !wu.is_inside(&wv) {
        return Err(Error::Feasibility("u must be at least as singular as v".into()));
    }
    let (mu, mv) = (u.mass(), v.mass());
    if mu != mv {
        let bound = mv / (mv - mu);
        if b >= bound {
            return Err(Error::Feasibility(format!(
                "b = {} violates b < m_v/(m_v - m_u) = {}",
                format_q(&b),
                format_q(&bound)
            )));
        }
    }
    let bm1 = b - Q::one();
    let (bf, bm1f) = (to_f64(&b), to_f64(&bm1));
    let g = merge_grids(u.grid(), v.grid());
    let obs = Obstacle {
        pts: g.iter().map(|&t| (t, bf * u.eval(t) - bm1f * v.eval(t))).collect(),
        left_slope: Some(b * wu.lo - bm1 * wv.lo),
        right_slope: Some(b * wu.hi - bm1 * wv.hi),
    };
    biconjugate(&obs, SlopeWindow { lo: Q::zero(), hi: c }, c, g)
}

/// Middle mixed-mass quantity `2·mass(max(u, v)) − mass(u) − mass(v)`, exact.
///
/// The pointwise maximum has window `[min s₋, max s₊]`, so this equals
/// `|Δs₋| + |Δs₊|`: a metric on singularity types (triangle constant 1).
pub fn divergence_exact(u: &ConvexProfile, v: &ConvexProfile) -> Result<Q> {
    if u.class_mass() != v.class_mass() {
        return Err(Error::input("class masses differ"));
    }
    let (wu, wv) = (u.window(), v.window());
    let max_mass = qmax(wu.hi, wv.hi) - qmin(wu.lo, wv.lo);
    Ok(Q::from_integer(2) * max_mass - u.mass() - v.mass())
}

pub fn divergence(u: &ConvexProfile, v: &ConvexProfile) -> Result<f64> {
    divergence_exact(u, v).map(|q| to_f64(&q))
}

/// Triangle-inequality constant for [`divergence`].
pub const DIVERGENCE_TRIANGLE_CONSTANT: f64 = 1.0;

/// Per-node Monge–Ampère masses (signed, nothing dropped).
pub(crate) fn node_masses(p: &ConvexProfile) -> Vec<f64> {
    let d = p.chord_slopes();
    let n = p.grid().len();
    let (s0, s1) = (to_f64(&p.window().lo), to_f64(&p.window().hi));
    (0..n)
        .map(|i| {
            let left = if i == 0 { s0 } else { d[i - 1] };
            let right = if i == n - 1 { s1 } else { d[i] };
            right - left
        })
        .collect()
}

/// A minorant `v ≤ u` with the same window whose curvature dominates a
/// multiple of the Fubini–Study curvature.
///
/// Recipe: `b = min(1, m_u / (2(c − m_u)))` (1 when `m_u = c`),
/// `h = p_shift(1+b, u, c·f)`, `F_v = (b·c·f + F_h)/(1+b)`. Returns `v` and
/// the measured `δ = min F_v''/f''` over `|t| ≤ 10` (node masses), which is
/// at least `b·c/(1+b)`.
pub fn kahler_current_minorant(u: &ConvexProfile) -> Result<(ConvexProfile, f64)> {
    let c = u.class_mass();
    let mu = u.mass();
    if mu <= Q::zero() {
        return Err(Error::Precondition("mass(u) must be positive".into()));
    }
    let one = Q::one();
    let b = if mu == c { one } else { qmin(one, mu / (Q::from_integer(2) * (c - mu))) };
    let base = base_profile(c, u.grid().to_vec())?;
    let h = p_shift(one + b, u, &base)?;
    let v = mix_profiles(one / (one + b), &base, &h)?;
    let fs = base_profile(Q::one(), v.grid().to_vec())?;
    let (wv, wf) = (node_masses(&v), node_masses(&fs));
    let delta = v
        .grid()
        .iter()
        .zip(wv.iter().zip(&wf))
        .filter(|(t, _)| t.abs() <= 10.0)
        .map(|(_, (a, b))| a / b)
        .fold(f64::INFINITY, f64::min);
    Ok((v, delta))
}

/// Tolerance for deciding that `G` touches the obstacle at a sample of K:
/// relative rounding plus the largest second difference of the obstacle
/// between neighbouring samples (the hull can sag that far below a sample).
pub fn contact_tolerance(env: &ConvexProfile, k: &WeightedSet) -> f64 {
    let cf = env.c_f64();
    let mut sag = 0.0f64;
    for comp in k.components() {
        let y: Vec<f64> = comp.grid.iter().zip(&comp.weight).map(|(&t, &v)| cf * f_fs(t) + v).collect();
        for i in 1..y.len().saturating_sub(1) {
            let g = &comp.grid;
            let (h0, h1) = (g[i] - g[i - 1], g[i + 1] - g[i]);
            let chord = (y[i - 1] * h1 + y[i + 1] * h0) / (h0 + h1);
            sag = sag.max((chord - y[i]).abs());
        }
    }
    1e-9 * env.scale() + sag
}

/// Mass of `ma_measure(env)` outside the contact set
/// `{t ∈ K : |G(t) − c·f(t) − v(t)| ≤ tol}`.
pub fn contact_leakage(env: &ConvexProfile, k: &WeightedSet, tol: f64) -> f64 {
    let mu: RadialMeasure = ma_measure(env);
    let cf = env.c_f64();
    mu.atomic_mass_where(|t| match k.weight_at(t) {
        Some(v) => (env.eval(t) - cf * f_fs(t) - v).abs() > tol,
        None => true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::uniform_grid;
    use crate::rational::{q, qi};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::LN_2;

    fn grid() -> Vec<f64> {
        uniform_grid(-40.0, 40.0, 8001)
    }

    fn base() -> ConvexProfile {
        base_profile(qi(1), grid()).unwrap()
    }

    #[test]
    fn i_model_examples() {
        let b = base();
        let e = i_model_envelope(&b).unwrap();
        for (x, y) in e.values().iter().zip(b.values()) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-15);
        }
        let p = i_model_from_lelong(qi(1), q(1, 3), q(1, 4), &grid()).unwrap();
        assert_abs_diff_eq!(p.eval(0.0), LN_2, epsilon = 1e-15);
        assert_eq!(p.lelong(), (q(1, 3), q(1, 4)));
        let flat = i_model_from_lelong(qi(1), q(1, 2), q(1, 2), &grid()).unwrap();
        for &t in &[-3.0, 0.0, 2.5] {
            assert_abs_diff_eq!(flat.eval(t), t / 2.0 + LN_2, epsilon = 1e-14);
        }
        assert_eq!(flat.mass(), qi(0));
        assert!(matches!(i_model_from_lelong(qi(1), q(3, 5), q(1, 2), &grid()), Err(Error::InfeasibleClass)));
    }

    #[test]
    fn i_model_matches_brute_force_sup() {
        // G(t) = sup_{s ∈ window} (s t − φ*(s)) by brute force over s
        let w = SlopeWindow { lo: q(1, 3), hi: q(3, 4) };
        let vals = i_model_values(qi(1), w, &[-3.0, -0.2, 0.7, 4.0]);
        for (&t, &g) in [-3.0, -0.2, 0.7, 4.0].iter().zip(&vals) {
            let brute = (0..=100_000)
                .map(|i| 1.0 / 3.0 + (0.75 - 1.0 / 3.0) * i as f64 / 100_000.0)
                .map(|s| s * t - fs_conjugate(1.0, s))
                .fold(f64::NEG_INFINITY, f64::max);
            assert_abs_diff_eq!(g, brute, epsilon = 1e-9);
        }
    }

    #[test]
    fn weighted_envelope_single_circle() {
        let b = base();
        for v in [0.0, -1.0] {
            let k = WeightedSet::point(0.0, v).unwrap();
            let g = weighted_envelope(&b, &k, EnvelopeMode::IOrder).unwrap();
            for (&t, &y) in g.grid().iter().zip(g.values()) {
                assert_abs_diff_eq!(y, t.max(0.0) + LN_2 + v, epsilon = 1e-13);
            }
            // c_K(s) = −log 2 − v for every s
            for s in [0.0, 0.3, 1.0] {
                assert_abs_diff_eq!(restricted_legendre(&[(0.0, LN_2 + v)], s), -LN_2 - v);
            }
        }
    }

    #[test]
    fn weighted_envelope_whole_line_is_i_model() {
        let u = ConvexProfile::from_lines(qi(1), grid(), &[(q(1, 3), 0.0), (q(3, 4), -0.4)]).unwrap();
        let k = WeightedSet::whole_line(grid(), |_| 0.0).unwrap();
        let a = weighted_envelope(&u, &k, EnvelopeMode::IOrder).unwrap();
        let b = weighted_envelope(&u, &k, EnvelopeMode::FlatOrder).unwrap();
        let p = i_model_envelope(&u).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.window(), p.window());
        for &t in a.grid() {
            assert!((a.eval(t) - p.eval(t)).abs() < 2e-6, "t = {t}");
        }
    }

    #[test]
    fn rooftop_examples() {
        let b = base();
        let r = rooftop(&b, &b).unwrap();
        for (x, y) in r.values().iter().zip(b.values()) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-13);
        }
        let lower = b.shifted(-1.0);
        let r = rooftop(&b, &lower).unwrap();
        for &t in b.grid() {
            assert_abs_diff_eq!(r.eval(t), lower.eval(t), epsilon = 1e-13);
        }
        // two lines crossing at 0: the minimum is steeper on the left
        let g = uniform_grid(-5.0, 5.0, 101);
        let l1 = ConvexProfile::from_lines(qi(1), g.clone(), &[(q(1, 3), 0.0)]).unwrap();
        let l2 = ConvexProfile::from_lines(qi(1), g, &[(q(2, 3), 0.0)]).unwrap();
        assert!(matches!(rooftop(&l1, &l2), Err(Error::EmptyEnvelope { .. })));
    }

    #[test]
    fn rooftop_of_models_is_model() {
        let p = i_model_from_lelong(qi(1), q(1, 3), q(1, 4), &grid()).unwrap();
        let q2 = i_model_from_lelong(qi(1), q(1, 5), q(1, 2), &grid()).unwrap();
        let r = rooftop(&p, &q2).unwrap();
        assert_eq!(r.window(), SlopeWindow { lo: q(1, 3), hi: q(1, 2) });
        let rr = i_model_envelope(&r).unwrap();
        for &t in r.grid() {
            assert!((rr.eval(t) - r.eval(t)).abs() < 1e-8, "t = {t}");
        }
    }

    #[test]
    fn p_shift_examples() {
        let u = i_model_from_lelong(qi(1), q(1, 4), q(1, 4), &grid()).unwrap();
        let h = p_shift(qi(2), &u, &u).unwrap();
        assert_eq!(h.lelong(), u.lelong());
        for &t in u.grid() {
            assert!((h.eval(t) - u.eval(t)).abs() < 1e-12);
        }
        let v = base();
        let h = p_shift(q(19, 10), &u, &v).unwrap();
        for &t in h.grid() {
            assert!(h.eval(t) + 0.9 * v.eval(t) <= 1.9 * u.eval(t) + 1e-12 * (1.0 + t.abs()), "t = {t}");
        }
        // between nodes the hull is linear: it may exceed the curved obstacle
        // by h²/8 · sup|obstacle''| = 1e-4/8 · 1.9/4
        let slack = 1e-4 / 8.0 * 1.9 / 4.0;
        let fine = uniform_grid(-60.0, 60.0, 48_001);
        for &t in &fine {
            let lhs = h.eval(t) + 0.9 * v.eval(t);
            assert!(lhs <= 1.9 * u.eval(t) + slack + 1e-12 * (1.0 + t.abs()), "t = {t}");
        }
        assert!(matches!(p_shift(q(21, 10), &u, &v), Err(Error::Feasibility(_))));
        assert!(matches!(p_shift(qi(1), &u, &v), Err(Error::Feasibility(_))));
        assert!(matches!(p_shift(q(3, 2), &v, &u), Err(Error::Feasibility(_))));
    }

    #[test]
    fn divergence_examples() {
        let b = base();
        assert_eq!(divergence(&b, &b).unwrap(), 0.0);
        let kink = ConvexProfile::from_lines(qi(1), grid(), &[(qi(0), LN_2), (qi(1), LN_2)]).unwrap();
        assert_eq!(divergence(&b, &kink).unwrap(), 0.0);
        let half = i_model_from_lelong(qi(1), q(1, 2), qi(0), &grid()).unwrap();
        assert_eq!(divergence_exact(&b, &half).unwrap(), q(1, 2));
        let m = pointwise_max(&b, &half).unwrap();
        assert_eq!(qi(2) * m.mass() - b.mass() - half.mass(), q(1, 2));
    }

    #[test]
    fn kahler_minorant_examples() {
        let b = base();
        let (v, delta) = kahler_current_minorant(&b).unwrap();
        for &t in b.grid() {
            assert!((v.eval(t) - b.eval(t)).abs() < 1e-12);
        }
        assert!((delta - 1.0).abs() < 1e-6, "delta = {delta}");
        let u = ConvexProfile::from_lines(qi(1), grid(), &[(q(1, 3), 0.0), (q(3, 4), -0.4)]).unwrap();
        let (v, delta) = kahler_current_minorant(&u).unwrap();
        assert_eq!(v.lelong(), u.lelong());
        for &t in v.grid() {
            assert!(v.eval(t) <= u.eval(t) + 1e-12);
        }
        // b = (5/12)/(2·7/12) = 5/14, guaranteed δ ≥ b/(1+b) = 5/19
        assert!(delta >= 5.0 / 19.0 - 1e-6, "delta = {delta}");
        let line = ConvexProfile::from_lines(qi(1), grid(), &[(q(1, 2), 0.0)]).unwrap();
        assert!(matches!(kahler_current_minorant(&line), Err(Error::Precondition(_))));
    }

    #[test]
    fn contact_set_of_single_circle() {
        let b = base();
        let k = WeightedSet::interval(-1.0, 1.0, 201, |_| 0.0).unwrap();
        let g = weighted_envelope(&b, &k, EnvelopeMode::IOrder).unwrap();
        let tol = contact_tolerance(&g, &k);
        assert!(contact_leakage(&g, &k, tol) < 1e-12);
        // boundary atoms carry σ(−1) each
        let mu = ma_measure(&g);
        assert_abs_diff_eq!(mu.total_mass(), 1.0, epsilon = 1e-12);
        let left = mu.atomic_mass_where(|t| t == -1.0);
        assert!((left - sigma(-1.0)).abs() < 5e-3, "left atom {left}");
    }
}
