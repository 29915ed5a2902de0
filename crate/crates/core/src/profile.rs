//! Convex profiles: S¹-invariant θ-psh potentials on the projective line.
//!
//! A profile stores the *full* potential `F = c·f + u` on a finite grid and is
//! exactly affine beyond it. Between nodes a profile is read either linearly
//! (envelopes, which are lower hulls of samples) or relative to the
//! Fubini–Study profile (`c·f` plus the linear interpolant of `F − c·f`), so
//! that closed-form profiles such as the base are reproduced everywhere.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fs::{f_fs, sigma};
use crate::measure::{Atom, RadialMeasure};
use crate::rational::{format_q, qmax, qmin, serde_q, to_f64, Q};

/// Relative slack allowed on discrete convexity.
pub const CONVEXITY_TOL: f64 = 1e-9;

/// Chords agreeing with a neighbour to this (times `max(1, c)`) mark a cell
/// inside a linear piece, which is then interpolated linearly; elsewhere
/// interpolation is relative to `c·f`.
pub const LINEAR_CELL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tail {
    #[serde(with = "serde_q")]
    pub slope: Q,
    pub intercept: f64,
}

impl Tail {
    pub fn at(&self, t: f64) -> f64 {
        to_f64(&self.slope) * t + self.intercept
    }
}

/// Closed slope interval `[lo, hi]` inside `[0, c]`; the radial avatar of an
/// 𝓘-singularity class via `(ν₀, ν_∞) = (lo, c − hi)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlopeWindow {
    #[serde(with = "serde_q")]
    pub lo: Q,
    #[serde(with = "serde_q")]
    pub hi: Q,
}

impl SlopeWindow {
    pub fn new(lo: Q, hi: Q, c: Q) -> Result<Self> {
        if lo.is_negative() || lo > hi || hi > c {
            return Err(Error::Window { lo: format_q(&lo), hi: format_q(&hi), c: format_q(&c) });
        }
        Ok(SlopeWindow { lo, hi })
    }

    pub fn from_lelong(c: Q, nu0: Q, nu_inf: Q) -> Result<Self> {
        if nu0.is_negative() || nu_inf.is_negative() {
            return Err(Error::input("negative Lelong number"));
        }
        if nu0 + nu_inf > c {
            return Err(Error::InfeasibleClass);
        }
        Self::new(nu0, c - nu_inf, c)
    }

    pub fn width(&self) -> Q {
        self.hi - self.lo
    }

    /// `self ⊆ other`: `self` is at least as singular.
    pub fn is_inside(&self, other: &SlopeWindow) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn intersect(&self, other: &SlopeWindow) -> Option<SlopeWindow> {
        let lo = qmax(self.lo, other.lo);
        let hi = qmin(self.hi, other.hi);
        (lo <= hi).then_some(SlopeWindow { lo, hi })
    }

    /// `(1−λ)·self + λ·other`, exactly.
    pub fn mix(&self, lambda: Q, other: &SlopeWindow) -> SlopeWindow {
        let one = Q::from_integer(1);
        SlopeWindow {
            lo: (one - lambda) * self.lo + lambda * other.lo,
            hi: (one - lambda) * self.hi + lambda * other.hi,
        }
    }
}

/// How a profile is read between grid nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Interpolation {
    /// Relative to `c·f`, raised where needed to stay convex.
    #[default]
    FsRelative,
    /// Piecewise linear.
    Linear,
}

impl Interpolation {
    pub(crate) fn join(self, other: Interpolation) -> Interpolation {
        if self == other {
            self
        } else {
            Interpolation::FsRelative
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProfileRepr", into = "ProfileRepr")]
pub struct ConvexProfile {
    class_mass: Q,
    grid: Vec<f64>,
    values: Vec<f64>,
    tail_minus: Tail,
    tail_plus: Tail,
    interpolation: Interpolation,
}

#[derive(Serialize, Deserialize)]
struct ProfileRepr {
    #[serde(with = "serde_q")]
    class_mass: Q,
    grid: Vec<f64>,
    values: Vec<f64>,
    tail_minus: Tail,
    tail_plus: Tail,
    #[serde(default)]
    interpolation: Interpolation,
}

impl TryFrom<ProfileRepr> for ConvexProfile {
    type Error = Error;

    fn try_from(r: ProfileRepr) -> Result<Self> {
        let p = ConvexProfile::new(r.class_mass, r.grid, r.values, r.tail_minus.slope, r.tail_plus.slope)?
            .with_interpolation(r.interpolation);
        let tol = 1e-9 * p.scale();
        if (p.tail_minus.intercept - r.tail_minus.intercept).abs() > tol
            || (p.tail_plus.intercept - r.tail_plus.intercept).abs() > tol
        {
            return Err(Error::input("tail intercepts do not touch the boundary values"));
        }
        Ok(p)
    }
}

impl From<ConvexProfile> for ProfileRepr {
    fn from(p: ConvexProfile) -> Self {
        ProfileRepr {
            class_mass: p.class_mass,
            grid: p.grid,
            values: p.values,
            tail_minus: p.tail_minus,
            tail_plus: p.tail_plus,
            interpolation: p.interpolation,
        }
    }
}

pub(crate) fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::input("empty grid"));
    }
    if grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::input("grid contains non-finite values"));
    }
    if let Some(i) = grid.windows(2).position(|w| w[1] <= w[0]) {
        return Err(Error::input(format!("grid not strictly ascending at index {}", i + 1)));
    }
    Ok(())
}

/// `n` equally spaced points from `lo` to `hi` inclusive.
pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => {
            let h = (hi - lo) / (n - 1) as f64;
            let mut g: Vec<f64> = (0..n).map(|i| lo + i as f64 * h).collect();
            g[n - 1] = hi;
            g
        }
    }
}

/// Sorted union of grids, merging points closer than a relative 1e-12.
pub fn merge_grids(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut all: Vec<f64> = a.iter().chain(b).copied().collect();
    all.sort_by(|x, y| x.total_cmp(y));
    let mut out: Vec<f64> = Vec::with_capacity(all.len());
    for t in all {
        match out.last() {
            Some(&l) if (t - l).abs() <= 1e-12 * l.abs().max(1.0) => {}
            _ => out.push(t),
        }
    }
    out
}

impl ConvexProfile {
    /// Builds a profile from node values; tail intercepts are fixed by the
    /// boundary values so the tails touch the grid exactly.
    pub fn new(c: Q, grid: Vec<f64>, values: Vec<f64>, s_minus: Q, s_plus: Q) -> Result<Self> {
        if c <= Q::zero() {
            return Err(Error::input("class mass must be positive"));
        }
        check_grid(&grid)?;
        if values.len() != grid.len() {
            return Err(Error::input("grid and values differ in length"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::input("non-finite profile value"));
        }
        SlopeWindow::new(s_minus, s_plus, c)?;
        let n = grid.len();
        let tail_minus = Tail { slope: s_minus, intercept: values[0] - to_f64(&s_minus) * grid[0] };
        let tail_plus = Tail { slope: s_plus, intercept: values[n - 1] - to_f64(&s_plus) * grid[n - 1] };
        let p = ConvexProfile { class_mass: c, grid, values, tail_minus, tail_plus, interpolation: Interpolation::default() };
        p.check_convexity()?;
        Ok(p)
    }

    pub fn from_fn(c: Q, grid: Vec<f64>, f: impl Fn(f64) -> f64, s_minus: Q, s_plus: Q) -> Result<Self> {
        let values = grid.iter().map(|&t| f(t)).collect();
        Self::new(c, grid, values, s_minus, s_plus)
    }

    /// Maximum of affine functions `s·t + a`. The grid must contain every
    /// kink, otherwise the tails would not be exact.
    pub fn from_lines(c: Q, grid: Vec<f64>, lines: &[(Q, f64)]) -> Result<Self> {
        if lines.is_empty() {
            return Err(Error::input("no lines"));
        }
        let eval = |t: f64| lines.iter().map(|(s, a)| to_f64(s) * t + a).fold(f64::NEG_INFINITY, f64::max);
        let s_minus = lines.iter().map(|l| l.0).min().unwrap();
        let s_plus = lines.iter().map(|l| l.0).max().unwrap();
        let p = Self::from_fn(c, grid, eval, s_minus, s_plus)?.with_interpolation(Interpolation::Linear);
        // left of t0 only the min-slope line may be active
        let t0 = p.grid[0];
        let best_left = lines.iter().filter(|l| l.0 == s_minus).map(|l| l.1).fold(f64::NEG_INFINITY, f64::max);
        if (to_f64(&s_minus) * t0 + best_left - p.values[0]).abs() > 1e-12 * p.scale() {
            return Err(Error::input("grid does not contain every kink of the line maximum"));
        }
        let tn = p.grid[p.grid.len() - 1];
        let best_right = lines.iter().filter(|l| l.0 == s_plus).map(|l| l.1).fold(f64::NEG_INFINITY, f64::max);
        if (to_f64(&s_plus) * tn + best_right - p.values[p.values.len() - 1]).abs() > 1e-12 * p.scale() {
            return Err(Error::input("grid does not contain every kink of the line maximum"));
        }
        Ok(p)
    }

    /// Node gaps below chords (and below the tail lines at the two ends).
    fn check_convexity(&self) -> Result<()> {
        let tol = CONVEXITY_TOL * self.scale();
        let (g, v) = (&self.grid, &self.values);
        let n = g.len();
        for i in 1..n.saturating_sub(1) {
            let (h0, h1) = (g[i] - g[i - 1], g[i + 1] - g[i]);
            let chord = (v[i - 1] * h1 + v[i + 1] * h0) / (h0 + h1);
            let gap = chord - v[i];
            if gap < -tol {
                return Err(Error::Convexity { index: i, gap });
            }
        }
        if n >= 2 {
            // the tails are supporting lines of the first and last chord
            let gap0 = v[1] - self.tail_minus.at(g[1]);
            if gap0 < -tol {
                return Err(Error::Convexity { index: 0, gap: gap0 });
            }
            let gap1 = v[n - 2] - self.tail_plus.at(g[n - 2]);
            if gap1 < -tol {
                return Err(Error::Convexity { index: n - 1, gap: gap1 });
            }
        }
        Ok(())
    }

    pub fn with_interpolation(mut self, interpolation: Interpolation) -> Self {
        self.interpolation = interpolation;
        self
    }

    pub fn interpolation(&self) -> Interpolation {
        self.interpolation
    }

    pub fn class_mass(&self) -> Q {
        self.class_mass
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn tail_minus(&self) -> Tail {
        self.tail_minus
    }

    pub fn tail_plus(&self) -> Tail {
        self.tail_plus
    }

    pub fn window(&self) -> SlopeWindow {
        SlopeWindow { lo: self.tail_minus.slope, hi: self.tail_plus.slope }
    }

    pub fn lelong(&self) -> (Q, Q) {
        (self.tail_minus.slope, self.class_mass - self.tail_plus.slope)
    }

    /// Non-pluripolar mass `s₊ − s₋`, exact.
    pub fn mass(&self) -> Q {
        self.tail_plus.slope - self.tail_minus.slope
    }

    /// Magnitude used to make tolerances relative.
    pub fn scale(&self) -> f64 {
        self.values.iter().fold(1.0f64, |m, v| m.max(v.abs()))
    }

    pub fn c_f64(&self) -> f64 {
        to_f64(&self.class_mass)
    }

    /// `F(t)` anywhere on the line.
    pub fn eval(&self, t: f64) -> f64 {
        let g = &self.grid;
        let n = g.len();
        if t <= g[0] {
            return self.tail_minus.at(t);
        }
        if t >= g[n - 1] {
            return self.tail_plus.at(t);
        }
        let i = g.partition_point(|&x| x <= t) - 1;
        if t == g[i] {
            return self.values[i];
        }
        let v = &self.values;
        if self.interpolation == Interpolation::Linear || self.is_linear_cell(i) {
            // the cell continues a linear piece
            return v[i] + (v[i + 1] - v[i]) / (g[i + 1] - g[i]) * (t - g[i]);
        }
        let c = self.c_f64();
        let r = |j: usize| v[j] - c * f_fs(g[j]);
        let w = (t - g[i]) / (g[i + 1] - g[i]);
        let smooth = c * f_fs(t) + r(i) + w * (r(i + 1) - r(i));
        // raised to the node support lines so neighbouring cells glue convexly
        let (s0, s1) = (self.node_slope(i), self.node_slope(i + 1));
        smooth.max(v[i] + s0 * (t - g[i])).max(v[i + 1] + s1 * (t - g[i + 1]))
    }

    /// Whether cell `i` has the same chord slope as a neighbouring cell (or
    /// the adjacent tail): such cells are read as linear.
    fn is_linear_cell(&self, i: usize) -> bool {
        let (g, v) = (&self.grid, &self.values);
        let n = g.len();
        let chord = |j: usize| (v[j + 1] - v[j]) / (g[j + 1] - g[j]);
        let d = chord(i);
        let dl = if i == 0 { to_f64(&self.tail_minus.slope) } else { chord(i - 1) };
        let dr = if i + 2 == n { to_f64(&self.tail_plus.slope) } else { chord(i + 1) };
        let tol = LINEAR_CELL_TOL * self.c_f64().max(1.0);
        (d - dl).abs() <= tol || (d - dr).abs() <= tol
    }

    /// Support slope at node `j`. Inside `[L, R]` (one-sided derivatives of
    /// the FS-relative pieces) the support lines never bind; when the pieces
    /// meet non-convexly the slope is split between them, kept inside the
    /// adjacent chords.
    fn node_slope(&self, j: usize) -> f64 {
        let (g, v) = (&self.grid, &self.values);
        let n = g.len();
        let c = self.c_f64();
        let r = |k: usize| v[k] - c * f_fs(g[k]);
        let (dl, left) = if j == 0 {
            let s = to_f64(&self.tail_minus.slope);
            (s, s)
        } else {
            let h = g[j] - g[j - 1];
            let d = (v[j] - v[j - 1]) / h;
            (d, if self.is_linear_cell(j - 1) { d } else { c * sigma(g[j]) + (r(j) - r(j - 1)) / h })
        };
        let (dr, right) = if j + 1 == n {
            let s = to_f64(&self.tail_plus.slope);
            (s, s)
        } else {
            let h = g[j + 1] - g[j];
            let d = (v[j + 1] - v[j]) / h;
            (d, if self.is_linear_cell(j) { d } else { c * sigma(g[j]) + (r(j + 1) - r(j)) / h })
        };
        if left <= right {
            return right.min(dr.max(dl));
        }
        let (lo, hi) = (dl.max(right), dr.min(left));
        (0.5 * (left + right)).clamp(lo.min(hi), hi.max(lo))
    }

    /// The θ-psh potential `u = F − c·f`.
    pub fn potential(&self, t: f64) -> f64 {
        self.eval(t) - self.c_f64() * f_fs(t)
    }

    pub fn shifted(&self, a: f64) -> ConvexProfile {
        let mut p = self.clone();
        p.values.iter_mut().for_each(|v| *v += a);
        p.tail_minus.intercept += a;
        p.tail_plus.intercept += a;
        p
    }

    /// Re-samples onto a grid (which must contain this profile's kinks to stay
    /// exact), keeping the tails.
    pub fn resample(&self, grid: Vec<f64>) -> Result<ConvexProfile> {
        let values = grid.iter().map(|&t| self.eval(t)).collect();
        Ok(ConvexProfile::new(self.class_mass, grid, values, self.tail_minus.slope, self.tail_plus.slope)?
            .with_interpolation(self.interpolation))
    }

    /// Chord slopes between consecutive nodes.
    pub fn chord_slopes(&self) -> Vec<f64> {
        self.grid
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(g, v)| (v[1] - v[0]) / (g[1] - g[0]))
            .collect()
    }

    pub fn same_tails(&self, other: &ConvexProfile) -> bool {
        self.class_mass == other.class_mass && self.window() == other.window()
    }
}

/// `c·log(1 + e^t)` on the grid; tails `(0, 0)` and `(c, 0)`.
pub fn base_profile(c: Q, grid: Vec<f64>) -> Result<ConvexProfile> {
    let cf = to_f64(&c);
    let mut p = ConvexProfile::from_fn(c, grid, |t| cf * f_fs(t), Q::zero(), c)?;
    // the true tails of c·f are the asymptotes through the origin; on any
    // reasonable grid they touch to double precision
    let (t0, tn) = (p.grid[0], p.grid[p.grid.len() - 1]);
    if cf * f_fs(t0) < 1e-15 * p.scale() && cf * (f_fs(tn) - tn) < 1e-15 * p.scale() {
        p.tail_minus.intercept = 0.0;
        p.tail_plus.intercept = 0.0;
    }
    Ok(p)
}

pub fn lelong(p: &ConvexProfile) -> (Q, Q) {
    p.lelong()
}

/// Discrete second derivative of `F`: one atom per node, weight equal to the
/// jump of chord slopes there (the first and last jumps are measured against
/// the tail slopes). Total mass telescopes to `s₊ − s₋`.
pub fn ma_measure(p: &ConvexProfile) -> RadialMeasure {
    let d = p.chord_slopes();
    let n = p.grid.len();
    let (s0, s1) = (to_f64(&p.tail_minus.slope), to_f64(&p.tail_plus.slope));
    let drop_below = 1e-14 * p.c_f64().max(1.0);
    let mut atoms = Vec::with_capacity(n);
    for i in 0..n {
        let left = if i == 0 { s0 } else { d[i - 1] };
        let right = if i == n - 1 { s1 } else { d[i] };
        let w = right - left;
        if w > drop_below {
            atoms.push(Atom { t: p.grid[i], weight: w });
        }
    }
    RadialMeasure::from_atoms(atoms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fs::fs_density;
    use crate::rational::{q, qi};
    use approx::assert_abs_diff_eq;

    fn grid() -> Vec<f64> {
        uniform_grid(-40.0, 40.0, 8001)
    }

    #[test]
    fn base_profile_values() {
        let p = base_profile(qi(1), grid()).unwrap();
        assert_abs_diff_eq!(p.eval(0.0), std::f64::consts::LN_2, epsilon = 1e-15);
        assert_eq!(p.lelong(), (qi(0), qi(0)));
        assert_eq!(p.mass(), qi(1));
        let p2 = base_profile(qi(2), grid()).unwrap();
        assert_abs_diff_eq!(p2.eval(0.0), 2.0 * std::f64::consts::LN_2, epsilon = 1e-15);
        // exact between nodes
        assert_abs_diff_eq!(p.eval(0.123), f_fs(0.123), epsilon = 1e-15);
        assert_abs_diff_eq!(p.eval(-55.0), 0.0);
        assert_abs_diff_eq!(p.eval(55.0), 55.0);
    }

    #[test]
    fn rejects_bad_grids_and_windows() {
        assert!(base_profile(qi(1), vec![0.0, 0.0]).is_err());
        assert!(base_profile(qi(1), vec![1.0, 0.0]).is_err());
        assert!(base_profile(qi(1), vec![]).is_err());
        let r = ConvexProfile::new(qi(1), vec![0.0, 1.0], vec![0.0, 0.5], q(3, 4), q(1, 2));
        assert!(matches!(r, Err(Error::Window { .. })));
        let r = ConvexProfile::new(qi(1), vec![0.0, 1.0], vec![0.0, 0.5], q(1, 2), q(3, 2));
        assert!(matches!(r, Err(Error::Window { .. })));
    }

    #[test]
    fn detects_concavity() {
        let g = uniform_grid(-1.0, 1.0, 21);
        let r = ConvexProfile::from_fn(qi(1), g, |t| -t * t, qi(0), qi(1));
        assert!(matches!(r, Err(Error::Convexity { .. })));
    }

    #[test]
    fn tails_touch_boundary() {
        let g = uniform_grid(-2.0, 2.0, 41);
        let p = ConvexProfile::from_lines(qi(1), g, &[(q(1, 3), 0.0), (q(3, 4), 0.1)]).unwrap();
        assert_abs_diff_eq!(p.tail_minus().at(-2.0), p.values()[0]);
        assert_abs_diff_eq!(p.tail_plus().at(2.0), *p.values().last().unwrap());
        assert_eq!(p.lelong(), (q(1, 3), q(1, 4)));
        assert_abs_diff_eq!(p.eval(-10.0), -10.0 / 3.0, epsilon = 1e-14);
        // a kink outside the grid is refused
        let g = uniform_grid(-0.5, 0.5, 11);
        assert!(ConvexProfile::from_lines(qi(1), g, &[(qi(0), 0.0), (qi(1), -2.0)]).is_err());
    }

    #[test]
    fn ma_of_base_is_logistic_density() {
        let p = base_profile(qi(1), grid()).unwrap();
        let mu = ma_measure(&p);
        // rounding atoms of either sign are dropped in the far tails
        assert_abs_diff_eq!(mu.total_mass(), 1.0, epsilon = 1e-10);
        for a in mu.atoms() {
            if a.t.abs() < 10.0 {
                let dens = a.weight / 0.01;
                assert!((dens - fs_density(a.t)).abs() < 1e-5, "t={} dens={}", a.t, dens);
            }
        }
    }

    #[test]
    fn ma_of_kink_and_line() {
        let g = uniform_grid(-3.0, 3.0, 61);
        let ln2 = std::f64::consts::LN_2;
        let p = ConvexProfile::from_lines(qi(1), g.clone(), &[(qi(0), ln2), (qi(1), ln2)]).unwrap();
        let mu = ma_measure(&p);
        assert_eq!(mu.atoms().len(), 1);
        assert_abs_diff_eq!(mu.atoms()[0].t, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(mu.atoms()[0].weight, 1.0, epsilon = 1e-12);
        let line = ConvexProfile::from_lines(qi(1), g, &[(q(1, 2), 0.3)]).unwrap();
        assert_eq!(ma_measure(&line).total_mass(), 0.0);
    }

    #[test]
    fn json_round_trip_and_validation() {
        let g = uniform_grid(-2.0, 2.0, 5);
        let p = ConvexProfile::from_lines(qi(1), g, &[(q(1, 3), 0.0), (q(3, 4), 0.1)]).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert!(s.contains("\"1/3\""));
        let back: ConvexProfile = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        let bad = s.replace("\"values\":[", "\"values\":[5.0,").replace("\"grid\":[", "\"grid\":[-3.0,");
        let err = serde_json::from_str::<ConvexProfile>(&bad).unwrap_err();
        assert!(err.to_string().contains("convexity"), "{err}");
    }

    #[test]
    fn interpolation_is_serialized_and_defaults_to_fs_relative() {
        let g = uniform_grid(-2.0, 2.0, 5);
        let p = ConvexProfile::from_lines(qi(1), g.clone(), &[(q(1, 3), 0.0), (q(3, 4), 0.1)]).unwrap();
        assert_eq!(p.interpolation(), Interpolation::Linear);
        let s = serde_json::to_string(&p).unwrap();
        assert!(s.contains("\"linear\""));
        let stripped = s.replace(",\"interpolation\":\"linear\"", "");
        let back: ConvexProfile = serde_json::from_str(&stripped).unwrap();
        assert_eq!(back.interpolation(), Interpolation::FsRelative);
        // a base profile resampled onto a coarser grid stays exact off-grid
        let b = base_profile(qi(1), uniform_grid(-10.0, 10.0, 41)).unwrap();
        assert_abs_diff_eq!(b.eval(0.123), f_fs(0.123), epsilon = 1e-12);
    }

    #[test]
    fn window_algebra() {
        let c = qi(1);
        let a = SlopeWindow::from_lelong(c, q(1, 3), q(1, 4)).unwrap();
        assert_eq!(a, SlopeWindow { lo: q(1, 3), hi: q(3, 4) });
        assert!(matches!(SlopeWindow::from_lelong(c, q(3, 5), q(1, 2)), Err(Error::InfeasibleClass)));
        let b = SlopeWindow::new(qi(0), qi(1), c).unwrap();
        assert!(a.is_inside(&b));
        assert_eq!(a.mix(q(1, 2), &b), SlopeWindow { lo: q(1, 6), hi: q(7, 8) });
    }
}
