//! Measures on the `t`-line: a density part plus finitely many atoms.
//!
//! Monge–Ampère measures of profiles are purely atomic (one atom per grid
//! node), Bergman measures carry a piecewise-constant density on quadrature
//! panels, and reference measures are usually Fubini–Study restricted to an
//! interval.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fs::{fs_density, sigma};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub t: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Density {
    None,
    /// `weight · f''(t)` on `[lo, hi]`; `null` ends are infinite.
    FubiniStudy { weight: f64, lo: Option<f64>, hi: Option<f64> },
    /// One value per cell `[knots[i], knots[i+1])`.
    PiecewiseConstant { knots: Vec<f64>, values: Vec<f64> },
    /// Values at the knots, linear in between, zero outside.
    PiecewiseLinear { knots: Vec<f64>, values: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MeasureRepr", into = "MeasureRepr")]
pub struct RadialMeasure {
    density: Density,
    atoms: Vec<Atom>,
}

#[derive(Serialize, Deserialize)]
struct MeasureRepr {
    density: Density,
    atoms: Vec<Atom>,
}

impl TryFrom<MeasureRepr> for RadialMeasure {
    type Error = Error;
    fn try_from(r: MeasureRepr) -> Result<Self> {
        RadialMeasure::new(r.density, r.atoms)
    }
}

impl From<RadialMeasure> for MeasureRepr {
    fn from(m: RadialMeasure) -> Self {
        MeasureRepr { density: m.density, atoms: m.atoms }
    }
}

fn fs_mass(lo: Option<f64>, hi: Option<f64>, t: f64) -> f64 {
    // ∫_{lo}^{min(t,hi)} f'' = σ(min(t, hi)) − σ(lo)
    let upper = hi.map_or(t, |h| t.min(h));
    if lo.is_some_and(|l| upper <= l) {
        return 0.0;
    }
    (sigma(upper) - lo.map_or(0.0, sigma)).max(0.0)
}

impl Density {
    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::input(m.to_string()));
        match self {
            Density::None => Ok(()),
            Density::FubiniStudy { weight, lo, hi } => {
                if !(weight.is_finite() && *weight >= 0.0) {
                    return bad("Fubini-Study weight must be finite and nonnegative");
                }
                if let (Some(a), Some(b)) = (lo, hi) {
                    if !(a < b) {
                        return bad("Fubini-Study support must have lo < hi");
                    }
                }
                if lo.is_some_and(|x| !x.is_finite()) || hi.is_some_and(|x| !x.is_finite()) {
                    return bad("use null for infinite support ends");
                }
                Ok(())
            }
            Density::PiecewiseConstant { knots, values } | Density::PiecewiseLinear { knots, values } => {
                crate::profile::check_grid(knots)?;
                let want = match self {
                    Density::PiecewiseConstant { .. } => knots.len().saturating_sub(1),
                    _ => knots.len(),
                };
                if values.len() != want || knots.len() < 2 {
                    return bad("density knots and values have inconsistent lengths");
                }
                if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
                    return bad("density values must be finite and nonnegative");
                }
                Ok(())
            }
        }
    }

    pub fn at(&self, t: f64) -> f64 {
        match self {
            Density::None => 0.0,
            Density::FubiniStudy { weight, lo, hi } => {
                if lo.is_some_and(|l| t < l) || hi.is_some_and(|h| t > h) {
                    0.0
                } else {
                    weight * fs_density(t)
                }
            }
            Density::PiecewiseConstant { knots, values } => {
                let n = knots.len();
                if t < knots[0] || t >= knots[n - 1] {
                    return 0.0;
                }
                values[knots.partition_point(|&x| x <= t) - 1]
            }
            Density::PiecewiseLinear { knots, values } => {
                let n = knots.len();
                if t < knots[0] || t > knots[n - 1] {
                    return 0.0;
                }
                let i = (knots.partition_point(|&x| x <= t) - 1).min(n - 2);
                let w = (t - knots[i]) / (knots[i + 1] - knots[i]);
                values[i] + w * (values[i + 1] - values[i])
            }
        }
    }

    /// Points where the density may fail to be smooth.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Density::None => vec![],
            Density::FubiniStudy { lo, hi, .. } => lo.iter().chain(hi.iter()).copied().collect(),
            Density::PiecewiseConstant { knots, .. } | Density::PiecewiseLinear { knots, .. } => knots.clone(),
        }
    }

    /// Smallest closed interval outside which the density vanishes.
    pub fn support(&self) -> Option<(f64, f64)> {
        match self {
            Density::None => None,
            Density::FubiniStudy { weight, lo, hi } => {
                (*weight > 0.0).then(|| (lo.unwrap_or(f64::NEG_INFINITY), hi.unwrap_or(f64::INFINITY)))
            }
            Density::PiecewiseConstant { knots, values } => {
                let first = values.iter().position(|&v| v > 0.0)?;
                let last = values.iter().rposition(|&v| v > 0.0)?;
                Some((knots[first], knots[last + 1]))
            }
            Density::PiecewiseLinear { knots, values } => {
                let first = values.iter().position(|&v| v > 0.0)?;
                let last = values.iter().rposition(|&v| v > 0.0)?;
                Some((knots[first.saturating_sub(1)], knots[(last + 1).min(knots.len() - 1)]))
            }
        }
    }

    /// Cumulative masses `∫_{−∞}^{t} ρ` at ascending `ts`.
    fn cdf_sorted(&self, ts: &[f64]) -> Vec<f64> {
        match self {
            Density::None => vec![0.0; ts.len()],
            Density::FubiniStudy { weight, lo, hi } => ts.iter().map(|&t| weight * fs_mass(*lo, *hi, t)).collect(),
            Density::PiecewiseConstant { knots, values } => {
                let mut cum = vec![0.0; knots.len()];
                for i in 0..values.len() {
                    cum[i + 1] = cum[i] + values[i] * (knots[i + 1] - knots[i]);
                }
                ts.iter()
                    .map(|&t| {
                        if t <= knots[0] {
                            0.0
                        } else if t >= knots[knots.len() - 1] {
                            cum[knots.len() - 1]
                        } else {
                            let i = knots.partition_point(|&x| x <= t) - 1;
                            cum[i] + values[i] * (t - knots[i])
                        }
                    })
                    .collect()
            }
            Density::PiecewiseLinear { knots, values } => {
                let mut cum = vec![0.0; knots.len()];
                for i in 0..knots.len() - 1 {
                    cum[i + 1] = cum[i] + 0.5 * (values[i] + values[i + 1]) * (knots[i + 1] - knots[i]);
                }
                ts.iter()
                    .map(|&t| {
                        if t <= knots[0] {
                            0.0
                        } else if t >= knots[knots.len() - 1] {
                            cum[knots.len() - 1]
                        } else {
                            let i = knots.partition_point(|&x| x <= t) - 1;
                            let w = (t - knots[i]) / (knots[i + 1] - knots[i]);
                            let vt = values[i] + w * (values[i + 1] - values[i]);
                            cum[i] + 0.5 * (values[i] + vt) * (t - knots[i])
                        }
                    })
                    .collect()
            }
        }
    }

    fn total(&self) -> f64 {
        self.cdf_sorted(&[f64::INFINITY])[0]
    }
}

impl RadialMeasure {
    pub fn new(density: Density, mut atoms: Vec<Atom>) -> Result<Self> {
        density.validate()?;
        if atoms.iter().any(|a| !a.t.is_finite()) {
            return Err(Error::input("atoms must sit at finite t (no mass at the poles)"));
        }
        if atoms.iter().any(|a| !(a.weight.is_finite() && a.weight > 0.0)) {
            return Err(Error::input("atom weights must be positive and finite"));
        }
        atoms.sort_by(|a, b| a.t.total_cmp(&b.t));
        Ok(RadialMeasure { density, atoms })
    }

    pub(crate) fn from_atoms(atoms: Vec<Atom>) -> Self {
        RadialMeasure::new(Density::None, atoms).expect("atoms are finite and positive")
    }

    pub fn zero() -> Self {
        RadialMeasure { density: Density::None, atoms: vec![] }
    }

    /// The Fubini–Study probability measure on the whole line.
    pub fn fubini_study() -> Self {
        RadialMeasure { density: Density::FubiniStudy { weight: 1.0, lo: None, hi: None }, atoms: vec![] }
    }

    /// Normalized area measure of the annulus `a ≤ t ≤ b`.
    pub fn annulus_area(a: f64, b: f64) -> Result<Self> {
        if !(a < b) {
            return Err(Error::input("annulus needs a < b"));
        }
        let w = 1.0 / (sigma(b) - sigma(a));
        RadialMeasure::new(Density::FubiniStudy { weight: w, lo: Some(a), hi: Some(b) }, vec![])
    }

    pub fn dirac(t: f64) -> Result<Self> {
        RadialMeasure::new(Density::None, vec![Atom { t, weight: 1.0 }])
    }

    pub fn density(&self) -> &Density {
        &self.density
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn total_mass(&self) -> f64 {
        self.density.total() + self.atoms.iter().map(|a| a.weight).sum::<f64>()
    }

    pub fn is_probability(&self, tol: f64) -> bool {
        (self.total_mass() - 1.0).abs() <= tol
    }

    /// Mass of `(−∞, t]`.
    pub fn cdf(&self, t: f64) -> f64 {
        self.cdf_pairs(&[t])[0].1
    }

    /// `(F(t−), F(t))` at ascending points.
    pub fn cdf_pairs(&self, ts: &[f64]) -> Vec<(f64, f64)> {
        let dens = self.density.cdf_sorted(ts);
        let mut out = Vec::with_capacity(ts.len());
        let (mut i, mut below) = (0usize, 0.0);
        for (k, &t) in ts.iter().enumerate() {
            while i < self.atoms.len() && self.atoms[i].t < t {
                below += self.atoms[i].weight;
                i += 1;
            }
            let mut at = 0.0;
            let mut j = i;
            while j < self.atoms.len() && self.atoms[j].t == t {
                at += self.atoms[j].weight;
                j += 1;
            }
            out.push((dens[k] + below, dens[k] + below + at));
        }
        out
    }

    /// `∫ g dμ`; the density part by adaptive-free composite Simpson on a fine
    /// subdivision of its breakpoints (good enough for diagnostics; the
    /// quantization code has its own quadrature).
    pub fn integrate(&self, g: impl Fn(f64) -> f64) -> f64 {
        let mut s: f64 = self.atoms.iter().map(|a| a.weight * g(a.t)).sum();
        if let Some((lo, hi)) = self.density.support() {
            let lo = if lo.is_finite() { lo } else { -60.0 };
            let hi = if hi.is_finite() { hi } else { 60.0 };
            let mut pts = self.density.breakpoints();
            pts.retain(|x| *x > lo && *x < hi);
            pts.push(lo);
            pts.push(hi);
            pts.sort_by(f64::total_cmp);
            for w in pts.windows(2) {
                let n = (((w[1] - w[0]) / 0.01).ceil() as usize).max(2) * 2;
                let h = (w[1] - w[0]) / n as f64;
                // interior evaluation keeps clear of the cell discontinuities
                let f = |x: f64| self.density.at(x) * g(x);
                let eps = 1e-12 * h;
                let mut acc = f(w[0] + eps) + f(w[1] - eps);
                for i in 1..n {
                    acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(w[0] + i as f64 * h);
                }
                s += acc * h / 3.0;
            }
        }
        s
    }

    /// Closed interval containing all mass, if any.
    pub fn support(&self) -> Option<(f64, f64)> {
        let a = self.atoms.first().map(|a| a.t);
        let b = self.atoms.last().map(|a| a.t);
        match (self.density.support(), a, b) {
            (None, None, _) => None,
            (None, Some(a), Some(b)) => Some((a, b)),
            (Some(s), None, _) => Some(s),
            (Some((l, h)), Some(a), Some(b)) => Some((l.min(a), h.max(b))),
            _ => unreachable!(),
        }
    }

    /// Mass of `{t : !keep(t)}` for an atomic measure (density parts are not
    /// supported and must be absent).
    pub fn atomic_mass_where(&self, pred: impl Fn(f64) -> bool) -> f64 {
        self.atoms.iter().filter(|a| pred(a.t)).map(|a| a.weight).sum()
    }

    fn breakpoints(&self) -> Vec<f64> {
        let mut b = self.density.breakpoints();
        b.extend(self.atoms.iter().map(|a| a.t));
        b
    }
}

/// Kolmogorov distance `sup_t |A(t) − B(t)|` between raw (unnormalized)
/// cumulative distribution functions.
///
/// Both one-sided limits are compared at every breakpoint, and each gap
/// between breakpoints is probed at interior points, so the value is exact
/// whenever one side is atomic and the other monotone, and a tight lower
/// bound otherwise. Differences in total mass show up at `+∞`.
pub fn kolmogorov_distance(a: &RadialMeasure, b: &RadialMeasure) -> f64 {
    let mut pts = a.breakpoints();
    pts.extend(b.breakpoints());
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let mut probe = Vec::with_capacity(pts.len() * 4);
    for (i, &t) in pts.iter().enumerate() {
        probe.push(t);
        if let Some(&u) = pts.get(i + 1) {
            for f in [0.25, 0.5, 0.75] {
                probe.push(t + f * (u - t));
            }
        }
    }
    probe.dedup();
    let (pa, pb) = (a.cdf_pairs(&probe), b.cdf_pairs(&probe));
    let mut d = (a.total_mass() - b.total_mass()).abs();
    for (x, y) in pa.iter().zip(&pb) {
        d = d.max((x.0 - y.0).abs()).max((x.1 - y.1).abs());
    }
    d
}
