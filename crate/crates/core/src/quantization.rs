//! Section spaces of `L^k ⊗ T ⊗ 𝓘(ku)`, their weighted norms, partial
//! Bergman kernels and measures, the partial Donaldson functional, and the
//! Bergman approximants of a profile.
//!
//! In the radial model `H⁰` is spanned by monomials `z^j`, `0 ≤ j ≤ m` with
//! `m = ⌊kc⌋ + d`, and `|z^j|²` integrates against `e^{−ku}` exactly when
//! `j + 1 > k·ν₀` and `m − j + 1 > k·ν_∞`. Norms use the smooth metric only:
//!
//! `N_j² = ∫_K exp(j·t − m·f(t) − k·v(t)) dν(t)`,
//!
//! and `u` enters through the admissible index set `J`. The one exception is
//! [`bergman_approximant`], whose norms carry the singular weight
//! `m·f + k·u`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fs::{f_fs, logit};
use crate::measure::{Atom, Density, RadialMeasure};
use crate::profile::{ConvexProfile, SlopeWindow};
use crate::quadrature::{discretize, kernel_on_nodes, log_integrals, NodeKind, DEFAULT_NODES_PER_CELL};
use crate::rational::Q;
use crate::weighted_set::WeightedSet;

/// `T = r` copies of a degree shift `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistData {
    pub rank: u32,
    pub degree_shift: i64,
}

impl Default for TwistData {
    fn default() -> Self {
        TwistData { rank: 1, degree_shift: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    L2,
    Sup,
}

/// Norm data over `J`: squared norms in log form, or a Gram matrix stored as
/// its diagonal (log) and the unit-diagonal correlation matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NormData {
    Diagonal { log_norm_sq: Vec<f64> },
    Gram { log_diag: Vec<f64>, correlation_re: Vec<Vec<f64>>, correlation_im: Vec<Vec<f64>>, log_det_correlation: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectionBasisData {
    pub k: u32,
    pub m: i64,
    pub rank: u32,
    /// Admissible exponents `J`, ascending.
    pub admissible: Vec<usize>,
    pub norms: Option<NormData>,
    pub norm_kind: NormKind,
}

impl SectionBasisData {
    pub fn h0(&self) -> u64 {
        self.rank as u64 * self.admissible.len() as u64
    }

    /// `log det` of the Gram matrix of the full `r·|J|`-dimensional space.
    pub fn log_det(&self) -> Result<f64> {
        let r = self.rank as f64;
        match &self.norms {
            None => Err(Error::input("no norms attached")),
            Some(NormData::Diagonal { log_norm_sq }) => Ok(r * log_norm_sq.iter().sum::<f64>()),
            Some(NormData::Gram { log_diag, log_det_correlation, .. }) => {
                Ok(r * (log_diag.iter().sum::<f64>() + log_det_correlation))
            }
        }
    }
}

fn degree(k: u32, c: Q, tw: &TwistData) -> i64 {
    (Q::from_integer(k as i64) * c).floor().to_integer() + tw.degree_shift
}

fn admissible_indices(k: u32, m: i64, nu0: Q, nu_inf: Q) -> Vec<usize> {
    if m < 0 {
        return vec![];
    }
    let kq = Q::from_integer(k as i64);
    (0..=m)
        .filter(|&j| Q::from_integer(j + 1) > kq * nu0 && Q::from_integer(m - j + 1) > kq * nu_inf)
        .map(|j| j as usize)
        .collect()
}

/// Degree `m = ⌊kc⌋ + d` and `J = {j : j+1 > kν₀, m−j+1 > kν_∞}` (strict:
/// on the boundary the exact linear tails make the integral diverge).
pub fn admissible_set(k: u32, u: &ConvexProfile, tw: &TwistData) -> SectionBasisData {
    let m = degree(k, u.class_mass(), tw);
    let (nu0, nu_inf) = u.lelong();
    SectionBasisData {
        k,
        m,
        rank: tw.rank,
        admissible: admissible_indices(k, m, nu0, nu_inf),
        norms: None,
        norm_kind: NormKind::L2,
    }
}

/// `dim H⁰(L^k ⊗ T ⊗ 𝓘(ku)) = r·|J|`.
pub fn h0(k: u32, u: &ConvexProfile, tw: &TwistData) -> u64 {
    admissible_set(k, u, tw).h0()
}

/// `h0` straight from Lelong data, without building a profile.
pub fn h0_from_lelong(k: u32, c: Q, nu0: Q, nu_inf: Q, tw: &TwistData) -> u64 {
    tw.rank as u64 * admissible_indices(k, degree(k, c, tw), nu0, nu_inf).len() as u64
}

/// Limit `(c − ν₀ − ν_∞)₊` of `h0/(r·k)`.
pub fn volume_limit(c: Q, nu0: Q, nu_inf: Q) -> Q {
    let x = c - nu0 - nu_inf;
    if x < Q::zero() {
        Q::zero()
    } else {
        x
    }
}

/// Diagonal `L²` norms `log N_j²` over `J`, with weight `m·f` on `K`.
pub fn l2_norms(k: u32, u: &ConvexProfile, tw: &TwistData, kset: &WeightedSet, nu: &RadialMeasure) -> Result<SectionBasisData> {
    let mut sb = admissible_set(k, u, tw);
    let d = discretize(kset, nu, DEFAULT_NODES_PER_CELL)?;
    let mf = sb.m as f64;
    let logs = log_integrals(&d, &sb.admissible, k as f64, &|t| -mf * f_fs(t))?;
    sb.norms = Some(NormData::Diagonal { log_norm_sq: logs });
    Ok(sb)
}

/// `N^k_{v,ν}(z^j)` for one index (`0 ≤ j ≤ m`).
pub fn l2_norm(j: usize, k: u32, u: &ConvexProfile, kset: &WeightedSet, nu: &RadialMeasure) -> Result<f64> {
    let m = degree(k, u.class_mass(), &TwistData::default());
    if j as i64 > m {
        return Err(Error::input(format!("index {j} exceeds degree {m}")));
    }
    let d = discretize(kset, nu, DEFAULT_NODES_PER_CELL)?;
    let mf = m as f64;
    let l = log_integrals(&d, &[j], k as f64, &|t| -mf * f_fs(t))?;
    Ok((0.5 * l[0]).exp())
}

/// `log sup_K exp(j·t − m·f(t) − k·v(t))`, exactly: on every cell the weight
/// is linear, the exponent concave, and its stationary point explicit.
pub fn log_sup_sq(j: usize, m: i64, k: u32, kset: &WeightedSet) -> f64 {
    let (jf, mf, kf) = (j as f64, m as f64, k as f64);
    let e = |t: f64, v: f64| jf * t - mf * f_fs(t) - kf * v;
    // maximize j t − m f(t) − k (v0 + slope (t − a)) on [a, b] (ends may be infinite)
    let cell_max = |a: f64, b: f64, va: f64, slope: f64| -> f64 {
        let lin = |t: f64| va + slope * (t - a);
        let g = jf - kf * slope;
        let mut best = f64::NEG_INFINITY;
        if a.is_finite() {
            best = best.max(e(a, lin(a)));
        }
        if b.is_finite() {
            best = best.max(e(b, lin(b)));
        }
        if mf > 0.0 {
            let x = g / mf;
            if x > 0.0 && x < 1.0 {
                let ts = logit(x);
                if ts > a && ts < b {
                    best = best.max(e(ts, lin(ts)));
                }
            }
            // limits at infinite ends (slope is 0 there)
            if a == f64::NEG_INFINITY && g <= 0.0 {
                best = best.max(if g == 0.0 { -kf * va } else { f64::NEG_INFINITY });
            }
            if b == f64::INFINITY && g >= mf {
                best = best.max(if g == mf { -kf * va } else { f64::NEG_INFINITY });
            }
        } else if (a == f64::NEG_INFINITY && g < 0.0) || (b == f64::INFINITY && g > 0.0) {
            best = f64::INFINITY;
        } else if (a == f64::NEG_INFINITY || b == f64::INFINITY) && g == 0.0 {
            best = best.max(-kf * va);
        }
        best
    };
    let mut best = f64::NEG_INFINITY;
    for comp in kset.components() {
        let g = &comp.grid;
        let w = &comp.weight;
        let n = g.len();
        if comp.lo.is_none() {
            best = best.max(cell_max(f64::NEG_INFINITY, g[0], w[0], 0.0));
        }
        for i in 0..n.saturating_sub(1) {
            best = best.max(cell_max(g[i], g[i + 1], w[i], (w[i + 1] - w[i]) / (g[i + 1] - g[i])));
        }
        if n == 1 {
            best = best.max(e(g[0], w[0]));
        }
        if comp.hi.is_none() {
            best = best.max(cell_max(g[n - 1], f64::INFINITY, w[n - 1], 0.0));
        }
    }
    best
}

/// `N^k_{v,K}(z^j) = sup_K (|z^j|² e^{−m f − k v})^{1/2}`.
pub fn sup_norm(j: usize, k: u32, u: &ConvexProfile, kset: &WeightedSet) -> Result<f64> {
    let m = degree(k, u.class_mass(), &TwistData::default());
    if j as i64 > m {
        return Err(Error::input(format!("index {j} exceeds degree {m}")));
    }
    Ok((0.5 * log_sup_sq(j, m, k, kset)).exp())
}

/// Partial Bergman data at level `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BergmanResult {
    pub k: u32,
    pub h0: u64,
    /// Sample points of `K` and the kernel `B^k` there.
    pub grid: Vec<f64>,
    pub kernel: Vec<f64>,
    /// `β^k = (1/k)·B^k·ν`: panel-averaged density plus atoms.
    pub measure: RadialMeasure,
    pub total_mass: f64,
}

/// `B^k(t) = Σ_{j∈J} e^{j t − m f − k v}/N_j²` and `β^k = (1/k)·B^k·ν`.
pub fn bergman(k: u32, u: &ConvexProfile, kset: &WeightedSet, nu: &RadialMeasure) -> Result<BergmanResult> {
    bergman_with(k, u, &TwistData::default(), kset, nu, DEFAULT_NODES_PER_CELL)
}

pub fn bergman_with(
    k: u32,
    u: &ConvexProfile,
    tw: &TwistData,
    kset: &WeightedSet,
    nu: &RadialMeasure,
    nodes_per_cell: usize,
) -> Result<BergmanResult> {
    let sb = admissible_set(k, u, tw);
    let d = discretize(kset, nu, nodes_per_cell)?;
    let (mf, kf) = (sb.m as f64, k as f64);
    let base = move |t: f64| -mf * f_fs(t);
    let js = &sb.admissible;
    let logs = log_integrals(&d, js, kf, &base)?;
    let (node_b, tail_mass) = kernel_on_nodes(&d, js, &logs, kf, &base);
    let r = tw.rank as f64;

    let mut panel_mass = vec![0.0; d.panels.len()];
    let mut atoms = vec![];
    for p in 0..d.len() {
        let mass = r * d.logw[p].exp() * node_b[p] / kf;
        match d.kind[p] {
            NodeKind::Panel(i) => panel_mass[i] += mass,
            NodeKind::Atom => {
                if mass > 0.0 {
                    atoms.push(Atom { t: d.t[p], weight: mass });
                }
            }
        }
    }
    for (tp, m) in d.tails.iter().zip(&tail_mass) {
        panel_mass[tp.panel] += r * m / kf;
    }
    let total_mass = panel_mass.iter().sum::<f64>() + atoms.iter().map(|a| a.weight).sum::<f64>();

    // piecewise-constant density on the panels, zero in gaps between components
    let mut knots: Vec<f64> = vec![];
    let mut values: Vec<f64> = vec![];
    let mut extra_atoms = vec![];
    for (&(a, b), &mass) in d.panels.iter().zip(&panel_mass) {
        if b <= a {
            if mass > 0.0 {
                extra_atoms.push(Atom { t: a, weight: mass });
            }
            continue;
        }
        match knots.last() {
            Some(&last) if last == a => {}
            Some(_) => {
                values.push(0.0);
                knots.push(a);
            }
            None => knots.push(a),
        }
        knots.push(b);
        values.push(mass / (b - a));
    }
    atoms.extend(extra_atoms);
    let density = if knots.len() >= 2 { Density::PiecewiseConstant { knots, values } } else { Density::None };
    let measure = RadialMeasure::new(density, atoms)?;

    let grid: Vec<f64> = kset.samples().into_iter().map(|x| x.0).collect();
    let kernel = kset
        .samples()
        .into_iter()
        .map(|(t, v)| r * js.iter().zip(&logs).map(|(&j, l)| (j as f64 * t + base(t) - kf * v - l).exp()).sum::<f64>())
        .collect();
    Ok(BergmanResult { k, h0: sb.h0(), grid, kernel, measure, total_mass })
}

/// Gram data for a general (angle-dependent) weight, with the kernel
/// available through the inverse-Gram quadratic form.
#[derive(Debug, Clone)]
pub struct GramBasis {
    pub data: SectionBasisData,
    pub correlation: DMatrix<Complex64>,
    /// Condition number of the correlation (unit-diagonal) matrix.
    pub condition: f64,
    log_diag: Vec<f64>,
    chol: nalgebra::Cholesky<Complex64, nalgebra::Dyn>,
}

/// Largest acceptable condition number of the correlation matrix.
pub const MAX_CONDITION: f64 = 1e12;

/// Gram matrix `G_{ij} = ∫∫ z^i z̄^j e^{−m f − k v(t, φ)} dν(t) dφ/2π` over
/// `J` (tensor quadrature: Gauss–Legendre in `t`, `n_angles` uniform angles).
///
/// The dynamic range of `G` is enormous (`N_j²` spans many orders of
/// magnitude), so it is stored as `D^{1/2} C D^{1/2}` with `C` unit-diagonal;
/// positive definiteness and conditioning are judged on `C`.
pub fn gram(
    k: u32,
    u: &ConvexProfile,
    kset: &WeightedSet,
    v: &dyn Fn(f64, f64) -> f64,
    nu: &RadialMeasure,
    n_angles: usize,
) -> Result<GramBasis> {
    let mut sb = admissible_set(k, u, &TwistData::default());
    let d = discretize(kset, nu, DEFAULT_NODES_PER_CELL)?;
    let (mf, kf) = (sb.m as f64, k as f64);
    let js = sb.admissible.clone();
    let nj = js.len();
    if nj == 0 {
        return Err(Error::NoSections { k });
    }
    let n_angles = n_angles.max(1);
    let dmax = js[nj - 1] - js[0];
    let phis: Vec<f64> = (0..n_angles).map(|l| std::f64::consts::TAU * l as f64 / n_angles as f64).collect();

    // per node: shift, and angular Fourier coefficients A_p(δ), δ = 0..=dmax
    let np = d.len();
    let mut shift = vec![0.0; np];
    let mut coef: Vec<Vec<Complex64>> = Vec::with_capacity(np);
    for p in 0..np {
        let vs: Vec<f64> = phis.iter().map(|&ph| v(d.t[p], ph)).collect();
        let vmin = vs.iter().copied().fold(f64::INFINITY, f64::min);
        shift[p] = -kf * vmin;
        let ws: Vec<f64> = vs.iter().map(|&x| (-kf * (x - vmin)).exp()).collect();
        coef.push(
            (0..=dmax)
                .map(|dd| {
                    let s: Complex64 = ws.iter().zip(&phis).map(|(w, ph)| Complex64::from_polar(*w, dd as f64 * ph)).sum();
                    s / n_angles as f64
                })
                .collect(),
        );
    }
    let node_log = |p: usize, j: usize| d.logw[p] + j as f64 * d.t[p] - mf * f_fs(d.t[p]) + shift[p];
    // log G_jj
    let log_diag: Vec<f64> = js
        .iter()
        .map(|&j| {
            let xs: Vec<f64> = (0..np).map(|p| node_log(p, j) + coef[p][0].re.ln()).collect();
            let mx = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            mx + xs.iter().map(|x| (x - mx).exp()).sum::<f64>().ln()
        })
        .collect();
    let mut c = DMatrix::<Complex64>::zeros(nj, nj);
    let mut e = vec![0.0; nj];
    for p in 0..np {
        for (a, &j) in js.iter().enumerate() {
            e[a] = (0.5 * (node_log(p, j) - log_diag[a])).exp();
        }
        for a in 0..nj {
            for b in a..nj {
                let dd = js[a].abs_diff(js[b]);
                // ∫ e^{i(j_a − j_b)φ} e^{−kv}: conjugate coefficient when j_a < j_b
                let z = if js[a] >= js[b] { coef[p][dd] } else { coef[p][dd].conj() };
                c[(a, b)] += z * (e[a] * e[b]);
            }
        }
    }
    for a in 0..nj {
        for b in 0..a {
            c[(a, b)] = c[(b, a)].conj();
        }
        c[(a, a)] = Complex64::new(c[(a, a)].re, 0.0);
    }
    let eig = c.clone().symmetric_eigenvalues();
    let (lmin, lmax) = eig.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    let condition = if lmin > 0.0 { lmax / lmin } else { f64::INFINITY };
    if condition > MAX_CONDITION {
        return Err(Error::Conditioning { cond: condition });
    }
    let chol = c.clone().cholesky().ok_or(Error::Conditioning { cond: condition })?;
    let log_det_correlation = 2.0 * chol.l().diagonal().iter().map(|z| z.re.ln()).sum::<f64>();
    sb.norms = Some(NormData::Gram {
        log_diag: log_diag.clone(),
        correlation_re: (0..nj).map(|a| (0..nj).map(|b| c[(a, b)].re).collect()).collect(),
        correlation_im: (0..nj).map(|a| (0..nj).map(|b| c[(a, b)].im).collect()).collect(),
        log_det_correlation,
    });
    Ok(GramBasis { data: sb, correlation: c, condition, log_diag, chol })
}

impl GramBasis {
    /// `B^k(t, φ) = s^H G^{-1} s` with `s_j = z^j e^{−(m f + k v)/2}`; `v` is
    /// the weight value at that point.
    pub fn kernel(&self, t: f64, phi: f64, v: f64) -> f64 {
        let (mf, kf) = (self.data.m as f64, self.data.k as f64);
        let s = DVector::<Complex64>::from_iterator(
            self.data.admissible.len(),
            self.data.admissible.iter().zip(&self.log_diag).map(|(&j, l)| {
                let modulus = (0.5 * (j as f64 * t - mf * f_fs(t) - kf * v - l)).exp();
                Complex64::from_polar(modulus, j as f64 * phi)
            }),
        );
        let y = self.chol.solve(&s);
        s.dotc(&y).re
    }
}

/// `ℒ_{k,u}(A) − ℒ_{k,u}(B) = (1/k²)·(log det G_B − log det G_A)`.
///
/// `log det` is of the Gram matrix of squared norms, i.e. twice the log of
/// the norm ratio per direction; the unit-ball volume ratio in complex
/// dimension `h0` is `det(G_B)/det(G_A)`, so no extra factor 2 appears.
pub fn donaldson(k: u32, a: &SectionBasisData, b: &SectionBasisData) -> Result<f64> {
    if a.admissible != b.admissible || a.rank != b.rank {
        return Err(Error::input("norms live on different index sets"));
    }
    let kf = k as f64;
    Ok((b.log_det()? - a.log_det()?) / (kf * kf))
}

/// Bernstein–Markov diagnostic for the unit class (`m = k`):
/// `(2/k)·log max_{0≤j≤k} N_{v,K}(z^j)/N_{v,ν}(z^j)`.
pub fn bm_rate(k: u32, kset: &WeightedSet, nu: &RadialMeasure) -> Result<f64> {
    let m = k as i64;
    let d = discretize(kset, nu, DEFAULT_NODES_PER_CELL)?;
    let js: Vec<usize> = (0..=k as usize).collect();
    let mf = m as f64;
    let logs = log_integrals(&d, &js, k as f64, &|t| -mf * f_fs(t))?;
    let worst = js
        .iter()
        .zip(&logs)
        .map(|(&j, l)| log_sup_sq(j, m, k, kset) - l)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(worst / k as f64)
}

/// Exact slope window `[j_min/k, j_max/k]` of the level-`k` approximant.
pub fn approximant_window(k: u32, u: &ConvexProfile) -> Result<SlopeWindow> {
    let sb = admissible_set(k, u, &TwistData::default());
    match (sb.admissible.first(), sb.admissible.last()) {
        (Some(&a), Some(&b)) => {
            let kk = k as i64;
            Ok(SlopeWindow { lo: Q::new(a as i64, kk), hi: Q::new(b as i64, kk) })
        }
        _ => Err(Error::NoSections { k }),
    }
}

/// `F̃_k(t) = (1/k)·log Σ_{j∈J} e^{j t}/N_j²` with `N_j² = ∫ e^{jt − m f − k u} dω`
/// (`ω` the Fubini–Study probability measure, `u = F_u − c f`), on `u`'s grid
/// with exact tails `(j_min/k, j_max/k)`.
pub fn bergman_approximant(k: u32, u: &ConvexProfile) -> Result<ConvexProfile> {
    let w = approximant_window(k, u)?;
    let sb = admissible_set(k, u, &TwistData::default());
    let kset = WeightedSet::whole_line(u.grid().to_vec(), |_| 0.0)?;
    let d = discretize(&kset, &RadialMeasure::fubini_study(), DEFAULT_NODES_PER_CELL)?;
    let (mf, kf) = (sb.m as f64, k as f64);
    let logs = log_integrals(&d, &sb.admissible, kf, &|t| -mf * f_fs(t) - kf * u.potential(t))?;
    let values = u
        .grid()
        .iter()
        .map(|&t| {
            let xs: Vec<f64> = sb.admissible.iter().zip(&logs).map(|(&j, l)| j as f64 * t - l).collect();
            let mx = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            (mx + xs.iter().map(|x| (x - mx).exp()).sum::<f64>().ln()) / kf
        })
        .collect();
    ConvexProfile::new(u.class_mass(), u.grid().to_vec(), values, w.lo, w.hi)
}

/// Smallest `C ≥ 0` with `F̃_k + C·log(k)/k ≥ F_u` on the grid.
pub fn approximant_lower_constant(k: u32, u: &ConvexProfile, approx: &ConvexProfile) -> f64 {
    let lk = (k as f64).ln() / k as f64;
    u.grid().iter().map(|&t| (u.eval(t) - approx.eval(t)) / lk).fold(0.0, f64::max)
}

/// `(ν₀, ν_∞)` gaps of the approximant window against `u`, exact.
pub fn approximant_lelong_gaps(k: u32, u: &ConvexProfile) -> Result<(Q, Q)> {
    let w = approximant_window(k, u)?;
    let (a, b) = (w.lo - u.window().lo, u.window().hi - w.hi);
    Ok((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envelope::i_model_from_lelong;
    use crate::profile::{base_profile, uniform_grid};
    use crate::rational::{q, qi};
    use approx::assert_relative_eq;

    fn grid() -> Vec<f64> {
        uniform_grid(-40.0, 40.0, 801)
    }

    fn u13() -> ConvexProfile {
        i_model_from_lelong(qi(1), q(1, 3), q(1, 4), &grid()).unwrap()
    }

    #[test]
    fn admissible_examples() {
        let u = u13();
        let s = admissible_set(12, &u, &TwistData::default());
        assert_eq!(s.admissible, (4..=9).collect::<Vec<_>>());
        let s = admissible_set(24, &u, &TwistData::default());
        assert_eq!(s.admissible, (8..=18).collect::<Vec<_>>());
        assert_eq!(h0(24, &u, &TwistData::default()), 11);
        assert_eq!(h0(24, &u, &TwistData { rank: 2, degree_shift: 0 }), 22);
        let s = admissible_set(12, &u, &TwistData { rank: 1, degree_shift: 1 });
        assert_eq!(s.admissible, (4..=10).collect::<Vec<_>>());
        let v = base_profile(qi(1), grid()).unwrap();
        assert_eq!(admissible_set(7, &v, &TwistData::default()).admissible.len(), 8);
        assert_eq!(h0_from_lelong(10, qi(1), q(3, 5), q(1, 2), &TwistData::default()), 0);
    }

    #[test]
    fn beta_norms_and_constant_kernel() {
        let v = base_profile(qi(1), grid()).unwrap();
        let k = WeightedSet::whole_line(grid(), |_| 0.0).unwrap();
        let fs = RadialMeasure::fubini_study();
        for j in [0usize, 3, 10] {
            let n = l2_norm(j, 10, &v, &k, &fs).unwrap();
            let exact = statrs::function::factorial::factorial(j as u64) * statrs::function::factorial::factorial(10 - j as u64)
                / statrs::function::factorial::factorial(11);
            assert_relative_eq!(n * n, exact, max_relative = 1e-10);
            assert_relative_eq!(n, l2_norm(10 - j, 10, &v, &k, &fs).unwrap(), max_relative = 1e-10);
        }
        let b = bergman(10, &v, &k, &fs).unwrap();
        for &x in &b.kernel {
            assert_relative_eq!(x, 11.0, max_relative = 1e-9);
        }
        assert_relative_eq!(b.total_mass, 1.1, max_relative = 1e-12);
    }

    #[test]
    fn weight_shift_scales_norms() {
        let v = base_profile(qi(1), grid()).unwrap();
        let k0 = WeightedSet::interval(-1.0, 1.0, 21, |t| 0.3 * t).unwrap();
        let k1 = k0.shifted(0.5).unwrap();
        let nu = RadialMeasure::annulus_area(-1.0, 1.0).unwrap();
        let (a, b) = (l2_norm(4, 10, &v, &k0, &nu).unwrap(), l2_norm(4, 10, &v, &k1, &nu).unwrap());
        assert_relative_eq!(b * b, a * a * (-10.0f64 * 0.5).exp(), max_relative = 1e-12);
    }

    #[test]
    fn sup_norm_single_circle() {
        let v = base_profile(qi(1), grid()).unwrap();
        let k = WeightedSet::point(0.0, 0.0).unwrap();
        for j in [0usize, 5, 20] {
            assert_relative_eq!(sup_norm(j, 20, &v, &k).unwrap(), 2f64.powf(-10.0), max_relative = 1e-12);
        }
    }

    #[test]
    fn sup_norm_matches_brute_force() {
        let k = WeightedSet::interval(-2.0, 1.5, 8, |t| 0.2 * (3.0 * t).sin()).unwrap();
        let kk = 15;
        for j in 0..=15usize {
            let brute = (0..=350_000)
                .map(|i| -2.0 + 3.5 * i as f64 / 350_000.0)
                .map(|t| j as f64 * t - kk as f64 * f_fs(t) - kk as f64 * k.weight_at(t).unwrap())
                .fold(f64::NEG_INFINITY, f64::max);
            let got = log_sup_sq(j, kk, kk as u32, &k);
            assert!((got - brute).abs() < 1e-8 && got >= brute - 1e-12, "j={j} got={got} brute={brute}");
        }
        // unbounded K: sup of the j = 0 exponent is the limit at −∞
        let x = WeightedSet::whole_line(vec![-1.0, 1.0], |_| 0.0).unwrap();
        assert_eq!(log_sup_sq(0, 10, 10, &x), 0.0);
        assert!((log_sup_sq(5, 10, 10, &x) - (-10.0 * std::f64::consts::LN_2)).abs() < 1e-12);
    }

    #[test]
    fn gram_diagonal_and_kernel() {
        let v = base_profile(qi(1), uniform_grid(-40.0, 40.0, 161)).unwrap();
        let k = WeightedSet::whole_line(uniform_grid(-40.0, 40.0, 161), |_| 0.0).unwrap();
        let fs = RadialMeasure::fubini_study();
        let g = gram(8, &v, &k, &|_, _| 0.0, &fs, 32).unwrap();
        assert!(g.condition < 1.0 + 1e-9);
        let diag = l2_norms(8, &v, &TwistData::default(), &k, &fs).unwrap();
        let Some(NormData::Diagonal { log_norm_sq }) = &diag.norms else { panic!() };
        let Some(NormData::Gram { log_diag, .. }) = &g.data.norms else { panic!() };
        for (a, b) in log_norm_sq.iter().zip(log_diag) {
            assert!((a - b).abs() < 1e-10);
        }
        assert_relative_eq!(g.kernel(0.3, 1.0, 0.0), 9.0, max_relative = 1e-9);
    }

    #[test]
    fn gram_cosine_weight_is_banded() {
        let v = base_profile(qi(1), uniform_grid(-40.0, 40.0, 161)).unwrap();
        let k = WeightedSet::whole_line(uniform_grid(-40.0, 40.0, 161), |_| 0.0).unwrap();
        let fs = RadialMeasure::fubini_study();
        let eps = 0.1;
        let g = gram(10, &v, &k, &|_, ph| eps * ph.cos(), &fs, 64).unwrap();
        let c = &g.correlation;
        assert!(c[(0, 1)].norm() > 1e-3);
        for dist in 1..6 {
            assert!(c[(0, dist + 1)].norm() < c[(0, dist)].norm());
        }
        // trace identity: ∫ B dν dφ/2π = |J|
        let mut acc = 0.0;
        let d = discretize(&k, &fs, 8).unwrap();
        for p in 0..d.len() {
            let w = d.logw[p].exp();
            let m = 32;
            for l in 0..m {
                let ph = std::f64::consts::TAU * l as f64 / m as f64;
                acc += w * g.kernel(d.t[p], ph, eps * ph.cos()) / m as f64;
            }
        }
        assert_relative_eq!(acc, 11.0, max_relative = 1e-6);
    }

    #[test]
    fn donaldson_constant_shift() {
        let u = u13();
        let k = WeightedSet::whole_line(grid(), |_| 0.0).unwrap();
        let fs = RadialMeasure::fubini_study();
        let a = l2_norms(24, &u, &TwistData::default(), &k, &fs).unwrap();
        let b = l2_norms(24, &u, &TwistData::default(), &k.shifted(0.7).unwrap(), &fs).unwrap();
        assert_eq!(donaldson(24, &a, &a).unwrap(), 0.0);
        assert_relative_eq!(donaldson(24, &b, &a).unwrap(), 0.7 * 11.0 / 24.0, max_relative = 1e-10);
    }

    #[test]
    fn bm_rates() {
        let fs = RadialMeasure::fubini_study();
        let x = WeightedSet::whole_line(grid(), |_| 0.0).unwrap();
        for k in [10u32, 40] {
            let r = bm_rate(k, &x, &fs).unwrap();
            assert!(r >= 0.0 && r <= ((k + 1) as f64).ln() / k as f64 + 1e-9, "k={k} r={r}");
        }
        let ann = WeightedSet::interval(-1.0, 1.0, 41, |_| 0.0).unwrap();
        let dirac = RadialMeasure::dirac(0.0).unwrap();
        let expect = std::f64::consts::LN_2 - (1.0 + (-1.0f64).exp()).ln();
        for k in [10u32, 40] {
            assert_relative_eq!(bm_rate(k, &ann, &dirac).unwrap(), expect, max_relative = 1e-12);
        }
    }

    #[test]
    fn approximant_of_base_profile() {
        let v = base_profile(qi(1), grid()).unwrap();
        for k in [5u32, 20] {
            let a = bergman_approximant(k, &v).unwrap();
            let shift = ((k + 1) as f64).ln() / k as f64;
            for &t in v.grid().iter().filter(|t| t.abs() < 30.0) {
                assert!((a.eval(t) - v.eval(t) - shift).abs() < 1e-10, "k={k} t={t}");
            }
        }
    }

    #[test]
    fn approximant_window_example() {
        let u = u13();
        assert_eq!(approximant_window(12, &u).unwrap(), SlopeWindow { lo: q(4, 12), hi: q(9, 12) });
        // zero mass still leaves one or two sections at d = 0, none at d = −2
        let line = i_model_from_lelong(qi(1), q(3, 5), q(2, 5), &grid()).unwrap();
        assert_eq!(approximant_window(10, &line).unwrap(), SlopeWindow { lo: q(6, 10), hi: q(6, 10) });
        assert_eq!(h0(10, &line, &TwistData { rank: 1, degree_shift: -2 }), 0);
    }
}
