//! Discretization of a reference measure `ν` restricted to `K`.
//!
//! Bounded pieces use composite Gauss–Legendre on panels whose ends are the
//! sample points of `K` together with the breakpoints of `ν`, so the weight
//! `v` is linear and the density smooth on every panel. Where `K` and `ν`
//! both run off to infinity the integrand is a pure exponential to double
//! precision beyond the last panel and is integrated in closed form.

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;

use crate::error::{Error, Result};
use crate::fs::log_fs_density;
use crate::measure::{Density, RadialMeasure};
use crate::weighted_set::WeightedSet;

pub const DEFAULT_NODES_PER_CELL: usize = 32;

/// Tolerance on `ν(K) = 1`.
pub const PROBABILITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NodeKind {
    Panel(usize),
    Atom,
}

/// Exponential tail `∫_{−∞}^{t0}` (left) or `∫_{t0}^{∞}` (right) of a
/// Fubini–Study density with constant weight `v`.
#[derive(Debug, Clone, Copy)]
pub struct TailPiece {
    pub t0: f64,
    pub right: bool,
    pub v: f64,
    pub log_weight: f64,
    /// Panel that absorbs the tail mass when building Bergman measures.
    pub panel: usize,
}

impl TailPiece {
    pub fn log_density(&self, t: f64) -> f64 {
        self.log_weight + log_fs_density(t)
    }
}

#[derive(Debug, Clone)]
pub struct Discretization {
    pub t: Vec<f64>,
    /// `log` of quadrature weight times density (or of the atom weight).
    pub logw: Vec<f64>,
    pub v: Vec<f64>,
    pub kind: Vec<NodeKind>,
    /// Ascending, non-overlapping panels.
    pub panels: Vec<(f64, f64)>,
    pub tails: Vec<TailPiece>,
}

impl Discretization {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }
}

/// Checks that `ν` is a probability measure carried by `K`.
pub fn check_reference(k: &WeightedSet, nu: &RadialMeasure) -> Result<()> {
    let total = nu.total_mass();
    if (total - 1.0).abs() > PROBABILITY_TOL {
        return Err(Error::input(format!("reference measure has mass {total}, not 1")));
    }
    if let Some(a) = nu.atoms().iter().find(|a| !k.contains(a.t)) {
        return Err(Error::input(format!("reference atom at t = {} lies outside K", a.t)));
    }
    if let Some((lo, hi)) = nu.density().support() {
        if !k.covers(lo, hi) {
            return Err(Error::input("reference density is not supported inside one component of K"));
        }
    }
    Ok(())
}

/// Discretizes `ν` on `K` with `nodes_per_cell` Gauss–Legendre nodes per panel.
pub fn discretize(k: &WeightedSet, nu: &RadialMeasure, nodes_per_cell: usize) -> Result<Discretization> {
    check_reference(k, nu)?;
    let n = NonZeroUsize::new(nodes_per_cell.max(1)).expect("nonzero");
    let rule = GaussLegendre::new(n);
    let pairs = rule.as_node_weight_pairs();
    let dens = nu.density();
    let support = dens.support();
    let mut d = Discretization { t: vec![], logw: vec![], v: vec![], kind: vec![], panels: vec![], tails: vec![] };
    for comp in k.components() {
        let (clo, chi) = (comp.lo_f64(), comp.hi_f64());
        if let Some((slo, shi)) = support {
            let (a, b) = (clo.max(slo), chi.min(shi));
            if a < b {
                let mut bps: Vec<f64> = comp.grid.clone();
                bps.extend(dens.breakpoints().into_iter().filter(|x| *x > clo && *x < chi));
                bps.retain(|x| *x >= a && *x <= b);
                if a.is_finite() {
                    bps.push(a);
                }
                if b.is_finite() {
                    bps.push(b);
                }
                bps.sort_by(f64::total_cmp);
                bps.dedup();
                let left_tail = a == f64::NEG_INFINITY;
                let right_tail = b == f64::INFINITY;
                if (left_tail || right_tail) && !matches!(dens, Density::FubiniStudy { .. }) {
                    return Err(Error::input("only Fubini-Study densities may have unbounded support"));
                }
                let first_panel = d.panels.len();
                for w in bps.windows(2) {
                    let (pa, pb) = (w[0], w[1]);
                    let pid = d.panels.len();
                    d.panels.push((pa, pb));
                    let (mid, half) = (0.5 * (pa + pb), 0.5 * (pb - pa));
                    for &(x, wt) in pairs {
                        let t = mid + half * x;
                        let rho = dens.at(t);
                        if rho > 0.0 {
                            d.t.push(t);
                            d.logw.push((half * wt * rho).ln());
                            d.v.push(comp.weight_at(t));
                            d.kind.push(NodeKind::Panel(pid));
                        }
                    }
                }
                if let Density::FubiniStudy { weight, .. } = dens {
                    let lw = weight.ln();
                    let last_panel = d.panels.len().saturating_sub(1).max(first_panel);
                    if left_tail {
                        let t0 = bps[0];
                        d.tails.push(TailPiece { t0, right: false, v: comp.weight_at(t0), log_weight: lw, panel: first_panel });
                    }
                    if right_tail {
                        let t0 = bps[bps.len() - 1];
                        d.tails.push(TailPiece { t0, right: true, v: comp.weight_at(t0), log_weight: lw, panel: last_panel });
                    }
                    if d.panels.len() == first_panel {
                        // a tail with no panel to attach to: give it a degenerate panel
                        d.panels.push((bps[0], bps[0]));
                    }
                }
            }
        }
        for a in nu.atoms().iter().filter(|a| comp.contains(a.t)) {
            d.t.push(a.t);
            d.logw.push(a.weight.ln());
            d.v.push(comp.weight_at(a.t));
            d.kind.push(NodeKind::Atom);
        }
    }
    if d.t.is_empty() && d.tails.is_empty() {
        return Err(Error::input("reference measure does not charge K"));
    }
    Ok(d)
}

/// `log ∫ exp(j·t + base(t) − k·v) dν` for each `j`, where `base` is the
/// `j`-independent part of the exponent (typically `−W(t)`).
pub fn log_integrals(d: &Discretization, js: &[usize], kf: f64, base: &dyn Fn(f64) -> f64) -> Result<Vec<f64>> {
    let a: Vec<f64> = (0..d.len()).map(|p| base(d.t[p]) - kf * d.v[p] + d.logw[p]).collect();
    let tails: Vec<(f64, f64, &TailPiece)> = d
        .tails
        .iter()
        .map(|tp| {
            // exponent is affine beyond t0; measure its slope 10 units further out
            let far = if tp.right { tp.t0 + 10.0 } else { tp.t0 - 10.0 };
            let r0 = base(tp.t0) + tp.log_density(tp.t0);
            let r1 = base(far) + tp.log_density(far);
            (r0 - kf * tp.v, (r1 - r0) / (far - tp.t0), tp)
        })
        .collect();
    js.iter()
        .map(|&j| {
            let jf = j as f64;
            let (mut mx, mut s) = (f64::NEG_INFINITY, 0.0);
            let mut add = |x: f64| {
                if x > mx {
                    s = s * (mx - x).exp() + 1.0;
                    mx = x;
                } else {
                    s += (x - mx).exp();
                }
            };
            for p in 0..a.len() {
                add(jf * d.t[p] + a[p]);
            }
            for &(r0, beta, tp) in &tails {
                let lambda = jf + beta;
                let ok = if tp.right { lambda < 0.0 } else { lambda > 0.0 };
                if !ok {
                    return Err(Error::Divergence { j });
                }
                add(jf * tp.t0 + r0 - lambda.abs().ln());
            }
            if mx == f64::NEG_INFINITY {
                return Err(Error::Divergence { j });
            }
            Ok(mx + s.ln())
        })
        .collect()
}

/// Per-panel and per-tail masses of `g_j(t)·ν` summed over `j` with weights
/// `exp(−L_j)`: returns `(node values Σ_j e^{j t + base − k v − L_j},
/// tail masses)`.
pub fn kernel_on_nodes(
    d: &Discretization,
    js: &[usize],
    log_norms: &[f64],
    kf: f64,
    base: &dyn Fn(f64) -> f64,
) -> (Vec<f64>, Vec<f64>) {
    let node_vals = (0..d.len())
        .map(|p| {
            let a = base(d.t[p]) - kf * d.v[p];
            js.iter().zip(log_norms).map(|(&j, l)| (j as f64 * d.t[p] + a - l).exp()).sum()
        })
        .collect();
    let tail_masses = d
        .tails
        .iter()
        .map(|tp| {
            let far = if tp.right { tp.t0 + 10.0 } else { tp.t0 - 10.0 };
            let r0 = base(tp.t0) + tp.log_density(tp.t0) - kf * tp.v;
            let beta = (base(far) + tp.log_density(far) - kf * tp.v - r0) / (far - tp.t0);
            js.iter()
                .zip(log_norms)
                .map(|(&j, l)| {
                    let lambda = j as f64 + beta;
                    (j as f64 * tp.t0 + r0 - l).exp() / lambda.abs()
                })
                .sum()
        })
        .collect();
    (node_vals, tail_masses)
}
