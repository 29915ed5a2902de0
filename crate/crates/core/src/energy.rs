//! Relative Monge–Ampère energy and partial equilibrium energy.
//!
//! With `n = 1`, `I(φ) = ½ ∫ (F_φ − F_P) (θ_P + θ_φ)` where `P` is the
//! I-model envelope of the anchor. Both measures are evaluated as node masses
//! on a common grid, which turns the usual integration by parts into exact
//! summation by parts: the cocycle identity and concavity hold to rounding.

use crate::envelope::{i_model_values, node_masses, weighted_envelope, EnvelopeMode};
use crate::error::{Error, Result};
use crate::profile::ConvexProfile;
use crate::rational::format_q;
use crate::weighted_set::WeightedSet;

fn tails_str(p: &ConvexProfile) -> String {
    let w = p.window();
    format!("{}, {}", format_q(&w.lo), format_q(&w.hi))
}

/// Anchor values `F_P` on `phi`'s grid, after checking the singularity type.
fn anchor_on(u: &ConvexProfile, phi: &ConvexProfile) -> Result<ConvexProfile> {
    if u.class_mass() != phi.class_mass() || u.window() != phi.window() {
        return Err(Error::SingularityType(tails_str(u), tails_str(phi)));
    }
    let vals = i_model_values(u.class_mass(), u.window(), phi.grid());
    let w = u.window();
    ConvexProfile::new(u.class_mass(), phi.grid().to_vec(), vals, w.lo, w.hi)
}

/// `I_{[u]}(φ)` relative to `P = i_model_envelope(u)`; `φ` must have the
/// same slope window as `u`.
pub fn ma_energy(u: &ConvexProfile, phi: &ConvexProfile) -> Result<f64> {
    let p = anchor_on(u, phi)?;
    Ok(pair_energy(phi, &p))
}

/// `½ Σ (F_a − F_b)(w_a + w_b)` on a shared grid.
fn pair_energy(a: &ConvexProfile, b: &ConvexProfile) -> f64 {
    let (wa, wb) = (node_masses(a), node_masses(b));
    a.values()
        .iter()
        .zip(b.values())
        .zip(wa.iter().zip(&wb))
        .map(|((x, y), (p, q))| 0.5 * (x - y) * (p + q))
        .sum()
}

/// Cocycle right-hand side `½ ∫ (F₁ − F₂)(θ₁ + θ₂)`, for two profiles on one grid.
pub fn cocycle_term(phi1: &ConvexProfile, phi2: &ConvexProfile) -> Result<f64> {
    if phi1.grid() != phi2.grid() {
        return Err(Error::input("profiles must share a grid"));
    }
    if phi1.window() != phi2.window() {
        return Err(Error::SingularityType(tails_str(phi1), tails_str(phi2)));
    }
    Ok(pair_energy(phi1, phi2))
}

/// `𝓘_{[u],K}(v) = I_{[u]}(P_K[u](v))`; the weight lives in `K`.
pub fn equilibrium_energy(u: &ConvexProfile, k: &WeightedSet) -> Result<f64> {
    if u.mass() <= num_traits::Zero::zero() {
        return Err(Error::Precondition("mass(u) must be positive".into()));
    }
    let env = weighted_envelope(u, k, EnvelopeMode::IOrder)?;
    ma_energy(u, &env)
}

/// Centered difference of `s ↦ 𝓘(v + s·f)` at `s = t` against
/// `∫_K f dθ_{P_K(v + t f)}`. Returns `(fd, exact)`.
pub fn energy_derivative_check(
    u: &ConvexProfile,
    k: &WeightedSet,
    f: &dyn Fn(f64) -> f64,
    t: f64,
    delta: f64,
) -> Result<(f64, f64)> {
    if !(delta > 0.0) {
        return Err(Error::input("step must be positive"));
    }
    let at = |s: f64| k.map_weight(|x, v| v + s * f(x));
    let hi = equilibrium_energy(u, &at(t + delta)?)?;
    let lo = equilibrium_energy(u, &at(t - delta)?)?;
    let fd = (hi - lo) / (2.0 * delta);
    let kt = at(t)?;
    let env = weighted_envelope(u, &kt, EnvelopeMode::IOrder)?;
    let exact = env
        .grid()
        .iter()
        .zip(node_masses(&env))
        .filter(|(x, _)| kt.contains(**x))
        .map(|(&x, w)| f(x) * w)
        .sum();
    Ok((fd, exact))
}
