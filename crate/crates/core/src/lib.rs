//! Exactly computable models for pseudoeffective volumes and partial
//! equilibrium.
//!
//! Two geometries are covered:
//!
//! * S¹-invariant potentials in a degree-`c` class on the projective line,
//!   where a quasi-psh function is a convex *profile* `F(t)` of
//!   `t = log|z|²` with slopes in `[0, c]` and exact linear tails;
//! * torus-invariant piecewise-linear potentials on the projective plane,
//!   where everything reduces to rational polygons and lattice counting.
//!
//! Envelopes are restricted Legendre biconjugates, Monge–Ampère measures are
//! discrete second derivatives, and the section spaces of `L^k ⊗ 𝓘(ku)` are
//! spanned by monomials `z^j` with `j` in an exactly computed index set.

pub mod energy;
pub mod envelope;
pub mod error;
pub mod fixtures;
pub mod fs;
pub mod measure;
pub mod profile;
pub mod quadrature;
pub mod quantization;
pub mod rational;
pub mod selftest;
pub mod toric;
pub mod weighted_set;

pub use energy::{energy_derivative_check, equilibrium_energy, ma_energy};
pub use envelope::{
    divergence, divergence_exact, envelope_below_profile, i_model_envelope,
    kahler_current_minorant, mix_profiles, p_shift, pointwise_max, rooftop, weighted_envelope,
    EnvelopeMode,
};
pub use error::{Error, Result};
pub use measure::{kolmogorov_distance, Atom, Density, RadialMeasure};
pub use profile::{base_profile, lelong, ma_measure, uniform_grid, ConvexProfile, Interpolation, SlopeWindow, Tail};
pub use quantization::{
    admissible_set, bergman, bergman_approximant, bm_rate, donaldson, gram, h0, l2_norm,
    sup_norm, BergmanResult, NormKind, SectionBasisData, TwistData,
};
pub use rational::Q;
pub use toric::{h0_toric, np_mass2, singularity_body, RationalPolygon, TorusProfile2};
pub use weighted_set::{Component, WeightedSet};
