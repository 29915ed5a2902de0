//! Built-in fixtures shared by the test suites, the self-test and the lab.

use num_traits::One;

use crate::envelope::i_model_from_lelong;
use crate::error::Result;
use crate::measure::RadialMeasure;
use crate::profile::{base_profile, uniform_grid, ConvexProfile};
use crate::rational::{q, qi};
use crate::toric::{Point, TorusProfile2, R};
use crate::weighted_set::WeightedSet;

/// Default profile grid: `[−40, 40]`, step `0.01`.
pub fn default_grid() -> Vec<f64> {
    uniform_grid(-40.0, 40.0, 8001)
}

/// Coarser grid for quick checks.
pub fn coarse_grid() -> Vec<f64> {
    uniform_grid(-40.0, 40.0, 801)
}

pub fn base(grid: &[f64]) -> Result<ConvexProfile> {
    base_profile(qi(1), grid.to_vec())
}

/// `c = 1`, Lelong numbers `(1/3, 1/4)`, I-model shape.
pub fn thirds_quarters(grid: &[f64]) -> Result<ConvexProfile> {
    i_model_from_lelong(qi(1), q(1, 3), q(1, 4), grid)
}

/// `K = X`, `v = 0`, sampled on `grid`.
pub fn whole_line(grid: &[f64]) -> Result<WeightedSet> {
    WeightedSet::whole_line(grid.to_vec(), |_| 0.0)
}

/// Annulus `t ∈ [−1, 1]` with `v = 0` and normalized area measure.
pub fn annulus(n: usize) -> Result<(WeightedSet, RadialMeasure)> {
    Ok((WeightedSet::interval(-1.0, 1.0, n, |_| 0.0)?, RadialMeasure::annulus_area(-1.0, 1.0)?))
}

pub fn toric_simplex() -> TorusProfile2 {
    TorusProfile2::from_gradients(R::one(), &[Point::from_ints(0, 0, 1), Point::from_ints(1, 0, 1), Point::from_ints(0, 1, 1)])
        .expect("valid")
}

pub fn toric_half_square() -> TorusProfile2 {
    TorusProfile2::from_gradients(
        R::one(),
        &[Point::from_ints(0, 0, 2), Point::from_ints(1, 0, 2), Point::from_ints(0, 1, 2), Point::from_ints(1, 1, 2)],
    )
    .expect("valid")
}

/// A serialized profile with a dent at the middle node.
pub const NONCONVEX_PROFILE_JSON: &str =
    r#"{"class_mass":"1","grid":[-1.0,0.0,1.0],"values":[0.0,0.9,1.0],"tail_minus":{"slope":"0","intercept":0.0},"tail_plus":{"slope":"1","intercept":0.0}}"#;
