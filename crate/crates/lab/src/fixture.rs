//! Fixture ids referenced by the experiment configs.

use anyhow::{bail, Result};
use plurilab::fixtures;
use plurilab::rational::{q, qi};
use plurilab::toric::TorusProfile2;
use plurilab::{uniform_grid, ConvexProfile, RadialMeasure, WeightedSet, Q};

pub enum VolumeFixture {
    Radial { c: Q, nu0: Q, nu_inf: Q },
    Toric(TorusProfile2),
}

pub fn volume(id: &str) -> Result<VolumeFixture> {
    Ok(match id {
        "thirds_quarters" => VolumeFixture::Radial { c: qi(1), nu0: q(1, 3), nu_inf: q(1, 4) },
        "base" => VolumeFixture::Radial { c: qi(1), nu0: qi(0), nu_inf: qi(0) },
        // √2 rounded to eight digits
        "sqrt2" => VolumeFixture::Radial { c: q(141_421_356, 100_000_000), nu0: qi(0), nu_inf: qi(0) },
        "toric_simplex" => VolumeFixture::Toric(fixtures::toric_simplex()),
        "toric_half_square" => VolumeFixture::Toric(fixtures::toric_half_square()),
        _ => bail!(unknown(id, &["thirds_quarters", "base", "sqrt2", "toric_simplex", "toric_half_square"])),
    })
}

/// A profile, a weighted set and a probability measure on it.
pub struct Setting {
    pub u: ConvexProfile,
    pub k: WeightedSet,
    pub nu: RadialMeasure,
}

fn whole_line() -> Result<WeightedSet> {
    Ok(fixtures::whole_line(&uniform_grid(-40.0, 40.0, 1601))?)
}

pub fn bergman(id: &str) -> Result<Setting> {
    let grid = fixtures::default_grid();
    Ok(match id {
        "base" => Setting { u: fixtures::base(&grid)?, k: whole_line()?, nu: RadialMeasure::fubini_study() },
        "thirds_quarters" => Setting { u: fixtures::thirds_quarters(&grid)?, k: whole_line()?, nu: RadialMeasure::fubini_study() },
        "annulus" => {
            let (k, nu) = fixtures::annulus(201)?;
            Setting { u: fixtures::base(&grid)?, k, nu }
        }
        _ => bail!(unknown(id, &["base", "thirds_quarters", "annulus"])),
    })
}

/// Constant added to the weight in the `shift` energy fixture.
pub const ENERGY_SHIFT: f64 = 0.7;

pub fn energy(id: &str) -> Result<Setting> {
    let grid = uniform_grid(-40.0, 40.0, 1601);
    let u = fixtures::thirds_quarters(&grid)?;
    Ok(match id {
        "shift" => Setting { u, k: fixtures::whole_line(&grid)?.shifted(ENERGY_SHIFT)?, nu: RadialMeasure::fubini_study() },
        "annulus" => {
            let (k, nu) = fixtures::annulus(41)?;
            Setting { u, k, nu }
        }
        _ => bail!(unknown(id, &["shift", "annulus"])),
    })
}

pub fn approx(id: &str) -> Result<ConvexProfile> {
    let grid = fixtures::default_grid();
    Ok(match id {
        "base" => fixtures::base(&grid)?,
        "thirds_quarters" => fixtures::thirds_quarters(&grid)?,
        _ => bail!(unknown(id, &["base", "thirds_quarters"])),
    })
}

pub fn envelope(id: &str) -> Result<(ConvexProfile, WeightedSet)> {
    let grid = fixtures::default_grid();
    let u = fixtures::thirds_quarters(&grid)?;
    Ok(match id {
        "annulus" => (u, fixtures::annulus(201)?.0),
        "tilted_annulus" => (u, WeightedSet::interval(-1.0, 1.0, 201, |t| 0.25 * t)?),
        "whole_line" => (u, whole_line()?),
        _ => bail!(unknown(id, &["annulus", "tilted_annulus", "whole_line"])),
    })
}

fn unknown(id: &str, known: &[&str]) -> String {
    format!("unknown fixture {id:?} (known: {})", known.join(", "))
}
