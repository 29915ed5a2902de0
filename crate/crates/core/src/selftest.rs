//! Invariant suite over the built-in fixtures.
//!
//! Every check reports the observed error next to its tolerance; tolerances
//! are the achievable precisions recorded here, multiplied by a scale so that
//! tightening them (scale 0) exposes the floating-point floor.

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::energy::{ma_energy, equilibrium_energy};
use crate::envelope::{i_model_envelope, weighted_envelope, EnvelopeMode};
use crate::error::Result;
use crate::fixtures;
use crate::profile::ConvexProfile;
use crate::quantization::{admissible_set, approximant_window, bergman_with, donaldson, h0_from_lelong, l2_norms, TwistData};
use crate::rational::{q, qi, to_f64};
use crate::toric::{h0_toric, np_mass2, singularity_body};
use crate::measure::RadialMeasure;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub invariant: String,
    pub error: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Options {
    pub tolerance_scale: f64,
    /// Extra serialized profiles to validate (JSON).
    pub profiles: Vec<String>,
}

impl Default for Options {
    fn default() -> Self {
        Options { tolerance_scale: 1.0, profiles: vec![] }
    }
}

struct Suite {
    scale: f64,
    checks: Vec<Check>,
}

impl Suite {
    fn check(&mut self, invariant: &str, error: f64, tol: f64) {
        let tolerance = tol * self.scale;
        self.checks.push(Check { invariant: invariant.into(), error, tolerance, pass: error <= tolerance, detail: None });
    }

    fn exact(&mut self, invariant: &str, ok: bool) {
        self.checks.push(Check {
            invariant: invariant.into(),
            error: if ok { 0.0 } else { 1.0 },
            tolerance: 0.0,
            pass: ok,
            detail: None,
        });
    }

    fn run(&mut self, invariant: &str, f: impl FnOnce(&mut Suite) -> Result<()>) {
        if let Err(e) = f(self) {
            self.checks.push(Check {
                invariant: invariant.into(),
                error: f64::INFINITY,
                tolerance: 0.0,
                pass: false,
                detail: Some(e.to_string()),
            });
        }
    }
}

pub fn run(opts: &Options) -> Report {
    let mut s = Suite { scale: opts.tolerance_scale, checks: vec![] };

    for (i, js) in opts.profiles.iter().enumerate() {
        let r = serde_json::from_str::<ConvexProfile>(js);
        s.checks.push(Check {
            invariant: "convexity".into(),
            error: if r.is_ok() { 0.0 } else { f64::INFINITY },
            tolerance: 0.0,
            pass: r.is_ok(),
            detail: r.err().map(|e| format!("profile {i}: {e}")),
        });
    }

    s.run("volume_limit_n1", |s| {
        let mut worst = 0.0f64;
        for r in [1u32, 2] {
            for d in -1..=1 {
                for k in 1..=1000u32 {
                    let tw = TwistData { rank: r, degree_shift: d };
                    let h = h0_from_lelong(k, qi(1), q(1, 3), q(1, 4), &tw) as f64;
                    // |J| − 5k/12 lies in (d, d + 3]
                    let bound = (d.abs().max(d + 3)) as f64;
                    worst = worst.max((h / (r * k) as f64 - 5.0 / 12.0).abs() * k as f64 - bound);
                }
            }
        }
        s.exact("volume_limit_n1", worst <= 0.0);
        Ok(())
    });

    s.run("volume_limit_n2", |s| {
        for f in [fixtures::toric_simplex(), fixtures::toric_half_square()] {
            let body = singularity_body(&f);
            let (area, per) = (body.area(), body.perimeter_lower_bound());
            let ok = (1..=400u32).all(|k| {
                let kk = crate::toric::R::from_integer(k as i128);
                let h = crate::toric::R::new(h0_toric(k, &f, &TwistData::default()) as i128, 1);
                let gap = h / (kk * kk) - area;
                gap.abs() * kk <= crate::toric::R::from_integer(4) * per
            });
            s.exact("volume_limit_n2", ok && np_mass2(&f) == crate::toric::R::from_integer(2) * area);
        }
        Ok(())
    });

    let grid = fixtures::coarse_grid();
    s.run("constant_kernel", |s| {
        let v = fixtures::base(&grid)?;
        let x = fixtures::whole_line(&grid)?;
        let b = bergman_with(10, &v, &TwistData::default(), &x, &RadialMeasure::fubini_study(), 32)?;
        let err = b.kernel.iter().map(|k| (k / 11.0 - 1.0).abs()).fold(0.0, f64::max);
        s.check("constant_kernel", err, 1e-6);
        Ok(())
    });

    s.run("bergman_mass", |s| {
        let u = fixtures::thirds_quarters(&grid)?;
        let (k, nu) = fixtures::annulus(41)?;
        for kk in [12u32, 24] {
            let b = bergman_with(kk, &u, &TwistData::default(), &k, &nu, 32)?;
            let target = b.h0 as f64 / kk as f64;
            s.check("bergman_mass", (b.total_mass / target - 1.0).abs(), 1e-8);
        }
        Ok(())
    });

    s.run("biconjugacy", |s| {
        let u = fixtures::thirds_quarters(&grid)?;
        let p = i_model_envelope(&u)?;
        let pp = i_model_envelope(&p)?;
        let err = p.values().iter().zip(pp.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        s.check("biconjugacy", err, 1e-10);
        Ok(())
    });

    s.run("energy_shift", |s| {
        let u = fixtures::thirds_quarters(&grid)?;
        let p = i_model_envelope(&u)?;
        let e = ma_energy(&u, &p.shifted(0.5))?;
        s.check("energy_shift", (e - 0.5 * to_f64(&u.mass())).abs(), 1e-8);
        let x = fixtures::whole_line(&grid)?;
        let env = weighted_envelope(&u, &x, EnvelopeMode::IOrder)?;
        s.check("energy_anchor", ma_energy(&u, &env)?.abs() + equilibrium_energy(&u, &x)?.abs(), 1e-4);
        Ok(())
    });

    s.run("donaldson_shift", |s| {
        let u = fixtures::thirds_quarters(&grid)?;
        let x = fixtures::whole_line(&grid)?;
        let fs = RadialMeasure::fubini_study();
        let a = l2_norms(24, &u, &TwistData::default(), &x, &fs)?;
        let b = l2_norms(24, &u, &TwistData::default(), &x.shifted(0.7)?, &fs)?;
        let expect = 0.7 * a.admissible.len() as f64 / 24.0;
        s.check("donaldson_shift", (donaldson(24, &b, &a)? - expect).abs(), 1e-8);
        Ok(())
    });

    s.run("approximant_window", |s| {
        let u = fixtures::thirds_quarters(&grid)?;
        let ok = (1..=200u32).all(|k| {
            let Ok(w) = approximant_window(k, &u) else { return false };
            let kq = qi(k as i64);
            let (a, b) = (w.lo - u.window().lo, u.window().hi - w.hi);
            a <= qi(0) && b <= qi(0) && -a * kq <= qi(1) && -b * kq <= qi(1)
                && admissible_set(k, &u, &TwistData::default()).admissible.len() as i64 == ((w.hi - w.lo) * kq).to_integer() + 1
        });
        s.exact("approximant_window", ok);
        Ok(())
    });

    Report { checks: s.checks }
}
