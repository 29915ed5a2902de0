//! Weighted subsets `(K, v)`: unions of closed radial annuli and circles with
//! a continuous weight sampled on each component.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::{check_grid, uniform_grid};

/// A closed `t`-interval (possibly a single circle, possibly unbounded) with
/// weight samples. `null` ends are infinite; beyond the sampled range of an
/// unbounded component the weight is extended by its boundary value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    pub grid: Vec<f64>,
    pub weight: Vec<f64>,
}

impl Component {
    fn validate(&self) -> Result<()> {
        check_grid(&self.grid)?;
        if self.weight.len() != self.grid.len() {
            return Err(Error::input("weight and grid differ in length"));
        }
        if self.weight.iter().any(|v| !v.is_finite()) {
            return Err(Error::input("weight values must be finite"));
        }
        let (g0, g1) = (self.grid[0], self.grid[self.grid.len() - 1]);
        if let Some(lo) = self.lo {
            if lo != g0 {
                return Err(Error::input("a finite component end must be its first grid point"));
            }
        }
        if let Some(hi) = self.hi {
            if hi != g1 {
                return Err(Error::input("a finite component end must be its last grid point"));
            }
        }
        Ok(())
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.unwrap_or(f64::NEG_INFINITY)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.unwrap_or(f64::INFINITY)
    }

    pub fn is_point(&self) -> bool {
        self.grid.len() == 1 && self.lo.is_some() && self.hi.is_some()
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.lo_f64() && t <= self.hi_f64()
    }

    /// Weight at `t` (linear between samples, constant beyond them).
    pub fn weight_at(&self, t: f64) -> f64 {
        let g = &self.grid;
        let n = g.len();
        if t <= g[0] {
            return self.weight[0];
        }
        if t >= g[n - 1] {
            return self.weight[n - 1];
        }
        let i = g.partition_point(|&x| x <= t) - 1;
        let w = (t - g[i]) / (g[i + 1] - g[i]);
        self.weight[i] + w * (self.weight[i + 1] - self.weight[i])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SetRepr", into = "SetRepr")]
pub struct WeightedSet {
    components: Vec<Component>,
}

#[derive(Serialize, Deserialize)]
struct SetRepr {
    components: Vec<Component>,
}

impl TryFrom<SetRepr> for WeightedSet {
    type Error = Error;
    fn try_from(r: SetRepr) -> Result<Self> {
        WeightedSet::new(r.components)
    }
}

impl From<WeightedSet> for SetRepr {
    fn from(w: WeightedSet) -> Self {
        SetRepr { components: w.components }
    }
}

impl WeightedSet {
    pub fn new(mut components: Vec<Component>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::input("K must be nonempty"));
        }
        for c in &components {
            c.validate()?;
        }
        components.sort_by(|a, b| a.grid[0].total_cmp(&b.grid[0]));
        for w in components.windows(2) {
            if w[0].hi_f64() >= w[1].lo_f64() {
                return Err(Error::input("components of K must be disjoint"));
            }
        }
        Ok(WeightedSet { components })
    }

    pub fn point(t: f64, v: f64) -> Result<Self> {
        Self::new(vec![Component { lo: Some(t), hi: Some(t), grid: vec![t], weight: vec![v] }])
    }

    /// `[a, b]` sampled at `n` points.
    pub fn interval(a: f64, b: f64, n: usize, v: impl Fn(f64) -> f64) -> Result<Self> {
        if !(a < b) || n < 2 {
            return Err(Error::input("interval needs a < b and at least two samples"));
        }
        let grid = uniform_grid(a, b, n);
        let weight = grid.iter().map(|&t| v(t)).collect();
        Self::new(vec![Component { lo: Some(a), hi: Some(b), grid, weight }])
    }

    /// `K = X`, the weight sampled on `grid`.
    pub fn whole_line(grid: Vec<f64>, v: impl Fn(f64) -> f64) -> Result<Self> {
        let weight = grid.iter().map(|&t| v(t)).collect();
        Self::new(vec![Component { lo: None, hi: None, grid, weight }])
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn is_whole_line(&self) -> bool {
        self.components.len() == 1 && self.components[0].lo.is_none() && self.components[0].hi.is_none()
    }

    pub fn unbounded_left(&self) -> bool {
        self.components[0].lo.is_none()
    }

    pub fn unbounded_right(&self) -> bool {
        self.components[self.components.len() - 1].hi.is_none()
    }

    pub fn contains(&self, t: f64) -> bool {
        self.components.iter().any(|c| c.contains(t))
    }

    pub fn component_of(&self, t: f64) -> Option<&Component> {
        self.components.iter().find(|c| c.contains(t))
    }

    /// Weight on K; `None` off K.
    pub fn weight_at(&self, t: f64) -> Option<f64> {
        self.component_of(t).map(|c| c.weight_at(t))
    }

    /// All sample points with their weights, ascending.
    pub fn samples(&self) -> Vec<(f64, f64)> {
        self.components.iter().flat_map(|c| c.grid.iter().copied().zip(c.weight.iter().copied())).collect()
    }

    /// Same K, weight `v ↦ g(t, v)` applied to every sample.
    pub fn map_weight(&self, g: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let components = self
            .components
            .iter()
            .map(|c| Component {
                weight: c.grid.iter().zip(&c.weight).map(|(&t, &v)| g(t, v)).collect(),
                ..c.clone()
            })
            .collect();
        Self::new(components)
    }

    pub fn shifted(&self, a: f64) -> Result<Self> {
        self.map_weight(|_, v| v + a)
    }

    /// Is `[a, b]` covered by one component?
    pub fn covers(&self, a: f64, b: f64) -> bool {
        self.components.iter().any(|c| c.lo_f64() <= a && b <= c.hi_f64())
    }
}
