//! Torus-invariant piecewise-linear potentials on the projective plane.
//!
//! `F(t) = max_i (⟨g_i, t⟩ + a_i)` with gradients in `Δ_c`. Monomial
//! multiplier ideals turn the I-model class of `F` into the convex hull of
//! the gradients (the singularity body); `z^α` is a section of
//! `L^k ⊗ 𝓘(kF)` iff `(α + 1)/k` lies in the open body.

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantization::TwistData;
use crate::rational::serde_q128;

pub type R = Ratio<i128>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    #[serde(with = "serde_q128")]
    pub x: R,
    #[serde(with = "serde_q128")]
    pub y: R,
}

impl Point {
    pub fn new(x: R, y: R) -> Self {
        Point { x, y }
    }

    pub fn from_ints(x: i128, y: i128, den: i128) -> Self {
        Point { x: R::new(x, den), y: R::new(y, den) }
    }

    fn sub(self, o: Point) -> Point {
        Point { x: self.x - o.x, y: self.y - o.y }
    }

    fn lerp(self, lambda: R, o: Point) -> Point {
        let mu = R::one() - lambda;
        Point { x: lambda * self.x + mu * o.x, y: lambda * self.y + mu * o.y }
    }
}

fn cross(o: Point, a: Point, b: Point) -> R {
    let (u, v) = (a.sub(o), b.sub(o));
    u.x * v.y - u.y * v.x
}

/// One affine piece `⟨g, t⟩ + a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Piece {
    pub gradient: Point,
    #[serde(with = "serde_q128")]
    pub intercept: R,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ProfileRepr", into = "ProfileRepr")]
pub struct TorusProfile2 {
    c: R,
    pieces: Vec<Piece>,
}

#[derive(Serialize, Deserialize)]
struct ProfileRepr {
    #[serde(with = "serde_q128")]
    class_mass: R,
    pieces: Vec<Piece>,
}

impl TryFrom<ProfileRepr> for TorusProfile2 {
    type Error = Error;
    fn try_from(r: ProfileRepr) -> Result<Self> {
        TorusProfile2::new(r.class_mass, r.pieces)
    }
}

impl From<TorusProfile2> for ProfileRepr {
    fn from(p: TorusProfile2) -> Self {
        ProfileRepr { class_mass: p.c, pieces: p.pieces }
    }
}

fn in_simplex(c: R, g: Point) -> bool {
    !g.x.is_negative() && !g.y.is_negative() && g.x + g.y <= c
}

impl TorusProfile2 {
    /// Gradients must lie in `Δ_c`; then `F ≤ c·log(1 + e^{t₁} + e^{t₂}) + max a`
    /// holds automatically.
    pub fn new(c: R, pieces: Vec<Piece>) -> Result<Self> {
        if !c.is_positive() {
            return Err(Error::input("class mass must be positive"));
        }
        if pieces.is_empty() {
            return Err(Error::input("a profile needs at least one piece"));
        }
        if let Some(p) = pieces.iter().find(|p| !in_simplex(c, p.gradient)) {
            return Err(Error::input(format!("gradient ({}, {}) lies outside the simplex", p.gradient.x, p.gradient.y)));
        }
        Ok(TorusProfile2 { c, pieces })
    }

    /// Zero intercepts at the given gradients.
    pub fn from_gradients(c: R, gradients: &[Point]) -> Result<Self> {
        Self::new(c, gradients.iter().map(|&g| Piece { gradient: g, intercept: R::zero() }).collect())
    }

    pub fn class_mass(&self) -> R {
        self.c
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn eval(&self, t: (f64, f64)) -> f64 {
        let f = |x: R| *x.numer() as f64 / *x.denom() as f64;
        self.pieces
            .iter()
            .map(|p| f(p.gradient.x) * t.0 + f(p.gradient.y) * t.1 + f(p.intercept))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `λF₁ + (1−λ)F₂`, `λ ∈ [0, 1]`: pieces are all pairwise combinations.
    pub fn mix(lambda: R, a: &TorusProfile2, b: &TorusProfile2) -> Result<Self> {
        if lambda.is_negative() || lambda > R::one() || a.c != b.c {
            return Err(Error::input("mixing needs λ in [0, 1] and equal classes"));
        }
        let mu = R::one() - lambda;
        let pieces = a
            .pieces
            .iter()
            .flat_map(|p| {
                b.pieces.iter().map(move |q| Piece {
                    gradient: p.gradient.lerp(lambda, q.gradient),
                    intercept: lambda * p.intercept + mu * q.intercept,
                })
            })
            .collect();
        Self::new(a.c, pieces)
    }
}

/// Convex polygon, vertices counterclockwise without repeats or collinear
/// interior points. May degenerate to a segment (two vertices) or a point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalPolygon {
    vertices: Vec<Point>,
}

impl RationalPolygon {
    /// Convex hull (monotone chain, exact).
    pub fn hull(points: &[Point]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::input("hull of no points"));
        }
        let mut p = points.to_vec();
        p.sort();
        p.dedup();
        if p.len() <= 2 {
            return Ok(RationalPolygon { vertices: p });
        }
        let mut lower: Vec<Point> = vec![];
        for &x in &p {
            while lower.len() >= 2 && !cross(lower[lower.len() - 2], lower[lower.len() - 1], x).is_positive() {
                lower.pop();
            }
            lower.push(x);
        }
        let mut upper: Vec<Point> = vec![];
        for &x in p.iter().rev() {
            while upper.len() >= 2 && !cross(upper[upper.len() - 2], upper[upper.len() - 1], x).is_positive() {
                upper.pop();
            }
            upper.push(x);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        Ok(RationalPolygon { vertices: lower })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn area(&self) -> R {
        let v = &self.vertices;
        if v.len() < 3 {
            return R::zero();
        }
        let mut s = R::zero();
        for i in 0..v.len() {
            let (a, b) = (v[i], v[(i + 1) % v.len()]);
            s += a.x * b.y - a.y * b.x;
        }
        s / R::from_integer(2)
    }

    /// Rational lower bound for the perimeter: each edge is at least
    /// `max(|dx|, |dy|, 0.7071·(|dx| + |dy|))`.
    pub fn perimeter_lower_bound(&self) -> R {
        let v = &self.vertices;
        let edges = match v.len() {
            0 | 1 => return R::zero(),
            2 => 1,
            n => n,
        };
        let r = R::new(7071, 10000);
        (0..edges)
            .map(|i| {
                let d = v[(i + 1) % v.len()].sub(v[i]);
                let (ax, ay) = (d.x.abs(), d.y.abs());
                let m = if ax > ay { ax } else { ay };
                let l1 = (ax + ay) * r;
                if m > l1 {
                    m
                } else {
                    l1
                }
            })
            .fold(R::zero(), |a, b| a + b)
            * if v.len() == 2 { R::from_integer(2) } else { R::one() }
    }

    /// Closed containment.
    pub fn contains(&self, p: Point) -> bool {
        let v = &self.vertices;
        match v.len() {
            1 => v[0] == p,
            2 => {
                cross(v[0], v[1], p).is_zero()
                    && p.x >= v[0].x.min(v[1].x)
                    && p.x <= v[0].x.max(v[1].x)
                    && p.y >= v[0].y.min(v[1].y)
                    && p.y <= v[0].y.max(v[1].y)
            }
            n => (0..n).all(|i| !cross(v[i], v[(i + 1) % n], p).is_negative()),
        }
    }

    /// Open containment (empty interior for degenerate polygons).
    pub fn contains_strict(&self, p: Point) -> bool {
        let v = &self.vertices;
        let n = v.len();
        n >= 3 && (0..n).all(|i| cross(v[i], v[(i + 1) % n], p).is_positive())
    }

    pub fn contains_polygon(&self, other: &RationalPolygon) -> bool {
        other.vertices.iter().all(|&p| self.contains(p))
    }

    /// `λP + (1−λ)Q`.
    pub fn minkowski_mix(lambda: R, a: &RationalPolygon, b: &RationalPolygon) -> Result<Self> {
        let pts: Vec<Point> = a.vertices.iter().flat_map(|&p| b.vertices.iter().map(move |&q| p.lerp(lambda, q))).collect();
        Self::hull(&pts)
    }

    /// Open horizontal slice at height `y`: `(x_l, x_r)` or `None`.
    fn slice(&self, y: R) -> Option<(R, R)> {
        let v = &self.vertices;
        let n = v.len();
        if n < 3 {
            return None;
        }
        let (mut lo, mut hi): (Option<R>, Option<R>) = (None, None);
        let ymin = v.iter().map(|p| p.y).min()?;
        let ymax = v.iter().map(|p| p.y).max()?;
        if y <= ymin || y >= ymax {
            return None;
        }
        for i in 0..n {
            let (a, b) = (v[i], v[(i + 1) % n]);
            if a.y == b.y || y < a.y.min(b.y) || y > a.y.max(b.y) {
                continue;
            }
            let x = a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y);
            lo = Some(lo.map_or(x, |l: R| l.min(x)));
            hi = Some(hi.map_or(x, |h: R| h.max(x)));
        }
        Some((lo?, hi?))
    }
}

pub fn singularity_body(f: &TorusProfile2) -> RationalPolygon {
    let g: Vec<Point> = f.pieces.iter().map(|p| p.gradient).collect();
    RationalPolygon::hull(&g).expect("profiles have at least one piece")
}

/// `2!·area(body)`.
pub fn np_mass2(f: &TorusProfile2) -> R {
    R::from_integer(2) * singularity_body(f).area()
}

fn degree(k: u32, c: R, tw: &TwistData) -> i128 {
    (R::from_integer(k as i128) * c).floor().to_integer() + tw.degree_shift as i128
}

/// `r·#{α ≥ 0 : α₁ + α₂ ≤ m, (α + (1,1))/k ∈ int(body)}`, counted row by row.
pub fn h0_toric(k: u32, f: &TorusProfile2, tw: &TwistData) -> u64 {
    let m = degree(k, f.c, tw);
    let body = singularity_body(f);
    if m < 0 || k == 0 {
        return 0;
    }
    let kk = R::from_integer(k as i128);
    let mut count: u64 = 0;
    for y in 0..=m {
        let Some((xl, xr)) = body.slice(R::new(y + 1, k as i128)) else { continue };
        // k·xl − 1 < x < k·xr − 1, 0 ≤ x ≤ m − y
        let lo = (kk * xl - R::one()).floor().to_integer() + 1;
        let hi = (kk * xr - R::one()).ceil().to_integer() - 1;
        let (lo, hi) = (lo.max(0), hi.min(m - y));
        if hi >= lo {
            count += (hi - lo + 1) as u64;
        }
    }
    tw.rank as u64 * count
}

/// Direct enumeration of the same set; slow, for cross-checks.
pub fn h0_toric_brute(k: u32, f: &TorusProfile2, tw: &TwistData) -> u64 {
    let m = degree(k, f.c, tw);
    let body = singularity_body(f);
    let mut count = 0u64;
    for y in 0..=m.max(-1) {
        for x in 0..=(m - y) {
            if body.contains_strict(Point::from_ints(x + 1, y + 1, k as i128)) {
                count += 1;
            }
        }
    }
    tw.rank as u64 * count
}
