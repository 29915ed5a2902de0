//! Exact rationals for slopes, Lelong numbers and class masses.
//!
//! JSON form is the string `"p/q"`; a bare integer string `"p"` is accepted on
//! input.

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = Ratio<i64>;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(n)
}

pub fn to_f64(x: &Q) -> f64 {
    // to_f64 on Ratio<i64> is exact up to rounding of the final division
    x.to_f64().unwrap_or_else(|| *x.numer() as f64 / *x.denom() as f64)
}

pub fn format_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: i64 = n.parse().map_err(|_| Error::input(format!("bad rational {s:?}")))?;
    let d: i64 = d.parse().map_err(|_| Error::input(format!("bad rational {s:?}")))?;
    if d == 0 {
        return Err(Error::input(format!("zero denominator in {s:?}")));
    }
    Ok(Q::new(n, d))
}

/// Best rational approximation with denominator ≤ `max_den` (continued
/// fractions). Used to turn decimal literals such as 1.41421356 into exact
/// class masses.
pub fn approximate(x: f64, max_den: i64) -> Q {
    if !x.is_finite() {
        return Q::zero();
    }
    let neg = x < 0.0;
    let mut v = x.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    for _ in 0..64 {
        let a = v.floor();
        if a > i64::MAX as f64 / 4.0 {
            break;
        }
        let a = a as i64;
        let (p2, q2) = match (a.checked_mul(p1).and_then(|t| t.checked_add(p0)), a.checked_mul(q1).and_then(|t| t.checked_add(q0))) {
            (Some(p), Some(q)) => (p, q),
            _ => break,
        };
        if q2 > max_den {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = v - a as f64;
        if frac < 1e-15 {
            break;
        }
        v = 1.0 / frac;
    }
    let r = Q::new(p1, q1.max(1));
    if neg {
        -r
    } else {
        r
    }
}

pub fn qmin(a: Q, b: Q) -> Q {
    if a <= b {
        a
    } else {
        b
    }
}

pub fn qmax(a: Q, b: Q) -> Q {
    if a >= b {
        a
    } else {
        b
    }
}

pub fn qabs(a: Q) -> Q {
    a.abs()
}

/// serde adapter: `Q` as `"p/q"`.
pub mod serde_q {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).map_err(de::Error::custom)
    }
}

/// serde adapter for rationals over i128 (toric arithmetic).
pub mod serde_q128 {
    use num_rational::Ratio;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Ratio<i128>, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{}", x.numer(), x.denom()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Ratio<i128>, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).ok_or_else(|| de::Error::custom(format!("bad rational {s:?}")))
    }

    pub fn parse(s: &str) -> Option<Ratio<i128>> {
        let s = s.trim();
        let (n, d) = s.split_once('/').unwrap_or((s, "1"));
        let n: i128 = n.trim().parse().ok()?;
        let d: i128 = d.trim().parse().ok()?;
        (d != 0).then(|| Ratio::new(n, d))
    }
}
