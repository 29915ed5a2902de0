//! The Fubini–Study potential `f(t) = log(1 + e^t)` and friends.

/// `log(1 + e^t)` without overflow.
pub fn f_fs(t: f64) -> f64 {
    if t > 0.0 {
        t + (-t).exp().ln_1p()
    } else {
        t.exp().ln_1p()
    }
}

/// Logistic function, the derivative of [`f_fs`].
pub fn sigma(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

/// `f''(t) = σ(t)(1 − σ(t))`, the density of the Fubini–Study measure in `t`.
pub fn fs_density(t: f64) -> f64 {
    let e = (-t.abs()).exp();
    e / ((1.0 + e) * (1.0 + e))
}

/// `log f''(t)`, accurate for large `|t|`.
pub fn log_fs_density(t: f64) -> f64 {
    -t.abs() - 2.0 * (-t.abs()).exp().ln_1p()
}

/// Inverse of [`sigma`] on `(0, 1)`.
pub fn logit(x: f64) -> f64 {
    (x / (1.0 - x)).ln()
}

fn xlogy(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * y.ln()
    }
}

/// Legendre transform of `c·f`: `s log(s/c) + (c−s) log((c−s)/c)` on `[0, c]`.
pub fn fs_conjugate(c: f64, s: f64) -> f64 {
    let s = s.clamp(0.0, c);
    xlogy(s, s / c) + xlogy(c - s, (c - s) / c)
}
