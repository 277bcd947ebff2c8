//! q-Pochhammer symbols and the q-gamma function.
//!
//! Conventions: `(a;q)_n = prod_{j<n} (1 - a q^j)`, `(a;q)_inf` the infinite
//! product, `(a;q)_nu = (a;q)_inf / (a q^nu; q)_inf` for real order `nu`, and
//! `Gamma_q(x) = (q;q)_inf (1-q)^{1-x} / (q^x;q)_inf`.

use crate::error::{Error, Result};

/// Infinite products are truncated once the running factor argument drops
/// below this; the geometric decay puts the discarded tail below f64 noise.
pub const PRODUCT_CUTOFF: f64 = 1e-18;

/// Finite q-shifted factorial `(a;q)_n`. The empty product (`n = 0`) is 1.
pub fn qpoch_finite(a_val: f64, n: usize, q: f64) -> f64 {
    let mut p = 1.0;
    let mut t = a_val;
    for _ in 0..n {
        p *= 1.0 - t;
        t *= q;
    }
    p
}

/// Infinite q-shifted factorial `(a;q)_inf`.
///
/// Errors when some factor `1 - a q^j` vanishes: the product is then an exact
/// zero and every downstream ratio through it is singular.
pub fn qpoch_inf(a_val: f64, q: f64) -> Result<f64> {
    let mut p = 1.0;
    let mut t = a_val;
    while t.abs() >= PRODUCT_CUTOFF {
        let f = 1.0 - t;
        if f == 0.0 {
            return Err(Error::Singular(format!("zero factor in ({a_val};{q})_inf")));
        }
        p *= f;
        t *= q;
    }
    Ok(p)
}

/// Real-order q-shifted factorial `(a;q)_nu = (a;q)_inf / (a q^nu;q)_inf`.
pub fn qpoch_real(a_val: f64, nu: f64, q: f64) -> Result<f64> {
    Ok(qpoch_inf(a_val, q)? / qpoch_inf(a_val * q.powf(nu), q)?)
}

/// q-gamma function. Poles at x = 0, -1, -2, ... are rejected.
pub fn qgamma(x: f64, q: f64) -> Result<f64> {
    if x <= 0.0 && x == x.floor() {
        return Err(Error::Singular(format!("Gamma_q pole at x = {x}")));
    }
    Ok(qpoch_inf(q, q)? * (1.0 - q).powf(1.0 - x) / qpoch_inf(q.powf(x), q)?)
}

/// q-number `[x]_q = (1 - q^x)/(1 - q)`.
pub fn qnum(x: f64, q: f64) -> f64 {
    (1.0 - q.powf(x)) / (1.0 - q)
}
