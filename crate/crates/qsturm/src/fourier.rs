//! q-Fourier analysis on the symmetric lattice and the one-sided sine
//! series, with the q-mean metric and two diagnostics (coefficient decay
//! rate, pointwise Holder exponent).
//!
//! Normalization follows the orthogonality constants of the basis module:
//! over `[-a, a]` the shifted sines `S_q(q w_k t/a)` have diagonal
//! `a q^(-1/2) mu_k` and the cosines `C_q(q^(1/2) w_k t/a)` have diagonal
//! `a mu_k`; over `[0, a]` the plain sines have diagonal `(a sqrt(q)/2) mu_k`.

use crate::error::{Error, Result};
use crate::lattice::{jackson_int, jackson_int_sym, LatticeFn, QLattice, SymLatticeFn};
use crate::trig::TrigBasis;

/// Boundary slack for the sine-series precondition f(0) = f(a) = 0,
/// relative to 1 + sup|f|.
pub const BOUNDARY_TOL: f64 = 1e-8;

/// Slack allowed between a fitted decay rate and the requested exponent.
pub const RATE_FIT_TOL: f64 = 0.05;

/// Full-series coefficients over `[-a, a]`.
pub struct FourierCoeffs<'b> {
    pub a0: f64,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    basis: &'b TrigBasis,
}

/// One-sided sine-series coefficients over `[0, a]`.
pub struct SineCoeffs<'b> {
    pub c: Vec<f64>,
    basis: &'b TrigBasis,
}

fn check_window(basis: &TrigBasis, lattice: &QLattice, k_count: usize) -> Result<()> {
    if k_count == 0 || k_count > basis.size() {
        return Err(Error::InvalidParam(format!(
            "requested {k_count} coefficients from a basis of size {}",
            basis.size()
        )));
    }
    if lattice != basis.lattice() {
        return Err(Error::LatticeMismatch(
            "function and basis live on different lattices".into(),
        ));
    }
    Ok(())
}

fn finite_or_eval(vals: &[f64], what: &str) -> Result<()> {
    if vals.iter().any(|v| !v.is_finite()) {
        return Err(Error::Eval(format!("non-finite {what} coefficient")));
    }
    Ok(())
}

/// Full-series analysis of a function on the symmetric lattice.
pub fn fourier_coeffs<'b>(
    f: &SymLatticeFn,
    basis: &'b TrigBasis,
    k_count: usize,
) -> Result<FourierCoeffs<'b>> {
    check_window(basis, f.lattice(), k_count)?;
    let lat = basis.lattice();
    let a_len = lat.a();

    let a0 = jackson_int_sym(f) / a_len;

    let mut ac = Vec::with_capacity(k_count);
    let mut bc = Vec::with_capacity(k_count);
    for k in 0..k_count {
        let mu = basis.mu()[k];

        // the cosine factor is even, the shifted sine factor is odd
        let cos = basis.cosine_fn(k);
        let prod = SymLatticeFn::new(
            lat.clone(),
            f.pos().iter().zip(cos.values()).map(|(&p, &c)| p * c).collect(),
            f.neg().iter().zip(cos.values()).map(|(&m, &c)| m * c).collect(),
            f.zero_value() * cos.zero_value(),
        )?;
        ac.push(jackson_int_sym(&prod) / (a_len * mu));

        let sin = basis.sine_fn_shifted(k);
        let prod = SymLatticeFn::new(
            lat.clone(),
            f.pos().iter().zip(sin.values()).map(|(&p, &s)| p * s).collect(),
            f.neg().iter().zip(sin.values()).map(|(&m, &s)| -m * s).collect(),
            0.0,
        )?;
        bc.push(lat.q().sqrt() * jackson_int_sym(&prod) / (a_len * mu));
    }
    finite_or_eval(&ac, "cosine")?;
    finite_or_eval(&bc, "sine")?;
    if !a0.is_finite() {
        return Err(Error::Eval("non-finite mean coefficient".into()));
    }
    Ok(FourierCoeffs { a0, a: ac, b: bc, basis })
}

/// One-sided sine analysis; the function must vanish at both endpoints.
pub fn sine_coeffs<'b>(
    f: &LatticeFn,
    basis: &'b TrigBasis,
    k_count: usize,
) -> Result<SineCoeffs<'b>> {
    check_window(basis, f.lattice(), k_count)?;
    let scale = 1.0 + f.sup_norm();
    if f.zero_value().abs() > BOUNDARY_TOL * scale || f.value(0).abs() > BOUNDARY_TOL * scale {
        return Err(Error::BoundaryViolation(format!(
            "sine series requires f(0) = f(a) = 0, found f(0) = {:.3e}, f(a) = {:.3e}",
            f.zero_value(),
            f.value(0)
        )));
    }
    let lat = basis.lattice();
    let norm = lat.a() * lat.q().sqrt() / 2.0;
    let mut c = Vec::with_capacity(k_count);
    for k in 0..k_count {
        let prod = f.zip_with(&basis.sine_fn(k), |u, v| u * v)?;
        c.push(jackson_int(&prod) / (norm * basis.mu()[k]));
    }
    finite_or_eval(&c, "sine")?;
    Ok(SineCoeffs { c, basis })
}

impl<'b> FourierCoeffs<'b> {
    pub fn basis(&self) -> &TrigBasis {
        self.basis
    }

    /// Partial sum `a0/2 + sum a_k C_q(q^(1/2) w_k x/a) + b_k S_q(q w_k x/a)`
    /// sampled over the symmetric lattice.
    pub fn synthesize(&self) -> SymLatticeFn {
        let lat = self.basis.lattice();
        let n = lat.depth();
        let mut pos = vec![self.a0 / 2.0; n];
        let mut neg = vec![self.a0 / 2.0; n];
        let mut zero = self.a0 / 2.0;
        for (k, (&ak, &bk)) in self.a.iter().zip(&self.b).enumerate() {
            let cos = self.basis.cosine_fn(k);
            let sin = self.basis.sine_fn_shifted(k);
            for i in 0..n {
                pos[i] += ak * cos.value(i) + bk * sin.value(i);
                neg[i] += ak * cos.value(i) - bk * sin.value(i);
            }
            zero += ak;
        }
        SymLatticeFn::new(lat.clone(), pos, neg, zero).expect("basis lattice depth")
    }

    /// Whether `|mu_k a_k|` and `|mu_k b_k|` both decay at least like
    /// `q^(c k)` with `c >= c_exponent`, by log-linear fit.
    pub fn decay_check(&self, c_exponent: f64) -> Result<bool> {
        let q = self.basis.lattice().q();
        let ra = fitted_rate(&scaled(&self.a, self.basis), q)?;
        let rb = fitted_rate(&scaled(&self.b, self.basis), q)?;
        Ok(passes(ra, c_exponent) && passes(rb, c_exponent))
    }
}

impl<'b> SineCoeffs<'b> {
    pub fn basis(&self) -> &TrigBasis {
        self.basis
    }

    /// Partial sum `sum c_k S_q(w_k x/a)` sampled over the lattice, using
    /// the first `k_count` terms.
    pub fn synthesize_first(&self, k_count: usize) -> LatticeFn {
        let lat = self.basis.lattice();
        let mut vals = vec![0.0; lat.depth()];
        for (k, &ck) in self.c.iter().take(k_count).enumerate() {
            let sin = self.basis.sine_fn(k);
            for (v, s) in vals.iter_mut().zip(sin.values()) {
                *v += ck * s;
            }
        }
        LatticeFn::from_values(lat.clone(), vals, 0.0).expect("basis lattice depth")
    }

    /// Partial sum using every stored coefficient.
    pub fn synthesize(&self) -> LatticeFn {
        self.synthesize_first(self.c.len())
    }

    /// Whether `|mu_k c_k|` decays at least like `q^(c k)`, by log-linear fit.
    pub fn decay_check(&self, c_exponent: f64) -> Result<bool> {
        let q = self.basis.lattice().q();
        Ok(passes(
            fitted_rate(&scaled(&self.c, self.basis), q)?,
            c_exponent,
        ))
    }
}

fn scaled(coeff: &[f64], basis: &TrigBasis) -> Vec<f64> {
    coeff
        .iter()
        .zip(basis.mu())
        .map(|(&c, &mu)| mu * c)
        .collect()
}

fn passes(rate: Option<f64>, c_exponent: f64) -> bool {
    match rate {
        // an all-zero sequence decays faster than any exponent
        None => true,
        Some(r) => r >= c_exponent - RATE_FIT_TOL,
    }
}

/// Least-squares slope of `log|v_k|` against `k log q`, skipping exact
/// zeros (deflated entries). `None` means every entry was zero.
fn fitted_rate(vals: &[f64], q: f64) -> Result<Option<f64>> {
    if vals.len() < 4 {
        return Err(Error::InvalidParam(format!(
            "decay fit needs at least 4 coefficients, got {}",
            vals.len()
        )));
    }
    let lq = q.ln();
    let pts: Vec<(f64, f64)> = vals
        .iter()
        .enumerate()
        .filter(|(_, v)| **v != 0.0)
        .map(|(k, v)| ((k + 1) as f64 * lq, v.abs().ln()))
        .collect();
    if pts.is_empty() {
        return Ok(None);
    }
    if pts.len() == 1 {
        // a single spike has no well-defined rate; report no decay
        return Ok(Some(0.0));
    }
    Ok(Some(ls_slope(&pts)))
}

fn ls_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for &(x, y) in pts {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    num / den
}

/// Distance `sqrt(int_{-a}^{a} (f-g)^2 d_q x)`.
pub fn qmean_dist(f: &SymLatticeFn, g: &SymLatticeFn) -> Result<f64> {
    if f.lattice() != g.lattice() {
        return Err(Error::LatticeMismatch(
            "distance requires a shared lattice".into(),
        ));
    }
    let sq = SymLatticeFn::new(
        f.lattice().clone(),
        f.pos().iter().zip(g.pos()).map(|(&u, &v)| (u - v) * (u - v)).collect(),
        f.neg().iter().zip(g.neg()).map(|(&u, &v)| (u - v) * (u - v)).collect(),
        (f.zero_value() - g.zero_value()).powi(2),
    )?;
    Ok(jackson_int_sym(&sq).sqrt())
}

/// One-sided counterpart `sqrt(int_0^a (f-g)^2 d_q x)`.
pub fn qmean_dist_one_sided(f: &LatticeFn, g: &LatticeFn) -> Result<f64> {
    let d2 = f.zip_with(g, |u, v| (u - v) * (u - v))?;
    Ok(jackson_int(&d2).sqrt())
}

/// Fitted Holder exponent: least-squares slope of
/// `log|f(a q^(n-1)) - f(a q^n)|` against `n log q` over the deepest
/// quartile of the lattice, pooling both half-axes. A constant tail
/// (all differences zero) reports positive infinity.
pub fn holder_estimate(f: &SymLatticeFn) -> Result<f64> {
    let lat = f.lattice();
    let n_total = lat.depth();
    if n_total < 16 {
        return Err(Error::InvalidParam(format!(
            "Holder fit needs depth >= 16, got {n_total}"
        )));
    }
    let lq = lat.q().ln();
    let start = 3 * n_total / 4;
    let mut pts = Vec::new();
    for n in start..n_total {
        for side in [f.pos(), f.neg()] {
            let d = (side[n - 1] - side[n]).abs();
            if d > 0.0 {
                pts.push((n as f64 * lq, d.ln()));
            }
        }
    }
    if pts.is_empty() {
        return Ok(f64::INFINITY);
    }
    Ok(ls_slope(&pts))
}
