//! The two q-Mittag-Leffler families and their lattice samplers.
//!
//! * `ml_e`: `e(z) = sum z^n / Gamma_q(alpha n + 1)`, convergent only while
//!   `|z| (1-q)^alpha < 1`.
//! * `ml_e_entire`: `E(z) = sum q^(alpha n(n-1)/2) z^n / Gamma_q(alpha n+1)`,
//!   entire thanks to the Gaussian damping factor.
//!
//! The samplers evaluate the composites `x -> e(x^alpha)` and
//! `x -> E(x^alpha)` on a lattice, plus their exact q-derivatives via the
//! termwise power rule `D_q x^c = [c]_q x^(c-1)`. The derivative samplers
//! exist because grid differencing of the sampled composite is useless at
//! depth: the difference quotient divides an O(eps) cancellation by the
//! node coordinate, and the relative error grows like eps * x^(-alpha).
//! The series route costs one extra summation and is exact to rounding.

use crate::error::{Error, Result};
use crate::lattice::{LatticeFn, QLattice};
use crate::qpoch::{qgamma, qnum};
use crate::sum::Kahan;

const TERM_RTOL: f64 = 1e-18;
const MAX_TERMS: usize = 400;

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParam(format!("alpha = {alpha} not positive")));
    }
    Ok(())
}

/// First q-Mittag-Leffler family at scalar argument.
pub fn ml_e(alpha: f64, z: f64, q: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if z.abs() * (1.0 - q).powf(alpha) >= 1.0 {
        return Err(Error::Domain(format!(
            "|z|(1-q)^alpha = {:.6} outside the convergence disk",
            z.abs() * (1.0 - q).powf(alpha)
        )));
    }
    let mut acc = Kahan::new();
    acc.add(1.0);
    let mut term = 1.0;
    let mut g_prev = qgamma(1.0, q)?;
    for k in 1..=MAX_TERMS {
        let g = qgamma(alpha * k as f64 + 1.0, q)?;
        term *= z * g_prev / g;
        g_prev = g;
        acc.add(term);
        if term.abs() < TERM_RTOL * acc.value().abs() {
            break;
        }
    }
    Ok(acc.value())
}

/// Second (entire) q-Mittag-Leffler family at scalar argument.
pub fn ml_e_entire(alpha: f64, z: f64, q: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(0.0 < q && q < 1.0) {
        return Err(Error::InvalidParam(format!("q = {q} not in (0,1)")));
    }
    let mut acc = Kahan::new();
    acc.add(1.0);
    let mut zpow = 1.0;
    for k in 1..=MAX_TERMS {
        zpow *= z;
        let k_f = k as f64;
        let term = q.powf(alpha * k_f * (k_f - 1.0) / 2.0) * zpow
            / qgamma(alpha * k_f + 1.0, q)?;
        acc.add(term);
        if term.abs() < TERM_RTOL * acc.value().abs() {
            break;
        }
    }
    Ok(acc.value())
}

/// Samples of `x -> e(x^alpha)` on the lattice; 1 at 0.
///
/// The whole lattice must sit inside the convergence disk, which is the
/// top-node condition `a^alpha (1-q)^alpha < 1`.
pub fn ml_e_on(lattice: &QLattice, alpha: f64) -> Result<LatticeFn> {
    check_alpha(alpha)?;
    let q = lattice.q();
    if (lattice.a() * (1.0 - q)).powf(alpha) >= 1.0 {
        return Err(Error::Domain(format!(
            "lattice endpoint a = {} outside the convergence disk of e(x^alpha)",
            lattice.a()
        )));
    }
    let mut vals = vec![0.0; lattice.depth()];
    for (n, v) in vals.iter_mut().enumerate() {
        let xa = lattice.node(n).powf(alpha);
        let mut acc = Kahan::new();
        acc.add(1.0);
        let mut term = 1.0;
        let mut g_prev = qgamma(1.0, q)?;
        for k in 1..=MAX_TERMS {
            let g = qgamma(alpha * k as f64 + 1.0, q)?;
            term *= xa * g_prev / g;
            g_prev = g;
            acc.add(term);
            if term.abs() < TERM_RTOL * acc.value().abs() {
                break;
            }
        }
        *v = acc.value();
    }
    LatticeFn::from_values(lattice.clone(), vals, 1.0)
}

/// Samples of the exact q-derivative of `x -> e(x^alpha)`:
/// `sum_k [alpha k]_q x^(alpha k - 1) / Gamma_q(alpha k + 1)`. 0 at 0.
pub fn ml_e_dq_on(lattice: &QLattice, alpha: f64) -> Result<LatticeFn> {
    check_alpha(alpha)?;
    let q = lattice.q();
    let mut vals = vec![0.0; lattice.depth()];
    for (n, v) in vals.iter_mut().enumerate() {
        let x = lattice.node(n);
        let mut acc = Kahan::new();
        for k in 1..=MAX_TERMS {
            let k_f = k as f64;
            let t = qnum(alpha * k_f, q) * x.powf(alpha * k_f - 1.0)
                / qgamma(alpha * k_f + 1.0, q)?;
            acc.add(t);
            if k > 2 && t.abs() < TERM_RTOL * acc.value().abs() {
                break;
            }
        }
        *v = acc.value();
    }
    LatticeFn::from_values(lattice.clone(), vals, 0.0)
}

/// Samples of `x -> E(x^alpha)`, or of `x -> E((qx)^alpha)` when
/// `shift_q` is set; 1 at 0.
pub fn ml_e_entire_on(lattice: &QLattice, alpha: f64, shift_q: bool) -> Result<LatticeFn> {
    check_alpha(alpha)?;
    let q = lattice.q();
    let mut vals = vec![0.0; lattice.depth()];
    for (n, v) in vals.iter_mut().enumerate() {
        let x = if shift_q {
            q * lattice.node(n)
        } else {
            lattice.node(n)
        };
        let xa = x.powf(alpha);
        let mut acc = Kahan::new();
        acc.add(1.0);
        let mut zpow = 1.0;
        for k in 1..=MAX_TERMS {
            zpow *= xa;
            let k_f = k as f64;
            let term = q.powf(alpha * k_f * (k_f - 1.0) / 2.0) * zpow
                / qgamma(alpha * k_f + 1.0, q)?;
            acc.add(term);
            if term.abs() < TERM_RTOL * acc.value().abs() {
                break;
            }
        }
        *v = acc.value();
    }
    LatticeFn::from_values(lattice.clone(), vals, 1.0)
}

/// Samples of the exact q-derivative of `x -> E(x^alpha)`. 0 at 0.
pub fn ml_e_entire_dq_on(lattice: &QLattice, alpha: f64) -> Result<LatticeFn> {
    check_alpha(alpha)?;
    let q = lattice.q();
    let mut vals = vec![0.0; lattice.depth()];
    for (n, v) in vals.iter_mut().enumerate() {
        let x = lattice.node(n);
        let mut acc = Kahan::new();
        for k in 1..=MAX_TERMS {
            let k_f = k as f64;
            let t = q.powf(alpha * k_f * (k_f - 1.0) / 2.0)
                * qnum(alpha * k_f, q)
                * x.powf(alpha * k_f - 1.0)
                / qgamma(alpha * k_f + 1.0, q)?;
            acc.add(t);
            if k > 2 && t.abs() < TERM_RTOL * acc.value().abs() {
                break;
            }
        }
        *v = acc.value();
    }
    LatticeFn::from_values(lattice.clone(), vals, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frac::{ileft, FracOrder};

    #[test]
    fn value_at_origin_is_one() {
        assert_eq!(ml_e(0.75, 0.0, 0.5).unwrap(), 1.0);
        assert_eq!(ml_e_entire(0.75, 0.0, 0.5).unwrap(), 1.0);
    }

    #[test]
    fn integer_order_matches_brute_force() {
        // alpha = 1: sum z^n / Gamma_q(n+1) summed directly
        let (z, q) = (0.5f64, 0.5);
        let mut brute = 0.0;
        for n in (0..60).rev() {
            brute += z.powi(n) / qgamma(n as f64 + 1.0, q).unwrap();
        }
        let got = ml_e(1.0, z, q).unwrap();
        assert!((got - brute).abs() <= 1e-14 * brute);
    }

    #[test]
    fn divergence_boundary_is_rejected() {
        // z (1-q)^alpha = 1.2
        let (alpha, q) = (0.75, 0.5);
        let z = 1.2 / (1.0f64 - q).powf(alpha);
        assert!(matches!(ml_e(alpha, z, q), Err(Error::Domain(_))));
        // the entire family takes the same argument without complaint
        assert!(ml_e_entire(alpha, z, q).is_ok());
    }

    #[test]
    fn families_agree_for_small_arguments() {
        // the difference starts at n = 2 with factor (q^alpha - 1)
        let (alpha, q, z) = (0.75, 0.5, 0.01);
        let e = ml_e(alpha, z, q).unwrap();
        let big = ml_e_entire(alpha, z, q).unwrap();
        let lead = (q.powf(alpha) - 1.0).abs() * z * z / qgamma(2.0 * alpha + 1.0, q).unwrap();
        assert!((e - big).abs() <= 1.5 * lead);
    }

    #[test]
    fn sampler_matches_scalar() {
        let lat = QLattice::new(0.5, 1.0, 32).unwrap();
        let f = ml_e_on(&lat, 0.75).unwrap();
        let g = ml_e_entire_on(&lat, 0.75, false).unwrap();
        for n in [0usize, 3, 10, 31] {
            let x = lat.node(n);
            assert!((f.value(n) - ml_e(0.75, x.powf(0.75), 0.5).unwrap()).abs() < 1e-15);
            assert!((g.value(n) - ml_e_entire(0.75, x.powf(0.75), 0.5).unwrap()).abs() < 1e-15);
        }
        assert_eq!(f.zero_value(), 1.0);
    }

    #[test]
    fn sampler_domain_guard() {
        // a(1-q) = 1.25 >= 1 puts the top node outside the disk
        let lat = QLattice::new(0.5, 2.5, 32).unwrap();
        assert!(ml_e_on(&lat, 0.75).is_err());
    }

    #[test]
    fn derivative_sampler_matches_power_rule() {
        // two-term cross-check at one node: d/dx sum over k of
        // x^(alpha k) / Gamma_q(alpha k + 1)
        let lat = QLattice::new(0.5, 1.0, 16).unwrap();
        let alpha = 0.75;
        let d = ml_e_dq_on(&lat, alpha).unwrap();
        let x = lat.node(4);
        let mut want = 0.0;
        for k in (1..200).rev() {
            let kf = k as f64 * alpha;
            want += qnum(kf, 0.5) * x.powf(kf - 1.0) / qgamma(kf + 1.0, 0.5).unwrap();
        }
        assert!((d.value(4) - want).abs() <= 1e-13 * want.abs());
        assert_eq!(d.zero_value(), 0.0);
    }

    #[test]
    fn caputo_eigen_identity_on_padded_lattice() {
        // the left integral of order 1-alpha applied to the exact
        // q-derivative samples reproduces e(x^alpha) on the read window
        let (q, alpha) = (0.5, 0.75);
        let a = 0.5 / (1.0 - q);
        let base = QLattice::new(q, a, 64).unwrap();
        let lat = base.deepened(base.quadrature_pad(1.0 - alpha));
        let e = ml_e_on(&lat, alpha).unwrap();
        let de = ml_e_dq_on(&lat, alpha).unwrap();
        let v = ileft(&de, FracOrder::new(1.0 - alpha).unwrap());
        for n in 0..64 {
            let rel = (v.value(n) - e.value(n)).abs() / e.value(n).abs();
            assert!(rel <= 1e-8, "node {n}: rel {rel:.3e}");
        }
    }

    #[test]
    fn entire_family_shift_identity_on_padded_lattice() {
        // same composition sends E(x^alpha) to E((qx)^alpha)
        let (q, alpha) = (0.5, 0.75);
        let base = QLattice::new(q, 1.0, 64).unwrap();
        let lat = base.deepened(base.quadrature_pad(1.0 - alpha));
        let d_big = ml_e_entire_dq_on(&lat, alpha).unwrap();
        let v = ileft(&d_big, FracOrder::new(1.0 - alpha).unwrap());
        let shifted = ml_e_entire_on(&lat, alpha, true).unwrap();
        for n in 0..64 {
            let rel = (v.value(n) - shifted.value(n)).abs() / shifted.value(n).abs();
            assert!(rel <= 1e-8, "node {n}: rel {rel:.3e}");
        }
    }
}
