//! Fractional Sturm–Liouville machinery on q-geometric lattices.
//!
//! The crate builds up in layers:
//!
//! * [`lattice`]: the truncated lattice `{a q^n}`, Jackson integration, and
//!   forward/backward q-differences.
//! * [`qpoch`]: q-Pochhammer symbols, the q-gamma function, q-numbers.
//! * [`frac`]: Riemann–Liouville and Caputo fractional q-integrals and
//!   q-derivatives of order `alpha` in `(0, 1]`, with per-node conditioning
//!   estimates and the operator norm bounds used by the error analysis.
//! * [`trig`]: the q-sine and q-cosine families, their positive zeros, and
//!   the normalization constants attached to each zero.
//! * [`mittag`]: the two q-Mittag-Leffler families and their fractional
//!   derivative samplers.
//! * [`fourier`]: q-Fourier sine coefficients, series synthesis, and the
//!   q-mean convergence diagnostics.
//! * [`eigen`]: a cyclic Jacobi eigensolver for the small dense symmetric
//!   matrices produced by the Ritz discretization.
//! * [`variational`]: functionals of the Caputo derivative, Euler–Lagrange
//!   residuals, isoperimetric residuals, and the Rayleigh quotient.
//! * [`ritz`]: the Sturm–Liouville problem type, stiffness assembly over the
//!   q-trigonometric basis, spectrum extraction, and eigenfunction synthesis.
//! * [`expr`]: a small arithmetic expression language for coefficient
//!   functions supplied on the command line.

pub mod dd;
pub mod error;
pub mod fourier;
pub mod frac;
pub mod lattice;
pub mod mittag;
pub mod qpoch;
pub mod sum;
pub mod trig;

pub use error::{Error, Result};
pub use fourier::{
    fourier_coeffs, holder_estimate, qmean_dist, qmean_dist_one_sided, sine_coeffs,
    FourierCoeffs, SineCoeffs,
};
pub use frac::{
    dleft_caputo, dleft_rl, dright_caputo, dright_rl, dright_rl_with_scale, ileft, iright,
    norm_bounds, FracOrder, NormBounds,
};
pub use lattice::{
    jackson_int, jackson_int_partial, jackson_int_sym, LatticeFn, QLattice, SymLatticeFn,
};
pub use mittag::{ml_e, ml_e_dq_on, ml_e_entire, ml_e_entire_dq_on, ml_e_entire_on, ml_e_on};
pub use qpoch::{qgamma, qnum, qpoch_finite, qpoch_inf, qpoch_real};
pub use trig::{
    cq_zeros, mu_k, mu_table, q_cos, q_sin, q_sin_prime, sq_zeros, TrigBasis,
};
