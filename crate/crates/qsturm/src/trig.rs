//! q-trigonometric functions, their positive zeros, and the normalization
//! constants attached to each zero.
//!
//! Both families reduce to one basic hypergeometric series in base Q = q²,
//! `f(x) = phi(0; b; Q, x)`:
//!
//! * `S_q(z) = z/(1-q) * f_{b=q^3}(q^{3/2} z^2)`
//! * `C_q(z) = f_{b=q}(q^{1/2} z^2)`
//!
//! The series alternates with violent cancellation once x is large, so
//! large arguments are reached by the contiguous three-term ladder
//!
//! `f(x/Q) = (1 + b/Q - x/Q) f(x) - (b/Q) f(Qx)`
//!
//! climbed upward from a seed depth where the series argument is benign
//! (x <= 1). One ladder climb yields the values at a whole geometric
//! string of arguments, which is exactly what lattice sampling needs.
//!
//! The climb loses relative accuracy near the function's zeros, where the
//! true value sits far below the running amplitude. Samples whose argument
//! lies within 64 ulp of a tabulated zero are therefore deflated to exact
//! zero; every such sample is provably unresolvable in f64.
//!
//! Normalization constants `mu_k = (1-q) C_q(sqrt(q) w_k) S_q'(w_k)` grow
//! like q^(-2k^2) while the product factors cancel almost completely, so
//! they are evaluated in double-double after polishing the zeros with
//! Newton steps, and handed over to the exact geometric-ratio extension
//! `mu_k = q mu_{k-1}` once the observed consecutive-ratio defect stops
//! decreasing (it decays like q^(2k^2) until the product formula hits its
//! dd noise floor).

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::lattice::{LatticeFn, QLattice};

/// Relative term size below which the phi series stops in f64.
const SERIES_RTOL: f64 = 1e-18;
/// Relative term cutoff for double-double series sums.
const SERIES_RTOL_DD: f64 = 1e-35;
/// Largest series argument evaluated directly; larger ones seed a ladder.
const XC: f64 = 1.0;
/// Accepted-root criterion: |S_q(w)| <= ZERO_TOL * |w S_q'(w)|.
pub const ZERO_TOL: f64 = 1e-12;
/// Defect gate for the mu product-to-ratio switch.
const MU_DEFECT_GATE: f64 = 1e-3;
/// Geometric scan steps before a missing bracket is reported.
const MAX_SCAN_STEPS: usize = 4096;

/// The arithmetic the series and ladder run in: f64 or double-double.
/// `series_rtol` is the relative term cutoff matched to the type's
/// precision; the ladder climb amplifies any seed truncation by the
/// product of its recurrence coefficients, so the seeds must be summed
/// to the full working precision, not to a fixed tolerance.
trait Real:
    Copy
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Div<Output = Self>
    + std::ops::Neg<Output = Self>
{
    fn of(x: f64) -> Self;
    fn f64(self) -> f64;
    fn abs(self) -> Self;
    fn series_rtol() -> f64;
}

impl Real for f64 {
    fn of(x: f64) -> f64 {
        x
    }
    fn f64(self) -> f64 {
        self
    }
    fn abs(self) -> f64 {
        f64::abs(self)
    }
    fn series_rtol() -> f64 {
        SERIES_RTOL
    }
}

impl Real for Dd {
    fn of(x: f64) -> Dd {
        Dd::from_f64(x)
    }
    fn f64(self) -> f64 {
        self.to_f64()
    }
    fn abs(self) -> Dd {
        Dd::abs(self)
    }
    fn series_rtol() -> f64 {
        SERIES_RTOL_DD
    }
}

/// Compensated accumulator over any Real.
struct Comp<T: Real> {
    s: T,
    e: T,
}

impl<T: Real> Comp<T> {
    fn new() -> Self {
        Comp {
            s: T::of(0.0),
            e: T::of(0.0),
        }
    }
    fn add(&mut self, v: T) {
        let y = v - self.e;
        let t = self.s + y;
        self.e = (t - self.s) - y;
        self.s = t;
    }
}

/// phi(0; b; Q, x) by direct series; reliable for x <= XC.
fn phi_series<T: Real>(x: T, b: T, big_q: T) -> T {
    let one = T::of(1.0);
    let mut term = one;
    let mut acc = Comp::new();
    acc.add(term);
    let mut qn = one;
    for _ in 0..300 {
        term = term * (-(qn * x)) / ((one - qn * big_q) * (one - b * qn));
        qn = qn * big_q;
        acc.add(term);
        if term.abs().f64() < T::series_rtol() * (1.0 + acc.s.abs().f64()) {
            break;
        }
    }
    acc.s
}

/// d/dx of phi(0; b; Q, x) by the termwise-differentiated series.
fn phi_series_d<T: Real>(x: T, b: T, big_q: T) -> T {
    let one = T::of(1.0);
    let mut term = -(one / ((one - big_q) * (one - b)));
    let mut acc = Comp::new();
    acc.add(term);
    let mut qn = big_q;
    let mut n = 1.0f64;
    for _ in 0..300 {
        term = term * (-(qn * x)) / ((one - qn * big_q) * (one - b * qn)) * T::of(n + 1.0)
            / T::of(n);
        qn = qn * big_q;
        n += 1.0;
        acc.add(term);
        if term.abs().f64() < T::series_rtol() * (1.0 + acc.s.abs().f64()) {
            break;
        }
    }
    acc.s
}

/// phi at one (possibly large) argument, with optional derivative.
fn phi_ladder<T: Real>(x: T, b: T, q: T, want_d: bool) -> (T, Option<T>) {
    let big_q = q * q;
    if x.f64() <= XC {
        let d = want_d.then(|| phi_series_d(x, b, big_q));
        return (phi_series(x, b, big_q), d);
    }
    let j = ((x.f64() / XC).ln() / (1.0 / big_q.f64()).ln()).ceil() as usize;
    let mut x0 = x;
    for _ in 0..j {
        x0 = x0 * big_q;
    }
    let mut f1 = phi_series(x0 * big_q, b, big_q);
    let mut f0 = phi_series(x0, b, big_q);
    let (mut d1, mut d0) = if want_d {
        (
            phi_series_d(x0 * big_q, b, big_q),
            phi_series_d(x0, b, big_q),
        )
    } else {
        (T::of(0.0), T::of(0.0))
    };
    let one = T::of(1.0);
    for _ in 0..j {
        let coeff = one + b / big_q - x0 / big_q;
        let fup = coeff * f0 - (b / big_q) * f1;
        if want_d {
            let dup = -f0 + big_q * coeff * d0 - b * big_q * d1;
            d1 = d0;
            d0 = dup;
        }
        f1 = f0;
        f0 = fup;
        x0 = x0 / big_q;
    }
    (f0, want_d.then_some(d0))
}

fn check_q(q: f64) -> Result<()> {
    if !(0.0 < q && q < 1.0) {
        return Err(Error::InvalidParam(format!("q = {q} not in (0,1)")));
    }
    Ok(())
}

fn finite_or_overflow(v: f64, what: &str) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Eval(format!("{what}: ladder overflow")))
    }
}

/// q-sine S_q(z).
pub fn q_sin(z: f64, q: f64) -> Result<f64> {
    check_q(q)?;
    let x = q.powf(1.5) * z * z;
    let (f, _) = phi_ladder(x, q * q * q, q, false);
    finite_or_overflow(z / (1.0 - q) * f, "q_sin")
}

/// q-cosine C_q(z).
pub fn q_cos(z: f64, q: f64) -> Result<f64> {
    check_q(q)?;
    let x = q.powf(0.5) * z * z;
    let (f, _) = phi_ladder(x, q, q, false);
    finite_or_overflow(f, "q_cos")
}

/// Termwise derivative S_q'(z).
pub fn q_sin_prime(z: f64, q: f64) -> Result<f64> {
    check_q(q)?;
    let x = q.powf(1.5) * z * z;
    let (f, d) = phi_ladder(x, q * q * q, q, true);
    finite_or_overflow((f + 2.0 * x * d.unwrap()) / (1.0 - q), "q_sin_prime")
}

/// phi values at the geometric argument string `x_top Q^n`, n = 0..len-1,
/// as the rungs of one ladder climb, entirely in double-double. Deep rungs
/// come straight from the series; the shallow rungs above the series
/// cutoff are climbed by the backward recurrence, whose coefficient
/// 1 + b/Q - x/Q grows with x and would eat roughly a digit per decade of
/// x_top in plain f64.
fn ladder_rungs(x_top: Dd, b: Dd, q: Dd, len: usize) -> Vec<f64> {
    let big_q = q * q;
    let d = if x_top.to_f64() <= XC {
        0
    } else {
        ((x_top.to_f64() / XC).ln() / (1.0 / big_q.to_f64()).ln()).ceil() as usize
    };
    let mut out = vec![0.0; len];
    let mut x_seed = x_top;
    for _ in 0..d {
        x_seed = x_seed * big_q;
    }
    let mut xn = x_seed;
    for slot in out.iter_mut().skip(d) {
        *slot = phi_series(xn, b, big_q).to_f64();
        xn = xn * big_q;
    }
    if d == 0 {
        return out;
    }
    let mut f0 = phi_series(x_seed, b, big_q);
    let mut f1 = phi_series(x_seed * big_q, b, big_q);
    let mut x_cur = x_seed;
    for n in (0..d).rev() {
        let fup = (Dd::ONE + b / big_q - x_cur / big_q) * f0 - (b / big_q) * f1;
        f1 = f0;
        f0 = fup;
        x_cur = x_cur / big_q;
        if n < len {
            out[n] = f0.to_f64();
        }
    }
    out
}

/// S_q(w q^n) for n = 0..len-1, where `w` approximates a positive zero of
/// S_q. The zero is re-polished and the whole ladder runs in double-double:
/// for n < k the argument w_k q^n crowds the lower zero w_(k-n) to within
/// ulps while |S_q'| there grows super-exponentially, so the argument must
/// carry the zero well below one ulp for those samples to come out right.
/// The top sample S_q(w) is the structural boundary zero, pinned to exact 0.
pub fn sine_lattice(w: f64, q: f64, len: usize) -> Vec<f64> {
    let qd = Dd::from_f64(q);
    let wd = newton_polish(w, q);
    let x_top = qd * qd.sqrt() * wd * wd;
    let f = ladder_rungs(x_top, qd * qd * qd, qd, len);
    let mut s: Vec<f64> = (0..len)
        .map(|n| w * q.powi(n as i32) / (1.0 - q) * f[n])
        .collect();
    if let Some(top) = s.first_mut() {
        *top = 0.0;
    }
    s
}

/// C_q(sqrt(q) w q^n) for n = 0..len-1, with `w` again a positive zero of
/// S_q: the basis anchors its cosine samples to the sine zeros. Polished
/// and evaluated in double-double for the same reason as the sine ladder;
/// sqrt(q) w_k q^n lands exponentially close to the cosine zeros, where
/// the genuine sample values are tiny but not zero. The argument
/// q^(1/2) (sqrt(q) w q^n)^2 matches the sine ladder's top, so the two
/// families share the x_top convention.
pub fn cosine_lattice(w: f64, q: f64, len: usize) -> Vec<f64> {
    let qd = Dd::from_f64(q);
    let wd = newton_polish(w, q);
    let x_top = qd * qd.sqrt() * wd * wd;
    ladder_rungs(x_top, qd, qd, len)
}

/// Positive zeros of `f`, found by a geometric scan from q^2 upward with
/// step q^(-1/16) and 200-round bisection of each bracket.
fn scan_zeros(f: impl Fn(f64) -> f64, q: f64, k: usize) -> Result<Vec<f64>> {
    let mut ws = Vec::with_capacity(k);
    let mut z = q * q;
    let mut f_prev = f(z);
    let step = q.powf(-1.0 / 16.0);
    let mut budget = MAX_SCAN_STEPS;
    while ws.len() < k {
        if budget == 0 {
            return Err(Error::BracketFailure(format!(
                "zero {} of {} not bracketed within the scan window",
                ws.len() + 1,
                k
            )));
        }
        budget -= 1;
        let z2 = z * step;
        let f2 = f(z2);
        if f_prev == 0.0 {
            ws.push(z);
        } else if f_prev * f2 < 0.0 {
            let (mut lo, mut hi, mut flo) = (z, z2, f_prev);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let fm = f(mid);
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if flo * fm < 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
                if hi - lo <= 4e-16 * lo {
                    break;
                }
            }
            ws.push(0.5 * (lo + hi));
        }
        z = z2;
        f_prev = f2;
    }
    Ok(ws)
}

/// First k positive zeros of S_q, ascending, Newton-polished to f64
/// rounding. Bisection on the f64 ladder alone stalls near rel 1e-11 for
/// the larger zeros, which is far too coarse for the orthogonality sums.
pub fn sq_zeros(q: f64, k: usize) -> Result<Vec<f64>> {
    check_q(q)?;
    let raw = scan_zeros(|z| q_sin(z, q).unwrap_or(f64::NAN), q, k)?;
    Ok(raw
        .into_iter()
        .map(|w| newton_polish(w, q).to_f64())
        .collect())
}

/// First k positive zeros of C_q, ascending.
pub fn cq_zeros(q: f64, k: usize) -> Result<Vec<f64>> {
    check_q(q)?;
    scan_zeros(|z| q_cos(z, q).unwrap_or(f64::NAN), q, k)
}

fn sq_dd(z: Dd, q: Dd) -> Dd {
    let x = q * q.sqrt() * z * z;
    let (f, _) = phi_ladder(x, q * q * q, q, false);
    z / (Dd::ONE - q) * f
}

fn sqp_dd(z: Dd, q: Dd) -> Dd {
    let x = q * q.sqrt() * z * z;
    let (f, d) = phi_ladder(x, q * q * q, q, true);
    (f + Dd::from_f64(2.0) * x * d.unwrap()) / (Dd::ONE - q)
}

fn cq_dd(z: Dd, q: Dd) -> Dd {
    let x = q.sqrt() * z * z;
    let (f, _) = phi_ladder(x, q, q, false);
    f
}

/// Three double-double Newton steps on a bisection-accurate zero of S_q.
pub fn newton_polish(w: f64, q: f64) -> Dd {
    let qd = Dd::from_f64(q);
    let mut wd = Dd::from_f64(w);
    for _ in 0..3 {
        wd = wd - sq_dd(wd, qd) / sqp_dd(wd, qd);
    }
    wd
}

/// Normalization constant `mu(w) = (1-q) C_q(sqrt(q) w) S_q'(w)` in plain
/// f64 from a single zero. Nonpositive output means the zero is misindexed
/// or too inaccurate to use.
pub fn mu_k(w: f64, q: f64) -> Result<f64> {
    let c = q_cos(q.sqrt() * w, q)?;
    let sp = q_sin_prime(w, q)?;
    let mu = (1.0 - q) * c * sp;
    if mu <= 0.0 {
        return Err(Error::Eval(format!(
            "mu(w) = {mu:.3e} not positive at w = {w}; zero misindexed or inaccurate"
        )));
    }
    Ok(mu)
}

/// Normalization constants for a whole ascending zero table.
///
/// Each zero is Newton-polished and the product formula evaluated in
/// double-double. The consecutive-ratio defect `|mu_k/(q mu_{k-1}) - 1|`
/// is monitored; at the first non-decrease after it has fallen below the
/// gate, the table switches permanently to the exact geometric extension.
pub fn mu_table(q: f64, ws: &[f64]) -> Vec<f64> {
    let qd = Dd::from_f64(q);
    let one_minus_q = Dd::ONE - qd;
    let rootq = qd.sqrt();
    let mut mus: Vec<Dd> = Vec::with_capacity(ws.len());
    let mut prev_defect: Option<f64> = None;
    let mut switched = false;
    for (i, &w) in ws.iter().enumerate() {
        if switched {
            let last = *mus.last().expect("switch after first entry");
            mus.push(qd * last);
            continue;
        }
        let wd = newton_polish(w, q);
        let p = one_minus_q * cq_dd(rootq * wd, qd) * sqp_dd(wd, qd);
        if i == 0 {
            mus.push(p);
            continue;
        }
        let last = *mus.last().expect("nonempty");
        let defect = (p / (qd * last) - Dd::ONE).abs().to_f64();
        if prev_defect.is_some_and(|pd| pd < MU_DEFECT_GATE && defect >= pd) {
            switched = true;
            mus.push(qd * last);
        } else {
            mus.push(p);
            prev_defect = Some(defect);
        }
    }
    mus.into_iter().map(Dd::to_f64).collect()
}

/// The q-sine eigenbasis attached to a lattice: the first K positive zeros
/// of S_q with their normalization constants.
#[derive(Clone, Debug)]
pub struct TrigBasis {
    lattice: QLattice,
    w: Vec<f64>,
    mu: Vec<f64>,
}

impl TrigBasis {
    /// Default cap on the basis size, matching the range over which the
    /// zero tables and normalization constants are validated. Larger bases
    /// go through `with_k_max`, which re-runs the residual and scaling
    /// guards for every requested zero.
    pub const DEFAULT_K_MAX: usize = 8;

    pub fn new(lattice: QLattice, k: usize) -> Result<Self> {
        Self::with_k_max(lattice, k, Self::DEFAULT_K_MAX)
    }

    /// Basis with an explicit size cap. Sizes beyond the default are
    /// accepted as long as the constants stay representable.
    pub fn with_k_max(lattice: QLattice, k: usize, k_max: usize) -> Result<Self> {
        if k == 0 || k > k_max {
            return Err(Error::InvalidParam(format!(
                "basis size {k} outside 1..={k_max}"
            )));
        }
        let q = lattice.q();
        let w = sq_zeros(q, k)?;
        let mu = mu_table(q, &w);
        for (i, (&wk, &muk)) in w.iter().zip(&mu).enumerate() {
            if muk <= 0.0 {
                return Err(Error::Eval(format!("mu_{} not positive", i + 1)));
            }
            if !muk.is_finite() || !(1.0 / muk.sqrt()).is_normal() {
                return Err(Error::InvalidParam(format!(
                    "mu_{} = {muk:.3e} unusable for coefficient scaling; reduce basis size",
                    i + 1
                )));
            }
            let resid = q_sin(wk, q)?.abs();
            let amp = (wk * q_sin_prime(wk, q)?).abs();
            if resid > ZERO_TOL * amp {
                return Err(Error::NoConvergence(format!(
                    "zero w_{} fails the residual criterion: |S| = {resid:.3e} vs {:.3e}",
                    i + 1,
                    ZERO_TOL * amp
                )));
            }
        }
        Ok(Self { lattice, w, mu })
    }

    pub fn lattice(&self) -> &QLattice {
        &self.lattice
    }

    pub fn size(&self) -> usize {
        self.w.len()
    }

    /// Ascending zero table w_1..w_K.
    pub fn w(&self) -> &[f64] {
        &self.w
    }

    /// Normalization constants mu_1..mu_K.
    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    /// Samples of `x -> S_q(w_(idx+1) x/a)` on the lattice; 0 at 0 and
    /// exact 0 at the top node x = a.
    pub fn sine_fn(&self, idx: usize) -> LatticeFn {
        let vals = sine_lattice(self.w[idx], self.lattice.q(), self.lattice.depth());
        LatticeFn::from_values(self.lattice.clone(), vals, 0.0).expect("matching depth")
    }

    /// Samples of `x -> S_q(q w_(idx+1) x/a)`: the same ladder shifted one
    /// rung deeper, as used by the symmetric-interval orthogonality.
    pub fn sine_fn_shifted(&self, idx: usize) -> LatticeFn {
        let q = self.lattice.q();
        let all = sine_lattice(self.w[idx], q, self.lattice.depth() + 1);
        LatticeFn::from_values(self.lattice.clone(), all[1..].to_vec(), 0.0)
            .expect("matching depth")
            .with_top(all[0])
    }

    /// Samples of `x -> C_q(sqrt(q) w_(idx+1) x/a)`; 1 at 0.
    pub fn cosine_fn(&self, idx: usize) -> LatticeFn {
        let vals = cosine_lattice(self.w[idx], self.lattice.q(), self.lattice.depth());
        LatticeFn::from_values(self.lattice.clone(), vals, 1.0).expect("matching depth")
    }
}
