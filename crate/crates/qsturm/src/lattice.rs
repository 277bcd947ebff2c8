//! q-geometric lattices and functions sampled on them.
//!
//! The domain is the point set `{a q^n : n = 0..depth-1}` together with the
//! limit point 0. A [`LatticeFn`] stores one sample per retained node plus the
//! value at 0; integration and q-differences act on those samples.
//!
//! Two boundary conventions run through everything built on top:
//!
//! * The Jackson integral truncates the geometric node sum at `depth` and
//!   assigns the remaining mass to the value at 0, so
//!   `int_0^a f = a(1-q) sum_{n<N} q^n f(a q^n) + a q^N f(0)`.
//! * The forward q-difference at the deepest node and at 0 is the quotient
//!   against the value at 0. The lattice has no node below `a q^{N-1}`, and
//!   this is the discrete surrogate for the q-regular limit.

use crate::error::{Error, Result};
use crate::sum::Kahan;

/// Truncated q-geometric lattice: nodes `a q^n`, `n = 0..depth-1`.
#[derive(Clone, Debug, PartialEq)]
pub struct QLattice {
    q: f64,
    a: f64,
    depth: usize,
}

impl QLattice {
    /// Minimum retained depth; shallower lattices leave too much tail mass
    /// for any of the operator tolerances to hold.
    pub const MIN_DEPTH: usize = 8;

    pub fn new(q: f64, a: f64, depth: usize) -> Result<Self> {
        if !(0.0 < q && q < 1.0) || !q.is_finite() {
            return Err(Error::InvalidParam(format!("q = {q} not in (0,1)")));
        }
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::InvalidParam(format!("a = {a} not positive")));
        }
        if depth < Self::MIN_DEPTH {
            return Err(Error::InvalidParam(format!(
                "depth {depth} below minimum {}",
                Self::MIN_DEPTH
            )));
        }
        Ok(Self { q, a, depth })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Node coordinate `a q^n`.
    pub fn node(&self, n: usize) -> f64 {
        self.a * self.q.powi(n as i32)
    }

    /// All node coordinates, shallow to deep.
    pub fn nodes(&self) -> Vec<f64> {
        (0..self.depth).map(|n| self.node(n)).collect()
    }

    /// Same q and a, `extra` more retained levels.
    pub fn deepened(&self, extra: usize) -> QLattice {
        QLattice {
            q: self.q,
            a: self.a,
            depth: self.depth + extra,
        }
    }

    /// Extra depth needed so that a left fractional integral of order
    /// `alpha` read on this lattice's nodes has relative truncation error
    /// below about 1e-11 at the deepest one. The node-sum tail of the left
    /// integral decays like `q^(alpha m)` in the number m of levels below
    /// the output node.
    pub fn quadrature_pad(&self, alpha: f64) -> usize {
        // 25.33 = ln 1e11
        (25.33 / (alpha * (1.0 / self.q).ln())).ceil() as usize + 8
    }
}

/// Function samples on a [`QLattice`]: one value per node, the value at 0,
/// and optionally a value at the virtual point `a/q` one level above the
/// lattice (needed only by the backward q-difference at `x = a`).
#[derive(Clone, Debug)]
pub struct LatticeFn {
    lattice: QLattice,
    values: Vec<f64>,
    zero_value: f64,
    top_value: Option<f64>,
}

impl LatticeFn {
    pub fn from_values(lattice: QLattice, values: Vec<f64>, zero_value: f64) -> Result<Self> {
        if values.len() != lattice.depth() {
            return Err(Error::InvalidParam(format!(
                "{} values for depth-{} lattice",
                values.len(),
                lattice.depth()
            )));
        }
        Ok(Self {
            lattice,
            values,
            zero_value,
            top_value: None,
        })
    }

    /// Sample a closure at every node, at 0, and at the extension point a/q.
    pub fn sample<F: Fn(f64) -> f64>(lattice: &QLattice, f: F) -> Self {
        let values = lattice.nodes().iter().map(|&x| f(x)).collect();
        let top = f(lattice.a() / lattice.q());
        Self {
            lattice: lattice.clone(),
            values,
            zero_value: f(0.0),
            top_value: Some(top),
        }
    }

    /// Sample a closure at the nodes and at 0 only (no extension value).
    pub fn sample_no_top<F: Fn(f64) -> f64>(lattice: &QLattice, f: F) -> Self {
        let values = lattice.nodes().iter().map(|&x| f(x)).collect();
        Self {
            lattice: lattice.clone(),
            values,
            zero_value: f(0.0),
            top_value: None,
        }
    }

    pub fn with_top(mut self, top: f64) -> Self {
        self.top_value = Some(top);
        self
    }

    pub fn lattice(&self) -> &QLattice {
        &self.lattice
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, n: usize) -> f64 {
        self.values[n]
    }

    pub fn zero_value(&self) -> f64 {
        self.zero_value
    }

    pub fn top_value(&self) -> Option<f64> {
        self.top_value
    }

    /// Max of |values| and |zero value|.
    pub fn sup_norm(&self) -> f64 {
        self.values
            .iter()
            .map(|v| v.abs())
            .fold(self.zero_value.abs(), f64::max)
    }

    /// Whether the deepest sample has settled onto the declared value at 0,
    /// the lattice reading of q-regularity.
    pub fn is_q_regular(&self, tol: f64) -> bool {
        let last = self.values[self.values.len() - 1];
        (last - self.zero_value).abs() <= tol * (1.0 + self.zero_value.abs())
    }

    /// Entrywise combination with another function on the same lattice.
    pub fn zip_with<F: Fn(f64, f64) -> f64>(&self, other: &LatticeFn, f: F) -> Result<LatticeFn> {
        if self.lattice != other.lattice {
            return Err(Error::LatticeMismatch(
                "zip_with over different lattices".into(),
            ));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&x, &y)| f(x, y))
            .collect();
        let top = match (self.top_value, other.top_value) {
            (Some(x), Some(y)) => Some(f(x, y)),
            _ => None,
        };
        Ok(LatticeFn {
            lattice: self.lattice.clone(),
            values,
            zero_value: f(self.zero_value, other.zero_value),
            top_value: top,
        })
    }

    /// Entrywise map.
    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> LatticeFn {
        LatticeFn {
            lattice: self.lattice.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
            zero_value: f(self.zero_value),
            top_value: self.top_value.map(&f),
        }
    }

    /// Forward q-difference `(D_q f)(x) = (f(x) - f(qx)) / ((1-q) x)`.
    ///
    /// At the deepest node and at 0 the value is the difference quotient
    /// against the value at 0. When the input carries an extension value at
    /// a/q the output's extension value is the quotient there.
    pub fn dq(&self) -> LatticeFn {
        let lat = &self.lattice;
        let (q, n_total) = (lat.q(), lat.depth());
        let mut out = vec![0.0; n_total];
        for n in 0..n_total - 1 {
            out[n] = (self.values[n] - self.values[n + 1]) / ((1.0 - q) * lat.node(n));
        }
        let surrogate =
            (self.values[n_total - 1] - self.zero_value) / lat.node(n_total - 1);
        out[n_total - 1] = surrogate;
        let top = self
            .top_value
            .map(|t| (t - self.values[0]) / ((1.0 - q) * lat.a() / q));
        LatticeFn {
            lattice: lat.clone(),
            values: out,
            zero_value: surrogate,
            top_value: top,
        }
    }

    /// Backward q-difference `(D_{q^{-1}} f)(x) = (D_q f)(x/q)`.
    ///
    /// The value at the top node `x = a` reads the sample at `a/q`, so the
    /// input must carry an extension value there.
    pub fn dq_inv(&self) -> Result<LatticeFn> {
        let lat = &self.lattice;
        let (q, n_total) = (lat.q(), lat.depth());
        let top = self.top_value.ok_or(Error::MissingTopValue)?;
        let mut out = vec![0.0; n_total];
        out[0] = (top - self.values[0]) / ((1.0 - q) * lat.a() / q);
        for n in 1..n_total {
            out[n] = (self.values[n - 1] - self.values[n]) / ((1.0 - q) * lat.node(n - 1));
        }
        let surrogate =
            (self.values[n_total - 1] - self.zero_value) / lat.node(n_total - 1);
        Ok(LatticeFn {
            lattice: lat.clone(),
            values: out,
            zero_value: surrogate,
            top_value: None,
        })
    }
}

/// Jackson integral over `[0, a]`.
pub fn jackson_int(f: &LatticeFn) -> f64 {
    let lat = f.lattice();
    let (q, a, n_total) = (lat.q(), lat.a(), lat.depth());
    let mut acc = Kahan::new();
    let mut qn = 1.0;
    for n in 0..n_total {
        acc.add(qn * f.value(n));
        qn *= q;
    }
    // qn = q^N here; the tail is the remaining geometric mass times f(0)
    a * (1.0 - q) * acc.value() + a * qn * f.zero_value()
}

/// Jackson integral between two lattice points, addressed by node index.
///
/// `lower_node >= upper_node`: the lower integration endpoint sits deeper in
/// the lattice. `lower_node == depth` addresses the point 0 and includes the
/// tail term.
pub fn jackson_int_partial(f: &LatticeFn, lower_node: usize, upper_node: usize) -> Result<f64> {
    let lat = f.lattice();
    let (q, a, n_total) = (lat.q(), lat.a(), lat.depth());
    if lower_node < upper_node || lower_node > n_total || upper_node >= n_total.max(1) {
        return Err(Error::InvalidParam(format!(
            "partial-integral node range [{lower_node}, {upper_node}] out of range for depth {n_total}"
        )));
    }
    let mut acc = Kahan::new();
    let mut qn = q.powi(upper_node as i32);
    for n in upper_node..lower_node.min(n_total) {
        acc.add(qn * f.value(n));
        qn *= q;
    }
    let mut s = a * (1.0 - q) * acc.value();
    if lower_node == n_total {
        s += a * q.powi(n_total as i32) * f.zero_value();
    }
    Ok(s)
}

/// Function samples on the symmetric lattice `{+-a q^n}` plus the value at 0.
#[derive(Clone, Debug)]
pub struct SymLatticeFn {
    lattice: QLattice,
    values_pos: Vec<f64>,
    values_neg: Vec<f64>,
    zero_value: f64,
}

impl SymLatticeFn {
    pub fn new(
        lattice: QLattice,
        values_pos: Vec<f64>,
        values_neg: Vec<f64>,
        zero_value: f64,
    ) -> Result<Self> {
        if values_pos.len() != lattice.depth() || values_neg.len() != lattice.depth() {
            return Err(Error::InvalidParam(
                "sample count does not match lattice depth".into(),
            ));
        }
        Ok(Self {
            lattice,
            values_pos,
            values_neg,
            zero_value,
        })
    }

    pub fn sample<F: Fn(f64) -> f64>(lattice: &QLattice, f: F) -> Self {
        let values_pos = lattice.nodes().iter().map(|&x| f(x)).collect();
        let values_neg = lattice.nodes().iter().map(|&x| f(-x)).collect();
        Self {
            lattice: lattice.clone(),
            values_pos,
            values_neg,
            zero_value: f(0.0),
        }
    }

    /// Odd extension of one-sided samples: f(-x) = -f(x), f(0) = 0.
    pub fn odd_extension(f: &LatticeFn) -> Self {
        Self {
            lattice: f.lattice().clone(),
            values_pos: f.values().to_vec(),
            values_neg: f.values().iter().map(|v| -v).collect(),
            zero_value: 0.0,
        }
    }

    pub fn lattice(&self) -> &QLattice {
        &self.lattice
    }

    pub fn pos(&self) -> &[f64] {
        &self.values_pos
    }

    pub fn neg(&self) -> &[f64] {
        &self.values_neg
    }

    pub fn zero_value(&self) -> f64 {
        self.zero_value
    }

    /// Whether the negative-side samples mirror the positive ones with a
    /// sign flip and the value at 0 vanishes.
    pub fn is_odd(&self, tol: f64) -> bool {
        if self.zero_value.abs() > tol {
            return false;
        }
        self.values_pos
            .iter()
            .zip(&self.values_neg)
            .all(|(&p, &m)| (p + m).abs() <= tol * (1.0 + p.abs()))
    }
}

/// Jackson integral over `[-a, a]`: the sum of the two one-sided integrals.
pub fn jackson_int_sym(f: &SymLatticeFn) -> f64 {
    let lat = f.lattice();
    let (q, a, n_total) = (lat.q(), lat.a(), lat.depth());
    let mut acc = Kahan::new();
    let mut qn = 1.0;
    for n in 0..n_total {
        acc.add(qn * (f.values_pos[n] + f.values_neg[n]));
        qn *= q;
    }
    a * (1.0 - q) * acc.value() + 2.0 * a * qn * f.zero_value()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(q: f64, a: f64, n: usize) -> QLattice {
        QLattice::new(q, a, n).unwrap()
    }

    #[test]
    fn constructor_guards() {
        assert!(QLattice::new(0.0, 1.0, 64).is_err());
        assert!(QLattice::new(1.0, 1.0, 64).is_err());
        assert!(QLattice::new(0.5, 0.0, 64).is_err());
        assert!(QLattice::new(0.5, 1.0, 4).is_err());
        assert!(QLattice::new(0.5, 1.0, 8).is_ok());
    }

    #[test]
    fn nodes_decrease_strictly() {
        let l = lat(0.5, 2.0, 16);
        let xs = l.nodes();
        assert_eq!(xs.len(), 16);
        for w in xs.windows(2) {
            assert!(w[1] < w[0]);
        }
        assert_eq!(l.node(0), 2.0);
    }

    #[test]
    fn jackson_integrates_monomials_exactly() {
        // int_0^1 x^k d_q x = 1 / [k+1]_q with the geometric series summed
        // in closed form; the lattice truncation is covered by the zero tail.
        let l = lat(0.5, 1.0, 64);
        let one = LatticeFn::sample(&l, |_| 1.0);
        assert!((jackson_int(&one) - 1.0).abs() < 1e-15);
        let x = LatticeFn::sample(&l, |x| x);
        assert!((jackson_int(&x) - 2.0 / 3.0).abs() < 1e-15);
        let x2 = LatticeFn::sample(&l, |x| x * x);
        assert!((jackson_int(&x2) - 4.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn jackson_is_linear() {
        let l = lat(0.3, 1.5, 32);
        let f = LatticeFn::sample(&l, |x| x * x - 0.25);
        let g = LatticeFn::sample(&l, |x| 1.0 / (1.0 + x));
        let combo = f.zip_with(&g, |a, b| 2.5 * a - 0.75 * b).unwrap();
        let direct = jackson_int(&combo);
        let split = 2.5 * jackson_int(&f) - 0.75 * jackson_int(&g);
        assert!((direct - split).abs() <= 1e-14 * (1.0 + direct.abs()));
    }

    #[test]
    fn partial_integral_conventions() {
        let l = lat(0.5, 1.0, 64);
        let one = LatticeFn::sample(&l, |_| 1.0);
        // identical endpoints
        assert_eq!(jackson_int_partial(&one, 3, 3).unwrap(), 0.0);
        // full range [0, a] equals the plain integral
        let full = jackson_int_partial(&one, 64, 0).unwrap();
        assert!((full - 1.0).abs() < 1e-15);
        // one level: int_{qa}^{a} 1 = a - qa
        let top = jackson_int_partial(&one, 1, 0).unwrap();
        assert!((top - 0.5).abs() < 1e-15);
        // additivity over adjacent ranges
        let f = LatticeFn::sample(&l, |x| x * x + 1.0);
        let whole = jackson_int_partial(&f, 20, 2).unwrap();
        let split = jackson_int_partial(&f, 20, 9).unwrap() + jackson_int_partial(&f, 9, 2).unwrap();
        assert!((whole - split).abs() <= 1e-15 * whole.abs());
        assert!(jackson_int_partial(&f, 65, 0).is_err());
        assert!(jackson_int_partial(&f, 2, 5).is_err());
    }

    #[test]
    fn dq_on_powers() {
        let l = lat(0.5, 1.0, 32);
        let c = LatticeFn::sample(&l, |_| 3.25);
        assert!(c.dq().sup_norm() < 1e-15);
        let x = LatticeFn::sample(&l, |x| x);
        let d = x.dq();
        for n in 0..32 {
            assert!((d.value(n) - 1.0).abs() < 1e-12);
        }
        // D_q x^2 = (1+q) x at interior nodes
        let x2 = LatticeFn::sample(&l, |x| x * x);
        let d2 = x2.dq();
        for n in 0..31 {
            assert!((d2.value(n) - 1.5 * l.node(n)).abs() < 1e-14);
        }
    }

    #[test]
    fn dq_inv_is_dq_shifted() {
        let l = lat(0.5, 1.0, 32);
        let f = LatticeFn::sample(&l, |x| x * x * x - 2.0 * x);
        let b = f.dq_inv().unwrap();
        let d = f.dq();
        // (D_{q^{-1}} f)(a q^n) = (D_q f)(a q^{n-1})
        for n in 1..32 {
            assert!((b.value(n) - d.value(n - 1)).abs() <= 1e-12 * (1.0 + d.value(n - 1).abs()));
        }
        // at x = a the quotient reads the extension sample, equal to the
        // top value of the forward difference
        assert!((b.value(0) - d.top_value().unwrap()).abs() <= 1e-12);
        // missing extension value is an error
        let g = LatticeFn::from_values(l.clone(), vec![1.0; 32], 1.0).unwrap();
        assert!(matches!(g.dq_inv(), Err(Error::MissingTopValue)));
    }

    #[test]
    fn fundamental_theorem_on_polynomials() {
        // int_0^a D_q F = F(a) - F(0)
        let l = lat(0.3, 1.0, 64);
        let f = LatticeFn::sample(&l, |x| x * x * x - 0.5 * x * x + 2.0 * x + 1.0);
        let got = jackson_int(&f.dq());
        let want = f.value(0) - f.zero_value();
        assert!((got - want).abs() <= 1e-10 * (1.0 + want.abs()));
    }

    #[test]
    fn symmetric_integral_splits_by_parity() {
        let l = lat(0.5, 1.0, 64);
        let odd = SymLatticeFn::sample(&l, |x| x * x * x);
        assert!(jackson_int_sym(&odd).abs() < 1e-15);
        assert!(odd.is_odd(1e-15));
        let c = SymLatticeFn::sample(&l, |_| 2.0);
        assert!((jackson_int_sym(&c) - 4.0).abs() < 1e-14);
        // f(x) = x^2 on [-1,1]: twice the one-sided value 4/7
        let x2 = SymLatticeFn::sample(&l, |x| x * x);
        assert!((jackson_int_sym(&x2) - 8.0 / 7.0).abs() < 1e-14);
    }

    #[test]
    fn q_regularity_surrogate() {
        let l = lat(0.5, 1.0, 64);
        let f = LatticeFn::sample(&l, |x| 1.0 + x.sqrt());
        assert!(f.is_q_regular(1e-9));
        let g = LatticeFn::from_values(l, vec![1.0; 64], 0.0).unwrap();
        assert!(!g.is_q_regular(1e-9));
    }
}
