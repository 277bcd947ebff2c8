//! Compensated accumulation.
//!
//! Every series and quadrature sum in this crate funnels through [`Kahan`].
//! The q-trigonometric series and the normalization constants cancel heavily,
//! and the fractional-operator node sums mix magnitudes across many decades;
//! plain summation loses digits that the tolerances downstream cannot spare.

/// Kahan (compensated) accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let y = v - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// Compensated sum of an iterator.
pub fn kahan_sum<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    let mut k = Kahan::new();
    for v in it {
        k.add(v);
    }
    k.value()
}
