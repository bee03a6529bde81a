//! Compensated summation with an order-fixed merge.
//!
//! Every floating-point series in this crate is accumulated with
//! [`CompensatedSum`]. Parallel code produces one partial accumulator per
//! partition and merges them in partition order, so the result depends only on
//! the partitioning, never on the number of worker threads.

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub const fn new() -> Self {
        Self { sum: 0.0, comp: 0.0 }
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    /// Folds another partial sum into this one. Both halves are added as
    /// ordinary terms so the operation is a deterministic function of the two
    /// operands.
    #[inline]
    pub fn merge(&mut self, other: &CompensatedSum) {
        self.add(other.sum);
        self.add(other.comp);
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl std::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_terms() {
        let acc: CompensatedSum = [1.0, 1e100, 1.0, -1e100].into_iter().collect();
        assert_eq!(acc.value(), 2.0);
    }

    #[test]
    fn harmonic_tail_matches_reverse_order() {
        let fwd: CompensatedSum = (1..200_000).map(|k| 1.0 / k as f64).collect();
        let rev: CompensatedSum = (1..200_000).rev().map(|k| 1.0 / k as f64).collect();
        assert!((fwd.value() - rev.value()).abs() < 1e-13);
    }

    #[test]
    fn merging_zero_partials_is_exact() {
        let mut a: CompensatedSum = [0.1, 0.2, 0.3].into_iter().collect();
        let before = a;
        a.merge(&CompensatedSum::new());
        assert_eq!(a, before);
    }
}
