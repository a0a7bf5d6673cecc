//! Small numerical helpers shared across modules.

/// Kahan-Babuska-Neumaier compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::new();
        iter.into_iter().for_each(|v| acc.add(v));
        acc
    }
}

/// Bisection for a sign change of `g` on `[lo, hi]`.
///
/// Requires `g(lo)` and `g(hi)` of opposite sign (or one of them zero).
/// Stops once the bracket is narrower than `tol` and returns the midpoint
/// along with the number of halvings performed.
pub fn bisect<F: Fn(f64) -> f64>(g: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, u32) {
    let mut g_lo = g(lo);
    if g_lo == 0.0 {
        return (lo, 0);
    }
    if g(hi) == 0.0 {
        return (hi, 0);
    }
    let mut depth = 0;
    while hi - lo > tol && depth < 200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let g_mid = g(mid);
        if g_mid == 0.0 {
            return (mid, depth + 1);
        }
        if (g_mid > 0.0) == (g_lo > 0.0) {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
        depth += 1;
    }
    (0.5 * (lo + hi), depth)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut acc = NeumaierSum::new();
        acc.add(1.0);
        for _ in 0..10_000 {
            acc.add(1e-16);
        }
        acc.add(-1.0);
        assert!((acc.value() - 1e-12).abs() < 1e-24);
    }

    #[test]
    fn bisect_finds_sqrt2() {
        let (r, depth) = bisect(|x| x * x - 2.0, 1.0, 2.0, 1e-14);
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-14);
        assert!(depth > 40);
    }
}
