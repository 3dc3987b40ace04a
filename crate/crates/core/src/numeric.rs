//! Small numeric helpers shared across modules.

/// Neumaier's compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for KahanSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = KahanSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<KahanSum>().value()
}

/// `-p log2 p` with the `0 log 0 = 0` convention.
pub fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.log2()
    } else {
        0.0
    }
}

/// `sum_{j > n} j * y^j` for `0 <= y < 1`.
pub fn weighted_geometric_tail(n: u64, y: f64) -> f64 {
    debug_assert!((0.0..1.0).contains(&y));
    let n = n as f64;
    y.powf(n + 1.0) * ((n + 1.0) - n * y) / ((1.0 - y) * (1.0 - y))
}

/// `sum_{j > n} y^j` for `0 <= y < 1`.
pub fn geometric_tail(n: u64, y: f64) -> f64 {
    debug_assert!((0.0..1.0).contains(&y));
    y.powf(n as f64 + 1.0) / (1.0 - y)
}
