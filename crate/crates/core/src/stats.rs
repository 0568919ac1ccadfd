//! Streaming moment accumulators with an associative merge.
//!
//! Ensembles are reduced per-replica and merged in a fixed order (by replica
//! id), which makes the final statistics bit-identical regardless of how the
//! replica work was scheduled across threads.

/// Running mean and variance of a scalar sample (Welford's recurrence,
/// merged pairwise à la Chan–Golub–LeVeque).
#[derive(Debug, Clone, Copy, Default)]
pub struct RunningMoments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl RunningMoments {
    pub fn new() -> Self {
        Self::default()
    }

    /// Absorbs one observation.
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Absorbs another accumulator; equivalent (up to rounding) to having
    /// pushed its observations.
    pub fn merge(&mut self, other: &Self) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n1 = self.count as f64;
        let n2 = other.count as f64;
        let total = n1 + n2;
        let delta = other.mean - self.mean;
        self.mean += delta * n2 / total;
        self.m2 += other.m2 + delta * delta * n1 * n2 / total;
        self.count += other.count;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance; zero with fewer than two observations.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    pub fn std_dev(&self) -> f64 {
        self.variance().sqrt()
    }

    /// Standard error of the mean; zero with fewer than two observations.
    pub fn stderr(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.variance() / self.count as f64).sqrt()
        }
    }
}

/// Running covariance of a scalar pair, same merge discipline as
/// [`RunningMoments`].
#[derive(Debug, Clone, Copy, Default)]
pub struct RunningCovariance {
    count: u64,
    mean_x: f64,
    mean_y: f64,
    cross: f64,
}

impl RunningCovariance {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64, y: f64) {
        self.count += 1;
        let dx = x - self.mean_x;
        self.mean_x += dx / self.count as f64;
        self.mean_y += (y - self.mean_y) / self.count as f64;
        self.cross += dx * (y - self.mean_y);
    }

    pub fn merge(&mut self, other: &Self) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n1 = self.count as f64;
        let n2 = other.count as f64;
        let total = n1 + n2;
        let dx = other.mean_x - self.mean_x;
        let dy = other.mean_y - self.mean_y;
        self.mean_x += dx * n2 / total;
        self.mean_y += dy * n2 / total;
        self.cross += other.cross + dx * dy * n1 * n2 / total;
        self.count += other.count;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean_x(&self) -> f64 {
        self.mean_x
    }

    pub fn mean_y(&self) -> f64 {
        self.mean_y
    }

    /// Unbiased sample covariance; zero with fewer than two observations.
    pub fn covariance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.cross / (self.count - 1) as f64
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;
    use rand::Rng;

    fn two_pass_mean_var(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (mean, var)
    }

    #[test]
    fn matches_two_pass_computation() {
        let mut rng = crate::rng::rng_from_seed(11);
        let xs: Vec<f64> = (0..10_000).map(|_| rng.gen::<f64>() * 3.0 - 1.0).collect();
        let mut acc = RunningMoments::new();
        for &x in &xs {
            acc.push(x);
        }
        let (mean, var) = two_pass_mean_var(&xs);
        assert_relative_eq!(acc.mean(), mean, max_relative = 1e-12);
        assert_relative_eq!(acc.variance(), var, max_relative = 1e-10);
    }

    #[test]
    fn welford_survives_a_large_offset() {
        // Naive sum-of-squares loses all precision at offset 1e9; Welford
        // must keep the variance to full relative accuracy.
        let offset = 1.0e9;
        let xs = [offset + 1.0, offset + 2.0, offset + 3.0, offset + 4.0];
        let mut acc = RunningMoments::new();
        for &x in &xs {
            acc.push(x);
        }
        assert_relative_eq!(acc.variance(), 5.0 / 3.0, max_relative = 1e-12);
    }

    #[test]
    fn degenerate_counts() {
        let mut acc = RunningMoments::new();
        assert_eq!(acc.mean(), 0.0);
        assert_eq!(acc.variance(), 0.0);
        assert_eq!(acc.stderr(), 0.0);
        acc.push(2.5);
        assert_eq!(acc.mean(), 2.5);
        assert_eq!(acc.variance(), 0.0);
    }

    #[test]
    fn covariance_matches_two_pass() {
        let mut rng = crate::rng::rng_from_seed(13);
        let pairs: Vec<(f64, f64)> = (0..5_000)
            .map(|_| {
                let x: f64 = rng.gen();
                let y = 0.5 * x + rng.gen::<f64>();
                (x, y)
            })
            .collect();
        let mut acc = RunningCovariance::new();
        for &(x, y) in &pairs {
            acc.push(x, y);
        }
        let n = pairs.len() as f64;
        let mx = pairs.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pairs.iter().map(|p| p.1).sum::<f64>() / n;
        let cov = pairs
            .iter()
            .map(|p| (p.0 - mx) * (p.1 - my))
            .sum::<f64>()
            / (n - 1.0);
        assert_relative_eq!(acc.covariance(), cov, max_relative = 1e-10);
    }

    proptest! {
        #[test]
        fn merge_equals_sequential(xs in prop::collection::vec(-100.0..100.0f64, 2..200), split in 0usize..200) {
            let split = split.min(xs.len());
            let mut whole = RunningMoments::new();
            for &x in &xs {
                whole.push(x);
            }
            let mut left = RunningMoments::new();
            let mut right = RunningMoments::new();
            for &x in &xs[..split] {
                left.push(x);
            }
            for &x in &xs[split..] {
                right.push(x);
            }
            left.merge(&right);
            prop_assert_eq!(left.count(), whole.count());
            prop_assert!((left.mean() - whole.mean()).abs() <= 1e-9);
            prop_assert!((left.variance() - whole.variance()).abs() <= 1e-9 * whole.variance().max(1.0));
        }

        #[test]
        fn covariance_merge_equals_sequential(
            pairs in prop::collection::vec((-10.0..10.0f64, -10.0..10.0f64), 2..100),
            split in 0usize..100,
        ) {
            let split = split.min(pairs.len());
            let mut whole = RunningCovariance::new();
            for &(x, y) in &pairs {
                whole.push(x, y);
            }
            let mut left = RunningCovariance::new();
            let mut right = RunningCovariance::new();
            for &(x, y) in &pairs[..split] {
                left.push(x, y);
            }
            for &(x, y) in &pairs[split..] {
                right.push(x, y);
            }
            left.merge(&right);
            prop_assert!((left.covariance() - whole.covariance()).abs() <= 1e-9);
        }
    }

    #[test]
    fn identical_observations_give_zero_stderr() {
        let mut acc = RunningMoments::new();
        for _ in 0..64 {
            acc.push(3.25);
        }
        assert_abs_diff_eq!(acc.stderr(), 0.0, epsilon = 1e-15);
    }
}
