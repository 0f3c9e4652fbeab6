//! Weighted sampling with point updates.
//!
//! A complete binary sum tree over nonnegative `f64` weights. Internal nodes
//! are recomputed from their children on every update instead of being
//! adjusted by deltas, so prefix sums never accumulate cancellation error
//! even when weights span many orders of magnitude.

use rand::Rng;

#[derive(Debug, Clone)]
pub struct SumTree {
    len: usize,
    leaves: usize,
    tree: Vec<f64>,
}

impl SumTree {
    pub fn new(len: usize) -> Self {
        let leaves = len.max(1).next_power_of_two();
        SumTree {
            len,
            leaves,
            tree: vec![0.0; 2 * leaves],
        }
    }

    pub fn from_weights(weights: &[f64]) -> Self {
        let mut t = SumTree::new(weights.len());
        for (i, &w) in weights.iter().enumerate() {
            debug_assert!(w >= 0.0 && w.is_finite());
            t.tree[t.leaves + i] = w;
        }
        for i in (1..t.leaves).rev() {
            t.tree[i] = t.tree[2 * i] + t.tree[2 * i + 1];
        }
        t
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn weight(&self, i: usize) -> f64 {
        self.tree[self.leaves + i]
    }

    #[inline]
    pub fn total(&self) -> f64 {
        self.tree[1]
    }

    pub fn set(&mut self, i: usize, w: f64) {
        debug_assert!(i < self.len);
        debug_assert!(w >= 0.0 && w.is_finite());
        let mut pos = self.leaves + i;
        self.tree[pos] = w;
        pos /= 2;
        while pos >= 1 {
            self.tree[pos] = self.tree[2 * pos] + self.tree[2 * pos + 1];
            pos /= 2;
        }
    }

    /// Index whose cumulative weight interval contains `target`, skipping
    /// zero-weight leaves. Returns `None` when the total weight is zero.
    pub fn find(&self, mut target: f64) -> Option<usize> {
        if self.total() <= 0.0 {
            return None;
        }
        let mut pos = 1;
        while pos < self.leaves {
            let left = self.tree[2 * pos];
            let right = self.tree[2 * pos + 1];
            if (target < left && left > 0.0) || right <= 0.0 {
                pos *= 2;
            } else {
                target -= left;
                pos = 2 * pos + 1;
            }
        }
        Some(pos - self.leaves)
    }

    /// Draws an index with probability proportional to its weight.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<usize> {
        let total = self.total();
        if total <= 0.0 {
            return None;
        }
        self.find(rng.gen::<f64>() * total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn find_respects_intervals() {
        let t = SumTree::from_weights(&[1.0, 0.0, 2.0, 1.0]);
        assert_eq!(t.total(), 4.0);
        assert_eq!(t.find(0.5), Some(0));
        assert_eq!(t.find(1.0), Some(2));
        assert_eq!(t.find(2.9), Some(2));
        assert_eq!(t.find(3.5), Some(3));
        // overshoot from rounding lands on the last positive leaf
        assert_eq!(t.find(4.0), Some(3));
    }

    #[test]
    fn zero_total_returns_none() {
        let mut t = SumTree::from_weights(&[1.0]);
        t.set(0, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(t.sample(&mut rng), None);
    }

    #[test]
    fn never_samples_zero_weight() {
        let mut t = SumTree::from_weights(&[1e15, 1.0, 0.0, 1e-6, 3.0]);
        t.set(0, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let i = t.sample(&mut rng).unwrap();
            assert!(t.weight(i) > 0.0);
        }
    }

    #[test]
    fn empirical_frequencies_match_weights() {
        let w = [1.0, 2.0, 3.0, 4.0, 0.0, 10.0];
        let t = SumTree::from_weights(&w);
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let draws = 200_000;
        let mut hits = [0usize; 6];
        for _ in 0..draws {
            hits[t.sample(&mut rng).unwrap()] += 1;
        }
        let total: f64 = w.iter().sum();
        for i in 0..6 {
            let expected = w[i] / total;
            let observed = hits[i] as f64 / draws as f64;
            assert!((expected - observed).abs() < 0.005, "index {i}: {observed} vs {expected}");
        }
    }

    #[test]
    fn updates_keep_total_exact() {
        let mut t = SumTree::new(5);
        for i in 0..5 {
            t.set(i, (i + 1) as f64);
        }
        t.set(4, 1e16);
        t.set(4, 0.0);
        assert_eq!(t.total(), 10.0);
    }
}
