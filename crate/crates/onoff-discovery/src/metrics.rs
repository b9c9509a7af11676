//! Miss / false-alarm bookkeeping. Rates are pooled counts divided by the
//! pooled number of true neighbors, not averages of per-trial ratios.

use serde::Serialize;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ErrorCounts {
    pub misses: u64,
    pub false_alarms: u64,
    pub true_neighbors: u64,
    pub trials: u64,
}

impl ErrorCounts {
    /// Record one trial from sorted truth/estimate NIA lists.
    pub fn record_sorted(&mut self, truth: &[u32], estimate: &[u32]) {
        debug_assert!(truth.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(estimate.windows(2).all(|w| w[0] < w[1]));
        let mut hits = 0u64;
        let (mut i, mut j) = (0usize, 0usize);
        while i < truth.len() && j < estimate.len() {
            match truth[i].cmp(&estimate[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    hits += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        self.misses += truth.len() as u64 - hits;
        self.false_alarms += estimate.len() as u64 - hits;
        self.true_neighbors += truth.len() as u64;
        self.trials += 1;
    }

    pub fn merge(&mut self, other: &ErrorCounts) {
        self.misses += other.misses;
        self.false_alarms += other.false_alarms;
        self.true_neighbors += other.true_neighbors;
        self.trials += other.trials;
    }

    pub fn rates(&self) -> ErrorRates {
        let denom = self.true_neighbors.max(1) as f64;
        ErrorRates {
            miss_rate: self.misses as f64 / denom,
            false_alarm_rate: self.false_alarms as f64 / denom,
            trials: self.trials,
            mean_neighbors: self.true_neighbors as f64 / self.trials.max(1) as f64,
        }
    }
}

/// Normalized error rates over a pool of trials.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ErrorRates {
    pub miss_rate: f64,
    pub false_alarm_rate: f64,
    pub trials: u64,
    pub mean_neighbors: f64,
}

impl ErrorRates {
    pub fn total_error(&self) -> f64 {
        self.miss_rate + self.false_alarm_rate
    }
}

/// One-shot form for a single trial.
pub fn error_rates(truth: &[u32], estimate: &[u32]) -> ErrorRates {
    let mut t = truth.to_vec();
    let mut e = estimate.to_vec();
    t.sort_unstable();
    e.sort_unstable();
    let mut counts = ErrorCounts::default();
    counts.record_sorted(&t, &e);
    counts.rates()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_estimate_has_zero_rates() {
        let r = error_rates(&[1, 2, 9], &[1, 2, 9]);
        assert_eq!(r.miss_rate, 0.0);
        assert_eq!(r.false_alarm_rate, 0.0);
    }

    #[test]
    fn single_miss_and_false_alarm() {
        let r = error_rates(&[1, 2], &[2, 3]);
        assert_eq!(r.miss_rate, 0.5);
        assert_eq!(r.false_alarm_rate, 0.5);
    }

    #[test]
    fn pooling_uses_counts_not_mean_of_rates() {
        // trial 1: 1 miss of 1 neighbor (rate 1.0)
        // trial 2: 0 misses of 3 neighbors (rate 0.0)
        // pooled: 1 miss / 4 neighbors = 0.25, not 0.5
        let mut c = ErrorCounts::default();
        c.record_sorted(&[7], &[]);
        c.record_sorted(&[1, 2, 3], &[1, 2, 3]);
        let r = c.rates();
        assert_eq!(r.miss_rate, 0.25);
        assert_eq!(r.trials, 2);
        assert_eq!(r.mean_neighbors, 2.0);
    }

    #[test]
    fn merge_matches_sequential_recording() {
        let mut a = ErrorCounts::default();
        a.record_sorted(&[1, 5], &[1]);
        let mut b = ErrorCounts::default();
        b.record_sorted(&[2], &[2, 9]);
        let mut merged = a;
        merged.merge(&b);

        let mut seq = ErrorCounts::default();
        seq.record_sorted(&[1, 5], &[1]);
        seq.record_sorted(&[2], &[2, 9]);
        assert_eq!(merged, seq);
    }
}
