//! Noncoherent group-testing decoders for random on-off signatures.
//!
//! A measurement whose energy falls below the threshold `T` testifies that
//! no neighbor transmitted there, so every node with a pulse at that slot
//! collects a *strike*. The simple decoder eliminates on the first strike;
//! the t-tolerance decoder eliminates only past `t` strikes, trading false
//! alarms against misses. Measurements under the half-duplex erasure mask
//! carry no information and are skipped outright.
//!
//! Decoding walks the precomputed slot → nodes index, touching each
//! signature pulse at most once, i.e. O(N·M·q) work per call.

use crate::channel::MeasurementVector;
use crate::random_sig::RandomCodebook;

/// Decoder operating point.
#[derive(Debug, Clone, Copy)]
pub struct GroupTestParams {
    /// Energy threshold `T` on `|Y_m|²`; strictly-below comparisons.
    pub energy_threshold: f64,
    /// Strikes tolerated before elimination.
    pub tolerance: u32,
    /// Codebook sparsity, carried for bookkeeping.
    pub on_fraction: f64,
}

/// Strike counts per NIA (dense over the address space).
#[derive(Debug, Clone)]
pub struct StrikeTable {
    pub counts: Vec<u32>,
}

impl StrikeTable {
    pub fn strikes(&self, nia: u32) -> u32 {
        self.counts[nia as usize]
    }
}

/// Count, for every node, the below-threshold measurements covering one of
/// its pulses. `slot_index` is the codebook's slot → nodes table.
pub fn strike_counts(
    y: &MeasurementVector,
    slot_index: &[Vec<u32>],
    population: usize,
    threshold: f64,
) -> StrikeTable {
    assert_eq!(y.len(), slot_index.len(), "measurement/codebook length mismatch");
    let mut counts = vec![0u32; population];
    for (slot, nodes) in slot_index.iter().enumerate() {
        if y.is_erased(slot) {
            continue;
        }
        if y.samples[slot].norm_sqr() < threshold {
            for &n in nodes {
                counts[n as usize] += 1;
            }
        }
    }
    StrikeTable { counts }
}

/// Elimination on any single strike: survivors have pulses only where the
/// measurements are energetic.
pub fn simple_group_test(
    y: &MeasurementVector,
    codebook: &RandomCodebook,
    slot_index: &[Vec<u32>],
    threshold: f64,
) -> Vec<u32> {
    tolerance_group_test(y, codebook, slot_index, threshold, 0)
}

/// t-tolerance test: node n survives iff strikes(n) ≤ t (countdown from
/// t+1 per pulse hit).
pub fn tolerance_group_test(
    y: &MeasurementVector,
    codebook: &RandomCodebook,
    slot_index: &[Vec<u32>],
    threshold: f64,
    tolerance: u32,
) -> Vec<u32> {
    let strikes = strike_counts(y, slot_index, codebook.population, threshold);
    strikes
        .counts
        .iter()
        .enumerate()
        .filter(|(_, &v)| v <= tolerance)
        .map(|(n, _)| n as u32)
        .collect()
}

/// Outcome of one grid point of the design search.
#[derive(Debug, Clone, Copy)]
pub struct GridPoint {
    pub on_fraction: f64,
    pub energy_threshold: f64,
    pub miss_rate: f64,
    pub false_alarm_rate: f64,
}

impl GridPoint {
    pub fn total_error(&self) -> f64 {
        self.miss_rate + self.false_alarm_rate
    }
}

/// Default search grids bracketing the operating points of interest:
/// 12 log-spaced sparsities over [0.005, 0.08] and thresholds 1.0..4.0
/// in steps of 0.5.
pub fn default_q_grid() -> Vec<f64> {
    let (lo, hi, n) = (0.005f64, 0.08f64, 12);
    (0..n)
        .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
        .collect()
}

pub fn default_t_grid() -> Vec<f64> {
    (0..7).map(|i| 1.0 + 0.5 * i as f64).collect()
}

/// Exhaustive (q, T) search minimizing miss + false-alarm rate at a
/// reference SNR. `evaluate` runs the Monte Carlo trials for one grid
/// point and returns the pooled rates; ties break toward the smaller q,
/// then the smaller T. Returns the winner and the full table.
pub fn optimize_parameters<F>(
    q_grid: &[f64],
    t_grid: &[f64],
    mut evaluate: F,
) -> (GridPoint, Vec<GridPoint>)
where
    F: FnMut(f64, f64) -> (f64, f64),
{
    assert!(!q_grid.is_empty() && !t_grid.is_empty(), "grids must be nonempty");
    let mut table = Vec::with_capacity(q_grid.len() * t_grid.len());
    for &q in q_grid {
        for &t in t_grid {
            let (miss, fa) = evaluate(q, t);
            table.push(GridPoint {
                on_fraction: q,
                energy_threshold: t,
                miss_rate: miss,
                false_alarm_rate: fa,
            });
        }
    }
    let mut best = table[0];
    for p in &table[1..] {
        let better = p.total_error() < best.total_error()
            || (p.total_error() == best.total_error()
                && (p.on_fraction < best.on_fraction
                    || (p.on_fraction == best.on_fraction
                        && p.energy_threshold < best.energy_threshold)));
        if better {
            best = *p;
        }
    }
    (best, table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::synthesize_received;
    use crate::rng::Key;
    use num_complex::Complex64;

    /// Dense reference decoder recomputing strikes from the definitions.
    fn brute_force(
        y: &MeasurementVector,
        matrix: &[Vec<bool>], // [nia][slot]
        threshold: f64,
        tolerance: u32,
    ) -> Vec<u32> {
        let mut out = Vec::new();
        for (n, row) in matrix.iter().enumerate() {
            let mut strikes = 0u32;
            for (slot, &on) in row.iter().enumerate() {
                if !on || y.is_erased(slot) {
                    continue;
                }
                if y.samples[slot].norm_sqr() < threshold {
                    strikes += 1;
                }
            }
            if strikes <= tolerance {
                out.push(n as u32);
            }
        }
        out
    }

    fn dense_matrix(cb: &RandomCodebook) -> Vec<Vec<bool>> {
        (0..cb.population as u32)
            .map(|n| (0..cb.m_slots).map(|m| cb.has_pulse(n, m)).collect())
            .collect()
    }

    #[test]
    fn three_node_hand_case() {
        // S columns [1,0],[1,1],[0,1]; neighbor n=0 with U=1, γ=1, T=0.5:
        // Y = [1,0]; slot 1 below threshold eliminates nodes 1 and 2.
        let y = MeasurementVector {
            samples: vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            erasure_mask: None,
        };
        let slot_index = vec![vec![0u32, 1], vec![1u32, 2]];
        let strikes = strike_counts(&y, &slot_index, 3, 0.5);
        assert_eq!(strikes.counts, vec![0, 1, 1]);
        let survivors: Vec<u32> = strikes
            .counts
            .iter()
            .enumerate()
            .filter(|(_, &v)| v == 0)
            .map(|(n, _)| n as u32)
            .collect();
        assert_eq!(survivors, vec![0]);
    }

    #[test]
    fn no_neighbors_noiseless_eliminates_all_pulsed_nodes() {
        let cb = RandomCodebook::new(64, 32, 0.2, Key::master(1));
        let slot_index = cb.slot_index();
        let y = synthesize_received(&[], 1.0, 32, None).unwrap();
        let survivors = simple_group_test(&y, &cb, &slot_index, 0.5);
        for &s in &survivors {
            assert_eq!(cb.on_slots(s).len(), 0, "only all-off signatures may survive");
        }
    }

    #[test]
    fn noiseless_single_neighbor_never_missed() {
        let cb = RandomCodebook::new(128, 64, 0.1, Key::master(2));
        let slot_index = cb.slot_index();
        for nia in [0u32, 5, 77] {
            let sig = cb.signature(nia, false);
            let y = synthesize_received(
                &[(Complex64::new(1.0, 0.0), &sig.entries)],
                1.0,
                64,
                None,
            )
            .unwrap();
            let survivors = simple_group_test(&y, &cb, &slot_index, 0.5);
            assert!(survivors.contains(&nia));
        }
    }

    #[test]
    fn tolerance_zero_equals_simple_and_is_monotone_in_t() {
        let cb = RandomCodebook::new(40, 24, 0.15, Key::master(3));
        let slot_index = cb.slot_index();
        let mut noise = Key::master(9).stream();
        for trial in 0..50 {
            let links: Vec<(Complex64, Vec<Complex64>)> = (0..3)
                .map(|i| {
                    let nia = (trial * 7 + i * 13) % 40;
                    (
                        Complex64::from_polar(1.0 + i as f64, i as f64),
                        cb.signature(nia as u32, true).entries,
                    )
                })
                .collect();
            let support: Vec<(Complex64, &[Complex64])> =
                links.iter().map(|(u, s)| (*u, s.as_slice())).collect();
            let y = synthesize_received(&support, 4.0, 24, Some(&mut noise)).unwrap();
            let simple = simple_group_test(&y, &cb, &slot_index, 1.0);
            let tol0 = tolerance_group_test(&y, &cb, &slot_index, 1.0, 0);
            assert_eq!(simple, tol0);
            let mut prev = tol0;
            for t in 1..4 {
                let cur = tolerance_group_test(&y, &cb, &slot_index, 1.0, t);
                assert!(prev.iter().all(|n| cur.contains(n)), "survivors shrink as t grows");
                prev = cur;
            }
        }
    }

    #[test]
    fn matches_brute_force_on_small_instances() {
        let mut seeds = Key::master(31).stream();
        for trial in 0..300 {
            let population = 2 + (seeds.next_u64() % 11) as usize; // N ≤ 12
            let m = 2 + (seeds.next_u64() % 9) as usize; // M ≤ 10
            let q = 0.1 + 0.5 * seeds.next_f64();
            let cb = RandomCodebook::new(population, m, q, Key::master(1000 + trial));
            let slot_index = cb.slot_index();
            let matrix = dense_matrix(&cb);
            let samples: Vec<Complex64> = (0..m)
                .map(|_| Complex64::new(seeds.next_f64() * 2.0 - 1.0, seeds.next_f64() * 2.0 - 1.0))
                .collect();
            let mask: Option<Vec<bool>> = if seeds.next_u64().is_multiple_of(2) {
                Some((0..m).map(|_| seeds.next_u64().is_multiple_of(4)).collect())
            } else {
                None
            };
            let mut y = MeasurementVector { samples, erasure_mask: mask };
            if let Some(mask) = &y.erasure_mask {
                let mask = mask.clone();
                for (slot, &e) in mask.iter().enumerate() {
                    if e {
                        y.samples[slot] = Complex64::new(0.0, 0.0);
                    }
                }
            }
            let threshold = seeds.next_f64() * 1.5;
            let tolerance = (seeds.next_u64() % 3) as u32;
            let fast = tolerance_group_test(&y, &cb, &slot_index, threshold, tolerance);
            let slow = brute_force(&y, &matrix, threshold, tolerance);
            assert_eq!(fast, slow, "trial {trial}");
        }
    }

    #[test]
    fn erased_slots_never_strike() {
        let cb = RandomCodebook::new(30, 16, 0.5, Key::master(6));
        let slot_index = cb.slot_index();
        // all-zero measurement fully erased: nobody gets struck
        let y = MeasurementVector {
            samples: vec![Complex64::new(0.0, 0.0); 16],
            erasure_mask: Some(vec![true; 16]),
        };
        let strikes = strike_counts(&y, &slot_index, 30, 10.0);
        assert!(strikes.counts.iter().all(|&c| c == 0));
    }

    #[test]
    fn strikes_when_no_neighbors_equal_on_counts() {
        let cb = RandomCodebook::new(50, 40, 0.2, Key::master(7));
        let slot_index = cb.slot_index();
        let y = synthesize_received(&[], 1.0, 40, None).unwrap();
        let strikes = strike_counts(&y, &slot_index, 50, 0.25);
        for nia in 0..50u32 {
            assert_eq!(strikes.strikes(nia) as usize, cb.on_slots(nia).len());
        }
    }

    #[test]
    fn strikes_nondecreasing_in_threshold() {
        let cb = RandomCodebook::new(60, 48, 0.15, Key::master(8));
        let slot_index = cb.slot_index();
        let sig = cb.signature(3, false);
        let mut noise = Key::master(12).stream();
        let y = synthesize_received(
            &[(Complex64::new(0.7, 0.2), &sig.entries)],
            2.0,
            48,
            Some(&mut noise),
        )
        .unwrap();
        let low = strike_counts(&y, &slot_index, 60, 0.5);
        let high = strike_counts(&y, &slot_index, 60, 2.5);
        for n in 0..60 {
            assert!(low.counts[n] <= high.counts[n]);
        }
    }

    #[test]
    fn cancellation_instance_kept_by_tolerance_one() {
        // Two neighbors with opposite coefficients cancel wherever both
        // pulse; a neighbor left with exactly one strike is missed at t=0
        // and kept at t=1.
        let population = 6;
        let m = 6;
        // hand-built codebook via dense matrix fed through brute force,
        // and through the fast path with an equivalent slot index
        let rows: Vec<Vec<bool>> = vec![
            vec![true, true, false, false, false, false],  // node 0
            vec![true, false, true, false, false, false],  // node 1 (shares slot 0)
            vec![false, false, false, true, false, false], // others idle
            vec![false, false, false, false, true, false],
            vec![false, false, false, false, false, true],
            vec![false, false, false, false, false, false],
        ];
        let mut slot_index = vec![Vec::new(); m];
        for (n, row) in rows.iter().enumerate() {
            for (slot, &on) in row.iter().enumerate() {
                if on {
                    slot_index[slot].push(n as u32);
                }
            }
        }
        // U0 = 1, U1 = -1: slot 0 cancels exactly; slots 1 and 2 carry
        // each node alone.
        let samples = vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        let y = MeasurementVector { samples, erasure_mask: None };
        let survivors_t0 = brute_force(&y, &rows, 0.5, 0);
        assert!(!survivors_t0.contains(&0) && !survivors_t0.contains(&1));
        let survivors_t1 = brute_force(&y, &rows, 0.5, 1);
        assert!(survivors_t1.contains(&0) && survivors_t1.contains(&1));
        // fast path agrees
        let strikes = strike_counts(&y, &slot_index, population, 0.5);
        assert_eq!(strikes.counts[0], 1);
        assert_eq!(strikes.counts[1], 1);
    }

    #[test]
    fn degenerate_grid_returns_single_point() {
        let (best, table) = optimize_parameters(&[0.02], &[1.5], |_, _| (0.1, 0.2));
        assert_eq!(table.len(), 1);
        assert_eq!(best.on_fraction, 0.02);
        assert_eq!(best.energy_threshold, 1.5);
    }

    #[test]
    fn grid_search_prefers_lower_error_then_lower_q_then_lower_t() {
        let (best, _) = optimize_parameters(&[0.01, 0.02], &[1.0, 2.0], |q, t| {
            if (q, t) == (0.02, 2.0) {
                (0.0, 0.0)
            } else {
                (0.5, 0.5)
            }
        });
        assert_eq!((best.on_fraction, best.energy_threshold), (0.02, 2.0));
        // tie: everything equal -> lowest q then lowest T
        let (best, _) = optimize_parameters(&[0.03, 0.01], &[2.0, 1.0], |_, _| (0.1, 0.1));
        assert_eq!((best.on_fraction, best.energy_threshold), (0.01, 1.0));
    }

    #[test]
    fn default_grids_bracket_reported_optima() {
        let q = default_q_grid();
        let t = default_t_grid();
        assert_eq!(q.len(), 12);
        assert!(q.iter().any(|&v| (v - 0.0176).abs() / 0.0176 < 0.02));
        assert!(q.iter().any(|&v| (v - 0.0371).abs() / 0.0371 < 0.02));
        assert!(t.contains(&2.0) && t.contains(&3.0));
    }
}
