//! Iterative chirp decoding of superposed on-off Reed-Muller signatures.
//!
//! Each iteration exposes the strongest remaining codeword: the pointwise
//! product of the conjugated residual with its index-XOR shift by
//! `2^(m-i)` is, for a single codeword, a pure Walsh line whose transform
//! peaks at the integer encoding row `i` of the node's quadratic-form
//! matrix. The first `m0` rows determine the matrix (and so the `c`
//! address bits) through a GF(2) solve, dechirping then exposes `b` as a
//! second Walsh peak, and a joint least-squares fit over every signature
//! discovered so far cancels the reconstructed signals from the residual.
//! The loop stops at the iteration cap or once more than `n0` discovered
//! coefficients sit below the acceptance threshold `η0`; survivors with
//! `|coefficient| ≥ η0` form the decoded neighborhood.
//!
//! The shift pairs index `a` with `a XOR 2^(m-i)`. For `i = 1` this is
//! the same as a cyclic shift by half the frame; for deeper rows only the
//! XOR pairing keeps the correlation a single Walsh line. Erasure masks
//! built by the codebook are periodic with period `2^(m-m0)`, so they map
//! onto themselves under every shift the decoder uses.

use num_complex::Complex64;

use crate::channel::MeasurementVector;
use crate::fwht::{argmax_magnitude, fwht_inplace};
use crate::lsq;
use crate::rm::{bc_to_nia, codeword_entry, RmCodebook, SymMatrix};

/// Termination and acceptance knobs of the decoder.
#[derive(Debug, Clone, Copy)]
pub struct ChirpParams {
    pub max_iterations: usize,
    /// Coefficient-magnitude acceptance threshold η0.
    pub accept_threshold: f64,
    /// Stop once more than this many discovered nodes look weak.
    pub weak_limit: usize,
}

impl ChirpParams {
    /// Defaults tied to the scenario. The iteration cap leaves room for
    /// rejected interference peaks on top of the expected neighbor count;
    /// η0 sits at 3/4 of the weakest possible neighbor amplitude
    /// `sqrt(γ·η)`, between the fit noise of real coefficients and the
    /// partial fits that interference peaks produce.
    pub fn defaults_for(
        mean_neighbors: f64,
        snr_linear: f64,
        neighbor_threshold: f64,
        codeword_len: usize,
    ) -> Self {
        let c_budget = (8.0 * mean_neighbors).ceil() as usize;
        ChirpParams {
            max_iterations: c_budget.max(codeword_len / 4).clamp(24, 320),
            accept_threshold: 0.75 * (snr_linear * neighbor_threshold).sqrt(),
            weak_limit: 5,
        }
    }
}

/// Decoded neighborhood with estimated coefficients, in discovery order.
#[derive(Debug, Clone)]
pub struct DiscoveryResult {
    pub neighbors: Vec<u64>,
    pub coefficients: Vec<Complex64>,
    pub iterations_used: usize,
    pub residual_energy: f64,
    /// A least-squares step hit a rank-deficient dictionary.
    pub rank_deficiency: bool,
}

/// Per-iteration diagnostics (peak positions are 0-based transform
/// indices).
#[derive(Debug, Clone)]
pub struct IterationRecord {
    pub row_peaks: Vec<usize>,
    pub rows: Vec<u32>,
    pub b_peak: usize,
    pub b: u32,
    pub c: u32,
    pub nia: u64,
    pub coefficient_increment: Complex64,
    pub residual_energy: f64,
    /// False when the candidate was rejected as interference.
    pub committed: bool,
}

/// How far above the dechirped off-peak floor a borderline b line must
/// stand to be taken as a real node rather than an interference extreme.
const B_PEAK_GATE: f64 = 3.5;

/// Fits at least this far past the acceptance threshold commit without
/// consulting the b-line contrast.
const AUTO_COMMIT_FACTOR: f64 = 1.45;

/// Pointwise `conj(yr) ⊙ shift(yr)` with the index-XOR shift `2^(m-i)`.
fn shift_correlation(yr: &[Complex64], i: usize, m: usize) -> Vec<Complex64> {
    let shift = 1usize << (m - i);
    (0..yr.len())
        .map(|a| yr[a].conj() * yr[a ^ shift])
        .collect()
}

/// Recover row `i` (1-based, i ≤ m0) of the dominant codeword's matrix.
/// `None` when the correlation carries no energy (exhausted residual).
pub fn recover_matrix_row(yr: &[Complex64], i: usize, m: usize) -> Option<(u32, usize)> {
    recover_matrix_row_excluding(yr, i, m, None)
}

/// Row recovery with peak bins excluded; the decoder bans bins that keep
/// producing already-discovered nodes or rows outside the code (phantom
/// lines thrown by pairs of neighbors sharing a quadratic part).
fn recover_matrix_row_excluding(
    yr: &[Complex64],
    i: usize,
    m: usize,
    banned: Option<&[bool]>,
) -> Option<(u32, usize)> {
    let mut corr = shift_correlation(yr, i, m);
    if corr.iter().all(|z| z.norm_sqr() == 0.0) {
        return None;
    }
    fwht_inplace(&mut corr).expect("residual length is a power of two");
    if let Some(banned) = banned {
        for (z, &b) in corr.iter_mut().zip(banned.iter()) {
            if b {
                *z = Complex64::new(0.0, 0.0);
            }
        }
        if corr.iter().all(|z| z.norm_sqr() == 0.0) {
            return None;
        }
    }
    let peak = argmax_magnitude(&corr);
    Some((peak as u32, peak))
}

/// Recover the linear part `b` of the dominant codeword after dechirping
/// with its quadratic form.
pub fn recover_b(yr: &[Complex64], p: &SymMatrix) -> (u32, usize) {
    let d = dechirp_peaks(yr, p);
    (d.top as u32, d.top)
}

/// Dechirped-transform summary: the two tallest bins and the off-peak
/// floor they must clear.
struct DechirpPeaks {
    top: usize,
    top_mag: f64,
    second: usize,
    second_mag: f64,
    /// RMS of the transform with the two peak bins excluded.
    floor_rms: f64,
}

fn dechirp_peaks(yr: &[Complex64], p: &SymMatrix) -> DechirpPeaks {
    let mut w: Vec<Complex64> = (0..yr.len())
        .map(|a| yr[a] * codeword_entry(a, 0, p).conj())
        .collect();
    fwht_inplace(&mut w).expect("residual length is a power of two");
    let (mut top, mut top_sq) = (0usize, -1.0f64);
    let (mut second, mut second_sq) = (0usize, -1.0f64);
    let mut total_sq = 0.0f64;
    for (k, z) in w.iter().enumerate() {
        let sq = z.norm_sqr();
        total_sq += sq;
        if sq > top_sq {
            second = top;
            second_sq = top_sq;
            top = k;
            top_sq = sq;
        } else if sq > second_sq {
            second = k;
            second_sq = sq;
        }
    }
    let n = w.len();
    let off_peak = (total_sq - top_sq.max(0.0) - second_sq.max(0.0)).max(0.0);
    let floor_rms = if n > 2 { (off_peak * n as f64 / (n - 2) as f64 / n as f64).sqrt() } else { 0.0 };
    DechirpPeaks {
        top,
        top_mag: top_sq.max(0.0).sqrt(),
        second,
        second_mag: second_sq.max(0.0).sqrt(),
        floor_rms,
    }
}

/// One joint least-squares pass: fit the residual on the self-erased
/// discovered signatures, returning increments and the new residual.
pub fn least_squares_update(
    yr: &[Complex64],
    columns: &[Vec<Complex64>],
) -> (Vec<Complex64>, Vec<Complex64>, bool) {
    let refs: Vec<&[Complex64]> = columns.iter().map(|c| c.as_slice()).collect();
    let sol = lsq::least_squares(&refs, yr, 1e-10);
    let resid = lsq::residual(&refs, yr, &sol.x);
    (sol.x, resid, sol.rank_deficient)
}

pub fn chirp_decode(
    y: &MeasurementVector,
    observer_on_slots: &[bool],
    codebook: &RmCodebook,
    params: &ChirpParams,
) -> DiscoveryResult {
    chirp_decode_traced(y, observer_on_slots, codebook, params).0
}

pub fn chirp_decode_traced(
    y: &MeasurementVector,
    observer_on_slots: &[bool],
    codebook: &RmCodebook,
    params: &ChirpParams,
) -> (DiscoveryResult, Vec<IterationRecord>) {
    let m = codebook.params.m;
    let m0 = codebook.params.m0;
    let len = codebook.params.codeword_len();
    assert_eq!(y.len(), len, "measurement length must be 2^m");
    assert_eq!(observer_on_slots.len(), len);

    // residual initialized to the observation through the observer's
    // off-slots (and any mask already recorded on the measurement)
    let mut yr: Vec<Complex64> = (0..len)
        .map(|a| {
            if observer_on_slots[a] || y.is_erased(a) {
                Complex64::new(0.0, 0.0)
            } else {
                y.samples[a]
            }
        })
        .collect();

    let mut discovered: Vec<u64> = Vec::new();
    let mut columns: Vec<Vec<Complex64>> = Vec::new();
    let mut coefficients: Vec<Complex64> = Vec::new();
    let mut trace = Vec::new();
    let mut rank_flag = false;
    let mut iterations = 0usize;
    let mut done = false;
    let initial_energy: f64 = yr.iter().map(|z| z.norm_sqr()).sum();
    // below this the residual is rounding dust, not signal
    let exhausted_energy = initial_energy * 1e-28;

    // The decode proceeds in passes. Within a pass, first-row peak bins
    // that prove sterile (rows outside the code, an already-known node,
    // or a rejected fit) are banned so interference cannot feed the loop
    // the same peak over and over: the phantom line thrown by a pair of
    // neighbors sharing a quadratic part can never be cancelled, and at
    // low SNR many noise bins stand above the weakest real lines. Each
    // new pass starts with a clean slate, giving bins whose candidate was
    // rejected under since-removed interference another look; passes
    // continue as long as one of them commits a node.
    while !done {
        let mut banned = vec![false; len];
        let mut committed_this_pass = false;

        loop {
            if iterations >= params.max_iterations
                || yr.iter().map(|z| z.norm_sqr()).sum::<f64>() <= exhausted_energy
            {
                done = true;
                break;
            }
            iterations += 1;

            let mut rows = Vec::with_capacity(m0);
            let mut row_peaks = Vec::with_capacity(m0);
            for i in 1..=m0 {
                let ban = if i == 1 { Some(banned.as_slice()) } else { None };
                match recover_matrix_row_excluding(&yr, i, m, ban) {
                    Some((row, peak)) => {
                        rows.push(row);
                        row_peaks.push(peak);
                    }
                    None => {
                        rows.clear();
                        break;
                    }
                }
            }
            if rows.is_empty() {
                // every live bin banned, or the residual is exhausted;
                // a fresh pass decides which
                iterations -= 1;
                break;
            }

            let Some((p, c)) = codebook.complete_from_rows(&rows) else {
                // interference peak outside the code image
                banned[row_peaks[0]] = true;
                continue;
            };

            // Candidate b lines: the tallest, plus the runner-up when it
            // stands like a genuine second line (a shared-c pair puts two
            // nodes on one row bin).
            let peaks = dechirp_peaks(&yr, &p);
            let mut b_bins = vec![(peaks.top, peaks.top_mag)];
            if peaks.second_mag >= 0.6 * peaks.top_mag {
                b_bins.push((peaks.second, peaks.second_mag));
            }
            let mut committed_any = false;
            for (b_bin, b_mag) in b_bins {
                let b = b_bin as u32;
            let nia = bc_to_nia(b, c, &codebook.params);
            if discovered.contains(&nia) {
                continue;
            }

            // reconstructed signature through the observer's off-slots
            let sig = codebook
                .signature(nia)
                .expect("decoded address is in range by construction");
            let column: Vec<Complex64> = (0..len)
                .map(|a| {
                    if observer_on_slots[a] || y.is_erased(a) {
                        Complex64::new(0.0, 0.0)
                    } else {
                        sig[a]
                    }
                })
                .collect();

            discovered.push(nia);
            columns.push(column);
            coefficients.push(Complex64::new(0.0, 0.0));

            let (increments, resid, deficient) = least_squares_update(&yr, &columns);
            let candidate_coef = *increments.last().unwrap();

            // A real node fits jointly with at least the acceptance
            // threshold; interference (noise argmaxes, or the phantom line
            // of a shared-c pair) occasionally reaches just past it. A
            // comfortable fit commits outright; a borderline one must also
            // show a b line standing clear of the dechirped floor. Evicting
            // the rest keeps them from absorbing energy of undiscovered
            // neighbors.
            let fit = candidate_coef.norm();
            let accept = fit >= params.accept_threshold
                && (fit >= AUTO_COMMIT_FACTOR * params.accept_threshold
                    || b_mag >= B_PEAK_GATE * peaks.floor_rms);
            if !accept {
                discovered.pop();
                columns.pop();
                coefficients.pop();
                trace.push(IterationRecord {
                    row_peaks: row_peaks.clone(),
                    rows: rows.clone(),
                    b_peak: b_bin,
                    b,
                    c,
                    nia,
                    coefficient_increment: candidate_coef,
                    residual_energy: yr.iter().map(|z| z.norm_sqr()).sum(),
                    committed: false,
                });
                continue;
            }

            committed_any = true;
            rank_flag |= deficient;
            for (ci, inc) in coefficients.iter_mut().zip(increments.iter()) {
                *ci += inc;
            }
            yr = resid;
            let residual_energy: f64 = yr.iter().map(|z| z.norm_sqr()).sum();

            trace.push(IterationRecord {
                row_peaks: row_peaks.clone(),
                rows: rows.clone(),
                b_peak: b_bin,
                b,
                c,
                nia,
                coefficient_increment: candidate_coef,
                residual_energy,
                committed: true,
            });

                let weak = coefficients
                    .iter()
                    .filter(|c| c.norm() < params.accept_threshold)
                    .count();
                if weak > params.weak_limit {
                    done = true;
                    break;
                }
            }

            committed_this_pass |= committed_any;
            if !committed_any {
                banned[row_peaks[0]] = true;
            }
            if done {
                break;
            }
        }

        if !committed_this_pass {
            break;
        }
    }

    let residual_energy: f64 = yr.iter().map(|z| z.norm_sqr()).sum();
    let mut neighbors = Vec::new();
    let mut kept = Vec::new();
    for (nia, coef) in discovered.iter().zip(coefficients.iter()) {
        if coef.norm() >= params.accept_threshold {
            neighbors.push(*nia);
            kept.push(*coef);
        }
    }
    (
        DiscoveryResult {
            neighbors,
            coefficients: kept,
            iterations_used: iterations,
            residual_energy,
            rank_deficiency: rank_flag,
        },
        trace,
    )
}
