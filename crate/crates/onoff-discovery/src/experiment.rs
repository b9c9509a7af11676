//! Scenario configuration and deterministic Monte Carlo orchestration.
//!
//! A scenario pins everything: scheme and its design parameters, network
//! density, SNR sweep, trial counts, and the master seed. Trials are
//! independent functions of `(scenario, realization index, query index,
//! snr index)`, workers split realizations, and reduction is integer
//! count summation, so results are byte-identical for any worker count.
//!
//! Per the experimental convention, each realization draws a Poisson
//! field sized so the expected node count equals the address-space size,
//! and error statistics pool over the query nodes nearest the origin to
//! suppress edge effects.

use std::io::Write;
use std::time::Instant;

use num_complex::Complex64;

use crate::channel::{
    intensity_for_mean_neighbors, sample_network, MeasurementVector, NetworkConfig,
};
use crate::chirp::{chirp_decode, ChirpParams};
use crate::error::{Error, Result};
use crate::group_testing::tolerance_group_test;
use crate::metrics::ErrorCounts;
use crate::numeric::fmt_sig;
use crate::random_sig::RandomCodebook;
use crate::rm::{RmCodebook, RmCodebookParams};
use crate::rng::{tags, Key};

/// Scheme selector with per-scheme design parameters.
#[derive(Debug, Clone)]
pub enum SchemeParams {
    RandomGt {
        m_slots: usize,
        on_fraction: f64,
        energy_threshold: f64,
        tolerance: u32,
        phase_randomization: bool,
    },
    RmChirp {
        m: usize,
        m0: usize,
        n1: usize,
        n2: usize,
        /// Overrides for the decoder defaults (see [`ChirpParams`]).
        max_iterations: Option<usize>,
        accept_threshold: Option<f64>,
        weak_limit: usize,
    },
}

impl SchemeParams {
    pub fn name(&self) -> &'static str {
        match self {
            SchemeParams::RandomGt { .. } => "random-gt",
            SchemeParams::RmChirp { .. } => "rm-chirp",
        }
    }

    pub fn measurement_len(&self) -> usize {
        match self {
            SchemeParams::RandomGt { m_slots, .. } => *m_slots,
            SchemeParams::RmChirp { m, .. } => 1 << m,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub scheme: SchemeParams,
    /// Address-space size N; also the expected node count of the field.
    pub population: usize,
    pub mean_neighbors: f64,
    pub path_loss_exponent: f64,
    pub neighbor_threshold: f64,
    pub snr_db_list: Vec<f64>,
    pub realizations: usize,
    pub query_nodes: usize,
    pub network_wide: bool,
    pub master_seed: u64,
    /// 0 means one worker per available core.
    pub workers: usize,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        if self.population == 0 {
            return Err(Error::config("population must be positive"));
        }
        if self.mean_neighbors.is_nan() || self.mean_neighbors <= 0.0 {
            return Err(Error::config("mean neighbor count must be positive"));
        }
        if self.realizations == 0 || self.query_nodes == 0 {
            return Err(Error::config("realizations and query_nodes must be positive"));
        }
        match &self.scheme {
            SchemeParams::RandomGt { m_slots, on_fraction, energy_threshold, .. } => {
                if *m_slots == 0 {
                    return Err(Error::config("m_slots must be positive"));
                }
                if !(*on_fraction > 0.0 && *on_fraction < 1.0) {
                    return Err(Error::config("q must lie in (0, 1)"));
                }
                if energy_threshold.is_nan() || *energy_threshold <= 0.0 {
                    return Err(Error::config("energy threshold must be positive"));
                }
            }
            SchemeParams::RmChirp { m, m0, n1, n2, .. } => {
                let p = RmCodebookParams { m: *m, m0: *m0, n1: *n1, n2: *n2 };
                p.validate()?;
                if n1 + n2 > 32 {
                    return Err(Error::config("n1 + n2 must not exceed 32 for network runs"));
                }
                if (self.population as u64) > p.population() {
                    return Err(Error::config(format!(
                        "population {} exceeds the 2^{} RM address space",
                        self.population,
                        n1 + n2
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn network_config(&self) -> NetworkConfig {
        let lambda = intensity_for_mean_neighbors(
            self.mean_neighbors,
            self.path_loss_exponent,
            self.neighbor_threshold,
        );
        let half_width = 0.5 * (self.population as f64 / lambda).sqrt();
        NetworkConfig {
            intensity: lambda,
            path_loss_exponent: self.path_loss_exponent,
            neighbor_threshold: self.neighbor_threshold,
            region_half_width: half_width,
            population: self.population,
        }
    }

    fn worker_count(&self) -> usize {
        if self.workers > 0 {
            return self.workers;
        }
        std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
    }
}

/// One SNR point of a finished run.
#[derive(Debug, Clone, Copy)]
pub struct ResultRow {
    pub snr_db: f64,
    pub miss_rate: f64,
    pub false_alarm_rate: f64,
    pub trials: u64,
    pub wall_time_s: f64,
}

/// One attenuation bin of a near-far sweep.
#[derive(Debug, Clone, Copy)]
pub struct NearFarRow {
    pub snr_db: f64,
    pub attenuation_lo_db: f64,
    pub attenuation_hi_db: f64,
    pub neighbors: u64,
    pub misses: u64,
}

impl NearFarRow {
    /// Absent (None) for empty bins rather than zero.
    pub fn miss_rate(&self) -> Option<f64> {
        if self.neighbors == 0 {
            None
        } else {
            Some(self.misses as f64 / self.neighbors as f64)
        }
    }
}

#[derive(Clone, Default)]
struct SnrAccumulator {
    counts: ErrorCounts,
    bin_neighbors: Vec<u64>,
    bin_misses: Vec<u64>,
}

enum CodebookHandle {
    Gt { codebook: RandomCodebook, slot_index: Vec<Vec<u32>> },
    Rm { codebook: RmCodebook },
}

fn build_codebook(s: &Scenario) -> Result<CodebookHandle> {
    let master = Key::master(s.master_seed);
    match &s.scheme {
        SchemeParams::RandomGt { m_slots, on_fraction, .. } => {
            let codebook = RandomCodebook::new(s.population, *m_slots, *on_fraction, master);
            let slot_index = codebook.slot_index();
            Ok(CodebookHandle::Gt { codebook, slot_index })
        }
        SchemeParams::RmChirp { m, m0, n1, n2, .. } => {
            let params = RmCodebookParams { m: *m, m0: *m0, n1: *n1, n2: *n2 };
            Ok(CodebookHandle::Rm { codebook: RmCodebook::new(params, master)? })
        }
    }
}

/// Run the pooled SNR sweep. Rows come back in the scenario's SNR order.
pub fn run_scenario(s: &Scenario) -> Result<Vec<ResultRow>> {
    let (rows, _) = run_with_bins(s, None)?;
    Ok(rows)
}

/// As [`run_scenario`], also returning the raw pooled error counts per
/// SNR point (for threshold checks that need absolute event counts).
pub fn run_scenario_with_counts(s: &Scenario) -> Result<Vec<(ResultRow, ErrorCounts)>> {
    let (rows, _, counts) = run_detailed(s, None)?;
    Ok(rows.into_iter().zip(counts).collect())
}

/// Near-far sweep: pooled misses binned by neighbor attenuation
/// `-10·log10(|U|²)` (larger dB = weaker link). Only meaningful for the
/// chirp scheme, whose per-neighbor coefficients drive detection.
pub fn sweep_near_far(s: &Scenario, bin_edges: &[f64]) -> Result<Vec<NearFarRow>> {
    if !matches!(s.scheme, SchemeParams::RmChirp { .. }) {
        return Err(Error::config("near-far sweep requires the rm-chirp scheme"));
    }
    if bin_edges.len() < 2 || bin_edges.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::config("bin edges must be strictly increasing, at least two"));
    }
    let (_, bins) = run_with_bins(s, Some(bin_edges))?;
    Ok(bins)
}

fn run_with_bins(
    s: &Scenario,
    bin_edges: Option<&[f64]>,
) -> Result<(Vec<ResultRow>, Vec<NearFarRow>)> {
    let (rows, bins, _) = run_detailed(s, bin_edges)?;
    Ok((rows, bins))
}

fn run_detailed(
    s: &Scenario,
    bin_edges: Option<&[f64]>,
) -> Result<(Vec<ResultRow>, Vec<NearFarRow>, Vec<ErrorCounts>)> {
    s.validate()?;
    if s.snr_db_list.is_empty() {
        return Ok((Vec::new(), Vec::new(), Vec::new()));
    }
    let cfg = s.network_config();
    cfg.validate()?;
    let handle = build_codebook(s)?;
    let n_bins = bin_edges.map(|e| e.len() - 1).unwrap_or(0);
    let n_snr = s.snr_db_list.len();
    let started = Instant::now();

    let workers = s.worker_count().min(s.realizations).max(1);
    let mut accumulators: Vec<Vec<SnrAccumulator>> = Vec::new();
    let acc_template = vec![
        SnrAccumulator {
            counts: ErrorCounts::default(),
            bin_neighbors: vec![0; n_bins],
            bin_misses: vec![0; n_bins],
        };
        n_snr
    ];

    std::thread::scope(|scope| {
        let mut joins = Vec::new();
        for w in 0..workers {
            let template = acc_template.clone();
            let handle = &handle;
            let scenario = &s;
            let cfg = &cfg;
            joins.push(scope.spawn(move || {
                let mut acc = template;
                let mut ridx = w;
                while ridx < scenario.realizations {
                    run_realization(scenario, cfg, handle, ridx, bin_edges, &mut acc);
                    ridx += workers;
                }
                acc
            }));
        }
        for j in joins {
            accumulators.push(j.join().expect("trial worker panicked"));
        }
    });

    // order-independent reduction
    let mut merged = acc_template;
    for worker_acc in &accumulators {
        for (dst, src) in merged.iter_mut().zip(worker_acc.iter()) {
            dst.counts.merge(&src.counts);
            for (d, s) in dst.bin_neighbors.iter_mut().zip(src.bin_neighbors.iter()) {
                *d += s;
            }
            for (d, s) in dst.bin_misses.iter_mut().zip(src.bin_misses.iter()) {
                *d += s;
            }
        }
    }

    let wall = started.elapsed().as_secs_f64() / n_snr as f64;
    let rows = s
        .snr_db_list
        .iter()
        .zip(merged.iter())
        .map(|(&snr_db, acc)| {
            let r = acc.counts.rates();
            ResultRow {
                snr_db,
                miss_rate: r.miss_rate,
                false_alarm_rate: r.false_alarm_rate,
                trials: r.trials,
                wall_time_s: wall,
            }
        })
        .collect();

    let mut bins = Vec::new();
    if let Some(edges) = bin_edges {
        for (sidx, &snr_db) in s.snr_db_list.iter().enumerate() {
            for b in 0..n_bins {
                bins.push(NearFarRow {
                    snr_db,
                    attenuation_lo_db: edges[b],
                    attenuation_hi_db: edges[b + 1],
                    neighbors: merged[sidx].bin_neighbors[b],
                    misses: merged[sidx].bin_misses[b],
                });
            }
        }
    }
    let counts = merged.iter().map(|acc| acc.counts).collect();
    Ok((rows, bins, counts))
}

fn realization_seed(master_seed: u64, ridx: usize) -> u64 {
    Key::master(master_seed).derive(tags::TRIAL).derive(ridx as u64).word(0)
}

fn run_realization(
    s: &Scenario,
    cfg: &NetworkConfig,
    handle: &CodebookHandle,
    ridx: usize,
    bin_edges: Option<&[f64]>,
    acc: &mut [SnrAccumulator],
) {
    let real = sample_network(cfg, realization_seed(s.master_seed, ridx))
        .expect("config validated before the run");
    if real.nodes.is_empty() {
        return;
    }
    let queries = real.nearest_to_origin(s.query_nodes.min(real.nodes.len()));
    let master = Key::master(s.master_seed);
    let frame_phase_key = master.derive(tags::SIGNATURE_PHASE).derive(ridx as u64);
    let noise_root = master.derive(tags::NOISE).derive(ridx as u64);

    for &q in &queries {
        let q_nia = real.nodes[q].nia;
        let links = real.neighbor_links(q);
        let mut truth: Vec<u32> = links.iter().map(|(n, _)| *n).collect();
        truth.sort_unstable();

        for (sidx, &snr_db) in s.snr_db_list.iter().enumerate() {
            let gamma = 10f64.powf(snr_db / 10.0);
            let mut noise = noise_root.derive(q_nia as u64).derive(sidx as u64).stream();
            let estimate: Vec<u32> = match (handle, &s.scheme) {
                (
                    CodebookHandle::Gt { codebook, slot_index },
                    SchemeParams::RandomGt {
                        m_slots,
                        energy_threshold,
                        tolerance,
                        phase_randomization,
                        ..
                    },
                ) => {
                    let mut samples = vec![Complex64::new(0.0, 0.0); *m_slots];
                    let amp = gamma.sqrt();
                    for (nia, link) in &links {
                        let coef = amp * link.value();
                        let node_phase_key = frame_phase_key.derive(*nia as u64);
                        for &slot in &codebook.on_slots(*nia) {
                            let tx = if *phase_randomization {
                                coef * Complex64::from_polar(
                                    1.0,
                                    2.0 * std::f64::consts::PI
                                        * node_phase_key.unit_f64(slot as u64),
                                )
                            } else {
                                coef
                            };
                            samples[slot as usize] += tx;
                        }
                    }
                    for y in samples.iter_mut() {
                        *y += noise.complex_noise();
                    }
                    let mut y = MeasurementVector { samples, erasure_mask: None };
                    if s.network_wide {
                        let own: Vec<bool> =
                            (0..*m_slots).map(|m| codebook.has_pulse(q_nia, m)).collect();
                        y = crate::channel::apply_self_erasure(&y, &own)
                            .expect("lengths match by construction");
                    }
                    let mut est =
                        tolerance_group_test(&y, codebook, slot_index, *energy_threshold, *tolerance);
                    est.retain(|&n| n != q_nia);
                    est
                }
                (
                    CodebookHandle::Rm { codebook },
                    SchemeParams::RmChirp {
                        max_iterations, accept_threshold, weak_limit, ..
                    },
                ) => {
                    let len = codebook.params.codeword_len();
                    let mut samples = vec![Complex64::new(0.0, 0.0); len];
                    let amp = gamma.sqrt();
                    for (nia, link) in &links {
                        let coef = amp * link.value();
                        let sig = codebook
                            .signature(*nia as u64)
                            .expect("population bounded by the address space");
                        for (y, sv) in samples.iter_mut().zip(sig.iter()) {
                            if sv.re != 0.0 || sv.im != 0.0 {
                                *y += coef * sv;
                            }
                        }
                    }
                    for y in samples.iter_mut() {
                        *y += noise.complex_noise();
                    }
                    let y = MeasurementVector { samples, erasure_mask: None };
                    // the observer hears only through its own off-slots
                    let own: Vec<bool> = if s.network_wide {
                        codebook.erasure(q_nia as u64).bits
                    } else {
                        vec![false; len]
                    };
                    let defaults = ChirpParams::defaults_for(
                        s.mean_neighbors,
                        gamma,
                        s.neighbor_threshold,
                        len,
                    );
                    let params = ChirpParams {
                        max_iterations: max_iterations.unwrap_or(defaults.max_iterations),
                        accept_threshold: accept_threshold.unwrap_or(defaults.accept_threshold),
                        weak_limit: *weak_limit,
                    };
                    let out = chirp_decode(&y, &own, codebook, &params);
                    let mut est: Vec<u32> = out
                        .neighbors
                        .iter()
                        .filter(|&&n| n < s.population as u64)
                        .map(|&n| n as u32)
                        .collect();
                    est.retain(|&n| n != q_nia);
                    est.sort_unstable();
                    est.dedup();
                    est
                }
                _ => unreachable!("handle built from the same scheme"),
            };

            acc[sidx].counts.record_sorted(&truth, &estimate);
            if let Some(edges) = bin_edges {
                for (nia, link) in &links {
                    let att = link.attenuation_db();
                    let Some(b) = edges.windows(2).position(|w| att >= w[0] && att < w[1])
                    else {
                        continue;
                    };
                    acc[sidx].bin_neighbors[b] += 1;
                    if estimate.binary_search(nia).is_err() {
                        acc[sidx].bin_misses[b] += 1;
                    }
                }
            }
        }
    }
}

/// Emission format for results.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<OutputFormat> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::config(format!("unknown format '{other}'"))),
        }
    }
}

/// Render result rows; numbers carry 6 significant digits in both
/// formats so the two emissions are field-identical.
pub fn render_results(rows: &[ResultRow], format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => {
            let mut out = String::from("snr_db,miss_rate,false_alarm_rate,trials\n");
            for r in rows {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    fmt_sig(r.snr_db, 6),
                    fmt_sig(r.miss_rate, 6),
                    fmt_sig(r.false_alarm_rate, 6),
                    r.trials
                ));
            }
            out
        }
        OutputFormat::Json => {
            let mut out = String::from("[\n");
            for (i, r) in rows.iter().enumerate() {
                out.push_str(&format!(
                    "  {{\"snr_db\": {}, \"miss_rate\": {}, \"false_alarm_rate\": {}, \"trials\": {}}}{}\n",
                    fmt_sig(r.snr_db, 6),
                    fmt_sig(r.miss_rate, 6),
                    fmt_sig(r.false_alarm_rate, 6),
                    r.trials,
                    if i + 1 < rows.len() { "," } else { "" }
                ));
            }
            out.push(']');
            out.push('\n');
            out
        }
    }
}

pub fn render_near_far(rows: &[NearFarRow], format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => {
            let mut out =
                String::from("snr_db,attenuation_lo_db,attenuation_hi_db,neighbors,miss_rate\n");
            for r in rows {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    fmt_sig(r.snr_db, 6),
                    fmt_sig(r.attenuation_lo_db, 6),
                    fmt_sig(r.attenuation_hi_db, 6),
                    r.neighbors,
                    r.miss_rate().map(|m| fmt_sig(m, 6)).unwrap_or_default()
                ));
            }
            out
        }
        OutputFormat::Json => {
            let mut out = String::from("[\n");
            for (i, r) in rows.iter().enumerate() {
                out.push_str(&format!(
                    "  {{\"snr_db\": {}, \"attenuation_lo_db\": {}, \"attenuation_hi_db\": {}, \"neighbors\": {}, \"miss_rate\": {}}}{}\n",
                    fmt_sig(r.snr_db, 6),
                    fmt_sig(r.attenuation_lo_db, 6),
                    fmt_sig(r.attenuation_hi_db, 6),
                    r.neighbors,
                    r.miss_rate().map(|m| fmt_sig(m, 6)).unwrap_or_else(|| "null".into()),
                    if i + 1 < rows.len() { "," } else { "" }
                ));
            }
            out.push(']');
            out.push('\n');
            out
        }
    }
}

/// Write rendered output to a file, or stdout when no path is given.
pub fn emit(text: &str, path: Option<&std::path::Path>) -> Result<()> {
    match path {
        Some(p) => {
            let mut f = std::fs::File::create(p)?;
            f.write_all(text.as_bytes())?;
            Ok(())
        }
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_gt_scenario() -> Scenario {
        Scenario {
            scheme: SchemeParams::RandomGt {
                m_slots: 256,
                on_fraction: 0.04,
                energy_threshold: 2.0,
                tolerance: 2,
                phase_randomization: true,
            },
            population: 1500,
            mean_neighbors: 6.0,
            path_loss_exponent: 3.0,
            neighbor_threshold: 0.05,
            snr_db_list: vec![24.0],
            realizations: 4,
            query_nodes: 12,
            network_wide: false,
            master_seed: 7,
            workers: 2,
        }
    }

    #[test]
    fn empty_snr_list_yields_empty_output() {
        let mut s = tiny_gt_scenario();
        s.snr_db_list.clear();
        assert!(run_scenario(&s).unwrap().is_empty());
    }

    #[test]
    fn deterministic_across_worker_counts() {
        let mut a = tiny_gt_scenario();
        a.workers = 1;
        let mut b = tiny_gt_scenario();
        b.workers = 3;
        let ra = run_scenario(&a).unwrap();
        let rb = run_scenario(&b).unwrap();
        assert_eq!(render_results(&ra, OutputFormat::Csv), render_results(&rb, OutputFormat::Csv));
    }

    #[test]
    fn formats_are_field_identical_and_csv_parses_back() {
        let rows = vec![
            ResultRow {
                snr_db: 26.0,
                miss_rate: 1.0 / 3000.0,
                false_alarm_rate: 0.0,
                trials: 1200,
                wall_time_s: 0.4,
            },
            ResultRow {
                snr_db: 28.0,
                miss_rate: 0.25,
                false_alarm_rate: 0.125,
                trials: 4,
                wall_time_s: 0.1,
            },
        ];
        let csv = render_results(&rows, OutputFormat::Csv);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "snr_db,miss_rate,false_alarm_rate,trials");
        for (line, row) in lines.zip(rows.iter()) {
            let fields: Vec<&str> = line.split(',').collect();
            assert_eq!(fields.len(), 4);
            let miss: f64 = fields[1].parse().unwrap();
            assert!((miss - row.miss_rate).abs() <= row.miss_rate.abs() * 1e-5 + 1e-12);
        }
        let json = render_results(&rows, OutputFormat::Json);
        for row in &rows {
            assert!(json.contains(&format!("\"miss_rate\": {}", fmt_sig(row.miss_rate, 6))));
        }
    }

    #[test]
    fn near_far_requires_rm_scheme_and_reports_empty_bins_as_absent() {
        let s = tiny_gt_scenario();
        assert!(sweep_near_far(&s, &[-10.0, 0.0, 14.0]).is_err());
        let row = NearFarRow {
            snr_db: 10.0,
            attenuation_lo_db: -3.0,
            attenuation_hi_db: 0.0,
            neighbors: 0,
            misses: 0,
        };
        assert!(row.miss_rate().is_none());
        let csv = render_near_far(&[row], OutputFormat::Csv);
        assert!(csv.lines().nth(1).unwrap().ends_with(','));
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let mut s = tiny_gt_scenario();
        s.population = 0;
        assert!(s.validate().is_err());
        let mut s = tiny_gt_scenario();
        if let SchemeParams::RandomGt { ref mut on_fraction, .. } = s.scheme {
            *on_fraction = 1.5;
        }
        assert!(s.validate().is_err());
        let s = Scenario {
            scheme: SchemeParams::RmChirp {
                m: 5,
                m0: 1,
                n1: 5,
                n2: 5,
                max_iterations: None,
                accept_threshold: None,
                weak_limit: 5,
            },
            population: 5000, // exceeds 2^10
            ..tiny_gt_scenario()
        };
        assert!(s.validate().is_err());
    }

    #[test]
    fn network_wide_with_inflated_length_tracks_single_query() {
        // Half-duplex discovery loses a q-fraction of the measurements;
        // stretching the frame by 1/(1-q) restores single-query accuracy.
        let q = 0.04;
        let base = Scenario {
            scheme: SchemeParams::RandomGt {
                m_slots: 384,
                on_fraction: q,
                energy_threshold: 2.0,
                tolerance: 2,
                phase_randomization: true,
            },
            population: 2000,
            mean_neighbors: 8.0,
            path_loss_exponent: 3.0,
            neighbor_threshold: 0.05,
            snr_db_list: vec![26.0],
            realizations: 6,
            query_nodes: 40,
            network_wide: false,
            master_seed: 11,
            workers: 2,
        };
        let single = run_scenario(&base).unwrap()[0];
        let mut wide = base.clone();
        wide.network_wide = true;
        wide.master_seed = 12;
        if let SchemeParams::RandomGt { ref mut m_slots, .. } = wide.scheme {
            *m_slots = ((384.0 / (1.0 - q)).round()) as usize;
        }
        let widerow = run_scenario(&wide).unwrap()[0];
        let (a, b) = (
            single.miss_rate + single.false_alarm_rate,
            widerow.miss_rate + widerow.false_alarm_rate,
        );
        // Monte Carlo slack: equal-performance band, not exact equality
        assert!(
            (a - b).abs() <= 0.5 * a.max(b) + 5e-3,
            "single {a}, network-wide {b}"
        );
    }
}
