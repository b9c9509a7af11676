//! Thin command-line front end. All real work lives in the library; see
//! the crate examples for programmatic entry points.

use std::collections::BTreeMap;
use std::path::PathBuf;

use num_complex::Complex64;
use serde::Deserialize;

use onoff_discovery::baseline;
use onoff_discovery::channel::MeasurementVector;
use onoff_discovery::chirp::{chirp_decode, ChirpParams};
use onoff_discovery::config;
use onoff_discovery::error::{Error, Result};
use onoff_discovery::experiment::{self, OutputFormat, Scenario, SchemeParams};
use onoff_discovery::group_testing;
use onoff_discovery::numeric::fmt_sig;
use onoff_discovery::random_sig::RandomCodebook;
use onoff_discovery::rm::{nia_to_bc, RmCodebook, RmCodebookParams};
use onoff_discovery::rng::Key;

const USAGE: &str = "\
onoff-discovery: single-frame neighbor discovery simulator

USAGE:
  onoff-discovery <SUBCOMMAND> [FLAGS]

SUBCOMMANDS:
  gen-signatures   print one node's signature as JSON
      --scheme random-gt --nia <n> --m-slots <M> --q <q> [--phases]
      --scheme rm --nia <n> --m <m> [--m0 <k>] --n1 <a> --n2 <b>
  decode           chirp-decode a serialized measurement (JSON on stdin
                   or --input <path>), printing the discovered set
      --scheme rm --m <m> [--m0 <k>] --n1 <a> --n2 <b>
      [--observer-nia <n>] [--eta0 <v>] [--t-max <n>] [--n0 <n>]
  simulate         run a scenario SNR sweep, emitting plot-ready rows
      --config <path> [--set key=value]... [--out <path>]
      [--format csv|json] [--seed <u64>] [--workers <n>]
  sweep-near-far   per-attenuation-bin miss rates (rm-chirp scenarios)
      (simulate flags) [--bins <comma list of dB edges>]
  optimize-params  grid search for the (q, T) design of random-gt
      --config <path> [--snr-db <v>] [--q-grid <list>] [--t-grid <list>]
      [--trials <n>] (other simulate flags)
  baseline-ra      random-access discovery budget tables
      --population <N> --mean-neighbors <list> [--target <p>]
      [--bits <n>] [--compressed-symbols <list>]
      [--symbol-us <v>] [--frame-us <v>]

Exit codes: 0 success, 2 configuration error, 3 i/o error.
";

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match run(&args) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(e.exit_code());
        }
    }
}

/// Parsed `--flag value` pairs; a flag followed by another flag (or by
/// nothing) is boolean.
struct Flags(BTreeMap<String, String>);

impl Flags {
    fn parse(args: &[String]) -> Result<Flags> {
        let mut map = BTreeMap::new();
        let mut i = 0;
        while i < args.len() {
            let a = &args[i];
            let Some(name) = a.strip_prefix("--") else {
                return Err(Error::config(format!("unexpected argument '{a}'")));
            };
            if i + 1 < args.len() && !args[i + 1].starts_with("--") {
                map.insert(name.to_string(), args[i + 1].clone());
                i += 2;
            } else {
                map.insert(name.to_string(), "true".to_string());
                i += 1;
            }
        }
        Ok(Flags(map))
    }

    fn get(&self, name: &str) -> Option<&str> {
        self.0.get(name).map(|s| s.as_str())
    }

    fn parsed<T: std::str::FromStr>(&self, name: &str) -> Result<Option<T>> {
        match self.get(name) {
            None => Ok(None),
            Some(v) => v
                .parse::<T>()
                .map(Some)
                .map_err(|_| Error::config(format!("invalid value for --{name}: '{v}'"))),
        }
    }

    fn require<T: std::str::FromStr>(&self, name: &str) -> Result<T> {
        self.parsed(name)?
            .ok_or_else(|| Error::config(format!("missing required flag --{name}")))
    }

    fn boolean(&self, name: &str) -> bool {
        matches!(self.get(name), Some("true") | Some("1") | Some("yes"))
    }
}

fn run(args: &[String]) -> Result<()> {
    let Some(cmd) = args.first() else {
        print!("{USAGE}");
        return Ok(());
    };
    let rest = &args[1..];
    match cmd.as_str() {
        "gen-signatures" => gen_signatures(&Flags::parse(rest)?),
        "decode" => decode(&Flags::parse(rest)?),
        "simulate" => simulate(&Flags::parse(rest)?),
        "sweep-near-far" => sweep_near_far(&Flags::parse(rest)?),
        "optimize-params" => optimize_params(&Flags::parse(rest)?),
        "baseline-ra" => baseline_ra(&Flags::parse(rest)?),
        "help" | "--help" | "-h" => {
            print!("{USAGE}");
            Ok(())
        }
        other => Err(Error::config(format!("unknown subcommand '{other}'"))),
    }
}

fn write_output(text: &str, flags: &Flags) -> Result<()> {
    let path = flags.get("out").map(PathBuf::from);
    experiment::emit(text, path.as_deref())
}

fn complex_json(z: &Complex64) -> serde_json::Value {
    serde_json::json!([z.re, z.im])
}

fn gen_signatures(flags: &Flags) -> Result<()> {
    let scheme: String = flags.require("scheme")?;
    let nia: u64 = flags.require("nia")?;
    let seed: u64 = flags.parsed("seed")?.unwrap_or(0);
    let master = Key::master(seed);
    let value = match scheme.as_str() {
        "random-gt" => {
            let m_slots: usize = flags.require("m-slots")?;
            let q: f64 = flags.require("q")?;
            if !(0.0 < q && q < 1.0) {
                return Err(Error::config("q must lie in (0, 1)"));
            }
            if nia > u32::MAX as u64 {
                return Err(Error::config("random-gt addresses are 32-bit"));
            }
            let cb = RandomCodebook::new((nia + 1) as usize, m_slots, q, master);
            let on_slots = cb.on_slots(nia as u32);
            let mut obj = serde_json::json!({
                "scheme": "random-gt",
                "nia": nia,
                "m_slots": m_slots,
                "q": q,
                "on_slots": on_slots,
            });
            if flags.boolean("phases") {
                let phases: Vec<f64> = on_slots
                    .iter()
                    .map(|&s| cb.pulse_phase(nia as u32, s as usize))
                    .collect();
                obj["phases"] = serde_json::json!(phases);
            }
            obj
        }
        "rm" => {
            let params = RmCodebookParams {
                m: flags.require("m")?,
                m0: flags.parsed("m0")?.unwrap_or(1),
                n1: flags.require("n1")?,
                n2: flags.require("n2")?,
            };
            let cb = RmCodebook::new(params, master)?;
            let (b, c) = nia_to_bc(nia, &params)?;
            let p = cb.p_matrix(c);
            let codeword = cb.codeword(nia)?;
            let erasure = cb.erasure(nia);
            let signature = cb.signature(nia)?;
            serde_json::json!({
                "scheme": "rm",
                "nia": nia,
                "m": params.m,
                "m0": params.m0,
                "b": format!("{:0width$b}", b, width = params.m),
                "c": format!("{:0width$b}", c, width = params.n2),
                "p_rows": p.iter()
                    .map(|row| format!("{:0width$b}", row, width = params.m))
                    .collect::<Vec<_>>(),
                "codeword": codeword.iter().map(complex_json).collect::<Vec<_>>(),
                "erasure": erasure.bits.iter().map(|&b| b as u8).collect::<Vec<_>>(),
                "signature": signature.iter().map(complex_json).collect::<Vec<_>>(),
            })
        }
        other => return Err(Error::config(format!("unknown scheme '{other}'"))),
    };
    write_output(&format!("{}\n", serde_json::to_string_pretty(&value).unwrap()), flags)
}

#[derive(Deserialize)]
struct MeasurementIn {
    samples: Vec<[f64; 2]>,
    #[serde(default)]
    erasure_mask: Option<Vec<u8>>,
    #[serde(default)]
    observer_nia: Option<u64>,
}

fn decode(flags: &Flags) -> Result<()> {
    let scheme: String = flags.require("scheme")?;
    if scheme != "rm" {
        return Err(Error::config("decode currently supports --scheme rm"));
    }
    let params = RmCodebookParams {
        m: flags.require("m")?,
        m0: flags.parsed("m0")?.unwrap_or(1),
        n1: flags.require("n1")?,
        n2: flags.require("n2")?,
    };
    let seed: u64 = flags.parsed("seed")?.unwrap_or(0);
    let cb = RmCodebook::new(params, Key::master(seed))?;

    let text = match flags.get("input") {
        Some(path) => std::fs::read_to_string(path)?,
        None => {
            use std::io::Read;
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf)?;
            buf
        }
    };
    let input: MeasurementIn = serde_json::from_str(&text)
        .map_err(|e| Error::config(format!("bad measurement JSON: {e}")))?;
    let len = params.codeword_len();
    if input.samples.len() != len {
        return Err(Error::shape(format!(
            "measurement has {} samples, codebook expects {len}",
            input.samples.len()
        )));
    }
    let samples: Vec<Complex64> =
        input.samples.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
    let erasure_mask = match &input.erasure_mask {
        Some(mask) if mask.len() == len => Some(mask.iter().map(|&b| b != 0).collect()),
        Some(_) => return Err(Error::shape("erasure mask length mismatch")),
        None => None,
    };
    let y = MeasurementVector { samples, erasure_mask };

    let observer_nia = flags.parsed::<u64>("observer-nia")?.or(input.observer_nia);
    let own: Vec<bool> = match observer_nia {
        Some(nia) => cb.erasure(nia).bits,
        None => vec![false; len],
    };

    let defaults = ChirpParams::defaults_for(
        flags.parsed("mean-neighbors")?.unwrap_or(10.0),
        10f64.powf(flags.parsed("snr-db")?.unwrap_or(13.0) / 10.0),
        flags.parsed("eta")?.unwrap_or(0.05),
        len,
    );
    let chirp = ChirpParams {
        max_iterations: flags.parsed("t-max")?.unwrap_or(defaults.max_iterations),
        accept_threshold: flags.parsed("eta0")?.unwrap_or(defaults.accept_threshold),
        weak_limit: flags.parsed("n0")?.unwrap_or(defaults.weak_limit),
    };
    let out = chirp_decode(&y, &own, &cb, &chirp);
    let value = serde_json::json!({
        "neighbors": out.neighbors,
        "coefficients": out.coefficients.iter().map(complex_json).collect::<Vec<_>>(),
        "iterations_used": out.iterations_used,
        "residual_energy": out.residual_energy,
        "rank_deficiency": out.rank_deficiency,
    });
    write_output(&format!("{}\n", serde_json::to_string_pretty(&value).unwrap()), flags)
}

/// Config file + `--set key=value` overrides + dedicated flags.
fn load_scenario(flags: &Flags) -> Result<Scenario> {
    let mut map = match flags.get("config") {
        Some(path) => config::parse_kv(&std::fs::read_to_string(path)?)?,
        None => config::ConfigMap::new(),
    };
    if let Some(v) = flags.get("set") {
        let Some((key, value)) = v.split_once('=') else {
            return Err(Error::config("--set expects key=value"));
        };
        map.insert(key.trim().to_ascii_lowercase(), value.trim().to_string());
    }
    if let Some(seed) = flags.get("seed") {
        map.insert("seed".into(), seed.into());
    }
    if let Some(workers) = flags.get("workers") {
        map.insert("workers".into(), workers.into());
    }
    config::scenario_from_map(&map)
}

fn log_resolved(s: &Scenario, flags: &Flags) -> Result<()> {
    let resolved = config::resolved_config(s);
    match flags.get("out") {
        Some(out) => {
            let path = PathBuf::from(format!("{out}.config"));
            std::fs::write(path, resolved)?;
        }
        None => eprint!("# resolved configuration\n{resolved}"),
    }
    Ok(())
}

fn output_format(flags: &Flags) -> Result<OutputFormat> {
    flags.get("format").unwrap_or("csv").parse()
}

fn simulate(flags: &Flags) -> Result<()> {
    let scenario = load_scenario(flags)?;
    log_resolved(&scenario, flags)?;
    let rows = experiment::run_scenario(&scenario)?;
    for r in &rows {
        eprintln!(
            "# snr {} dB: miss {} fa {} ({} trials, {:.1}s)",
            fmt_sig(r.snr_db, 6),
            fmt_sig(r.miss_rate, 6),
            fmt_sig(r.false_alarm_rate, 6),
            r.trials,
            r.wall_time_s
        );
    }
    write_output(&experiment::render_results(&rows, output_format(flags)?), flags)
}

fn sweep_near_far(flags: &Flags) -> Result<()> {
    let scenario = load_scenario(flags)?;
    log_resolved(&scenario, flags)?;
    let edges = match flags.get("bins") {
        Some(list) => config::parse_f64_list(list)?,
        None => vec![-12.0, -9.0, -6.0, -3.0, 0.0, 3.0, 6.0, 9.0, 12.0, 13.2],
    };
    let rows = experiment::sweep_near_far(&scenario, &edges)?;
    write_output(&experiment::render_near_far(&rows, output_format(flags)?), flags)
}

fn optimize_params(flags: &Flags) -> Result<()> {
    let scenario = load_scenario(flags)?;
    let SchemeParams::RandomGt { m_slots, tolerance, phase_randomization, .. } = scenario.scheme
    else {
        return Err(Error::config("optimize-params requires a random-gt scenario"));
    };
    let reference_snr: f64 = flags
        .parsed("snr-db")?
        .or_else(|| scenario.snr_db_list.first().copied())
        .ok_or_else(|| Error::config("no reference SNR given"))?;
    let q_grid = match flags.get("q-grid") {
        Some(list) => config::parse_f64_list(list)?,
        None => group_testing::default_q_grid(),
    };
    let t_grid = match flags.get("t-grid") {
        Some(list) => config::parse_f64_list(list)?,
        None => group_testing::default_t_grid(),
    };
    let trials: usize = flags.parsed("trials")?.unwrap_or(200);
    let realizations = trials.div_ceil(scenario.query_nodes).max(1);

    let evaluate = |q: f64, t: f64| {
        let point = Scenario {
            scheme: SchemeParams::RandomGt {
                m_slots,
                on_fraction: q,
                energy_threshold: t,
                tolerance,
                phase_randomization,
            },
            snr_db_list: vec![reference_snr],
            realizations,
            ..scenario.clone()
        };
        let rows = experiment::run_scenario(&point).expect("validated scenario");
        (rows[0].miss_rate, rows[0].false_alarm_rate)
    };
    let (best, table) = group_testing::optimize_parameters(&q_grid, &t_grid, evaluate);

    let mut out = String::from("q,threshold,miss_rate,false_alarm_rate,total_error,selected\n");
    for p in &table {
        let selected =
            p.on_fraction == best.on_fraction && p.energy_threshold == best.energy_threshold;
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt_sig(p.on_fraction, 6),
            fmt_sig(p.energy_threshold, 6),
            fmt_sig(p.miss_rate, 6),
            fmt_sig(p.false_alarm_rate, 6),
            fmt_sig(p.total_error(), 6),
            selected
        ));
    }
    eprintln!(
        "# selected q = {}, T = {}",
        fmt_sig(best.on_fraction, 6),
        fmt_sig(best.energy_threshold, 6)
    );
    write_output(&out, flags)
}

fn baseline_ra(flags: &Flags) -> Result<()> {
    let population: u64 = flags.require("population")?;
    let cs = config::parse_f64_list(flags.get("mean-neighbors").unwrap_or("10,30"))?;
    let target: f64 = flags.parsed("target")?.unwrap_or(0.002);
    let bits: u64 = flags
        .parsed("bits")?
        .unwrap_or_else(|| (population as f64).log2().ceil() as u64);
    let compressed: Vec<f64> = match flags.get("compressed-symbols") {
        Some(list) => config::parse_f64_list(list)?,
        None => Vec::new(),
    };
    let symbol_us: Option<f64> = flags.parsed("symbol-us")?;
    let frame_us: Option<f64> = flags.parsed("frame-us")?;

    let mut out =
        String::from("mean_neighbors,ra_frames,ra_theta,ra_miss,ra_symbols,cnd_frames,cnd_symbols");
    let timing = symbol_us.zip(frame_us);
    if timing.is_some() {
        out.push_str(",ra_time_ms,cnd_time_ms");
    }
    out.push('\n');
    for (i, &c) in cs.iter().enumerate() {
        let budget = baseline::min_frames_random_access(population, c, target, bits)?;
        let cnd_symbols = compressed.get(i).copied();
        out.push_str(&format!(
            "{},{},{},{},{},1,{}",
            fmt_sig(c, 6),
            budget.frames,
            fmt_sig(budget.theta, 6),
            fmt_sig(budget.miss, 6),
            budget.symbols,
            cnd_symbols.map(|v| fmt_sig(v, 6)).unwrap_or_default(),
        ));
        if let Some((sym_us, frm_us)) = timing {
            let report = baseline::discovery_time_report(
                cnd_symbols.unwrap_or(0.0) as u64,
                sym_us * 1e-6,
                budget.frames,
                frm_us * 1e-6,
            )?;
            out.push_str(&format!(
                ",{},{}",
                fmt_sig(report.random_access_seconds * 1e3, 6),
                cnd_symbols
                    .map(|_| fmt_sig(report.compressed_seconds * 1e3, 6))
                    .unwrap_or_default()
            ));
        }
        out.push('\n');
    }
    write_output(&out, flags)
}
