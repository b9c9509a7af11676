//! SNR sweep of the chirp scheme at reduced scale, emitting the same
//! plot-ready CSV the `simulate` subcommand writes.
//!
//!     cargo run --release --example snr_sweep

use onoff_discovery::experiment::{render_results, run_scenario, OutputFormat, Scenario, SchemeParams};

fn main() {
    let scenario = Scenario {
        scheme: SchemeParams::RmChirp {
            m: 10,
            m0: 1,
            n1: 6,
            n2: 10,
            max_iterations: None,
            accept_threshold: None,
            weak_limit: 5,
        },
        population: 1 << 16,
        mean_neighbors: 6.0,
        path_loss_exponent: 3.0,
        neighbor_threshold: 0.05,
        snr_db_list: vec![9.0, 11.0, 13.0],
        realizations: 3,
        query_nodes: 12,
        network_wide: true,
        master_seed: 3,
        workers: 0,
    };
    let rows = run_scenario(&scenario).unwrap();
    print!("{}", render_results(&rows, OutputFormat::Csv));
}
