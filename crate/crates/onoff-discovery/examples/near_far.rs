//! Near-far resilience of the chirp decoder: miss rates binned by link
//! attenuation (larger dB = weaker neighbor).
//!
//!     cargo run --release --example near_far

use onoff_discovery::experiment::{sweep_near_far, Scenario, SchemeParams};

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
        snr_db_list: vec![7.0],
        realizations: 4,
        query_nodes: 15,
        network_wide: true,
        master_seed: 5,
        workers: 0,
    };
    let edges = [-12.0, -9.0, -6.0, -3.0, 0.0, 3.0, 6.0, 9.0, 12.0, 13.2];
    println!("attenuation bin    neighbors   miss rate");
    for row in sweep_near_far(&scenario, &edges).unwrap() {
        println!(
            "[{:5.1}, {:5.1}) dB  {:9}   {}",
            row.attenuation_lo_db,
            row.attenuation_hi_db,
            row.neighbors,
            row.miss_rate()
                .map(|r| format!("{r:.4}"))
                .unwrap_or_else(|| "(no samples)".into())
        );
    }
}
