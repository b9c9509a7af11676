//! Sample a stochastic-geometry network and compare the measured mean
//! neighbor count of central nodes with the closed form.
//!
//!     cargo run --release --example network_realization

use onoff_discovery::channel::{
    expected_neighbor_count, intensity_for_mean_neighbors, sample_network, NetworkConfig,
};

fn main() {
    let (alpha, eta) = (3.0, 0.05);
    let target_c = 30.0;
    let lambda = intensity_for_mean_neighbors(target_c, alpha, eta);
    let population = 10_000;
    let half_width = 0.5 * (population as f64 / lambda).sqrt();
    let cfg = NetworkConfig {
        intensity: lambda,
        path_loss_exponent: alpha,
        neighbor_threshold: eta,
        region_half_width: half_width,
        population,
    };
    println!(
        "intensity {lambda:.4} nodes/unit^2, region half-width {half_width:.1}, \
         closed-form mean neighbors {:.2}",
        expected_neighbor_count(lambda, alpha, eta)
    );

    let mut total = 0usize;
    let mut queries = 0usize;
    for seed in 0..5 {
        let real = sample_network(&cfg, seed).unwrap();
        let central = real.nearest_to_origin(100);
        let counts: Vec<usize> = central.iter().map(|&q| real.neighbor_set(q).len()).collect();
        total += counts.iter().sum::<usize>();
        queries += counts.len();
        println!(
            "seed {seed}: {} nodes, central neighbor counts min/max {}/{}",
            real.nodes.len(),
            counts.iter().min().unwrap(),
            counts.iter().max().unwrap()
        );
    }
    println!(
        "measured mean over {} central queries: {:.2}",
        queries,
        total as f64 / queries as f64
    );
}
