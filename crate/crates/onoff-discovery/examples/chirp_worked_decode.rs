//! Walk through one chirp decode of a small two-neighbor instance,
//! printing the peak arithmetic of every iteration: the first-row peak
//! of the shift-correlation transform, the recovered quadratic rows, the
//! dechirped b peak, and the fitted coefficient.
//!
//!     cargo run --release --example chirp_worked_decode

use num_complex::Complex64;
use onoff_discovery::channel::{apply_self_erasure, synthesize_received};
use onoff_discovery::chirp::{chirp_decode_traced, ChirpParams};
use onoff_discovery::rm::{bc_to_nia, RmCodebook, RmCodebookParams};
use onoff_discovery::rng::Key;

fn main() {
    let params = RmCodebookParams { m: 5, m0: 1, n1: 5, n2: 5 };
    let cb = RmCodebook::new(params, Key::master(42)).unwrap();

    // two neighbors: a strong one at coefficient 3 and a weaker one at 2j
    let strong = bc_to_nia(0b10010, 0b10100, &params);
    let weak = bc_to_nia(0b10110, 0b01010, &params);
    let s_strong = cb.signature(strong).unwrap();
    let s_weak = cb.signature(weak).unwrap();
    let (u1, u2) = (Complex64::new(3.0, 0.0), Complex64::new(0.0, 2.0));
    println!("neighbors: nia {strong} (U = {u1}), nia {weak} (U = {u2})");

    // the observing node hears the noiseless superposition through its
    // own off-slots
    let y = synthesize_received(&[(u1, &s_strong), (u2, &s_weak)], 1.0, 32, None).unwrap();
    let observer = cb.erasure(0).bits;
    let y = apply_self_erasure(&y, &observer).unwrap();

    let chirp = ChirpParams { max_iterations: 8, accept_threshold: 1.0, weak_limit: 3 };
    let (result, trace) = chirp_decode_traced(&y, &observer, &cb, &chirp);
    for (i, rec) in trace.iter().enumerate() {
        println!(
            "iteration {}: row peak at position {} (1-based {}) -> row {:05b}; \
             b peak at {} (1-based {}) -> b {:05b}; nia {}; fit {:.3} [{}]",
            i + 1,
            rec.row_peaks[0],
            rec.row_peaks[0] + 1,
            rec.rows[0],
            rec.b_peak,
            rec.b_peak + 1,
            rec.b,
            rec.nia,
            rec.coefficient_increment,
            if rec.committed { "kept" } else { "rejected" }
        );
    }
    println!("\ndecoded neighborhood:");
    for (nia, coef) in result.neighbors.iter().zip(result.coefficients.iter()) {
        println!("  nia {nia}: coefficient {coef:.6}");
    }
    println!("residual energy {:.2e}", result.residual_energy);
}
