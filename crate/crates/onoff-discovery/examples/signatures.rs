//! Generate and inspect signatures from both codebooks.
//!
//!     cargo run --release --example signatures

use onoff_discovery::random_sig::RandomCodebook;
use onoff_discovery::rm::{nia_to_bc, RmCodebook, RmCodebookParams};
use onoff_discovery::rng::Key;

fn main() {
    let master = Key::master(7);

    // random on-off codebook: i.i.d. Bernoulli(q) pulses keyed by address
    let cb = RandomCodebook::new(10_000, 1024, 0.0371, master);
    for nia in [0u32, 42, 9_999] {
        let slots = cb.on_slots(nia);
        println!("random-gt nia {nia}: {} pulses, first slots {:?}", slots.len(), &slots[..slots.len().min(8)]);
    }

    // deterministic second-order Reed-Muller codebook with erasures
    let params = RmCodebookParams { m: 5, m0: 1, n1: 5, n2: 5 };
    let rm = RmCodebook::new(params, master).unwrap();
    let nia = 714u64;
    let (b, c) = nia_to_bc(nia, &params).unwrap();
    println!("\nrm nia {nia}: b = {b:05b}, c = {c:05b}");
    println!("quadratic-form rows:");
    for row in rm.p_matrix(c) {
        println!("  {row:05b}");
    }
    let sig = rm.signature(nia).unwrap();
    let rendered: Vec<String> = sig
        .iter()
        .map(|z| match (z.re as i8, z.im as i8) {
            (0, 0) => " 0".into(),
            (1, 0) => "+1".into(),
            (-1, 0) => "-1".into(),
            (0, 1) => "+j".into(),
            _ => "-j".into(),
        })
        .collect();
    println!("on-off signature: [{}]", rendered.join(", "));
    println!(
        "on-slots {} of {}, erasure period {}",
        sig.iter().filter(|z| z.norm_sqr() > 0.0).count(),
        sig.len(),
        rm.erasure(nia).period
    );
}
