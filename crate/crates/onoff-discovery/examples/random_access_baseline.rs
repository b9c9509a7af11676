//! Random-access discovery budgets versus single-frame on-off discovery,
//! with wall-clock figures for 802.11g-style timing.
//!
//!     cargo run --release --example random_access_baseline

use onoff_discovery::baseline::{discovery_time_report, min_frames_random_access};

fn main() {
    let target = 0.002;
    println!("target miss probability {target}");

    // 10^4 addresses, 14-bit frames (QPSK: 7 symbols per frame)
    println!("\npopulation 10^4, 14-bit frames:");
    for (c, cnd_symbols) in [(10.0, 1024u64), (30.0, 2048)] {
        let b = min_frames_random_access(10_000, c, target, 14).unwrap();
        println!(
            "  c = {c:>2}: random access {} frames = {} symbols; \
             on-off discovery 1 frame = {cnd_symbols} symbols",
            b.frames, b.symbols
        );
    }

    // 2^20 addresses, 20-bit frames (10 symbols per frame)
    println!("\npopulation 2^20, 20-bit frames:");
    for (c, cnd_symbols) in [(10.0, 1024u64), (30.0, 4096)] {
        let b = min_frames_random_access(1 << 20, c, target, 20).unwrap();
        println!(
            "  c = {c:>2}: random access {} frames = {} symbols; \
             on-off discovery 1 frame = {cnd_symbols} symbols",
            b.frames, b.symbols
        );
    }

    // 802.11g-style timing: 4 µs symbols, 850 µs probe-response frames
    let b = min_frames_random_access(10_000, 10.0, target, 14).unwrap();
    let t = discovery_time_report(1024, 4e-6, b.frames, 850e-6).unwrap();
    println!(
        "\n802.11g timing: random access ≈ {:.1} ms, single-frame on-off ≈ {:.1} ms",
        t.random_access_seconds * 1e3,
        t.compressed_seconds * 1e3
    );
    let conservative = discovery_time_report(1024, 30e-6, b.frames, 850e-6).unwrap();
    println!(
        "with a conservative 30 µs symbol interval: {:.0} ms",
        conservative.compressed_seconds * 1e3
    );
}
