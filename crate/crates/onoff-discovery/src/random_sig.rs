//! Pseudo-random on-off signature codebook.
//!
//! Entry (m, n) of the codebook is an i.i.d. Bernoulli(q) pulse keyed by
//! `(codebook key, nia, slot)`, so any single entry is computable in O(1)
//! and the full N×M matrix never needs materializing. The same keying
//! carries the optional per-slot transmit phases; receivers never consume
//! them (detection is noncoherent).

use num_complex::Complex64;

use crate::rng::{tags, Key};

/// One node's signature with scheme metadata.
#[derive(Debug, Clone)]
pub struct OnOffSignature {
    pub nia: u32,
    pub on_fraction: f64,
    pub entries: Vec<Complex64>,
}

impl OnOffSignature {
    pub fn on_count(&self) -> usize {
        self.entries.iter().filter(|e| e.norm_sqr() > 0.0).count()
    }

    pub fn on_mask(&self) -> Vec<bool> {
        self.entries.iter().map(|e| e.norm_sqr() > 0.0).collect()
    }
}

/// Stateless random codebook over `population` NIAs and `m_slots` slots.
#[derive(Debug, Clone)]
pub struct RandomCodebook {
    pub population: usize,
    pub m_slots: usize,
    pub on_fraction: f64,
    bits_key: Key,
    phase_key: Key,
}

impl RandomCodebook {
    pub fn new(population: usize, m_slots: usize, on_fraction: f64, master: Key) -> Self {
        assert!(on_fraction > 0.0 && on_fraction < 1.0, "q must lie in (0,1)");
        assert!(m_slots >= 1);
        RandomCodebook {
            population,
            m_slots,
            on_fraction,
            bits_key: master.derive(tags::SIGNATURE_BITS),
            phase_key: master.derive(tags::SIGNATURE_PHASE),
        }
    }

    /// Whether node `nia` has a pulse at `slot`; O(1).
    #[inline]
    pub fn has_pulse(&self, nia: u32, slot: usize) -> bool {
        self.bits_key.derive(nia as u64).unit_f64(slot as u64) < self.on_fraction
    }

    /// Transmit phase of the pulse at `slot` (only meaningful where the
    /// signature is on).
    #[inline]
    pub fn pulse_phase(&self, nia: u32, slot: usize) -> f64 {
        2.0 * std::f64::consts::PI * self.phase_key.derive(nia as u64).unit_f64(slot as u64)
    }

    /// Slots where `nia` transmits, ascending.
    pub fn on_slots(&self, nia: u32) -> Vec<u16> {
        (0..self.m_slots)
            .filter(|&m| self.has_pulse(nia, m))
            .map(|m| m as u16)
            .collect()
    }

    /// Materialize one signature; pulses are 1 (or `e^{jθ}` with phase
    /// randomization enabled).
    pub fn signature(&self, nia: u32, randomize_phases: bool) -> OnOffSignature {
        let entries = (0..self.m_slots)
            .map(|m| {
                if self.has_pulse(nia, m) {
                    if randomize_phases {
                        Complex64::from_polar(1.0, self.pulse_phase(nia, m))
                    } else {
                        Complex64::new(1.0, 0.0)
                    }
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        OnOffSignature { nia, on_fraction: self.on_fraction, entries }
    }

    /// Multiply the on-entries of `sig` by the keyed unit phases of `nia`;
    /// off-entries and magnitudes are untouched.
    pub fn randomize_phases(&self, sig: &OnOffSignature) -> OnOffSignature {
        let entries = sig
            .entries
            .iter()
            .enumerate()
            .map(|(m, e)| {
                if e.norm_sqr() > 0.0 {
                    e * Complex64::from_polar(1.0, self.pulse_phase(sig.nia, m))
                } else {
                    *e
                }
            })
            .collect();
        OnOffSignature { nia: sig.nia, on_fraction: sig.on_fraction, entries }
    }

    /// Inverted index slot → nodes with a pulse there, for the
    /// group-testing elimination pass. O(N·M·q) memory.
    pub fn slot_index(&self) -> Vec<Vec<u32>> {
        let mut slots: Vec<Vec<u32>> = vec![Vec::new(); self.m_slots];
        for nia in 0..self.population as u32 {
            for &m in &self.on_slots(nia) {
                slots[m as usize].push(nia);
            }
        }
        slots
    }
}
