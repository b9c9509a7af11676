//! Deterministic second-order Reed-Muller signatures with structured
//! erasures.
//!
//! Codewords live on index set Z_2^m (MSB-first binary indexing) and take
//! the form `φ_{b,c}(a) = i^(aᵀP(c)a + 2bᵀa)` with the quadratic form
//! evaluated over the integers, so diagonal entries of `P` contribute ±j
//! factors. `P(c)` is a GF(2) combination of the Kerdock-style basis: for
//! each size `l ≤ m`, the matrices `P(e_l^i)` are binary Hankel matrices
//! whose top row is the unit vector `e_l^i` and whose remaining
//! anti-diagonals extend the top row through the linear recurrence of the
//! degree-`l` primitive polynomial, padded into the lower-right corner.
//! Bases are ordered size `m` first, then `m-1`, and so on.
//!
//! On-off signatures erase roughly half of each codeword with a per-node
//! periodic mask: the first `2^(m-m0)` bits are keyed fair coin flips and
//! the rest are periodic copies, which keeps the erasures of a signature
//! aligned with its own cyclic shifts by any multiple of the period — the
//! property the chirp decoder's shift-correlation relies on.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, Solver};
use crate::rng::{tags, Key};

/// Default primitive polynomial of degree `l` over GF(2), as a mask of the
/// low-order tap exponents: `x^l + Σ_{d in mask} x^d`.
fn primitive_poly_taps(l: usize) -> u32 {
    const TAPS: [u32; 17] = [
        0,
        0b1,              // x + 1
        0b11,             // x^2+x+1
        0b11,             // x^3+x+1
        0b11,             // x^4+x+1
        0b101,            // x^5+x^2+1
        0b11,             // x^6+x+1
        0b1001,           // x^7+x^3+1
        0b11101,          // x^8+x^4+x^3+x^2+1
        0b10001,          // x^9+x^4+1
        0b1001,           // x^10+x^3+1
        0b101,            // x^11+x^2+1
        0b1010011,        // x^12+x^6+x^4+x+1
        0b11011,          // x^13+x^4+x^3+x+1
        0b10001000011,    // x^14+x^10+x^6+x+1
        0b11,             // x^15+x+1
        0b1000000001011,  // x^16+x^12+x^3+x+1
    ];
    TAPS[l]
}

/// Symmetric binary m×m matrix stored as per-row column masks. Bit
/// `(m-1-k)` of `rows[i]` holds entry (i, k), so a mask ANDs directly
/// against an MSB-first slot index.
pub type SymMatrix = Vec<u32>;

/// Ordered basis of the m(m+1)/2-dimensional space of binary symmetric
/// matrices used to map address bits onto quadratic forms.
#[derive(Debug, Clone)]
pub struct KerdockBasis {
    pub m: usize,
    pub mats: Vec<SymMatrix>,
}

/// Hankel matrix of size l: anti-diagonal values h_1..h_{2l-1}, the first
/// l given by the top row, the rest generated by the primitive-polynomial
/// recurrence.
fn hankel_from_top_row(l: usize, top: u32) -> Vec<Vec<bool>> {
    let mut h = vec![false; 2 * l - 1];
    for (k, hk) in h.iter_mut().take(l).enumerate() {
        *hk = top >> (l - 1 - k) & 1 == 1;
    }
    let taps = primitive_poly_taps(l);
    for n in l..2 * l - 1 {
        let mut acc = false;
        for d in 0..l {
            if taps >> d & 1 == 1 && h[n - l + d] {
                acc = !acc;
            }
        }
        h[n] = acc;
    }
    (0..l)
        .map(|i| (0..l).map(|k| h[i + k]).collect())
        .collect()
}

/// Build the ordered basis for size `m` (m ≤ 16).
pub fn kerdock_basis(m: usize) -> KerdockBasis {
    assert!((1..=16).contains(&m), "supported sizes are 1..=16");
    let mut mats = Vec::with_capacity(m * (m + 1) / 2);
    for l in (1..=m).rev() {
        for i in 1..=l {
            let dense = hankel_from_top_row(l, 1 << (l - i));
            // pad into the lower-right corner of an m×m matrix
            let off = m - l;
            let rows: SymMatrix = (0..m)
                .map(|r| {
                    if r < off {
                        0u32
                    } else {
                        let mut mask = 0u32;
                        for (c, &bit) in dense[r - off].iter().enumerate() {
                            if bit {
                                mask |= 1 << (m - 1 - (off + c));
                            }
                        }
                        mask
                    }
                })
                .collect();
            mats.push(rows);
        }
    }
    KerdockBasis { m, mats }
}

impl KerdockBasis {
    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    /// GF(2)-rank of the basis viewed as vectors over the upper triangle.
    pub fn rank(&self) -> usize {
        let m = self.m;
        let dims = m * (m + 1) / 2;
        let mut mat = BitMatrix::zero(self.mats.len(), dims);
        for (r, rows) in self.mats.iter().enumerate() {
            let mut col = 0usize;
            for (i, &row) in rows.iter().enumerate() {
                for k in i..m {
                    if row >> (m - 1 - k) & 1 == 1 {
                        mat.set(r, col, true);
                    }
                    col += 1;
                }
            }
        }
        mat.rank()
    }
}

/// Full parameter set of the on-off RM codebook.
#[derive(Debug, Clone, Copy)]
pub struct RmCodebookParams {
    /// Codeword length is 2^m.
    pub m: usize,
    /// Erasure segmentation order; the erasure period is 2^(m-m0).
    pub m0: usize,
    /// Address bits mapped to the linear part b.
    pub n1: usize,
    /// Address bits mapped to the quadratic part c.
    pub n2: usize,
}

impl RmCodebookParams {
    pub fn address_bits(&self) -> usize {
        self.n1 + self.n2
    }

    pub fn codeword_len(&self) -> usize {
        1 << self.m
    }

    pub fn erasure_period(&self) -> usize {
        1 << (self.m - self.m0)
    }

    pub fn population(&self) -> u64 {
        1u64 << self.address_bits()
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=16).contains(&self.m) {
            return Err(Error::config("m must lie in 1..=16"));
        }
        if self.m0 < 1 || 2 * self.m0 > self.m {
            return Err(Error::config("m0 must satisfy 1 <= m0 <= m/2"));
        }
        if self.n1 > self.m {
            return Err(Error::config("n1 must not exceed m"));
        }
        let visible = self.m0 * (2 * self.m - self.m0 + 1) / 2;
        if self.n2 > visible {
            return Err(Error::config(format!(
                "n2 = {} exceeds the {} basis matrices visible in the first m0 rows",
                self.n2, visible
            )));
        }
        if self.address_bits() == 0 || self.address_bits() > 62 {
            return Err(Error::config("n1 + n2 must lie in 1..=62"));
        }
        Ok(())
    }
}

/// Split an address into its (b, c) parts: the first n1 bits (MSB side)
/// zero-extended to an m-bit b, the remaining n2 bits as c.
pub fn nia_to_bc(nia: u64, params: &RmCodebookParams) -> Result<(u32, u32)> {
    if nia >= params.population() {
        return Err(Error::config(format!(
            "address {nia} out of range for {} bits",
            params.address_bits()
        )));
    }
    let b_part = (nia >> params.n2) as u32;
    let c = (nia & ((1u64 << params.n2) - 1)) as u32;
    let b = b_part << (params.m - params.n1);
    Ok((b, c))
}

pub fn bc_to_nia(b: u32, c: u32, params: &RmCodebookParams) -> u64 {
    let b_part = (b >> (params.m - params.n1)) as u64;
    (b_part << params.n2) | c as u64
}

/// GF(2) combination `P(c) = Σ c_i B(i)` (c MSB-first over n2 bits).
pub fn p_of_c(c: u32, n2: usize, basis: &KerdockBasis) -> SymMatrix {
    let mut rows = vec![0u32; basis.m];
    for i in 0..n2 {
        if c >> (n2 - 1 - i) & 1 == 1 {
            for (r, b) in rows.iter_mut().zip(basis.mats[i].iter()) {
                *r ^= b;
            }
        }
    }
    rows
}

/// Evaluate one codeword entry: `i^(aᵀPa + 2bᵀa)` with the quadratic form
/// over the integers.
#[inline]
pub fn codeword_entry(a: usize, b: u32, p: &SymMatrix) -> Complex64 {
    let m = p.len();
    let mut q = 2 * (b & a as u32).count_ones();
    for (i, row) in p.iter().enumerate() {
        if a >> (m - 1 - i) & 1 == 1 {
            q += (row & a as u32).count_ones();
        }
    }
    match q % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Full-length QPSK codeword for (b, P).
pub fn rm_codeword(b: u32, p: &SymMatrix) -> Vec<Complex64> {
    let m = p.len();
    (0..1usize << m).map(|a| codeword_entry(a, b, p)).collect()
}

/// Per-node periodic erasure pattern; true marks an on-slot.
#[derive(Debug, Clone)]
pub struct ErasurePattern {
    pub bits: Vec<bool>,
    pub period: usize,
}

impl ErasurePattern {
    pub fn on_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

/// The erasure pattern of `nia`: one keyed Bernoulli(1/2) segment of
/// length 2^(m-m0) repeated 2^m0 times.
pub fn erasure_pattern(nia: u64, params: &RmCodebookParams, erasure_key: Key) -> ErasurePattern {
    let period = params.erasure_period();
    let seg_key = erasure_key.derive(nia);
    let bits = (0..params.codeword_len())
        .map(|slot| seg_key.bit((slot % period) as u64))
        .collect();
    ErasurePattern { bits, period }
}

/// The deterministic on-off RM codebook: basis, address mapping, erasure
/// source, and the precomputed GF(2) solver recovering `c` from the rows
/// of `P(c)` visible in the first `m0` rows.
#[derive(Debug, Clone)]
pub struct RmCodebook {
    pub params: RmCodebookParams,
    pub basis: KerdockBasis,
    erasure_key: Key,
    row_solver: Solver,
    erasure_overrides: HashMap<u64, Vec<bool>>,
}

impl RmCodebook {
    pub fn new(params: RmCodebookParams, master: Key) -> Result<RmCodebook> {
        params.validate()?;
        let basis = kerdock_basis(params.m);
        // visible-rows system: equations = entries of rows 0..m0,
        // unknowns = the n2 combination bits
        let m = params.m;
        let mut a = BitMatrix::zero(params.m0 * m, params.n2);
        for j in 0..params.n2 {
            for r in 0..params.m0 {
                for k in 0..m {
                    if basis.mats[j][r] >> (m - 1 - k) & 1 == 1 {
                        a.set(r * m + k, j, true);
                    }
                }
            }
        }
        let row_solver = Solver::new(&a);
        if row_solver.rank() != params.n2 {
            return Err(Error::config(format!(
                "first {} rows do not determine c: rank {} < n2 = {}",
                params.m0,
                row_solver.rank(),
                params.n2
            )));
        }
        Ok(RmCodebook {
            params,
            basis,
            erasure_key: master.derive(tags::RM_ERASURE),
            row_solver,
            erasure_overrides: HashMap::new(),
        })
    }

    /// Pin an explicit erasure pattern for one address (replaces the keyed
    /// pattern; used to replay externally generated instances).
    pub fn override_erasure(&mut self, nia: u64, bits: Vec<bool>) -> Result<()> {
        if bits.len() != self.params.codeword_len() {
            return Err(Error::shape("erasure override length mismatch"));
        }
        let period = self.params.erasure_period();
        for (i, &b) in bits.iter().enumerate() {
            if b != bits[i % period] {
                return Err(Error::shape("erasure override is not periodic"));
            }
        }
        self.erasure_overrides.insert(nia, bits);
        Ok(())
    }

    pub fn erasure(&self, nia: u64) -> ErasurePattern {
        if let Some(bits) = self.erasure_overrides.get(&nia) {
            return ErasurePattern { bits: bits.clone(), period: self.params.erasure_period() };
        }
        erasure_pattern(nia, &self.params, self.erasure_key)
    }

    pub fn p_matrix(&self, c: u32) -> SymMatrix {
        p_of_c(c, self.params.n2, &self.basis)
    }

    pub fn codeword(&self, nia: u64) -> Result<Vec<Complex64>> {
        let (b, c) = nia_to_bc(nia, &self.params)?;
        Ok(rm_codeword(b, &self.p_matrix(c)))
    }

    /// On-off signature: codeword masked by the node's erasure pattern.
    pub fn signature(&self, nia: u64) -> Result<Vec<Complex64>> {
        let (b, c) = nia_to_bc(nia, &self.params)?;
        let p = self.p_matrix(c);
        let er = self.erasure(nia);
        Ok((0..self.params.codeword_len())
            .map(|a| {
                if er.bits[a] {
                    codeword_entry(a, b, &p)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect())
    }

    /// Recover `(P, c)` from decoded rows 0..m0; `None` when the rows are
    /// inconsistent with the code.
    pub fn complete_from_rows(&self, rows: &[u32]) -> Option<(SymMatrix, u32)> {
        assert_eq!(rows.len(), self.params.m0);
        let m = self.params.m;
        let mut rhs = vec![false; self.params.m0 * m];
        for (r, &row) in rows.iter().enumerate() {
            for k in 0..m {
                rhs[r * m + k] = row >> (m - 1 - k) & 1 == 1;
            }
        }
        let sol = self.row_solver.solve(&rhs)?;
        let mut c = 0u32;
        for (j, &bit) in sol.iter().enumerate() {
            if bit {
                c |= 1 << (self.params.n2 - 1 - j);
            }
        }
        let p = self.p_matrix(c);
        // guard against solutions that match on pivots but not on the
        // requested rows (possible only if rhs was inconsistent)
        for (r, &row) in rows.iter().enumerate() {
            if p[r] != row {
                return None;
            }
        }
        Some((p, c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params_m5() -> RmCodebookParams {
        RmCodebookParams { m: 5, m0: 1, n1: 5, n2: 5 }
    }

    #[test]
    fn basis_matches_printed_small_cases() {
        // size 1: single matrix [1]
        let b1 = kerdock_basis(1);
        assert_eq!(b1.mats, vec![vec![0b1u32]]);

        // size 2: [[1,0],[0,1]], [[0,1],[1,1]], padded [[0,0],[0,1]]
        let b2 = kerdock_basis(2);
        assert_eq!(b2.mats.len(), 3);
        assert_eq!(b2.mats[0], vec![0b10, 0b01]);
        assert_eq!(b2.mats[1], vec![0b01, 0b11]);
        assert_eq!(b2.mats[2], vec![0b00, 0b01]);
    }

    #[test]
    fn basis_matrices_are_symmetric_and_independent() {
        for m in [2usize, 4, 5, 10] {
            let basis = kerdock_basis(m);
            assert_eq!(basis.len(), m * (m + 1) / 2);
            for mat in &basis.mats {
                for i in 0..m {
                    for k in 0..m {
                        let a = mat[i] >> (m - 1 - k) & 1;
                        let b = mat[k] >> (m - 1 - i) & 1;
                        assert_eq!(a, b, "m={m}: symmetry at ({i},{k})");
                    }
                }
            }
            assert_eq!(basis.rank(), basis.len(), "m={m}: full rank");
        }
    }

    #[test]
    fn address_split_and_round_trip() {
        let params = params_m5();
        assert_eq!(nia_to_bc(0, &params).unwrap(), (0, 0));
        for nia in 0..(1u64 << 10) {
            let (b, c) = nia_to_bc(nia, &params).unwrap();
            assert_eq!(bc_to_nia(b, c, &params), nia);
        }
        assert!(nia_to_bc(1 << 10, &params).is_err());

        // zero padding when n1 < m: the b part lands in the high bits
        let p = RmCodebookParams { m: 4, m0: 1, n1: 2, n2: 2 };
        let (b, c) = nia_to_bc(0b1101, &p).unwrap();
        assert_eq!(b, 0b1100);
        assert_eq!(c, 0b01);
    }

    #[test]
    fn codeword_matches_table_columns() {
        let basis = kerdock_basis(2);
        // b=0, c=0: all ones
        let p0 = p_of_c(0, 2, &basis);
        assert!(rm_codeword(0, &p0)
            .iter()
            .all(|z| (z - Complex64::new(1.0, 0.0)).norm() < 1e-15));
        // b=(0,1), c=0: [1,-1,1,-1]
        let w = rm_codeword(0b01, &p0);
        let expect = [(1.0, 0.0), (-1.0, 0.0), (1.0, 0.0), (-1.0, 0.0)];
        for (z, e) in w.iter().zip(expect.iter()) {
            assert!((z - Complex64::new(e.0, e.1)).norm() < 1e-15);
        }
        // b=0, c=(0,1): [1, j, 1, -j]
        let p1 = p_of_c(0b01, 2, &basis);
        let w = rm_codeword(0, &p1);
        let expect = [(1.0, 0.0), (0.0, 1.0), (1.0, 0.0), (0.0, -1.0)];
        for (z, e) in w.iter().zip(expect.iter()) {
            assert!((z - Complex64::new(e.0, e.1)).norm() < 1e-15);
        }
    }

    #[test]
    fn codewords_are_qpsk_and_distinct() {
        let params = RmCodebookParams { m: 3, m0: 1, n1: 3, n2: 3 };
        let cb = RmCodebook::new(params, Key::master(1)).unwrap();
        let mut seen = Vec::new();
        for nia in 0..params.population() {
            let w = cb.codeword(nia).unwrap();
            for z in &w {
                assert!((z.norm() - 1.0).abs() < 1e-12);
                assert!(z.re == 0.0 || z.im == 0.0, "phase multiple of π/2");
            }
            let fp: Vec<(i8, i8)> = w.iter().map(|z| (z.re as i8, z.im as i8)).collect();
            assert!(!seen.contains(&fp), "codeword collision at {nia}");
            seen.push(fp);
        }
    }

    #[test]
    fn erasure_pattern_is_periodic_and_balanced() {
        let params = RmCodebookParams { m: 6, m0: 2, n1: 6, n2: 6 };
        let key = Key::master(7).derive(tags::RM_ERASURE);
        let mut on = 0usize;
        let total = 2000u64;
        for nia in 0..total {
            let er = erasure_pattern(nia, &params, key);
            assert_eq!(er.period, 16);
            for (i, &b) in er.bits.iter().enumerate() {
                assert_eq!(b, er.bits[i % 16]);
            }
            on += er.on_count();
        }
        let frac = on as f64 / (total as f64 * 64.0);
        assert!((frac - 0.5).abs() < 0.01, "on-fraction {frac}");
    }

    #[test]
    fn forced_repetition_hand_case() {
        // m=2, m0=1: a first segment [1,0] forces the pattern [1,0,1,0]
        let params = RmCodebookParams { m: 2, m0: 1, n1: 2, n2: 2 };
        for nia in 0..4u64 {
            let er = erasure_pattern(nia, &params, Key::master(3).derive(tags::RM_ERASURE));
            assert_eq!(er.bits[2], er.bits[0]);
            assert_eq!(er.bits[3], er.bits[1]);
        }
    }

    #[test]
    fn signature_is_masked_codeword() {
        let params = params_m5();
        let cb = RmCodebook::new(params, Key::master(5)).unwrap();
        let nia = 0x2ABu64;
        let sig = cb.signature(nia).unwrap();
        let word = cb.codeword(nia).unwrap();
        let er = cb.erasure(nia);
        for a in 0..32 {
            if er.bits[a] {
                assert_eq!(sig[a], word[a]);
            } else {
                assert_eq!(sig[a], Complex64::new(0.0, 0.0));
            }
        }
        // all-zero erasure -> all-off signature
        let mut cb2 = RmCodebook::new(params, Key::master(5)).unwrap();
        cb2.override_erasure(nia, vec![false; 32]).unwrap();
        assert!(cb2.signature(nia).unwrap().iter().all(|z| z.norm_sqr() == 0.0));
    }

    #[test]
    fn visible_row_completion_round_trips() {
        let params = params_m5();
        let cb = RmCodebook::new(params, Key::master(11)).unwrap();
        let mut s = Key::master(23).stream();
        for _ in 0..1000 {
            let c = (s.next_u64() & 0x1f) as u32;
            let p = cb.p_matrix(c);
            let rows: Vec<u32> = p[..params.m0].to_vec();
            let (p2, c2) = cb.complete_from_rows(&rows).expect("consistent rows");
            assert_eq!(c2, c);
            assert_eq!(p2, p);
        }
    }

    #[test]
    fn inconsistent_rows_are_rejected() {
        // m=4, m0=2, n2 small: most row pairs are not in the code image
        let params = RmCodebookParams { m: 4, m0: 2, n1: 4, n2: 3 };
        let cb = RmCodebook::new(params, Key::master(2)).unwrap();
        let mut hits = 0;
        let mut misses = 0;
        for r0 in 0..16u32 {
            for r1 in 0..16u32 {
                match cb.complete_from_rows(&[r0, r1]) {
                    Some((p, _)) => {
                        assert_eq!(p[0], r0);
                        assert_eq!(p[1], r1);
                        hits += 1;
                    }
                    None => misses += 1,
                }
            }
        }
        assert_eq!(hits, 1 << params.n2);
        assert!(misses > 0);
    }

    #[test]
    fn worked_example_signatures_reproduced_exactly() {
        // The two-neighbor decoding illustration: length-32 on-off
        // signatures with (b, c) = (0b11000, 0b00010) and
        // (0b10110, 0b01010), erasures given by the printed supports.
        let params = params_m5();
        let s1_expect = printed_s1();
        let s2_expect = printed_s2();
        let mut cb = RmCodebook::new(params, Key::master(0)).unwrap();
        let nia1 = bc_to_nia(0b11000, 0b00010, &params);
        let nia2 = bc_to_nia(0b10110, 0b01010, &params);
        cb.override_erasure(nia1, s1_expect.iter().map(|z| z.norm_sqr() > 0.0).collect())
            .unwrap();
        cb.override_erasure(nia2, s2_expect.iter().map(|z| z.norm_sqr() > 0.0).collect())
            .unwrap();
        let s1 = cb.signature(nia1).unwrap();
        let s2 = cb.signature(nia2).unwrap();
        for a in 0..32 {
            assert!((s1[a] - s1_expect[a]).norm() < 1e-15, "S1 slot {a}");
            assert!((s2[a] - s2_expect[a]).norm() < 1e-15, "S2 slot {a}");
        }
    }

    pub(crate) fn printed_s1() -> Vec<Complex64> {
        let o = Complex64::new(0.0, 0.0);
        let p1 = Complex64::new(1.0, 0.0);
        let m1 = Complex64::new(-1.0, 0.0);
        let pj = Complex64::new(0.0, 1.0);
        let mj = Complex64::new(0.0, -1.0);
        vec![
            o, pj, o, o, p1, o, o, o, m1, mj, o, p1, p1, o, o, o, //
            o, mj, o, o, m1, o, o, o, p1, pj, o, p1, m1, o, o, o,
        ]
    }

    pub(crate) fn printed_s2() -> Vec<Complex64> {
        let o = Complex64::new(0.0, 0.0);
        let p1 = Complex64::new(1.0, 0.0);
        let m1 = Complex64::new(-1.0, 0.0);
        let pj = Complex64::new(0.0, 1.0);
        let mj = Complex64::new(0.0, -1.0);
        vec![
            p1, pj, o, mj, o, o, p1, o, p1, o, m1, o, o, pj, m1, mj, //
            m1, mj, o, mj, o, o, p1, o, p1, o, p1, o, o, pj, p1, pj,
        ]
    }
}
