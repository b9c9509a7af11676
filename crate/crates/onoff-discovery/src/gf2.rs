//! Dense GF(2) linear algebra on u64-packed rows: rank, consistent-system
//! solve, and a reusable reduced-echelon solver for repeated right-hand
//! sides. Sized for the small systems the Reed-Muller codebook needs
//! (tens of unknowns), not for sieving-scale work.

/// Bit matrix, row major, each row packed into u64 words.
#[derive(Debug, Clone)]
pub struct BitMatrix {
    pub rows: usize,
    pub cols: usize,
    words_per_row: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zero(rows: usize, cols: usize) -> BitMatrix {
        let words_per_row = cols.div_ceil(64);
        BitMatrix { rows, cols, words_per_row, data: vec![0; rows * words_per_row] }
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.words_per_row + c / 64] >> (c % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = &mut self.data[r * self.words_per_row + c / 64];
        if v {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    fn row_xor(&mut self, dst: usize, src: usize) {
        let (w, n) = (self.words_per_row, self.data.len());
        debug_assert!(dst * w + w <= n && src * w + w <= n);
        if dst == src {
            return;
        }
        let (lo, hi) = if dst < src { (dst, src) } else { (src, dst) };
        let (a, b) = self.data.split_at_mut(hi * w);
        let lo_row = &a[lo * w..lo * w + w];
        let hi_row = &mut b[..w];
        if dst > src {
            for i in 0..w {
                hi_row[i] ^= lo_row[i];
            }
        } else {
            let a_dst = &mut a[lo * w..lo * w + w];
            for i in 0..w {
                a_dst[i] ^= hi_row[i];
            }
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let w = self.words_per_row;
        for i in 0..w {
            self.data.swap(a * w + i, b * w + i);
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().echelon().1.len()
    }

    /// In-place reduced row echelon form. Returns (self, pivot columns).
    fn echelon(mut self) -> (BitMatrix, Vec<usize>) {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| self.get(r, col)) else {
                continue;
            };
            self.swap_rows(row, p);
            for r in 0..self.rows {
                if r != row && self.get(r, col) {
                    self.row_xor(r, row);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (self, pivots)
    }
}

/// Precomputed solver for `A x = b` with a fixed `A`, answering many
/// right-hand sides. Rejects inconsistent systems; when the kernel is
/// nontrivial, returns the solution with free variables set to zero.
#[derive(Debug, Clone)]
pub struct Solver {
    cols: usize,
    pivots: Vec<usize>,
    /// row-operation record: solved RHS = ops * b
    ops: BitMatrix,
}

impl Solver {
    pub fn new(a: &BitMatrix) -> Solver {
        // Run elimination on [A | I] so RHS transformations replay cheaply.
        let mut aug = BitMatrix::zero(a.rows, a.cols + a.rows);
        for r in 0..a.rows {
            for c in 0..a.cols {
                if a.get(r, c) {
                    aug.set(r, c, true);
                }
            }
            aug.set(r, a.cols + r, true);
        }
        // eliminate only on the A columns
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..a.cols {
            if row == aug.rows {
                break;
            }
            let Some(p) = (row..aug.rows).find(|&r| aug.get(r, col)) else {
                continue;
            };
            aug.swap_rows(row, p);
            for r in 0..aug.rows {
                if r != row && aug.get(r, col) {
                    aug.row_xor(r, row);
                }
            }
            pivots.push(col);
            row += 1;
        }
        let mut ops = BitMatrix::zero(a.rows, a.rows);
        for r in 0..a.rows {
            for c in 0..a.rows {
                if aug.get(r, a.cols + c) {
                    ops.set(r, c, true);
                }
            }
        }
        Solver { cols: a.cols, pivots, ops }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Solve for x given b (len = rows); `None` if inconsistent.
    pub fn solve(&self, b: &[bool]) -> Option<Vec<bool>> {
        assert_eq!(b.len(), self.ops.rows);
        let rank = self.pivots.len();
        // transformed RHS
        let mut tb = vec![false; b.len()];
        for (r, tbr) in tb.iter_mut().enumerate() {
            let mut acc = false;
            for (c, &bc) in b.iter().enumerate() {
                if bc && self.ops.get(r, c) {
                    acc = !acc;
                }
            }
            *tbr = acc;
        }
        // rows beyond the rank are all-zero in A; they demand zero RHS
        if tb.iter().skip(rank).any(|&v| v) {
            return None;
        }
        let mut x = vec![false; self.cols];
        for (r, &pc) in self.pivots.iter().enumerate() {
            if !tb[r] {
                continue;
            }
            // reduced row r: x[pc] + Σ free coeffs; frees are zero
            x[pc] = true;
        }
        // Verify consistency against non-pivot structure: with frees at
        // zero, row r reads x[pivot_r] = tb[r], already satisfied.
        Some(x)
    }
}
