//! Dense complex least squares via Householder QR with column pivoting.
//!
//! Sized for the chirp decoder's tall-skinny systems (a few thousand rows,
//! tens of columns). Rank-deficient systems get the minimum-norm solution
//! through a complete orthogonal decomposition and are flagged.

use num_complex::Complex64;

#[derive(Debug, Clone)]
pub struct LsqSolution {
    pub x: Vec<Complex64>,
    pub rank: usize,
    pub rank_deficient: bool,
}

fn house_apply(col: &mut [Complex64], v: &[Complex64], from: usize) {
    // col -= 2 v (vᴴ col); v normalized, supported on rows from..
    let mut dot = Complex64::new(0.0, 0.0);
    for (vi, ci) in v.iter().zip(col[from..].iter()) {
        dot += vi.conj() * ci;
    }
    let two_dot = 2.0 * dot;
    for (vi, ci) in v.iter().zip(col[from..].iter_mut()) {
        *ci -= two_dot * vi;
    }
}

/// Householder vector zeroing x[1..]; returns (v normalized, new x[0]).
fn house_vector(x: &[Complex64]) -> Option<(Vec<Complex64>, Complex64)> {
    let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return None;
    }
    let x0 = x[0];
    let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { Complex64::new(1.0, 0.0) };
    let alpha = -phase * norm;
    let mut v: Vec<Complex64> = x.to_vec();
    v[0] -= alpha;
    let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if vnorm == 0.0 {
        return None;
    }
    for z in v.iter_mut() {
        *z /= vnorm;
    }
    Some((v, alpha))
}

/// Minimize ‖b − A x‖₂ over x, columns of A given as slices.
/// `rel_tol` sets the rank cutoff relative to the largest pivot.
pub fn least_squares(cols: &[&[Complex64]], rhs: &[Complex64], rel_tol: f64) -> LsqSolution {
    let k = cols.len();
    if k == 0 {
        return LsqSolution { x: Vec::new(), rank: 0, rank_deficient: false };
    }
    let m = rhs.len();
    for c in cols {
        assert_eq!(c.len(), m, "column/rhs length mismatch");
    }
    let mut a: Vec<Vec<Complex64>> = cols.iter().map(|c| c.to_vec()).collect();
    let mut b = rhs.to_vec();
    let mut perm: Vec<usize> = (0..k).collect();

    let steps = k.min(m);
    let mut r_diag_max = 0.0f64;
    let mut rank = steps;
    for j in 0..steps {
        // pivot: remaining column with the largest residual energy
        let (pivot, pivot_norm) = (j..k)
            .map(|c| (c, a[c][j..].iter().map(|z| z.norm_sqr()).sum::<f64>()))
            .fold((j, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        a.swap(j, pivot);
        perm.swap(j, pivot);
        let pivot_norm = pivot_norm.max(0.0).sqrt();
        if j == 0 {
            r_diag_max = pivot_norm;
        }
        if pivot_norm <= rel_tol * r_diag_max.max(f64::MIN_POSITIVE) {
            rank = j;
            break;
        }
        let Some((v, alpha)) = house_vector(&a[j][j..]) else {
            rank = j;
            break;
        };
        a[j][j] = alpha;
        for z in a[j][j + 1..].iter_mut() {
            *z = Complex64::new(0.0, 0.0);
        }
        for c in a.iter_mut().skip(j + 1) {
            house_apply(c, &v, j);
        }
        house_apply(&mut b, &v, j);
    }
    let rank_deficient = rank < k;

    let x_perm = if rank == 0 {
        vec![Complex64::new(0.0, 0.0); k]
    } else if !rank_deficient {
        // back substitution on the r×r triangle
        let mut x = vec![Complex64::new(0.0, 0.0); k];
        for i in (0..rank).rev() {
            let mut acc = b[i];
            for (jj, xj) in x.iter().enumerate().take(rank).skip(i + 1) {
                acc -= a[jj][i] * xj;
            }
            x[i] = acc / a[i][i];
        }
        x
    } else {
        // Complete orthogonal decomposition for the minimum-norm solution:
        // QR-factor W = [R11 R12]ᴴ (k×r), so [R11 R12] = T2ᴴ Q2ᴴ, then
        // forward-solve T2ᴴ y = Qᴴb and map back x = Q2 y.
        let mut w: Vec<Vec<Complex64>> = (0..rank)
            .map(|row| (0..k).map(|col| a[col][row].conj()).collect())
            .collect();
        let mut reflectors: Vec<Vec<Complex64>> = Vec::with_capacity(rank);
        for j in 0..rank {
            let Some((v, alpha)) = house_vector(&w[j][j..]) else {
                break;
            };
            w[j][j] = alpha;
            for z in w[j][j + 1..].iter_mut() {
                *z = Complex64::new(0.0, 0.0);
            }
            for c in w.iter_mut().skip(j + 1) {
                house_apply(c, &v, j);
            }
            reflectors.push(v);
        }
        // T2 upper triangular r×r: T2[i][j] = w[j][i] for i <= j
        // forward solve T2ᴴ y = b[0..r]
        let mut y = vec![Complex64::new(0.0, 0.0); rank];
        for i in 0..rank {
            let mut acc = b[i];
            for (jj, yj) in y.iter().enumerate().take(i) {
                // (T2ᴴ)[i][jj] = conj(T2[jj][i]) = conj(w[i][jj])
                acc -= w[i][jj].conj() * yj;
            }
            y[i] = acc / w[i][i].conj();
        }
        // x = Q2 y: extend y with zeros to length k, apply reflectors in
        // reverse order
        let mut x = vec![Complex64::new(0.0, 0.0); k];
        x[..rank].copy_from_slice(&y);
        for (j, v) in reflectors.iter().enumerate().rev() {
            house_apply(&mut x, v, j);
        }
        x
    };

    let mut x = vec![Complex64::new(0.0, 0.0); k];
    for (pos, &orig) in perm.iter().enumerate() {
        x[orig] = x_perm[pos];
    }
    LsqSolution { x, rank, rank_deficient }
}

/// Residual `b − A x` for a computed solution.
pub fn residual(cols: &[&[Complex64]], rhs: &[Complex64], x: &[Complex64]) -> Vec<Complex64> {
    let mut r = rhs.to_vec();
    for (c, xi) in cols.iter().zip(x.iter()) {
        if xi.norm_sqr() == 0.0 {
            continue;
        }
        for (ri, ci) in r.iter_mut().zip(c.iter()) {
            *ri -= xi * ci;
        }
    }
    r
}
