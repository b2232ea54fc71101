//! Singular value decomposition by one-sided Jacobi rotations.

use super::matrix::DenseMatrix;

const MAX_SWEEPS: usize = 80;
const ORTHOGONALITY_TOL: f64 = 1e-15;

/// Thin SVD `X = U diag(sigma) Vᵀ` with `p = min(m, n)` singular triplets,
/// singular values in non-increasing order.
#[derive(Debug, Clone)]
pub struct ThinSvd {
    /// m × p, columns orthonormal where `sigma > 0`.
    pub u: DenseMatrix,
    pub sigma: Vec<f64>,
    /// n × p, orthonormal columns.
    pub v: DenseMatrix,
}

/// Decomposes any matrix. Works on the transpose when it has more columns than
/// rows so that the rotated dimension is the smaller one.
pub fn thin_svd(x: &DenseMatrix) -> ThinSvd {
    if x.rows() >= x.cols() {
        jacobi_tall(x)
    } else {
        let ThinSvd { u, sigma, v } = jacobi_tall(&x.transpose());
        ThinSvd { u: v, sigma, v: u }
    }
}

/// One-sided Jacobi on a matrix with `m >= n`: rotate column pairs until all
/// columns are mutually orthogonal; column norms are then the singular values.
fn jacobi_tall(x: &DenseMatrix) -> ThinSvd {
    let (m, n) = (x.rows(), x.cols());
    // column-major copies make the pair rotations contiguous
    let mut w: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..m).map(|i| x[(i, j)]).collect())
        .collect();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = dot(&w[p], &w[p]);
                let beta = dot(&w[q], &w[q]);
                let gamma = dot(&w[p], &w[q]);
                if gamma == 0.0 || gamma.abs() <= ORTHOGONALITY_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut w, p, q, c, s);
                rotate(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sigma: Vec<f64> = w.iter().map(|col| dot(col, col).sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| sigma[b].total_cmp(&sigma[a]));

    let mut u = DenseMatrix::zeros(m, n);
    let mut vm = DenseMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let s = sigma[src];
        for i in 0..m {
            u[(i, dst)] = if s > 0.0 { w[src][i] / s } else { 0.0 };
        }
        for i in 0..n {
            vm[(i, dst)] = v[src][i];
        }
    }
    sigma = order.iter().map(|&i| sigma[i]).collect();
    ThinSvd { u, sigma, v: vm }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn rotate(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (head, tail) = cols.split_at_mut(q);
    let (cp, cq) = (&mut head[p], &mut tail[0]);
    for (a, b) in cp.iter_mut().zip(cq.iter_mut()) {
        let (x, y) = (*a, *b);
        *a = c * x - s * y;
        *b = s * x + c * y;
    }
}
