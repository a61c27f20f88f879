//! Symmetric eigendecomposition by cyclic Jacobi rotations.
//!
//! The full spectrum is needed for trace checks and for comparing leading
//! eigenvalues between estimator variants, so a one-sided sweep solver is
//! enough: O(p³) per sweep, and p stays in the hundreds at desk scale.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::matrix::DcorMatrix;

/// Eigenpairs sorted by descending eigenvalue; column j of `eigenvectors`
/// belongs to `eigenvalues[j]`. Each vector's sign is fixed so that its
/// largest-magnitude component is positive.
#[derive(Clone, Debug)]
pub struct EigenResult {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Array2<f64>,
}

/// Asymmetry beyond this is rejected rather than silently averaged away.
const SYMMETRY_TOL: f64 = 1e-10;

/// Stop once the off-diagonal Frobenius norm falls below this fraction of
/// the full Frobenius norm.
const OFF_DIAGONAL_TOL: f64 = 1e-12;

const MAX_SWEEPS: usize = 64;

fn frobenius(m: &Array2<f64>) -> f64 {
    m.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn off_diagonal_norm(m: &Array2<f64>) -> f64 {
    let p = m.nrows();
    let mut acc = 0.0;
    for i in 0..p {
        for j in 0..p {
            if i != j {
                acc += m[[i, j]] * m[[i, j]];
            }
        }
    }
    acc.sqrt()
}

fn check_symmetric(m: &Array2<f64>) -> Result<()> {
    let (rows, cols) = m.dim();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    for i in 0..rows {
        for j in (i + 1)..cols {
            let delta = (m[[i, j]] - m[[j, i]]).abs();
            if delta > SYMMETRY_TOL {
                return Err(Error::NotSymmetric {
                    row: i,
                    col: j,
                    delta,
                });
            }
        }
    }
    Ok(())
}

/// Full eigendecomposition of a symmetric matrix.
///
/// Cyclic sweeps over all (p, q) pairs apply plane rotations that zero one
/// off-diagonal element at a time; the accumulated rotations form the
/// eigenvector matrix. Iteration stops when the off-diagonal Frobenius norm
/// drops below 1e-12 times the Frobenius norm of the input.
pub fn sym_eigen(values: &Array2<f64>) -> Result<EigenResult> {
    check_symmetric(values)?;
    let p = values.nrows();

    // Work on an exactly symmetric copy; input asymmetry is below tolerance.
    let mut m = values.clone();
    for i in 0..p {
        for j in (i + 1)..p {
            let v = 0.5 * (m[[i, j]] + m[[j, i]]);
            m[[i, j]] = v;
            m[[j, i]] = v;
        }
    }

    let mut v = Array2::<f64>::eye(p);
    let threshold = OFF_DIAGONAL_TOL * frobenius(&m);

    let mut converged = off_diagonal_norm(&m) <= threshold;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps });
        }
        sweeps += 1;
        for row in 0..p.saturating_sub(1) {
            for col in (row + 1)..p {
                rotate(&mut m, &mut v, row, col);
            }
        }
        converged = off_diagonal_norm(&m) <= threshold;
    }

    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&a, &b| m[[b, b]].partial_cmp(&m[[a, a]]).unwrap().then(a.cmp(&b)));

    let mut eigenvalues = Vec::with_capacity(p);
    let mut eigenvectors = Array2::<f64>::zeros((p, p));
    for (dst, &src) in order.iter().enumerate() {
        eigenvalues.push(m[[src, src]]);
        // Sign convention: largest-magnitude component positive.
        let mut best = 0;
        for i in 1..p {
            if v[[i, src]].abs() > v[[best, src]].abs() {
                best = i;
            }
        }
        let sign = if v[[best, src]] < 0.0 { -1.0 } else { 1.0 };
        for i in 0..p {
            eigenvectors[[i, dst]] = sign * v[[i, src]];
        }
    }

    Ok(EigenResult {
        eigenvalues,
        eigenvectors,
    })
}

/// One Jacobi rotation annihilating m[row][col], with the rotation folded
/// into the eigenvector accumulator.
fn rotate(m: &mut Array2<f64>, v: &mut Array2<f64>, row: usize, col: usize) {
    let apq = m[[row, col]];
    if apq == 0.0 {
        return;
    }
    let app = m[[row, row]];
    let aqq = m[[col, col]];
    let theta = 0.5 * (aqq - app) / apq;
    // 1/(|θ| + sqrt(θ²+1)), falling back to the 1/(2θ) limit before θ²
    // overflows.
    let t = if theta.abs() > 1e153 {
        0.5 / theta
    } else {
        let sign = if theta < 0.0 { -1.0 } else { 1.0 };
        sign / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let tau = s / (1.0 + c);

    let p = m.nrows();
    m[[row, row]] = app - t * apq;
    m[[col, col]] = aqq + t * apq;
    m[[row, col]] = 0.0;
    m[[col, row]] = 0.0;
    for j in 0..p {
        if j != row && j != col {
            let g = m[[j, row]];
            let h = m[[j, col]];
            m[[j, row]] = g - s * (h + g * tau);
            m[[row, j]] = m[[j, row]];
            m[[j, col]] = h + s * (g - h * tau);
            m[[col, j]] = m[[j, col]];
        }
    }
    for j in 0..p {
        let g = v[[j, row]];
        let h = v[[j, col]];
        v[[j, row]] = g - s * (h + g * tau);
        v[[j, col]] = h + s * (g - h * tau);
    }
}

/// The k leading eigenpairs of a pairwise dependence matrix.
pub fn top_eigen(m: &DcorMatrix, k: usize) -> Result<EigenResult> {
    let p = m.p();
    if k < 1 || k > p {
        return Err(Error::InvalidParameter(format!(
            "k must be between 1 and {p}, got {k}"
        )));
    }
    let full = sym_eigen(m.values())?;
    Ok(EigenResult {
        eigenvalues: full.eigenvalues[..k].to_vec(),
        eigenvectors: full.eigenvectors.slice(ndarray::s![.., ..k]).to_owned(),
    })
}
