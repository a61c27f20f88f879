//! Scalar dependence statistics.
//!
//! The squared distance covariance of two centered distance matrices is the
//! mean of the entrywise products. Two estimator variants are provided:
//!
//! * `Naive` averages over all n² entry pairs, diagonal included. It is
//!   consistent but carries a positive finite-sample bias: the diagonal of a
//!   centered distance matrix is distributed very differently from the
//!   off-diagonal entries and inflates the statistic at small n.
//! * `NoDiag` drops the k = l terms and divides by the number of retained
//!   terms, n(n−1). The off-diagonal sum can be negative, so the statistic
//!   is reported signed and the correlation is a signed square root.
//!
//! Sums run row-major over (k, l) with compensated accumulation, so results
//! are bit-reproducible and symmetric in the two arguments.

use ndarray::Array2;

use crate::distance::{double_center, pairwise_distances, CenteredDistanceMatrix, PairedSample};
use crate::error::{Error, Result};
use crate::kahan::KahanSum;

/// Which averaging rule the dependence statistic uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EstimatorVariant {
    /// Mean over all n² entry products, diagonal included.
    Naive,
    /// Mean over the n(n−1) off-diagonal entry products.
    NoDiag,
}

impl EstimatorVariant {
    pub fn name(self) -> &'static str {
        match self {
            EstimatorVariant::Naive => "naive",
            EstimatorVariant::NoDiag => "nodiag",
        }
    }
}

impl std::str::FromStr for EstimatorVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(EstimatorVariant::Naive),
            "nodiag" => Ok(EstimatorVariant::NoDiag),
            other => Err(Error::InvalidParameter(format!(
                "unknown estimator variant '{other}' (expected 'naive' or 'nodiag')"
            ))),
        }
    }
}

/// The pieces of a dependence evaluation on centered matrices.
#[derive(Clone, Copy, Debug)]
pub struct DependenceParts {
    pub dcov2: f64,
    pub dvar2_x: f64,
    pub dvar2_y: f64,
    pub dcor: f64,
}

/// A full dependence estimate with sample metadata.
#[derive(Clone, Copy, Debug)]
pub struct DependenceEstimate {
    pub dcov2: f64,
    pub dcor: f64,
    pub dvar2_x: f64,
    pub dvar2_y: f64,
    pub variant: EstimatorVariant,
    pub n: usize,
    pub dx: usize,
    pub dy: usize,
}

/// Squared distance covariance of two centered matrices.
pub fn dcov2(
    a: &CenteredDistanceMatrix,
    b: &CenteredDistanceMatrix,
    variant: EstimatorVariant,
) -> Result<f64> {
    if a.n() != b.n() {
        return Err(Error::SizeMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    let n = a.n();
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let (av, bv) = (a.values(), b.values());
    let mut acc = KahanSum::new();
    match variant {
        EstimatorVariant::Naive => {
            for k in 0..n {
                for l in 0..n {
                    acc.add(av[[k, l]] * bv[[k, l]]);
                }
            }
            Ok(acc.value() / (n * n) as f64)
        }
        EstimatorVariant::NoDiag => {
            if n < 2 {
                return Err(Error::TooFewObservations {
                    op: "diagonal-excluded dcov2",
                    min: 2,
                    got: n,
                });
            }
            for k in 0..n {
                for l in 0..n {
                    if k != l {
                        acc.add(av[[k, l]] * bv[[k, l]]);
                    }
                }
            }
            Ok(acc.value() / (n * (n - 1)) as f64)
        }
    }
}

/// Squared distance variance: the covariance of a matrix with itself.
pub fn dvar2(a: &CenteredDistanceMatrix, variant: EstimatorVariant) -> Result<f64> {
    dcov2(a, a, variant)
}

/// The distance correlation implied by dcov2 and the two distance variances.
///
/// Degenerate denominators map to 0. The naive ratio is clamped to [0, 1]
/// before the square root: the underlying statistic is nonnegative and at
/// most 1, and the clamp only absorbs last-ulp rounding.
pub(crate) fn dcor_from_parts(
    dcov2: f64,
    dvar2_x: f64,
    dvar2_y: f64,
    variant: EstimatorVariant,
) -> f64 {
    if dvar2_x <= 0.0 || dvar2_y <= 0.0 {
        return 0.0;
    }
    let ratio = dcov2 / (dvar2_x * dvar2_y).sqrt();
    match variant {
        EstimatorVariant::Naive => ratio.max(0.0).sqrt().min(1.0),
        EstimatorVariant::NoDiag => {
            if ratio < 0.0 {
                -(ratio.abs().sqrt())
            } else {
                ratio.abs().sqrt()
            }
        }
    }
}

/// Evaluate dcov2, the two distance variances, and dcor on centered matrices.
pub fn dependence_from_centered(
    a: &CenteredDistanceMatrix,
    b: &CenteredDistanceMatrix,
    variant: EstimatorVariant,
) -> Result<DependenceParts> {
    let cov = dcov2(a, b, variant)?;
    let vx = dvar2(a, variant)?;
    let vy = dvar2(b, variant)?;
    Ok(DependenceParts {
        dcov2: cov,
        dvar2_x: vx,
        dvar2_y: vy,
        dcor: dcor_from_parts(cov, vx, vy, variant),
    })
}

/// Full pipeline: distances, centering, dcov2/dvar2, correlation.
pub fn dcor(p: &PairedSample, variant: EstimatorVariant) -> Result<DependenceEstimate> {
    if p.n() < 2 {
        return Err(Error::TooFewObservations {
            op: "dcor",
            min: 2,
            got: p.n(),
        });
    }
    let a = double_center(&pairwise_distances(p.x()));
    let b = double_center(&pairwise_distances(p.y()));
    let parts = dependence_from_centered(&a, &b, variant)?;
    Ok(DependenceEstimate {
        dcov2: parts.dcov2,
        dcor: parts.dcor,
        dvar2_x: parts.dvar2_x,
        dvar2_y: parts.dvar2_y,
        variant,
        n: p.n(),
        dx: p.x().dim(),
        dy: p.y().dim(),
    })
}

/// Pearson product-moment correlation; 0 when either input has no variance.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::SizeMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let n = x.len();
    if n < 2 {
        return Err(Error::TooFewObservations {
            op: "pearson",
            min: 2,
            got: n,
        });
    }
    let nf = n as f64;
    let mean_x = crate::kahan::compensated_sum(x.iter().copied()) / nf;
    let mean_y = crate::kahan::compensated_sum(y.iter().copied()) / nf;

    let mut cov = KahanSum::new();
    let mut var_x = KahanSum::new();
    let mut var_y = KahanSum::new();
    for (&xi, &yi) in x.iter().zip(y.iter()) {
        let dx = xi - mean_x;
        let dy = yi - mean_y;
        cov.add(dx * dy);
        var_x.add(dx * dx);
        var_y.add(dy * dy);
    }
    let (vx, vy) = (var_x.value(), var_y.value());
    if vx <= 0.0 || vy <= 0.0 {
        return Ok(0.0);
    }
    Ok((cov.value() / (vx * vy).sqrt()).clamp(-1.0, 1.0))
}

/// Pearson correlation matrix of the columns of an n×p matrix.
fn correlation_matrix(data: &Array2<f64>) -> Result<Array2<f64>> {
    let p = data.ncols();
    let mut m = Array2::<f64>::zeros((p, p));
    for i in 0..p {
        m[[i, i]] = 1.0;
        let ci = data.column(i).to_vec();
        for j in (i + 1)..p {
            let r = pearson(&ci, &data.column(j).to_vec())?;
            m[[i, j]] = r;
            m[[j, i]] = r;
        }
    }
    Ok(m)
}

/// Correlation of correlations between two studies measuring the same p
/// variables: Pearson correlation between the strict upper triangles of the
/// two within-study correlation matrices.
pub fn cor_of_cors(study1: &Array2<f64>, study2: &Array2<f64>) -> Result<f64> {
    if study1.ncols() != study2.ncols() {
        return Err(Error::SizeMismatch {
            left: study1.ncols(),
            right: study2.ncols(),
        });
    }
    let p = study1.ncols();
    if p < 3 {
        return Err(Error::InvalidParameter(format!(
            "correlation of correlations needs p >= 3 variables, got {p}"
        )));
    }
    for s in [study1, study2] {
        if s.nrows() < 2 {
            return Err(Error::TooFewObservations {
                op: "cor_of_cors",
                min: 2,
                got: s.nrows(),
            });
        }
    }

    let m1 = correlation_matrix(study1)?;
    let m2 = correlation_matrix(study2)?;
    let mut u1 = Vec::with_capacity(p * (p - 1) / 2);
    let mut u2 = Vec::with_capacity(p * (p - 1) / 2);
    for i in 0..p {
        for j in (i + 1)..p {
            u1.push(m1[[i, j]]);
            u2.push(m2[[i, j]]);
        }
    }
    pearson(&u1, &u2)
}
