//! Samples, pairwise Euclidean distance matrices, and double centering.
//!
//! These are the raw material of every dependence statistic in the crate:
//! a sample becomes an interpoint distance matrix, which is double centered
//! so that every row and column sums to zero.

use ndarray::parallel::prelude::*;
use ndarray::{Array2, ArrayView1};

use crate::error::{Error, Result};
use crate::kahan::KahanSum;

/// An n×d data matrix: rows are observations, columns are coordinates.
///
/// Entries are validated to be finite on construction, so downstream
/// operations never see NaN or infinity.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    data: Array2<f64>,
}

impl Sample {
    pub fn new(data: Array2<f64>) -> Result<Self> {
        let (n, d) = data.dim();
        if n == 0 || d == 0 {
            return Err(Error::EmptySample);
        }
        for ((row, col), &v) in data.indexed_iter() {
            if !v.is_finite() {
                return Err(Error::NonFinite { row, col });
            }
        }
        Ok(Self { data })
    }

    /// A one-dimensional sample from a slice of scalar observations.
    pub fn from_column(values: &[f64]) -> Result<Self> {
        let data = Array2::from_shape_vec((values.len(), 1), values.to_vec())
            .expect("shape matches input length");
        Self::new(data)
    }

    pub fn n(&self) -> usize {
        self.data.nrows()
    }

    pub fn dim(&self) -> usize {
        self.data.ncols()
    }

    pub fn data(&self) -> &Array2<f64> {
        &self.data
    }
}

/// Two samples with paired rows; dimensions may differ.
#[derive(Clone, Debug, PartialEq)]
pub struct PairedSample {
    x: Sample,
    y: Sample,
}

impl PairedSample {
    pub fn new(x: Sample, y: Sample) -> Result<Self> {
        if x.n() != y.n() {
            return Err(Error::PairLengthMismatch { x: x.n(), y: y.n() });
        }
        Ok(Self { x, y })
    }

    pub fn x(&self) -> &Sample {
        &self.x
    }

    pub fn y(&self) -> &Sample {
        &self.y
    }

    pub fn n(&self) -> usize {
        self.x.n()
    }
}

/// Symmetric n×n interpoint distance matrix with a zero diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix {
    values: Array2<f64>,
}

impl DistanceMatrix {
    /// Wrap an externally built matrix, checking the structural invariants:
    /// square, bit-exact symmetry, zero diagonal, nonnegative entries.
    pub fn from_values(values: Array2<f64>) -> Result<Self> {
        let (rows, cols) = values.dim();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if rows == 0 {
            return Err(Error::EmptySample);
        }
        for ((row, col), &v) in values.indexed_iter() {
            if !v.is_finite() {
                return Err(Error::NonFinite { row, col });
            }
            if v < 0.0 || (row == col && v != 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "not a distance matrix: entry [{row}][{col}] = {v}"
                )));
            }
            if values[[row, col]] != values[[col, row]] {
                return Err(Error::NotSymmetric {
                    row,
                    col,
                    delta: (values[[row, col]] - values[[col, row]]).abs(),
                });
            }
        }
        Ok(Self { values })
    }

    pub fn n(&self) -> usize {
        self.values.nrows()
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }
}

/// Double-centered distance matrix: symmetric, rows and columns sum to ~0.
#[derive(Clone, Debug, PartialEq)]
pub struct CenteredDistanceMatrix {
    values: Array2<f64>,
}

impl CenteredDistanceMatrix {
    pub fn n(&self) -> usize {
        self.values.nrows()
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }
}

#[inline]
fn euclidean(a: ArrayView1<'_, f64>, b: ArrayView1<'_, f64>) -> f64 {
    // Fixed coordinate order; never reassociated, so results do not depend
    // on the parallel schedule of the outer loops.
    let mut acc = 0.0;
    for (&x, &y) in a.iter().zip(b.iter()) {
        let d = x - y;
        acc += d * d;
    }
    acc.sqrt()
}

/// All pairwise Euclidean distances of a sample.
///
/// Each distance is computed once for k < l and mirrored, so the result is
/// symmetric by construction and the diagonal is a literal zero. Rows of the
/// upper triangle are filled in parallel; every entry is a pure function of
/// its own index, so the output is identical under any schedule.
pub fn pairwise_distances(s: &Sample) -> DistanceMatrix {
    let n = s.n();
    let data = s.data();
    let mut values = Array2::<f64>::zeros((n, n));

    values
        .outer_iter_mut()
        .into_par_iter()
        .enumerate()
        .for_each(|(k, mut row)| {
            let xk = data.row(k);
            for l in (k + 1)..n {
                row[l] = euclidean(xk, data.row(l));
            }
        });

    for k in 1..n {
        for l in 0..k {
            values[[k, l]] = values[[l, k]];
        }
    }

    DistanceMatrix { values }
}

/// Center a symmetric matrix: subtract row and column means, add the grand
/// mean. Row means are accumulated with compensated summation; column means
/// equal row means because the input is symmetric.
pub(crate) fn center_values(values: &Array2<f64>) -> Array2<f64> {
    let n = values.nrows();
    let nf = n as f64;

    let mut row_means = vec![0.0; n];
    let mut grand = KahanSum::new();
    for k in 0..n {
        let mut acc = KahanSum::new();
        for l in 0..n {
            acc.add(values[[k, l]]);
        }
        let sum = acc.value();
        row_means[k] = sum / nf;
        grand.add(sum);
    }
    let grand_mean = grand.value() / (nf * nf);

    // Fill the upper triangle and mirror so the output is exactly symmetric.
    let mut centered = Array2::<f64>::zeros((n, n));
    for k in 0..n {
        for l in k..n {
            let v = values[[k, l]] - row_means[k] - row_means[l] + grand_mean;
            centered[[k, l]] = v;
            centered[[l, k]] = v;
        }
    }
    centered
}

/// Double centering of a distance matrix.
pub fn double_center(dm: &DistanceMatrix) -> CenteredDistanceMatrix {
    CenteredDistanceMatrix {
        values: center_values(dm.values()),
    }
}
