//! Pairwise dependence matrices over the columns of a data matrix.
//!
//! Each column is treated as one scalar variable (the gene-by-gene use
//! case). Its distance matrix is computed exactly once; p(p−1)/2 pair
//! evaluations then reuse the centered matrices. Constant columns are
//! reported, not rejected: their off-diagonal entries are 0 by the
//! zero-variance guard and the column index lands in `degenerate_columns`.

use ndarray::Array2;
use rayon::prelude::*;

use crate::distance::{double_center, pairwise_distances, CenteredDistanceMatrix, Sample};
use crate::error::{Error, Result};
use crate::estimators::{dcor_from_parts, dcov2, dvar2, EstimatorVariant};

/// Symmetric p×p matrix of pairwise distance correlations with unit
/// diagonal (self-dependence by convention).
#[derive(Clone, Debug)]
pub struct DcorMatrix {
    values: Array2<f64>,
    variant: EstimatorVariant,
    n: usize,
    degenerate_columns: Vec<usize>,
}

impl DcorMatrix {
    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn variant(&self) -> EstimatorVariant {
        self.variant
    }

    /// Number of observations each pairwise statistic was computed from.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of variables (matrix dimension).
    pub fn p(&self) -> usize {
        self.values.nrows()
    }

    /// Indices of constant columns whose dependence entries were forced to 0.
    pub fn degenerate_columns(&self) -> &[usize] {
        &self.degenerate_columns
    }
}

/// Pairwise distance correlation of all column pairs of an n×p matrix.
pub fn dcor_matrix(data: &Array2<f64>, variant: EstimatorVariant) -> Result<DcorMatrix> {
    let (n, p) = data.dim();
    if n < 2 {
        return Err(Error::TooFewObservations {
            op: "dcor_matrix",
            min: 2,
            got: n,
        });
    }
    if p < 2 {
        return Err(Error::InvalidParameter(format!(
            "dcor_matrix needs at least 2 columns, got {p}"
        )));
    }

    // One centered distance matrix and one distance variance per column.
    let columns: Vec<(CenteredDistanceMatrix, f64)> = (0..p)
        .into_par_iter()
        .map(|j| {
            let col = Sample::new(data.column(j).insert_axis(ndarray::Axis(1)).to_owned())?;
            let centered = double_center(&pairwise_distances(&col));
            let dv = dvar2(&centered, variant)?;
            Ok((centered, dv))
        })
        .collect::<Result<Vec<_>>>()?;

    let degenerate_columns: Vec<usize> = (0..p).filter(|&j| columns[j].1 <= 0.0).collect();

    let pairs: Vec<(usize, usize)> = (0..p)
        .flat_map(|i| ((i + 1)..p).map(move |j| (i, j)))
        .collect();
    let entries: Vec<f64> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let cov = dcov2(&columns[i].0, &columns[j].0, variant)?;
            Ok(dcor_from_parts(cov, columns[i].1, columns[j].1, variant))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut values = Array2::<f64>::eye(p);
    for (&(i, j), &r) in pairs.iter().zip(entries.iter()) {
        values[[i, j]] = r;
        values[[j, i]] = r;
    }

    Ok(DcorMatrix {
        values,
        variant,
        n,
        degenerate_columns,
    })
}
