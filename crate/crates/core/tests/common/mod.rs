//! Brute-force oracle: direct double-loop evaluation of the defining sums,
//! written independently of the library internals. Matrices are plain
//! `Vec<Vec<f64>>`, traversal is column-major, and the accumulator is a
//! locally defined compensated sum, so agreement with the production path is
//! evidence rather than tautology.

#![allow(dead_code)]
#![allow(clippy::needless_range_loop)]

use dcor::EstimatorVariant;

/// Neumaier compensated accumulator, local to the oracle.
#[derive(Default)]
pub struct Acc {
    total: f64,
    correction: f64,
}

impl Acc {
    pub fn push(&mut self, x: f64) {
        let t = self.total + x;
        if self.total.abs() >= x.abs() {
            self.correction += (self.total - t) + x;
        } else {
            self.correction += (x - t) + self.total;
        }
        self.total = t;
    }

    pub fn finish(&self) -> f64 {
        self.total + self.correction
    }
}

pub fn distances(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = rows.len();
    let mut d = vec![vec![0.0; n]; n];
    for k in 0..n {
        for l in 0..n {
            let mut s = 0.0;
            for (a, b) in rows[k].iter().zip(rows[l].iter()) {
                s += (a - b) * (a - b);
            }
            d[k][l] = s.sqrt();
        }
    }
    d
}

pub fn center(d: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = d.len();
    let nf = n as f64;
    let mut row_mean = vec![0.0; n];
    let mut col_mean = vec![0.0; n];
    let mut grand = Acc::default();
    for k in 0..n {
        let mut r = Acc::default();
        let mut c = Acc::default();
        for l in 0..n {
            r.push(d[k][l]);
            c.push(d[l][k]);
            grand.push(d[k][l]);
        }
        row_mean[k] = r.finish() / nf;
        col_mean[k] = c.finish() / nf;
    }
    let grand_mean = grand.finish() / (nf * nf);

    let mut out = vec![vec![0.0; n]; n];
    for k in 0..n {
        for l in 0..n {
            out[k][l] = d[k][l] - row_mean[k] - col_mean[l] + grand_mean;
        }
    }
    out
}

/// Mean product moment, column-major, diagonal included or excluded.
pub fn dcov2(a: &[Vec<f64>], b: &[Vec<f64>], variant: EstimatorVariant) -> f64 {
    let n = a.len();
    let mut acc = Acc::default();
    let mut count = 0u64;
    for l in 0..n {
        for k in 0..n {
            if variant == EstimatorVariant::NoDiag && k == l {
                continue;
            }
            acc.push(a[k][l] * b[k][l]);
            count += 1;
        }
    }
    acc.finish() / count as f64
}

/// Mean of |A_kl · B_kl| over the retained terms: the natural scale of the
/// dcov2 sum, used as a floor so relative comparisons stay meaningful when
/// the signed sum cancels toward zero.
pub fn dcov2_scale(a: &[Vec<f64>], b: &[Vec<f64>], variant: EstimatorVariant) -> f64 {
    let n = a.len();
    let mut acc = Acc::default();
    let mut count = 0u64;
    for l in 0..n {
        for k in 0..n {
            if variant == EstimatorVariant::NoDiag && k == l {
                continue;
            }
            acc.push((a[k][l] * b[k][l]).abs());
            count += 1;
        }
    }
    acc.finish() / count as f64
}

pub fn dcor_value(dcov2: f64, dvar2_x: f64, dvar2_y: f64, variant: EstimatorVariant) -> f64 {
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

/// Everything the oracle knows about one paired sample under one variant.
pub struct OracleEstimate {
    pub dcov2: f64,
    pub dvar2_x: f64,
    pub dvar2_y: f64,
    pub dcor: f64,
    pub dcov2_floor: f64,
    pub dcor_floor: f64,
}

pub fn estimate(x: &[Vec<f64>], y: &[Vec<f64>], variant: EstimatorVariant) -> OracleEstimate {
    let a = center(&distances(x));
    let b = center(&distances(y));
    let cov = dcov2(&a, &b, variant);
    let vx = dcov2(&a, &a, variant);
    let vy = dcov2(&b, &b, variant);
    let floor = dcov2_scale(&a, &b, variant);
    let dcor_floor = if vx > 0.0 && vy > 0.0 {
        (floor / (vx * vy).sqrt()).sqrt()
    } else {
        1.0
    };
    OracleEstimate {
        dcov2: cov,
        dvar2_x: vx,
        dvar2_y: vy,
        dcor: dcor_value(cov, vx, vy, variant),
        dcov2_floor: floor,
        dcor_floor,
    }
}

/// Relative comparison floored at the quantity's working scale.
pub fn assert_rel_close(label: &str, got: f64, want: f64, tol: f64, floor: f64) {
    let denom = got.abs().max(want.abs()).max(floor);
    let rel = if denom == 0.0 {
        0.0
    } else {
        (got - want).abs() / denom
    };
    assert!(
        rel <= tol,
        "{label}: got {got:e}, oracle {want:e}, relative error {rel:e} > {tol:e}"
    );
}

pub fn rel_close(got: f64, want: f64, tol: f64, floor: f64) -> Result<(), String> {
    let denom = got.abs().max(want.abs()).max(floor);
    let rel = if denom == 0.0 {
        0.0
    } else {
        (got - want).abs() / denom
    };
    if rel <= tol {
        Ok(())
    } else {
        Err(format!(
            "got {got:e}, oracle {want:e}, relative error {rel:e} > {tol:e}"
        ))
    }
}
