//! Seeded permutation test of independence.
//!
//! The observed statistic is compared against its distribution under random
//! re-pairing of the two samples: only the rows of Y are permuted, which
//! amounts to permuting the rows and columns of Y's centered distance matrix.
//! Distance matrices are therefore computed once and each replicate costs
//! O(n²) instead of O(n²·d).
//!
//! Replicates run in parallel; replicate i draws its permutation from the
//! substream (seed, i), so the result does not depend on thread scheduling.
//! The reported p-value is the add-one estimate (1 + exceedances)/(1 + B),
//! which is never zero, and ties count as exceedances.

use ndarray::Array2;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::distance::{double_center, pairwise_distances, PairedSample};
use crate::error::{Error, Result};
use crate::estimators::{dependence_from_centered, EstimatorVariant};
use crate::kahan::KahanSum;
use crate::seeding;

/// Which scalar the test compares across permutations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TestStatistic {
    Dcor,
    Dcov2,
}

impl TestStatistic {
    pub fn name(self) -> &'static str {
        match self {
            TestStatistic::Dcor => "dcor",
            TestStatistic::Dcov2 => "dcov2",
        }
    }
}

impl std::str::FromStr for TestStatistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dcor" => Ok(TestStatistic::Dcor),
            "dcov2" => Ok(TestStatistic::Dcov2),
            other => Err(Error::InvalidParameter(format!(
                "unknown test statistic '{other}' (expected 'dcor' or 'dcov2')"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct PermTestConfig {
    pub replicates: usize,
    pub seed: u64,
    pub variant: EstimatorVariant,
    pub statistic: TestStatistic,
}

#[derive(Clone, Copy, Debug)]
pub struct PermTestResult {
    pub observed: f64,
    pub p_value: f64,
    pub replicates: usize,
    pub exceed_count: usize,
    pub seed: u64,
}

/// Uniform random permutation of 0..n by Fisher–Yates.
pub(crate) fn random_permutation(n: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    idx
}

/// dcov2 of `a` against `b` with rows and columns of `b` permuted, same
/// summation order as the unpermuted evaluation.
fn permuted_dcov2(
    a: &Array2<f64>,
    b: &Array2<f64>,
    perm: &[usize],
    variant: EstimatorVariant,
) -> f64 {
    let n = perm.len();
    let mut acc = KahanSum::new();
    match variant {
        EstimatorVariant::Naive => {
            for k in 0..n {
                let pk = perm[k];
                for l in 0..n {
                    acc.add(a[[k, l]] * b[[pk, perm[l]]]);
                }
            }
            acc.value() / (n * n) as f64
        }
        EstimatorVariant::NoDiag => {
            for k in 0..n {
                let pk = perm[k];
                for l in 0..n {
                    if k != l {
                        acc.add(a[[k, l]] * b[[pk, perm[l]]]);
                    }
                }
            }
            acc.value() / (n * (n - 1)) as f64
        }
    }
}

fn statistic_value(
    dcov2: f64,
    dvar2_x: f64,
    dvar2_y: f64,
    variant: EstimatorVariant,
    statistic: TestStatistic,
) -> f64 {
    match statistic {
        TestStatistic::Dcov2 => dcov2,
        TestStatistic::Dcor => crate::estimators::dcor_from_parts(dcov2, dvar2_x, dvar2_y, variant),
    }
}

/// Permutation test of independence between the two halves of `p`.
pub fn permutation_test(p: &PairedSample, cfg: &PermTestConfig) -> Result<PermTestResult> {
    let n = p.n();
    if n < 3 {
        return Err(Error::TooFewObservations {
            op: "permutation test",
            min: 3,
            got: n,
        });
    }
    if cfg.replicates < 1 {
        return Err(Error::InvalidParameter(
            "permutation test needs at least 1 replicate".into(),
        ));
    }

    let a = double_center(&pairwise_distances(p.x()));
    let b = double_center(&pairwise_distances(p.y()));
    let parts = dependence_from_centered(&a, &b, cfg.variant)?;
    let observed = match cfg.statistic {
        TestStatistic::Dcor => parts.dcor,
        TestStatistic::Dcov2 => parts.dcov2,
    };

    // dvar2 is invariant under simultaneous row/column permutation, so the
    // denominators are fixed across replicates.
    let (av, bv) = (a.values(), b.values());
    let exceed_count: usize = (0..cfg.replicates)
        .into_par_iter()
        .map(|i| {
            let mut rng = seeding::substream_rng(cfg.seed, &[i as u64]);
            let perm = random_permutation(n, &mut rng);
            let cov = permuted_dcov2(av, bv, &perm, cfg.variant);
            let stat =
                statistic_value(cov, parts.dvar2_x, parts.dvar2_y, cfg.variant, cfg.statistic);
            usize::from(stat >= observed)
        })
        .sum();

    Ok(PermTestResult {
        observed,
        p_value: (1 + exceed_count) as f64 / (1 + cfg.replicates) as f64,
        replicates: cfg.replicates,
        exceed_count,
        seed: cfg.seed,
    })
}
