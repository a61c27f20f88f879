//! Seeded synthetic data generators and Monte Carlo study harnesses.
//!
//! Generators are deterministic functions of their spec (including the
//! seed). The study harnesses fan replicates out across threads; every
//! (cell, replicate) pair draws from its own substream, so aggregate results
//! are identical under any scheduling.
//!
//! Generator kinds:
//!
//! * `IndependentPair` — X and Y independent standard normal matrices.
//! * `OrthogonalPair` — Y = scale·X·Q + shift for a random orthogonal Q, a
//!   rigid transformation that preserves interpoint distances up to scale.
//! * `MonotonePair` — scalar X ~ N(0,1), Y = exp(X): deterministic, strictly
//!   monotone, nonlinear dependence.
//! * `NonmonotonePair` — scalar X ~ N(0,1), Y = cos(frequency·X): strongly
//!   dependent but nearly uncorrelated.
//! * `GaussianIid` — a single n×d standard normal matrix for the pairwise
//!   matrix and bias harnesses (not a pair; see [`generate_matrix`]).

use ndarray::Array2;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::distance::{double_center, pairwise_distances, PairedSample, Sample};
use crate::error::{Error, Result};
use crate::estimators::{dependence_from_centered, EstimatorVariant};
use crate::inference::{permutation_test, PermTestConfig, TestStatistic};
use crate::kahan::{compensated_sum, KahanSum};
use crate::seeding::{derive_seed, substream_rng};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    GaussianIid,
    IndependentPair,
    OrthogonalPair,
    MonotonePair,
    NonmonotonePair,
}

impl GeneratorKind {
    pub fn name(self) -> &'static str {
        match self {
            GeneratorKind::GaussianIid => "gaussian",
            GeneratorKind::IndependentPair => "independent",
            GeneratorKind::OrthogonalPair => "orthogonal",
            GeneratorKind::MonotonePair => "monotone",
            GeneratorKind::NonmonotonePair => "nonmonotone",
        }
    }
}

impl std::str::FromStr for GeneratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(GeneratorKind::GaussianIid),
            "independent" => Ok(GeneratorKind::IndependentPair),
            "orthogonal" => Ok(GeneratorKind::OrthogonalPair),
            "monotone" => Ok(GeneratorKind::MonotonePair),
            "nonmonotone" => Ok(GeneratorKind::NonmonotonePair),
            other => Err(Error::InvalidParameter(format!(
                "unknown generator kind '{other}'"
            ))),
        }
    }
}

/// Kind-specific generator parameters; unused fields are ignored.
#[derive(Clone, Copy, Debug)]
pub struct GeneratorParams {
    /// Multiplier applied to the orthogonally transformed sample (> 0).
    pub scale: f64,
    /// Constant added to every coordinate of Y.
    pub shift: f64,
    /// Angular frequency of the nonmonotone transform (> 0).
    pub frequency: f64,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        Self {
            scale: 1.0,
            shift: 0.0,
            frequency: 4.0,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub n: usize,
    pub dx: usize,
    pub dy: usize,
    pub params: GeneratorParams,
    pub seed: u64,
}

impl GeneratorSpec {
    fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::InvalidParameter("generator needs n >= 1".into()));
        }
        if self.dx < 1 || self.dy < 1 {
            return Err(Error::InvalidParameter(
                "generator needs dx >= 1 and dy >= 1".into(),
            ));
        }
        match self.kind {
            GeneratorKind::OrthogonalPair => {
                if self.dy != self.dx {
                    return Err(Error::InvalidParameter(format!(
                        "orthogonal pair needs dy == dx, got dx={} dy={}",
                        self.dx, self.dy
                    )));
                }
                let scale_ok = self.params.scale.is_finite() && self.params.scale > 0.0;
                if !scale_ok {
                    return Err(Error::InvalidParameter(
                        "orthogonal pair needs a finite scale > 0".into(),
                    ));
                }
                if !self.params.shift.is_finite() {
                    return Err(Error::InvalidParameter("shift must be finite".into()));
                }
            }
            GeneratorKind::MonotonePair | GeneratorKind::NonmonotonePair => {
                if self.dx != 1 || self.dy != 1 {
                    return Err(Error::InvalidParameter(format!(
                        "{} pair is scalar: needs dx = dy = 1",
                        self.kind.name()
                    )));
                }
                let freq_ok = self.params.frequency.is_finite() && self.params.frequency > 0.0;
                if self.kind == GeneratorKind::NonmonotonePair && !freq_ok {
                    return Err(Error::InvalidParameter(
                        "nonmonotone pair needs a finite frequency > 0".into(),
                    ));
                }
            }
            GeneratorKind::GaussianIid | GeneratorKind::IndependentPair => {}
        }
        Ok(())
    }
}

/// n×d standard normal matrix, filled row-major from the stream.
fn normal_matrix(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Array2<f64> {
    Array2::from_shape_fn((n, d), |_| rng.sample::<f64, _>(StandardNormal))
}

/// Random orthogonal d×d matrix: Gaussian draw, then modified Gram–Schmidt
/// over columns with a second orthogonalization pass.
pub(crate) fn random_orthogonal(d: usize, rng: &mut ChaCha8Rng) -> Result<Array2<f64>> {
    'attempt: for _ in 0..100 {
        let mut q = normal_matrix(rng, d, d);
        for j in 0..d {
            for _pass in 0..2 {
                for i in 0..j {
                    let mut dot = 0.0;
                    for r in 0..d {
                        dot += q[[r, j]] * q[[r, i]];
                    }
                    for r in 0..d {
                        q[[r, j]] -= dot * q[[r, i]];
                    }
                }
            }
            let norm = (0..d).map(|r| q[[r, j]] * q[[r, j]]).sum::<f64>().sqrt();
            if norm < 1e-8 {
                continue 'attempt;
            }
            for r in 0..d {
                q[[r, j]] /= norm;
            }
        }
        return Ok(q);
    }
    Err(Error::InvalidParameter(
        "failed to draw a random orthogonal matrix".into(),
    ))
}

/// Generate a paired sample. `GaussianIid` is not a pair and is rejected;
/// use [`generate_matrix`] for it.
pub fn generate(spec: &GeneratorSpec) -> Result<PairedSample> {
    spec.validate()?;
    let mut rng = substream_rng(spec.seed, &[]);
    let (x, y) = match spec.kind {
        GeneratorKind::GaussianIid => {
            return Err(Error::InvalidParameter(
                "gaussian kind generates a single sample; use generate_matrix".into(),
            ));
        }
        GeneratorKind::IndependentPair => {
            let x = normal_matrix(&mut rng, spec.n, spec.dx);
            let y = normal_matrix(&mut rng, spec.n, spec.dy);
            (x, y)
        }
        GeneratorKind::OrthogonalPair => {
            let x = normal_matrix(&mut rng, spec.n, spec.dx);
            let q = random_orthogonal(spec.dx, &mut rng)?;
            let y = x.dot(&q) * spec.params.scale + spec.params.shift;
            (x, y)
        }
        GeneratorKind::MonotonePair => {
            let x = normal_matrix(&mut rng, spec.n, 1);
            let y = x.mapv(f64::exp);
            (x, y)
        }
        GeneratorKind::NonmonotonePair => {
            let x = normal_matrix(&mut rng, spec.n, 1);
            let w = spec.params.frequency;
            let y = x.mapv(|v| (w * v).cos());
            (x, y)
        }
    };
    PairedSample::new(Sample::new(x)?, Sample::new(y)?)
}

/// Generate a single n×dx sample (the `GaussianIid` kind).
pub fn generate_matrix(spec: &GeneratorSpec) -> Result<Sample> {
    spec.validate()?;
    if spec.kind != GeneratorKind::GaussianIid {
        return Err(Error::InvalidParameter(format!(
            "{} kind generates a pair; use generate",
            spec.kind.name()
        )));
    }
    let mut rng = substream_rng(spec.seed, &[]);
    Sample::new(normal_matrix(&mut rng, spec.n, spec.dx))
}

#[derive(Clone, Debug)]
pub struct BiasStudyConfig {
    pub n_grid: Vec<usize>,
    pub p_grid: Vec<usize>,
    pub replicates: usize,
    pub variants: Vec<EstimatorVariant>,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug)]
pub struct BiasStudyRow {
    pub n: usize,
    pub p: usize,
    pub variant: EstimatorVariant,
    pub mean_dcor: f64,
    pub mean_dcov2: f64,
    pub sd_dcov2: f64,
    pub replicates: usize,
}

#[derive(Clone, Debug)]
pub struct BiasStudyResult {
    pub rows: Vec<BiasStudyRow>,
}

fn validate_grids(n_grid: &[usize], p_grid: &[usize], replicates: usize, min_n: usize) -> Result<()> {
    if n_grid.is_empty() || p_grid.is_empty() {
        return Err(Error::InvalidParameter("grids must be nonempty".into()));
    }
    if replicates < 1 {
        return Err(Error::InvalidParameter("replicates must be >= 1".into()));
    }
    if let Some(&n) = n_grid.iter().find(|&&n| n < min_n) {
        return Err(Error::InvalidParameter(format!(
            "grid sample size {n} is below the minimum {min_n}"
        )));
    }
    if p_grid.contains(&0) {
        return Err(Error::InvalidParameter("dimensions must be >= 1".into()));
    }
    Ok(())
}

fn mean_and_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    let mean = compensated_sum(values.iter().copied()) / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let mut acc = KahanSum::new();
    for &v in values {
        let d = v - mean;
        acc.add(d * d);
    }
    (mean, (acc.value() / (n - 1) as f64).sqrt())
}

/// Mean and spread of the dependence statistics over independent data, per
/// (n, p) cell and estimator variant.
pub fn bias_study(cfg: &BiasStudyConfig) -> Result<BiasStudyResult> {
    validate_grids(&cfg.n_grid, &cfg.p_grid, cfg.replicates, 2)?;
    if cfg.variants.is_empty() {
        return Err(Error::InvalidParameter("variants must be nonempty".into()));
    }

    let cells: Vec<(usize, usize)> = cfg
        .n_grid
        .iter()
        .flat_map(|&n| cfg.p_grid.iter().map(move |&p| (n, p)))
        .collect();

    let mut rows = Vec::with_capacity(cells.len() * cfg.variants.len());
    for (cell_idx, &(n, p)) in cells.iter().enumerate() {
        // Per replicate, one (dcov2, dcor) pair per configured variant.
        let evals: Vec<Vec<(f64, f64)>> = (0..cfg.replicates)
            .into_par_iter()
            .map(|rep| {
                let spec = GeneratorSpec {
                    kind: GeneratorKind::IndependentPair,
                    n,
                    dx: p,
                    dy: p,
                    params: GeneratorParams::default(),
                    seed: derive_seed(cfg.seed, &[cell_idx as u64, rep as u64]),
                };
                let pair = generate(&spec)?;
                let a = double_center(&pairwise_distances(pair.x()));
                let b = double_center(&pairwise_distances(pair.y()));
                cfg.variants
                    .iter()
                    .map(|&v| {
                        let parts = dependence_from_centered(&a, &b, v)?;
                        Ok((parts.dcov2, parts.dcor))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;

        for (vi, &variant) in cfg.variants.iter().enumerate() {
            let dcov2s: Vec<f64> = evals.iter().map(|e| e[vi].0).collect();
            let dcors: Vec<f64> = evals.iter().map(|e| e[vi].1).collect();
            let (mean_dcov2, sd_dcov2) = mean_and_sd(&dcov2s);
            let (mean_dcor, _) = mean_and_sd(&dcors);
            rows.push(BiasStudyRow {
                n,
                p,
                variant,
                mean_dcor,
                mean_dcov2,
                sd_dcov2,
                replicates: cfg.replicates,
            });
        }
    }
    Ok(BiasStudyResult { rows })
}

#[derive(Clone, Debug)]
pub struct PowerStudyConfig {
    pub n_grid: Vec<usize>,
    pub p_grid: Vec<usize>,
    pub replicates: usize,
    pub variants: Vec<EstimatorVariant>,
    pub seed: u64,
    pub kind: GeneratorKind,
    pub params: GeneratorParams,
    pub alpha: f64,
    pub test_replicates: usize,
    pub statistic: TestStatistic,
}

#[derive(Clone, Copy, Debug)]
pub struct PowerStudyRow {
    pub n: usize,
    pub p: usize,
    pub variant: EstimatorVariant,
    pub rejection_rate: f64,
    pub replicates: usize,
}

/// Fraction of permutation-test rejections at level alpha, per (n, p) cell
/// and variant. Each replicate generates a dataset of the configured kind
/// and runs the seeded permutation test on it; all variants see the same
/// datasets and permutation streams.
pub fn power_study(cfg: &PowerStudyConfig) -> Result<Vec<PowerStudyRow>> {
    validate_grids(&cfg.n_grid, &cfg.p_grid, cfg.replicates, 3)?;
    if cfg.variants.is_empty() {
        return Err(Error::InvalidParameter("variants must be nonempty".into()));
    }
    if !(cfg.alpha > 0.0 && cfg.alpha < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha must lie in (0, 1), got {}",
            cfg.alpha
        )));
    }
    if cfg.test_replicates < 1 {
        return Err(Error::InvalidParameter(
            "test replicates must be >= 1".into(),
        ));
    }
    if cfg.kind == GeneratorKind::GaussianIid {
        return Err(Error::InvalidParameter(
            "power study needs a pair-generating kind".into(),
        ));
    }
    let scalar_kind = matches!(
        cfg.kind,
        GeneratorKind::MonotonePair | GeneratorKind::NonmonotonePair
    );
    if scalar_kind && cfg.p_grid.iter().any(|&p| p != 1) {
        return Err(Error::InvalidParameter(format!(
            "{} kind is scalar: every p in the grid must be 1",
            cfg.kind.name()
        )));
    }

    let cells: Vec<(usize, usize)> = cfg
        .n_grid
        .iter()
        .flat_map(|&n| cfg.p_grid.iter().map(move |&p| (n, p)))
        .collect();

    let mut rows = Vec::with_capacity(cells.len() * cfg.variants.len());
    for (cell_idx, &(n, p)) in cells.iter().enumerate() {
        let rejections: Vec<Vec<bool>> = (0..cfg.replicates)
            .into_par_iter()
            .map(|rep| {
                let data_seed = derive_seed(cfg.seed, &[cell_idx as u64, rep as u64, 0]);
                let test_seed = derive_seed(cfg.seed, &[cell_idx as u64, rep as u64, 1]);
                let spec = GeneratorSpec {
                    kind: cfg.kind,
                    n,
                    dx: p,
                    dy: p,
                    params: cfg.params,
                    seed: data_seed,
                };
                let pair = generate(&spec)?;
                cfg.variants
                    .iter()
                    .map(|&variant| {
                        let result = permutation_test(
                            &pair,
                            &PermTestConfig {
                                replicates: cfg.test_replicates,
                                seed: test_seed,
                                variant,
                                statistic: cfg.statistic,
                            },
                        )?;
                        Ok(result.p_value <= cfg.alpha)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;

        for (vi, &variant) in cfg.variants.iter().enumerate() {
            let count = rejections.iter().filter(|r| r[vi]).count();
            rows.push(PowerStudyRow {
                n,
                p,
                variant,
                rejection_rate: count as f64 / cfg.replicates as f64,
                replicates: cfg.replicates,
            });
        }
    }
    Ok(rows)
}
