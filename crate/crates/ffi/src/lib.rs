//! C ABI for the dcor library.
//!
//! Datasets are opaque handles created from row-major `double` buffers;
//! every other function fills a caller-provided out parameter and returns a
//! status code. `include/dcor.h` is regenerated by the build script.

use std::os::raw::{c_char, c_int};

use dcor::{
    dcor_matrix, generate, permutation_test, sym_eigen, EstimatorVariant, GeneratorKind,
    GeneratorParams, GeneratorSpec, PairedSample, PermTestConfig, Sample, TestStatistic,
};
use ndarray::Array2;

/// Status code returned by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DcorStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NonFinite = 3,
    SizeMismatch = 4,
    TooFewObservations = 5,
    NotSymmetric = 6,
    NoConvergence = 7,
    IoError = 8,
}

/// Estimator variant selector: 0 = naive, 1 = diagonal-excluded.
pub const DCOR_VARIANT_NAIVE: c_int = 0;
/// Estimator variant selector: 0 = naive, 1 = diagonal-excluded.
pub const DCOR_VARIANT_NODIAG: c_int = 1;

/// Permutation-test statistic selector: 0 = dcor, 1 = dcov2.
pub const DCOR_STATISTIC_DCOR: c_int = 0;
/// Permutation-test statistic selector: 0 = dcor, 1 = dcov2.
pub const DCOR_STATISTIC_DCOV2: c_int = 1;

/// Opaque handle to an n×d sample.
pub struct DcorDataset {
    sample: Sample,
}

/// All scalar outputs of a dependence estimate.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct DcorEstimate {
    pub dcov2: f64,
    pub dcor: f64,
    pub dvar2_x: f64,
    pub dvar2_y: f64,
    pub n: usize,
    pub dx: usize,
    pub dy: usize,
}

/// Outputs of the permutation test of independence.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct DcorPermTest {
    pub observed: f64,
    pub p_value: f64,
    pub replicates: usize,
    pub exceed_count: usize,
    pub seed: u64,
}

fn status_of(err: &dcor::Error) -> DcorStatus {
    use dcor::Error::*;
    match err {
        NonFinite { .. } => DcorStatus::NonFinite,
        EmptySample | InvalidParameter(_) | CsvFormat { .. } => DcorStatus::InvalidArgument,
        PairLengthMismatch { .. } | SizeMismatch { .. } | NotSquare { .. } => {
            DcorStatus::SizeMismatch
        }
        TooFewObservations { .. } => DcorStatus::TooFewObservations,
        NotSymmetric { .. } => DcorStatus::NotSymmetric,
        NoConvergence { .. } => DcorStatus::NoConvergence,
        Io(_) => DcorStatus::IoError,
    }
}

fn parse_variant(variant: c_int) -> Result<EstimatorVariant, DcorStatus> {
    match variant {
        DCOR_VARIANT_NAIVE => Ok(EstimatorVariant::Naive),
        DCOR_VARIANT_NODIAG => Ok(EstimatorVariant::NoDiag),
        _ => Err(DcorStatus::InvalidArgument),
    }
}

/// Create a dataset from a row-major n×d buffer of doubles.
///
/// On success `*out` owns the copy; release it with `dcor_dataset_free`.
///
/// # Safety
/// `data` must point to n·d readable doubles and `out` must be a valid
/// pointer; the buffer is copied and need not outlive the call.
#[no_mangle]
pub unsafe extern "C" fn dcor_dataset_new(
    data: *const f64,
    n: usize,
    d: usize,
    out: *mut *mut DcorDataset,
) -> DcorStatus {
    if data.is_null() || out.is_null() {
        return DcorStatus::NullPointer;
    }
    if n == 0 || d == 0 || n.checked_mul(d).is_none() {
        return DcorStatus::InvalidArgument;
    }
    let values = std::slice::from_raw_parts(data, n * d);
    let matrix = Array2::from_shape_vec((n, d), values.to_vec()).expect("shape matches length");
    match Sample::new(matrix) {
        Ok(sample) => {
            *out = Box::into_raw(Box::new(DcorDataset { sample }));
            DcorStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Generate a synthetic paired dataset (both halves of the pair as one
/// dataset with dx + dy columns). `kind` is one of: 0 independent,
/// 1 orthogonal, 2 monotone, 3 nonmonotone.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dcor_dataset_generate_pair(
    kind: c_int,
    n: usize,
    dx: usize,
    dy: usize,
    seed: u64,
    out: *mut *mut DcorDataset,
) -> DcorStatus {
    if out.is_null() {
        return DcorStatus::NullPointer;
    }
    let kind = match kind {
        0 => GeneratorKind::IndependentPair,
        1 => GeneratorKind::OrthogonalPair,
        2 => GeneratorKind::MonotonePair,
        3 => GeneratorKind::NonmonotonePair,
        _ => return DcorStatus::InvalidArgument,
    };
    let spec = GeneratorSpec {
        kind,
        n,
        dx,
        dy,
        params: GeneratorParams::default(),
        seed,
    };
    let pair = match generate(&spec) {
        Ok(p) => p,
        Err(e) => return status_of(&e),
    };
    let mut matrix = Array2::<f64>::zeros((pair.n(), dx + dy));
    for j in 0..dx {
        matrix.column_mut(j).assign(&pair.x().data().column(j));
    }
    for j in 0..dy {
        matrix.column_mut(dx + j).assign(&pair.y().data().column(j));
    }
    match Sample::new(matrix) {
        Ok(sample) => {
            *out = Box::into_raw(Box::new(DcorDataset { sample }));
            DcorStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Release a dataset handle. Null is a no-op.
///
/// # Safety
/// `ds` must be null or a pointer returned by a `dcor_dataset_*` constructor
/// that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn dcor_dataset_free(ds: *mut DcorDataset) {
    if !ds.is_null() {
        drop(Box::from_raw(ds));
    }
}

/// Fetch the dimensions of a dataset.
///
/// # Safety
/// All pointers must be valid; `ds` must be a live dataset handle.
#[no_mangle]
pub unsafe extern "C" fn dcor_dataset_shape(
    ds: *const DcorDataset,
    n: *mut usize,
    d: *mut usize,
) -> DcorStatus {
    if ds.is_null() || n.is_null() || d.is_null() {
        return DcorStatus::NullPointer;
    }
    let sample = &(*ds).sample;
    *n = sample.n();
    *d = sample.dim();
    DcorStatus::Ok
}

/// Distance covariance/correlation of two datasets with paired rows.
///
/// # Safety
/// `x`, `y`, and `out` must be valid; the datasets must stay alive for the
/// duration of the call.
#[no_mangle]
pub unsafe extern "C" fn dcor_estimate(
    x: *const DcorDataset,
    y: *const DcorDataset,
    variant: c_int,
    out: *mut DcorEstimate,
) -> DcorStatus {
    if x.is_null() || y.is_null() || out.is_null() {
        return DcorStatus::NullPointer;
    }
    let variant = match parse_variant(variant) {
        Ok(v) => v,
        Err(s) => return s,
    };
    let pair = match PairedSample::new((*x).sample.clone(), (*y).sample.clone()) {
        Ok(p) => p,
        Err(e) => return status_of(&e),
    };
    match dcor::dcor(&pair, variant) {
        Ok(est) => {
            *out = DcorEstimate {
                dcov2: est.dcov2,
                dcor: est.dcor,
                dvar2_x: est.dvar2_x,
                dvar2_y: est.dvar2_y,
                n: est.n,
                dx: est.dx,
                dy: est.dy,
            };
            DcorStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Seeded permutation test of independence between two datasets.
///
/// # Safety
/// `x`, `y`, and `out` must be valid; the datasets must stay alive for the
/// duration of the call.
#[no_mangle]
pub unsafe extern "C" fn dcor_permutation_test(
    x: *const DcorDataset,
    y: *const DcorDataset,
    variant: c_int,
    statistic: c_int,
    replicates: usize,
    seed: u64,
    out: *mut DcorPermTest,
) -> DcorStatus {
    if x.is_null() || y.is_null() || out.is_null() {
        return DcorStatus::NullPointer;
    }
    let variant = match parse_variant(variant) {
        Ok(v) => v,
        Err(s) => return s,
    };
    let statistic = match statistic {
        DCOR_STATISTIC_DCOR => TestStatistic::Dcor,
        DCOR_STATISTIC_DCOV2 => TestStatistic::Dcov2,
        _ => return DcorStatus::InvalidArgument,
    };
    let pair = match PairedSample::new((*x).sample.clone(), (*y).sample.clone()) {
        Ok(p) => p,
        Err(e) => return status_of(&e),
    };
    let cfg = PermTestConfig {
        replicates,
        seed,
        variant,
        statistic,
    };
    match permutation_test(&pair, &cfg) {
        Ok(r) => {
            *out = DcorPermTest {
                observed: r.observed,
                p_value: r.p_value,
                replicates: r.replicates,
                exceed_count: r.exceed_count,
                seed: r.seed,
            };
            DcorStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Pairwise distance-correlation matrix over the d columns of a dataset,
/// written row-major into `out_values` (d·d doubles).
///
/// # Safety
/// `data` must be a live dataset handle and `out_values` must point to at
/// least d·d writable doubles.
#[no_mangle]
pub unsafe extern "C" fn dcor_pairwise_matrix(
    data: *const DcorDataset,
    variant: c_int,
    out_values: *mut f64,
) -> DcorStatus {
    if data.is_null() || out_values.is_null() {
        return DcorStatus::NullPointer;
    }
    let variant = match parse_variant(variant) {
        Ok(v) => v,
        Err(s) => return s,
    };
    let sample = &(*data).sample;
    match dcor_matrix(sample.data(), variant) {
        Ok(m) => {
            let p = m.p();
            let out = std::slice::from_raw_parts_mut(out_values, p * p);
            for ((i, j), &v) in m.values().indexed_iter() {
                out[i * p + j] = v;
            }
            DcorStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Eigendecomposition of a symmetric p×p matrix given row-major.
///
/// Eigenvalues are written descending; `out_eigenvectors[i*p + j]` holds
/// component i of the eigenvector paired with eigenvalue j.
///
/// # Safety
/// `values` must point to p·p readable doubles; `out_eigenvalues` must hold
/// p writable doubles and `out_eigenvectors` p·p writable doubles.
#[no_mangle]
pub unsafe extern "C" fn dcor_sym_eigen(
    values: *const f64,
    p: usize,
    out_eigenvalues: *mut f64,
    out_eigenvectors: *mut f64,
) -> DcorStatus {
    if values.is_null() || out_eigenvalues.is_null() || out_eigenvectors.is_null() {
        return DcorStatus::NullPointer;
    }
    if p == 0 || p.checked_mul(p).is_none() {
        return DcorStatus::InvalidArgument;
    }
    let input = std::slice::from_raw_parts(values, p * p);
    let matrix = Array2::from_shape_vec((p, p), input.to_vec()).expect("shape matches length");
    match sym_eigen(&matrix) {
        Ok(eig) => {
            let vals = std::slice::from_raw_parts_mut(out_eigenvalues, p);
            vals.copy_from_slice(&eig.eigenvalues);
            let vecs = std::slice::from_raw_parts_mut(out_eigenvectors, p * p);
            for ((i, j), &v) in eig.eigenvectors.indexed_iter() {
                vecs[i * p + j] = v;
            }
            DcorStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Static description of a status code; never null.
#[no_mangle]
pub extern "C" fn dcor_status_describe(status: DcorStatus) -> *const c_char {
    let text: &'static [u8] = match status {
        DcorStatus::Ok => b"ok\0",
        DcorStatus::NullPointer => b"null pointer argument\0",
        DcorStatus::InvalidArgument => b"invalid argument\0",
        DcorStatus::NonFinite => b"non-finite value in input\0",
        DcorStatus::SizeMismatch => b"input size mismatch\0",
        DcorStatus::TooFewObservations => b"too few observations\0",
        DcorStatus::NotSymmetric => b"matrix is not symmetric\0",
        DcorStatus::NoConvergence => b"eigensolver did not converge\0",
        DcorStatus::IoError => b"i/o error\0",
    };
    text.as_ptr() as *const c_char
}
