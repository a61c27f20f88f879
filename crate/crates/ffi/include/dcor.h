/* C interface for the dcor distance covariance library. */

#ifndef DCOR_H
#define DCOR_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Estimator variant selector: 0 = naive, 1 = diagonal-excluded.
 */
#define DCOR_VARIANT_NAIVE 0

/**
 * Estimator variant selector: 0 = naive, 1 = diagonal-excluded.
 */
#define DCOR_VARIANT_NODIAG 1

/**
 * Permutation-test statistic selector: 0 = dcor, 1 = dcov2.
 */
#define DCOR_STATISTIC_DCOR 0

/**
 * Permutation-test statistic selector: 0 = dcor, 1 = dcov2.
 */
#define DCOR_STATISTIC_DCOV2 1

/**
 * Status code returned by every fallible call.
 */
typedef enum DcorStatus {
  DCOR_STATUS_OK = 0,
  DCOR_STATUS_NULL_POINTER = 1,
  DCOR_STATUS_INVALID_ARGUMENT = 2,
  DCOR_STATUS_NON_FINITE = 3,
  DCOR_STATUS_SIZE_MISMATCH = 4,
  DCOR_STATUS_TOO_FEW_OBSERVATIONS = 5,
  DCOR_STATUS_NOT_SYMMETRIC = 6,
  DCOR_STATUS_NO_CONVERGENCE = 7,
  DCOR_STATUS_IO_ERROR = 8,
} DcorStatus;

/**
 * Opaque handle to an n×d sample.
 */
typedef struct DcorDataset DcorDataset;

/**
 * All scalar outputs of a dependence estimate.
 */
typedef struct DcorEstimate {
  double dcov2;
  double dcor;
  double dvar2_x;
  double dvar2_y;
  size_t n;
  size_t dx;
  size_t dy;
} DcorEstimate;

/**
 * Outputs of the permutation test of independence.
 */
typedef struct DcorPermTest {
  double observed;
  double p_value;
  size_t replicates;
  size_t exceed_count;
  uint64_t seed;
} DcorPermTest;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Create a dataset from a row-major n×d buffer of doubles.
 *
 * On success `*out` owns the copy; release it with `dcor_dataset_free`.
 *
 * # Safety
 * `data` must point to n·d readable doubles and `out` must be a valid
 * pointer; the buffer is copied and need not outlive the call.
 */
enum DcorStatus dcor_dataset_new(const double *data, size_t n, size_t d, struct DcorDataset **out);

/**
 * Generate a synthetic paired dataset (both halves of the pair as one
 * dataset with dx + dy columns). `kind` is one of: 0 independent,
 * 1 orthogonal, 2 monotone, 3 nonmonotone.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum DcorStatus dcor_dataset_generate_pair(int kind,
                                           size_t n,
                                           size_t dx,
                                           size_t dy,
                                           uint64_t seed,
                                           struct DcorDataset **out);

/**
 * Release a dataset handle. Null is a no-op.
 *
 * # Safety
 * `ds` must be null or a pointer returned by a `dcor_dataset_*` constructor
 * that has not been freed yet.
 */
void dcor_dataset_free(struct DcorDataset *ds);

/**
 * Fetch the dimensions of a dataset.
 *
 * # Safety
 * All pointers must be valid; `ds` must be a live dataset handle.
 */
enum DcorStatus dcor_dataset_shape(const struct DcorDataset *ds, size_t *n, size_t *d);

/**
 * Distance covariance/correlation of two datasets with paired rows.
 *
 * # Safety
 * `x`, `y`, and `out` must be valid; the datasets must stay alive for the
 * duration of the call.
 */
enum DcorStatus dcor_estimate(const struct DcorDataset *x,
                              const struct DcorDataset *y,
                              int variant,
                              struct DcorEstimate *out);

/**
 * Seeded permutation test of independence between two datasets.
 *
 * # Safety
 * `x`, `y`, and `out` must be valid; the datasets must stay alive for the
 * duration of the call.
 */
enum DcorStatus dcor_permutation_test(const struct DcorDataset *x,
                                      const struct DcorDataset *y,
                                      int variant,
                                      int statistic,
                                      size_t replicates,
                                      uint64_t seed,
                                      struct DcorPermTest *out);

/**
 * Pairwise distance-correlation matrix over the d columns of a dataset,
 * written row-major into `out_values` (d·d doubles).
 *
 * # Safety
 * `data` must be a live dataset handle and `out_values` must point to at
 * least d·d writable doubles.
 */
enum DcorStatus dcor_pairwise_matrix(const struct DcorDataset *data,
                                     int variant,
                                     double *out_values);

/**
 * Eigendecomposition of a symmetric p×p matrix given row-major.
 *
 * Eigenvalues are written descending; `out_eigenvectors[i*p + j]` holds
 * component i of the eigenvector paired with eigenvalue j.
 *
 * # Safety
 * `values` must point to p·p readable doubles; `out_eigenvalues` must hold
 * p writable doubles and `out_eigenvectors` p·p writable doubles.
 */
enum DcorStatus dcor_sym_eigen(const double *values,
                               size_t p,
                               double *out_eigenvalues,
                               double *out_eigenvectors);

/**
 * Static description of a status code; never null.
 */
const char *dcor_status_describe(enum DcorStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DCOR_H */
