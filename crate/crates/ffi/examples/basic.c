#include <stdio.h>
#include <stdlib.h>
#include "dcor.h"

int main(void) {
    double xs[] = {0.0, 1.0, 3.0, -2.0, 4.5, 0.3};
    double ys[] = {2.0, 0.5, -1.0, 3.0, 1.5, -0.2};
    DcorDataset *x = NULL, *y = NULL;
    if (dcor_dataset_new(xs, 6, 1, &x) != DCOR_STATUS_OK) return 1;
    if (dcor_dataset_new(ys, 6, 1, &y) != DCOR_STATUS_OK) return 1;

    DcorEstimate est;
    DcorStatus s = dcor_estimate(x, y, DCOR_VARIANT_NODIAG, &est);
    if (s != DCOR_STATUS_OK) { printf("estimate: %s\n", dcor_status_describe(s)); return 1; }
    printf("dcov2=%.17g dcor=%.17g n=%zu\n", est.dcov2, est.dcor, est.n);

    DcorPermTest test;
    s = dcor_permutation_test(x, y, DCOR_VARIANT_NAIVE, DCOR_STATISTIC_DCOR, 99, 7, &test);
    if (s != DCOR_STATUS_OK) { printf("test: %s\n", dcor_status_describe(s)); return 1; }
    printf("p=%.17g exceed=%zu\n", test.p_value, test.exceed_count);

    /* error path: mismatched sizes */
    DcorDataset *shorty = NULL;
    double zs[] = {1.0, 2.0};
    dcor_dataset_new(zs, 2, 1, &shorty);
    s = dcor_estimate(x, shorty, DCOR_VARIANT_NAIVE, &est);
    printf("mismatch -> %s\n", dcor_status_describe(s));
    if (s != DCOR_STATUS_SIZE_MISMATCH) return 1;

    dcor_dataset_free(shorty);
    dcor_dataset_free(x);
    dcor_dataset_free(y);
    return 0;
}
