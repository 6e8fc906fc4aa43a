#include <math.h>
#include <stdio.h>

#include "dgegen.h"

#define CHECK(cond) do { if (!(cond)) { printf("failed: %s\n", #cond); return 1; } } while (0)

int main(void) {
    double v = 0.0;
    CHECK(dgegen_log_gamma(5.0, &v) == DGEGEN_STATUS_OK);
    CHECK(fabs(v - log(24.0)) < 1e-14);

    DgegenCoeffTable *t = NULL;
    CHECK(dgegen_coeff_table_new(1.0, 1.0, 1.0, 0, 2, 2, &t) == DGEGEN_STATUS_OK);
    CHECK(dgegen_coeff_table_get(t, 1, 1, &v) == DGEGEN_STATUS_OK);
    CHECK(fabs(v + 0.5) < 1e-14);
    dgegen_coeff_table_free(t);

    double tail = 0.0;
    CHECK(dgegen_series_eval(1.0, 1.0, 1.0, 0, 0.0, 0.0, 4, 4, false, &v, &tail) == DGEGEN_STATUS_HYPOTHESIS);
    CHECK(dgegen_last_error() != NULL);

    CHECK(dgegen_integral_b(DGEGEN_VARIANT_ABS, 0.7, 1.3, 0.9, 0, 2, 0.0, &v) == DGEGEN_STATUS_OK);
    CHECK(v == 0.0);
    printf("ok\n");
    return 0;
}
