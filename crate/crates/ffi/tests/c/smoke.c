#include <math.h>
#include <stdio.h>
#include "sd2.h"

int main(void) {
    struct Sd2Generators *g = NULL;
    if (sd2_generators_build(4, 0.3, 0.7, SD2_BASIS_CIRCULAR_B2, &g) != SD2_STATUS_OK) return 1;
    size_t d = sd2_generators_dim(g);
    double re[25], im[25], cf[5];
    if (d != 5) return 2;
    if (sd2_generators_eigenvalues(g, SD2_GENERATOR_J2, re, im, 5) != SD2_STATUS_OK) return 3;
    if (sd2_spectrum_closed_form(4, 0.3, 0.7, SD2_OPERATOR_J2, cf, 5) != SD2_STATUS_OK) return 4;
    for (size_t i = 0; i < d; i++)
        if (fabs(re[i] - cf[i]) > 1e-10) return 5;
    sd2_generators_free(g);

    char msg[128];
    if (sd2_generators_build(2, -0.7, 0.0, SD2_BASIS_CARTESIAN, &g) != SD2_STATUS_INVALID_PARAMS) return 6;
    if (sd2_last_error_message(msg, sizeof msg) == 0) return 7;
    printf("ok %s\n", sd2_version());
    return 0;
}
