/* Build from the workspace root:
 *   cargo build -p ps-rydberg-ffi --release
 *   cc crates/ffi/examples/demo.c -Icrates/ffi/include \
 *      target/release/libps_rydberg_ffi.a -lpthread -ldl -lm -o demo
 */
#include <stdio.h>
#include <stdlib.h>

#include "ps_rydberg.h"

static int check(PsStatus s, const char *what) {
    if (s != PS_STATUS_OK) {
        fprintf(stderr, "%s failed (%d): %s\n", what, (int)s, ps_last_error_message());
        return 1;
    }
    return 0;
}

int main(void) {
    double fsat;
    if (check(ps_fsat_13(100.0, 1.0, &fsat), "ps_fsat_13")) return 1;
    printf("ps-rydberg %s: F_sat(1->3) = %.2f uJ/cm2\n", ps_version(), fsat * 100.0);

    PsLadderConfig *cfg = NULL;
    if (check(ps_ladder_config_new(PS_SCHEME_VIA_N3, &cfg), "config")) return 1;
    ps_ladder_config_set_realizations(cfg, 20);

    PsEnsemble *res = NULL;
    if (check(ps_simulate_ensemble(cfg, &res), "simulate")) return 1;
    double p, se;
    ps_ensemble_final_rydberg(res, &p, &se);
    printf("Rydberg fraction %.4f +- %.4f (20 realizations)\n", p, se);

    size_t n;
    ps_ensemble_len(res, &n);
    double *t = malloc(n * sizeof *t);
    ps_ensemble_series(res, PS_SERIES_TIME, t, n);
    printf("%zu samples from %.1f to %.1f ns\n", n, t[0] * 1e9, t[n - 1] * 1e9);
    free(t);

    if (ps_einstein_b(1, 0, 0, 3, 0, 0, &p) != PS_STATUS_OK)
        printf("expected failure: %s\n", ps_last_error_message());

    ps_ensemble_free(res);
    ps_ladder_config_free(cfg);
    return 0;
}
