#include <stdio.h>
#include "refutekit.h"

int main(void) {
    RkXorInstance *inst = NULL;
    RkCertificate *cert = NULL;
    double alg = 0.0, recomputed = 0.0;
    bool ok = false;
    if (rk_xor_instance_generate(12, 3, 60, 5, &inst) != RK_STATUS_OK) return 1;
    if (rk_refute_poly(inst, 2, 0.5, &alg, &cert) != RK_STATUS_OK) return 2;
    if (rk_certificate_replay(cert, inst, &ok, &recomputed) != RK_STATUS_OK || !ok) return 3;
    if (rk_brute_force_val(NULL, &alg) != RK_STATUS_NULL_POINTER) return 4;
    printf("alg-val %f\n", recomputed);
    rk_certificate_free(cert);
    rk_xor_instance_free(inst);
    return 0;
}
