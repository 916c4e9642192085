/* cc examples/predict.c -Iinclude -L../../target/debug -lsamara_ffi -o predict */
#include <stdio.h>
#include "samara.h"

int main(void) {
    SamaraModel *model = NULL;
    if (samara_model_from_profile("crazyflie-bench", &model) != SAMARA_STATUS_OK) {
        fprintf(stderr, "%s\n", samara_last_error());
        return 1;
    }
    SamaraTrim trim;
    SamaraStatus status = samara_predict(model, 3.5, &trim);
    if (status != SAMARA_STATUS_OK) {
        fprintf(stderr, "%s\n", samara_last_error());
        samara_model_free(model);
        return (int)status;
    }
    printf("%.9g %.9g\n", trim.thrust, trim.omega_rev);
    samara_model_free(model);
    return 0;
}
