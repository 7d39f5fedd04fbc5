// Copyright 2026 The collisim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* The public header must compile as C; this program drives a short run
 * through it. */

#include <math.h>
#include <stdio.h>

#include "collisim/collisim.h"

int main(void) {
    collisim_params* p = NULL;
    collisim_trajectory* t = NULL;
    const double ground[3] = {1.0, 0.0, 0.0};
    double pops[3];
    long step = 0;
    double time = 0.0;
    int failures = 0;

    if (collisim_params_create(&p) != COLLISIM_OK) return 1;
    collisim_params_set(p, "delta", 50.0);
    collisim_params_set(p, "tau", 10.0);
    collisim_params_set(p, "n_steps", 5.0);
    if (collisim_run_collisions(p, ground, COLLISIM_MODE_EFFECTIVE, COLLISIM_PROPAGATOR_SPECTRAL, 0, &t) !=
        COLLISIM_OK) {
        fprintf(stderr, "run failed: %s\n", collisim_last_error());
        return 1;
    }
    if (collisim_trajectory_size(t) != 6) ++failures;
    if (collisim_trajectory_entry(t, 5, &step, &time, pops) != COLLISIM_OK) ++failures;
    if (step != 5 || fabs(time - 50.0) > 1e-12) ++failures;
    if (fabs(pops[0] + pops[1] + pops[2] - 1.0) > 1e-12) ++failures;
    if (collisim_params_set(p, "bogus", 1.0) != COLLISIM_ERR_INVALID_ARGUMENT) ++failures;

    collisim_trajectory_destroy(t);
    collisim_params_destroy(p);
    if (failures) fprintf(stderr, "%d checks failed\n", failures);
    return failures ? 1 : 0;
}
