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

// Exercises the shared library only through its C header.

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>

#include <unistd.h>

#include <doctest.h>

#include "collisim/collisim.h"

namespace fs = std::filesystem;

namespace {

collisim_params* make_params(double delta, double tau, long n_steps) {
    collisim_params* p = nullptr;
    REQUIRE(collisim_params_create(&p) == COLLISIM_OK);
    REQUIRE(collisim_params_set(p, "delta", delta) == COLLISIM_OK);
    REQUIRE(collisim_params_set(p, "tau", tau) == COLLISIM_OK);
    REQUIRE(collisim_params_set(p, "n_steps", static_cast<double>(n_steps)) == COLLISIM_OK);
    return p;
}

}  // namespace

TEST_CASE("version and status strings") {
    CHECK(std::strlen(collisim_version()) > 0);
    CHECK(std::string(collisim_status_string(COLLISIM_OK)) == "ok");
    CHECK(std::strlen(collisim_status_string(COLLISIM_ERR_SINGULARITY)) > 0);
    CHECK(std::strlen(collisim_status_string(static_cast<collisim_status>(999))) > 0);
}

TEST_CASE("params handle") {
    collisim_params* p = make_params(50.0, 2.0, 10);
    double v = 0.0;
    CHECK(collisim_params_get(p, "g", &v) == COLLISIM_OK);
    CHECK(v == 1.0);
    CHECK(collisim_params_get(p, "omega_a1", &v) == COLLISIM_OK);
    CHECK(std::isnan(v));
    CHECK(collisim_params_set(p, "colour", 1.0) == COLLISIM_ERR_INVALID_ARGUMENT);
    CHECK(std::string(collisim_last_error()).find("colour") != std::string::npos);
    CHECK(collisim_params_set(p, "n_steps", 2.5) != COLLISIM_OK);
    CHECK(collisim_params_set(nullptr, "g", 1.0) == COLLISIM_ERR_INVALID_ARGUMENT);
    CHECK(collisim_params_get(p, "g", nullptr) == COLLISIM_ERR_INVALID_ARGUMENT);
    CHECK(collisim_params_validate(p) == COLLISIM_OK);

    collisim_rates r{};
    CHECK(collisim_params_derive(p, &r) == COLLISIM_OK);
    CHECK(r.alpha == doctest::Approx(0.02));
    CHECK(std::isnan(r.beta_s));
    CHECK(collisim_params_set(p, "omega_a1", 2.0) == COLLISIM_OK);
    CHECK(collisim_params_set(p, "omega_a2", 1.0) == COLLISIM_OK);
    CHECK(collisim_params_set(p, "x1", 0.5) == COLLISIM_OK);
    CHECK(collisim_params_set(p, "x2", 1.5) == COLLISIM_OK);
    CHECK(collisim_params_derive(p, &r) == COLLISIM_OK);
    CHECK(r.x_s == doctest::Approx(-1.0));
    CHECK(r.beta_s == doctest::Approx(-1.0));

    CHECK(collisim_params_set(p, "tau", -1.0) == COLLISIM_OK);
    CHECK(collisim_params_validate(p) == COLLISIM_ERR_CONFIG);
    collisim_params_destroy(p);
    collisim_params_destroy(nullptr);
}

TEST_CASE("hamiltonian export") {
    collisim_params* p = make_params(50.0, 1.0, 1);
    double h[288];
    CHECK(collisim_build_hamiltonian(p, COLLISIM_HAMILTONIAN_ORIGINAL, h, 288) == COLLISIM_OK);
    // <1,0,0|H'|0,0,2> = g, index (1*2+0)*3+0 = 6 and 2.
    CHECK(h[2 * (6 * 12 + 2)] == 1.0);
    CHECK(h[2 * (2 * 12 + 2)] == 50.0);
    CHECK(collisim_build_hamiltonian(p, COLLISIM_HAMILTONIAN_ROTATED, h, 288) == COLLISIM_OK);
    CHECK(h[2 * (4 * 12 + 6)] == doctest::Approx(-0.02));  // <0,1,1|V|1,0,0>
    CHECK(collisim_build_hamiltonian(p, COLLISIM_HAMILTONIAN_EFFECTIVE, h, 100) == COLLISIM_ERR_DIMENSION);
    CHECK(collisim_params_set(p, "delta", 0.0) == COLLISIM_OK);
    CHECK(collisim_build_hamiltonian(p, COLLISIM_HAMILTONIAN_EFFECTIVE, h, 288) == COLLISIM_ERR_SINGULARITY);
    collisim_params_destroy(p);
}

TEST_CASE("collision and master-equation runs") {
    collisim_params* p = make_params(100.0, 30.0, 20);
    const double ground[3] = {1.0, 0.0, 0.0};
    collisim_trajectory* orig = nullptr;
    collisim_trajectory* rk = nullptr;
    collisim_trajectory* me = nullptr;
    REQUIRE(collisim_run_collisions(p, ground, COLLISIM_MODE_ORIGINAL, COLLISIM_PROPAGATOR_SPECTRAL, 0, &orig) ==
            COLLISIM_OK);
    REQUIRE(collisim_run_collisions(p, ground, COLLISIM_MODE_ORIGINAL, COLLISIM_PROPAGATOR_RUNGE_KUTTA, 0, &rk) ==
            COLLISIM_OK);
    REQUIRE(collisim_run_master_equation(p, COLLISIM_EQUATION_EFFECTIVE_QUBIT, ground, &me) == COLLISIM_OK);
    CHECK(collisim_trajectory_size(orig) == 21);
    CHECK(collisim_trajectory_size(me) == 21);
    CHECK(std::string(collisim_trajectory_source(orig)) == "orig");

    long step = 0;
    double t = 0.0, a[3], b[3], c[3];
    REQUIRE(collisim_trajectory_entry(orig, 20, &step, &t, a) == COLLISIM_OK);
    REQUIRE(collisim_trajectory_entry(rk, 20, &step, &t, b) == COLLISIM_OK);
    REQUIRE(collisim_trajectory_entry(me, 20, &step, &t, c) == COLLISIM_OK);
    CHECK(step == 20);
    CHECK(t == doctest::Approx(600.0));
    for (int k = 0; k < 3; ++k) CHECK(std::abs(a[k] - b[k]) <= 1e-7);
    CHECK(std::abs(a[1] - c[1]) <= 0.05);
    CHECK(collisim_trajectory_entry(orig, 21, &step, &t, a) == COLLISIM_ERR_INVALID_ARGUMENT);

    const std::string path = (fs::temp_directory_path() / ("collisim-capi-" + std::to_string(::getpid()) + ".csv")).string();
    const collisim_trajectory* both[2] = {orig, me};
    CHECK(collisim_trajectory_write_csv(both, 2, path.c_str()) == COLLISIM_OK);
    CHECK(fs::file_size(path) > 0);
    fs::remove(path);
    CHECK(collisim_trajectory_write_csv(both, 2, "/nonexistent/dir/x.csv") == COLLISIM_ERR_IO);

    const double bad[3] = {0.5, 0.6, 0.0};
    collisim_trajectory* none = nullptr;
    CHECK(collisim_run_collisions(p, bad, COLLISIM_MODE_ORIGINAL, COLLISIM_PROPAGATOR_SPECTRAL, 0, &none) ==
          COLLISIM_ERR_NUMERIC);
    CHECK(none == nullptr);
    const double leaked[3] = {0.5, 0.0, 0.5};
    CHECK(collisim_run_master_equation(p, COLLISIM_EQUATION_EFFECTIVE_QUBIT, leaked, &none) != COLLISIM_OK);

    collisim_trajectory_destroy(orig);
    collisim_trajectory_destroy(rk);
    collisim_trajectory_destroy(me);
    collisim_params_destroy(p);
}

TEST_CASE("closed evolution") {
    collisim_params* p = make_params(50.0, 1.0, 1);
    collisim_trajectory* t = nullptr;
    REQUIRE(collisim_closed_evolution(p, COLLISIM_HAMILTONIAN_ROTATED, 1.0, 11, &t) == COLLISIM_OK);
    CHECK(collisim_trajectory_size(t) == 11);
    long step = 0;
    double time = 0.0, pops[3];
    REQUIRE(collisim_trajectory_entry(t, 10, &step, &time, pops) == COLLISIM_OK);
    CHECK(time == doctest::Approx(50.0));
    CHECK(pops[0] == doctest::Approx(std::cos(1.0) * std::cos(1.0)).epsilon(1e-12));
    collisim_trajectory_destroy(t);
    CHECK(collisim_closed_evolution(p, COLLISIM_HAMILTONIAN_ROTATED, 1.0, 1, &t) != COLLISIM_OK);
    collisim_params_destroy(p);
}

TEST_CASE("config and scenario") {
    collisim_config* cfg = nullptr;
    CHECK(collisim_config_parse("scenario = nowhere\n", &cfg) == COLLISIM_ERR_CONFIG);
    CHECK(cfg == nullptr);
    CHECK(collisim_config_load("/nonexistent.conf", &cfg) == COLLISIM_ERR_IO);

    REQUIRE(collisim_config_parse("scenario = verify-elimination\ndelta = 50\ngrid_points = 200\n", &cfg) ==
            COLLISIM_OK);
    CHECK(std::string(collisim_config_scenario(cfg)) == "verify-elimination");
    CHECK(collisim_config_is_sweep(cfg) == 0);
    const fs::path dir = fs::temp_directory_path() / ("collisim-capi-run-" + std::to_string(::getpid()));
    CHECK(collisim_config_set_output_dir(cfg, dir.c_str()) == COLLISIM_OK);
    CHECK(collisim_config_validate(cfg) == COLLISIM_OK);

    collisim_report* report = nullptr;
    REQUIRE(collisim_run_scenario(cfg, &report) == COLLISIM_OK);
    CHECK(collisim_report_passed(report) == 1);
    CHECK(std::string(collisim_report_summary(report)).find("status=pass") != std::string::npos);
    CHECK(std::string(collisim_report_text(report)).find("PASS") != std::string::npos);
    CHECK(fs::exists(dir / "trajectories.csv"));
    collisim_report_destroy(report);
    collisim_config_destroy(cfg);
    fs::remove_all(dir);

    REQUIRE(collisim_config_parse("scenario = verify-elimination\n", &cfg) == COLLISIM_OK);
    CHECK(collisim_config_validate(cfg) == COLLISIM_ERR_CONFIG);
    CHECK(std::string(collisim_last_error()).find("delta") != std::string::npos);
    collisim_config_destroy(cfg);
    CHECK(collisim_run_scenario(nullptr, &report) == COLLISIM_ERR_INVALID_ARGUMENT);
}
