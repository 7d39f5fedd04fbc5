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

#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace collisim {

enum class ErrorKind {
    precondition,          // caller violated a documented precondition
    domain,                // non-finite or out-of-range scalar input
    labeling,              // unknown subsystem label
    dimension,             // matrix dimensions do not match
    singularity,           // zero detuning in an adiabatic-elimination formula
    degenerate_frequency,  // omega_a1 == omega_a2 while beta_s was requested
    numeric,               // invariant violation or solver failure during a run
    config,                // malformed or incomplete scenario configuration
    io,                    // filesystem failure
};

const char* to_string(ErrorKind kind) noexcept;

// Short scientific rendering for diagnostics in error messages.
inline std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Raised when a state produced mid-run fails the density-operator checks.
// step is the collision (or integrator) index at which it happened.
class NumericError : public Error {
public:
    NumericError(const std::string& what, long step = -1)
        : Error(ErrorKind::numeric, what), step_(step) {}

    long step() const noexcept { return step_; }

private:
    long step_;
};

}  // namespace collisim
