/**
 * Copyright 2026 The cvqkd-scissor Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <string>
#include <vector>

namespace cvqkd {

/// One battery point: a parameter set plus the dense-simulation cutoff.
struct BatteryPoint {
    double lambda_a;
    double lambda_e;
    double t_c;
    double t_s;
    int cutoff;
};

/// Worst-case absolute error of one validated quantity across the battery.
struct QuantityError {
    std::string quantity;
    double max_abs_error;
    double tolerance;
    bool pass() const { return max_abs_error < tolerance; }
};

/// Parses a battery fixture file ({"points": [{lambda_a, lambda_e, t_c,
/// t_s, cutoff}, ...]}); rejects missing or empty batteries.
std::vector<BatteryPoint> load_battery(const std::string& path);

/// Runs every closed-form quantity against the brute-force simulator on
/// each point: channel amplitudes, herald probability, joint-state
/// coefficient arrays, reduced states, fidelity (1e-8) and the joint
/// entropy (1e-9).  Results sorted by quantity name.
std::vector<QuantityError> run_validation_battery(
    const std::vector<BatteryPoint>& battery);

}  // namespace cvqkd
