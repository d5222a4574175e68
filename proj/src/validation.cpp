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

#include "cvqkd/validation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "cvqkd/channel.hpp"
#include "cvqkd/keyrate.hpp"
#include "cvqkd/oracle.hpp"
#include "cvqkd/scissor.hpp"

namespace cvqkd {

std::vector<BatteryPoint> load_battery(const std::string& path) {
    std::ifstream in(path);
    if (!in.good())
        throw std::invalid_argument("cannot read battery: " + path);
    const nlohmann::json doc = nlohmann::json::parse(in);
    if (!doc.contains("points") || !doc["points"].is_array() ||
        doc["points"].empty())
        throw std::invalid_argument("battery has no points: " + path);
    std::vector<BatteryPoint> battery;
    for (const auto& pt : doc["points"]) {
        battery.push_back({pt.at("lambda_a").get<double>(),
                           pt.at("lambda_e").get<double>(),
                           pt.at("t_c").get<double>(),
                           pt.at("t_s").get<double>(),
                           pt.at("cutoff").get<int>()});
    }
    return battery;
}

std::vector<QuantityError> run_validation_battery(
    const std::vector<BatteryPoint>& battery) {
    if (battery.empty()) throw std::invalid_argument("empty battery");

    std::map<std::string, QuantityError> checks;
    const auto record = [&](const std::string& name, double err, double tol) {
        auto& c = checks[name];
        c.quantity = name;
        c.tolerance = tol;
        c.max_abs_error = std::max(c.max_abs_error, err);
    };

    for (const BatteryPoint& pt : battery) {
        const ProtocolParams params(pt.lambda_a, pt.t_s, pt.lambda_e, pt.t_c);

        const auto dense = oracle::channel_state(params, pt.cutoff);
        const int span = std::min(pt.cutoff, 6);
        for (int na = 0; na <= span; ++na)
            for (int ne = 0; ne <= span; ++ne) {
                // the truncated splitter is exact only on complete
                // photon-number blocks
                if (na + ne > pt.cutoff) continue;
                for (int nb = 0; nb <= na + ne; ++nb) {
                    const int occ[4] = {na, nb, ne, na + ne - nb};
                    record("theta",
                           std::abs(dense.amplitude(occ) -
                                    theta({na, nb, ne}, params)),
                           1e-8);
                }
            }

        const auto run = oracle::simulate_protocol(params, pt.cutoff);
        record("p_q", std::abs(run.p_q - success_prob_qs(params)), 1e-8);

        const auto js = joint_state(params, 1e-16);
        const auto rs = reduced_states(js, params);
        const int nspan = std::min(pt.cutoff - 1, js.cutoff);
        for (int n = 0; n <= nspan; ++n) {
            record("sigma00", std::abs(run.sigma00[n] - js.sigma00[n]), 1e-8);
            record("sigma11", std::abs(run.sigma11[n] - js.sigma11[n]), 1e-8);
            if (n < nspan)
                record("sigma01", std::abs(run.sigma01[n] - js.sigma01[n]),
                       1e-8);
            record("gamma_a",
                   std::abs(run.sigma00[n] + run.sigma11[n] - rs.gamma_a[n]),
                   1e-8);
        }
        double gb0 = 0.0, gb1 = 0.0;
        for (int n = 0; n <= pt.cutoff; ++n) {
            gb0 += run.sigma00[n];
            gb1 += run.sigma11[n];
        }
        record("gamma_b", std::abs(gb0 - rs.gamma_b0), 1e-8);
        record("gamma_b", std::abs(gb1 - rs.gamma_b1), 1e-8);
        record("fidelity", std::abs(run.fidelity - fidelity(rs)), 1e-8);

        const double s_ab = von_neumann(spectrum(js).eigenvalues());
        record("entropy_ab", std::abs(run.entropy_ab - s_ab), 1e-9);
    }

    std::vector<QuantityError> out;
    out.reserve(checks.size());
    for (const auto& [_, c] : checks) out.push_back(c);
    return out;
}

}  // namespace cvqkd
