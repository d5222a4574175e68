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

#include "cvqkd/keyrate.hpp"

#include <cmath>
#include <stdexcept>

namespace cvqkd {

namespace {

constexpr double kNegativityFloor = -1e-14;

double entropy_term(double p) { return (p > 0.0) ? -p * std::log2(p) : 0.0; }

// entropy carried by probability mass `tail` spread over at most n_tail
// states, -tail log2(tail/n_tail); used only as a reported error bar
double tail_entropy_bound(double tail, double q) {
    if (!(tail > 0.0)) return 0.0;
    int n_tail = 1;
    if (q > 0.0 && q < 1.0) {
        // count of tail terms before they underflow to irrelevance
        const double k = (std::log(1e-300) - std::log(tail)) / std::log(q);
        if (k > 1.0) n_tail = static_cast<int>(std::ceil(k));
    }
    return -tail * std::log2(tail / n_tail);
}

}  // namespace

std::vector<double> BlockSpectrum::eigenvalues() const {
    std::vector<double> out;
    out.reserve(1 + 2 * block_eigenpairs.size());
    out.push_back(lone_eigenvalue);
    for (const auto& [mu_p, mu_m] : block_eigenpairs) {
        out.push_back(mu_p);
        out.push_back(mu_m);
    }
    return out;
}

BlockSpectrum spectrum(const JointState& joint) {
    BlockSpectrum sp;
    sp.lone_eigenvalue = joint.sigma11.empty() ? 0.0 : joint.sigma11[0];
    sp.block_eigenpairs.reserve(joint.cutoff + 1);
    for (int n = 0; n < joint.cutoff; ++n) {
        const double a = joint.sigma00[n];
        const double d = joint.sigma11[n + 1];
        const double b = joint.sigma01[n];
        const double h = 0.5 * (a + d);
        const double s = std::hypot(0.5 * (a - d), b);
        double mu_p = h + s;
        double mu_m = h - s;
        if (mu_m < 0.0 && mu_m >= kNegativityFloor) mu_m = 0.0;
        sp.block_eigenpairs.emplace_back(mu_p, mu_m);
    }
    // unpaired diagonal remainder, partner weight is beyond the cutoff
    sp.block_eigenpairs.emplace_back(joint.sigma00[joint.cutoff], 0.0);
    return sp;
}

double von_neumann(std::span<const double> probabilities) {
    double s = 0.0;
    for (double p : probabilities) {
        if (p < kNegativityFloor)
            throw std::invalid_argument(
                "von_neumann: negative probability beyond clamping floor");
        s += entropy_term(p);
    }
    return s;
}

double plob_bound(double t_c) {
    if (!(t_c > 0.0) || t_c >= 1.0)
        throw std::invalid_argument("plob_bound: t_c must be in (0, 1)");
    return -std::log2(1.0 - t_c * t_c);
}

GaussianityMetrics gaussianity_metrics(const ProtocolParams& params) {
    const double la = params.effective_lambda_a();
    const double g2 = (1.0 - params.t_s * params.t_s) /
                      (params.t_s * params.t_s);
    const JointState js = joint_state(params);
    const ReducedStates rs = reduced_states(js, params);
    return {rs.gamma_b1 / rs.gamma_b0, g2 * la * la};
}

KeyRateBreakdown key_rate_breakdown(const ProtocolParams& params, double tol) {
    const JointState js = joint_state(params, tol);
    const ReducedStates rs = reduced_states(js, params);

    KeyRateBreakdown out;
    out.cutoff = js.cutoff;
    out.p_q = success_prob_qs(params);

    out.s_a = von_neumann(rs.gamma_a);
    const std::vector<double> evs = spectrum(js).eigenvalues();
    out.s_ab = von_neumann(evs);

    const double la = params.effective_lambda_a();
    const double q = (1.0 - params.t_c * params.t_c) * la * la /
                     (1.0 - params.t_c * params.t_c * params.lambda_e *
                                params.lambda_e);
    out.entropy_error = 2.0 * tail_entropy_bound(js.tail_bound, q);

    out.k = out.p_q * (params.beta * out.s_a - out.s_ab);
    return out;
}

double secret_key_rate(const ProtocolParams& params, double tol) {
    return key_rate_breakdown(params, tol).k;
}

}  // namespace cvqkd
