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

#include "cvqkd/states.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace cvqkd {

namespace {

void require(bool cond, const char* what) {
    if (!cond) throw std::invalid_argument(what);
}

}  // namespace

ProtocolParams::ProtocolParams(double lambda_a_, double t_s_, double lambda_e_,
                               double t_c_, double beta_, double t_z_)
    : lambda_a(lambda_a_),
      t_z(t_z_),
      t_s(t_s_),
      lambda_e(lambda_e_),
      t_c(t_c_),
      beta(beta_) {
    require(std::isfinite(lambda_a) && lambda_a >= 0.0 && lambda_a < 1.0,
            "lambda_a must be in [0, 1)");
    require(std::isfinite(t_z) && t_z > 0.0 && t_z <= 1.0,
            "t_z must be in (0, 1]");
    require(std::isfinite(t_s) && t_s > 0.0 && t_s < 1.0,
            "t_s must be in (0, 1)");
    require(std::isfinite(lambda_e) && lambda_e >= 0.0 && lambda_e < 1.0,
            "lambda_e must be in [0, 1)");
    require(std::isfinite(t_c) && t_c > 0.0 && t_c <= 1.0,
            "t_c must be in (0, 1]");
    require(std::isfinite(beta) && beta > 0.0 && beta <= 1.0,
            "beta must be in (0, 1]");
}

ProtocolParams ProtocolParams::from_noise_and_distance(double lambda_a,
                                                       double t_s, double eps,
                                                       double l_km, double beta,
                                                       double t_z) {
    return ProtocolParams(lambda_a, t_s, lambda_e_from_excess_noise(eps),
                          t_c_from_distance(l_km), beta, t_z);
}

double t_c_from_distance(double l_km) {
    require(std::isfinite(l_km) && l_km >= 0.0, "distance must be >= 0");
    return std::pow(10.0, -0.01 * l_km);
}

double distance_from_t_c(double t_c) {
    require(std::isfinite(t_c) && t_c > 0.0 && t_c <= 1.0,
            "t_c must be in (0, 1]");
    return -100.0 * std::log10(t_c);
}

double lambda_e_from_excess_noise(double eps) {
    require(std::isfinite(eps) && eps >= 0.0, "excess noise must be >= 0");
    return std::sqrt(eps / (eps + 2.0));
}

double excess_noise_from_lambda_e(double lambda_e) {
    require(std::isfinite(lambda_e) && lambda_e >= 0.0 && lambda_e < 1.0,
            "lambda_e must be in [0, 1)");
    const double le2 = lambda_e * lambda_e;
    return 2.0 * le2 / (1.0 - le2);
}

EquivalentNoises equivalent_noises(double eps, double t_c) {
    require(std::isfinite(eps) && eps >= 0.0, "excess noise must be >= 0");
    require(std::isfinite(t_c) && t_c > 0.0 && t_c <= 1.0,
            "t_c must be in (0, 1]");
    const double tc2 = t_c * t_c;
    return {(1.0 - tc2) * eps / tc2, (1.0 - tc2) * eps};
}

double CoefficientMatrix::norm_sq() const {
    double s = 0.0;
    for (double a : amplitudes) s += a * a;
    return s;
}

int tmsv_cutoff(double lambda, double tol) {
    require(std::isfinite(lambda) && lambda >= 0.0 && lambda < 1.0,
            "lambda must be in [0, 1)");
    require(tol > 0.0, "tol must be > 0");
    if (lambda == 0.0) return 1;
    // smallest N with lambda^(2(N+1)) < tol
    const int n = static_cast<int>(
        std::ceil(std::log(tol) / (2.0 * std::log(lambda)) - 1.0));
    return std::max(n, 1);
}

CoefficientMatrix tmsv_coefficients(double lambda, int cutoff) {
    require(std::isfinite(lambda) && lambda >= 0.0 && lambda < 1.0,
            "lambda must be in [0, 1): the lambda = 1 state is unnormalizable");
    require(cutoff >= 1, "cutoff must be >= 1");
    CoefficientMatrix m;
    m.cutoff = cutoff;
    m.amplitudes.assign(static_cast<std::size_t>(cutoff + 1) * (cutoff + 1),
                        0.0);
    const double c = std::sqrt(1.0 - lambda * lambda);
    double pow_l = 1.0;
    for (int n = 0; n <= cutoff; ++n) {
        m.at(n, n) = c * pow_l;
        pow_l *= lambda;
    }
    m.tail = std::pow(lambda, 2.0 * (cutoff + 1));
    return m;
}

ZpcResult zpc_transform(const CoefficientMatrix& gamma, double t_z) {
    require(std::isfinite(t_z) && t_z >= 0.0 && t_z <= 1.0,
            "t_z must be in [0, 1]");
    require(gamma.norm_sq() > 0.0, "all-zero input state");

    ZpcResult out;
    out.state = gamma;
    const int dim = gamma.cutoff + 1;
    std::vector<double> col_scale(dim);
    double p = 1.0;
    for (int np = 0; np < dim; ++np) {
        col_scale[np] = p;
        p *= t_z;
    }
    double p_z = 0.0;
    for (int n = 0; n < dim; ++n) {
        for (int np = 0; np < dim; ++np) {
            const double a = gamma.at(n, np) * col_scale[np];
            out.state.at(n, np) = a;
            p_z += a * a;
        }
    }
    require(p_z > 0.0, "catalysis annihilated the state");
    const double inv = 1.0 / std::sqrt(p_z);
    for (double& a : out.state.amplitudes) a *= inv;
    out.state.tail = gamma.tail / p_z;
    out.p_z = p_z;
    return out;
}

}  // namespace cvqkd
