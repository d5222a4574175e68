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

#include <span>
#include <utility>
#include <vector>

#include "cvqkd/scissor.hpp"

namespace cvqkd {

/// Exact spectrum of the joint state.  The coherences pair exactly the
/// basis states {|n,0>, |n+1,1>}, so the density operator splits into the
/// uncoupled |0,1> weight plus independent 2x2 blocks
///   [[sigma00[n], sigma01[n]], [sigma01[n], sigma11[n+1]]],
/// diagonalized in closed form.  The final unpaired diagonal weight
/// sigma00[cutoff] is appended as the eigenpair (sigma00[cutoff], 0).
struct BlockSpectrum {
    double lone_eigenvalue = 0.0;  ///< weight of the uncoupled |0,1> element
    std::vector<std::pair<double, double>> block_eigenpairs;  ///< (mu+, mu-)

    /// All eigenvalues flattened, in deterministic order.
    std::vector<double> eigenvalues() const;
};

BlockSpectrum spectrum(const JointState& joint);

/// Von Neumann entropy in bits, -sum p log2 p with 0 log 0 := 0.
/// Entries below -1e-14 are rejected; values in [-1e-14, 0) clamp to 0.
double von_neumann(std::span<const double> probabilities);

/// Repeaterless secret-key capacity bound -log2(1 - t_c^2) of the lossy
/// channel.  Requires t_c in (0, 1); diverges at t_c = 1.
double plob_bound(double t_c);

struct GaussianityMetrics {
    double ratio;  ///< gamma_b1 / gamma_b0, the non-Gaussian weight fraction
    double proxy;  ///< g^2 lambda_a^2, the t_c = 1 value of the ratio
};

/// Diagnostics of how far Bob's state is from Gaussian; no optimality
/// claim is attached to them.
GaussianityMetrics gaussianity_metrics(const ProtocolParams& params);

struct KeyRateBreakdown {
    double k = 0.0;       ///< secret key rate, bits per pulse (may be < 0)
    double p_q = 0.0;     ///< scissor success probability
    double s_a = 0.0;     ///< S[rho_A], bits
    double s_ab = 0.0;    ///< S[rho_AB], bits
    double entropy_error = 0.0;  ///< bound on the truncated tail's entropy
    int cutoff = 0;
};

/// K = p_q (beta S[rho_A] - S[rho_AB]).  Negative rates are returned
/// as-is; callers compare against their key-rate floor.
KeyRateBreakdown key_rate_breakdown(const ProtocolParams& params,
                                    double tol = 1e-15);
double secret_key_rate(const ProtocolParams& params, double tol = 1e-15);

}  // namespace cvqkd
