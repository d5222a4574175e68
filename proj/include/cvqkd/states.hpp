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

#include <cmath>
#include <vector>

namespace cvqkd {

/// Physical knobs of the protocol.  All values are dimensionless amplitudes
/// except beta (reconciliation efficiency).  Construction validates ranges
/// and throws std::invalid_argument on violation.
///
/// lambda_a may be exactly 0 (vacuum source); lambda_a = 1 is the
/// unnormalizable EPR limit and is rejected.
struct ProtocolParams {
    double lambda_a;   ///< TMSV squeezing parameter, [0, 1)
    double t_z;        ///< ZPC beam-splitter transmission, (0, 1]
    double t_s;        ///< scissor beam-splitter transmission, (0, 1)
    double lambda_e;   ///< eavesdropper TMSV parameter, [0, 1)
    double t_c;        ///< channel transmission amplitude, (0, 1]
    double beta;       ///< reconciliation efficiency, (0, 1]

    ProtocolParams(double lambda_a, double t_s, double lambda_e, double t_c,
                   double beta = 1.0, double t_z = 1.0);

    /// Channel reflection amplitude; t_c^2 + r_c^2 = 1 by construction.
    double r_c() const { return std::sqrt(1.0 - t_c * t_c); }

    /// Scissor amplification gain g = sqrt((1 - t_s^2)/t_s^2); g > 1 iff
    /// t_s^2 < 0.5.
    double gain() const { return std::sqrt((1.0 - t_s * t_s) / (t_s * t_s)); }

    /// TMSV parameter after zero-photon catalysis.  For a TMSV source the
    /// catalysis is exactly a rescaling lambda_a -> t_z * lambda_a, so all
    /// post-channel formulas consume this value.  t_z defaults to 1
    /// (catalysis removed).
    double effective_lambda_a() const { return t_z * lambda_a; }

    /// Convenience: channel given as excess noise (shot-noise units) and
    /// fiber length in km.
    static ProtocolParams from_noise_and_distance(double lambda_a, double t_s,
                                                  double eps, double l_km,
                                                  double beta = 1.0,
                                                  double t_z = 1.0);
};

/// Fiber transmission amplitude t_c = 10^(-0.01 L), L in km.
double t_c_from_distance(double l_km);

/// Inverse of t_c_from_distance; requires t_c in (0, 1].
double distance_from_t_c(double t_c);

/// Eavesdropper TMSV parameter reproducing excess noise
/// eps = 2 lambda_E^2 / (1 - lambda_E^2).
double lambda_e_from_excess_noise(double eps);

/// Excess noise generated by an entangling cloner with parameter lambda_e.
double excess_noise_from_lambda_e(double lambda_e);

struct EquivalentNoises {
    double transmitter;  ///< eps_tm = (1 - t_c^2) eps / t_c^2
    double receiver;     ///< eps_rec = (1 - t_c^2) eps
};

/// Transmitter- and receiver-referred equivalents of the excess noise.
EquivalentNoises equivalent_noises(double eps, double t_c);

/// General two-mode Fock amplitude array Gamma(n_a, n_a'), real entries,
/// both indices in [0, cutoff].  Normalized within `tail`.
struct CoefficientMatrix {
    std::vector<double> amplitudes;  ///< (cutoff+1)^2 entries, row-major
    int cutoff = 0;
    double tail = 0.0;  ///< squared-norm mass lost to truncation

    double& at(int n, int np) { return amplitudes[n * (cutoff + 1) + np]; }
    double at(int n, int np) const { return amplitudes[n * (cutoff + 1) + np]; }
    double norm_sq() const;
};

/// Smallest cutoff N with geometric tail lambda^(2(N+1)) < tol, at least 1.
int tmsv_cutoff(double lambda, double tol = 1e-15);

/// Two-mode squeezed vacuum: diagonal entries sqrt(1-lambda^2) lambda^n.
/// lambda in [0, 1); cutoff >= 1.
CoefficientMatrix tmsv_coefficients(double lambda, int cutoff);

struct ZpcResult {
    CoefficientMatrix state;  ///< renormalized post-catalysis amplitudes
    double p_z;               ///< herald (success) probability
};

/// Zero-photon catalysis on the second mode: scales each amplitude by
/// t_z^(n_a') and renormalizes.  Accepts t_z in [0, 1]; rejects an all-zero
/// input.  For TMSV input, P_z = (1 - lambda^2)/(1 - t_z^2 lambda^2).
ZpcResult zpc_transform(const CoefficientMatrix& gamma, double t_z);

}  // namespace cvqkd
