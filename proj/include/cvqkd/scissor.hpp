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
 *
 * Closed-form algebra of the state shared by Alice and Bob after the
 * channel and a successful quantum scissor at Bob's side.  The scissor
 * truncates Bob's mode to span{|0>, |1>} and amplifies the one-photon
 * amplitude by g = sqrt((1-t_s^2)/t_s^2), heralded with probability p_q.
 */

#pragma once

#include "cvqkd/states.hpp"

namespace cvqkd {

/// Joint Alice-Bob density operator after a successful scissor, in the
/// block form
///
///   rho = sum_n  sigma00[n] |n,0><n,0| + sigma11[n] |n,1><n,1|
///              + sigma01[n] (|n,0><n+1,1| + |n+1,1><n,0|)
///
/// sigma00/sigma11 run over n = 0..cutoff, sigma01 over n = 0..cutoff-1.
/// The off-diagonal is stored once; hermiticity is by construction.
struct JointState {
    std::vector<double> sigma00;
    std::vector<double> sigma11;
    std::vector<double> sigma01;
    int cutoff = 0;
    double tail_bound = 0.0;  ///< trace mass beyond the cutoff
};

/// Reduced single-mode states: Alice's diagonal weights and Bob's
/// two-level occupation probabilities.
struct ReducedStates {
    std::vector<double> gamma_a;
    double gamma_b0 = 1.0;
    double gamma_b1 = 0.0;
};

struct VwPair {
    double v;  ///< amplitude of the |n_a, 0, n_e, n_a+n_e> component
    double w;  ///< amplitude of the |n_a, 1, n_e, n_a+n_e-1> component
};

/// Post-scissor four-mode amplitudes.  The w factor
/// (n_e r_c^2 - n_a t_c^2)/r_c is evaluated in cancellation-safe form, so
/// n_a = 0 and t_c = 1 are valid inputs; w = 0 at n_a = n_e = 0.
VwPair vw_amplitudes(int n_a, int n_e, const ProtocolParams& params);

/// Scissor herald probability; collapses to t_s^2/2 on a vacuum input.
double success_prob_qs(const ProtocolParams& params);

/// Builds the joint state to a cutoff where the geometric tail of the
/// trace, ratio q = (r_c lambda_a)^2 / (1 - t_c^2 lambda_e^2), drops below
/// tol.  All removable 1/r_c^2 factors are pre-cancelled, so t_c = 1 is a
/// valid input.
JointState joint_state(const ProtocolParams& params, double tol = 1e-15);

/// Reduced states from their closed forms (not by summing the joint
/// arrays; the partial-trace identity gamma_a[n] = sigma00[n] + sigma11[n]
/// is a cross-check, exercised in the tests).
ReducedStates reduced_states(const JointState& joint,
                             const ProtocolParams& params);

/// Probability density of a homodyne measurement of Bob's quadrature,
///   f(x) = sqrt(2/pi) exp(-2x^2) (gamma_b0 + 4 gamma_b1 x^2).
double homodyne_pdf(double x, const ReducedStates& reduced);

/// Fidelity between Alice's and Bob's reduced states,
///   F = (sqrt(gamma_a[0] gamma_b0) + sqrt(gamma_a[1] gamma_b1))^2.
/// Exact for these commuting states: Bob's support is {|0>, |1>}.
double fidelity(const ReducedStates& reduced);

}  // namespace cvqkd
