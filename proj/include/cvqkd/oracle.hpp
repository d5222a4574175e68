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
 * Brute-force dense Fock-space simulator used to validate every closed
 * form in this library on small instances.  It is intentionally slow and
 * simple (dense tensors, explicit beam-splitter unitaries, no symmetry
 * exploitation) to stay independent of the analytic code path.
 */

#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "cvqkd/states.hpp"

namespace cvqkd::oracle {

/// Dense multi-mode pure state; amplitudes indexed row-major by per-mode
/// photon numbers.
struct DenseState {
    Eigen::VectorXd amplitudes;
    std::vector<int> dims;  ///< per-mode dimension, cutoff + 1
    std::vector<std::string> mode_labels;

    double norm_sq() const { return amplitudes.squaredNorm(); }
    std::size_t flat_index(std::span<const int> occupation) const;
    double amplitude(std::span<const int> occupation) const;
};

/// Two-mode beam-splitter unitary on the truncated Fock space, built by
/// exponentiating the generator a1^+ a2 - a2^+ a1 and fixing the sign
/// convention to the single-photon matrix [[t, r], [r, -t]]:
///   <1,0|B|1,0> = t,  <0,1|B|1,0> = r,  <0,1|B|0,1> = -t.
/// Photon-number conserving; unitary on each block with total photon
/// number <= min(cutoff1, cutoff2).
Eigen::MatrixXd beam_splitter_matrix(int cutoff1, int cutoff2, double t);
Eigen::MatrixXd beam_splitter_matrix(int cutoff, double t);

/// Applies a two-mode unitary (indexed like beam_splitter_matrix) to the
/// given modes of a dense state.
void apply_two_mode(DenseState& state, const Eigen::MatrixXd& u, int mode1,
                    int mode2);

/// Four-mode state after the channel beam splitter: two TMSV sources on
/// modes (A, B) and (E1, E2), then the channel splitter on (B, E2).
DenseState channel_state(const ProtocolParams& params, int cutoff);

/// Everything the explicit scissor circuit produces for one parameter
/// point: heralded state statistics plus the dense joint density matrix.
struct ScissorRun {
    std::vector<double> sigma00;  ///< <n,0|rho|n,0>, n = 0..cutoff
    std::vector<double> sigma11;  ///< <n,1|rho|n,1>
    std::vector<double> sigma01;  ///< <n,0|rho|n+1,1>, n = 0..cutoff-1
    double p_q = 0.0;             ///< probability of the herald pattern
    double p_herald_alternate = 0.0;  ///< mirrored detector pattern
    double p_herald_dark = 0.0;       ///< both detectors dark
    Eigen::MatrixXd rho_ab;       ///< dense rho on (A, Bob), dim 2(cutoff+1)
    double fidelity = 1.0;        ///< Uhlmann fidelity of the reduced states
    double entropy_ab = 0.0;      ///< bits, dense eigendecomposition
};

/// Runs the explicit circuit: both TMSV sources, the channel splitter,
/// the scissor (ancilla photon, transmission-t_s splitter, balanced
/// splitter, single-photon detection), then traces out the eavesdropper.
/// Rejects cutoffs whose truncation tail exceeds 1e-10, with a hint for
/// the required cutoff.
ScissorRun simulate_protocol(const ProtocolParams& params, int cutoff);

/// Entropy in bits from a full eigendecomposition; rejects non-symmetric
/// input or trace away from 1 by more than 1e-10.
double dense_entropy(const Eigen::MatrixXd& rho);

}  // namespace cvqkd::oracle
