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

#include "cvqkd/states.hpp"

namespace cvqkd {

/// Photon numbers labeling one amplitude of the post-channel four-mode
/// state: n_a on Alice's retained mode, n_b on the channel output, n_e on
/// the cloner's retained mode.  The fourth mode holds n_a + n_e - n_b.
struct FockIndexTriple {
    int n_a;
    int n_b;
    int n_e;
};

/// Terminating Gauss hypergeometric series 2F1(a, b; c; z) for a a
/// nonpositive integer, evaluated as the exact finite sum
///
///            |a|   (a)_k (b)_k   z^k
///     sum   ----- ------------- -----
///           k=0       (c)_k       k!
///
/// with extended-precision accumulation.  c must be a positive integer so
/// no Pochhammer factor in the denominator vanishes before the series
/// terminates.  Nonterminating parameter combinations are rejected.
double hyp2f1_terminating(int a, int b, int c, double z);

/// Amplitude of the four-mode state produced by mixing a two-mode squeezed
/// source with one arm of an entangling cloner on the channel beam
/// splitter.  Zero for n_b outside [0, n_a + n_e]; exact (pre-cancelled)
/// limit at t_c = 1.  Negative indices are rejected.
double theta(const FockIndexTriple& idx, const ProtocolParams& params);

}  // namespace cvqkd
