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

#include <cmath>
#include <doctest.h>
#include <stdexcept>
#include <vector>

#include "cvqkd/channel.hpp"
#include "cvqkd/oracle.hpp"

using namespace cvqkd;

namespace {

// independent reference: plain Pochhammer summation in extended precision
long double hyp2f1_reference(int a, int b, int c, long double z) {
    long double sum = 0.0L;
    for (int k = 0; k <= -a; ++k) {
        long double term = 1.0L;
        for (int i = 0; i < k; ++i) {
            term *= (a + i) * (b + i);
            term /= (c + i);
            term /= (i + 1);
            term *= z;
        }
        sum += term;
    }
    return sum;
}

double ipow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

}  // namespace

TEST_CASE("terminating hypergeometric sum") {
    CHECK(hyp2f1_terminating(0, 7, 3, 123.4) == 1.0);
    CHECK(hyp2f1_terminating(-1, -1, 1, 2.0) == doctest::Approx(3.0));
    CHECK(hyp2f1_terminating(-3, -2, 2, -0.5) ==
          doctest::Approx(-0.25).epsilon(1e-15));
    CHECK(hyp2f1_terminating(-4, 3, 2, 0.35) ==
          doctest::Approx(-0.01373125).epsilon(1e-13));
    CHECK(hyp2f1_terminating(-6, -5, 3, -1.75) ==
          doctest::Approx(-4.919921875).epsilon(1e-13));

    // series cut short by the second parameter
    CHECK(hyp2f1_terminating(-9, -1, 4, 2.0) ==
          doctest::Approx(1.0 + (-9.0) * (-1.0) / 4.0 * 2.0).epsilon(1e-15));

    for (int a = 0; a >= -12; --a)
        for (int b : {-7, -2, 0, 3})
            for (int c : {1, 2, 5})
                for (double z : {-3.0, -0.4, 0.3, 1.9}) {
                    const double want = static_cast<double>(
                        hyp2f1_reference(a, b, c, z));
                    CHECK(hyp2f1_terminating(a, b, c, z) ==
                          doctest::Approx(want).epsilon(1e-12));
                }

    CHECK_THROWS_AS(hyp2f1_terminating(1, -1, 1, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(hyp2f1_terminating(-1, -1, 0, 0.5), std::invalid_argument);
}

TEST_CASE("post-channel amplitudes, closed cases") {
    const ProtocolParams p(0.6, 0.3, 0.0, 0.8);
    const double root = std::sqrt(1.0 - 0.36);

    SUBCASE("no cloner photons, all source photons reflected") {
        for (int n = 0; n <= 5; ++n) {
            CHECK(theta({n, 0, 0}, p) ==
                  doctest::Approx(root * ipow(0.6, n) * ipow(p.r_c(), n))
                      .epsilon(1e-14));
        }
    }

    SUBCASE("single photon transmitted") {
        CHECK(theta({1, 1, 0}, p) ==
              doctest::Approx(root * 0.6 * 0.8).epsilon(1e-14));
    }

    SUBCASE("pure loss keeps binomial splitting amplitudes") {
        const double t = 0.8, r = p.r_c();
        for (int na = 0; na <= 6; ++na)
            for (int nb = 0; nb <= na; ++nb) {
                const double binom =
                    std::tgamma(na + 1.0) /
                    (std::tgamma(nb + 1.0) * std::tgamma(na - nb + 1.0));
                const double want = root * ipow(0.6, na) * std::sqrt(binom) *
                                    ipow(t, nb) * ipow(r, na - nb);
                CHECK(theta({na, nb, 0}, p) ==
                      doctest::Approx(want).epsilon(1e-12));
            }
        // with no cloner excitation, nothing populates n_e > 0
        CHECK(theta({2, 1, 1}, p) == 0.0);
    }

    SUBCASE("out-of-range and invalid indices") {
        const ProtocolParams noisy(0.6, 0.3, 0.2, 0.8);
        CHECK(theta({1, 4, 1}, noisy) == 0.0);
        CHECK_THROWS_AS(theta({-1, 0, 0}, noisy), std::invalid_argument);
    }
}

TEST_CASE("post-channel amplitudes against the dense splitter") {
    const std::vector<ProtocolParams> points = {
        ProtocolParams(0.3, 0.2, 0.1, 0.8),
        ProtocolParams(0.4, 0.3, 0.2, 0.6),
        ProtocolParams(0.25, 0.5, 0.3, 0.95),
        ProtocolParams(0.2, 0.1, 0.05, 0.35),
    };
    for (const auto& p : points) {
        const int cutoff = 12;
        const auto dense = oracle::channel_state(p, cutoff);
        for (int na = 0; na <= 6; ++na)
            for (int ne = 0; ne <= 6 && na + ne <= cutoff; ++ne)
                for (int nb = 0; nb <= na + ne; ++nb) {
                    const int occ[4] = {na, nb, ne, na + ne - nb};
                    CHECK(std::abs(theta({na, nb, ne}, p) -
                                   dense.amplitude(occ)) < 1e-10);
                }
    }
}

TEST_CASE("amplitude branch overlap at n_b = n_e") {
    // both closed forms collapse to the same expression at the boundary;
    // evaluate the upper branch explicitly and compare
    const ProtocolParams p(0.5, 0.2, 0.3, 0.7);
    const double root = std::sqrt((1.0 - 0.25) * (1.0 - 0.09));
    const double z = -0.49 / (1.0 - 0.49);
    for (int na = 0; na <= 8; ++na)
        for (int ne = 1; ne <= 6; ++ne) {
            // binomial and factorial-ratio factors are all 1 here
            const double upper = root * ipow(0.5, na) * ipow(0.3, ne) *
                                 ipow(p.r_c(), na + ne) *
                                 hyp2f1_terminating(-na, -ne, 1, z);
            CHECK(theta({na, ne, ne}, p) ==
                  doctest::Approx(upper).epsilon(1e-12));
        }
}

TEST_CASE("amplitude normalization and the lossless limit") {
    SUBCASE("squared amplitudes sum to one") {
        for (const auto& p :
             {ProtocolParams(0.4, 0.2, 0.2, 0.75),
              ProtocolParams(0.5, 0.3, 0.1, 0.45),
              ProtocolParams(0.3, 0.1, 0.3, 1.0)}) {
            const int na_max = 28, ne_max = 28;
            double sum = 0.0;
            for (int na = 0; na <= na_max; ++na)
                for (int ne = 0; ne <= ne_max; ++ne)
                    for (int nb = 0; nb <= na + ne; ++nb) {
                        const double th = theta({na, nb, ne}, p);
                        sum += th * th;
                    }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
        }
    }

    SUBCASE("absent splitter pins every photon number") {
        const ProtocolParams p(0.35, 0.2, 0.25, 1.0);
        const double root = std::sqrt((1.0 - 0.1225) * (1.0 - 0.0625));
        for (int na = 0; na <= 5; ++na)
            for (int ne = 0; ne <= 5; ++ne)
                for (int nb = 0; nb <= na + ne; ++nb) {
                    const double want =
                        (nb == na)
                            ? root * ipow(0.35, na) * ipow(0.25, ne) *
                                  ((ne % 2 != 0) ? -1.0 : 1.0)
                            : 0.0;
                    CHECK(theta({na, nb, ne}, p) ==
                          doctest::Approx(want).epsilon(1e-12));
                }
    }
}

TEST_CASE("frozen amplitude value") {
    // reference from a 40-digit evaluation of the closed form
    const ProtocolParams p(0.3, 0.2, 0.1, 0.8);
    CHECK(theta({2, 1, 1}, p) ==
          doctest::Approx(-0.00471541456518936413).epsilon(1e-13));
}
