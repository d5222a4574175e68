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
 * Post-channel Fock amplitudes.
 *
 * The channel beam splitter (transmission t_c, reflection r_c) mixes the
 * traveling arm of Alice's two-mode squeezed state with one arm of the
 * eavesdropper's two-mode squeezed state.  The resulting amplitude for
 * photon numbers (n_a, n_b, n_e) factors into squeezing weights, binomial
 * routing factors and a terminating Gauss hypergeometric sum in
 * z = -t_c^2/r_c^2.  Two index regimes have different closed forms:
 *
 *   n_b <= n_e:
 *     sqrt((1-la^2)(1-le^2)) la^n_a le^n_e (-t_c)^(n_e-n_b) r_c^(n_a+n_b)
 *       * C(n_e, n_b) sqrt(n_b! (n_a+n_e-n_b)! / (n_a! n_e!))
 *       * 2F1(-n_a, -n_b; 1+n_e-n_b; z)
 *
 *   n_e < n_b <= n_a+n_e:
 *     sqrt((1-la^2)(1-le^2)) la^n_a le^n_e t_c^(n_b-n_e) r_c^(n_a-n_b+2n_e)
 *       * C(n_a, n_b-n_e) sqrt(n_b! (n_a+n_e-n_b)! / (n_a! n_e!))
 *       * 2F1(n_b-n_a-n_e, -n_e; 1+n_b-n_e; z)
 *
 * z diverges as t_c -> 1, but every series term carries enough powers of
 * r_c to stay finite; near that limit the r_c powers are folded into the
 * sum analytically (see theta_series below) instead of evaluating 2F1 at
 * huge |z|.
 */

#include "cvqkd/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace cvqkd {

namespace {

// exact factorials up to 20! (largest fitting double without rounding)
constexpr int kExactFactMax = 20;
const double kFact[kExactFactMax + 1] = {
    1.0,
    1.0,
    2.0,
    6.0,
    24.0,
    120.0,
    720.0,
    5040.0,
    40320.0,
    362880.0,
    3628800.0,
    39916800.0,
    479001600.0,
    6227020800.0,
    87178291200.0,
    1307674368000.0,
    20922789888000.0,
    355687428096000.0,
    6402373705728000.0,
    121645100408832000.0,
    2432902008176640000.0,
};

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

// sqrt(n1! n2! / (d1! d2!)), exact arithmetic for small arguments,
// log-gamma beyond to avoid overflow
double sqrt_factorial_ratio(int n1, int n2, int d1, int d2) {
    if (n1 <= kExactFactMax && n2 <= kExactFactMax && d1 <= kExactFactMax &&
        d2 <= kExactFactMax) {
        return std::sqrt(kFact[n1] * kFact[n2] / (kFact[d1] * kFact[d2]));
    }
    return std::exp(0.5 * (log_factorial(n1) + log_factorial(n2) -
                           log_factorial(d1) - log_factorial(d2)));
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    if (n <= kExactFactMax) return kFact[n] / (kFact[k] * kFact[n - k]);
    return std::exp(log_factorial(n) - log_factorial(k) -
                    log_factorial(n - k));
}

double ipow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

// sum_k (a)_k (b)_k / ((c)_k k!) * (-1)^k t_c^(2k) r_c^(p-2k), the
// hypergeometric series with the leading r_c^p distributed through it.
// Every exponent p-2k is nonnegative on the valid index range, so the
// expression stays exact at r_c = 0.
double theta_series(int a, int b, int c, double tc2, double r_c, int p) {
    long double sum = ipow(r_c, p);
    long double poch = 1.0L;  // (a)_k (b)_k / ((c)_k k!) * (-1)^k t_c^(2k)
    for (int k = 0;; ++k) {
        if (a + k == 0 || b + k == 0) break;
        poch *= static_cast<long double>(a + k) * (b + k) /
                (static_cast<long double>(c + k) * (k + 1));
        poch *= -static_cast<long double>(tc2);
        sum += poch * ipow(r_c, p - 2 * (k + 1));
    }
    return static_cast<double>(sum);
}

}  // namespace

double hyp2f1_terminating(int a, int b, int c, double z) {
    if (a > 0)
        throw std::invalid_argument(
            "hyp2f1_terminating: a must be a nonpositive integer");
    if (c < 1)
        throw std::invalid_argument("hyp2f1_terminating: c must be >= 1");
    long double sum = 1.0L;
    long double term = 1.0L;
    for (int k = 0; k < -a; ++k) {
        if (b + k == 0) break;
        term *= static_cast<long double>(a + k) * (b + k) /
                (static_cast<long double>(c + k) * (k + 1));
        term *= static_cast<long double>(z);
        sum += term;
    }
    return static_cast<double>(sum);
}

double theta(const FockIndexTriple& idx, const ProtocolParams& params) {
    const int n_a = idx.n_a;
    const int n_b = idx.n_b;
    const int n_e = idx.n_e;
    if (n_a < 0 || n_b < 0 || n_e < 0)
        throw std::invalid_argument("theta: negative photon number");
    if (n_b > n_a + n_e) return 0.0;

    const double la = params.effective_lambda_a();
    const double le = params.lambda_e;
    const double t_c = params.t_c;
    const double r_c = params.r_c();
    const double tc2 = t_c * t_c;
    const double rc2 = r_c * r_c;

    if (le == 0.0 && n_e > 0) return 0.0;
    if (la == 0.0 && n_a > 0) return 0.0;

    const double pref = std::sqrt((1.0 - la * la) * (1.0 - le * le)) *
                        ipow(la, n_a) * ipow(le, n_e);
    const double sfr = sqrt_factorial_ratio(n_b, n_a + n_e - n_b, n_a, n_e);

    // near t_c = 1 the hypergeometric argument blows up; use the form with
    // the r_c powers folded into the series
    const bool factored = rc2 < 1e-6;

    if (n_b <= n_e) {
        const int sign = ((n_e - n_b) % 2 != 0) ? -1 : 1;
        const double common =
            pref * sign * ipow(t_c, n_e - n_b) * binomial(n_e, n_b) * sfr;
        if (factored) {
            return common *
                   theta_series(-n_a, -n_b, 1 + n_e - n_b, tc2, r_c, n_a + n_b);
        }
        return common * ipow(r_c, n_a + n_b) *
               hyp2f1_terminating(-n_a, -n_b, 1 + n_e - n_b, -tc2 / rc2);
    }

    const double common =
        pref * ipow(t_c, n_b - n_e) * binomial(n_a, n_b - n_e) * sfr;
    const int p = n_a - n_b + 2 * n_e;
    if (factored) {
        return common *
               theta_series(n_b - n_a - n_e, -n_e, 1 + n_b - n_e, tc2, r_c, p);
    }
    return common * ipow(r_c, p) *
           hyp2f1_terminating(n_b - n_a - n_e, -n_e, 1 + n_b - n_e, -tc2 / rc2);
}

}  // namespace cvqkd
