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

#include "cvqkd/scissor.hpp"

#include <cmath>
#include <stdexcept>

namespace cvqkd {

namespace {

constexpr double kPi = 3.14159265358979323846;

// exact factorials up to 20!, log-gamma beyond
double sqrt_fact_ratio(int num1, int den1, int den2) {
    // sqrt(num1! / (den1! den2!))
    if (num1 <= 20) {
        double f = 1.0, g = 1.0, h = 1.0;
        for (int i = 2; i <= num1; ++i) f *= i;
        for (int i = 2; i <= den1; ++i) g *= i;
        for (int i = 2; i <= den2; ++i) h *= i;
        return std::sqrt(f / (g * h));
    }
    return std::exp(0.5 * (std::lgamma(num1 + 1.0) - std::lgamma(den1 + 1.0) -
                           std::lgamma(den2 + 1.0)));
}

double ipow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

}  // namespace

double success_prob_qs(const ProtocolParams& params) {
    const double la = params.effective_lambda_a();
    const double le = params.lambda_e;
    const double la2 = la * la;
    const double le2 = le * le;
    const double ts2 = params.t_s * params.t_s;
    const double tc2 = params.t_c * params.t_c;
    const double rc2 = 1.0 - tc2;
    const double a1 = (1.0 - la2) * (1.0 - le2);
    const double m = 1.0 - rc2 * la2 - tc2 * le2;
    return a1 * (ts2 * a1 + tc2 * la2 + (rc2 - la2) * le2) / (2.0 * m * m);
}

VwPair vw_amplitudes(int n_a, int n_e, const ProtocolParams& params) {
    if (n_a < 0 || n_e < 0)
        throw std::invalid_argument("vw_amplitudes: negative photon number");
    const double la = params.effective_lambda_a();
    const double le = params.lambda_e;
    const double t_c = params.t_c;
    const double r_c = params.r_c();
    const double t_s = params.t_s;
    const double g = params.gain();
    const double p_q = success_prob_qs(params);

    const double la_n = (n_a == 0) ? 1.0 : ipow(la, n_a);
    const double le_n = (n_e == 0) ? 1.0 : ipow(le, n_e);
    const double a1 = (1.0 - la * la) * (1.0 - le * le);
    const int sgn_e = (n_e % 2 != 0) ? -1 : 1;

    VwPair out;
    out.v = t_s * sgn_e * ipow(t_c, n_e) * ipow(r_c, n_a) * la_n * le_n *
            sqrt_fact_ratio(n_a + n_e, n_a, n_e) * std::sqrt(a1 / (2.0 * p_q));

    // (-t_c)^(n_e-1) r_c^(n_a-1) (n_e r_c^2 - n_a t_c^2), split so each
    // summand only carries nonnegative powers where its coefficient is
    // nonzero; w is finite at n_a = 0 and at t_c = 1, and w = 0 at
    // n_a = n_e = 0
    double bracket = 0.0;
    if (n_e >= 1) bracket += n_e * ipow(t_c, n_e - 1) * ipow(r_c, n_a + 1);
    if (n_a >= 1) bracket -= n_a * ipow(t_c, n_e + 1) * ipow(r_c, n_a - 1);
    const int sgn_w = (n_e % 2 == 0) ? -1 : 1;  // (-1)^(n_e-1)
    if (n_a + n_e == 0) {
        out.w = 0.0;
    } else {
        out.w = g * t_s * sgn_w * bracket * la_n * le_n *
                sqrt_fact_ratio(n_a + n_e - 1, n_a, n_e) *
                std::sqrt(a1 / (2.0 * p_q));
    }
    return out;
}

JointState joint_state(const ProtocolParams& params, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("joint_state: tol must be > 0");

    const double la = params.effective_lambda_a();
    const double le = params.lambda_e;
    const double la2 = la * la;
    const double le2 = le * le;
    const double ts2 = params.t_s * params.t_s;
    const double tc2 = params.t_c * params.t_c;
    const double rc2 = 1.0 - tc2;
    const double g2 = (1.0 - ts2) / ts2;
    const double t_c = params.t_c;
    const double g = std::sqrt(g2);

    const double a1 = (1.0 - la2) * (1.0 - le2);
    const double d = 1.0 - tc2 * le2;
    const double p_q = success_prob_qs(params);
    const double q = rc2 * la2 / d;

    int cutoff = 2;
    if (q > 0.0) {
        cutoff = static_cast<int>(
            std::ceil(std::log(tol * (1.0 - q)) / std::log(q)));
        if (cutoff < 2) cutoff = 2;
    }

    JointState js;
    js.cutoff = cutoff;
    js.sigma00.resize(cutoff + 1);
    js.sigma11.resize(cutoff + 1);
    js.sigma01.resize(cutoff);

    const double inv_2pq = 1.0 / (2.0 * p_q);
    const double inv_d = 1.0 / d;
    const double one_le2 = 1.0 - le2;

    // running powers: qn = q^n, u = r_c^(2n-2) la^(2n) (n >= 1),
    // v = r_c^(2n+2) la^(2n), w = r_c^(2n) la^(2n+1), dp = d^-(n+2)
    double qn = 1.0;
    double u = la2;
    double v = rc2;
    double w = la;
    double dp = inv_d * inv_d;

    for (int n = 0; n <= cutoff; ++n) {
        js.sigma00[n] = ts2 * a1 * qn * inv_2pq * inv_d;
        const double lin = (n >= 1) ? n * tc2 * one_le2 * one_le2 * u : 0.0;
        js.sigma11[n] = g2 * ts2 * a1 * (lin + le2 * v) * inv_2pq * dp;
        if (n < cutoff) {
            js.sigma01[n] = g * ts2 * t_c * std::sqrt(n + 1.0) * (1.0 - la2) *
                            one_le2 * one_le2 * w * inv_2pq * dp;
        }
        qn *= q;
        if (n >= 1) u *= rc2 * la2;
        v *= rc2 * la2;
        w *= rc2 * la2;
        dp *= inv_d;
    }

    // Analytic trace tail.  In terms of q^n the series collapse:
    //   sigma00[n]                 = c00 q^n
    //   sigma11[n] (n-independent) = c11 q^n
    //   sigma11[n] (linear part)   = c1l n q^n
    // and sum_{n>N} q^n = q^(N+1)/(1-q),
    //     sum_{n>N} n q^n = q^(N+1) ((N+1)(1-q) + q)/(1-q)^2.
    js.tail_bound = 0.0;
    if (q > 0.0) {
        const double one_m_q = 1.0 - q;
        const double qn1 = qn;  // q^(N+1) after the loop
        const double c00 = ts2 * a1 * inv_2pq * inv_d;
        const double c11 = g2 * ts2 * a1 * le2 * rc2 * inv_2pq / (d * d);
        const double c1l =
            g2 * ts2 * a1 * tc2 * one_le2 * one_le2 * inv_2pq / (rc2 * d * d);
        const double tail_geo = qn1 / one_m_q;
        const double tail_lin =
            qn1 * ((cutoff + 1) * one_m_q + q) / (one_m_q * one_m_q);
        js.tail_bound = (c00 + c11) * tail_geo + c1l * tail_lin;
    }
    return js;
}

ReducedStates reduced_states(const JointState& joint,
                             const ProtocolParams& params) {
    const double la = params.effective_lambda_a();
    const double le = params.lambda_e;
    const double la2 = la * la;
    const double le2 = le * le;
    const double ts2 = params.t_s * params.t_s;
    const double tc2 = params.t_c * params.t_c;
    const double rc2 = 1.0 - tc2;
    const double g2 = (1.0 - ts2) / ts2;

    const double a1 = (1.0 - la2) * (1.0 - le2);
    const double d = 1.0 - tc2 * le2;
    const double m = 1.0 - rc2 * la2 - tc2 * le2;
    const double p_q = success_prob_qs(params);
    const double inv_2pq = 1.0 / (2.0 * p_q);
    const double one_le2 = 1.0 - le2;

    ReducedStates rs;
    rs.gamma_a.resize(joint.cutoff + 1);

    // same pre-cancelled running powers as in joint_state
    double u = la2;          // r_c^(2n-2) la^(2n), n >= 1
    double v = rc2;          // r_c^(2n+2) la^(2n)
    double s = 1.0;          // r_c^(2n) la^(2n)
    double dp = 1.0 / (d * d);
    for (int n = 0; n <= joint.cutoff; ++n) {
        const double lin =
            (n >= 1) ? n * g2 * ts2 * tc2 * one_le2 * one_le2 * u : 0.0;
        rs.gamma_a[n] =
            a1 * (lin + le2 * v + ts2 * one_le2 * s) * inv_2pq * dp;
        if (n >= 1) u *= rc2 * la2;
        v *= rc2 * la2;
        s *= rc2 * la2;
        dp /= d;
    }

    rs.gamma_b0 = ts2 * a1 * inv_2pq / m;
    rs.gamma_b1 = g2 * ts2 * a1 * (tc2 * la2 + le2 * (rc2 - la2)) * inv_2pq /
                  (m * m);
    return rs;
}

double homodyne_pdf(double x, const ReducedStates& reduced) {
    return std::sqrt(2.0 / kPi) * std::exp(-2.0 * x * x) *
           (reduced.gamma_b0 + 4.0 * reduced.gamma_b1 * x * x);
}

double fidelity(const ReducedStates& reduced) {
    const double g0 = reduced.gamma_a.empty() ? 0.0 : reduced.gamma_a[0];
    const double g1 = reduced.gamma_a.size() > 1 ? reduced.gamma_a[1] : 0.0;
    const double r = std::sqrt(g0 * reduced.gamma_b0) +
                     std::sqrt(g1 * reduced.gamma_b1);
    return r * r;
}

}  // namespace cvqkd
