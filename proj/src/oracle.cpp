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

#include "cvqkd/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>

namespace cvqkd::oracle {

namespace {

Eigen::MatrixXd annihilation(int dim) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(double(n));
    return a;
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
                a(i, j) * b;
    return out;
}

int required_cutoff(double lambda, double tail_tol) {
    if (lambda <= 0.0) return 1;
    return static_cast<int>(
        std::ceil(std::log(tail_tol) / (2.0 * std::log(lambda)) - 1.0));
}

}  // namespace

std::size_t DenseState::flat_index(std::span<const int> occupation) const {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < dims.size(); ++k)
        idx = idx * dims[k] + occupation[k];
    return idx;
}

double DenseState::amplitude(std::span<const int> occupation) const {
    for (std::size_t k = 0; k < dims.size(); ++k)
        if (occupation[k] < 0 || occupation[k] >= dims[k]) return 0.0;
    return amplitudes[static_cast<Eigen::Index>(flat_index(occupation))];
}

Eigen::MatrixXd beam_splitter_matrix(int cutoff1, int cutoff2, double t) {
    if (cutoff1 < 1 || cutoff2 < 1)
        throw std::invalid_argument("beam_splitter_matrix: cutoff must be >= 1");
    if (!(t >= 0.0 && t <= 1.0))
        throw std::invalid_argument("beam_splitter_matrix: t must be in [0, 1]");
    const int d1 = cutoff1 + 1;
    const int d2 = cutoff2 + 1;
    const Eigen::MatrixXd a1 =
        kron(annihilation(d1), Eigen::MatrixXd::Identity(d2, d2));
    const Eigen::MatrixXd a2 =
        kron(Eigen::MatrixXd::Identity(d1, d1), annihilation(d2));
    const Eigen::MatrixXd generator =
        a1.transpose() * a2 - a2.transpose() * a1;
    const double r = std::sqrt(std::max(0.0, 1.0 - t * t));
    const double phi = std::atan2(r, t);
    Eigen::MatrixXd b = (-phi * generator).exp();
    // parity flip on mode 2 pins the single-photon convention [[t,r],[r,-t]]
    for (int n1 = 0; n1 < d1; ++n1)
        for (int n2 = 1; n2 < d2; n2 += 2) b.col(n1 * d2 + n2) *= -1.0;
    return b;
}

Eigen::MatrixXd beam_splitter_matrix(int cutoff, double t) {
    return beam_splitter_matrix(cutoff, cutoff, t);
}

void apply_two_mode(DenseState& state, const Eigen::MatrixXd& u, int mode1,
                    int mode2) {
    const int n_modes = static_cast<int>(state.dims.size());
    const int d1 = state.dims[mode1];
    const int d2 = state.dims[mode2];
    if (u.rows() != d1 * d2 || u.cols() != d1 * d2)
        throw std::invalid_argument("apply_two_mode: dimension mismatch");

    std::vector<std::size_t> stride(n_modes, 1);
    for (int k = n_modes - 2; k >= 0; --k)
        stride[k] = stride[k + 1] * state.dims[k + 1];

    const std::size_t total = static_cast<std::size_t>(state.amplitudes.size());
    Eigen::VectorXd fiber(d1 * d2);
    std::vector<int> occ(n_modes);
    for (std::size_t base = 0; base < total; ++base) {
        std::size_t rem = base;
        for (int k = 0; k < n_modes; ++k) {
            occ[k] = static_cast<int>(rem / stride[k]);
            rem %= stride[k];
        }
        if (occ[mode1] != 0 || occ[mode2] != 0) continue;
        for (int i = 0; i < d1; ++i)
            for (int j = 0; j < d2; ++j)
                fiber[i * d2 + j] = state.amplitudes[static_cast<Eigen::Index>(
                    base + i * stride[mode1] + j * stride[mode2])];
        fiber = u * fiber;
        for (int i = 0; i < d1; ++i)
            for (int j = 0; j < d2; ++j)
                state.amplitudes[static_cast<Eigen::Index>(
                    base + i * stride[mode1] + j * stride[mode2])] =
                    fiber[i * d2 + j];
    }
}

DenseState channel_state(const ProtocolParams& params, int cutoff) {
    if (cutoff < 1)
        throw std::invalid_argument("channel_state: cutoff must be >= 1");
    const int d = cutoff + 1;
    DenseState s;
    s.dims = {d, d, d, d};
    s.mode_labels = {"A", "B", "E1", "E2"};
    s.amplitudes = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d) * d * d * d);

    const double la = params.effective_lambda_a();
    const double le = params.lambda_e;
    const double ca = std::sqrt(1.0 - la * la);
    const double ce = std::sqrt(1.0 - le * le);
    double wa = ca;
    for (int na = 0; na < d; ++na) {
        double we = ce;
        for (int ne = 0; ne < d; ++ne) {
            const int occ[4] = {na, na, ne, ne};
            s.amplitudes[static_cast<Eigen::Index>(s.flat_index(occ))] = wa * we;
            we *= le;
        }
        wa *= la;
    }
    apply_two_mode(s, beam_splitter_matrix(cutoff, cutoff, params.t_c), 1, 3);
    return s;
}

ScissorRun simulate_protocol(const ProtocolParams& params, int cutoff) {
    constexpr double kTailTol = 1e-10;
    const double lmax =
        std::max(params.effective_lambda_a(), params.lambda_e);
    if (std::pow(lmax, 2.0 * (cutoff + 1)) >= kTailTol) {
        throw std::invalid_argument(
            "simulate_protocol: truncation tail above 1e-10; need cutoff >= " +
            std::to_string(required_cutoff(lmax, kTailTol)));
    }

    const int d = cutoff + 1;
    // modes: A, B, E1, E2, P (ancilla photon -> detector arm), W (output)
    DenseState s;
    s.dims = {d, d, d, d, 2, 2};
    s.mode_labels = {"A", "B", "E1", "E2", "P", "W"};
    s.amplitudes =
        Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d) * d * d * d * 4);

    const double la = params.effective_lambda_a();
    const double le = params.lambda_e;
    const double ca = std::sqrt(1.0 - la * la);
    const double ce = std::sqrt(1.0 - le * le);
    double wa = ca;
    for (int na = 0; na < d; ++na) {
        double we = ce;
        for (int ne = 0; ne < d; ++ne) {
            const int occ[6] = {na, na, ne, ne, 1, 0};
            s.amplitudes[static_cast<Eigen::Index>(s.flat_index(occ))] = wa * we;
            we *= le;
        }
        wa *= la;
    }

    // channel, then the scissor's two splitters
    apply_two_mode(s, beam_splitter_matrix(cutoff, cutoff, params.t_c), 1, 3);
    apply_two_mode(s, beam_splitter_matrix(1, 1, params.t_s), 4, 5);
    apply_two_mode(s, beam_splitter_matrix(cutoff, 1, 1.0 / std::sqrt(2.0)), 1,
                   4);

    // detector patterns on (B, P): herald on (1, 0); (0, 1) is the
    // mirrored pattern, (0, 0) is dark
    const auto pattern_norm = [&](int nb, int np) {
        double acc = 0.0;
        for (int na = 0; na < d; ++na)
            for (int ne1 = 0; ne1 < d; ++ne1)
                for (int ne2 = 0; ne2 < d; ++ne2)
                    for (int w = 0; w < 2; ++w) {
                        const int occ[6] = {na, nb, ne1, ne2, np, w};
                        const double a = s.amplitudes[static_cast<Eigen::Index>(
                            s.flat_index(occ))];
                        acc += a * a;
                    }
        return acc;
    };

    ScissorRun run;
    run.p_q = pattern_norm(1, 0);
    run.p_herald_alternate = pattern_norm(0, 1);
    run.p_herald_dark = pattern_norm(0, 0);

    // heralded state on (A, E1, E2, W), normalized
    const double inv = 1.0 / std::sqrt(run.p_q);
    std::vector<double> psi(static_cast<std::size_t>(d) * d * d * 2);
    for (int na = 0; na < d; ++na)
        for (int ne1 = 0; ne1 < d; ++ne1)
            for (int ne2 = 0; ne2 < d; ++ne2)
                for (int w = 0; w < 2; ++w) {
                    const int occ[6] = {na, 1, ne1, ne2, 0, w};
                    psi[((static_cast<std::size_t>(na) * d + ne1) * d + ne2) *
                            2 +
                        w] =
                        inv * s.amplitudes[static_cast<Eigen::Index>(
                                  s.flat_index(occ))];
                }

    // rho on (A, W) by tracing the eavesdropper, basis index n*2 + w
    run.rho_ab = Eigen::MatrixXd::Zero(2 * d, 2 * d);
    for (int na = 0; na < d; ++na)
        for (int w = 0; w < 2; ++w)
            for (int nb = 0; nb < d; ++nb)
                for (int v = 0; v < 2; ++v) {
                    double acc = 0.0;
                    for (int ne1 = 0; ne1 < d; ++ne1)
                        for (int ne2 = 0; ne2 < d; ++ne2)
                            acc += psi[((static_cast<std::size_t>(na) * d +
                                         ne1) *
                                            d +
                                        ne2) *
                                           2 +
                                       w] *
                                   psi[((static_cast<std::size_t>(nb) * d +
                                         ne1) *
                                            d +
                                        ne2) *
                                           2 +
                                       v];
                    run.rho_ab(na * 2 + w, nb * 2 + v) = acc;
                }

    run.sigma00.resize(d);
    run.sigma11.resize(d);
    run.sigma01.resize(cutoff);
    for (int n = 0; n < d; ++n) {
        run.sigma00[n] = run.rho_ab(n * 2 + 0, n * 2 + 0);
        run.sigma11[n] = run.rho_ab(n * 2 + 1, n * 2 + 1);
        if (n < cutoff) run.sigma01[n] = run.rho_ab(n * 2 + 0, (n + 1) * 2 + 1);
    }

    // reduced states and Uhlmann fidelity; Bob's support is {|0>, |1>},
    // so only Alice's matching 2x2 block can contribute
    Eigen::Matrix2d rho_b = Eigen::Matrix2d::Zero();
    Eigen::Matrix2d rho_a_block = Eigen::Matrix2d::Zero();
    for (int n = 0; n < d; ++n)
        for (int w = 0; w < 2; ++w)
            for (int v = 0; v < 2; ++v)
                rho_b(w, v) += run.rho_ab(n * 2 + w, n * 2 + v);
    for (int n = 0; n < 2; ++n)
        for (int m = 0; m < 2; ++m)
            for (int w = 0; w < 2; ++w)
                rho_a_block(n, m) += run.rho_ab(n * 2 + w, m * 2 + w);

    const auto matrix_sqrt = [](const Eigen::Matrix2d& m) {
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m);
        Eigen::Vector2d roots;
        for (int i = 0; i < 2; ++i)
            roots[i] = std::sqrt(std::max(0.0, es.eigenvalues()[i]));
        return Eigen::Matrix2d(es.eigenvectors() * roots.asDiagonal() *
                               es.eigenvectors().transpose());
    };
    const Eigen::Matrix2d sqrt_b = matrix_sqrt(rho_b);
    const Eigen::Matrix2d inner = matrix_sqrt(sqrt_b * rho_a_block * sqrt_b);
    const double tr_sqrt = inner.trace();
    run.fidelity = tr_sqrt * tr_sqrt;

    run.entropy_ab = dense_entropy(run.rho_ab);
    return run;
}

double dense_entropy(const Eigen::MatrixXd& rho) {
    if (rho.rows() != rho.cols())
        throw std::invalid_argument("dense_entropy: matrix must be square");
    if ((rho - rho.transpose()).cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("dense_entropy: non-hermitian input");
    if (std::abs(rho.trace() - 1.0) > 1e-10)
        throw std::invalid_argument("dense_entropy: trace must be 1");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rho,
                                                      Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double p = es.eigenvalues()[i];
        if (p < -1e-10)
            throw std::invalid_argument("dense_entropy: negative eigenvalue");
        if (p > 0.0) s -= p * std::log2(p);
    }
    return s;
}

}  // namespace cvqkd::oracle
