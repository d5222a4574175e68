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
 * End-to-end acceptance suite.  Each criterion prints one [PASS]/[FAIL]
 * line; the reconciliation-efficiency calibration runs first and feeds
 * every rate-dependent criterion.
 */

#include <cmath>
#include <cstdio>
#include <doctest.h>
#include <string>
#include <vector>

#include "cvqkd/keyrate.hpp"
#include "cvqkd/optimizer.hpp"
#include "cvqkd/output.hpp"
#include "cvqkd/validation.hpp"

using namespace cvqkd;

namespace {

void report(int criterion, const std::string& what, bool ok) {
    std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion,
                what.c_str());
    std::fflush(stdout);
    CHECK_MESSAGE(ok, "criterion ", criterion, ": ", what);
}

struct TableRow {
    double eps;
    double la_max, ts_max, r_max, f_max;      // maximum-range operating point
    double la_hf, ts_hf, r_hf, f_hf;          // high-fidelity operating point
    double delta_r, delta_f;                  // published percentages
};

const std::vector<TableRow> kTable = {
    {0.0, 0.815, 0.041, 288.0, 0.36, 0.359, 0.004, 265.0, 0.94, -8.0, 161.0},
    {0.001, 0.787, 0.038, 127.0, 0.27, 0.413, 0.087, 110.0, 0.93, -13.0,
     244.0},
    {0.005, 0.798, 0.085, 92.0, 0.26, 0.413, 0.182, 76.0, 0.93, -17.0, 258.0},
    {0.01, 0.819, 0.121, 78.0, 0.23, 0.423, 0.257, 62.0, 0.93, -21.0, 304.0},
    {0.05, 0.849, 0.246, 47.0, 0.25, 0.473, 0.464, 35.0, 0.92, -26.0, 268.0},
};

struct Calibration {
    double beta;
    double range_km;
    bool within_window;
};

// criterion 1 protocol: sweep the beta candidates at the pure-loss
// optimum and keep the one whose range lands closest to 288 km
const Calibration& calibration() {
    static const Calibration cal = [] {
        Calibration out{1.0, 0.0, false};
        double best_err = -1.0;
        for (double beta : {0.90, 0.95, 0.98, 1.00}) {
            RangeSearchConfig cfg;
            cfg.beta = beta;
            const RangeResult r = find_range(0.815, 0.041, 0.0, cfg);
            const double err = std::abs(r.range_km - 288.0);
            std::printf("  calibration: beta %.2f -> range %.2f km\n", beta,
                        r.range_km);
            if (best_err < 0.0 || err < best_err) {
                best_err = err;
                out.beta = beta;
                out.range_km = r.range_km;
            }
        }
        out.within_window = best_err <= 10.0;
        std::printf("  calibration: selected beta = %.2f\n", out.beta);
        return out;
    }();
    return cal;
}

double fidelity_at(double la, double ts, double eps, double l) {
    const auto p = ProtocolParams::from_noise_and_distance(la, ts, eps, l);
    return fidelity(reduced_states(joint_state(p), p));
}

}  // namespace

TEST_CASE("criterion 1: reconciliation-efficiency calibration") {
    const Calibration& cal = calibration();
    if (!cal.within_window) {
        // contract: publish the whole rate curve when calibration misses
        std::printf("  calibration missed 288 +- 10 km; K(L) curve at beta "
                    "%.2f follows\n",
                    cal.beta);
        for (double l = 1.0; l <= 310.0; l += 5.0) {
            const auto p = ProtocolParams::from_noise_and_distance(
                0.815, 0.041, 0.0, l, cal.beta);
            std::printf("  L=%.0f K=%.6e\n", l, secret_key_rate(p));
        }
    }
    report(1,
           "beta " + format_sig(cal.beta) + " reproduces range " +
               format_sig(cal.range_km) + " km (target 288 +- 10)",
           cal.within_window);
}

TEST_CASE("criterion 2: published fidelity cells") {
    const struct {
        double la, ts, eps, l, want;
    } cells[] = {{0.815, 0.041, 0.0, 288.0, 0.36},
                 {0.359, 0.004, 0.0, 265.0, 0.94},
                 {0.413, 0.087, 0.001, 110.0, 0.93},
                 {0.473, 0.464, 0.05, 35.0, 0.92}};
    for (const auto& c : cells) {
        const double f = fidelity_at(c.la, c.ts, c.eps, c.l);
        report(2,
               "F(" + format_sig(c.la) + ", " + format_sig(c.ts) +
                   ", eps=" + format_sig(c.eps) + ", L=" + format_sig(c.l) +
                   ") = " + format_sig(f) + " vs " + format_sig(c.want) +
                   " +- 0.01",
               std::abs(f - c.want) <= 0.01);
    }
}

TEST_CASE("criterion 3: published equivalent-noise cells") {
    const struct {
        double eps, l, tm, rec;
    } cells[] = {{0.0, 288.0, 0.0, 0.0},     {0.001, 127.0, 0.346, 0.001},
                 {0.005, 92.0, 0.341, 0.005}, {0.01, 78.0, 0.353, 0.010},
                 {0.05, 47.0, 0.385, 0.044},  {0.0, 265.0, 0.0, 0.0},
                 {0.001, 110.0, 0.157, 0.001}, {0.005, 76.0, 0.161, 0.005},
                 {0.01, 62.0, 0.164, 0.009},  {0.05, 35.0, 0.201, 0.040}};
    bool ok = true;
    double worst = 0.0;
    for (const auto& c : cells) {
        const auto n = equivalent_noises(c.eps, t_c_from_distance(c.l));
        worst = std::max({worst, std::abs(n.transmitter - c.tm),
                          std::abs(n.receiver - c.rec)});
        ok = ok && std::abs(n.transmitter - c.tm) <= 0.001 &&
             std::abs(n.receiver - c.rec) <= 0.001;
    }
    report(3,
           "all equivalent-noise cells within +- 0.001 (worst " +
               format_sig(worst) + ")",
           ok);
}

TEST_CASE("criterion 4: repeaterless-bound anchor") {
    // exact crossing of the 1e-6 floor
    double lo = 250.0, hi = 400.0;
    while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        (plob_bound(t_c_from_distance(mid)) >= 1e-6 ? lo : hi) = mid;
    }
    report(4,
           "repeaterless bound crosses 1e-6 at " + format_sig(lo) +
               " km (target 308 +- 1)",
           std::abs(lo - 308.0) <= 1.0);

    const double r = calibration().range_km;
    const double shortfall_pct = 100.0 * (308.0 - r) / 308.0;
    report(4,
           "optimized range trails the bound by " +
               format_sig(shortfall_pct) + "% (target 6.5 +- 1)",
           std::abs(shortfall_pct - 6.5) <= 1.0);
}

TEST_CASE("criterion 5: range reproduction") {
    RangeSearchConfig cfg;
    cfg.beta = calibration().beta;

    for (const TableRow& row : kTable) {
        const RangeResult r = find_range(row.la_max, row.ts_max, row.eps, cfg);
        report(5,
               "range(" + format_sig(row.la_max) + ", " +
                   format_sig(row.ts_max) + ", eps=" + format_sig(row.eps) +
                   ") = " + format_sig(r.range_km) + " km vs " +
                   format_sig(row.r_max) + " +- 3",
               r.converged && std::abs(r.range_km - row.r_max) <= 3.0);
    }
}

// Known deviation, kept failing on purpose: the exact range surface is a
// flat ridge that rises toward the lambda_a domain boundary, so its
// argmax does not sit at the published interior optimum even though the
// published ranges themselves reproduce to about a kilometer (see
// README, "Known deviation").
TEST_CASE("criterion 5: grid argmax location") {
    RangeSearchConfig cfg;
    cfg.beta = calibration().beta;

    // coarse grid argmax (step 0.01), compared against the published
    // optimum within a 5x5 grid-step window
    for (const TableRow& row : kTable) {
        GridConfig grid;
        grid.step = 0.01;
        grid.eps = row.eps;
        grid.search = cfg;
        grid.workers = 0;
        grid.checkpoint_interval = 0;
        const GridSummary summary = grid_search(grid);
        const RangeResult& best = summary.best();
        const bool near = std::abs(best.lambda_a - row.la_max) <=
                              2.5 * grid.step &&
                          std::abs(best.t_s - row.ts_max) <= 2.5 * grid.step;
        report(5,
               "grid argmax eps=" + format_sig(row.eps) + " at (" +
                   format_sig(best.lambda_a) + ", " + format_sig(best.t_s) +
                   "), range " + format_sig(best.range_km) +
                   " km; published (" + format_sig(row.la_max) + ", " +
                   format_sig(row.ts_max) + ") within 5x5 steps",
               near);
    }
}

TEST_CASE("criterion 6: trade-off percentages") {
    RangeSearchConfig cfg;
    cfg.beta = calibration().beta;
    for (const TableRow& row : kTable) {
        const RangeResult best =
            find_range(row.la_max, row.ts_max, row.eps, cfg);
        const RangeResult alt = find_range(row.la_hf, row.ts_hf, row.eps, cfg);
        const TradeOff d = tradeoff_report(best, alt);
        report(6,
               "eps=" + format_sig(row.eps) + ": dR = " +
                   format_sig(d.delta_r_pct) + "% vs " +
                   format_sig(row.delta_r) + " +- 2",
               std::abs(d.delta_r_pct - row.delta_r) <= 2.0);
        report(6,
               "eps=" + format_sig(row.eps) + ": dF = " +
                   format_sig(d.delta_f_pct) + "% vs " +
                   format_sig(row.delta_f) + " +- 10",
               std::abs(d.delta_f_pct - row.delta_f) <= 10.0);
    }
}

TEST_CASE("criterion 7: brute-force oracle battery") {
    const auto battery = load_battery(std::string(CVQKD_SOURCE_DIR) +
                                      "/data/validation_battery.json");
    const auto outcome = run_validation_battery(battery);
    for (const QuantityError& q : outcome) {
        report(7,
               q.quantity + " max error " + format_sig(q.max_abs_error) +
                   " < " + format_sig(q.tolerance),
               q.pass());
    }
}

TEST_CASE("criterion 8: property suites") {
    const std::vector<ProtocolParams> sample = {
        ProtocolParams(0.3, 0.2, 0.1, 0.8),   ProtocolParams(0.5, 0.1, 0.0, 0.6),
        ProtocolParams(0.815, 0.041, 0.0, 0.3), ProtocolParams(0.7, 0.5, 0.15, 0.9),
        ProtocolParams(0.85, 0.69, 0.1, 0.2), ProtocolParams(0.0, 0.25, 0.2, 0.7),
        ProtocolParams(0.6, 0.04, 0.02, 1.0), ProtocolParams(0.43, 0.33, 0.05, 0.5),
    };

    bool trace_ok = true, marginal_ok = true, bob_ok = true, herald_ok = true,
         pdf_ok = true, block_ok = true, fid_ok = true, araki_ok = true;
    for (const auto& p : sample) {
        const JointState js = joint_state(p);
        const ReducedStates rs = reduced_states(js, p);

        double trace = 0.0;
        for (int n = 0; n <= js.cutoff; ++n) {
            trace += js.sigma00[n] + js.sigma11[n];
            marginal_ok = marginal_ok &&
                          std::abs(rs.gamma_a[n] -
                                   (js.sigma00[n] + js.sigma11[n])) < 1e-12;
            if (n < js.cutoff)
                block_ok = block_ok &&
                           js.sigma01[n] * js.sigma01[n] <=
                               js.sigma00[n] * js.sigma11[n + 1] + 1e-15;
        }
        trace_ok = trace_ok && std::abs(trace - 1.0) <= js.tail_bound + 1e-12;
        bob_ok = bob_ok && std::abs(rs.gamma_b0 + rs.gamma_b1 - 1.0) < 1e-12;

        const int na_max =
            p.lambda_a > 0.0 ? std::max(2, tmsv_cutoff(p.lambda_a, 1e-14)) : 2;
        const int ne_max =
            p.lambda_e > 0.0 ? std::max(2, tmsv_cutoff(p.lambda_e, 1e-14)) : 2;
        double vw_sum = 0.0;
        for (int na = 0; na <= na_max; ++na)
            for (int ne = 0; ne <= ne_max; ++ne) {
                const auto [v, w] = vw_amplitudes(na, ne, p);
                vw_sum += v * v + w * w;
            }
        herald_ok = herald_ok && std::abs(vw_sum - 1.0) < 1e-9;

        double integral = 0.0;
        const int steps = 4800;
        const double h = 12.0 / steps;
        for (int i = 0; i <= steps; ++i) {
            const double x = -6.0 + i * h;
            const double w = (i == 0 || i == steps) ? 1.0
                             : (i % 2 != 0)         ? 4.0
                                                    : 2.0;
            const double f = homodyne_pdf(x, rs);
            pdf_ok = pdf_ok && f >= 0.0;
            integral += w * f;
        }
        integral *= h / 3.0;
        pdf_ok = pdf_ok && std::abs(integral - 1.0) < 1e-10;

        const double f = fidelity(rs);
        fid_ok = fid_ok && f >= 0.0 && f <= 1.0 + 1e-12;

        const auto br = key_rate_breakdown(p);
        const double s_b =
            von_neumann(std::vector<double>{rs.gamma_b0, rs.gamma_b1});
        araki_ok = araki_ok && br.s_ab >= std::abs(br.s_a - s_b) - 1e-9;
    }
    report(8, "joint trace = 1 within tail bound", trace_ok);
    report(8, "marginal identity gamma_a = sigma00 + sigma11", marginal_ok);
    report(8, "Bob normalization gamma_b0 + gamma_b1 = 1", bob_ok);
    report(8, "herald normalization sum(V^2 + W^2) = 1", herald_ok);
    report(8, "homodyne density nonnegative and normalized", pdf_ok);
    report(8, "coherence blocks positive semidefinite", block_ok);
    report(8, "fidelity within [0, 1]", fid_ok);
    report(8, "entropy triangle inequality", araki_ok);

    {
        const ProtocolParams vac(0.0, 0.3, 0.0, 0.8);
        const double f = fidelity(reduced_states(joint_state(vac), vac));
        report(8, "fidelity = 1 at the vacuum point",
               std::abs(f - 1.0) < 1e-12);
    }

    {
        RangeSearchConfig cfg;
        cfg.beta = calibration().beta;
        bool bracket_ok = true;
        for (const auto& [la, ts, eps] :
             {std::tuple{0.5, 0.1, 0.0}, std::tuple{0.787, 0.038, 0.001}}) {
            const RangeResult r = find_range(la, ts, eps, cfg);
            const auto rate = [&](double l) {
                return secret_key_rate(ProtocolParams::from_noise_and_distance(
                    la, ts, eps, l, cfg.beta));
            };
            bracket_ok = bracket_ok && r.converged &&
                         rate(r.range_km) >= cfg.k_min &&
                         rate(r.range_km + cfg.resolution_km) < cfg.k_min;
        }
        report(8, "bisection bracket invariant", bracket_ok);
    }

    {
        GridConfig grid;
        grid.step = 0.09;
        grid.t_s_max = 0.63;
        grid.eps = 0.001;
        grid.checkpoint_interval = 0;
        grid.workers = 1;
        const GridSummary one = grid_search(grid);
        grid.workers = 4;
        const GridSummary four = grid_search(grid);
        Provenance prov;
        prov.command = "optimize";
        report(8, "grid results byte-identical across worker counts",
               grid_csv(one, prov) == grid_csv(four, prov));
    }
}
