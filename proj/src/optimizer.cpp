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

#include "cvqkd/optimizer.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace cvqkd {

namespace {

double key_rate_at(double lambda_a, double t_s, double eps, double l_km,
                   const RangeSearchConfig& cfg) {
    const ProtocolParams p = ProtocolParams::from_noise_and_distance(
        lambda_a, t_s, eps, l_km, cfg.beta);
    return secret_key_rate(p, cfg.tol);
}

double fidelity_at(double lambda_a, double t_s, double eps, double l_km) {
    const ProtocolParams p =
        ProtocolParams::from_noise_and_distance(lambda_a, t_s, eps, l_km);
    const JointState js = joint_state(p);
    return fidelity(reduced_states(js, p));
}

// strict total order for the grid argmax: larger range wins, ties go to
// higher fidelity, then lower lambda_a, then lower t_s
bool better_than(const RangeResult& a, const RangeResult& b) {
    if (a.range_km != b.range_km) return a.range_km > b.range_km;
    if (a.fidelity_at_range != b.fidelity_at_range)
        return a.fidelity_at_range > b.fidelity_at_range;
    if (a.lambda_a != b.lambda_a) return a.lambda_a < b.lambda_a;
    return a.t_s < b.t_s;
}

}  // namespace

int GridConfig::n_lambda() const {
    return static_cast<int>(std::llround(lambda_a_max / step));
}

int GridConfig::n_ts() const {
    return static_cast<int>(std::llround(t_s_max / step));
}

RangeResult find_range(double lambda_a, double t_s, double eps,
                       const RangeSearchConfig& cfg) {
    if (!(cfg.k_min > 0.0))
        throw std::invalid_argument("find_range: k_min must be > 0");
    if (!(cfg.resolution_km > 0.0))
        throw std::invalid_argument("find_range: resolution_km must be > 0");

    RangeResult res;
    res.lambda_a = lambda_a;
    res.t_s = t_s;

    const auto rate = [&](double l) {
        return key_rate_at(lambda_a, t_s, eps, l, cfg);
    };

    double lo = 1.0;
    double hi = 0.0;
    bool bracketed = false;

    if (rate(1.0) >= cfg.k_min) {
        // forward scan, 10 km steps; keep going a little past the first
        // drop so a re-emerging positive region is not missed
        double last_ok = 1.0;
        double first_below = -1.0;
        int below_streak = 0;
        for (double l = 11.0; l <= cfg.l_max_km; l += 10.0) {
            if (rate(l) >= cfg.k_min) {
                last_ok = l;
                below_streak = 0;
                first_below = -1.0;
            } else {
                if (first_below < 0.0) first_below = l;
                if (++below_streak >= 3) break;
            }
        }
        if (first_below < 0.0) {
            // still above the floor at l_max: unconverged by construction
            res.range_km = last_ok;
            res.converged = false;
            res.fidelity_at_range = fidelity_at(lambda_a, t_s, eps, last_ok);
            res.k_at_range = rate(last_ok);
            return res;
        }
        // refine to 1 km within the last 10 km cell
        lo = last_ok;
        hi = last_ok + 10.0;
        for (double l = last_ok + 1.0; l < last_ok + 10.0; l += 1.0) {
            if (rate(l) >= cfg.k_min) {
                lo = l;
            } else {
                hi = l;
                break;
            }
        }
        bracketed = true;
    } else {
        // scan down toward 0.01 km for a short-range bracket
        double prev = 1.0;
        for (double l = 0.5; l >= 0.0078; l *= 0.5) {
            if (rate(l) >= cfg.k_min) {
                lo = l;
                hi = prev;
                bracketed = true;
                break;
            }
            prev = l;
        }
        if (!bracketed) {
            res.range_km = 0.0;
            res.converged = true;
            res.fidelity_at_range =
                fidelity_at(lambda_a, t_s, eps, cfg.resolution_km);
            res.k_at_range = rate(cfg.resolution_km);
            return res;
        }
    }

    // bisect; invariant K(lo) >= k_min > K(hi)
    int steps = 0;
    while (hi - lo > cfg.resolution_km && steps < cfg.max_bisection_steps) {
        const double mid = 0.5 * (lo + hi);
        if (rate(mid) >= cfg.k_min) {
            lo = mid;
        } else {
            hi = mid;
        }
        ++steps;
    }
    res.converged = (hi - lo) <= cfg.resolution_km;
    res.range_km = lo;
    res.fidelity_at_range = fidelity_at(lambda_a, t_s, eps, lo);
    res.k_at_range = rate(lo);
    return res;
}

namespace {

constexpr const char* kCheckpointMagic = "# cvqkd-grid-checkpoint schema = 1";

std::string checkpoint_header(const GridConfig& cfg) {
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "%s\n# step = %.17g\n# eps = %.17g\n# beta = %.17g\n"
                  "# k_min = %.17g\n# resolution_km = %.17g\n"
                  "# lambda_a_max = %.17g\n# t_s_max = %.17g\n# tol = %.17g\n",
                  kCheckpointMagic, cfg.step, cfg.eps, cfg.search.beta,
                  cfg.search.k_min, cfg.search.resolution_km, cfg.lambda_a_max,
                  cfg.t_s_max, cfg.search.tol);
    return buf;
}

std::size_t load_checkpoint(const GridConfig& cfg,
                            std::vector<RangeResult>& results) {
    std::ifstream in(cfg.checkpoint_path);
    if (!in.good()) return 0;
    const std::string expected = checkpoint_header(cfg);
    std::string header(expected.size(), '\0');
    in.read(header.data(), static_cast<std::streamsize>(expected.size()));
    if (header != expected)
        throw std::runtime_error(
            "checkpoint config does not match the requested grid: " +
            cfg.checkpoint_path);
    std::size_t count = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        RangeResult r;
        std::size_t index;
        int conv;
        if (std::sscanf(line.c_str(), "%zu,%lg,%lg,%lg,%lg,%lg,%d", &index,
                        &r.lambda_a, &r.t_s, &r.range_km, &r.fidelity_at_range,
                        &r.k_at_range, &conv) != 7)
            break;
        if (index != count || index >= results.size()) break;
        r.converged = conv != 0;
        results[index] = r;
        ++count;
    }
    return count;
}

void append_checkpoint(const GridConfig& cfg,
                       const std::vector<RangeResult>& results,
                       std::size_t from, std::size_t to, bool fresh) {
    std::ofstream out(cfg.checkpoint_path,
                      fresh ? std::ios::trunc : std::ios::app);
    if (!out.good())
        throw std::runtime_error("cannot write checkpoint: " +
                                 cfg.checkpoint_path);
    if (fresh) out << checkpoint_header(cfg);
    char buf[256];
    for (std::size_t i = from; i < to; ++i) {
        const RangeResult& r = results[i];
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n",
                      i, r.lambda_a, r.t_s, r.range_km, r.fidelity_at_range,
                      r.k_at_range, r.converged ? 1 : 0);
        out << buf;
    }
}

}  // namespace

GridSummary grid_search(const GridConfig& cfg) {
    if (!(cfg.step > 0.0))
        throw std::invalid_argument("grid_search: step must be > 0");
    if (cfg.lambda_a_max > 0.9 + 1e-12 || cfg.t_s_max > 0.7 + 1e-12)
        throw std::invalid_argument(
            "grid_search: domain exceeds lambda_a <= 0.9, t_s <= 0.7");

    const int nl = cfg.n_lambda();
    const int nt = cfg.n_ts();
    if (nl < 1 || nt < 1)
        throw std::invalid_argument("grid_search: empty grid");

    GridSummary summary;
    summary.config = cfg;
    summary.results.assign(static_cast<std::size_t>(nl) * nt, RangeResult{});

    std::size_t done = 0;
    const bool use_checkpoint = !cfg.checkpoint_path.empty();
    if (use_checkpoint) done = load_checkpoint(cfg, summary.results);

    const int workers =
        cfg.workers > 0
            ? cfg.workers
            : std::max(1u, std::thread::hardware_concurrency());
    const std::size_t total = summary.results.size();
    const std::size_t block = cfg.checkpoint_interval > 0
                                  ? static_cast<std::size_t>(
                                        cfg.checkpoint_interval)
                                  : total;

    bool fresh = done == 0;
    while (done < total) {
        const std::size_t end = std::min(done + block, total);
        std::atomic<std::size_t> next{done};
        auto work = [&]() {
            for (;;) {
                const std::size_t idx = next.fetch_add(1);
                if (idx >= end) break;
                const int i = static_cast<int>(idx) / nt;
                const int j = static_cast<int>(idx) % nt;
                summary.results[idx] = find_range(
                    cfg.lambda_at(i), cfg.ts_at(j), cfg.eps, cfg.search);
            }
        };
        std::vector<std::thread> pool;
        for (int t = 1; t < workers; ++t) pool.emplace_back(work);
        work();
        for (auto& th : pool) th.join();
        if (use_checkpoint) {
            append_checkpoint(cfg, summary.results, done, end, fresh);
            fresh = false;
        }
        done = end;
    }

    // deterministic argmax over converged points, row-major
    bool have_best = false;
    for (std::size_t idx = 0; idx < total; ++idx) {
        const RangeResult& r = summary.results[idx];
        if (!r.converged) {
            ++summary.unconverged_count;
            continue;
        }
        if (!have_best || better_than(r, summary.results[summary.best_index])) {
            summary.best_index = idx;
            have_best = true;
        }
    }
    if (!have_best)
        throw std::runtime_error("grid_search: no grid point converged");
    return summary;
}

RegionSets extract_regions(GridSummary& summary, double r_min, double f_min) {
    RegionSets sets;
    for (std::size_t idx = 0; idx < summary.results.size(); ++idx) {
        const RangeResult& r = summary.results[idx];
        if (!r.converged) continue;
        // range_km is bisection-truncated downward, so >= is the faithful
        // test of "true range above r_min"; fidelity is exact, keep strict
        const bool in_r = r.range_km >= r_min;
        const bool in_f = r.fidelity_at_range > f_min;
        if (in_r) sets.high_range.push_back(idx);
        if (in_f) sets.high_fidelity.push_back(idx);
        if (in_r && in_f) sets.intersection.push_back(idx);
    }
    summary.regions["range"] = sets.high_range;
    summary.regions["fidelity"] = sets.high_fidelity;
    summary.regions["intersection"] = sets.intersection;
    return sets;
}

TradeOff tradeoff_report(const RangeResult& best, const RangeResult& alt) {
    if (!best.converged || !alt.converged)
        throw std::invalid_argument("tradeoff_report: unconverged input");
    if (best.range_km == 0.0)
        throw std::invalid_argument("tradeoff_report: zero reference range");
    return {100.0 * (alt.range_km - best.range_km) / best.range_km,
            100.0 * (alt.fidelity_at_range - best.fidelity_at_range) /
                best.fidelity_at_range};
}

}  // namespace cvqkd
