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

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "cvqkd/keyrate.hpp"

namespace cvqkd {

/// Protocol range of one parameter point: the largest distance whose key
/// rate stays at or above the configured floor.
struct RangeResult {
    double lambda_a = 0.0;
    double t_s = 0.0;
    double range_km = 0.0;
    double fidelity_at_range = 1.0;
    double k_at_range = 0.0;
    bool converged = false;
};

struct RangeSearchConfig {
    double beta = 1.0;
    double k_min = 1e-6;
    double resolution_km = 0.01;
    double l_max_km = 600.0;
    double tol = 1e-15;
    int max_bisection_steps = 200;
};

/// Finds the protocol range by bracketing the key-rate crossing with a
/// coarse forward scan (10 km, then 1 km, from L = 1) and bisecting to the
/// configured resolution.  If the rate is already below the floor at 1 km,
/// the search steps down to 0.01 km before declaring range 0.  The
/// bracket invariant K(lo) >= k_min > K(hi) is maintained throughout.
RangeResult find_range(double lambda_a, double t_s, double eps,
                       const RangeSearchConfig& config = {});

struct GridConfig {
    double step = 0.001;
    double lambda_a_max = 0.9;
    double t_s_max = 0.7;
    double eps = 0.0;
    RangeSearchConfig search;
    int workers = 1;
    int checkpoint_interval = 10000;
    std::string checkpoint_path;  ///< empty disables checkpointing

    int n_lambda() const;
    int n_ts() const;
    double lambda_at(int i) const { return (i + 1) * step; }
    double ts_at(int j) const { return (j + 1) * step; }
};

/// Full sweep over the search domain.  Results are keyed by grid index
/// (lambda outer, t_s inner, both starting at step and including the
/// domain maxima), so the output is byte-identical regardless of worker
/// count.  `best` is the argmax of range with ties broken by higher
/// fidelity, then lower lambda_a, then lower t_s; unconverged points are
/// excluded from the argmax.
struct GridSummary {
    GridConfig config;
    std::vector<RangeResult> results;  ///< row-major, n_lambda x n_ts
    std::size_t best_index = 0;
    std::size_t unconverged_count = 0;
    std::map<std::string, std::vector<std::size_t>> regions;

    const RangeResult& best() const { return results[best_index]; }
};

GridSummary grid_search(const GridConfig& config);

struct RegionSets {
    std::vector<std::size_t> high_range;     ///< indices with range >= r_min
    std::vector<std::size_t> high_fidelity;  ///< indices with fidelity > f_min
    std::vector<std::size_t> intersection;
};

/// Threshold sets in deterministic row-major order; also stored into
/// summary.regions under "range", "fidelity" and "intersection".
RegionSets extract_regions(GridSummary& summary, double r_min, double f_min);

struct TradeOff {
    double delta_r_pct;  ///< 100 (R_alt - R_best) / R_best
    double delta_f_pct;  ///< 100 (F_alt - F_best) / F_best
};

/// Range/fidelity trade-off between two converged operating points.
TradeOff tradeoff_report(const RangeResult& best, const RangeResult& alt);

}  // namespace cvqkd
