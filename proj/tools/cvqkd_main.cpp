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
 * Command-line entry point.  Distances are km, excess noise is in
 * shot-noise units, key rates are bits per pulse.  All outputs are
 * deterministic: same configuration, same bytes.
 *
 * Exit codes: 0 success, 1 validation failure, 2 configuration error,
 * 3 numerical non-convergence.
 */

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cvqkd/keyrate.hpp"
#include "cvqkd/optimizer.hpp"
#include "cvqkd/output.hpp"
#include "cvqkd/validation.hpp"
#include "cvqkd/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidationFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitNonConvergence = 3;

struct CommonOpts {
    double lambda_a = 0.0;
    double t_s = 0.0;
    double eps = 0.0;
    double beta = 1.0;
    double k_min = 1e-6;
    double step = 0.001;
    double resolution_km = 0.01;
    double tol = 1e-15;
    int workers = 0;  // 0 = hardware concurrency
    std::string out;
    std::string json_out;
};

void add_physics_flags(CLI::App* cmd, CommonOpts& o, bool need_point) {
    auto* la = cmd->add_option("--lambda-a", o.lambda_a,
                               "TMSV squeezing parameter, [0, 1)");
    auto* ts = cmd->add_option("--ts", o.t_s,
                               "scissor beam-splitter transmission, (0, 1)");
    if (need_point) {
        la->required();
        ts->required();
    }
    cmd->add_option("--eps", o.eps, "channel excess noise, shot-noise units")
        ->default_val(0.0);
    cmd->add_option("--tol", o.tol, "series truncation tolerance")
        ->default_val(1e-15);
}

cvqkd::RangeSearchConfig search_config(const CommonOpts& o) {
    cvqkd::RangeSearchConfig cfg;
    cfg.beta = o.beta;
    cfg.k_min = o.k_min;
    cfg.resolution_km = o.resolution_km;
    cfg.tol = o.tol;
    return cfg;
}

void add_common_provenance(cvqkd::Provenance& prov, const CommonOpts& o) {
    prov.add("beta", o.beta);
    prov.add("k_min", o.k_min);
    prov.add("tol", o.tol);
    prov.add("cutoff_policy", "smallest n with geometric trace tail < tol");
}

// ---------------------------------------------------------------- keyrate

int cmd_keyrate(const CommonOpts& o, double l_min, double l_max,
                double l_step) {
    if (!(l_min > 0.0) || !(l_max >= l_min) || !(l_step > 0.0)) {
        std::cerr << "keyrate: need 0 < l-min <= l-max and l-step > 0\n";
        return kExitConfigError;
    }
    cvqkd::Provenance prov;
    prov.command = "keyrate";
    prov.add("lambda_a", o.lambda_a);
    prov.add("t_s", o.t_s);
    prov.add("eps", o.eps);
    add_common_provenance(prov, o);
    prov.add("l_min_km", l_min);
    prov.add("l_max_km", l_max);
    prov.add("l_step_km", l_step);

    const std::vector<std::string> columns = {"L_km", "K",   "K_PLOB",
                                              "F",    "P_Q", "gaussianity_ratio"};
    cvqkd::CsvBuilder csv(prov, columns);
    std::vector<std::vector<double>> rows;
    for (double l = l_min; l <= l_max + 1e-9; l += l_step) {
        const auto p = cvqkd::ProtocolParams::from_noise_and_distance(
            o.lambda_a, o.t_s, o.eps, l, o.beta);
        const auto br = cvqkd::key_rate_breakdown(p, o.tol);
        const auto js = cvqkd::joint_state(p, o.tol);
        const auto rs = cvqkd::reduced_states(js, p);
        rows.push_back({l, br.k, cvqkd::plob_bound(p.t_c),
                        cvqkd::fidelity(rs), br.p_q,
                        rs.gamma_b1 / rs.gamma_b0});
        csv.add_row(rows.back());
    }
    cvqkd::write_text(o.out, csv.str());
    if (!o.json_out.empty())
        cvqkd::write_text(o.json_out,
                          cvqkd::result_json(prov, columns, rows).dump(2) + "\n");
    return kExitOk;
}

// ---------------------------------------------------------------- optimize

int cmd_optimize(const CommonOpts& o, double lambda_max, double ts_max,
                 bool resume) {
    cvqkd::GridConfig cfg;
    cfg.step = o.step;
    cfg.lambda_a_max = lambda_max;
    cfg.t_s_max = ts_max;
    cfg.eps = o.eps;
    cfg.search = search_config(o);
    cfg.workers = o.workers;
    if (!o.out.empty()) cfg.checkpoint_path = o.out + ".checkpoint";
    if (!resume && !cfg.checkpoint_path.empty())
        std::remove(cfg.checkpoint_path.c_str());

    const cvqkd::GridSummary summary = cvqkd::grid_search(cfg);

    cvqkd::Provenance prov;
    prov.command = "optimize";
    prov.add("eps", o.eps);
    add_common_provenance(prov, o);
    prov.add("step", o.step);
    prov.add("resolution_km", o.resolution_km);
    prov.add("lambda_a_max", lambda_max);
    prov.add("t_s_max", ts_max);

    cvqkd::write_text(o.out, cvqkd::grid_csv(summary, prov));

    const cvqkd::RangeResult& best = summary.best();
    std::fprintf(stderr,
                 "best: lambda_a=%s t_s=%s range_km=%s fidelity=%s "
                 "(unconverged points: %zu)\n",
                 cvqkd::format_sig(best.lambda_a).c_str(),
                 cvqkd::format_sig(best.t_s).c_str(),
                 cvqkd::format_sig(best.range_km).c_str(),
                 cvqkd::format_sig(best.fidelity_at_range).c_str(),
                 summary.unconverged_count);

    if (!o.json_out.empty()) {
        nlohmann::json j = cvqkd::result_json(
            prov, {"lambda_a", "t_s", "range_km", "fidelity_at_range"},
            {{best.lambda_a, best.t_s, best.range_km,
              best.fidelity_at_range}});
        j["unconverged_count"] = summary.unconverged_count;
        cvqkd::write_text(o.json_out, j.dump(2) + "\n");
    }
    return summary.unconverged_count == 0 ? kExitOk : kExitNonConvergence;
}

// ----------------------------------------------------------------- regions

struct GridRow {
    double lambda_a, t_s, range_km, fidelity;
};

std::vector<GridRow> read_grid_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw std::runtime_error("cannot read grid: " + path);
    std::vector<GridRow> rows;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {  // column header
            header_seen = true;
            continue;
        }
        GridRow r;
        double k;
        int conv;
        if (std::sscanf(line.c_str(), "%lg,%lg,%lg,%lg,%lg,%d", &r.lambda_a,
                        &r.t_s, &r.range_km, &r.fidelity, &k, &conv) != 6)
            throw std::runtime_error("malformed grid row: " + line);
        if (conv) rows.push_back(r);
    }
    return rows;
}

int cmd_regions(const std::string& grid_path, double r_min, double f_min,
                const std::string& out_prefix) {
    const std::vector<GridRow> rows = read_grid_csv(grid_path);

    cvqkd::Provenance prov;
    prov.command = "regions";
    prov.add("grid", grid_path);
    prov.add("r_min_km", r_min);
    prov.add("f_min", f_min);

    // range_km is bisection-truncated downward, so >= is the faithful
    // test of "true range above r_min"; fidelity is exact, keep strict
    const auto emit = [&](const std::string& name, auto&& keep) {
        cvqkd::CsvBuilder csv(prov, {"lambda_a", "t_s"});
        for (const GridRow& r : rows)
            if (keep(r)) csv.add_row({r.lambda_a, r.t_s});
        cvqkd::write_text(out_prefix + name + ".csv", csv.str());
    };
    emit("range", [&](const GridRow& r) { return r.range_km >= r_min; });
    emit("fidelity", [&](const GridRow& r) { return r.fidelity > f_min; });
    emit("intersection", [&](const GridRow& r) {
        return r.range_km >= r_min && r.fidelity > f_min;
    });
    return kExitOk;
}

// ------------------------------------------------------------------ table1

struct OperatingPoint {
    double eps, lambda_a, t_s;
};

// operating points of the range-vs-fidelity comparison: per noise level,
// the maximum-range point and a high-fidelity alternative
const std::vector<std::pair<OperatingPoint, OperatingPoint>> kTablePoints = {
    {{0.0, 0.815, 0.041}, {0.0, 0.359, 0.004}},
    {{0.001, 0.787, 0.038}, {0.001, 0.413, 0.087}},
    {{0.005, 0.798, 0.085}, {0.005, 0.413, 0.182}},
    {{0.01, 0.819, 0.121}, {0.01, 0.423, 0.257}},
    {{0.05, 0.849, 0.246}, {0.05, 0.473, 0.464}},
};

int cmd_table1(const CommonOpts& o) {
    cvqkd::RangeSearchConfig cfg = search_config(o);
    cvqkd::Provenance prov;
    prov.command = "table1";
    add_common_provenance(prov, o);
    prov.add("resolution_km", o.resolution_km);

    const std::vector<std::string> columns = {
        "eps",    "mode",   "lambda_a",    "t_s",         "range_km",
        "fidelity", "eps_tm", "eps_rec",   "delta_r_pct", "delta_f_pct"};
    cvqkd::CsvBuilder csv(prov, columns);

    std::printf("%8s %14s %9s %7s %9s %6s %8s %8s %8s %8s\n", "eps", "mode",
                "lambda_a", "t_s", "R_km", "F", "eps_tm", "eps_rec", "dR_pct",
                "dF_pct");
    bool all_converged = true;
    for (const auto& [max_pt, hf_pt] : kTablePoints) {
        const cvqkd::RangeResult best =
            cvqkd::find_range(max_pt.lambda_a, max_pt.t_s, max_pt.eps, cfg);
        const cvqkd::RangeResult alt =
            cvqkd::find_range(hf_pt.lambda_a, hf_pt.t_s, hf_pt.eps, cfg);
        all_converged = all_converged && best.converged && alt.converged;
        const cvqkd::TradeOff d = cvqkd::tradeoff_report(best, alt);

        const auto emit = [&](const char* mode, const OperatingPoint& pt,
                              const cvqkd::RangeResult& r, bool with_delta) {
            const auto noises = cvqkd::equivalent_noises(
                pt.eps, cvqkd::t_c_from_distance(r.range_km));
            std::printf("%8s %14s %9s %7s %9.2f %6.3f %8.3f %8.4f",
                        cvqkd::format_sig(pt.eps).c_str(), mode,
                        cvqkd::format_sig(pt.lambda_a).c_str(),
                        cvqkd::format_sig(pt.t_s).c_str(), r.range_km,
                        r.fidelity_at_range, noises.transmitter,
                        noises.receiver);
            if (with_delta)
                std::printf(" %8.1f %8.1f\n", d.delta_r_pct, d.delta_f_pct);
            else
                std::printf(" %8s %8s\n", "-", "-");
            csv.add_row_raw(
                {cvqkd::format_sig(pt.eps), mode,
                 cvqkd::format_sig(pt.lambda_a), cvqkd::format_sig(pt.t_s),
                 cvqkd::format_sig(r.range_km),
                 cvqkd::format_sig(r.fidelity_at_range),
                 cvqkd::format_sig(noises.transmitter),
                 cvqkd::format_sig(noises.receiver),
                 with_delta ? cvqkd::format_sig(d.delta_r_pct) : "",
                 with_delta ? cvqkd::format_sig(d.delta_f_pct) : ""});
        };
        emit("max_range", max_pt, best, false);
        emit("high_fidelity", hf_pt, alt, true);
    }
    if (!o.out.empty()) cvqkd::write_text(o.out, csv.str());
    return all_converged ? kExitOk : kExitNonConvergence;
}

// --------------------------------------------------------------------- pdf

int cmd_pdf(const CommonOpts& o, double l_km, double x_min, double x_max,
            double x_step) {
    if (!(x_step > 0.0) || !(x_max > x_min)) {
        std::cerr << "pdf: need x-max > x-min and x-step > 0\n";
        return kExitConfigError;
    }
    const auto p = cvqkd::ProtocolParams::from_noise_and_distance(
        o.lambda_a, o.t_s, o.eps, l_km, o.beta);
    const auto rs = cvqkd::reduced_states(cvqkd::joint_state(p, o.tol), p);

    cvqkd::Provenance prov;
    prov.command = "pdf";
    prov.add("lambda_a", o.lambda_a);
    prov.add("t_s", o.t_s);
    prov.add("eps", o.eps);
    prov.add("distance_km", l_km);
    prov.add("gamma_b0", rs.gamma_b0);
    prov.add("gamma_b1", rs.gamma_b1);
    add_common_provenance(prov, o);

    cvqkd::CsvBuilder csv(
        prov, {"x", "f_x", "gaussian_part", "nongaussian_part"});
    const double norm = std::sqrt(2.0 / 3.14159265358979323846);
    for (double x = x_min; x <= x_max + 1e-12; x += x_step) {
        const double env = norm * std::exp(-2.0 * x * x);
        csv.add_row({x, cvqkd::homodyne_pdf(x, rs), env * rs.gamma_b0,
                     env * 4.0 * rs.gamma_b1 * x * x});
    }
    cvqkd::write_text(o.out, csv.str());
    return kExitOk;
}

// ---------------------------------------------------------------- validate

int cmd_validate(const std::string& battery_path, const std::string& out) {
    std::vector<cvqkd::QuantityError> report;
    try {
        report = cvqkd::run_validation_battery(
            cvqkd::load_battery(battery_path));
    } catch (const std::invalid_argument& e) {
        std::cerr << "validate: " << e.what() << "\n";
        return kExitConfigError;
    }

    cvqkd::Provenance prov;
    prov.command = "validate";
    prov.add("battery", battery_path);
    cvqkd::CsvBuilder csv(prov,
                          {"quantity", "max_abs_error", "tolerance", "pass"});

    bool all_pass = true;
    std::printf("%-12s %14s %12s  %s\n", "quantity", "max_abs_error",
                "tolerance", "pass");
    for (const cvqkd::QuantityError& c : report) {
        all_pass = all_pass && c.pass();
        std::printf("%-12s %14.3e %12.0e  %s\n", c.quantity.c_str(),
                    c.max_abs_error, c.tolerance, c.pass() ? "yes" : "NO");
        csv.add_row_raw({c.quantity, cvqkd::format_sig(c.max_abs_error),
                         cvqkd::format_sig(c.tolerance),
                         c.pass() ? "1" : "0"});
    }
    if (!out.empty()) cvqkd::write_text(out, csv.str());
    return all_pass ? kExitOk : kExitValidationFailure;
}

// --------------------------------------------------------------- calibrate

int cmd_calibrate(const CommonOpts& o, double target_km,
                  std::vector<double> betas) {
    if (betas.empty()) betas = {0.90, 0.95, 0.98, 1.00};
    cvqkd::RangeSearchConfig cfg = search_config(o);
    double best_beta = betas.front();
    double best_err = -1.0;
    for (double beta : betas) {
        cfg.beta = beta;
        const auto r = cvqkd::find_range(o.lambda_a, o.t_s, o.eps, cfg);
        const double err = std::abs(r.range_km - target_km);
        std::printf("beta=%.2f -> range %.2f km (|delta| %.2f)\n", beta,
                    r.range_km, err);
        if (best_err < 0.0 || err < best_err) {
            best_err = err;
            best_beta = beta;
        }
    }
    std::printf("selected beta = %.2f\n", best_beta);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"closed-form CV-QKD model with zero-photon catalysis and a "
                 "quantum scissor"};
    app.set_version_flag("--version", std::string("cvqkd ") + cvqkd::kVersion);
    app.set_config("--config", "", "configuration file, key = value lines");
    app.require_subcommand(1);

    CommonOpts o;

    auto* keyrate = app.add_subcommand(
        "keyrate", "key rate, PLOB bound and fidelity versus distance");
    keyrate->configurable()->fallthrough();
    double l_min = 1.0, l_max = 310.0, l_step = 1.0;
    add_physics_flags(keyrate, o, true);
    keyrate->add_option("--beta", o.beta, "reconciliation efficiency");
    keyrate->add_option("--l-min", l_min, "first distance, km");
    keyrate->add_option("--l-max", l_max, "last distance, km");
    keyrate->add_option("--l-step", l_step, "distance step, km");
    keyrate->add_option("--out", o.out, "output CSV path (default: stdout)");
    keyrate->add_option("--json", o.json_out, "also write a JSON mirror");

    auto* optimize = app.add_subcommand(
        "optimize", "grid search for the maximum protocol range");
    optimize->configurable()->fallthrough();
    bool resume = false;
    double lambda_max = 0.9, ts_max = 0.7;
    add_physics_flags(optimize, o, false);
    optimize->add_option("--beta", o.beta, "reconciliation efficiency");
    optimize->add_option("--kmin", o.k_min, "minimum acceptable key rate");
    optimize->add_option("--step", o.step, "grid step for lambda_a and t_s");
    optimize->add_option("--resolution-km", o.resolution_km,
                         "bisection resolution");
    optimize->add_option("--lambda-max", lambda_max, "lambda_a upper bound");
    optimize->add_option("--ts-max", ts_max, "t_s upper bound");
    optimize->add_option("--workers", o.workers,
                         "worker threads (0 = hardware)");
    optimize->add_option("--out", o.out, "grid CSV path (default: stdout)");
    optimize->add_option("--json", o.json_out, "best-point JSON path");
    optimize->add_flag("--resume", resume,
                       "resume from <out>.checkpoint if present");

    auto* regions = app.add_subcommand(
        "regions", "threshold point sets from an optimize grid");
    regions->configurable()->fallthrough();
    std::string grid_path, out_prefix = "regions_", preset;
    double r_min = 265.0, f_min = 0.94;
    regions->add_option("--grid", grid_path, "grid CSV from optimize")
        ->required();
    regions
        ->add_option("--preset", preset,
                     "threshold preset: zero-noise (265 km, 0.94) or "
                     "low-noise (110 km, 0.93)")
        ->check(CLI::IsMember({"zero-noise", "low-noise"}));
    regions->add_option("--rmin", r_min, "range threshold, km");
    regions->add_option("--fmin", f_min, "fidelity threshold");
    regions->add_option("--out-prefix", out_prefix,
                        "prefix for range/fidelity/intersection CSVs");

    auto* table1 = app.add_subcommand(
        "table1", "range/fidelity table across noise levels");
    table1->configurable()->fallthrough();
    table1->add_option("--beta", o.beta, "reconciliation efficiency")
        ->required();
    table1->add_option("--kmin", o.k_min, "minimum acceptable key rate");
    table1->add_option("--resolution-km", o.resolution_km,
                       "bisection resolution");
    table1->add_option("--tol", o.tol, "series truncation tolerance");
    table1->add_option("--out", o.out, "optional CSV path");

    auto* pdf = app.add_subcommand(
        "pdf", "homodyne probability density of Bob's quadrature");
    pdf->configurable()->fallthrough();
    double pdf_l = 100.0, x_min = -4.0, x_max = 4.0, x_step = 0.05;
    add_physics_flags(pdf, o, true);
    pdf->add_option("--distance", pdf_l, "channel length, km")->required();
    pdf->add_option("--x-min", x_min, "quadrature grid start");
    pdf->add_option("--x-max", x_max, "quadrature grid end");
    pdf->add_option("--x-step", x_step, "quadrature grid step");
    pdf->add_option("--out", o.out, "output CSV path (default: stdout)");

    auto* validate = app.add_subcommand(
        "validate", "run the brute-force oracle battery");
    validate->configurable()->fallthrough();
    std::string battery_path = "data/validation_battery.json";
    std::string validate_out;
    validate->add_option("--battery", battery_path, "battery JSON path");
    validate->add_option("--out", validate_out, "optional CSV report path");

    auto* calibrate = app.add_subcommand(
        "calibrate", "sweep beta candidates against a target range");
    calibrate->configurable()->fallthrough();
    double target_km = 288.0;
    std::vector<double> betas;
    add_physics_flags(calibrate, o, false);
    calibrate->add_option("--target", target_km, "target range, km");
    calibrate->add_option("--betas", betas, "beta candidates");
    calibrate->add_option("--kmin", o.k_min, "minimum acceptable key rate");
    calibrate->add_option("--resolution-km", o.resolution_km,
                          "bisection resolution");
    o.lambda_a = 0.815;
    o.t_s = 0.041;

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfigError;
    }

    try {
        if (keyrate->parsed()) return cmd_keyrate(o, l_min, l_max, l_step);
        if (optimize->parsed())
            return cmd_optimize(o, lambda_max, ts_max, resume);
        if (regions->parsed()) {
            if (preset == "zero-noise") {
                r_min = 265.0;
                f_min = 0.94;
            } else if (preset == "low-noise") {
                r_min = 110.0;
                f_min = 0.93;
            }
            return cmd_regions(grid_path, r_min, f_min, out_prefix);
        }
        if (table1->parsed()) return cmd_table1(o);
        if (pdf->parsed()) return cmd_pdf(o, pdf_l, x_min, x_max, x_step);
        if (validate->parsed()) return cmd_validate(battery_path, validate_out);
        if (calibrate->parsed()) return cmd_calibrate(o, target_km, betas);
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidationFailure;
    }
    return kExitConfigError;
}
