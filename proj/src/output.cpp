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

#include "cvqkd/output.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "cvqkd/version.hpp"

namespace cvqkd {

std::string format_sig(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

void Provenance::add(const std::string& key, const std::string& value) {
    items.emplace_back(key, value);
}

void Provenance::add(const std::string& key, double value) {
    items.emplace_back(key, format_sig(value));
}

void Provenance::add(const std::string& key, int value) {
    items.emplace_back(key, std::to_string(value));
}

CsvBuilder::CsvBuilder(const Provenance& provenance,
                       std::vector<std::string> columns)
    : n_columns_(columns.size()) {
    buffer_ += "# tool = cvqkd ";
    buffer_ += kVersion;
    buffer_ += "\n# schema_version = ";
    buffer_ += kSchemaVersion;
    buffer_ += "\n# command = ";
    buffer_ += provenance.command;
    buffer_ += "\n";
    for (const auto& [k, v] : provenance.items) {
        buffer_ += "# " + k + " = " + v + "\n";
    }
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) buffer_ += ",";
        buffer_ += columns[i];
    }
    buffer_ += "\n";
}

void CsvBuilder::add_row(const std::vector<double>& values) {
    if (values.size() != n_columns_)
        throw std::invalid_argument("CsvBuilder: column count mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) buffer_ += ",";
        buffer_ += format_sig(values[i]);
    }
    buffer_ += "\n";
}

void CsvBuilder::add_row_raw(const std::vector<std::string>& cells) {
    if (cells.size() != n_columns_)
        throw std::invalid_argument("CsvBuilder: column count mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) buffer_ += ",";
        buffer_ += cells[i];
    }
    buffer_ += "\n";
}

nlohmann::json result_json(const Provenance& provenance,
                           const std::vector<std::string>& columns,
                           const std::vector<std::vector<double>>& rows) {
    nlohmann::json prov;
    prov["tool"] = std::string("cvqkd ") + kVersion;
    prov["command"] = provenance.command;
    for (const auto& [k, v] : provenance.items) prov[k] = v;

    nlohmann::json out;
    out["schema_version"] = kSchemaVersion;
    out["provenance"] = prov;
    out["columns"] = columns;
    out["rows"] = rows;
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out.good())
        throw std::runtime_error("cannot open for writing: " + path);
    out << text;
    if (!out.good()) throw std::runtime_error("write failed: " + path);
}

std::string grid_csv(const GridSummary& summary, const Provenance& provenance) {
    CsvBuilder csv(provenance, {"lambda_a", "t_s", "range_km",
                                "fidelity_at_range", "k_at_range",
                                "converged"});
    for (const RangeResult& r : summary.results) {
        csv.add_row_raw({format_sig(r.lambda_a), format_sig(r.t_s),
                         format_sig(r.range_km),
                         format_sig(r.fidelity_at_range),
                         format_sig(r.k_at_range), r.converged ? "1" : "0"});
    }
    return csv.str();
}

}  // namespace cvqkd
