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
 * Deterministic result serialization.  Every emitted file embeds the tool
 * version, schema version and the full run configuration, carries numbers
 * at 12 significant digits, and uses LF line endings; two runs with the
 * same configuration produce byte-identical files.
 */

#pragma once

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cvqkd/optimizer.hpp"

namespace cvqkd {

/// Run metadata embedded in every output: ordered key/value pairs plus
/// the command name.  Keys appear in insertion order in CSV comments.
struct Provenance {
    std::string command;
    std::vector<std::pair<std::string, std::string>> items;

    void add(const std::string& key, const std::string& value);
    void add(const std::string& key, double value);
    void add(const std::string& key, int value);
};

/// Number formatting used in all outputs: up to 12 significant digits.
std::string format_sig(double value);

/// CSV assembly: provenance comment lines, one header row, data rows.
class CsvBuilder {
  public:
    explicit CsvBuilder(const Provenance& provenance,
                        std::vector<std::string> columns);

    void add_row(const std::vector<double>& values);
    void add_row_raw(const std::vector<std::string>& cells);

    const std::string& str() const { return buffer_; }

  private:
    std::string buffer_;
    std::size_t n_columns_;
};

/// JSON mirror of a CSV: {"schema_version", "provenance", "columns",
/// "rows"}.
nlohmann::json result_json(const Provenance& provenance,
                           const std::vector<std::string>& columns,
                           const std::vector<std::vector<double>>& rows);

/// Writes text to a file (LF endings), or to stdout when path is empty.
void write_text(const std::string& path, const std::string& text);

/// Serializes a grid summary as CSV with columns
/// lambda_a,t_s,range_km,fidelity_at_range,k_at_range,converged.
std::string grid_csv(const GridSummary& summary, const Provenance& provenance);

}  // namespace cvqkd
