// Copyright 2026 The nvbath Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nvbath/errors.hpp"

namespace nvbath {

struct Column {
  std::string name;
  std::string unit;
};

struct TableMetadata {
  std::string preset;
  std::string version;
  std::string config_hash;
};

/// Rectangular result table with one declared unit per column.
struct ResultTable {
  std::string name;
  std::vector<Column> columns;
  std::vector<std::vector<double>> rows;
  TableMetadata metadata;

  void add_row(std::vector<double> row) {
    if (row.size() != columns.size())
      throw DimensionMismatch("row of " + std::to_string(row.size()) + " values for table '" + name + "' with " +
                              std::to_string(columns.size()) + " columns");
    rows.push_back(std::move(row));
  }
};

inline std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Comma-separated text with a "name:unit" header row.
inline std::string to_csv(const ResultTable& t) {
  std::string out;
  for (std::size_t k = 0; k < t.columns.size(); ++k) {
    if (k) out += ',';
    out += t.columns[k].name + ':' + t.columns[k].unit;
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out += ',';
      out += format_value(row[k]);
    }
    out += '\n';
  }
  return out;
}

inline void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  f << content;
  f.close();
  if (!f) throw IoError("failed writing '" + path.string() + "'");
}

/// Writes one CSV per table plus summary.json; returns the written paths in order.
inline std::vector<std::filesystem::path> write_results(const std::vector<ResultTable>& tables,
                                                        const nlohmann::ordered_json& summary,
                                                        const std::filesystem::path& directory, bool csv = true,
                                                        bool json = true) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw IoError("cannot create '" + directory.string() + "': " + ec.message());
  std::vector<std::filesystem::path> written;
  if (csv)
    for (const auto& t : tables) {
      const auto path = directory / (t.name + ".csv");
      write_text(path, to_csv(t));
      written.push_back(path);
    }
  if (json) {
    const auto path = directory / "summary.json";
    write_text(path, summary.dump(2) + "\n");
    written.push_back(path);
  }
  return written;
}

}  // namespace nvbath
