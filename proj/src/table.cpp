// Copyright 2026 The CFSK Receiver Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cfsk/table.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "cfsk/errors.hpp"
#include "cfsk/stats.hpp"

namespace cfsk {

namespace {

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

Cell parse_field(const std::string& field) {
  std::int64_t i = 0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (auto [ptr, ec] = std::from_chars(first, last, i); ec == std::errc() && ptr == last) {
    return i;
  }
  double d = 0.0;
  if (auto [ptr, ec] = std::from_chars(first, last, d); ec == std::errc() && ptr == last) {
    return d;
  }
  return field;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  std::istringstream ss(line);
  while (std::getline(ss, current, ',')) fields.push_back(current);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

int Table::column_index(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return static_cast<int>(i);
  }
  return -1;
}

double Table::number(std::size_t row, std::string_view column) const {
  const int idx = column_index(column);
  if (idx < 0) throw ConfigError("no column named '" + std::string(column) + "'");
  const Cell& cell = rows.at(row).at(static_cast<std::size_t>(idx));
  if (const auto* d = std::get_if<double>(&cell)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return static_cast<double>(*i);
  throw ConfigError("column '" + std::string(column) + "' is not numeric");
}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw ConfigError("row width does not match the header");
  rows.push_back(std::move(row));
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return fmt::format("{:.16e}", value);
}

std::string format_cell(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return format_double(v);
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else {
          return v;
        }
      },
      cell);
}

void write_csv(std::ostream& os, const Table& table) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    os << (i ? "," : "") << table.columns[i];
  }
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_cell(row[i]);
    os << '\n';
  }
}

Table read_csv(std::istream& is) {
  Table table;
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("empty CSV input");
  table.columns = split_line(line);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<Cell> row;
    for (const auto& field : split_line(line)) row.push_back(parse_field(field));
    table.add_row(std::move(row));
  }
  return table;
}

void add_db_columns(Table& table, std::string_view reference_column) {
  const int ref = table.column_index(reference_column);
  if (ref < 0) {
    throw ConfigError("reference column '" + std::string(reference_column) + "' not in table");
  }
  std::vector<std::string> targets;
  for (const auto& name : table.columns) {
    if (name == reference_column) continue;
    if (name == "ser" || ends_with(name, "_ser") || ends_with(name, "_hb") || ends_with(name, "_sql")) {
      targets.push_back(name);
    }
  }
  for (const auto& name : targets) {
    const std::string db_name = name + "_db";
    table.columns.push_back(db_name);
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      table.rows[r].push_back(decibels(table.number(r, name), table.number(r, reference_column)));
    }
  }
}

}  // namespace cfsk
