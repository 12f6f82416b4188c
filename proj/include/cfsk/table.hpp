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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cfsk {

using Cell = std::variant<std::int64_t, double, std::string>;

/// Rectangular result table with named columns. Emitted as CSV with one
/// header line; doubles use scientific notation with 17 significant digits so
/// that they parse back exactly.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  int column_index(std::string_view name) const;  // -1 when absent
  double number(std::size_t row, std::string_view column) const;
  void add_row(std::vector<Cell> row);

  bool operator==(const Table&) const = default;
};

std::string format_double(double value);
std::string format_cell(const Cell& cell);

void write_csv(std::ostream& os, const Table& table);
/// Parses CSV produced by write_csv. Integers stay integers, other numeric
/// fields become doubles ("inf", "-inf", "nan" included), the rest strings.
Table read_csv(std::istream& is);

/// Appends `<col>_db` = 10 log10(col / reference) for every column named "ser"
/// or ending in "_ser", "_hb" or "_sql", except the reference itself.
void add_db_columns(Table& table, std::string_view reference_column);

}  // namespace cfsk
