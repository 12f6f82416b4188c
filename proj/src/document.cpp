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

#include "cfsk/document.hpp"

#include <cmath>
#include <limits>

#include "cfsk/errors.hpp"

#ifndef CFSK_BUILD_ID
#define CFSK_BUILD_ID "unknown"
#endif

namespace cfsk {

namespace {

nlohmann::json number_to_json(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw ConfigError("expected a number, got '" + s + "'");
  }
  return j.get<double>();
}

nlohmann::json point_to_json(const MapPoint& p) {
  return {{"i", p.i}, {"j", p.j}, {"x", p.x}, {"y", p.y}, {"value", number_to_json(p.value)}};
}

}  // namespace

std::string build_id() { return CFSK_BUILD_ID; }

nlohmann::json table_to_json(const Table& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& cell : row) {
      if (const auto* d = std::get_if<double>(&cell)) {
        // Tag doubles so that integral values do not come back as integers.
        r.push_back(nlohmann::json{{"f", number_to_json(*d)}});
      } else if (const auto* i = std::get_if<std::int64_t>(&cell)) {
        r.push_back(*i);
      } else {
        r.push_back(std::get<std::string>(cell));
      }
    }
    rows.push_back(std::move(r));
  }
  return {{"columns", table.columns}, {"rows", std::move(rows)}};
}

Table table_from_json(const nlohmann::json& j) {
  Table table;
  table.columns = j.at("columns").get<std::vector<std::string>>();
  for (const auto& r : j.at("rows")) {
    std::vector<Cell> row;
    for (const auto& cell : r) {
      if (cell.is_object()) {
        row.emplace_back(number_from_json(cell.at("f")));
      } else if (cell.is_number_integer()) {
        row.emplace_back(cell.get<std::int64_t>());
      } else if (cell.is_number()) {
        row.emplace_back(cell.get<double>());
      } else {
        row.emplace_back(cell.get<std::string>());
      }
    }
    table.add_row(std::move(row));
  }
  return table;
}

nlohmann::json map_to_json(const SweepMap& map) {
  nlohmann::json values = nlohmann::json::array();
  for (double v : map.values) values.push_back(number_to_json(v));
  return {{"x", {{"name", map.grid.x.name}, {"values", map.grid.x.values}}},
          {"y", {{"name", map.grid.y.name}, {"values", map.grid.y.values}}},
          {"values", std::move(values)},
          {"metadata", map.metadata}};
}

SweepMap map_from_json(const nlohmann::json& j) {
  GridSpec grid{Axis::list(j.at("x").at("name").get<std::string>(),
                           j.at("x").at("values").get<std::vector<double>>()),
                Axis::list(j.at("y").at("name").get<std::string>(),
                           j.at("y").at("values").get<std::vector<double>>())};
  SweepMap map(std::move(grid));
  const auto& values = j.at("values");
  if (static_cast<std::int64_t>(values.size()) != map.grid.cells()) {
    throw ConfigError("map value count does not match its grid");
  }
  for (std::size_t k = 0; k < values.size(); ++k) map.values[k] = number_from_json(values[k]);
  map.metadata = j.value("metadata", std::map<std::string, std::string>{});
  return map;
}

nlohmann::json minima_to_json(const MinimaReport& report) {
  nlohmann::json j;
  j["global_min"] = report.global_min ? point_to_json(*report.global_min) : nlohmann::json();
  j["secondary_min"] = report.secondary_min ? point_to_json(*report.secondary_min) : nlohmann::json();
  if (report.global_min && report.secondary_min && report.global_min->x > 0.0) {
    j["secondary_to_global_x_ratio"] = report.secondary_min->x / report.global_min->x;
  }
  nlohmann::json all = nlohmann::json::array();
  for (const auto& p : report.local_minima) all.push_back(point_to_json(p));
  j["local_minima"] = std::move(all);
  return j;
}

Table minima_table(const MinimaReport& report, const GridSpec& grid) {
  Table t;
  t.columns = {"role", "i", "j", grid.x.name, grid.y.name, "value"};
  const auto add = [&](const std::string& role, const MapPoint& p) {
    t.add_row({role, std::int64_t{p.i}, std::int64_t{p.j}, p.x, p.y, p.value});
  };
  if (report.global_min) add("global", *report.global_min);
  if (report.secondary_min) add("secondary", *report.secondary_min);
  for (const auto& p : report.local_minima) add("local", p);
  return t;
}

}  // namespace cfsk
