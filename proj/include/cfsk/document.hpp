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

// Structured result documents: the JSON form of tables, maps and minima
// reports, plus the envelope every CLI run emits.

#include <string>

#include <json.hpp>

#include "cfsk/sweep.hpp"
#include "cfsk/table.hpp"

namespace cfsk {

inline constexpr int kSchemaVersion = 1;

/// Build identifier baked in at configure time (git describe).
std::string build_id();

/// Non-finite doubles are stored as the strings "inf", "-inf" and "nan" so the
/// document stays valid JSON and still round-trips.
nlohmann::json table_to_json(const Table& table);
Table table_from_json(const nlohmann::json& j);

nlohmann::json map_to_json(const SweepMap& map);
SweepMap map_from_json(const nlohmann::json& j);

nlohmann::json minima_to_json(const MinimaReport& report);
/// Flat table form: one row per minimum with a role column.
Table minima_table(const MinimaReport& report, const GridSpec& grid);

}  // namespace cfsk
