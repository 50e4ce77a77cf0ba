// Copyright 2026 The kalls Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Persistence: run traces as JSON, active sets as CSV.

#pragma once

#include "kalls/kalls.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>

namespace kalls {

/// printf("%.17g"): round-trips every double, '.' decimal separator.
std::string format_real(double v);

/// {"run": {...summary...}, "points": [...one entry per ConfidentLabel call...]}
nlohmann::ordered_json trace_to_json(const RunTrace& trace);

/// Columns x0..x{d-1}, label, lb, source_index, preceded by a header row.
/// `preamble` lines (if any) are written first, each prefixed with "# ".
void write_active_set_csv(std::ostream& out, const ActiveSet& active, int dim,
                          const std::string& preamble = {});
/// Skips "#" lines; the header fixes the dimension.
ActiveSet read_active_set_csv(std::istream& in);
ActiveSet read_active_set_csv(const std::filesystem::path& path);

}  // namespace kalls
