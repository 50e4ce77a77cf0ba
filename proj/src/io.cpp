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

#include "kalls/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace kalls {
namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <typename T>
T parse_field(const std::string& text, int line_no) {
  T value{};
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::invalid_argument("active set csv line " +
                                std::to_string(line_no) + ": bad field '" +
                                text + "'");
  }
  return value;
}

}  // namespace

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::ordered_json trace_to_json(const RunTrace& trace) {
  nlohmann::ordered_json run;
  run["budget"] = trace.budget;
  run["labels_spent"] = trace.labels_spent;
  run["fresh_requests"] = trace.fresh_requests;
  run["points_scanned"] = trace.points_scanned;
  run["reliable_skips"] = trace.reliable_skips;
  run["informative_count"] = trace.informative_indices.size();
  std::size_t accepted = 0;
  for (const PointLog& p : trace.points) accepted += p.accepted ? 1 : 0;
  run["accepted_count"] = accepted;
  run["stopped_reason"] = to_string(trace.stopped_reason);
  run["informative_indices"] = trace.informative_indices;

  nlohmann::ordered_json points = nlohmann::ordered_json::array();
  for (const PointLog& p : trace.points) {
    nlohmann::ordered_json e;
    e["s"] = p.s;
    e["index"] = p.index;
    e["delta_s"] = p.delta_s;
    e["k_prime"] = p.k_prime;
    e["queries"] = p.queries;
    e["eta_hat"] = p.eta_hat;
    e["y_hat"] = p.y_hat;
    e["radius"] = p.radius;
    e["lb"] = p.lb;
    e["cut_off"] = p.cut_off;
    e["accepted"] = p.accepted;
    e["k_tilde"] = p.k_tilde ? nlohmann::ordered_json(*p.k_tilde)
                             : nlohmann::ordered_json(nullptr);
    points.push_back(std::move(e));
  }
  nlohmann::ordered_json out;
  out["run"] = std::move(run);
  out["points"] = std::move(points);
  return out;
}

void write_active_set_csv(std::ostream& out, const ActiveSet& active, int dim,
                          const std::string& preamble) {
  if (!preamble.empty()) {
    std::istringstream lines(preamble);
    std::string line;
    while (std::getline(lines, line)) out << "# " << line << '\n';
  }
  for (int j = 0; j < dim; ++j) out << 'x' << j << ',';
  out << "label,lb,source_index\n";
  for (const ActiveRecord& rec : active.records) {
    if (rec.point.size() != dim) {
      throw std::invalid_argument("record dimension mismatch");
    }
    for (int j = 0; j < dim; ++j) out << format_real(rec.point(j)) << ',';
    out << rec.inferred_label << ',' << format_real(rec.lb) << ','
        << rec.source_index << '\n';
  }
}

ActiveSet read_active_set_csv(std::istream& in) {
  ActiveSet active;
  std::string line;
  int line_no = 0;
  int dim = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split_csv(line);
    if (dim < 0) {
      dim = static_cast<int>(fields.size()) - 3;
      if (dim < 1 || fields[static_cast<std::size_t>(dim)] != "label") {
        throw std::invalid_argument("active set csv line " +
                                    std::to_string(line_no) + ": bad header");
      }
      continue;
    }
    if (static_cast<int>(fields.size()) != dim + 3) {
      throw std::invalid_argument("active set csv line " +
                                  std::to_string(line_no) +
                                  ": wrong column count");
    }
    ActiveRecord rec;
    rec.point.resize(dim);
    for (int j = 0; j < dim; ++j) {
      rec.point(j) = parse_field<double>(fields[static_cast<std::size_t>(j)], line_no);
    }
    rec.inferred_label = parse_field<int>(fields[static_cast<std::size_t>(dim)], line_no);
    rec.lb = parse_field<double>(fields[static_cast<std::size_t>(dim) + 1], line_no);
    rec.source_index =
        parse_field<long long>(fields[static_cast<std::size_t>(dim) + 2], line_no);
    if (rec.inferred_label != 0 && rec.inferred_label != 1) {
      throw std::invalid_argument("active set csv line " +
                                  std::to_string(line_no) + ": label not 0/1");
    }
    active.records.push_back(std::move(rec));
  }
  if (dim < 0) throw std::invalid_argument("active set csv has no header");
  return active;
}

ActiveSet read_active_set_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_active_set_csv(in);
}

}  // namespace kalls
