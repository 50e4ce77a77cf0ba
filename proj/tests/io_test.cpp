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

#include <doctest.h>

#include <cstdlib>
#include <limits>
#include <sstream>
#include <string>

namespace kalls {
namespace {

ActiveRecord record(std::initializer_list<double> xs, Label y, double lb, Index src) {
  ActiveRecord r;
  r.point.resize(static_cast<Index>(xs.size()));
  Index j = 0;
  for (double x : xs) r.point(j++) = x;
  r.inferred_label = y;
  r.lb = lb;
  r.source_index = src;
  return r;
}

TEST_CASE("format_real round-trips doubles") {
  for (double v : {0.1, 1.0 / 3, 1e-300, -2.5e17, 0.0,
                   std::numeric_limits<double>::denorm_min()}) {
    CHECK(std::strtod(format_real(v).c_str(), nullptr) == v);
  }
  CHECK(format_real(0.5) == "0.5");
}

TEST_CASE("active set csv round trip") {
  ActiveSet a;
  a.records.push_back(record({0.1, 1.0 / 3}, 1, 0.0625, 7));
  a.records.push_back(record({0.9, 2e-9}, 0, 1.0 / 7, 12));
  std::stringstream buf;
  write_active_set_csv(buf, a, 2, "kalls test\nsecond line");
  const std::string text = buf.str();
  CHECK(text.rfind("# kalls test\n# second line\nx0,x1,label,lb,source_index\n", 0) == 0);

  const ActiveSet b = read_active_set_csv(buf);
  REQUIRE(b.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(b.records[i].point == a.records[i].point);
    CHECK(b.records[i].inferred_label == a.records[i].inferred_label);
    CHECK(b.records[i].lb == a.records[i].lb);
    CHECK(b.records[i].source_index == a.records[i].source_index);
  }
}

TEST_CASE("empty active set keeps its header") {
  std::stringstream buf;
  write_active_set_csv(buf, ActiveSet{}, 3);
  CHECK(buf.str() == "x0,x1,x2,label,lb,source_index\n");
  CHECK(read_active_set_csv(buf).empty());
}

TEST_CASE("malformed active set csv is rejected with a line number") {
  auto fails = [](const std::string& text) {
    std::istringstream in(text);
    try {
      read_active_set_csv(in);
    } catch (const std::invalid_argument& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(fails("").find("no header") != std::string::npos);
  CHECK(fails("x0,label,lb,source_index\n0.5,1,0.1\n").find("line 2") !=
        std::string::npos);
  CHECK(fails("x0,label,lb,source_index\n0.5,2,0.1,3\n").find("line 2") !=
        std::string::npos);
  CHECK(fails("# c\nx0,label,lb,source_index\n0.5,1,abc,3\n").find("line 3") !=
        std::string::npos);
  CHECK_FALSE(fails("x0,label,lb,source_index\n0.5,1,0.1,3\n").size() > 0);
}

TEST_CASE("trace json layout") {
  RunTrace t;
  t.budget = 100;
  t.labels_spent = 40;
  t.fresh_requests = 30;
  t.points_scanned = 2;
  t.reliable_skips = 1;
  t.informative_indices = {5};
  t.stopped_reason = StopReason::kPoolExhausted;
  PointLog p;
  p.s = 2;
  p.index = 5;
  p.delta_s = 0.05 / 128;
  p.k_prime = 300;
  p.queries = 40;
  p.eta_hat = 1;
  p.y_hat = 1;
  p.radius = 0.4;
  p.lb = 0.1;
  p.cut_off = true;
  p.accepted = true;
  t.points.push_back(p);

  const auto j = trace_to_json(t);
  CHECK(j["run"]["budget"] == 100);
  CHECK(j["run"]["labels_spent"] == 40);
  CHECK(j["run"]["stopped_reason"] == to_string(StopReason::kPoolExhausted));
  CHECK(j["run"]["informative_indices"] == nlohmann::json::array({5}));
  REQUIRE(j["points"].size() == 1);
  CHECK(j["points"][0]["s"] == 2);
  CHECK(j["points"][0]["delta_s"].get<double>() == 0.05 / 128);
  CHECK(j["points"][0]["k_tilde"].is_null());
  CHECK(j.dump() == trace_to_json(t).dump());
}

}  // namespace
}  // namespace kalls
