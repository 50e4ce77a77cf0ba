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

#include "kalls/config.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace kalls {
namespace {

using Json = nlohmann::json;

int line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  int line = 1;
  for (std::size_t i = 0; i < offset; ++i) line += text[i] == '\n' ? 1 : 0;
  return line;
}

// Line of the first occurrence of "key" at or after `from`, 0 if absent.
int line_of_key(std::string_view text, std::string_view key,
                std::size_t from = 0) {
  const std::string quoted = "\"" + std::string(key) + "\"";
  const std::size_t pos = text.find(quoted, from);
  return pos == std::string_view::npos ? 0 : line_of_offset(text, pos);
}

class Reader {
 public:
  Reader(std::string_view text, const Json& object, std::string scope,
         std::size_t search_from)
      : text_(text), object_(object), scope_(std::move(scope)),
        from_(search_from) {}

  [[noreturn]] void fail(std::string_view key, const std::string& what) const {
    const int line = line_of_key(text_, key, from_);
    std::ostringstream msg;
    msg << "config";
    if (line > 0) msg << " line " << line;
    msg << ": " << scope_ << key << ": " << what;
    throw ConfigError(msg.str());
  }

  void reject_unknown(const std::set<std::string>& known) const {
    for (const auto& [key, value] : object_.items()) {
      if (!known.contains(key)) fail(key, "unknown key");
    }
  }

  const Json* find(std::string_view key) const {
    const auto it = object_.find(std::string(key));
    return it == object_.end() ? nullptr : &*it;
  }

  void real(std::string_view key, double& out) const {
    if (const Json* v = find(key)) {
      if (!v->is_number()) fail(key, "expected a number");
      out = v->get<double>();
    }
  }

  template <typename Int>
  void integer(std::string_view key, Int& out) const {
    if (const Json* v = find(key)) {
      if (!v->is_number_integer()) fail(key, "expected an integer");
      const auto value = v->get<std::int64_t>();
      if (value < std::numeric_limits<Int>::min() ||
          value > std::numeric_limits<Int>::max()) {
        fail(key, "integer out of range");
      }
      out = static_cast<Int>(value);
    }
  }

  void string(std::string_view key, std::string& out) const {
    if (const Json* v = find(key)) {
      if (!v->is_string()) fail(key, "expected a string");
      out = v->get<std::string>();
    }
  }

  void budgets(std::string_view key, std::vector<std::int64_t>& out) const {
    if (const Json* v = find(key)) {
      if (!v->is_array()) fail(key, "expected an array of integers");
      out.clear();
      for (const Json& e : *v) {
        if (!e.is_number_integer()) fail(key, "expected an array of integers");
        out.push_back(e.get<std::int64_t>());
      }
    }
  }

  void seeds(std::string_view key, std::vector<std::uint64_t>& out) const {
    if (const Json* v = find(key)) {
      if (!v->is_array()) fail(key, "expected an array of unsigned integers");
      out.clear();
      for (const Json& e : *v) {
        if (!e.is_number_unsigned()) {
          fail(key, "expected an array of unsigned integers");
        }
        out.push_back(e.get<std::uint64_t>());
      }
    }
  }

  template <typename T, typename Parse>
  void named(std::string_view key, T& out, Parse parse) const {
    std::string name;
    string(key, name);
    if (find(key) == nullptr) return;
    try {
      out = parse(name);
    } catch (const std::exception& e) {
      fail(key, e.what());
    }
  }

 private:
  std::string_view text_;
  const Json& object_;
  std::string scope_;
  std::size_t from_;
};

}  // namespace

KallsConfig ExperimentConfig::kalls(std::int64_t budget) const {
  KallsConfig k;
  k.epsilon = epsilon;
  k.delta = delta;
  k.n = budget;
  k.c_const = c_const;
  k.u_const = u_const;
  k.lb_factor = lb_factor;
  k.budget_mode = budget_mode;
  k.pool_sampling = pool_sampling;
  return k;
}

void ExperimentConfig::validate() const {
  try {
    SyntheticProblem(problem, 0);
    if (pool_size < 2) throw std::invalid_argument("pool_size must be >= 2");
    if (budgets.empty()) throw std::invalid_argument("budgets must be nonempty");
    if (seeds.empty()) throw std::invalid_argument("seeds must be nonempty");
    if (n_test < 1) throw std::invalid_argument("n_test must be >= 1");
    for (const std::int64_t b : budgets) kalls(b).validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

ExperimentConfig parse_config(std::string_view text) {
  Json root;
  try {
    root = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw ConfigError("config line " + std::to_string(line_of_offset(text, e.byte)) +
                      ": " + e.what());
  }
  if (!root.is_object()) throw ConfigError("config line 1: expected an object");

  ExperimentConfig c;
  const Reader top(text, root, "", 0);
  top.reject_unknown({"problem", "pool_size", "budgets", "epsilon", "delta",
                      "c_const", "u_const", "lb_factor", "budget_mode",
                      "pool_sampling", "seeds", "n_test", "output"});
  if (const Json* p = top.find("problem")) {
    if (!p->is_object()) top.fail("problem", "expected an object");
    const std::size_t from = text.find("\"problem\"");
    const Reader sub(text, *p, "problem.", from == std::string_view::npos ? 0 : from);
    sub.reject_unknown({"family", "kappa", "d", "atoms"});
    sub.named("family", c.problem.family, family_from_string);
    sub.real("kappa", c.problem.kappa);
    sub.integer("d", c.problem.d);
    sub.integer("atoms", c.problem.atoms);
  }
  top.integer("pool_size", c.pool_size);
  top.budgets("budgets", c.budgets);
  top.real("epsilon", c.epsilon);
  top.real("delta", c.delta);
  top.real("c_const", c.c_const);
  top.integer("u_const", c.u_const);
  top.real("lb_factor", c.lb_factor);
  top.named("budget_mode", c.budget_mode, budget_mode_from_string);
  top.named("pool_sampling", c.pool_sampling, pool_sampling_from_string);
  top.seeds("seeds", c.seeds);
  top.integer("n_test", c.n_test);
  top.string("output", c.output);
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

nlohmann::ordered_json to_json(const ExperimentConfig& c) {
  nlohmann::ordered_json j;
  j["problem"] = {{"family", to_string(c.problem.family)},
                  {"kappa", c.problem.kappa},
                  {"d", c.problem.d},
                  {"atoms", c.problem.atoms}};
  j["pool_size"] = c.pool_size;
  j["budgets"] = c.budgets;
  j["epsilon"] = c.epsilon;
  j["delta"] = c.delta;
  j["c_const"] = c.c_const;
  j["u_const"] = c.u_const;
  j["lb_factor"] = c.lb_factor;
  j["budget_mode"] = to_string(c.budget_mode);
  j["pool_sampling"] = to_string(c.pool_sampling);
  j["seeds"] = c.seeds;
  j["n_test"] = c.n_test;
  j["output"] = c.output;
  return j;
}

std::string serialize_config(const ExperimentConfig& config) {
  return to_json(config).dump(2) + "\n";
}

}  // namespace kalls
