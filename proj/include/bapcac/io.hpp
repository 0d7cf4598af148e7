// Copyright 2026 The bapcac Authors
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

// File formats: instance, solution and generator-spec JSON, the LP export,
// and the sweep CSV. Every decimal travels as a string.

#pragma once

#include <algorithm>
#include <cstdlib>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bapcac/adjacency.hpp"
#include "bapcac/decimal.hpp"
#include "bapcac/evaluator.hpp"
#include "bapcac/generator.hpp"
#include "bapcac/instance.hpp"
#include "bapcac/solver_report.hpp"

namespace bapcac {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

namespace detail {

// Field access that reports the dotted path of whatever is missing or of
// the wrong type.
inline const Json& field(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw InputError(path.empty() ? "expected an object" : path + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw InputError("missing field '" + (path.empty() ? key : path + "." + key) + "'");
  return *it;
}

inline std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

inline std::int64_t as_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw InputError(path + ": expected an integer");
  return j.get<std::int64_t>();
}

inline int as_int32(const Json& j, const std::string& path) {
  const std::int64_t v = as_int(j, path);
  if (v < -2147483647LL || v > 2147483647LL) throw InputError(path + ": integer out of range");
  return static_cast<int>(v);
}

inline double as_double(const Json& j, const std::string& path) {
  if (!j.is_number()) throw InputError(path + ": expected a number");
  return j.get<double>();
}

inline bool as_bool(const Json& j, const std::string& path) {
  if (!j.is_boolean()) throw InputError(path + ": expected true or false");
  return j.get<bool>();
}

inline std::string as_string(const Json& j, const std::string& path) {
  if (!j.is_string()) throw InputError(path + ": expected a string");
  return j.get<std::string>();
}

/// Decimals are strings; plain integers are accepted too.
inline Decimal as_decimal(const Json& j, const std::string& path) {
  try {
    if (j.is_string()) return Decimal::parse(j.get<std::string>());
    if (j.is_number_integer()) return Decimal::from_int(j.get<std::int64_t>());
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
  throw InputError(path + ": expected a decimal string such as \"0.25\"");
}

inline const Json& as_array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw InputError(path + ": expected an array");
  return j;
}

inline std::vector<int> as_int_list(const Json& j, const std::string& path) {
  std::vector<int> out;
  for (std::size_t k = 0; k < as_array(j, path).size(); ++k) {
    out.push_back(as_int32(j[k], path + "[" + std::to_string(k) + "]"));
  }
  return out;
}

inline Json matrix_to_json(const BinaryMatrix& m) {
  Json rows = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(static_cast<int>(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline BinaryMatrix matrix_from_json(const Json& j, int rows, int cols, const std::string& path) {
  as_array(j, path);
  if (static_cast<int>(j.size()) != rows) {
    throw InputError(path + ": expected " + std::to_string(rows) + " rows");
  }
  BinaryMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const std::string rp = path + "[" + std::to_string(r) + "]";
    const Json& row = as_array(j[static_cast<std::size_t>(r)], rp);
    if (static_cast<int>(row.size()) != cols) {
      throw InputError(rp + ": expected " + std::to_string(cols) + " columns");
    }
    for (int c = 0; c < cols; ++c) {
      const std::int64_t v = as_int(row[static_cast<std::size_t>(c)], rp + "[" + std::to_string(c) + "]");
      if (v != 0 && v != 1) throw InputError(rp + "[" + std::to_string(c) + "]: expected 0 or 1");
      m(r, c) = static_cast<std::uint8_t>(v);
    }
  }
  return m;
}

inline Json travel_to_json(const TravelConfig& t) {
  return Json{{"speed", t.speed},
              {"target_arrival", t.target_arrival},
              {"prep_delay", t.prep_delay},
              {"period_length", t.period_length},
              {"metric", to_string(t.metric)}};
}

inline TravelConfig travel_from_json(const Json& j, const std::string& path) {
  TravelConfig t;
  t.speed = as_double(field(j, "speed", path), join(path, "speed"));
  t.target_arrival = as_double(field(j, "target_arrival", path), join(path, "target_arrival"));
  t.prep_delay = as_double(field(j, "prep_delay", path), join(path, "prep_delay"));
  t.period_length = as_double(field(j, "period_length", path), join(path, "period_length"));
  if (j.contains("metric")) {
    try {
      t.metric = metric_from_string(as_string(j["metric"], join(path, "metric")));
    } catch (const InputError& e) {
      throw InputError(join(path, "metric") + ": " + e.what());
    }
  }
  return t;
}

inline Json break_types_to_json(const std::vector<BreakTypeSpec>& types) {
  Json out = Json::array();
  for (const auto& bt : types) {
    out.push_back(Json{{"id", bt.id},
                       {"min_duration", bt.min_duration},
                       {"max_duration", bt.max_duration},
                       {"max_work_before", bt.max_work_before}});
  }
  return out;
}

inline std::vector<BreakTypeSpec> break_types_from_json(const Json& j, const std::string& path) {
  std::vector<BreakTypeSpec> out;
  as_array(j, path);
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string p = path + "[" + std::to_string(k) + "]";
    BreakTypeSpec bt;
    bt.id = as_string(field(j[k], "id", p), p + ".id");
    bt.min_duration = as_int32(field(j[k], "min_duration", p), p + ".min_duration");
    bt.max_duration = as_int32(field(j[k], "max_duration", p), p + ".max_duration");
    bt.max_work_before = as_int32(field(j[k], "max_work_before", p), p + ".max_work_before");
    out.push_back(bt);
  }
  return out;
}

inline Json options_to_json(const ModelOptions& o) {
  return Json{{"preemptive", o.preemptive}, {"strict_window_equality", o.strict_window_equality}};
}

inline ModelOptions options_from_json(const Json& j, const std::string& path) {
  ModelOptions o;
  if (!j.is_object()) throw InputError(path + ": expected an object");
  if (j.contains("preemptive")) o.preemptive = as_bool(j["preemptive"], join(path, "preemptive"));
  if (j.contains("strict_window_equality")) {
    o.strict_window_equality =
        as_bool(j["strict_window_equality"], join(path, "strict_window_equality"));
  }
  return o;
}

inline void check_schema(const Json& j) {
  const std::int64_t v = as_int(field(j, "schema_version", ""), "schema_version");
  if (v != kSchemaVersion) {
    throw InputError("unsupported schema_version " + std::to_string(v) + " (expected " +
                     std::to_string(kSchemaVersion) + ")");
  }
}

}  // namespace detail

/// Parses JSON text, turning syntax errors into InputError.
inline Json parse_json(const std::string& text, const std::string& what = "input") {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(what + " is not valid JSON: " + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << content;
  if (!out) throw Error("write failed for " + path);
}

// ---------------------------------------------------------------- instance

inline Json instance_to_json(const Instance& inst) {
  Json demand = Json::array();
  for (int i = 0; i < inst.num_incident(); ++i) {
    for (int t = 0; t < inst.horizon(); ++t) {
      const Decimal d = inst.demand.at(i, t);
      if (d != Decimal{}) demand.push_back(Json::array({i, t + 1, d.to_trimmed_string()}));
    }
  }
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["grid"] = Json{{"side_length", inst.grid.side_length},
                   {"cells_per_side", inst.grid.cells_per_side},
                   {"location_cells", inst.grid.location_cells},
                   {"incident_cells", inst.grid.incident_cells}};
  j["horizon"] = inst.horizon();
  j["demand"] = std::move(demand);
  j["adjacency"] = Json{{"n_idle", detail::matrix_to_json(inst.adjacency.n_idle)},
                        {"n_break", detail::matrix_to_json(inst.adjacency.n_break)},
                        {"im_move", detail::matrix_to_json(inst.adjacency.im_move)}};
  j["agents"] = inst.agents;
  j["break_types"] = detail::break_types_to_json(inst.break_types);
  j["weight"] = inst.weight.to_trimmed_string();
  j["options"] = detail::options_to_json(inst.options);
  return j;
}

/// Parses and validates an instance document. Throws InputError naming the
/// offending field or failed invariant.
inline Instance instance_from_json(const Json& j) {
  using namespace detail;
  check_schema(j);
  Instance inst;
  const Json& g = field(j, "grid", "");
  inst.grid.side_length = as_double(field(g, "side_length", "grid"), "grid.side_length");
  inst.grid.cells_per_side = as_int32(field(g, "cells_per_side", "grid"), "grid.cells_per_side");
  inst.grid.location_cells = as_int_list(field(g, "location_cells", "grid"), "grid.location_cells");
  inst.grid.incident_cells = as_int_list(field(g, "incident_cells", "grid"), "grid.incident_cells");
  const int T = as_int32(field(j, "horizon", ""), "horizon");
  if (T < 1) throw InputError("horizon: must be >= 1");
  const int I = inst.num_incident();
  const int J = inst.num_locations();
  inst.demand.horizon = T;
  inst.demand.values.assign(static_cast<std::size_t>(I) * T, Decimal{});
  const Json& demand = as_array(field(j, "demand", ""), "demand");
  std::vector<std::uint8_t> seen(inst.demand.values.size(), 0);
  for (std::size_t k = 0; k < demand.size(); ++k) {
    const std::string p = "demand[" + std::to_string(k) + "]";
    const Json& e = as_array(demand[k], p);
    if (e.size() != 3) throw InputError(p + ": expected [position, period, \"value\"]");
    const int i = as_int32(e[0], p + "[0]");
    const int t = as_int32(e[1], p + "[1]");
    if (i < 0 || i >= I) throw InputError(p + "[0]: incident position out of range");
    if (t < 1 || t > T) throw InputError(p + "[1]: period out of range 1.." + std::to_string(T));
    const std::size_t idx = static_cast<std::size_t>(i) * T + (t - 1);
    if (seen[idx]) throw InputError(p + ": duplicate entry");
    seen[idx] = 1;
    inst.demand.values[idx] = as_decimal(e[2], p + "[2]");
  }
  const Json& adj = field(j, "adjacency", "");
  if (!adj.is_object()) throw InputError("adjacency: expected an object");
  const bool explicit_adj = adj.contains("n_idle") || adj.contains("n_break") || adj.contains("im_move");
  if (adj.contains("travel") && explicit_adj) {
    throw InputError("adjacency: give either explicit matrices or a travel config, not both");
  }
  if (adj.contains("travel")) {
    const TravelConfig cfg = travel_from_json(adj["travel"], "adjacency.travel");
    try {
      inst.adjacency = build_adjacency(inst.grid, cfg);
    } catch (const InputError& e) {
      throw InputError(std::string("adjacency.travel: ") + e.what());
    }
  } else {
    inst.adjacency.n_idle = matrix_from_json(field(adj, "n_idle", "adjacency"), I, J, "adjacency.n_idle");
    inst.adjacency.n_break = matrix_from_json(field(adj, "n_break", "adjacency"), I, J, "adjacency.n_break");
    inst.adjacency.im_move = matrix_from_json(field(adj, "im_move", "adjacency"), J, J, "adjacency.im_move");
  }
  inst.agents = as_int32(field(j, "agents", ""), "agents");
  inst.break_types = break_types_from_json(field(j, "break_types", ""), "break_types");
  inst.weight = as_decimal(field(j, "weight", ""), "weight");
  if (j.contains("options")) inst.options = options_from_json(j["options"], "options");
  require_valid(inst);
  return inst;
}

namespace detail {

inline bool is_flat(const Json& j) {
  for (const auto& e : j) {
    if (e.is_structured()) return false;
  }
  return true;
}

inline void dump_to(std::string& out, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  if (j.is_array() && (j.empty() || is_flat(j))) {
    out += j.dump();
    return;
  }
  if (j.is_array()) {
    out += "[\n";
    for (std::size_t k = 0; k < j.size(); ++k) {
      out += inner;
      dump_to(out, j[k], indent + 1);
      out += k + 1 < j.size() ? ",\n" : "\n";
    }
    out += pad + "]";
    return;
  }
  if (j.is_object() && !j.empty()) {
    out += "{\n";
    std::size_t k = 0;
    for (auto it = j.begin(); it != j.end(); ++it, ++k) {
      out += inner + Json(it.key()).dump() + ": ";
      dump_to(out, it.value(), indent + 1);
      out += k + 1 < j.size() ? ",\n" : "\n";
    }
    out += pad + "}";
    return;
  }
  out += j.dump();
}

}  // namespace detail

/// Indented JSON with arrays of scalars kept on one line.
inline std::string dump(const Json& j) {
  std::string out;
  detail::dump_to(out, j, 0);
  return out + "\n";
}

inline Instance load_instance(const std::string& path) {
  return instance_from_json(parse_json(read_file(path), path));
}

/// 64-bit FNV-1a of the canonical instance document, as 16 hex digits. The
/// weight is left out: a solve with --w still belongs to the same instance.
inline std::string instance_fingerprint(const Instance& inst) {
  Json doc = instance_to_json(inst);
  doc.erase("weight");
  const std::string text = doc.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------- solution

/// Solver settings recorded alongside a solution. Wall time is deliberately
/// absent so that files are byte-reproducible.
struct SolverMetadata {
  std::string solver;
  std::string status;
  bool proven_optimal = false;
  std::int64_t nodes_explored = 0;
  std::uint64_t seed = 0;
  double time_limit = 0.0;
  std::int64_t node_limit = 0;
  std::optional<std::string> bound{};
};

inline SolverMetadata metadata_from(const SolverReport& r, std::uint64_t seed, double time_limit,
                                    std::int64_t node_limit) {
  SolverMetadata m;
  m.solver = r.solver;
  m.status = to_string(r.status);
  m.proven_optimal = r.proven_optimal;
  m.nodes_explored = r.nodes_explored;
  m.seed = seed;
  m.time_limit = time_limit;
  m.node_limit = node_limit;
  if (r.bound) m.bound = r.bound->to_string();
  return m;
}

inline Json solution_to_json(const Instance& inst, const Solution& sol, const SolverMetadata& meta) {
  const int A = inst.agents;
  const int T = inst.horizon();
  const int I = inst.num_incident();
  const int B = inst.num_break_types();
  const Schedule& s = sol.schedule;
  const CoveragePlan& c = sol.coverage;
  Json loc = Json::array();
  Json brk = Json::array();
  Json starts = Json::array();
  Json z = Json::array();
  Json zb = Json::array();
  Json delta = Json::array();
  for (int a = 0; a < A; ++a) {
    for (int t = 0; t < T; ++t) {
      loc.push_back(Json::array({a, t + 1, s.loc(a, t)}));
      if (s.brk(a, t)) brk.push_back(Json::array({a, t + 1}));
      for (int b = 0; b < B; ++b) {
        if (s.start(a, b, t)) starts.push_back(Json::array({a, b, t + 1}));
      }
      for (int i = 0; i < I; ++i) {
        if (c.idle(a, t, i) != Decimal{}) {
          z.push_back(Json::array({a, t + 1, i, c.idle(a, t, i).to_trimmed_string()}));
        }
        if (c.on_break(a, t, i) != Decimal{}) {
          zb.push_back(Json::array({a, t + 1, i, c.on_break(a, t, i).to_trimmed_string()}));
        }
      }
    }
  }
  for (int i = 0; i < I; ++i) {
    for (int t = 0; t < T; ++t) {
      if (c.delta(i, t) != Decimal{}) {
        delta.push_back(Json::array({i, t + 1, c.delta(i, t).to_trimmed_string()}));
      }
    }
  }
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["instance"] = Json{{"agents", A},
                       {"horizon", T},
                       {"incident_cells", I},
                       {"location_cells", inst.num_locations()},
                       {"break_types", B},
                       {"fingerprint", instance_fingerprint(inst)}};
  j["schedule"] = Json{{"location", std::move(loc)}, {"on_break", std::move(brk)},
                       {"break_start", std::move(starts)}};
  j["coverage"] = Json{{"z", std::move(z)}, {"zb", std::move(zb)}, {"delta", std::move(delta)}};
  j["objective"] = sol.objective.to_string();
  j["components"] = Json{{"weight", inst.weight.to_trimmed_string()},
                         {"total_uncovered", sol.total_uncovered.to_trimmed_string()},
                         {"total_nonbreak_periods", sol.total_nonbreak_periods}};
  Json solver{{"name", meta.solver},
              {"status", meta.status},
              {"proven_optimal", meta.proven_optimal},
              {"nodes_explored", meta.nodes_explored},
              {"seed", meta.seed},
              {"time_limit", meta.time_limit},
              {"node_limit", meta.node_limit}};
  if (meta.bound) solver["bound"] = *meta.bound;
  j["solver"] = std::move(solver);
  return j;
}

/// What a solution file claims, before any feasibility checking.
struct LoadedSolution {
  Schedule schedule;
  CoveragePlan coverage;
  std::optional<ObjectiveValue> recorded_objective;
  /// components.weight, when the file has it.
  std::optional<Decimal> recorded_weight;
  std::string fingerprint;
  /// Location entries per (agent, period), [a * horizon + t]. A valid file
  /// has exactly one each; the schedule keeps the last one read.
  std::vector<int> location_entries;
};

/// Reads a solution against `inst`. Shape mismatches and a foreign instance
/// fingerprint raise StructuralError; malformed entries raise InputError.
/// Values are taken as written, so corrupt but well-formed files load and
/// are left for check_all to judge.
inline LoadedSolution solution_from_json(const Json& j, const Instance& inst) {
  using namespace detail;
  check_schema(j);
  const int A = inst.agents;
  const int T = inst.horizon();
  const int I = inst.num_incident();
  const int J = inst.num_locations();
  const int B = inst.num_break_types();
  const Json& meta = field(j, "instance", "");
  auto expect = [&](const char* key, int want) {
    const int got = as_int32(field(meta, key, "instance"), std::string("instance.") + key);
    if (got != want) {
      throw StructuralError(std::string("solution is for a different instance: ") + key + " " +
                            std::to_string(got) + " != " + std::to_string(want));
    }
  };
  expect("agents", A);
  expect("horizon", T);
  expect("incident_cells", I);
  expect("location_cells", J);
  expect("break_types", B);
  LoadedSolution out;
  out.fingerprint = as_string(field(meta, "fingerprint", "instance"), "instance.fingerprint");
  if (out.fingerprint != instance_fingerprint(inst)) {
    throw StructuralError("solution is for a different instance: fingerprint mismatch");
  }

  out.schedule = Schedule(inst);
  out.coverage = CoveragePlan(inst);
  const Json& sched = field(j, "schedule", "");
  auto index = [&](const Json& e, std::size_t k, int lo, int hi, const std::string& p) {
    const int v = as_int32(e[k], p + "[" + std::to_string(k) + "]");
    if (v < lo || v > hi) {
      throw StructuralError(p + "[" + std::to_string(k) + "]: index " + std::to_string(v) +
                            " outside " + std::to_string(lo) + ".." + std::to_string(hi));
    }
    return v;
  };
  auto entries = [&](const Json& parent, const char* key, const std::string& path,
                     std::size_t arity) -> const Json& {
    const Json& list = as_array(field(parent, key, path), path + "." + key);
    for (std::size_t k = 0; k < list.size(); ++k) {
      const std::string p = path + "." + key + "[" + std::to_string(k) + "]";
      if (!as_array(list[k], p).is_array() || list[k].size() != arity) {
        throw InputError(p + ": expected " + std::to_string(arity) + " entries");
      }
    }
    return list;
  };

  out.location_entries.assign(static_cast<std::size_t>(A) * T, 0);
  const Json& loc = entries(sched, "location", "schedule", 3);
  for (std::size_t k = 0; k < loc.size(); ++k) {
    const std::string p = "schedule.location[" + std::to_string(k) + "]";
    const int a = index(loc[k], 0, 0, A - 1, p);
    const int t = index(loc[k], 1, 1, T, p) - 1;
    const int l = index(loc[k], 2, 0, J - 1, p);
    ++out.location_entries[static_cast<std::size_t>(a) * T + t];
    out.schedule.loc(a, t) = l;
  }
  const Json& brk = entries(sched, "on_break", "schedule", 2);
  for (std::size_t k = 0; k < brk.size(); ++k) {
    const std::string p = "schedule.on_break[" + std::to_string(k) + "]";
    const int a = index(brk[k], 0, 0, A - 1, p);
    const int t = index(brk[k], 1, 1, T, p) - 1;
    ++out.schedule.brk(a, t);  // duplicates surface as a non-binary value
  }
  const Json& st = entries(sched, "break_start", "schedule", 3);
  for (std::size_t k = 0; k < st.size(); ++k) {
    const std::string p = "schedule.break_start[" + std::to_string(k) + "]";
    const int a = index(st[k], 0, 0, A - 1, p);
    const int b = index(st[k], 1, 0, B - 1, p);
    const int t = index(st[k], 2, 1, T, p) - 1;
    ++out.schedule.start(a, b, t);
  }

  const Json& cov = field(j, "coverage", "");
  for (const char* key : {"z", "zb"}) {
    const Json& list = entries(cov, key, "coverage", 4);
    for (std::size_t k = 0; k < list.size(); ++k) {
      const std::string p = std::string("coverage.") + key + "[" + std::to_string(k) + "]";
      const int a = index(list[k], 0, 0, A - 1, p);
      const int t = index(list[k], 1, 1, T, p) - 1;
      const int i = index(list[k], 2, 0, I - 1, p);
      const Decimal v = as_decimal(list[k][3], p + "[3]");
      if (key[1] == 'b') {
        out.coverage.on_break(a, t, i) = v;
      } else {
        out.coverage.idle(a, t, i) = v;
      }
    }
  }
  const Json& delta = entries(cov, "delta", "coverage", 3);
  for (std::size_t k = 0; k < delta.size(); ++k) {
    const std::string p = "coverage.delta[" + std::to_string(k) + "]";
    const int i = index(delta[k], 0, 0, I - 1, p);
    const int t = index(delta[k], 1, 1, T, p) - 1;
    out.coverage.delta(i, t) = as_decimal(delta[k][2], p + "[2]");
  }
  if (j.contains("objective")) {
    try {
      out.recorded_objective = ObjectiveValue::parse(as_string(j["objective"], "objective"));
    } catch (const InputError& e) {
      throw InputError(std::string("objective: ") + e.what());
    }
  }
  if (j.contains("components") && j["components"].contains("weight")) {
    const Decimal w = as_decimal(j["components"]["weight"], "components.weight");
    if (w < Decimal{} || w > Decimal::from_int(1)) throw InputError("components.weight must be in [0, 1]");
    out.recorded_weight = w;
  }
  return out;
}

/// check_all on a loaded file, plus the location rows (9) that the schedule's
/// one-location-per-period form cannot express: every (agent, period) needs
/// exactly one location entry. Sorted by family, stable.
inline std::vector<Violation> check_loaded(const Instance& inst, const LoadedSolution& sol) {
  std::vector<Violation> out = check_all(inst, sol.schedule, sol.coverage);
  const int T = inst.horizon();
  for (std::size_t k = 0; k < sol.location_entries.size(); ++k) {
    const int n = sol.location_entries[k];
    if (n != 1) {
      const int a = static_cast<int>(k) / T;
      const int t = static_cast<int>(k) % T;
      out.push_back({Family::kLocation, {.a = a, .t = t}, Decimal::from_int(-std::abs(n - 1))});
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Violation& x, const Violation& y) {
    return equation_number(x.constraint) < equation_number(y.constraint);
  });
  return out;
}

// ------------------------------------------------------------ generator spec

inline Json spec_to_json(const GeneratorSpec& s) {
  Json hs = Json::array();
  for (const Hotspot& h : s.hotspots) {
    hs.push_back(Json{{"center", Json::array({h.center.x, h.center.y})},
                      {"peak", h.peak.to_trimmed_string()},
                      {"spatial_spread", h.spatial_spread},
                      {"temporal_center", h.temporal_center},
                      {"temporal_spread", h.temporal_spread}});
  }
  Json j;
  j["grid_side_cells"] = s.grid_side_cells;
  if (s.side_length) j["side_length"] = *s.side_length;
  j["horizon"] = s.horizon;
  j["agents"] = s.agents;
  j["hotspots"] = std::move(hs);
  j["travel"] = detail::travel_to_json(s.travel);
  j["break_types"] = detail::break_types_to_json(s.break_types);
  j["weight"] = s.weight.to_trimmed_string();
  j["seed"] = s.seed;
  j["options"] = detail::options_to_json(s.options);
  if (s.active_cells) j["active_cells"] = *s.active_cells;
  if (s.noise != 0.0) j["noise"] = s.noise;
  return j;
}

inline GeneratorSpec spec_from_json(const Json& j) {
  using namespace detail;
  GeneratorSpec s;
  s.grid_side_cells = as_int32(field(j, "grid_side_cells", ""), "grid_side_cells");
  if (j.contains("side_length")) s.side_length = as_double(j["side_length"], "side_length");
  s.horizon = as_int32(field(j, "horizon", ""), "horizon");
  s.agents = as_int32(field(j, "agents", ""), "agents");
  const Json& hs = as_array(field(j, "hotspots", ""), "hotspots");
  for (std::size_t k = 0; k < hs.size(); ++k) {
    const std::string p = "hotspots[" + std::to_string(k) + "]";
    Hotspot h;
    const Json& c = as_array(field(hs[k], "center", p), p + ".center");
    if (c.size() != 2) throw InputError(p + ".center: expected [x, y]");
    h.center = {as_double(c[0], p + ".center[0]"), as_double(c[1], p + ".center[1]")};
    h.peak = as_decimal(field(hs[k], "peak", p), p + ".peak");
    h.spatial_spread = as_double(field(hs[k], "spatial_spread", p), p + ".spatial_spread");
    h.temporal_center = as_double(field(hs[k], "temporal_center", p), p + ".temporal_center");
    h.temporal_spread = as_double(field(hs[k], "temporal_spread", p), p + ".temporal_spread");
    s.hotspots.push_back(h);
  }
  if (j.contains("travel")) s.travel = travel_from_json(j["travel"], "travel");
  if (j.contains("break_types")) s.break_types = break_types_from_json(j["break_types"], "break_types");
  if (j.contains("weight")) s.weight = as_decimal(j["weight"], "weight");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw InputError("seed: expected a non-negative integer");
    s.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("options")) s.options = options_from_json(j["options"], "options");
  if (j.contains("active_cells")) s.active_cells = as_int_list(j["active_cells"], "active_cells");
  if (j.contains("noise")) s.noise = as_double(j["noise"], "noise");
  return s;
}

// ------------------------------------------------------------------ LP text

namespace detail {

inline std::string var_x(int a, int t, int j) {
  return "x_a" + std::to_string(a) + "t" + std::to_string(t + 1) + "j" + std::to_string(j);
}
inline std::string var_y(int a, int t) {
  return "y_a" + std::to_string(a) + "t" + std::to_string(t + 1);
}
inline std::string var_z(int a, int t, int i) {
  return "z_a" + std::to_string(a) + "t" + std::to_string(t + 1) + "i" + std::to_string(i);
}
inline std::string var_zb(int a, int t, int i) {
  return "zb_a" + std::to_string(a) + "t" + std::to_string(t + 1) + "i" + std::to_string(i);
}
inline std::string var_d(int i, int t) {
  return "d_i" + std::to_string(i) + "t" + std::to_string(t + 1);
}
inline std::string var_al(int a, int b, int t) {
  return "al_a" + std::to_string(a) + "b" + std::to_string(b) + "t" + std::to_string(t + 1);
}

/// Accumulates one linear row and writes it wrapped at ~78 columns.
class LpRow {
 public:
  void add(Decimal coef, const std::string& var) {
    if (coef == Decimal{}) return;
    terms_.emplace_back(coef, var);
  }
  void add(std::int64_t coef, const std::string& var) { add(Decimal::from_int(coef), var); }

  /// Without `rhs` the row is written as an objective (no sense, no bound).
  void write(std::ostream& os, const std::string& name, const std::string& sense,
             std::optional<Decimal> rhs) const {
    std::string line = " " + name + ":";
    auto emit = [&](const std::string& tok) {
      if (line.size() + 1 + tok.size() > 78) {
        os << line << "\n";
        line = "   ";
      }
      line += " " + tok;
    };
    if (terms_.empty()) emit("0 " + zero_var());
    bool first = true;
    for (const auto& [c, v] : terms_) {
      const bool neg = c < Decimal{};
      const Decimal mag = neg ? -c : c;
      std::string tok = neg ? "- " : (first ? "" : "+ ");
      if (mag != Decimal::from_int(1)) tok += mag.to_trimmed_string() + " ";
      tok += v;
      emit(tok);
      first = false;
    }
    if (rhs) emit(sense + " " + rhs->to_trimmed_string());
    os << line << "\n";
  }

  static std::string zero_var() { return "one"; }

 private:
  std::vector<std::pair<Decimal, std::string>> terms_;
};

}  // namespace detail

/// Writes the full mixed-integer model in LP text format. Returns the
/// number of rows written per family (equal to constraint_census).
inline CheckStats write_lp(std::ostream& os, const Instance& inst) {
  using detail::LpRow;
  require_valid(inst);
  const int A = inst.agents;
  const int T = inst.horizon();
  const int I = inst.num_incident();
  const int J = inst.num_locations();
  const int B = inst.num_break_types();
  const bool pre = inst.options.preemptive;
  const Decimal w = inst.weight;
  const Decimal one = Decimal::from_int(1);
  CheckStats rows;

  os << "\\ bapcac model: " << A << " agents, " << T << " periods, " << I
     << " incident cells, " << J << " locations, weight " << w.to_trimmed_string() << "\n";
  os << "\\ Constant term carried by the fixed variable 'one'.\n";
  os << "Minimize\n";
  {
    LpRow obj;
    for (int i = 0; i < I; ++i) {
      for (int t = 0; t < T; ++t) obj.add(w, detail::var_d(i, t));
    }
    for (int a = 0; a < A; ++a) {
      for (int t = 0; t < T; ++t) obj.add(-(one - w), detail::var_y(a, t));
    }
    obj.add((one - w) * (static_cast<std::int64_t>(A) * T), "one");
    obj.write(os, "obj", "", std::nullopt);
  }
  os << "Subject To\n";
  auto row = [&](Family f, LpRow& r, const std::string& name, const std::string& sense, Decimal rhs) {
    r.write(os, name, sense, rhs);
    ++rows[f];
  };
  auto tag = [](const std::string& fam, std::initializer_list<std::pair<char, int>> idx) {
    std::string s = fam;
    for (const auto& [c, v] : idx) s += "_" + std::string(1, c) + std::to_string(v);
    return s;
  };

  for (int i = 0; i < I; ++i) {
    for (int t = 0; t < T; ++t) {
      LpRow r;
      for (int a = 0; a < A; ++a) {
        r.add(1, detail::var_z(a, t, i));
        if (pre) r.add(1, detail::var_zb(a, t, i));
      }
      r.add(1, detail::var_d(i, t));
      row(Family::kCoverageBalance, r, tag("eq2", {{'i', i}, {'t', t + 1}}), "=", inst.demand.at(i, t));
    }
  }
  for (int a = 0; a < A; ++a) {
    for (int t = 0; t < T; ++t) {
      for (int i = 0; i < I; ++i) {
        const Decimal d = inst.demand.at(i, t);
        const auto idx = {std::pair{'a', a}, std::pair{'t', t + 1}, std::pair{'i', i}};
        LpRow r3;
        r3.add(1, detail::var_z(a, t, i));
        for (int j = 0; j < J; ++j) {
          if (inst.adjacency.n_idle(i, j)) r3.add(-d, detail::var_x(a, t, j));
        }
        row(Family::kIdleLink, r3, tag("eq3", idx), "<=", Decimal{});
        if (pre) {
          LpRow r4;
          r4.add(1, detail::var_zb(a, t, i));
          for (int j = 0; j < J; ++j) {
            if (inst.adjacency.n_break(i, j)) r4.add(-d, detail::var_x(a, t, j));
          }
          row(Family::kBreakLink, r4, tag("eq4", idx), "<=", Decimal{});
        }
        LpRow r5;
        r5.add(1, detail::var_z(a, t, i));
        r5.add(d, detail::var_y(a, t));
        row(Family::kIdleGate, r5, tag("eq5", idx), "<=", d);
        if (pre) {
          LpRow r6;
          r6.add(1, detail::var_zb(a, t, i));
          r6.add(-d, detail::var_y(a, t));
          row(Family::kBreakGate, r6, tag("eq6", idx), "<=", Decimal{});
        }
      }
      LpRow r7;
      for (int i = 0; i < I; ++i) r7.add(1, detail::var_z(a, t, i));
      row(Family::kIdleCapacity, r7, tag("eq7", {{'a', a}, {'t', t + 1}}), "<=", one);
      if (pre) {
        LpRow r8;
        for (int i = 0; i < I; ++i) r8.add(1, detail::var_zb(a, t, i));
        row(Family::kBreakCapacity, r8, tag("eq8", {{'a', a}, {'t', t + 1}}), "<=", one);
      }
      LpRow r9;
      for (int j = 0; j < J; ++j) r9.add(1, detail::var_x(a, t, j));
      row(Family::kLocation, r9, tag("eq9", {{'a', a}, {'t', t + 1}}), "=", one);
    }
  }
  for (int a = 0; a < A; ++a) {
    for (int t = 0; t + 1 < T; ++t) {
      for (int j = 0; j < J; ++j) {
        for (int j2 = 0; j2 < J; ++j2) {
          LpRow r;
          r.add(1, detail::var_x(a, t, j));
          r.add(1, detail::var_x(a, t + 1, j2));
          row(Family::kMovement, r, tag("eq10", {{'a', a}, {'t', t + 1}, {'j', j}, {'k', j2}}), "<=",
              Decimal::from_int(1 + inst.adjacency.im_move(j, j2)));
        }
      }
    }
  }
  for (int a = 0; a < A; ++a) {
    for (int b = 0; b < B; ++b) {
      const BreakTypeSpec& bt = inst.break_types[static_cast<std::size_t>(b)];
      for (int t = 0; t + bt.min_duration <= T - 1; ++t) {
        LpRow r;
        for (int u = t; u <= t + bt.min_duration; ++u) r.add(1, detail::var_y(a, u));
        r.add(-bt.min_duration, detail::var_al(a, b, t));
        row(Family::kMinDuration, r, tag("eq11", {{'a', a}, {'b', b}, {'t', t + 1}}), ">=", Decimal{});
      }
      for (int t = 0; t + bt.max_duration + 1 <= T - 1; ++t) {
        LpRow r;
        r.add(1, detail::var_y(a, t + bt.max_duration + 1));
        r.add(1, detail::var_al(a, b, t));
        row(Family::kMaxDuration, r, tag("eq12", {{'a', a}, {'b', b}, {'t', t + 1}}), "<=", one);
      }
      for (int t = 0; t + bt.max_work_before <= T - 1; ++t) {
        LpRow r;
        for (int u = t; u <= t + bt.max_work_before; ++u) r.add(1, detail::var_al(a, b, u));
        row(Family::kWindowStart, r, tag("eq13", {{'a', a}, {'b', b}, {'t', t + 1}}),
            inst.options.strict_window_equality ? "=" : ">=", one);
      }
    }
    int sb = -1;
    int lb = -1;
    if (detail::has_overlap_pair(inst, &sb, &lb)) {
      const int ms = inst.break_types[static_cast<std::size_t>(sb)].max_work_before;
      const int ml = inst.break_types[static_cast<std::size_t>(lb)].max_work_before;
      for (int t = 0; t + ml <= T - 1; ++t) {
        LpRow r;
        for (int u = t; u <= std::min(t + ms, T - 1); ++u) r.add(1, detail::var_al(a, sb, u));
        for (int u = t; u <= t + ml; ++u) r.add(1, detail::var_al(a, lb, u));
        row(Family::kOverlap, r, tag("eq14", {{'a', a}, {'t', t + 1}}), "<=", Decimal::from_int(2));
      }
    }
  }

  os << "Bounds\n";
  for (int a = 0; a < A; ++a) {
    for (int t = 0; t < T; ++t) {
      for (int i = 0; i < I; ++i) {
        os << " 0 <= " << detail::var_z(a, t, i) << " <= 1\n";
        if (pre) os << " 0 <= " << detail::var_zb(a, t, i) << " <= 1\n";
      }
    }
  }
  for (int i = 0; i < I; ++i) {
    for (int t = 0; t < T; ++t) os << " " << detail::var_d(i, t) << " >= 0\n";
  }
  os << " one = 1\n";
  os << "Binaries\n";
  for (int a = 0; a < A; ++a) {
    for (int t = 0; t < T; ++t) {
      for (int j = 0; j < J; ++j) os << " " << detail::var_x(a, t, j) << "\n";
      os << " " << detail::var_y(a, t) << "\n";
      for (int b = 0; b < B; ++b) os << " " << detail::var_al(a, b, t) << "\n";
    }
  }
  os << "End\n";
  return rows;
}

inline std::string export_lp(const Instance& inst, CheckStats* rows = nullptr) {
  std::ostringstream os;
  const CheckStats r = write_lp(os, inst);
  if (rows) *rows = r;
  return os.str();
}

// --------------------------------------------------------------------- CSV

struct SweepRow {
  Decimal w;
  std::optional<Solution> solution;
  bool proven_optimal = false;
  std::string status;
};

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "w,objective,total_uncovered,total_nonbreak_periods,proven_optimal\n";
  for (const SweepRow& r : rows) {
    out += r.w.to_trimmed_string() + ",";
    if (r.solution) {
      out += r.solution->objective.to_string() + "," + r.solution->total_uncovered.to_string() + "," +
             std::to_string(r.solution->total_nonbreak_periods) + "," +
             (r.proven_optimal ? "true" : "false") + "\n";
    } else {
      out += "FAILED(" + r.status + "),,,false\n";
    }
  }
  return out;
}

}  // namespace bapcac
