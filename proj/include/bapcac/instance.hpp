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

// Problem datum and decision types for the break assignment problem with
// area coverage.
//
// Indexing conventions used throughout the library:
//   - agents a in [0, agents)
//   - periods t in [0, horizon); files and LP names print t + 1
//   - location positions j in [0, grid.location_cells.size())
//   - incident positions i in [0, grid.incident_cells.size())
//   - break types b in [0, break_types.size())
// Location and incident positions index into the grid's cell lists, so the
// same grid cell may appear as both a location and an incident area.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bapcac/decimal.hpp"

namespace bapcac {

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

/// Square environment [0, side_length]^2 cut into cells_per_side^2 equal
/// cells. Cell id = row * cells_per_side + col.
struct Grid {
  double side_length = 1.0;
  int cells_per_side = 1;
  std::vector<int> location_cells;
  std::vector<int> incident_cells;

  int num_cells() const { return cells_per_side * cells_per_side; }
  double cell_size() const { return side_length / cells_per_side; }

  Point cell_center(int cell) const {
    const int row = cell / cells_per_side;
    const int col = cell % cells_per_side;
    return {(col + 0.5) * cell_size(), (row + 0.5) * cell_size()};
  }

  std::vector<Point> cell_centers() const {
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(num_cells()));
    for (int c = 0; c < num_cells(); ++c) out.push_back(cell_center(c));
    return out;
  }

  friend bool operator==(const Grid&, const Grid&) = default;
};

/// One break type of the fractionable / variable / workstretch break model.
/// All durations are period counts.
struct BreakTypeSpec {
  std::string id;
  int min_duration = 1;
  int max_duration = 1;
  int max_work_before = 1;

  friend bool operator==(const BreakTypeSpec&, const BreakTypeSpec&) = default;
};

/// Short (1..2 periods, due every 3*scale) and long (2..4, due every
/// 6*scale) breaks, following the usual 3 h / 4-6 h labour guidance when one
/// hour equals `periods_per_hour` periods.
inline std::vector<BreakTypeSpec> default_break_types(int periods_per_hour = 1) {
  return {{"short", 1, 2, 3 * periods_per_hour},
          {"long", 2, 4, 6 * periods_per_hour}};
}

/// Demand D(i, t), dense over incident positions x periods.
struct DemandField {
  int horizon = 1;
  std::vector<Decimal> values;  // values[i * horizon + t]

  Decimal at(int i, int t) const {
    return values[static_cast<std::size_t>(i) * horizon + t];
  }
  Decimal& at(int i, int t) {
    return values[static_cast<std::size_t>(i) * horizon + t];
  }
  int num_cells() const {
    return horizon > 0 ? static_cast<int>(values.size()) / horizon : 0;
  }

  friend bool operator==(const DemandField&, const DemandField&) = default;
};

/// Dense row-major 0/1 matrix.
class BinaryMatrix {
 public:
  BinaryMatrix() = default;
  BinaryMatrix(int rows, int cols, std::uint8_t fill = 0)
      : rows_(rows),
        cols_(cols),
        data_(static_cast<std::size_t>(rows) * cols, fill) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::uint8_t operator()(int r, int c) const {
    return data_[static_cast<std::size_t>(r) * cols_ + c];
  }
  std::uint8_t& operator()(int r, int c) {
    return data_[static_cast<std::size_t>(r) * cols_ + c];
  }
  bool is_binary() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](std::uint8_t v) { return v <= 1; });
  }

  friend bool operator==(const BinaryMatrix&, const BinaryMatrix&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::uint8_t> data_;
};

/// N (idle reach), N-bar (on-break reach), IM (inter-period movement).
struct AdjacencySet {
  BinaryMatrix n_idle;   // incident x location
  BinaryMatrix n_break;  // incident x location
  BinaryMatrix im_move;  // location x location

  friend bool operator==(const AdjacencySet&, const AdjacencySet&) = default;
};

struct ModelOptions {
  /// On-break vehicles may cover demand (with their reduced reach).
  bool preemptive = true;
  /// Break-start windows require exactly one start; false relaxes to >= 1.
  bool strict_window_equality = true;

  friend bool operator==(const ModelOptions&, const ModelOptions&) = default;
};

struct Instance {
  Grid grid;
  DemandField demand;
  AdjacencySet adjacency;
  int agents = 1;
  std::vector<BreakTypeSpec> break_types;
  Decimal weight = Decimal::from_raw(500);
  ModelOptions options;

  int horizon() const { return demand.horizon; }
  int num_locations() const {
    return static_cast<int>(grid.location_cells.size());
  }
  int num_incident() const {
    return static_cast<int>(grid.incident_cells.size());
  }
  int num_break_types() const { return static_cast<int>(break_types.size()); }

  /// Index of the break type with the given id, or -1.
  int break_type_index(const std::string& id) const {
    for (int b = 0; b < num_break_types(); ++b) {
      if (break_types[static_cast<std::size_t>(b)].id == id) return b;
    }
    return -1;
  }

  friend bool operator==(const Instance&, const Instance&) = default;
};

/// Binary decisions. The location map is total, so "each agent occupies
/// exactly one location per period" holds by construction.
struct Schedule {
  int agents = 0;
  int horizon = 0;
  int num_break_types = 0;
  std::vector<int> location;             // [a * horizon + t] -> location position
  std::vector<std::uint8_t> on_break;    // [a * horizon + t]
  std::vector<std::uint8_t> break_start; // [(a * B + b) * horizon + t]

  Schedule() = default;
  Schedule(int num_agents, int num_periods, int break_type_count)
      : agents(num_agents),
        horizon(num_periods),
        num_break_types(break_type_count),
        location(static_cast<std::size_t>(num_agents) * num_periods, 0),
        on_break(static_cast<std::size_t>(num_agents) * num_periods, 0),
        break_start(static_cast<std::size_t>(num_agents) * break_type_count *
                        num_periods,
                    0) {}

  explicit Schedule(const Instance& inst)
      : Schedule(inst.agents, inst.horizon(), inst.num_break_types()) {}

  int& loc(int a, int t) { return location[idx(a, t)]; }
  int loc(int a, int t) const { return location[idx(a, t)]; }
  std::uint8_t& brk(int a, int t) { return on_break[idx(a, t)]; }
  std::uint8_t brk(int a, int t) const { return on_break[idx(a, t)]; }
  std::uint8_t& start(int a, int b, int t) {
    return break_start[(static_cast<std::size_t>(a) * num_break_types + b) *
                           horizon + t];
  }
  std::uint8_t start(int a, int b, int t) const {
    return break_start[(static_cast<std::size_t>(a) * num_break_types + b) *
                           horizon + t];
  }

  friend bool operator==(const Schedule&, const Schedule&) = default;

 private:
  std::size_t idx(int a, int t) const {
    return static_cast<std::size_t>(a) * horizon + t;
  }
};

/// Continuous decisions z, z-bar, delta.
struct CoveragePlan {
  int agents = 0;
  int horizon = 0;
  int num_incident = 0;
  std::vector<Decimal> idle_cover;   // [(a * horizon + t) * I + i]
  std::vector<Decimal> break_cover;  // same shape
  std::vector<Decimal> uncovered;    // [i * horizon + t]

  CoveragePlan() = default;
  CoveragePlan(int num_agents, int num_periods, int incident)
      : agents(num_agents),
        horizon(num_periods),
        num_incident(incident),
        idle_cover(static_cast<std::size_t>(num_agents) * num_periods * incident),
        break_cover(idle_cover.size()),
        uncovered(static_cast<std::size_t>(incident) * num_periods) {}

  explicit CoveragePlan(const Instance& inst)
      : CoveragePlan(inst.agents, inst.horizon(), inst.num_incident()) {}

  Decimal& idle(int a, int t, int i) { return idle_cover[cidx(a, t, i)]; }
  Decimal idle(int a, int t, int i) const { return idle_cover[cidx(a, t, i)]; }
  Decimal& on_break(int a, int t, int i) { return break_cover[cidx(a, t, i)]; }
  Decimal on_break(int a, int t, int i) const {
    return break_cover[cidx(a, t, i)];
  }
  Decimal& delta(int i, int t) {
    return uncovered[static_cast<std::size_t>(i) * horizon + t];
  }
  Decimal delta(int i, int t) const {
    return uncovered[static_cast<std::size_t>(i) * horizon + t];
  }

  friend bool operator==(const CoveragePlan&, const CoveragePlan&) = default;

 private:
  std::size_t cidx(int a, int t, int i) const {
    return (static_cast<std::size_t>(a) * horizon + t) * num_incident + i;
  }
};

struct Solution {
  Schedule schedule;
  CoveragePlan coverage;
  ObjectiveValue objective;
  Decimal total_uncovered;
  std::int64_t total_nonbreak_periods = 0;

  friend bool operator==(const Solution&, const Solution&) = default;
};

/// One failed well-formedness invariant of an instance.
struct InvariantViolation {
  std::string invariant;
  std::string detail;
};

/// Every well-formedness check on an instance. Empty iff the instance is
/// usable by the evaluator and the solvers.
inline std::vector<InvariantViolation> validate_instance(const Instance& inst) {
  std::vector<InvariantViolation> out;
  auto fail = [&out](std::string name, std::string detail) {
    out.push_back({std::move(name), std::move(detail)});
  };

  const Grid& g = inst.grid;
  if (!(g.side_length > 0.0)) fail("grid_side_length", "side_length must be > 0");
  if (g.cells_per_side < 1) fail("grid_cells_per_side", "cells_per_side must be >= 1");
  auto check_subset = [&](const std::vector<int>& cells, const std::string& name) {
    std::set<int> seen;
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (cells[k] < 0 || cells[k] >= g.num_cells()) {
        fail(name + "_range", name + "[" + std::to_string(k) + "] = " +
                                  std::to_string(cells[k]) + " is not a grid cell");
      } else if (!seen.insert(cells[k]).second) {
        fail(name + "_duplicate", "cell " + std::to_string(cells[k]) +
                                      " listed twice in " + name);
      }
    }
  };
  check_subset(g.location_cells, "location_cells");
  check_subset(g.incident_cells, "incident_cells");
  if (g.location_cells.empty()) fail("location_cells_empty", "no location cells");

  const int T = inst.horizon();
  const int I = inst.num_incident();
  const int J = inst.num_locations();
  if (T < 1) fail("horizon", "horizon must be >= 1");
  if (inst.agents < 1) fail("agents", "agents must be >= 1");
  if (inst.weight < Decimal::from_int(0) || inst.weight > Decimal::from_int(1)) {
    fail("weight_range", "weight " + inst.weight.to_trimmed_string() +
                             " outside [0, 1]");
  }

  if (T >= 1 && inst.demand.values.size() != static_cast<std::size_t>(I) * T) {
    fail("demand_shape", "demand has " + std::to_string(inst.demand.values.size()) +
                             " values, expected incident_cells x horizon = " +
                             std::to_string(I * T));
  } else if (T >= 1) {
    for (int i = 0; i < I; ++i) {
      bool positive = false;
      for (int t = 0; t < T; ++t) {
        const Decimal d = inst.demand.at(i, t);
        if (d < Decimal{}) {
          fail("demand_nonnegative", "D(" + std::to_string(i) + ", " +
                                         std::to_string(t + 1) + ") < 0");
        }
        positive = positive || d > Decimal{};
      }
      if (!positive) {
        fail("incident_positive_demand",
             "incident position " + std::to_string(i) + " has no positive demand");
      }
    }
  }

  std::set<std::string> ids;
  for (std::size_t b = 0; b < inst.break_types.size(); ++b) {
    const BreakTypeSpec& bt = inst.break_types[b];
    const std::string tag = "break_types[" + std::to_string(b) + "]";
    if (!ids.insert(bt.id).second) fail("break_type_id_unique", tag + " repeats id " + bt.id);
    if (bt.min_duration < 1) fail("break_min_duration", tag + ".min_duration < 1");
    if (bt.max_duration < bt.min_duration) {
      fail("break_duration_order", tag + ": min_duration > max_duration");
    }
    if (bt.max_work_before < 1) fail("break_max_work_before", tag + ".max_work_before < 1");
  }

  const AdjacencySet& adj = inst.adjacency;
  const bool idle_ok = adj.n_idle.rows() == I && adj.n_idle.cols() == J;
  const bool break_ok = adj.n_break.rows() == I && adj.n_break.cols() == J;
  const bool move_ok = adj.im_move.rows() == J && adj.im_move.cols() == J;
  if (!idle_ok) fail("n_idle_shape", "n_idle must be incident x location");
  if (!break_ok) fail("n_break_shape", "n_break must be incident x location");
  if (!move_ok) fail("im_move_shape", "im_move must be location x location");
  if (idle_ok && !adj.n_idle.is_binary()) fail("n_idle_binary", "n_idle has entries > 1");
  if (break_ok && !adj.n_break.is_binary()) fail("n_break_binary", "n_break has entries > 1");
  if (move_ok && !adj.im_move.is_binary()) fail("im_move_binary", "im_move has entries > 1");
  if (idle_ok && break_ok) {
    for (int i = 0; i < I; ++i) {
      for (int j = 0; j < J; ++j) {
        if (adj.n_break(i, j) == 1 && adj.n_idle(i, j) == 0) {
          fail("n_break_subset_n_idle", "n_break(" + std::to_string(i) + ", " +
                                            std::to_string(j) + ") = 1 but n_idle = 0");
        }
      }
    }
  }
  if (move_ok) {
    for (int j = 0; j < J; ++j) {
      if (adj.im_move(j, j) != 1) {
        fail("im_move_diagonal", "im_move(" + std::to_string(j) + ", " +
                                     std::to_string(j) + ") must be 1");
      }
    }
  }
  return out;
}

/// Throws InputError listing every failed invariant, if any.
inline void require_valid(const Instance& inst) {
  const auto issues = validate_instance(inst);
  if (issues.empty()) return;
  std::string msg = "invalid instance:";
  for (const auto& v : issues) msg += "\n  " + v.invariant + ": " + v.detail;
  throw InputError(msg);
}

/// Throws StructuralError unless the schedule's shape and indices fit `inst`.
inline void require_schedule_shape(const Schedule& s, const Instance& inst) {
  if (s.agents != inst.agents || s.horizon != inst.horizon() ||
      s.num_break_types != inst.num_break_types() ||
      s.location.size() != static_cast<std::size_t>(s.agents) * s.horizon ||
      s.on_break.size() != s.location.size() ||
      s.break_start.size() != s.location.size() * static_cast<std::size_t>(s.num_break_types)) {
    throw StructuralError("schedule shape does not match instance");
  }
  for (int a = 0; a < s.agents; ++a) {
    for (int t = 0; t < s.horizon; ++t) {
      const int j = s.loc(a, t);
      if (j < 0 || j >= inst.num_locations()) {
        throw StructuralError("location(" + std::to_string(a) + ", " +
                              std::to_string(t + 1) + ") = " + std::to_string(j) +
                              " outside [0, " + std::to_string(inst.num_locations()) + ")");
      }
    }
  }
}

/// Dense 0/1 tensor indexed (agent, period, location).
struct BinaryTensor3 {
  int dim0 = 0;
  int dim1 = 0;
  int dim2 = 0;
  std::vector<std::uint8_t> data;

  std::uint8_t operator()(int a, int t, int j) const {
    return data[(static_cast<std::size_t>(a) * dim1 + t) * dim2 + j];
  }
};

/// Expands the location map into the x(a, t, j) indicator tensor.
inline BinaryTensor3 dense_x(const Schedule& s, const Instance& inst) {
  require_schedule_shape(s, inst);
  BinaryTensor3 x{s.agents, s.horizon, inst.num_locations(), {}};
  x.data.assign(static_cast<std::size_t>(x.dim0) * x.dim1 * x.dim2, 0);
  for (int a = 0; a < s.agents; ++a) {
    for (int t = 0; t < s.horizon; ++t) {
      x.data[(static_cast<std::size_t>(a) * x.dim1 + t) * x.dim2 + s.loc(a, t)] = 1;
    }
  }
  return x;
}

}  // namespace bapcac
