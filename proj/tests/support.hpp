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

// Fixture builders shared by the unit tests and the acceptance binary.

#pragma once

#include <atomic>
#include <filesystem>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "bapcac/break_rules.hpp"
#include "bapcac/coverage_flow.hpp"
#include "bapcac/evaluator.hpp"
#include "bapcac/instance.hpp"

namespace bapcac::testing {

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("bapcac-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

/// Instance with every cell both a location and an incident cell, constant
/// demand, and explicit adjacency.
inline Instance square_instance(int side, int horizon, int agents, Decimal demand,
                                std::vector<BreakTypeSpec> types) {
  Instance inst;
  inst.grid.cells_per_side = side;
  inst.grid.side_length = side;
  for (int c = 0; c < side * side; ++c) {
    inst.grid.location_cells.push_back(c);
    inst.grid.incident_cells.push_back(c);
  }
  const int n = side * side;
  inst.demand.horizon = horizon;
  inst.demand.values.assign(static_cast<std::size_t>(n) * horizon, demand);
  inst.adjacency.n_idle = BinaryMatrix(n, n, 1);
  inst.adjacency.n_break = BinaryMatrix(n, n, 0);
  inst.adjacency.im_move = BinaryMatrix(n, n, 1);
  for (int c = 0; c < n; ++c) inst.adjacency.n_break(c, c) = 1;
  inst.agents = agents;
  inst.break_types = std::move(types);
  return inst;
}

/// The mutation fixture: 2 x 2 grid, two agents, six periods, demand 1.5
/// everywhere, short(1,1,2) and long(2,2,4). Diagonally opposite cells are
/// out of idle reach and out of one-period movement range; an on-break
/// vehicle reaches its own cell and its horizontal neighbour.
inline Instance mutation_fixture() {
  Instance inst = square_instance(2, 6, 2, Decimal::parse("1.5"),
                                  {{"short", 1, 1, 2}, {"long", 2, 2, 4}});
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const bool opposite = i == 3 - j;
      inst.adjacency.n_idle(i, j) = opposite ? 0 : 1;
      inst.adjacency.n_break(i, j) = (i == j || i == (j ^ 1)) ? 1 : 0;
      inst.adjacency.im_move(i, j) = opposite ? 0 : 1;
    }
  }
  require_valid(inst);
  return inst;
}

/// A hand-built feasible schedule for mutation_fixture(): both agents take
/// breaks in periods 3 and 5 (0-based 2 and 4); agent 0 parks at cell 0,
/// agent 1 at cell 3. Break starts come from the rule solver and coverage
/// from the per-period flows.
inline Solution mutation_base(const Instance& inst) {
  Schedule s(inst);
  const std::vector<std::uint8_t> y = {0, 0, 1, 0, 1, 0};
  const BreakRuleSolver rules(inst);
  for (int a = 0; a < inst.agents; ++a) {
    const auto plan = rules.find(std::span<const std::uint8_t>(y));
    if (!plan) throw std::logic_error("fixture break row is infeasible");
    for (int t = 0; t < inst.horizon(); ++t) {
      s.loc(a, t) = a == 0 ? 0 : 3;
      s.brk(a, t) = y[static_cast<std::size_t>(t)];
      for (int b = 0; b < inst.num_break_types(); ++b) {
        s.start(a, b, t) = plan->starts[static_cast<std::size_t>(b) * inst.horizon() + t];
      }
    }
  }
  CoveragePlan c = assemble_coverage(inst, s);
  return make_solution(inst, std::move(s), std::move(c));
}

/// Deterministic random instance of the given shape with sparse demand and
/// travel-free adjacency drawn from `rng`; always valid.
inline Instance random_instance(std::mt19937_64& rng, int side, int horizon, int agents,
                                std::vector<BreakTypeSpec> types) {
  Instance inst = square_instance(side, horizon, agents, Decimal{}, std::move(types));
  const int n = side * side;
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<std::int64_t> dem(0, 2500);
  for (int i = 0; i < n; ++i) {
    for (int t = 0; t < horizon; ++t) {
      inst.demand.at(i, t) = coin(rng) ? Decimal::from_raw(dem(rng)) : Decimal{};
    }
    inst.demand.at(i, static_cast<int>(rng() % static_cast<std::uint64_t>(horizon))) =
        Decimal::from_raw(1 + static_cast<std::int64_t>(rng() % 1500));
    for (int j = 0; j < n; ++j) {
      inst.adjacency.n_idle(i, j) = i == j ? 1 : static_cast<std::uint8_t>(coin(rng));
      inst.adjacency.n_break(i, j) =
          inst.adjacency.n_idle(i, j) && (i == j || coin(rng)) ? 1 : 0;
      inst.adjacency.im_move(i, j) = i == j ? 1 : static_cast<std::uint8_t>(coin(rng));
    }
  }
  require_valid(inst);
  return inst;
}

/// One-period subproblem with 1..3 agents and 1..3 incident cells (out of a
/// 2 x 2 grid), random reach, demand, and fixed (x, y).
struct PeriodCase {
  Instance inst;
  Schedule schedule;
};

inline PeriodCase random_period_case(std::mt19937_64& rng) {
  const int agents = 1 + static_cast<int>(rng() % 3);
  const int cells = 1 + static_cast<int>(rng() % 3);
  Instance inst = square_instance(2, 1, agents, Decimal{}, {});
  inst.grid.incident_cells.resize(static_cast<std::size_t>(cells));
  inst.demand.values.resize(static_cast<std::size_t>(cells));
  inst.adjacency.n_idle = BinaryMatrix(cells, 4, 0);
  inst.adjacency.n_break = BinaryMatrix(cells, 4, 0);
  inst.options.preemptive = rng() % 4 != 0;
  for (int i = 0; i < cells; ++i) {
    // Mix of demands below, at, and above one vehicle's capacity.
    static constexpr std::int64_t kPicks[] = {1, 250, 400, 999, 1000, 1001, 1500, 2750};
    inst.demand.values[static_cast<std::size_t>(i)] =
        Decimal::from_raw(rng() % 2 ? kPicks[rng() % 8] : 1 + static_cast<std::int64_t>(rng() % 3000));
    for (int j = 0; j < 4; ++j) {
      inst.adjacency.n_idle(i, j) = static_cast<std::uint8_t>(rng() % 3 != 0);
      inst.adjacency.n_break(i, j) = inst.adjacency.n_idle(i, j) && rng() % 2 ? 1 : 0;
    }
  }
  require_valid(inst);
  Schedule s(inst);
  for (int a = 0; a < agents; ++a) {
    s.loc(a, 0) = static_cast<int>(rng() % 4);
    s.brk(a, 0) = static_cast<std::uint8_t>(rng() % 2);
  }
  return {std::move(inst), std::move(s)};
}

}  // namespace bapcac::testing
