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

#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>

#include "bapcac/instance.hpp"

namespace bapcac {

enum class SolveStatus {
  kOptimal,       // best is a proven optimum
  kFeasible,      // limits hit with an incumbent
  kInfeasible,    // proven: no schedule satisfies the break rules
  kNoIncumbent,   // limits hit before any feasible schedule was found
};

inline std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kFeasible: return "feasible";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kNoIncumbent: return "no_incumbent";
  }
  return "unknown";
}

struct SolverReport {
  std::string solver;
  SolveStatus status = SolveStatus::kNoIncumbent;
  std::optional<Solution> best;
  bool proven_optimal = false;
  std::int64_t nodes_explored = 0;
  std::chrono::steady_clock::duration wall_time{};
  /// Best proven lower bound on the optimum, when the solver has one.
  std::optional<ObjectiveValue> bound;
  /// (incumbent - bound) / |incumbent|; zero when proven optimal.
  std::optional<double> gap;

  double seconds() const { return std::chrono::duration<double>(wall_time).count(); }
};

}  // namespace bapcac
