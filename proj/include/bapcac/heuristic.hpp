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

// Greedy construction and first-improvement local search.
//
// Break starts are never searched directly: every accepted on-break row is
// checked with BreakRuleSolver, and the final solution takes its starts from
// the same solver. Moves only touch a few periods, and since coverage splits
// per period only those periods are re-flowed when scoring a move.

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "bapcac/break_rules.hpp"
#include "bapcac/coverage_flow.hpp"
#include "bapcac/evaluator.hpp"
#include "bapcac/instance.hpp"
#include "bapcac/solver_report.hpp"

namespace bapcac {

enum class MoveKind { kRelocate, kToggleBreakRun, kShiftBreak, kSwapLocations, kReroute };

inline std::string to_string(MoveKind k) {
  switch (k) {
    case MoveKind::kRelocate: return "relocate";
    case MoveKind::kToggleBreakRun: return "toggle_break_run";
    case MoveKind::kShiftBreak: return "shift_break";
    case MoveKind::kSwapLocations: return "swap_locations";
    case MoveKind::kReroute: return "reroute";
  }
  return "unknown";
}

/// A neighbourhood move. Which fields are meaningful depends on `kind`:
///   relocate:         agent, period, location
///   toggle_break_run: agent, period (run start), length, on
///   shift_break:      agent, period (run start), length (run length), shift (+1/-1)
///   swap_locations:   agent, agent2, period
///   reroute:          agent, path (one location per period)
struct Move {
  MoveKind kind = MoveKind::kRelocate;
  int agent = 0;
  int agent2 = 0;
  int period = 0;
  int location = 0;
  int length = 0;
  int shift = 0;
  bool on = false;
  ObjectiveValue delta{};
  std::vector<int> path{};

  // Filled by apply_move.
  std::vector<std::pair<std::size_t, int>> saved_locations{};
  std::vector<std::pair<std::size_t, std::uint8_t>> saved_breaks{};
};

namespace detail {

inline std::size_t cell(const Schedule& s, int a, int t) {
  return static_cast<std::size_t>(a) * s.horizon + t;
}

inline void set_location(Schedule& s, Move& m, int a, int t, int loc) {
  m.saved_locations.emplace_back(cell(s, a, t), s.loc(a, t));
  s.loc(a, t) = loc;
}

inline void set_break(Schedule& s, Move& m, int a, int t, std::uint8_t y) {
  m.saved_breaks.emplace_back(cell(s, a, t), s.brk(a, t));
  s.brk(a, t) = y;
}

}  // namespace detail

/// Applies `m` to `s`, recording what it overwrote.
inline void apply_move(Schedule& s, Move& m) {
  m.saved_locations.clear();
  m.saved_breaks.clear();
  switch (m.kind) {
    case MoveKind::kRelocate:
      detail::set_location(s, m, m.agent, m.period, m.location);
      break;
    case MoveKind::kSwapLocations: {
      const int l1 = s.loc(m.agent, m.period);
      const int l2 = s.loc(m.agent2, m.period);
      detail::set_location(s, m, m.agent, m.period, l2);
      detail::set_location(s, m, m.agent2, m.period, l1);
      break;
    }
    case MoveKind::kReroute:
      for (int t = 0; t < static_cast<int>(m.path.size()); ++t) {
        if (s.loc(m.agent, t) != m.path[static_cast<std::size_t>(t)]) {
          detail::set_location(s, m, m.agent, t, m.path[static_cast<std::size_t>(t)]);
        }
      }
      break;
    case MoveKind::kToggleBreakRun:
      for (int t = m.period; t < m.period + m.length; ++t) {
        detail::set_break(s, m, m.agent, t, m.on ? 1 : 0);
      }
      break;
    case MoveKind::kShiftBreak: {
      const int first = m.period;
      const int last = m.period + m.length - 1;
      if (m.shift > 0) {
        detail::set_break(s, m, m.agent, first, 0);
        detail::set_break(s, m, m.agent, last + 1, 1);
      } else {
        detail::set_break(s, m, m.agent, first - 1, 1);
        detail::set_break(s, m, m.agent, last, 0);
      }
      break;
    }
  }
}

/// Restores everything apply_move overwrote, in reverse order.
inline void revert_move(Schedule& s, const Move& m) {
  for (auto it = m.saved_breaks.rbegin(); it != m.saved_breaks.rend(); ++it) {
    s.on_break[it->first] = it->second;
  }
  for (auto it = m.saved_locations.rbegin(); it != m.saved_locations.rend(); ++it) {
    s.location[it->first] = it->second;
  }
}

/// Periods whose coverage a move can change.
inline std::vector<int> touched_periods(const Move& m) {
  switch (m.kind) {
    case MoveKind::kRelocate:
    case MoveKind::kSwapLocations:
      return {m.period};
    case MoveKind::kToggleBreakRun: {
      std::vector<int> out;
      for (int t = m.period; t < m.period + m.length; ++t) out.push_back(t);
      return out;
    }
    case MoveKind::kShiftBreak:
      if (m.shift > 0) return {m.period, m.period + m.length};
      return {m.period - 1, m.period + m.length - 1};
    case MoveKind::kReroute: {
      // Only meaningful after apply_move: the periods whose location changed.
      std::vector<int> out;
      for (const auto& [k, old] : m.saved_locations) {
        out.push_back(static_cast<int>(k % m.path.size()));
      }
      return out;
    }
  }
  return {};
}

struct LocalSearchBudget {
  std::int64_t iterations = 200000;  // evaluated moves
  double seconds = 60.0;
};

struct HeuristicOptions {
  std::uint64_t seed = 1;
  LocalSearchBudget budget;
  int restarts = 1;
  int threads = 1;
  /// Re-evaluate the full objective after every accepted move and throw
  /// std::logic_error if the incremental value disagrees.
  bool audit = false;
};

namespace detail {

// Portable deterministic helpers (std::shuffle and the std distributions are
// implementation-defined).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

template <typename T>
void shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t k = v.size(); k > 1; --k) {
    std::swap(v[k - 1], v[rng() % k]);
  }
}

/// Schedule plus per-period uncovered demand, kept in sync move by move.
class IncrementalState {
 public:
  IncrementalState(const Instance& inst, Schedule s) : inst_(&inst), schedule_(std::move(s)) {
    uncovered_.resize(static_cast<std::size_t>(inst.horizon()));
    for (int t = 0; t < inst.horizon(); ++t) {
      uncovered_[static_cast<std::size_t>(t)] = period_uncovered(inst, schedule_, t).raw();
    }
    for (const auto y : schedule_.on_break) nonbreak_ += 1 - static_cast<std::int64_t>(y);
  }

  const Schedule& schedule() const { return schedule_; }
  Schedule& schedule() { return schedule_; }

  Decimal total_uncovered() const {
    std::int64_t u = 0;
    for (const auto v : uncovered_) u += v;
    return Decimal::from_raw(u);
  }
  std::int64_t nonbreak() const { return nonbreak_; }
  ObjectiveValue objective() const {
    return weighted_objective(inst_->weight, total_uncovered(), nonbreak_);
  }

  /// Whether the last try_move got past validation and was scored.
  bool last_scored() const { return scored_; }

  /// Applies the move, scores it on the touched periods, and keeps it iff it
  /// strictly improves the objective. `valid` vets the modified schedule.
  template <typename Valid>
  bool try_move(Move& m, Valid&& valid) {
    scored_ = false;
    apply_move(schedule_, m);
    if (!valid(schedule_, m)) {
      revert_move(schedule_, m);
      return false;
    }
    scored_ = true;
    const std::vector<int> periods = touched_periods(m);
    std::vector<std::int64_t> old_values;
    std::int64_t du = 0;
    for (const int t : periods) {
      old_values.push_back(uncovered_[static_cast<std::size_t>(t)]);
      const std::int64_t v = period_uncovered(*inst_, schedule_, t).raw();
      du += v - uncovered_[static_cast<std::size_t>(t)];
      uncovered_[static_cast<std::size_t>(t)] = v;
    }
    std::int64_t dn = 0;
    for (const auto& [k, old] : m.saved_breaks) {
      dn += static_cast<std::int64_t>(old) - schedule_.on_break[k];
    }
    m.delta = weighted_objective(inst_->weight, Decimal::from_raw(du), dn);
    if (m.delta < ObjectiveValue{}) {
      nonbreak_ += dn;
      return true;
    }
    for (std::size_t k = 0; k < periods.size(); ++k) {
      uncovered_[static_cast<std::size_t>(periods[k])] = old_values[k];
    }
    revert_move(schedule_, m);
    return false;
  }

 private:
  const Instance* inst_;
  Schedule schedule_;
  std::vector<std::int64_t> uncovered_;
  std::int64_t nonbreak_ = 0;
  bool scored_ = false;
};

inline std::span<const std::uint8_t> break_row(const Schedule& s, int a) {
  return {s.on_break.data() + static_cast<std::size_t>(a) * s.horizon,
          static_cast<std::size_t>(s.horizon)};
}

/// Fills break starts from the rule solver and optimal coverage from flows.
inline Solution finish_solution(const Instance& inst, const BreakRuleSolver& rules,
                                Schedule s) {
  const int T = inst.horizon();
  const int B = inst.num_break_types();
  for (int a = 0; a < inst.agents; ++a) {
    const auto plan = rules.find(break_row(s, a));
    if (!plan) throw std::logic_error("on-break row without break starts");
    std::copy(plan->starts.begin(), plan->starts.end(),
              s.break_start.begin() + static_cast<std::ptrdiff_t>(a) * B * T);
  }
  CoveragePlan c = assemble_coverage(inst, s);
  return make_solution(inst, std::move(s), std::move(c));
}

inline bool movement_ok(const Instance& inst, const Schedule& s, int a, int t) {
  const auto& im = inst.adjacency.im_move;
  if (t > 0 && im(s.loc(a, t - 1), s.loc(a, t)) == 0) return false;
  if (t + 1 < s.horizon && im(s.loc(a, t), s.loc(a, t + 1)) == 0) return false;
  return true;
}

// Break rows with the fewest on-break periods that keep a rule-solver plan
// valid: ones only where a min-duration window needs them.
inline std::vector<std::uint8_t> minimal_break_row(const Instance& inst, const BreakPlan& plan) {
  const int T = inst.horizon();
  const int B = inst.num_break_types();
  std::vector<std::uint8_t> forbidden(static_cast<std::size_t>(T), 0);
  for (int b = 0; b < B; ++b) {
    const BreakTypeSpec& bt = inst.break_types[static_cast<std::size_t>(b)];
    for (int t = 0; t + bt.max_duration + 1 <= T - 1; ++t) {
      if (plan.starts[static_cast<std::size_t>(b) * T + t]) {
        forbidden[static_cast<std::size_t>(t + bt.max_duration + 1)] = 1;
      }
    }
  }
  std::vector<std::uint8_t> y(static_cast<std::size_t>(T), 0);
  for (int b = 0; b < B; ++b) {
    const BreakTypeSpec& bt = inst.break_types[static_cast<std::size_t>(b)];
    for (int t = 0; t + bt.min_duration <= T - 1; ++t) {
      if (!plan.starts[static_cast<std::size_t>(b) * T + t]) continue;
      int have = 0;
      for (int u = t; u <= t + bt.min_duration; ++u) have += y[static_cast<std::size_t>(u)];
      for (int u = t; u <= t + bt.min_duration && have < bt.min_duration; ++u) {
        if (!y[static_cast<std::size_t>(u)] && !forbidden[static_cast<std::size_t>(u)]) {
          y[static_cast<std::size_t>(u)] = 1;
          ++have;
        }
      }
    }
  }
  return y;
}

// Best path for agent `a` with everyone else held fixed: per-period uncovered
// demand for each location, then a shortest path through the movement graph.
// Ties keep the agent's current location.
inline std::vector<int> best_response_path(const Instance& inst, Schedule& s, int a) {
  const int T = s.horizon;
  const int J = inst.num_locations();
  const auto& im = inst.adjacency.im_move;
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::int64_t> cost(static_cast<std::size_t>(T) * J);
  for (int t = 0; t < T; ++t) {
    const int keep = s.loc(a, t);
    for (int j = 0; j < J; ++j) {
      s.loc(a, t) = j;
      cost[static_cast<std::size_t>(t) * J + j] = period_uncovered(inst, s, t).raw();
    }
    s.loc(a, t) = keep;
  }
  std::vector<std::int64_t> best(cost.size(), kInf);
  std::vector<int> from(cost.size(), -1);
  for (int j = 0; j < J; ++j) best[static_cast<std::size_t>(j)] = cost[static_cast<std::size_t>(j)];
  for (int t = 1; t < T; ++t) {
    const int cur = s.loc(a, t - 1);
    for (int j = 0; j < J; ++j) {
      const std::size_t at = static_cast<std::size_t>(t) * J + j;
      for (int k = 0; k < J; ++k) {
        const std::int64_t prev = best[static_cast<std::size_t>(t - 1) * J + k];
        if (prev >= kInf || im(k, j) == 0) continue;
        const std::int64_t v = prev + cost[at];
        if (v < best[at] || (v == best[at] && k == cur)) {
          best[at] = v;
          from[at] = k;
        }
      }
    }
  }
  std::vector<int> path(static_cast<std::size_t>(T));
  int j = s.loc(a, T - 1);
  for (int k = 0; k < J; ++k) {
    if (best[static_cast<std::size_t>(T - 1) * J + k] < best[static_cast<std::size_t>(T - 1) * J + j]) j = k;
  }
  for (int t = T - 1; t >= 0; --t) {
    path[static_cast<std::size_t>(t)] = j;
    if (t > 0) j = from[static_cast<std::size_t>(t) * J + j];
  }
  return path;
}

}  // namespace detail

/// Feasible starting solution: break patterns staggered towards low-demand
/// periods, then period-by-period placement by marginal coverage gain, then
/// extra break periods wherever they pay off. Throws InfeasibleError when the
/// break rules cannot be met at all.
inline Solution greedy_construct(const Instance& inst, std::uint64_t seed) {
  require_valid(inst);
  const BreakRuleSolver rules(inst);
  if (!rules.satisfiable()) {
    throw InfeasibleError("break rules admit no on-break row for any agent");
  }
  const int A = inst.agents;
  const int T = inst.horizon();
  const int J = inst.num_locations();
  std::mt19937_64 rng(detail::mix_seed(seed, 0));

  // Candidate break patterns, reduced to their minimal on-break rows.
  std::vector<std::vector<std::uint8_t>> rows;
  const std::vector<BreakFlag> all_free(static_cast<std::size_t>(T), BreakFlag::kFree);
  rules.enumerate(all_free, 512, [&](const BreakPlan& p) {
    auto y = detail::minimal_break_row(inst, p);
    if (std::find(rows.begin(), rows.end(), y) == rows.end()) rows.push_back(std::move(y));
  });

  Schedule s(inst);
  std::vector<int> order(static_cast<std::size_t>(A));
  for (int a = 0; a < A; ++a) order[static_cast<std::size_t>(a)] = a;
  detail::shuffle(order, rng);
  std::vector<std::int64_t> load(static_cast<std::size_t>(T), 0);
  for (const int a : order) {
    std::size_t best = 0;
    std::int64_t best_cost = std::numeric_limits<std::int64_t>::max();
    for (std::size_t r = 0; r < rows.size(); ++r) {
      std::int64_t cost = 0;
      for (int t = 0; t < T; ++t) {
        if (rows[r][static_cast<std::size_t>(t)]) {
          cost += (period_demand(inst, t) + 1) * (1 + load[static_cast<std::size_t>(t)]);
        }
      }
      if (cost < best_cost) {
        best_cost = cost;
        best = r;
      }
    }
    for (int t = 0; t < T; ++t) {
      s.brk(a, t) = rows[best][static_cast<std::size_t>(t)];
      load[static_cast<std::size_t>(t)] += s.brk(a, t);
    }
  }

  // Placement, period by period, agents in shuffled order. Arcs of agents not
  // yet placed in this period are dropped from the net.
  for (int t = 0; t < T; ++t) {
    std::vector<std::uint8_t> placed(static_cast<std::size_t>(A), 0);
    for (const int a : order) {
      placed[static_cast<std::size_t>(a)] = 1;
      std::int64_t best_flow = -1;
      int best_loc = 0;
      const int prev = t > 0 ? s.loc(a, t - 1) : -1;
      for (int j = 0; j < J; ++j) {
        if (prev >= 0 && inst.adjacency.im_move(prev, j) == 0) continue;
        s.loc(a, t) = j;
        PeriodFlowNet net = build_period_net(inst, s, t);
        std::erase_if(net.arcs, [&](const FlowArc& arc) {
          return placed[static_cast<std::size_t>(arc.agent)] == 0;
        });
        const std::int64_t f = max_coverage(net).flow_value;
        if (f > best_flow || (f == best_flow && j == prev)) {
          best_flow = f;
          best_loc = j;
        }
      }
      s.loc(a, t) = best_loc;
    }
  }

  // Extra break periods where the break reward beats the coverage loss.
  detail::IncrementalState state(inst, std::move(s));
  for (const int a : order) {
    for (int t = 0; t < T; ++t) {
      if (state.schedule().brk(a, t)) continue;
      Move m;
      m.kind = MoveKind::kToggleBreakRun;
      m.agent = a;
      m.period = t;
      m.length = 1;
      m.on = true;
      state.try_move(m, [&](const Schedule& sc, const Move&) {
        return rules.feasible(detail::break_row(sc, a));
      });
    }
  }
  return detail::finish_solution(inst, rules, state.schedule());
}

/// First-improvement descent from a feasible start. Move kinds are scanned in
/// the fixed order relocate, swap_locations, toggle_break_run, shift_break,
/// reroute;
/// the order of agents and periods inside each pass is reshuffled from
/// `seed`. Stops at a local optimum or when the budget runs out.
inline Solution local_search(const Instance& inst, const Solution& start,
                             LocalSearchBudget budget, std::uint64_t seed,
                             bool audit = false) {
  if (budget.iterations <= 0 || budget.seconds <= 0.0) return start;
  const BreakRuleSolver rules(inst);
  const int A = inst.agents;
  const int T = inst.horizon();
  const int J = inst.num_locations();
  int max_run = 1;
  for (const auto& bt : inst.break_types) max_run = std::max(max_run, bt.max_duration + 1);

  std::mt19937_64 rng(detail::mix_seed(seed, 1));
  detail::IncrementalState state(inst, start.schedule);
  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                            std::chrono::duration<double>(budget.seconds));
  std::int64_t evaluated = 0;
  bool out_of_budget = false;

  auto spend = [&]() {
    ++evaluated;
    if (evaluated >= budget.iterations) out_of_budget = true;
    if ((evaluated & 63) == 0 && std::chrono::steady_clock::now() >= deadline) {
      out_of_budget = true;
    }
    return !out_of_budget;
  };
  auto audit_state = [&]() {
    if (!audit) return;
    const Schedule& sc = state.schedule();
    const CoveragePlan c = assemble_coverage(inst, sc);
    const ObjectiveBreakdown full = objective(inst, sc, c);
    if (full.objective != state.objective()) {
      throw std::logic_error("incremental objective " + state.objective().to_string() +
                             " != full evaluation " + full.objective.to_string());
    }
  };
  auto movement_valid = [&](const Schedule& sc, const Move& m) {
    if (!detail::movement_ok(inst, sc, m.agent, m.period)) return false;
    return m.kind != MoveKind::kSwapLocations || detail::movement_ok(inst, sc, m.agent2, m.period);
  };
  auto breaks_valid = [&](const Schedule& sc, const Move& m) {
    return rules.feasible(detail::break_row(sc, m.agent));
  };

  std::vector<std::pair<int, int>> slots;
  for (int a = 0; a < A; ++a) {
    for (int t = 0; t < T; ++t) slots.emplace_back(a, t);
  }

  std::vector<int> agents(static_cast<std::size_t>(A));
  for (int a = 0; a < A; ++a) agents[static_cast<std::size_t>(a)] = a;

  bool improved = true;
  while (improved && !out_of_budget) {
    improved = false;
    detail::shuffle(slots, rng);
    detail::shuffle(agents, rng);

    for (const auto& [a, t] : slots) {  // relocate
      for (int j = 0; j < J && !out_of_budget; ++j) {
        if (j == state.schedule().loc(a, t)) continue;
        Move m{.kind = MoveKind::kRelocate, .agent = a, .period = t, .location = j};
        if (state.try_move(m, movement_valid)) {
          improved = true;
          audit_state();
        }
        if (state.last_scored() && !spend()) break;
      }
      if (out_of_budget) break;
    }

    for (const auto& [a, t] : slots) {  // swap_locations
      for (int a2 = a + 1; a2 < A && !out_of_budget; ++a2) {
        const Schedule& sc = state.schedule();
        if (sc.brk(a, t) == sc.brk(a2, t) || sc.loc(a, t) == sc.loc(a2, t)) continue;
        Move m{.kind = MoveKind::kSwapLocations, .agent = a, .agent2 = a2, .period = t};
        if (state.try_move(m, movement_valid)) {
          improved = true;
          audit_state();
        }
        if (state.last_scored() && !spend()) break;
      }
      if (out_of_budget) break;
    }

    for (const auto& [a, t] : slots) {  // toggle_break_run
      for (int len = 1; len <= max_run && t + len <= T && !out_of_budget; ++len) {
        for (const bool on : {true, false}) {
          const Schedule& sc = state.schedule();
          bool changes = false;
          for (int u = t; u < t + len; ++u) changes = changes || (sc.brk(a, u) != (on ? 1 : 0));
          if (!changes) continue;
          Move m{.kind = MoveKind::kToggleBreakRun, .agent = a, .period = t, .length = len, .on = on};
          if (state.try_move(m, breaks_valid)) {
            improved = true;
            audit_state();
          }
          if (state.last_scored() && !spend()) break;
        }
      }
      if (out_of_budget) break;
    }

    for (const auto& [a, t] : slots) {  // shift_break: runs starting at t
      const Schedule& sc = state.schedule();
      if (!sc.brk(a, t) || (t > 0 && sc.brk(a, t - 1))) continue;
      int len = 0;
      while (t + len < T && sc.brk(a, t + len)) ++len;
      for (const int shift : {+1, -1}) {
        if (shift > 0 && t + len >= T) continue;
        if (shift < 0 && t == 0) continue;
        Move m{.kind = MoveKind::kShiftBreak, .agent = a, .period = t, .length = len, .shift = shift};
        if (state.try_move(m, breaks_valid)) {
          improved = true;
          audit_state();
          break;
        }
        if (state.last_scored() && !spend()) break;
      }
      if (out_of_budget) break;
    }

    for (const int a : agents) {  // reroute
      if (out_of_budget) break;
      Move m{.kind = MoveKind::kReroute, .agent = a};
      m.path = detail::best_response_path(inst, state.schedule(), a);
      if (state.try_move(m, [](const Schedule&, const Move&) { return true; })) {
        improved = true;
        audit_state();
      }
      spend();
    }
  }
  return detail::finish_solution(inst, rules, state.schedule());
}

/// Multi-start greedy + local search. Restart r uses a seed derived from
/// (seed, r); the best objective wins, ties going to the lower r, so the
/// result does not depend on the thread count.
inline SolverReport solve_heuristic(const Instance& inst, const HeuristicOptions& opt = {}) {
  const auto started = std::chrono::steady_clock::now();
  SolverReport report;
  report.solver = "heuristic";
  require_valid(inst);
  {
    const BreakRuleSolver rules(inst);
    if (!rules.satisfiable()) {
      report.status = SolveStatus::kInfeasible;
      report.wall_time = std::chrono::steady_clock::now() - started;
      return report;
    }
  }
  const int restarts = std::max(1, opt.restarts);
  std::vector<std::optional<Solution>> results(static_cast<std::size_t>(restarts));
  auto run = [&](int r) {
    const std::uint64_t s = detail::mix_seed(opt.seed, static_cast<std::uint64_t>(r) + 7);
    Solution start = greedy_construct(inst, s);
    results[static_cast<std::size_t>(r)] = local_search(inst, start, opt.budget, s, opt.audit);
  };
  const int threads = std::clamp(opt.threads, 1, restarts);
  if (threads == 1) {
    for (int r = 0; r < restarts; ++r) run(r);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (int r = w; r < restarts; r += threads) run(r);
      });
    }
    for (auto& th : pool) th.join();
  }
  for (auto& r : results) {
    if (r && (!report.best || r->objective < report.best->objective)) report.best = std::move(r);
  }
  report.status = SolveStatus::kFeasible;
  report.nodes_explored = restarts;
  report.wall_time = std::chrono::steady_clock::now() - started;
  return report;
}

}  // namespace bapcac
