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

// Depth-first branch-and-bound over (location, on_break) per agent-period,
// decided period-major. The continuous variables are never branched on: at a
// leaf they come from the per-period max-flow, and break starts from
// BreakRuleSolver. Every created node has a feasible completion (staying put
// is always a legal move, and break prefixes are checked with the rest of the
// row left free), so leaves are always feasible.
//
// solve_bruteforce is the enumeration oracle. It shares the flow evaluator
// and check_all with everything else but derives break starts by plain
// enumeration, independently of BreakRuleSolver.

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <vector>

#include "bapcac/break_rules.hpp"
#include "bapcac/coverage_flow.hpp"
#include "bapcac/evaluator.hpp"
#include "bapcac/heuristic.hpp"
#include "bapcac/instance.hpp"
#include "bapcac/solver_report.hpp"

namespace bapcac {

struct Assignment {
  int location = 0;
  bool on_break = false;
  friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// Partial assignment in period-major order: entry k is agent k % A in
/// period k / A.
struct SearchNode {
  std::vector<Assignment> fixed_prefix;
  ObjectiveValue lower_bound;
  int depth = 0;
};

struct SolveProgress {
  std::int64_t nodes = 0;
  std::optional<ObjectiveValue> bound;
  std::optional<ObjectiveValue> incumbent;
};

struct SolveLimits {
  std::int64_t max_nodes = 20'000'000;
  double max_seconds = 600.0;
  /// Seed the incumbent with a short deterministic heuristic run.
  bool heuristic_incumbent = true;
  std::function<void(const SolveProgress&)> progress;
  std::int64_t progress_every = 100000;
};

namespace detail {

/// Relaxed reach of a free agent: incident cells coverable (idle reach)
/// from any location within k moves of a start location.
class ReachTable {
 public:
  explicit ReachTable(const Instance& inst)
      : J_(inst.num_locations()), I_(inst.num_incident()) {
    const auto& im = inst.adjacency.im_move;
    dist_.assign(static_cast<std::size_t>(J_) * J_, -1);
    for (int s = 0; s < J_; ++s) {
      std::queue<int> q;
      dist_[idx(s, s)] = 0;
      q.push(s);
      while (!q.empty()) {
        const int u = q.front();
        q.pop();
        for (int v = 0; v < J_; ++v) {
          if (im(u, v) && dist_[idx(s, v)] < 0) {
            dist_[idx(s, v)] = dist_[idx(s, u)] + 1;
            q.push(v);
          }
        }
      }
    }
    // cover_[(s * (J + 1) + k) * I + i], k = 0..J; k = J also serves "any".
    cover_.assign(static_cast<std::size_t>(J_) * (J_ + 1) * I_, 0);
    any_.assign(static_cast<std::size_t>(I_), 0);
    for (int s = 0; s < J_; ++s) {
      for (int k = 0; k <= J_; ++k) {
        for (int j = 0; j < J_; ++j) {
          const int d = dist_[idx(s, j)];
          if (d < 0 || d > k) continue;
          for (int i = 0; i < I_; ++i) {
            if (inst.adjacency.n_idle(i, j)) cover_[cidx(s, k, i)] = 1;
          }
        }
      }
    }
    for (int j = 0; j < J_; ++j) {
      for (int i = 0; i < I_; ++i) {
        if (inst.adjacency.n_idle(i, j)) any_[static_cast<std::size_t>(i)] = 1;
      }
    }
  }

  /// Whether cell i is coverable after `steps` moves from `start`
  /// (start < 0: no location fixed yet).
  bool covers(int start, int steps, int i) const {
    if (start < 0) return any_[static_cast<std::size_t>(i)] != 0;
    return cover_[cidx(start, std::min(steps, J_), i)] != 0;
  }

 private:
  std::size_t idx(int a, int b) const { return static_cast<std::size_t>(a) * J_ + b; }
  std::size_t cidx(int s, int k, int i) const {
    return (static_cast<std::size_t>(s) * (J_ + 1) + k) * I_ + i;
  }
  int J_;
  int I_;
  std::vector<int> dist_;
  std::vector<std::uint8_t> cover_;
  std::vector<std::uint8_t> any_;
};

class BranchAndBound {
 public:
  BranchAndBound(const Instance& inst, const SolveLimits& limits)
      : inst_(inst), limits_(limits), rules_(inst), reach_(inst),
        A_(inst.agents), T_(inst.horizon()), J_(inst.num_locations()),
        schedule_(inst) {
    period_demand_.resize(static_cast<std::size_t>(T_));
    for (int t = 0; t < T_; ++t) period_demand_[static_cast<std::size_t>(t)] = period_demand(inst, t);
  }

  /// Lower bound for the first `depth` decisions already written to
  /// schedule_.
  ObjectiveValue bound_at(int depth) const {
    std::int64_t uncovered = 0;
    std::int64_t nonbreak = 0;
    const int I = inst_.num_incident();
    for (int t = 0; t < T_; ++t) {
      PeriodFlowNet net;
      net.period = t;
      net.source_caps.assign(static_cast<std::size_t>(A_), PeriodFlowNet::kScale);
      net.sink_caps.resize(static_cast<std::size_t>(I));
      for (int i = 0; i < I; ++i) net.sink_caps[static_cast<std::size_t>(i)] = inst_.demand.at(i, t).raw();
      for (int a = 0; a < A_; ++a) {
        const int k = t * A_ + a;
        if (k < depth) {
          const bool on = schedule_.brk(a, t) != 0;
          nonbreak += on ? 0 : 1;
          if (on && !inst_.options.preemptive) continue;
          const BinaryMatrix& reach = on ? inst_.adjacency.n_break : inst_.adjacency.n_idle;
          const int loc = schedule_.loc(a, t);
          for (int i = 0; i < I; ++i) {
            const std::int64_t cap = arc_capacity(inst_.demand.at(i, t));
            if (reach(i, loc) && cap > 0) net.arcs.push_back({a, i, cap, on});
          }
        } else {
          // Last fixed period of this agent.
          const int last = (depth - 1 - a) >= 0 ? (depth - 1 - a) / A_ : -1;
          const int start = last >= 0 ? schedule_.loc(a, last) : -1;
          for (int i = 0; i < I; ++i) {
            const std::int64_t cap = arc_capacity(inst_.demand.at(i, t));
            if (cap > 0 && reach_.covers(start, t - last, i)) net.arcs.push_back({a, i, cap, false});
          }
        }
      }
      uncovered += period_demand_[static_cast<std::size_t>(t)] - max_coverage(net).flow_value;
    }
    return weighted_objective(inst_.weight, Decimal::from_raw(uncovered), nonbreak);
  }

  ObjectiveValue bound_for(const SearchNode& node) {
    const int depth = static_cast<int>(node.fixed_prefix.size());
    for (int k = 0; k < depth; ++k) {
      const Assignment& as = node.fixed_prefix[static_cast<std::size_t>(k)];
      if (as.location < 0 || as.location >= J_) throw StructuralError("node location out of range");
      schedule_.loc(k % A_, k / A_) = as.location;
      schedule_.brk(k % A_, k / A_) = as.on_break ? 1 : 0;
    }
    return bound_at(depth);
  }

  SolverReport run() {
    started_ = std::chrono::steady_clock::now();
    SolverReport report;
    report.solver = "exact";
    if (!rules_.satisfiable()) {
      report.status = SolveStatus::kInfeasible;
      report.wall_time = std::chrono::steady_clock::now() - started_;
      return report;
    }
    if (limits_.heuristic_incumbent) {
      HeuristicOptions h;
      h.seed = 1;
      h.budget.iterations = 20000;
      h.budget.seconds = std::max(0.0, std::min(5.0, limits_.max_seconds / 10));
      SolverReport hr = solve_heuristic(inst_, h);
      if (hr.best) incumbent_ = std::move(hr.best);
    }
    const ObjectiveValue root = bound_at(0);
    open_bound_ = std::nullopt;
    dfs(0, root);
    report.nodes_explored = nodes_;
    report.wall_time = std::chrono::steady_clock::now() - started_;
    if (!aborted_) {
      if (!incumbent_) {
        report.status = SolveStatus::kInfeasible;
        return report;
      }
      report.status = SolveStatus::kOptimal;
      report.proven_optimal = true;
      report.bound = incumbent_->objective;
      report.gap = 0.0;
      report.best = std::move(incumbent_);
      return report;
    }
    report.status = incumbent_ ? SolveStatus::kFeasible : SolveStatus::kNoIncumbent;
    ObjectiveValue b = open_bound_.value_or(root);
    if (incumbent_ && incumbent_->objective < b) b = incumbent_->objective;
    report.bound = b;
    if (incumbent_) {
      const double inc = incumbent_->objective.to_double();
      const double diff = inc - b.to_double();
      report.gap = inc == 0.0 ? (diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity())
                              : diff / std::abs(inc);
    }
    report.best = std::move(incumbent_);
    return report;
  }

 private:
  struct Child {
    Assignment choice;
    ObjectiveValue bound;
  };

  static std::int64_t arc_capacity(Decimal d) { return detail::arc_capacity(d); }

  bool out_of_limits() {
    if (aborted_) return true;
    if (nodes_ >= limits_.max_nodes) aborted_ = true;
    if ((nodes_ & 255) == 0 &&
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count() >=
            limits_.max_seconds) {
      aborted_ = true;
    }
    return aborted_;
  }

  void note_open(ObjectiveValue b) {
    if (!open_bound_ || b < *open_bound_) open_bound_ = b;
  }

  bool prefix_feasible(int a, int t) {
    std::string key;
    key.reserve(static_cast<std::size_t>(t) + 1);
    for (int u = 0; u <= t; ++u) key += static_cast<char>(schedule_.brk(a, u));
    if (auto it = prefix_cache_.find(key); it != prefix_cache_.end()) return it->second;
    std::vector<BreakFlag> flags(static_cast<std::size_t>(T_), BreakFlag::kFree);
    for (int u = 0; u <= t; ++u) {
      flags[static_cast<std::size_t>(u)] = schedule_.brk(a, u) ? BreakFlag::kOn : BreakFlag::kOff;
    }
    const bool ok = rules_.find(flags).has_value();
    prefix_cache_.emplace(std::move(key), ok);
    return ok;
  }

  void leaf() {
    Solution sol = finish_solution(inst_, rules_, schedule_);
    if (!incumbent_ || sol.objective < incumbent_->objective) incumbent_ = std::move(sol);
  }

  void dfs(int depth, ObjectiveValue node_bound) {
    ++nodes_;
    if (limits_.progress && limits_.progress_every > 0 && nodes_ % limits_.progress_every == 0) {
      SolveProgress p;
      p.nodes = nodes_;
      p.bound = node_bound;
      if (incumbent_) p.incumbent = incumbent_->objective;
      limits_.progress(p);
    }
    if (depth == A_ * T_) {
      leaf();
      return;
    }
    const int t = depth / A_;
    const int a = depth % A_;
    const int prev = t > 0 ? schedule_.loc(a, t - 1) : -1;

    std::vector<Child> children;
    for (int j = 0; j < J_; ++j) {
      if (prev >= 0 && inst_.adjacency.im_move(prev, j) == 0) continue;
      for (const bool on : {false, true}) {
        schedule_.loc(a, t) = j;
        schedule_.brk(a, t) = on ? 1 : 0;
        if (!prefix_feasible(a, t)) continue;
        children.push_back({{j, on}, bound_at(depth + 1)});
      }
    }
    std::stable_sort(children.begin(), children.end(),
                     [](const Child& x, const Child& y) { return x.bound < y.bound; });

    for (std::size_t c = 0; c < children.size(); ++c) {
      const Child& child = children[c];
      if (incumbent_ && child.bound >= incumbent_->objective) break;  // sorted: rest prune too
      if (out_of_limits()) {
        for (std::size_t r = c; r < children.size(); ++r) note_open(children[r].bound);
        return;
      }
      schedule_.loc(a, t) = child.choice.location;
      schedule_.brk(a, t) = child.choice.on_break ? 1 : 0;
      dfs(depth + 1, child.bound);
      if (aborted_) {
        note_open(child.bound);
        for (std::size_t r = c + 1; r < children.size(); ++r) note_open(children[r].bound);
        return;
      }
    }
    schedule_.loc(a, t) = 0;
    schedule_.brk(a, t) = 0;
  }

  const Instance& inst_;
  const SolveLimits& limits_;
  BreakRuleSolver rules_;
  ReachTable reach_;
  int A_;
  int T_;
  int J_;
  Schedule schedule_;
  std::vector<std::int64_t> period_demand_;
  std::unordered_map<std::string, bool> prefix_cache_;
  std::optional<Solution> incumbent_;
  std::optional<ObjectiveValue> open_bound_;
  std::int64_t nodes_ = 0;
  bool aborted_ = false;
  std::chrono::steady_clock::time_point started_;
};

}  // namespace detail

/// Proven-optimal solve by branch-and-bound. Single-threaded, so identical
/// inputs give identical reports (apart from wall_time).
inline SolverReport solve_exact(const Instance& inst, const SolveLimits& limits = {}) {
  require_valid(inst);
  detail::BranchAndBound bb(inst, limits);
  return bb.run();
}

/// Lower bound of a node: exact flows for fixed agent-periods, and for free
/// ones an idle arc to every cell reachable from the agent's last fixed
/// location in the available number of moves. Only fixed non-break periods
/// count towards the break term.
inline ObjectiveValue lower_bound(const Instance& inst, const SearchNode& node) {
  require_valid(inst);
  const int A = inst.agents;
  const int T = inst.horizon();
  const int depth = static_cast<int>(node.fixed_prefix.size());
  if (depth > A * T) throw StructuralError("node prefix longer than agents x horizon");
  const SolveLimits limits;
  detail::BranchAndBound bb(inst, limits);
  return bb.bound_for(node);
}

/// Exhaustive oracle for tiny instances. Throws RefusedError past the caps.
inline SolverReport solve_bruteforce(const Instance& inst, int max_agent_periods = 8) {
  const auto started = std::chrono::steady_clock::now();
  require_valid(inst);
  const int A = inst.agents;
  const int T = inst.horizon();
  const int B = inst.num_break_types();
  const int J = inst.num_locations();
  if (A * T > max_agent_periods) {
    throw RefusedError("brute force refused: agents x periods = " + std::to_string(A * T) +
                       " exceeds cap " + std::to_string(max_agent_periods));
  }
  if (B * T > 20) {
    throw RefusedError("brute force refused: break_types x periods = " + std::to_string(B * T) +
                       " exceeds 20");
  }
  SolverReport report;
  report.solver = "bruteforce";

  // Break-start rows that pass the window and overlap rules on their own.
  const std::size_t bits = static_cast<std::size_t>(B) * T;
  std::vector<std::vector<std::uint8_t>> alphas;
  const std::vector<std::uint8_t> zeros(static_cast<std::size_t>(T), 0);
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << bits); ++code) {
    std::vector<std::uint8_t> alpha(bits);
    for (std::size_t k = 0; k < bits; ++k) alpha[k] = (code >> k) & 1u;
    if (check_break_rules(inst, zeros, alpha, 0, nullptr, nullptr,
                          {.min_duration = false, .max_duration = false})) {
      alphas.push_back(std::move(alpha));
    }
  }
  // Feasible on-break rows, each with the first matching start row.
  std::vector<std::pair<std::vector<std::uint8_t>, std::vector<std::uint8_t>>> rows;
  for (std::uint32_t code = 0; code < (1u << T); ++code) {
    std::vector<std::uint8_t> y(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t) y[static_cast<std::size_t>(t)] = (code >> t) & 1u;
    for (const auto& alpha : alphas) {
      if (check_break_rules(inst, y, alpha, 0, nullptr, nullptr,
                            {.window_start = false, .overlap = false})) {
        rows.emplace_back(y, alpha);
        break;
      }
    }
  }
  if (rows.empty()) {
    report.status = SolveStatus::kInfeasible;
    report.wall_time = std::chrono::steady_clock::now() - started;
    return report;
  }
  // Movement-feasible location paths.
  std::vector<std::vector<int>> paths;
  std::vector<int> path(static_cast<std::size_t>(T));
  std::function<void(int)> extend = [&](int t) {
    if (t == T) {
      paths.push_back(path);
      return;
    }
    for (int j = 0; j < J; ++j) {
      if (t > 0 && inst.adjacency.im_move(path[static_cast<std::size_t>(t - 1)], j) == 0) continue;
      path[static_cast<std::size_t>(t)] = j;
      extend(t + 1);
    }
  };
  extend(0);

  const std::size_t per_agent = paths.size() * rows.size();
  std::vector<std::size_t> choice(static_cast<std::size_t>(A), 0);
  Schedule s(inst);
  while (true) {
    for (int a = 0; a < A; ++a) {
      const auto& p = paths[choice[static_cast<std::size_t>(a)] / rows.size()];
      const auto& [y, alpha] = rows[choice[static_cast<std::size_t>(a)] % rows.size()];
      for (int t = 0; t < T; ++t) {
        s.loc(a, t) = p[static_cast<std::size_t>(t)];
        s.brk(a, t) = y[static_cast<std::size_t>(t)];
        for (int b = 0; b < B; ++b) s.start(a, b, t) = alpha[static_cast<std::size_t>(b) * T + t];
      }
    }
    ++report.nodes_explored;
    CoveragePlan c = assemble_coverage(inst, s);
    if (check_all(inst, s, c, nullptr).empty()) {
      const ObjectiveBreakdown ob = objective(inst, s, c);
      if (!report.best || ob.objective < report.best->objective) {
        report.best = make_solution(inst, s, std::move(c));
      }
    }
    int a = A - 1;
    while (a >= 0 && ++choice[static_cast<std::size_t>(a)] == per_agent) {
      choice[static_cast<std::size_t>(a)] = 0;
      --a;
    }
    if (a < 0) break;
  }
  report.status = report.best ? SolveStatus::kOptimal : SolveStatus::kInfeasible;
  report.proven_optimal = report.best.has_value();
  if (report.best) {
    report.bound = report.best->objective;
    report.gap = 0.0;
  }
  report.wall_time = std::chrono::steady_clock::now() - started;
  return report;
}

}  // namespace bapcac
