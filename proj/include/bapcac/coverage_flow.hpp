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

// Optimal continuous coverage for fixed binaries.
//
// Once locations x and break flags y are fixed, no coverage constraint links
// two different periods, and the objective's uncovered-demand term is a sum
// over periods. The continuous part therefore splits into one problem per
// period: maximise sum (z + zb) subject to the link, gate and capacity rows.
// That problem is a bipartite max-flow
//
//   source --(1)--> agent --(min(1, D_i))--> incident i --(D_i)--> sink
//
// where an agent has arcs to the cells it reaches in its current state
// (N for idle, N-bar for on-break). All capacities are scaled by 1000, the
// demand precision, so the flow is integral and the optimum is exact.

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

#include "bapcac/decimal.hpp"
#include "bapcac/evaluator.hpp"
#include "bapcac/instance.hpp"

namespace bapcac {

struct FlowArc {
  int agent = 0;
  int cell = 0;  // incident position
  std::int64_t capacity = 0;
  bool on_break = false;
  friend bool operator==(const FlowArc&, const FlowArc&) = default;
};

/// Bipartite coverage network for one period. Capacities are in thousandths.
struct PeriodFlowNet {
  static constexpr std::int64_t kScale = Decimal::kScale;

  int period = 0;
  std::vector<std::int64_t> source_caps;  // per agent
  std::vector<std::int64_t> sink_caps;    // per incident cell
  std::vector<FlowArc> arcs;              // sorted by (agent, cell)

  int num_agents() const { return static_cast<int>(source_caps.size()); }
  int num_cells() const { return static_cast<int>(sink_caps.size()); }
};

struct FlowResult {
  std::int64_t flow_value = 0;
  std::vector<std::int64_t> arc_flows;  // aligned with PeriodFlowNet::arcs
};

namespace detail {

// Dinic's algorithm on a small graph. Adjacency lists keep insertion order,
// so results are deterministic for a fixed arc order.
class MaxFlow {
 public:
  explicit MaxFlow(int nodes) : head_(static_cast<std::size_t>(nodes)) {}

  int add_edge(int from, int to, std::int64_t cap) {
    const int id = static_cast<int>(to_.size());
    to_.push_back(to);
    cap_.push_back(cap);
    head_[static_cast<std::size_t>(from)].push_back(id);
    to_.push_back(from);
    cap_.push_back(0);
    head_[static_cast<std::size_t>(to)].push_back(id + 1);
    return id;
  }

  std::int64_t run(int s, int t) {
    std::int64_t total = 0;
    const std::size_t n = head_.size();
    level_.assign(n, -1);
    next_.assign(n, 0);
    while (bfs(s, t)) {
      std::fill(next_.begin(), next_.end(), 0);
      while (const std::int64_t f = dfs(s, t, std::numeric_limits<std::int64_t>::max())) {
        total += f;
      }
    }
    return total;
  }

  std::int64_t flow_on(int edge) const { return cap_[static_cast<std::size_t>(edge) + 1]; }

 private:
  bool bfs(int s, int t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<int> q;
    level_[static_cast<std::size_t>(s)] = 0;
    q.push(s);
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (const int e : head_[static_cast<std::size_t>(u)]) {
        const int v = to_[static_cast<std::size_t>(e)];
        if (cap_[static_cast<std::size_t>(e)] > 0 && level_[static_cast<std::size_t>(v)] < 0) {
          level_[static_cast<std::size_t>(v)] = level_[static_cast<std::size_t>(u)] + 1;
          q.push(v);
        }
      }
    }
    return level_[static_cast<std::size_t>(t)] >= 0;
  }

  std::int64_t dfs(int u, int t, std::int64_t pushed) {
    if (u == t) return pushed;
    auto& edges = head_[static_cast<std::size_t>(u)];
    for (std::size_t& k = next_[static_cast<std::size_t>(u)]; k < edges.size(); ++k) {
      const int e = edges[k];
      const int v = to_[static_cast<std::size_t>(e)];
      if (cap_[static_cast<std::size_t>(e)] <= 0 ||
          level_[static_cast<std::size_t>(v)] != level_[static_cast<std::size_t>(u)] + 1) {
        continue;
      }
      const std::int64_t f = dfs(v, t, std::min(pushed, cap_[static_cast<std::size_t>(e)]));
      if (f > 0) {
        cap_[static_cast<std::size_t>(e)] -= f;
        cap_[static_cast<std::size_t>(e) ^ 1u] += f;
        return f;
      }
    }
    return 0;
  }

  std::vector<std::vector<int>> head_;
  std::vector<int> to_;
  std::vector<std::int64_t> cap_;
  std::vector<int> level_;
  std::vector<std::size_t> next_;
};

inline std::int64_t arc_capacity(Decimal demand) {
  return std::min<std::int64_t>(PeriodFlowNet::kScale, demand.raw());
}

}  // namespace detail

/// Coverage network for `period` (0-based) under the schedule's binaries.
inline PeriodFlowNet build_period_net(const Instance& inst, const Schedule& s, int period) {
  if (period < 0 || period >= inst.horizon()) {
    throw StructuralError("period " + std::to_string(period + 1) + " outside horizon");
  }
  const int A = inst.agents;
  const int I = inst.num_incident();
  PeriodFlowNet net;
  net.period = period;
  net.source_caps.assign(static_cast<std::size_t>(A), PeriodFlowNet::kScale);
  net.sink_caps.resize(static_cast<std::size_t>(I));
  std::int64_t total = 0;
  for (int i = 0; i < I; ++i) {
    const std::int64_t cap = inst.demand.at(i, period).raw();
    if (cap > std::numeric_limits<std::int64_t>::max() - total) {
      throw InputError("demand total overflows the flow capacity type");
    }
    total += cap;
    net.sink_caps[static_cast<std::size_t>(i)] = cap;
  }
  for (int a = 0; a < A; ++a) {
    const int loc = s.loc(a, period);
    const bool on_break = s.brk(a, period) != 0;
    if (on_break && !inst.options.preemptive) continue;
    const BinaryMatrix& reach = on_break ? inst.adjacency.n_break : inst.adjacency.n_idle;
    for (int i = 0; i < I; ++i) {
      if (reach(i, loc) == 0) continue;
      const std::int64_t cap = detail::arc_capacity(inst.demand.at(i, period));
      if (cap > 0) net.arcs.push_back({a, i, cap, on_break});
    }
  }
  return net;
}

/// Maximum total coverage of the network (in thousandths) with per-arc flows.
inline FlowResult max_coverage(const PeriodFlowNet& net) {
  const int A = net.num_agents();
  const int I = net.num_cells();
  const int source = 0;
  const int sink = A + I + 1;
  detail::MaxFlow mf(A + I + 2);
  for (int a = 0; a < A; ++a) mf.add_edge(source, 1 + a, net.source_caps[static_cast<std::size_t>(a)]);
  std::vector<int> arc_edges;
  arc_edges.reserve(net.arcs.size());
  for (const FlowArc& arc : net.arcs) {
    arc_edges.push_back(mf.add_edge(1 + arc.agent, 1 + A + arc.cell, arc.capacity));
  }
  for (int i = 0; i < I; ++i) mf.add_edge(1 + A + i, sink, net.sink_caps[static_cast<std::size_t>(i)]);
  FlowResult r;
  r.flow_value = mf.run(source, sink);
  r.arc_flows.reserve(arc_edges.size());
  for (const int e : arc_edges) r.arc_flows.push_back(mf.flow_on(e));
  return r;
}

/// Total demand of one period, in thousandths.
inline std::int64_t period_demand(const Instance& inst, int period) {
  std::int64_t d = 0;
  for (int i = 0; i < inst.num_incident(); ++i) d += inst.demand.at(i, period).raw();
  return d;
}

/// Minimal uncovered demand of one period under the schedule's binaries.
inline Decimal period_uncovered(const Instance& inst, const Schedule& s, int period) {
  return Decimal::from_raw(period_demand(inst, period) -
                           max_coverage(build_period_net(inst, s, period)).flow_value);
}

/// Optimal z, zb, delta for the schedule's binaries, period by period.
inline CoveragePlan assemble_coverage(const Instance& inst, const Schedule& s) {
  require_schedule_shape(s, inst);
  CoveragePlan plan(inst);
  const int T = inst.horizon();
  const int I = inst.num_incident();
  std::vector<Decimal> sums(static_cast<std::size_t>(I) * T);
  for (int t = 0; t < T; ++t) {
    const PeriodFlowNet net = build_period_net(inst, s, t);
    const FlowResult flow = max_coverage(net);
    for (std::size_t k = 0; k < net.arcs.size(); ++k) {
      const FlowArc& arc = net.arcs[k];
      const Decimal z = Decimal::from_raw(flow.arc_flows[k]);
      if (arc.on_break) {
        plan.on_break(arc.agent, t, arc.cell) = z;
      } else {
        plan.idle(arc.agent, t, arc.cell) = z;
      }
      sums[static_cast<std::size_t>(arc.cell) * T + t] += z;
    }
  }
  plan.uncovered = implied_delta(inst, sums);
  return plan;
}

}  // namespace bapcac
