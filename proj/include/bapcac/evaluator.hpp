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

// Constraint checking and objective evaluation. This is the single source of
// truth for feasibility: both solvers, the CLI verifier, and the LP export
// census agree with the loops in this file.
//
// Constraint families, by equation number of the model:
//   (1)  objective  w * sum delta + (1 - w) * sum (1 - y)
//   (2)  coverage_balance  sum_a (z + zb)(a,t,i) = D(i,t) - delta(i,t)
//   (3)  idle_link         z(a,t,i)  <= sum_{j: N(i,j)=1}  D(i,t) x(a,t,j)
//   (4)  break_link        zb(a,t,i) <= sum_{j: Nb(i,j)=1} D(i,t) x(a,t,j)
//   (5)  idle_gate         z(a,t,i)  <= D(i,t) (1 - y(a,t))
//   (6)  break_gate        zb(a,t,i) <= D(i,t) y(a,t)
//   (7)  idle_capacity     sum_i z(a,t,i)  <= 1
//   (8)  break_capacity    sum_i zb(a,t,i) <= 1
//   (9)  location          sum_j x(a,t,j) = 1            (structural)
//   (10) movement          x(a,t,j) + x(a,t+1,j') <= 1 + IM(j,j')
//   (11) min_duration      sum_{t'=t}^{t+dmin} y(a,t') >= dmin alpha(a,b,t)
//   (12) max_duration      y(a,t+dmax+1) + alpha(a,b,t) <= 1
//   (13) window_start      sum_{t'=t}^{t+maxw} alpha(a,b,t') = 1   (or >= 1)
//   (14) overlap           short window + long window alpha sums <= 2
//   (15) bounds            0 <= z, zb <= 1, delta >= 0, binaries in {0,1}
// Index ranges follow the model literally with 1-based periods; e.g. (11)
// is instantiated for tau in {1..T-dmin}, i.e. 0-based t in [0, T-dmin-1].

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bapcac/decimal.hpp"
#include "bapcac/instance.hpp"

namespace bapcac {

enum class Family : int {
  kCoverageBalance = 2,
  kIdleLink = 3,
  kBreakLink = 4,
  kIdleGate = 5,
  kBreakGate = 6,
  kIdleCapacity = 7,
  kBreakCapacity = 8,
  kLocation = 9,
  kMovement = 10,
  kMinDuration = 11,
  kMaxDuration = 12,
  kWindowStart = 13,
  kOverlap = 14,
  kBounds = 15,
};

inline constexpr std::array<Family, 14> kAllFamilies = {
    Family::kCoverageBalance, Family::kIdleLink,     Family::kBreakLink,
    Family::kIdleGate,        Family::kBreakGate,    Family::kIdleCapacity,
    Family::kBreakCapacity,   Family::kLocation,     Family::kMovement,
    Family::kMinDuration,     Family::kMaxDuration,  Family::kWindowStart,
    Family::kOverlap,         Family::kBounds};

inline int equation_number(Family f) { return static_cast<int>(f); }

inline std::string family_name(Family f) {
  switch (f) {
    case Family::kCoverageBalance: return "coverage_balance";
    case Family::kIdleLink: return "idle_link";
    case Family::kBreakLink: return "break_link";
    case Family::kIdleGate: return "idle_gate";
    case Family::kBreakGate: return "break_gate";
    case Family::kIdleCapacity: return "idle_capacity";
    case Family::kBreakCapacity: return "break_capacity";
    case Family::kLocation: return "location";
    case Family::kMovement: return "movement";
    case Family::kMinDuration: return "min_duration";
    case Family::kMaxDuration: return "max_duration";
    case Family::kWindowStart: return "window_start";
    case Family::kOverlap: return "overlap";
    case Family::kBounds: return "bounds";
  }
  return "unknown";
}

/// Indices of a violated constraint; unused positions are empty. `t` is the
/// 0-based period; `j2` is the second location of a movement pair.
struct ConstraintIndex {
  std::optional<int> a = {}, b = {}, t = {}, i = {}, j = {}, j2 = {};
  friend bool operator==(const ConstraintIndex&, const ConstraintIndex&) = default;
};

inline std::string to_string(const ConstraintIndex& idx) {
  std::string s;
  auto add = [&s](const char* name, const std::optional<int>& v, int offset) {
    if (!v) return;
    if (!s.empty()) s += ' ';
    s += name;
    s += '=';
    s += std::to_string(*v + offset);
  };
  add("a", idx.a, 0);
  add("b", idx.b, 0);
  add("t", idx.t, 1);
  add("i", idx.i, 0);
  add("j", idx.j, 0);
  add("j'", idx.j2, 0);
  return s;
}

/// A failed constraint. `slack` is rhs - lhs for <= rows (negative when
/// reported) and -|lhs - rhs| for equalities. Period-count families carry
/// integral slack.
struct Violation {
  Family constraint;
  ConstraintIndex indices;
  Decimal slack;
};

/// Per-family count of instantiated constraint rows seen by check_all.
struct CheckStats {
  std::array<std::int64_t, 16> rows{};
  std::int64_t& operator[](Family f) { return rows[static_cast<std::size_t>(f)]; }
  std::int64_t operator[](Family f) const { return rows[static_cast<std::size_t>(f)]; }
  std::int64_t total() const {
    std::int64_t s = 0;
    for (auto r : rows) s += r;
    return s;
  }
  friend bool operator==(const CheckStats&, const CheckStats&) = default;
};

namespace detail {

inline bool has_overlap_pair(const Instance& inst, int* short_b, int* long_b) {
  *short_b = inst.break_type_index("short");
  *long_b = inst.break_type_index("long");
  return *short_b >= 0 && *long_b >= 0;
}

}  // namespace detail

/// Which break-rule families check_break_rules evaluates.
struct BreakFamilies {
  bool min_duration = true;
  bool max_duration = true;
  bool window_start = true;
  bool overlap = true;
};

/// Checks (11)-(14) for a single agent. `y` has horizon entries; `alpha` has
/// break_types x horizon entries, row-major by type. Violations are appended
/// with agent index `agent`. Returns true iff no violation was found.
inline bool check_break_rules(const Instance& inst, std::span<const std::uint8_t> y,
                              std::span<const std::uint8_t> alpha, int agent,
                              std::vector<Violation>* out, CheckStats* stats,
                              BreakFamilies families = {}) {
  const int T = inst.horizon();
  const int B = inst.num_break_types();
  bool ok = true;
  auto al = [&](int b, int t) -> int { return alpha[static_cast<std::size_t>(b) * T + t]; };
  auto report = [&](Family f, ConstraintIndex idx, std::int64_t slack) {
    ok = false;
    if (out) out->push_back({f, idx, Decimal::from_int(slack)});
  };

  for (int b = 0; b < B; ++b) {
    const BreakTypeSpec& bt = inst.break_types[static_cast<std::size_t>(b)];
    if (families.min_duration) {
      for (int t = 0; t + bt.min_duration <= T - 1; ++t) {
        if (stats) ++(*stats)[Family::kMinDuration];
        std::int64_t lhs = 0;
        for (int u = t; u <= t + bt.min_duration; ++u) lhs += y[static_cast<std::size_t>(u)];
        const std::int64_t rhs = static_cast<std::int64_t>(bt.min_duration) * al(b, t);
        if (lhs < rhs) report(Family::kMinDuration, {.a = agent, .b = b, .t = t}, lhs - rhs);
        if (!ok && !out) return false;
      }
    }
    if (families.max_duration) {
      for (int t = 0; t + bt.max_duration + 1 <= T - 1; ++t) {
        if (stats) ++(*stats)[Family::kMaxDuration];
        const std::int64_t lhs = y[static_cast<std::size_t>(t + bt.max_duration + 1)] + al(b, t);
        if (lhs > 1) report(Family::kMaxDuration, {.a = agent, .b = b, .t = t}, 1 - lhs);
        if (!ok && !out) return false;
      }
    }
    if (families.window_start) {
      for (int t = 0; t + bt.max_work_before <= T - 1; ++t) {
        if (stats) ++(*stats)[Family::kWindowStart];
        std::int64_t lhs = 0;
        for (int u = t; u <= t + bt.max_work_before; ++u) lhs += al(b, u);
        if (inst.options.strict_window_equality) {
          if (lhs != 1) {
            report(Family::kWindowStart, {.a = agent, .b = b, .t = t}, lhs > 1 ? 1 - lhs : lhs - 1);
          }
        } else if (lhs < 1) {
          report(Family::kWindowStart, {.a = agent, .b = b, .t = t}, lhs - 1);
        }
        if (!ok && !out) return false;
      }
    }
  }

  int sb = -1;
  int lb = -1;
  if (families.overlap && detail::has_overlap_pair(inst, &sb, &lb)) {
    const int ms = inst.break_types[static_cast<std::size_t>(sb)].max_work_before;
    const int ml = inst.break_types[static_cast<std::size_t>(lb)].max_work_before;
    for (int t = 0; t + ml <= T - 1; ++t) {
      if (stats) ++(*stats)[Family::kOverlap];
      std::int64_t lhs = 0;
      for (int u = t; u <= std::min(t + ms, T - 1); ++u) lhs += al(sb, u);
      for (int u = t; u <= t + ml; ++u) lhs += al(lb, u);
      if (lhs > 2) report(Family::kOverlap, {.a = agent, .t = t}, 2 - lhs);
      if (!ok && !out) return false;
    }
  }
  return ok;
}

namespace detail {

inline void require_coverage_shape(const CoveragePlan& c, const Instance& inst) {
  const std::size_t zsize =
      static_cast<std::size_t>(inst.agents) * inst.horizon() * inst.num_incident();
  if (c.agents != inst.agents || c.horizon != inst.horizon() ||
      c.num_incident != inst.num_incident() || c.idle_cover.size() != zsize ||
      c.break_cover.size() != zsize ||
      c.uncovered.size() != static_cast<std::size_t>(inst.num_incident()) * inst.horizon()) {
    throw StructuralError("coverage plan shape does not match instance");
  }
}

}  // namespace detail

/// Evaluates every constraint family (2)-(15) and returns the violated rows.
/// Location totality (9) is structural: out-of-range locations throw
/// StructuralError, in-range ones satisfy (9) by construction.
inline std::vector<Violation> check_all(const Instance& inst, const Schedule& s,
                                        const CoveragePlan& c,
                                        CheckStats* stats = nullptr) {
  require_schedule_shape(s, inst);
  detail::require_coverage_shape(c, inst);

  const int A = inst.agents;
  const int T = inst.horizon();
  const int I = inst.num_incident();
  const int J = inst.num_locations();
  const int B = inst.num_break_types();
  const bool preemptive = inst.options.preemptive;
  const Decimal zero{};
  const Decimal one = Decimal::from_int(1);
  std::vector<Violation> out;
  auto count = [stats](Family f, std::int64_t n = 1) {
    if (stats) (*stats)[f] += n;
  };

  // (2)
  for (int i = 0; i < I; ++i) {
    for (int t = 0; t < T; ++t) {
      count(Family::kCoverageBalance);
      Decimal lhs = c.delta(i, t);
      for (int a = 0; a < A; ++a) lhs += c.idle(a, t, i) + c.on_break(a, t, i);
      const Decimal d = inst.demand.at(i, t);
      if (lhs != d) {
        const Decimal diff = lhs > d ? lhs - d : d - lhs;
        out.push_back({Family::kCoverageBalance, {.t = t, .i = i}, -diff});
      }
    }
  }

  for (int a = 0; a < A; ++a) {
    for (int t = 0; t < T; ++t) {
      const int loc = s.loc(a, t);
      const std::int64_t y = s.brk(a, t);
      count(Family::kLocation);
      Decimal idle_sum{};
      Decimal break_sum{};
      for (int i = 0; i < I; ++i) {
        const Decimal d = inst.demand.at(i, t);
        const Decimal z = c.idle(a, t, i);
        const Decimal zb = c.on_break(a, t, i);
        idle_sum += z;
        break_sum += zb;
        // (3): x is one-hot, so sum_{j: N(i,j)=1} D x(a,t,j) = D N(i, loc).
        count(Family::kIdleLink);
        const Decimal idle_reach = d * inst.adjacency.n_idle(i, loc);
        if (z > idle_reach) {
          out.push_back({Family::kIdleLink, {.a = a, .t = t, .i = i}, idle_reach - z});
        }
        // (5)
        count(Family::kIdleGate);
        const Decimal idle_gate = d * (1 - y);
        if (z > idle_gate) {
          out.push_back({Family::kIdleGate, {.a = a, .t = t, .i = i}, idle_gate - z});
        }
        if (preemptive) {
          // (4)
          count(Family::kBreakLink);
          const Decimal break_reach = d * inst.adjacency.n_break(i, loc);
          if (zb > break_reach) {
            out.push_back({Family::kBreakLink, {.a = a, .t = t, .i = i}, break_reach - zb});
          }
          // (6)
          count(Family::kBreakGate);
          const Decimal break_gate = d * y;
          if (zb > break_gate) {
            out.push_back({Family::kBreakGate, {.a = a, .t = t, .i = i}, break_gate - zb});
          }
        }
        // (15) continuous bounds
        if (z < zero || z > one) {
          out.push_back({Family::kBounds, {.a = a, .t = t, .i = i}, z < zero ? z : one - z});
        }
        if (preemptive && (zb < zero || zb > one)) {
          out.push_back({Family::kBounds, {.a = a, .t = t, .i = i}, zb < zero ? zb : one - zb});
        }
        if (!preemptive && zb != zero) {
          const Decimal mag = zb < zero ? -zb : zb;
          out.push_back({Family::kBounds, {.a = a, .t = t, .i = i}, -mag});
        }
      }
      // (7), (8)
      count(Family::kIdleCapacity);
      if (idle_sum > one) {
        out.push_back({Family::kIdleCapacity, {.a = a, .t = t}, one - idle_sum});
      }
      if (preemptive) {
        count(Family::kBreakCapacity);
        if (break_sum > one) {
          out.push_back({Family::kBreakCapacity, {.a = a, .t = t}, one - break_sum});
        }
      }
      // (10): of the J x J rows only the (loc_t, loc_t+1) pair can have a
      // left-hand side of 2.
      if (t + 1 < T) {
        count(Family::kMovement, static_cast<std::int64_t>(J) * J);
        const int next = s.loc(a, t + 1);
        if (inst.adjacency.im_move(loc, next) == 0) {
          out.push_back({Family::kMovement, {.a = a, .t = t, .j = loc, .j2 = next},
                         Decimal::from_int(-1)});
        }
      }
      // (15) binaries
      if (y > 1) {
        out.push_back({Family::kBounds, {.a = a, .t = t}, Decimal::from_int(1 - y)});
      }
      for (int b = 0; b < B; ++b) {
        const std::int64_t al = s.start(a, b, t);
        if (al > 1) {
          out.push_back({Family::kBounds, {.a = a, .b = b, .t = t}, Decimal::from_int(1 - al)});
        }
      }
    }
    // (11)-(14)
    const std::span<const std::uint8_t> y_row(s.on_break.data() + static_cast<std::size_t>(a) * T,
                                              static_cast<std::size_t>(T));
    const std::span<const std::uint8_t> alpha_row(
        s.break_start.data() + static_cast<std::size_t>(a) * B * T,
        static_cast<std::size_t>(B) * T);
    check_break_rules(inst, y_row, alpha_row, a, &out, stats);
  }

  // (15) delta >= 0
  for (int i = 0; i < I; ++i) {
    for (int t = 0; t < T; ++t) {
      if (c.delta(i, t) < zero) {
        out.push_back({Family::kBounds, {.t = t, .i = i}, c.delta(i, t)});
      }
    }
  }
  return out;
}

/// Closed-form count of instantiated rows per family, matching both
/// check_all's CheckStats and the LP export.
inline CheckStats constraint_census(const Instance& inst) {
  CheckStats c;
  const std::int64_t A = inst.agents;
  const std::int64_t T = inst.horizon();
  const std::int64_t I = inst.num_incident();
  const std::int64_t J = inst.num_locations();
  const bool pre = inst.options.preemptive;
  c[Family::kCoverageBalance] = I * T;
  c[Family::kIdleLink] = A * T * I;
  c[Family::kIdleGate] = A * T * I;
  c[Family::kBreakLink] = pre ? A * T * I : 0;
  c[Family::kBreakGate] = pre ? A * T * I : 0;
  c[Family::kIdleCapacity] = A * T;
  c[Family::kBreakCapacity] = pre ? A * T : 0;
  c[Family::kLocation] = A * T;
  c[Family::kMovement] = A * std::max<std::int64_t>(0, T - 1) * J * J;
  for (const auto& bt : inst.break_types) {
    c[Family::kMinDuration] += A * std::max<std::int64_t>(0, T - bt.min_duration);
    c[Family::kMaxDuration] += A * std::max<std::int64_t>(0, T - bt.max_duration - 1);
    c[Family::kWindowStart] += A * std::max<std::int64_t>(0, T - bt.max_work_before);
  }
  int sb = -1;
  int lb = -1;
  if (detail::has_overlap_pair(inst, &sb, &lb)) {
    c[Family::kOverlap] =
        A * std::max<std::int64_t>(0, T - inst.break_types[static_cast<std::size_t>(lb)].max_work_before);
  }
  return c;
}

struct ObjectiveBreakdown {
  ObjectiveValue objective;
  Decimal total_uncovered;
  std::int64_t total_nonbreak_periods = 0;
  friend bool operator==(const ObjectiveBreakdown&, const ObjectiveBreakdown&) = default;
};

/// w * total_uncovered + (1 - w) * total_nonbreak_periods, exactly.
inline ObjectiveValue weighted_objective(Decimal w, Decimal total_uncovered,
                                         std::int64_t nonbreak) {
  return multiply(w, total_uncovered) +
         multiply(Decimal::from_int(1) - w, Decimal::from_int(nonbreak));
}

/// Objective value and its two raw components. No feasibility checking.
inline ObjectiveBreakdown objective(const Instance& inst, const Schedule& s,
                                   const CoveragePlan& c) {
  ObjectiveBreakdown r;
  for (const Decimal d : c.uncovered) r.total_uncovered += d;
  for (const auto y : s.on_break) r.total_nonbreak_periods += 1 - static_cast<std::int64_t>(y);
  r.objective = weighted_objective(inst.weight, r.total_uncovered, r.total_nonbreak_periods);
  return r;
}

/// delta(i,t) = D(i,t) - coverage_sums(i,t); sums are laid out like
/// CoveragePlan::uncovered. Throws InfeasibleError on over-coverage.
inline std::vector<Decimal> implied_delta(const Instance& inst,
                                          const std::vector<Decimal>& coverage_sums) {
  const int I = inst.num_incident();
  const int T = inst.horizon();
  if (coverage_sums.size() != static_cast<std::size_t>(I) * T) {
    throw StructuralError("coverage sums shape does not match instance");
  }
  std::vector<Decimal> delta(coverage_sums.size());
  for (int i = 0; i < I; ++i) {
    for (int t = 0; t < T; ++t) {
      const std::size_t k = static_cast<std::size_t>(i) * T + t;
      const Decimal d = inst.demand.at(i, t);
      if (coverage_sums[k] > d) {
        throw InfeasibleError("coverage " + coverage_sums[k].to_trimmed_string() +
                              " exceeds demand " + d.to_trimmed_string() + " at i=" +
                              std::to_string(i) + " t=" + std::to_string(t + 1));
      }
      delta[k] = d - coverage_sums[k];
    }
  }
  return delta;
}

/// Builds a Solution record, recomputing the objective from its parts.
inline Solution make_solution(const Instance& inst, Schedule s, CoveragePlan c) {
  const ObjectiveBreakdown ob = objective(inst, s, c);
  return {std::move(s), std::move(c), ob.objective, ob.total_uncovered,
          ob.total_nonbreak_periods};
}

}  // namespace bapcac
