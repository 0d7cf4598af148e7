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

// Break-start search for a single agent.
//
// The break-start binaries alpha never enter the objective; they only have
// to exist. Given an on-break row y whose entries are known (0/1) or free,
// BreakRuleSolver decides whether some alpha satisfies the min/max duration,
// window and overlap rules, and returns one together with a completion of
// the free y entries.
//
// Free entries are completed maximally: y = 1 unless a chosen start forbids
// it through the max-duration rule. More ones never hurt the min-duration
// rule and the max-duration rule only ever forbids single positions, so a
// feasible completion exists iff the maximal one is feasible. Forbidden
// positions are always decided by strictly earlier starts, which lets the
// search run left to right over periods with memoised dead states.

#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "bapcac/evaluator.hpp"
#include "bapcac/instance.hpp"

namespace bapcac {

/// On-break entry that is fixed to 0, fixed to 1, or still open.
enum class BreakFlag : std::uint8_t { kOff = 0, kOn = 1, kFree = 2 };

/// A feasible (y, alpha) pair for one agent; alpha is break_types x horizon.
struct BreakPlan {
  std::vector<std::uint8_t> on_break;
  std::vector<std::uint8_t> starts;
  friend bool operator==(const BreakPlan&, const BreakPlan&) = default;
};

class BreakRuleSolver {
 public:
  explicit BreakRuleSolver(const Instance& inst) : inst_(&inst) {
    T_ = inst.horizon();
    B_ = inst.num_break_types();
    if (B_ > 16) throw InputError("at most 16 break types are supported");
    // Effective y at p depends on starts up to dmax + 1 earlier, and open
    // min-duration windows reach dmin back from t.
    int max_dmin = 0;
    int max_dmax = 0;
    int lookback = 1;
    for (const auto& bt : inst.break_types) {
      max_dmin = std::max(max_dmin, bt.min_duration);
      max_dmax = std::max(max_dmax, bt.max_duration);
      lookback = std::max(lookback, bt.max_work_before + 1);
    }
    lookback = std::max(lookback, max_dmin + max_dmax + 2);
    overlap_ = detail::has_overlap_pair(inst, &short_b_, &long_b_);
    if (overlap_) {
      ms_ = inst.break_types[static_cast<std::size_t>(short_b_)].max_work_before;
      ml_ = inst.break_types[static_cast<std::size_t>(long_b_)].max_work_before;
    }
    lookback_ = lookback + 1;
    masks_.reserve(std::size_t{1} << B_);
    for (std::uint32_t m = 0; m < (1u << B_); ++m) masks_.push_back(m);
    std::stable_sort(masks_.begin(), masks_.end(), [](std::uint32_t x, std::uint32_t y) {
      return std::popcount(x) < std::popcount(y);
    });
  }

  /// Some feasible (y, alpha) consistent with `flags`, or nullopt.
  std::optional<BreakPlan> find(std::span<const BreakFlag> flags) const {
    std::optional<BreakPlan> found;
    search(flags, [&found](const BreakPlan& p) {
      found = p;
      return false;
    });
    return found;
  }

  std::optional<BreakPlan> find(std::span<const std::uint8_t> y) const {
    return find(to_flags(y));
  }

  /// Whether the fully known row `y` admits break starts. Memoised.
  bool feasible(std::span<const std::uint8_t> y) const {
    std::string key(y.begin(), y.end());
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    const bool ok = find(y).has_value();
    cache_.emplace(std::move(key), ok);
    return ok;
  }

  /// Whether the row with every entry free admits any plan, i.e. whether
  /// the break rules are satisfiable at all.
  bool satisfiable() const {
    const std::vector<BreakFlag> flags(static_cast<std::size_t>(T_), BreakFlag::kFree);
    return find(flags).has_value();
  }

  /// Visits feasible plans in search order until `visit` returns false or
  /// `limit` plans were produced.
  void enumerate(std::span<const BreakFlag> flags, std::size_t limit,
                 const std::function<void(const BreakPlan&)>& visit) const {
    std::size_t produced = 0;
    search(flags, [&](const BreakPlan& p) {
      visit(p);
      return ++produced < limit;
    });
  }

  static std::vector<BreakFlag> to_flags(std::span<const std::uint8_t> y) {
    std::vector<BreakFlag> flags(y.size());
    for (std::size_t t = 0; t < y.size(); ++t) {
      flags[t] = y[t] ? BreakFlag::kOn : BreakFlag::kOff;
    }
    return flags;
  }

 private:
  struct State {
    std::span<const BreakFlag> flags;
    std::vector<std::uint32_t> cols;           // alpha column masks
    std::vector<std::uint8_t> y;               // effective on-break row
    std::vector<std::vector<int>> prefix;      // prefix[b][t] = starts of b before t
    std::unordered_set<std::string> dead;
    std::function<bool(const BreakPlan&)> emit;
  };

  const BreakTypeSpec& type(int b) const {
    return inst_->break_types[static_cast<std::size_t>(b)];
  }

  void search(std::span<const BreakFlag> flags,
              std::function<bool(const BreakPlan&)> emit) const {
    if (static_cast<int>(flags.size()) != T_) {
      throw StructuralError("break row length does not match horizon");
    }
    State st;
    st.flags = flags;
    st.cols.assign(static_cast<std::size_t>(T_), 0);
    st.y.assign(static_cast<std::size_t>(T_), 0);
    st.prefix.assign(static_cast<std::size_t>(B_), std::vector<int>(static_cast<std::size_t>(T_) + 1, 0));
    st.emit = std::move(emit);
    dfs(st, 0);
  }

  std::string state_key(const State& st, int t) const {
    std::string key = std::to_string(t) + ':';
    for (int u = std::max(0, t - lookback_); u < t; ++u) {
      const std::uint32_t c = st.cols[static_cast<std::size_t>(u)];
      key += static_cast<char>(c & 0xFFu);
      key += static_cast<char>((c >> 8) & 0xFFu);
    }
    return key;
  }

  int window_count(const State& st, int b, int from, int to) const {
    // starts of type b in [from, to]
    const auto& p = st.prefix[static_cast<std::size_t>(b)];
    return p[static_cast<std::size_t>(to) + 1] - p[static_cast<std::size_t>(from)];
  }

  enum class Outcome { kDead, kFound, kStop };

  Outcome dfs(State& st, int t) const {
    if (t == T_) {
      BreakPlan plan;
      plan.on_break = st.y;
      plan.starts.assign(static_cast<std::size_t>(B_) * T_, 0);
      for (int b = 0; b < B_; ++b) {
        for (int u = 0; u < T_; ++u) {
          plan.starts[static_cast<std::size_t>(b) * T_ + u] =
              (st.cols[static_cast<std::size_t>(u)] >> b) & 1u;
        }
      }
      return st.emit(plan) ? Outcome::kFound : Outcome::kStop;
    }
    const std::string key = state_key(st, t);
    if (st.dead.count(key)) return Outcome::kDead;

    // Max-duration rule: a start s of type b forbids y at s + dmax + 1.
    bool forbidden = false;
    for (int b = 0; b < B_ && !forbidden; ++b) {
      const int s = t - type(b).max_duration - 1;
      forbidden = s >= 0 && ((st.cols[static_cast<std::size_t>(s)] >> b) & 1u);
    }
    const BreakFlag flag = st.flags[static_cast<std::size_t>(t)];
    if (flag == BreakFlag::kOn && forbidden) {
      st.dead.insert(key);
      return Outcome::kDead;
    }
    st.y[static_cast<std::size_t>(t)] =
        flag == BreakFlag::kFree ? (forbidden ? 0 : 1) : static_cast<std::uint8_t>(flag);

    Outcome result = Outcome::kDead;
    for (const std::uint32_t mask : masks_) {
      if (!start_allowed(st, t, mask)) continue;
      st.cols[static_cast<std::size_t>(t)] = mask;
      for (int b = 0; b < B_; ++b) {
        auto& p = st.prefix[static_cast<std::size_t>(b)];
        p[static_cast<std::size_t>(t) + 1] =
            p[static_cast<std::size_t>(t)] + static_cast<int>((mask >> b) & 1u);
      }
      if (!closing_checks(st, t)) continue;
      const Outcome child = dfs(st, t + 1);
      if (child == Outcome::kStop) return Outcome::kStop;
      if (child == Outcome::kFound) result = Outcome::kFound;
    }
    st.cols[static_cast<std::size_t>(t)] = 0;
    if (result == Outcome::kDead) st.dead.insert(key);
    return result;
  }

  bool start_allowed(const State& st, int t, std::uint32_t mask) const {
    for (int b = 0; b < B_; ++b) {
      if (!((mask >> b) & 1u)) continue;
      const BreakTypeSpec& bt = type(b);
      const int p = t + bt.max_duration + 1;
      if (p <= T_ - 1 && st.flags[static_cast<std::size_t>(p)] == BreakFlag::kOn) return false;
      if (t + bt.min_duration <= T_ - 1) {
        int possible = 0;
        for (int u = t; u <= t + bt.min_duration; ++u) {
          possible += st.flags[static_cast<std::size_t>(u)] != BreakFlag::kOff;
        }
        if (possible < bt.min_duration) return false;
      }
    }
    return true;
  }

  bool closing_checks(const State& st, int t) const {
    const bool strict = inst_->options.strict_window_equality;
    for (int b = 0; b < B_; ++b) {
      const BreakTypeSpec& bt = type(b);
      // Min-duration window of a start at s closes at s + dmin.
      const int s = t - bt.min_duration;
      if (s >= 0 && s + bt.min_duration <= T_ - 1 &&
          ((st.cols[static_cast<std::size_t>(s)] >> b) & 1u)) {
        int ones = 0;
        for (int u = s; u <= t; ++u) ones += st.y[static_cast<std::size_t>(u)];
        if (ones < bt.min_duration) return false;
      }
      // Start windows [w, w + m] for w in [0, T - m - 1] that contain t.
      const int m = bt.max_work_before;
      for (int w = std::max(0, t - m); w <= std::min(t, T_ - m - 1); ++w) {
        const int cnt = window_count(st, b, w, t);
        if (strict && cnt > 1) return false;
        if (w + m == t && cnt < 1) return false;
      }
    }
    if (overlap_) {
      const int reach = std::max(ms_, ml_);
      for (int w = std::max(0, t - reach); w <= std::min(t, T_ - ml_ - 1); ++w) {
        int cnt = 0;
        const int short_end = std::min({t, w + ms_, T_ - 1});
        if (short_end >= w) cnt += window_count(st, short_b_, w, short_end);
        const int long_end = std::min(t, w + ml_);
        if (long_end >= w) cnt += window_count(st, long_b_, w, long_end);
        if (cnt > 2) return false;
      }
    }
    return true;
  }

  const Instance* inst_;
  int T_ = 0;
  int B_ = 0;
  int lookback_ = 1;
  bool overlap_ = false;
  int short_b_ = -1;
  int long_b_ = -1;
  int ms_ = 0;
  int ml_ = 0;
  std::vector<std::uint32_t> masks_;
  mutable std::unordered_map<std::string, bool> cache_;
};

}  // namespace bapcac
