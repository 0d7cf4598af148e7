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

// Synthetic instances with bell-shaped demand hotspots in space and time,
// and the small fixed suite used by the oracle tests.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "bapcac/adjacency.hpp"
#include "bapcac/decimal.hpp"
#include "bapcac/instance.hpp"

namespace bapcac {

struct Hotspot {
  Point center;
  Decimal peak = Decimal::from_int(1);
  double spatial_spread = 1.0;
  double temporal_center = 1.0;  // 1-based period
  double temporal_spread = 1.0;
  friend bool operator==(const Hotspot&, const Hotspot&) = default;
};

struct GeneratorSpec {
  int grid_side_cells = 4;
  /// Physical side length; defaults to one unit per cell.
  std::optional<double> side_length;
  int horizon = 8;
  int agents = 2;
  std::vector<Hotspot> hotspots;
  TravelConfig travel;
  std::vector<BreakTypeSpec> break_types = default_break_types();
  Decimal weight = Decimal::from_raw(500);
  std::uint64_t seed = 0;
  ModelOptions options;
  /// Restricts both vehicle locations and incident candidates to these cells.
  std::optional<std::vector<int>> active_cells;
  /// Relative multiplicative noise in [0, 1); drawn from `seed`.
  double noise = 0.0;

  friend bool operator==(const GeneratorSpec&, const GeneratorSpec&) = default;
};

namespace detail {

inline double bell(double d, double spread) {
  return std::exp(-(d * d) / (2.0 * spread * spread));
}

inline void check_spec(const GeneratorSpec& spec) {
  if (spec.grid_side_cells < 1) throw InputError("grid_side_cells must be >= 1");
  if (spec.side_length && !(*spec.side_length > 0.0)) throw InputError("side_length must be > 0");
  if (spec.horizon < 1) throw InputError("horizon must be >= 1");
  if (spec.agents < 1) throw InputError("agents must be >= 1");
  if (spec.hotspots.empty()) throw InputError("hotspots must not be empty");
  for (std::size_t k = 0; k < spec.hotspots.size(); ++k) {
    const Hotspot& h = spec.hotspots[k];
    const std::string at = "hotspots[" + std::to_string(k) + "]";
    if (h.peak < Decimal{}) throw InputError(at + ".peak must be >= 0");
    if (!(h.spatial_spread > 0.0)) throw InputError(at + ".spatial_spread must be > 0");
    if (!(h.temporal_spread > 0.0)) throw InputError(at + ".temporal_spread must be > 0");
    if (!std::isfinite(h.center.x) || !std::isfinite(h.center.y) ||
        !std::isfinite(h.temporal_center)) {
      throw InputError(at + " has a non-finite coordinate");
    }
  }
  if (!(spec.noise >= 0.0 && spec.noise < 1.0)) throw InputError("noise must be in [0, 1)");
  const int cells = spec.grid_side_cells * spec.grid_side_cells;
  if (spec.active_cells) {
    if (spec.active_cells->empty()) throw InputError("active_cells must not be empty");
    for (const int c : *spec.active_cells) {
      if (c < 0 || c >= cells) throw InputError("active_cells entry " + std::to_string(c) + " out of range");
    }
  }
  require_valid(spec.travel);
}

}  // namespace detail

/// Builds an instance from a generator spec; the result depends on nothing else.
/// Throws InputError for malformed specs and RefusedError when every demand
/// value rounds to zero.
inline Instance generate(const GeneratorSpec& spec) {
  detail::check_spec(spec);
  Instance inst;
  inst.grid.cells_per_side = spec.grid_side_cells;
  inst.grid.side_length = spec.side_length.value_or(static_cast<double>(spec.grid_side_cells));
  const int cells = inst.grid.num_cells();
  std::vector<int> candidates;
  if (spec.active_cells) {
    candidates = *spec.active_cells;
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  } else {
    for (int c = 0; c < cells; ++c) candidates.push_back(c);
  }
  inst.grid.location_cells = candidates;

  const int T = spec.horizon;
  std::mt19937_64 rng(spec.seed);
  std::vector<Decimal> values;
  for (const int c : candidates) {
    const Point p = inst.grid.cell_center(c);
    std::vector<Decimal> row(static_cast<std::size_t>(T));
    bool positive = false;
    for (int t = 0; t < T; ++t) {
      double d = 0.0;
      for (const Hotspot& h : spec.hotspots) {
        const double dist = std::hypot(p.x - h.center.x, p.y - h.center.y);
        d += h.peak.to_double() * detail::bell(dist, h.spatial_spread) *
             detail::bell((t + 1) - h.temporal_center, h.temporal_spread);
      }
      if (spec.noise > 0.0) {
        // 53-bit uniform in [-1, 1), independent of the library's distributions.
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
        d *= 1.0 + spec.noise * u;
      }
      row[static_cast<std::size_t>(t)] = round_half_up(d);
      positive = positive || row[static_cast<std::size_t>(t)] > Decimal{};
    }
    if (!positive) continue;
    inst.grid.incident_cells.push_back(c);
    values.insert(values.end(), row.begin(), row.end());
  }
  if (inst.grid.incident_cells.empty()) {
    throw RefusedError("generator spec produces zero total demand");
  }
  inst.demand.horizon = T;
  inst.demand.values = std::move(values);
  inst.adjacency = build_adjacency(inst.grid, spec.travel);
  inst.agents = spec.agents;
  inst.break_types = spec.break_types;
  inst.weight = spec.weight;
  inst.options = spec.options;
  require_valid(inst);
  return inst;
}

/// Specs of the fixed oracle suite. Every member has agents x periods <= 8.
inline std::vector<std::pair<std::string, GeneratorSpec>> suite_specs() {
  TravelConfig travel;
  travel.speed = 1.0;
  travel.target_arrival = 1.0;
  travel.prep_delay = 0.5;
  travel.period_length = 1.0;

  std::vector<std::pair<std::string, GeneratorSpec>> out;

  GeneratorSpec tiny1;
  tiny1.grid_side_cells = 2;
  tiny1.horizon = 2;
  tiny1.agents = 1;
  tiny1.hotspots = {{{0.5, 0.5}, Decimal::parse("0.8"), 1.0, 1.0, 1.0},
                    {{1.5, 1.5}, Decimal::parse("0.6"), 0.8, 2.0, 1.0}};
  tiny1.travel = travel;
  tiny1.break_types = {{"short", 1, 1, 1}};
  out.emplace_back("tiny-1", tiny1);

  GeneratorSpec tiny2;
  tiny2.grid_side_cells = 2;
  tiny2.horizon = 3;
  tiny2.agents = 2;
  tiny2.hotspots = {{{0.5, 1.5}, Decimal::parse("1.2"), 0.9, 1.0, 1.2},
                    {{1.5, 0.5}, Decimal::parse("0.9"), 0.7, 3.0, 1.0}};
  tiny2.travel = travel;
  tiny2.break_types = {{"short", 1, 1, 2}};
  out.emplace_back("tiny-2", tiny2);

  // A 1 x 6 strip (top row of a 6 x 6 grid) with demand moving from the
  // left end to the right end over the horizon.
  GeneratorSpec band;
  band.grid_side_cells = 6;
  band.horizon = 6;
  band.agents = 1;
  band.active_cells = std::vector<int>{0, 1, 2, 3, 4, 5};
  band.hotspots = {{{0.5, 0.5}, Decimal::parse("1.0"), 1.2, 1.0, 1.5},
                   {{5.5, 0.5}, Decimal::parse("1.0"), 1.2, 6.0, 1.5}};
  band.travel = travel;
  band.break_types = {{"short", 1, 1, 2}, {"long", 2, 2, 4}};
  out.emplace_back("band", band);

  GeneratorSpec np;
  np.grid_side_cells = 2;
  np.horizon = 4;
  np.agents = 1;
  np.hotspots = {{{1.0, 1.0}, Decimal::parse("0.7"), 1.0, 2.5, 1.5}};
  np.travel = travel;
  np.break_types = {{"short", 1, 2, 2}};
  np.options.preemptive = false;
  np.options.strict_window_equality = false;
  out.emplace_back("tiny-np", np);
  return out;
}

/// The fixed oracle suite, generated from suite_specs().
inline std::vector<std::pair<std::string, Instance>> bundled_suite() {
  std::vector<std::pair<std::string, Instance>> out;
  for (const auto& [name, spec] : suite_specs()) out.emplace_back(name, generate(spec));
  return out;
}

/// Spec used for the scale probe: 10 agents, 24 periods, 8 x 8 grid,
/// half-hour periods with the default break types.
inline GeneratorSpec scale_probe_spec(std::uint64_t seed = 7) {
  GeneratorSpec s;
  s.grid_side_cells = 8;
  s.horizon = 24;
  s.agents = 10;
  s.seed = seed;
  s.noise = 0.1;
  s.travel.speed = 1.0;
  s.travel.target_arrival = 1.5;
  s.travel.prep_delay = 0.5;
  s.travel.period_length = 1.0;
  s.break_types = default_break_types(2);
  s.hotspots = {{{1.5, 1.5}, Decimal::parse("1.5"), 1.5, 4.0, 3.0},
                {{6.0, 2.0}, Decimal::parse("1.0"), 2.0, 12.0, 4.0},
                {{4.0, 6.5}, Decimal::parse("2.0"), 1.2, 19.0, 3.0}};
  return s;
}

}  // namespace bapcac
