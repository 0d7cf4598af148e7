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

#include <cmath>
#include <string>

#include "bapcac/instance.hpp"

namespace bapcac {

enum class Metric { kEuclidean, kManhattan };

inline std::string to_string(Metric m) {
  return m == Metric::kEuclidean ? "euclidean" : "manhattan";
}

inline Metric metric_from_string(const std::string& s) {
  if (s == "euclidean") return Metric::kEuclidean;
  if (s == "manhattan") return Metric::kManhattan;
  throw InputError("unknown metric: " + s);
}

/// Travel model from which reach and movement matrices are derived.
struct TravelConfig {
  double speed = 1.0;
  double target_arrival = 1.0;
  double prep_delay = 0.0;
  double period_length = 1.0;
  Metric metric = Metric::kEuclidean;

  friend bool operator==(const TravelConfig&, const TravelConfig&) = default;
};

inline void require_valid(const TravelConfig& cfg) {
  if (!(cfg.speed > 0.0)) throw InputError("travel.speed must be > 0");
  if (!(cfg.target_arrival > 0.0)) throw InputError("travel.target_arrival must be > 0");
  if (!(cfg.prep_delay >= 0.0)) throw InputError("travel.prep_delay must be >= 0");
  if (!(cfg.period_length > 0.0)) throw InputError("travel.period_length must be > 0");
}

inline double distance(Point p, Point q, Metric m) {
  const double dx = p.x - q.x;
  const double dy = p.y - q.y;
  return m == Metric::kEuclidean ? std::hypot(dx, dy) : std::abs(dx) + std::abs(dy);
}

namespace detail {

// Boundary ties count as reachable. The relative epsilon absorbs the
// rounding in hypot/division so that e.g. a distance of exactly one cell
// against a budget of one cell stays inclusive.
inline bool within(double travel_time, double budget) {
  return travel_time <= budget * (1.0 + 1e-12) + 1e-12;
}

}  // namespace detail

/// N(i, j) = 1 iff an idle vehicle at location j reaches incident i within
/// the target arrival time.
inline BinaryMatrix build_n_idle(const Grid& grid, const TravelConfig& cfg) {
  const int I = static_cast<int>(grid.incident_cells.size());
  const int J = static_cast<int>(grid.location_cells.size());
  BinaryMatrix n(I, J);
  for (int i = 0; i < I; ++i) {
    const Point pi = grid.cell_center(grid.incident_cells[static_cast<std::size_t>(i)]);
    for (int j = 0; j < J; ++j) {
      const Point pj = grid.cell_center(grid.location_cells[static_cast<std::size_t>(j)]);
      n(i, j) = detail::within(distance(pi, pj, cfg.metric) / cfg.speed,
                               cfg.target_arrival);
    }
  }
  return n;
}

/// Same as build_n_idle with the preparation delay added to travel time.
inline BinaryMatrix build_n_break(const Grid& grid, const TravelConfig& cfg) {
  const int I = static_cast<int>(grid.incident_cells.size());
  const int J = static_cast<int>(grid.location_cells.size());
  BinaryMatrix n(I, J);
  for (int i = 0; i < I; ++i) {
    const Point pi = grid.cell_center(grid.incident_cells[static_cast<std::size_t>(i)]);
    for (int j = 0; j < J; ++j) {
      const Point pj = grid.cell_center(grid.location_cells[static_cast<std::size_t>(j)]);
      const double budget = cfg.target_arrival - cfg.prep_delay;
      n(i, j) = budget >= 0.0 &&
                detail::within(distance(pi, pj, cfg.metric) / cfg.speed, budget);
    }
  }
  return n;
}

/// IM(j, j') = 1 iff j' is reachable from j within one period.
inline BinaryMatrix build_im(const Grid& grid, const TravelConfig& cfg) {
  const int J = static_cast<int>(grid.location_cells.size());
  BinaryMatrix m(J, J);
  for (int j = 0; j < J; ++j) {
    const Point pj = grid.cell_center(grid.location_cells[static_cast<std::size_t>(j)]);
    for (int k = 0; k < J; ++k) {
      const Point pk = grid.cell_center(grid.location_cells[static_cast<std::size_t>(k)]);
      m(j, k) = j == k || detail::within(distance(pj, pk, cfg.metric) / cfg.speed,
                                         cfg.period_length);
    }
  }
  return m;
}

inline AdjacencySet build_adjacency(const Grid& grid, const TravelConfig& cfg) {
  require_valid(cfg);
  return {build_n_idle(grid, cfg), build_n_break(grid, cfg), build_im(grid, cfg)};
}

}  // namespace bapcac
