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

#include <gtest/gtest.h>

#include "bapcac/adjacency.hpp"
#include "bapcac/decimal.hpp"
#include "bapcac/instance.hpp"
#include "support.hpp"

namespace bapcac {
namespace {

TEST(Decimal, ParsesAndPrintsExactly) {
  EXPECT_EQ(Decimal::parse("1.5").raw(), 1500);
  EXPECT_EQ(Decimal::parse("-0.005").raw(), -5);
  EXPECT_EQ(Decimal::parse("12").raw(), 12000);
  EXPECT_EQ(Decimal::parse(".25").raw(), 250);
  EXPECT_EQ(Decimal::parse("0.1").to_string(), "0.100");
  EXPECT_EQ(Decimal::parse("0.1").to_trimmed_string(), "0.1");
  EXPECT_EQ(Decimal::parse("3.000").to_trimmed_string(), "3");
  EXPECT_EQ(Decimal::parse("-2.5").to_string(), "-2.500");
}

TEST(Decimal, RejectsMalformedText) {
  for (const char* bad : {"", "-", ".", "1.2345", "1e3", "0x1", "1.2.3", " 1", "nan"}) {
    EXPECT_THROW(Decimal::parse(bad), InputError) << bad;
  }
}

TEST(Decimal, ProductsAreExact) {
  // 0.1 * 3 in binary floating point is not 0.3; here it is.
  const ObjectiveValue p = multiply(Decimal::parse("0.1"), Decimal::from_int(3));
  EXPECT_EQ(p, ObjectiveValue::parse("0.3"));
  EXPECT_EQ(multiply(Decimal::parse("0.333"), Decimal::parse("0.333")).to_string(), "0.110889");
  EXPECT_EQ(widen(Decimal::parse("1.25")).to_string(), "1.250000");
}

TEST(Decimal, RoundsHalfUp) {
  EXPECT_EQ(round_half_up(0.0015).raw(), 2);
  EXPECT_EQ(round_half_up(0.0014).raw(), 1);
  EXPECT_EQ(round_half_up(-0.0015).raw(), -2);
  EXPECT_EQ(round_half_up(2.0).raw(), 2000);
}

Instance well_formed() {
  Instance inst = testing::square_instance(2, 2, 1, Decimal::parse("0.5"), {});
  return inst;
}

TEST(ValidateInstance, AcceptsWellFormed) {
  EXPECT_TRUE(validate_instance(well_formed()).empty());
}

TEST(ValidateInstance, BreakReachMustBeSubsetOfIdleReach) {
  Instance inst = well_formed();
  inst.adjacency.n_idle(0, 0) = 0;
  inst.adjacency.n_break(0, 0) = 1;
  const auto v = validate_instance(inst);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].invariant, "n_break_subset_n_idle");
}

TEST(ValidateInstance, WeightRange) {
  Instance inst = well_formed();
  inst.weight = Decimal::parse("1.5");
  const auto v = validate_instance(inst);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].invariant, "weight_range");
  EXPECT_THROW(require_valid(inst), InputError);
}

TEST(ValidateInstance, ReportsEveryBreach) {
  Instance inst = well_formed();
  inst.agents = 0;
  inst.adjacency.im_move(1, 1) = 0;
  inst.break_types = {{"short", 2, 1, 0}, {"short", 1, 1, 1}};
  inst.demand.at(3, 0) = Decimal{};
  inst.demand.at(3, 1) = Decimal{};
  std::set<std::string> names;
  for (const auto& v : validate_instance(inst)) names.insert(v.invariant);
  EXPECT_EQ(names, (std::set<std::string>{"agents", "im_move_diagonal", "break_duration_order",
                                          "break_max_work_before", "break_type_id_unique",
                                          "incident_positive_demand"}));
}

TEST(DenseX, OneHotPerSlice) {
  Instance inst = well_formed();
  inst.agents = 2;
  Schedule s(inst);
  s.loc(0, 0) = 1;
  s.loc(1, 1) = 3;
  const BinaryTensor3 x = dense_x(s, inst);
  for (int a = 0; a < 2; ++a) {
    for (int t = 0; t < 2; ++t) {
      int ones = 0;
      for (int j = 0; j < 4; ++j) ones += x(a, t, j);
      EXPECT_EQ(ones, 1);
      EXPECT_EQ(x(a, t, s.loc(a, t)), 1);
    }
  }
}

TEST(DenseX, OutOfRangeLocationIsStructural) {
  Instance inst = well_formed();
  Schedule s(inst);
  s.loc(0, 1) = inst.num_locations();
  EXPECT_THROW(dense_x(s, inst), StructuralError);
}

Grid full_grid(int side, double cell = 1.0) {
  Grid g;
  g.cells_per_side = side;
  g.side_length = side * cell;
  for (int c = 0; c < side * side; ++c) {
    g.location_cells.push_back(c);
    g.incident_cells.push_back(c);
  }
  return g;
}

TEST(Adjacency, PlusShapeAroundCentre) {
  TravelConfig cfg;
  cfg.speed = 1.0;
  cfg.target_arrival = 1.0;
  const BinaryMatrix n = build_n_idle(full_grid(3), cfg);
  // Centre location is cell 4; the plus shape is 1, 3, 4, 5, 7.
  for (int i = 0; i < 9; ++i) {
    const bool plus = i == 1 || i == 3 || i == 4 || i == 5 || i == 7;
    EXPECT_EQ(n(i, 4), plus ? 1 : 0) << "cell " << i;
  }
  cfg.prep_delay = 0.5;
  const BinaryMatrix nb = build_n_break(full_grid(3), cfg);
  for (int i = 0; i < 9; ++i) EXPECT_EQ(nb(i, 4), i == 4 ? 1 : 0) << "cell " << i;
}

TEST(Adjacency, PrepDelayEdgeCases) {
  TravelConfig cfg;
  cfg.target_arrival = 1.5;
  const Grid g = full_grid(3);
  EXPECT_EQ(build_n_break(g, cfg), build_n_idle(g, cfg));
  cfg.prep_delay = 2.0;
  EXPECT_EQ(build_n_break(g, cfg), BinaryMatrix(9, 9, 0));
}

TEST(Adjacency, FarApartCellsUnreachable) {
  Grid g = full_grid(2, 10.0);
  TravelConfig cfg;
  cfg.speed = 5.0;
  cfg.target_arrival = 1.0;
  const BinaryMatrix n = build_n_idle(g, cfg);
  EXPECT_EQ(n(0, 1), 0);  // 10 apart at speed 5 takes 2 > 1
  EXPECT_EQ(n(0, 0), 1);
}

TEST(Adjacency, LineGridIsTridiagonal) {
  Grid g = full_grid(4);
  g.location_cells = {0, 1, 2, 3};
  TravelConfig cfg;
  const BinaryMatrix im = build_im(g, cfg);
  for (int j = 0; j < 4; ++j) {
    for (int k = 0; k < 4; ++k) EXPECT_EQ(im(j, k), std::abs(j - k) <= 1 ? 1 : 0);
  }
  cfg.period_length = 10.0;
  EXPECT_EQ(build_im(g, cfg), BinaryMatrix(4, 4, 1));
}

TEST(Adjacency, ManhattanMetric) {
  TravelConfig cfg;
  cfg.metric = Metric::kManhattan;
  cfg.target_arrival = 1.0;
  // Diagonal neighbours are 2 apart under Manhattan, sqrt(2) under Euclid.
  EXPECT_EQ(build_n_idle(full_grid(2), cfg)(3, 0), 0);
  cfg.target_arrival = 1.5;
  EXPECT_EQ(build_n_idle(full_grid(2), cfg)(3, 0), 0);
  cfg.metric = Metric::kEuclidean;
  EXPECT_EQ(build_n_idle(full_grid(2), cfg)(3, 0), 1);
}

// Property: for random configurations, N-bar <= N and IM has a unit diagonal.
TEST(Adjacency, SubsetAndDiagonalProperties) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.05, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    TravelConfig cfg;
    cfg.speed = u(rng);
    cfg.target_arrival = u(rng);
    cfg.prep_delay = u(rng) - 0.05;
    cfg.period_length = u(rng);
    cfg.metric = trial % 2 ? Metric::kManhattan : Metric::kEuclidean;
    const Grid g = full_grid(1 + trial % 4, u(rng));
    const AdjacencySet adj = build_adjacency(g, cfg);
    for (int i = 0; i < adj.n_idle.rows(); ++i) {
      for (int j = 0; j < adj.n_idle.cols(); ++j) EXPECT_LE(adj.n_break(i, j), adj.n_idle(i, j));
    }
    for (int j = 0; j < adj.im_move.rows(); ++j) EXPECT_EQ(adj.im_move(j, j), 1);
  }
}

TEST(Adjacency, RejectsBadTravelConfig) {
  TravelConfig cfg;
  cfg.speed = 0.0;
  EXPECT_THROW(build_adjacency(full_grid(2), cfg), InputError);
  cfg = {};
  cfg.prep_delay = -1.0;
  EXPECT_THROW(build_adjacency(full_grid(2), cfg), InputError);
}

}  // namespace
}  // namespace bapcac
