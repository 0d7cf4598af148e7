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

#include <random>

#include "bapcac/coverage_flow.hpp"
#include "bapcac/evaluator.hpp"
#include "bapcac/exact_solver.hpp"
#include "bapcac/generator.hpp"
#include "bapcac/heuristic.hpp"
#include "oracles/lp_vertex_oracle.hpp"
#include "support.hpp"

namespace bapcac {
namespace {

using testing::square_instance;

// Oracle values of the bundled suite, frozen from solve_bruteforce (and
// matched by an external MILP solve of the exported LP files).
const std::vector<std::pair<std::string, std::string>> kSuiteOptima = {
    {"tiny-1", "1.939500"}, {"tiny-2", "1.794000"}, {"band", "3.378000"}, {"tiny-np", "3.388000"}};

Instance one_cell(const char* demand) {
  Instance inst = square_instance(1, 1, 1, Decimal::parse(demand), {});
  inst.weight = Decimal::from_int(1);
  return inst;
}

TEST(PeriodNet, ArcsFollowReachAndState) {
  Instance inst = one_cell("0.4");
  Schedule s(inst);
  PeriodFlowNet net = build_period_net(inst, s, 0);
  ASSERT_EQ(net.arcs.size(), 1u);
  EXPECT_EQ(net.arcs[0], (FlowArc{0, 0, 400, false}));
  EXPECT_EQ(net.sink_caps, std::vector<std::int64_t>{400});

  s.brk(0, 0) = 1;
  inst.adjacency.n_break(0, 0) = 0;
  EXPECT_TRUE(build_period_net(inst, s, 0).arcs.empty());

  inst.adjacency.n_break(0, 0) = 1;
  inst.options.preemptive = false;
  EXPECT_TRUE(build_period_net(inst, s, 0).arcs.empty());
}

TEST(PeriodNet, ArcCapacityClampsAtOne) {
  Instance inst = one_cell("1.5");
  inst.agents = 2;
  Schedule s(inst);
  const PeriodFlowNet net = build_period_net(inst, s, 0);
  ASSERT_EQ(net.arcs.size(), 2u);
  EXPECT_EQ(net.arcs[0].capacity, 1000);
  EXPECT_EQ(net.arcs[1].capacity, 1000);
  EXPECT_EQ(net.sink_caps[0], 1500);
  EXPECT_EQ(max_coverage(net).flow_value, 1500);
}

TEST(MaxCoverage, CrossedAvailability) {
  Instance inst = square_instance(2, 1, 2, Decimal::from_int(1), {});
  inst.grid.location_cells = {0, 1};
  inst.grid.incident_cells = {0, 1};
  inst.demand.values = {Decimal::from_int(1), Decimal::from_int(1)};
  inst.adjacency.n_idle = BinaryMatrix(2, 2, 0);
  inst.adjacency.n_break = BinaryMatrix(2, 2, 0);
  inst.adjacency.im_move = BinaryMatrix(2, 2, 1);
  inst.adjacency.n_idle(0, 0) = 1;                                  // location 0 reaches cell 0
  inst.adjacency.n_idle(0, 1) = inst.adjacency.n_idle(1, 1) = 1;  // location 1 reaches both
  require_valid(inst);
  Schedule s(inst);
  s.loc(1, 0) = 1;
  EXPECT_EQ(max_coverage(build_period_net(inst, s, 0)).flow_value, 2000);
  EXPECT_EQ(objective(inst, s, assemble_coverage(inst, s)).total_uncovered, Decimal{});
}

TEST(AssembleCoverage, NonPreemptiveAllOnBreakLeavesDemand) {
  Instance inst = square_instance(2, 2, 2, Decimal::parse("0.6"), {});
  inst.options.preemptive = false;
  Schedule s(inst);
  std::fill(s.on_break.begin(), s.on_break.end(), 1);
  const CoveragePlan c = assemble_coverage(inst, s);
  EXPECT_EQ(c.uncovered, inst.demand.values);
}

// Property: arc flows respect every capacity, agent rows stay within one,
// and the assembled plan passes check_all's continuous families.
TEST(AssembleCoverage, RandomPlansAreConsistent) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    Instance inst = testing::random_instance(rng, 2 + trial % 2, 3, 1 + trial % 4, {});
    inst.options.preemptive = trial % 3 != 0;
    Schedule s(inst);
    for (auto& l : s.location) l = static_cast<int>(rng() % static_cast<std::uint64_t>(inst.num_locations()));
    for (auto& y : s.on_break) y = static_cast<std::uint8_t>(rng() % 2);
    const CoveragePlan c = assemble_coverage(inst, s);
    for (const Violation& v : check_all(inst, s, c)) {
      EXPECT_GE(equation_number(v.constraint), 10) << family_name(v.constraint);
    }
    for (int t = 0; t < inst.horizon(); ++t) {
      const PeriodFlowNet net = build_period_net(inst, s, t);
      const FlowResult r = max_coverage(net);
      for (std::size_t k = 0; k < net.arcs.size(); ++k) {
        EXPECT_GE(r.arc_flows[k], 0);
        EXPECT_LE(r.arc_flows[k], net.arcs[k].capacity);
      }
    }
  }
}

// Property: bringing an agent into reach never lowers the flow.
TEST(MaxCoverage, AddingAnArcNeverHurts) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    Instance inst = testing::random_instance(rng, 2, 1, 1 + trial % 3, {});
    Schedule s(inst);
    for (auto& l : s.location) l = static_cast<int>(rng() % 4);
    const std::int64_t before = max_coverage(build_period_net(inst, s, 0)).flow_value;
    const int i = static_cast<int>(rng() % 4);
    inst.adjacency.n_idle(i, s.loc(0, 0)) = 1;
    EXPECT_GE(max_coverage(build_period_net(inst, s, 0)).flow_value, before);
  }
}

TEST(MaxCoverage, MatchesVertexOracle) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    const auto [inst, s] = testing::random_period_case(rng);
    std::vector<int> loc;
    std::vector<int> brk;
    for (int a = 0; a < inst.agents; ++a) {
      loc.push_back(s.loc(a, 0));
      brk.push_back(s.brk(a, 0));
    }
    const auto best = oracle::maximise(oracle::period_lp(inst, 0, loc, brk));
    const std::int64_t flow = max_coverage(build_period_net(inst, s, 0)).flow_value;
    EXPECT_EQ(best.optimum, oracle::Rational::of(flow)) << "trial " << trial;
  }
}

TEST(Exact, SingleCellExamples) {
  Instance inst = one_cell("0.5");
  SolverReport r = solve_exact(inst);
  ASSERT_TRUE(r.best);
  EXPECT_TRUE(r.proven_optimal);
  EXPECT_EQ(r.best->objective, ObjectiveValue{});

  inst.adjacency.n_idle(0, 0) = 0;
  inst.adjacency.n_break(0, 0) = 0;
  r = solve_exact(inst);
  ASSERT_TRUE(r.best);
  EXPECT_EQ(r.best->objective, ObjectiveValue::parse("0.5"));
}

TEST(Exact, MatchesFrozenSuiteOptima) {
  const auto suite = bundled_suite();
  ASSERT_EQ(suite.size(), kSuiteOptima.size());
  for (std::size_t k = 0; k < suite.size(); ++k) {
    const auto& [name, inst] = suite[k];
    EXPECT_EQ(name, kSuiteOptima[k].first);
    const SolverReport ex = solve_exact(inst);
    ASSERT_TRUE(ex.best) << name;
    EXPECT_TRUE(ex.proven_optimal) << name;
    EXPECT_EQ(ex.status, SolveStatus::kOptimal);
    EXPECT_EQ(ex.best->objective.to_string(), kSuiteOptima[k].second) << name;
    EXPECT_TRUE(check_all(inst, ex.best->schedule, ex.best->coverage).empty()) << name;

    SolveLimits plain;
    plain.heuristic_incumbent = false;
    EXPECT_EQ(solve_exact(inst, plain).best->objective, ex.best->objective) << name;
  }
}

// Property: on random tiny instances the branch and bound equals exhaustive
// enumeration, and the root bound never exceeds the optimum.
TEST(Exact, EqualsBruteForceOnRandomTinyInstances) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 16; ++trial) {
    const int T = 2 + trial % 3;
    const int A = T == 4 ? 1 : 1 + trial % 2;
    std::vector<BreakTypeSpec> types;
    if (trial % 2 == 0) types.push_back({"short", 1, 1 + trial % 2, 2});
    Instance inst = testing::random_instance(rng, 2, T, A, types);
    inst.weight = Decimal::from_raw(static_cast<std::int64_t>(rng() % 1001));
    inst.options.preemptive = trial % 3 != 1;
    inst.options.strict_window_equality = trial % 4 != 3;
    const SolverReport bf = solve_bruteforce(inst);
    const SolverReport ex = solve_exact(inst);
    ASSERT_EQ(bf.status, ex.status) << "trial " << trial;
    if (!bf.best) continue;
    ASSERT_TRUE(ex.best);
    EXPECT_EQ(ex.best->objective, bf.best->objective) << "trial " << trial;
    EXPECT_LE(lower_bound(inst, SearchNode{}), bf.best->objective) << "trial " << trial;
  }
}

TEST(Exact, FullyFixedNodeBoundIsTheObjective) {
  const Instance inst = bundled_suite()[1].second;  // tiny-2
  const SolverReport ex = solve_exact(inst);
  ASSERT_TRUE(ex.best);
  SearchNode node;
  for (int t = 0; t < inst.horizon(); ++t) {  // period-major
    for (int a = 0; a < inst.agents; ++a) {
      node.fixed_prefix.push_back({ex.best->schedule.loc(a, t), ex.best->schedule.brk(a, t) != 0});
    }
  }
  node.depth = static_cast<int>(node.fixed_prefix.size());
  EXPECT_EQ(lower_bound(inst, node), ex.best->objective);
}

TEST(Exact, ProvesInfeasibility) {
  Instance inst = square_instance(1, 10, 1, Decimal::from_int(1), {{"short", 3, 3, 1}});
  const SolverReport ex = solve_exact(inst);
  EXPECT_EQ(ex.status, SolveStatus::kInfeasible);
  EXPECT_FALSE(ex.best);
  EXPECT_THROW(greedy_construct(inst, 1), InfeasibleError);
  EXPECT_EQ(solve_heuristic(inst).status, SolveStatus::kInfeasible);
}

TEST(Exact, NodeLimitReportsGap) {
  const Instance inst = bundled_suite()[2].second;  // band
  SolveLimits limits;
  limits.max_nodes = 3;
  limits.heuristic_incumbent = false;
  const SolverReport r = solve_exact(inst, limits);
  EXPECT_FALSE(r.proven_optimal);
  EXPECT_NE(r.status, SolveStatus::kOptimal);
  if (r.best) {
    ASSERT_TRUE(r.bound);
    EXPECT_LE(*r.bound, r.best->objective);
    EXPECT_TRUE(r.gap.has_value());
  } else {
    EXPECT_EQ(r.status, SolveStatus::kNoIncumbent);
  }
}

TEST(BruteForce, RefusesLargeInstances) {
  const Instance inst = generate(scale_probe_spec());
  EXPECT_THROW(solve_bruteforce(inst), RefusedError);
}

TEST(BruteForce, ZeroWeightOnCoverageOnlyCountsBreaks) {
  Instance inst = bundled_suite()[0].second;  // tiny-1, one short break type
  inst.weight = Decimal{};
  const SolverReport bf = solve_bruteforce(inst);
  ASSERT_TRUE(bf.best);
  EXPECT_EQ(bf.best->objective, widen(Decimal::from_int(bf.best->total_nonbreak_periods)));
}

TEST(BruteForce, MovementRestrictionPrunesSchedules) {
  // 1 agent, 2 periods, 2 locations that cannot swap: 2 of the 4 location
  // paths are excluded, so only the two stay-put paths are counted.
  Instance inst = square_instance(1, 2, 1, Decimal::from_int(1), {});
  inst.grid.cells_per_side = 2;
  inst.grid.location_cells = {0, 1};
  inst.adjacency.n_idle = BinaryMatrix(1, 2, 1);
  inst.adjacency.n_break = BinaryMatrix(1, 2, 0);
  inst.adjacency.im_move = BinaryMatrix(2, 2, 0);
  inst.adjacency.im_move(0, 0) = inst.adjacency.im_move(1, 1) = 1;
  require_valid(inst);
  const SolverReport bf = solve_bruteforce(inst);
  // 2 paths x 4 on-break rows.
  EXPECT_EQ(bf.nodes_explored, 8);
}

TEST(Heuristic, FeasibleAndDeterministic) {
  for (const auto& [name, inst] : bundled_suite()) {
    HeuristicOptions opt;
    opt.seed = 9;
    opt.restarts = 3;
    opt.audit = true;
    const SolverReport a = solve_heuristic(inst, opt);
    opt.threads = 3;
    const SolverReport b = solve_heuristic(inst, opt);
    ASSERT_TRUE(a.best && b.best) << name;
    EXPECT_TRUE(check_all(inst, a.best->schedule, a.best->coverage).empty()) << name;
    EXPECT_EQ(a.best->schedule, b.best->schedule) << name;
    EXPECT_EQ(a.best->objective, b.best->objective) << name;
  }
}

TEST(Heuristic, LocalSearchNeverWorsensAndZeroBudgetIsIdentity) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 8; ++trial) {
    Instance inst = testing::random_instance(rng, 3, 6, 2, {{"short", 1, 2, 3}});
    const Solution start = greedy_construct(inst, static_cast<std::uint64_t>(trial));
    EXPECT_TRUE(check_all(inst, start.schedule, start.coverage).empty());
    const Solution same = local_search(inst, start, {0, 10.0}, 1);
    EXPECT_EQ(same.schedule, start.schedule);
    const Solution better = local_search(inst, start, {}, static_cast<std::uint64_t>(trial), true);
    EXPECT_LE(better.objective, start.objective);
    EXPECT_TRUE(check_all(inst, better.schedule, better.coverage).empty());
  }
}

TEST(Heuristic, OptimalStartIsKept) {
  const Instance inst = bundled_suite()[1].second;
  const SolverReport ex = solve_exact(inst);
  ASSERT_TRUE(ex.best);
  const Solution kept = local_search(inst, *ex.best, {}, 3);
  EXPECT_EQ(kept.objective, ex.best->objective);
}

TEST(Heuristic, RelocateFixesAMisplacedAgent) {
  // Demand only at cell 3; the start parks the agent one cell away.
  Instance inst = square_instance(2, 1, 1, Decimal{}, {});
  inst.weight = Decimal::from_int(1);
  inst.demand.at(3, 0) = Decimal::parse("0.9");
  inst.grid.incident_cells = {3};
  inst.demand.values = {Decimal::parse("0.9")};
  inst.adjacency.n_idle = BinaryMatrix(1, 4, 0);
  inst.adjacency.n_break = BinaryMatrix(1, 4, 0);
  inst.adjacency.n_idle(0, 3) = 1;
  require_valid(inst);
  Schedule s(inst);
  s.loc(0, 0) = 2;
  CoveragePlan c = assemble_coverage(inst, s);
  const Solution start = make_solution(inst, s, c);
  EXPECT_EQ(start.objective, ObjectiveValue::parse("0.9"));
  const Solution fixed = local_search(inst, start, {100, 10.0}, 0);
  EXPECT_EQ(fixed.objective, ObjectiveValue{});
  EXPECT_EQ(fixed.schedule.loc(0, 0), 3);
}

TEST(Heuristic, ZeroWeightTakesEveryAllowedBreak) {
  Instance inst = square_instance(2, 4, 1, Decimal::parse("0.5"), {});
  inst.weight = Decimal{};
  const SolverReport r = solve_heuristic(inst);
  ASSERT_TRUE(r.best);
  EXPECT_EQ(r.best->total_nonbreak_periods, 0);
}

TEST(Heuristic, WithinTwentyPercentOnTheSuite) {
  for (std::size_t k = 0; k < kSuiteOptima.size(); ++k) {
    const auto suite = bundled_suite();
    const Instance& inst = suite[k].second;
    HeuristicOptions opt;
    opt.restarts = 4;
    const SolverReport r = solve_heuristic(inst, opt);
    ASSERT_TRUE(r.best);
    const double opt_value = ObjectiveValue::parse(kSuiteOptima[k].second).to_double();
    EXPECT_LE(r.best->objective.to_double(), opt_value * 1.2) << suite[k].first;
    EXPECT_GE(r.best->objective.to_double(), opt_value) << suite[k].first;
  }
}

}  // namespace
}  // namespace bapcac
