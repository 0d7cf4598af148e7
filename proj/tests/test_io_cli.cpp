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

#include <sstream>
#include <string>

#include "bapcac/cli.hpp"
#include "bapcac/generator.hpp"
#include "bapcac/io.hpp"
#include "support.hpp"

namespace bapcac {
namespace {

using testing::TempDir;

TEST(InstanceJson, RoundTripIsByteStable) {
  for (const auto& [name, inst] : bundled_suite()) {
    const std::string once = dump(instance_to_json(inst));
    const Instance back = instance_from_json(parse_json(once));
    EXPECT_EQ(dump(instance_to_json(back)), once) << name;
    EXPECT_EQ(instance_fingerprint(back), instance_fingerprint(inst)) << name;
    EXPECT_EQ(back.adjacency, inst.adjacency) << name;
    EXPECT_EQ(back.demand, inst.demand) << name;
  }
}

TEST(InstanceJson, ErrorsNameTheField) {
  Json j = instance_to_json(testing::mutation_fixture());
  j["agents"] = "two";
  try {
    instance_from_json(j);
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("agents"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_json("{\"schema_version\": 1,"), InputError);
}

TEST(SolutionJson, RoundTripPreservesEveryValue) {
  const Instance inst = testing::mutation_fixture();
  const Solution base = testing::mutation_base(inst);
  const Json j = solution_to_json(inst, base, SolverMetadata{.solver = "fixture", .status = "feasible"});
  const LoadedSolution back = solution_from_json(parse_json(dump(j)), inst);
  EXPECT_TRUE(check_loaded(inst, back).empty());
  EXPECT_EQ(back.recorded_objective, base.objective);
  for (int a = 0; a < inst.agents; ++a) {
    for (int t = 0; t < inst.horizon(); ++t) {
      EXPECT_EQ(back.schedule.loc(a, t), base.schedule.loc(a, t));
      EXPECT_EQ(back.schedule.brk(a, t), base.schedule.brk(a, t));
      for (int i = 0; i < inst.num_incident(); ++i) {
        EXPECT_EQ(back.coverage.idle(a, t, i), base.coverage.idle(a, t, i));
        EXPECT_EQ(back.coverage.on_break(a, t, i), base.coverage.on_break(a, t, i));
      }
    }
  }
}

TEST(SolutionJson, ForeignInstanceIsStructural) {
  const Instance inst = testing::mutation_fixture();
  const Solution base = testing::mutation_base(inst);
  const Json j = solution_to_json(inst, base, SolverMetadata{});
  Instance other = inst;
  other.demand.at(0, 0) = Decimal::parse("1.4");
  EXPECT_THROW(solution_from_json(j, other), StructuralError);
  other = inst;
  other.agents = 3;
  EXPECT_THROW(solution_from_json(j, other), StructuralError);
}

TEST(ExportLp, DeterministicAndMatchesCensus) {
  for (const auto& [name, inst] : bundled_suite()) {
    CheckStats rows;
    const std::string a = export_lp(inst, &rows);
    EXPECT_EQ(export_lp(inst), a) << name;
    EXPECT_EQ(rows, constraint_census(inst)) << name;
    EXPECT_EQ(a.rfind("\\", 0), 0u) << "starts with a comment line";
    EXPECT_NE(a.find("Minimize"), std::string::npos) << name;
    EXPECT_NE(a.find("Binar"), std::string::npos) << name;
    EXPECT_NE(a.find("End"), std::string::npos) << name;
  }
}

TEST(ExportLp, RowLabelsCarryFamilies) {
  const std::string lp = export_lp(testing::mutation_fixture());
  for (const char* label : {"eq2_", "eq3_", "eq4_", "eq5_", "eq6_", "eq7_", "eq8_", "eq9_",
                            "eq10_", "eq11_", "eq12_", "eq13_", "eq14_"}) {
    EXPECT_NE(lp.find(label), std::string::npos) << label;
  }
}

TEST(Generator, PureFunctionOfSpec) {
  for (const auto& [name, spec] : suite_specs()) {
    EXPECT_EQ(dump(instance_to_json(generate(spec))), dump(instance_to_json(generate(spec)))) << name;
    EXPECT_EQ(spec_from_json(spec_to_json(spec)), spec) << name;
  }
  const GeneratorSpec probe = scale_probe_spec(3);
  EXPECT_EQ(instance_fingerprint(generate(probe)), instance_fingerprint(generate(probe)));
  EXPECT_NE(instance_fingerprint(generate(probe)), instance_fingerprint(generate(scale_probe_spec(4))));
}

TEST(Generator, SuiteStaysInsideTheOracleLimit) {
  const auto suite = bundled_suite();
  EXPECT_GE(suite.size(), 3u);
  for (const auto& [name, inst] : suite) {
    EXPECT_LE(inst.agents * inst.horizon(), 8) << name;
    EXPECT_TRUE(validate_instance(inst).empty()) << name;
  }
}

TEST(Generator, ZeroDemandIsRefused) {
  GeneratorSpec s = suite_specs().front().second;
  for (auto& h : s.hotspots) h.peak = Decimal{};
  EXPECT_THROW(generate(s), RefusedError);
}

TEST(Generator, ScaleProbeShape) {
  const Instance inst = generate(scale_probe_spec());
  EXPECT_EQ(inst.agents, 10);
  EXPECT_EQ(inst.horizon(), 24);
  EXPECT_EQ(inst.grid.num_cells(), 64);
  EXPECT_EQ(inst.num_locations(), 64);
}

TEST(Generator, ActiveCellsRestrictLocations) {
  GeneratorSpec s;
  s.grid_side_cells = 3;
  s.horizon = 2;
  s.hotspots = {{{1.5, 1.5}, Decimal::from_int(1), 1.0, 1.0, 1.0}};
  s.active_cells = std::vector<int>{4, 0, 4};
  const Instance inst = generate(s);
  EXPECT_EQ(inst.grid.location_cells, (std::vector<int>{0, 4}));
  for (const int c : inst.grid.incident_cells) EXPECT_TRUE(c == 0 || c == 4);
}

// ------------------------------------------------------------ exit codes

struct Cli {
  std::ostringstream out;
  std::ostringstream err;
};

TEST(CmdGenerate, ExitCodes) {
  TempDir dir;
  Cli c;
  write_file(dir.file("bad.json"), "{\"grid_side_cells\": 2,");
  EXPECT_EQ(cmd_generate(dir.file("bad.json"), dir.file("o.json"), c.out, c.err), kExitInputError);

  GeneratorSpec s = suite_specs().front().second;
  s.hotspots[0].peak = Decimal::parse("-1");
  write_file(dir.file("neg.json"), dump(spec_to_json(s)));
  Cli n;
  EXPECT_EQ(cmd_generate(dir.file("neg.json"), dir.file("o.json"), n.out, n.err), kExitInputError);
  EXPECT_NE(n.err.str().find("hotspots[0].peak"), std::string::npos) << n.err.str();

  for (auto& h : s.hotspots) h.peak = Decimal{};
  write_file(dir.file("zero.json"), dump(spec_to_json(s)));
  Cli z;
  EXPECT_EQ(cmd_generate(dir.file("zero.json"), dir.file("o.json"), z.out, z.err), kExitRefused);

  write_file(dir.file("ok.json"), dump(spec_to_json(suite_specs().front().second)));
  Cli ok;
  EXPECT_EQ(cmd_generate(dir.file("ok.json"), dir.file("o.json"), ok.out, ok.err), kExitOk);
  EXPECT_NO_THROW(load_instance(dir.file("o.json")));
}

TEST(CmdSolve, OutputAlwaysVerifies) {
  TempDir dir;
  for (const auto& [name, inst] : bundled_suite()) {
    write_file(dir.file(name + ".json"), dump(instance_to_json(inst)));
    for (const char* solver : {"exact", "heuristic", "bruteforce"}) {
      SolveArgs args;
      args.instance_path = dir.file(name + ".json");
      args.out_path = dir.file(name + "." + solver + ".sol.json");
      args.solver = solver;
      args.single_thread = true;
      Cli c;
      ASSERT_EQ(cmd_solve(args, c.out, c.err), kExitOk) << name << " " << solver << c.err.str();
      Cli v;
      EXPECT_EQ(cmd_verify(args.instance_path, args.out_path, v.out, v.err), kExitOk)
          << name << " " << solver << v.out.str();
      EXPECT_EQ(v.out.str().rfind("FEASIBLE, objective=", 0), 0u) << v.out.str();
    }
  }
}

TEST(CmdSolve, InfeasibleWindowsExitFour) {
  TempDir dir;
  const Instance inst = testing::square_instance(1, 10, 1, Decimal::from_int(1), {{"short", 3, 3, 1}});
  write_file(dir.file("inf.json"), dump(instance_to_json(inst)));
  for (const char* solver : {"exact", "heuristic"}) {
    SolveArgs args;
    args.instance_path = dir.file("inf.json");
    args.solver = solver;
    args.single_thread = true;
    Cli c;
    EXPECT_EQ(cmd_solve(args, c.out, c.err), kExitInfeasible) << solver << c.err.str();
  }
}

TEST(CmdSolve, InputErrors) {
  TempDir dir;
  const Instance inst = bundled_suite().front().second;
  write_file(dir.file("i.json"), dump(instance_to_json(inst)));
  SolveArgs args;
  args.instance_path = dir.file("i.json");
  args.weight = "1.5";
  Cli c;
  EXPECT_EQ(cmd_solve(args, c.out, c.err), kExitInputError);
  args.instance_path = dir.file("missing.json");
  args.weight.clear();
  Cli m;
  EXPECT_EQ(cmd_solve(args, m.out, m.err), kExitInputError);

  // Brute force refuses anything past its cap.
  write_file(dir.file("probe.json"), dump(instance_to_json(generate(scale_probe_spec()))));
  args.instance_path = dir.file("probe.json");
  args.solver = "bruteforce";
  Cli r;
  EXPECT_EQ(cmd_solve(args, r.out, r.err), kExitInputError);
  EXPECT_NE(r.err.str().find("refused"), std::string::npos);
}

TEST(CmdSolve, WeightEndpoints) {
  TempDir dir;
  const Instance inst = bundled_suite().front().second;
  write_file(dir.file("i.json"), dump(instance_to_json(inst)));
  SolveArgs args;
  args.instance_path = dir.file("i.json");
  args.solver = "exact";
  args.out_path = dir.file("w0.json");
  args.weight = "0";
  Cli c0;
  ASSERT_EQ(cmd_solve(args, c0.out, c0.err), kExitOk);
  // w = 0 only counts working periods, and tiny-1 allows a break in both of
  // them. The file still verifies against the original instance.
  Cli v0;
  ASSERT_EQ(cmd_verify(args.instance_path, args.out_path, v0.out, v0.err), kExitOk) << v0.out.str();
  EXPECT_NE(v0.out.str().find("objective=0.000000 "), std::string::npos) << v0.out.str();

  args.weight = "1";
  args.out_path = dir.file("w1.json");
  Cli c1;
  ASSERT_EQ(cmd_solve(args, c1.out, c1.err), kExitOk);
  EXPECT_NE(c1.out.str().find("proven_optimal=true"), std::string::npos) << c1.out.str();
}

TEST(CmdVerify, ForeignSolutionExitTwo) {
  TempDir dir;
  const auto suite = bundled_suite();
  write_file(dir.file("a.json"), dump(instance_to_json(suite[0].second)));
  write_file(dir.file("b.json"), dump(instance_to_json(suite[1].second)));
  SolveArgs args;
  args.instance_path = dir.file("a.json");
  args.out_path = dir.file("a.sol.json");
  args.solver = "exact";
  Cli c;
  ASSERT_EQ(cmd_solve(args, c.out, c.err), kExitOk);
  Cli v;
  EXPECT_EQ(cmd_verify(dir.file("b.json"), dir.file("a.sol.json"), v.out, v.err), kExitInputError);
  Cli g;
  write_file(dir.file("garbage.json"), "[]");
  EXPECT_EQ(cmd_verify(dir.file("a.json"), dir.file("garbage.json"), g.out, g.err), kExitInputError);
}

TEST(CmdVerify, FlippedBreakFlagIsReported) {
  TempDir dir;
  const Instance inst = testing::mutation_fixture();
  const Solution base = testing::mutation_base(inst);
  Json j = solution_to_json(inst, base, SolverMetadata{});
  // Agent 0 is idle and covering in period 1; flag it as on break.
  j["schedule"]["on_break"].push_back(Json::array({0, 1}));
  write_file(dir.file("i.json"), dump(instance_to_json(inst)));
  write_file(dir.file("s.json"), dump(j));
  Cli v;
  EXPECT_EQ(cmd_verify(dir.file("i.json"), dir.file("s.json"), v.out, v.err), kExitVerifyFailed);
  const std::string report = v.out.str();
  EXPECT_TRUE(report.find("idle_gate") != std::string::npos ||
              report.find("window_start") != std::string::npos)
      << report;
}

TEST(CmdSweep, CsvAndRangeCheck) {
  TempDir dir;
  const Instance inst = bundled_suite().front().second;
  write_file(dir.file("i.json"), dump(instance_to_json(inst)));
  SweepArgs args;
  args.instance_path = dir.file("i.json");
  args.solve.solver = "exact";
  Cli c;
  ASSERT_EQ(cmd_sweep(args, c.out, c.err), kExitOk);
  const std::string csv = c.out.str();
  EXPECT_EQ(csv.rfind("w,objective,total_uncovered,total_nonbreak_periods,proven_optimal\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6);

  args.w_values = {"0", "1.5"};
  Cli r;
  EXPECT_EQ(cmd_sweep(args, r.out, r.err), kExitInputError);
}

TEST(CmdSweep, FailedPointsAreMarked) {
  TempDir dir;
  const Instance inst = testing::square_instance(1, 10, 1, Decimal::from_int(1), {{"short", 3, 3, 1}});
  write_file(dir.file("inf.json"), dump(instance_to_json(inst)));
  SweepArgs args;
  args.instance_path = dir.file("inf.json");
  args.w_values = {"0.5"};
  args.solve.solver = "exact";
  Cli c;
  EXPECT_EQ(cmd_sweep(args, c.out, c.err), kExitInfeasible);
  EXPECT_NE(c.out.str().find("FAILED(infeasible)"), std::string::npos) << c.out.str();
}

TEST(CmdExportLp, WritesFileAndCensus) {
  TempDir dir;
  write_file(dir.file("i.json"), dump(instance_to_json(testing::mutation_fixture())));
  Cli c;
  ASSERT_EQ(cmd_export_lp(dir.file("i.json"), dir.file("m.lp"), c.out, c.err), kExitOk);
  EXPECT_EQ(read_file(dir.file("m.lp")), export_lp(testing::mutation_fixture()));
  EXPECT_NE(c.out.str().find("total"), std::string::npos);
}

TEST(CmdSuite, WritesLoadableInstances) {
  TempDir dir;
  Cli c;
  ASSERT_EQ(cmd_suite(dir.file("suite"), c.out, c.err), kExitOk);
  for (const auto& [name, inst] : bundled_suite()) {
    const Instance back = load_instance(dir.file("suite/" + name + ".json"));
    EXPECT_EQ(instance_fingerprint(back), instance_fingerprint(inst)) << name;
    const GeneratorSpec spec = spec_from_json(parse_json(read_file(dir.file("suite/" + name + ".spec.json"))));
    EXPECT_EQ(instance_fingerprint(generate(spec)), instance_fingerprint(inst)) << name;
  }
}

}  // namespace
}  // namespace bapcac
