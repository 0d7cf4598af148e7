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

// Command implementations behind the bapcac executable. Each command takes
// plain arguments plus output streams and returns the process exit code, so
// tests drive them in-process.

#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "bapcac/evaluator.hpp"
#include "bapcac/exact_solver.hpp"
#include "bapcac/generator.hpp"
#include "bapcac/heuristic.hpp"
#include "bapcac/io.hpp"

namespace bapcac {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerifyFailed = 1,
  kExitInputError = 2,
  kExitRefused = 3,
  kExitInfeasible = 4,
  kExitNoIncumbent = 5,
};

/// Default worker count: $BAPCAC_THREADS if set to a positive integer,
/// otherwise the hardware concurrency.
inline int default_threads() {
  if (const char* env = std::getenv("BAPCAC_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(std::min(v, 256L));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

struct SolveArgs {
  std::string instance_path;
  std::string out_path;            // empty: no file written
  std::string solver = "auto";     // exact | heuristic | auto | bruteforce
  std::string weight;              // empty: keep the instance weight
  double time_limit = 600.0;
  std::int64_t node_limit = 20'000'000;
  std::uint64_t seed = 1;
  bool single_thread = false;
  int restarts = 4;
  std::int64_t iterations = 200000;
};

namespace detail {

/// Instances up to this many agent-periods are solved exactly under "auto".
inline constexpr int kAutoExactAgentPeriods = 16;

inline Decimal parse_weight(const std::string& text) {
  Decimal w;
  try {
    w = Decimal::parse(text);
  } catch (const InputError&) {
    throw InputError("w must be a decimal in [0, 1] with at most 3 fractional digits, got '" + text + "'");
  }
  if (w < Decimal{} || w > Decimal::from_int(1)) {
    throw InputError("w must be in [0, 1], got " + text);
  }
  return w;
}

inline SolverReport run_solver(const Instance& inst, const SolveArgs& args) {
  const bool exact = args.solver == "exact" ||
                     (args.solver == "auto" && inst.agents * inst.horizon() <= kAutoExactAgentPeriods);
  if (args.solver == "bruteforce") return solve_bruteforce(inst);
  if (exact) {
    SolveLimits limits;
    limits.max_seconds = args.time_limit;
    limits.max_nodes = args.node_limit;
    return solve_exact(inst, limits);
  }
  if (args.solver != "heuristic" && args.solver != "auto") {
    throw InputError("unknown solver '" + args.solver + "' (exact, heuristic, auto, bruteforce)");
  }
  HeuristicOptions h;
  h.seed = args.seed;
  h.restarts = args.restarts;
  h.threads = args.single_thread ? 1 : default_threads();
  h.budget.iterations = args.iterations;
  h.budget.seconds = args.time_limit;
  return solve_heuristic(inst, h);
}

inline void print_summary(std::ostream& out, const SolverReport& r) {
  out << "solver=" << r.solver << " status=" << to_string(r.status);
  if (r.best) {
    out << " objective=" << r.best->objective.to_string()
        << " total_uncovered=" << r.best->total_uncovered.to_string()
        << " total_nonbreak_periods=" << r.best->total_nonbreak_periods;
  }
  out << " proven_optimal=" << (r.proven_optimal ? "true" : "false")
      << " nodes=" << r.nodes_explored;
  if (r.gap) out << " gap=" << *r.gap;
  out << "\n";
}

}  // namespace detail

inline int cmd_generate(const std::string& spec_path, const std::string& out_path,
                        std::ostream& out, std::ostream& err) {
  try {
    const GeneratorSpec spec = spec_from_json(parse_json(read_file(spec_path), spec_path));
    const Instance inst = generate(spec);
    write_file(out_path, dump(instance_to_json(inst)));
    out << "wrote " << out_path << ": " << inst.agents << " agents, " << inst.horizon()
        << " periods, " << inst.num_incident() << " incident cells, " << inst.num_locations()
        << " locations\n";
    return kExitOk;
  } catch (const RefusedError& e) {
    err << "refused: " << e.what() << "\n";
    return kExitRefused;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

inline int cmd_solve(const SolveArgs& args, std::ostream& out, std::ostream& err) {
  Instance inst;
  try {
    inst = load_instance(args.instance_path);
    if (!args.weight.empty()) inst.weight = detail::parse_weight(args.weight);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  SolverReport report;
  try {
    report = detail::run_solver(inst, args);
  } catch (const RefusedError& e) {
    err << "refused: " << e.what() << "\n";
    return kExitInputError;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  detail::print_summary(out, report);
  if (report.status == SolveStatus::kInfeasible) {
    err << "instance is infeasible: the break rules admit no schedule\n";
    return kExitInfeasible;
  }
  if (!report.best) {
    err << "limits reached before any feasible schedule was found\n";
    return kExitNoIncumbent;
  }
  const auto violations = check_all(inst, report.best->schedule, report.best->coverage);
  if (!violations.empty()) {
    throw std::logic_error("solver returned a schedule that fails check_all");
  }
  if (!args.out_path.empty()) {
    const SolverMetadata meta =
        metadata_from(report, args.seed, args.time_limit, args.node_limit);
    write_file(args.out_path, dump(solution_to_json(inst, *report.best, meta)));
  }
  return kExitOk;
}

/// Renders violations as an aligned table: constraint, equation, indices, slack.
inline void print_violations(std::ostream& out, const std::vector<Violation>& vs) {
  out << std::left << std::setw(18) << "constraint" << std::setw(5) << "eq" << std::setw(34)
      << "indices" << "slack\n";
  for (const Violation& v : vs) {
    out << std::left << std::setw(18) << family_name(v.constraint) << std::setw(5)
        << ("(" + std::to_string(equation_number(v.constraint)) + ")") << std::setw(34)
        << to_string(v.indices) << v.slack.to_trimmed_string() << "\n";
  }
}

inline int cmd_verify(const std::string& instance_path, const std::string& solution_path,
                      std::ostream& out, std::ostream& err) {
  Instance inst;
  LoadedSolution sol;
  try {
    inst = load_instance(instance_path);
    sol = solution_from_json(parse_json(read_file(solution_path), solution_path), inst);
    if (sol.recorded_weight) inst.weight = *sol.recorded_weight;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  const auto violations = check_loaded(inst, sol);
  if (!violations.empty()) {
    out << "INFEASIBLE, " << violations.size() << " violation(s)\n";
    print_violations(out, violations);
    return kExitVerifyFailed;
  }
  const ObjectiveBreakdown ob = objective(inst, sol.schedule, sol.coverage);
  out << "FEASIBLE, objective=" << ob.objective.to_string()
      << " total_uncovered=" << ob.total_uncovered.to_string()
      << " total_nonbreak_periods=" << ob.total_nonbreak_periods << "\n";
  if (sol.recorded_objective && *sol.recorded_objective != ob.objective) {
    out << "note: file records objective " << sol.recorded_objective->to_string()
        << ", recomputed " << ob.objective.to_string() << "\n";
  }
  return kExitOk;
}

struct SweepArgs {
  std::string instance_path;
  std::vector<std::string> w_values{"0", "0.25", "0.5", "0.75", "1"};
  std::string out_path;  // empty: CSV to `out`
  SolveArgs solve;       // solver settings shared by every point
};

/// Independent solves for each w. Rows keep the order of `w_values`.
inline std::vector<SweepRow> run_sweep(const Instance& base, const std::vector<Decimal>& ws,
                                       const SolveArgs& solve) {
  std::vector<SweepRow> rows(ws.size());
  auto work = [&](std::size_t k) {
    Instance inst = base;
    inst.weight = ws[k];
    rows[k].w = ws[k];
    try {
      SolveArgs a = solve;
      a.single_thread = true;
      SolverReport r = detail::run_solver(inst, a);
      rows[k].status = to_string(r.status);
      rows[k].proven_optimal = r.proven_optimal;
      rows[k].solution = std::move(r.best);
    } catch (const Error& e) {
      rows[k].status = "error";
    }
  };
  const int threads = solve.single_thread ? 1 : std::min<int>(default_threads(), static_cast<int>(ws.size()));
  if (threads <= 1) {
    for (std::size_t k = 0; k < ws.size(); ++k) work(k);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t k = static_cast<std::size_t>(t); k < ws.size(); k += static_cast<std::size_t>(threads)) {
          work(k);
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  return rows;
}

inline int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err) {
  Instance inst;
  std::vector<Decimal> ws;
  try {
    inst = load_instance(args.instance_path);
    if (args.w_values.empty()) throw InputError("no w values given");
    for (const auto& w : args.w_values) ws.push_back(detail::parse_weight(w));
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  const auto rows = run_sweep(inst, ws, args.solve);
  const std::string csv = sweep_csv(rows);
  if (args.out_path.empty()) {
    out << csv;
  } else {
    write_file(args.out_path, csv);
    out << "wrote " << args.out_path << " (" << rows.size() << " rows)\n";
  }
  const bool any_ok = std::any_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.solution.has_value(); });
  if (!any_ok) {
    err << "every sweep point failed\n";
    return kExitInfeasible;
  }
  return kExitOk;
}

/// Writes the LP file and prints the row census next to the closed form.
inline int cmd_export_lp(const std::string& instance_path, const std::string& out_path,
                         std::ostream& out, std::ostream& err) {
  Instance inst;
  try {
    inst = load_instance(instance_path);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  CheckStats written;
  const std::string lp = export_lp(inst, &written);
  write_file(out_path, lp);
  const CheckStats census = constraint_census(inst);
  out << std::left << std::setw(18) << "family" << std::setw(6) << "eq" << std::setw(10) << "rows"
      << "census\n";
  for (const Family f : kAllFamilies) {
    if (f == Family::kBounds) continue;
    out << std::left << std::setw(18) << family_name(f) << std::setw(6)
        << ("(" + std::to_string(equation_number(f)) + ")") << std::setw(10) << written[f]
        << census[f] << "\n";
  }
  out << std::left << std::setw(24) << "total" << std::setw(10) << written.total() << census.total()
      << "\n";
  if (written != census) {
    err << "row count differs from the closed-form census\n";
    return kExitInputError;
  }
  return kExitOk;
}

/// Writes every suite member as <dir>/<name>.json and its spec as
/// <dir>/<name>.spec.json.
inline int cmd_suite(const std::string& dir, std::ostream& out, std::ostream& err) {
  try {
    std::filesystem::create_directories(dir);
    for (const auto& [name, spec] : suite_specs()) {
      const std::string base = (std::filesystem::path(dir) / name).string();
      write_file(base + ".spec.json", dump(spec_to_json(spec)));
      write_file(base + ".json", dump(instance_to_json(generate(spec))));
      out << "wrote " << base << ".json\n";
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace bapcac
