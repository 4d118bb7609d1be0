// SPDX-License-Identifier: Apache-2.0
//
// gridagg: DC-OPF grid aggregation toolkit.
//
// Subcommands: solve, transform, partition, aggregate, evaluate.
// Exit codes: 0 success, 1 input/parse error, 2 infeasible, 3 numerical
// failure, 64 usage error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gridagg/aggregate.hpp"
#include "gridagg/case_io.hpp"
#include "gridagg/dcopf.hpp"
#include "gridagg/evaluate.hpp"
#include "gridagg/grid.hpp"
#include "gridagg/partition.hpp"
#include "gridagg/ptdf.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitUsage = 64;

struct CommonOptions {
  std::string case_path;
  std::string format = "auto";  // auto | matpower | json
  std::uint64_t seed = 1;
  std::string out;
  std::string json_out;
  double tol_feas = 1e-7;
  bool linearize_costs = false;
};

void add_common(CLI::App* cmd, CommonOptions& opt, bool needs_case = true) {
  auto* case_opt = cmd->add_option("--case", opt.case_path, "Case file (MATPOWER .m or JSON)");
  if (needs_case) case_opt->required();
  cmd->add_option("--format", opt.format, "Case format: auto, matpower, json")
      ->check(CLI::IsMember({"auto", "matpower", "json"}));
  cmd->add_option("--seed", opt.seed, "Random seed echoed into outputs");
  cmd->add_option("--out", opt.out, "Primary output path (default: stdout)");
  cmd->add_option("--json-out", opt.json_out, "Secondary JSON output path");
  cmd->add_option("--tol-feas", opt.tol_feas, "LP feasibility tolerance");
  cmd->add_flag("--linearize-costs", opt.linearize_costs,
                "Drop above-linear MATPOWER cost terms instead of rejecting them");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw gridagg::CaseFormatError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

gridagg::Grid load_grid(const CommonOptions& opt) {
  std::string format = opt.format;
  if (format == "auto") {
    const auto ext = std::filesystem::path(opt.case_path).extension().string();
    format = (ext == ".m" || ext == ".mat" || ext == ".matpower") ? "matpower" : "json";
  }
  const std::string text = read_file(opt.case_path);
  gridagg::Grid grid;
  if (format == "matpower") {
    gridagg::ToGridOptions to_grid_opts;
    to_grid_opts.linearize_costs = opt.linearize_costs;
    grid = gridagg::to_grid(gridagg::parse_matpower(text), to_grid_opts);
  } else {
    grid = gridagg::read_json_case(text);
  }
  const auto report = gridagg::validate(grid);
  if (!report.ok()) {
    std::string msg = "case fails validation:";
    for (const auto& v : report.violations) msg += "\n  " + v;
    throw gridagg::CaseFormatError(msg);
  }
  return grid;
}

gridagg::LpTolerances lp_tolerances(const CommonOptions& opt) {
  gridagg::LpTolerances tol;
  tol.feas = opt.tol_feas;
  return tol;
}

int run_solve(const CommonOptions& opt) {
  const gridagg::Grid grid = load_grid(opt);
  const gridagg::PtdfMatrix ptdf = gridagg::build_ptdf(grid);
  const gridagg::DcOpfSolution sol = gridagg::solve_dcopf(grid, ptdf, lp_tolerances(opt));
  const gridagg::Vector prices = gridagg::lmp(sol, ptdf);

  std::ostringstream summary;
  summary << "case: " << grid.name << "  buses: " << grid.n_buses()
          << "  lines: " << grid.n_lines() << "  generators: " << grid.n_generators() << "\n";
  summary << "objective: " << gridagg::format_double(sol.z) << "\n";
  summary << "lambda_slack: " << gridagg::format_double(sol.lambda_slack) << "\n";
  summary << "lmp range: [" << gridagg::format_double(prices.minCoeff()) << ", "
          << gridagg::format_double(prices.maxCoeff()) << "]\n";
  std::vector<int> congested;
  for (int l = 0; l < grid.n_lines(); ++l)
    if (sol.congested[l]) congested.push_back(l);
  summary << "congested lines (" << congested.size() << "):";
  for (int l : congested)
    summary << " " << l << "(" << grid.lines[l].from_bus << "-" << grid.lines[l].to_bus << ")";
  summary << "\n";
  write_output(opt.out, summary.str());

  if (!opt.json_out.empty())
    write_output(opt.json_out, gridagg::solution_to_json(sol).dump(2) + "\n");
  return kExitOk;
}

struct TransformCli {
  double demand_scale = 1.0;
  double wind_scale = 1.0;
  double perturb_costs = 0.0;
  std::optional<double> backup_cost;
  std::vector<std::string> add_wind;
};

int run_transform(const CommonOptions& opt, const TransformCli& cli) {
  gridagg::TransformSpec spec;
  spec.demand_scale = cli.demand_scale;
  spec.wind_scale = cli.wind_scale;
  spec.cost_perturb_magnitude = cli.perturb_costs;
  spec.backup_cost = cli.backup_cost;
  for (const std::string& entry : cli.add_wind) {
    const auto colon = entry.find(':');
    if (colon == std::string::npos) {
      std::cerr << "gridagg: --add-wind expects BUS:CAPACITY, got '" << entry << "'\n";
      return kExitUsage;
    }
    spec.wind_additions.emplace_back(std::stoi(entry.substr(0, colon)),
                                     std::stod(entry.substr(colon + 1)));
  }
  const gridagg::Grid grid = load_grid(opt);
  const gridagg::Grid out = gridagg::transform(grid, spec, opt.seed);
  write_output(opt.out, gridagg::write_json_case(out));
  return kExitOk;
}

struct PartitionCli {
  std::string method = "ncp-kmeans";
  int clusters = 0;
  double rho_cap = 1e6;
};

int run_partition(const CommonOptions& opt, const PartitionCli& cli) {
  const auto method = gridagg::partition_method_from_string(cli.method);
  if (!method) {
    std::cerr << "gridagg: unknown method '" << cli.method << "'\n";
    return kExitUsage;
  }
  const gridagg::Grid grid = load_grid(opt);
  if (cli.clusters < 1 || cli.clusters > grid.n_buses()) {
    std::cerr << "gridagg: --clusters must be in [1, " << grid.n_buses() << "]\n";
    return kExitUsage;
  }
  const gridagg::PtdfMatrix ptdf = gridagg::build_ptdf(grid);
  const gridagg::DcOpfSolution sol = gridagg::solve_dcopf(grid, ptdf, lp_tolerances(opt));
  const gridagg::PartitionResult part = gridagg::partition_with_method(
      grid, ptdf, sol, *method, cli.clusters, opt.seed, cli.rho_cap);
  write_output(opt.out, gridagg::partition_to_json(part).dump(2) + "\n");
  return kExitOk;
}

struct AggregateCli {
  std::string partition_path;
  bool merge_parallel = false;
};

int run_aggregate(const CommonOptions& opt, const AggregateCli& cli) {
  const gridagg::Grid grid = load_grid(opt);
  nlohmann::json pj;
  try {
    pj = nlohmann::json::parse(read_file(cli.partition_path));
  } catch (const nlohmann::json::parse_error& e) {
    throw gridagg::CaseFormatError(std::string("invalid partition JSON: ") + e.what());
  }
  const gridagg::PartitionResult part = gridagg::partition_from_json(pj, grid);
  const gridagg::PtdfMatrix ptdf = gridagg::build_ptdf(grid);
  gridagg::AggregateOptions agg_opts;
  agg_opts.merge_parallel = cli.merge_parallel;
  const gridagg::AggregatedModel am = gridagg::build_aggregated(grid, ptdf, part, agg_opts);
  write_output(opt.out, gridagg::aggregated_to_json(grid, am).dump(2) + "\n");
  return kExitOk;
}

struct EvaluateCli {
  std::vector<std::string> methods{"all"};
  int from = 0;
  int to = 0;
  int jobs = 1;
  double rho_cap = 1e6;
  int timing_reps = 3;
};

int run_evaluate(const CommonOptions& opt, const EvaluateCli& cli) {
  std::vector<gridagg::PartitionMethod> methods;
  for (const std::string& name : cli.methods) {
    if (name == "all") {
      methods.assign(std::begin(gridagg::kAllMethods), std::end(gridagg::kAllMethods));
      break;
    }
    const auto m = gridagg::partition_method_from_string(name);
    if (!m) {
      std::cerr << "gridagg: unknown method '" << name << "'\n";
      return kExitUsage;
    }
    methods.push_back(*m);
  }
  if (cli.from < 1 || cli.to < 1) {
    std::cerr << "gridagg: cluster counts must be at least 1\n";
    return kExitUsage;
  }
  const gridagg::Grid grid = load_grid(opt);
  if (cli.from > grid.n_buses() || cli.to > grid.n_buses()) {
    std::cerr << "gridagg: cluster range must lie in [1, " << grid.n_buses() << "]\n";
    return kExitUsage;
  }

  gridagg::SweepOptions sweep_opts;
  sweep_opts.seed = opt.seed;
  sweep_opts.jobs = cli.jobs;
  sweep_opts.rho_cap = cli.rho_cap;
  sweep_opts.lp = lp_tolerances(opt);
  sweep_opts.timing_repetitions = cli.timing_reps;
  const auto records = gridagg::sweep(grid, methods, cli.from, cli.to, sweep_opts);

  write_output(opt.out, gridagg::report_to_csv(records));
  if (!opt.json_out.empty())
    write_output(opt.json_out, gridagg::report_to_json(records).dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DC-OPF grid aggregation toolkit"};
  app.require_subcommand(1);

  CommonOptions solve_opt, transform_opt, partition_opt, aggregate_opt, evaluate_opt;
  TransformCli transform_cli;
  PartitionCli partition_cli;
  AggregateCli aggregate_cli;
  EvaluateCli evaluate_cli;

  CLI::App* solve = app.add_subcommand("solve", "Solve the DC-OPF for a case");
  add_common(solve, solve_opt);

  CLI::App* transform = app.add_subcommand("transform", "Apply scenario transforms to a case");
  add_common(transform, transform_opt);
  transform->add_option("--demand-scale", transform_cli.demand_scale, "Scale all demands");
  transform->add_option("--wind-scale", transform_cli.wind_scale, "Scale wind capacities");
  transform->add_option("--perturb-costs", transform_cli.perturb_costs,
                        "Magnitude of deterministic thermal-cost perturbation");
  transform
      ->add_option("--backup-cost", transform_cli.backup_cost,
                   "Append a backup generator at every bus with this cost "
                   "(0 = ten times the maximum thermal cost)")
      ->expected(1);
  transform->add_option("--add-wind", transform_cli.add_wind,
                        "Add a wind generator, BUS:CAPACITY (repeatable)");

  CLI::App* partition = app.add_subcommand("partition", "Partition a case after an FM solve");
  add_common(partition, partition_opt);
  partition->add_option("--method", partition_cli.method,
                        "lmp-kmeans | lmp-sc | lmp-anac | ncp-kmeans | ncp-anac");
  partition->add_option("--clusters", partition_cli.clusters, "Cluster count")->required();
  partition->add_option("--rho-cap", partition_cli.rho_cap, "Spectral affinity cap");

  CLI::App* aggregate = app.add_subcommand("aggregate", "Build the aggregated model");
  add_common(aggregate, aggregate_opt);
  aggregate->add_option("--partition", aggregate_cli.partition_path, "Partition JSON")->required();
  aggregate->add_flag("--merge-parallel", aggregate_cli.merge_parallel,
                      "Merge parallel inter-cluster lines, summing limits");

  CLI::App* evaluate = app.add_subcommand("evaluate", "Sweep methods and cluster counts");
  add_common(evaluate, evaluate_opt);
  evaluate->add_option("--methods", evaluate_cli.methods, "Method list or 'all'");
  evaluate->add_option("--from", evaluate_cli.from, "First cluster count")->required();
  evaluate->add_option("--to", evaluate_cli.to, "Last cluster count")->required();
  evaluate->add_option("--jobs", evaluate_cli.jobs, "Concurrent sweep cells");
  evaluate->add_option("--rho-cap", evaluate_cli.rho_cap, "Spectral affinity cap");
  evaluate->add_option("--timing-reps", evaluate_cli.timing_reps,
                       "Repetitions per partition timing (median reported)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (solve->parsed()) return run_solve(solve_opt);
    if (transform->parsed()) return run_transform(transform_opt, transform_cli);
    if (partition->parsed()) return run_partition(partition_opt, partition_cli);
    if (aggregate->parsed()) return run_aggregate(aggregate_opt, aggregate_cli);
    if (evaluate->parsed()) return run_evaluate(evaluate_opt, evaluate_cli);
  } catch (const gridagg::CaseFormatError& e) {
    std::cerr << "gridagg: " << e.what() << "\n";
    return kExitParse;
  } catch (const gridagg::SolveFailure& e) {
    std::cerr << "gridagg: " << e.what() << "\n";
    return e.status() == gridagg::LpStatus::infeasible ? kExitInfeasible : kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "gridagg: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "gridagg: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
