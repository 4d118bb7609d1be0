// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// criterion fails. Usage: gridagg_acceptance <data-dir> <cli-binary>.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gridagg/aggregate.hpp"
#include "gridagg/case_io.hpp"
#include "gridagg/dcopf.hpp"
#include "gridagg/evaluate.hpp"
#include "gridagg/grid.hpp"
#include "gridagg/partition.hpp"
#include "gridagg/ptdf.hpp"
#include "helpers.hpp"

using namespace gridagg;

namespace {

std::string g_data_dir;
std::string g_cli_path;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Grid load_rts24() { return read_json_case(read_file(g_data_dir + "/rts24.json")); }

Grid load_ieee300() { return read_json_case(read_file(g_data_dir + "/ieee300_mod.json")); }

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& why) {
    if (!cond && ok) {
      ok = false;
      detail = why;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// --- criterion 1: PTDF vs angle oracle ------------------------------------

Check criterion1() {
  Check c;
  const auto start = std::chrono::steady_clock::now();

  auto compare = [&c](const Grid& g, const Vector& injections, const std::string& name) {
    const PtdfMatrix ptdf = build_ptdf(g);
    const Vector via_ptdf = ptdf.values * injections;
    const Vector via_angle = angle_flow_oracle(g, injections);
    const double err = (via_ptdf - via_angle).cwiseAbs().maxCoeff();
    const double scale = 1.0 + via_angle.cwiseAbs().maxCoeff();
    c.require(err <= 1e-8 * scale, name + ": mismatch " + std::to_string(err / scale));
  };

  for (const Grid& g : {load_rts24(), load_ieee300()}) {
    Vector inj = g.demand_vector();
    inj[g.slack_bus] -= inj.sum();
    compare(g, inj, g.name);
  }
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const Grid g = testing::random_connected_grid(seed, 30);
    compare(g, testing::random_balanced_injections(g, seed * 77 + 5), "random grid");
  }

  const double elapsed = seconds_since(start);
  c.require(elapsed < 10.0, "runtime " + std::to_string(elapsed) + "s exceeds 10s");
  if (c.ok) c.detail = "fixtures + 100 random grids within 1e-8, " +
                       std::to_string(elapsed).substr(0, 4) + "s";
  return c;
}

// --- criteria 2 and 3: KKT suite and price identities ----------------------

std::vector<Grid> solve_corpus() {
  std::vector<Grid> corpus;
  corpus.push_back(testing::two_bus_grid(100.0));
  corpus.push_back(testing::two_bus_grid(30.0));
  corpus.push_back(testing::six_bus_single_congestion());
  corpus.push_back(load_rts24());
  corpus.push_back(load_ieee300());
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    Grid g = testing::random_connected_grid(seed);
    TransformSpec spec;
    spec.backup_cost = 0.0;
    g = transform(g, spec, seed);
    for (Line& l : g.lines) l.limit *= 0.5;
    corpus.push_back(std::move(g));
  }
  return corpus;
}

Check criterion2() {
  Check c;
  for (const Grid& g : solve_corpus()) {
    const PtdfMatrix ptdf = build_ptdf(g);
    const DcOpfSolution sol = solve_dcopf(g, ptdf);
    const DcOpfKktReport rep = dcopf_kkt_report(g, ptdf, sol);
    c.require(rep.primal_residual <= 1e-7 * (1.0 + g.total_demand()),
              g.name + ": primal residual " + std::to_string(rep.primal_residual));
    c.require(rep.complementary_slackness <= 1e-6 * (1.0 + std::abs(sol.z)),
              g.name + ": CS " + std::to_string(rep.complementary_slackness));
    c.require(rep.relative_gap <= 1e-7, g.name + ": gap " + std::to_string(rep.relative_gap));
    c.require(rep.stationarity <= 1e-6, g.name + ": stationarity " +
                                            std::to_string(rep.stationarity));
  }

  const Grid two = testing::two_bus_grid(30.0);
  const PtdfMatrix ptdf = build_ptdf(two);
  const DcOpfSolution sol = solve_dcopf(two, ptdf);
  const Vector prices = lmp(sol, ptdf);
  c.require(std::abs(sol.z - 1300.0) <= 1e-6, "two-bus z");
  c.require(std::abs(prices[0] - 10.0) <= 1e-6, "two-bus LMP slack");
  c.require(std::abs(prices[1] - 50.0) <= 1e-6, "two-bus LMP load");
  c.require(std::abs(std::abs(sol.mu[0]) - 40.0) <= 1e-6, "two-bus |mu|");
  if (c.ok) c.detail = "KKT residuals within bounds on the full corpus; two-bus duals exact";
  return c;
}

Check criterion3() {
  Check c;
  for (const Grid& g : solve_corpus()) {
    const PtdfMatrix ptdf = build_ptdf(g);
    const DcOpfSolution sol = solve_dcopf(g, ptdf);
    const Vector prices = lmp(sol, ptdf);
    const Matrix ncpm = ncp(sol, ptdf).values;
    const Vector recomposed =
        Vector::Constant(g.n_buses(), sol.lambda_slack) + ncpm.rowwise().sum();
    c.require((prices - recomposed).cwiseAbs().maxCoeff() <= 1e-9,
              g.name + ": LMP identity violated");
    bool any_congested = false;
    for (bool flag : sol.congested) any_congested |= flag;
    if (!any_congested)
      c.require(ncpm.cwiseAbs().maxCoeff() == 0.0, g.name + ": NCP not zero");
  }
  if (c.ok) c.detail = "LMP = lambda + NCP row sums within 1e-9 on every solve";
  return c;
}

// --- criterion 4: single-congestion equivalence ----------------------------

Check criterion4() {
  Check c;
  const Grid g = testing::six_bus_single_congestion();
  const PtdfMatrix ptdf = build_ptdf(g);
  const DcOpfSolution sol = solve_dcopf(g, ptdf);
  int congested_count = 0;
  for (bool flag : sol.congested) congested_count += flag;
  c.require(congested_count == 1, "crafted case must have exactly one congested line");

  const FeatureMatrix fl = lmp_features(sol, ptdf);
  const FeatureMatrix fn = ncp_features(sol, ptdf);
  const std::uint64_t seed = 1;
  for (int k = 1; k <= g.n_buses(); ++k) {
    const auto km_l = kmeans_partition(g, fl, k, seed).assignment;
    const auto km_n = kmeans_partition(g, fn, k, seed).assignment;
    c.require(km_l == km_n, "kmeans differs at k=" + std::to_string(k));
    const auto an_l = anac_partition(g, fl, k).assignment;
    const auto an_n = anac_partition(g, fn, k).assignment;
    c.require(an_l == an_n, "anac differs at k=" + std::to_string(k));
  }
  if (c.ok) c.detail = "lmp/ncp partitions identical for all cluster counts (exact)";
  return c;
}

// --- criterion 5: identity and copper-plate bounds --------------------------

Check criterion5() {
  Check c;
  for (const Grid& g : {load_rts24(), load_ieee300()}) {
    const PtdfMatrix ptdf = build_ptdf(g);
    const DcOpfSolution fm = solve_dcopf(g, ptdf);
    Vector limits(g.n_lines());
    for (const Line& l : g.lines) limits[l.id] = l.limit;

    for (PartitionMethod method : kAllMethods) {
      const PartitionResult full =
          partition_with_method(g, ptdf, fm, method, g.n_buses(), 1);
      const AggregatedModel am_full = build_aggregated(g, ptdf, full);
      const DcOpfSolution agg_full = solve_aggregated(am_full, g.generators);
      const double r = rove(fm.z, agg_full.z);
      const double v = mrllv(map_flows(ptdf, g, agg_full.p), limits);
      c.require(std::abs(r) <= 1e-9, g.name + "/" + to_string(method) +
                                         ": identity ROVE " + std::to_string(r));
      c.require(v <= 1e-9,
                g.name + "/" + to_string(method) + ": identity MRLLV " + std::to_string(v));

      const PartitionResult copper = partition_with_method(g, ptdf, fm, method, 1, 1);
      const AggregatedModel am_one = build_aggregated(g, ptdf, copper);
      const DcOpfSolution agg_one = solve_aggregated(am_one, g.generators);
      c.require(agg_one.z <= fm.z * (1.0 + 1e-9),
                g.name + "/" + to_string(method) + ": copper plate above FM");
    }
  }
  if (c.ok) c.detail = "identity ROVE/MRLLV zero, copper plate lower-bounds, both fixtures";
  return c;
}

// --- criterion 6: ANAC contiguity -------------------------------------------

Check criterion6() {
  Check c;
  for (const Grid& g : {load_rts24(), load_ieee300()}) {
    const PtdfMatrix ptdf = build_ptdf(g);
    const DcOpfSolution fm = solve_dcopf(g, ptdf);
    for (Metric metric : {Metric::lmp, Metric::ncp}) {
      const FeatureMatrix f =
          metric == Metric::lmp ? lmp_features(fm, ptdf) : ncp_features(fm, ptdf);
      const AnacHistory history = anac_history(g, f, 1);
      for (int k = 1; k <= g.n_buses(); ++k) {
        if (!clusters_contiguous(g, history.at(k))) {
          c.require(false, g.name + ": non-contiguous cluster at k=" + std::to_string(k));
          break;
        }
      }
    }
  }
  if (c.ok) c.detail = "every cluster connected at every cluster count, both metrics/fixtures";
  return c;
}

// --- criterion 7: directional error/time orderings ---------------------------

Check criterion7() {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  const Grid g = load_ieee300();

  SweepOptions opts;
  opts.seed = 1;
  opts.jobs = 1;
  std::vector<PartitionMethod> methods(std::begin(kAllMethods), std::end(kAllMethods));
  const auto records = sweep(g, methods, 50, 1, opts);

  std::map<PartitionMethod, double> mean_rove, mean_mrllv, mean_gpt;
  std::map<PartitionMethod, int> count;
  for (const auto& r : records) {
    c.require(r.status == EvaluationStatus::ok,
              std::string(to_string(r.method)) + " k=" + std::to_string(r.n_clusters) +
                  " infeasible");
    if (r.status != EvaluationStatus::ok) continue;
    mean_rove[r.method] += std::abs(r.rove);
    mean_mrllv[r.method] += r.mrllv;
    mean_gpt[r.method] += r.gpt_seconds;
    ++count[r.method];
  }
  for (PartitionMethod m : methods) {
    mean_rove[m] /= count[m];
    mean_mrllv[m] /= count[m];
    mean_gpt[m] /= count[m];
  }

  using PM = PartitionMethod;
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "mean|ROVE|%%: lmp-km %.1f lmp-sc %.1f lmp-anac %.1f ncp-km %.1f ncp-anac %.1f; "
                "meanMRLLV%%: %.0f %.0f %.0f %.0f %.0f; GPT s: %.3f %.3f %.3f %.3f %.3f",
                100 * mean_rove[PM::lmp_kmeans], 100 * mean_rove[PM::lmp_sc],
                100 * mean_rove[PM::lmp_anac], 100 * mean_rove[PM::ncp_kmeans],
                100 * mean_rove[PM::ncp_anac], 100 * mean_mrllv[PM::lmp_kmeans],
                100 * mean_mrllv[PM::lmp_sc], 100 * mean_mrllv[PM::lmp_anac],
                100 * mean_mrllv[PM::ncp_kmeans], 100 * mean_mrllv[PM::ncp_anac],
                mean_gpt[PM::lmp_kmeans], mean_gpt[PM::lmp_sc], mean_gpt[PM::lmp_anac],
                mean_gpt[PM::ncp_kmeans], mean_gpt[PM::ncp_anac]);
  std::cout << "  [criterion 7 data] " << buf << "\n";

  for (PM good : {PM::ncp_kmeans, PM::lmp_anac, PM::ncp_anac}) {
    for (PM bad : {PM::lmp_kmeans, PM::lmp_sc}) {
      c.require(mean_rove[good] < mean_rove[bad],
                std::string("mean|ROVE| ") + to_string(good) + " not below " + to_string(bad));
    }
  }
  for (PM bad : {PM::lmp_kmeans, PM::lmp_sc}) {
    c.require(mean_mrllv[PM::ncp_kmeans] < mean_mrllv[bad],
              std::string("mean MRLLV ncp-kmeans not below ") + to_string(bad));
  }
  for (PM anac : {PM::lmp_anac, PM::ncp_anac}) {
    for (PM km : {PM::lmp_kmeans, PM::ncp_kmeans}) {
      c.require(mean_gpt[anac] >= 5.0 * mean_gpt[km],
                std::string("GPT ") + to_string(anac) + " below 5x " + to_string(km));
    }
  }

  const double elapsed = seconds_since(start);
  c.require(elapsed < 900.0, "sweep runtime " + std::to_string(elapsed) + "s exceeds 15min");
  if (c.ok)
    c.detail = "orderings hold (250 records, " + std::to_string(elapsed).substr(0, 5) + "s)";
  return c;
}

// --- criterion 8: 24-bus scenario sanity -------------------------------------

Check criterion8() {
  Check c;
  const Grid g = load_rts24();
  const PtdfMatrix ptdf = build_ptdf(g);
  const DcOpfSolution fm = solve_dcopf(g, ptdf);

  int congested_count = 0;
  for (bool flag : fm.congested) congested_count += flag;
  c.require(congested_count >= 2,
            "only " + std::to_string(congested_count) + " congested lines");

  const Vector prices = lmp(fm, ptdf);
  c.require(prices.maxCoeff() - prices.minCoeff() > 1.0, "LMP spread is flat");

  const PartitionResult p5 =
      partition_with_method(g, ptdf, fm, PartitionMethod::ncp_anac, 5, 1);
  for (const Line& l : g.lines) {
    if (!fm.congested[l.id]) continue;
    c.require(p5.assignment[l.from_bus] != p5.assignment[l.to_bus],
              "congested line " + std::to_string(l.id) + " internal to a cluster");
  }
  if (c.ok)
    c.detail = std::to_string(congested_count) +
               " congested lines, LMP spread " +
               std::to_string(prices.maxCoeff() - prices.minCoeff()).substr(0, 5) +
               ", all congested lines on 5-cluster boundaries";
  return c;
}

// --- criterion 9: CLI determinism --------------------------------------------

std::string strip_gpt_column(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) {
    const auto pos = line.rfind(',');
    out += line.substr(0, pos);
    out += '\n';
  }
  return out;
}

Check criterion9() {
  Check c;
  const std::string out1 = "/tmp/gridagg_accept_run1.csv";
  const std::string out2 = "/tmp/gridagg_accept_run2.csv";
  const std::string cmd_base = g_cli_path + " evaluate --case " + g_data_dir +
                               "/rts24.json --methods all --from 24 --to 1 --seed 1 "
                               "--timing-reps 1 --out ";
  c.require(std::system((cmd_base + out1 + " >/dev/null 2>&1").c_str()) == 0, "run 1 failed");
  if (c.ok)
    c.require(std::system((cmd_base + out2 + " >/dev/null 2>&1").c_str()) == 0, "run 2 failed");
  if (c.ok) {
    const std::string a = strip_gpt_column(read_file(out1));
    const std::string b = strip_gpt_column(read_file(out2));
    c.require(!a.empty() && a == b, "CSV outputs differ outside gpt_seconds");
  }
  std::remove(out1.c_str());
  std::remove(out2.c_str());
  if (c.ok) c.detail = "two evaluate runs byte-identical modulo gpt_seconds";
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: gridagg_acceptance <data-dir> <cli-binary>\n";
    return 2;
  }
  g_data_dir = argv[1];
  g_cli_path = argv[2];

  const std::vector<std::pair<std::string, std::function<Check()>>> criteria = {
      {"1 PTDF oracle equivalence", criterion1},
      {"2 KKT/duality suite", criterion2},
      {"3 LMP/NCP identity", criterion3},
      {"4 single-congestion equivalence", criterion4},
      {"5 identity and copper-plate bounds", criterion5},
      {"6 ANAC contiguity", criterion6},
      {"7 directional error/time orderings", criterion7},
      {"8 24-bus scenario sanity", criterion8},
      {"9 evaluate determinism", criterion9},
  };

  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Check c;
    try {
      c = fn();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = std::string("exception: ") + e.what();
    }
    std::cout << (c.ok ? "PASS" : "FAIL") << " criterion " << name;
    if (!c.detail.empty()) std::cout << " -- " << c.detail;
    std::cout << "\n" << std::flush;
    failures += !c.ok;
  }
  if (failures > 0) {
    std::cout << failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all criteria passed\n";
  return 0;
}
