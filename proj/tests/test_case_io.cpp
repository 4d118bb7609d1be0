// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "gridagg/case_io.hpp"
#include "gridagg/grid.hpp"
#include "helpers.hpp"

using namespace gridagg;

namespace {

const char* kTinyCase = R"(function mpc = tiny
% a comment line
mpc.version = '2';
mpc.baseMVA = 100;
mpc.bus = [
	1	3	10	0;
	2	1	40	0;  % trailing comment
];
mpc.gen = [
	1	0	0	0	0	1	100	1	120	0;
	2	0	0	0	0	1	100	1	80	0;
];
mpc.branch = [
	1	2	0.01	0.25	0	140	0	0	0	0	1;
];
mpc.gencost = [
	2	0	0	3	0	12.5	0;
	2	0	0	3	0	30	0;
];
mpc.extra_table = [
	1	2;
	3	4;
];
)";

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("matpower scalar assignment and comments") {
  const CaseDocument doc = parse_matpower(kTinyCase);
  CHECK(doc.name == "tiny");
  CHECK(doc.base_mva == 100.0);
  CHECK(doc.bus.rows() == 2);
  CHECK(doc.branch.rows() == 1);
  CHECK(doc.gen.rows() == 2);
  REQUIRE(doc.extras.size() == 2);
  CHECK(doc.extras[0].first == "version");
  CHECK(doc.extras[1].first == "extra_table");
  CHECK(doc.extras[1].second.matrix.rows() == 2);
}

TEST_CASE("matpower syntax error carries line and column") {
  try {
    parse_matpower("mpc.baseMVA = ;\n");
    FAIL("expected CaseFormatError");
  } catch (const CaseFormatError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("line 1") != std::string::npos);
    CHECK(msg.find("column") != std::string::npos);
  }
}

TEST_CASE("missing mandatory table is rejected") {
  CHECK_THROWS_WITH(parse_matpower("mpc.baseMVA = 100;\n"),
                    Catch::Matchers::ContainsSubstring("bus"));
}

TEST_CASE("malformed case text raises format errors, never crashes") {
  for (const char* bad : {
           "mpc.bus = [1 2",              // unterminated matrix
           "mpc.",                        // dangling field access
           "function",                    // truncated header
           "mpc.bus = [1 2; 3];",         // ragged rows
           "bus = [1];",                  // missing mpc prefix
           "mpc.bus == [1];",             // double equals
           "mpc.baseMVA = 'open",         // unterminated string
           "mpc.baseMVA = +;",            // sign without digits
       }) {
    INFO(bad);
    CHECK_THROWS_AS(parse_matpower(bad), CaseFormatError);
  }
  // Signed and scientific numbers parse.
  std::string text = kTinyCase;
  text += "mpc.extra_scalar = +12.5e-1;\n";
  const CaseDocument doc = parse_matpower(text);
  CHECK(doc.extras.back().second.scalar == 1.25);
}

TEST_CASE("parse-print identity on the case document") {
  const CaseDocument doc = parse_matpower(kTinyCase);
  const CaseDocument again = parse_matpower(write_matpower(doc));
  CHECK(doc == again);
}

TEST_CASE("to_grid interprets the DC-OPF columns") {
  const Grid g = to_grid(parse_matpower(kTinyCase));
  REQUIRE(g.n_buses() == 2);
  REQUIRE(g.n_lines() == 1);
  REQUIRE(g.n_generators() == 2);
  CHECK(g.slack_bus == 0);
  CHECK(g.buses[1].demand == 40.0);
  CHECK(g.lines[0].susceptance == Catch::Approx(4.0));  // 1/0.25
  CHECK(g.lines[0].limit == 140.0);
  CHECK(g.generators[0].cost == 12.5);
  CHECK(g.generators[0].p_max == 120.0);
  CHECK(validate(g).ok());
}

TEST_CASE("rateA of zero maps to the big-M default") {
  std::string text = kTinyCase;
  const auto pos = text.find("140");
  text.replace(pos, 3, "0");
  const Grid g = to_grid(parse_matpower(text));
  CHECK(g.lines[0].limit == 1e4);
}

TEST_CASE("out-of-service branch and generator are dropped") {
  std::string text = kTinyCase;
  // Branch status column is the last branch field; gen status is column 8.
  auto pos = text.find("0	0	0	0	1;");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, std::string("0	0	0	0	1;").size(), "0	0	0	0	0;");
  const Grid no_branch = to_grid(parse_matpower(text));
  CHECK(no_branch.n_lines() == 0);
  CHECK_FALSE(validate(no_branch).ok());  // dropping the only branch disconnects

  std::string gen_off = kTinyCase;
  pos = gen_off.find("100	1	80");
  REQUIRE(pos != std::string::npos);
  gen_off.replace(pos, std::string("100	1	80").size(), "100	0	80");
  const Grid g = to_grid(parse_matpower(gen_off));
  CHECK(g.n_generators() == 1);
}

TEST_CASE("zero reactance is rejected") {
  std::string text = kTinyCase;
  const auto pos = text.find("0.25");
  text.replace(pos, 4, "0");
  CHECK_THROWS_WITH(to_grid(parse_matpower(text)),
                    Catch::Matchers::ContainsSubstring("reactance"));
}

TEST_CASE("quadratic costs rejected unless linearized") {
  std::string text = kTinyCase;
  const auto pos = text.find("3	0	12.5");
  text.replace(pos, std::string("3	0	12.5").size(), "3	0.4	12.5");
  CHECK_THROWS_WITH(to_grid(parse_matpower(text)),
                    Catch::Matchers::ContainsSubstring("nonlinear"));
  ToGridOptions opts;
  opts.linearize_costs = true;
  const Grid g = to_grid(parse_matpower(text), opts);
  CHECK(g.generators[0].cost == 12.5);
}

TEST_CASE("non-contiguous bus ids are densely renumbered") {
  std::string text = kTinyCase;
  // Rename bus 2 -> 7012 everywhere it is referenced.
  auto rename = [&text](const std::string& from, const std::string& to) {
    const auto pos = text.find(from);
    REQUIRE(pos != std::string::npos);
    text.replace(pos, from.size(), to);
  };
  rename("\t2\t1\t40", "\t7012\t1\t40");
  rename("\t2\t0\t0\t0\t0\t1\t100\t1\t80", "\t7012\t0\t0\t0\t0\t1\t100\t1\t80");
  rename("1\t2\t0.01", "1\t7012\t0.01");
  const Grid g = to_grid(parse_matpower(text));
  CHECK(g.n_buses() == 2);
  CHECK(g.lines[0].to_bus == 1);
  CHECK(g.generators[1].bus == 1);
}

TEST_CASE("JSON round-trip preserves every bit") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const Grid g = testing::random_connected_grid(seed);
    const Grid back = read_json_case(write_json_case(g));
    INFO("seed " << seed);
    CHECK(back == g);
    // Twice through the writer is byte-stable.
    CHECK(write_json_case(back) == write_json_case(g));
  }
}

TEST_CASE("JSON schema violation reports the pointer path") {
  Grid g = testing::random_connected_grid(3);
  REQUIRE(g.n_lines() > 3);
  std::string text = write_json_case(g);
  nlohmann::json j = nlohmann::json::parse(text);
  j["lines"][3]["limit"] = -5.0;
  try {
    read_json_case(j.dump());
    FAIL("expected CaseFormatError");
  } catch (const CaseFormatError& e) {
    CHECK(std::string(e.what()).find("/lines/3/limit") != std::string::npos);
  }
}

TEST_CASE("report CSV has the documented header and quoting") {
  EvaluationRecord ok;
  ok.method = PartitionMethod::ncp_kmeans;
  ok.n_clusters = 5;
  ok.z_full = 100.0;
  ok.z_agg = 140.0;
  ok.rove = 0.4;
  ok.mrllv = 0.0;
  ok.gpt_seconds = 0.125;
  EvaluationRecord bad;
  bad.method = PartitionMethod::lmp_sc;
  bad.n_clusters = 2;
  bad.z_full = 100.0;
  bad.status = EvaluationStatus::agg_infeasible;

  const std::string csv = report_to_csv({ok, bad});
  std::istringstream lines(csv);
  std::string header, row1, row2;
  std::getline(lines, header);
  std::getline(lines, row1);
  std::getline(lines, row2);
  CHECK(header == "method,n_clusters,z_full,z_agg,rove,mrllv,gpt_seconds\r");
  CHECK(row1 == "ncp-kmeans,5,100,140,0.4,0,0.125\r");
  CHECK(row2 == "lmp-sc,2,100,,,,0\r");

  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("with,comma") == "\"with,comma\"");
  CHECK(csv_field("with\"quote") == "\"with\"\"quote\"");
}

TEST_CASE("shipped 24-bus fixture loads and validates") {
  const std::string path = std::string(GRIDAGG_DATA_DIR) + "/rts24.json";
  const Grid g = read_json_case(read_file(path));
  CHECK(g.n_buses() == 24);
  CHECK(g.n_lines() == 34);
  CHECK(validate(g).ok());
}

TEST_CASE("parse-print identity holds on the shipped 300-bus case") {
  const std::string path = std::string(GRIDAGG_DATA_DIR) + "/ieee300.m";
  const CaseDocument doc = parse_matpower(read_file(path));
  CHECK(parse_matpower(write_matpower(doc)) == doc);
}

TEST_CASE("shipped 300-bus case parses with the documented shape") {
  const std::string path = std::string(GRIDAGG_DATA_DIR) + "/ieee300.m";
  const CaseDocument doc = parse_matpower(read_file(path));
  CHECK(doc.bus.rows() == 300);
  CHECK(doc.branch.rows() == 411);
  ToGridOptions opts;
  opts.linearize_costs = true;
  const Grid g = to_grid(doc, opts);
  CHECK(validate(g).ok());

  // Parallel bus pairs survive as separate lines.
  int parallel = 0;
  std::set<std::pair<int, int>> seen;
  for (const Line& l : g.lines) {
    const auto key = std::minmax(l.from_bus, l.to_bus);
    if (!seen.insert(key).second) ++parallel;
  }
  CHECK(parallel > 0);
}
