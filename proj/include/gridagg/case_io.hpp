// SPDX-License-Identifier: Apache-2.0
#ifndef GRIDAGG_CASE_IO_HPP_
#define GRIDAGG_CASE_IO_HPP_

#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gridagg/evaluate.hpp"
#include "gridagg/grid.hpp"
#include "gridagg/partition.hpp"

namespace gridagg {

/// Parse or schema error, carrying a location: line/column for case text,
/// a JSON pointer for JSON documents.
class CaseFormatError : public std::runtime_error {
 public:
  explicit CaseFormatError(const std::string& what) : std::runtime_error(what) {}
};

/// Shortest round-trip decimal form of a double; what every writer here
/// uses so emitted numbers re-read to identical bits.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// MATPOWER-style case text
// ---------------------------------------------------------------------------

struct CaseValue {
  enum class Kind { scalar, text, matrix };
  Kind kind = Kind::scalar;
  double scalar = 0.0;
  std::string text;
  Matrix matrix;

  friend bool operator==(const CaseValue& a, const CaseValue& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
      case Kind::scalar: return a.scalar == b.scalar;
      case Kind::text: return a.text == b.text;
      case Kind::matrix:
        return a.matrix.rows() == b.matrix.rows() && a.matrix.cols() == b.matrix.cols() &&
               a.matrix == b.matrix;
    }
    return false;
  }
};

/// Raw parsed case: the four mandatory tables interpreted downstream, plus
/// every other assignment preserved opaquely in file order.
struct CaseDocument {
  std::string name = "case";
  double base_mva = 100.0;
  Matrix bus;
  Matrix branch;
  Matrix gen;
  Matrix gencost;
  std::vector<std::pair<std::string, CaseValue>> extras;

  friend bool operator==(const CaseDocument& a, const CaseDocument& b) {
    auto same = [](const Matrix& x, const Matrix& y) {
      return x.rows() == y.rows() && x.cols() == y.cols() && x == y;
    };
    return a.name == b.name && a.base_mva == b.base_mva && same(a.bus, b.bus) &&
           same(a.branch, b.branch) && same(a.gen, b.gen) && same(a.gencost, b.gencost) &&
           a.extras == b.extras;
  }
};

namespace detail {

class MatpowerScanner {
 public:
  explicit MatpowerScanner(std::string_view text) : text_(text) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw CaseFormatError("syntax error at line " + std::to_string(line_) + ", column " +
                          std::to_string(col_) + ": " + msg);
  }

  void skip_space(bool stop_at_newline = false) {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (c == '\n') {
        if (stop_at_newline) return;
        advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == ',') {
        advance();
      } else {
        return;
      }
    }
  }

  bool eof() {
    skip_space();
    return pos_ >= text_.size();
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void expect(char c) {
    skip_space();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    advance();
  }

  bool consume(char c) {
    skip_space();
    if (peek() != c) return false;
    advance();
    return true;
  }

  std::string identifier() {
    skip_space();
    std::string out;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      out.push_back(text_[pos_]);
      advance();
    }
    if (out.empty()) fail("expected identifier");
    return out;
  }

  double number() {
    skip_space();
    if (peek() == '+') advance();  // from_chars takes '-' but not '+'
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    double value = 0.0;
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc()) fail("expected number");
    while (text_.data() + pos_ != res.ptr) advance();
    return value;
  }

  bool at_number() {
    skip_space();
    const char c = peek();
    return c == '-' || c == '+' || c == '.' || std::isdigit(static_cast<unsigned char>(c));
  }

  std::string quoted_string() {
    skip_space();
    if (peek() != '\'') fail("expected string");
    advance();
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != '\'') {
      out.push_back(text_[pos_]);
      advance();
    }
    if (pos_ >= text_.size()) fail("unterminated string");
    advance();
    return out;
  }

  Matrix matrix() {
    expect('[');
    std::vector<std::vector<double>> rows;
    std::vector<double> row;
    while (true) {
      skip_space(/*stop_at_newline=*/true);
      const char c = peek();
      if (c == '\n' || c == ';') {
        advance();
        if (!row.empty()) {
          rows.push_back(std::move(row));
          row.clear();
        }
        continue;
      }
      if (c == ']') {
        advance();
        if (!row.empty()) rows.push_back(std::move(row));
        break;
      }
      if (c == '\0') fail("unterminated matrix");
      if (!at_number()) fail("expected number, ';' or ']' in matrix");
      row.push_back(number());
    }
    if (rows.empty()) return Matrix(0, 0);
    const std::size_t cols = rows.front().size();
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != cols) fail("ragged matrix row " + std::to_string(r + 1));
      for (std::size_t cidx = 0; cidx < cols; ++cidx) m(r, cidx) = rows[r][cidx];
    }
    return m;
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace detail

/// Parses the restricted MATPOWER grammar: `mpc.<field> = <scalar|string|
/// matrix>;` statements with `%` line comments, plus a tolerated leading
/// `function mpc = <name>` header. The bus, branch, gen and gencost tables
/// are mandatory; all other fields are carried as opaque extras.
inline CaseDocument parse_matpower(std::string_view text) {
  detail::MatpowerScanner scan(text);
  CaseDocument doc;
  bool has_bus = false, has_branch = false, has_gen = false, has_gencost = false;

  while (!scan.eof()) {
    std::string word = scan.identifier();
    if (word == "function") {
      // function mpc = <name>
      scan.identifier();
      scan.expect('=');
      doc.name = scan.identifier();
      continue;
    }
    if (word != "mpc") scan.fail("expected 'mpc.<field>' assignment");
    scan.expect('.');
    const std::string field = scan.identifier();
    scan.expect('=');

    CaseValue value;
    scan.skip_space();
    if (scan.peek() == '[') {
      value.kind = CaseValue::Kind::matrix;
      value.matrix = scan.matrix();
    } else if (scan.peek() == '\'') {
      value.kind = CaseValue::Kind::text;
      value.text = scan.quoted_string();
    } else {
      value.kind = CaseValue::Kind::scalar;
      value.scalar = scan.number();
    }
    scan.expect(';');

    if (field == "baseMVA" && value.kind == CaseValue::Kind::scalar) {
      doc.base_mva = value.scalar;
    } else if (field == "bus" && value.kind == CaseValue::Kind::matrix) {
      doc.bus = value.matrix;
      has_bus = true;
    } else if (field == "branch" && value.kind == CaseValue::Kind::matrix) {
      doc.branch = value.matrix;
      has_branch = true;
    } else if (field == "gen" && value.kind == CaseValue::Kind::matrix) {
      doc.gen = value.matrix;
      has_gen = true;
    } else if (field == "gencost" && value.kind == CaseValue::Kind::matrix) {
      doc.gencost = value.matrix;
      has_gencost = true;
    } else {
      doc.extras.emplace_back(field, std::move(value));
    }
  }

  if (!has_bus) throw CaseFormatError("missing mandatory table: bus");
  if (!has_branch) throw CaseFormatError("missing mandatory table: branch");
  if (!has_gen) throw CaseFormatError("missing mandatory table: gen");
  if (!has_gencost) throw CaseFormatError("missing mandatory table: gencost");
  return doc;
}

/// Prints a CaseDocument back into the restricted grammar; parse of the
/// output reproduces the document exactly.
inline std::string write_matpower(const CaseDocument& doc) {
  std::ostringstream out;
  out << "function mpc = " << doc.name << "\n";
  out << "mpc.baseMVA = " << format_double(doc.base_mva) << ";\n";
  auto emit_matrix = [&out](const std::string& field, const Matrix& m) {
    out << "mpc." << field << " = [\n";
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      out << "\t";
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        if (c) out << "\t";
        out << format_double(m(r, c));
      }
      out << ";\n";
    }
    out << "];\n";
  };
  emit_matrix("bus", doc.bus);
  emit_matrix("gen", doc.gen);
  emit_matrix("branch", doc.branch);
  emit_matrix("gencost", doc.gencost);
  for (const auto& [field, value] : doc.extras) {
    switch (value.kind) {
      case CaseValue::Kind::scalar:
        out << "mpc." << field << " = " << format_double(value.scalar) << ";\n";
        break;
      case CaseValue::Kind::text:
        out << "mpc." << field << " = '" << value.text << "';\n";
        break;
      case CaseValue::Kind::matrix:
        emit_matrix(field, value.matrix);
        break;
    }
  }
  return out.str();
}

struct ToGridOptions {
  /// Drop above-linear cost terms instead of rejecting them.
  bool linearize_costs = false;
  /// Limit assigned to branches whose rateA is 0 ("unlimited").
  double unlimited_rate_mw = 1e4;
  /// Tolerance below which a quadratic coefficient counts as zero.
  double quadratic_tolerance = 1e-9;
};

/// Interprets the DC-OPF-relevant MATPOWER columns into a Grid: dense bus
/// renumbering, susceptance 1/x, rateA limits, linear costs, type-3 slack.
/// Out-of-service branches and generators are dropped.
inline Grid to_grid(const CaseDocument& doc, const ToGridOptions& options = {}) {
  Grid grid;
  grid.name = doc.name;

  if (doc.bus.cols() < 3) throw CaseFormatError("bus table needs at least 3 columns");
  std::map<long long, int> bus_index;
  int slack = -1;
  for (Eigen::Index r = 0; r < doc.bus.rows(); ++r) {
    const long long original = static_cast<long long>(doc.bus(r, 0));
    if (!bus_index.emplace(original, static_cast<int>(r)).second)
      throw CaseFormatError("duplicate bus id " + std::to_string(original));
    grid.buses.push_back({static_cast<int>(r), doc.bus(r, 2)});
    if (static_cast<int>(doc.bus(r, 1)) == 3 && slack < 0) slack = static_cast<int>(r);
  }
  if (slack < 0) throw CaseFormatError("no slack bus (type 3) in bus table");
  grid.slack_bus = slack;

  auto lookup_bus = [&bus_index](double raw, const char* table) {
    const auto it = bus_index.find(static_cast<long long>(raw));
    if (it == bus_index.end())
      throw CaseFormatError(std::string(table) + " table references unknown bus " +
                            std::to_string(static_cast<long long>(raw)));
    return it->second;
  };

  if (doc.branch.cols() < 6) throw CaseFormatError("branch table needs at least 6 columns");
  const bool branch_has_status = doc.branch.cols() >= 11;
  for (Eigen::Index r = 0; r < doc.branch.rows(); ++r) {
    if (branch_has_status && doc.branch(r, 10) == 0.0) continue;
    const double x = doc.branch(r, 3);
    if (!(x > 0.0))
      throw CaseFormatError("branch row " + std::to_string(r + 1) +
                            ": zero or negative reactance");
    const double rate = doc.branch(r, 5);
    Line line;
    line.id = grid.n_lines();
    line.from_bus = lookup_bus(doc.branch(r, 0), "branch");
    line.to_bus = lookup_bus(doc.branch(r, 1), "branch");
    line.susceptance = 1.0 / x;
    line.limit = rate > 0.0 ? rate : options.unlimited_rate_mw;
    grid.lines.push_back(line);
  }

  if (doc.gen.cols() < 9) throw CaseFormatError("gen table needs at least 9 columns");
  if (doc.gencost.rows() < doc.gen.rows())
    throw CaseFormatError("gencost table shorter than gen table");
  for (Eigen::Index r = 0; r < doc.gen.rows(); ++r) {
    if (doc.gen(r, 7) <= 0.0) continue;  // out of service
    const Eigen::Index ncost = static_cast<Eigen::Index>(doc.gencost(r, 3));
    if (doc.gencost(r, 0) != 2.0)
      throw CaseFormatError("gencost row " + std::to_string(r + 1) +
                            ": only polynomial cost model supported");
    if (doc.gencost.cols() < 4 + ncost)
      throw CaseFormatError("gencost row " + std::to_string(r + 1) + ": truncated coefficients");
    double linear = 0.0;
    if (ncost >= 2) linear = doc.gencost(r, 4 + ncost - 2);
    if (!options.linearize_costs) {
      for (Eigen::Index k = 0; k < ncost - 2; ++k) {
        if (std::abs(doc.gencost(r, 4 + k)) > options.quadratic_tolerance)
          throw CaseFormatError("gencost row " + std::to_string(r + 1) +
                                ": nonlinear cost term; rerun with cost linearization");
      }
    }
    Generator g;
    g.id = grid.n_generators();
    g.bus = lookup_bus(doc.gen(r, 0), "gen");
    g.cost = linear;
    g.p_max = doc.gen(r, 8);
    g.kind = GeneratorKind::thermal;
    grid.generators.push_back(g);
  }

  return grid;
}

// ---------------------------------------------------------------------------
// Native JSON case schema
// ---------------------------------------------------------------------------

namespace detail {

inline const nlohmann::json& require(const nlohmann::json& j, const char* key,
                                     const std::string& path) {
  if (!j.contains(key)) throw CaseFormatError("schema error at " + path + ": missing '" + key + "'");
  return j.at(key);
}

inline double require_number(const nlohmann::json& j, const char* key, const std::string& path) {
  const auto& v = require(j, key, path);
  if (!v.is_number()) throw CaseFormatError("schema error at " + path + "/" + key + ": not a number");
  return v.get<double>();
}

inline int require_int(const nlohmann::json& j, const char* key, const std::string& path) {
  const auto& v = require(j, key, path);
  if (!v.is_number_integer())
    throw CaseFormatError("schema error at " + path + "/" + key + ": not an integer");
  return v.get<int>();
}

}  // namespace detail

inline nlohmann::json grid_to_json(const Grid& grid) {
  nlohmann::json j;
  j["name"] = grid.name;
  j["slack_bus"] = grid.slack_bus;
  j["buses"] = nlohmann::json::array();
  for (const Bus& b : grid.buses) j["buses"].push_back({{"id", b.id}, {"demand", b.demand}});
  j["lines"] = nlohmann::json::array();
  for (const Line& l : grid.lines)
    j["lines"].push_back({{"id", l.id},
                          {"from", l.from_bus},
                          {"to", l.to_bus},
                          {"susceptance", l.susceptance},
                          {"limit", l.limit}});
  j["generators"] = nlohmann::json::array();
  for (const Generator& g : grid.generators)
    j["generators"].push_back({{"id", g.id},
                               {"bus", g.bus},
                               {"cost", g.cost},
                               {"p_max", g.p_max},
                               {"kind", to_string(g.kind)}});
  return j;
}

inline std::string write_json_case(const Grid& grid) { return grid_to_json(grid).dump(2) + "\n"; }

/// Reads the documented case schema, reporting the JSON pointer of the
/// first violated field.
inline Grid read_json_case(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw CaseFormatError(std::string("invalid JSON: ") + e.what());
  }

  Grid grid;
  grid.name = j.value("name", "case");
  grid.slack_bus = detail::require_int(j, "slack_bus", "");

  const auto& buses = detail::require(j, "buses", "");
  if (!buses.is_array()) throw CaseFormatError("schema error at /buses: not an array");
  for (std::size_t i = 0; i < buses.size(); ++i) {
    const std::string path = "/buses/" + std::to_string(i);
    Bus b;
    b.id = detail::require_int(buses[i], "id", path);
    b.demand = detail::require_number(buses[i], "demand", path);
    if (b.id != static_cast<int>(i))
      throw CaseFormatError("schema error at " + path + "/id: ids must be dense and ordered");
    if (b.demand < 0.0) throw CaseFormatError("schema error at " + path + "/demand: negative");
    grid.buses.push_back(b);
  }

  const auto& lines = detail::require(j, "lines", "");
  if (!lines.is_array()) throw CaseFormatError("schema error at /lines: not an array");
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string path = "/lines/" + std::to_string(i);
    Line l;
    l.id = detail::require_int(lines[i], "id", path);
    l.from_bus = detail::require_int(lines[i], "from", path);
    l.to_bus = detail::require_int(lines[i], "to", path);
    l.susceptance = detail::require_number(lines[i], "susceptance", path);
    l.limit = detail::require_number(lines[i], "limit", path);
    if (l.id != static_cast<int>(i))
      throw CaseFormatError("schema error at " + path + "/id: ids must be dense and ordered");
    if (l.from_bus < 0 || l.from_bus >= grid.n_buses())
      throw CaseFormatError("schema error at " + path + "/from: unknown bus");
    if (l.to_bus < 0 || l.to_bus >= grid.n_buses())
      throw CaseFormatError("schema error at " + path + "/to: unknown bus");
    if (l.from_bus == l.to_bus)
      throw CaseFormatError("schema error at " + path + ": self-loop");
    if (!(l.susceptance > 0.0))
      throw CaseFormatError("schema error at " + path + "/susceptance: must be positive");
    if (!(l.limit > 0.0))
      throw CaseFormatError("schema error at " + path + "/limit: must be positive");
    grid.lines.push_back(l);
  }

  const auto& gens = detail::require(j, "generators", "");
  if (!gens.is_array()) throw CaseFormatError("schema error at /generators: not an array");
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const std::string path = "/generators/" + std::to_string(i);
    Generator g;
    g.id = detail::require_int(gens[i], "id", path);
    g.bus = detail::require_int(gens[i], "bus", path);
    g.cost = detail::require_number(gens[i], "cost", path);
    g.p_max = detail::require_number(gens[i], "p_max", path);
    const auto& kind = detail::require(gens[i], "kind", path);
    if (!kind.is_string()) throw CaseFormatError("schema error at " + path + "/kind: not a string");
    const auto parsed = generator_kind_from_string(kind.get<std::string>());
    if (!parsed) throw CaseFormatError("schema error at " + path + "/kind: unknown kind");
    g.kind = *parsed;
    if (g.id != static_cast<int>(i))
      throw CaseFormatError("schema error at " + path + "/id: ids must be dense and ordered");
    if (g.bus < 0 || g.bus >= grid.n_buses())
      throw CaseFormatError("schema error at " + path + "/bus: unknown bus");
    if (g.p_max < 0.0)
      throw CaseFormatError("schema error at " + path + "/p_max: negative");
    if (!std::isfinite(g.cost))
      throw CaseFormatError("schema error at " + path + "/cost: not finite");
    grid.generators.push_back(g);
  }

  if (grid.slack_bus < 0 || grid.slack_bus >= grid.n_buses())
    throw CaseFormatError("schema error at /slack_bus: out of range");
  return grid;
}

// ---------------------------------------------------------------------------
// Solution / partition / aggregated-model JSON
// ---------------------------------------------------------------------------

inline nlohmann::json solution_to_json(const DcOpfSolution& sol) {
  nlohmann::json j;
  j["z"] = sol.z;
  j["p"] = std::vector<double>(sol.p.begin(), sol.p.end());
  j["f"] = std::vector<double>(sol.f.begin(), sol.f.end());
  j["lambda_slack"] = sol.lambda_slack;
  j["mu"] = std::vector<double>(sol.mu.begin(), sol.mu.end());
  j["congested"] = sol.congested;
  return j;
}

inline nlohmann::json partition_to_json(const PartitionResult& p) {
  nlohmann::json j;
  j["method"] = to_string(p.method);
  j["n_clusters"] = p.n_clusters;
  j["seed"] = p.seed;
  j["clusters"] = p.clusters();
  j["retained_lines"] = p.retained_lines;
  return j;
}

inline PartitionResult partition_from_json(const nlohmann::json& j, const Grid& grid) {
  PartitionResult p;
  const auto method = partition_method_from_string(
      detail::require(j, "method", "").get<std::string>());
  if (!method) throw CaseFormatError("schema error at /method: unknown method");
  p.method = *method;
  p.n_clusters = detail::require_int(j, "n_clusters", "");
  p.seed = detail::require(j, "seed", "").get<std::uint64_t>();
  const auto& clusters = detail::require(j, "clusters", "");
  if (!clusters.is_array() || static_cast<int>(clusters.size()) != p.n_clusters)
    throw CaseFormatError("schema error at /clusters: expected n_clusters arrays");
  p.assignment.assign(grid.n_buses(), -1);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    for (const auto& bus : clusters[c]) {
      const int b = bus.get<int>();
      if (b < 0 || b >= grid.n_buses() || p.assignment[b] != -1)
        throw CaseFormatError("schema error at /clusters/" + std::to_string(c) +
                              ": invalid or duplicate bus");
      p.assignment[b] = static_cast<int>(c);
    }
  }
  for (int b = 0; b < grid.n_buses(); ++b)
    if (p.assignment[b] < 0)
      throw CaseFormatError("schema error at /clusters: bus " + std::to_string(b) + " unassigned");
  p.retained_lines = derive_line_map(grid, p.assignment);
  return p;
}

inline nlohmann::json aggregated_to_json(const Grid& grid, const AggregatedModel& am) {
  nlohmann::json j;
  j["name"] = grid.name + "-agg";
  j["n_clusters"] = am.n_clusters;
  j["method"] = to_string(am.partition.method);
  j["seed"] = am.partition.seed;
  j["buses"] = nlohmann::json::array();
  for (int c = 0; c < am.n_clusters; ++c)
    j["buses"].push_back({{"id", c}, {"demand", am.demand[c]}});
  j["lines"] = nlohmann::json::array();
  for (std::size_t r = 0; r < am.row_lines.size(); ++r)
    j["lines"].push_back({{"id", static_cast<int>(r)},
                          {"limit", am.line_limits[static_cast<Eigen::Index>(r)]},
                          {"source_lines", am.row_lines[r]}});
  j["generators"] = nlohmann::json::array();
  for (std::size_t g = 0; g < am.generator_cluster.size(); ++g)
    j["generators"].push_back({{"id", static_cast<int>(g)}, {"cluster", am.generator_cluster[g]}});
  j["reduced_ptdf"] = nlohmann::json::array();
  for (Eigen::Index r = 0; r < am.reduced_ptdf.rows(); ++r) {
    std::vector<double> row(am.reduced_ptdf.cols());
    for (Eigen::Index c = 0; c < am.reduced_ptdf.cols(); ++c) row[c] = am.reduced_ptdf(r, c);
    j["reduced_ptdf"].push_back(row);
  }
  return j;
}

// ---------------------------------------------------------------------------
// Report CSV
// ---------------------------------------------------------------------------

inline std::string csv_field(const std::string& raw) {
  if (raw.find_first_of(",\"\r\n") == std::string::npos) return raw;
  std::string quoted = "\"";
  for (char c : raw) {
    if (c == '"') quoted += "\"\"";
    else quoted += c;
  }
  quoted += "\"";
  return quoted;
}

/// Report rows per (method, cluster count). Metric fields are left empty
/// for infeasible aggregations.
inline std::string report_to_csv(const std::vector<EvaluationRecord>& records) {
  std::string out = "method,n_clusters,z_full,z_agg,rove,mrllv,gpt_seconds\r\n";
  for (const EvaluationRecord& r : records) {
    out += csv_field(to_string(r.method));
    out += ',';
    out += std::to_string(r.n_clusters);
    out += ',';
    out += format_double(r.z_full);
    out += ',';
    if (r.status == EvaluationStatus::ok) {
      out += format_double(r.z_agg);
      out += ',';
      out += format_double(r.rove);
      out += ',';
      out += format_double(r.mrllv);
    } else {
      out += ",,";
    }
    out += ',';
    out += format_double(r.gpt_seconds);
    out += "\r\n";
  }
  return out;
}

inline nlohmann::json report_to_json(const std::vector<EvaluationRecord>& records) {
  nlohmann::json j = nlohmann::json::array();
  for (const EvaluationRecord& r : records) {
    nlohmann::json row;
    row["method"] = to_string(r.method);
    row["n_clusters"] = r.n_clusters;
    row["status"] = r.status == EvaluationStatus::ok ? "ok" : "agg_infeasible";
    row["z_full"] = r.z_full;
    if (r.status == EvaluationStatus::ok) {
      row["z_agg"] = r.z_agg;
      row["rove"] = r.rove;
      row["mrllv"] = r.mrllv;
      row["violated_lines"] = r.violated_lines;
    }
    row["gpt_seconds"] = r.gpt_seconds;
    j.push_back(row);
  }
  return j;
}

}  // namespace gridagg

#endif  // GRIDAGG_CASE_IO_HPP_
