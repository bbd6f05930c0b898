#include "ucscreen/case_io.hpp"

#include "ucscreen/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

namespace ucscreen {

using nlohmann::json;

std::size_t GridCase::bus_index(int bus) const {
  auto it = std::find(buses.begin(), buses.end(), bus);
  if (it == buses.end()) {
    throw ValidationError("bus " + std::to_string(bus) + " is not declared");
  }
  return static_cast<std::size_t>(it - buses.begin());
}

namespace {

const json& require(const json& obj, const std::string& key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(path + "/" + key, "missing required key");
  return *it;
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ParseError(path, "expected a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ParseError(path, "expected an integer");
  return v.get<int>();
}

const json& as_array(const json& v, const std::string& path) {
  if (!v.is_array()) throw ParseError(path, "expected an array");
  return v;
}

const json& as_object(const json& v, const std::string& path) {
  if (!v.is_object()) throw ParseError(path, "expected an object");
  return v;
}

}  // namespace

GridCase parse_case(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("", std::string("invalid JSON: ") + e.what());
  }
  as_object(doc, "");

  GridCase grid;
  if (auto it = doc.find("name"); it != doc.end() && it->is_string()) {
    grid.name = it->get<std::string>();
  }

  const json& buses = as_array(require(doc, "buses", ""), "/buses");
  for (std::size_t i = 0; i < buses.size(); ++i) {
    grid.buses.push_back(as_int(buses[i], "/buses/" + std::to_string(i)));
  }

  const json& lines = as_array(require(doc, "lines", ""), "/lines");
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string p = "/lines/" + std::to_string(i);
    const json& l = as_object(lines[i], p);
    Line line;
    line.from_bus = as_int(require(l, "from", p), p + "/from");
    line.to_bus = as_int(require(l, "to", p), p + "/to");
    line.susceptance = as_number(require(l, "susceptance", p), p + "/susceptance");
    line.f_min = as_number(require(l, "f_min", p), p + "/f_min");
    line.f_max = as_number(require(l, "f_max", p), p + "/f_max");
    grid.lines.push_back(line);
  }

  const json& gens = as_array(require(doc, "generators", ""), "/generators");
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const std::string p = "/generators/" + std::to_string(i);
    const json& g = as_object(gens[i], p);
    Generator gen;
    gen.bus = as_int(require(g, "bus", p), p + "/bus");
    gen.x_min = as_number(require(g, "x_min", p), p + "/x_min");
    gen.x_max = as_number(require(g, "x_max", p), p + "/x_max");
    gen.cost = as_number(require(g, "cost", p), p + "/cost");
    grid.generators.push_back(gen);
  }

  const json& load = as_array(require(doc, "nominal_load", ""), "/nominal_load");
  grid.nominal_load.resize(static_cast<Eigen::Index>(load.size()));
  for (std::size_t i = 0; i < load.size(); ++i) {
    grid.nominal_load[static_cast<Eigen::Index>(i)] =
        as_number(load[i], "/nominal_load/" + std::to_string(i));
  }

  if (auto it = doc.find("slack_bus"); it != doc.end()) {
    grid.slack_bus = as_int(*it, "/slack_bus");
  } else if (!grid.buses.empty()) {
    grid.slack_bus = *std::min_element(grid.buses.begin(), grid.buses.end());
  }

  validate_case(grid);
  return grid;
}

GridCase load_case(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), "cannot open case file");
  std::stringstream buf;
  buf << in.rdbuf();
  GridCase grid = parse_case(buf.str());
  if (grid.name.empty()) grid.name = path.stem().string();
  return grid;
}

std::string serialize_case(const GridCase& grid) {
  json doc;
  doc["name"] = grid.name;
  doc["buses"] = grid.buses;
  doc["slack_bus"] = grid.slack_bus;
  doc["lines"] = json::array();
  for (const Line& l : grid.lines) {
    doc["lines"].push_back({{"from", l.from_bus},
                            {"to", l.to_bus},
                            {"susceptance", l.susceptance},
                            {"f_min", l.f_min},
                            {"f_max", l.f_max}});
  }
  doc["generators"] = json::array();
  for (const Generator& g : grid.generators) {
    doc["generators"].push_back(
        {{"bus", g.bus}, {"x_min", g.x_min}, {"x_max", g.x_max}, {"cost", g.cost}});
  }
  doc["nominal_load"] =
      std::vector<double>(grid.nominal_load.data(), grid.nominal_load.data() + grid.nominal_load.size());
  return doc.dump(2);
}

void validate_case(const GridCase& grid) {
  if (grid.buses.empty()) throw ValidationError("case declares no buses");
  std::set<int> declared(grid.buses.begin(), grid.buses.end());
  if (declared.size() != grid.buses.size()) throw ValidationError("duplicate bus id");
  if (!declared.count(grid.slack_bus)) {
    throw ValidationError("slack bus " + std::to_string(grid.slack_bus) + " is not declared");
  }

  for (std::size_t i = 0; i < grid.lines.size(); ++i) {
    const Line& l = grid.lines[i];
    const std::string id = "line " + std::to_string(i + 1);
    for (int b : {l.from_bus, l.to_bus}) {
      if (!declared.count(b)) {
        throw ValidationError(id + " references undeclared bus " + std::to_string(b));
      }
    }
    if (l.from_bus == l.to_bus) throw ValidationError(id + " is a self-loop");
    if (!(l.susceptance > 0.0)) throw ValidationError(id + " has non-positive susceptance");
    if (!(l.f_min <= 0.0 && 0.0 <= l.f_max)) {
      throw ValidationError(id + " violates f_min <= 0 <= f_max");
    }
  }

  for (std::size_t i = 0; i < grid.generators.size(); ++i) {
    const Generator& g = grid.generators[i];
    const std::string id = "generator " + std::to_string(i + 1);
    if (!declared.count(g.bus)) {
      throw ValidationError(id + " references undeclared bus " + std::to_string(g.bus));
    }
    if (!(0.0 <= g.x_min)) throw ValidationError(id + " has negative x_min");
    if (!(g.x_min <= g.x_max)) throw ValidationError(id + " has x_min > x_max");
  }

  if (static_cast<std::size_t>(grid.nominal_load.size()) != grid.buses.size()) {
    throw ValidationError("nominal_load has " + std::to_string(grid.nominal_load.size()) +
                          " entries for " + std::to_string(grid.buses.size()) + " buses");
  }
  for (Eigen::Index i = 0; i < grid.nominal_load.size(); ++i) {
    if (!(grid.nominal_load[i] >= 0.0)) {
      throw ValidationError("nominal_load at bus " + std::to_string(grid.buses[i]) + " is negative");
    }
  }

  // Connectivity by union-find over declared lines.
  std::vector<std::size_t> parent(grid.buses.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const Line& l : grid.lines) {
    parent[find(grid.bus_index(l.from_bus))] = find(grid.bus_index(l.to_bus));
  }
  const std::size_t root = find(0);
  for (std::size_t i = 1; i < grid.buses.size(); ++i) {
    if (find(i) != root) {
      throw ValidationError("network is disconnected: bus " + std::to_string(grid.buses[i]) +
                            " is unreachable from bus " + std::to_string(grid.buses[0]));
    }
  }
}

namespace {

// Branch-bus incidence scaled by susceptance: row j has +b at from, -b at to.
Eigen::MatrixXd flow_matrix(const GridCase& grid) {
  Eigen::MatrixXd bf = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(grid.num_lines()),
                                             static_cast<Eigen::Index>(grid.num_buses()));
  for (std::size_t j = 0; j < grid.lines.size(); ++j) {
    const Line& l = grid.lines[j];
    const auto r = static_cast<Eigen::Index>(j);
    bf(r, static_cast<Eigen::Index>(grid.bus_index(l.from_bus))) += l.susceptance;
    bf(r, static_cast<Eigen::Index>(grid.bus_index(l.to_bus))) -= l.susceptance;
  }
  return bf;
}

Eigen::MatrixXd nodal_susceptance(const GridCase& grid) {
  const auto n = static_cast<Eigen::Index>(grid.num_buses());
  Eigen::MatrixXd bbus = Eigen::MatrixXd::Zero(n, n);
  for (const Line& l : grid.lines) {
    const auto f = static_cast<Eigen::Index>(grid.bus_index(l.from_bus));
    const auto t = static_cast<Eigen::Index>(grid.bus_index(l.to_bus));
    bbus(f, f) += l.susceptance;
    bbus(t, t) += l.susceptance;
    bbus(f, t) -= l.susceptance;
    bbus(t, f) -= l.susceptance;
  }
  return bbus;
}

std::vector<Eigen::Index> non_slack(const GridCase& grid) {
  std::vector<Eigen::Index> keep;
  const std::size_t slack = grid.bus_index(grid.slack_bus);
  for (std::size_t i = 0; i < grid.num_buses(); ++i) {
    if (i != slack) keep.push_back(static_cast<Eigen::Index>(i));
  }
  return keep;
}

}  // namespace

PtdfMatrix compute_ptdf(const GridCase& grid) {
  const Eigen::MatrixXd bf = flow_matrix(grid);
  const Eigen::MatrixXd bbus = nodal_susceptance(grid);
  const std::vector<Eigen::Index> keep = non_slack(grid);
  const auto m = static_cast<Eigen::Index>(keep.size());

  PtdfMatrix ptdf;
  ptdf.slack_bus = grid.slack_bus;
  ptdf.entries = Eigen::MatrixXd::Zero(bf.rows(), bf.cols());
  if (m == 0) return ptdf;

  const Eigen::MatrixXd reduced = bbus(keep, keep);
  Eigen::FullPivLU<Eigen::MatrixXd> rank_check(reduced);
  if (rank_check.rank() < m) {
    throw NumericalError("reduced nodal susceptance matrix is singular");
  }
  // PTDF restricted to non-slack columns = Bf_red * Bred^{-1}; one LU, reused.
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(reduced);
  const Eigen::MatrixXd bf_red = bf(Eigen::all, keep);
  const Eigen::MatrixXd sens = lu.solve(bf_red.transpose()).transpose();
  ptdf.entries(Eigen::all, keep) = sens;
  return ptdf;
}

Eigen::MatrixXd generator_incidence(const GridCase& grid) {
  Eigen::MatrixXd inc = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(grid.num_buses()),
                                              static_cast<Eigen::Index>(grid.num_generators()));
  for (std::size_t g = 0; g < grid.generators.size(); ++g) {
    inc(static_cast<Eigen::Index>(grid.bus_index(grid.generators[g].bus)),
        static_cast<Eigen::Index>(g)) = 1.0;
  }
  return inc;
}

Eigen::VectorXd dc_flows(const GridCase& grid, const Eigen::VectorXd& injection) {
  if (injection.size() != static_cast<Eigen::Index>(grid.num_buses())) {
    throw UsageError("injection vector length does not match bus count");
  }
  // Solve the full singular Laplacian with the slack angle pinned through an
  // augmented (bordered) system instead of deleting rows.
  const Eigen::MatrixXd bbus = nodal_susceptance(grid);
  const auto n = bbus.rows();
  const auto slack = static_cast<Eigen::Index>(grid.bus_index(grid.slack_bus));
  Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(n + 1, n + 1);
  aug.topLeftCorner(n, n) = bbus;
  aug(n, slack) = 1.0;
  aug(slack, n) = 1.0;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
  rhs.head(n) = injection;
  const Eigen::VectorXd sol = aug.fullPivLu().solve(rhs);
  return flow_matrix(grid) * sol.head(n);
}

}  // namespace ucscreen
