#include "ucscreen/uc_model.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

namespace ucscreen {

namespace {

constexpr std::array<std::pair<RowKind, std::string_view>, 13> kKindNames{{
    {RowKind::line_upper, "line_upper"},
    {RowKind::line_lower, "line_lower"},
    {RowKind::balance_le, "balance_le"},
    {RowKind::balance_ge, "balance_ge"},
    {RowKind::gen_upper, "gen_upper"},
    {RowKind::gen_lower, "gen_lower"},
    {RowKind::u_upper, "u_upper"},
    {RowKind::u_lower, "u_lower"},
    {RowKind::cost_cut, "cost_cut"},
    {RowKind::commit_fix_le, "commit_fix_le"},
    {RowKind::commit_fix_ge, "commit_fix_ge"},
    {RowKind::load_upper, "load_upper"},
    {RowKind::load_lower, "load_lower"},
}};

bool indexed(RowKind k) {
  return k != RowKind::balance_le && k != RowKind::balance_ge && k != RowKind::cost_cut;
}

// PTDF products carry round-off at the 1e-17 level; treat it as structural zero.
void chop(Eigen::MatrixXd& m) {
  m = m.unaryExpr([](double v) { return std::abs(v) < 1e-12 ? 0.0 : v; });
}

}  // namespace

std::string RowLabel::str() const {
  std::string name;
  for (const auto& [k, n] : kKindNames) {
    if (k == kind) name = n;
  }
  if (!indexed(kind)) return name;
  return name + "(" + std::to_string(index) + ")";
}

RowLabel RowLabel::parse(std::string_view text) {
  const auto open = text.find('(');
  const std::string_view name = text.substr(0, open);
  for (const auto& [k, n] : kKindNames) {
    if (n != name) continue;
    RowLabel label{k, 0};
    if (!indexed(k)) {
      if (open != std::string_view::npos) break;
      return label;
    }
    if (open == std::string_view::npos || text.back() != ')') break;
    const std::string_view digits = text.substr(open + 1, text.size() - open - 2);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), label.index);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || label.index < 1) break;
    return label;
  }
  throw UsageError("unknown row label '" + std::string(text) + "'");
}

std::vector<Eigen::Index> UcInstance::line_rows() const {
  std::vector<Eigen::Index> out;
  for (std::size_t i = 0; i < row_labels.size(); ++i) {
    if (row_labels[i].is_line()) out.push_back(static_cast<Eigen::Index>(i));
  }
  return out;
}

std::optional<Eigen::Index> UcInstance::find_row(const RowLabel& label) const {
  auto it = std::find(row_labels.begin(), row_labels.end(), label);
  if (it == row_labels.end()) return std::nullopt;
  return static_cast<Eigen::Index>(it - row_labels.begin());
}

LpProblem UcInstance::to_lp(const Eigen::VectorXd& objective, Sense sense) const {
  LpProblem p;
  p.objective = objective;
  p.sense = sense;
  p.rows = A;
  p.rhs = b;
  p.lower = Eigen::VectorXd::Constant(num_cols(), -kInf);
  p.upper = Eigen::VectorXd::Constant(num_cols(), kInf);
  return p;
}

void CutSet::validate(std::size_t num_generators, std::size_t num_buses) const {
  std::set<std::size_t> seen;
  for (const auto& [unit, value] : commitment_fixes) {
    if (unit >= num_generators) {
      throw UsageError("commitment fix names unit " + std::to_string(unit + 1) + " of " +
                       std::to_string(num_generators));
    }
    if (value != 0 && value != 1) throw UsageError("commitment fix value must be 0 or 1");
    if (!seen.insert(unit).second) {
      throw UsageError("unit " + std::to_string(unit + 1) + " is fixed twice");
    }
  }
  if (load_range) {
    const auto& [lo, hi] = *load_range;
    if (static_cast<std::size_t>(lo.size()) != num_buses ||
        static_cast<std::size_t>(hi.size()) != num_buses) {
      throw UsageError("load range length does not match bus count");
    }
    if ((lo.array() > hi.array()).any()) throw UsageError("load range has lo > hi");
  }
  if (cost_bound && std::isnan(*cost_bound)) throw UsageError("cost bound is NaN");
}

UcInstance build_uc(const GridCase& grid, const Eigen::VectorXd& load) {
  const std::size_t G = grid.num_generators();
  const std::size_t N = grid.num_buses();
  const std::size_t L = grid.num_lines();
  if (static_cast<std::size_t>(load.size()) != N) {
    throw UsageError("load vector has " + std::to_string(load.size()) + " entries for " +
                     std::to_string(N) + " buses");
  }

  const PtdfMatrix ptdf = compute_ptdf(grid);
  Eigen::MatrixXd ptdf_gen = ptdf.entries * generator_incidence(grid);
  Eigen::MatrixXd ptdf_bus = ptdf.entries;
  chop(ptdf_gen);
  chop(ptdf_bus);

  const auto cols = static_cast<Eigen::Index>(2 * G);
  const auto rows = static_cast<Eigen::Index>(2 * L + 2 + 4 * G);
  const auto nb = static_cast<Eigen::Index>(N);

  UcInstance inst;
  inst.A = Eigen::MatrixXd::Zero(rows, cols);
  inst.base_rhs = Eigen::VectorXd::Zero(rows);
  inst.load_coupling = Eigen::MatrixXd::Zero(rows, nb);
  inst.row_labels.reserve(static_cast<std::size_t>(rows));
  inst.num_buses = N;
  inst.gen_min.resize(static_cast<Eigen::Index>(G));
  inst.gen_max.resize(static_cast<Eigen::Index>(G));
  inst.cost = Eigen::VectorXd::Zero(cols);

  Eigen::Index r = 0;
  auto add = [&](RowLabel label) {
    inst.row_labels.push_back(label);
    return r++;
  };

  // Line limits: f = P (B x - l), f_min <= f <= f_max.
  for (std::size_t j = 0; j < L; ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    const int id = static_cast<int>(j + 1);
    Eigen::Index up = add({RowKind::line_upper, id});
    inst.A.row(up).head(static_cast<Eigen::Index>(G)) = ptdf_gen.row(jj);
    inst.load_coupling.row(up) = -ptdf_bus.row(jj);
    inst.base_rhs[up] = grid.lines[j].f_max;

    Eigen::Index lo = add({RowKind::line_lower, id});
    inst.A.row(lo).head(static_cast<Eigen::Index>(G)) = -ptdf_gen.row(jj);
    inst.load_coupling.row(lo) = ptdf_bus.row(jj);
    inst.base_rhs[lo] = -grid.lines[j].f_min;
  }

  // Power balance sum(x) = sum(l) as a pair of inequalities.
  Eigen::Index le = add({RowKind::balance_le, 0});
  inst.A.row(le).head(static_cast<Eigen::Index>(G)).setOnes();
  inst.load_coupling.row(le).setConstant(-1.0);
  Eigen::Index ge = add({RowKind::balance_ge, 0});
  inst.A.row(ge).head(static_cast<Eigen::Index>(G)).setConstant(-1.0);
  inst.load_coupling.row(ge).setOnes();

  for (std::size_t g = 0; g < G; ++g) {
    const Generator& gen = grid.generators[g];
    const int id = static_cast<int>(g + 1);
    const Eigen::Index xc = inst.dispatch_col(g);
    const Eigen::Index uc = inst.status_col(g);
    inst.gen_min[xc] = gen.x_min;
    inst.gen_max[xc] = gen.x_max;
    inst.cost[xc] = gen.cost;

    Eigen::Index gu = add({RowKind::gen_upper, id});
    inst.A(gu, xc) = 1.0;
    inst.A(gu, uc) = -gen.x_max;
    Eigen::Index gl = add({RowKind::gen_lower, id});
    inst.A(gl, xc) = -1.0;
    inst.A(gl, uc) = gen.x_min;
    Eigen::Index uu = add({RowKind::u_upper, id});
    inst.A(uu, uc) = 1.0;
    inst.base_rhs[uu] = 1.0;
    Eigen::Index ul = add({RowKind::u_lower, id});
    inst.A(ul, uc) = -1.0;
  }

  inst.load = load;
  inst.b = inst.base_rhs - inst.load_coupling * load;
  for (std::size_t g = 0; g < G; ++g) inst.binary_indices.push_back(inst.status_col(g));
  return inst;
}

UcInstance relax_binaries(UcInstance inst) {
  inst.binary_indices.clear();
  return inst;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> load_region(const Eigen::VectorXd& nominal, double beta) {
  if (!(beta >= 0.0)) throw UsageError("beta must be nonnegative");
  return {(1.0 - beta) * nominal, (1.0 + beta) * nominal};
}

namespace {

void append_row(UcInstance& inst, RowLabel label, const Eigen::RowVectorXd& coeffs, double rhs) {
  const Eigen::Index r = inst.num_rows();
  inst.A.conservativeResize(r + 1, Eigen::NoChange);
  inst.A.row(r) = coeffs;
  inst.b.conservativeResize(r + 1);
  inst.b[r] = rhs;
  inst.base_rhs.conservativeResize(r + 1);
  inst.base_rhs[r] = rhs;
  inst.load_coupling.conservativeResize(r + 1, Eigen::NoChange);
  inst.load_coupling.row(r).setZero();
  inst.row_labels.push_back(label);
}

}  // namespace

UcInstance apply_cuts(const UcInstance& inst, const CutSet& cuts) {
  cuts.validate(inst.num_generators(), inst.num_buses);
  UcInstance out = inst;
  if (cuts.empty()) return out;

  if (cuts.load_range) {
    if (out.range_mode()) throw UsageError("instance is already in load-range mode");
    const auto& [lo, hi] = *cuts.load_range;
    const Eigen::Index base_cols = out.num_cols();
    const auto nb = static_cast<Eigen::Index>(out.num_buses);
    Eigen::MatrixXd widened(out.num_rows(), base_cols + nb);
    widened << out.A, out.load_coupling;
    out.A = std::move(widened);
    out.b = out.base_rhs;
    out.cost.conservativeResize(base_cols + nb);
    out.cost.tail(nb).setZero();
    out.load.reset();
    for (std::size_t n = 0; n < out.num_buses; ++n) {
      const auto nn = static_cast<Eigen::Index>(n);
      const int id = static_cast<int>(n + 1);
      Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(out.num_cols());
      row[out.load_col(n)] = 1.0;
      append_row(out, {RowKind::load_upper, id}, row, hi[nn]);
      row[out.load_col(n)] = -1.0;
      append_row(out, {RowKind::load_lower, id}, row, -lo[nn]);
    }
  }

  if (cuts.cost_bound) {
    Eigen::RowVectorXd row = out.cost.transpose();
    append_row(out, {RowKind::cost_cut, 0}, row, *cuts.cost_bound);
  }

  for (const auto& [unit, value] : cuts.commitment_fixes) {
    const int id = static_cast<int>(unit + 1);
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(out.num_cols());
    row[out.status_col(unit)] = 1.0;
    append_row(out, {RowKind::commit_fix_le, id}, row, value);
    row[out.status_col(unit)] = -1.0;
    append_row(out, {RowKind::commit_fix_ge, id}, row, -value);
  }
  return out;
}

namespace {

std::string infeasibility_reason(const UcInstance& inst) {
  std::ostringstream os;
  const double demand = inst.load->sum();
  const double capacity = inst.gen_max.sum();
  if (demand > capacity + kFeasTol) {
    os << "capacity: demand " << demand << " MW exceeds total capacity " << capacity << " MW";
    return os.str();
  }
  // Same instance without any line rows tells capacity apart from network.
  std::vector<RowLabel> lines;
  for (const RowLabel& l : inst.row_labels) {
    if (l.is_line()) lines.push_back(l);
  }
  const UcInstance copper = remove_rows(inst, lines);
  MilpProblem mp{copper.to_lp(copper.cost, Sense::minimize), copper.binary_indices};
  for (Eigen::Index bcol : copper.binary_indices) {
    mp.lp.lower[bcol] = 0.0;
    mp.lp.upper[bcol] = 1.0;
  }
  if (solve_milp(mp).status == LpStatus::optimal) {
    os << "network: line limits make demand " << demand << " MW undeliverable";
  } else {
    os << "capacity: no commitment meets demand " << demand
       << " MW within unit limits and commitment cuts";
  }
  return os.str();
}

}  // namespace

UcSolution solve_uc(const UcInstance& inst) {
  if (inst.range_mode()) throw UsageError("solve_uc needs a fixed-load instance");
  MilpProblem mp{inst.to_lp(inst.cost, Sense::minimize), inst.binary_indices};
  for (Eigen::Index bcol : inst.binary_indices) {
    mp.lp.lower[bcol] = 0.0;
    mp.lp.upper[bcol] = 1.0;
  }
  const LpSolution sol = solve_milp(mp);
  if (sol.status == LpStatus::infeasible) throw InfeasibleUc(infeasibility_reason(inst));
  if (sol.status != LpStatus::optimal) throw NumericalError("UC relaxation is unbounded");

  UcSolution out;
  const auto G = static_cast<Eigen::Index>(inst.num_generators());
  out.dispatch = sol.point.head(G);
  out.commitment = sol.point.segment(G, G);
  for (Eigen::Index g = 0; g < G; ++g) out.commitment[g] = std::round(out.commitment[g]);
  out.cost = inst.cost.head(G).dot(out.dispatch);
  return out;
}

UcInstance remove_rows(const UcInstance& inst, const std::vector<RowLabel>& labels) {
  std::set<RowLabel> drop;
  for (const RowLabel& l : labels) {
    if (!inst.find_row(l)) throw UsageError("row " + l.str() + " is not in the instance");
    drop.insert(l);
  }
  std::vector<Eigen::Index> keep;
  for (std::size_t i = 0; i < inst.row_labels.size(); ++i) {
    if (!drop.count(inst.row_labels[i])) keep.push_back(static_cast<Eigen::Index>(i));
  }
  UcInstance out = inst;
  out.A = inst.A(keep, Eigen::all);
  out.b = inst.b(keep);
  out.base_rhs = inst.base_rhs(keep);
  out.load_coupling = inst.load_coupling(keep, Eigen::all);
  out.row_labels.clear();
  for (Eigen::Index i : keep) out.row_labels.push_back(inst.row_labels[static_cast<std::size_t>(i)]);
  return out;
}

}  // namespace ucscreen
