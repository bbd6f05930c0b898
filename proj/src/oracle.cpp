#include "ucscreen/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace ucscreen::oracle {

bool lp_redundancy(const UcInstance& inst, Eigen::Index row) {
  if (row < 0 || row >= inst.num_rows()) throw UsageError("row index out of range");
  if (!inst.row_labels[static_cast<std::size_t>(row)].is_line()) {
    throw UsageError("oracle classifies line rows only");
  }
  const Eigen::Index m = inst.num_rows();
  const Eigen::Index n = inst.num_cols();
  LpProblem lp;
  lp.objective = inst.A.row(row).transpose();
  lp.sense = Sense::maximize;
  lp.rows.resize(m - 1, n);
  lp.rhs.resize(m - 1);
  Eigen::Index out = 0;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (i == row) continue;
    lp.rows.row(out) = inst.A.row(i);
    lp.rhs[out] = inst.b[i];
    ++out;
  }
  lp.lower = Eigen::VectorXd::Constant(n, -kInf);
  lp.upper = Eigen::VectorXd::Constant(n, kInf);
  const LpSolution s = solve_lp(lp);
  if (s.status != LpStatus::optimal) return false;
  return s.objective_value <= inst.b[row] - kFeasTol;
}

std::vector<Eigen::VectorXd> enumerate_vertices(const BoundsBox& box) {
  const Eigen::Index cols = box.size();
  if (cols > kMaxVertexColumns) {
    throw ResourceError("vertex enumeration over " + std::to_string(cols) +
                        " columns exceeds the limit of " + std::to_string(kMaxVertexColumns));
  }
  const std::size_t count = std::size_t{1} << cols;
  std::vector<Eigen::VectorXd> vertices;
  vertices.reserve(count);
  for (std::size_t q = 0; q < count; ++q) {
    Eigen::VectorXd v(cols);
    for (Eigen::Index p = 0; p < cols; ++p) {
      v[p] = (q >> p) & 1U ? box.upper[p] : box.lower[p];
    }
    vertices.push_back(std::move(v));
  }
  return vertices;
}

double vertex_max(const UcInstance& inst, const BoundsBox& box, Eigen::Index row) {
  double best = -kInf;
  for (const Eigen::VectorXd& v : enumerate_vertices(box)) {
    best = std::max(best, inst.A.row(row).dot(v) - inst.b[row]);
  }
  return best;
}

bool vertex_check(const UcInstance& inst, const BoundsBox& box, Eigen::Index row) {
  for (const Eigen::VectorXd& v : enumerate_vertices(box)) {
    if (!(inst.A.row(row).dot(v) < inst.b[row] - kFeasTol)) return false;
  }
  return true;
}

ExactnessSample box_exactness(const UcInstance& inst, const BoundsBox& box, Eigen::Index row,
                              std::uint64_t seed) {
  std::vector<Eigen::Index> support;
  for (Eigen::Index p = 0; p < inst.num_cols(); ++p) {
    if (inst.A(row, p) != 0.0) support.push_back(p);
  }
  ExactnessSample out;
  BoundsBox sub = box;
  std::vector<bool> free(static_cast<std::size_t>(box.size()), false);
  if (static_cast<Eigen::Index>(support.size()) > kMaxVertexColumns) {
    out.projected = true;
    std::mt19937_64 rng(seed);
    std::shuffle(support.begin(), support.end(), rng);
    for (std::size_t i = static_cast<std::size_t>(kMaxVertexColumns); i < support.size(); ++i) {
      const Eigen::Index p = support[i];
      const double v = rng() & 1U ? box.upper[p] : box.lower[p];
      sub.lower[p] = sub.upper[p] = v;
    }
    support.resize(static_cast<std::size_t>(kMaxVertexColumns));
  }
  for (Eigen::Index p : support) free[static_cast<std::size_t>(p)] = true;
  for (Eigen::Index p = 0; p < box.size(); ++p) {
    if (!free[static_cast<std::size_t>(p)] && sub.lower[p] != sub.upper[p]) {
      sub.upper[p] = sub.lower[p];
    }
  }
  out.formula = box_slack(inst, sub)[row];

  // Enumerate only the free columns; pinned ones are constant. Each corner's
  // value is the pinned part plus one partial sum from each half of the free
  // columns, so all 2^k corners are visited without building them.
  double pinned = -inst.b[row];
  for (Eigen::Index p = 0; p < box.size(); ++p) {
    if (!free[static_cast<std::size_t>(p)]) pinned += inst.A(row, p) * sub.lower[p];
  }
  const std::size_t k = support.size();
  const std::size_t half = k / 2;
  auto partial_sums = [&](std::size_t first, std::size_t count) {
    std::vector<double> sums(std::size_t{1} << count, 0.0);
    for (std::size_t q = 0; q < sums.size(); ++q) {
      for (std::size_t i = 0; i < count; ++i) {
        const Eigen::Index p = support[first + i];
        sums[q] += inst.A(row, p) * ((q >> i) & 1U ? sub.upper[p] : sub.lower[p]);
      }
    }
    return sums;
  };
  const std::vector<double> low = partial_sums(0, half);
  const std::vector<double> high = partial_sums(half, k - half);
  double best = -kInf;
  for (double h : high) {
    for (double l : low) best = std::max(best, pinned + l + h);
  }
  out.enumerated = best;
  return out;
}

GapReport verify_zero_gap(const UcInstance& full, const UcInstance& reduced) {
  GapReport report;
  UcSolution a, b;
  try {
    a = solve_uc(full);
    report.full_status = LpStatus::optimal;
  } catch (const InfeasibleUc&) {
    report.full_status = LpStatus::infeasible;
  }
  try {
    b = solve_uc(reduced);
    report.reduced_status = LpStatus::optimal;
  } catch (const InfeasibleUc&) {
    report.reduced_status = LpStatus::infeasible;
  }
  if (!report.solved()) return report;
  report.full_cost = a.cost;
  report.reduced_cost = b.cost;
  report.gap = std::abs(a.cost - b.cost) / std::max(std::abs(a.cost), 1.0);
  report.commitment_match = a.commitment == b.commitment;
  return report;
}

}  // namespace ucscreen::oracle
