#include "ucscreen/lp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ucscreen {

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
  }
  return "unknown";
}

void LpProblem::validate() const {
  const Eigen::Index n = objective.size();
  if (rows.cols() != n && rows.rows() > 0) {
    throw UsageError("LP rows have " + std::to_string(rows.cols()) + " columns, expected " +
                     std::to_string(n));
  }
  if (rhs.size() != rows.rows()) throw UsageError("LP rhs length does not match row count");
  if (lower.size() != n || upper.size() != n) {
    throw UsageError("LP bound vectors do not match variable count");
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] > upper[j]) {
      throw UsageError("LP variable " + std::to_string(j) + " has lower > upper");
    }
  }
}

LpProblem LpProblem::free(Eigen::Index n) {
  LpProblem p;
  p.objective = Eigen::VectorXd::Zero(n);
  p.rows.resize(0, n);
  p.rhs.resize(0);
  p.lower = Eigen::VectorXd::Constant(n, -kInf);
  p.upper = Eigen::VectorXd::Constant(n, kInf);
  return p;
}

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kPivotTol = 1e-9;
constexpr int kStallThreshold = 50;

// Bounded-variable primal simplex on a dense tableau.
//
// Column layout: [structural (n) | slack (m) | artificial (k)]. Row i reads
// rows_i . y + s_i - t_i = rhs_i with s, t >= 0; an artificial exists only
// for rows whose initial slack would be negative.
class Simplex {
public:
  explicit Simplex(const LpProblem& p) : p_(p) {
    n_ = p.num_vars();
    m_ = p.num_rows();
    build();
  }

  LpSolution run() {
    LpSolution out;
    // Phase 1: drive artificials to zero.
    if (num_art_ > 0) {
      Eigen::VectorXd cost = Eigen::VectorXd::Zero(cols_);
      cost.tail(num_art_).setOnes();
      const auto st = iterate(cost, out.iterations);
      (void)st;  // phase 1 objective is bounded below by 0
      refresh_basic_values();
      double infeas = 0.0;
      for (Eigen::Index j = n_ + m_; j < cols_; ++j) infeas += value(j);
      const double scale = std::max(1.0, p_.rhs.cwiseAbs().maxCoeff());
      if (infeas > kFeasTol * scale) {
        out.status = LpStatus::infeasible;
        return out;
      }
      for (Eigen::Index j = n_ + m_; j < cols_; ++j) upper_[j] = 0.0;
    }

    Eigen::VectorXd cost = Eigen::VectorXd::Zero(cols_);
    cost.head(n_) = p_.sense == Sense::maximize ? Eigen::VectorXd(-p_.objective) : p_.objective;
    const auto st = iterate(cost, out.iterations);
    refresh_basic_values();
    if (st == LpStatus::unbounded) {
      out.status = LpStatus::unbounded;
      return out;
    }

    out.status = LpStatus::optimal;
    out.point.resize(n_);
    for (Eigen::Index j = 0; j < n_; ++j) out.point[j] = value(j);
    out.objective_value = p_.objective.dot(out.point);
    // Slack columns of the tableau hold B^{-1}; duals follow from c_B.
    Eigen::VectorXd cb(m_);
    for (Eigen::Index i = 0; i < m_; ++i) cb[i] = cost[basis_[i]];
    const Eigen::VectorXd pi = tab_.middleCols(n_, m_).transpose() * cb;
    out.row_duals = -pi;
    out.reduced_costs = cost.head(n_) - p_.rows.transpose() * pi;
    return out;
  }

private:
  void build() {
    // Nonbasic structurals start at a finite bound, or 0 if free.
    lower_ = Eigen::VectorXd::Zero(n_ + 2 * m_);
    upper_ = Eigen::VectorXd::Constant(n_ + 2 * m_, kInf);
    lower_.head(n_) = p_.lower;
    upper_.head(n_) = p_.upper;
    x_ = Eigen::VectorXd::Zero(n_ + 2 * m_);
    for (Eigen::Index j = 0; j < n_; ++j) {
      if (std::isfinite(p_.lower[j])) x_[j] = p_.lower[j];
      else if (std::isfinite(p_.upper[j])) x_[j] = p_.upper[j];
      else x_[j] = 0.0;
    }
    Eigen::VectorXd resid = p_.rhs;
    if (m_ > 0 && n_ > 0) resid -= p_.rows * x_.head(n_);

    std::vector<Eigen::Index> art_rows;
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (resid[i] < 0.0) art_rows.push_back(i);
    }
    num_art_ = static_cast<Eigen::Index>(art_rows.size());
    cols_ = n_ + m_ + num_art_;
    lower_.conservativeResize(cols_);
    upper_.conservativeResize(cols_);
    x_.conservativeResize(cols_);

    tab_ = RowMatrix::Zero(m_, cols_);
    if (n_ > 0) tab_.leftCols(n_) = p_.rows;
    tab_.middleCols(n_, m_).setIdentity();
    basis_.assign(static_cast<std::size_t>(m_), 0);
    is_basic_.assign(static_cast<std::size_t>(cols_), false);
    for (Eigen::Index i = 0; i < m_; ++i) basis_[i] = n_ + i;

    for (Eigen::Index a = 0; a < num_art_; ++a) {
      const Eigen::Index i = art_rows[a];
      const Eigen::Index col = n_ + m_ + a;
      tab_(i, col) = -1.0;
      // Artificial replaces the slack in the basis: negate the row so the
      // artificial's column becomes +e_i.
      tab_.row(i) *= -1.0;
      basis_[i] = col;
    }
    for (Eigen::Index i = 0; i < m_; ++i) is_basic_[basis_[i]] = true;
    xb_.resize(m_);
    for (Eigen::Index i = 0; i < m_; ++i) xb_[i] = std::abs(resid[i]);
    for (Eigen::Index j = n_; j < cols_; ++j) {
      if (!is_basic_[j]) x_[j] = 0.0;
    }
  }

  double value(Eigen::Index j) const {
    if (is_basic_[j]) {
      for (Eigen::Index i = 0; i < m_; ++i) {
        if (basis_[i] == j) return xb_[i];
      }
    }
    return x_[j];
  }

  // x_B = B^{-1} (rhs - N x_N), using the slack block of the tableau as B^{-1}.
  void refresh_basic_values() {
    if (m_ == 0) return;
    Eigen::VectorXd r = p_.rhs;
    for (Eigen::Index j = 0; j < n_; ++j) {
      if (!is_basic_[j] && x_[j] != 0.0) r -= p_.rows.col(j) * x_[j];
    }
    // Nonbasic slacks and artificials rest at zero.
    xb_ = tab_.middleCols(n_, m_) * r;
  }

  LpStatus iterate(const Eigen::VectorXd& cost, std::int64_t& iterations) {
    Eigen::VectorXd cb(m_);
    for (Eigen::Index i = 0; i < m_; ++i) cb[i] = cost[basis_[i]];
    Eigen::VectorXd d = cost - tab_.transpose() * cb;

    const std::int64_t limit = 50 * (m_ + cols_) + 1000;
    int degenerate_run = 0;
    bool bland = false;

    for (std::int64_t it = 0;; ++it) {
      if (it > limit) throw NumericalError("simplex iteration limit exceeded");

      // Pricing.
      Eigen::Index q = -1;
      int dir = 0;
      double best = 0.0;
      for (Eigen::Index j = 0; j < cols_; ++j) {
        if (is_basic_[j] || lower_[j] == upper_[j]) continue;
        const bool can_up = x_[j] < upper_[j];
        const bool can_down = x_[j] > lower_[j];
        int cand = 0;
        if (d[j] < -kOptTol && can_up) cand = 1;
        else if (d[j] > kOptTol && can_down) cand = -1;
        if (cand == 0) continue;
        if (bland) {
          q = j;
          dir = cand;
          break;
        }
        if (std::abs(d[j]) > best) {
          best = std::abs(d[j]);
          q = j;
          dir = cand;
        }
      }
      if (q < 0) return LpStatus::optimal;
      ++iterations;

      // Ratio test.
      double theta = kInf;
      Eigen::Index leave = -1;
      double leave_alpha = 0.0;
      bool leave_to_upper = false;
      if (std::isfinite(lower_[q]) && std::isfinite(upper_[q])) theta = upper_[q] - lower_[q];
      for (Eigen::Index i = 0; i < m_; ++i) {
        const double alpha = tab_(i, q);
        if (std::abs(alpha) <= kPivotTol) continue;
        const double rate = -dir * alpha;  // d x_B[i] / d theta
        const Eigen::Index b = basis_[i];
        double lim;
        bool to_upper;
        if (rate < 0.0) {
          if (!std::isfinite(lower_[b])) continue;
          lim = (xb_[i] - lower_[b]) / -rate;
          to_upper = false;
        } else {
          if (!std::isfinite(upper_[b])) continue;
          lim = (upper_[b] - xb_[i]) / rate;
          to_upper = true;
        }
        lim = std::max(lim, 0.0);
        bool take = false;
        if (lim < theta - 1e-12 || (leave < 0 && lim < theta)) {
          take = true;
        } else if (leave >= 0 && lim <= theta + 1e-12) {
          take = bland ? b < basis_[leave] : std::abs(alpha) > std::abs(leave_alpha);
        }
        if (take) {
          theta = lim;
          leave = i;
          leave_alpha = alpha;
          leave_to_upper = to_upper;
        }
      }
      if (!std::isfinite(theta)) return LpStatus::unbounded;

      if (theta < 1e-12) {
        if (++degenerate_run > kStallThreshold) bland = true;
      } else {
        degenerate_run = 0;
      }

      // Move basics along the edge.
      for (Eigen::Index i = 0; i < m_; ++i) xb_[i] += -dir * tab_(i, q) * theta;

      if (leave < 0) {
        // Bound flip: entering variable reaches its opposite bound.
        x_[q] = dir > 0 ? upper_[q] : lower_[q];
        continue;
      }

      const Eigen::Index out = basis_[leave];
      x_[out] = leave_to_upper ? upper_[out] : lower_[out];
      const double entering_value = x_[q] + dir * theta;

      pivot(leave, q, d);
      is_basic_[out] = false;
      is_basic_[q] = true;
      basis_[leave] = q;
      xb_[leave] = entering_value;
    }
  }

  void pivot(Eigen::Index r, Eigen::Index q, Eigen::VectorXd& d) {
    tab_.row(r) /= tab_(r, q);
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (i == r) continue;
      const double f = tab_(i, q);
      if (f != 0.0) tab_.row(i) -= f * tab_.row(r);
    }
    const double dq = d[q];
    if (dq != 0.0) d -= dq * tab_.row(r).transpose();
    d[q] = 0.0;
  }

  const LpProblem& p_;
  Eigen::Index n_ = 0, m_ = 0, num_art_ = 0, cols_ = 0;
  RowMatrix tab_;
  Eigen::VectorXd lower_, upper_, x_, xb_;
  std::vector<Eigen::Index> basis_;
  std::vector<bool> is_basic_;
};

}  // namespace

LpSolution solve_lp(const LpProblem& problem) {
  problem.validate();
  return Simplex(problem).run();
}

double dual_bound(const LpProblem& problem, const LpSolution& solution) {
  if (solution.status != LpStatus::optimal) {
    throw UsageError("dual bound requires an optimal solution");
  }
  // min c'y s.t. Ay <= b: g(lambda) = -b.lambda + sum_j min_{lo<=y<=hi} d_j y_j.
  double value = -problem.rhs.dot(solution.row_duals);
  for (Eigen::Index j = 0; j < problem.num_vars(); ++j) {
    const double dj = solution.reduced_costs[j];
    if (std::abs(dj) <= kOptTol) continue;
    const double bound = dj > 0.0 ? problem.lower[j] : problem.upper[j];
    if (!std::isfinite(bound)) return problem.sense == Sense::minimize ? -kInf : kInf;
    value += dj * bound;
  }
  return problem.sense == Sense::minimize ? value : -value;
}

}  // namespace ucscreen
