#ifndef UCSCREEN_LP_HPP
#define UCSCREEN_LP_HPP

#include "ucscreen/errors.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <vector>

namespace ucscreen {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Primal feasibility tolerance, also the strict-inequality margin used by
/// every screening comparison.
inline constexpr double kFeasTol = 1e-7;
/// Reduced-cost (optimality) tolerance.
inline constexpr double kOptTol = 1e-9;
/// Distance from {0,1} under which a binary is considered integral.
inline constexpr double kIntTol = 1e-6;

enum class Sense { minimize, maximize };
enum class LpStatus { optimal, infeasible, unbounded };

const char* to_string(LpStatus status);

/**
 * @brief Dense LP: optimize objective . y subject to rows * y <= rhs and
 * lower <= y <= upper (entries may be infinite).
 */
struct LpProblem {
  Eigen::VectorXd objective;
  Sense sense = Sense::minimize;
  Eigen::MatrixXd rows;
  Eigen::VectorXd rhs;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  Eigen::Index num_vars() const { return objective.size(); }
  Eigen::Index num_rows() const { return rows.rows(); }

  /// Throws UsageError on inconsistent dimensions or lower > upper.
  void validate() const;

  /// A problem over `n` free variables with no rows and zero objective.
  static LpProblem free(Eigen::Index n);
};

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  double objective_value = 0.0;
  Eigen::VectorXd point;
  /// Nonnegative multipliers of `rows` for the minimization form of the
  /// problem (objective negated when maximizing).
  Eigen::VectorXd row_duals;
  /// objective' - rows^T * (-row_duals), minimization form.
  Eigen::VectorXd reduced_costs;
  std::int64_t iterations = 0;
};

LpSolution solve_lp(const LpProblem& problem);

/// Lagrangian dual value of the final basis, reported in the problem's own
/// sense. Equals the optimum for an optimal basis; -inf/+inf when a nonzero
/// reduced cost sits on an infinite bound.
double dual_bound(const LpProblem& problem, const LpSolution& solution);

struct MilpProblem {
  LpProblem lp;
  std::vector<Eigen::Index> binaries;
  std::int64_t node_limit = 200000;

  void validate() const;
};

inline constexpr std::size_t kMaxBinaries = 60;

/// Thrown when branch-and-bound exhausts its node budget.
class MilpNodeLimit : public ResourceError {
public:
  MilpNodeLimit(bool has_incumbent, double incumbent, double bound)
      : ResourceError("branch-and-bound node limit exceeded"),
        has_incumbent(has_incumbent), incumbent(incumbent), bound(bound) {}
  bool has_incumbent;
  double incumbent;
  double bound;
};

/// Best-first branch-and-bound on LP relaxations. Branches on the lowest
/// fractional binary, down-branch first.
LpSolution solve_milp(const MilpProblem& problem);

}  // namespace ucscreen

#endif
