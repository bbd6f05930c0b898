#ifndef UCSCREEN_UC_MODEL_HPP
#define UCSCREEN_UC_MODEL_HPP

#include "ucscreen/case_io.hpp"
#include "ucscreen/lp.hpp"

#include <Eigen/Dense>

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ucscreen {

enum class RowKind {
  line_upper,
  line_lower,
  balance_le,
  balance_ge,
  gen_upper,
  gen_lower,
  u_upper,
  u_lower,
  cost_cut,
  commit_fix_le,
  commit_fix_ge,
  load_upper,
  load_lower,
};

/// Tag identifying one row of a UcInstance. `index` is the 1-based line,
/// generator or bus position the row belongs to, and 0 for the balance and
/// cost rows.
struct RowLabel {
  RowKind kind = RowKind::line_upper;
  int index = 0;

  bool is_line() const { return kind == RowKind::line_upper || kind == RowKind::line_lower; }
  std::string str() const;
  /// Inverse of str(); throws UsageError on unknown text.
  static RowLabel parse(std::string_view text);

  auto operator<=>(const RowLabel&) const = default;
};

/**
 * @brief Single-period UC in compact inequality form A y <= b.
 *
 * Columns are y = [x (dispatch, per generator), u (status, per generator)]
 * followed, in load-range mode only, by l (load, per bus). Every row keeps
 * its load coefficients in `load_coupling` and its load-free right-hand side
 * in `base_rhs`; in fixed-load mode `b = base_rhs - load_coupling * load`.
 */
struct UcInstance {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd cost;
  std::vector<RowLabel> row_labels;
  std::optional<Eigen::VectorXd> load;
  std::vector<Eigen::Index> binary_indices;

  Eigen::MatrixXd load_coupling;
  Eigen::VectorXd base_rhs;

  Eigen::VectorXd gen_min;
  Eigen::VectorXd gen_max;
  std::size_t num_buses = 0;

  Eigen::Index num_rows() const { return A.rows(); }
  Eigen::Index num_cols() const { return A.cols(); }
  std::size_t num_generators() const { return static_cast<std::size_t>(gen_max.size()); }
  bool range_mode() const { return !load.has_value(); }

  Eigen::Index dispatch_col(std::size_t g) const { return static_cast<Eigen::Index>(g); }
  Eigen::Index status_col(std::size_t g) const {
    return static_cast<Eigen::Index>(num_generators() + g);
  }
  Eigen::Index load_col(std::size_t n) const {
    return static_cast<Eigen::Index>(2 * num_generators() + n);
  }

  /// Row positions of line_upper/line_lower rows, ascending.
  std::vector<Eigen::Index> line_rows() const;
  std::optional<Eigen::Index> find_row(const RowLabel& label) const;

  /// LP over the instance rows with all columns free and the given objective.
  LpProblem to_lp(const Eigen::VectorXd& objective, Sense sense) const;
};

struct UcSolution {
  Eigen::VectorXd commitment;
  Eigen::VectorXd dispatch;
  double cost = 0.0;
};

/// Cutting planes composed onto a UcInstance.
struct CutSet {
  std::optional<double> cost_bound;
  /// (0-based unit index, fixed status in {0, 1})
  std::vector<std::pair<std::size_t, int>> commitment_fixes;
  std::optional<std::pair<Eigen::VectorXd, Eigen::VectorXd>> load_range;

  bool empty() const { return !cost_bound && commitment_fixes.empty() && !load_range; }
  void validate(std::size_t num_generators, std::size_t num_buses) const;
};

UcInstance build_uc(const GridCase& grid, const Eigen::VectorXd& load);

/// Drops binary restrictions; rows are untouched.
UcInstance relax_binaries(UcInstance inst);

UcInstance apply_cuts(const UcInstance& inst, const CutSet& cuts);

/// Load box (1 - beta) * nominal <= l <= (1 + beta) * nominal.
std::pair<Eigen::VectorXd, Eigen::VectorXd> load_region(const Eigen::VectorXd& nominal, double beta);

/// Solves the instance as a MILP over its status columns. Throws InfeasibleUc
/// with a capacity/network diagnosis when no commitment is feasible.
UcSolution solve_uc(const UcInstance& inst);

/// Removes the rows with the given labels; every label must exist.
UcInstance remove_rows(const UcInstance& inst, const std::vector<RowLabel>& labels);

}  // namespace ucscreen

#endif
