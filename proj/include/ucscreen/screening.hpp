#ifndef UCSCREEN_SCREENING_HPP
#define UCSCREEN_SCREENING_HPP

#include "ucscreen/uc_model.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace ucscreen {

enum class Provenance { lp_solved, load_box, fixed_by_cut };

/// Axis-aligned outer approximation lower <= y <= upper of a relaxed
/// instance's feasible region, one pair per column.
struct BoundsBox {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  std::vector<Provenance> provenance;

  Eigen::Index size() const { return lower.size(); }
};

enum class Engine { vgs, lfgs };

const char* to_string(Engine engine);

struct PhaseTimes {
  double bounds = 0.0;
  double vgs = 0.0;
  double lfgs = 0.0;
  bool operator==(const PhaseTimes&) const = default;
};

/**
 * @brief Outcome of one screening pass over the line rows of an instance.
 *
 * Partial reports (a single engine) may leave rows in `undecided`; the
 * ensemble always finishes with redundant and kept partitioning the
 * candidate set.
 */
struct ScreeningReport {
  std::vector<RowLabel> redundant;
  std::vector<RowLabel> kept;
  std::vector<RowLabel> undecided;
  std::map<RowLabel, Engine> attribution;
  /// Box-maximum slack per candidate row; empty when VGS did not run.
  std::map<RowLabel, double> omega;
  std::int64_t bound_lp_count = 0;
  std::int64_t lfgs_lp_count = 0;
  std::int64_t matrix_op_count = 0;
  PhaseTimes wall_time;
  std::vector<std::string> diagnostics;

  std::int64_t lp_count() const { return bound_lp_count + lfgs_lp_count; }
  /// Number of rows removed by the vertex-guided pass.
  std::size_t n_v() const;
};

struct ScreeningOptions {
  bool run_vgs = true;
  bool run_lfgs = true;
  int jobs = 1;
};

/// Two LPs (max and min) per dispatch/status column over A y <= b. Load
/// columns take the load box; statuses pinned by commitment cuts take the
/// pinned value. Throws ScreeningInfeasible if the relaxed region is empty.
BoundsBox variable_bounds(const UcInstance& inst, int jobs = 1, std::int64_t* lp_count = nullptr);

/// omega_j = sum_p [a_jp > 0] a_jp (upper_p - lower_p) + A_j lower - b_j for
/// every row of the instance, in one matrix pass.
Eigen::VectorXd box_slack(const UcInstance& inst, const BoundsBox& box);

ScreeningReport vgs_screen(const UcInstance& inst, const BoundsBox& box,
                           std::span<const Eigen::Index> candidates);

ScreeningReport lfgs_screen(const UcInstance& inst, std::span<const Eigen::Index> candidates,
                            int jobs = 1);

/// Bounds, vertex-guided pass, then line-flow pass on what is left.
/// run_lfgs = false gives VGS alone; run_vgs = false gives LFGS alone.
ScreeningReport eovl(const UcInstance& inst, const ScreeningOptions& options = {});

/// Deletes the given line rows. Throws UsageError for non-line labels.
UcInstance reduce_model(const UcInstance& full, const std::vector<RowLabel>& redundant);

}  // namespace ucscreen

#endif
