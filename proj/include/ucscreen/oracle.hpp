#ifndef UCSCREEN_ORACLE_HPP
#define UCSCREEN_ORACLE_HPP

#include "ucscreen/screening.hpp"
#include "ucscreen/uc_model.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace ucscreen::oracle {

/// Brute-force ground truth, kept apart from the screening engines.

inline constexpr Eigen::Index kMaxVertexColumns = 20;

/// True iff max A_j y over the instance without row j is <= b_j - tau.
/// Unbounded maximization counts as not redundant.
bool lp_redundancy(const UcInstance& inst, Eigen::Index row);

/// All 2^cols corners; bit p of the vertex ordinal selects upper_p.
/// Throws ResourceError above kMaxVertexColumns columns.
std::vector<Eigen::VectorXd> enumerate_vertices(const BoundsBox& box);

/// max over enumerated corners of A_j v - b_j.
double vertex_max(const UcInstance& inst, const BoundsBox& box, Eigen::Index row);

/// True iff every corner satisfies A_j v < b_j - tau.
bool vertex_check(const UcInstance& inst, const BoundsBox& box, Eigen::Index row);

struct ExactnessSample {
  double formula = 0.0;     // box_slack on the (possibly projected) box
  double enumerated = 0.0;  // explicit corner maximum on the same box
  bool projected = false;
};

/// Compares the matrix formula with explicit corner enumeration for one row.
/// Columns with a zero coefficient in the row are pinned at their lower
/// bound, which leaves the row's box maximum unchanged. If the row still
/// touches more than kMaxVertexColumns columns, a random subset of that
/// size stays free and the rest are pinned at a random corner.
ExactnessSample box_exactness(const UcInstance& inst, const BoundsBox& box, Eigen::Index row,
                              std::uint64_t seed);

struct GapReport {
  LpStatus full_status = LpStatus::infeasible;
  LpStatus reduced_status = LpStatus::infeasible;
  double full_cost = 0.0;
  double reduced_cost = 0.0;
  double gap = 0.0;
  bool commitment_match = false;

  bool solved() const {
    return full_status == LpStatus::optimal && reduced_status == LpStatus::optimal;
  }
};

/// Solves both MILPs and reports |C_full - C_red| / max(|C_full|, 1).
GapReport verify_zero_gap(const UcInstance& full, const UcInstance& reduced);

}  // namespace ucscreen::oracle

#endif
