#ifndef UCSCREEN_TESTS_SUPPORT_HPP
#define UCSCREEN_TESTS_SUPPORT_HPP

#include "ucscreen/case_io.hpp"
#include "ucscreen/uc_model.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

namespace testing {

inline const std::vector<std::string>& desk_cases() {
  static const std::vector<std::string> names{"five", "nine_ring", "fourteen_mesh", "thirty", "rand50"};
  return names;
}

inline std::filesystem::path case_path(const std::string& name) {
  return std::filesystem::path(UCSCREEN_CASES_DIR) / (name + ".json");
}

inline ucscreen::GridCase load(const std::string& name) {
  return ucscreen::load_case(case_path(name));
}

inline std::set<std::string> label_set(const std::vector<ucscreen::RowLabel>& labels) {
  std::set<std::string> out;
  for (const auto& l : labels) out.insert(l.str());
  return out;
}

inline std::set<std::string> label_set(const std::vector<std::string>& labels) {
  return {labels.begin(), labels.end()};
}

template <typename Set>
bool subset(const Set& a, const Set& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

/// Relaxed instance with both units of the five-bus case committed.
inline ucscreen::UcInstance five_committed() {
  const ucscreen::GridCase grid = load("five");
  ucscreen::CutSet cuts;
  cuts.commitment_fixes = {{0, 1}, {1, 1}};
  return ucscreen::relax_binaries(ucscreen::apply_cuts(ucscreen::build_uc(grid, grid.nominal_load), cuts));
}

/// Hand-made instance over `a.cols()` free columns whose rows are all
/// labelled as line upper limits 1..m.
inline ucscreen::UcInstance line_instance(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  ucscreen::UcInstance inst;
  inst.A = a;
  inst.b = b;
  inst.base_rhs = b;
  inst.load_coupling = Eigen::MatrixXd::Zero(a.rows(), 0);
  inst.cost = Eigen::VectorXd::Zero(a.cols());
  for (Eigen::Index j = 0; j < a.rows(); ++j) {
    inst.row_labels.push_back({ucscreen::RowKind::line_upper, static_cast<int>(j + 1)});
  }
  inst.load = Eigen::VectorXd::Zero(0);
  return inst;
}

}  // namespace testing

#endif
