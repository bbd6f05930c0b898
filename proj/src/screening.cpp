#include "ucscreen/screening.hpp"

#include "ucscreen/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>

namespace ucscreen {

const char* to_string(Engine engine) {
  return engine == Engine::vgs ? "vgs" : "lfgs";
}

std::size_t ScreeningReport::n_v() const {
  return static_cast<std::size_t>(std::count_if(attribution.begin(), attribution.end(),
                                                [](const auto& kv) { return kv.second == Engine::vgs; }));
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::optional<double> row_rhs(const UcInstance& inst, RowKind kind, int index) {
  if (auto r = inst.find_row({kind, index})) return inst.b[*r];
  return std::nullopt;
}

// Sort labels by their row position in `inst`.
void order_by_row(const UcInstance& inst, std::vector<RowLabel>& labels) {
  std::sort(labels.begin(), labels.end(), [&](const RowLabel& a, const RowLabel& b) {
    return *inst.find_row(a) < *inst.find_row(b);
  });
}

}  // namespace

BoundsBox variable_bounds(const UcInstance& inst, int jobs, std::int64_t* lp_count) {
  const Eigen::Index cols = inst.num_cols();
  BoundsBox box;
  box.lower = Eigen::VectorXd::Zero(cols);
  box.upper = Eigen::VectorXd::Zero(cols);
  box.provenance.assign(static_cast<std::size_t>(cols), Provenance::lp_solved);

  std::vector<Eigen::Index> solve_cols;
  for (std::size_t g = 0; g < inst.num_generators(); ++g) {
    solve_cols.push_back(inst.dispatch_col(g));
  }
  for (std::size_t g = 0; g < inst.num_generators(); ++g) {
    const int id = static_cast<int>(g + 1);
    const auto le = row_rhs(inst, RowKind::commit_fix_le, id);
    const auto ge = row_rhs(inst, RowKind::commit_fix_ge, id);
    const Eigen::Index c = inst.status_col(g);
    if (le && ge && *le == -*ge) {
      box.lower[c] = box.upper[c] = *le;
      box.provenance[static_cast<std::size_t>(c)] = Provenance::fixed_by_cut;
    } else {
      solve_cols.push_back(c);
    }
  }
  if (inst.range_mode()) {
    for (std::size_t n = 0; n < inst.num_buses; ++n) {
      const int id = static_cast<int>(n + 1);
      const Eigen::Index c = inst.load_col(n);
      const auto hi = row_rhs(inst, RowKind::load_upper, id);
      const auto lo = row_rhs(inst, RowKind::load_lower, id);
      if (!hi || !lo) throw UsageError("range-mode instance lacks load box rows");
      box.lower[c] = -*lo;
      box.upper[c] = *hi;
      box.provenance[static_cast<std::size_t>(c)] = Provenance::load_box;
    }
  }

  // Task 2k maximizes column k, task 2k+1 minimizes it.
  const std::size_t tasks = 2 * solve_cols.size();
  std::vector<LpSolution> results(tasks);
  const LpProblem base = inst.to_lp(Eigen::VectorXd::Zero(cols), Sense::maximize);
  parallel_for(tasks, jobs, [&](std::size_t t) {
    LpProblem lp = base;
    lp.objective[solve_cols[t / 2]] = 1.0;
    lp.sense = t % 2 == 0 ? Sense::maximize : Sense::minimize;
    results[t] = solve_lp(lp);
  });
  if (lp_count) *lp_count += static_cast<std::int64_t>(tasks);

  for (std::size_t t = 0; t < tasks; ++t) {
    const Eigen::Index c = solve_cols[t / 2];
    const LpSolution& s = results[t];
    if (s.status == LpStatus::infeasible) {
      throw ScreeningInfeasible("relaxed screening region is empty (bound LP for column " +
                                std::to_string(c) + " infeasible)");
    }
    const bool maximize = t % 2 == 0;
    const double v = s.status == LpStatus::unbounded ? (maximize ? kInf : -kInf) : s.objective_value;
    (maximize ? box.upper : box.lower)[c] = v;
  }
  for (Eigen::Index c = 0; c < cols; ++c) {
    if (box.lower[c] > box.upper[c] + kFeasTol) {
      throw ScreeningInfeasible("bounds box is empty at column " + std::to_string(c));
    }
  }
  return box;
}

Eigen::VectorXd box_slack(const UcInstance& inst, const BoundsBox& box) {
  if (box.size() != inst.num_cols()) throw UsageError("bounds box does not match instance columns");
  Eigen::VectorXd omega = -inst.b;
  for (Eigen::Index j = 0; j < inst.num_rows(); ++j) {
    for (Eigen::Index p = 0; p < inst.num_cols(); ++p) {
      const double a = inst.A(j, p);
      if (a == 0.0) continue;
      // Positive coefficients peak at the upper bound, the rest at the lower.
      omega[j] += a > 0.0 ? a * (box.upper[p] - box.lower[p]) + a * box.lower[p] : a * box.lower[p];
    }
  }
  return omega;
}

ScreeningReport vgs_screen(const UcInstance& inst, const BoundsBox& box,
                           std::span<const Eigen::Index> candidates) {
  const auto start = Clock::now();
  ScreeningReport report;
  const Eigen::VectorXd omega = box_slack(inst, box);
  report.matrix_op_count = 1;
  for (Eigen::Index j : candidates) {
    const RowLabel& label = inst.row_labels[static_cast<std::size_t>(j)];
    report.omega[label] = omega[j];
    if (omega[j] < -kFeasTol) {
      report.redundant.push_back(label);
      report.attribution[label] = Engine::vgs;
    } else {
      report.undecided.push_back(label);
    }
  }
  report.wall_time.vgs = seconds_since(start);
  return report;
}

ScreeningReport lfgs_screen(const UcInstance& inst, std::span<const Eigen::Index> candidates,
                            int jobs) {
  const auto start = Clock::now();
  ScreeningReport report;
  std::vector<LpSolution> results(candidates.size());
  parallel_for(candidates.size(), jobs, [&](std::size_t k) {
    const Eigen::Index j = candidates[k];
    std::vector<Eigen::Index> others;
    others.reserve(static_cast<std::size_t>(inst.num_rows()));
    for (Eigen::Index i = 0; i < inst.num_rows(); ++i) {
      if (i != j) others.push_back(i);
    }
    LpProblem lp;
    lp.objective = inst.A.row(j).transpose();
    lp.sense = Sense::maximize;
    lp.rows = inst.A(others, Eigen::all);
    lp.rhs = inst.b(others);
    lp.lower = Eigen::VectorXd::Constant(inst.num_cols(), -kInf);
    lp.upper = Eigen::VectorXd::Constant(inst.num_cols(), kInf);
    results[k] = solve_lp(lp);
  });
  report.lfgs_lp_count = static_cast<std::int64_t>(candidates.size());

  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const Eigen::Index j = candidates[k];
    const RowLabel& label = inst.row_labels[static_cast<std::size_t>(j)];
    const LpSolution& s = results[k];
    if (s.status == LpStatus::infeasible) {
      throw ScreeningInfeasible("screening LP for " + label.str() + " is infeasible");
    }
    if (s.status == LpStatus::unbounded) {
      report.kept.push_back(label);
      report.diagnostics.push_back(label.str() + ": screening LP unbounded, kept");
      continue;
    }
    if (s.objective_value <= inst.b[j] - kFeasTol) {
      report.redundant.push_back(label);
      report.attribution[label] = Engine::lfgs;
    } else {
      report.kept.push_back(label);
    }
  }
  report.wall_time.lfgs = seconds_since(start);
  return report;
}

ScreeningReport eovl(const UcInstance& inst, const ScreeningOptions& options) {
  ScreeningReport report;
  std::vector<Eigen::Index> remaining = inst.line_rows();

  if (options.run_vgs) {
    const auto start = Clock::now();
    const BoundsBox box = variable_bounds(inst, options.jobs, &report.bound_lp_count);
    report.wall_time.bounds = seconds_since(start);

    const ScreeningReport v = vgs_screen(inst, box, remaining);
    report.omega = v.omega;
    report.matrix_op_count = v.matrix_op_count;
    report.wall_time.vgs = v.wall_time.vgs;
    report.redundant = v.redundant;
    report.attribution = v.attribution;
    remaining.clear();
    for (const RowLabel& l : v.undecided) remaining.push_back(*inst.find_row(l));
    std::sort(remaining.begin(), remaining.end());
  }

  if (options.run_lfgs) {
    const ScreeningReport f = lfgs_screen(inst, remaining, options.jobs);
    report.lfgs_lp_count = f.lfgs_lp_count;
    report.wall_time.lfgs = f.wall_time.lfgs;
    report.redundant.insert(report.redundant.end(), f.redundant.begin(), f.redundant.end());
    report.kept = f.kept;
    report.attribution.insert(f.attribution.begin(), f.attribution.end());
    report.diagnostics = f.diagnostics;
  } else {
    for (Eigen::Index j : remaining) report.kept.push_back(inst.row_labels[static_cast<std::size_t>(j)]);
  }

  order_by_row(inst, report.redundant);
  order_by_row(inst, report.kept);
  return report;
}

UcInstance reduce_model(const UcInstance& full, const std::vector<RowLabel>& redundant) {
  for (const RowLabel& l : redundant) {
    if (!l.is_line()) throw UsageError("only line rows can be screened out, got " + l.str());
  }
  return remove_rows(full, redundant);
}

}  // namespace ucscreen
