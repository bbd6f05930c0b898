#include "ucscreen/lp.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

namespace ucscreen {

void MilpProblem::validate() const {
  lp.validate();
  if (binaries.size() > kMaxBinaries) {
    throw ResourceError("MILP has " + std::to_string(binaries.size()) +
                        " binaries; desk-scale limit is " + std::to_string(kMaxBinaries));
  }
  for (Eigen::Index b : binaries) {
    if (b < 0 || b >= lp.num_vars()) {
      throw UsageError("binary index " + std::to_string(b) + " out of range");
    }
    if (lp.lower[b] < 0.0 || lp.upper[b] > 1.0) {
      throw UsageError("binary variable " + std::to_string(b) + " has bounds outside [0,1]");
    }
  }
}

namespace {

struct Node {
  double bound;  // minimization-form LP value
  int depth;
  std::int64_t seq;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  LpSolution relaxation;
};

// Lowest bound first; among equal bounds dive deeper, then creation order.
struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.seq > b.seq;
  }
};

class BranchAndBound {
public:
  explicit BranchAndBound(const MilpProblem& p) : p_(p) {
    sign_ = p.lp.sense == Sense::minimize ? 1.0 : -1.0;
  }

  LpSolution run() {
    LpProblem root = p_.lp;
    LpSolution rel = solve(root);
    if (rel.status != LpStatus::optimal) return rel;

    try_rounding(root, rel);

    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    open.push(Node{sign_ * rel.objective_value, 0, seq_++, root.lower, root.upper, rel});

    while (!open.empty()) {
      Node node = open.top();
      open.pop();
      if (pruned(node.bound)) continue;

      const Eigen::Index frac = first_fractional(node.relaxation.point);
      if (frac < 0) {
        accept(node.relaxation);
        continue;
      }
      if (lps_ >= p_.node_limit) {
        throw MilpNodeLimit(has_incumbent_, sign_ * best_, node.bound * sign_);
      }
      for (double side : {0.0, 1.0}) {
        LpProblem child = p_.lp;
        child.lower = node.lower;
        child.upper = node.upper;
        child.lower[frac] = side;
        child.upper[frac] = side;
        LpSolution sol = solve(child);
        if (sol.status != LpStatus::optimal) continue;
        const double bound = sign_ * sol.objective_value;
        if (pruned(bound)) continue;
        open.push(Node{bound, node.depth + 1, seq_++, child.lower, child.upper, std::move(sol)});
      }
    }

    if (!has_incumbent_) {
      LpSolution out;
      out.status = LpStatus::infeasible;
      out.iterations = iterations_;
      return out;
    }
    incumbent_.iterations = iterations_;
    return incumbent_;
  }

private:
  LpSolution solve(const LpProblem& lp) {
    ++lps_;
    LpSolution s = solve_lp(lp);
    iterations_ += s.iterations;
    return s;
  }

  bool pruned(double bound) const {
    if (!has_incumbent_) return false;
    return bound >= best_ - kOptTol * std::max(1.0, std::abs(best_));
  }

  Eigen::Index first_fractional(const Eigen::VectorXd& point) const {
    for (Eigen::Index b : p_.binaries) {
      if (std::abs(point[b] - std::round(point[b])) > kIntTol) return b;
    }
    return -1;
  }

  void accept(LpSolution sol) {
    const double value = sign_ * sol.objective_value;
    if (has_incumbent_ && value >= best_) return;
    for (Eigen::Index b : p_.binaries) sol.point[b] = std::round(sol.point[b]);
    has_incumbent_ = true;
    best_ = value;
    incumbent_ = std::move(sol);
  }

  // Round every binary with positive relaxation value up and re-solve; for
  // UC this is "keep every unit the relaxation uses".
  void try_rounding(const LpProblem& root, const LpSolution& rel) {
    if (p_.binaries.empty()) return;
    LpProblem fixed = root;
    for (Eigen::Index b : p_.binaries) {
      const double v = rel.point[b] > kIntTol ? 1.0 : 0.0;
      const double clamped = std::clamp(v, root.lower[b], root.upper[b]);
      fixed.lower[b] = clamped;
      fixed.upper[b] = clamped;
    }
    LpSolution sol = solve(fixed);
    if (sol.status == LpStatus::optimal) accept(std::move(sol));
  }

  const MilpProblem& p_;
  double sign_ = 1.0;
  bool has_incumbent_ = false;
  double best_ = kInf;
  LpSolution incumbent_;
  std::int64_t seq_ = 0;
  std::int64_t lps_ = 0;
  std::int64_t iterations_ = 0;
};

}  // namespace

LpSolution solve_milp(const MilpProblem& problem) {
  problem.validate();
  return BranchAndBound(problem).run();
}

}  // namespace ucscreen
