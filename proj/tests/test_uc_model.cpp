#include "support.hpp"

#include "ucscreen/screening.hpp"
#include "ucscreen/uc_model.hpp"

#include <doctest.h>

#include <random>

using namespace ucscreen;

namespace {

int count_kind(const UcInstance& inst, std::initializer_list<RowKind> kinds) {
  int n = 0;
  for (const RowLabel& l : inst.row_labels) {
    for (RowKind k : kinds) n += l.kind == k;
  }
  return n;
}

bool satisfies(const UcInstance& inst, const Eigen::VectorXd& y, double tol = 1e-9) {
  return ((inst.A * y - inst.b).array() <= tol).all();
}

}  // namespace

TEST_SUITE("uc_model") {

TEST_CASE("five-bus instance has the expected row layout") {
  const GridCase g = testing::load("five");
  const UcInstance inst = build_uc(g, g.nominal_load);
  CHECK(inst.num_cols() == 4);
  CHECK(count_kind(inst, {RowKind::line_upper, RowKind::line_lower}) == 12);
  CHECK(count_kind(inst, {RowKind::balance_le, RowKind::balance_ge}) == 2);
  CHECK(count_kind(inst, {RowKind::gen_upper, RowKind::gen_lower, RowKind::u_upper, RowKind::u_lower}) == 8);
  CHECK(inst.num_rows() == 22);
  CHECK(inst.line_rows().size() == 12);
  CHECK(inst.binary_indices == std::vector<Eigen::Index>{2, 3});
}

TEST_CASE("line rows carry PTDF times generator incidence") {
  const GridCase g = testing::load("fourteen_mesh");
  const UcInstance inst = build_uc(g, g.nominal_load);
  const Eigen::MatrixXd pb = compute_ptdf(g).entries * generator_incidence(g);
  const Eigen::VectorXd flow0 = compute_ptdf(g).entries * g.nominal_load;
  for (std::size_t j = 0; j < g.num_lines(); ++j) {
    const int id = static_cast<int>(j + 1);
    const Eigen::Index up = *inst.find_row({RowKind::line_upper, id});
    const Eigen::Index lo = *inst.find_row({RowKind::line_lower, id});
    const auto jj = static_cast<Eigen::Index>(j);
    CHECK((inst.A.row(up).head(5) - pb.row(jj)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((inst.A.row(lo).head(5) + pb.row(jj)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(inst.A.row(up).tail(5).isZero());
    CHECK(std::abs(inst.b[up] - (g.lines[j].f_max + flow0[jj])) < 1e-9);
    CHECK(std::abs(inst.b[lo] - (-g.lines[j].f_min - flow0[jj])) < 1e-9);
  }
}

TEST_CASE("every case coefficient appears in its labelled row") {
  const GridCase g = testing::load("nine_ring");
  const UcInstance inst = build_uc(g, g.nominal_load);
  for (std::size_t k = 0; k < g.num_generators(); ++k) {
    const int id = static_cast<int>(k + 1);
    CHECK(inst.cost[inst.dispatch_col(k)] == g.generators[k].cost);
    CHECK(inst.A(*inst.find_row({RowKind::gen_upper, id}), inst.status_col(k)) == -g.generators[k].x_max);
    CHECK(inst.A(*inst.find_row({RowKind::gen_lower, id}), inst.status_col(k)) == g.generators[k].x_min);
    CHECK(inst.b[*inst.find_row({RowKind::u_upper, id})] == 1.0);
  }
  CHECK(inst.b[*inst.find_row({RowKind::balance_le, 0})] == doctest::Approx(g.nominal_load.sum()).epsilon(1e-12));
}

TEST_CASE("zero load commits nothing") {
  const GridCase g = testing::load("fourteen_mesh");
  const UcSolution s = solve_uc(build_uc(g, Eigen::VectorXd::Zero(14)));
  CHECK(s.cost == 0.0);
  CHECK(s.commitment.isZero());
}

TEST_CASE("infeasibility is diagnosed as capacity or network") {
  const GridCase g = testing::load("five");
  try {
    solve_uc(build_uc(g, g.nominal_load * 3.0));
    FAIL("expected infeasible");
  } catch (const InfeasibleUc& e) {
    CHECK(std::string(e.what()).rfind("capacity", 0) == 0);
  }
  // 7 MW fits the 10 MW fleet but not the two 3 MW radial feeders.
  try {
    solve_uc(build_uc(g, g.nominal_load * 1.75));
    FAIL("expected infeasible");
  } catch (const InfeasibleUc& e) {
    CHECK(std::string(e.what()).rfind("network", 0) == 0);
  }
}

TEST_CASE("load of the wrong length is a usage error") {
  const GridCase g = testing::load("five");
  CHECK_THROWS_AS(build_uc(g, Eigen::VectorXd::Zero(4)), UsageError);
}

TEST_CASE("relaxation keeps rows and drops integrality") {
  const GridCase g = testing::load("five");
  const UcInstance full = build_uc(g, g.nominal_load);
  const UcInstance rel = relax_binaries(full);
  CHECK(rel.A == full.A);
  CHECK(rel.b == full.b);
  CHECK(rel.binary_indices.empty());
  const double lp = solve_lp(rel.to_lp(rel.cost, Sense::minimize)).objective_value;
  CHECK(lp <= solve_uc(full).cost + 1e-9);
}

TEST_CASE("fractional status is feasible only in the relaxation") {
  // u = (0.5, 0.5) with x = (2.5, 1.5): both inside [0.5u, 5u] = [0.25, 2.5].
  const GridCase g = testing::load("five");
  const UcInstance rel = relax_binaries(build_uc(g, g.nominal_load));
  Eigen::VectorXd y(4);
  y << 2.5, 1.5, 0.5, 0.5;
  CHECK(satisfies(rel, y));
  for (Eigen::Index c : build_uc(g, g.nominal_load).binary_indices) {
    CHECK((y[c] != 0.0 && y[c] != 1.0));
  }
}

TEST_CASE("containment chain by rejection sampling") {
  const GridCase g = testing::load("nine_ring");
  const UcInstance full = build_uc(g, g.nominal_load);
  const double cstar = solve_uc(full).cost;
  CutSet cut;
  cut.cost_bound = cstar * 1.05;
  const UcInstance with_cut = apply_cuts(full, cut);
  const UcInstance rel = relax_binaries(full);
  std::mt19937_64 rng(3);
  const std::size_t G = g.num_generators();
  const double demand = g.nominal_load.sum();
  int accepted = 0, accepted_cut = 0;
  for (int trial = 0; trial < 4000; ++trial) {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(2 * G));
    double rest = demand;
    for (std::size_t k = 0; k < G; ++k) {
      const bool on = rng() & 1U;
      y[full.status_col(k)] = on;
      if (k + 1 < G) {
        const double x = on ? std::uniform_real_distribution<double>(0.0, full.gen_max[k])(rng) : 0.0;
        y[full.dispatch_col(k)] = x;
        rest -= x;
      }
    }
    y[full.dispatch_col(G - 1)] = rest;
    if (satisfies(with_cut, y, 1e-7)) {
      ++accepted_cut;
      CHECK(satisfies(full, y, 1e-7));
    }
    if (satisfies(full, y, 1e-7)) {
      ++accepted;
      CHECK(satisfies(rel, y, 1e-7));
    }
  }
  CHECK(accepted > 20);
  CHECK(accepted_cut > 0);
}

TEST_CASE("empty cut set is the identity") {
  const GridCase g = testing::load("thirty");
  const UcInstance inst = build_uc(g, g.nominal_load);
  const UcInstance out = apply_cuts(inst, CutSet{});
  CHECK(out.A == inst.A);
  CHECK(out.b == inst.b);
  CHECK(out.row_labels == inst.row_labels);
}

TEST_CASE("cuts add their labelled rows") {
  const GridCase g = testing::load("five");
  const UcInstance inst = build_uc(g, g.nominal_load);
  CutSet cuts;
  cuts.cost_bound = 60.0;
  cuts.commitment_fixes = {{1, 0}};
  cuts.load_range = load_region(g.nominal_load, 0.2);
  const UcInstance out = apply_cuts(inst, cuts);
  CHECK(out.range_mode());
  CHECK(out.num_cols() == 4 + 5);
  CHECK(out.num_rows() == inst.num_rows() + 10 + 1 + 2);
  const Eigen::Index cc = *out.find_row({RowKind::cost_cut, 0});
  CHECK(out.b[cc] == 60.0);
  CHECK(out.A(cc, 0) == 10.0);
  CHECK(out.A(cc, 1) == 20.0);
  CHECK(out.b[*out.find_row({RowKind::commit_fix_le, 2})] == 0.0);
  CHECK(out.b[*out.find_row({RowKind::load_upper, 3})] == doctest::Approx(1.8));
  CHECK(out.b[*out.find_row({RowKind::load_lower, 3})] == doctest::Approx(-1.2));
  // Line rows now carry the load as variables.
  const Eigen::Index up1 = *out.find_row({RowKind::line_upper, 1});
  CHECK(out.b[up1] == g.lines[0].f_max);
}

TEST_CASE("invalid cut sets are rejected") {
  const GridCase g = testing::load("five");
  const UcInstance inst = build_uc(g, g.nominal_load);
  CutSet dup;
  dup.commitment_fixes = {{0, 1}, {0, 1}};
  CHECK_THROWS_AS(apply_cuts(inst, dup), UsageError);
  CutSet inverted;
  inverted.load_range = std::make_pair(Eigen::VectorXd::Ones(5), Eigen::VectorXd::Zero(5));
  CHECK_THROWS_AS(apply_cuts(inst, inverted), UsageError);
  CutSet unit;
  unit.commitment_fixes = {{2, 1}};
  CHECK_THROWS_AS(apply_cuts(inst, unit), UsageError);
}

TEST_CASE("very large cost bound leaves screening unchanged") {
  for (const auto& name : testing::desk_cases()) {
    CAPTURE(name);
    const GridCase g = testing::load(name);
    const UcInstance inst = relax_binaries(build_uc(g, g.nominal_load));
    CutSet cut;
    cut.cost_bound = 1e9;
    const ScreeningReport a = eovl(inst);
    const ScreeningReport b = eovl(apply_cuts(inst, cut));
    CHECK(a.redundant == b.redundant);
    CHECK(a.kept == b.kept);
  }
}

TEST_CASE("degenerate load range equals fixed-load screening") {
  for (const auto& name : testing::desk_cases()) {
    CAPTURE(name);
    const GridCase g = testing::load(name);
    const UcInstance inst = relax_binaries(build_uc(g, g.nominal_load));
    CutSet cut;
    cut.load_range = load_region(g.nominal_load, 0.0);
    CHECK(eovl(inst).redundant == eovl(apply_cuts(inst, cut)).redundant);
  }
}

TEST_CASE("five-bus optimum matches commitment enumeration") {
  const GridCase g = testing::load("five");
  const UcInstance inst = build_uc(g, g.nominal_load);
  double best = kInf;
  Eigen::VectorXd best_u;
  for (unsigned mask = 0; mask < 4; ++mask) {
    LpProblem p = inst.to_lp(inst.cost, Sense::minimize);
    Eigen::VectorXd u(2);
    for (std::size_t k = 0; k < 2; ++k) {
      u[static_cast<Eigen::Index>(k)] = (mask >> k) & 1U;
      p.lower[inst.status_col(k)] = p.upper[inst.status_col(k)] = u[static_cast<Eigen::Index>(k)];
    }
    const LpSolution s = solve_lp(p);
    if (s.status == LpStatus::optimal && s.objective_value < best) {
      best = s.objective_value;
      best_u = u;
    }
  }
  const UcSolution s = solve_uc(inst);
  CHECK(s.cost == doctest::Approx(best).epsilon(1e-12));
  CHECK(s.commitment == best_u);
  CHECK(s.dispatch[0] == doctest::Approx(3.0));
  CHECK(s.dispatch[1] == doctest::Approx(1.0));
  CHECK(std::abs(s.dispatch.sum() - g.nominal_load.sum()) <= 1e-6);
}

TEST_CASE("solution respects commitment-scaled dispatch limits") {
  for (const auto& name : testing::desk_cases()) {
    CAPTURE(name);
    const GridCase g = testing::load(name);
    const UcInstance inst = build_uc(g, g.nominal_load);
    const UcSolution s = solve_uc(inst);
    for (Eigen::Index k = 0; k < s.dispatch.size(); ++k) {
      CHECK(s.dispatch[k] >= s.commitment[k] * inst.gen_min[k] - 1e-7);
      CHECK(s.dispatch[k] <= s.commitment[k] * inst.gen_max[k] + 1e-7);
    }
    CHECK(std::abs(s.dispatch.sum() - g.nominal_load.sum()) <= 1e-6);
  }
}

TEST_CASE("equal costs give a unique optimal objective") {
  GridCase g = testing::load("nine_ring");
  for (Generator& gen : g.generators) gen.cost = 20.0;
  const UcSolution s = solve_uc(build_uc(g, g.nominal_load));
  CHECK(s.cost == doctest::Approx(20.0 * g.nominal_load.sum()));
}

TEST_CASE("cuts that keep the optimum keep the optimal cost") {
  for (const auto& name : testing::desk_cases()) {
    CAPTURE(name);
    const GridCase g = testing::load(name);
    const UcInstance inst = build_uc(g, g.nominal_load);
    const UcSolution s = solve_uc(inst);
    CutSet fix;
    for (Eigen::Index k = 0; k < s.commitment.size(); ++k) {
      fix.commitment_fixes.emplace_back(static_cast<std::size_t>(k), static_cast<int>(s.commitment[k]));
    }
    CHECK(solve_uc(apply_cuts(inst, fix)).cost == doctest::Approx(s.cost).epsilon(1e-9));
    CutSet cost;
    cost.cost_bound = s.cost * 1.001;
    CHECK(solve_uc(apply_cuts(inst, cost)).cost == doctest::Approx(s.cost).epsilon(1e-9));
  }
}

TEST_CASE("range-mode instances cannot be solved directly") {
  const GridCase g = testing::load("five");
  CutSet cut;
  cut.load_range = load_region(g.nominal_load, 0.1);
  CHECK_THROWS_AS(solve_uc(apply_cuts(build_uc(g, g.nominal_load), cut)), UsageError);
}

TEST_CASE("row labels are a bijection onto rows") {
  const GridCase g = testing::load("fourteen_mesh");
  const UcInstance inst = build_uc(g, g.nominal_load);
  std::set<RowLabel> seen(inst.row_labels.begin(), inst.row_labels.end());
  CHECK(seen.size() == inst.row_labels.size());
  for (std::size_t i = 0; i < inst.row_labels.size(); ++i) {
    CHECK(*inst.find_row(inst.row_labels[i]) == static_cast<Eigen::Index>(i));
    CHECK(RowLabel::parse(inst.row_labels[i].str()) == inst.row_labels[i]);
  }
  // Removing by label equals filtering the matrix.
  const std::vector<RowLabel> drop{{RowKind::line_upper, 3}, {RowKind::gen_lower, 2}};
  const UcInstance out = remove_rows(inst, drop);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < inst.num_rows(); ++i) {
    if (i != *inst.find_row(drop[0]) && i != *inst.find_row(drop[1])) keep.push_back(i);
  }
  CHECK(out.A == Eigen::MatrixXd(inst.A(keep, Eigen::all)));
  CHECK(out.b == Eigen::VectorXd(inst.b(keep)));
  CHECK_THROWS_AS(remove_rows(out, drop), UsageError);
}

TEST_CASE("row label text form") {
  CHECK(RowLabel{RowKind::line_upper, 3}.str() == "line_upper(3)");
  CHECK(RowLabel{RowKind::balance_ge, 0}.str() == "balance_ge");
  CHECK(RowLabel::parse("commit_fix_le(12)") == RowLabel{RowKind::commit_fix_le, 12});
  CHECK(RowLabel::parse("cost_cut") == RowLabel{RowKind::cost_cut, 0});
  CHECK_THROWS_AS(RowLabel::parse("line_upper"), UsageError);
  CHECK_THROWS_AS(RowLabel::parse("line_upper(0)"), UsageError);
  CHECK_THROWS_AS(RowLabel::parse("line_upper(2x)"), UsageError);
  CHECK_THROWS_AS(RowLabel::parse("cost_cut(1)"), UsageError);
  CHECK_THROWS_AS(RowLabel::parse("bogus(1)"), UsageError);
}

}
