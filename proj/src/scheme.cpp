#include "ucscreen/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace ucscreen {

using nlohmann::json;

namespace {

bool uses_cost_cut(Scheme s) { return s == Scheme::s5 || s == Scheme::s7; }
bool uses_commit_cut(Scheme s) { return s == Scheme::s6 || s == Scheme::s7; }
bool zero_gap_required(const SchemeConfig& c) {
  return !uses_commit_cut(c.scheme) || c.oracle_commit;
}

Dataset read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), "cannot open dataset file");
  std::stringstream buf;
  buf << in.rdbuf();
  return dataset_from_csv(buf.str());
}

std::vector<std::string> label_strings(const std::vector<RowLabel>& labels) {
  std::vector<std::string> out;
  out.reserve(labels.size());
  for (const RowLabel& l : labels) out.push_back(l.str());
  return out;
}

}  // namespace

void SchemeConfig::validate() const {
  if (jobs < 1) throw UsageError("--jobs must be at least 1");
  if (scheme == Scheme::s4) {
    if (!beta) throw UsageError("scheme s4 requires --beta");
    if (!(*beta >= 0.0 && *beta <= 1.0)) throw UsageError("--beta must lie in [0, 1]");
  }
  if (uses_cost_cut(scheme)) {
    if (!epsilon) throw UsageError("scheme " + to_string(scheme) + " requires --epsilon");
    if (!(*epsilon >= 0.0)) throw UsageError("--epsilon must be nonnegative");
    if (!oracle_cost && !dataset) {
      throw UsageError("scheme " + to_string(scheme) + " requires --dataset or --oracle-cost");
    }
  }
  if (uses_commit_cut(scheme) && !oracle_commit && !dataset) {
    throw UsageError("scheme " + to_string(scheme) + " requires --dataset or --oracle-commit");
  }
  if (k && (*k < 1 || *k % 2 == 0)) throw UsageError("--k must be a positive odd integer");
}

json SchemeConfig::echo() const {
  json doc;
  doc["scheme"] = to_string(scheme);
  doc["beta"] = beta ? json(*beta) : json(nullptr);
  doc["epsilon"] = epsilon ? json(*epsilon) : json(nullptr);
  doc["k"] = k ? json(*k) : json(nullptr);
  doc["dataset"] = dataset ? json(dataset->string()) : json(nullptr);
  doc["oracle_cost"] = oracle_cost;
  doc["oracle_commit"] = oracle_commit;
  doc["seed"] = seed;
  doc["force_remove"] = label_strings(force_remove);
  return doc;
}

SchemeRun run_scheme(const GridCase& grid, const SchemeConfig& config) {
  config.validate();
  SchemeRun run;
  const Eigen::VectorXd& load = grid.nominal_load;
  run.full = build_uc(grid, load);
  // Infeasible cases are an input problem, reported before any screening.
  const UcSolution full_solution = solve_uc(run.full);

  std::optional<Dataset> ds;
  if (config.dataset) ds = read_dataset(*config.dataset);
  PredictorConfig pc;
  if (ds && (uses_cost_cut(config.scheme) || uses_commit_cut(config.scheme))) {
    run.report.diagnostics.push_back(
        "predictor: loads sampled bus-wise independent uniform; KNN on Euclidean distance, ties by record index");
  }
  pc.k = config.k.value_or(PredictorConfig::default_k(grid.num_generators()));
  pc.epsilon = config.epsilon.value_or(0.0);

  CutSet& cuts = run.cuts;
  RunReport& rep = run.report;
  if (config.scheme == Scheme::s4) {
    cuts.load_range = load_region(grid.nominal_load, *config.beta);
    rep.cuts.beta = config.beta;
  }
  if (uses_cost_cut(config.scheme)) {
    cuts.cost_bound = config.oracle_cost ? full_solution.cost * (1.0 + pc.epsilon)
                                         : cost_bound(*ds, load, pc);
    rep.cuts.cost_bound = cuts.cost_bound;
  }
  if (uses_commit_cut(config.scheme)) {
    if (config.oracle_commit) {
      for (Eigen::Index g = 0; g < full_solution.commitment.size(); ++g) {
        cuts.commitment_fixes.emplace_back(static_cast<std::size_t>(g),
                                           static_cast<int>(full_solution.commitment[g]));
      }
    } else {
      const CommitmentPrediction pred = commitment_fixes(*ds, load, pc);
      cuts.commitment_fixes = pred.fixes;
      std::ostringstream os;
      os << "commitment cut: " << pred.constant_units.size() << " constant units, "
         << pred.predicted_units.size() << " predicted units (K=" << pc.k << ")";
      rep.diagnostics.push_back(os.str());
    }
    for (const auto& [unit, value] : cuts.commitment_fixes) {
      rep.cuts.fixed_units.emplace_back(static_cast<int>(unit + 1), value);
    }
  }

  run.screened = relax_binaries(apply_cuts(run.full, cuts));
  ScreeningOptions opts;
  opts.run_vgs = config.scheme != Scheme::s2;
  opts.run_lfgs = config.scheme != Scheme::s1;
  opts.jobs = config.jobs;
  run.screening = eovl(run.screened, opts);

  std::vector<RowLabel> removed = run.screening.redundant;
  std::vector<RowLabel> kept = run.screening.kept;
  for (const RowLabel& f : config.force_remove) {
    if (std::find(removed.begin(), removed.end(), f) != removed.end()) continue;
    if (!run.screened.find_row(f)) throw UsageError("forced row " + f.str() + " does not exist");
    removed.push_back(f);
    kept.erase(std::remove(kept.begin(), kept.end(), f), kept.end());
    rep.attribution[f.str()] = "forced";
  }

  // The reduced model keeps the cost and commitment cuts; the load box only
  // exists for screening.
  CutSet solve_cuts = cuts;
  solve_cuts.load_range.reset();
  run.reduced = reduce_model(apply_cuts(run.full, solve_cuts), removed);

  rep.case_id = grid.name;
  rep.scheme = to_string(config.scheme);
  rep.redundant_rows = label_strings(removed);
  rep.kept_rows = label_strings(kept);
  for (const auto& [label, engine] : run.screening.attribution) rep.attribution[label.str()] = to_string(engine);
  for (const auto& [label, w] : run.screening.omega) rep.omega[label.str()] = w;
  rep.n_v = run.screening.n_v();
  rep.lp_count = run.screening.lp_count();
  rep.bound_lp_count = run.screening.bound_lp_count;
  rep.lfgs_lp_count = run.screening.lfgs_lp_count;
  rep.matrix_op_count = run.screening.matrix_op_count;
  rep.num_generators = grid.num_generators();
  rep.num_candidates = run.screened.line_rows().size();
  rep.r = rep.lp_count > 0 ? static_cast<double>(removed.size()) / static_cast<double>(rep.lp_count) : 0.0;
  rep.percentage_removed =
      rep.num_candidates > 0 ? 100.0 * static_cast<double>(removed.size()) / static_cast<double>(rep.num_candidates)
                             : 0.0;
  rep.diagnostics.insert(rep.diagnostics.end(), run.screening.diagnostics.begin(),
                         run.screening.diagnostics.end());
  if (config.record_timings) rep.timings = run.screening.wall_time;
  rep.config = config.echo();

  GapSummary& gap = rep.gap;
  gap.required_zero = zero_gap_required(config);
  gap.full_status = to_string(LpStatus::optimal);
  gap.full_cost = full_solution.cost;
  try {
    const UcSolution red = solve_uc(run.reduced);
    gap.reduced_status = to_string(LpStatus::optimal);
    gap.reduced_cost = red.cost;
    gap.gap = std::abs(full_solution.cost - red.cost) / std::max(std::abs(full_solution.cost), 1.0);
    gap.commitment_match = red.commitment == full_solution.commitment;
  } catch (const InfeasibleUc&) {
    // Only reachable through a wrong commitment cut.
    gap.reduced_status = to_string(LpStatus::infeasible);
    gap.gap = kInf;
  }
  return run;
}

bool VerifyResult::passed() const {
  return std::all_of(properties.begin(), properties.end(), [](const PropertyResult& p) { return p.passed; });
}

const PropertyResult* VerifyResult::first_failure() const {
  for (const PropertyResult& p : properties) {
    if (!p.passed) return &p;
  }
  return nullptr;
}

json VerifyResult::to_json() const {
  json props = json::array();
  for (const PropertyResult& p : properties) {
    props.push_back({{"name", p.name}, {"passed", p.passed}, {"detail", p.detail}});
  }
  return {{"report", ucscreen::to_json(report)}, {"properties", props}, {"passed", passed()}};
}

namespace {

PropertyResult check_soundness(const SchemeRun& run, bool vgs_only) {
  PropertyResult p{vgs_only ? "vgs_soundness" : "soundness", true, ""};
  for (const std::string& s : run.report.redundant_rows) {
    if (vgs_only) {
      auto it = run.report.attribution.find(s);
      if (it == run.report.attribution.end() || it->second != "vgs") continue;
    }
    const Eigen::Index row = *run.screened.find_row(RowLabel::parse(s));
    if (!oracle::lp_redundancy(run.screened, row)) {
      p.passed = false;
      p.detail = s + " was removed but the oracle finds it non-redundant";
      return p;
    }
  }
  return p;
}

PropertyResult check_exactness(const SchemeRun& run, std::uint64_t seed, int jobs) {
  PropertyResult p{"box_exactness", true, ""};
  const BoundsBox box = variable_bounds(run.screened, jobs);
  const Eigen::VectorXd omega = box_slack(run.screened, box);
  for (Eigen::Index j : run.screened.line_rows()) {
    const auto sample = oracle::box_exactness(run.screened, box, j, seed + static_cast<std::uint64_t>(j));
    const double formula = sample.projected ? sample.formula : omega[j];
    if (std::abs(formula - sample.enumerated) > 1e-9 ||
        ((formula < -kFeasTol) != (sample.enumerated < -kFeasTol))) {
      p.passed = false;
      std::ostringstream os;
      os.precision(17);
      os << run.screened.row_labels[static_cast<std::size_t>(j)].str() << ": formula " << formula
         << " vs enumerated " << sample.enumerated;
      p.detail = os.str();
      return p;
    }
  }
  return p;
}

PropertyResult check_ensemble(const SchemeRun& run, int jobs) {
  PropertyResult p{"ensemble_equivalence", true, ""};
  ScreeningOptions other;
  other.jobs = jobs;
  const bool this_is_lfgs_only = run.report.scheme == "s2";
  other.run_vgs = this_is_lfgs_only;
  other.run_lfgs = true;
  const ScreeningReport alt = eovl(run.screened, other);
  if (alt.redundant != run.screening.redundant) {
    p.passed = false;
    p.detail = "ensemble and line-flow-only redundant sets differ (" +
               std::to_string(run.screening.redundant.size()) + " vs " +
               std::to_string(alt.redundant.size()) + ")";
  }
  return p;
}

PropertyResult check_lp_count(const SchemeRun& run) {
  PropertyResult p{"lp_count", true, ""};
  const auto& s = run.screening;
  // One max/min pair per dispatch column and per status column not pinned by
  // a commitment cut; load columns come from the load box.
  std::int64_t solved_cols = 0;
  for (std::size_t g = 0; g < run.screened.num_generators(); ++g) {
    const int id = static_cast<int>(g + 1);
    solved_cols += run.screened.find_row({RowKind::commit_fix_le, id}) ? 1 : 2;
  }
  const auto candidates = static_cast<std::int64_t>(run.screened.line_rows().size());
  const auto nv = static_cast<std::int64_t>(s.n_v());
  std::int64_t expected = 0;
  if (run.report.scheme == "s1") expected = 2 * solved_cols;
  else if (run.report.scheme == "s2") expected = candidates;
  else expected = 2 * solved_cols + candidates - nv;
  if (s.lp_count() != expected) {
    p.passed = false;
    p.detail = "lp_count " + std::to_string(s.lp_count()) + " != expected " + std::to_string(expected);
  }
  return p;
}

PropertyResult check_gap(const SchemeRun& run) {
  PropertyResult p{"zero_gap", true, ""};
  const GapSummary& g = run.report.gap;
  if (!g.required_zero) {
    p.detail = "measured only (predicted commitment cut)";
    return p;
  }
  if (g.reduced_status != "optimal" || !(g.gap <= kGapTol)) {
    p.passed = false;
    std::ostringstream os;
    os.precision(17);
    os << "full cost " << g.full_cost << ", reduced cost " << g.reduced_cost << " (" << g.reduced_status << ")";
    p.detail = os.str();
  }
  return p;
}

PropertyResult check_range_gap(const GridCase& grid, const SchemeRun& run, const SchemeConfig& config) {
  PropertyResult p{"range_zero_gap", true, ""};
  constexpr int kSamples = 20;
  const auto& [lo, hi] = *run.cuts.load_range;
  std::vector<RowLabel> removed;
  for (const std::string& s : run.report.redundant_rows) removed.push_back(RowLabel::parse(s));
  std::mt19937_64 rng(config.seed);
  for (int s = 0; s < kSamples; ++s) {
    Eigen::VectorXd load(lo.size());
    for (Eigen::Index b = 0; b < lo.size(); ++b) {
      load[b] = lo[b] == hi[b] ? lo[b] : std::uniform_real_distribution<double>(lo[b], hi[b])(rng);
    }
    const UcInstance full = build_uc(grid, load);
    const oracle::GapReport gap = oracle::verify_zero_gap(full, reduce_model(full, removed));
    if (gap.full_status != gap.reduced_status || (gap.solved() && gap.gap > kGapTol)) {
      p.passed = false;
      std::ostringstream os;
      os << "sample " << s << ": full " << to_string(gap.full_status) << " " << gap.full_cost
         << ", reduced " << to_string(gap.reduced_status) << " " << gap.reduced_cost;
      p.detail = os.str();
      return p;
    }
  }
  return p;
}

}  // namespace

VerifyResult verify_scheme(const GridCase& grid, const SchemeConfig& config) {
  const SchemeRun run = run_scheme(grid, config);
  VerifyResult out;
  out.report = run.report;
  out.properties.push_back(check_soundness(run, true));
  out.properties.push_back(check_soundness(run, false));
  if (config.scheme != Scheme::s1) out.properties.push_back(check_ensemble(run, config.jobs));
  out.properties.push_back(check_exactness(run, config.seed, config.jobs));
  out.properties.push_back(check_lp_count(run));
  out.properties.push_back(check_gap(run));
  if (config.scheme == Scheme::s4) out.properties.push_back(check_range_gap(grid, run, config));
  return out;
}

}  // namespace ucscreen
