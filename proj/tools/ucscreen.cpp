#include "ucscreen/case_io.hpp"
#include "ucscreen/errors.hpp"
#include "ucscreen/predictors.hpp"
#include "ucscreen/scheme.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using namespace ucscreen;

namespace {

struct RunOptions {
  std::string case_path;
  std::string scheme = "s3";
  std::optional<double> beta;
  std::optional<double> epsilon;
  std::optional<int> k;
  std::optional<std::string> dataset;
  bool oracle_cost = false;
  bool oracle_commit = false;
  std::uint64_t seed = 42;
  int jobs = 1;
  std::string out;
  bool timings = false;
  std::vector<std::string> force_remove;
};

struct GenOptions {
  std::string case_path;
  double beta = 0.5;
  std::size_t n = 200;
  std::uint64_t seed = 42;
  int jobs = 1;
  std::string out;
};

void add_run_flags(CLI::App* cmd, RunOptions& o, bool out_required) {
  cmd->add_option("--case", o.case_path, "Case file (JSON)")->required();
  cmd->add_option("--scheme", o.scheme, "Screening scheme s1..s7")->capture_default_str();
  cmd->add_option("--beta", o.beta, "Load variation range for s4");
  cmd->add_option("--epsilon", o.epsilon, "Cost cut relaxation for s5/s7");
  cmd->add_option("--k", o.k, "Neighbour count for the predictors");
  cmd->add_option("--dataset", o.dataset, "Dataset CSV from gen-data");
  cmd->add_flag("--oracle-cost", o.oracle_cost, "Cost bound from a direct solve");
  cmd->add_flag("--oracle-commit", o.oracle_commit, "Fix all units to the solved commitment");
  cmd->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  cmd->add_option("--jobs", o.jobs, "Parallel LP workers")->capture_default_str();
  cmd->add_flag("--timings", o.timings, "Record wall-clock phase times in the report");
  cmd->add_option("--force-remove", o.force_remove,
                  "Also delete this row label (fault injection)");
  auto* out = cmd->add_option("--out", o.out, "Output JSON path");
  if (out_required) out->required();
}

SchemeConfig to_config(const RunOptions& o) {
  SchemeConfig cfg;
  cfg.scheme = parse_scheme(o.scheme);
  cfg.beta = o.beta;
  cfg.epsilon = o.epsilon;
  cfg.k = o.k;
  if (o.dataset) cfg.dataset = *o.dataset;
  cfg.oracle_cost = o.oracle_cost;
  cfg.oracle_commit = o.oracle_commit;
  cfg.seed = o.seed;
  cfg.jobs = o.jobs;
  cfg.record_timings = o.timings;
  for (const std::string& s : o.force_remove) cfg.force_remove.push_back(RowLabel::parse(s));
  cfg.validate();
  return cfg;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

int cmd_run(const RunOptions& o) {
  const SchemeConfig cfg = to_config(o);
  const GridCase grid = load_case(o.case_path);
  const SchemeRun run = run_scheme(grid, cfg);
  write_text(o.out, to_json(run.report).dump(2) + "\n");
  const GapSummary& g = run.report.gap;
  std::fprintf(stderr, "%s %s: removed %zu of %zu line rows, lp_count %lld, gap %.3g\n",
               run.report.case_id.c_str(), run.report.scheme.c_str(), run.report.redundant_rows.size(),
               run.report.num_candidates, static_cast<long long>(run.report.lp_count), g.gap);
  if (g.required_zero && !(g.gap <= kGapTol)) {
    std::fprintf(stderr, "error: nonzero solution gap (full %.17g, reduced %.17g)\n", g.full_cost,
                 g.reduced_cost);
    return exit_code::property_violation;
  }
  return exit_code::ok;
}

int cmd_verify(const RunOptions& o) {
  const SchemeConfig cfg = to_config(o);
  const GridCase grid = load_case(o.case_path);
  const VerifyResult result = verify_scheme(grid, cfg);
  if (!o.out.empty()) write_text(o.out, result.to_json().dump(2) + "\n");
  for (const PropertyResult& p : result.properties) {
    std::fprintf(stderr, "%-22s %s%s%s\n", p.name.c_str(), p.passed ? "ok" : "FAILED",
                 p.detail.empty() ? "" : "  ", p.detail.c_str());
  }
  if (const PropertyResult* f = result.first_failure()) {
    std::fprintf(stderr, "verify failed: %s\n", f->name.c_str());
    return exit_code::property_violation;
  }
  return exit_code::ok;
}

int cmd_gen_data(const GenOptions& o) {
  if (!(o.beta >= 0.0 && o.beta <= 1.0)) throw UsageError("--beta must lie in [0, 1]");
  if (o.jobs < 1) throw UsageError("--jobs must be at least 1");
  const GridCase grid = load_case(o.case_path);
  const Dataset ds = generate_dataset(grid, o.beta, o.n, o.seed, o.jobs);
  write_text(o.out, dataset_to_csv(ds));
  std::fprintf(stderr, "%zu records, feasibility rate %.4f (%zu draws), bus-wise independent uniform loads\n", ds.records.size(),
               ds.feasibility_rate(), ds.attempts);
  return exit_code::ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unit-commitment line constraint screening"};
  app.require_subcommand(1);

  RunOptions run_opts;
  auto* run = app.add_subcommand("run", "Screen a case with one scheme and write a JSON report");
  add_run_flags(run, run_opts, true);

  RunOptions verify_opts;
  auto* verify = app.add_subcommand("verify", "Run a scheme and check it against the oracles");
  add_run_flags(verify, verify_opts, false);

  GenOptions gen_opts;
  auto* gen = app.add_subcommand("gen-data", "Sample loads and solve them into a dataset CSV");
  gen->add_option("--case", gen_opts.case_path, "Case file (JSON)")->required();
  gen->add_option("--beta", gen_opts.beta, "Load variation range")->capture_default_str();
  gen->add_option("--n", gen_opts.n, "Number of records")->capture_default_str();
  gen->add_option("--seed", gen_opts.seed, "Random seed")->capture_default_str();
  gen->add_option("--jobs", gen_opts.jobs, "Parallel MILP workers")->capture_default_str();
  gen->add_option("--out", gen_opts.out, "Output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : exit_code::input_error;
  }

  try {
    if (*run) return cmd_run(run_opts);
    if (*verify) return cmd_verify(verify_opts);
    return cmd_gen_data(gen_opts);
  } catch (const ScreeningInfeasible& e) {
    std::fprintf(stderr, "screening infeasible: %s\n", e.what());
    return exit_code::screening_infeasible;
  } catch (const InfeasibleUc& e) {
    std::fprintf(stderr, "infeasible case: %s\n", e.what());
    return exit_code::input_error;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return exit_code::input_error;
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "invalid case: %s\n", e.what());
    return exit_code::input_error;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return exit_code::input_error;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
