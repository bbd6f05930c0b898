#include "support.hpp"

#include "ucscreen/scheme.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace ucscreen;

namespace {

SchemeConfig config(Scheme s) {
  SchemeConfig cfg;
  cfg.scheme = s;
  if (s == Scheme::s4) cfg.beta = 0.5;
  if (s == Scheme::s5 || s == Scheme::s7) {
    cfg.epsilon = 0.01;
    cfg.oracle_cost = true;
  }
  if (s == Scheme::s6 || s == Scheme::s7) cfg.oracle_commit = true;
  return cfg;
}

}  // namespace

TEST_SUITE("scheme") {

TEST_CASE("scheme names") {
  for (Scheme s : {Scheme::s1, Scheme::s2, Scheme::s3, Scheme::s4, Scheme::s5, Scheme::s6, Scheme::s7}) {
    CHECK(parse_scheme(to_string(s)) == s);
  }
  CHECK_THROWS_AS(parse_scheme("s8"), UsageError);
}

TEST_CASE("reports survive a JSON round trip") {
  const GridCase g = testing::load("nine_ring");
  for (Scheme s : {Scheme::s1, Scheme::s2, Scheme::s3, Scheme::s4, Scheme::s5, Scheme::s6, Scheme::s7}) {
    CAPTURE(to_string(s));
    const RunReport r = run_scheme(g, config(s)).report;
    const RunReport back = report_from_json(nlohmann::json::parse(to_json(r).dump()));
    CHECK(back == r);
    CHECK(to_json(r)["timings"].is_null());
  }
}

TEST_CASE("zero range reproduces the fixed-load ensemble") {
  const GridCase g = testing::load("fourteen_mesh");
  SchemeConfig s4 = config(Scheme::s4);
  s4.beta = 0.0;
  const RunReport a = run_scheme(g, s4).report;
  const RunReport b = run_scheme(g, config(Scheme::s3)).report;
  CHECK(testing::label_set(a.redundant_rows) == testing::label_set(b.redundant_rows));
}

TEST_CASE("a cost cut only adds redundant rows") {
  for (const std::string name : {"nine_ring", "fourteen_mesh", "thirty"}) {
    CAPTURE(name);
    const GridCase g = testing::load(name);
    const RunReport s3 = run_scheme(g, config(Scheme::s3)).report;
    const RunReport s5 = run_scheme(g, config(Scheme::s5)).report;
    CHECK(testing::subset(testing::label_set(s3.redundant_rows), testing::label_set(s5.redundant_rows)));
    CHECK(s5.gap.gap <= kGapTol);
    REQUIRE(s5.cuts.cost_bound.has_value());
    CHECK(*s5.cuts.cost_bound == doctest::Approx(s3.gap.full_cost * 1.01));
  }
}

TEST_CASE("config validation") {
  SchemeConfig cfg;
  cfg.jobs = 0;
  CHECK_THROWS_AS(cfg.validate(), UsageError);
  cfg = config(Scheme::s4);
  cfg.beta.reset();
  CHECK_THROWS_AS(cfg.validate(), UsageError);
  cfg.beta = 1.5;
  CHECK_THROWS_AS(cfg.validate(), UsageError);
  cfg = config(Scheme::s5);
  cfg.oracle_cost = false;
  CHECK_THROWS_AS(cfg.validate(), UsageError);
  cfg = config(Scheme::s5);
  cfg.epsilon = -0.1;
  CHECK_THROWS_AS(cfg.validate(), UsageError);
  cfg = config(Scheme::s6);
  cfg.oracle_commit = false;
  CHECK_THROWS_AS(cfg.validate(), UsageError);
  cfg = config(Scheme::s3);
  cfg.k = 4;
  CHECK_THROWS_AS(cfg.validate(), UsageError);
  CHECK_NOTHROW(config(Scheme::s7).validate());
}

TEST_CASE("timings are opt-in") {
  const GridCase g = testing::load("five");
  SchemeConfig cfg = config(Scheme::s3);
  CHECK_FALSE(run_scheme(g, cfg).report.timings.has_value());
  cfg.record_timings = true;
  CHECK(run_scheme(g, cfg).report.timings.has_value());
}

TEST_CASE("verify output does not depend on jobs") {
  const GridCase g = testing::load("thirty");
  for (Scheme s : {Scheme::s3, Scheme::s4, Scheme::s7}) {
    CAPTURE(to_string(s));
    SchemeConfig one = config(s);
    SchemeConfig many = one;
    many.jobs = 8;
    const VerifyResult a = verify_scheme(g, one);
    CHECK(a.passed());
    CHECK(a.to_json().dump() == verify_scheme(g, many).to_json().dump());
  }
}

TEST_CASE("forced removal of a binding row fails soundness first") {
  const GridCase g = testing::load("negative_binding");
  SchemeConfig cfg = config(Scheme::s3);
  cfg.force_remove = {{RowKind::line_upper, 1}};
  const VerifyResult v = verify_scheme(g, cfg);
  CHECK_FALSE(v.passed());
  REQUIRE(v.first_failure() != nullptr);
  CHECK(v.first_failure()->name == "soundness");
  CHECK(v.report.attribution.at("line_upper(1)") == "forced");
  CHECK(v.report.gap.gap > 0.1);
}

TEST_CASE("the ensemble removes more per LP than LFGS alone on meshed cases") {
  for (const std::string name : {"fourteen_mesh", "thirty", "rand50"}) {
    CAPTURE(name);
    const GridCase g = testing::load(name);
    const RunReport s2 = run_scheme(g, config(Scheme::s2)).report;
    const RunReport s3 = run_scheme(g, config(Scheme::s3)).report;
    CHECK(s3.n_v > 4 * s3.num_generators);
    CHECK(s3.r > s2.r);
    CHECK(s3.lp_count < s2.lp_count);
  }
}

TEST_CASE("an optimistic cost predictor makes screening infeasible") {
  const GridCase g = testing::load("nine_ring");
  Dataset ds = generate_dataset(g, 0.2, 20, 11);
  for (UcRecord& r : ds.records) r.cost *= 0.5;
  const auto path = std::filesystem::temp_directory_path() / "ucscreen_low_cost.csv";
  std::ofstream(path) << dataset_to_csv(ds);
  SchemeConfig cfg;
  cfg.scheme = Scheme::s5;
  cfg.epsilon = 0.0;
  cfg.dataset = path;
  CHECK_THROWS_AS(run_scheme(g, cfg), ScreeningInfeasible);
  std::filesystem::remove(path);
}

}
