#include "support.hpp"

#include "ucscreen/predictors.hpp"

#include <doctest.h>

using namespace ucscreen;

namespace {

UcRecord record(std::initializer_list<double> load, double cost, std::initializer_list<int> u) {
  UcRecord r;
  r.load = Eigen::Map<const Eigen::VectorXd>(load.begin(), static_cast<Eigen::Index>(load.size()));
  r.cost = cost;
  r.commitment = Eigen::Map<const Eigen::VectorXi>(u.begin(), static_cast<Eigen::Index>(u.size()));
  return r;
}

// Training points at 0..9 on a line; unit 1 always on, unit 2 on above 4.5.
// Validation points are placed so the 3-NN vote for unit 2 is correct
// everywhere except, optionally, one point.
Dataset line_dataset(bool one_wrong) {
  Dataset ds;
  for (int i = 0; i < 10; ++i) ds.records.push_back(record({double(i)}, 10.0 * i, {1, i > 4 ? 1 : 0}));
  ds.train_count = 10;
  for (int i = 0; i < 99; ++i) {
    const double x = i % 2 == 0 ? 1.0 : 8.0;
    ds.records.push_back(record({x}, 0.0, {1, x > 4.5 ? 1 : 0}));
  }
  // At 4.4 the 3 nearest are 4, 5, 3: vote off.
  ds.records.push_back(record({4.4}, 0.0, {1, one_wrong ? 1 : 0}));
  ds.attempts = ds.records.size();
  return ds;
}

}  // namespace

TEST_SUITE("predictors") {

TEST_CASE("zero range gives identical nominal records") {
  const GridCase g = testing::load("nine_ring");
  const Dataset ds = generate_dataset(g, 0.0, 6, 42);
  REQUIRE(ds.records.size() == 6);
  for (const UcRecord& r : ds.records) {
    CHECK(r.load == g.nominal_load);
    CHECK(r == ds.records.front());
  }
}

TEST_CASE("empty dataset is valid") {
  const Dataset ds = generate_dataset(testing::load("five"), 0.5, 0, 42);
  CHECK(ds.records.empty());
  CHECK(ds.train().empty());
}

TEST_CASE("generation is deterministic, in range and schedule independent") {
  const GridCase g = testing::load("fourteen_mesh");
  const Dataset a = generate_dataset(g, 0.5, 40, 7, 1);
  const Dataset b = generate_dataset(g, 0.5, 40, 7, 4);
  CHECK(a.records == b.records);
  CHECK(a.train_count == 32);
  CHECK(a.generator_seed == 7);
  for (const UcRecord& r : a.records) {
    CHECK(((r.load.array() >= 0.5 * g.nominal_load.array() - 1e-12) &&
           (r.load.array() <= 1.5 * g.nominal_load.array() + 1e-12))
              .all());
    const UcSolution s = solve_uc(build_uc(g, r.load));
    CHECK(s.cost == doctest::Approx(r.cost).epsilon(1e-12));
  }
  CHECK(generate_dataset(g, 0.5, 40, 8).records != a.records);
}

TEST_CASE("resampling is counted and reported") {
  // At up to 2x nominal the five-bus feeders (6 MW) cannot serve every draw.
  const GridCase g = testing::load("five");
  const Dataset ds = generate_dataset(g, 1.0, 50, 42);
  CHECK(ds.records.size() == 50);
  CHECK(ds.attempts > 50);
  CHECK(ds.feasibility_rate() < 1.0);
  for (const UcRecord& r : ds.records) CHECK(r.load.sum() <= 6.0 + 1e-9);
}

TEST_CASE("cost bound from an exact neighbour") {
  Dataset ds = line_dataset(false);
  PredictorConfig cfg{1, 0.005};
  CHECK(cost_bound(ds, Eigen::VectorXd::Constant(1, 7.0), cfg) == doctest::Approx(70.0 * 1.005));
  cfg.k = 3;
  CHECK(cost_bound(ds, Eigen::VectorXd::Constant(1, 7.0), cfg) == doctest::Approx(70.0 * 1.005));
}

TEST_CASE("oracle cost bound") {
  const GridCase g = testing::load("nine_ring");
  const double cstar = solve_uc(build_uc(g, g.nominal_load)).cost;
  CHECK(oracle_cost_bound(g, g.nominal_load, 0.01) / cstar == doctest::Approx(1.01).epsilon(1e-12));
}

TEST_CASE("predictor guards") {
  Dataset empty;
  CHECK_THROWS_AS(cost_bound(empty, Eigen::VectorXd::Zero(1), {}), UsageError);
  const Dataset ds = line_dataset(false);
  CHECK_THROWS_AS(cost_bound(ds, Eigen::VectorXd::Zero(1), PredictorConfig{2, 0.0}), UsageError);
  CHECK_THROWS_AS(cost_bound(ds, Eigen::VectorXd::Zero(1), PredictorConfig{3, -0.1}), UsageError);
  CHECK(PredictorConfig::default_k(12) == 5);
  CHECK(PredictorConfig::default_k(71) == 3);
}

TEST_CASE("neighbour ties break by record index") {
  Dataset ds;
  for (double x : {2.0, 0.0, 2.0, 4.0}) ds.records.push_back(record({x}, x, {0}));
  ds.train_count = 4;
  CHECK(nearest_training(ds, Eigen::VectorXd::Constant(1, 1.0), 2) == std::vector<std::size_t>{0, 1});
  CHECK(nearest_training(ds, Eigen::VectorXd::Constant(1, 3.0), 3) == std::vector<std::size_t>{0, 2, 3});
}

TEST_CASE("commitment fixes need perfect validation accuracy") {
  const PredictorConfig cfg{3, 0.0};
  const Eigen::VectorXd query = Eigen::VectorXd::Constant(1, 8.0);
  const CommitmentPrediction good = commitment_fixes(line_dataset(false), query, cfg);
  CHECK(good.constant_units == std::vector<std::size_t>{0});
  CHECK(good.predicted_units == std::vector<std::size_t>{1});
  CHECK(good.fixes == std::vector<std::pair<std::size_t, int>>{{0, 1}, {1, 1}});

  const CommitmentPrediction bad = commitment_fixes(line_dataset(true), query, cfg);
  REQUIRE(bad.validation_accuracy.size() == 1);
  CHECK(bad.validation_accuracy[0].second == doctest::Approx(0.99));
  CHECK(bad.fixes == std::vector<std::pair<std::size_t, int>>{{0, 1}});
}

TEST_CASE("constant units match a scan of the records") {
  const GridCase g = testing::load("rand50");
  const Dataset ds = generate_dataset(g, 0.5, 200, 42);
  std::vector<std::size_t> constant;
  for (Eigen::Index k = 0; k < 12; ++k) {
    bool same = true;
    for (const UcRecord& r : ds.train()) same = same && r.commitment[k] == ds.records[0].commitment[k];
    if (same) constant.push_back(static_cast<std::size_t>(k));
  }
  const CommitmentPrediction p = commitment_fixes(ds, g.nominal_load, PredictorConfig{5, 0.0});
  CHECK(p.constant_units == constant);
  CHECK(!constant.empty());
  // A constant unit's K-majority vote on training data is that constant.
  for (std::size_t k : constant) {
    for (const UcRecord& r : ds.train()) {
      int on = 0;
      for (std::size_t i : nearest_training(ds, r.load, 5)) on += ds.records[i].commitment[static_cast<Eigen::Index>(k)];
      CHECK((2 * on > 5 ? 1 : 0) == ds.records[0].commitment[static_cast<Eigen::Index>(k)]);
    }
  }
}

TEST_CASE("CSV round trip is exact") {
  const Dataset ds = generate_dataset(testing::load("nine_ring"), 0.5, 12, 3);
  const std::string text = dataset_to_csv(ds);
  CHECK(text.rfind("load_1,load_2,load_3,load_4,load_5,load_6,load_7,load_8,load_9,cost,u_1,u_2,u_3\n", 0) == 0);
  const Dataset back = dataset_from_csv(text);
  CHECK(back.records == ds.records);
  CHECK(back.train_count == ds.train_count);
  CHECK(dataset_to_csv(back) == text);
}

TEST_CASE("malformed CSV is a parse error") {
  CHECK_THROWS_AS(dataset_from_csv(""), ParseError);
  CHECK_THROWS_AS(dataset_from_csv("load_1,u_1\n1,0\n"), ParseError);
  CHECK_THROWS_AS(dataset_from_csv("load_1,cost,u_1\n1,2\n"), ParseError);
  CHECK_THROWS_AS(dataset_from_csv("load_1,cost,u_1\n1,x,0\n"), ParseError);
  CHECK_THROWS_AS(dataset_from_csv("load_1,cost,u_1\n1,2,3\n"), ParseError);
}

}
