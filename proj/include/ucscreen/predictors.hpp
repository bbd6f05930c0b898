#ifndef UCSCREEN_PREDICTORS_HPP
#define UCSCREEN_PREDICTORS_HPP

#include "ucscreen/case_io.hpp"
#include "ucscreen/uc_model.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ucscreen {

struct UcRecord {
  Eigen::VectorXd load;
  double cost = 0.0;
  Eigen::VectorXi commitment;

  bool operator==(const UcRecord& o) const {
    return load == o.load && cost == o.cost && commitment == o.commitment;
  }
};

/// Solved UC samples; the first `train_count` records train the predictors
/// and the rest are held out for validation.
struct Dataset {
  std::vector<UcRecord> records;
  std::size_t train_count = 0;
  std::uint64_t generator_seed = 0;
  /// Samples drawn, including infeasible ones that were redrawn.
  std::size_t attempts = 0;

  std::span<const UcRecord> train() const { return {records.data(), train_count}; }
  std::span<const UcRecord> validation() const {
    return {records.data() + train_count, records.size() - train_count};
  }
  double feasibility_rate() const {
    return attempts == 0 ? 1.0 : static_cast<double>(records.size()) / static_cast<double>(attempts);
  }
};

inline constexpr double kDefaultTrainFraction = 0.8;

struct PredictorConfig {
  int k = 5;
  double epsilon = 0.005;

  /// K >= 1 and odd, epsilon >= 0.
  void validate() const;
  /// 5 neighbours for systems up to 70 units, 3 beyond.
  static int default_k(std::size_t num_generators) { return num_generators <= 70 ? 5 : 3; }
};

/// Draws n bus-wise independent uniform loads in [(1-beta) l, (1+beta) l],
/// solving each to MILP optimality. Infeasible draws are redrawn (up to
/// 20 attempts per record). Sample i, attempt a uses an RNG seeded from
/// (seed, i, a), so the result does not depend on `jobs`.
Dataset generate_dataset(const GridCase& grid, double beta, std::size_t n, std::uint64_t seed,
                         int jobs = 1, double train_fraction = kDefaultTrainFraction);

/// Indices of the k training records nearest to `load` (Euclidean; ties
/// broken by record index).
std::vector<std::size_t> nearest_training(const Dataset& ds, const Eigen::VectorXd& load, int k);

/// KNN regression of the optimal cost, inflated by (1 + epsilon).
double cost_bound(const Dataset& ds, const Eigen::VectorXd& load, const PredictorConfig& cfg);

/// C* (1 + epsilon) from a direct solve at `load`.
double oracle_cost_bound(const GridCase& grid, const Eigen::VectorXd& load, double epsilon);

struct CommitmentPrediction {
  /// (0-based unit, value) pairs, ascending by unit.
  std::vector<std::pair<std::size_t, int>> fixes;
  std::vector<std::size_t> constant_units;
  std::vector<std::size_t> predicted_units;
  /// Validation accuracy of each non-constant unit's classifier.
  std::vector<std::pair<std::size_t, double>> validation_accuracy;
};

/// Units constant over the training split are fixed to that value; every
/// other unit gets a K-majority vote classifier that contributes a fix only
/// if it scores exactly 100% on the validation split.
CommitmentPrediction commitment_fixes(const Dataset& ds, const Eigen::VectorXd& load,
                                      const PredictorConfig& cfg);

/// CSV with header load_1..load_N,cost,u_1..u_G.
std::string dataset_to_csv(const Dataset& ds);
Dataset dataset_from_csv(std::string_view text, double train_fraction = kDefaultTrainFraction);

}  // namespace ucscreen

#endif
