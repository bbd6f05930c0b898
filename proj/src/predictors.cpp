#include "ucscreen/predictors.hpp"

#include "ucscreen/errors.hpp"
#include "ucscreen/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <random>
#include <sstream>

namespace ucscreen {

void PredictorConfig::validate() const {
  if (k < 1 || k % 2 == 0) throw UsageError("K must be a positive odd integer");
  if (!(epsilon >= 0.0)) throw UsageError("epsilon must be nonnegative");
}

namespace {

constexpr int kAttemptsPerRecord = 20;

std::size_t train_size(std::size_t n, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw UsageError("train fraction must be in (0, 1]");
  return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
}

}  // namespace

Dataset generate_dataset(const GridCase& grid, double beta, std::size_t n, std::uint64_t seed,
                         int jobs, double train_fraction) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw UsageError("beta must lie in [0, 1]");
  const auto [lo, hi] = load_region(grid.nominal_load, beta);

  struct Slot {
    std::optional<UcRecord> record;
    std::size_t attempts = 0;
  };
  std::vector<Slot> slots(n);
  parallel_for(n, jobs, [&](std::size_t i) {
    for (int a = 0; a < kAttemptsPerRecord; ++a) {
      std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                        static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(a)};
      std::mt19937_64 rng(seq);
      Eigen::VectorXd load(lo.size());
      for (Eigen::Index b = 0; b < lo.size(); ++b) {
        load[b] = std::uniform_real_distribution<double>(lo[b], hi[b])(rng);
        if (lo[b] == hi[b]) load[b] = lo[b];
      }
      ++slots[i].attempts;
      try {
        const UcSolution sol = solve_uc(build_uc(grid, load));
        slots[i].record = UcRecord{load, sol.cost, sol.commitment.cast<int>()};
        return;
      } catch (const InfeasibleUc&) {
      }
    }
  });

  Dataset ds;
  ds.generator_seed = seed;
  for (Slot& s : slots) {
    ds.attempts += s.attempts;
    if (!s.record) {
      std::ostringstream os;
      os << "resample budget exhausted: feasibility rate "
         << static_cast<double>(std::count_if(slots.begin(), slots.end(),
                                              [](const Slot& x) { return x.record.has_value(); })) /
                static_cast<double>(ds.attempts);
      throw ResourceError(os.str());
    }
    ds.records.push_back(std::move(*s.record));
  }
  ds.train_count = train_size(n, train_fraction);
  return ds;
}

std::vector<std::size_t> nearest_training(const Dataset& ds, const Eigen::VectorXd& load, int k) {
  const auto train = ds.train();
  if (train.empty()) throw UsageError("dataset has no training records");
  std::vector<std::pair<double, std::size_t>> dist;
  dist.reserve(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (train[i].load.size() != load.size()) throw UsageError("load length does not match dataset");
    dist.emplace_back((train[i].load - load).squaredNorm(), i);
  }
  const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), dist.size());
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(take), dist.end());
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < take; ++i) out.push_back(dist[i].second);
  return out;
}

double cost_bound(const Dataset& ds, const Eigen::VectorXd& load, const PredictorConfig& cfg) {
  cfg.validate();
  if (ds.records.empty()) throw UsageError("cost bound needs a nonempty dataset");
  const auto idx = nearest_training(ds, load, cfg.k);
  double sum = 0.0;
  for (std::size_t i : idx) sum += ds.records[i].cost;
  return sum / static_cast<double>(idx.size()) * (1.0 + cfg.epsilon);
}

double oracle_cost_bound(const GridCase& grid, const Eigen::VectorXd& load, double epsilon) {
  if (!(epsilon >= 0.0)) throw UsageError("epsilon must be nonnegative");
  return solve_uc(build_uc(grid, load)).cost * (1.0 + epsilon);
}

namespace {

int majority(const Dataset& ds, const std::vector<std::size_t>& idx, Eigen::Index unit) {
  int on = 0;
  for (std::size_t i : idx) on += ds.records[i].commitment[unit];
  return 2 * on > static_cast<int>(idx.size()) ? 1 : 0;
}

}  // namespace

CommitmentPrediction commitment_fixes(const Dataset& ds, const Eigen::VectorXd& load,
                                      const PredictorConfig& cfg) {
  cfg.validate();
  const auto train = ds.train();
  const auto valid = ds.validation();
  if (train.empty()) throw UsageError("dataset has no training records");
  if (valid.empty()) throw UsageError("dataset has no validation split");

  CommitmentPrediction out;
  const Eigen::Index units = train.front().commitment.size();
  const auto query = nearest_training(ds, load, cfg.k);

  // Neighbour lists of the validation records are shared by every unit.
  std::vector<std::vector<std::size_t>> valid_nn;
  valid_nn.reserve(valid.size());
  for (const UcRecord& r : valid) valid_nn.push_back(nearest_training(ds, r.load, cfg.k));

  for (Eigen::Index g = 0; g < units; ++g) {
    const auto unit = static_cast<std::size_t>(g);
    const int first = train.front().commitment[g];
    const bool constant = std::all_of(train.begin(), train.end(),
                                      [&](const UcRecord& r) { return r.commitment[g] == first; });
    if (constant) {
      out.constant_units.push_back(unit);
      out.fixes.emplace_back(unit, first);
      continue;
    }
    std::size_t correct = 0;
    for (std::size_t v = 0; v < valid.size(); ++v) {
      if (majority(ds, valid_nn[v], g) == valid[v].commitment[g]) ++correct;
    }
    const double accuracy = static_cast<double>(correct) / static_cast<double>(valid.size());
    out.validation_accuracy.emplace_back(unit, accuracy);
    if (correct == valid.size()) {
      out.predicted_units.push_back(unit);
      out.fixes.emplace_back(unit, majority(ds, query, g));
    }
  }
  return out;
}

std::string dataset_to_csv(const Dataset& ds) {
  std::ostringstream os;
  const Eigen::Index buses = ds.records.empty() ? 0 : ds.records.front().load.size();
  const Eigen::Index units = ds.records.empty() ? 0 : ds.records.front().commitment.size();
  for (Eigen::Index n = 0; n < buses; ++n) os << "load_" << n + 1 << ',';
  os << "cost";
  for (Eigen::Index g = 0; g < units; ++g) os << ",u_" << g + 1;
  os << '\n';
  char buf[32];
  for (const UcRecord& r : ds.records) {
    for (Eigen::Index n = 0; n < r.load.size(); ++n) {
      std::snprintf(buf, sizeof buf, "%.17g", r.load[n]);
      os << buf << ',';
    }
    std::snprintf(buf, sizeof buf, "%.17g", r.cost);
    os << buf;
    for (Eigen::Index g = 0; g < r.commitment.size(); ++g) os << ',' << r.commitment[g];
    os << '\n';
  }
  return os.str();
}

Dataset dataset_from_csv(std::string_view text, double train_fraction) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw ParseError("dataset:1", "missing header");

  std::vector<std::string> header;
  {
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) header.push_back(cell);
  }
  const auto cost_it = std::find(header.begin(), header.end(), "cost");
  if (cost_it == header.end()) throw ParseError("dataset:1", "header has no cost column");
  const auto buses = static_cast<Eigen::Index>(cost_it - header.begin());
  const auto units = static_cast<Eigen::Index>(header.end() - cost_it - 1);
  for (Eigen::Index n = 0; n < buses; ++n) {
    if (header[static_cast<std::size_t>(n)] != "load_" + std::to_string(n + 1)) {
      throw ParseError("dataset:1", "unexpected column '" + header[static_cast<std::size_t>(n)] + "'");
    }
  }
  for (Eigen::Index g = 0; g < units; ++g) {
    if (header[static_cast<std::size_t>(buses + 1 + g)] != "u_" + std::to_string(g + 1)) {
      throw ParseError("dataset:1", "unexpected commitment column");
    }
  }

  Dataset ds;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = "dataset:" + std::to_string(lineno);
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != header.size()) throw ParseError(where, "wrong number of fields");
    UcRecord r;
    r.load.resize(buses);
    r.commitment.resize(units);
    try {
      for (Eigen::Index n = 0; n < buses; ++n) r.load[n] = std::stod(cells[static_cast<std::size_t>(n)]);
      r.cost = std::stod(cells[static_cast<std::size_t>(buses)]);
      for (Eigen::Index g = 0; g < units; ++g) {
        const int u = std::stoi(cells[static_cast<std::size_t>(buses + 1 + g)]);
        if (u != 0 && u != 1) throw ParseError(where, "commitment must be 0 or 1");
        r.commitment[g] = u;
      }
    } catch (const std::logic_error&) {
      throw ParseError(where, "malformed number");
    }
    ds.records.push_back(std::move(r));
  }
  ds.attempts = ds.records.size();
  ds.train_count = train_size(ds.records.size(), train_fraction);
  return ds;
}

}  // namespace ucscreen
