#ifndef UCSCREEN_SCHEME_HPP
#define UCSCREEN_SCHEME_HPP

#include "ucscreen/case_io.hpp"
#include "ucscreen/oracle.hpp"
#include "ucscreen/predictors.hpp"
#include "ucscreen/screening.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ucscreen {

/// Benchmarked screening schemes:
///   s1 VGS only, s2 LFGS only, s3 ensemble, s4 ensemble over a load range,
///   s5 ensemble + cost cut, s6 ensemble + commitment cut, s7 both cuts.
enum class Scheme { s1, s2, s3, s4, s5, s6, s7 };

std::string to_string(Scheme s);
Scheme parse_scheme(std::string_view text);

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int input_error = 2;
inline constexpr int screening_infeasible = 3;
inline constexpr int property_violation = 4;
}  // namespace exit_code

inline constexpr double kGapTol = 1e-6;

struct SchemeConfig {
  Scheme scheme = Scheme::s3;
  std::optional<double> beta;
  std::optional<double> epsilon;
  std::optional<int> k;
  std::optional<std::filesystem::path> dataset;
  bool oracle_cost = false;
  /// Fix every unit to the MILP optimum instead of predicting (s6/s7).
  bool oracle_commit = false;
  std::uint64_t seed = 42;
  int jobs = 1;
  bool record_timings = false;
  /// Rows removed in addition to the screening result. Fault injection for
  /// negative controls; never set in normal runs.
  std::vector<RowLabel> force_remove;

  /// Throws UsageError if a scheme prerequisite is missing.
  void validate() const;
  /// Configuration echo written into reports (jobs excluded: reports must
  /// not depend on it).
  nlohmann::json echo() const;
};

struct GapSummary {
  bool required_zero = true;
  std::string full_status;
  std::string reduced_status;
  double full_cost = 0.0;
  double reduced_cost = 0.0;
  double gap = 0.0;
  bool commitment_match = false;
  bool operator==(const GapSummary&) const = default;
};

struct CutSummary {
  std::optional<double> cost_bound;
  std::vector<std::pair<int, int>> fixed_units;  // (1-based unit, value)
  std::optional<double> beta;
  bool operator==(const CutSummary&) const = default;
};

struct RunReport {
  std::string case_id;
  std::string scheme;
  std::vector<std::string> redundant_rows;
  std::vector<std::string> kept_rows;
  std::map<std::string, std::string> attribution;
  std::map<std::string, double> omega;
  std::size_t n_v = 0;
  std::int64_t lp_count = 0;
  std::int64_t bound_lp_count = 0;
  std::int64_t lfgs_lp_count = 0;
  std::int64_t matrix_op_count = 0;
  /// Removed rows per screening LP.
  double r = 0.0;
  double percentage_removed = 0.0;
  std::size_t num_generators = 0;
  std::size_t num_candidates = 0;
  GapSummary gap;
  CutSummary cuts;
  std::optional<PhaseTimes> timings;
  std::vector<std::string> diagnostics;
  nlohmann::json config;

  bool operator==(const RunReport&) const = default;
};

nlohmann::json to_json(const RunReport& report);
RunReport report_from_json(const nlohmann::json& doc);

/// Everything a run produced, for callers that need the instances too.
struct SchemeRun {
  RunReport report;
  ScreeningReport screening;
  UcInstance full;
  UcInstance screened;
  UcInstance reduced;
  CutSet cuts;
};

/// Executes one scheme end to end: cuts, screening, reduction and the
/// full-vs-reduced gap check.
SchemeRun run_scheme(const GridCase& grid, const SchemeConfig& config);

struct PropertyResult {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct VerifyResult {
  RunReport report;
  std::vector<PropertyResult> properties;

  bool passed() const;
  /// First failing property, if any.
  const PropertyResult* first_failure() const;
  nlohmann::json to_json() const;
};

/// Runs a scheme and checks soundness against the oracle, ensemble
/// equivalence, box-maximum exactness, LP-count bookkeeping and zero gap.
VerifyResult verify_scheme(const GridCase& grid, const SchemeConfig& config);

}  // namespace ucscreen

#endif
