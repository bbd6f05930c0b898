#ifndef UCSCREEN_CASE_IO_HPP
#define UCSCREEN_CASE_IO_HPP

#include <Eigen/Dense>

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ucscreen {

struct Line {
  int from_bus = 0;
  int to_bus = 0;
  double susceptance = 0.0;  // p.u.
  double f_min = 0.0;        // MW, in from -> to orientation
  double f_max = 0.0;        // MW
  bool operator==(const Line&) const = default;
};

struct Generator {
  int bus = 0;
  double x_min = 0.0;  // MW
  double x_max = 0.0;  // MW
  double cost = 0.0;   // $/MWh
  bool operator==(const Generator&) const = default;
};

/**
 * @brief Physical description of a DC network for single-period UC.
 *
 * Bus ids are arbitrary distinct integers; `nominal_load` follows the order
 * of `buses`. Lines are oriented from_bus -> to_bus as written.
 */
struct GridCase {
  std::string name;
  std::vector<int> buses;
  std::vector<Line> lines;
  std::vector<Generator> generators;
  Eigen::VectorXd nominal_load;
  int slack_bus = 0;

  std::size_t num_buses() const { return buses.size(); }
  std::size_t num_lines() const { return lines.size(); }
  std::size_t num_generators() const { return generators.size(); }

  /// Position of `bus` in `buses`; throws ValidationError if undeclared.
  std::size_t bus_index(int bus) const;

  bool operator==(const GridCase&) const = default;
};

/// Dense |lines| x |buses| sensitivity of line flows to nodal injections
/// (injection at bus n balanced by withdrawal at the slack bus).
struct PtdfMatrix {
  Eigen::MatrixXd entries;
  int slack_bus = 0;
};

/// Parses the JSON case format. Throws ParseError on schema problems and
/// ValidationError on invariant violations (undeclared bus, bound
/// inversion, disconnected network, ...).
GridCase parse_case(std::string_view text);

GridCase load_case(const std::filesystem::path& path);

std::string serialize_case(const GridCase& grid);

/// Checks every GridCase invariant; throws ValidationError naming the
/// offending element.
void validate_case(const GridCase& grid);

PtdfMatrix compute_ptdf(const GridCase& grid);

/// Bus-to-generator incidence: column g has a single 1 at the row of
/// generator g's bus.
Eigen::MatrixXd generator_incidence(const GridCase& grid);

/// DC flows from a full nodal solve (no PTDF): injections must sum to zero.
/// Used to cross-check the PTDF.
Eigen::VectorXd dc_flows(const GridCase& grid, const Eigen::VectorXd& injection);

}  // namespace ucscreen

#endif
