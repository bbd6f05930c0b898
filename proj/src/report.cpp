#include "ucscreen/scheme.hpp"

#include <cmath>
#include <limits>

namespace ucscreen {

using nlohmann::json;

std::string to_string(Scheme s) {
  return "s" + std::to_string(static_cast<int>(s) + 1);
}

Scheme parse_scheme(std::string_view text) {
  if (text.size() == 2 && (text[0] == 's' || text[0] == 'S') && text[1] >= '1' && text[1] <= '7') {
    return static_cast<Scheme>(text[1] - '1');
  }
  throw UsageError("unknown scheme '" + std::string(text) + "' (expected s1..s7)");
}

namespace {

json optional_number(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

std::optional<double> read_optional(const json& v) {
  if (v.is_null()) return std::nullopt;
  return v.get<double>();
}

}  // namespace

json to_json(const RunReport& r) {
  json doc;
  doc["case"] = r.case_id;
  doc["scheme"] = r.scheme;
  doc["redundant_rows"] = r.redundant_rows;
  doc["kept_rows"] = r.kept_rows;
  doc["attribution"] = r.attribution;
  doc["omega"] = json::object();
  for (const auto& [label, w] : r.omega) doc["omega"][label] = std::isfinite(w) ? json(w) : json(nullptr);
  doc["n_v"] = r.n_v;
  doc["lp_count"] = r.lp_count;
  doc["bound_lp_count"] = r.bound_lp_count;
  doc["lfgs_lp_count"] = r.lfgs_lp_count;
  doc["matrix_op_count"] = r.matrix_op_count;
  doc["r"] = r.r;
  doc["percentage_removed"] = r.percentage_removed;
  doc["num_generators"] = r.num_generators;
  doc["num_candidates"] = r.num_candidates;
  doc["gap"] = {{"required_zero", r.gap.required_zero},
                {"full_status", r.gap.full_status},
                {"reduced_status", r.gap.reduced_status},
                {"full_cost", r.gap.full_cost},
                {"reduced_cost", r.gap.reduced_cost},
                {"gap", std::isfinite(r.gap.gap) ? json(r.gap.gap) : json(nullptr)},
                {"commitment_match", r.gap.commitment_match}};
  json fixed = json::array();
  for (const auto& [unit, value] : r.cuts.fixed_units) fixed.push_back({unit, value});
  doc["cuts"] = {{"cost_bound", optional_number(r.cuts.cost_bound)},
                 {"fixed_units", fixed},
                 {"beta", optional_number(r.cuts.beta)}};
  if (r.timings) {
    doc["timings"] = {{"bounds", r.timings->bounds}, {"vgs", r.timings->vgs}, {"lfgs", r.timings->lfgs}};
  } else {
    doc["timings"] = nullptr;
  }
  doc["diagnostics"] = r.diagnostics;
  doc["config"] = r.config;
  return doc;
}

RunReport report_from_json(const json& doc) {
  RunReport r;
  try {
    r.case_id = doc.at("case").get<std::string>();
    r.scheme = doc.at("scheme").get<std::string>();
    r.redundant_rows = doc.at("redundant_rows").get<std::vector<std::string>>();
    r.kept_rows = doc.at("kept_rows").get<std::vector<std::string>>();
    r.attribution = doc.at("attribution").get<std::map<std::string, std::string>>();
    for (const auto& [label, w] : doc.at("omega").items()) {
      r.omega[label] = w.is_null() ? std::nan("") : w.get<double>();
    }
    r.n_v = doc.at("n_v").get<std::size_t>();
    r.lp_count = doc.at("lp_count").get<std::int64_t>();
    r.bound_lp_count = doc.at("bound_lp_count").get<std::int64_t>();
    r.lfgs_lp_count = doc.at("lfgs_lp_count").get<std::int64_t>();
    r.matrix_op_count = doc.at("matrix_op_count").get<std::int64_t>();
    r.r = doc.at("r").get<double>();
    r.percentage_removed = doc.at("percentage_removed").get<double>();
    r.num_generators = doc.at("num_generators").get<std::size_t>();
    r.num_candidates = doc.at("num_candidates").get<std::size_t>();
    const json& g = doc.at("gap");
    r.gap.required_zero = g.at("required_zero").get<bool>();
    r.gap.full_status = g.at("full_status").get<std::string>();
    r.gap.reduced_status = g.at("reduced_status").get<std::string>();
    r.gap.full_cost = g.at("full_cost").get<double>();
    r.gap.reduced_cost = g.at("reduced_cost").get<double>();
    r.gap.gap = g.at("gap").is_null() ? std::numeric_limits<double>::infinity() : g.at("gap").get<double>();
    r.gap.commitment_match = g.at("commitment_match").get<bool>();
    const json& c = doc.at("cuts");
    r.cuts.cost_bound = read_optional(c.at("cost_bound"));
    r.cuts.beta = read_optional(c.at("beta"));
    for (const json& f : c.at("fixed_units")) {
      r.cuts.fixed_units.emplace_back(f.at(0).get<int>(), f.at(1).get<int>());
    }
    if (const json& t = doc.at("timings"); !t.is_null()) {
      r.timings = PhaseTimes{t.at("bounds").get<double>(), t.at("vgs").get<double>(),
                             t.at("lfgs").get<double>()};
    }
    r.diagnostics = doc.at("diagnostics").get<std::vector<std::string>>();
    r.config = doc.at("config");
  } catch (const json::exception& e) {
    throw ParseError("report", e.what());
  }
  return r;
}

}  // namespace ucscreen
