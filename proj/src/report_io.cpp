#include "infolaw/reports.hpp"

#include <fstream>

#include "infolaw/error.hpp"

namespace infolaw {

using nlohmann::json;

json to_json(const LawReport& r) {
  return json{{"pairs", r.pairs},         {"slope", r.slope},
              {"intercept", r.intercept}, {"r", r.r},
              {"r2", r.r2},               {"min_residual", r.min_residual},
              {"max_residual", r.max_residual},
              {"measure", measure_name(r.measure)},
              {"distance", r.distance},   {"A", r.a()},
              {"B", r.b()}};
}

json to_json(const FitReport& r) {
  json j;
  for (Model m : {Model::exponential, Model::gaussian, Model::power}) {
    const ModelFit& f = r.fit(m);
    j[std::string(model_name(m))] = {{"ln_A", f.ln_a}, {"B", f.b}, {"rss", f.rss}};
  }
  j["winner"] = model_name(r.winner);
  return j;
}

json to_json(const AdmissibilityReport& r, const DistanceMatrix& m) {
  json violations = json::array();
  for (const auto& v : r.triangle_violations) {
    violations.push_back({{"x", m.domain[v.i].text()},
                          {"y", m.domain[v.j].text()},
                          {"z", m.domain[v.k].text()},
                          {"excess", v.excess}});
  }
  json sums = json::object();
  for (std::size_t i = 0; i < r.normalization_sums.size(); ++i) {
    sums[m.domain[i].text()] = r.normalization_sums[i];
  }
  return json{{"distance", m.name},
              {"parameters", m.parameters},
              {"identity_ok", r.identity_ok},
              {"symmetry_ok", r.symmetry_ok},
              {"triangle_violation_count", r.triangle_violation_count},
              {"triangle_violations", violations},
              {"worst_triangle_slack", r.worst_triangle_slack},
              {"normalization_sums", sums},
              {"normalization_note", AdmissibilityReport::normalization_note},
              {"normalized_ok", r.normalized_ok}};
}

json to_json(const InvarianceReport& r) {
  json hist = json::object();
  for (const auto& [gap, count] : r.gap_histogram) hist[std::to_string(gap)] = count;
  return json{{"compared", r.compared},
              {"max_gap", r.max_gap},
              {"gap_histogram", hist},
              {"coverage_mismatch", r.coverage_mismatch},
              {"warnings", r.warnings}};
}

json to_json(const SandwichReport& r, const ConfusionMatrix& m) {
  json j{{"pairs", r.pairs}, {"violations", r.violations}, {"c2", r.c2}};
  if (r.pairs > 0) j["c2_witness"] = {m.domain[r.c2_a].text(), m.domain[r.c2_b].text()};
  return j;
}

json to_json(const BoundsReport& r, const ConfusionMatrix& m) {
  json rows = json::object();
  for (std::size_t a = 0; a < r.lower_fraction.size(); ++a) rows[m.domain[a].text()] = r.lower_fraction[a];
  return json{{"c_upper", r.c_upper}, {"uncovered_pairs", r.uncovered_pairs}, {"lower_fraction", rows}};
}

void save_report(json report, const json& metadata, const std::filesystem::path& path) {
  report["metadata"] = metadata;
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(Errc::io_error, "cannot write " + path.string());
  os << report.dump(2) << '\n';
}

}  // namespace infolaw
