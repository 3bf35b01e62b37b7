// infolaw: enumerate bounded complexities, build distance and confusion
// matrices, and check the exponential generalization law on them.
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "infolaw/compressor.hpp"
#include "infolaw/confusion.hpp"
#include "infolaw/distance.hpp"
#include "infolaw/enumerator.hpp"
#include "infolaw/error.hpp"
#include "infolaw/reports.hpp"

namespace fs = std::filesystem;
using namespace infolaw;

namespace {

struct RunConfig {
  std::string machine = "UPM-1";
  unsigned max_len = 22;
  std::uint64_t budget = 4096;
  std::uint64_t node_cap = 100'000'000;
  unsigned domain_bits = 4;
  bool domain_exact = false;
  std::string domain_file;
  std::string compressor = "lz78b";
  std::string out = ".";
  std::string cache;
  unsigned workers = 1;
  std::uint64_t seed = 0;
  double lambda = 1.0;
  std::string measure = "gprime";
  std::string distance = "dmax";
  bool identity_normalized = false;
};

constexpr int kUsageExit = 2;
constexpr int kErrorExitBase = 10;

const char* kExitCodes =
    "Exit status: 0 success, 2 usage error, otherwise 10 + error code:\n"
    "  11 invalid_input  12 malformed_code  13 malformed_input  14 resource_limit\n"
    "  15 condition_not_enumerated  16 unknown_machine  17 malformed_file\n"
    "  18 version_mismatch  19 one_sided_bound  20 domain_error  21 insufficient_data\n"
    "  22 singular_fit  23 plugin_failure  24 io_error\n"
    "Errors are printed to stderr as one line: error:<name>:<message>";

std::string cache_path(const RunConfig& c) {
  return c.cache.empty() ? (fs::path(c.out) / "table.csv").string() : c.cache;
}

std::vector<BitString> domain_of(const RunConfig& c) {
  if (!c.domain_file.empty()) {
    std::ifstream is(c.domain_file);
    if (!is) throw Error(Errc::io_error, "cannot read domain file " + c.domain_file);
    std::vector<BitString> items;
    std::string line;
    while (std::getline(is, line)) {
      if (line.empty() || line[0] == '#') continue;
      items.push_back(BitString::parse(line));
    }
    return items;
  }
  return c.domain_exact ? strings_of_length(c.domain_bits) : strings_up_to(c.domain_bits);
}

std::string domain_description(const RunConfig& c) {
  if (!c.domain_file.empty()) return "file:" + c.domain_file;
  return (c.domain_exact ? "exact:" : "upto:") + std::to_string(c.domain_bits);
}

// Everything that can change a result; the worker count and output
// directory are deliberately absent.
std::vector<std::pair<std::string, std::string>> config_echo(const RunConfig& c,
                                                             const std::string& command) {
  std::ostringstream lambda;
  lambda << c.lambda;
  return {{"command", command},
          {"machine", c.machine},
          {"max_len", std::to_string(c.max_len)},
          {"budget", std::to_string(c.budget)},
          {"node_cap", std::to_string(c.node_cap)},
          {"domain", domain_description(c)},
          {"compressor", c.compressor},
          {"lambda", lambda.str()},
          {"measure", c.measure},
          {"distance", c.distance},
          {"identity", c.identity_normalized ? "normalized" : "raw"},
          {"seed", std::to_string(c.seed)}};
}

nlohmann::json echo_json(const RunConfig& c, const std::string& command) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : config_echo(c, command)) j[k] = v;
  return j;
}

template <typename Writer>
void write_with_echo(const fs::path& path, const RunConfig& c, const std::string& command,
                     Writer&& write) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(Errc::io_error, "cannot write " + path.string());
  for (const auto& [k, v] : config_echo(c, command)) os << "# run." << k << '=' << v << '\n';
  write(os);
  if (!os) throw Error(Errc::io_error, "write failed for " + path.string());
}

fs::path out_file(const RunConfig& c, const std::string& name) {
  fs::create_directories(c.out);
  return fs::path(c.out) / name;
}

ComplexityTable load_cache(const RunConfig& c) {
  const std::string path = cache_path(c);
  if (!fs::exists(path)) {
    throw Error(Errc::io_error, "missing cache " + path + " (run `infolaw enumerate` first)");
  }
  return load_table(path);
}

int cmd_enumerate(const RunConfig& c) {
  const MachineSpec& spec = machine(parse_machine_id(c.machine));
  EnumerateOptions opts;
  opts.workers = c.workers;
  opts.node_cap = c.node_cap;
  const auto domain = domain_of(c);
  const ComplexityTable table = build_table(spec, domain, c.max_len, c.budget, opts);
  fs::path path = cache_path(c);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  write_with_echo(path, c, "enumerate", [&](std::ostream& os) { write_table(os, table); });
  std::size_t entries = 0;
  for (const auto& [x, s] : table.slices) entries += s.k.size();
  std::cout << "wrote " << path.string() << " conditions=" << table.slices.size()
            << " entries=" << entries << '\n';
  return 0;
}

int cmd_kc(const RunConfig& c, const std::string& x, const std::string& condition) {
  const ComplexityTable table = load_cache(c);
  const auto k = k_cond(table, BitString::parse(x), BitString::parse(condition));
  if (k) {
    std::cout << *k << '\n';
  } else {
    std::cout << ">" << table.max_len << '\n';
  }
  return 0;
}

int cmd_dist(const RunConfig& c, const std::string& source) {
  const auto domain = domain_of(c);
  const auto variant = c.identity_normalized ? IdentityVariant::normalized : IdentityVariant::raw;
  DistanceMatrix m;
  if (c.distance == "hamming") {
    m = hamming_matrix(domain);
  } else if (c.distance == "euclid") {
    m = euclid_matrix(domain);
  } else if (c.distance == "discrete") {
    m = discrete_matrix(domain);
  } else if (c.distance == "shifted_hamming") {
    m = shifted_hamming_matrix(domain);
  } else if (c.distance == "ncd" || source == "compressor") {
    m = compressor_matrix(Compressor::from_selection(c.compressor), domain, c.distance);
  } else if (c.distance == "dsum" || c.distance == "dmax") {
    const ComplexityTable table = load_cache(c);
    m = c.distance == "dsum" ? dsum_matrix(table, domain, variant) : dmax_matrix(table, domain, variant);
  } else {
    throw Error(Errc::invalid_input, "unknown distance \"" + c.distance + "\"");
  }
  const fs::path path = out_file(c, "distance_" + c.distance + ".csv");
  write_with_echo(path, c, "dist", [&](std::ostream& os) { write_distance_matrix(os, m); });
  std::cout << "wrote " << path.string() << " items=" << m.size() << '\n';
  return 0;
}

int cmd_confusion(const RunConfig& c, const std::string& source, const std::string& distances) {
  ConfusionMatrix m;
  if (source == "synth") {
    if (distances.empty()) throw Error(Errc::invalid_input, "synth confusion needs --distances");
    m = synth_confusion(load_distance_matrix(distances), c.lambda);
  } else if (source == "k") {
    m = k_confusion(load_cache(c), domain_of(c));
  } else {
    throw Error(Errc::invalid_input, "unknown confusion source \"" + source + "\"");
  }
  const fs::path path = out_file(c, "confusion.csv");
  write_with_echo(path, c, "confusion", [&](std::ostream& os) { write_confusion_matrix(os, m); });
  std::cout << "wrote " << path.string() << " items=" << m.size() << '\n';
  return 0;
}

int cmd_law(const RunConfig& c, const std::string& matrix, const std::string& distances) {
  const ConfusionMatrix m = load_confusion_matrix(matrix);
  const DistanceMatrix d = load_distance_matrix(distances);
  const Measure measure = parse_measure(c.measure);
  const LawReport r = law_verify(m, d, measure);

  nlohmann::json report = to_json(r);
  report["sandwich"] = to_json(g_sandwich(m), m);
  save_report(report, echo_json(c, "law"), out_file(c, "law_report.json"));

  // The (d, G) pairs behind the fit, ready for `infolaw fit`.
  write_with_echo(out_file(c, "law_pairs.csv"), c, "law", [&](std::ostream& os) {
    os << "d,g\n" << std::setprecision(17);
    for (std::size_t a = 0; a < m.size(); ++a) {
      for (std::size_t b = a + 1; b < m.size(); ++b) {
        const double g = measure == Measure::g ? g_measure(m, a, b) : g_prime(m, a, b);
        os << d(a, b) << ',' << g << '\n';
      }
    }
  });
  std::cout << "slope=" << r.slope << " intercept=" << r.intercept << " r=" << r.r << " r2=" << r.r2
            << " pairs=" << r.pairs << '\n';
  return 0;
}

int cmd_fit(const RunConfig& c, const std::string& pairs_file) {
  std::ifstream is(pairs_file);
  if (!is) throw Error(Errc::io_error, "cannot read " + pairs_file);
  std::vector<std::pair<double, double>> pairs;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#' || line == "d,g") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw Error(Errc::malformed_file, "bad pairs row \"" + line + "\"");
    try {
      pairs.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw Error(Errc::malformed_file, "bad pairs row \"" + line + "\"");
    }
  }
  const FitReport r = fit_models(pairs);
  save_report(to_json(r), echo_json(c, "fit"), out_file(c, "fit_report.json"));
  std::cout << "winner=" << model_name(r.winner) << '\n';
  return 0;
}

int cmd_check(const RunConfig& c, const std::string& metric) {
  const DistanceMatrix m = load_distance_matrix(metric);
  const AdmissibilityReport r = check_admissible(m);
  save_report(to_json(r, m), echo_json(c, "check"), out_file(c, "admissibility_report.json"));
  std::cout << "identity_ok=" << r.identity_ok << " symmetry_ok=" << r.symmetry_ok
            << " triangle_violations=" << r.triangle_violation_count
            << " normalized_ok=" << (r.normalized_ok ? "true" : "false") << '\n';
  return 0;
}

int cmd_invariance(const RunConfig& c, const std::string& cache1, const std::string& cache2,
                   std::size_t max_output) {
  EnumerateOptions opts;
  opts.workers = c.workers;
  opts.node_cap = c.node_cap;
  const auto domain = domain_of(c);
  auto table_for = [&](MachineId id, const std::string& cache) {
    if (!cache.empty()) return load_table(cache);
    return build_table(machine(id), domain, c.max_len, c.budget, opts);
  };
  const ComplexityTable t1 = table_for(MachineId::upm1, cache1);
  const ComplexityTable t2 = table_for(MachineId::upm2, cache2);
  const InvarianceReport r = invariance_gap(t1, t2, max_output);
  nlohmann::json report = to_json(r);
  report["machines"] = {machine_name(t1.machine), machine_name(t2.machine)};
  report["max_output_bits"] = max_output;
  save_report(report, echo_json(c, "invariance"), out_file(c, "invariance_report.json"));
  std::cout << "compared=" << r.compared << " max_gap=" << r.max_gap << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounded Kolmogorov complexity, information distance and confusability toolkit",
               "infolaw"};
  app.footer(kExitCodes);
  app.set_config("--config", "", "key=value file overriding defaults");
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig c;
  app.add_option("--machine", c.machine, "Reference machine (UPM-1 or UPM-2)")->capture_default_str();
  app.add_option("--max-len", c.max_len, "Program length bound L in bits")->capture_default_str();
  app.add_option("--budget", c.budget, "Step budget T")->capture_default_str();
  app.add_option("--node-cap", c.node_cap, "Program-tree node cap")->capture_default_str();
  app.add_option("--domain-bits", c.domain_bits, "Domain: all strings up to n bits")->capture_default_str();
  app.add_flag("--domain-exact", c.domain_exact, "Domain: only strings of exactly n bits");
  app.add_option("--domain-file", c.domain_file, "Domain: one bit string (b-prefixed) per line");
  app.add_option("--compressor", c.compressor, "lz78b or a plugin executable path")->capture_default_str();
  app.add_option("--lambda", c.lambda, "Sharpness for synthetic confusion")->capture_default_str();
  app.add_option("--measure", c.measure, "g or gprime")->capture_default_str();
  app.add_option("--distance", c.distance, "dsum, dmax, hamming, euclid, ncd, discrete, shifted_hamming")
      ->capture_default_str();
  app.add_flag("--identity-normalized", c.identity_normalized,
               "Subtract the smaller self-distance from dsum/dmax");
  app.add_option("--cache", c.cache, "Complexity table path (default OUT/table.csv)");
  app.add_option("--out", c.out, "Output directory")->capture_default_str();
  app.add_option("--workers", c.workers, "Enumeration worker threads (never changes output)")
      ->capture_default_str();
  app.add_option("--seed", c.seed, "Seed recorded in every output")->capture_default_str();

  auto* enumerate_cmd = app.add_subcommand("enumerate", "Enumerate halting programs and write the cache");

  std::string kc_x, kc_condition = "b";
  auto* kc_cmd = app.add_subcommand("kc", "Look up K(x) or K(x|condition) in the cache");
  kc_cmd->add_option("x", kc_x, "Output string, e.g. b0101")->required();
  kc_cmd->add_option("--condition", kc_condition, "Condition string")->capture_default_str();

  std::string dist_source = "table";
  auto* dist_cmd = app.add_subcommand("dist", "Write a distance matrix over the domain");
  dist_cmd->add_option("--source", dist_source, "table or compressor (for dsum/dmax)")->capture_default_str();

  std::string conf_source = "synth", conf_distances;
  auto* conf_cmd = app.add_subcommand("confusion", "Write a confusion matrix");
  conf_cmd->add_option("--source", conf_source, "synth (from --distances) or k (from the cache)")
      ->capture_default_str();
  conf_cmd->add_option("--distances", conf_distances, "Distance matrix file for synth");

  std::string law_matrix, law_distances;
  auto* law_cmd = app.add_subcommand("law", "Fit ln G (or ln G') against a distance matrix");
  law_cmd->add_option("--matrix", law_matrix, "Confusion matrix file")->required();
  law_cmd->add_option("--distances", law_distances, "Distance matrix file")->required();

  std::string fit_pairs;
  auto* fit_cmd = app.add_subcommand("fit", "Compare exponential, Gaussian and power laws");
  fit_cmd->add_option("--pairs", fit_pairs, "CSV of d,g rows")->required();

  std::string check_metric;
  auto* check_cmd = app.add_subcommand("check", "Check admissible-distance axioms of a matrix");
  check_cmd->add_option("--metric", check_metric, "Distance matrix file")->required();

  std::string inv_cache1, inv_cache2;
  std::size_t inv_max_output = SIZE_MAX;
  auto* inv_cmd = app.add_subcommand("invariance", "Compare UPM-1 and UPM-2 complexities");
  inv_cmd->add_option("--cache1", inv_cache1, "Existing UPM-1 table");
  inv_cmd->add_option("--cache2", inv_cache2, "Existing UPM-2 table");
  inv_cmd->add_option("--max-output", inv_max_output, "Only outputs up to this many bits");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsageExit;
  }

  try {
    if (*enumerate_cmd) return cmd_enumerate(c);
    if (*kc_cmd) return cmd_kc(c, kc_x, kc_condition);
    if (*dist_cmd) return cmd_dist(c, dist_source);
    if (*conf_cmd) return cmd_confusion(c, conf_source, conf_distances);
    if (*law_cmd) return cmd_law(c, law_matrix, law_distances);
    if (*fit_cmd) return cmd_fit(c, fit_pairs);
    if (*check_cmd) return cmd_check(c, check_metric);
    if (*inv_cmd) return cmd_invariance(c, inv_cache1, inv_cache2, inv_max_output);
  } catch (const Error& e) {
    std::cerr << "error:" << errc_name(e.code()) << ':' << e.what() << '\n';
    return kErrorExitBase + static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error:internal:" << e.what() << '\n';
    return 1;
  }
  return kUsageExit;
}
