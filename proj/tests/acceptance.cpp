// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "infolaw/confusion.hpp"
#include "infolaw/distance.hpp"
#include "infolaw/enumerator.hpp"
#include "infolaw/error.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace infolaw;

namespace {

constexpr unsigned kL = 22;
constexpr std::uint64_t kT = 4096;

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const Error& e) {
    o = {false, std::string("error ") + std::string(errc_name(e.code())) + ": " + e.what()};
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!o.pass) ++failures;
  std::printf("%s  criterion %2d  %-28s %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, title,
              o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

EnumerateOptions all_workers() {
  EnumerateOptions o;
  o.workers = 0;
  return o;
}

// Tables shared by several criteria, built on first use.
const ComplexityTable& table_upto4() {
  static const ComplexityTable t = [] {
    const auto domain = strings_up_to(4);
    return build_table(machine(MachineId::upm1), domain, kL, kT, all_workers());
  }();
  return t;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string("\"") + INFOLAW_CLI_PATH + "\" " + args + " > \"" +
                          log.string() + "\" 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

Outcome prefix_kraft() {
  EnumerateOptions opts = all_workers();
  opts.collect_programs = true;
  const auto start = std::chrono::steady_clock::now();
  const auto r = enumerate(machine(MachineId::upm1), BitString{}, kL, kT, opts);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  // Independent recheck: sort the program texts; in lexicographic order a
  // prefix sits immediately before some string it prefixes.
  std::vector<std::string> progs;
  progs.reserve(r.halting_programs.size());
  for (const auto& p : r.halting_programs) progs.push_back(p.to_bitstring().digits());
  std::sort(progs.begin(), progs.end());
  std::size_t prefix_pairs = 0;
  for (std::size_t i = 1; i < progs.size(); ++i) {
    if (progs[i].starts_with(progs[i - 1])) ++prefix_pairs;
  }
  long double kraft = 0;
  for (const auto& p : progs) kraft += std::ldexp(1.0L, -static_cast<int>(p.size()));

  const bool pass = prefix_pairs == 0 && is_prefix_free(r.halting_programs) && kraft <= 1.0L &&
                    kraft_sum(r.slice.length_histogram) <= 1.0 && secs < 300.0;
  return {pass, fmt("programs=%zu prefix_pairs=%zu kraft=%.9Lf enumerate=%.1fs (limit 300s)",
                    progs.size(), prefix_pairs, kraft, secs)};
}

Outcome oracle_regression() {
  const auto& upm1 = machine(MachineId::upm1);
  const auto brute = oracle::brute_force(upm1, BitString{}, 6, kT);
  const auto& t = table_upto4();
  const auto k = [&](const char* s) { return k_plain(t, BitString::parse(s)); };
  const auto b = [&](const char* s) -> std::optional<unsigned> {
    const auto it = brute.k.find(BitString::parse(s));
    return it == brute.k.end() ? std::nullopt : std::optional<unsigned>(it->second);
  };
  const bool frozen = k("b") == 3u && k("b0") == 6u && k("b1") == 6u;
  const bool agrees = b("b") == 3u && b("b0") == 6u && b("b1") == 6u;
  // Everything the oracle found at <= 6 bits must be what the full run says.
  std::size_t mismatches = 0;
  for (const auto& [x, len] : brute.k) mismatches += k_plain(t, x) != len;
  return {frozen && agrees && mismatches == 0,
          fmt("K(e)=%u K(0)=%u K(1)=%u oracle_entries=%zu mismatches=%zu", k("b").value_or(0),
              k("b0").value_or(0), k("b1").value_or(0), brute.k.size(), mismatches)};
}

Outcome sum_max_sandwich() {
  const auto& t = table_upto4();
  const auto domain = strings_up_to(4);
  std::size_t pairs = 0, bad = 0;
  for (const auto& a : domain) {
    for (const auto& b : domain) {
      const unsigned ab = *k_cond(t, b, a), ba = *k_cond(t, a, b);
      const unsigned mx = d_max(t, a, b), sm = d_sum(t, a, b);
      ++pairs;
      if (mx != std::max(ab, ba) || sm != ab + ba || !(mx <= sm && sm <= 2 * mx)) ++bad;
    }
  }
  return {bad == 0, fmt("pairs=%zu violations=%zu", pairs, bad)};
}

Outcome counting() {
  const auto& slice = slice_for(table_upto4(), BitString{});
  std::string detail;
  bool pass = true;
  for (unsigned n = 1; n <= 8; ++n) {
    std::uint64_t count = 0;
    for (const auto& [x, k] : slice.k) count += k < n;
    const auto lib = counting_check(table_upto4(), n);
    const bool ok = count < (std::uint64_t{1} << n) && lib.count == count && lib.pass;
    pass = pass && ok;
    detail += fmt("n=%u:%llu ", n, static_cast<unsigned long long>(count));
  }
  return {pass, detail + "(count of K<n, bound 2^n)"};
}

Outcome upper_semicomputable() {
  const auto domain = strings_up_to(4);
  const auto big = build_table(machine(MachineId::upm1), domain, kL + 2, 4 * kT, all_workers());
  std::size_t compared = 0, raised = 0, lost = 0;
  for (const auto& [cond, slice] : table_upto4().slices) {
    for (const auto& [x, k] : slice.k) {
      ++compared;
      const auto k2 = k_cond(big, x, cond);
      if (!k2) {
        ++lost;
      } else if (*k2 > k) {
        ++raised;
      }
    }
  }
  return {raised == 0 && lost == 0,
          fmt("entries=%zu increased=%zu vanished=%zu (L=%u T=%llu vs L=%u T=%llu)", compared,
              raised, lost, kL, static_cast<unsigned long long>(kT), kL + 2,
              static_cast<unsigned long long>(4 * kT))};
}

struct Spread {
  double lo = INFINITY, hi = -INFINITY;
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
};

std::string law_summary(const std::vector<BitString>& domain) {
  const auto& t = table_upto4();
  const auto m = k_confusion(t, domain);
  const auto d = dmax_matrix(t, domain, IdentityVariant::raw);
  Spread ds, gs;
  for (std::size_t a = 0; a < domain.size(); ++a) {
    for (std::size_t b = a + 1; b < domain.size(); ++b) {
      ds.add(d(a, b));
      gs.add(g_prime(m, a, b));
    }
  }
  std::string s = fmt("d_max in [%g,%g] G' in [%.6g,%.6g] G'>G violations=%zu", ds.lo, ds.hi, gs.lo,
                      gs.hi, g_sandwich(m).violations);
  try {
    const auto law = law_verify(m, d, Measure::g_prime);
    s += fmt(" r=%.4f slope=%.4f", -law.r, law.slope);
  } catch (const Error& e) {
    s += std::string(" fit: ") + std::string(errc_name(e.code()));
  }
  return s;
}

Outcome law_pipeline() {
  const auto domain = strings_of_length(4);
  const auto& t = table_upto4();
  const auto m = k_confusion(t, domain);
  const auto d = dmax_matrix(t, domain, IdentityVariant::raw);
  const auto sandwich = g_sandwich(m);
  const std::string summary = law_summary(domain);
  const double lo = -1.25 * std::log(2.0), hi = -0.75 * std::log(2.0);
  LawReport law;
  try {
    law = law_verify(m, d, Measure::g_prime);
  } catch (const Error&) {
    return {false, summary + fmt(" (want r>=0.95, slope in [%.4f,%.4f])", lo, hi)};
  }
  // law.r correlates ln G' with d_max; the criterion uses -d_max.
  const double r = -law.r;
  const bool pass = r >= 0.95 && sandwich.violations == 0 && law.slope >= lo && law.slope <= hi;
  return {pass, summary + fmt(" (want r>=0.95, slope in [%.4f,%.4f])", lo, hi)};
}

Outcome synthetic_law() {
  const auto domain = strings_of_length(4);
  const auto m = synth_confusion(hamming_matrix(domain), 0.5);
  const auto law = law_verify(m, hamming_matrix(domain), Measure::g_prime);
  const double target = -0.5 * std::log(2.0);
  const bool pass = std::abs(law.slope - target) <= 1e-9 && law.r2 >= 1 - 1e-9;
  return {pass, fmt("slope=%.12f target=%.12f r2=%.12f", law.slope, target, law.r2)};
}

Outcome model_recovery() {
  std::vector<double> ds;
  for (int i = 2; i <= 20; ++i) ds.push_back(0.5 * i);
  struct Case {
    Model truth;
    std::function<double(double)> g;
  };
  const std::vector<Case> cases{{Model::exponential, [](double d) { return std::exp(-0.5 * d); }},
                                {Model::gaussian, [](double d) { return std::exp(-0.1 * d * d); }},
                                {Model::power, [](double d) { return std::pow(d, -2.0); }}};
  bool pass = true;
  std::string detail;
  for (const auto& c : cases) {
    std::vector<std::pair<double, double>> pts;
    for (double d : ds) pts.emplace_back(d, c.g(d));
    const auto fit = fit_models(pts);
    const double own = fit.fit(c.truth).rss;
    double worst_margin = INFINITY;
    for (Model rival : {Model::exponential, Model::gaussian, Model::power}) {
      if (rival == c.truth) continue;
      const double rss = fit.fit(rival).rss;
      worst_margin = std::min(worst_margin, own > 0 ? rss / own : (rss > 0 ? INFINITY : 1.0));
    }
    const bool ok = fit.winner == c.truth && worst_margin >= 10.0;
    pass = pass && ok;
    detail += fmt("%s:winner=%s margin=%.3g ", std::string(model_name(c.truth)).c_str(),
                  std::string(model_name(fit.winner)).c_str(), worst_margin);
    if (c.truth == Model::exponential) {
      const double rel = std::abs(fit.exponential.b - 0.5) / 0.5;
      pass = pass && rel <= 0.05;
      detail += fmt("B=%.12f ", fit.exponential.b);
    }
  }
  return {pass, detail};
}

Outcome shannon_fano_band() {
  std::size_t violations = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(seed);
    const std::size_t k = std::uniform_int_distribution<std::size_t>(1, 64)(rng);
    std::vector<double> w(k);
    std::exponential_distribution<double> expo(1.0);
    for (auto& x : w) x = expo(rng);
    double total = 0;
    for (double x : w) total += x;
    DistributionSpec p;
    for (std::size_t i = 0; i < k; ++i) {
      p.outcomes.push_back(binary(i + 1));
      p.probabilities.push_back(w[i] / total);
    }
    p.generator = "seed=" + std::to_string(seed);
    const auto code = shannon_fano(p);

    // Independent recomputation.
    double kraft = 0, h = 0, el = 0;
    for (double q : p.probabilities) {
      const double len = std::ceil(-std::log2(q));
      kraft += std::exp2(-len);
      h -= q * std::log2(q);
      el += q * len;
    }
    const bool ok = kraft <= 1.0 + 1e-12 && h <= el + 1e-12 && el < h + 1 &&
                    code.kraft <= 1.0 + 1e-12 && std::abs(code.expected_length - el) < 1e-9 &&
                    std::abs(code.entropy - h) < 1e-9 && code.within_bound;
    violations += !ok;
  }
  return {violations == 0, fmt("distributions=100 violations=%zu", violations)};
}

Outcome determinism() {
  // Library level: the parallel kernel against itself and the serial walk.
  const auto& upm1 = machine(MachineId::upm1);
  EnumerateOptions one, eight;
  one.collect_programs = eight.collect_programs = true;
  eight.workers = 8;
  const auto r1 = enumerate(upm1, BitString{}, kL, kT, one);
  const auto r8 = enumerate(upm1, BitString{}, kL, kT, eight);
  const auto rs = enumerate_serial(upm1, BitString{}, kL, kT, one);
  const bool lib_ok = r1.slice == r8.slice && r1.halting_programs == r8.halting_programs &&
                      r1.slice == rs.slice && r1.halting_programs == rs.halting_programs;

  // CLI level: every file written by the criterion 1-7 pipelines.
  const fs::path root = fs::temp_directory_path() / ("infolaw-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(root);
  std::vector<std::string> files;
  std::size_t differing = 0;
  bool statuses_match = true;
  for (const char* w : {"1", "8"}) {
    const fs::path out = root / w;
    fs::create_directories(out);
    const std::string o = "--out \"" + out.string() + "\" --workers " + w;
    const fs::path log = out / "log.txt";
    const auto p = [&](const char* f) { return "\"" + (out / f).string() + "\""; };
    std::vector<int> st;
    st.push_back(run_cli(o + " enumerate", log));
    st.push_back(run_cli(o + " --domain-exact dist --distance dmax", out / "log_dist.txt"));
    st.push_back(run_cli(o + " --domain-exact dist --distance dsum", out / "log_dsum.txt"));
    st.push_back(run_cli(o + " --domain-exact confusion --source k", out / "log_conf.txt"));
    st.push_back(run_cli(o + " law --matrix " + p("confusion.csv") + " --distances " +
                             p("distance_dmax.csv"),
                         out / "log_law.txt"));
    st.push_back(run_cli(o + " check --metric " + p("distance_dsum.csv"), out / "log_check.txt"));
    fs::rename(out / "confusion.csv", out / "confusion_k.csv");
    st.push_back(run_cli(o + " --domain-exact dist --distance hamming", out / "log_ham.txt"));
    st.push_back(run_cli(o + " --lambda 0.5 confusion --distances " + p("distance_hamming.csv"),
                         out / "log_synth.txt"));
    if (fs::exists(out / "law_report.json")) fs::rename(out / "law_report.json", out / "law_k.json");
    st.push_back(run_cli(o + " law --matrix " + p("confusion.csv") + " --distances " +
                             p("distance_hamming.csv"),
                         out / "log_law_synth.txt"));
    static std::vector<int> first;
    if (first.empty()) {
      first = st;
    } else {
      statuses_match = first == st;
    }
  }
  for (const auto& entry : fs::directory_iterator(root / "1")) {
    const auto name = entry.path().filename().string();
    if (name.rfind("log", 0) == 0) continue;
    files.push_back(name);
    if (!fs::exists(root / "8" / name) || slurp(entry.path()) != slurp(root / "8" / name)) ++differing;
  }
  // Error lines of failing steps are compared too.
  for (const auto& entry : fs::directory_iterator(root / "1")) {
    const auto name = entry.path().filename().string();
    if (name.rfind("log_law", 0) == 0 && slurp(entry.path()) != slurp(root / "8" / name)) ++differing;
  }
  fs::remove_all(root);
  std::sort(files.begin(), files.end());
  std::string names;
  for (const auto& f : files) names += f + " ";
  return {lib_ok && statuses_match && differing == 0 && files.size() >= 8,
          fmt("library_identical=%s cli_files=%zu differing=%zu [%s]", lib_ok ? "yes" : "no",
              files.size(), differing, names.c_str())};
}

}  // namespace

int main() {
  criterion(1, "prefix-free and Kraft", prefix_kraft);
  criterion(2, "oracle regression", oracle_regression);
  criterion(3, "d_max <= d_sum <= 2 d_max", sum_max_sandwich);
  criterion(4, "incompressibility counting", counting);
  criterion(5, "upper semicomputability", upper_semicomputable);
  criterion(6, "law pipeline on K confusion", law_pipeline);
  std::printf("info  criterion  6  same pipeline, items of 0..4 bits: %s\n",
              law_summary(strings_up_to(4)).c_str());
  criterion(7, "exact synthetic law", synthetic_law);
  criterion(8, "model recovery", model_recovery);
  criterion(9, "Shannon-Fano band", shannon_fano_band);
  criterion(10, "worker-count determinism", determinism);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
