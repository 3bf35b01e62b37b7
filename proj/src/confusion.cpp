#include "infolaw/confusion.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "infolaw/error.hpp"

namespace infolaw {
namespace {

constexpr double kRowTolerance = 1e-12;

struct LineFit {
  double slope, intercept, r, r2, min_residual, max_residual, rss;
};

// Ordinary least squares with centered sums, accumulated in input order.
LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= double(n);
  my /= double(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw Error(Errc::singular_fit, "all regressor values are equal");
  LineFit f{};
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.min_residual = std::numeric_limits<double>::infinity();
  f.max_residual = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double res = y[i] - (f.intercept + f.slope * x[i]);
    f.rss += res * res;
    f.min_residual = std::min(f.min_residual, res);
    f.max_residual = std::max(f.max_residual, res);
  }
  if (syy > 0.0) {
    f.r = sxy / std::sqrt(sxx * syy);
    f.r2 = 1.0 - f.rss / syy;
  } else {
    // Constant response: the flat line is exact and carries no correlation.
    f.r = 0.0;
    f.r2 = 1.0;
  }
  return f;
}

void check_pair_entries(const ConfusionMatrix& m, std::size_t a, std::size_t b) {
  if (a >= m.size() || b >= m.size()) throw Error(Errc::invalid_input, "item index out of range");
  if (!(m(a, b) > 0.0 && m(b, a) > 0.0 && m(a, a) > 0.0 && m(b, b) > 0.0)) {
    throw Error(Errc::domain_error, "confusability needs four positive entries for (" +
                                        m.domain[a].text() + ", " + m.domain[b].text() + ")");
  }
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

double parse_double(const std::string& f) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
  if (ec != std::errc{} || ptr != f.data() + f.size()) {
    throw Error(Errc::malformed_file, "bad number \"" + f + "\"");
  }
  return v;
}

void normalize_rows(ConfusionMatrix& m) {
  const std::size_t n = m.size();
  m.row_mass.assign(n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    double z = 0.0;
    for (std::size_t b = 0; b < n; ++b) z += m(a, b);
    m.row_mass[a] = z;
    for (std::size_t b = 0; b < n; ++b) m(a, b) /= z;
  }
}

}  // namespace

void DistributionSpec::validate() const {
  if (outcomes.size() != probabilities.size() || outcomes.empty()) {
    throw Error(Errc::invalid_input, "distribution needs one probability per outcome");
  }
  double sum = 0.0;
  for (double p : probabilities) {
    if (!(p > 0.0)) throw Error(Errc::invalid_input, "probabilities must be positive");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kRowTolerance) throw Error(Errc::invalid_input, "probabilities do not sum to 1");
}

double entropy(const DistributionSpec& p) {
  p.validate();
  double h = 0.0;
  for (double q : p.probabilities) h -= q * std::log2(q);
  return h;
}

ShannonFanoCode shannon_fano(const DistributionSpec& p) {
  p.validate();
  ShannonFanoCode code;
  code.entropy = entropy(p);
  for (double q : p.probabilities) {
    const auto len = static_cast<unsigned>(std::ceil(-std::log2(q)));
    code.lengths.push_back(len);
    code.kraft += std::ldexp(1.0, -static_cast<int>(len));
    code.expected_length += q * len;
  }
  // Rounding slack for the lower edge only; the upper edge is strict.
  code.within_bound = code.kraft <= 1.0 + 1e-12 && code.expected_length >= code.entropy - 1e-12 &&
                      code.expected_length < code.entropy + 1.0;
  return code;
}

void ConfusionMatrix::validate() const {
  const std::size_t n = size();
  if (values.size() != n * n) throw Error(Errc::invalid_input, "confusion matrix is not square");
  for (std::size_t a = 0; a < n; ++a) {
    double sum = 0.0;
    for (std::size_t b = 0; b < n; ++b) {
      const double p = (*this)(a, b);
      if (!(p > 0.0 && p <= 1.0)) throw Error(Errc::invalid_input, "confusion entry outside (0, 1]");
      sum += p;
    }
    if (std::abs(sum - 1.0) > kRowTolerance) {
      throw Error(Errc::invalid_input, "row " + domain[a].text() + " does not sum to 1");
    }
  }
}

double g_measure(const ConfusionMatrix& m, std::size_t a, std::size_t b) {
  check_pair_entries(m, a, b);
  return std::sqrt(m(b, a) * m(a, b) / (m(a, a) * m(b, b)));
}

double g_prime(const ConfusionMatrix& m, std::size_t a, std::size_t b) {
  check_pair_entries(m, a, b);
  return std::min(m(a, b), m(b, a)) / std::max(m(a, a), m(b, b));
}

SandwichReport g_sandwich(const ConfusionMatrix& m) {
  m.validate();
  SandwichReport r;
  for (std::size_t a = 0; a < m.size(); ++a) {
    for (std::size_t b = a + 1; b < m.size(); ++b) {
      const double g = g_measure(m, a, b), gp = g_prime(m, a, b);
      ++r.pairs;
      if (gp > g) ++r.violations;
      const double c2 = g / std::sqrt(gp);
      if (c2 > r.c2) {
        r.c2 = c2;
        r.c2_a = a;
        r.c2_b = b;
      }
    }
  }
  return r;
}

ConfusionMatrix synth_confusion(const DistanceMatrix& d, double lambda) {
  if (!(lambda > 0.0)) throw Error(Errc::invalid_input, "lambda must be positive");
  const std::size_t n = d.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (d(i, i) != 0.0) throw Error(Errc::invalid_input, "distance matrix has a nonzero diagonal");
    for (std::size_t j = 0; j < i; ++j) {
      if (d(i, j) != d(j, i)) throw Error(Errc::invalid_input, "distance matrix is not symmetric");
    }
  }
  ConfusionMatrix m;
  m.domain = d.domain;
  m.values.resize(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) m(a, b) = std::exp2(-lambda * d(a, b));
  }
  normalize_rows(m);
  m.generator = "synth";
  m.parameters = "distance=" + d.name + " lambda=" + format_double(lambda);
  return m;
}

ConfusionMatrix k_confusion(const ComplexityTable& table, std::span<const BitString> domain) {
  const std::size_t n = domain.size();
  ConfusionMatrix m;
  m.domain.assign(domain.begin(), domain.end());
  m.values.resize(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const auto k = k_cond(table, domain[b], domain[a]);
      if (!k) {
        throw Error(Errc::one_sided_bound,
                    "missing entry K(" + domain[b].text() + "|" + domain[a].text() + ")");
      }
      m(a, b) = std::ldexp(1.0, -static_cast<int>(*k));
    }
  }
  normalize_rows(m);
  m.generator = "k";
  m.parameters = std::string("machine=") + std::string(machine_name(table.machine)) +
                 " L=" + std::to_string(table.max_len) + " T=" + std::to_string(table.budget);
  return m;
}

std::string_view measure_name(Measure m) noexcept { return m == Measure::g ? "g" : "gprime"; }

Measure parse_measure(std::string_view name) {
  if (name == "g") return Measure::g;
  if (name == "gprime") return Measure::g_prime;
  throw Error(Errc::invalid_input, "unknown measure \"" + std::string(name) + "\"");
}

double LawReport::a() const { return std::exp(intercept); }

LawReport law_verify(const ConfusionMatrix& m, const DistanceMatrix& d, Measure measure) {
  if (m.domain != d.domain) throw Error(Errc::domain_error, "confusion and distance domains differ");
  std::vector<double> xs, ys;
  for (std::size_t a = 0; a < m.size(); ++a) {
    for (std::size_t b = a + 1; b < m.size(); ++b) {
      const double g = measure == Measure::g ? g_measure(m, a, b) : g_prime(m, a, b);
      xs.push_back(d(a, b));
      ys.push_back(std::log(g));
    }
  }
  if (xs.size() < 2) throw Error(Errc::insufficient_data, "law fit needs at least two item pairs");
  const LineFit f = fit_line(xs, ys);
  LawReport r;
  r.pairs = xs.size();
  r.slope = f.slope;
  r.intercept = f.intercept;
  r.r = f.r;
  r.r2 = f.r2;
  r.min_residual = f.min_residual;
  r.max_residual = f.max_residual;
  r.measure = measure;
  r.distance = d.name;
  return r;
}

std::string_view model_name(Model m) noexcept {
  switch (m) {
    case Model::exponential: return "exponential";
    case Model::gaussian: return "gaussian";
    case Model::power: return "power";
  }
  return "?";
}

const ModelFit& FitReport::fit(Model m) const {
  return m == Model::exponential ? exponential : m == Model::gaussian ? gaussian : power;
}

FitReport fit_models(std::span<const std::pair<double, double>> points) {
  if (points.size() < 2) throw Error(Errc::insufficient_data, "model fit needs at least two points");
  std::vector<double> lin, sq, lg, y;
  for (const auto& [d, g] : points) {
    if (!(g > 0.0 && g <= 1.0)) throw Error(Errc::invalid_input, "confusability values must lie in (0, 1]");
    if (!(d > 0.0)) throw Error(Errc::domain_error, "power-law fit needs positive distances");
    lin.push_back(d);
    sq.push_back(d * d);
    lg.push_back(std::log(d));
    y.push_back(std::log(g));
  }
  auto model = [&](std::span<const double> f) {
    const LineFit line = fit_line(f, y);
    return ModelFit{line.intercept, -line.slope, line.rss};
  };
  FitReport r;
  r.exponential = model(lin);
  r.gaussian = model(sq);
  r.power = model(lg);
  constexpr double kTie = 1e-12;
  for (Model m : {Model::gaussian, Model::power}) {
    if (r.fit(m).rss < r.fit(r.winner).rss - kTie) r.winner = m;
  }
  return r;
}

double randomness_fraction(const DistributionSpec& p, const ComplexityTable& table, double c) {
  p.validate();
  double mass = 0.0;
  for (std::size_t i = 0; i < p.outcomes.size(); ++i) {
    const auto k = k_plain(table, p.outcomes[i]);
    if (!k || -std::log2(p.probabilities[i]) <= double(*k) + c) mass += p.probabilities[i];
  }
  return mass;
}

BoundsReport bounds_constant(const ConfusionMatrix& m, const ComplexityTable& table) {
  m.validate();
  BoundsReport r;
  r.c_upper = -std::numeric_limits<double>::infinity();
  r.lower_fraction.assign(m.size(), 0.0);
  for (std::size_t a = 0; a < m.size(); ++a) {
    for (std::size_t b = 0; b < m.size(); ++b) {
      const double p = m(a, b);
      const auto k = k_cond(table, m.domain[b], m.domain[a]);
      if (!k) {
        ++r.uncovered_pairs;
        r.lower_fraction[a] += p;
        continue;
      }
      r.c_upper = std::max(r.c_upper, std::log2(p) + double(*k));
      if (std::ldexp(1.0, -static_cast<int>(*k)) <= p) r.lower_fraction[a] += p;
    }
  }
  return r;
}

void write_confusion_matrix(std::ostream& os, const ConfusionMatrix& m) {
  os << "# generator=" << m.generator << '\n';
  os << "# parameters=" << m.parameters << '\n';
  if (!m.row_mass.empty()) {
    os << "# row_mass=";
    for (std::size_t a = 0; a < m.row_mass.size(); ++a) os << (a ? "," : "") << format_double(m.row_mass[a]);
    os << '\n';
  }
  for (std::size_t j = 0; j < m.size(); ++j) os << (j ? "," : "") << m.domain[j].text();
  os << '\n';
  for (std::size_t a = 0; a < m.size(); ++a) {
    for (std::size_t b = 0; b < m.size(); ++b) os << (b ? "," : "") << format_double(m(a, b));
    os << '\n';
  }
}

ConfusionMatrix read_confusion_matrix(std::istream& is) {
  ConfusionMatrix m;
  std::string line;
  bool have_header = false;
  std::size_t row = 0;
  while (std::getline(is, line)) {
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = line.substr(2, eq - 2), value = line.substr(eq + 1);
      if (key == "generator") m.generator = value;
      else if (key == "parameters") m.parameters = value;
      else if (key == "row_mass") {
        for (const auto& f : split(value)) m.row_mass.push_back(parse_double(f));
      }
      continue;
    }
    if (line.empty()) continue;
    const auto fields = split(line);
    if (!have_header) {
      for (const auto& f : fields) {
        try {
          m.domain.push_back(BitString::parse(f));
        } catch (const Error&) {
          throw Error(Errc::malformed_file, "bad domain entry \"" + f + "\"");
        }
      }
      m.values.assign(m.domain.size() * m.domain.size(), 0.0);
      have_header = true;
      continue;
    }
    if (row >= m.size() || fields.size() != m.size()) throw Error(Errc::malformed_file, "matrix is not square");
    for (std::size_t b = 0; b < fields.size(); ++b) m(row, b) = parse_double(fields[b]);
    ++row;
  }
  if (!have_header || row != m.size()) throw Error(Errc::malformed_file, "truncated confusion matrix");
  try {
    m.validate();
  } catch (const Error& e) {
    throw Error(Errc::malformed_file, e.what());
  }
  return m;
}

void save_confusion_matrix(const ConfusionMatrix& m, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(Errc::io_error, "cannot write " + path.string());
  write_confusion_matrix(os, m);
}

ConfusionMatrix load_confusion_matrix(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(Errc::io_error, "cannot read " + path.string());
  return read_confusion_matrix(is);
}

}  // namespace infolaw
