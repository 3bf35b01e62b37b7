#include "infolaw/distance.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "infolaw/error.hpp"

namespace infolaw {
namespace {

unsigned require(const ComplexityTable& table, const BitString& y, const BitString& x) {
  const auto k = k_cond(table, y, x);
  if (!k) {
    throw Error(Errc::one_sided_bound, "K(" + y.text() + "|" + x.text() + ") > " +
                                           std::to_string(table.max_len) +
                                           " (absent from table; only an upper bound is known)");
  }
  return *k;
}

std::string table_source(const ComplexityTable& table) {
  return std::string(machine_name(table.machine)) + " L=" + std::to_string(table.max_len) +
         " T=" + std::to_string(table.budget);
}

DistanceMatrix blank(std::span<const BitString> domain, std::string name, std::string parameters,
                     std::string source) {
  DistanceMatrix m;
  m.domain.assign(domain.begin(), domain.end());
  m.values.assign(domain.size() * domain.size(), 0.0);
  m.name = std::move(name);
  m.parameters = std::move(parameters);
  m.source = std::move(source);
  return m;
}

template <typename F>
DistanceMatrix fill(std::span<const BitString> domain, std::string name, std::string parameters,
                    std::string source, F&& d) {
  DistanceMatrix m = blank(domain, std::move(name), std::move(parameters), std::move(source));
  for (std::size_t i = 0; i < domain.size(); ++i) {
    for (std::size_t j = 0; j < domain.size(); ++j) m(i, j) = d(domain[i], domain[j]);
  }
  return m;
}

// Subtract the smaller of the two self-distances, clamped at 0.
void normalize_identity(DistanceMatrix& m) {
  const std::size_t n = m.size();
  std::vector<double> self(n);
  for (std::size_t i = 0; i < n; ++i) self[i] = m(i, i);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = std::max(0.0, m(i, j) - std::min(self[i], self[j]));
  }
}

unsigned ceil_log2(std::uint64_t v) {
  return v <= 1 ? 0U : static_cast<unsigned>(std::bit_width(v - 1));
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
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::size_t DistanceMatrix::index_of(const BitString& item) const {
  auto it = std::find(domain.begin(), domain.end(), item);
  if (it == domain.end()) throw Error(Errc::invalid_input, item.text() + " not in matrix domain");
  return static_cast<std::size_t>(it - domain.begin());
}

unsigned d_sum(const ComplexityTable& table, const BitString& a, const BitString& b) {
  return require(table, b, a) + require(table, a, b);
}

unsigned d_max(const ComplexityTable& table, const BitString& a, const BitString& b) {
  return std::max(require(table, b, a), require(table, a, b));
}

std::size_t hamming(const BitString& x, const BitString& y) {
  if (x.size() != y.size()) {
    throw Error(Errc::invalid_input, "hamming distance of strings with lengths " +
                                         std::to_string(x.size()) + " and " + std::to_string(y.size()));
  }
  std::size_t d = 0;
  for (std::size_t i = 0; i < x.size(); ++i) d += x[i] != y[i];
  return d;
}

double euclid_bits(const BitString& x, const BitString& y) {
  return std::sqrt(static_cast<double>(hamming(x, y)));
}

DistanceMatrix dsum_matrix(const ComplexityTable& table, std::span<const BitString> domain,
                           IdentityVariant variant) {
  const bool norm = variant == IdentityVariant::normalized;
  auto m = fill(domain, "dsum", norm ? "identity=normalized" : "identity=raw", table_source(table),
                [&](const BitString& a, const BitString& b) { return double(d_sum(table, a, b)); });
  if (norm) normalize_identity(m);
  return m;
}

DistanceMatrix dmax_matrix(const ComplexityTable& table, std::span<const BitString> domain,
                           IdentityVariant variant) {
  const bool norm = variant == IdentityVariant::normalized;
  auto m = fill(domain, "dmax", norm ? "identity=normalized" : "identity=raw", table_source(table),
                [&](const BitString& a, const BitString& b) { return double(d_max(table, a, b)); });
  if (norm) normalize_identity(m);
  return m;
}

DistanceMatrix compressor_matrix(const Compressor& h, std::span<const BitString> domain,
                                 const std::string& kind) {
  if (kind == "dsum") {
    return fill(domain, "dsum", "compressor", h.name(),
                [&](const BitString& a, const BitString& b) { return double(e_sum(h, a, b)); });
  }
  if (kind == "dmax") {
    return fill(domain, "dmax", "compressor", h.name(),
                [&](const BitString& a, const BitString& b) { return double(e_max(h, a, b)); });
  }
  if (kind == "ncd") {
    return fill(domain, "ncd", "compressor", h.name(),
                [&](const BitString& a, const BitString& b) { return ncd(h, a, b); });
  }
  throw Error(Errc::invalid_input, "unknown compressor distance \"" + kind + "\"");
}

DistanceMatrix hamming_matrix(std::span<const BitString> domain) {
  return fill(domain, "hamming", "", "bits",
              [](const BitString& a, const BitString& b) { return double(hamming(a, b)); });
}

DistanceMatrix euclid_matrix(std::span<const BitString> domain) {
  return fill(domain, "euclid", "", "bits",
              [](const BitString& a, const BitString& b) { return euclid_bits(a, b); });
}

DistanceMatrix discrete_matrix(std::span<const BitString> domain) {
  return fill(domain, "discrete", "", "bits",
              [](const BitString& a, const BitString& b) { return a == b ? 0.0 : 1.0; });
}

DistanceMatrix shifted_hamming_matrix(std::span<const BitString> domain) {
  return fill(domain, "shifted_hamming", "H + 2*ceil(log2(n+1)) + 1", "bits",
              [](const BitString& a, const BitString& b) {
                if (a == b) return 0.0;
                return double(hamming(a, b) + 2 * ceil_log2(a.size() + 1) + 1);
              });
}

AdmissibilityReport check_admissible(const DistanceMatrix& m) {
  const std::size_t n = m.size();
  if (m.values.size() != n * n) throw Error(Errc::invalid_input, "distance matrix is not square");
  AdmissibilityReport r;
  r.normalization_sums.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (m(i, i) != 0.0) r.identity_ok = false;
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && !(m(i, j) > 0.0)) r.identity_ok = false;
      if (m(i, j) != m(j, i)) r.symmetry_ok = false;
      if (i != j) r.normalization_sums[i] += std::exp2(-m(i, j));
    }
    if (r.normalization_sums[i] > 1.0) r.normalized_ok = false;
  }

  // Triangle check over all triples. Rows are independent; each worker fills
  // its own row slot and the rows are concatenated in order afterwards.
  constexpr double kTolerance = 1e-12;
  std::vector<std::vector<TriangleViolation>> rows(n);
  std::vector<std::uint64_t> counts(n, 0);
  std::vector<double> worst(n, 0.0);
#pragma omp parallel for schedule(static)
  for (std::int64_t si = 0; si < static_cast<std::int64_t>(n); ++si) {
    const auto i = static_cast<std::size_t>(si);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        const double excess = m(i, k) - m(i, j) - m(j, k);
        if (excess > kTolerance) {
          ++counts[i];
          worst[i] = std::max(worst[i], excess);
          if (rows[i].size() < AdmissibilityReport::kMaxListedViolations) rows[i].push_back({i, j, k, excess});
        }
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    r.triangle_violation_count += counts[i];
    r.worst_triangle_slack = std::max(r.worst_triangle_slack, worst[i]);
    for (const auto& v : rows[i]) {
      if (r.triangle_violations.size() == AdmissibilityReport::kMaxListedViolations) break;
      r.triangle_violations.push_back(v);
    }
  }
  return r;
}

Minorization minorization(const DistanceMatrix& dmax, const DistanceMatrix& other) {
  if (dmax.domain != other.domain) throw Error(Errc::domain_error, "minorization needs identical domains");
  if (dmax.size() < 2) throw Error(Errc::insufficient_data, "minorization needs at least two items");
  Minorization best{-std::numeric_limits<double>::infinity(), 0, 0};
  for (std::size_t i = 0; i < dmax.size(); ++i) {
    for (std::size_t j = 0; j < dmax.size(); ++j) {
      if (i == j) continue;
      const double gap = dmax(i, j) - other(i, j);
      if (gap > best.c) best = {gap, i, j};
    }
  }
  return best;
}

InvarianceReport invariance_gap(const ComplexityTable& first, const ComplexityTable& second,
                                std::size_t max_output_bits) {
  InvarianceReport r;
  for (const auto& [x, slice] : first.slices) {
    auto other = second.slices.find(x);
    if (other == second.slices.end()) {
      r.warnings.push_back("condition " + x.text() + " only in first table");
      continue;
    }
    for (const auto& [y, k1] : slice.k) {
      if (y.size() > max_output_bits) continue;
      auto it = other->second.k.find(y);
      if (it == other->second.k.end()) {
        r.coverage_mismatch.push_back(x.text() + "|" + y.text());
        continue;
      }
      const unsigned gap = k1 > it->second ? k1 - it->second : it->second - k1;
      ++r.gap_histogram[gap];
      r.max_gap = std::max(r.max_gap, gap);
      ++r.compared;
    }
    for (const auto& [y, k2] : other->second.k) {
      if (y.size() <= max_output_bits && !slice.k.contains(y)) {
        r.coverage_mismatch.push_back(x.text() + "|" + y.text());
      }
    }
  }
  for (const auto& [x, slice] : second.slices) {
    if (!first.slices.contains(x)) r.warnings.push_back("condition " + x.text() + " only in second table");
  }
  if (r.compared == 0) r.warnings.push_back("empty comparison: no keys covered by both tables");
  return r;
}

double conditional_triangle_slack(const ComplexityTable& table, std::span<const BitString> domain) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& x : domain) {
    for (const auto& y : domain) {
      for (const auto& z : domain) {
        const auto xz = k_cond(table, x, z), xy = k_cond(table, x, y), yz = k_cond(table, y, z);
        if (!xz || !xy || !yz) continue;
        worst = std::max(worst, double(*xz) - double(*xy) - double(*yz));
      }
    }
  }
  return worst;
}

void write_distance_matrix(std::ostream& os, const DistanceMatrix& m) {
  os << "# name=" << m.name << '\n';
  os << "# parameters=" << m.parameters << '\n';
  os << "# source=" << m.source << '\n';
  for (std::size_t j = 0; j < m.size(); ++j) os << (j ? "," : "") << m.domain[j].text();
  os << '\n';
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) os << (j ? "," : "") << format_double(m(i, j));
    os << '\n';
  }
}

DistanceMatrix read_distance_matrix(std::istream& is) {
  DistanceMatrix m;
  std::string line;
  bool have_header = false;
  std::size_t row = 0;
  while (std::getline(is, line)) {
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = line.substr(2, eq - 2), value = line.substr(eq + 1);
      if (key == "name") m.name = value;
      else if (key == "parameters") m.parameters = value;
      else if (key == "source") m.source = value;
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
    if (row >= m.size() || fields.size() != m.size()) {
      throw Error(Errc::malformed_file, "distance matrix is not square");
    }
    for (std::size_t j = 0; j < fields.size(); ++j) {
      double v = 0.0;
      const auto& f = fields[j];
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc{} || ptr != f.data() + f.size() || !(v >= 0.0)) {
        throw Error(Errc::malformed_file, "bad distance value \"" + f + "\"");
      }
      m(row, j) = v;
    }
    ++row;
  }
  if (!have_header || row != m.size()) throw Error(Errc::malformed_file, "truncated distance matrix");
  return m;
}

void save_distance_matrix(const DistanceMatrix& m, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(Errc::io_error, "cannot write " + path.string());
  write_distance_matrix(os, m);
}

DistanceMatrix load_distance_matrix(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(Errc::io_error, "cannot read " + path.string());
  return read_distance_matrix(is);
}

}  // namespace infolaw
