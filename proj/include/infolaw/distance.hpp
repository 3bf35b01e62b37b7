#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "infolaw/bitstring.hpp"
#include "infolaw/compressor.hpp"
#include "infolaw/enumerator.hpp"

namespace infolaw {

/// Pairwise distances over a finite, ordered item domain (row-major).
struct DistanceMatrix {
  std::vector<BitString> domain;
  std::vector<double> values;
  std::string name;
  std::string parameters;
  std::string source;

  std::size_t size() const noexcept { return domain.size(); }
  double operator()(std::size_t i, std::size_t j) const { return values[i * domain.size() + j]; }
  double& operator()(std::size_t i, std::size_t j) { return values[i * domain.size() + j]; }
  /// Position of an item; Errc::invalid_input if absent.
  std::size_t index_of(const BitString& item) const;
};

/// Raw values, or d(a,b) - min(K(a|a), K(b|b)) clamped at 0, which removes
/// the machine's nonzero self-distance before axiom tests.
enum class IdentityVariant { raw, normalized };

// Information distances from an enumerated table. An absent entry is only an
// upper-bound statement, so it raises Errc::one_sided_bound naming the key.
unsigned d_sum(const ComplexityTable& table, const BitString& a, const BitString& b);
unsigned d_max(const ComplexityTable& table, const BitString& a, const BitString& b);
// Compressor route: same definitions over cond_approx.
inline std::uint64_t d_sum(const Compressor& h, const BitString& a, const BitString& b) {
  return e_sum(h, a, b);
}
inline std::uint64_t d_max(const Compressor& h, const BitString& a, const BitString& b) {
  return e_max(h, a, b);
}

std::size_t hamming(const BitString& x, const BitString& y);
double euclid_bits(const BitString& x, const BitString& y);

DistanceMatrix dsum_matrix(const ComplexityTable& table, std::span<const BitString> domain,
                           IdentityVariant variant = IdentityVariant::raw);
DistanceMatrix dmax_matrix(const ComplexityTable& table, std::span<const BitString> domain,
                           IdentityVariant variant = IdentityVariant::raw);
DistanceMatrix compressor_matrix(const Compressor& h, std::span<const BitString> domain,
                                 const std::string& kind);  // "dsum", "dmax" or "ncd"
DistanceMatrix hamming_matrix(std::span<const BitString> domain);
DistanceMatrix euclid_matrix(std::span<const BitString> domain);
/// D = 1 off the diagonal.
DistanceMatrix discrete_matrix(std::span<const BitString> domain);
/// H(x,y) + 2*ceil(log2(n+1)) + 1 off the diagonal, for items of length n;
/// the shift keeps every row's normalization sum below 1.
DistanceMatrix shifted_hamming_matrix(std::span<const BitString> domain);

struct TriangleViolation {
  std::size_t i, j, k;
  /// d(i,k) - d(i,j) - d(j,k) > 0
  double excess;
};

struct AdmissibilityReport {
  bool identity_ok = true;
  bool symmetry_ok = true;
  /// First violations in (i, j, k) order, capped at kMaxListedViolations.
  std::vector<TriangleViolation> triangle_violations;
  std::uint64_t triangle_violation_count = 0;
  double worst_triangle_slack = 0.0;
  static constexpr std::size_t kMaxListedViolations = 1000;
  /// Per row: sum over y != x of 2^-D(x,y). Over a finite domain this is a
  /// lower bound of the unrestricted normalization sum.
  std::vector<double> normalization_sums;
  bool normalized_ok = true;
  static constexpr const char* normalization_note =
      "finite-domain lower bound of the normalization sum";
};

AdmissibilityReport check_admissible(const DistanceMatrix& m);

struct Minorization {
  /// Smallest c with Dmax <= D' + c on every off-diagonal pair.
  double c;
  std::size_t i, j;
};

Minorization minorization(const DistanceMatrix& dmax, const DistanceMatrix& other);

struct InvarianceReport {
  std::size_t compared = 0;
  unsigned max_gap = 0;
  std::map<unsigned, std::size_t> gap_histogram;
  /// (condition, output) keys present in exactly one table, as "x|y" text.
  std::vector<std::string> coverage_mismatch;
  std::vector<std::string> warnings;
};

/// Per-key |K1 - K2| over keys present in both tables, optionally restricted
/// to outputs of at most max_output_bits.
InvarianceReport invariance_gap(const ComplexityTable& first, const ComplexityTable& second,
                                std::size_t max_output_bits = SIZE_MAX);

/// Worst slack s in K(x|z) <= K(x|y) + K(y|z) + s over all triples of the
/// domain whose entries are all present.
double conditional_triangle_slack(const ComplexityTable& table, std::span<const BitString> domain);

// Header row of domain strings, then one row of values per item; '#' lines
// carry name, parameters and source.
void write_distance_matrix(std::ostream& os, const DistanceMatrix& m);
DistanceMatrix read_distance_matrix(std::istream& is);
void save_distance_matrix(const DistanceMatrix& m, const std::filesystem::path& path);
DistanceMatrix load_distance_matrix(const std::filesystem::path& path);

}  // namespace infolaw
