#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "infolaw/bitstring.hpp"
#include "infolaw/distance.hpp"
#include "infolaw/enumerator.hpp"

namespace infolaw {

/// Finite distribution with strictly positive probabilities summing to 1.
struct DistributionSpec {
  std::vector<BitString> outcomes;
  std::vector<double> probabilities;
  std::string generator;

  /// Throws Errc::invalid_input unless probabilities are positive and sum to
  /// 1 within 1e-12.
  void validate() const;
};

double entropy(const DistributionSpec& p);

struct ShannonFanoCode {
  /// ceil(-log2 P(x)) per outcome.
  std::vector<unsigned> lengths;
  double kraft = 0.0;
  double expected_length = 0.0;
  double entropy = 0.0;
  /// H <= E[l] < H + 1 and kraft <= 1.
  bool within_bound = false;
};

ShannonFanoCode shannon_fano(const DistributionSpec& p);

/// Row-stochastic matrix; entry (a, b) is the probability that the stimulus
/// for item a draws the response for item b. Items, stimuli and responses are
/// the same strings.
struct ConfusionMatrix {
  std::vector<BitString> domain;
  std::vector<double> values;
  /// Row masses before normalization (only set by generators that normalize).
  std::vector<double> row_mass;
  std::string generator;
  std::string parameters;

  std::size_t size() const noexcept { return domain.size(); }
  double operator()(std::size_t a, std::size_t b) const { return values[a * domain.size() + b]; }
  double& operator()(std::size_t a, std::size_t b) { return values[a * domain.size() + b]; }

  /// Entries in (0, 1], rows summing to 1 within 1e-12.
  void validate() const;
};

/// Shepard's measure: sqrt(P(a|b) P(b|a) / (P(a|a) P(b|b))).
double g_measure(const ConfusionMatrix& m, std::size_t a, std::size_t b);
/// min(P(b|a), P(a|b)) / max(P(a|a), P(b|b)); never exceeds g_measure.
double g_prime(const ConfusionMatrix& m, std::size_t a, std::size_t b);

struct SandwichReport {
  std::size_t pairs = 0;
  /// Pairs with G' > G (expected: none).
  std::size_t violations = 0;
  /// Smallest C2 with G <= C2 * sqrt(G') over all pairs, and where it is attained.
  double c2 = 0.0;
  std::size_t c2_a = 0, c2_b = 0;
};

SandwichReport g_sandwich(const ConfusionMatrix& m);

/// P(b|a) proportional to 2^(-lambda * D(a,b)).
ConfusionMatrix synth_confusion(const DistanceMatrix& d, double lambda);
/// P(b|a) proportional to 2^(-K(b|a)) from an enumerated table.
ConfusionMatrix k_confusion(const ComplexityTable& table, std::span<const BitString> domain);

enum class Measure { g, g_prime };

std::string_view measure_name(Measure m) noexcept;
Measure parse_measure(std::string_view name);

struct LawReport {
  std::size_t pairs = 0;
  double slope = 0.0;
  double intercept = 0.0;
  double r = 0.0;
  double r2 = 0.0;
  double min_residual = 0.0;
  double max_residual = 0.0;
  Measure measure = Measure::g_prime;
  std::string distance;
  /// Shepard parameters: A = e^intercept, B = -slope.
  double a() const;
  double b() const { return -slope; }
};

/// Least-squares line of ln measure(a,b) on D(a,b) over unordered pairs a != b.
LawReport law_verify(const ConfusionMatrix& m, const DistanceMatrix& d, Measure measure);

struct ModelFit {
  /// ln g = ln_a - b * f(d) with f(d) = d, d^2 or ln d.
  double ln_a = 0.0;
  double b = 0.0;
  double rss = 0.0;
};

enum class Model { exponential, gaussian, power };

std::string_view model_name(Model m) noexcept;

struct FitReport {
  ModelFit exponential, gaussian, power;
  Model winner = Model::exponential;
  const ModelFit& fit(Model m) const;
};

/// Fits all three laws in log space; the winner has the smallest residual
/// sum of squares, with exponential preferred on ties within 1e-12.
FitReport fit_models(std::span<const std::pair<double, double>> points);

/// P-mass of outcomes x with -log2 P(x) <= K(x) + c; absent K counts as +inf.
double randomness_fraction(const DistributionSpec& p, const ComplexityTable& table, double c);

struct BoundsReport {
  /// max over pairs of log2 P(b|a) + K(b|a), over pairs with a table entry.
  double c_upper = 0.0;
  std::size_t uncovered_pairs = 0;
  /// Per row: P-mass of b with 2^-K(b|a) <= P(b|a).
  std::vector<double> lower_fraction;
};

BoundsReport bounds_constant(const ConfusionMatrix& m, const ComplexityTable& table);

// Matrix CSV: '#' metadata lines, a header of domain strings, value rows.
void write_confusion_matrix(std::ostream& os, const ConfusionMatrix& m);
ConfusionMatrix read_confusion_matrix(std::istream& is);
void save_confusion_matrix(const ConfusionMatrix& m, const std::filesystem::path& path);
ConfusionMatrix load_confusion_matrix(const std::filesystem::path& path);

}  // namespace infolaw
