#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "infolaw/bitstring.hpp"

namespace infolaw {

/// Computable code-length functional C(x), standing in for K(x) on inputs
/// far too large to enumerate.
///
/// The builtin "lz78b" parses x into LZ78 phrases (longest dictionary match
/// plus one literal bit; a trailing partial phrase counts as a phrase) and
/// charges gamma(p + 1) for the phrase count plus ceil(log2 i) + 1 bits for
/// phrase i. It is a length, not a decodable stream.
///
/// An external plugin receives pack_bytes(x) on stdin; C(x) is 8 times the
/// number of bytes it writes to stdout. Nonzero exit status is an error.
class Compressor {
 public:
  enum class Kind { lz78b, plugin };

  static Compressor lz78b();
  static Compressor plugin(std::filesystem::path executable);
  /// "lz78b" selects the builtin; anything else is taken as a plugin path.
  static Compressor from_selection(const std::string& selection);

  Kind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }

  std::uint64_t code_length(const BitString& x) const;

 private:
  Compressor(Kind kind, std::string name, std::filesystem::path path)
      : kind_(kind), name_(std::move(name)), path_(std::move(path)) {}

  Kind kind_;
  std::string name_;
  std::filesystem::path path_;
};

/// LZ78 phrase count of x (the builtin's parse).
std::uint64_t lz78_phrase_count(const BitString& x);

inline std::uint64_t c_len(const Compressor& h, const BitString& x) { return h.code_length(x); }
/// min(C(xy), C(yx)): symmetric joint length.
std::uint64_t c_pair(const Compressor& h, const BitString& x, const BitString& y);
/// max(0, C_pair(x, y) - C(x)), approximating K(y|x).
std::uint64_t cond_approx(const Compressor& h, const BitString& y, const BitString& x);
std::uint64_t e_max(const Compressor& h, const BitString& x, const BitString& y);
std::uint64_t e_sum(const Compressor& h, const BitString& x, const BitString& y);
/// (C_pair - min C) / max C. Undefined (Errc::domain_error) only when both
/// code lengths are zero, which the builtin never produces; the empty pair
/// is rejected explicitly.
double ncd(const Compressor& h, const BitString& x, const BitString& y);

}  // namespace infolaw
