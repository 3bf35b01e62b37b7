#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace infolaw {

/// Finite sequence of bits. Items, stimuli, responses and programs are all
/// represented this way.
///
/// Ordering is shortlex (shorter first, then lexicographic), which is the
/// order used for every table and matrix written to disk.
class BitString {
 public:
  BitString() = default;
  /// Every element must be 0 or 1.
  explicit BitString(std::vector<std::uint8_t> bits);

  /// "0101" -> bits. Rejects any other character.
  static BitString from_digits(std::string_view digits);
  /// Textual form used in files and on the command line: 'b' followed by digits.
  static BitString parse(std::string_view text);

  std::string digits() const;
  std::string text() const { return "b" + digits(); }

  std::size_t size() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }
  std::uint8_t operator[](std::size_t i) const noexcept { return bits_[i]; }
  std::span<const std::uint8_t> bits() const noexcept { return bits_; }

  void push_back(bool bit) { bits_.push_back(bit ? 1 : 0); }
  void append(const BitString& other);

  friend bool operator==(const BitString&, const BitString&) = default;
  friend std::strong_ordering operator<=>(const BitString& x, const BitString& y);

 private:
  std::vector<std::uint8_t> bits_;
};

BitString concat(const BitString& x, const BitString& y);

/// Bitwise exclusive-or; throws Errc::invalid_input on length mismatch.
BitString xor_bits(const BitString& x, const BitString& y);
BitString complement(const BitString& x);

/// Binary expansion of n >= 1, most significant bit first.
BitString binary(std::uint64_t n);

struct DecodedInt {
  std::uint64_t value;
  std::size_t consumed;
};

// Elias gamma: floor(log2 n) zeros, then n in binary.
BitString gamma_encode(std::uint64_t n);
DecodedInt gamma_decode(std::span<const std::uint8_t> bits, std::size_t offset = 0);
inline DecodedInt gamma_decode(const BitString& s, std::size_t offset = 0) {
  return gamma_decode(s.bits(), offset);
}

// Elias delta: gamma(bit length of n), then n in binary without its leading 1.
BitString delta_encode(std::uint64_t n);
DecodedInt delta_decode(std::span<const std::uint8_t> bits, std::size_t offset = 0);
inline DecodedInt delta_decode(const BitString& s, std::size_t offset = 0) {
  return delta_decode(s.bits(), offset);
}

/// First byte holds the number of zero pad bits (0-7); bits follow MSB-first.
std::vector<std::uint8_t> pack_bytes(const BitString& x);
BitString unpack_bytes(std::span<const std::uint8_t> bytes);

/// All strings of exactly n bits, lexicographic.
std::vector<BitString> strings_of_length(std::size_t n);
/// All strings of length 0..n, shortlex.
std::vector<BitString> strings_up_to(std::size_t n);

}  // namespace infolaw
