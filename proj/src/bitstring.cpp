#include "infolaw/bitstring.hpp"

#include <algorithm>
#include <bit>

#include "infolaw/error.hpp"

namespace infolaw {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_input: return "invalid_input";
    case Errc::malformed_code: return "malformed_code";
    case Errc::malformed_input: return "malformed_input";
    case Errc::resource_limit: return "resource_limit";
    case Errc::condition_not_enumerated: return "condition_not_enumerated";
    case Errc::unknown_machine: return "unknown_machine";
    case Errc::malformed_file: return "malformed_file";
    case Errc::version_mismatch: return "version_mismatch";
    case Errc::one_sided_bound: return "one_sided_bound";
    case Errc::domain_error: return "domain_error";
    case Errc::insufficient_data: return "insufficient_data";
    case Errc::singular_fit: return "singular_fit";
    case Errc::plugin_failure: return "plugin_failure";
    case Errc::io_error: return "io_error";
  }
  return "unknown";
}

BitString::BitString(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto b : bits_) {
    if (b > 1) throw Error(Errc::invalid_input, "bit value other than 0 or 1");
  }
}

BitString BitString::from_digits(std::string_view digits) {
  std::vector<std::uint8_t> bits;
  bits.reserve(digits.size());
  for (char c : digits) {
    if (c != '0' && c != '1') {
      throw Error(Errc::invalid_input, "not a binary digit: '" + std::string(1, c) + "'");
    }
    bits.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return BitString(std::move(bits));
}

BitString BitString::parse(std::string_view text) {
  if (text.empty() || text.front() != 'b') {
    throw Error(Errc::invalid_input, "bit string must start with 'b': \"" + std::string(text) + "\"");
  }
  return from_digits(text.substr(1));
}

std::string BitString::digits() const {
  std::string s(bits_.size(), '0');
  for (std::size_t i = 0; i < bits_.size(); ++i) s[i] = static_cast<char>('0' + bits_[i]);
  return s;
}

void BitString::append(const BitString& other) {
  bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
}

std::strong_ordering operator<=>(const BitString& x, const BitString& y) {
  if (auto c = x.size() <=> y.size(); c != 0) return c;
  return std::lexicographical_compare_three_way(x.bits_.begin(), x.bits_.end(), y.bits_.begin(),
                                                y.bits_.end());
}

BitString concat(const BitString& x, const BitString& y) {
  BitString r = x;
  r.append(y);
  return r;
}

BitString xor_bits(const BitString& x, const BitString& y) {
  if (x.size() != y.size()) {
    throw Error(Errc::invalid_input, "xor of strings with lengths " + std::to_string(x.size()) +
                                         " and " + std::to_string(y.size()));
  }
  std::vector<std::uint8_t> r(x.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = x[i] ^ y[i];
  return BitString(std::move(r));
}

BitString complement(const BitString& x) {
  std::vector<std::uint8_t> r(x.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = x[i] ^ 1U;
  return BitString(std::move(r));
}

BitString binary(std::uint64_t n) {
  if (n == 0) throw Error(Errc::invalid_input, "binary expansion of 0 is not defined here");
  const int width = std::bit_width(n);
  std::vector<std::uint8_t> r(static_cast<std::size_t>(width));
  for (int i = 0; i < width; ++i) r[i] = (n >> (width - 1 - i)) & 1U;
  return BitString(std::move(r));
}

BitString gamma_encode(std::uint64_t n) {
  if (n == 0) throw Error(Errc::invalid_input, "gamma code needs n >= 1");
  const BitString body = binary(n);
  std::vector<std::uint8_t> r(body.size() - 1, 0);
  r.insert(r.end(), body.bits().begin(), body.bits().end());
  return BitString(std::move(r));
}

DecodedInt gamma_decode(std::span<const std::uint8_t> bits, std::size_t offset) {
  std::size_t pos = offset;
  std::size_t zeros = 0;
  while (pos < bits.size() && bits[pos] == 0) {
    ++zeros;
    ++pos;
  }
  if (pos + zeros >= bits.size()) {
    throw Error(Errc::malformed_code, "incomplete gamma code");
  }
  if (zeros > 63) throw Error(Errc::malformed_code, "gamma code exceeds 64-bit range");
  std::uint64_t value = 0;
  for (std::size_t i = 0; i <= zeros; ++i) value = (value << 1) | bits[pos + i];
  return {value, zeros + zeros + 1};
}

BitString delta_encode(std::uint64_t n) {
  if (n == 0) throw Error(Errc::invalid_input, "delta code needs n >= 1");
  const BitString body = binary(n);
  BitString r = gamma_encode(body.size());
  for (std::size_t i = 1; i < body.size(); ++i) r.push_back(body[i]);
  return r;
}

DecodedInt delta_decode(std::span<const std::uint8_t> bits, std::size_t offset) {
  const DecodedInt width = gamma_decode(bits, offset);
  if (width.value > 64) throw Error(Errc::malformed_code, "delta code exceeds 64-bit range");
  const std::size_t rest = static_cast<std::size_t>(width.value) - 1;
  const std::size_t start = offset + width.consumed;
  if (start + rest > bits.size()) throw Error(Errc::malformed_code, "incomplete delta code");
  std::uint64_t value = 1;
  for (std::size_t i = 0; i < rest; ++i) value = (value << 1) | bits[start + i];
  return {value, width.consumed + rest};
}

std::vector<std::uint8_t> pack_bytes(const BitString& x) {
  const std::size_t nbytes = (x.size() + 7) / 8;
  const std::size_t pad = nbytes * 8 - x.size();
  std::vector<std::uint8_t> out(1 + nbytes, 0);
  out[0] = static_cast<std::uint8_t>(pad);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i]) out[1 + i / 8] |= static_cast<std::uint8_t>(0x80U >> (i % 8));
  }
  return out;
}

BitString unpack_bytes(std::span<const std::uint8_t> bytes) {
  if (bytes.empty()) throw Error(Errc::malformed_input, "packed bit string has no header byte");
  const std::size_t pad = bytes[0];
  if (pad > 7) throw Error(Errc::malformed_input, "pad count " + std::to_string(pad) + " > 7");
  const std::size_t nbytes = bytes.size() - 1;
  if (nbytes == 0 && pad != 0) throw Error(Errc::malformed_input, "pad bits without payload");
  const std::size_t nbits = nbytes * 8 - pad;
  std::vector<std::uint8_t> bits(nbits);
  for (std::size_t i = 0; i < nbits; ++i) bits[i] = (bytes[1 + i / 8] >> (7 - i % 8)) & 1U;
  return BitString(std::move(bits));
}

std::vector<BitString> strings_of_length(std::size_t n) {
  if (n > 24) throw Error(Errc::invalid_input, "refusing to list all strings of length > 24");
  std::vector<BitString> r;
  r.reserve(std::size_t{1} << n);
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
    std::vector<std::uint8_t> bits(n);
    for (std::size_t i = 0; i < n; ++i) bits[i] = (v >> (n - 1 - i)) & 1U;
    r.emplace_back(std::move(bits));
  }
  return r;
}

std::vector<BitString> strings_up_to(std::size_t n) {
  std::vector<BitString> r;
  for (std::size_t len = 0; len <= n; ++len) {
    auto layer = strings_of_length(len);
    r.insert(r.end(), std::make_move_iterator(layer.begin()), std::make_move_iterator(layer.end()));
  }
  return r;
}

}  // namespace infolaw
