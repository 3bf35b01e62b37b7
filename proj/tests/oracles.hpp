// Test-only oracles. These deliberately avoid the enumerator's fork tree.
#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "infolaw/bitstring.hpp"
#include "infolaw/upm.hpp"

namespace infolaw::oracle {

struct BruteForce {
  std::map<BitString, unsigned> k;
  std::vector<BitString> halting;
  std::vector<std::uint64_t> histogram;
};

/// Runs every bit string of length <= max_len through execute(). A string is a
/// halting program iff the run halts having consumed exactly that string.
inline BruteForce brute_force(const MachineSpec& spec, const BitString& condition, unsigned max_len,
                              std::uint64_t budget) {
  BruteForce r;
  r.histogram.assign(max_len + 1, 0);
  for (unsigned len = 0; len <= max_len; ++len) {
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v) {
      std::vector<std::uint8_t> bits(len);
      for (unsigned i = 0; i < len; ++i) bits[i] = (v >> (len - 1 - i)) & 1U;
      const BitString p(std::move(bits));
      const auto run = execute(spec, p, condition, budget);
      if (run.status != RunStatus::halted || run.consumed_program.size() != len) continue;
      r.halting.push_back(p);
      ++r.histogram[len];
      r.k.try_emplace(run.output, len);  // lengths ascend, first hit is minimal
    }
  }
  return r;
}

}  // namespace infolaw::oracle
