#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "fork_engine.hpp"

namespace infolaw::detail {

struct OutputKey {
  std::uint64_t bits;
  std::uint32_t length;
  friend bool operator==(const OutputKey&, const OutputKey&) = default;
};

struct OutputKeyHash {
  std::size_t operator()(const OutputKey& k) const noexcept {
    return std::hash<std::uint64_t>{}(k.bits * 0x9E3779B97F4A7C15ULL ^ k.length);
  }
};

/// Per-worker results of a subtree walk.
struct TreeAccumulator {
  std::unordered_map<OutputKey, unsigned, OutputKeyHash> best;
  // Halting programs whose output overflowed the 64-bit buffer; their outputs
  // are recovered afterwards with the reference interpreter.
  std::vector<ProgramCode> long_outputs;
  std::vector<std::uint64_t> histogram;
  std::vector<ProgramCode> programs;
  std::uint64_t nodes = 0;
  bool collect = false;

  explicit TreeAccumulator(unsigned max_len = 0, bool collect_programs = false)
      : histogram(max_len + 1, 0), collect(collect_programs) {}

  void record_halt(const ForkState& s) {
    ++histogram[s.prog_len];
    const ProgramCode code{s.prog, s.prog_len};
    if (collect) programs.push_back(code);
    if (s.out_len > 64) {
      long_outputs.push_back(code);
      return;
    }
    auto [it, inserted] = best.try_emplace(OutputKey{s.out, s.out_len}, s.prog_len);
    if (!inserted && s.prog_len < it->second) it->second = s.prog_len;
  }

  void merge(TreeAccumulator&& other) {
    for (const auto& [key, len] : other.best) {
      auto [it, inserted] = best.try_emplace(key, len);
      if (!inserted && len < it->second) it->second = len;
    }
    long_outputs.insert(long_outputs.end(), other.long_outputs.begin(), other.long_outputs.end());
    for (std::size_t i = 0; i < histogram.size(); ++i) histogram[i] += other.histogram[i];
    programs.insert(programs.end(), other.programs.begin(), other.programs.end());
    nodes += other.nodes;
  }
};

/// Converts raw accumulations into the public result, resolving long outputs
/// through execute(). Independent of merge order.
EnumerationResult finalize(TreeAccumulator&& acc, const MachineSpec& spec,
                           const BitString& condition, std::uint64_t budget);

}  // namespace infolaw::detail
