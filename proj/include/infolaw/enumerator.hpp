#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "infolaw/bitstring.hpp"
#include "infolaw/upm.hpp"

namespace infolaw {

/// Largest supported program-length bound (programs are packed into 64 bits).
inline constexpr unsigned kMaxProgramBits = 60;

/// Bounded complexities for one condition x: K_{L,T}(y|x) for every output y
/// that some halting program of <= L bits produces within T steps.
struct ConditionSlice {
  BitString condition;
  std::map<BitString, unsigned> k;
  /// length_histogram[l] = number of halting programs with exactly l bits.
  std::vector<std::uint64_t> length_histogram;

  friend bool operator==(const ConditionSlice&, const ConditionSlice&) = default;
};

struct ComplexityTable {
  MachineId machine = MachineId::upm1;
  unsigned max_len = 0;
  std::uint64_t budget = 0;
  std::map<BitString, ConditionSlice> slices;

  friend bool operator==(const ComplexityTable&, const ComplexityTable&) = default;
};

/// A halting program packed MSB-first into the low `length` bits.
struct ProgramCode {
  std::uint64_t bits;
  std::uint8_t length;

  BitString to_bitstring() const;
  friend bool operator==(const ProgramCode&, const ProgramCode&) = default;
};

struct EnumerateOptions {
  /// OpenMP worker count; 0 means the runtime default. Never affects results.
  unsigned workers = 1;
  /// Tree nodes (machine runs) allowed before Errc::resource_limit.
  std::uint64_t node_cap = 100'000'000;
  bool collect_programs = false;
};

struct EnumerationResult {
  ConditionSlice slice;
  /// Sorted by (bits, length) when collected.
  std::vector<ProgramCode> halting_programs;
  std::uint64_t nodes = 0;
};

/// Explores the demand-driven program tree: whenever the machine asks for a
/// program bit it does not have, fork on 0 and 1. Every halting leaf with
/// <= max_len consumed bits and <= budget steps is recorded.
///
/// Subtrees below a fixed frontier are explored by OpenMP workers and merged
/// with a per-key minimum, so the result does not depend on scheduling.
EnumerationResult enumerate(const MachineSpec& spec, const BitString& condition, unsigned max_len,
                            std::uint64_t budget, const EnumerateOptions& options = {});

/// Single-threaded recursive walk of the same tree. Kept as the reference the
/// parallel kernel is tested and benchmarked against.
EnumerationResult enumerate_serial(const MachineSpec& spec, const BitString& condition,
                                   unsigned max_len, std::uint64_t budget,
                                   const EnumerateOptions& options = {});

ComplexityTable build_table(const MachineSpec& spec, std::span<const BitString> conditions,
                            unsigned max_len, std::uint64_t budget,
                            const EnumerateOptions& options = {});

/// nullopt means K_{L,T}(y|x) > L, i.e. only an upper-bound statement.
/// Throws Errc::condition_not_enumerated when x has no slice.
std::optional<unsigned> k_cond(const ComplexityTable& table, const BitString& y, const BitString& x);
inline std::optional<unsigned> k_plain(const ComplexityTable& table, const BitString& x) {
  return k_cond(table, x, BitString{});
}

const ConditionSlice& slice_for(const ComplexityTable& table, const BitString& condition);

/// Sum over halting programs of 2^-|p|.
double kraft_sum(std::span<const std::uint64_t> length_histogram);
double kraft_sum(const ComplexityTable& table, const BitString& condition);

struct CountingCheck {
  std::uint64_t count;
  std::uint64_t bound;
  bool pass;
};

/// Counts outputs x with K_{L,T}(x) < n on the empty condition; pass iff count < 2^n.
CountingCheck counting_check(const ComplexityTable& table, unsigned n);

/// True iff no program in the set is a proper prefix of (or equal to) another.
bool is_prefix_free(std::span<const ProgramCode> programs);

// Cache file: '#'-prefixed metadata, "condition,output,K" rows, then a
// "#HIST" section of "condition,length,count" rows and an "#END" trailer.
void write_table(std::ostream& os, const ComplexityTable& table);
ComplexityTable read_table(std::istream& is);
void save_table(const ComplexityTable& table, const std::filesystem::path& path);
ComplexityTable load_table(const std::filesystem::path& path);

}  // namespace infolaw
