#include "infolaw/enumerator.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>

#include "infolaw/error.hpp"
#include "tree_accumulator.hpp"

namespace infolaw {

BitString ProgramCode::to_bitstring() const {
  std::vector<std::uint8_t> r(length);
  for (unsigned i = 0; i < length; ++i) r[i] = (bits >> (length - 1 - i)) & 1U;
  return BitString(std::move(r));
}

namespace detail {

TreeContext make_context(const MachineSpec& spec, const BitString& condition, unsigned max_len,
                         std::uint64_t budget) {
  if (budget == 0) throw Error(Errc::invalid_input, "step budget must be >= 1");
  if (max_len > kMaxProgramBits) {
    throw Error(Errc::invalid_input,
                "program length bound above " + std::to_string(kMaxProgramBits) + " bits");
  }
  const BitString tape = encode_condition(condition);
  if (!counters_fit(tape.size(), budget)) {
    throw Error(Errc::invalid_input, "condition too long for the step budget (counter range)");
  }
  std::uint64_t packed = 0;
  for (std::size_t i = 0; i < tape.size(); ++i) packed = (packed << 1) | tape[i];
  return TreeContext{&spec, packed, static_cast<unsigned>(tape.size()), budget, max_len};
}

namespace {

BitString output_from_key(const OutputKey& key) {
  std::vector<std::uint8_t> r(key.length);
  for (std::uint32_t i = 0; i < key.length; ++i) r[i] = (key.bits >> (key.length - 1 - i)) & 1U;
  return BitString(std::move(r));
}

std::uint64_t left_aligned(const ProgramCode& p) {
  return p.length == 0 ? 0 : p.bits << (64 - p.length);
}

bool lex_less(const ProgramCode& x, const ProgramCode& y) {
  const auto ax = left_aligned(x), ay = left_aligned(y);
  if (ax != ay) return ax < ay;
  return x.length < y.length;
}

}  // namespace

EnumerationResult finalize(TreeAccumulator&& acc, const MachineSpec& spec,
                           const BitString& condition, std::uint64_t budget) {
  EnumerationResult r;
  r.nodes = acc.nodes;
  r.slice.condition = condition;
  r.slice.length_histogram = std::move(acc.histogram);
  for (const auto& [key, len] : acc.best) r.slice.k.emplace(output_from_key(key), len);

  std::sort(acc.long_outputs.begin(), acc.long_outputs.end(), lex_less);
  for (const auto& code : acc.long_outputs) {
    const ExecutionOutcome run = execute(spec, code.to_bitstring(), condition, budget);
    if (run.status != RunStatus::halted) {
      throw Error(Errc::invalid_input, "tree walk and reference interpreter disagree on " +
                                           code.to_bitstring().text());
    }
    auto [it, inserted] = r.slice.k.try_emplace(run.output, code.length);
    if (!inserted && code.length < it->second) it->second = code.length;
  }

  r.halting_programs = std::move(acc.programs);
  std::sort(r.halting_programs.begin(), r.halting_programs.end(), lex_less);
  return r;
}

}  // namespace detail

namespace {

using detail::ForkState;
using detail::Leaf;
using detail::TreeAccumulator;
using detail::TreeContext;

// Enough independent subtrees to keep dynamic scheduling balanced. Fixed so
// that the frontier never depends on the worker count.
constexpr std::size_t kFrontierTarget = 4096;
constexpr std::uint64_t kFlushInterval = 1U << 14;

struct NodeBudget {
  std::atomic<std::uint64_t>& shared;
  std::atomic<bool>& abort;
  std::uint64_t cap;
  std::uint64_t pending = 0;

  bool spend() {
    if (++pending == kFlushInterval) {
      const auto total = shared.fetch_add(pending, std::memory_order_relaxed) + pending;
      pending = 0;
      if (total > cap) abort.store(true, std::memory_order_relaxed);
    }
    return !abort.load(std::memory_order_relaxed);
  }
};

void walk(ForkState& s, const TreeContext& ctx, TreeAccumulator& acc, NodeBudget& guard) {
  ++acc.nodes;
  if (!guard.spend()) return;
  const Leaf leaf = detail::run(s, ctx);
  if (leaf == Leaf::halted) {
    acc.record_halt(s);
    return;
  }
  if (leaf == Leaf::dead || s.prog_len == ctx.max_len) return;
  ForkState zero = s;
  detail::feed(zero, 0, ctx);
  walk(zero, ctx, acc, guard);
  detail::feed(s, 1, ctx);
  walk(s, ctx, acc, guard);
}

[[noreturn]] void node_cap_exceeded(std::uint64_t cap) {
  throw Error(Errc::resource_limit, "program tree exceeds node cap of " + std::to_string(cap));
}

}  // namespace

EnumerationResult enumerate(const MachineSpec& spec, const BitString& condition, unsigned max_len,
                            std::uint64_t budget, const EnumerateOptions& options) {
  const TreeContext ctx = detail::make_context(spec, condition, max_len, budget);
  TreeAccumulator total(max_len, options.collect_programs);

  // Breadth-first expansion down to a frontier of unexplored subtrees.
  std::vector<ForkState> frontier(1);
  while (!frontier.empty() && frontier.size() < kFrontierTarget) {
    std::vector<ForkState> next;
    next.reserve(frontier.size() * 2);
    for (ForkState& s : frontier) {
      if (++total.nodes > options.node_cap) node_cap_exceeded(options.node_cap);
      const Leaf leaf = detail::run(s, ctx);
      if (leaf == Leaf::halted) {
        total.record_halt(s);
      } else if (leaf == Leaf::needs_bit && s.prog_len < max_len) {
        next.push_back(s);
        detail::feed(next.back(), 0, ctx);
        next.push_back(s);
        detail::feed(next.back(), 1, ctx);
      }
    }
    frontier.swap(next);
  }

  const int workers = options.workers == 0 ? omp_get_max_threads() : static_cast<int>(options.workers);
  std::vector<TreeAccumulator> parts(static_cast<std::size_t>(workers),
                                     TreeAccumulator(max_len, options.collect_programs));
  std::atomic<std::uint64_t> shared{total.nodes};
  std::atomic<bool> abort{false};
  const auto n = static_cast<std::int64_t>(frontier.size());

#pragma omp parallel num_threads(workers)
  {
    TreeAccumulator& local = parts[static_cast<std::size_t>(omp_get_thread_num())];
    NodeBudget guard{shared, abort, options.node_cap};
#pragma omp for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i) {
      if (abort.load(std::memory_order_relaxed)) continue;
      walk(frontier[static_cast<std::size_t>(i)], ctx, local, guard);
    }
  }

  for (auto& part : parts) total.merge(std::move(part));
  if (abort.load() || total.nodes > options.node_cap) node_cap_exceeded(options.node_cap);
  return detail::finalize(std::move(total), spec, condition, budget);
}

ComplexityTable build_table(const MachineSpec& spec, std::span<const BitString> conditions,
                            unsigned max_len, std::uint64_t budget,
                            const EnumerateOptions& options) {
  ComplexityTable table{spec.id, max_len, budget, {}};
  EnumerateOptions opts = options;
  opts.collect_programs = false;
  for (const BitString& x : conditions) {
    if (table.slices.contains(x)) continue;
    table.slices.emplace(x, enumerate(spec, x, max_len, budget, opts).slice);
  }
  return table;
}

const ConditionSlice& slice_for(const ComplexityTable& table, const BitString& condition) {
  auto it = table.slices.find(condition);
  if (it == table.slices.end()) {
    throw Error(Errc::condition_not_enumerated,
                "condition " + condition.text() + " not enumerated in this table");
  }
  return it->second;
}

std::optional<unsigned> k_cond(const ComplexityTable& table, const BitString& y,
                               const BitString& x) {
  const ConditionSlice& slice = slice_for(table, x);
  auto it = slice.k.find(y);
  if (it == slice.k.end()) return std::nullopt;
  return it->second;
}

double kraft_sum(std::span<const std::uint64_t> length_histogram) {
  double sum = 0.0;
  for (std::size_t l = 0; l < length_histogram.size(); ++l) {
    sum += std::ldexp(static_cast<double>(length_histogram[l]), -static_cast<int>(l));
  }
  return sum;
}

double kraft_sum(const ComplexityTable& table, const BitString& condition) {
  return kraft_sum(slice_for(table, condition).length_histogram);
}

CountingCheck counting_check(const ComplexityTable& table, unsigned n) {
  if (n < 1 || n > 63) throw Error(Errc::invalid_input, "counting check needs 1 <= n <= 63");
  const ConditionSlice& slice = slice_for(table, BitString{});
  std::uint64_t count = 0;
  for (const auto& [x, k] : slice.k) count += k < n;
  const std::uint64_t bound = std::uint64_t{1} << n;
  return {count, bound, count < bound};
}

bool is_prefix_free(std::span<const ProgramCode> programs) {
  std::vector<ProgramCode> sorted(programs.begin(), programs.end());
  std::sort(sorted.begin(), sorted.end(), detail::lex_less);
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    const ProgramCode& p = sorted[i - 1];
    const ProgramCode& q = sorted[i];
    if (p.length <= q.length && (q.bits >> (q.length - p.length)) == p.bits) return false;
  }
  return true;
}

}  // namespace infolaw
