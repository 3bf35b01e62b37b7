#include "infolaw/enumerator.hpp"
#include "infolaw/error.hpp"
#include "tree_accumulator.hpp"

namespace infolaw {
namespace {

using detail::ForkState;
using detail::Leaf;
using detail::TreeAccumulator;
using detail::TreeContext;

void walk(ForkState& s, const TreeContext& ctx, TreeAccumulator& acc, std::uint64_t node_cap) {
  if (++acc.nodes > node_cap) {
    throw Error(Errc::resource_limit,
                "program tree exceeds node cap of " + std::to_string(node_cap));
  }
  const Leaf leaf = detail::run(s, ctx);
  if (leaf == Leaf::halted) {
    acc.record_halt(s);
    return;
  }
  if (leaf == Leaf::dead || s.prog_len == ctx.max_len) return;
  ForkState zero = s;
  detail::feed(zero, 0, ctx);
  walk(zero, ctx, acc, node_cap);
  detail::feed(s, 1, ctx);
  walk(s, ctx, acc, node_cap);
}

}  // namespace

EnumerationResult enumerate_serial(const MachineSpec& spec, const BitString& condition,
                                   unsigned max_len, std::uint64_t budget,
                                   const EnumerateOptions& options) {
  const TreeContext ctx = detail::make_context(spec, condition, max_len, budget);
  TreeAccumulator acc(max_len, options.collect_programs);
  ForkState root;
  walk(root, ctx, acc, options.node_cap);
  return detail::finalize(std::move(acc), spec, condition, budget);
}

}  // namespace infolaw
