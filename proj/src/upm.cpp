#include "infolaw/upm.hpp"

#include <bit>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "infolaw/error.hpp"

namespace infolaw {
namespace {

using enum Instruction;

constexpr MachineSpec kUpm1{MachineId::upm1,
                            {halt, out0, out1, read, inc, dec, jnz, swp},
                            OperandCode::elias_gamma};
constexpr MachineSpec kUpm2{MachineId::upm2,
                            {swp, jnz, dec, inc, read, out1, out0, halt},
                            OperandCode::elias_delta};

// Program reader for the reference interpreter. Returns nullopt when the
// program runs out of bits.
class ProgramCursor {
 public:
  explicit ProgramCursor(const BitString& program) : program_(program) {}

  std::optional<std::uint8_t> next() {
    if (pos_ >= program_.size()) return std::nullopt;
    return program_[pos_++];
  }

  std::optional<std::uint64_t> opcode() {
    std::uint64_t v = 0;
    for (int i = 0; i < 3; ++i) {
      auto b = next();
      if (!b) return std::nullopt;
      v = (v << 1) | *b;
    }
    return v;
  }

  // Values saturate; any saturated distance lands before instruction 0.
  std::optional<std::uint64_t> gamma() {
    std::uint64_t zeros = 0;
    for (;;) {
      auto b = next();
      if (!b) return std::nullopt;
      if (*b == 1) break;
      ++zeros;
    }
    std::uint64_t v = 1;
    for (std::uint64_t i = 0; i < zeros; ++i) {
      auto b = next();
      if (!b) return std::nullopt;
      v = saturating_shift_in(v, *b);
    }
    return v;
  }

  std::optional<std::uint64_t> delta() {
    auto width = gamma();
    if (!width) return std::nullopt;
    std::uint64_t v = 1;
    for (std::uint64_t i = 1; i < *width; ++i) {
      auto b = next();
      if (!b) return std::nullopt;
      v = saturating_shift_in(v, *b);
    }
    return v;
  }

  std::size_t consumed() const { return pos_; }

 private:
  static std::uint64_t saturating_shift_in(std::uint64_t v, std::uint8_t bit) {
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    if (v > (kMax >> 1)) return kMax;
    return (v << 1) | bit;
  }

  const BitString& program_;
  std::size_t pos_ = 0;
};

struct Decoded {
  Instruction op;
  std::uint64_t operand;
};

}  // namespace

const MachineSpec& machine(MachineId id) noexcept {
  return id == MachineId::upm1 ? kUpm1 : kUpm2;
}

MachineId parse_machine_id(std::string_view name) {
  if (name == "UPM-1") return MachineId::upm1;
  if (name == "UPM-2") return MachineId::upm2;
  throw Error(Errc::unknown_machine, "unknown machine id \"" + std::string(name) + "\"");
}

std::string_view machine_name(MachineId id) noexcept {
  return id == MachineId::upm1 ? "UPM-1" : "UPM-2";
}

std::string_view instruction_name(Instruction op) noexcept {
  switch (op) {
    case halt: return "HALT";
    case out0: return "OUT0";
    case out1: return "OUT1";
    case read: return "READ";
    case inc: return "INC";
    case dec: return "DEC";
    case jnz: return "JNZ";
    case swp: return "SWP";
  }
  return "?";
}

std::string_view status_name(RunStatus s) noexcept {
  switch (s) {
    case RunStatus::halted: return "halted";
    case RunStatus::invalid: return "invalid";
    case RunStatus::budget_exhausted: return "budget_exhausted";
    case RunStatus::needs_program_bit: return "needs_program_bit";
  }
  return "?";
}

BitString encode_condition(const BitString& x) {
  return concat(gamma_encode(x.size() + 1), x);
}

bool counters_fit(std::size_t tape_bits, std::uint64_t step_budget) noexcept {
  if (step_budget >= (std::uint64_t{1} << 62)) return false;
  return tape_bits + static_cast<std::size_t>(std::bit_width(step_budget + 1)) <= 63;
}

ExecutionOutcome execute(const MachineSpec& spec, const BitString& program,
                         const BitString& condition, std::uint64_t step_budget) {
  if (step_budget == 0) throw Error(Errc::invalid_input, "step budget must be >= 1");
  const BitString tape = encode_condition(condition);
  if (!counters_fit(tape.size(), step_budget)) {
    throw Error(Errc::invalid_input, "condition too long for the step budget (counter range)");
  }

  ProgramCursor cursor(program);
  std::vector<Decoded> code;
  std::vector<std::uint8_t> out;
  std::uint64_t a = 0, b = 0, steps = 0;
  std::size_t ip = 0, tape_pos = 0;

  auto finish = [&](RunStatus status) {
    std::vector<std::uint8_t> used(program.bits().begin(),
                                   program.bits().begin() + static_cast<std::ptrdiff_t>(cursor.consumed()));
    return ExecutionOutcome{status, BitString(std::move(out)), BitString(std::move(used)), steps};
  };

  for (;;) {
    if (ip == code.size()) {
      auto opc = cursor.opcode();
      if (!opc) return finish(RunStatus::needs_program_bit);
      Decoded d{spec.opcodes[*opc], 0};
      if (d.op == jnz) {
        auto operand = spec.jump_operand == OperandCode::elias_gamma ? cursor.gamma() : cursor.delta();
        if (!operand) return finish(RunStatus::needs_program_bit);
        d.operand = *operand;
      }
      code.push_back(d);
    }
    if (steps == step_budget) return finish(RunStatus::budget_exhausted);
    ++steps;
    const Decoded& d = code[ip];
    switch (d.op) {
      case halt: return finish(RunStatus::halted);
      case out0: out.push_back(0); ++ip; break;
      case out1: out.push_back(1); ++ip; break;
      case read:
        if (tape_pos >= tape.size()) return finish(RunStatus::invalid);
        a = 2 * a + tape[tape_pos++];
        ++ip;
        break;
      case inc: ++a; ++ip; break;
      case dec: if (a > 0) --a; ++ip; break;
      case jnz:
        if (a != 0) {
          if (d.operand > ip) return finish(RunStatus::invalid);
          ip -= d.operand;
        } else {
          ++ip;
        }
        break;
      case swp: std::swap(a, b); ++ip; break;
    }
  }
}

}  // namespace infolaw
