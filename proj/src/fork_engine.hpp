// Resumable machine state for the program-tree walk. Unlike execute(), which
// runs one complete program, a ForkState can be stopped when the machine asks
// for a program bit, copied, and resumed once per branch.
#pragma once

#include <cstdint>
#include <functional>

#include "infolaw/enumerator.hpp"
#include "infolaw/upm.hpp"

namespace infolaw::detail {

inline constexpr unsigned kMaxInstructions = kMaxProgramBits / 3;

enum class Phase : std::uint8_t {
  opcode,
  gamma_zeros,
  gamma_body,
  delta_width_zeros,
  delta_width_body,
  delta_body,
};

enum class Leaf : std::uint8_t { halted, dead, needs_bit };

struct TreeContext {
  const MachineSpec* spec;
  std::uint64_t tape;  // MSB-first in the low tape_len bits
  unsigned tape_len;
  std::uint64_t budget;
  unsigned max_len;
};

TreeContext make_context(const MachineSpec& spec, const BitString& condition, unsigned max_len,
                         std::uint64_t budget);

struct ForkState {
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  std::uint64_t steps = 0;
  std::uint64_t prog = 0;  // consumed program bits
  std::uint64_t out = 0;   // first 64 output bits
  std::uint64_t acc = 0;   // decoder accumulator
  std::uint32_t out_len = 0;
  std::uint8_t prog_len = 0;
  std::uint8_t ip = 0;
  std::uint8_t count = 0;
  std::uint8_t tape_pos = 0;
  std::uint8_t ninstr = 0;
  Phase phase = Phase::opcode;
  Instruction instr[kMaxInstructions];
  std::uint64_t arg[kMaxInstructions];
};

inline void push_instruction(ForkState& s, Instruction op, std::uint64_t arg) {
  s.instr[s.ninstr] = op;
  s.arg[s.ninstr] = arg;
  ++s.ninstr;
  s.phase = Phase::opcode;
  s.acc = 0;
  s.count = 0;
}

/// Appends one program bit and advances the instruction decoder.
inline void feed(ForkState& s, unsigned bit, const TreeContext& ctx) {
  s.prog = (s.prog << 1) | bit;
  ++s.prog_len;
  switch (s.phase) {
    case Phase::opcode:
      s.acc = (s.acc << 1) | bit;
      if (++s.count == 3) {
        const Instruction op = ctx.spec->opcodes[s.acc];
        if (op != Instruction::jnz) {
          push_instruction(s, op, 0);
        } else {
          s.phase = ctx.spec->jump_operand == OperandCode::elias_gamma ? Phase::gamma_zeros
                                                                        : Phase::delta_width_zeros;
          s.acc = 0;
          s.count = 0;
        }
      }
      break;
    case Phase::gamma_zeros:
    case Phase::delta_width_zeros: {
      const bool width = s.phase == Phase::delta_width_zeros;
      if (bit == 0) {
        ++s.count;
      } else if (s.count == 0) {
        // gamma(1) = "1": a distance of 1, or a delta width of 1 (also distance 1)
        push_instruction(s, Instruction::jnz, 1);
      } else {
        s.acc = 1;
        s.phase = width ? Phase::delta_width_body : Phase::gamma_body;
      }
      break;
    }
    case Phase::gamma_body:
      s.acc = (s.acc << 1) | bit;
      if (--s.count == 0) push_instruction(s, Instruction::jnz, s.acc);
      break;
    case Phase::delta_width_body:
      s.acc = (s.acc << 1) | bit;
      if (--s.count == 0) {
        // acc is the bit width of the distance; its leading 1 is implicit
        s.count = static_cast<std::uint8_t>(s.acc - 1);
        s.acc = 1;
        s.phase = Phase::delta_body;
      }
      break;
    case Phase::delta_body:
      s.acc = (s.acc << 1) | bit;
      if (--s.count == 0) push_instruction(s, Instruction::jnz, s.acc);
      break;
  }
}

/// Runs until HALT, a runtime failure, budget exhaustion, or a request for an
/// undecoded instruction.
inline Leaf run(ForkState& s, const TreeContext& ctx) {
  const std::uint64_t budget = ctx.budget;
  for (;;) {
    if (s.ip == s.ninstr) return Leaf::needs_bit;
    if (s.steps == budget) return Leaf::dead;
    ++s.steps;
    switch (s.instr[s.ip]) {
      case Instruction::halt:
        return Leaf::halted;
      case Instruction::out0:
        s.out <<= (s.out_len < 64);
        ++s.out_len;
        ++s.ip;
        break;
      case Instruction::out1:
        if (s.out_len < 64) s.out = (s.out << 1) | 1U;
        ++s.out_len;
        ++s.ip;
        break;
      case Instruction::read:
        if (s.tape_pos >= ctx.tape_len) return Leaf::dead;
        s.a = 2 * s.a + ((ctx.tape >> (ctx.tape_len - 1 - s.tape_pos)) & 1U);
        ++s.tape_pos;
        ++s.ip;
        break;
      case Instruction::inc:
        ++s.a;
        ++s.ip;
        break;
      case Instruction::dec:
        s.a -= (s.a != 0);
        ++s.ip;
        break;
      case Instruction::jnz:
        if (s.a != 0) {
          if (s.arg[s.ip] > s.ip) return Leaf::dead;
          s.ip = static_cast<std::uint8_t>(s.ip - s.arg[s.ip]);
        } else {
          ++s.ip;
        }
        break;
      case Instruction::swp:
        std::swap(s.a, s.b);
        ++s.ip;
        break;
    }
  }
}

}  // namespace infolaw::detail
