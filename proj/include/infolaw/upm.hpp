#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "infolaw/bitstring.hpp"

namespace infolaw {

/// Reference universal prefix machines.
///
/// State is two unbounded nonnegative counters A and B, an input tape, an
/// output sequence and a list of decoded instructions. Program bits are
/// pulled left to right only when the instruction pointer reaches an
/// instruction that has not been decoded yet. Jumps only go backwards, so a
/// halting run never looks past its last consumed bit and the set of halting
/// programs is prefix-free.
///
///   HALT  stop
///   OUT0  append 0 to the output
///   OUT1  append 1 to the output
///   READ  A := 2A + next tape bit (exhausted tape is a runtime failure)
///   INC   A := A + 1
///   DEC   A := max(A - 1, 0)
///   JNZ d if A != 0 jump back d instructions (d decoded once, right after
///         the opcode; a target before the first instruction is a failure)
///   SWP   swap A and B
enum class MachineId : std::uint8_t { upm1, upm2 };

enum class Instruction : std::uint8_t { halt, out0, out1, read, inc, dec, jnz, swp };

enum class OperandCode : std::uint8_t { elias_gamma, elias_delta };

struct MachineSpec {
  MachineId id;
  /// Indexed by the 3-bit opcode read MSB-first.
  std::array<Instruction, 8> opcodes;
  OperandCode jump_operand;
};

/// UPM-1: opcodes 000..111 = HALT OUT0 OUT1 READ INC DEC JNZ SWP, gamma operands.
/// UPM-2: the same table reversed, delta operands.
const MachineSpec& machine(MachineId id) noexcept;
/// Accepts "UPM-1" / "UPM-2"; anything else is Errc::unknown_machine.
MachineId parse_machine_id(std::string_view name);
std::string_view machine_name(MachineId id) noexcept;
std::string_view instruction_name(Instruction op) noexcept;

enum class RunStatus : std::uint8_t { halted, invalid, budget_exhausted, needs_program_bit };

std::string_view status_name(RunStatus s) noexcept;

struct ExecutionOutcome {
  RunStatus status;
  BitString output;
  BitString consumed_program;
  std::uint64_t steps_used;
};

/// Input tape for conditional runs: gamma(|x| + 1) followed by x.
BitString encode_condition(const BitString& x);

/// Counters are 64-bit; the tape plus the step budget must fit so that no
/// run can overflow: |tape| + bit_width(budget + 1) <= 63.
bool counters_fit(std::size_t tape_bits, std::uint64_t step_budget) noexcept;

/// Runs a complete program against a condition. One instruction is one step.
/// Every failure is reported in the status field; only malformed arguments
/// (zero budget, oversized tape) throw.
ExecutionOutcome execute(const MachineSpec& spec, const BitString& program,
                         const BitString& condition, std::uint64_t step_budget);

}  // namespace infolaw
