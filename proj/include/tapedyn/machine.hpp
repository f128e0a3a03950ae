#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tapedyn/codec.hpp"

namespace tapedyn {

enum class Move : std::uint8_t { L, R };

struct Transition {
  std::uint32_t next_state = 0;
  Symbol write = 0;
  Move move = Move::R;
  bool operator==(const Transition&) const = default;
};

// Deterministic machine over a left-bounded, right-infinite tape.
// delta is total on (non-halting state) x (tape symbol); accept may equal
// reject. States are indices into state_names.
struct MachineSpec {
  std::vector<std::string> state_names;
  Alphabet alphabet;
  std::uint32_t start = 0;
  std::uint32_t accept = 0;
  std::uint32_t reject = 0;
  // delta[state][tape symbol index]; rows of halting states are unused.
  std::vector<std::vector<Transition>> delta;

  bool is_halting(std::uint32_t q) const { return q == accept || q == reject; }
  std::size_t state_count() const { return state_names.size(); }

  // Structural equality including names.
  bool operator==(const MachineSpec&) const = default;

  // Same machine with states renamed q0..qN; used for encode/decode identity.
  MachineSpec canonical() const;
};

// Materialized tape prefix; cells at index >= tape.size() read as blank.
struct Configuration {
  std::uint32_t state = 0;
  std::uint64_t head = 0;
  Word tape;
};

// Validates the input over the input alphabet (SymbolError otherwise).
Configuration initial_configuration(const MachineSpec& spec, const Word& input);

Symbol read_cell(const Configuration& cfg, const Alphabet& alphabet);

// Executes one transition: write (extending the tape with blanks if the head
// lies beyond it), then move; moving L at cell 0 leaves the head at 0.
// Throws std::logic_error if cfg.state is halting.
Configuration step(const MachineSpec& spec, Configuration cfg);

enum class HaltKind : std::uint8_t { Accept, Reject };

struct RunOutcome {
  enum class Kind : std::uint8_t { Halted, BudgetExhausted } kind =
      Kind::BudgetExhausted;
  HaltKind halt = HaltKind::Accept;  // meaningful when kind == Halted
  std::uint64_t steps = 0;
  Configuration final_config;
};

// Runs from the initial configuration for at most `budget` steps (budget >= 1).
RunOutcome run(const MachineSpec& spec, const Word& input, std::uint64_t budget);

// Parse error for the .tm format, reported with 1-based line and column.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Parses the line-oriented .tm format (see README). Sections appear in fixed
// order; '#' starts a comment; symbols are single non-whitespace code points.
// Rejects undeclared states/symbols, duplicate transitions, and incomplete
// transition tables, naming the offending state/symbol pair.
MachineSpec parse_machine(std::string_view text);

class EncodingError : public std::runtime_error {
 public:
  explicit EncodingError(std::size_t position, const std::string& message);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Injective, self-delimiting description over the binary symbols '0'/'1':
// every field is a unary run 1^(n+1) 0. decode(encode(spec)) == spec.canonical().
Word encode_machine(const MachineSpec& spec);
MachineSpec decode_machine(const Word& description);

// Interpreter-universal machine: decodes `description` and runs it on `input`.
RunOutcome simulate_universal(const Word& description, const Word& input,
                              std::uint64_t budget);

}  // namespace tapedyn
