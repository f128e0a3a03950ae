#include "tapedyn/machine.hpp"

#include <stdexcept>

namespace tapedyn {

MachineSpec MachineSpec::canonical() const {
  MachineSpec m = *this;
  for (std::size_t i = 0; i < m.state_names.size(); ++i)
    m.state_names[i] = "q" + std::to_string(i);
  return m;
}

Configuration initial_configuration(const MachineSpec& spec, const Word& input) {
  for (Symbol s : input)
    if (!spec.alphabet.input_contains(s))
      throw SymbolError("input symbol " + to_utf8(s) +
                        " not in the input alphabet");
  return Configuration{spec.start, 0, input};
}

Symbol read_cell(const Configuration& cfg, const Alphabet& alphabet) {
  return cfg.head < cfg.tape.size() ? cfg.tape[cfg.head] : alphabet.blank();
}

Configuration step(const MachineSpec& spec, Configuration cfg) {
  if (spec.is_halting(cfg.state))
    throw std::logic_error("step on a halted configuration");
  Symbol scanned = read_cell(cfg, spec.alphabet);
  unsigned sym_idx = *spec.alphabet.index_of(scanned);
  const Transition& t = spec.delta[cfg.state][sym_idx];
  if (cfg.head >= cfg.tape.size())
    cfg.tape.resize(cfg.head + 1, spec.alphabet.blank());
  cfg.tape[cfg.head] = t.write;
  if (t.move == Move::R) {
    ++cfg.head;
  } else if (cfg.head > 0) {
    --cfg.head;  // moving L at cell 0 leaves the head in place
  }
  cfg.state = t.next_state;
  return cfg;
}

RunOutcome run(const MachineSpec& spec, const Word& input, std::uint64_t budget) {
  if (budget == 0) throw std::invalid_argument("step budget must be positive");
  Configuration cfg = initial_configuration(spec, input);
  RunOutcome out;
  for (std::uint64_t n = 0; n < budget; ++n) {
    if (spec.is_halting(cfg.state)) break;
    cfg = step(spec, cfg);
    out.steps = n + 1;
  }
  if (spec.is_halting(cfg.state)) {
    out.kind = RunOutcome::Kind::Halted;
    out.halt = cfg.state == spec.accept ? HaltKind::Accept : HaltKind::Reject;
  } else {
    out.kind = RunOutcome::Kind::BudgetExhausted;
  }
  out.final_config = std::move(cfg);
  return out;
}

}  // namespace tapedyn
