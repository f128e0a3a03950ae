#include "tapedyn/machine.hpp"

namespace tapedyn {

EncodingError::EncodingError(std::size_t position, const std::string& message)
    : std::runtime_error("description position " + std::to_string(position) +
                         ": " + message),
      position_(position) {}

namespace {

// Every field is the unary run 1^(n+1) 0: self-delimiting, injective, and
// trivially countable. Layout:
//   |Q| |Gamma| |Sigma| blank-index
//   code point of each tape symbol
//   tape index of each input symbol
//   start accept reject
//   (target, write-index, move) per non-halting state x tape symbol slot
void put(Word& out, std::uint64_t n) {
  out.append(static_cast<std::size_t>(n) + 1, U'1');
  out.push_back(U'0');
}

class RunReader {
 public:
  explicit RunReader(const Word& w) : w_(w) {}

  std::uint64_t next(const char* what) {
    std::uint64_t ones = 0;
    while (pos_ < w_.size() && w_[pos_] == U'1') {
      ++ones;
      ++pos_;
    }
    if (pos_ >= w_.size())
      throw EncodingError(pos_, std::string("truncated run while reading ") +
                                    what);
    if (w_[pos_] != U'0')
      throw EncodingError(pos_, "expected binary symbol 0 or 1");
    ++pos_;
    if (ones == 0)
      throw EncodingError(pos_ - 1, std::string("empty run while reading ") +
                                        what);
    return ones - 1;
  }

  void expect_end() const {
    if (pos_ != w_.size())
      throw EncodingError(pos_, "trailing symbols after a complete description");
  }

  std::size_t pos() const { return pos_; }

 private:
  const Word& w_;
  std::size_t pos_ = 0;
};

}  // namespace

Word encode_machine(const MachineSpec& spec) {
  const Alphabet& a = spec.alphabet;
  Word out;
  put(out, spec.state_count());
  put(out, a.base());
  put(out, a.input().size());
  put(out, *a.index_of(a.blank()));
  for (Symbol s : a.tape()) put(out, static_cast<std::uint64_t>(s));
  for (Symbol s : a.input()) put(out, *a.index_of(s));
  put(out, spec.start);
  put(out, spec.accept);
  put(out, spec.reject);
  for (std::uint32_t q = 0; q < spec.state_count(); ++q) {
    if (spec.is_halting(q)) continue;
    for (unsigned g = 0; g < a.base(); ++g) {
      const Transition& t = spec.delta[q][g];
      put(out, t.next_state);
      put(out, *a.index_of(t.write));
      put(out, t.move == Move::L ? 0 : 1);
    }
  }
  return out;
}

MachineSpec decode_machine(const Word& description) {
  RunReader r(description);
  std::uint64_t n_states = r.next("state count");
  std::uint64_t n_tape = r.next("tape alphabet size");
  std::uint64_t n_input = r.next("input alphabet size");
  std::uint64_t blank_idx = r.next("blank index");
  if (n_states == 0) throw EncodingError(r.pos(), "no states");
  if (blank_idx >= n_tape)
    throw EncodingError(r.pos(), "blank index out of range");

  std::vector<Symbol> tape;
  for (std::uint64_t i = 0; i < n_tape; ++i) {
    std::uint64_t cp = r.next("tape symbol code point");
    if (cp > 0x10FFFF) throw EncodingError(r.pos(), "code point out of range");
    tape.push_back(static_cast<Symbol>(cp));
  }
  std::vector<Symbol> input;
  for (std::uint64_t i = 0; i < n_input; ++i) {
    std::uint64_t idx = r.next("input symbol index");
    if (idx >= n_tape)
      throw EncodingError(r.pos(), "input symbol index out of range");
    input.push_back(tape[static_cast<std::size_t>(idx)]);
  }
  Symbol blank = tape[static_cast<std::size_t>(blank_idx)];

  MachineSpec spec;
  try {
    spec.alphabet = Alphabet::create(std::move(tape), std::move(input), blank);
  } catch (const std::invalid_argument& e) {
    throw EncodingError(r.pos(), e.what());
  }
  for (std::uint64_t q = 0; q < n_states; ++q)
    spec.state_names.push_back("q" + std::to_string(q));

  auto state_field = [&](const char* what) {
    std::uint64_t q = r.next(what);
    if (q >= n_states)
      throw EncodingError(r.pos(), std::string(what) + " out of range");
    return static_cast<std::uint32_t>(q);
  };
  spec.start = state_field("start state");
  spec.accept = state_field("accept state");
  spec.reject = state_field("reject state");

  spec.delta.assign(spec.state_count(),
                    std::vector<Transition>(spec.alphabet.base()));
  for (std::uint32_t q = 0; q < spec.state_count(); ++q) {
    if (spec.is_halting(q)) continue;
    for (unsigned g = 0; g < spec.alphabet.base(); ++g) {
      std::uint32_t target = state_field("transition target");
      std::uint64_t write_idx = r.next("write symbol index");
      if (write_idx >= spec.alphabet.base())
        throw EncodingError(r.pos(), "write symbol index out of range");
      std::uint64_t move = r.next("move flag");
      if (move > 1) throw EncodingError(r.pos(), "move flag out of range");
      spec.delta[q][g] =
          Transition{target, spec.alphabet.tape()[write_idx],
                     move == 0 ? Move::L : Move::R};
    }
  }
  r.expect_end();
  return spec;
}

RunOutcome simulate_universal(const Word& description, const Word& input,
                              std::uint64_t budget) {
  return run(decode_machine(description), input, budget);
}

}  // namespace tapedyn
