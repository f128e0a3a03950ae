#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace tapedyn {

using BigInt = boost::multiprecision::cpp_int;

// A tape symbol is a single Unicode code point; a word is a finite sequence.
using Symbol = char32_t;
using Word = std::u32string;

std::string to_utf8(Symbol s);
std::string to_utf8(const Word& w);
// Throws std::invalid_argument on malformed UTF-8.
Word word_from_utf8(std::string_view text);

class SymbolError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Ordered tape alphabet with a designated blank and an input subset.
// Invariants: symbols distinct, blank in tape, blank not in input,
// input subset of tape, at least two tape symbols.
class Alphabet {
 public:
  // Empty placeholder; real alphabets come from create().
  Alphabet() = default;

  static Alphabet create(std::vector<Symbol> tape, std::vector<Symbol> input,
                         Symbol blank);

  const std::vector<Symbol>& tape() const { return tape_; }
  const std::vector<Symbol>& input() const { return input_; }
  Symbol blank() const { return blank_; }
  unsigned base() const { return static_cast<unsigned>(tape_.size()); }

  std::optional<unsigned> index_of(Symbol s) const;
  bool contains(Symbol s) const { return index_of(s).has_value(); }
  bool input_contains(Symbol s) const;
  bool word_over_input(const Word& w) const;

  bool operator==(const Alphabet&) const = default;

 private:
  std::vector<Symbol> tape_;
  std::vector<Symbol> input_;
  Symbol blank_ = 0;
};

// Canonical digit map: blank -> 0, the remaining tape symbols -> 1, 2, ...
// in declaration order. Bijective between the alphabet and 0..base-1.
class GodelMap {
 public:
  explicit GodelMap(Alphabet alphabet);

  unsigned base() const { return alphabet_.base(); }
  const Alphabet& alphabet() const { return alphabet_; }

  // Throws SymbolError for symbols outside the alphabet.
  unsigned digit(Symbol s) const;
  Symbol symbol(unsigned digit) const;

 private:
  Alphabet alphabet_;
  std::vector<unsigned> digit_by_index_;   // tape index -> digit
  std::vector<Symbol> symbol_by_digit_;    // digit -> symbol
};

// Exact rational value numerator / base^length in [0, 1].
// canonical_word is the word the value was computed from (phase_of_tape
// stores the blank-trimmed prefix; membership tests key on the word, not the
// value, so words differing only in trailing zero digits stay distinct).
struct Phase {
  BigInt numerator;
  unsigned base = 2;
  std::uint64_t length = 0;
  Word canonical_word;

  static Phase zero(unsigned base) { return Phase{BigInt(0), base, 0, {}}; }

  // Round-to-nearest float64 projection, within one ulp of the exact value.
  double to_double() const;
  std::string numerator_decimal() const;

  // Exact value comparison (cross-multiplied; mixed bases allowed).
  std::strong_ordering compare(const Phase& o) const;
  friend bool operator==(const Phase& a, const Phase& b) {
    return a.compare(b) == std::strong_ordering::equal;
  }
  friend bool operator<(const Phase& a, const Phase& b) {
    return a.compare(b) == std::strong_ordering::less;
  }
};

// G(w) = sum of digit(w_k) * base^k with w_0 the rightmost symbol.
BigInt godelize(const Word& w, const GodelMap& map);

// rho(w) = G(w) / base^|w|; canonical_word = w as passed.
Phase rationalize(const Word& w, const GodelMap& map);

// Trims the tape at the first blank and rationalizes the prefix.
Phase phase_of_tape(const Word& tape, const GodelMap& map);

// Inverse of godelize for a known length: digits back to symbols.
// Throws std::invalid_argument if numerator needs more than `length` digits.
Word word_of_digits(const BigInt& numerator, std::uint64_t length,
                    const GodelMap& map);

// Float64 projection of numerator / base^length (shared with Phase).
double project_phase(const BigInt& numerator, unsigned base,
                     std::uint64_t length);

}  // namespace tapedyn
