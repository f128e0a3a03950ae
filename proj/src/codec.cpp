#include "tapedyn/codec.hpp"

#include <algorithm>
#include <unordered_set>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace tapedyn {

namespace {

// 113-bit mantissa with a wide exponent so b^length never overflows the
// intermediate; the final division error is far below half an ulp of double.
using BigFloat = boost::multiprecision::number<
    boost::multiprecision::backends::cpp_bin_float<
        113, boost::multiprecision::backends::digit_base_2, void,
        std::int64_t>>;

void append_utf8(std::string& out, char32_t c) {
  if (c < 0x80) {
    out.push_back(static_cast<char>(c));
  } else if (c < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (c >> 6)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else if (c < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (c >> 12)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (c >> 18)));
    out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  }
}

}  // namespace

std::string to_utf8(Symbol s) {
  std::string out;
  append_utf8(out, s);
  return out;
}

std::string to_utf8(const Word& w) {
  std::string out;
  out.reserve(w.size());
  for (char32_t c : w) append_utf8(out, c);
  return out;
}

Word word_from_utf8(std::string_view text) {
  Word out;
  out.reserve(text.size());
  std::size_t i = 0;
  auto bad = [&](const char* why) {
    throw std::invalid_argument("invalid UTF-8 at byte " + std::to_string(i) +
                                ": " + why);
  };
  while (i < text.size()) {
    unsigned char b0 = static_cast<unsigned char>(text[i]);
    std::size_t extra;
    char32_t cp;
    if (b0 < 0x80) {
      extra = 0;
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      extra = 1;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      extra = 2;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      extra = 3;
      cp = b0 & 0x07;
    } else {
      bad("stray continuation or invalid lead byte");
      return out;
    }
    if (i + extra >= text.size()) bad("truncated sequence");
    for (std::size_t k = 1; k <= extra; ++k) {
      unsigned char bk = static_cast<unsigned char>(text[i + k]);
      if ((bk & 0xC0) != 0x80) bad("missing continuation byte");
      cp = (cp << 6) | (bk & 0x3F);
    }
    static constexpr char32_t kMin[4] = {0, 0x80, 0x800, 0x10000};
    if (cp < kMin[extra]) bad("overlong encoding");
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) bad("invalid code point");
    out.push_back(cp);
    i += extra + 1;
  }
  return out;
}

Alphabet Alphabet::create(std::vector<Symbol> tape, std::vector<Symbol> input,
                          Symbol blank) {
  if (tape.size() < 2)
    throw std::invalid_argument("tape alphabet needs at least two symbols");
  std::unordered_set<char32_t> seen;
  for (Symbol s : tape)
    if (!seen.insert(s).second)
      throw std::invalid_argument("duplicate tape symbol " + to_utf8(s));
  if (!seen.count(blank))
    throw std::invalid_argument("blank symbol not in tape alphabet");
  std::unordered_set<char32_t> in;
  for (Symbol s : input) {
    if (!seen.count(s))
      throw std::invalid_argument("input symbol " + to_utf8(s) +
                                  " not in tape alphabet");
    if (s == blank)
      throw std::invalid_argument("blank symbol cannot be an input symbol");
    if (!in.insert(s).second)
      throw std::invalid_argument("duplicate input symbol " + to_utf8(s));
  }
  Alphabet a;
  a.tape_ = std::move(tape);
  a.input_ = std::move(input);
  a.blank_ = blank;
  return a;
}

std::optional<unsigned> Alphabet::index_of(Symbol s) const {
  auto it = std::find(tape_.begin(), tape_.end(), s);
  if (it == tape_.end()) return std::nullopt;
  return static_cast<unsigned>(it - tape_.begin());
}

bool Alphabet::input_contains(Symbol s) const {
  return std::find(input_.begin(), input_.end(), s) != input_.end();
}

bool Alphabet::word_over_input(const Word& w) const {
  return std::all_of(w.begin(), w.end(),
                     [&](Symbol s) { return input_contains(s); });
}

GodelMap::GodelMap(Alphabet alphabet) : alphabet_(std::move(alphabet)) {
  digit_by_index_.resize(alphabet_.base());
  symbol_by_digit_.resize(alphabet_.base());
  unsigned next = 1;
  for (unsigned i = 0; i < alphabet_.base(); ++i) {
    Symbol s = alphabet_.tape()[i];
    unsigned d = (s == alphabet_.blank()) ? 0 : next++;
    digit_by_index_[i] = d;
    symbol_by_digit_[d] = s;
  }
}

unsigned GodelMap::digit(Symbol s) const {
  auto idx = alphabet_.index_of(s);
  if (!idx) throw SymbolError("symbol " + to_utf8(s) + " not in alphabet");
  return digit_by_index_[*idx];
}

Symbol GodelMap::symbol(unsigned digit) const {
  if (digit >= base())
    throw SymbolError("digit " + std::to_string(digit) + " out of range");
  return symbol_by_digit_[digit];
}

double Phase::to_double() const { return project_phase(numerator, base, length); }

std::string Phase::numerator_decimal() const { return numerator.str(); }

std::strong_ordering Phase::compare(const Phase& o) const {
  // a/b^m vs c/d^n, cross-multiplied exactly. Same-base comparisons shift by
  // the length difference only.
  BigInt lhs = numerator, rhs = o.numerator;
  if (base == o.base) {
    if (length < o.length)
      lhs *= boost::multiprecision::pow(BigInt(base),
                                        static_cast<unsigned>(o.length - length));
    else if (o.length < length)
      rhs *= boost::multiprecision::pow(BigInt(base),
                                        static_cast<unsigned>(length - o.length));
  } else {
    lhs *= boost::multiprecision::pow(BigInt(o.base),
                                      static_cast<unsigned>(o.length));
    rhs *= boost::multiprecision::pow(BigInt(base), static_cast<unsigned>(length));
  }
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

BigInt godelize(const Word& w, const GodelMap& map) {
  BigInt acc = 0;
  const unsigned b = map.base();
  for (Symbol s : w) {
    acc *= b;
    acc += map.digit(s);
  }
  return acc;
}

Phase rationalize(const Word& w, const GodelMap& map) {
  return Phase{godelize(w, map), map.base(), w.size(), w};
}

Phase phase_of_tape(const Word& tape, const GodelMap& map) {
  Symbol blank = map.alphabet().blank();
  std::size_t end = 0;
  while (end < tape.size() && tape[end] != blank) {
    // validate eagerly so junk past the first blank still errors
    (void)map.digit(tape[end]);
    ++end;
  }
  for (std::size_t i = end; i < tape.size(); ++i) (void)map.digit(tape[i]);
  return rationalize(tape.substr(0, end), map);
}

Word word_of_digits(const BigInt& numerator, std::uint64_t length,
                    const GodelMap& map) {
  if (numerator < 0) throw std::invalid_argument("negative numerator");
  BigInt rest = numerator;
  Word out(length, map.symbol(0));
  const unsigned b = map.base();
  for (std::uint64_t i = 0; i < length && rest != 0; ++i) {
    BigInt q = rest / b;
    unsigned d = static_cast<unsigned>(rest - q * b);
    out[length - 1 - i] = map.symbol(d);
    rest = q;
  }
  if (rest != 0)
    throw std::invalid_argument("numerator does not fit in " +
                                std::to_string(length) + " digits");
  return out;
}

double project_phase(const BigInt& numerator, unsigned base,
                     std::uint64_t length) {
  if (numerator == 0) return 0.0;
  // base^length by repeated squaring in the wide float: the denominator
  // never exists as a huge integer, and the accumulated relative error stays
  // around 2^-107, far below half an ulp of the final double.
  BigFloat denom = 1;
  BigFloat sq = base;
  for (std::uint64_t e = length; e != 0; e >>= 1) {
    if (e & 1) denom *= sq;
    if (e > 1) sq *= sq;
  }
  BigFloat value = BigFloat(numerator) / denom;
  return value.convert_to<double>();
}

}  // namespace tapedyn
