#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "tapedyn/machine.hpp"

namespace tapedyn {

ParseError::ParseError(std::size_t line, std::size_t column,
                       const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {

struct Token {
  Word text;
  std::size_t col;  // 1-based code point offset
};

std::vector<Token> tokenize(const Word& line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == U'#') break;  // comment to end of line
    if (line[i] == U' ' || line[i] == U'\t' || line[i] == U'\r') {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < line.size() && line[i] != U' ' && line[i] != U'\t' &&
           line[i] != U'\r' && line[i] != U'#')
      ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) {
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos <= text.size()) {
      std::size_t nl = text.find('\n', pos);
      std::string_view raw = text.substr(
          pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
      ++line_no;
      Word decoded;
      try {
        decoded = word_from_utf8(raw);
      } catch (const std::invalid_argument& e) {
        throw ParseError(line_no, 1, e.what());
      }
      auto toks = tokenize(decoded);
      if (!toks.empty()) lines_.push_back({line_no, std::move(toks)});
      if (nl == std::string_view::npos) break;
      pos = nl + 1;
    }
    last_line_ = line_no;
  }

  MachineSpec parse() {
    MachineSpec spec;
    std::map<Word, std::uint32_t> state_index;
    for (auto& [tok, line] : header_list(U"states:")) {
      if (state_index.count(tok.text))
        throw ParseError(line, tok.col, "duplicate state " + to_utf8(tok.text));
      state_index[tok.text] = static_cast<std::uint32_t>(spec.state_names.size());
      spec.state_names.push_back(to_utf8(tok.text));
    }
    auto input_syms = header_symbols(U"input_alphabet:");
    auto tape_syms = header_symbols(U"tape_alphabet:");
    Symbol blank = header_symbol(U"blank:");
    try {
      spec.alphabet = Alphabet::create(tape_syms.symbols, input_syms.symbols,
                                       blank);
    } catch (const std::invalid_argument& e) {
      throw ParseError(tape_syms.line, tape_syms.col, e.what());
    }
    spec.start = lookup_state(state_index, header_id(U"start:"), U"start:");
    spec.accept = lookup_state(state_index, header_id(U"accept:"), U"accept:");
    spec.reject = lookup_state(state_index, header_id(U"reject:"), U"reject:");

    std::vector<std::vector<std::optional<Transition>>> table(
        spec.state_count(),
        std::vector<std::optional<Transition>>(spec.alphabet.base()));
    while (next_ < lines_.size()) {
      parse_delta(spec, state_index, table);
    }
    spec.delta.assign(spec.state_count(),
                      std::vector<Transition>(spec.alphabet.base()));
    for (std::uint32_t q = 0; q < spec.state_count(); ++q) {
      if (spec.is_halting(q)) continue;
      for (unsigned g = 0; g < spec.alphabet.base(); ++g) {
        if (!table[q][g])
          throw ParseError(last_line_ + 1, 1,
                           "missing transition for state " +
                               spec.state_names[q] + " on symbol " +
                               to_utf8(spec.alphabet.tape()[g]));
        spec.delta[q][g] = *table[q][g];
      }
    }
    return spec;
  }

 private:
  struct Line {
    std::size_t number;
    std::vector<Token> toks;
  };
  struct SymbolList {
    std::vector<Symbol> symbols;
    std::size_t line, col;
  };

  const Line& expect_line(const Word& keyword) {
    if (next_ >= lines_.size())
      throw ParseError(last_line_ + 1, 1,
                       "missing section " + to_utf8(keyword));
    const Line& line = lines_[next_];
    if (line.toks[0].text != keyword)
      throw ParseError(line.number, line.toks[0].col,
                       "expected " + to_utf8(keyword) + ", found " +
                           to_utf8(line.toks[0].text));
    ++next_;
    return line;
  }

  std::vector<std::pair<Token, std::size_t>> header_list(const Word& keyword) {
    const Line& line = expect_line(keyword);
    if (line.toks.size() < 2)
      throw ParseError(line.number, line.toks[0].col,
                       to_utf8(keyword) + " needs at least one entry");
    std::vector<std::pair<Token, std::size_t>> out;
    for (std::size_t i = 1; i < line.toks.size(); ++i)
      out.emplace_back(line.toks[i], line.number);
    return out;
  }

  SymbolList header_symbols(const Word& keyword) {
    auto entries = header_list(keyword);
    SymbolList out{{}, entries[0].second, entries[0].first.col};
    for (auto& [tok, line] : entries) {
      if (tok.text.size() != 1)
        throw ParseError(line, tok.col,
                         "symbol must be a single code point: " +
                             to_utf8(tok.text));
      out.symbols.push_back(tok.text[0]);
    }
    return out;
  }

  Symbol header_symbol(const Word& keyword) {
    auto entries = header_list(keyword);
    if (entries.size() != 1 || entries[0].first.text.size() != 1)
      throw ParseError(entries[0].second, entries[0].first.col,
                       to_utf8(keyword) + " takes exactly one symbol");
    return entries[0].first.text[0];
  }

  Word header_id(const Word& keyword) {
    auto entries = header_list(keyword);
    if (entries.size() != 1)
      throw ParseError(entries[0].second, entries[0].first.col,
                       to_utf8(keyword) + " takes exactly one state");
    last_id_line_ = entries[0].second;
    last_id_col_ = entries[0].first.col;
    return entries[0].first.text;
  }

  std::uint32_t lookup_state(const std::map<Word, std::uint32_t>& index,
                             const Word& name, const Word& where) {
    auto it = index.find(name);
    if (it == index.end())
      throw ParseError(last_id_line_, last_id_col_,
                       "undeclared state " + to_utf8(name) + " in " +
                           to_utf8(where));
    return it->second;
  }

  void parse_delta(const MachineSpec& spec,
                   const std::map<Word, std::uint32_t>& state_index,
                   std::vector<std::vector<std::optional<Transition>>>& table) {
    const Line& line = lines_[next_];
    if (line.toks[0].text != U"delta:")
      throw ParseError(line.number, line.toks[0].col,
                       "expected delta:, found " + to_utf8(line.toks[0].text));
    ++next_;
    if (line.toks.size() != 7 || line.toks[3].text != U"->")
      throw ParseError(line.number, line.toks[0].col,
                       "delta line must read: delta: <state> <symbol> -> "
                       "<state> <symbol> <L|R>");
    auto state_of = [&](const Token& t) {
      auto it = state_index.find(t.text);
      if (it == state_index.end())
        throw ParseError(line.number, t.col,
                         "undeclared state " + to_utf8(t.text));
      return it->second;
    };
    auto symbol_of = [&](const Token& t) {
      if (t.text.size() != 1 || !spec.alphabet.contains(t.text[0]))
        throw ParseError(line.number, t.col,
                         "undeclared symbol " + to_utf8(t.text));
      return t.text[0];
    };
    std::uint32_t from = state_of(line.toks[1]);
    Symbol scanned = symbol_of(line.toks[2]);
    std::uint32_t to = state_of(line.toks[4]);
    Symbol written = symbol_of(line.toks[5]);
    Move move;
    if (line.toks[6].text == U"L")
      move = Move::L;
    else if (line.toks[6].text == U"R")
      move = Move::R;
    else
      throw ParseError(line.number, line.toks[6].col,
                       "move must be L or R, found " + to_utf8(line.toks[6].text));
    if (spec.is_halting(from))
      throw ParseError(line.number, line.toks[1].col,
                       "transition from halting state " +
                           spec.state_names[from]);
    auto& slot = table[from][*spec.alphabet.index_of(scanned)];
    if (slot)
      throw ParseError(line.number, line.toks[1].col,
                       "duplicate transition for state " +
                           spec.state_names[from] + " on symbol " +
                           to_utf8(scanned));
    slot = Transition{to, written, move};
  }

  std::vector<Line> lines_;
  std::size_t next_ = 0;
  std::size_t last_line_ = 0;
  std::size_t last_id_line_ = 0, last_id_col_ = 0;
};

}  // namespace

MachineSpec parse_machine(std::string_view text) { return Parser(text).parse(); }

}  // namespace tapedyn
