#include "tapedyn/debugger.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <utility>

namespace tapedyn {

namespace {

constexpr std::uint64_t kHashBase = 0x9E3779B97F4A7C15ull;

std::uint64_t mix(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

// Fenwick tree over tape cells holding digit(i) * kHashBase^i mod 2^64.
// prefix(m) hashes the first m cells in O(log m), so both the canonical
// prefix (up to the first blank) and the stripped tape (up to the last
// non-blank) share one structure under point updates.
class PrefixHash {
 public:
  void ensure(std::size_t cells) {
    while (pow_.size() < cells) pow_.push_back(pow_.back() * kHashBase);
    if (cells <= raw_.size()) return;
    std::size_t cap = std::max(cells, raw_.size() * 2);
    raw_.resize(cap, 0);
    tree_.assign(raw_.begin(), raw_.end());
    for (std::size_t i = 1; i <= cap; ++i) {
      std::size_t j = i + (i & (0 - i));
      if (j <= cap) tree_[j - 1] += tree_[i - 1];
    }
  }

  void set_digit(std::size_t i, unsigned d_old, unsigned d_new) {
    std::uint64_t delta =
        (std::uint64_t(d_new) - std::uint64_t(d_old)) * pow_[i];
    raw_[i] += delta;
    for (std::size_t j = i + 1; j <= tree_.size(); j += j & (0 - j))
      tree_[j - 1] += delta;
  }

  std::uint64_t prefix(std::size_t m) const {
    std::uint64_t s = 0;
    for (std::size_t j = m; j > 0; j -= j & (0 - j)) s += tree_[j - 1];
    return s;
  }

 private:
  std::vector<std::uint64_t> pow_{1};
  std::vector<std::uint64_t> raw_;
  std::vector<std::uint64_t> tree_;
};

// Lazy power of the Godel base. Consecutive writes sit at adjacent cells, so
// requested exponents move by small deltas and the cached value adjusts by a
// handful of small multiplies/exact divides; jumps fall back to squaring.
class BasePow {
 public:
  explicit BasePow(unsigned base) : base_(base) {}

  const BigInt& get(std::uint64_t e) {
    if (e > exp_ && e - exp_ <= 64) {
      for (; exp_ < e; ++exp_) val_ *= base_;
    } else if (e < exp_ && exp_ - e <= 64) {
      for (; exp_ > e; --exp_) val_ /= base_;
    } else if (e != exp_) {
      val_ = 1;
      BigInt sq = base_;
      for (std::uint64_t k = e; k != 0; k >>= 1) {
        if (k & 1) val_ *= sq;
        if (k > 1) sq *= sq;
      }
      exp_ = e;
    }
    return val_;
  }

 private:
  unsigned base_;
  BigInt val_ = 1;
  std::uint64_t exp_ = 0;
};

Configuration replay(const MachineSpec& spec, const Word& input,
                     std::uint64_t steps) {
  Configuration cfg = initial_configuration(spec, input);
  for (std::uint64_t t = 0; t < steps; ++t) cfg = step(spec, std::move(cfg));
  return cfg;
}

bool same_semantic_config(const Configuration& a, const Configuration& b,
                          Symbol blank) {
  if (a.state != b.state || a.head != b.head) return false;
  std::size_t la = a.tape.size(), lb = b.tape.size();
  while (la > 0 && a.tape[la - 1] == blank) --la;
  while (lb > 0 && b.tape[lb - 1] == blank) --lb;
  return la == lb && a.tape.compare(0, la, b.tape, 0, lb) == 0;
}

}  // namespace

Phase HistoryTable::phase_at(std::size_t i, const GodelMap& map) const {
  const HistoryEntry& e = entries.at(i);
  Phase p;
  p.numerator = e.numerator;
  p.base = base;
  p.length = e.length;
  p.canonical_word = word_of_digits(e.numerator, e.length, map);
  return p;
}

DebugReport debug_run(const MachineSpec& spec, const Word& input,
                      std::uint64_t budget, DetectionMode mode) {
  if (budget == 0) throw std::invalid_argument("step budget must be positive");
  GodelMap map(spec.alphabet);
  const unsigned base = map.base();
  const bool sound = mode == DetectionMode::Sound;

  DebugReport rep;
  rep.mode = mode;
  rep.history.base = base;

  Configuration cfg = initial_configuration(spec, input);
  std::vector<unsigned> digits(cfg.tape.size());
  PrefixHash hash;
  hash.ensure(cfg.tape.size());
  BigInt num = 0;
  for (std::size_t i = 0; i < cfg.tape.size(); ++i) {
    digits[i] = map.digit(cfg.tape[i]);
    hash.set_digit(i, 0, digits[i]);
    num = num * base + digits[i];
  }
  // Input words contain no blanks, so the whole input is the canonical prefix
  // and simultaneously the stripped tape.
  std::uint64_t canon_len = cfg.tape.size();
  std::uint64_t stripped_len = cfg.tape.size();
  BasePow pow_b(base);

  std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets;
  auto current_key = [&]() {
    if (!sound) return mix(hash.prefix(canon_len) ^ mix(canon_len));
    std::uint64_t k = hash.prefix(stripped_len) ^ mix(stripped_len);
    k ^= mix((std::uint64_t(cfg.state) << 32) ^ 0xC2B2AE3D27D4EB4Full);
    k ^= mix(cfg.head ^ 0x165667B19E3779F9ull);
    return mix(k);
  };
  auto record = [&](std::uint64_t step_index, std::uint64_t key) {
    rep.history.entries.push_back(
        {step_index, num, canon_len, project_phase(num, base, canon_len),
         cfg.state, cfg.head});
    buckets[key].push_back(rep.history.entries.size() - 1);
  };
  // Returns the matching earlier step on a verified repeat.
  auto find_repeat = [&](std::uint64_t key) -> std::optional<std::uint64_t> {
    auto it = buckets.find(key);
    if (it == buckets.end()) return std::nullopt;
    for (std::size_t idx : it->second) {
      const HistoryEntry& e = rep.history.entries[idx];
      if (!sound) {
        if (e.length == canon_len && e.numerator == num) return e.step;
      } else {
        if (e.state != cfg.state || e.head != cfg.head) continue;
        // Exact certificate: rerun to the candidate step and compare whole
        // configurations, so hash collisions can never fabricate a loop.
        if (same_semantic_config(replay(spec, input, e.step), cfg,
                                 spec.alphabet.blank()))
          return e.step;
      }
    }
    return std::nullopt;
  };

  record(0, current_key());
  if (spec.is_halting(cfg.state)) {
    rep.outcome.kind = DebugOutcome::Kind::Halts;
    rep.outcome.halt =
        cfg.state == spec.accept ? HaltKind::Accept : HaltKind::Reject;
    rep.final_config = std::move(cfg);
    return rep;
  }

  for (std::uint64_t t = 1; t <= budget; ++t) {
    const Symbol scanned = read_cell(cfg, spec.alphabet);
    const Transition& tr = spec.delta[cfg.state][*spec.alphabet.index_of(scanned)];
    const std::uint64_t p = cfg.head;
    const unsigned d_old = map.digit(scanned);
    const unsigned d_new = map.digit(tr.write);
    const bool halting = spec.is_halting(tr.next_state);

    cfg = step(spec, std::move(cfg));
    rep.steps_executed = t;

    if (halting) {
      // The write that enters a halting state is not recorded: the debugger
      // answers Y before rationalizing it.
      rep.outcome.kind = DebugOutcome::Kind::Halts;
      rep.outcome.halt =
          cfg.state == spec.accept ? HaltKind::Accept : HaltKind::Reject;
      break;
    }

    if (cfg.tape.size() > digits.size()) {
      digits.resize(cfg.tape.size(), 0);
      hash.ensure(cfg.tape.size());
    }
    if (d_new != d_old) {
      hash.set_digit(p, d_old, d_new);
      digits[p] = d_new;
      if (p < canon_len) {
        if (d_new != 0) {
          BigInt delta = std::int64_t(d_new) - std::int64_t(d_old);
          num += delta * pow_b.get(canon_len - 1 - p);
        } else {
          num /= pow_b.get(canon_len - p);
          canon_len = p;
        }
      } else if (p == canon_len && d_new != 0) {
        // The old boundary blank became a digit; formerly hidden non-blank
        // cells behind it join the canonical prefix too.
        std::uint64_t end = p;
        while (end < digits.size() && digits[end] != 0) ++end;
        for (std::uint64_t q = canon_len; q < end; ++q)
          num = num * base + digits[q];
        canon_len = end;
      }
      if (d_new != 0) {
        stripped_len = std::max(stripped_len, p + 1);
      } else if (p + 1 == stripped_len) {
        while (stripped_len > 0 && digits[stripped_len - 1] == 0)
          --stripped_len;
      }
    }

    const std::uint64_t key = current_key();
    if (auto first = find_repeat(key)) {
      rep.outcome.kind = DebugOutcome::Kind::LoopDetected;
      rep.outcome.loop_first = *first;
      rep.outcome.loop_second = t;
      break;
    }
    record(t, key);
  }

  rep.final_config = std::move(cfg);
  return rep;
}

Orbit history_phases(const DebugReport& report) {
  Orbit o;
  o.samples.reserve(report.history.entries.size());
  for (const HistoryEntry& e : report.history.entries)
    o.samples.push_back(e.phase);
  o.precision.source = OrbitPrecision::Source::ExactRational;
  o.precision.max_abs_error = 0x1p-53;
  o.bounds = {0.0, 1.0};
  o.source_terminated =
      report.outcome.kind != DebugOutcome::Kind::BudgetExhausted;
  return o;
}

}  // namespace tapedyn
