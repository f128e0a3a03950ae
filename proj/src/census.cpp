#include "tapedyn/census.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <future>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

namespace tapedyn {

namespace {

void validate_family(const MachineFamily& f) {
  if (f.states < 2)
    throw std::invalid_argument("family needs at least two states");
  if (f.symbols < 2)
    throw std::invalid_argument("family needs at least two tape symbols");
  if (f.symbols > 36)
    throw std::invalid_argument("family supports at most 36 tape symbols");
}

// Blank plus 1, 2, ..., continuing with letters past 9.
Alphabet family_alphabet(std::uint32_t symbols) {
  std::vector<Symbol> tape{U'_'};
  for (std::uint32_t j = 1; j < symbols; ++j)
    tape.push_back(j <= 9 ? Symbol(U'0' + j) : Symbol(U'a' + (j - 10)));
  std::vector<Symbol> input(tape.begin() + 1, tape.end());
  return Alphabet::create(std::move(tape), std::move(input), U'_');
}

// Uniform BigInt in [0, bound) by masked rejection over 64-bit words.
BigInt uniform_below(std::mt19937_64& rng, const BigInt& bound) {
  if (bound <= 1) return 0;
  const unsigned bits = boost::multiprecision::msb(bound) + 1;
  const unsigned words = (bits + 63) / 64;
  const BigInt mask = (BigInt(1) << bits) - 1;
  for (;;) {
    BigInt v = 0;
    for (unsigned w = 0; w < words; ++w) v = (v << 64) | rng();
    v &= mask;
    if (v < bound) return v;
  }
}

struct Tally {
  std::uint64_t halted = 0;
  std::uint64_t loops = 0;
  std::uint64_t budget = 0;
  std::map<std::string, std::uint64_t> labels;
};

}  // namespace

BigInt family_size(const MachineFamily& family) {
  validate_family(family);
  const BigInt radix = std::uint64_t{2} * family.states * family.symbols;
  return boost::multiprecision::pow(
      radix, (family.states - 1) * family.symbols);
}

MachineSpec machine_from_index(const MachineFamily& family,
                               const BigInt& index) {
  validate_family(family);
  if (index < 0 || index >= family_size(family))
    throw std::invalid_argument("index outside the family");

  MachineSpec m;
  m.state_names.reserve(family.states);
  for (std::uint32_t q = 0; q < family.states; ++q)
    m.state_names.push_back("q" + std::to_string(q));
  m.alphabet = family_alphabet(family.symbols);
  m.start = 0;
  m.accept = m.reject = family.states - 1;
  m.delta.assign(family.states, std::vector<Transition>(family.symbols));

  // Little-endian mixed-radix decode: slot s = state * symbols + symbol,
  // digit = (target * symbols + write) * 2 + move with R = 1.
  const std::uint64_t radix = std::uint64_t{2} * family.states * family.symbols;
  const std::uint32_t slots = (family.states - 1) * family.symbols;
  BigInt rest = index;
  for (std::uint32_t slot = 0; slot < slots; ++slot) {
    const auto digit = static_cast<std::uint64_t>(rest % radix);
    rest /= radix;
    const Move move = (digit & 1) ? Move::R : Move::L;
    const std::uint64_t tw = digit >> 1;
    const auto write_idx = static_cast<std::uint32_t>(tw % family.symbols);
    const auto target = static_cast<std::uint32_t>(tw / family.symbols);
    m.delta[slot / family.symbols][slot % family.symbols] =
        Transition{target, m.alphabet.tape()[write_idx], move};
  }
  return m;
}

CensusReport halting_census(const CensusParams& params) {
  validate_family(params.family);
  if (params.budget == 0)
    throw std::invalid_argument("step budget must be positive");

  CensusReport report;
  report.params = params;
  report.family_total = family_size(params.family);

  std::vector<BigInt> indices;
  if (params.mode == CensusParams::Mode::Enumerate) {
    if (report.family_total > params.enumeration_cap)
      throw FamilyTooLarge("family of " + report.family_total.str() +
                           " machines exceeds the enumeration cap of " +
                           std::to_string(params.enumeration_cap));
    const auto total = report.family_total.convert_to<std::uint64_t>();
    indices.reserve(total);
    for (std::uint64_t i = 0; i < total; ++i) indices.emplace_back(i);
  } else {
    if (params.sample_count == 0)
      throw std::invalid_argument("sample_count must be positive");
    std::mt19937_64 rng(params.seed);
    indices.reserve(params.sample_count);
    for (std::uint64_t i = 0; i < params.sample_count; ++i)
      indices.push_back(uniform_below(rng, report.family_total));
  }
  report.examined = indices.size();

  auto work = [&params](const std::vector<BigInt>& ix, std::size_t begin,
                        std::size_t end) {
    Tally t;
    for (std::size_t i = begin; i < end; ++i) {
      const MachineSpec m = machine_from_index(params.family, ix[i]);
      const DebugReport dbg =
          debug_run(m, params.input, params.budget, params.detection);
      switch (dbg.outcome.kind) {
        case DebugOutcome::Kind::Halts:
          ++t.halted;
          break;
        case DebugOutcome::Kind::LoopDetected:
          ++t.loops;
          break;
        case DebugOutcome::Kind::BudgetExhausted: {
          ++t.budget;
          const ClassificationReport cls =
              classify_orbit(history_phases(dbg), params.analysis);
          ++t.labels[label_name(cls.label, cls.cluster_count)];
          break;
        }
      }
    }
    return t;
  };

  unsigned threads =
      params.threads ? params.threads
                     : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(
      std::min<std::size_t>(threads, std::max<std::size_t>(indices.size(), 1)));

  std::vector<Tally> parts;
  if (threads <= 1) {
    parts.push_back(work(indices, 0, indices.size()));
  } else {
    const std::size_t chunk = (indices.size() + threads - 1) / threads;
    std::vector<std::future<Tally>> futures;
    for (std::size_t begin = 0; begin < indices.size(); begin += chunk) {
      const std::size_t end = std::min(begin + chunk, indices.size());
      futures.push_back(std::async(std::launch::async, work,
                                   std::cref(indices), begin, end));
    }
    for (auto& f : futures) parts.push_back(f.get());
  }

  // merge in chunk order so reports are identical for every thread count
  for (const Tally& t : parts) {
    report.halted += t.halted;
    report.loops += t.loops;
    report.budget_exhausted += t.budget;
    for (const auto& [name, count] : t.labels) report.labels[name] += count;
  }
  return report;
}

}  // namespace tapedyn
