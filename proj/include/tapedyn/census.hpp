#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "tapedyn/analysis.hpp"
#include "tapedyn/debugger.hpp"
#include "tapedyn/machine.hpp"

namespace tapedyn {

// Canonical k-state m-symbol family: states q0..q(k-1) with q0 the start and
// the last state the halting state (accept = reject); the table is total on
// the (k-1)*m non-halting slots. Each slot picks (target, write, move), so
// machine indices are mixed-radix numbers with base 2*k*m per slot and the
// family has (2*k*m)^((k-1)*m) members.
struct MachineFamily {
  std::uint32_t states = 2;   // >= 2 (start plus halt)
  std::uint32_t symbols = 2;  // >= 2 (blank plus at least one input symbol)
};

BigInt family_size(const MachineFamily& family);
MachineSpec machine_from_index(const MachineFamily& family, const BigInt& index);

struct CensusParams {
  MachineFamily family;
  std::uint64_t budget = 10'000;
  enum class Mode : std::uint8_t { Enumerate, Sample } mode = Mode::Enumerate;
  std::uint64_t sample_count = 0;  // Sample mode only
  std::uint64_t seed = 0;
  DetectionMode detection = DetectionMode::Sound;
  Word input;  // empty = blank tape
  AnalysisParams analysis;  // classification of budget-exhausted histories
  std::uint64_t enumeration_cap = 1'000'000;
  unsigned threads = 0;  // 0 = hardware concurrency
};

class FamilyTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CensusReport {
  CensusParams params;
  BigInt family_total;
  std::uint64_t examined = 0;
  std::uint64_t halted = 0;            // Y
  std::uint64_t loops = 0;             // N
  std::uint64_t budget_exhausted = 0;  // everything else
  // Classifier labels of budget-exhausted histories, e.g. "Convergent",
  // "NonCauchyMixture(k=2)", "Inconclusive"; counts sum to budget_exhausted.
  std::map<std::string, std::uint64_t> labels;
};

// Enumerates (or samples) the family, debug-runs each machine, classifies the
// budget-exhausted histories, and aggregates deterministically in machine
// index order regardless of thread count.
CensusReport halting_census(const CensusParams& params);

}  // namespace tapedyn
