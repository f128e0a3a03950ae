#pragma once

#include <cstdint>
#include <vector>

#include "tapedyn/codec.hpp"
#include "tapedyn/machine.hpp"
#include "tapedyn/orbit.hpp"

namespace tapedyn {

// WordKeyed keys loop detection on the canonical tape word alone, so a
// recurrence of tape content reports a loop even when the configuration
// differs (it can misreport machines that rewrite identical content).
// Sound keys on the full configuration (state, head, tape stripped of
// trailing blanks); a repeat genuinely certifies an infinite loop, and every
// candidate repeat is verified exactly before being reported.
enum class DetectionMode : std::uint8_t { WordKeyed, Sound };

// One recorded rationalization: the phase after a write (entry 0 records the
// initial tape before any step runs).
struct HistoryEntry {
  std::uint64_t step = 0;
  BigInt numerator;
  std::uint64_t length = 0;  // phase = numerator / base^length
  double phase = 0.0;        // float64 projection, within one ulp
  std::uint32_t state = 0;   // configuration at recording time
  std::uint64_t head = 0;
};

struct HistoryTable {
  unsigned base = 2;
  std::vector<HistoryEntry> entries;

  // Reconstructs the full Phase (with canonical word) for entry i.
  Phase phase_at(std::size_t i, const GodelMap& map) const;
};

struct DebugOutcome {
  // Halts = Y, LoopDetected = N(first, second), BudgetExhausted otherwise.
  enum class Kind : std::uint8_t { Halts, LoopDetected, BudgetExhausted } kind =
      Kind::BudgetExhausted;
  HaltKind halt = HaltKind::Accept;  // when Halts
  std::uint64_t loop_first = 0;      // earlier matching step (when LoopDetected)
  std::uint64_t loop_second = 0;     // current step (when LoopDetected)
};

struct DebugReport {
  DebugOutcome outcome;
  DetectionMode mode = DetectionMode::Sound;
  std::uint64_t steps_executed = 0;
  HistoryTable history;
  Configuration final_config;
};

// Runs spec on input for at most `budget` steps (budget >= 1), recording the
// phase of the tape after every write. A transition that enters a halting
// state reports Halts without recording its write, so a halted machine's
// history is exactly the writes it survived plus the initial recording:
// history.entries.size() <= steps_executed + 1 always holds.
DebugReport debug_run(const MachineSpec& spec, const Word& input,
                      std::uint64_t budget,
                      DetectionMode mode = DetectionMode::Sound);

// Projects the exact history phases to a float orbit (bounds [0, 1],
// max_abs_error 2^-53); source_terminated unless the budget ran out.
Orbit history_phases(const DebugReport& report);

}  // namespace tapedyn
