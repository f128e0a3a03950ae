#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "tapedyn/debugger.hpp"

using namespace tapedyn;

#ifndef TAPEDYN_MACHINE_DIR
#define TAPEDYN_MACHINE_DIR "machines"
#endif

namespace {

MachineSpec corpus(const std::string& name) {
  std::ifstream in(std::string(TAPEDYN_MACHINE_DIR) + "/" + name);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_machine(ss.str());
}

// Drifts right while erasing: writes 1 into a blank cell, then blanks it and
// moves on. The canonical word keeps returning to the empty word while the
// far tape keeps changing, so canonical-word keys repeat but the
// configuration never does.
MachineSpec canonical_word_trap() {
  return parse_machine(
      "states: q h\n"
      "input_alphabet: 1\n"
      "tape_alphabet: _ 1\n"
      "blank: _\n"
      "start: q\n"
      "accept: h\n"
      "reject: h\n"
      "delta: q _ -> q 1 L\n"
      "delta: q 1 -> q _ R\n");
}

MachineSpec random_machine(std::mt19937_64& rng, std::uint32_t states) {
  std::ostringstream tm;
  tm << "states:";
  for (std::uint32_t i = 0; i + 1 < states; ++i) tm << " s" << i;
  tm << " h\ninput_alphabet: 0 1\ntape_alphabet: _ 0 1\nblank: _\n"
        "start: s0\naccept: h\nreject: h\n";
  const char* syms[] = {"_", "0", "1"};
  for (std::uint32_t i = 0; i + 1 < states; ++i) {
    for (const char* g : syms) {
      std::uint32_t target = rng() % states;
      std::string tname =
          target + 1 == states ? "h" : ("s" + std::to_string(target));
      tm << "delta: s" << i << " " << g << " -> " << tname << " "
         << syms[rng() % 3] << " " << (rng() % 2 ? "R" : "L") << "\n";
    }
  }
  return parse_machine(tm.str());
}

}  // namespace

TEST_CASE("halter: Y with only the initial recording") {
  auto m = corpus("halter.tm");
  for (auto mode : {DetectionMode::WordKeyed, DetectionMode::Sound}) {
    auto rep = debug_run(m, U"", 10, mode);
    CHECK(rep.outcome.kind == DebugOutcome::Kind::Halts);
    CHECK(rep.outcome.halt == HaltKind::Accept);
    CHECK(rep.steps_executed == 1);
    REQUIRE(rep.history.entries.size() == 1);
    CHECK(rep.history.entries[0].step == 0);
    CHECK(rep.history.entries[0].numerator == 0);
    CHECK(rep.history.entries[0].length == 0);
  }
}

TEST_CASE("toggler: loop certified at the second write in both modes") {
  auto m = corpus("toggler.tm");
  for (auto mode : {DetectionMode::WordKeyed, DetectionMode::Sound}) {
    auto rep = debug_run(m, U"", 100, mode);
    CHECK(rep.outcome.kind == DebugOutcome::Kind::LoopDetected);
    CHECK(rep.outcome.loop_first == 0);
    CHECK(rep.outcome.loop_second == 2);
    CHECK(rep.steps_executed == 2);
    CHECK(rep.history.entries.size() == 2);
  }
}

TEST_CASE("right mover: budget exhausted with history budget+1") {
  auto m = corpus("right_mover.tm");
  auto rep = debug_run(m, U"", 1000, DetectionMode::Sound);
  CHECK(rep.outcome.kind == DebugOutcome::Kind::BudgetExhausted);
  CHECK(rep.steps_executed == 1000);
  REQUIRE(rep.history.entries.size() == 1001);
  // entry t holds (2^t - 1) / 2^t
  GodelMap map(m.alphabet);
  for (std::size_t t : {0, 1, 2, 7, 1000}) {
    const auto& e = rep.history.entries[t];
    CHECK(e.step == t);
    CHECK(e.length == t);
    CHECK(e.numerator == (BigInt(1) << t) - 1);
    CHECK(rep.history.phase_at(t, map).canonical_word == Word(t, U'1'));
  }
  CHECK(rep.history.entries[1000].phase == 1.0);  // rounds up from 1 - 2^-1000
  CHECK(rep.history.entries[2].phase == 0.75);
}

TEST_CASE("incrementer: the word-keyed mode misreports a rewrite, sound does not") {
  auto m = corpus("incrementer.tm");
  auto word = debug_run(m, U"011", 100, DetectionMode::WordKeyed);
  CHECK(word.outcome.kind == DebugOutcome::Kind::LoopDetected);
  CHECK(word.outcome.loop_first == 0);  // writing 0 over 0 repeats the word
  CHECK(word.outcome.loop_second == 1);

  auto sound = debug_run(m, U"011", 100, DetectionMode::Sound);
  CHECK(sound.outcome.kind == DebugOutcome::Kind::Halts);
  CHECK(sound.steps_executed == 7);
  CHECK(sound.history.entries.size() == 7);
}

TEST_CASE("canonical-word keys alone would misreport the drifting eraser") {
  auto m = canonical_word_trap();
  auto word = debug_run(m, U"", 500, DetectionMode::WordKeyed);
  CHECK(word.outcome.kind == DebugOutcome::Kind::LoopDetected);
  CHECK(word.outcome.loop_second == 2);
  // The machine drifts right forever; a genuine certificate never fires.
  auto sound = debug_run(m, U"", 500, DetectionMode::Sound);
  CHECK(sound.outcome.kind == DebugOutcome::Kind::BudgetExhausted);
  CHECK(sound.steps_executed == 500);
}

TEST_CASE("sound loop reports replay to identical configurations") {
  auto m = corpus("toggler.tm");
  auto rep = debug_run(m, U"", 50, DetectionMode::Sound);
  REQUIRE(rep.outcome.kind == DebugOutcome::Kind::LoopDetected);
  auto advance = [&](std::uint64_t steps) {
    auto cfg = initial_configuration(m, U"");
    for (std::uint64_t t = 0; t < steps; ++t) cfg = step(m, cfg);
    return cfg;
  };
  auto strip = [&](Word w) {
    while (!w.empty() && w.back() == m.alphabet.blank()) w.pop_back();
    return w;
  };
  auto a = advance(rep.outcome.loop_first);
  auto b = advance(rep.outcome.loop_second);
  CHECK(a.state == b.state);
  CHECK(a.head == b.head);
  CHECK(strip(a.tape) == strip(b.tape));
}

TEST_CASE("incremental phases agree with from-scratch rationalization") {
  std::mt19937_64 rng(20260816);
  int budget_exhausted = 0;
  for (int trial = 0; trial < 40; ++trial) {
    auto m = random_machine(rng, 2 + trial % 3);
    Word input;
    for (std::size_t i = rng() % 6; i > 0; --i)
      input.push_back(rng() % 2 ? U'0' : U'1');
    auto rep = debug_run(m, input, 300, DetectionMode::Sound);
    if (rep.outcome.kind == DebugOutcome::Kind::BudgetExhausted)
      ++budget_exhausted;
    CHECK(rep.history.entries.size() <= rep.steps_executed + 1);

    GodelMap map(m.alphabet);
    auto cfg = initial_configuration(m, input);
    std::size_t e = 0;
    REQUIRE(rep.history.entries[0].step == 0);
    auto p0 = phase_of_tape(cfg.tape, map);
    CHECK(rep.history.entries[0].numerator == p0.numerator);
    CHECK(rep.history.entries[0].length == p0.length);
    e = 1;
    for (std::uint64_t t = 1; e < rep.history.entries.size(); ++t) {
      cfg = step(m, cfg);
      const auto& entry = rep.history.entries[e];
      REQUIRE(entry.step == t);
      auto p = phase_of_tape(cfg.tape, map);
      CHECK(entry.numerator == p.numerator);
      CHECK(entry.length == p.length);
      CHECK(entry.phase == doctest::Approx(p.to_double()).epsilon(1e-15));
      CHECK(entry.state == cfg.state);
      CHECK(entry.head == cfg.head);
      ++e;
    }
  }
  CHECK(budget_exhausted > 0);  // the sample covers all outcome kinds
}

TEST_CASE("history projects to a unit-interval orbit with exact provenance") {
  auto m = corpus("right_mover.tm");
  auto rep = debug_run(m, U"", 200, DetectionMode::Sound);
  Orbit orbit = history_phases(rep);
  CHECK(orbit.samples.size() == 201);
  CHECK(orbit.precision.source == OrbitPrecision::Source::ExactRational);
  CHECK(orbit.precision.max_abs_error <= 0x1p-52);
  REQUIRE(orbit.bounds.has_value());
  CHECK(orbit.bounds->first == 0.0);
  CHECK(orbit.bounds->second == 1.0);
  CHECK_FALSE(orbit.source_terminated);
  for (double x : orbit.samples) {
    CHECK(x >= 0.0);
    CHECK(x <= 1.0);
  }

  auto halted = history_phases(debug_run(corpus("halter.tm"), U"", 10));
  CHECK(halted.source_terminated);
}

TEST_CASE("budget must be positive") {
  auto m = corpus("halter.tm");
  CHECK_THROWS_AS(debug_run(m, U"", 0), std::invalid_argument);
  CHECK_THROWS_AS(run(m, U"", 0), std::invalid_argument);
}
