#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "tapedyn/reports.hpp"
#include "tapedyn/version.hpp"

using namespace tapedyn;

namespace {

std::span<const unsigned char> bytes_of(const std::string& s) {
  return {reinterpret_cast<const unsigned char*>(s.data()), s.size()};
}

MachineSpec ping_pong() {
  MachineSpec m;
  m.state_names = {"p", "q", "h"};
  m.alphabet = Alphabet::create({U'_', U'1'}, {U'1'}, U'_');
  m.start = 0;
  m.accept = m.reject = 2;
  m.delta = {
      {{1, U'_', Move::L}, {2, U'1', Move::R}},
      {{0, U'_', Move::L}, {2, U'1', Move::R}},
  };
  return m;
}

MachineSpec one_step_halter() {
  MachineSpec m;
  m.state_names = {"s", "h"};
  m.alphabet = Alphabet::create({U'_', U'1'}, {U'1'}, U'_');
  m.start = 0;
  m.accept = m.reject = 1;
  m.delta = {{{1, U'_', Move::R}, {1, U'1', Move::R}}};
  return m;
}

RunManifest sample_manifest() {
  RunManifest man;
  man.command = "run";
  man.parameters = Json{{"budget", 100}, {"mode", "sound"}};
  man.seed = 42;
  man.input_digests["machines/ping.tm"] = "00000000deadbeef";
  man.tool_version = kVersion;
  return man;
}

}  // namespace

TEST_CASE("fnv1a64 matches the published test vectors") {
  CHECK(fnv1a64(bytes_of("")) == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64(bytes_of("a")) == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64(bytes_of("foobar")) == 0x85944171f73967e8ULL);
}

TEST_CASE("file digests are 16 lowercase hex digits of the byte hash") {
  auto path = std::filesystem::temp_directory_path() / "tapedyn_digest.txt";
  {
    std::ofstream out(path, std::ios::binary);
    out << "tapedyn\n";
  }
  std::string hex = file_digest_hex(path);
  CHECK(hex.size() == 16);
  char expect[17];
  std::snprintf(expect, sizeof expect, "%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes_of("tapedyn\n"))));
  CHECK(hex == expect);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(file_digest_hex(path), std::runtime_error);
}

TEST_CASE("trace records carry step, decimal numerator, base, length, phase") {
  HistoryEntry e;
  e.step = 3;
  e.numerator = 11;
  e.length = 4;
  e.phase = 0.6875;
  e.state = 1;
  e.head = 2;
  Json r = trace_record(e, 2);
  CHECK(r.dump() ==
        R"({"step":3,"numerator":"11","base":2,"length":4,"phase":0.6875})");
}

TEST_CASE("outcome names") {
  DebugOutcome o;
  o.kind = DebugOutcome::Kind::Halts;
  CHECK(outcome_name(o) == "halts");
  o.kind = DebugOutcome::Kind::LoopDetected;
  CHECK(outcome_name(o) == "loop_detected");
  o.kind = DebugOutcome::Kind::BudgetExhausted;
  CHECK(outcome_name(o) == "budget_exhausted");
}

TEST_CASE("manifests serialize with a stable key set") {
  RunManifest man = sample_manifest();
  Json j = to_json(man);
  std::vector<std::string> keys;
  for (auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"command", "parameters", "seed",
                                         "input_digests", "tool_version"});
  CHECK(j["seed"] == 42);
  CHECK(j["input_digests"]["machines/ping.tm"] == "00000000deadbeef");
  CHECK(j["tool_version"] == kVersion);

  man.seed.reset();
  CHECK(to_json(man)["seed"].is_null());
}

TEST_CASE("machine run reports embed the loop verdict and manifest") {
  auto rep = debug_run(ping_pong(), Word{}, 100);
  Json j = to_json(rep, sample_manifest());
  CHECK(j["schema_version"] == kSchemaVersion);
  CHECK(j["kind"] == "machine_run");
  CHECK(j["outcome"] == "loop_detected");
  CHECK(j["loop"]["first"] == 0);
  CHECK(j["loop"]["second"] == 2);
  CHECK(j["detection_mode"] == "sound");
  CHECK(j["steps_executed"] == 2);
  CHECK(j["history_length"] == rep.history.entries.size());
  CHECK(j["final"]["state"] == 0);
  CHECK(j["final"]["head"] == 0);
  CHECK(j["final"]["tape"].is_string());
  CHECK(j["manifest"]["command"] == "run");
  CHECK_FALSE(j.contains("halt"));

  // same inputs, same bytes
  auto rep2 = debug_run(ping_pong(), Word{}, 100);
  CHECK(to_json(rep2, sample_manifest()).dump() == j.dump());
}

TEST_CASE("halting run reports name the halt flavour and drop loop fields") {
  auto rep = debug_run(one_step_halter(), Word{}, 10);
  Json j = to_json(rep, sample_manifest());
  CHECK(j["outcome"] == "halts");
  CHECK(j["halt"] == "accept");
  CHECK_FALSE(j.contains("loop"));
}

TEST_CASE("map iteration reports") {
  auto run = iterate_map(MapSpec::babylonian(2.0), 1.0, 5);
  RunManifest man;
  man.command = "iterate";
  man.tool_version = kVersion;
  Json j = to_json(run, "babylonian", Json{{"S", 2.0}}, man);
  CHECK(j["schema_version"] == kSchemaVersion);
  CHECK(j["kind"] == "map_iteration");
  CHECK(j["map"]["name"] == "babylonian");
  CHECK(j["map"]["params"]["S"] == 2.0);
  CHECK(j["x0"] == 1.0);
  CHECK(j["requested_steps"] == 5);
  CHECK(j["termination"] == "completed");
  CHECK(j["samples"].size() == 6);
  CHECK(j["samples"][0] == 1.0);
  CHECK(j["precision"]["source"] == "native_float");
  CHECK(j["bounds"].is_null());
  CHECK_FALSE(j["source_terminated"].get<bool>());

  auto poped = iterate_map(MapSpec::babylonian(-1.0), 1.0, 5);
  Json p = to_json(poped, "babylonian", Json{{"S", -1.0}}, man);
  CHECK(p["termination"] == "singularity");
  CHECK(p["terminated_at"] == 1);
  CHECK(p["source_terminated"].get<bool>());
}

TEST_CASE("classification reports carry evidence and decomposition") {
  std::vector<double> xs(1000);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xs[i] = (i % 2 == 0) ? 1.0 / double(i + 4) : 1.0 - 1.0 / double(i + 3);
  }
  Orbit orbit{xs, {OrbitPrecision::Source::NativeFloat, 0x1p-50}, {}, false};
  auto cls = classify_orbit(orbit);
  RunManifest man;
  man.command = "analyze";
  man.tool_version = kVersion;
  Json j = to_json(cls, man);
  CHECK(j["schema_version"] == kSchemaVersion);
  CHECK(j["kind"] == "orbit_classification");
  CHECK(j["label"] == "NonCauchyMixture(k=2)");
  CHECK(j["cluster_count"] == 2);
  CHECK(j["evidence"]["aperiodic"].get<bool>());
  CHECK(j["evidence"]["mixing"].get<bool>());
  CHECK(j["evidence"]["window"] == 100);
  CHECK(j["decomposition"]["centroids"].size() == 2);
  CHECK(j["decomposition"]["intervals"].size() == 2);
  CHECK(j["decomposition"]["intervals"][0].size() == 2);
  CHECK(j["mixing"]["horizons"].size() == 2);
  CHECK(j["params"]["epsilon"] == 1e-6);

  // convergent orbits drop the optional blocks
  std::vector<double> conv(200);
  for (std::size_t i = 0; i < conv.size(); ++i)
    conv[i] = std::pow(0.5, double(i));
  Json c = to_json(
      classify_orbit(Orbit{conv, {}, std::pair{0.0, 1.0}, false}), man);
  CHECK(c["label"] == "Convergent");
  CHECK(c["decomposition"].is_null());
}

TEST_CASE("census reports") {
  CensusParams p;
  p.family = {2, 2};
  p.budget = 50;
  auto rep = halting_census(p);
  RunManifest man;
  man.command = "census";
  man.tool_version = kVersion;
  Json j = to_json(rep, man);
  CHECK(j["schema_version"] == kSchemaVersion);
  CHECK(j["kind"] == "halting_census");
  CHECK(j["family"]["states"] == 2);
  CHECK(j["family"]["symbols"] == 2);
  CHECK(j["family"]["total"] == "64");
  CHECK(j["mode"] == "enumerate");
  CHECK(j["detection_mode"] == "sound");
  CHECK(j["examined"] == 64);
  CHECK(j["halted"].get<std::uint64_t>() + j["loops"].get<std::uint64_t>() +
            j["budget_exhausted"].get<std::uint64_t>() ==
        64);
  CHECK(j["labels"].is_object());
  CHECK(j["input"] == "");

  CensusParams s = p;
  s.mode = CensusParams::Mode::Sample;
  s.sample_count = 10;
  s.seed = 9;
  Json js = to_json(halting_census(s), man);
  CHECK(js["mode"] == "sample");
  CHECK(js["sample_count"] == 10);
  CHECK(js["seed"] == 9);
  CHECK_FALSE(j.contains("sample_count"));
}

TEST_CASE("near-diagonal estimates") {
  auto est = mc_near_diagonal_fraction(2, 0.1, 10'000, 7);
  RunManifest man;
  man.command = "measure";
  man.seed = 7;
  man.tool_version = kVersion;
  Json j = to_json(est, 2, 0.1, man);
  CHECK(j["schema_version"] == kSchemaVersion);
  CHECK(j["kind"] == "near_diagonal_fraction");
  CHECK(j["dimension"] == 2);
  CHECK(j["delta"] == 0.1);
  CHECK(j["samples"] == 10'000);
  CHECK(j["fraction"] ==
        double(j["hits"].get<std::uint64_t>()) / 10'000.0);
  CHECK(j["manifest"]["seed"] == 7);
}

TEST_CASE("run log lines hold a timestamp next to the manifest") {
  auto path = std::filesystem::temp_directory_path() / "tapedyn_runs.jsonl";
  std::filesystem::remove(path);
  RunManifest man = sample_manifest();
  append_run_log(man, path);
  append_run_log(man, path);

  std::ifstream in(path);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  REQUIRE(lines.size() == 2);
  for (const auto& line : lines) {
    Json j = Json::parse(line);
    auto ts = j["timestamp"].get<std::string>();
    CHECK(ts.size() == 20);
    CHECK(ts[10] == 'T');
    CHECK(ts.back() == 'Z');
    CHECK(j["manifest"] == to_json(man));
  }
  // timestamps stay out of the manifest itself, so reports stay byte-stable
  CHECK_FALSE(to_json(man).contains("timestamp"));
  std::filesystem::remove(path);
}
