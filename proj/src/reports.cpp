#include "tapedyn/reports.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>

#include "tapedyn/version.hpp"

namespace tapedyn {

namespace {

const char* mode_name(DetectionMode mode) {
  return mode == DetectionMode::Sound ? "sound" : "word_keyed";
}

Json json_of(const std::vector<std::pair<double, double>>& intervals) {
  Json arr = Json::array();
  for (const auto& [lo, hi] : intervals) arr.push_back(Json::array({lo, hi}));
  return arr;
}

Json params_json(const AnalysisParams& p) {
  return Json{{"epsilon", p.epsilon},
              {"gamma", p.gamma},
              {"min_cluster", p.min_cluster},
              {"window", p.window},
              {"horizon", p.horizon}};
}

}  // namespace

Json to_json(const RunManifest& manifest) {
  Json j;
  j["command"] = manifest.command;
  j["parameters"] = manifest.parameters;
  if (manifest.seed)
    j["seed"] = *manifest.seed;
  else
    j["seed"] = nullptr;
  j["input_digests"] = manifest.input_digests;
  j["tool_version"] = manifest.tool_version;
  return j;
}

std::uint64_t fnv1a64(std::span<const unsigned char> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string file_digest_hex(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot read " + path.string());
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  const auto h =
      fnv1a64({reinterpret_cast<const unsigned char*>(data.data()),
               data.size()});
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

void append_run_log(const RunManifest& manifest,
                    const std::filesystem::path& log_path) {
  const auto now = std::chrono::system_clock::now();
  const std::time_t secs = std::chrono::system_clock::to_time_t(now);
  std::tm utc{};
  gmtime_r(&secs, &utc);
  char stamp[24];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);

  Json line;
  line["timestamp"] = stamp;
  line["manifest"] = to_json(manifest);

  std::ofstream out(log_path, std::ios::app);
  if (!out)
    throw std::runtime_error("cannot append to " + log_path.string());
  out << line.dump() << '\n';
}

Json trace_record(const HistoryEntry& entry, unsigned base) {
  Json j;
  j["step"] = entry.step;
  j["numerator"] = entry.numerator.str();
  j["base"] = base;
  j["length"] = entry.length;
  j["phase"] = entry.phase;
  return j;
}

std::string outcome_name(const DebugOutcome& outcome) {
  switch (outcome.kind) {
    case DebugOutcome::Kind::Halts:
      return "halts";
    case DebugOutcome::Kind::LoopDetected:
      return "loop_detected";
    case DebugOutcome::Kind::BudgetExhausted:
      return "budget_exhausted";
  }
  return "budget_exhausted";
}

Json to_json(const DebugReport& report, const RunManifest& manifest) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "machine_run";
  j["outcome"] = outcome_name(report.outcome);
  if (report.outcome.kind == DebugOutcome::Kind::Halts)
    j["halt"] =
        report.outcome.halt == HaltKind::Accept ? "accept" : "reject";
  if (report.outcome.kind == DebugOutcome::Kind::LoopDetected)
    j["loop"] = Json{{"first", report.outcome.loop_first},
                     {"second", report.outcome.loop_second}};
  j["detection_mode"] = mode_name(report.mode);
  j["steps_executed"] = report.steps_executed;
  j["history_length"] = report.history.entries.size();
  j["final"] = Json{
      {"state", report.final_config.state},
      {"head", report.final_config.head},
      {"tape", to_utf8(report.final_config.tape)}};
  j["manifest"] = to_json(manifest);
  return j;
}

Json to_json(const IterationRun& run, const std::string& map_name,
             const Json& map_params, const RunManifest& manifest) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "map_iteration";
  j["map"] = Json{{"name", map_name}, {"params", map_params}};
  j["x0"] = run.x0;
  j["requested_steps"] = run.requested_steps;
  switch (run.termination) {
    case Termination::Completed:
      j["termination"] = "completed";
      break;
    case Termination::SingularityHit:
      j["termination"] = "singularity";
      break;
    case Termination::Overflowed:
      j["termination"] = "overflow";
      break;
  }
  j["terminated_at"] = run.terminated_at;
  j["samples"] = run.orbit.samples;
  j["precision"] = Json{
      {"source", run.orbit.precision.source ==
                         OrbitPrecision::Source::ExactRational
                     ? "exact_rational"
                     : "native_float"},
      {"max_abs_error", run.orbit.precision.max_abs_error}};
  if (run.orbit.bounds)
    j["bounds"] = Json::array({run.orbit.bounds->first,
                               run.orbit.bounds->second});
  else
    j["bounds"] = nullptr;
  j["source_terminated"] = run.orbit.source_terminated;
  j["manifest"] = to_json(manifest);
  return j;
}

Json to_json(const ClassificationReport& report,
             const RunManifest& manifest) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "orbit_classification";
  j["label"] = label_name(report.label, report.cluster_count);
  j["cluster_count"] = report.cluster_count;
  j["evidence"] = Json{{"tail_diameter", report.evidence.tail_diameter},
                       {"aperiodic", report.evidence.aperiodic},
                       {"mixing", report.evidence.mixing},
                       {"density", report.evidence.density},
                       {"window", report.evidence.window}};
  if (report.decomposition) {
    j["decomposition"] =
        Json{{"centroids", report.decomposition->centroids},
             {"intervals", json_of(report.decomposition->intervals)},
             {"window_start", report.decomposition->window_start}};
  } else {
    j["decomposition"] = nullptr;
  }
  if (report.mixing_report) {
    j["mixing"] = Json{{"transitions", report.mixing_report->transitions},
                       {"horizons", report.mixing_report->horizons},
                       {"mixing", report.mixing_report->mixing},
                       {"horizon", report.mixing_report->horizon}};
  } else {
    j["mixing"] = nullptr;
  }
  j["params"] = params_json(report.params);
  j["manifest"] = to_json(manifest);
  return j;
}

Json to_json(const CensusReport& report, const RunManifest& manifest) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "halting_census";
  j["family"] = Json{{"states", report.params.family.states},
                     {"symbols", report.params.family.symbols},
                     {"total", report.family_total.str()}};
  const bool sampling = report.params.mode == CensusParams::Mode::Sample;
  j["mode"] = sampling ? "sample" : "enumerate";
  if (sampling) {
    j["sample_count"] = report.params.sample_count;
    j["seed"] = report.params.seed;
  }
  j["budget"] = report.params.budget;
  j["detection_mode"] = mode_name(report.params.detection);
  j["input"] = to_utf8(report.params.input);
  j["examined"] = report.examined;
  j["halted"] = report.halted;
  j["loops"] = report.loops;
  j["budget_exhausted"] = report.budget_exhausted;
  j["labels"] = report.labels;
  j["manifest"] = to_json(manifest);
  return j;
}

Json to_json(const DiagonalEstimate& estimate, std::size_t n, double delta,
             const RunManifest& manifest) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "near_diagonal_fraction";
  j["dimension"] = n;
  j["delta"] = delta;
  j["samples"] = estimate.samples;
  j["hits"] = estimate.hits;
  j["fraction"] = estimate.fraction;
  j["std_error"] = estimate.std_error;
  j["manifest"] = to_json(manifest);
  return j;
}

}  // namespace tapedyn
