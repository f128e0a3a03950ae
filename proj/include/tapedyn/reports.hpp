#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "tapedyn/analysis.hpp"
#include "tapedyn/census.hpp"
#include "tapedyn/debugger.hpp"
#include "tapedyn/maps.hpp"
#include "tapedyn/measure.hpp"

namespace tapedyn {

// Reports are built as ordered JSON so serialization is byte-stable.
using Json = nlohmann::ordered_json;

// Everything needed to reproduce a command byte-identically; the timestamp
// lives only in the runs.log line, never in report-embedded manifests, so
// reruns with identical inputs produce identical bytes.
struct RunManifest {
  std::string command;
  Json parameters;  // full parameter set as given
  std::optional<std::uint64_t> seed;
  std::map<std::string, std::string> input_digests;  // path -> fnv1a64 hex
  std::string tool_version;
};

Json to_json(const RunManifest& manifest);

std::uint64_t fnv1a64(std::span<const unsigned char> bytes);
std::string file_digest_hex(const std::filesystem::path& path);

// Appends {"timestamp": ..., "manifest": {...}} to the JSONL ledger.
void append_run_log(const RunManifest& manifest,
                    const std::filesystem::path& log_path);

// One JSONL trace record per history entry:
// {"step", "numerator" (decimal string), "base", "length", "phase"}.
Json trace_record(const HistoryEntry& entry, unsigned base);

std::string outcome_name(const DebugOutcome& outcome);
Json to_json(const DebugReport& report, const RunManifest& manifest);
Json to_json(const IterationRun& run, const std::string& map_name,
             const Json& map_params, const RunManifest& manifest);
Json to_json(const ClassificationReport& report, const RunManifest& manifest);
Json to_json(const CensusReport& report, const RunManifest& manifest);
Json to_json(const DiagonalEstimate& estimate, std::size_t n, double delta,
             const RunManifest& manifest);

}  // namespace tapedyn
