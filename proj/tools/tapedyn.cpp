#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tapedyn/reports.hpp"
#include "tapedyn/version.hpp"

using namespace tapedyn;

namespace {

struct GlobalOpts {
  bool quiet = false;
  std::optional<std::uint64_t> seed;
  std::string runs_log = "runs.log";
};

// shortest round-trip decimal; keeps CSV output byte-stable
std::string double_str(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

void emit_report(const GlobalOpts& g, const std::string& path,
                 const Json& report) {
  if (!path.empty())
    write_file(path, report.dump(2) + "\n");
  else if (!g.quiet)
    std::cout << report.dump(2) << "\n";
}

void log_run(const GlobalOpts& g, const RunManifest& man) {
  if (!g.runs_log.empty()) append_run_log(man, g.runs_log);
}

// Orbit files are either `step,value` CSV or JSONL trace records with a
// "phase" field; the first non-space byte tells them apart.
std::vector<double> load_orbit(const std::string& path) {
  const std::string text = read_file(path);
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos)
    throw std::runtime_error(path + ": empty orbit file");
  std::vector<double> samples;
  std::istringstream in(text);
  std::string line;
  if (text[first] == '{') {
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      const Json j = Json::parse(line);
      samples.push_back(j.at("phase").get<double>());
    }
    return samples;
  }
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (lineno == 1 && line.rfind("step,", 0) == 0) continue;  // header
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error(path + ": line " + std::to_string(lineno) +
                               ": expected step,value");
    const std::string field = line.substr(comma + 1);
    try {
      samples.push_back(std::stod(field));
    } catch (const std::exception&) {
      throw std::runtime_error(path + ": line " + std::to_string(lineno) +
                               ": bad value '" + field + "'");
    }
  }
  return samples;
}

int cmd_run(const GlobalOpts& g, const std::string& machine_path,
            const std::string& input, std::uint64_t budget,
            const std::string& mode, const std::string& trace_path,
            const std::string& report_path) {
  MachineSpec spec;
  try {
    spec = parse_machine(read_file(machine_path));
  } catch (const ParseError& e) {
    std::cerr << machine_path << ": parse error: " << e.what() << "\n";
    return 1;
  }
  const DetectionMode detection =
      mode == "word" ? DetectionMode::WordKeyed : DetectionMode::Sound;
  const auto report =
      debug_run(spec, word_from_utf8(input), budget, detection);

  RunManifest man;
  man.command = "run";
  man.parameters = Json{{"machine", machine_path},
                        {"input", input},
                        {"budget", budget},
                        {"mode", mode},
                        {"trace", trace_path},
                        {"report", report_path}};
  man.input_digests[machine_path] = file_digest_hex(machine_path);
  man.tool_version = kVersion;

  if (!trace_path.empty()) {
    std::string lines;
    for (const auto& e : report.history.entries)
      lines += trace_record(e, report.history.base).dump() + "\n";
    write_file(trace_path, lines);
  }
  emit_report(g, report_path, to_json(report, man));
  log_run(g, man);

  if (!g.quiet) {
    std::cout << "outcome: " << outcome_name(report.outcome);
    if (report.outcome.kind == DebugOutcome::Kind::LoopDetected)
      std::cout << " (" << report.outcome.loop_first << ", "
                << report.outcome.loop_second << ")";
    std::cout << " after " << report.steps_executed << " steps, "
              << report.history.entries.size() << " history entries\n";
  }
  switch (report.outcome.kind) {
    case DebugOutcome::Kind::Halts:
      return 0;
    case DebugOutcome::Kind::LoopDetected:
      return 10;
    case DebugOutcome::Kind::BudgetExhausted:
      return 20;
  }
  return 1;
}

int cmd_iterate(const GlobalOpts& g, const std::string& map_name,
                double r, double S, double a, double b, double x0,
                std::uint64_t steps, const std::string& out_path,
                const std::string& report_path) {
  MapSpec map = [&] {
    if (map_name == "logistic") return MapSpec::logistic(r);
    if (map_name == "babylonian") return MapSpec::babylonian(S);
    if (map_name == "tan") return MapSpec::tangent();
    if (map_name == "affine") return MapSpec::affine(a, b);
    throw CLI::ValidationError("map must be one of logistic, babylonian, "
                               "tan, affine");
  }();
  Json map_params = Json::object();
  if (map_name == "logistic") map_params["r"] = r;
  if (map_name == "babylonian") map_params["S"] = S;
  if (map_name == "affine") map_params = Json{{"a", a}, {"b", b}};

  const auto run = iterate_map(map, x0, steps);

  RunManifest man;
  man.command = "iterate";
  man.parameters = Json{{"map", map_name},
                        {"params", map_params},
                        {"x0", x0},
                        {"steps", steps},
                        {"out", out_path},
                        {"report", report_path}};
  man.tool_version = kVersion;

  if (!out_path.empty()) {
    std::string csv = "step,value\n";
    for (std::size_t i = 0; i < run.orbit.samples.size(); ++i)
      csv += std::to_string(i) + "," + double_str(run.orbit.samples[i]) + "\n";
    write_file(out_path, csv);
  }
  emit_report(g, report_path, to_json(run, map_name, map_params, man));
  log_run(g, man);

  if (!g.quiet) {
    std::cout << run.orbit.samples.size() << " samples";
    if (run.termination == Termination::SingularityHit)
      std::cout << ", stopped at a singularity after step "
                << run.terminated_at;
    if (run.termination == Termination::Overflowed)
      std::cout << ", left float range after step " << run.terminated_at;
    std::cout << "\n";
  }
  return 0;
}

int cmd_analyze(const GlobalOpts& g, const std::string& orbit_path,
                const AnalysisParams& params, const std::string& report_path) {
  const auto samples = load_orbit(orbit_path);
  Orbit orbit;
  orbit.samples = samples;
  orbit.precision = {OrbitPrecision::Source::NativeFloat, 0x1p-50};
  const auto cls = classify_orbit(orbit, params);

  RunManifest man;
  man.command = "analyze";
  man.parameters = Json{{"orbit", orbit_path},
                        {"epsilon", params.epsilon},
                        {"gamma", params.gamma},
                        {"min_cluster", params.min_cluster},
                        {"window", params.window},
                        {"horizon", params.horizon},
                        {"report", report_path}};
  man.input_digests[orbit_path] = file_digest_hex(orbit_path);
  man.tool_version = kVersion;

  emit_report(g, report_path, to_json(cls, man));
  log_run(g, man);
  if (!g.quiet)
    std::cout << "label: " << label_name(cls.label, cls.cluster_count)
              << "\n";
  return 0;
}

int cmd_census(const GlobalOpts& g, CensusParams params,
               const std::string& mode, const std::string& detection,
               const std::string& input, const std::string& out_path) {
  params.mode = mode == "sample" ? CensusParams::Mode::Sample
                                 : CensusParams::Mode::Enumerate;
  params.detection = detection == "word" ? DetectionMode::WordKeyed
                                         : DetectionMode::Sound;
  params.input = word_from_utf8(input);
  const auto report = halting_census(params);

  RunManifest man;
  man.command = "census";
  man.parameters = Json{{"states", params.family.states},
                        {"symbols", params.family.symbols},
                        {"budget", params.budget},
                        {"mode", mode},
                        {"sample_count", params.sample_count},
                        {"seed", params.seed},
                        {"detection", detection},
                        {"input", input},
                        {"enumeration_cap", params.enumeration_cap},
                        {"out", out_path}};
  if (params.mode == CensusParams::Mode::Sample) man.seed = params.seed;
  man.tool_version = kVersion;

  emit_report(g, out_path, to_json(report, man));
  log_run(g, man);
  if (!g.quiet)
    std::cout << "examined " << report.examined << ": " << report.halted
              << " halted, " << report.loops << " certified loops, "
              << report.budget_exhausted << " budget-exhausted\n";
  return 0;
}

int cmd_measure(const GlobalOpts& g, std::size_t n, double delta,
                std::uint64_t samples, std::uint64_t seed,
                const std::string& out_path) {
  const auto est = mc_near_diagonal_fraction(n, delta, samples, seed);

  RunManifest man;
  man.command = "measure";
  man.parameters = Json{{"n", n},
                        {"delta", delta},
                        {"samples", samples},
                        {"seed", seed},
                        {"out", out_path}};
  man.seed = seed;
  man.tool_version = kVersion;

  emit_report(g, out_path, to_json(est, n, delta, man));
  log_run(g, man);
  if (!g.quiet)
    std::cout << "fraction " << double_str(est.fraction) << " +/- "
              << double_str(est.std_error) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tape-phase dynamics workbench"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOpts g;
  std::uint64_t global_seed = 0;
  auto* seed_opt = app.add_option("--seed", global_seed,
                                  "default seed for seeded subcommands");
  app.add_flag("--quiet", g.quiet, "suppress stdout chatter");
  app.add_option("--runs-log", g.runs_log,
                 "provenance ledger path (empty disables logging)");

  // run
  auto* run_cmd = app.add_subcommand("run", "debug-run a machine file");
  std::string machine_path, run_input, run_mode = "sound";
  std::string trace_path, run_report;
  std::uint64_t budget = 10'000;
  run_cmd->add_option("machine", machine_path, ".tm machine file")
      ->required();
  run_cmd->add_option("--input", run_input, "input word (UTF-8 symbols)");
  run_cmd->add_option("--budget", budget, "step budget (>= 1)");
  run_cmd->add_option("--mode", run_mode, "loop detection: sound | word")
      ->check(CLI::IsMember({"sound", "word"}));
  run_cmd->add_option("--trace", trace_path, "JSONL trace output path");
  run_cmd->add_option("--report", run_report, "JSON report output path");

  // iterate
  auto* it_cmd = app.add_subcommand("iterate", "iterate a real map");
  std::string map_name, it_out, it_report;
  double it_r = 4.0, it_S = 2.0, it_a = 1.0, it_b = 0.0, it_x0 = 0.5;
  std::uint64_t it_steps = 1000;
  it_cmd->add_option("map", map_name,
                     "map name: logistic | babylonian | tan | affine")
      ->required()
      ->check(CLI::IsMember({"logistic", "babylonian", "tan", "affine"}));
  it_cmd->add_option("--r", it_r, "logistic parameter in [0, 4]");
  it_cmd->add_option("--S", it_S, "babylonian radicand");
  it_cmd->add_option("--a", it_a, "affine slope");
  it_cmd->add_option("--b", it_b, "affine offset");
  it_cmd->add_option("--x0", it_x0, "start point")->required();
  it_cmd->add_option("--steps", it_steps, "iteration count");
  it_cmd->add_option("--out", it_out, "CSV plot data path (step,value)");
  it_cmd->add_option("--report", it_report, "JSON run summary path");

  // analyze
  auto* an_cmd = app.add_subcommand("analyze", "classify an orbit file");
  std::string orbit_path, an_report;
  AnalysisParams an_params;
  an_cmd->add_option("orbit", orbit_path, "CSV or JSONL orbit file")
      ->required();
  an_cmd->add_option("--epsilon", an_params.epsilon, "convergence scale");
  an_cmd->add_option("--gamma", an_params.gamma, "cluster gap threshold");
  an_cmd->add_option("--min-cluster", an_params.min_cluster,
                     "minimum tail members per cluster");
  an_cmd->add_option("--window", an_params.window,
                     "tail window (0 = automatic)");
  an_cmd->add_option("--horizon", an_params.horizon,
                     "mixing reachability horizon");
  an_cmd->add_option("--report", an_report, "JSON report output path");

  // census
  auto* ce_cmd = app.add_subcommand("census", "survey a machine family");
  CensusParams ce_params;
  std::string ce_mode = "enumerate", ce_detection = "sound", ce_input,
              ce_out;
  ce_cmd->add_option("--states", ce_params.family.states, "family states");
  ce_cmd->add_option("--symbols", ce_params.family.symbols,
                     "family tape symbols");
  ce_cmd->add_option("--budget", ce_params.budget, "step budget per machine");
  ce_cmd->add_option("--mode", ce_mode, "enumerate | sample")
      ->check(CLI::IsMember({"enumerate", "sample"}));
  ce_cmd->add_option("--samples", ce_params.sample_count,
                     "machines to draw in sample mode");
  auto* ce_seed = ce_cmd->add_option("--seed", ce_params.seed,
                                     "sampling seed");
  ce_cmd->add_option("--detection", ce_detection,
                     "loop detection: sound | word")
      ->check(CLI::IsMember({"sound", "word"}));
  ce_cmd->add_option("--input", ce_input, "input word (default blank tape)");
  ce_cmd->add_option("--cap", ce_params.enumeration_cap,
                     "largest family enumerate accepts");
  ce_cmd->add_option("--threads", ce_params.threads,
                     "worker threads (0 = hardware)");
  ce_cmd->add_option("--out", ce_out, "JSON report output path");

  // measure
  auto* me_cmd = app.add_subcommand("measure",
                                    "near-diagonal fraction Monte Carlo");
  std::size_t me_n = 2;
  double me_delta = 0.01;
  std::uint64_t me_samples = 1'000'000, me_seed = 0;
  std::string me_out;
  me_cmd->add_option("--n", me_n, "coordinates per draw")->required();
  me_cmd->add_option("--delta", me_delta, "diagonal half-width")->required();
  me_cmd->add_option("--samples", me_samples, "Monte Carlo draws");
  auto* me_seed_opt = me_cmd->add_option("--seed", me_seed, "RNG seed");
  me_cmd->add_option("--out", me_out, "JSON report output path");

  CLI11_PARSE(app, argc, argv);

  if (seed_opt->count() > 0) g.seed = global_seed;
  if (g.seed && ce_seed->count() == 0) ce_params.seed = *g.seed;
  if (g.seed && me_seed_opt->count() == 0) me_seed = *g.seed;

  try {
    if (*run_cmd)
      return cmd_run(g, machine_path, run_input, budget, run_mode,
                     trace_path, run_report);
    if (*it_cmd)
      return cmd_iterate(g, map_name, it_r, it_S, it_a, it_b, it_x0,
                         it_steps, it_out, it_report);
    if (*an_cmd) return cmd_analyze(g, orbit_path, an_params, an_report);
    if (*ce_cmd)
      return cmd_census(g, ce_params, ce_mode, ce_detection, ce_input,
                        ce_out);
    if (*me_cmd)
      return cmd_measure(g, me_n, me_delta, me_samples, me_seed, me_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
