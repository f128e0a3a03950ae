#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "tapedyn/reports.hpp"
#include "tapedyn/version.hpp"

namespace py = pybind11;
using namespace tapedyn;

namespace {

MapSpec map_of(const std::string& name, double r, double S, double a,
               double b) {
  if (name == "logistic") return MapSpec::logistic(r);
  if (name == "babylonian") return MapSpec::babylonian(S);
  if (name == "tan") return MapSpec::tangent();
  if (name == "affine") return MapSpec::affine(a, b);
  throw std::invalid_argument(
      "map must be one of logistic, babylonian, tan, affine");
}

DetectionMode detection_of(const std::string& mode) {
  if (mode == "sound") return DetectionMode::Sound;
  if (mode == "word") return DetectionMode::WordKeyed;
  throw std::invalid_argument("mode must be 'sound' or 'word'");
}

py::dict dict_of(const DebugReport& rep) {
  py::dict d;
  d["outcome"] = outcome_name(rep.outcome);
  if (rep.outcome.kind == DebugOutcome::Kind::Halts)
    d["halt"] = rep.outcome.halt == HaltKind::Accept ? "accept" : "reject";
  if (rep.outcome.kind == DebugOutcome::Kind::LoopDetected)
    d["loop"] = py::make_tuple(rep.outcome.loop_first,
                               rep.outcome.loop_second);
  d["steps_executed"] = rep.steps_executed;
  d["final_state"] = rep.final_config.state;
  d["final_head"] = rep.final_config.head;
  d["final_tape"] = to_utf8(rep.final_config.tape);
  py::list history;
  for (const auto& e : rep.history.entries) {
    py::dict h;
    h["step"] = e.step;
    h["numerator"] = e.numerator.str();
    h["length"] = e.length;
    h["phase"] = e.phase;
    history.append(h);
  }
  d["history"] = history;
  const auto orbit = history_phases(rep);
  d["phases"] = orbit.samples;
  return d;
}

py::dict dict_of(const ClassificationReport& cls) {
  py::dict d;
  d["label"] = label_name(cls.label, cls.cluster_count);
  d["cluster_count"] = cls.cluster_count;
  d["tail_diameter"] = cls.evidence.tail_diameter;
  d["aperiodic"] = cls.evidence.aperiodic;
  d["mixing"] = cls.evidence.mixing;
  d["density"] = cls.evidence.density;
  d["window"] = cls.evidence.window;
  if (cls.decomposition) {
    d["centroids"] = cls.decomposition->centroids;
    d["intervals"] = cls.decomposition->intervals;
  } else {
    d["centroids"] = py::none();
    d["intervals"] = py::none();
  }
  return d;
}

AnalysisParams params_of(double epsilon, double gamma,
                         std::size_t min_cluster, std::size_t window,
                         std::size_t horizon) {
  AnalysisParams p;
  p.epsilon = epsilon;
  p.gamma = gamma;
  p.min_cluster = min_cluster;
  p.window = window;
  p.horizon = horizon;
  return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "tape-phase dynamics workbench core";
  m.attr("__version__") = kVersion;

  py::class_<MachineSpec>(m, "Machine")
      .def_property_readonly("states",
                             [](const MachineSpec& s) {
                               return s.state_names;
                             })
      .def_property_readonly("base",
                             [](const MachineSpec& s) {
                               return s.alphabet.base();
                             })
      .def("__repr__", [](const MachineSpec& s) {
        return "<Machine states=" + std::to_string(s.state_count()) +
               " base=" + std::to_string(s.alphabet.base()) + ">";
      });

  m.def("parse_machine",
        [](const std::string& text) { return parse_machine(text); },
        py::arg("text"), "Parse the line-oriented .tm machine format.");

  m.def(
      "run",
      [](const MachineSpec& spec, const std::string& input,
         std::uint64_t budget) {
        const auto out = run(spec, word_from_utf8(input), budget);
        py::dict d;
        d["outcome"] = out.kind == RunOutcome::Kind::Halted
                           ? "halted"
                           : "budget_exhausted";
        if (out.kind == RunOutcome::Kind::Halted)
          d["halt"] = out.halt == HaltKind::Accept ? "accept" : "reject";
        d["steps"] = out.steps;
        d["final_tape"] = to_utf8(out.final_config.tape);
        return d;
      },
      py::arg("machine"), py::arg("input") = "",
      py::arg("budget") = std::uint64_t{10'000},
      "Run a machine, returning the outcome and final tape.");

  m.def(
      "debug_run",
      [](const MachineSpec& spec, const std::string& input,
         std::uint64_t budget, const std::string& mode) {
        return dict_of(debug_run(spec, word_from_utf8(input), budget,
                                 detection_of(mode)));
      },
      py::arg("machine"), py::arg("input") = "",
      py::arg("budget") = std::uint64_t{10'000}, py::arg("mode") = "sound",
      "Run under the loop-detecting debugger; returns outcome, history and "
      "phases.");

  m.def(
      "tape_phase",
      [](const std::string& tape, const std::string& alphabet) {
        const Word symbols = word_from_utf8(alphabet);
        if (symbols.empty())
          throw std::invalid_argument(
              "alphabet needs at least the blank and one symbol");
        const GodelMap map(Alphabet::create(
            {symbols.begin(), symbols.end()},
            {symbols.begin() + 1, symbols.end()}, symbols.front()));
        const Phase p = phase_of_tape(word_from_utf8(tape), map);
        py::dict d;
        d["numerator"] = p.numerator_decimal();
        d["base"] = p.base;
        d["length"] = p.length;
        d["value"] = p.to_double();
        d["word"] = to_utf8(p.canonical_word);
        return d;
      },
      py::arg("tape"), py::arg("alphabet"),
      "Phase of a tape word; the alphabet string lists the symbols with the "
      "blank first.");

  m.def(
      "iterate",
      [](const std::string& map, double x0, std::uint64_t steps, double r,
         double S, double a, double b) {
        const auto run = iterate_map(map_of(map, r, S, a, b), x0, steps);
        py::dict d;
        d["samples"] = run.orbit.samples;
        d["termination"] = run.termination == Termination::Completed
                               ? "completed"
                               : run.termination ==
                                         Termination::SingularityHit
                                     ? "singularity"
                                     : "overflow";
        d["terminated_at"] = run.terminated_at;
        return d;
      },
      py::arg("map"), py::arg("x0"), py::arg("steps"), py::arg("r") = 4.0,
      py::arg("S") = 2.0, py::arg("a") = 1.0, py::arg("b") = 0.0,
      "Iterate a named map from x0.");

  m.def(
      "classify",
      [](const std::vector<double>& samples, double epsilon, double gamma,
         std::size_t min_cluster, std::size_t window, std::size_t horizon) {
        Orbit orbit;
        orbit.samples = samples;
        orbit.precision = {OrbitPrecision::Source::NativeFloat, 0x1p-50};
        return dict_of(classify_orbit(
            orbit, params_of(epsilon, gamma, min_cluster, window, horizon)));
      },
      py::arg("samples"), py::arg("epsilon") = 1e-6,
      py::arg("gamma") = 1e-5, py::arg("min_cluster") = std::size_t{8},
      py::arg("window") = std::size_t{0}, py::arg("horizon") = std::size_t{8},
      "Classify an orbit: Finite, Unbounded, Convergent, NonCauchyMixture "
      "or Inconclusive.");

  m.def(
      "sensitivity",
      [](const std::string& map, double x0, double delta0,
         std::uint64_t steps, double r, double S, double a, double b) {
        return sensitivity_exponent(map_of(map, r, S, a, b), x0, delta0,
                                    steps);
      },
      py::arg("map"), py::arg("x0"), py::arg("delta0") = 1e-9,
      py::arg("steps") = std::uint64_t{10'000}, py::arg("r") = 4.0,
      py::arg("S") = 2.0, py::arg("a") = 1.0, py::arg("b") = 0.0,
      "Two-trajectory separation exponent.");

  m.def(
      "contraction",
      [](const std::string& map, double lo, double hi, std::size_t samples,
         double r, double S, double a, double b) {
        const auto rep =
            contraction_estimate(map_of(map, r, S, a, b), lo, hi, samples);
        py::dict d;
        d["q_hat"] = rep.q_hat;
        d["contraction"] = rep.contraction;
        return d;
      },
      py::arg("map"), py::arg("lo"), py::arg("hi"),
      py::arg("samples") = std::size_t{256}, py::arg("r") = 4.0,
      py::arg("S") = 2.0, py::arg("a") = 1.0, py::arg("b") = 0.0,
      "Empirical contraction-quotient estimate on [lo, hi].");

  m.def(
      "measure_box",
      [](const std::vector<double>& lo, const std::vector<double>& hi,
         std::uint64_t samples, std::uint64_t seed) {
        const auto res =
            sequence_measure_box(Box{lo, hi}, McParams{samples, seed});
        py::dict d;
        d["value"] = res.value;
        d["std_error"] = res.std_error;
        d["exact"] = res.exact;
        d["samples"] = res.samples;
        return d;
      },
      py::arg("lo"), py::arg("hi"),
      py::arg("samples") = std::uint64_t{1'000'000},
      py::arg("seed") = std::uint64_t{0x5eed},
      "Sequence-space measure of an axis box (exact for up to three "
      "coordinates, Monte Carlo beyond).");

  m.def(
      "near_diagonal",
      [](std::size_t n, double delta, std::uint64_t samples,
         std::uint64_t seed) {
        const auto est = mc_near_diagonal_fraction(n, delta, samples, seed);
        py::dict d;
        d["fraction"] = est.fraction;
        d["std_error"] = est.std_error;
        d["hits"] = est.hits;
        d["samples"] = est.samples;
        return d;
      },
      py::arg("n"), py::arg("delta"),
      py::arg("samples") = std::uint64_t{1'000'000},
      py::arg("seed") = std::uint64_t{0},
      "Monte Carlo fraction of draws with spread below delta.");

  m.def(
      "sequence_to_space",
      [](const std::vector<double>& limits, std::size_t n) {
        return sequence_to_space(limits, n);
      },
      py::arg("limits"), py::arg("n"),
      "Pad an ascending limit list to an n-coordinate point.");

  m.def(
      "census",
      [](std::uint32_t states, std::uint32_t symbols, std::uint64_t budget,
         const std::string& mode, std::uint64_t samples, std::uint64_t seed,
         const std::string& detection, const std::string& input,
         std::uint64_t cap, unsigned threads) {
        CensusParams p;
        p.family = {states, symbols};
        p.budget = budget;
        p.mode = mode == "sample" ? CensusParams::Mode::Sample
                                  : CensusParams::Mode::Enumerate;
        p.sample_count = samples;
        p.seed = seed;
        p.detection = detection_of(detection);
        p.input = word_from_utf8(input);
        p.enumeration_cap = cap;
        p.threads = threads;
        const auto rep = halting_census(p);
        py::dict d;
        d["family_total"] = rep.family_total.str();
        d["examined"] = rep.examined;
        d["halted"] = rep.halted;
        d["loops"] = rep.loops;
        d["budget_exhausted"] = rep.budget_exhausted;
        d["labels"] = rep.labels;
        return d;
      },
      py::arg("states") = 2, py::arg("symbols") = 2,
      py::arg("budget") = std::uint64_t{10'000},
      py::arg("mode") = "enumerate", py::arg("samples") = std::uint64_t{0},
      py::arg("seed") = std::uint64_t{0}, py::arg("detection") = "sound",
      py::arg("input") = "", py::arg("cap") = std::uint64_t{1'000'000},
      py::arg("threads") = 0u,
      "Budget-bounded halting census over the k-state m-symbol family.");
}
